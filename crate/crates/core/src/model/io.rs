//! JSON and CSV instance formats.
//!
//! JSON:
//! `{"points":[{"id","coords"?,"group"}], "facilities":[{"id","coords"?}],
//!   "metric":{"type":"euclidean"|"explicit","matrix"?}, "k", "alpha", "beta"}`.
//! Fractions may be numbers or `"p/q"` strings. CSV input is a points file with rows
//! `id,group,x1,...,xd` and a sidecar facilities file with rows `id,x1,...,xd`; a
//! header row is skipped when present.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{
    fraction_from_f64, fraction_to_f64, parse_fraction, DistanceMatrix, Facility, Fraction, Instance, InstanceError,
    Metric, Point, ValidationOptions,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub points: Vec<PointRecord>,
    #[serde(default)]
    pub facilities: Vec<FacilityRecord>,
    pub metric: MetricRecord,
    pub k: usize,
    pub alpha: Vec<FractionValue>,
    pub beta: Vec<FractionValue>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PointRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<f64>>,
    pub group: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FacilityRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MetricRecord {
    #[serde(rename = "type")]
    pub kind: MetricKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Euclidean,
    Explicit,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FractionValue {
    Number(f64),
    Text(String),
}

impl FractionValue {
    fn resolve(&self, field: &'static str, group: usize) -> Result<Fraction, InstanceError> {
        let parsed = match self {
            FractionValue::Number(x) => fraction_from_f64(*x),
            FractionValue::Text(s) => parse_fraction(s),
        };
        parsed.ok_or_else(|| InstanceError::Parse(format!("{field}[{group}] is not a valid fraction")))
    }
}

/// Parameters a CSV points file cannot carry.
#[derive(Clone, Debug)]
pub struct CsvParams {
    pub k: usize,
    pub alpha: Vec<Fraction>,
    pub beta: Vec<Fraction>,
}

impl InstanceFile {
    pub fn into_instance(self, options: ValidationOptions) -> Result<Instance, InstanceError> {
        let alpha = resolve_all(&self.alpha, "alpha")?;
        let beta = resolve_all(&self.beta, "beta")?;
        let metric = match self.metric.kind {
            MetricKind::Euclidean => Metric::Euclidean,
            MetricKind::Explicit => {
                let rows = self
                    .metric
                    .matrix
                    .ok_or_else(|| InstanceError::Parse("explicit metric needs a \"matrix\"".into()))?;
                Metric::Explicit(DistanceMatrix::from_rows(&rows)?)
            }
        };
        let points = self.points.into_iter().map(|p| Point { id: p.id, coords: p.coords, group: p.group }).collect();
        let facilities = self.facilities.into_iter().map(|f| Facility { id: f.id, coords: f.coords }).collect();
        Instance::new(points, facilities, metric, self.k, alpha, beta, options)
    }

    pub fn from_instance(inst: &Instance) -> Self {
        let metric = match inst.metric() {
            Metric::Euclidean => MetricRecord { kind: MetricKind::Euclidean, matrix: None },
            Metric::Explicit(m) => MetricRecord { kind: MetricKind::Explicit, matrix: Some(m.rows()) },
        };
        Self {
            points: inst
                .points()
                .iter()
                .map(|p| PointRecord { id: p.id.clone(), coords: p.coords.clone(), group: p.group })
                .collect(),
            facilities: inst
                .facilities()
                .iter()
                .map(|f| FacilityRecord { id: f.id.clone(), coords: f.coords.clone() })
                .collect(),
            metric,
            k: inst.k(),
            alpha: inst.alpha().iter().map(|f| FractionValue::Number(fraction_to_f64(f))).collect(),
            beta: inst.beta().iter().map(|f| FractionValue::Number(fraction_to_f64(f))).collect(),
        }
    }
}

fn resolve_all(values: &[FractionValue], field: &'static str) -> Result<Vec<Fraction>, InstanceError> {
    values.iter().enumerate().map(|(g, v)| v.resolve(field, g)).collect()
}

pub fn read_json<R: Read>(reader: R, options: ValidationOptions) -> Result<Instance, InstanceError> {
    let file: InstanceFile = serde_json::from_reader(reader).map_err(|e| InstanceError::Parse(e.to_string()))?;
    file.into_instance(options)
}

pub fn write_json<W: Write>(inst: &Instance, writer: W) -> Result<(), InstanceError> {
    serde_json::to_writer_pretty(writer, &InstanceFile::from_instance(inst))
        .map_err(|e| InstanceError::Parse(e.to_string()))
}

pub fn to_json_string(inst: &Instance) -> String {
    serde_json::to_string_pretty(&InstanceFile::from_instance(inst)).expect("instance serializes")
}

/// Loads an instance from a byte stream. CSV needs the facilities stream and the
/// fairness parameters, see [`read_csv`].
pub fn load_instance<R: Read>(source: R, format: Format, options: ValidationOptions) -> Result<Instance, InstanceError> {
    match format {
        Format::Json => read_json(source, options),
        Format::Csv => Err(InstanceError::Parse("csv input needs a facilities file and parameters".into())),
    }
}

pub fn read_csv<P: Read, F: Read>(
    points: P,
    facilities: F,
    params: CsvParams,
    options: ValidationOptions,
) -> Result<Instance, InstanceError> {
    let point_rows = csv_rows(points)?;
    let mut pts = Vec::with_capacity(point_rows.len());
    for (line, row) in point_rows.iter().enumerate() {
        if row.len() < 2 {
            return Err(InstanceError::Parse(format!("points line {}: expected id,group,coords...", line + 1)));
        }
        let group = match row[1].trim().parse::<usize>() {
            Ok(g) => g,
            Err(_) if line == 0 => continue,
            Err(_) => return Err(InstanceError::Parse(format!("points line {}: bad group {:?}", line + 1, row[1]))),
        };
        let coords = parse_coords(&row[2..], line)?;
        pts.push(Point { id: row[0].trim().to_string(), coords: Some(coords), group });
    }
    let facility_rows = csv_rows(facilities)?;
    let mut facs = Vec::with_capacity(facility_rows.len());
    for (line, row) in facility_rows.iter().enumerate() {
        match parse_coords(&row[1..], line) {
            Ok(coords) => facs.push(Facility { id: row[0].trim().to_string(), coords: Some(coords) }),
            Err(_) if line == 0 => continue,
            Err(e) => return Err(e),
        }
    }
    Instance::new(pts, facs, Metric::Euclidean, params.k, params.alpha, params.beta, options)
}

fn csv_rows<R: Read>(reader: R) -> Result<Vec<Vec<String>>, InstanceError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(reader);
    rdr.records()
        .map(|r| {
            r.map(|rec| rec.iter().map(str::to_string).collect())
                .map_err(|e| InstanceError::Parse(e.to_string()))
        })
        .collect()
}

fn parse_coords(fields: &[String], line: usize) -> Result<Vec<f64>, InstanceError> {
    fields
        .iter()
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| InstanceError::Parse(format!("line {}: bad coordinate {s:?}", line + 1)))
        })
        .collect()
}

/// Hex SHA-256 of the canonical JSON form.
pub fn digest(inst: &Instance) -> String {
    let canonical = serde_json::to_vec(&InstanceFile::from_instance(inst)).expect("instance serializes");
    let hash = Sha256::digest(&canonical);
    hash.iter().map(|b| format!("{b:02x}")).collect()
}
