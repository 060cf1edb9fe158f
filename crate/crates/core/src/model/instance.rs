use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::fraction::Fraction;
use super::InstanceError;

/// A point to be clustered.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    pub id: String,
    pub coords: Option<Vec<f64>>,
    pub group: usize,
}

/// A candidate cluster center from the finite facility set.
#[derive(Clone, Debug, PartialEq)]
pub struct Facility {
    pub id: String,
    pub coords: Option<Vec<f64>>,
}

/// Square matrix over `points ++ facilities`, points first.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    size: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, InstanceError> {
        let size = rows.len();
        let mut data = Vec::with_capacity(size * size);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(InstanceError::MatrixShape { row: r, len: row.len(), expected: size });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { size, data })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.data[a * self.size + b]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.size.max(1)).take(self.size).map(<[f64]>::to_vec).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Metric {
    Euclidean,
    Explicit(DistanceMatrix),
}

/// A chosen center: either a facility of the instance, or a free location in the
/// Euclidean setting where any point of the space may serve as a center.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Center {
    Facility(usize),
    Location(Vec<f64>),
}

#[derive(Clone, Copy, Debug)]
pub struct ValidationOptions {
    /// The O(n³) triangle check on explicit matrices.
    pub check_triangle: bool,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self { check_triangle: true }
    }
}

const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// Immutable problem instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    points: Vec<Point>,
    facilities: Vec<Facility>,
    metric: Metric,
    k: usize,
    alpha: Vec<Fraction>,
    beta: Vec<Fraction>,
    group_sizes: Vec<usize>,
}

impl Instance {
    pub fn new(
        points: Vec<Point>,
        facilities: Vec<Facility>,
        metric: Metric,
        k: usize,
        alpha: Vec<Fraction>,
        beta: Vec<Fraction>,
        options: ValidationOptions,
    ) -> Result<Self, InstanceError> {
        if points.is_empty() {
            return Err(InstanceError::NoPoints);
        }
        if k == 0 {
            return Err(InstanceError::ZeroK);
        }
        if alpha.is_empty() || alpha.len() != beta.len() {
            return Err(InstanceError::FairnessLength { alpha: alpha.len(), beta: beta.len() });
        }
        let zero = Fraction::from_integer(0);
        let one = Fraction::from_integer(1);
        for (g, (a, b)) in alpha.iter().zip(&beta).enumerate() {
            if *a < zero || *a > one {
                return Err(InstanceError::FractionRange { field: "alpha", group: g });
            }
            if *b < zero || *b > one {
                return Err(InstanceError::FractionRange { field: "beta", group: g });
            }
            if b > a {
                return Err(InstanceError::BetaExceedsAlpha { group: g });
            }
        }
        let groups = alpha.len();
        let mut group_sizes = vec![0usize; groups];
        for p in &points {
            if p.group >= groups {
                return Err(InstanceError::UnknownGroup { point: p.id.clone(), group: p.group, groups });
            }
            group_sizes[p.group] += 1;
        }
        let mut seen = HashSet::new();
        for p in &points {
            if !seen.insert(p.id.as_str()) {
                return Err(InstanceError::DuplicateId { id: p.id.clone() });
            }
        }
        let mut seen = HashSet::new();
        for f in &facilities {
            if !seen.insert(f.id.as_str()) {
                return Err(InstanceError::DuplicateId { id: f.id.clone() });
            }
        }

        match &metric {
            Metric::Euclidean => {
                let dim = points[0].coords.as_ref().map(Vec::len).unwrap_or(0);
                if dim == 0 {
                    return Err(InstanceError::MissingCoords { id: points[0].id.clone() });
                }
                let all = points
                    .iter()
                    .map(|p| (&p.id, &p.coords))
                    .chain(facilities.iter().map(|f| (&f.id, &f.coords)));
                for (id, coords) in all {
                    let c = coords.as_ref().ok_or_else(|| InstanceError::MissingCoords { id: id.clone() })?;
                    if c.len() != dim {
                        return Err(InstanceError::DimensionMismatch { id: id.clone(), expected: dim, found: c.len() });
                    }
                    if c.iter().any(|v| !v.is_finite()) {
                        return Err(InstanceError::NonFinite { id: id.clone() });
                    }
                }
            }
            Metric::Explicit(m) => {
                if facilities.is_empty() {
                    return Err(InstanceError::NoFacilities);
                }
                validate_matrix(m, points.len() + facilities.len(), options)?;
            }
        }

        Ok(Self { points, facilities, metric, k, alpha, beta, group_sizes })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn facilities(&self) -> &[Facility] {
        &self.facilities
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alpha(&self) -> &[Fraction] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Fraction] {
        &self.beta
    }

    /// Number of points, `n`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of groups, `ℓ`.
    pub fn groups(&self) -> usize {
        self.alpha.len()
    }

    pub fn group_sizes(&self) -> &[usize] {
        &self.group_sizes
    }

    pub fn group_of(&self, point: usize) -> usize {
        self.points[point].group
    }

    /// True when the bounds admit every assignment (`α = 1`, `β = 0` for every group).
    pub fn fairness_is_vacuous(&self) -> bool {
        let one = Fraction::from_integer(1);
        let zero = Fraction::from_integer(0);
        self.alpha.iter().all(|a| *a == one) && self.beta.iter().all(|b| *b == zero)
    }

    pub fn has_coordinates(&self) -> bool {
        self.points.iter().all(|p| p.coords.is_some())
    }

    pub fn with_k(&self, k: usize) -> Result<Self, InstanceError> {
        if k == 0 {
            return Err(InstanceError::ZeroK);
        }
        let mut out = self.clone();
        out.k = k;
        Ok(out)
    }

    /// Distance between two points.
    pub fn point_distance(&self, a: usize, b: usize) -> f64 {
        match &self.metric {
            Metric::Euclidean => euclidean(self.coords_of_point(a), self.coords_of_point(b)),
            Metric::Explicit(m) => m.get(a, b),
        }
    }

    /// Distance between a point and a facility.
    pub fn facility_distance(&self, point: usize, facility: usize) -> f64 {
        match &self.metric {
            Metric::Euclidean => euclidean(
                self.coords_of_point(point),
                self.facilities[facility].coords.as_deref().unwrap_or(&[]),
            ),
            Metric::Explicit(m) => m.get(point, self.points.len() + facility),
        }
    }

    pub fn distance_to(&self, point: usize, center: &Center) -> Result<f64, InstanceError> {
        match center {
            Center::Facility(f) => {
                if *f >= self.facilities.len() {
                    return Err(InstanceError::UnknownFacility { index: *f });
                }
                Ok(self.facility_distance(point, *f))
            }
            Center::Location(loc) => match &self.metric {
                Metric::Euclidean => {
                    let coords = self.coords_of_point(point);
                    if coords.len() != loc.len() {
                        return Err(InstanceError::DimensionMismatch {
                            id: self.center_id(center),
                            expected: coords.len(),
                            found: loc.len(),
                        });
                    }
                    Ok(euclidean(coords, loc))
                }
                Metric::Explicit(_) => Err(InstanceError::LocationInExplicitMetric),
            },
        }
    }

    /// Distances from every center to every point, `k × n`.
    pub fn distance_table(&self, centers: &[Center]) -> Result<DistanceTable, InstanceError> {
        let n = self.points.len();
        let mut data = Vec::with_capacity(centers.len() * n);
        for c in centers {
            for j in 0..n {
                data.push(self.distance_to(j, c)?);
            }
        }
        Ok(DistanceTable { centers: centers.len(), points: n, data })
    }

    pub fn center_id(&self, center: &Center) -> String {
        match center {
            Center::Facility(f) => self
                .facilities
                .get(*f)
                .map(|x| x.id.clone())
                .unwrap_or_else(|| format!("#{f}")),
            Center::Location(loc) => {
                let parts: Vec<String> = loc.iter().map(|v| format!("{v}")).collect();
                format!("@({})", parts.join(","))
            }
        }
    }

    pub fn facility_index(&self, id: &str) -> Option<usize> {
        self.facilities.iter().position(|f| f.id == id)
    }

    fn coords_of_point(&self, j: usize) -> &[f64] {
        self.points[j].coords.as_deref().unwrap_or(&[])
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "instance(n={}, |F|={}, k={}, groups={})",
            self.points.len(),
            self.facilities.len(),
            self.k,
            self.groups()
        )
    }
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn validate_matrix(m: &DistanceMatrix, expected: usize, options: ValidationOptions) -> Result<(), InstanceError> {
    if m.size() != expected {
        return Err(InstanceError::MatrixShape { row: 0, len: m.size(), expected });
    }
    let scale = m.data.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);
    let tol = SYMMETRY_TOLERANCE * scale;
    for a in 0..expected {
        if m.get(a, a) != 0.0 {
            return Err(InstanceError::NonzeroDiagonal { index: a });
        }
        for b in 0..expected {
            let v = m.get(a, b);
            if !v.is_finite() || v < 0.0 {
                return Err(InstanceError::NegativeDistance { a, b });
            }
            if (v - m.get(b, a)).abs() > tol {
                return Err(InstanceError::Asymmetric { a, b });
            }
        }
    }
    if options.check_triangle {
        for a in 0..expected {
            for b in 0..expected {
                let ab = m.get(a, b);
                for c in 0..expected {
                    if ab > m.get(a, c) + m.get(c, b) + tol {
                        return Err(InstanceError::Triangle { a, b, via: c });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Row-major `k × n` table of true distances between chosen centers and points.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceTable {
    centers: usize,
    points: usize,
    data: Vec<f64>,
}

impl DistanceTable {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let centers = rows.len();
        let points = rows.first().map(Vec::len).unwrap_or(0);
        let data = rows.into_iter().flatten().collect();
        Self { centers, points, data }
    }

    #[inline]
    pub fn get(&self, center: usize, point: usize) -> f64 {
        self.data[center * self.points + point]
    }

    pub fn centers(&self) -> usize {
        self.centers
    }

    pub fn points(&self) -> usize {
        self.points
    }
}
