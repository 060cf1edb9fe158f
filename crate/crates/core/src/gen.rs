//! Random instances for tests, benchmarks and the `gen` command.

use num_rational::Ratio;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::model::{fraction_from_f64, Facility, Fraction, Instance, InstanceError, Metric, Point, ValidationOptions};
use crate::rng::rng_from;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub n: usize,
    pub k: usize,
    pub ell: usize,
    /// Number of facilities.
    pub facilities: usize,
    /// Coordinate dimension; 0 draws an explicit metric from a random graph.
    pub dim: usize,
    /// Fairness window half-width around each group's population share.
    pub slack: f64,
    pub seed: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

pub fn generate(p: &GenParams) -> Result<Instance, GenError> {
    if p.n == 0 || p.k == 0 || p.ell == 0 {
        return Err(GenError::Params("n, k and ell must be positive".into()));
    }
    if p.ell > p.n {
        return Err(GenError::Params(format!("ell = {} exceeds n = {}", p.ell, p.n)));
    }
    if p.facilities == 0 && p.dim == 0 {
        return Err(GenError::Params("an explicit metric needs at least one facility".into()));
    }
    if !(0.0..=1.0).contains(&p.slack) {
        return Err(GenError::Params(format!("slack {} outside [0, 1]", p.slack)));
    }
    let mut rng = rng_from(p.seed);
    let mut groups: Vec<usize> = (0..p.n).map(|j| if j < p.ell { j } else { rng.random_range(0..p.ell) }).collect();
    // shuffle so group labels are not tied to the first ids
    for j in (1..p.n).rev() {
        groups.swap(j, rng.random_range(0..=j));
    }

    let (point_coords, facility_coords, metric) = if p.dim > 0 {
        let mut draw = || -> Vec<f64> { (0..p.dim).map(|_| (rng.random_range(0.0..10.0f64) * 100.0).round() / 100.0).collect() };
        let pc: Vec<Option<Vec<f64>>> = (0..p.n).map(|_| Some(draw())).collect();
        let fc: Vec<Option<Vec<f64>>> = (0..p.facilities).map(|_| Some(draw())).collect();
        (pc, fc, Metric::Euclidean)
    } else {
        let size = p.n + p.facilities;
        let rows = random_graph_metric(&mut rng, size);
        (vec![None; p.n], vec![None; p.facilities], Metric::Explicit(crate::model::DistanceMatrix::from_rows(&rows)?))
    };

    let points = groups
        .iter()
        .zip(point_coords)
        .enumerate()
        .map(|(j, (&group, coords))| Point { id: format!("p{j}"), coords, group })
        .collect();
    let facilities =
        facility_coords.into_iter().enumerate().map(|(i, coords)| Facility { id: format!("f{i}"), coords }).collect();

    let (alpha, beta) = share_window(&groups, p.ell, p.slack);
    Ok(Instance::new(points, facilities, metric, p.k, alpha, beta, ValidationOptions::default())?)
}

/// `α_g = min(1, share_g + slack)`, `β_g = max(0, share_g − slack)`; vacuous for one group.
pub fn share_window(groups: &[usize], ell: usize, slack: f64) -> (Vec<Fraction>, Vec<Fraction>) {
    if ell == 1 {
        return (vec![Fraction::from_integer(1)], vec![Fraction::from_integer(0)]);
    }
    let n = groups.len() as i64;
    let s = fraction_from_f64(slack).unwrap_or_else(|| Fraction::from_integer(0));
    let one = Fraction::from_integer(1);
    let zero = Fraction::from_integer(0);
    (0..ell)
        .map(|g| {
            let share = Ratio::new(groups.iter().filter(|&&x| x == g).count() as i64, n);
            ((share + s).min(one), (share - s).max(zero))
        })
        .unzip()
}

/// Shortest-path closure of a connected random graph with integer weights 1..=10.
pub fn random_graph_metric(rng: &mut impl rand::Rng, size: usize) -> Vec<Vec<f64>> {
    let inf = f64::INFINITY;
    let mut d = vec![vec![inf; size]; size];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0.0;
    }
    let connect = |d: &mut [Vec<f64>], a: usize, b: usize, w: f64| {
        if w < d[a][b] {
            d[a][b] = w;
            d[b][a] = w;
        }
    };
    // random spanning tree, then extra edges
    for v in 1..size {
        let u = rng.random_range(0..v);
        let w = rng.random_range(1..=10) as f64;
        connect(&mut d, u, v, w);
    }
    for _ in 0..size {
        let (a, b) = (rng.random_range(0..size), rng.random_range(0..size));
        if a != b {
            let w = rng.random_range(1..=10) as f64;
            connect(&mut d, a, b, w);
        }
    }
    for via in 0..size {
        for a in 0..size {
            for b in 0..size {
                let alt = d[a][via] + d[via][b];
                if alt < d[a][b] {
                    d[a][b] = alt;
                }
            }
        }
    }
    d
}
