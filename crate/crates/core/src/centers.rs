//! Candidate lists of center sets.

use serde::{Deserialize, Serialize};

use crate::model::{euclidean, Center, Instance};
use crate::oracle::k_subsets;
use crate::par::{map, Execution};
use crate::rng::{rng_from, split_seed, Rng};
use rand::Rng as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Exhaustive,
    MetricSampled,
    EuclideanSampled,
}

/// An ordered list of center sets, each with exactly `k` distinct centers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CenterList {
    pub sets: Vec<Vec<Center>>,
    pub provenance: Provenance,
    pub seed: Option<u64>,
}

impl CenterList {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CenterOptions {
    /// Constant `c` in the list bound `⌈(c·k/ε)^k⌉`.
    pub branching_constant: f64,
    /// Hard cap on the number of sets in any list.
    pub max_sets: usize,
    pub execution: Execution,
}

impl Default for CenterOptions {
    fn default() -> Self {
        Self { branching_constant: 8.0, max_sets: 100_000, execution: Execution::default() }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CentersError {
    #[error("k = {k} exceeds the {facilities} facilities")]
    KExceedsFacilities { k: usize, facilities: usize },
    #[error("exhaustive list would hold {sets} sets (cap {cap}); use a sampled mode")]
    CapExceeded { sets: u128, cap: usize },
    #[error("euclidean candidates need coordinates on every point")]
    MissingCoordinates,
    #[error("epsilon out of range: {0} (must lie strictly between 0 and 1)")]
    InvalidEpsilon(f64),
}

/// `⌈(c·k/ε)^k⌉`, saturating.
pub fn list_bound(k: usize, eps: f64, c: f64) -> usize {
    let b = (c * k as f64 / eps).powi(k as i32).ceil();
    if b >= usize::MAX as f64 { usize::MAX } else { b as usize }
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k as u128).fold(1u128, |acc, i| acc.saturating_mul(n as u128 - i) / (i + 1))
}

/// Every `k`-subset of the facilities, in lexicographic order.
pub fn exhaustive_centers(inst: &Instance, options: &CenterOptions) -> Result<CenterList, CentersError> {
    let (f, k) = (inst.facilities().len(), inst.k());
    if k > f {
        return Err(CentersError::KExceedsFacilities { k, facilities: f });
    }
    let count = binomial(f, k);
    if count > options.max_sets as u128 {
        return Err(CentersError::CapExceeded { sets: count, cap: options.max_sets });
    }
    let sets = k_subsets(f, k).into_iter().map(|s| s.into_iter().map(Center::Facility).collect()).collect();
    Ok(CenterList { sets, provenance: Provenance::Exhaustive, seed: None })
}

/// Number of points drawn per round by the metric generator.
pub fn metric_sample_size(k: usize, eps: f64) -> usize {
    let r = k as f64 / eps;
    (r * (1.0 + r.ln())).ceil() as usize
}

/// Number of points drawn per round by the Euclidean generator.
pub fn euclidean_sample_size(k: usize, eps: f64) -> usize {
    let r = k as f64 / eps;
    ((k as f64 / eps.powi(3)) * (1.0 + r.ln())).ceil() as usize
}

/// Draws `count` point indices, uniformly when `weights` is `None` or all zero,
/// otherwise proportionally to `weights`.
fn draw(rng: &mut Rng, n: usize, weights: Option<&[f64]>, count: usize) -> Vec<usize> {
    let total: f64 = weights.map_or(0.0, |w| w.iter().sum());
    (0..count)
        .map(|_| match weights {
            Some(w) if total > 0.0 => {
                let mut r = rng.random_range(0.0..total);
                for (j, &x) in w.iter().enumerate() {
                    if r < x {
                        return j;
                    }
                    r -= x;
                }
                w.iter().rposition(|&x| x > 0.0).unwrap_or(n - 1)
            }
            _ => rng.random_range(0..n),
        })
        .collect()
}

/// Explores the branching tree: each round proposes candidate centers given the
/// partial set, and every candidate opens a child with its own random stream.
fn branch<F>(
    exec: Execution,
    k: usize,
    seed: u64,
    per_round: usize,
    limit: usize,
    propose: &F,
) -> Vec<Vec<Center>>
where
    F: Fn(&[Center], &mut Rng) -> Vec<Center> + Sync,
{
    fn walk<F>(
        partial: &mut Vec<Center>,
        k: usize,
        seed: u64,
        per_round: usize,
        limit: usize,
        propose: &F,
        out: &mut Vec<Vec<Center>>,
    ) where
        F: Fn(&[Center], &mut Rng) -> Vec<Center>,
    {
        if out.len() >= limit {
            return;
        }
        if partial.len() == k {
            out.push(partial.clone());
            return;
        }
        let mut rng = rng_from(seed);
        let mut options = propose(partial, &mut rng);
        options.truncate(per_round);
        for (c, center) in options.into_iter().enumerate() {
            partial.push(center);
            walk(partial, k, split_seed(seed, c as u64), per_round, limit, propose, out);
            partial.pop();
        }
    }

    let mut rng = rng_from(seed);
    let mut first = propose(&[], &mut rng);
    first.truncate(per_round);
    let indexed: Vec<(usize, Center)> = first.into_iter().enumerate().collect();
    let subtrees = map(exec, &indexed, |(c, center)| {
        let mut out = Vec::new();
        let mut partial = vec![center.clone()];
        walk(&mut partial, k, split_seed(seed, *c as u64), per_round, limit, propose, &mut out);
        out
    });
    let mut sets = Vec::new();
    for s in subtrees {
        for set in s {
            if sets.len() >= limit {
                return sets;
            }
            sets.push(set);
        }
    }
    sets
}

fn dedup_sets(sets: Vec<Vec<Center>>) -> Vec<Vec<Center>> {
    let mut seen = std::collections::HashSet::new();
    sets.into_iter()
        .filter(|set| {
            let mut key: Vec<String> = set.iter().map(|c| format!("{c:?}")).collect();
            key.sort();
            seen.insert(key)
        })
        .collect()
}

/// Distance from every point to its nearest center in `partial`.
fn distances_to(inst: &Instance, partial: &[Center]) -> Vec<f64> {
    (0..inst.len())
        .map(|j| partial.iter().map(|c| inst.distance_to(j, c).unwrap_or(f64::INFINITY)).fold(f64::INFINITY, f64::min))
        .collect()
}

/// D-sampling list for general metrics over the facility set.
pub fn metric_candidate_centers(
    inst: &Instance,
    eps: f64,
    seed: u64,
    options: &CenterOptions,
) -> Result<CenterList, CentersError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(CentersError::InvalidEpsilon(eps));
    }
    let (f, k, n) = (inst.facilities().len(), inst.k(), inst.len());
    if k > f {
        return Err(CentersError::KExceedsFacilities { k, facilities: f });
    }
    let samples = metric_sample_size(k, eps);
    let per_round = (options.branching_constant * k as f64 / eps).ceil() as usize;
    let limit = list_bound(k, eps, options.branching_constant).min(options.max_sets);
    let propose = |partial: &[Center], rng: &mut Rng| -> Vec<Center> {
        let weights = if partial.is_empty() { None } else { Some(distances_to(inst, partial)) };
        let mut out: Vec<Center> = Vec::new();
        for j in draw(rng, n, weights.as_deref(), samples) {
            let free: Vec<usize> = (0..f).filter(|&i| !partial.contains(&Center::Facility(i))).collect();
            let nearest = free.iter().map(|&i| inst.facility_distance(j, i)).fold(f64::INFINITY, f64::min);
            for &i in &free {
                if inst.facility_distance(j, i) <= nearest * (1.0 + 1e-12) && !out.contains(&Center::Facility(i)) {
                    out.push(Center::Facility(i));
                }
            }
        }
        out
    };
    let sets = dedup_sets(branch(options.execution, k, seed, per_round, limit, &propose));
    Ok(CenterList { sets, provenance: Provenance::MetricSampled, seed: Some(seed) })
}

/// Point of `members` minimizing the summed distance to the others.
fn medoid(coords: &[&[f64]]) -> Vec<f64> {
    let best = (0..coords.len())
        .min_by(|&a, &b| {
            let sa: f64 = coords.iter().map(|c| euclidean(coords[a], c)).sum();
            let sb: f64 = coords.iter().map(|c| euclidean(coords[b], c)).sum();
            sa.total_cmp(&sb)
        })
        .expect("non-empty subset");
    coords[best].to_vec()
}

/// Weiszfeld iteration for the geometric median, started at the centroid.
pub fn geometric_median(coords: &[&[f64]]) -> Vec<f64> {
    let dim = coords[0].len();
    let mut y: Vec<f64> = (0..dim).map(|d| coords.iter().map(|c| c[d]).sum::<f64>() / coords.len() as f64).collect();
    for _ in 0..200 {
        let mut num = vec![0.0; dim];
        let mut den = 0.0;
        for c in coords {
            let dist = euclidean(&y, c);
            if dist < 1e-12 {
                continue;
            }
            for d in 0..dim {
                num[d] += c[d] / dist;
            }
            den += 1.0 / dist;
        }
        if den == 0.0 {
            break;
        }
        let next: Vec<f64> = num.iter().map(|v| v / den).collect();
        let moved = euclidean(&next, &y);
        y = next;
        if moved < 1e-10 {
            break;
        }
    }
    y
}

/// Sample-and-enumerate list with coordinate centers.
pub fn euclidean_candidate_centers(
    inst: &Instance,
    eps: f64,
    seed: u64,
    options: &CenterOptions,
) -> Result<CenterList, CentersError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(CentersError::InvalidEpsilon(eps));
    }
    if !inst.has_coordinates() {
        return Err(CentersError::MissingCoordinates);
    }
    let (k, n) = (inst.k(), inst.len());
    let samples = euclidean_sample_size(k, eps);
    let subset = (2.0 / eps).ceil() as usize;
    let secondary = subset + 2;
    let per_round = (options.branching_constant * k as f64 / eps).ceil() as usize;
    let limit = list_bound(k, eps, options.branching_constant).min(options.max_sets);
    let coords: Vec<&[f64]> = inst.points().iter().map(|p| p.coords.as_deref().unwrap_or(&[])).collect();
    let propose = |partial: &[Center], rng: &mut Rng| -> Vec<Center> {
        let weights = if partial.is_empty() { None } else { Some(distances_to(inst, partial)) };
        // half uniform, half proportional to the current distances
        let mut pool = draw(rng, n, None, samples.div_ceil(2));
        pool.extend(draw(rng, n, weights.as_deref(), samples / 2));
        let picks: Vec<usize> = (0..secondary).map(|_| pool[rng.random_range(0..pool.len())]).collect();
        let mut out: Vec<Center> = Vec::new();
        let mut push = |loc: Vec<f64>| {
            let c = Center::Location(loc);
            if !partial.contains(&c) && !out.contains(&c) {
                out.push(c);
            }
        };
        let size = subset.min(picks.len());
        for members in k_subsets(picks.len(), size) {
            let pts: Vec<&[f64]> = members.iter().map(|&m| coords[picks[m]]).collect();
            push(medoid(&pts));
            push(geometric_median(&pts));
        }
        out
    };
    let mut sets = dedup_sets(branch(options.execution, k, seed, per_round, limit, &propose));
    // coincident candidates can leave a set short of k distinct centers
    sets.retain(|s| s.len() == k);
    Ok(CenterList { sets, provenance: Provenance::EuclideanSampled, seed: Some(seed) })
}
