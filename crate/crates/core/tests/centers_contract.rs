//! Empirical single-center contracts of the sampled candidate lists.

use loadfair::centers::{euclidean_candidate_centers, metric_candidate_centers, CenterOptions};
use loadfair::gen::{generate, GenParams};
use loadfair::model::{Center, Instance};
use loadfair::par::Execution;

const TRIALS: usize = 200;

fn one_cluster_cost(inst: &Instance, c: &Center) -> f64 {
    (0..inst.len()).map(|j| inst.distance_to(j, c).unwrap()).sum()
}

fn options() -> CenterOptions {
    CenterOptions { execution: Execution::Sequential, ..Default::default() }
}

/// Whether a one-sided binomial test at the 5% level keeps p >= 1/2.
fn accepted(successes: usize, trials: usize) -> bool {
    let mut pmf = 0.5f64.powi(trials as i32);
    let mut tail = 0.0;
    for i in 0..=successes {
        tail += pmf;
        pmf *= (trials - i) as f64 / (i + 1) as f64;
    }
    tail >= 0.05
}

#[test]
fn metric_single_center_within_three_plus_eps() {
    let eps = 0.5;
    let mut hits = 0;
    for seed in 0..TRIALS as u64 {
        let dim = if seed % 2 == 0 { 0 } else { 2 };
        let p = GenParams { n: 3 + (seed as usize % 6), k: 1, ell: 1, facilities: 5, dim, slack: 0.0, seed };
        let inst = generate(&p).unwrap();
        let best = (0..inst.facilities().len())
            .map(|f| one_cluster_cost(&inst, &Center::Facility(f)))
            .fold(f64::INFINITY, f64::min);
        let list = metric_candidate_centers(&inst, eps, seed ^ 0xabc, &options()).unwrap();
        assert!(list.sets.iter().all(|s| s.len() == 1));
        if list.sets.iter().any(|s| one_cluster_cost(&inst, &s[0]) <= (3.0 + eps) * best * (1.0 + 1e-9)) {
            hits += 1;
        }
    }
    assert!(accepted(hits, TRIALS), "{hits}/{TRIALS}");
}

/// Exact-enough 1-median by scanning a grid with step at most eps * diameter / 100.
fn grid_median(inst: &Instance, eps: f64) -> f64 {
    let pts: Vec<&[f64]> = inst.points().iter().map(|p| p.coords.as_deref().unwrap()).collect();
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &pts {
        for d in 0..2 {
            lo[d] = lo[d].min(p[d]);
            hi[d] = hi[d].max(p[d]);
        }
    }
    let diameter = ((hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2)).sqrt();
    if diameter == 0.0 {
        return 0.0;
    }
    let step = eps * diameter / 100.0;
    let steps = |d: usize| ((hi[d] - lo[d]) / step).ceil() as usize;
    let mut best = f64::INFINITY;
    for a in 0..=steps(0) {
        for b in 0..=steps(1) {
            let c = [lo[0] + a as f64 * step, lo[1] + b as f64 * step];
            let cost: f64 = pts.iter().map(|p| ((p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2)).sqrt()).sum();
            best = best.min(cost);
        }
    }
    best
}

#[test]
fn euclidean_single_center_within_one_plus_eps() {
    let eps = 0.5;
    let mut hits = 0;
    for seed in 0..TRIALS as u64 {
        let p = GenParams { n: 2 + (seed as usize % 5), k: 1, ell: 1, facilities: 1, dim: 2, slack: 0.0, seed };
        let inst = generate(&p).unwrap();
        let oracle = grid_median(&inst, eps);
        let list = euclidean_candidate_centers(&inst, eps, seed, &options()).unwrap();
        assert!(list.sets.iter().all(|s| s.len() == 1 && matches!(s[0], Center::Location(_))));
        let found = list.sets.iter().map(|s| one_cluster_cost(&inst, &s[0])).fold(f64::INFINITY, f64::min);
        if found <= (1.0 + eps) * oracle * (1.0 + 1e-9) {
            hits += 1;
        }
    }
    assert!(accepted(hits, TRIALS), "{hits}/{TRIALS}");
}
