use serde::Serialize;

use super::rounding::RoundedInstance;

/// Relative slack on the per-center guessed-load cap.
const LOAD_SLACK: f64 = 1e-9;

/// One guessed costly count `z_{i,t,g}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ZEntry {
    pub center: usize,
    pub class: i32,
    pub group: usize,
    pub value: u32,
}

/// Guessed number of points of each group in each costly class of each center.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZGuess {
    centers: usize,
    width: usize,
    groups: usize,
    values: Vec<u32>,
}

impl ZGuess {
    pub fn zeros(ri: &RoundedInstance) -> Self {
        let width = (ri.delta() + 1) as usize;
        Self { centers: ri.centers(), width, groups: ri.groups(), values: vec![0; ri.centers() * width * ri.groups()] }
    }

    pub fn get(&self, center: usize, class: i32, group: usize) -> u32 {
        if class < 0 || class as usize >= self.width {
            return 0;
        }
        self.values[(center * self.width + class as usize) * self.groups + group]
    }

    pub fn set(&mut self, center: usize, class: i32, group: usize, value: u32) {
        self.values[(center * self.width + class as usize) * self.groups + group] = value;
    }

    /// Non-zero entries in lexicographic `(center, class, group)` order.
    pub fn entries(&self) -> Vec<ZEntry> {
        let mut out = Vec::new();
        for center in 0..self.centers {
            for t in 0..self.width {
                for group in 0..self.groups {
                    let value = self.values[(center * self.width + t) * self.groups + group];
                    if value > 0 {
                        out.push(ZEntry { center, class: t as i32, group, value });
                    }
                }
            }
        }
        out
    }

    /// Checks population, count and load bounds.
    pub fn is_valid(&self, ri: &RoundedInstance) -> bool {
        let cap = ri.count_cap();
        let load_cap = (1.0 + ri.eps()) * ri.budget() * (1.0 + LOAD_SLACK);
        (0..self.centers).all(|i| {
            let mut count = 0u64;
            let mut load = 0.0;
            for t in 0..self.width as i32 {
                for g in 0..self.groups {
                    let z = self.get(i, t, g);
                    if z as u64 > cap.min(ri.population(i, t, g) as u64) {
                        return false;
                    }
                    count += z as u64;
                    load += ri.class_distance(t) * z as f64;
                }
            }
            count <= cap && load <= load_cap
        })
    }
}

/// A costly class with at least one point; every other entry is fixed at zero.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Position {
    pub center: usize,
    pub class: i32,
    pub group: usize,
    pub population: u32,
    /// `d_t / B`.
    pub weight: f64,
}

/// The guessing coordinates of a rounded instance in enumeration order.
#[derive(Clone, Debug)]
pub(crate) struct GuessSpace {
    pub positions: Vec<Position>,
    pub count_cap: u64,
    pub load_cap: f64,
}

impl GuessSpace {
    pub fn new(ri: &RoundedInstance) -> Self {
        let mut positions = Vec::new();
        for center in 0..ri.centers() {
            for class in 0..=ri.delta() {
                for group in 0..ri.groups() {
                    let population = ri.population(center, class, group);
                    if population > 0 {
                        let weight = ri.class_distance(class) / ri.budget();
                        positions.push(Position { center, class, group, population, weight });
                    }
                }
            }
        }
        Self { positions, count_cap: ri.count_cap(), load_cap: (1.0 + ri.eps()) * (1.0 + LOAD_SLACK) }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    /// Largest admissible value at position `prefix.len()` given the prefix.
    pub fn max_value(&self, prefix: &[u32]) -> u32 {
        let p = &self.positions[prefix.len()];
        let mut count = 0u64;
        let mut load = 0.0;
        for (q, &v) in self.positions.iter().zip(prefix) {
            if q.center == p.center {
                count += v as u64;
                load += q.weight * v as f64;
            }
        }
        let by_count = self.count_cap.saturating_sub(count);
        let by_load = ((self.load_cap - load) / p.weight).floor().max(0.0);
        let mut v = (p.population as u64).min(by_count);
        if (by_load as u64) < v {
            v = by_load as u64;
        }
        // guard against floor() landing one too high
        while v > 0 && load + p.weight * v as f64 > self.load_cap {
            v -= 1;
        }
        v as u32
    }

    pub fn to_guess(&self, ri: &RoundedInstance, values: &[u32]) -> ZGuess {
        let mut z = ZGuess::zeros(ri);
        for (p, &v) in self.positions.iter().zip(values) {
            z.set(p.center, p.class, p.group, v);
        }
        z
    }

    /// Values of `z` at each position.
    pub fn values_of(&self, z: &ZGuess) -> Vec<u32> {
        self.positions.iter().map(|p| z.get(p.center, p.class, p.group)).collect()
    }
}

/// Every valid guess exactly once, in lexicographic `(center, class, group)` order.
pub fn enumerate_z_guesses(ri: &RoundedInstance) -> ZGuessIter<'_> {
    let space = GuessSpace::new(ri);
    let values = vec![0; space.len()];
    ZGuessIter { ri, space, values, started: false }
}

pub struct ZGuessIter<'a> {
    ri: &'a RoundedInstance,
    space: GuessSpace,
    values: Vec<u32>,
    started: bool,
}

impl Iterator for ZGuessIter<'_> {
    type Item = ZGuess;

    fn next(&mut self) -> Option<ZGuess> {
        if !self.started {
            self.started = true;
            return Some(self.space.to_guess(self.ri, &self.values));
        }
        for p in (0..self.values.len()).rev() {
            if self.values[p] < self.space.max_value(&self.values[..p]) {
                self.values[p] += 1;
                self.values[p + 1..].iter_mut().for_each(|v| *v = 0);
                return Some(self.space.to_guess(self.ri, &self.values));
            }
        }
        self.values.clear();
        None
    }
}

/// Size of the unpruned box `Π (min(⌊2/ε²⌋, population) + 1)`.
pub fn unpruned_guess_count(ri: &RoundedInstance) -> u128 {
    let cap = ri.count_cap() as u128;
    GuessSpace::new(ri).positions.iter().map(|p| cap.min(p.population as u128) + 1).product()
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::model::DistanceTable;

    fn rounded(rows: Vec<Vec<f64>>, group_of: &[usize], groups: usize, eps: f64, budget: f64) -> RoundedInstance {
        RoundedInstance::from_table(&DistanceTable::from_rows(rows), group_of, groups, eps, budget).unwrap()
    }

    #[test]
    fn no_costly_pairs_gives_one_guess() {
        let ri = rounded(vec![vec![0.01, 0.02]], &[0, 0], 1, 0.5, 10.0);
        let all: Vec<ZGuess> = enumerate_z_guesses(&ri).collect();
        assert_eq!(all.len(), 1);
        assert!(all[0].entries().is_empty());
    }

    #[test]
    fn single_class_of_two() {
        // both points in class 0 (d_0 = ε²B = 0.25)
        let ri = rounded(vec![vec![0.25, 0.25]], &[0, 0], 1, 0.5, 1.0);
        assert_eq!(ri.population(0, 0, 0), 2);
        let values: Vec<u32> = enumerate_z_guesses(&ri).map(|z| z.get(0, 0, 0)).collect();
        assert_eq!(values, vec![0, 1, 2]);
    }

    fn brute_valid(ri: &RoundedInstance) -> Vec<ZGuess> {
        let space = GuessSpace::new(ri);
        let mut out = Vec::new();
        let mut values = vec![0u32; space.len()];
        loop {
            let z = space.to_guess(ri, &values);
            if z.is_valid(ri) {
                out.push(z);
            }
            let mut p = values.len();
            loop {
                if p == 0 {
                    return out;
                }
                p -= 1;
                values[p] += 1;
                if values[p] as u64 > (space.positions[p].population as u64).min(ri.count_cap()) {
                    values[p] = 0;
                } else {
                    break;
                }
            }
        }
    }

    #[test]
    fn enumeration_matches_filtered_box() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut strictly_pruned = 0;
        for _ in 0..150 {
            let k = rng.random_range(1..=2);
            let n = rng.random_range(1..=5);
            let groups = rng.random_range(1..=2);
            let rows: Vec<Vec<f64>> =
                (0..k).map(|_| (0..n).map(|_| rng.random_range(0..=12) as f64 * 0.25).collect()).collect();
            let group_of: Vec<usize> = (0..n).map(|_| rng.random_range(0..groups)).collect();
            let eps = [0.5, 0.7, 0.9][rng.random_range(0..3)];
            let ri = rounded(rows, &group_of, groups, eps, rng.random_range(1..=4) as f64);
            let fast: Vec<ZGuess> = enumerate_z_guesses(&ri).collect();
            let slow = brute_valid(&ri);
            assert_eq!(fast, slow);
            let full = unpruned_guess_count(&ri);
            assert!(fast.len() as u128 <= full);
            if (fast.len() as u128) < full {
                strictly_pruned += 1;
            }
        }
        assert!(strictly_pruned > 10);
    }
}
