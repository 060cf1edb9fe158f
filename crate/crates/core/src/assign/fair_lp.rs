use super::guess::{GuessSpace, ZGuess};
use super::rounding::{PairClass, RoundedInstance};
use crate::milp::{Bounds, LinearProgram, Relation, Sense, Var};
use crate::model::{fraction_to_f64, Fraction};

/// Which constraint family the model carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpVariant {
    /// Integer group weights `y` with fairness bounds.
    Fair,
    /// Load constraints only; no `y`, no fairness rows.
    LoadOnly,
}

/// The feasibility program for one guess, with handles to its variables.
#[derive(Clone, Debug)]
pub struct FairLpModel {
    pub lp: LinearProgram,
    pub variant: LpVariant,
    centers: usize,
    points: usize,
    groups: usize,
    x: Vec<Option<Var>>,
    y: Vec<Option<Var>>,
}

impl FairLpModel {
    /// Variable for `x_{ij}`; `None` for excluded pairs.
    pub fn x(&self, center: usize, point: usize) -> Option<Var> {
        self.x[center * self.points + point]
    }

    /// Variable for `y_{gi}`; `None` in the load-only variant.
    pub fn y(&self, center: usize, group: usize) -> Option<Var> {
        self.y[center * self.groups + group]
    }

    pub fn num_x(&self) -> usize {
        self.x.iter().flatten().count()
    }

    /// Dense `x` values (zero for excluded pairs), indexed `center * n + point`.
    pub fn x_values(&self, values: &[f64]) -> Vec<f64> {
        self.x.iter().map(|v| v.map_or(0.0, |v| values[v.0])).collect()
    }

    /// `y` values indexed `center * groups + group`, if the model has them.
    pub fn y_values(&self, values: &[f64]) -> Option<Vec<i64>> {
        match self.variant {
            LpVariant::Fair => Some(self.y.iter().map(|v| values[v.expect("fair model").0].round() as i64).collect()),
            LpVariant::LoadOnly => None,
        }
    }

    pub fn centers(&self) -> usize {
        self.centers
    }
}

/// Fairness bounds as floats; `α` and `β` per group.
#[derive(Clone, Debug)]
pub struct FairnessBounds {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl FairnessBounds {
    pub fn new(alpha: &[Fraction], beta: &[Fraction]) -> Self {
        Self { alpha: alpha.iter().map(fraction_to_f64).collect(), beta: beta.iter().map(fraction_to_f64).collect() }
    }
}

/// The model for a complete guess `z`.
pub fn build_fair_lp(ri: &RoundedInstance, fairness: &FairnessBounds, z: &ZGuess) -> FairLpModel {
    let space = GuessSpace::new(ri);
    build_partial(ri, Some(fairness), &space, &space.values_of(z), false)
}

/// The load-only model for a complete guess `z`.
pub fn build_load_lp(ri: &RoundedInstance, z: &ZGuess) -> FairLpModel {
    let space = GuessSpace::new(ri);
    build_partial(ri, None, &space, &space.values_of(z), false)
}

/// Model in which only the first `prefix.len()` guess positions are fixed;
/// the remaining costly classes carry their fractional load directly. Its
/// relaxation is feasible whenever some completion of the prefix is.
///
/// With `emit_implied`, fairness rows made redundant by `β = 0` or `α = 1`
/// are written anyway.
pub(crate) fn build_partial(
    ri: &RoundedInstance,
    fairness: Option<&FairnessBounds>,
    space: &GuessSpace,
    prefix: &[u32],
    emit_implied: bool,
) -> FairLpModel {
    let (k, n, groups) = (ri.centers(), ri.points(), ri.groups());
    let variant = if fairness.is_some() { LpVariant::Fair } else { LpVariant::LoadOnly };
    let mut lp = LinearProgram::new(Sense::Minimize);
    let mut x = vec![None; k * n];
    for i in 0..k {
        for j in 0..n {
            if ri.class(i, j) != PairClass::Excluded {
                x[i * n + j] = Some(lp.add_var(format!("x_{i}_{j}"), Bounds::NONNEGATIVE, 0.0));
            }
        }
    }
    let mut y = vec![None; k * groups];
    if fairness.is_some() {
        for i in 0..k {
            for g in 0..groups {
                let size = ri.group_sizes()[g] as i64;
                y[i * groups + g] = Some(lp.add_integer_var(format!("y_{g}_{i}"), 0, size, 0.0));
            }
        }
    }

    // every point fully assigned
    for j in 0..n {
        let terms: Vec<(Var, f64)> = (0..k).filter_map(|i| x[i * n + j].map(|v| (v, 1.0))).collect();
        lp.add_row(terms, Relation::Eq, 1.0);
    }

    if let Some(f) = fairness {
        for i in 0..k {
            let cluster: Vec<Var> = (0..n).filter_map(|j| x[i * n + j]).collect();
            for g in 0..groups {
                let yv = y[i * groups + g].expect("fair model");
                let mut terms: Vec<(Var, f64)> =
                    (0..n).filter(|&j| ri.group_of(j) == g).filter_map(|j| x[i * n + j].map(|v| (v, 1.0))).collect();
                terms.push((yv, -1.0));
                lp.add_row(terms, Relation::Eq, 0.0);
                if f.beta[g] > 0.0 || emit_implied {
                    let mut terms: Vec<(Var, f64)> = cluster.iter().map(|&v| (v, -f.beta[g])).collect();
                    terms.push((yv, 1.0));
                    lp.add_row(terms, Relation::Ge, 0.0);
                }
                if f.alpha[g] < 1.0 || emit_implied {
                    let mut terms: Vec<(Var, f64)> = cluster.iter().map(|&v| (v, -f.alpha[g])).collect();
                    terms.push((yv, 1.0));
                    lp.add_row(terms, Relation::Le, 0.0);
                }
            }
        }
    }

    let class_members = |p: &super::guess::Position| -> Vec<Var> {
        (0..n)
            .filter(|&j| ri.group_of(j) == p.group && ri.class(p.center, j) == PairClass::Class(p.class))
            .filter_map(|j| x[p.center * n + j])
            .collect()
    };

    // fixed guesses pin their class sums
    for (p, &v) in space.positions.iter().zip(prefix) {
        let terms = class_members(p).into_iter().map(|var| (var, 1.0)).collect();
        lp.add_row(terms, Relation::Eq, v as f64);
    }

    for i in 0..k {
        let fixed: Vec<(usize, u32)> = space
            .positions
            .iter()
            .zip(prefix)
            .enumerate()
            .filter(|(_, (p, _))| p.center == i)
            .map(|(q, (_, &v))| (q, v))
            .collect();
        let open: Vec<usize> =
            (prefix.len()..space.len()).filter(|&q| space.positions[q].center == i).collect();

        // costly count cap, only when it can bind
        let costly_total: u64 = space.positions.iter().filter(|p| p.center == i).map(|p| p.population as u64).sum();
        if costly_total > space.count_cap && !open.is_empty() {
            let used: u64 = fixed.iter().map(|&(_, v)| v as u64).sum();
            let terms = open
                .iter()
                .flat_map(|&q| class_members(&space.positions[q]))
                .map(|var| (var, 1.0))
                .collect();
            lp.add_row(terms, Relation::Le, space.count_cap as f64 - used as f64);
        }

        if ri.budget() > 0.0 {
            let guessed: f64 = fixed.iter().map(|&(q, v)| space.positions[q].weight * v as f64).sum();
            let mut terms: Vec<(Var, f64)> = Vec::new();
            for j in 0..n {
                let Some(var) = x[i * n + j] else { continue };
                let class = ri.class(i, j);
                let fixed_class = class.is_costly()
                    && fixed.iter().any(|&(q, _)| {
                        let p = &space.positions[q];
                        PairClass::Class(p.class) == class && p.group == ri.group_of(j)
                    });
                if class != PairClass::Zero && !fixed_class {
                    terms.push((var, ri.rounded(i, j) / ri.budget()));
                }
            }
            lp.add_row(terms, Relation::Le, 1.0 + ri.eps() - guessed);
        }
    }

    FairLpModel { lp, variant, centers: k, points: n, groups, x, y }
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::assign::guess::enumerate_z_guesses;
    use crate::fixtures::t2;
    use crate::milp::{solve_lp, Status};
    use crate::model::{Center, DistanceTable};

    #[test]
    fn t2_model_shape() {
        let inst = t2();
        let ri = RoundedInstance::new(&inst, &[Center::Facility(0), Center::Facility(1)], 0.5, 2.0).unwrap();
        let fair = FairnessBounds::new(inst.alpha(), inst.beta());
        for z in enumerate_z_guesses(&ri).take(20) {
            let model = build_fair_lp(&ri, &fair, &z);
            assert_eq!(model.lp.num_integer_vars(), 4);
            assert!(model.num_x() <= 8);
        }
    }

    #[test]
    fn zero_guess_forces_costly_x_to_zero() {
        // first center sees one costly and one cheap point; the second sees both at distance zero
        let table = DistanceTable::from_rows(vec![vec![1.0, 0.1], vec![0.0, 0.0]]);
        let ri = RoundedInstance::from_table(&table, &[0, 0], 1, 0.5, 1.0).unwrap();
        let z = ZGuess::zeros(&ri);
        let model = build_load_lp(&ri, &z);
        let mut lp = model.lp.clone();
        // maximize x_00 to see the cap
        let xv = model.x(0, 0).unwrap();
        let mut obj = vec![0.0; lp.num_vars()];
        obj[xv.0] = -1.0;
        lp.objective = obj;
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.status, Status::Optimal);
        assert!(s.values[xv.0].abs() < 1e-9);
    }

    #[test]
    fn implied_fairness_rows_do_not_change_the_region() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..60 {
            let (k, n) = (rng.random_range(1..=3), rng.random_range(1..=6));
            let rows: Vec<Vec<f64>> =
                (0..k).map(|_| (0..n).map(|_| rng.random_range(0..=10) as f64 * 0.3).collect()).collect();
            let ri = RoundedInstance::from_table(&DistanceTable::from_rows(rows), &vec![0; n], 1, 0.5, 2.0).unwrap();
            let fair = FairnessBounds { alpha: vec![1.0], beta: vec![0.0] };
            let space = GuessSpace::new(&ri);
            let costs: Vec<f64> = (0..k * n).map(|_| rng.random_range(0..5) as f64).collect();
            let solve = |emit: bool| {
                let m = build_partial(&ri, Some(&fair), &space, &[], emit);
                let mut lp = m.lp.relaxation();
                for i in 0..k {
                    for j in 0..n {
                        if let Some(v) = m.x(i, j) {
                            lp.objective[v.0] = costs[i * n + j];
                        }
                    }
                }
                solve_lp(&lp).unwrap()
            };
            let (a, b) = (solve(false), solve(true));
            assert_eq!(a.status, b.status);
            if a.is_optimal() {
                assert!((a.objective - b.objective).abs() < 1e-7);
            }
        }
    }
}
