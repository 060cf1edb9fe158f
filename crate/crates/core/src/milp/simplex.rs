//! Dense two-phase primal simplex.
//!
//! The model is rewritten into `min c·s, A s = b, s ≥ 0, b ≥ 0` by shifting or
//! mirroring each variable onto a nonnegative column, adding a row per finite upper
//! bound, and appending slack, surplus and artificial columns. Entering columns
//! follow Dantzig's rule until a run of degenerate pivots is seen, after which the
//! phase switches to Bland's rule for good.

use super::{Bounds, DualCertificate, LinearProgram, LpSolution, Relation, Sense, SolverError, Status};

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;
const ZERO_CLEAN: f64 = 1e-13;
const PHASE_ONE_TOL: f64 = 1e-9;
const STALL_BEFORE_BLAND: usize = 32;
/// Primal feasibility tolerance reported to callers.
pub const FEASIBILITY_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug)]
enum ColumnMap {
    /// `x = lower + s`
    Shifted { col: usize, lower: f64 },
    /// `x = upper - s`
    Mirrored { col: usize, upper: f64 },
    /// `x = s⁺ - s⁻`
    Split { pos: usize, neg: usize },
}

struct StandardForm {
    /// Normalized dense rows over the structural columns.
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    rel: Vec<Relation>,
    cost: Vec<f64>,
    cost_offset: f64,
    maps: Vec<ColumnMap>,
    structural: usize,
}

fn standardize(lp: &LinearProgram) -> Result<StandardForm, Status> {
    let mut maps = Vec::with_capacity(lp.num_vars());
    let mut structural = 0usize;
    let mut upper_rows: Vec<(usize, f64)> = Vec::new();
    for b in &lp.bounds {
        let Bounds { lower, upper } = *b;
        if let Some(u) = upper {
            if u < lower {
                return Err(Status::Infeasible);
            }
        }
        let map = if lower.is_finite() {
            if let Some(u) = upper {
                upper_rows.push((structural, u - lower));
            }
            ColumnMap::Shifted { col: structural, lower }
        } else if let Some(u) = upper {
            ColumnMap::Mirrored { col: structural, upper: u }
        } else {
            structural += 1;
            ColumnMap::Split { pos: structural - 1, neg: structural }
        };
        structural += 1;
        maps.push(map);
    }

    let sign = if lp.sense == Sense::Maximize { -1.0 } else { 1.0 };
    let mut cost = vec![0.0; structural];
    let mut cost_offset = 0.0;
    for (j, &c) in lp.objective.iter().enumerate() {
        let c = sign * c;
        match maps[j] {
            ColumnMap::Shifted { col, lower } => {
                cost[col] += c;
                cost_offset += c * lower;
            }
            ColumnMap::Mirrored { col, upper } => {
                cost[col] -= c;
                cost_offset += c * upper;
            }
            ColumnMap::Split { pos, neg } => {
                cost[pos] += c;
                cost[neg] -= c;
            }
        }
    }

    let m = lp.rows.len() + upper_rows.len();
    let mut a = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    let mut rel = Vec::with_capacity(m);
    for row in &lp.rows {
        let mut dense = vec![0.0; structural];
        let mut rhs = row.rhs;
        for &(j, coef) in &row.terms {
            match maps[j] {
                ColumnMap::Shifted { col, lower } => {
                    dense[col] += coef;
                    rhs -= coef * lower;
                }
                ColumnMap::Mirrored { col, upper } => {
                    dense[col] -= coef;
                    rhs -= coef * upper;
                }
                ColumnMap::Split { pos, neg } => {
                    dense[pos] += coef;
                    dense[neg] -= coef;
                }
            }
        }
        a.push(dense);
        b.push(rhs);
        rel.push(row.relation);
    }
    for (col, width) in upper_rows {
        let mut dense = vec![0.0; structural];
        dense[col] = 1.0;
        a.push(dense);
        b.push(width);
        rel.push(Relation::Le);
    }
    for i in 0..a.len() {
        if b[i] < 0.0 {
            a[i].iter_mut().for_each(|v| *v = -*v);
            b[i] = -b[i];
            rel[i] = match rel[i] {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }
    Ok(StandardForm { a, b, rel, cost, cost_offset, maps, structural })
}

struct Tableau {
    rows: usize,
    width: usize,
    /// `rows × (width + 1)`, last column is the right-hand side.
    cells: Vec<f64>,
    /// Reduced costs, last entry is minus the objective value.
    obj: Vec<f64>,
    basis: Vec<usize>,
    barred: Vec<bool>,
    pivots: usize,
    pivot_limit: usize,
}

impl Tableau {
    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.cells[r * (self.width + 1) + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.width)
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let stride = self.width + 1;
        let p = self.at(r, q);
        let (before, rest) = self.cells.split_at_mut(r * stride);
        let (pivot_row, after) = rest.split_at_mut(stride);
        for v in pivot_row.iter_mut() {
            *v /= p;
        }
        pivot_row[q] = 1.0;
        let eliminate = |row: &mut [f64]| {
            let f = row[q];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(pivot_row.iter()) {
                    *v -= f * pv;
                    if v.abs() < ZERO_CLEAN {
                        *v = 0.0;
                    }
                }
                row[q] = 0.0;
            }
        };
        before.chunks_mut(stride).for_each(eliminate);
        after.chunks_mut(stride).for_each(eliminate);
        eliminate(&mut self.obj);
        self.basis[r] = q;
        self.pivots += 1;
    }

    fn set_costs(&mut self, cost: &[f64]) {
        self.obj.iter_mut().for_each(|v| *v = 0.0);
        self.obj[..cost.len()].copy_from_slice(cost);
        for r in 0..self.rows {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                let base = r * (self.width + 1);
                for c in 0..=self.width {
                    self.obj[c] -= cb * self.cells[base + c];
                }
            }
        }
    }

    /// Runs primal simplex on the current objective row.
    fn optimize(&mut self) -> Result<bool, SolverError> {
        let mut bland = false;
        let mut stall = 0usize;
        loop {
            if self.pivots >= self.pivot_limit {
                return Err(SolverError::IterationLimit { pivots: self.pivots });
            }
            let entering = if bland {
                (0..self.width).find(|&c| !self.barred[c] && self.obj[c] < -COST_TOL)
            } else {
                let mut best = None;
                let mut best_val = -COST_TOL;
                for c in 0..self.width {
                    if !self.barred[c] && self.obj[c] < best_val {
                        best_val = self.obj[c];
                        best = Some(c);
                    }
                }
                best
            };
            let Some(q) = entering else { return Ok(true) };

            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, q);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(r) / a;
                    match leave {
                        None => leave = Some((r, ratio)),
                        Some((lr, lratio)) => {
                            let tie = (ratio - lratio).abs() <= 1e-12 * (1.0 + lratio.abs());
                            if (!tie && ratio < lratio) || (tie && self.basis[r] < self.basis[lr]) {
                                leave = Some((r, ratio));
                            }
                        }
                    }
                }
            }
            let Some((r, ratio)) = leave else { return Ok(false) };
            if ratio <= 1e-12 {
                stall += 1;
                if stall > STALL_BEFORE_BLAND {
                    bland = true;
                }
            } else {
                stall = 0;
            }
            self.pivot(r, q);
        }
    }
}

/// Solves the continuous relaxation of `lp` (integrality marks are ignored).
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution, SolverError> {
    lp.validate()?;
    let sf = match standardize(lp) {
        Ok(sf) => sf,
        Err(status) => return Ok(LpSolution::without_point(status, lp.num_vars())),
    };
    let m = sf.a.len();
    let ns = sf.structural;
    let n_slack = sf.rel.iter().filter(|r| **r != Relation::Eq).count();
    let n_art = sf.rel.iter().filter(|r| **r != Relation::Le).count();
    let width = ns + n_slack + n_art;
    let stride = width + 1;

    let mut cells = vec![0.0; m * stride];
    let mut basis = vec![0usize; m];
    // column holding +e_i initially; its reduced cost gives the row dual
    let mut unit_col = vec![0usize; m];
    let mut slack = ns;
    let mut art = ns + n_slack;
    for i in 0..m {
        let base = i * stride;
        cells[base..base + ns].copy_from_slice(&sf.a[i]);
        cells[base + width] = sf.b[i];
        match sf.rel[i] {
            Relation::Le => {
                cells[base + slack] = 1.0;
                basis[i] = slack;
                unit_col[i] = slack;
                slack += 1;
            }
            Relation::Ge => {
                cells[base + slack] = -1.0;
                slack += 1;
                cells[base + art] = 1.0;
                basis[i] = art;
                unit_col[i] = art;
                art += 1;
            }
            Relation::Eq => {
                cells[base + art] = 1.0;
                basis[i] = art;
                unit_col[i] = art;
                art += 1;
            }
        }
    }
    let first_art = ns + n_slack;
    let mut tab = Tableau {
        rows: m,
        width,
        cells,
        obj: vec![0.0; stride],
        basis,
        barred: vec![false; width],
        pivots: 0,
        pivot_limit: 20_000usize.max(50 * (m + width)),
    };

    if n_art > 0 {
        let mut phase_one = vec![0.0; width];
        phase_one[first_art..].iter_mut().for_each(|c| *c = 1.0);
        tab.set_costs(&phase_one);
        tab.optimize()?;
        let infeasibility = -tab.obj[width];
        let scale = sf.b.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
        if infeasibility > PHASE_ONE_TOL * scale {
            return Ok(LpSolution::without_point(Status::Infeasible, lp.num_vars()));
        }
        // pivot zero-level artificials out where a real column is available
        for r in 0..m {
            if tab.basis[r] >= first_art {
                if let Some(q) = (0..first_art).find(|&c| tab.at(r, c).abs() > PIVOT_TOL) {
                    tab.pivot(r, q);
                }
            }
        }
        for c in first_art..width {
            tab.barred[c] = true;
        }
    }

    let mut phase_two = vec![0.0; width];
    phase_two[..ns].copy_from_slice(&sf.cost);
    tab.set_costs(&phase_two);
    if !tab.optimize()? {
        return Ok(LpSolution::without_point(Status::Unbounded, lp.num_vars()));
    }

    let mut s = vec![0.0; width];
    for r in 0..m {
        s[tab.basis[r]] = tab.rhs(r).max(0.0);
    }
    let values: Vec<f64> = sf
        .maps
        .iter()
        .map(|map| match *map {
            ColumnMap::Shifted { col, lower } => lower + s[col],
            ColumnMap::Mirrored { col, upper } => upper - s[col],
            ColumnMap::Split { pos, neg } => s[pos] - s[neg],
        })
        .collect();

    let violation = lp.max_violation(&values);
    if violation > FEASIBILITY_TOL {
        return Err(SolverError::Numerical(format!("primal residual {violation:e} after {} pivots", tab.pivots)));
    }

    let duals: Vec<f64> = unit_col.iter().map(|&c| -tab.obj[c]).collect();
    let dual = certify(&sf, &duals);
    let sign = if lp.sense == Sense::Maximize { -1.0 } else { 1.0 };
    let objective = lp.objective_value(&values);
    Ok(LpSolution {
        status: Status::Optimal,
        values,
        objective,
        dual: Some(DualCertificate {
            row_duals: duals,
            objective: sign * (dual.0 + sf.cost_offset),
            max_infeasibility: dual.1,
        }),
        pivots: tab.pivots,
    })
}

/// Recomputes the dual objective and the worst dual-constraint violation from the
/// standard-form data, independently of the tableau bookkeeping.
fn certify(sf: &StandardForm, y: &[f64]) -> (f64, f64) {
    let dual_obj: f64 = sf.b.iter().zip(y).map(|(b, y)| b * y).sum();
    let mut worst = 0.0f64;
    for j in 0..sf.structural {
        let aty: f64 = sf.a.iter().zip(y).map(|(row, yi)| row[j] * yi).sum();
        worst = worst.max(aty - sf.cost[j]);
    }
    // slack (+1, Le) needs y ≤ 0, surplus (−1, Ge) needs y ≥ 0
    for (i, rel) in sf.rel.iter().enumerate() {
        match rel {
            Relation::Le => worst = worst.max(y[i]),
            Relation::Ge => worst = worst.max(-y[i]),
            Relation::Eq => {}
        }
    }
    (dual_obj, worst)
}
