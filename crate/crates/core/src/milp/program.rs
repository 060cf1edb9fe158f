use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

/// Sparse constraint row `Σ coeff·x  rel  rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub terms: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `lower` may be `-∞`; `upper == None` means unbounded above.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bounds {
    pub lower: f64,
    pub upper: Option<f64>,
}

impl Bounds {
    pub const NONNEGATIVE: Bounds = Bounds { lower: 0.0, upper: None };

    pub fn new(lower: f64, upper: Option<f64>) -> Self {
        Self { lower, upper }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub usize);

/// A (mixed-integer) linear program.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub(crate) sense: Sense,
    pub(crate) objective: Vec<f64>,
    pub(crate) bounds: Vec<Bounds>,
    pub(crate) integral: Vec<bool>,
    pub(crate) names: Vec<String>,
    pub(crate) rows: Vec<Row>,
}

impl LinearProgram {
    pub fn new(sense: Sense) -> Self {
        Self { sense, objective: Vec::new(), bounds: Vec::new(), integral: Vec::new(), names: Vec::new(), rows: Vec::new() }
    }

    pub fn add_var(&mut self, name: impl Into<String>, bounds: Bounds, cost: f64) -> Var {
        self.objective.push(cost);
        self.bounds.push(bounds);
        self.integral.push(false);
        self.names.push(name.into());
        Var(self.objective.len() - 1)
    }

    /// Adds a variable restricted to integers in `[lower, upper]`.
    pub fn add_integer_var(&mut self, name: impl Into<String>, lower: i64, upper: i64, cost: f64) -> Var {
        let v = self.add_var(name, Bounds::new(lower as f64, Some(upper as f64)), cost);
        self.integral[v.0] = true;
        v
    }

    pub fn add_row(&mut self, terms: Vec<(Var, f64)>, relation: Relation, rhs: f64) -> usize {
        let terms = terms.into_iter().map(|(v, c)| (v.0, c)).collect();
        self.rows.push(Row { terms, relation, rhs });
        self.rows.len() - 1
    }

    pub fn set_integral(&mut self, var: Var, integral: bool) {
        self.integral[var.0] = integral;
    }

    pub fn set_bounds(&mut self, var: Var, bounds: Bounds) {
        self.bounds[var.0] = bounds;
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn bounds(&self) -> &[Bounds] {
        &self.bounds
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn integer_vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.integral.iter().enumerate().filter(|(_, &b)| b).map(|(j, _)| j)
    }

    pub fn num_integer_vars(&self) -> usize {
        self.integral.iter().filter(|&&b| b).count()
    }

    /// Same model with every integrality mark cleared.
    pub fn relaxation(&self) -> Self {
        let mut lp = self.clone();
        lp.integral.iter_mut().for_each(|b| *b = false);
        lp
    }

    pub fn validate(&self) -> Result<(), super::SolverError> {
        let n = self.num_vars();
        for (r, row) in self.rows.iter().enumerate() {
            if !row.rhs.is_finite() {
                return Err(super::SolverError::InvalidModel(format!("row {r} has a non-finite right-hand side")));
            }
            for &(j, c) in &row.terms {
                if j >= n {
                    return Err(super::SolverError::InvalidModel(format!("row {r} references variable {j} of {n}")));
                }
                if !c.is_finite() {
                    return Err(super::SolverError::InvalidModel(format!("row {r} has a non-finite coefficient")));
                }
            }
        }
        for (j, b) in self.bounds.iter().enumerate() {
            if b.lower.is_nan() || b.lower == f64::INFINITY || b.upper.is_some_and(|u| u.is_nan() || u == f64::NEG_INFINITY) {
                return Err(super::SolverError::InvalidModel(format!("variable {j} has invalid bounds")));
            }
            if self.integral[j] && (!b.lower.is_finite() || !b.upper.is_some_and(f64::is_finite)) {
                return Err(super::SolverError::InvalidModel(format!(
                    "integer variable {} needs finite bounds",
                    self.names[j]
                )));
            }
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(super::SolverError::InvalidModel("non-finite objective coefficient".into()));
        }
        Ok(())
    }

    /// Largest violation of any row or bound by `values`, scaled per row by
    /// `max(1, |rhs|)`.
    pub fn max_violation(&self, values: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for row in &self.rows {
            let lhs: f64 = row.terms.iter().map(|&(j, c)| c * values[j]).sum();
            let scale = row.rhs.abs().max(1.0);
            let v = match row.relation {
                Relation::Le => lhs - row.rhs,
                Relation::Ge => row.rhs - lhs,
                Relation::Eq => (lhs - row.rhs).abs(),
            };
            worst = worst.max(v / scale);
        }
        for (j, b) in self.bounds.iter().enumerate() {
            worst = worst.max(b.lower - values[j]);
            if let Some(u) = b.upper {
                worst = worst.max(values[j] - u);
            }
        }
        worst
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.iter().zip(values).map(|(c, x)| c * x).sum()
    }
}
