use std::fmt::Write;

use super::{LinearProgram, Relation, Sense};

fn term(out: &mut String, first: bool, coef: f64, name: &str) {
    if first {
        let _ = write!(out, " {coef} {name}");
    } else if coef < 0.0 {
        let _ = write!(out, " - {} {name}", -coef);
    } else {
        let _ = write!(out, " + {coef} {name}");
    }
}

/// Renders the model in CPLEX LP text format.
pub fn write_lp_format(lp: &LinearProgram) -> String {
    let mut out = String::new();
    out.push_str(match lp.sense {
        Sense::Minimize => "Minimize\n",
        Sense::Maximize => "Maximize\n",
    });
    out.push_str(" obj:");
    let mut first = true;
    for (j, &c) in lp.objective.iter().enumerate() {
        if c != 0.0 {
            term(&mut out, first, c, &lp.names[j]);
            first = false;
        }
    }
    if first {
        out.push_str(" 0");
    }
    out.push_str("\nSubject To\n");
    for (r, row) in lp.rows.iter().enumerate() {
        let _ = write!(out, " c{r}:");
        let mut first = true;
        for &(j, c) in &row.terms {
            term(&mut out, first, c, &lp.names[j]);
            first = false;
        }
        if first {
            out.push_str(" 0");
        }
        let rel = match row.relation {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        };
        let _ = writeln!(out, " {rel} {}", row.rhs);
    }
    out.push_str("Bounds\n");
    for (j, b) in lp.bounds.iter().enumerate() {
        let name = &lp.names[j];
        match (b.lower.is_finite(), b.upper) {
            (true, Some(u)) => {
                let _ = writeln!(out, " {} <= {name} <= {u}", b.lower);
            }
            (true, None) => {
                let _ = writeln!(out, " {name} >= {}", b.lower);
            }
            (false, Some(u)) => {
                let _ = writeln!(out, " -inf <= {name} <= {u}");
            }
            (false, None) => {
                let _ = writeln!(out, " {name} free");
            }
        }
    }
    let ints: Vec<&str> = lp.integer_vars().map(|j| lp.names[j].as_str()).collect();
    if !ints.is_empty() {
        out.push_str("General\n");
        for name in ints {
            let _ = writeln!(out, " {name}");
        }
    }
    out.push_str("End\n");
    out
}
