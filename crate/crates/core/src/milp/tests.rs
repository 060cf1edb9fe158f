use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::testing::{enumerate_milp, random_milp};

fn assert_close(a: f64, b: f64) {
    assert!((a - b).abs() <= 1e-7 * (1.0 + b.abs()), "{a} vs {b}");
}

#[test]
fn single_binding_bound() {
    let mut lp = LinearProgram::new(Sense::Minimize);
    let x = lp.add_var("x", Bounds::NONNEGATIVE, 1.0);
    lp.add_row(vec![(x, 1.0)], Relation::Ge, 3.0);
    let s = solve_lp(&lp).unwrap();
    assert_eq!(s.status, Status::Optimal);
    assert_close(s.values[0], 3.0);
    assert_close(s.objective, 3.0);
}

#[test]
fn two_constraint_vertex() {
    // x + 2y >= 4 and 3x + y >= 6 meet at (1.6, 1.2)
    let mut lp = LinearProgram::new(Sense::Minimize);
    let x = lp.add_var("x", Bounds::NONNEGATIVE, 1.0);
    let y = lp.add_var("y", Bounds::NONNEGATIVE, 1.0);
    lp.add_row(vec![(x, 1.0), (y, 2.0)], Relation::Ge, 4.0);
    lp.add_row(vec![(x, 3.0), (y, 1.0)], Relation::Ge, 6.0);
    let s = solve_lp(&lp).unwrap();
    assert_close(s.values[0], 1.6);
    assert_close(s.values[1], 1.2);
    assert_close(s.objective, 2.8);
    assert!(s.duality_gap().unwrap() < 1e-9);
}

#[test]
fn contradictory_bounds() {
    let mut lp = LinearProgram::new(Sense::Minimize);
    let x = lp.add_var("x", Bounds::NONNEGATIVE, 0.0);
    lp.add_row(vec![(x, 1.0)], Relation::Le, 1.0);
    lp.add_row(vec![(x, 1.0)], Relation::Ge, 2.0);
    assert_eq!(solve_lp(&lp).unwrap().status, Status::Infeasible);
    let mut lp = LinearProgram::new(Sense::Minimize);
    lp.add_var("x", Bounds::new(2.0, Some(1.0)), 0.0);
    assert_eq!(solve_lp(&lp).unwrap().status, Status::Infeasible);
}

#[test]
fn unbounded_and_free_variables() {
    let mut lp = LinearProgram::new(Sense::Maximize);
    let x = lp.add_var("x", Bounds::NONNEGATIVE, 1.0);
    lp.add_row(vec![(x, 1.0)], Relation::Ge, 1.0);
    assert_eq!(solve_lp(&lp).unwrap().status, Status::Unbounded);

    // free x, y <= 2 with no lower bound: max x + y s.t. x - y <= 1  -> x = 3, y = 2
    let mut lp = LinearProgram::new(Sense::Maximize);
    let x = lp.add_var("x", Bounds::new(f64::NEG_INFINITY, None), 1.0);
    let y = lp.add_var("y", Bounds::new(f64::NEG_INFINITY, Some(2.0)), 1.0);
    lp.add_row(vec![(x, 1.0), (y, -1.0)], Relation::Le, 1.0);
    let s = solve_lp(&lp).unwrap();
    assert_close(s.objective, 5.0);
    assert_close(s.values[0], 3.0);
    assert!(s.duality_gap().unwrap() < 1e-9);
}

#[test]
fn degenerate_cycling_example_terminates() {
    // Beale's example cycles under the textbook rule without anti-cycling.
    let mut lp = LinearProgram::new(Sense::Minimize);
    let v: Vec<Var> = [-0.75, 150.0, -0.02, 6.0]
        .iter()
        .enumerate()
        .map(|(i, &c)| lp.add_var(format!("x{i}"), Bounds::NONNEGATIVE, c))
        .collect();
    lp.add_row(vec![(v[0], 0.25), (v[1], -60.0), (v[2], -0.04), (v[3], 9.0)], Relation::Le, 0.0);
    lp.add_row(vec![(v[0], 0.5), (v[1], -90.0), (v[2], -0.02), (v[3], 3.0)], Relation::Le, 0.0);
    lp.add_row(vec![(v[2], 1.0)], Relation::Le, 1.0);
    let s = solve_lp(&lp).unwrap();
    assert_close(s.objective, -0.05);
}

#[test]
fn invalid_index_is_reported() {
    let mut lp = LinearProgram::new(Sense::Minimize);
    lp.add_var("x", Bounds::NONNEGATIVE, 0.0);
    lp.rows.push(Row { terms: vec![(3, 1.0)], relation: Relation::Le, rhs: 1.0 });
    assert!(matches!(solve_lp(&lp), Err(SolverError::InvalidModel(_))));
}

#[test]
fn milp_without_integers_matches_lp() {
    let mut lp = LinearProgram::new(Sense::Minimize);
    let x = lp.add_var("x", Bounds::NONNEGATIVE, 2.0);
    let y = lp.add_var("y", Bounds::NONNEGATIVE, 3.0);
    lp.add_row(vec![(x, 1.0), (y, 1.0)], Relation::Ge, 2.5);
    let (milp, stats) = solve_milp_with(&lp, MilpOptions::default()).unwrap();
    assert!(!stats.branched);
    assert_eq!(milp, solve_lp(&lp).unwrap());
}

#[test]
fn ceiling_of_a_bound() {
    let mut lp = LinearProgram::new(Sense::Minimize);
    let y = lp.add_integer_var("y", 0, 10, 1.0);
    lp.add_row(vec![(y, 1.0)], Relation::Ge, 1.5);
    let s = solve_milp(&lp).unwrap();
    assert_eq!(s.values[0], 2.0);
}

#[test]
fn integer_infeasible_but_relaxation_feasible() {
    // 2y = 3 has no integer solution
    let mut lp = LinearProgram::new(Sense::Minimize);
    let y = lp.add_integer_var("y", 0, 5, 0.0);
    lp.add_row(vec![(y, 2.0)], Relation::Eq, 3.0);
    assert_eq!(solve_milp(&lp).unwrap().status, Status::Infeasible);
}

#[test]
fn node_limit_is_an_error() {
    let mut lp = LinearProgram::new(Sense::Maximize);
    let vars: Vec<Var> = (0..8).map(|i| lp.add_integer_var(format!("y{i}"), 0, 1, 1.0 + i as f64 * 0.01)).collect();
    lp.add_row(vars.iter().map(|&v| (v, 2.0)).collect(), Relation::Le, 7.0);
    let options = MilpOptions { node_limit: 1, ..Default::default() };
    assert!(matches!(solve_milp_with(&lp, options), Err(SolverError::NodeLimit { .. })));
}

#[test]
fn lp_format_lists_integers() {
    let mut lp = LinearProgram::new(Sense::Minimize);
    let x = lp.add_var("x", Bounds::NONNEGATIVE, 1.0);
    let y = lp.add_integer_var("y", 0, 4, -2.0);
    lp.add_row(vec![(x, 1.0), (y, -1.0)], Relation::Ge, 0.5);
    let text = write_lp_format(&lp);
    assert!(text.starts_with("Minimize\n obj: 1 x - 2 y\n"));
    assert!(text.contains(" c0: 1 x - 1 y >= 0.5\n"));
    assert!(text.contains("General\n y\nEnd\n"));
}

#[test]
fn branch_and_bound_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..150 {
        let lp = random_milp(&mut rng);
        let bb = solve_milp(&lp).unwrap();
        let brute = enumerate_milp(&lp);
        match brute {
            None => assert_eq!(bb.status, Status::Infeasible, "case {case}"),
            Some(v) => {
                assert_eq!(bb.status, Status::Optimal, "case {case}");
                assert!((bb.objective - v).abs() <= 1e-6 * (1.0 + v.abs()), "case {case}: {} vs {v}", bb.objective);
                for j in lp.integer_vars() {
                    assert_eq!(bb.values[j], bb.values[j].round());
                }
                assert!(lp.max_violation(&bb.values) <= FEASIBILITY_TOL);
            }
        }
    }
}

#[test]
fn weak_duality_audit() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut optimal = 0;
    for _ in 0..200 {
        let lp = random_milp(&mut rng).relaxation();
        let s = solve_lp(&lp).unwrap();
        if s.is_optimal() {
            optimal += 1;
            let d = s.dual.as_ref().unwrap();
            assert!(d.max_infeasibility <= 1e-7, "dual infeasibility {}", d.max_infeasibility);
            assert!(s.duality_gap().unwrap() <= 1e-6 * (1.0 + s.objective.abs()));
        }
    }
    assert!(optimal > 50);
}
