//! Small hand-built instances used throughout the tests and examples.

use crate::model::{Facility, Fraction, Instance, Metric, Point, ValidationOptions};

fn line(points: &[(&str, f64, usize)], facilities: &[(&str, f64)], k: usize, alpha: Vec<Fraction>, beta: Vec<Fraction>) -> Instance {
    let points = points
        .iter()
        .map(|&(id, x, group)| Point { id: id.into(), coords: Some(vec![x]), group })
        .collect();
    let facilities = facilities.iter().map(|&(id, x)| Facility { id: id.into(), coords: Some(vec![x]) }).collect();
    Instance::new(points, facilities, Metric::Euclidean, k, alpha, beta, ValidationOptions::default())
        .expect("fixture is valid")
}

/// Points at 0, 1, 4, 5 on a line, facilities at 0 and 5, `k = 2`, one group.
pub fn t1() -> Instance {
    line(
        &[("p0", 0.0, 0), ("p1", 1.0, 0), ("p4", 4.0, 0), ("p5", 5.0, 0)],
        &[("f0", 0.0), ("f1", 5.0)],
        2,
        vec![Fraction::from_integer(1)],
        vec![Fraction::from_integer(0)],
    )
}

/// Like [`t1`] but red points at 0 and 4, blue at 1 and 5, every cluster exactly half
/// red and half blue.
pub fn t2() -> Instance {
    let half = Fraction::new(1, 2);
    line(
        &[("p0", 0.0, 0), ("p1", 1.0, 1), ("p4", 4.0, 0), ("p5", 5.0, 1)],
        &[("f0", 0.0), ("f1", 5.0)],
        2,
        vec![half, half],
        vec![half, half],
    )
}
