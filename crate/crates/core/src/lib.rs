pub mod assign;
pub mod centers;
pub mod fixtures;
pub mod flow;
pub mod gen;
pub mod milp;
pub mod model;
pub mod oracle;
pub mod par;
pub mod report;
pub mod rng;
pub mod solver;
pub mod testing;
