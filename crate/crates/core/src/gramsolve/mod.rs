//! Realizing SELCper vectors as Gram matrices of signature (4,1).

mod gram;
pub mod poly;
pub mod real;

pub use gram::{
    angle_floor, excludes, feasible_angle_box, feasible_angle_boxes, minor_system, substitute,
    GramEntry, MinorSystem, SymbolicGram, NODES,
};
pub mod lengths;
pub mod search;
pub mod solve;

pub use solve::{
    direct_signature_test, signature, solve, solve_all, solve_gram, solve_staged, Realization, RoundCounts, Signature, SolveConfig,
    SolveOutcome, Stage,
};
