//! Census of finite-volume hyperbolic Coxeter 4-polytopes with seven facets.
//!
//! The pipeline runs in four steps: [`combinatorics`] derives incidence data
//! for each combinatorial type, [`pasting`] enumerates candidate Coxeter
//! vectors from diagram libraries, [`gramsolve`] realizes them as Gram
//! matrices of signature (4,1), and [`invariants`] certifies the results.

pub mod combinatorics;
pub mod diagrams;
pub mod field;
pub mod gramsolve;
pub mod invariants;
pub mod pasting;

pub use combinatorics::{CombinatorialPolytope, IncidenceData};
pub use diagrams::{CoxeterVector, LibrarySet, Weight};
pub use field::Z235;
pub use gramsolve::{Realization, SolveConfig, SolveOutcome, Stage};
pub use invariants::{Arithmeticity, PolytopeRecord};
pub use pasting::{PasteConfig, SelcperSet};
