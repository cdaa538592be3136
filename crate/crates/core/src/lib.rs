//! Star semirings, matrices, truncated power series and weighted automata.

pub mod analysis;
pub mod automata;
pub mod format;
pub mod laws;
pub mod matrix;
pub mod random;
pub mod semiring;
pub mod series;
pub mod simulation;
pub mod syntax;

pub use analysis::{decompose, image_finite_analysis, omega_power, reconstruct, LevelSetDfa};
pub use automata::{behavior, compile, eval_series, hsharp, RationalExpr, WeightedAutomaton};
pub use matrix::{KMatrix, MatrixShape};
pub use semiring::{SemiringId, SemiringValue};
pub use series::{Alphabet, TruncatedSeries, Word};
pub use syntax::parse_expr;
