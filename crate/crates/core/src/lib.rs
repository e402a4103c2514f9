//! Heegaard Floer and equivariant invariants of Brieskorn homology spheres,
//! computed from Seifert data via the `Δ`/`τ` construction and graded roots.

pub mod arith;
pub mod delta_tau;
pub mod error;
pub mod exact;
pub mod graded_root;
pub mod invariants;
pub mod obstruction;
pub mod seifert;
pub mod semigroup;
pub mod sweep;
pub mod table1;

pub use delta_tau::{tau_profile, DeltaStream, TauProfile};
pub use error::{Error, Result};
pub use graded_root::{build_root, tower_decomposition, GradedRoot, Tower, UModule};
pub use invariants::{BranchedReport, InvariantReport, QuotientReport, TorusKnotReport};
pub use obstruction::{Conclusion, ObstructionVerdict, Scenario};
pub use seifert::{brieskorn_seifert_data, BranchedPair, BrieskornExponents, SeifertData};
pub use semigroup::{bound_n, kappa, Semigroup};
