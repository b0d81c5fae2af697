//! Generalized D-type positive maps `Θ^(n,σ)[a; c₁,…,cₙ]` on `M_n`:
//! construction, classification (positivity, 2-positivity, complete
//! positivity, atomicity, decomposability), structural physical
//! approximation and optimal entanglement witnesses, each with a checkable
//! certificate.

pub mod classify;
pub mod dtype;
pub mod error;
pub mod matlin;
pub mod perm;
pub mod sampling;
pub mod spa;
pub mod witness;

pub use classify::{classify, ClassificationReport, ClassifyOptions, Status, Verdict};
pub use dtype::{choi, ChoiMatrix, MapParams};
pub use error::{Error, Result};
pub use matlin::CMatrix;
pub use perm::Permutation;
