//! Maxitive (idempotent) measure theory on finite measurable spaces.
//!
//! Measurable spaces are finite and atom-generated. On top of that the crate
//! provides pseudo-multiplications and their residuation, maxitive measures
//! and their structure theory, the idempotent `⊙`-integral, Radon–Nikodym
//! densities, possibility spaces with conditioning, and a simulator for
//! Fréchet random sup-measures.

pub mod classical;
pub mod error;
pub mod ext;
pub mod fixtures;
pub mod integral;
pub mod invariants;
pub mod ks;
pub mod maxitive;
pub mod model;
pub mod possibility;
pub mod pseudo_mul;
pub mod radon_nikodym;
pub mod space;
pub mod supmeasure;

pub use error::{Error, Result};
pub use classical::AdditiveMeasure;
pub use ext::ExtReal;
pub use maxitive::MaxitiveMeasure;
pub use pseudo_mul::{PseudoMul, SemigroupOp};
pub use space::{AtomSet, MeasurableFn, SetFn, SetFunction, Space};
