//! Numerical checkers for Reid-type inequalities on finite-dimensional
//! complex Hilbert spaces.
//!
//! The crate is organized bottom up: dense complex linear algebra
//! ([`linalg`]), Hermitian spectra and the Gelfand spectral radius
//! ([`spectra`]), spectral matrix functions ([`matfun`]), operator-class
//! predicates ([`predicates`]), Douglas factorizations ([`factor`]), the
//! inequality checkers themselves ([`inequalities`]), seeded generators,
//! exact counterexamples, and the campaign runner behind the `oplab` CLI.

pub mod campaign;
pub mod counterexamples;
pub mod error;
pub mod factor;
pub mod generators;
pub mod inequalities;
pub mod linalg;
pub mod matfun;
pub mod predicates;
pub mod report;
pub mod spectra;
pub mod tolerance;

pub use error::{Error, Result};
pub use inequalities::{Enforcement, HypothesisMode, Margin};
pub use linalg::{Complex, ComplexMatrix, Vector};
pub use matfun::PowerExponent;
pub use tolerance::ToleranceProfile;
