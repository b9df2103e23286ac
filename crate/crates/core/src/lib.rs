//! Functorial signal representation on finite measure spaces.
//!
//! The crate is layered bottom-up:
//!
//! - [`measure`]: finite carriers, σ-algebras, point-supported measures,
//!   null ideals and measurable maps.
//! - [`quotient`]: measure algebras `Σ/Σ∩𝒩` and the Boolean homomorphisms
//!   maps induce on them.
//! - [`function_space`] and [`duality`]: `L⁰`/`L²` with the contravariant
//!   pullback action and its covariant dual over Boolean algebras.
//! - [`partial`]: partial injections with restriction and dagger.
//! - [`signal`]: segments, `(h, φ)` arrows, differentials and redundancy
//!   detection.
//! - [`codec`]: the lossless differential codec, its container and file
//!   readers.
//! - [`laws`]: randomized law suites over all of the above.

pub mod codec;
pub mod duality;
pub mod error;
pub mod function_space;
pub mod laws;
pub mod measure;
pub mod partial;
pub mod quotient;
pub mod rational;
pub mod signal;

pub use error::{Error, Result};
