//! Exact local models of logarithmic connections on μ_r-orbifold formal
//! discs.
//!
//! The cover carries the coordinate t, the coarse disc carries z = t^r, and
//! every coefficient is an exact rational.  Series are truncated Laurent
//! series with an explicit horizon: exponents beyond it are unknown, not
//! zero, and every check reports honestly which of its findings are
//! violations and which are merely unverified.
//!
//! The main players:
//!
//! * [`series::LaurentSeries`] — arithmetic with truncation tracking;
//! * [`roots::RootSystem`] / [`roots::Coweight`] — type A data and the
//!   rational coweight θ that fixes the μ_r-action;
//! * [`element::LieAlgebraElement`] — g-valued series, slot by slot;
//! * [`parahoric`] — the algebra ℘_θ, weight pieces, residue conditions;
//! * [`equivariant`] — invariant forms upstairs and the gauge across
//!   t^r = z;
//! * [`parabolic`] — the GL_n story as honest matrices;
//! * [`degree`] — parabolic degrees and the existence criterion.

pub mod degree;
pub mod diagnostics;
pub mod element;
pub mod equivariant;
pub mod error;
pub mod matrix;
pub mod parabolic;
pub mod parahoric;
pub mod rational;
pub mod roots;
pub mod sample;
pub mod series;

pub use diagnostics::{Diagnosis, Finding, Verdict};
pub use element::LieAlgebraElement;
pub use error::{Error, Result};
pub use matrix::LaurentMatrix;
pub use rational::Rational;
pub use roots::{Coweight, RootSystem};
pub use series::{LaurentSeries, Variable};
