//! Numerical verification toolkit for abelian C*-dynamical systems at
//! finite scale.
//!
//! The library realizes a matrix model of a dynamical system `(A, G,
//! alpha)` for a finite abelian group `G` acting on an operator algebra
//! `A` inside `M_d(C)`, and provides exact finite-sum versions of the
//! harmonic-analysis toolkit attached to such systems:
//!
//! * Fourier coefficients of algebra elements and their calculus
//!   ([`dynsys`]);
//! * the column-operator module representation and both inner products
//!   ([`hmodule`]);
//! * the regular representation of the crossed product on `l2(G, H)`,
//!   dual unitaries, Laurent operators and symbol extraction
//!   ([`crossed`]);
//! * quantitative relative-continuity moduli ([`rcdiag`]);
//! * the spectral Fell bundle generated by a set of elements, with
//!   bundle axioms, cross-sectional representation, and the Fourier
//!   intertwining diagram ([`fell`]);
//! * truncation laboratories for the bilateral-shift system on
//!   `l2(Z)` and for proper actions on discrete spaces ([`labs`]).
//!
//! Everything is deterministic: randomized checks draw from a seeded
//! generator and report residuals against explicit tolerances.

pub mod blockop;
pub mod config;
pub mod crossed;
pub mod dynsys;
pub mod error;
pub mod fell;
pub mod fixtures;
pub mod group;
pub mod hmodule;
pub mod labs;
pub mod linalg;
pub mod rcdiag;
pub mod report;
pub mod suites;

pub use error::{CoreError, Result};
pub use group::{DualElement, FiniteAbelianGroup, GroupElement};
pub use linalg::{Mat, Subspace};
