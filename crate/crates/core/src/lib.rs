//! Exact Fano test for homogeneous toric bundles `G^ℂ ×_{P,τ} F` over
//! generalized flag manifolds.
//!
//! The pipeline is:
//!
//! 1. [`rootsys`] builds the root system and its Killing form;
//! 2. [`flagbase`] paints the Dynkin diagram, giving `R_m⁺`, `z(k)` and `h_V`;
//! 3. [`toricfiber`] validates the fiber's fan and computes its canonical polytope;
//! 4. [`fanobundle`] pulls the polytope back along `τ` and reports every chamber margin.
//!
//! [`numcheck`] recomputes the polytope of `CP^m` numerically from the
//! Fubini–Study metric, as an independent check of the sign conventions.

pub mod families;
pub mod fanobundle;
pub mod flagbase;
pub mod linalg;
pub mod numcheck;
pub mod rational;
pub mod rootsys;
pub mod toricfiber;

pub use fanobundle::{
    fano_check, fano_margins, pullback_point, BundleError, FanoVerdict, Margin, TauMap,
};
pub use flagbase::{FlagError, FlagManifold, Painting};
pub use linalg::QMatrix;
pub use rational::Rational;
pub use rootsys::{FunctionalH, Letter, RootSystem, RootSystemError, SimpleType, VectorH};
pub use toricfiber::{Fan, FanDiagnostics, FanError, Polytope};
