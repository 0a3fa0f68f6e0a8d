//! Exact symbolic engine for twist-deformed differential calculus on quadric
//! surfaces in `R^3`.
//!
//! The crate builds, entirely over exact Gaussian-rational arithmetic:
//!
//! * the normal-ordered differential calculus on `R^n` ([`algebra`]),
//! * affine symmetry generators and their Hopf-module actions ([`symmetry`]),
//! * deformation twists (abelian, Jordanian, dilation) with `*`-products,
//!   braidings, twisted involutions and coproduct/antipode checks ([`twist`]),
//! * a catalog of quadric surface families with golden verification tables
//!   ([`quadrics`]),
//! * twisted Riemannian geometry of the embedded surfaces ([`geometry`]),
//! * an expression grammar shared by the CLI and the catalog ([`expr`]).
//!
//! With the default `parallel` feature the large verification fan-outs run on
//! rayon; sequential fallbacks compile unconditionally.

pub mod algebra;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod parallel;
pub mod quadrics;
pub mod report;
pub mod scalar;
pub mod symmetry;
pub mod twist;

pub use error::{CoreError, Result};
