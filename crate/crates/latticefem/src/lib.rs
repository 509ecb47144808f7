//! Geometric decompositions of the simplicial lattice and smooth simplicial
//! finite elements, verified exactly.
//!
//! The crate is organised around the lattice `T^n_k` of multi-indices of
//! length `n+1` summing to `k`, which is in bijection with the Bernstein
//! basis of polynomials of degree `k` on an `n`-simplex:
//!
//! - [`lattice`] — pure combinatorics: enumeration, graph distance,
//!   sub-simplex algebra, tubes and planes.
//! - [`decomp`] — the Lagrange, Hermite and smooth (`C^m`) partitions of the
//!   lattice into pieces owned by sub-simplices.
//! - [`bernstein`] — barycentric/Bernstein calculus on an embedded simplex
//!   with exact rational coefficients: evaluation, derivatives, traces,
//!   moments and normal frames.
//! - [`exact`] — fraction-free rational linear algebra (Bareiss) used for
//!   determinants, solves and inverses.
//! - [`dof`] — degree-of-freedom functionals per element family, exact DoF
//!   matrices, unisolvence and block-triangularity checks.
//! - [`mesh`] — small conforming meshes, global DoF identification,
//!   interpolation and exact inter-element smoothness checks.
//! - [`float`] — a floating-point cross-check path (never used by the exact
//!   core).
//!
//! All core computations are carried out in arbitrary-precision rational
//! arithmetic; floating point appears only in the cross-check oracles.
//! Values are immutable after construction and every operation is a pure
//! function, so the API is safe to drive from multiple threads.

pub mod arith;
pub mod bernstein;
pub mod decomp;
pub mod dof;
pub mod exact;
pub mod float;
pub mod lattice;
pub mod mesh;

pub use arith::Rational;
