//! Exact, desk-scale model of the energy representation of a local gauge
//! group on Boson Fock space.
//!
//! A gauge transformation is a map from a sampled manifold into SU(2) or
//! SU(3), carried together with its exact right logarithmic derivative (a
//! "jet"), so the Maurer–Cartan cocycle identity holds to machine precision
//! rather than to discretization order. On top of the jet model the crate
//! provides:
//!
//! - [`lie`]: compact Lie group/algebra numerics (exp, log, Ad, ad, the
//!   derivative of the exponential map, Killing inner product, root spaces),
//! - [`lattice`]: sampled manifolds, regions, g-valued 1-forms and jets,
//! - [`cocycle`]: the representation `V(ψ) = Ad_ψ` on 1-forms, cocycles,
//!   coboundaries, ergodic averages and coboundary fitting,
//! - [`fock`]: the coherent-span Fock engine with type (S) operators, the
//!   energy representation and Weyl operators,
//! - [`gaussian`]: the Gaussian (L²) realization and its intertwiner,
//! - [`localnet`]: the local net, commutant constraints, totality ranks,
//!   tensor factorization over regions and the vacuum cyclicity gap,
//! - [`modular`]: standard real subspaces and Araki modular data for the
//!   Weyl comparison,
//! - [`suite`]: named verification suites behind the `gaugerep` CLI.
//!
//! All state is immutable after construction; every operation is pure and
//! deterministic given a seed.

pub mod cocycle;
pub mod config;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod lattice;
pub mod lie;
pub mod localnet;
pub mod modular;
pub mod report;
pub mod suite;

pub use error::{Error, Result};

/// Dense complex matrix used throughout.
pub type CMat = nalgebra::DMatrix<num_complex::Complex64>;
/// Dense complex vector used throughout.
pub type CVec = nalgebra::DVector<num_complex::Complex64>;
/// Dense real matrix used throughout.
pub type RMat = nalgebra::DMatrix<f64>;
/// Dense real vector used throughout.
pub type RVec = nalgebra::DVector<f64>;
