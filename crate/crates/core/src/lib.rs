//! Lattice Boltzmann collision and streaming in classical, Carleman and
//! truncated-bosonic (qubit) form.
//!
//! Lattice tables and the classical solver are generic over [`Scalar`] /
//! [`Real`]; operator code works in `f64` and [`C64`].

pub mod bounds;
pub mod carleman;
pub mod classical;
pub mod complexity;
pub mod engine;
pub mod error;
pub mod fock;
pub mod lattice;
pub mod operator;
pub mod pauli;
pub mod quadrature;
pub mod scalar;
pub mod streaming;
pub mod trunc_hermite;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};

pub type C64 = num_complex::Complex64;
pub type Rational = num_rational::Rational64;
pub type LatticeF64 = lattice::LatticeModel<f64>;
pub type LatticeExact = lattice::LatticeModel<Rational>;
pub type FieldF64 = classical::DistributionField<f64>;
pub type CarlemanF64 = carleman::CarlemanSystem<f64>;
