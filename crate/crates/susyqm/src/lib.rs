//! Spectral design through supersymmetric quantum mechanics.
//!
//! The crate builds exactly solvable partners of the harmonic oscillator (and
//! of arbitrary one-dimensional potentials) through k-th order and confluent
//! Darboux transformations, derives the ladder-operator algebras and coherent
//! states of the partner Hamiltonians, generates Painlevé IV/V transcendents
//! from the extremal states of polynomial Heisenberg algebras, and applies the
//! same first-order factorization to Dirac electrons in graphene under a
//! transverse magnetic field.
//!
//! Conventions: `H = -1/2 d²/dx² + V(x)` with `ħ = m = 1` for the Schrödinger
//! sections (`convention_factor = 1/2`), and `H± = -d²/dx² + V±(x)` for the
//! graphene reduction (`convention_factor = 1`).
//!
//! Everything numerical is carried by analytic derivative chains ([`jet`])
//! rather than finite differences, and the independent finite-difference
//! eigensolver in [`schrodinger`] acts as the spectral oracle against which
//! the closed-form constructions are validated.

pub mod coherent;
pub mod confluent;
pub mod error;
pub mod export;
pub mod graphene;
pub mod grid;
pub mod jet;
pub mod linalg;
pub mod painleve;
pub mod report;
pub mod schrodinger;
pub mod specfun;
pub mod susy;
pub mod verify;

/// Scalar used by the heavy numerical machinery (derivative chains,
/// quadratures, eigensolves). The special-function kernel in [`specfun`] is
/// generic over [`specfun::Scalar`]; everything downstream instantiates it at
/// this alias.
pub type Real = f64;

/// Exact arithmetic for ladder-energy bookkeeping (Painlevé parameter tuples
/// are rational in the extremal energies and are checked at zero tolerance).
pub type Rational = num_rational::Rational64;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
