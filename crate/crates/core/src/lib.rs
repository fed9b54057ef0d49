//! Truncated Euler products and their Cesàro averages inside the critical
//! strip, the random walk of the primes, and an nth-zero solver built on a
//! prime-sum form of S(t).

pub mod characters;
pub mod error;
pub mod euler;
pub mod lfunc;
pub(crate) mod precise;
pub mod primes;
pub mod rwp;
pub mod specfun;
pub mod summation;
pub mod zeros;

pub use characters::{character, phase_theta, DirichletCharacter, Phase};
pub use error::{Error, Result};
pub use primes::{generate_primes, mobius, PrimeTable, Primes};
pub use specfun::ComplexPoint;
