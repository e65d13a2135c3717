//! Seed mutations over exact semifields, their realization as Hamiltonian
//! flows in canonical coordinates, periodicity of mutation sequences and
//! the dilogarithm identities they produce.
//!
//! Mutation directions are 0-based throughout the API; JSON plans use
//! 1-based indices.
//!
//! ```
//! use cluster_mech::dilog::identity_residual;
//! use cluster_mech::seed::Seed;
//! use cluster_mech::{ExchangeMatrix, Sign};
//!
//! let b = ExchangeMatrix::new(&[vec![0, 1], vec![-1, 0]]).unwrap();
//! let seeds = Seed::universal(b.clone()).unwrap().mutate_sequence(&[0, 1, 0, 1, 0], Sign::Plus).unwrap();
//! assert_eq!(seeds[5].render(None).unwrap().y, vec!["y2", "y1"]);
//! assert!(identity_residual(&b, &[0, 1, 0, 1, 0], &[0.5, 2.0]).unwrap().abs() < 1e-14);
//! ```

pub mod canonical;
pub mod dilog;
pub mod dirac;
pub mod error;
pub mod matrix;
pub mod periodicity;
pub mod permutation;
pub mod quadrature;
pub mod seed;
pub mod semifield;
pub mod tropical;

pub use error::{Error, ErrorClass, Result};
pub use matrix::{ExchangeMatrix, IntMatrix, Sign, SkewSymmetrizer};
pub use permutation::Permutation;
