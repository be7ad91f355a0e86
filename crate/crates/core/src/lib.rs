//! Exact computer algebra for the enveloping algebra U(su2).
//!
//! Everything here is exact: arbitrary-precision rationals, a square-root
//! extension field (finite rational combinations of square roots of
//! square-free integers), and formal power series in the deformation
//! parameter `h` truncated at a fixed order. On top of that foundation the
//! crate provides
//!
//! - the PBW algebra of normal-ordered monomials `E^a H^b F^c` ([`pbw`]),
//! - irreducible weight-j representation matrices, their q-deformed
//!   counterparts, and tensor-product representations ([`reps`]),
//! - exact Clebsch-Gordan, Racah, 6j and 9j recoupling coefficients
//!   ([`recoupling`]),
//! - symmetric q-numbers, q-Pochhammer expansions and constructively
//!   computed q-deformed Clebsch-Gordan series ([`qseries`]),
//! - the minimal tensor-operator basis `T^J_M` of U(su2) ([`tensorops`]),
//! - reconstruction of algebra elements from their representation matrix
//!   elements ([`reconstruct`]),
//! - and the order-by-order computation of the universal Drinfeld twist of
//!   U_h(su2) by two independent routes ([`twist`]).

pub mod error;
pub mod half;
pub mod matrix;
pub mod pbw;
pub mod poly;
pub mod qseries;
pub mod rational;
pub mod recoupling;
pub mod reconstruct;
pub mod reps;
pub mod series;
pub mod sqrtext;
pub mod tensorops;
pub mod twist;

pub use error::Error;
pub use half::HalfInt;
pub use matrix::Mat;
pub use pbw::{PbwElement, TensorSquareElement};
pub use poly::CentralPoly;
pub use rational::Rational;
pub use series::HSeries;
pub use sqrtext::SqrtExt;
