//! Toric varieties, their blow-ups, and GCD height bounds.

pub mod arith_heights;
pub mod blowup;
pub mod divisor;
pub mod fan;
pub mod gcd_bound;
pub mod piecewise;
pub mod polytope;
pub mod rational;
pub mod volume_beta;

pub use arith_heights::{HeightError, LogCombination, Place};
pub use blowup::{BlowupChain, BlowupError, BlowupMap};
pub use divisor::{DivisorError, ToricDivisor};
pub use fan::{Cone, Fan, FanError, LatticeVector, StandardSurface};
pub use gcd_bound::{AnticanonicalDecomposition, GcdBoundError, GcdBoundReport};
pub use piecewise::{PiecewisePolynomial, Polynomial};
pub use polytope::{HalfSpace, Polytope, PolytopeError};
pub use rational::Rational;
pub use volume_beta::{BetaError, BetaResult};
