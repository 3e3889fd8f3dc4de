//! Exact arithmetic in tangent algebras and generalized differentiation.
//!
//! A *time label* `(t, s) ∈ K^n × K^n` determines the tangent algebra
//! `K^n_{(t,s)} = K[X_1..X_n] / ((X_i - t_i)(X_i - s_i))`, a free module of
//! rank `2^n` indexed by subsets of `{1..n}`. Evaluating a polynomial map in
//! this algebra computes its iterated difference quotients at regular labels
//! and its derivatives at the singular label `t = s = 0`.
//!
//! Everything is generic over a [`Scalar`] ring; [`Rational`] gives exact
//! results and [`Float`] a thresholded `f64` approximation.
//!
//! ```
//! use std::collections::HashMap;
//! use tangent_core::{expr, slope, Rational};
//!
//! let f = expr::parse("x^3").unwrap();
//! let at = HashMap::from([("x".to_string(), Rational::from_integer(2.into()))]);
//! let d = slope::derivative(&f, &at, &["x"]).unwrap();
//! assert_eq!(d, Rational::from_integer(12.into()));
//! ```

pub mod anchor;
pub mod error;
pub mod expr;
pub mod hypercube;
pub mod hyperlin;
pub mod json;
pub mod ring;
pub mod slope;
pub mod talg;

pub use anchor::{CubeElement, Character};
pub use error::{Error, Result};
pub use expr::{Algebra, Expr};
pub use hypercube::{Regularity, Subset, TimeLabel, MAX_ORDER};
pub use hyperlin::{CubeMatrix, TwoByTwo};
pub use json::ScalarJson;
pub use ring::{Real, Scalar};
pub use slope::{PointFn, SlopeResult};
pub use talg::{Payload, Tangent, TangentAlgebra, Vector};

/// Exact rationals.
pub type Rational = num_rational::BigRational;
/// Double precision with the default invertibility threshold.
pub type Float = Real<f64>;

pub type RationalTangent = Tangent<Rational>;
pub type FloatTangent = Tangent<Float>;
pub type RationalLabel = TimeLabel<Rational>;
pub type FloatLabel = TimeLabel<Float>;
