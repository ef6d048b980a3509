//! Exact tools for Weierstrass elliptic surfaces over the projective line:
//! singular fiber classification, GIT stability of marked data, walls of the
//! weighted stable-pair moduli, boundary strata and surface validation.

pub mod fiber;
pub mod git;
pub mod poly;
pub mod random;
pub mod scalar;
pub mod strata;
pub mod surface;
pub mod walls;

use num_rational::BigRational;

pub use poly::{BinaryForm, Order, P1Point, Place, PolyError, Profile};
pub use scalar::ExactField;

pub type Rational = BigRational;
pub type Form = BinaryForm<Rational>;
