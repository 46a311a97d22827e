//! Exact scalar arithmetic: rationals and towers of quadratic extensions.

mod factor;
mod tower;

pub use factor::squarefree_part;
pub use tower::{
    adjoin_sqrt, tower_arith, tower_scalar_from_json, tower_scalar_to_json, TowerContext,
    TowerOp, TowerScalar, TOWER_DEPTH_CAP,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Renders a rational as `"p/q"`, or `"p"` when the denominator is 1.
pub fn rat_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"` or `"p"` into a reduced rational with positive denominator.
pub fn rat_from_string(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
    let q: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
    if q.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(p, q))
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> BigRational {
    BigRational::from(BigInt::from(p))
}

/// The scalar interface shared by rationals and tower elements; every
/// implementor is a field with exact, decidable equality.
pub trait Scalar: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv_ref(&self) -> Option<Self>;
}

impl Scalar for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv_ref(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Splits a rational `r = p/q` into `(R, f)` with `√r = √R · f` and `R = p·q`
/// an integer radicand, `f = 1/q`.
pub(crate) fn clear_radicand_denominator(r: &BigRational) -> (BigInt, BigRational) {
    let p = r.numer().clone();
    let q = r.denom().clone();
    (p * &q, BigRational::new(BigInt::one(), q))
}
