//! Towers of quadratic extensions ℚ(√d₁,…,√d_k) with exact arithmetic.
//!
//! An element is stored as 2^k rational coefficients, one per subset of the
//! radicands: `x = Σ_S c_S · ∏_{i∈S} √d_i`. Radicands are kept squarefree
//! and multiplicatively independent, so the coefficient representation is
//! unique and equality is decided coefficient-wise.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::factor::squarefree_part;
use super::{clear_radicand_denominator, rat_from_string, rat_to_string, Scalar};
use crate::error::{Error, Result};

/// Maximum number of adjoined radicands.
pub const TOWER_DEPTH_CAP: usize = 16;

/// An ordered list of squarefree radicands defining the extension tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerContext {
    radicands: Vec<BigInt>,
}

impl TowerContext {
    /// The trivial tower: plain ℚ.
    pub fn rational() -> Self {
        TowerContext { radicands: Vec::new() }
    }

    pub fn radicands(&self) -> &[BigInt] {
        &self.radicands
    }

    pub fn depth(&self) -> usize {
        self.radicands.len()
    }

    fn dim(&self) -> usize {
        1 << self.radicands.len()
    }

    /// True when `self`'s radicand list is a prefix of `other`'s, so elements
    /// of `self` embed into `other` by zero-padding coefficients.
    pub fn is_prefix_of(&self, other: &TowerContext) -> bool {
        other.radicands.len() >= self.radicands.len()
            && other.radicands[..self.radicands.len()] == self.radicands[..]
    }

    /// Product of the radicands indexed by `mask`.
    fn subset_product(&self, mask: usize) -> BigInt {
        let mut p = BigInt::one();
        for (i, d) in self.radicands.iter().enumerate() {
            if mask >> i & 1 == 1 {
                p *= d;
            }
        }
        p
    }
}

/// An element of the tower: context plus one coefficient per radicand subset.
#[derive(Debug, Clone)]
pub struct TowerScalar {
    ctx: Arc<TowerContext>,
    coeffs: Vec<BigRational>,
}

impl TowerScalar {
    pub fn from_rational(r: BigRational) -> Self {
        TowerScalar {
            ctx: Arc::new(TowerContext::rational()),
            coeffs: vec![r],
        }
    }

    pub fn zero_in(ctx: &Arc<TowerContext>) -> Self {
        TowerScalar {
            ctx: ctx.clone(),
            coeffs: vec![<BigRational as Zero>::zero(); ctx.dim()],
        }
    }

    pub fn context(&self) -> &Arc<TowerContext> {
        &self.ctx
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// The rational part (empty-subset coefficient).
    pub fn rational_part(&self) -> &BigRational {
        &self.coeffs[0]
    }

    /// Returns the value as a rational if all radical coefficients vanish.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Embeds into a larger context whose radicand list extends this one's.
    pub fn lift_to(&self, ctx: &Arc<TowerContext>) -> Result<TowerScalar> {
        if self.ctx.as_ref() == ctx.as_ref() {
            return Ok(TowerScalar { ctx: ctx.clone(), coeffs: self.coeffs.clone() });
        }
        if !self.ctx.is_prefix_of(ctx) {
            return Err(Error::ContextMismatch(format!(
                "{:?} is not a prefix of {:?}",
                self.ctx.radicands, ctx.radicands
            )));
        }
        let mut coeffs = vec![<BigRational as Zero>::zero(); ctx.dim()];
        coeffs[..self.coeffs.len()].clone_from_slice(&self.coeffs);
        Ok(TowerScalar { ctx: ctx.clone(), coeffs })
    }

    fn unify(&self, other: &TowerScalar) -> Result<(TowerScalar, TowerScalar)> {
        if self.ctx.as_ref() == other.ctx.as_ref() {
            return Ok((self.clone(), other.clone()));
        }
        if self.ctx.is_prefix_of(&other.ctx) {
            Ok((self.lift_to(&other.ctx)?, other.clone()))
        } else if other.ctx.is_prefix_of(&self.ctx) {
            Ok((self.clone(), other.lift_to(&self.ctx)?))
        } else {
            Err(Error::ContextMismatch(format!(
                "incompatible towers {:?} and {:?}",
                self.ctx.radicands, other.ctx.radicands
            )))
        }
    }

    pub fn try_add(&self, other: &TowerScalar) -> Result<TowerScalar> {
        let (mut a, b) = self.unify(other)?;
        for (c, d) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *c += d;
        }
        Ok(a)
    }

    pub fn try_sub(&self, other: &TowerScalar) -> Result<TowerScalar> {
        let (mut a, b) = self.unify(other)?;
        for (c, d) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *c -= d;
        }
        Ok(a)
    }

    pub fn try_mul(&self, other: &TowerScalar) -> Result<TowerScalar> {
        let (a, b) = self.unify(other)?;
        let dim = a.ctx.dim();
        let mut coeffs = vec![<BigRational as Zero>::zero(); dim];
        for (ma, ca) in a.coeffs.iter().enumerate() {
            if Zero::is_zero(ca) {
                continue;
            }
            for (mb, cb) in b.coeffs.iter().enumerate() {
                if Zero::is_zero(cb) {
                    continue;
                }
                // √d_A · √d_B = (∏_{i∈A∩B} d_i) · √d_{A xor B}
                let shared = a.ctx.subset_product(ma & mb);
                coeffs[ma ^ mb] += ca * cb * BigRational::from(shared);
            }
        }
        Ok(TowerScalar { ctx: a.ctx, coeffs })
    }

    pub fn try_div(&self, other: &TowerScalar) -> Result<TowerScalar> {
        let inv = other.try_inv()?;
        self.try_mul(&inv)
    }

    /// Multiplicative inverse by recursive conjugation: writing
    /// `x = a + b·√d` over the subtower, `x⁻¹ = (a − b·√d)/(a² − d·b²)`.
    pub fn try_inv(&self) -> Result<TowerScalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let coeffs = invert_coeffs(&self.coeffs, &self.ctx.radicands)?;
        Ok(TowerScalar { ctx: self.ctx.clone(), coeffs })
    }

    pub fn neg(&self) -> TowerScalar {
        TowerScalar {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// Inverts a coefficient vector over the tower with the given radicands.
/// Works on raw slices so the recursion can peel off the top radicand.
fn invert_coeffs(coeffs: &[BigRational], radicands: &[BigInt]) -> Result<Vec<BigRational>> {
    if radicands.is_empty() {
        let c = &coeffs[0];
        if Zero::is_zero(c) {
            return Err(Error::DivisionByZero);
        }
        return Ok(vec![c.recip()]);
    }
    let k = radicands.len();
    let half = 1 << (k - 1);
    let sub = &radicands[..k - 1];
    let d = &radicands[k - 1];
    let a = &coeffs[..half];
    let b = &coeffs[half..];
    // norm = a² − d·b² lives in the subtower
    let a2 = mul_coeffs(a, a, sub);
    let b2 = mul_coeffs(b, b, sub);
    let mut norm = a2;
    for (n, v) in norm.iter_mut().zip(&b2) {
        *n -= v * BigRational::from(d.clone());
    }
    let norm_inv = invert_coeffs(&norm, sub)?;
    let top = mul_coeffs(a, &norm_inv, sub);
    let bot: Vec<BigRational> = mul_coeffs(b, &norm_inv, sub).iter().map(|c| -c).collect();
    Ok(top.into_iter().chain(bot).collect())
}

fn mul_coeffs(a: &[BigRational], b: &[BigRational], radicands: &[BigInt]) -> Vec<BigRational> {
    let dim = 1 << radicands.len();
    let mut out = vec![<BigRational as Zero>::zero(); dim];
    for (ma, ca) in a.iter().enumerate() {
        if Zero::is_zero(ca) {
            continue;
        }
        for (mb, cb) in b.iter().enumerate() {
            if Zero::is_zero(cb) {
                continue;
            }
            let mut shared = BigInt::one();
            for (i, d) in radicands.iter().enumerate() {
                if (ma & mb) >> i & 1 == 1 {
                    shared *= d;
                }
            }
            out[ma ^ mb] += ca * cb * BigRational::from(shared);
        }
    }
    out
}

impl PartialEq for TowerScalar {
    fn eq(&self, other: &Self) -> bool {
        match self.unify(other) {
            Ok((a, b)) => a.coeffs == b.coeffs,
            Err(_) => false,
        }
    }
}

impl fmt::Display for TowerScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (mask, c) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(c) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", rat_to_string(c))?;
            for (i, d) in self.ctx.radicands.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    write!(f, "·√{}", d)?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Scalar for TowerScalar {
    fn zero() -> Self {
        TowerScalar::from_rational(<BigRational as Zero>::zero())
    }
    fn one() -> Self {
        TowerScalar::from_rational(<BigRational as One>::one())
    }
    fn is_zero(&self) -> bool {
        TowerScalar::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.try_add(other).expect("tower context mismatch")
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.try_sub(other).expect("tower context mismatch")
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.try_mul(other).expect("tower context mismatch")
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn inv_ref(&self) -> Option<Self> {
        self.try_inv().ok()
    }
}

/// Which field operation `tower_arith` should perform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TowerOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact field arithmetic on tower scalars sharing (or embedding into) a
/// common context.
pub fn tower_arith(x: &TowerScalar, y: &TowerScalar, op: TowerOp) -> Result<TowerScalar> {
    match op {
        TowerOp::Add => x.try_add(y),
        TowerOp::Sub => x.try_sub(y),
        TowerOp::Mul => x.try_mul(y),
        TowerOp::Div => x.try_div(y),
    }
}

/// Adjoins √r to the tower. The radicand is normalized to its squarefree
/// integer part (`√(p/q) = √(pq)/q`); if √r already lies in the tower the
/// context is returned unchanged together with the existing element.
pub fn adjoin_sqrt(
    ctx: &Arc<TowerContext>,
    r: &BigRational,
) -> Result<(Arc<TowerContext>, TowerScalar)> {
    if Zero::is_zero(r) {
        return Err(Error::Precondition("adjoin_sqrt of zero".into()));
    }
    let (radicand, scale) = clear_radicand_denominator(r);
    let (s, f) = squarefree_part(&radicand);
    let coeff = scale * BigRational::from(f); // √r = coeff · √s
    if s.is_one() {
        let mut el = TowerScalar::zero_in(ctx);
        el.coeffs[0] = coeff;
        return Ok((ctx.clone(), el));
    }
    // membership: s must match the squarefree part of some subset product
    for mask in 1..ctx.dim() {
        let p = ctx.subset_product(mask);
        let (sp, g) = squarefree_part(&p);
        if sp == s {
            // ∏_S d_i = s·g², so √s = e_S / g
            let mut el = TowerScalar::zero_in(ctx);
            el.coeffs[mask] = coeff / BigRational::from(g);
            return Ok((ctx.clone(), el));
        }
    }
    if ctx.depth() + 1 > TOWER_DEPTH_CAP {
        return Err(Error::TowerDepthExceeded(TOWER_DEPTH_CAP));
    }
    let mut radicands = ctx.radicands.clone();
    radicands.push(s);
    let new_ctx = Arc::new(TowerContext { radicands });
    let mut el = TowerScalar::zero_in(&new_ctx);
    let top = new_ctx.dim() >> 1;
    el.coeffs[top] = coeff;
    Ok((new_ctx, el))
}

/// JSON form: `{"radicands": [d…], "coeffs": {"mask": "p/q"}}`.
pub fn tower_scalar_to_json(x: &TowerScalar) -> serde_json::Value {
    let radicands: Vec<serde_json::Value> = x
        .ctx
        .radicands
        .iter()
        .map(|d| {
            use num_traits::ToPrimitive;
            match d.to_i64() {
                Some(v) => serde_json::Value::from(v),
                None => serde_json::Value::from(d.to_string()),
            }
        })
        .collect();
    let mut coeffs = serde_json::Map::new();
    for (mask, c) in x.coeffs.iter().enumerate() {
        if !Zero::is_zero(c) {
            coeffs.insert(mask.to_string(), serde_json::Value::from(rat_to_string(c)));
        }
    }
    serde_json::json!({ "radicands": radicands, "coeffs": coeffs })
}

/// Inverse of [`tower_scalar_to_json`].
pub fn tower_scalar_from_json(v: &serde_json::Value) -> Result<TowerScalar> {
    let radicands = v
        .get("radicands")
        .and_then(|r| r.as_array())
        .ok_or_else(|| Error::Parse("missing radicands".into()))?
        .iter()
        .map(|d| match d {
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(BigInt::from)
                .ok_or_else(|| Error::Parse("bad radicand".into())),
            serde_json::Value::String(s) => {
                s.parse().map_err(|_| Error::Parse("bad radicand".into()))
            }
            _ => Err(Error::Parse("bad radicand".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    let ctx = Arc::new(TowerContext { radicands });
    let mut el = TowerScalar::zero_in(&ctx);
    let coeffs = v
        .get("coeffs")
        .and_then(|c| c.as_object())
        .ok_or_else(|| Error::Parse("missing coeffs".into()))?;
    for (mask, val) in coeffs {
        let idx: usize = mask.parse().map_err(|_| Error::Parse("bad subset mask".into()))?;
        if idx >= el.coeffs.len() {
            return Err(Error::Parse("subset mask out of range".into()));
        }
        let s = val.as_str().ok_or_else(|| Error::Parse("coefficient must be a string".into()))?;
        el.coeffs[idx] = rat_from_string(s)?;
    }
    Ok(el)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sqrt2() -> (Arc<TowerContext>, TowerScalar) {
        adjoin_sqrt(&Arc::new(TowerContext::rational()), &rat_int(2)).unwrap()
    }

    #[test]
    fn sqrt2_squared_is_two() {
        let (_, s) = sqrt2();
        assert_eq!(s.try_mul(&s).unwrap(), TowerScalar::from_rational(rat_int(2)));
    }

    #[test]
    fn norm_identity() {
        // (1+√2)(1−√2) = −1
        let (_, s) = sqrt2();
        let one = TowerScalar::from_rational(rat_int(1));
        let p = one.try_add(&s).unwrap();
        let q = one.try_sub(&s).unwrap();
        assert_eq!(p.try_mul(&q).unwrap(), TowerScalar::from_rational(rat_int(-1)));
    }

    #[test]
    fn inverse_of_one_plus_sqrt2() {
        // 1/(1+√2) = −1+√2; oracle: multiply back out and confirm product is 1
        let (_, s) = sqrt2();
        let one = TowerScalar::from_rational(rat_int(1));
        let x = one.try_add(&s).unwrap();
        let inv = x.try_inv().unwrap();
        let expected = s.try_sub(&one).unwrap();
        assert_eq!(inv, expected);
        assert_eq!(x.try_mul(&inv).unwrap(), one);
    }

    #[test]
    fn adjoin_perfect_square() {
        let ctx = Arc::new(TowerContext::rational());
        let (ctx2, el) = adjoin_sqrt(&ctx, &rat_int(4)).unwrap();
        assert_eq!(ctx2.depth(), 0);
        assert_eq!(el, TowerScalar::from_rational(rat_int(2)));
    }

    #[test]
    fn adjoin_sqrt8_after_sqrt2() {
        let (ctx, s2) = sqrt2();
        let (ctx2, s8) = adjoin_sqrt(&ctx, &rat_int(8)).unwrap();
        assert_eq!(ctx2.as_ref(), ctx.as_ref());
        // 2√2, and (2√2)² = 8
        let two = TowerScalar::from_rational(rat_int(2));
        assert_eq!(s8, two.try_mul(&s2).unwrap());
        assert_eq!(s8.try_mul(&s8).unwrap(), TowerScalar::from_rational(rat_int(8)));
    }

    #[test]
    fn adjoin_imaginary() {
        let ctx = Arc::new(TowerContext::rational());
        let (ctx2, i) = adjoin_sqrt(&ctx, &rat_int(-1)).unwrap();
        assert_eq!(ctx2.radicands(), &[BigInt::from(-1)]);
        assert_eq!(i.try_mul(&i).unwrap(), TowerScalar::from_rational(rat_int(-1)));
    }

    #[test]
    fn adjoin_rational_radicand() {
        // √(1/2) = √2/2
        let (ctx, s2) = sqrt2();
        let (ctx2, el) = adjoin_sqrt(&ctx, &rat(1, 2)).unwrap();
        assert_eq!(ctx2.as_ref(), ctx.as_ref());
        let half = TowerScalar::from_rational(rat(1, 2));
        assert_eq!(el, s2.try_mul(&half).unwrap());
        assert_eq!(el.try_mul(&el).unwrap(), half);
    }

    #[test]
    fn adjoined_elements_square_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let mut ctx = Arc::new(TowerContext::rational());
            for _ in 0..3 {
                let p: i64 = rng.gen_range(-30..30);
                let q: i64 = rng.gen_range(1..10);
                if p == 0 {
                    continue;
                }
                let r = rat(p, q);
                let (c2, el) = adjoin_sqrt(&ctx, &r).unwrap();
                ctx = c2;
                let sq = el.try_mul(&el).unwrap();
                assert_eq!(sq, TowerScalar::from_rational(r).lift_to(&ctx).unwrap());
            }
        }
    }

    fn random_element(ctx: &Arc<TowerContext>, rng: &mut ChaCha8Rng) -> TowerScalar {
        let mut el = TowerScalar::zero_in(ctx);
        for c in el.coeffs.iter_mut() {
            *c = rat(rng.gen_range(-5..=5), rng.gen_range(1..=4));
        }
        el
    }

    #[test]
    fn field_axioms_on_random_triples() {
        let ctx0 = Arc::new(TowerContext::rational());
        let (ctx1, _) = adjoin_sqrt(&ctx0, &rat_int(2)).unwrap();
        let (ctx, _) = adjoin_sqrt(&ctx1, &rat_int(-3)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let x = random_element(&ctx, &mut rng);
            let y = random_element(&ctx, &mut rng);
            let z = random_element(&ctx, &mut rng);
            // associativity
            let xy_z = x.try_mul(&y).unwrap().try_mul(&z).unwrap();
            let x_yz = x.try_mul(&y.try_mul(&z).unwrap()).unwrap();
            assert_eq!(xy_z, x_yz);
            // distributivity
            let lhs = x.try_mul(&y.try_add(&z).unwrap()).unwrap();
            let rhs = x.try_mul(&y).unwrap().try_add(&x.try_mul(&z).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
            // inverses
            if !x.is_zero() {
                let prod = x.try_mul(&x.try_inv().unwrap()).unwrap();
                assert_eq!(prod, TowerScalar::one().lift_to(&ctx).unwrap());
            }
            // equality is a congruence: (x−x)·z = 0
            let diff = x.try_sub(&x).unwrap();
            assert!(diff.try_mul(&z).unwrap().is_zero());
        }
    }

    #[test]
    fn division_by_zero_rejected() {
        let one = TowerScalar::one();
        let zero = TowerScalar::zero();
        assert!(matches!(one.try_div(&zero), Err(Error::DivisionByZero)));
    }

    #[test]
    fn depth_cap_enforced() {
        // primes are multiplicatively independent, so each adjoin grows the tower
        let primes = [2i64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59];
        let mut ctx = Arc::new(TowerContext::rational());
        let mut failed = false;
        for p in primes {
            match adjoin_sqrt(&ctx, &rat_int(p)) {
                Ok((c, _)) => ctx = c,
                Err(Error::TowerDepthExceeded(_)) => {
                    failed = true;
                    break;
                }
                Err(e) => panic!("unexpected error: {e}"),
            }
        }
        assert!(failed);
        assert_eq!(ctx.depth(), TOWER_DEPTH_CAP);
    }

    #[test]
    fn json_round_trip() {
        let (ctx, s2) = sqrt2();
        let x = s2
            .try_add(&TowerScalar::from_rational(rat(3, 7)).lift_to(&ctx).unwrap())
            .unwrap();
        let v = tower_scalar_to_json(&x);
        let back = tower_scalar_from_json(&v).unwrap();
        assert_eq!(x, back);
    }
}
