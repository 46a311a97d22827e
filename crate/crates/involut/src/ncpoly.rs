//! Noncommutative polynomials in m generic variables with rational
//! coefficients: the free-algebra shadow of the generic matrix ring.
//! Carries the reversal involution ρ, the sign-twisted involution σ̃,
//! evaluation at matrix tuples, and randomized trace-identity testing.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{MatrixTuple, SignVector, SquareMatrix};
use crate::scalar::{rat_from_string, rat_int, rat_to_string, Rational};

/// Degree cap for products; witnesses in this domain have degree ≤ 6.
pub const DEGREE_CAP: usize = 12;
/// Term-count cap for products.
pub const TERM_CAP: usize = 10_000;

/// A word over the variable alphabet {0,…,m−1}; the empty word is 1.
pub type Word = Vec<u32>;

/// Sparse word → coefficient map; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct NcPoly {
    nvars: usize,
    terms: BTreeMap<Word, Rational>,
}

impl NcPoly {
    pub fn zero(nvars: usize) -> Self {
        NcPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Vec::new(), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, rat_int(1))
    }

    /// The generator X_i (1-based, matching the usual notation X₁,…,X_m).
    pub fn var(nvars: usize, i: u32) -> Self {
        assert!(i >= 1 && (i as usize) <= nvars, "variable index out of range");
        let mut p = Self::zero(nvars);
        p.add_term(vec![i - 1], rat_int(1));
        p
    }

    /// The monomial X_{i₁}⋯X_{i_j} with coefficient c (1-based indices).
    pub fn monomial(nvars: usize, indices: &[u32], c: Rational) -> Self {
        let word: Word = indices
            .iter()
            .map(|&i| {
                assert!(i >= 1 && (i as usize) <= nvars);
                i - 1
            })
            .collect();
        let mut p = Self::zero(nvars);
        p.add_term(word, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Word, Rational> {
        &self.terms
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    fn add_term(&mut self, word: Word, c: Rational) {
        if Zero::is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&word) {
            Some(existing) => {
                *existing += c;
                if Zero::is_zero(existing) {
                    self.terms.remove(&word);
                }
            }
            None => {
                self.terms.insert(word, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        NcPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                if w1.len() + w2.len() > DEGREE_CAP {
                    return Err(Error::DegreeCapExceeded(DEGREE_CAP));
                }
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1 * c2);
                if out.terms.len() > TERM_CAP {
                    return Err(Error::TermCapExceeded(TERM_CAP));
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("polynomial size cap exceeded")
    }
}

/// The reversal involution ρ: every word reversed, coefficients unchanged.
pub fn rho(p: &NcPoly) -> NcPoly {
    NcPoly {
        nvars: p.nvars,
        terms: p
            .terms
            .iter()
            .map(|(w, c)| {
                let mut r = w.clone();
                r.reverse();
                (r, c.clone())
            })
            .collect(),
    }
}

/// The twisted involution σ̃(p) = ρ(p(ε₁X₁,…,ε_mX_m)).
pub fn sigma_tilde(eps: &SignVector, p: &NcPoly) -> Result<NcPoly> {
    if eps.len() != p.nvars {
        return Err(Error::DimensionMismatch("sign vector length mismatch".into()));
    }
    let mut out = NcPoly::zero(p.nvars);
    for (w, c) in &p.terms {
        let flips = w.iter().filter(|&&i| eps.sign(i as usize) == -1).count();
        let mut r = w.clone();
        r.reverse();
        let coeff = if flips % 2 == 0 { c.clone() } else { -c };
        out.add_term(r, coeff);
    }
    Ok(out)
}

/// Evaluation at a matrix tuple; the empty word evaluates to I.
pub fn eval(p: &NcPoly, a: &MatrixTuple) -> Result<SquareMatrix<Rational>> {
    if p.nvars != a.m() {
        return Err(Error::DimensionMismatch(format!(
            "polynomial in {} variables evaluated at {}-tuple",
            p.nvars,
            a.m()
        )));
    }
    let n = a.n();
    let mut acc = SquareMatrix::zero(n);
    for (w, c) in &p.terms {
        let mut prod = SquareMatrix::identity(n);
        for &i in w {
            prod = prod.mul(a.component(i as usize));
        }
        acc = acc.add(&prod.scale(c));
    }
    Ok(acc)
}

/// Trace of the evaluation.
pub fn trace_eval(p: &NcPoly, a: &MatrixTuple) -> Result<Rational> {
    Ok(eval(p, a)?.trace())
}

/// Result of randomized trace-identity testing. A counterexample is a
/// certificate; `Identity` is one-sided statistical evidence.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceIdentity {
    Identity,
    Counterexample(MatrixTuple),
}

/// Sampling bound for identity-test tuples.
const IDENTITY_TEST_BOUND: i64 = 5;

/// Tests whether tr p(a) = tr q(a) for all a by evaluating at random
/// integer tuples with entries in [−5, 5]; per-trial seeds are derived from
/// the master seed so the result is schedule-independent.
pub fn trace_identity_test(
    p: &NcPoly,
    q: &NcPoly,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<TraceIdentity> {
    if trials < 1 {
        return Err(Error::Precondition("trials must be ≥ 1".into()));
    }
    if p.nvars != q.nvars {
        return Err(Error::DimensionMismatch("variable count mismatch".into()));
    }
    let m = p.nvars.max(1);
    for t in 0..trials {
        let trial_seed = derive_seed(seed, t);
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
        let mut comps = Vec::with_capacity(m);
        for _ in 0..m {
            let mut c = SquareMatrix::zero(n);
            for i in 0..n {
                for j in 0..n {
                    c.set(i, j, rat_int(rng.gen_range(-IDENTITY_TEST_BOUND..=IDENTITY_TEST_BOUND)));
                }
            }
            comps.push(c);
        }
        let a = MatrixTuple::new(comps)?;
        if trace_eval(p, &a)? != trace_eval(q, &a)? {
            return Ok(TraceIdentity::Counterexample(a));
        }
    }
    Ok(TraceIdentity::Identity)
}

/// SplitMix64 step, used to derive independent per-trial seeds.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9e3779b97f4a7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", rat_to_string(c))?;
            for &i in w {
                write!(f, " X{}", i + 1)?;
            }
        }
        Ok(())
    }
}

impl NcPoly {
    /// Parses the text form: terms like `3 X1 X2 X1` joined by `+`/`-`.
    pub fn parse(nvars: usize, s: &str) -> Result<NcPoly> {
        let mut out = NcPoly::zero(nvars);
        let normalized = s.replace(['-', '−'], "+-");
        for raw in normalized.split('+') {
            let term = raw.trim();
            if term.is_empty() {
                continue;
            }
            let (negative, term) = match term.strip_prefix('-') {
                Some(rest) => (true, rest.trim()),
                None => (false, term),
            };
            let mut coeff = rat_int(1);
            let mut word: Word = Vec::new();
            let mut saw_coeff = false;
            for tok in term.split_whitespace() {
                if let Some(idx) = tok.strip_prefix('X').or_else(|| tok.strip_prefix('x')) {
                    let i: u32 = idx
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad variable {tok:?}")))?;
                    if i < 1 || i as usize > nvars {
                        return Err(Error::Parse(format!("variable {tok:?} out of range")));
                    }
                    word.push(i - 1);
                } else {
                    if saw_coeff {
                        return Err(Error::Parse(format!("unexpected token {tok:?}")));
                    }
                    coeff = rat_from_string(tok)?;
                    saw_coeff = true;
                }
            }
            if negative {
                coeff = -coeff;
            }
            out.add_term(word, coeff);
        }
        Ok(out)
    }
}
