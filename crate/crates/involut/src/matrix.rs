//! Exact square matrices, matrix tuples, projective matrices, and the two
//! group actions on tuples: simultaneous conjugation by PGLₙ and the
//! sign-twisted transposition τ.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::determinant;
use crate::scalar::{rat_from_string, rat_int, rat_to_string, Rational, Scalar};

/// An n×n matrix with exact entries, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<T = Rational> {
    n: usize,
    entries: Vec<T>,
}

impl<T: Scalar> SquareMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("matrix must be square and nonempty".into()));
        }
        Ok(SquareMatrix { n, entries: rows.into_iter().flatten().collect() })
    }

    pub fn zero(n: usize) -> Self {
        SquareMatrix { n, entries: vec![T::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = T::one();
        }
        m
    }

    /// The elementary matrix unit e_{ij} (1-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(n);
        m.entries[(i - 1) * n + (j - 1)] = T::one();
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.entries[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j].clone();
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add_ref(b))
            .collect();
        SquareMatrix { n: self.n, entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.sub_ref(b))
            .collect();
        SquareMatrix { n: self.n, entries }
    }

    pub fn neg(&self) -> Self {
        SquareMatrix { n: self.n, entries: self.entries.iter().map(|a| a.neg_ref()).collect() }
    }

    pub fn scale(&self, c: &T) -> Self {
        SquareMatrix { n: self.n, entries: self.entries.iter().map(|a| a.mul_ref(c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let p = a.mul_ref(&other.entries[k * n + j]);
                    out.entries[i * n + j] = out.entries[i * n + j].add_ref(&p);
                }
            }
        }
        out
    }

    pub fn trace(&self) -> T {
        let mut t = T::zero();
        for i in 0..self.n {
            t = t.add_ref(&self.entries[i * self.n + i]);
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn is_skew(&self) -> bool {
        self.transpose() == self.neg()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> SquareMatrix<U> {
        SquareMatrix { n: self.n, entries: self.entries.iter().map(f).collect() }
    }

    /// Inverse by Gauss-Jordan over the scalar field; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&i| !a.get(i, c).is_zero())?;
            if p != c {
                for j in 0..n {
                    let t = a.get(c, j).clone();
                    a.set(c, j, a.get(p, j).clone());
                    a.set(p, j, t);
                    let t = inv.get(c, j).clone();
                    inv.set(c, j, inv.get(p, j).clone());
                    inv.set(p, j, t);
                }
            }
            let piv = a.get(c, c).clone();
            let piv_inv = piv.inv_ref()?;
            for j in 0..n {
                a.set(c, j, a.get(c, j).mul_ref(&piv_inv));
                inv.set(c, j, inv.get(c, j).mul_ref(&piv_inv));
            }
            for i in 0..n {
                if i == c || a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).clone();
                for j in 0..n {
                    let v = a.get(i, j).sub_ref(&a.get(c, j).mul_ref(&f));
                    a.set(i, j, v);
                    let v = inv.get(i, j).sub_ref(&inv.get(c, j).mul_ref(&f));
                    inv.set(i, j, v);
                }
            }
        }
        Some(inv)
    }

    /// Entries flattened row-major, as a vector of length n².
    pub fn flatten(&self) -> Vec<T> {
        self.entries.clone()
    }
}

impl SquareMatrix<Rational> {
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&x| rat_int(x)).collect())
            .collect();
        Self::from_rows(data).expect("square input")
    }

    pub fn determinant(&self) -> Rational {
        let rows: Vec<Vec<Rational>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        determinant(&rows)
    }

    /// The block matrix J = [0 I; −I 0] with blocks of order n/2.
    pub fn symplectic_j(n: usize) -> Result<Self> {
        if !n.is_multiple_of(2) {
            return Err(Error::Precondition("J requires even dimension".into()));
        }
        let h = n / 2;
        let mut m = Self::zero(n);
        for i in 0..h {
            m.set(i, h + i, rat_int(1));
            m.set(h + i, i, rat_int(-1));
        }
        Ok(m)
    }
}

/// The sign pattern ε = (ε₁,…,ε_m) twisting the transposition action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidInput("signs must be ±1".into()));
        }
        Ok(SignVector(signs))
    }

    pub fn all_plus(m: usize) -> Self {
        SignVector(vec![1; m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn sign(&self, i: usize) -> i8 {
        self.0[i]
    }
}

/// An m-tuple of n×n rational matrices: a point of (Mₙ)ᵐ.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixTuple {
    n: usize,
    components: Vec<SquareMatrix<Rational>>,
}

impl MatrixTuple {
    pub fn new(components: Vec<SquareMatrix<Rational>>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::DimensionMismatch("tuple must be nonempty".into()));
        };
        let n = first.n();
        if components.iter().any(|c| c.n() != n) {
            return Err(Error::DimensionMismatch("components must share dimension".into()));
        }
        Ok(MatrixTuple { n, components })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[SquareMatrix<Rational>] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &SquareMatrix<Rational> {
        &self.components[i]
    }

    /// Component-wise transpose (the untwisted τ).
    pub fn transpose(&self) -> Self {
        MatrixTuple {
            n: self.n,
            components: self.components.iter().map(|c| c.transpose()).collect(),
        }
    }
}

/// The symmetry class of a self-transposed projective matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Symmetric,
    Skew,
}

/// Outcome of testing a projective matrix against its transpose.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectiveSymmetry {
    Symmetric,
    Skew,
    NotSelfTransposed,
}

/// An invertible matrix modulo nonzero scalars: an element of PGLₙ.
///
/// The stored representative is normalized so its first nonzero entry in
/// row-major order is 1, making equality a plain comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMatrix<T = Rational> {
    rep: SquareMatrix<T>,
}

impl<T: Scalar> ProjectiveMatrix<T> {
    pub fn new(m: SquareMatrix<T>) -> Result<Self> {
        if m.inverse().is_none() {
            return Err(Error::Singular);
        }
        let rep = normalize(&m).ok_or(Error::Singular)?;
        Ok(ProjectiveMatrix { rep })
    }

    pub fn representative(&self) -> &SquareMatrix<T> {
        &self.rep
    }

    pub fn n(&self) -> usize {
        self.rep.n()
    }

    pub fn transpose(&self) -> Self {
        ProjectiveMatrix {
            rep: normalize(&self.rep.transpose()).expect("transpose of nonzero is nonzero"),
        }
    }

    pub fn inverse(&self) -> Self {
        let inv = self.rep.inverse().expect("projective matrices are invertible");
        ProjectiveMatrix { rep: normalize(&inv).expect("inverse is nonzero") }
    }

    pub fn mul(&self, other: &Self) -> Self {
        ProjectiveMatrix {
            rep: normalize(&self.rep.mul(&other.rep)).expect("product of invertibles is nonzero"),
        }
    }

    pub fn identity(n: usize) -> Self {
        ProjectiveMatrix { rep: SquareMatrix::identity(n) }
    }

    /// Decides g^t = g projectively and, when it holds, whether the
    /// proportionality constant is +1 (symmetric) or −1 (skew).
    pub fn classify_symmetry(&self) -> ProjectiveSymmetry {
        let t = self.rep.transpose();
        if t == self.rep {
            ProjectiveSymmetry::Symmetric
        } else if t == self.rep.neg() {
            ProjectiveSymmetry::Skew
        } else {
            ProjectiveSymmetry::NotSelfTransposed
        }
    }
}

/// Scales a matrix so its first nonzero entry (row-major) is 1.
/// `None` for the zero matrix.
fn normalize<T: Scalar>(m: &SquareMatrix<T>) -> Option<SquareMatrix<T>> {
    let first = m.entries().iter().find(|e| !e.is_zero())?;
    let inv = first.inv_ref()?;
    Some(m.scale(&inv))
}

impl ProjectiveMatrix<Rational> {
    /// Constructs from a rational matrix, rejecting singular input.
    pub fn from_matrix(m: SquareMatrix<Rational>) -> Result<Self> {
        if Zero::is_zero(&m.determinant()) {
            return Err(Error::Singular);
        }
        Self::new(m)
    }

    /// The canonical skew element g₀: the image of J = [0 I; −I 0].
    pub fn g0(n: usize) -> Result<Self> {
        Self::from_matrix(SquareMatrix::symplectic_j(n)?)
    }
}

/// Projective equality: representatives proportional by a nonzero scalar.
pub fn proj_eq<T: Scalar>(g: &ProjectiveMatrix<T>, h: &ProjectiveMatrix<T>) -> bool {
    g.rep == h.rep
}

/// Transpose in PGLₙ; well-defined on projective classes.
pub fn proj_transpose<T: Scalar>(g: &ProjectiveMatrix<T>) -> ProjectiveMatrix<T> {
    g.transpose()
}

/// Symmetric / skew / not-self-transposed trichotomy for g ∈ PGLₙ.
pub fn classify_projective_symmetry<T: Scalar>(g: &ProjectiveMatrix<T>) -> ProjectiveSymmetry {
    g.classify_symmetry()
}

/// Simultaneous conjugation: (h a₁ h⁻¹, …, h a_m h⁻¹).
pub fn conjugate_tuple(h: &ProjectiveMatrix<Rational>, a: &MatrixTuple) -> Result<MatrixTuple> {
    if h.n() != a.n() {
        return Err(Error::DimensionMismatch("conjugation dimension mismatch".into()));
    }
    let hinv = h.representative().inverse().ok_or(Error::Singular)?;
    let components = a
        .components
        .iter()
        .map(|c| h.representative().mul(c).mul(&hinv))
        .collect();
    MatrixTuple::new(components)
}

/// The sign-twisted transposition τ(a₁,…,a_m) = (ε₁a₁ᵗ,…,ε_m a_mᵗ).
pub fn tau_act(eps: &SignVector, a: &MatrixTuple) -> Result<MatrixTuple> {
    if eps.len() != a.m() {
        return Err(Error::DimensionMismatch("sign vector length mismatch".into()));
    }
    let components = a
        .components
        .iter()
        .zip(eps.signs())
        .map(|(c, &s)| {
            let t = c.transpose();
            if s == 1 {
                t
            } else {
                t.neg()
            }
        })
        .collect();
    MatrixTuple::new(components)
}

/// Which sampling family a tuple is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Independent uniform integer entries.
    Full,
    /// Every component symmetric.
    SymmetricComponents,
    /// Every component of the form J·w with w skew, so τ·g₀ fixes the tuple.
    SymplecticComponents,
}

/// Draws a deterministic random tuple from the named family with integer
/// entries in [−bound, bound].
pub fn sample_tuple(
    n: usize,
    m: usize,
    family: Family,
    bound: i64,
    seed: u64,
) -> Result<MatrixTuple> {
    if bound < 1 {
        return Err(Error::Precondition("bound must be ≥ 1".into()));
    }
    if n < 1 || m < 1 {
        return Err(Error::Precondition("n, m must be ≥ 1".into()));
    }
    if family == Family::SymplecticComponents && !n.is_multiple_of(2) {
        return Err(Error::Precondition("symplectic family requires even n".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| rat_int(rng.gen_range(-bound..=bound));
    let mut components = Vec::with_capacity(m);
    for _ in 0..m {
        let comp = match family {
            Family::Full => {
                let mut c = SquareMatrix::zero(n);
                for i in 0..n {
                    for j in 0..n {
                        c.set(i, j, draw(&mut rng));
                    }
                }
                c
            }
            Family::SymmetricComponents => {
                let mut c = SquareMatrix::zero(n);
                for i in 0..n {
                    for j in i..n {
                        let v = draw(&mut rng);
                        c.set(i, j, v.clone());
                        c.set(j, i, v);
                    }
                }
                c
            }
            Family::SymplecticComponents => {
                let mut w = SquareMatrix::zero(n);
                for i in 0..n {
                    for j in i + 1..n {
                        let v = draw(&mut rng);
                        w.set(i, j, v.clone());
                        w.set(j, i, -v);
                    }
                }
                SquareMatrix::symplectic_j(n)?.mul(&w)
            }
        };
        components.push(comp);
    }
    MatrixTuple::new(components)
}

/// Samples an invertible rational matrix (retrying on singular draws) and
/// returns its projective image.
pub fn sample_projective(n: usize, bound: i64, rng: &mut ChaCha8Rng) -> ProjectiveMatrix<Rational> {
    loop {
        let mut m = SquareMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, rat_int(rng.gen_range(-bound..=bound)));
            }
        }
        if let Ok(p) = ProjectiveMatrix::from_matrix(m) {
            return p;
        }
    }
}

// ---- JSON ----

/// Serializes a rational matrix as rows of "p/q" strings.
pub fn matrix_to_json(m: &SquareMatrix<Rational>) -> serde_json::Value {
    let rows: Vec<Vec<String>> = (0..m.n())
        .map(|i| (0..m.n()).map(|j| rat_to_string(m.get(i, j))).collect())
        .collect();
    serde_json::json!(rows)
}

pub fn matrix_from_json(v: &serde_json::Value) -> Result<SquareMatrix<Rational>> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
    let data = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?
                .iter()
                .map(|e| {
                    e.as_str()
                        .ok_or_else(|| Error::Parse("entries must be \"p/q\" strings".into()))
                        .and_then(rat_from_string)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SquareMatrix::from_rows(data)
}

/// `{"n":…, "m":…, "components": [...], "signs": [1,−1,…]}`; signs optional.
pub fn tuple_to_json(a: &MatrixTuple, signs: Option<&SignVector>) -> serde_json::Value {
    let comps: Vec<serde_json::Value> = a.components().iter().map(matrix_to_json).collect();
    let mut obj = serde_json::json!({ "n": a.n(), "m": a.m(), "components": comps });
    if let Some(s) = signs {
        obj["signs"] = serde_json::json!(s.signs());
    }
    obj
}

pub fn tuple_from_json(v: &serde_json::Value) -> Result<(MatrixTuple, Option<SignVector>)> {
    let comps = v
        .get("components")
        .and_then(|c| c.as_array())
        .ok_or_else(|| Error::Parse("missing components".into()))?;
    let components = comps.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
    let tuple = MatrixTuple::new(components)?;
    if let Some(n) = v.get("n").and_then(|x| x.as_u64()) {
        if n as usize != tuple.n() {
            return Err(Error::Parse("declared n does not match components".into()));
        }
    }
    if let Some(m) = v.get("m").and_then(|x| x.as_u64()) {
        if m as usize != tuple.m() {
            return Err(Error::Parse("declared m does not match components".into()));
        }
    }
    let signs = match v.get("signs") {
        Some(serde_json::Value::Array(arr)) => {
            let s = arr
                .iter()
                .map(|x| {
                    x.as_i64()
                        .and_then(|v| i8::try_from(v).ok())
                        .ok_or_else(|| Error::Parse("signs must be ±1".into()))
                })
                .collect::<Result<Vec<i8>>>()?;
            Some(SignVector::new(s)?)
        }
        _ => None,
    };
    Ok((tuple, signs))
}
