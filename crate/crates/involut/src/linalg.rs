//! Exact linear algebra over ℚ: fraction-free (Bareiss) elimination,
//! kernel bases, determinants, and an incremental row-space for span
//! closures.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Clears denominators of a rational row, returning integer entries with the
/// same kernel.
fn clear_row(row: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for r in row {
        lcm = num_integer::lcm(lcm, r.denom().clone());
    }
    row.iter()
        .map(|r| r.numer() * (&lcm / r.denom()))
        .collect()
}

/// Fraction-free row echelon form (Bareiss). Returns the echelon matrix and
/// the pivot column of each nonzero row, in order.
pub fn bareiss_echelon(rows: Vec<Vec<BigInt>>) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut a = rows;
    let nrows = a.len();
    if nrows == 0 {
        return (a, Vec::new());
    }
    let ncols = a[0].len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        // smallest-magnitude nonzero pivot keeps entries modest
        let mut best: Option<usize> = None;
        for i in r..nrows {
            if !a[i][c].is_zero() {
                match best {
                    None => best = Some(i),
                    Some(b) => {
                        if a[i][c].abs() < a[b][c].abs() {
                            best = Some(i);
                        }
                    }
                }
            }
        }
        let Some(p) = best else { continue };
        a.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(pivots.len());
    (a, pivots)
}

/// Basis of the right kernel {x : A·x = 0}, one rational vector per free
/// column, computed by fraction-free elimination and back-substitution.
pub fn kernel_basis(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let int_rows: Vec<Vec<BigInt>> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !Zero::is_zero(x)))
        .map(|r| clear_row(r))
        .collect();
    let (ech, pivots) = bareiss_echelon(int_rows);
    let pivot_set: Vec<bool> = {
        let mut v = vec![false; ncols];
        for &c in &pivots {
            v[c] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_set[free] {
            continue;
        }
        let mut x = vec![BigRational::zero(); ncols];
        x[free] = BigRational::one();
        // back-substitute pivot rows in reverse
        for (row, &pc) in ech.iter().zip(&pivots).rev() {
            let mut s = BigRational::zero();
            for j in pc + 1..ncols {
                if !row[j].is_zero() {
                    s += BigRational::from(row[j].clone()) * &x[j];
                }
            }
            x[pc] = -s / BigRational::from(row[pc].clone());
        }
        basis.push(x);
    }
    basis
}

/// Exact determinant of a square rational matrix by Bareiss elimination on
/// the cleared integer matrix, with the denominator scaling tracked.
pub fn determinant(entries: &[Vec<BigRational>]) -> BigRational {
    let n = entries.len();
    if n == 0 {
        return BigRational::one();
    }
    let mut scale = BigRational::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for row in entries {
        let mut lcm = BigInt::one();
        for r in row {
            lcm = num_integer::lcm(lcm, r.denom().clone());
        }
        scale *= BigRational::from(lcm.clone());
        a.push(row.iter().map(|r| r.numer() * (&lcm / r.denom())).collect());
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(c, p);
            sign = -sign;
        }
        for i in c + 1..n {
            for j in c + 1..n {
                let v = (&a[c][c] * &a[i][j] - &a[i][c] * &a[c][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[c][c].clone();
    }
    BigRational::from(sign * prev) / scale
}

/// Incrementally maintained row space over ℚ, used for algebra span
/// closures. `insert` reduces against the current echelon basis and reports
/// whether the dimension grew.
#[derive(Debug, Clone)]
pub struct RowSpace {
    ncols: usize,
    rows: Vec<Vec<BigRational>>, // reduced echelon rows, pivot scaled to 1
    pivot_cols: Vec<usize>,
}

impl RowSpace {
    pub fn new(ncols: usize) -> Self {
        RowSpace { ncols, rows: Vec::new(), pivot_cols: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    // rows are kept fully reduced: every pivot column is zero in all other
    // rows, so one elimination pass suffices in any order
    fn reduce(&self, v: &mut [BigRational]) {
        for (row, &pc) in self.rows.iter().zip(&self.pivot_cols) {
            if !Zero::is_zero(&v[pc]) {
                let f = v[pc].clone();
                for j in 0..self.ncols {
                    let d = &row[j] * &f;
                    v[j] -= d;
                }
            }
        }
    }

    pub fn insert(&mut self, mut v: Vec<BigRational>) -> bool {
        assert_eq!(v.len(), self.ncols);
        self.reduce(&mut v);
        let Some(pc) = v.iter().position(|x| !Zero::is_zero(x)) else {
            return false;
        };
        let inv = v[pc].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        for row in self.rows.iter_mut() {
            if !Zero::is_zero(&row[pc]) {
                let f = row[pc].clone();
                for j in 0..self.ncols {
                    let d = &v[j] * &f;
                    row[j] -= d;
                }
            }
        }
        self.rows.push(v);
        self.pivot_cols.push(pc);
        true
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(Zero::is_zero)
    }
}
