//! Intertwiner spaces, algebra-generation certificates, the stabilizer
//! element of the twisted transposition action, and normalizer membership
//! tests.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, RowSpace};
use crate::matrix::{
    classify_projective_symmetry, conjugate_tuple, tau_act, MatrixTuple, ProjectiveMatrix,
    ProjectiveSymmetry, SignVector, SquareMatrix, Symmetry,
};
use crate::scalar::Rational;

/// A basis of the space {g : g·a_i = b_i·g for all i}.
#[derive(Debug, Clone)]
pub struct IntertwinerBasis {
    n: usize,
    basis: Vec<SquareMatrix<Rational>>,
}

impl IntertwinerBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SquareMatrix<Rational>] {
        &self.basis
    }
}

/// Kernel basis of the mn²×n² linear system g·a_i − b_i·g = 0, computed by
/// fraction-free elimination over ℚ.
pub fn intertwiner_basis(a: &MatrixTuple, b: &MatrixTuple) -> Result<IntertwinerBasis> {
    if a.n() != b.n() || a.m() != b.m() {
        return Err(Error::DimensionMismatch("tuples must share n and m".into()));
    }
    let n = a.n();
    let ncols = n * n; // unknowns g[p][q], row-major
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(a.m() * ncols);
    for i in 0..a.m() {
        let ai = a.component(i);
        let bi = b.component(i);
        for r in 0..n {
            for c in 0..n {
                let mut row = vec![Rational::zero(); ncols];
                // (g·a_i)[r][c] = Σ_q g[r][q]·a_i[q][c]
                for q in 0..n {
                    row[r * n + q] += ai.get(q, c);
                }
                // −(b_i·g)[r][c] = −Σ_p b_i[r][p]·g[p][c]
                for p in 0..n {
                    row[p * n + c] -= bi.get(r, p);
                }
                rows.push(row);
            }
        }
    }
    let kernel = kernel_basis(&rows, ncols);
    let basis = kernel
        .into_iter()
        .map(|v| {
            let data: Vec<Vec<Rational>> =
                (0..n).map(|r| v[r * n..(r + 1) * n].to_vec()).collect();
            SquareMatrix::from_rows(data)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntertwinerBasis { n, basis })
}

/// True iff {1, a₁,…,a_m} generates Mₙ as an algebra: the span closure under
/// left multiplication by the components reaches dimension n².
pub fn generates_full_algebra(a: &MatrixTuple) -> bool {
    let n = a.n();
    let full = n * n;
    let mut space = RowSpace::new(full);
    let mut frontier: Vec<SquareMatrix<Rational>> = Vec::new();
    let push = |space: &mut RowSpace, frontier: &mut Vec<SquareMatrix<Rational>>,
                    m: SquareMatrix<Rational>| {
        if space.insert(m.flatten()) {
            frontier.push(m);
        }
    };
    push(&mut space, &mut frontier, SquareMatrix::identity(n));
    for c in a.components() {
        push(&mut space, &mut frontier, c.clone());
    }
    while let Some(m) = frontier.pop() {
        if space.dim() == full {
            return true;
        }
        for c in a.components() {
            push(&mut space, &mut frontier, c.mul(&m));
        }
    }
    space.dim() == full
}

/// True iff the centralizer of the tuple is just the scalars.
pub fn centralizer_is_scalar(a: &MatrixTuple) -> Result<bool> {
    Ok(intertwiner_basis(a, a)?.dimension() == 1)
}

/// Outcome of the stabilizer computation for the twisted action.
#[derive(Debug, Clone)]
pub enum StabilizerOutcome {
    /// A unique g with τ(a) = g·a·g⁻¹, guaranteed self-transposed.
    Unique {
        g: ProjectiveMatrix<Rational>,
        symmetry: Symmetry,
    },
    /// No intertwiner: evidence for a trivial extended stabilizer.
    NoneExists,
    /// Degenerate sample (intertwiner space too big or singular generator);
    /// callers resample.
    Ambiguous,
}

/// Computes the unique stabilizer element g with τ_ε(a) = g·a·g⁻¹ when it
/// exists. Requires the tuple to generate Mₙ (certified general position).
pub fn stabilizer_element(eps: &SignVector, a: &MatrixTuple) -> Result<StabilizerOutcome> {
    if !generates_full_algebra(a) {
        return Err(Error::NotGenerating);
    }
    let b = tau_act(eps, a)?;
    let basis = intertwiner_basis(a, &b)?;
    match basis.dimension() {
        0 => Ok(StabilizerOutcome::NoneExists),
        1 => {
            let gen = &basis.basis()[0];
            if Zero::is_zero(&gen.determinant()) {
                return Ok(StabilizerOutcome::Ambiguous);
            }
            let g = ProjectiveMatrix::from_matrix(gen.clone())?;
            // post-verify the conjugation and self-transposedness
            if conjugate_tuple(&g, a)? != b {
                return Ok(StabilizerOutcome::Ambiguous);
            }
            let symmetry = match classify_projective_symmetry(&g) {
                ProjectiveSymmetry::Symmetric => Symmetry::Symmetric,
                ProjectiveSymmetry::Skew => Symmetry::Skew,
                ProjectiveSymmetry::NotSelfTransposed => return Ok(StabilizerOutcome::Ambiguous),
            };
            Ok(StabilizerOutcome::Unique { g, symmetry })
        }
        _ => Ok(StabilizerOutcome::Ambiguous),
    }
}

/// Canonical order-2 subgroups of the extended group used for normalizer
/// membership tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalStabilizer {
    /// {1, τ}
    Tau,
    /// {1, τ·g₀}
    TauG0,
}

/// Membership in the normalizer of the canonical stabilizer: `Tau` tests
/// gᵗ·g scalar (g ∈ PGOₙ), `TauG0` tests gᵗ·g₀·g ∝ g₀ (g ∈ PGSpₙ).
pub fn normalizer_membership(
    g: &ProjectiveMatrix<Rational>,
    canonical: CanonicalStabilizer,
) -> Result<bool> {
    let n = g.n();
    let rep = g.representative();
    match canonical {
        CanonicalStabilizer::Tau => {
            let gtg = rep.transpose().mul(rep);
            let c = gtg.get(0, 0).clone();
            Ok(!Zero::is_zero(&c) && gtg == SquareMatrix::identity(n).scale(&c))
        }
        CanonicalStabilizer::TauG0 => {
            if !n.is_multiple_of(2) {
                return Err(Error::Precondition("TauG0 requires even n".into()));
            }
            let j = SquareMatrix::symplectic_j(n)?;
            let gtjg = rep.transpose().mul(&j).mul(rep);
            let left = ProjectiveMatrix::from_matrix(gtjg)?;
            let right = ProjectiveMatrix::from_matrix(j)?;
            Ok(crate::matrix::proj_eq(&left, &right))
        }
    }
}
