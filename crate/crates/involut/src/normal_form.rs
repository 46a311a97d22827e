//! Congruence normal forms: invertible symmetric matrices to the identity
//! (over a quadratic tower), invertible skew matrices to J (over ℚ), and
//! the canonicalization of τ·g in the extended group.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::{
    classify_projective_symmetry, ProjectiveMatrix, ProjectiveSymmetry, SquareMatrix,
};
use crate::scalar::{adjoin_sqrt, Rational, TowerContext, TowerScalar};
use crate::stabilizer::CanonicalStabilizer;

/// Congruence b·s·bᵗ = I for an invertible symmetric s. Returns b over the
/// tower obtained by adjoining the square roots of the diagonal pivots.
pub fn sym_congruence_to_identity(
    s: &SquareMatrix<Rational>,
) -> Result<(SquareMatrix<TowerScalar>, Arc<TowerContext>)> {
    if !s.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if Zero::is_zero(&s.determinant()) {
        return Err(Error::Singular);
    }
    let n = s.n();
    let mut a = s.clone();
    let mut b = SquareMatrix::<Rational>::identity(n);

    // symmetric row+column operation: row_i += f·row_j, col_i += f·col_j
    let add_sym = |a: &mut SquareMatrix<Rational>, b: &mut SquareMatrix<Rational>,
                   i: usize, j: usize, f: &Rational| {
        for c in 0..n {
            let v = a.get(i, c) + a.get(j, c) * f;
            a.set(i, c, v);
            let v = b.get(i, c) + b.get(j, c) * f;
            b.set(i, c, v);
        }
        for r in 0..n {
            let v = a.get(r, i) + a.get(r, j) * f;
            a.set(r, i, v);
        }
    };
    let swap_sym = |a: &mut SquareMatrix<Rational>, b: &mut SquareMatrix<Rational>,
                    i: usize, j: usize| {
        for c in 0..n {
            let (x, y) = (a.get(i, c).clone(), a.get(j, c).clone());
            a.set(i, c, y);
            a.set(j, c, x);
            let (x, y) = (b.get(i, c).clone(), b.get(j, c).clone());
            b.set(i, c, y);
            b.set(j, c, x);
        }
        for r in 0..n {
            let (x, y) = (a.get(r, i).clone(), a.get(r, j).clone());
            a.set(r, i, y);
            a.set(r, j, x);
        }
    };

    for t in 0..n {
        if Zero::is_zero(a.get(t, t)) {
            // prefer a later nonzero diagonal entry
            if let Some(k) = (t + 1..n).find(|&k| !Zero::is_zero(a.get(k, k))) {
                swap_sym(&mut a, &mut b, t, k);
            } else {
                // all remaining diagonal entries vanish: a_{ij} ≠ 0 exists
                // since the remaining block is nonsingular; adding row+col j
                // to i creates diagonal entry 2·a_{ij} (characteristic 0)
                let mut found = None;
                'search: for i in t..n {
                    for j in i + 1..n {
                        if !Zero::is_zero(a.get(i, j)) {
                            found = Some((i, j));
                            break 'search;
                        }
                    }
                }
                let (i, j) = found.ok_or(Error::Singular)?;
                let one = crate::scalar::rat_int(1);
                add_sym(&mut a, &mut b, i, j, &one);
                if i != t {
                    swap_sym(&mut a, &mut b, t, i);
                }
            }
        }
        let pivot = a.get(t, t).clone();
        for r in t + 1..n {
            if !Zero::is_zero(a.get(r, t)) {
                let f = -(a.get(r, t) / &pivot);
                add_sym(&mut a, &mut b, r, t, &f);
            }
        }
    }

    // a is now diag(d_1,…,d_n) with b·s·bᵗ = a; scale by 1/√d_t
    let mut ctx = Arc::new(TowerContext::rational());
    let mut scales: Vec<TowerScalar> = Vec::with_capacity(n);
    for t in 0..n {
        let d = a.get(t, t).clone();
        if Zero::is_zero(&d) {
            return Err(Error::Singular);
        }
        let (new_ctx, root) = adjoin_sqrt(&ctx, &d)?;
        ctx = new_ctx;
        // 1/√d = √d / d
        let inv = root.try_mul(&TowerScalar::from_rational(d.recip()))?;
        scales.push(inv);
    }
    let scales = scales
        .into_iter()
        .map(|s| s.lift_to(&ctx))
        .collect::<Result<Vec<_>>>()?;
    let mut out = SquareMatrix::<TowerScalar>::zero(n);
    for (i, scale) in scales.iter().enumerate() {
        for j in 0..n {
            let entry =
                scale.try_mul(&TowerScalar::from_rational(b.get(i, j).clone()).lift_to(&ctx)?)?;
            out.set(i, j, entry);
        }
    }
    Ok((out, ctx))
}

/// Congruence b·w·bᵗ = J for an invertible skew-symmetric w; the symplectic
/// basis construction needs only rational division, so b stays over ℚ.
pub fn skew_congruence_to_j(w: &SquareMatrix<Rational>) -> Result<SquareMatrix<Rational>> {
    if !w.is_skew() {
        return Err(Error::NotSkew);
    }
    let n = w.n();
    if !n.is_multiple_of(2) || Zero::is_zero(&w.determinant()) {
        return Err(Error::Singular);
    }
    let form = |x: &[Rational], y: &[Rational]| -> Rational {
        let mut acc = <Rational as Zero>::zero();
        for (i, xi) in x.iter().enumerate() {
            if Zero::is_zero(xi) {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                acc += xi * w.get(i, j) * yj;
            }
        }
        acc
    };
    let mut remaining: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { crate::scalar::rat_int(1) } else { <Rational as Zero>::zero() })
                .collect()
        })
        .collect();
    let mut us: Vec<Vec<Rational>> = Vec::with_capacity(n / 2);
    let mut vs: Vec<Vec<Rational>> = Vec::with_capacity(n / 2);
    while !remaining.is_empty() {
        let u = remaining.remove(0);
        let Some(pos) = remaining.iter().position(|z| !Zero::is_zero(&form(&u, z))) else {
            return Err(Error::Singular);
        };
        let mut v = remaining.remove(pos);
        let c = form(&u, &v);
        let cinv = c.recip();
        for x in v.iter_mut() {
            *x *= &cinv;
        }
        // make the rest orthogonal to the pair: z ← z − B(u,z)·v + B(v,z)·u
        for z in remaining.iter_mut() {
            let bu = form(&u, z);
            let bv = form(&v, z);
            for i in 0..n {
                let adj = &v[i] * &bu - &u[i] * &bv;
                z[i] -= adj;
            }
        }
        us.push(u);
        vs.push(v);
    }
    let rows: Vec<Vec<Rational>> = us.into_iter().chain(vs).collect();
    SquareMatrix::from_rows(rows)
}

/// Conjugates τ·g to its canonical form: h with hᵗ·g·h = 1 projectively
/// (symmetric g) or hᵗ·g·h = g₀ projectively (skew g).
pub fn canonicalize_tau_g(
    g: &ProjectiveMatrix<Rational>,
) -> Result<(ProjectiveMatrix<TowerScalar>, CanonicalStabilizer)> {
    match classify_projective_symmetry(g) {
        ProjectiveSymmetry::Symmetric => {
            let (b, _ctx) = sym_congruence_to_identity(g.representative())?;
            // hᵗ·g·h = b·g·bᵗ = I for h = bᵗ
            let h = b.transpose();
            Ok((ProjectiveMatrix::new(h)?, CanonicalStabilizer::Tau))
        }
        ProjectiveSymmetry::Skew => {
            let b = skew_congruence_to_j(g.representative())?;
            let h = b.transpose().map(|r| TowerScalar::from_rational(r.clone()));
            Ok((ProjectiveMatrix::new(h)?, CanonicalStabilizer::TauG0))
        }
        ProjectiveSymmetry::NotSelfTransposed => Err(Error::NotSelfTransposed),
    }
}

/// Lifts a rational matrix into a tower context, for exact residual checks.
pub fn lift_matrix(
    m: &SquareMatrix<Rational>,
    ctx: &Arc<TowerContext>,
) -> Result<SquareMatrix<TowerScalar>> {
    let n = m.n();
    let mut out = SquareMatrix::<TowerScalar>::zero(n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, TowerScalar::from_rational(m.get(i, j).clone()).lift_to(ctx)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::proj_eq;
    use crate::scalar::{rat, rat_int, Scalar};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check_sym_residual(s: &SquareMatrix<Rational>) {
        let (b, ctx) = sym_congruence_to_identity(s).unwrap();
        let s_t = lift_matrix(s, &ctx).unwrap();
        let res = b.mul(&s_t).mul(&b.transpose());
        assert_eq!(res, SquareMatrix::<TowerScalar>::identity(s.n()));
    }

    fn check_skew_residual(w: &SquareMatrix<Rational>) {
        let b = skew_congruence_to_j(w).unwrap();
        let j = SquareMatrix::symplectic_j(w.n()).unwrap();
        assert_eq!(b.mul(w).mul(&b.transpose()), j);
    }

    #[test]
    fn sym_identity_is_fixed() {
        let (b, ctx) = sym_congruence_to_identity(&SquareMatrix::identity(3)).unwrap();
        assert_eq!(ctx.depth(), 0);
        assert_eq!(b, SquareMatrix::<TowerScalar>::identity(3));
    }

    #[test]
    fn sym_diagonal_squares() {
        // diag(4,9) → b = diag(1/2,1/3), no extension
        let s = SquareMatrix::from_i64(&[&[4, 0], &[0, 9]]);
        let (b, ctx) = sym_congruence_to_identity(&s).unwrap();
        assert_eq!(ctx.depth(), 0);
        let expected = SquareMatrix::from_rows(vec![
            vec![TowerScalar::from_rational(rat(1, 2)), <TowerScalar as Scalar>::zero()],
            vec![<TowerScalar as Scalar>::zero(), TowerScalar::from_rational(rat(1, 3))],
        ])
        .unwrap();
        assert_eq!(b, expected);
        check_sym_residual(&s);
    }

    #[test]
    fn sym_hyperbolic_plane_needs_radicals() {
        // [[0,1],[1,0]] forces the zero-diagonal fallback
        let s = SquareMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let (_, ctx) = sym_congruence_to_identity(&s).unwrap();
        assert!(ctx.depth() >= 1);
        check_sym_residual(&s);
    }

    #[test]
    fn sym_rejects_bad_input() {
        let ns = SquareMatrix::from_i64(&[&[0, 1], &[2, 0]]);
        assert!(matches!(sym_congruence_to_identity(&ns), Err(Error::NotSymmetric)));
        let sing = SquareMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        assert!(matches!(sym_congruence_to_identity(&sing), Err(Error::Singular)));
    }

    #[test]
    fn skew_examples() {
        let j = SquareMatrix::symplectic_j(2).unwrap();
        assert_eq!(skew_congruence_to_j(&j).unwrap(), SquareMatrix::identity(2));
        let w = SquareMatrix::from_i64(&[&[0, 2], &[-2, 0]]);
        check_skew_residual(&w);
        let ni = SquareMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert!(matches!(skew_congruence_to_j(&ni), Err(Error::NotSkew)));
    }

    fn random_symmetric_invertible(n: usize, rng: &mut ChaCha8Rng) -> SquareMatrix<Rational> {
        loop {
            let mut s = SquareMatrix::zero(n);
            for i in 0..n {
                for j in i..n {
                    let v = rat_int(rng.gen_range(-10..=10));
                    s.set(i, j, v.clone());
                    s.set(j, i, v);
                }
            }
            if !Zero::is_zero(&s.determinant()) {
                return s;
            }
        }
    }

    fn random_skew_invertible(n: usize, rng: &mut ChaCha8Rng) -> SquareMatrix<Rational> {
        loop {
            let mut w = SquareMatrix::zero(n);
            for i in 0..n {
                for j in i + 1..n {
                    let v = rat_int(rng.gen_range(-10..=10));
                    w.set(i, j, v.clone());
                    w.set(j, i, -v);
                }
            }
            if !Zero::is_zero(&w.determinant()) {
                return w;
            }
        }
    }

    #[test]
    fn random_residuals_and_tower_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for n in 2..=5 {
            for _ in 0..10 {
                let s = random_symmetric_invertible(n, &mut rng);
                let (_, ctx) = sym_congruence_to_identity(&s).unwrap();
                assert!(ctx.depth() <= n);
                check_sym_residual(&s);
            }
        }
        for n in [2usize, 4, 6] {
            for _ in 0..10 {
                let w = random_skew_invertible(n, &mut rng);
                check_skew_residual(&w);
            }
        }
    }

    #[test]
    fn canonicalize_examples() {
        let (h, c) = canonicalize_tau_g(&ProjectiveMatrix::identity(2)).unwrap();
        assert_eq!(c, CanonicalStabilizer::Tau);
        assert!(proj_eq(&h, &ProjectiveMatrix::identity(2)));
        let g0 = ProjectiveMatrix::g0(2).unwrap();
        let (h, c) = canonicalize_tau_g(&g0).unwrap();
        assert_eq!(c, CanonicalStabilizer::TauG0);
        assert!(proj_eq(&h, &ProjectiveMatrix::identity(2)));
    }

    #[test]
    fn canonicalize_diag21() {
        // hᵗ·g·h ∝ I over a tower containing √2
        let g = ProjectiveMatrix::from_matrix(SquareMatrix::from_i64(&[&[2, 0], &[0, 1]])).unwrap();
        let (h, c) = canonicalize_tau_g(&g).unwrap();
        assert_eq!(c, CanonicalStabilizer::Tau);
        let ctx = h.representative().get(0, 0).context().clone();
        let g_t = lift_matrix(g.representative(), &ctx).unwrap();
        let prod = h.representative().transpose().mul(&g_t).mul(h.representative());
        let lhs = ProjectiveMatrix::new(prod).unwrap();
        let rhs = ProjectiveMatrix::<TowerScalar>::identity(2);
        assert!(proj_eq(&lhs, &rhs));
    }

    #[test]
    fn canonicalize_rejects_non_self_transposed() {
        let g = ProjectiveMatrix::from_matrix(SquareMatrix::from_i64(&[&[1, 1], &[0, 1]])).unwrap();
        assert!(matches!(canonicalize_tau_g(&g), Err(Error::NotSelfTransposed)));
    }
}
