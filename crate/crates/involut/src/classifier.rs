//! End-to-end classification: sample general-position tuples of a named
//! family, compute stabilizer elements, and emit a kind/type verdict with
//! per-trial witnesses.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{
    conjugate_tuple, matrix_to_json, sample_projective, sample_tuple, tau_act, Family,
    MatrixTuple, ProjectiveMatrix, SignVector, SquareMatrix, Symmetry,
};
use crate::ncpoly::derive_seed;
use crate::scalar::{rat_int, Rational};
use crate::stabilizer::{generates_full_algebra, stabilizer_element, StabilizerOutcome};

pub const DEFAULT_TRIALS: u64 = 5;
pub const RETRY_CAP: u32 = 8;
pub const SAMPLING_BOUND: i64 = 10;

/// A named family of tuples together with the sign twist defining the
/// involution under study.
#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub n: usize,
    pub m: usize,
    pub family: Family,
    pub signs: SignVector,
}

impl FamilySpec {
    /// Full family with the given signs; other families fix all-+1 signs.
    pub fn new(n: usize, m: usize, family: Family, signs: Option<SignVector>) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidInput("m must be ≥ 2".into()));
        }
        if n < 2 {
            return Err(Error::InvalidInput("n must be ≥ 2".into()));
        }
        if family == Family::SymplecticComponents && !n.is_multiple_of(2) {
            return Err(Error::InvalidInput("symplectic family requires even n".into()));
        }
        let signs = match (family, signs) {
            (Family::Full, Some(s)) => {
                if s.len() != m {
                    return Err(Error::InvalidInput("sign vector length must equal m".into()));
                }
                s
            }
            (Family::Full, None) => SignVector::all_plus(m),
            (_, Some(_)) => {
                return Err(Error::InvalidInput(
                    "signs are only configurable for the full family".into(),
                ))
            }
            (_, None) => SignVector::all_plus(m),
        };
        Ok(FamilySpec { n, m, family, signs })
    }
}

/// The classification verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    SecondKindUnitary,
    FirstKindOrthogonal,
    FirstKindSymplectic,
    Inconclusive,
    NotGenerating,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::SecondKindUnitary => "SecondKindUnitary",
            Verdict::FirstKindOrthogonal => "FirstKindOrthogonal",
            Verdict::FirstKindSymplectic => "FirstKindSymplectic",
            Verdict::Inconclusive => "Inconclusive",
            Verdict::NotGenerating => "NotGenerating",
        }
    }
}

/// One trial's outcome.
#[derive(Debug, Clone)]
pub enum TrialOutcome {
    Unique {
        g: ProjectiveMatrix<Rational>,
        symmetry: Symmetry,
    },
    NoneExists,
    /// All retries hit degenerate samples.
    Ambiguous,
    /// All retries failed the generation certificate.
    NotGenerating,
}

#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub trial_seed: u64,
    pub outcome: TrialOutcome,
}

#[derive(Debug, Clone)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    pub trials: Vec<TrialRecord>,
    /// "1", "{1,tau}", or "{1,tau.g0}" for the three stabilizer classes.
    pub canonical_stabilizer: Option<&'static str>,
}

fn run_trial(spec: &FamilySpec, trial_seed: u64) -> Result<TrialOutcome> {
    let mut saw_ambiguous = false;
    for attempt in 0..RETRY_CAP {
        let sample_seed = derive_seed(trial_seed, attempt as u64);
        let mut a = sample_tuple(spec.n, spec.m, spec.family, SAMPLING_BOUND, sample_seed)?;
        if spec.family != Family::Full {
            // conjugate by a random projective matrix to exercise covariance
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(sample_seed, 0xC0));
            let h = sample_projective(spec.n, SAMPLING_BOUND, &mut rng);
            a = conjugate_tuple(&h, &a)?;
        }
        if !generates_full_algebra(&a) {
            continue;
        }
        match stabilizer_element(&spec.signs, &a)? {
            StabilizerOutcome::Unique { g, symmetry } => {
                return Ok(TrialOutcome::Unique { g, symmetry })
            }
            StabilizerOutcome::NoneExists => return Ok(TrialOutcome::NoneExists),
            StabilizerOutcome::Ambiguous => {
                saw_ambiguous = true;
                continue;
            }
        }
    }
    Ok(if saw_ambiguous {
        TrialOutcome::Ambiguous
    } else {
        TrialOutcome::NotGenerating
    })
}

fn verdict_from_trials(trials: &[TrialRecord]) -> (Verdict, Option<&'static str>) {
    let mut all_none = true;
    let mut all_sym = true;
    let mut all_skew = true;
    let mut all_not_generating = true;
    for t in trials {
        match &t.outcome {
            TrialOutcome::NoneExists => {
                all_sym = false;
                all_skew = false;
                all_not_generating = false;
            }
            TrialOutcome::Unique { symmetry, .. } => {
                all_none = false;
                all_not_generating = false;
                match symmetry {
                    Symmetry::Symmetric => all_skew = false,
                    Symmetry::Skew => all_sym = false,
                }
            }
            TrialOutcome::NotGenerating => {
                all_none = false;
                all_sym = false;
                all_skew = false;
            }
            TrialOutcome::Ambiguous => {
                all_none = false;
                all_sym = false;
                all_skew = false;
                all_not_generating = false;
            }
        }
    }
    if all_not_generating {
        (Verdict::NotGenerating, None)
    } else if all_none {
        (Verdict::SecondKindUnitary, Some("1"))
    } else if all_sym {
        (Verdict::FirstKindOrthogonal, Some("{1,tau}"))
    } else if all_skew {
        (Verdict::FirstKindSymplectic, Some("{1,tau.g0}"))
    } else {
        (Verdict::Inconclusive, None)
    }
}

/// Classifies the involution attached to the family by running independent
/// seeded trials; a verdict requires unanimity across trials.
pub fn classify_involution(spec: &FamilySpec, trials: u64, seed: u64) -> Result<ClassificationReport> {
    #[cfg(feature = "parallel")]
    {
        classify_involution_parallel(spec, trials, seed)
    }
    #[cfg(not(feature = "parallel"))]
    {
        classify_involution_sequential(spec, trials, seed)
    }
}

/// Sequential trial loop; identical output to the parallel path because
/// per-trial seeds derive from the master seed.
pub fn classify_involution_sequential(
    spec: &FamilySpec,
    trials: u64,
    seed: u64,
) -> Result<ClassificationReport> {
    if trials < 1 {
        return Err(Error::Precondition("trials must be ≥ 1".into()));
    }
    let records = (0..trials)
        .map(|t| {
            let trial_seed = derive_seed(seed, t);
            run_trial(spec, trial_seed).map(|outcome| TrialRecord { trial_seed, outcome })
        })
        .collect::<Result<Vec<_>>>()?;
    let (verdict, canonical) = verdict_from_trials(&records);
    Ok(ClassificationReport { verdict, trials: records, canonical_stabilizer: canonical })
}

/// Rayon-parallel trial loop; trial order and per-trial seeds are fixed, so
/// the report is schedule-independent.
#[cfg(feature = "parallel")]
pub fn classify_involution_parallel(
    spec: &FamilySpec,
    trials: u64,
    seed: u64,
) -> Result<ClassificationReport> {
    use rayon::prelude::*;
    if trials < 1 {
        return Err(Error::Precondition("trials must be ≥ 1".into()));
    }
    let records = (0..trials)
        .into_par_iter()
        .map(|t| {
            let trial_seed = derive_seed(seed, t);
            run_trial(spec, trial_seed).map(|outcome| TrialRecord { trial_seed, outcome })
        })
        .collect::<Result<Vec<_>>>()?;
    let (verdict, canonical) = verdict_from_trials(&records);
    Ok(ClassificationReport { verdict, trials: records, canonical_stabilizer: canonical })
}

/// Verifies that τ(x) lies in the PGLₙ-orbit of a sampled general-position
/// x by exhibiting the unique intertwiner. Only meaningful for first-kind
/// families, which is checked first.
pub fn orbit_dichotomy_check(spec: &FamilySpec, seed: u64) -> Result<bool> {
    let report = classify_involution(spec, DEFAULT_TRIALS, seed)?;
    match report.verdict {
        Verdict::FirstKindOrthogonal | Verdict::FirstKindSymplectic => {}
        v => {
            return Err(Error::Precondition(format!(
                "family is not of the first kind (verdict {})",
                v.as_str()
            )))
        }
    }
    for attempt in 0..RETRY_CAP {
        let sample_seed = derive_seed(seed ^ 0x0D1C, attempt as u64);
        let mut a = sample_tuple(spec.n, spec.m, spec.family, SAMPLING_BOUND, sample_seed)?;
        if spec.family != Family::Full {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(sample_seed, 0xC0));
            let h = sample_projective(spec.n, SAMPLING_BOUND, &mut rng);
            a = conjugate_tuple(&h, &a)?;
        }
        if !generates_full_algebra(&a) {
            continue;
        }
        if let StabilizerOutcome::Unique { g, .. } = stabilizer_element(&spec.signs, &a)? {
            return Ok(tau_act(&spec.signs, &a)? == conjugate_tuple(&g, &a)?);
        }
    }
    Ok(false)
}

/// Outcome of the explicit 2×2 walkthrough: the stabilizer element of
/// y = (diag(λ,μ), [[a,b],[c,d]]) is the image of diag(c,b).
#[derive(Debug, Clone)]
pub struct Ud22Walkthrough {
    pub g: ProjectiveMatrix<Rational>,
    pub conjugation_matches_transpose: bool,
    pub g_is_symmetric: bool,
}

/// Builds the 2×2 point from the six parameters, applies g = diag(c,b), and
/// checks g·y·g⁻¹ = yᵗ and that g is symmetric.
#[allow(clippy::many_single_char_names)]
pub fn ud22_section6_walkthrough(
    lambda: &Rational,
    mu: &Rational,
    a: &Rational,
    b: &Rational,
    c: &Rational,
    d: &Rational,
) -> Result<Ud22Walkthrough> {
    use num_traits::Zero;
    if lambda == mu {
        return Err(Error::Precondition("λ must differ from μ".into()));
    }
    if Zero::is_zero(b) || Zero::is_zero(c) {
        return Err(Error::Precondition("both b and c must be nonzero".into()));
    }
    let y1 = SquareMatrix::from_rows(vec![
        vec![lambda.clone(), rat_int(0)],
        vec![rat_int(0), mu.clone()],
    ])?;
    let y2 = SquareMatrix::from_rows(vec![
        vec![a.clone(), b.clone()],
        vec![c.clone(), d.clone()],
    ])?;
    let y = MatrixTuple::new(vec![y1, y2])?;
    let g = ProjectiveMatrix::from_matrix(SquareMatrix::from_rows(vec![
        vec![c.clone(), rat_int(0)],
        vec![rat_int(0), b.clone()],
    ])?)?;
    let conj = conjugate_tuple(&g, &y)?;
    let conjugation_matches_transpose = conj == y.transpose();
    let g_is_symmetric = matches!(
        crate::matrix::classify_projective_symmetry(&g),
        crate::matrix::ProjectiveSymmetry::Symmetric
    );
    Ok(Ud22Walkthrough { g, conjugation_matches_transpose, g_is_symmetric })
}

/// JSON report: verdict, per-trial seeds and stabilizer representatives.
pub fn report_to_json(spec: &FamilySpec, seed: u64, report: &ClassificationReport) -> serde_json::Value {
    let family = match spec.family {
        Family::Full => "full",
        Family::SymmetricComponents => "sym",
        Family::SymplecticComponents => "symp",
    };
    let trials: Vec<serde_json::Value> = report
        .trials
        .iter()
        .map(|t| {
            let (outcome, symmetry, g) = match &t.outcome {
                TrialOutcome::Unique { g, symmetry } => (
                    "unique",
                    Some(match symmetry {
                        Symmetry::Symmetric => "symmetric",
                        Symmetry::Skew => "skew",
                    }),
                    Some(matrix_to_json(g.representative())),
                ),
                TrialOutcome::NoneExists => ("none", None, None),
                TrialOutcome::Ambiguous => ("ambiguous", None, None),
                TrialOutcome::NotGenerating => ("not-generating", None, None),
            };
            let mut obj = serde_json::json!({
                "trial_seed": t.trial_seed,
                "outcome": outcome,
            });
            if let Some(s) = symmetry {
                obj["symmetry"] = serde_json::json!(s);
            }
            if let Some(g) = g {
                obj["stabilizer"] = g;
            }
            obj
        })
        .collect();
    serde_json::json!({
        "schema": "involut/1",
        "command": "classify",
        "n": spec.n,
        "m": spec.m,
        "family": family,
        "signs": spec.signs.signs(),
        "seed": seed,
        "verdict": report.verdict.as_str(),
        "canonical_stabilizer": report.canonical_stabilizer,
        "trials": trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::proj_eq;
    use crate::scalar::rat_int;

    fn spec(n: usize, m: usize, family: Family) -> FamilySpec {
        FamilySpec::new(n, m, family, None).unwrap()
    }

    #[test]
    fn kind_table_small() {
        let r = classify_involution(&spec(2, 2, Family::Full), 5, 7).unwrap();
        assert_eq!(r.verdict, Verdict::FirstKindOrthogonal);
        let r = classify_involution(&spec(2, 3, Family::Full), 5, 7).unwrap();
        assert_eq!(r.verdict, Verdict::SecondKindUnitary);
        let r = classify_involution(&spec(3, 2, Family::Full), 5, 7).unwrap();
        assert_eq!(r.verdict, Verdict::SecondKindUnitary);
    }

    #[test]
    fn symplectic_family_detection() {
        let r = classify_involution(&spec(4, 4, Family::SymplecticComponents), 3, 11).unwrap();
        assert_eq!(r.verdict, Verdict::FirstKindSymplectic);
        assert_eq!(r.canonical_stabilizer, Some("{1,tau.g0}"));
        // n = 2 symplectic components are scalar multiples of I
        let r = classify_involution(&spec(2, 2, Family::SymplecticComponents), 3, 11).unwrap();
        assert_eq!(r.verdict, Verdict::NotGenerating);
        // components conjugate to their transpose by a skew matrix are
        // skew-Hamiltonian up to congruence, so at n = 4 each satisfies a
        // quadratic and fewer than four of them span too small an algebra
        for m in [2usize, 3] {
            let r =
                classify_involution(&spec(4, m, Family::SymplecticComponents), 3, 11).unwrap();
            assert_eq!(r.verdict, Verdict::NotGenerating);
        }
    }

    #[test]
    fn symmetric_family_detection() {
        let r = classify_involution(&spec(3, 2, Family::SymmetricComponents), 3, 11).unwrap();
        assert_eq!(r.verdict, Verdict::FirstKindOrthogonal);
        assert_eq!(r.canonical_stabilizer, Some("{1,tau}"));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let s = spec(2, 2, Family::Full);
        let a = classify_involution_sequential(&s, 4, 99).unwrap();
        let b = classify_involution(&s, 4, 99).unwrap();
        assert_eq!(a.verdict, b.verdict);
        assert_eq!(
            a.trials.iter().map(|t| t.trial_seed).collect::<Vec<_>>(),
            b.trials.iter().map(|t| t.trial_seed).collect::<Vec<_>>()
        );
    }

    #[test]
    fn verdict_is_seed_invariant() {
        for seed in [1u64, 12345] {
            let r = classify_involution(&spec(2, 2, Family::Full), 5, seed).unwrap();
            assert_eq!(r.verdict, Verdict::FirstKindOrthogonal);
        }
    }

    #[test]
    fn mixed_signs_are_second_kind() {
        let signs = SignVector::new(vec![1, -1]).unwrap();
        let s = FamilySpec::new(2, 2, Family::Full, Some(signs)).unwrap();
        let r = classify_involution(&s, 3, 5).unwrap();
        assert_eq!(r.verdict, Verdict::SecondKindUnitary);
    }

    #[test]
    fn orbit_dichotomy_examples() {
        assert!(orbit_dichotomy_check(&spec(3, 2, Family::SymmetricComponents), 3).unwrap());
        assert!(orbit_dichotomy_check(&spec(2, 2, Family::Full), 3).unwrap());
        assert!(matches!(
            orbit_dichotomy_check(&spec(3, 2, Family::Full), 3),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn ud22_walkthrough_examples() {
        let w = ud22_section6_walkthrough(
            &rat_int(1), &rat_int(2), &rat_int(0), &rat_int(1), &rat_int(2), &rat_int(0),
        )
        .unwrap();
        let expected =
            ProjectiveMatrix::from_matrix(SquareMatrix::from_i64(&[&[2, 0], &[0, 1]])).unwrap();
        assert!(proj_eq(&w.g, &expected));
        assert!(w.conjugation_matches_transpose);
        assert!(w.g_is_symmetric);

        let w = ud22_section6_walkthrough(
            &rat_int(1), &rat_int(-1), &rat_int(5), &rat_int(1), &rat_int(1), &rat_int(5),
        )
        .unwrap();
        assert!(proj_eq(&w.g, &ProjectiveMatrix::identity(2)));
        assert!(w.conjugation_matches_transpose);

        assert!(matches!(
            ud22_section6_walkthrough(
                &rat_int(1), &rat_int(1), &rat_int(0), &rat_int(1), &rat_int(2), &rat_int(0),
            ),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(FamilySpec::new(2, 1, Family::Full, None).is_err());
        assert!(FamilySpec::new(3, 2, Family::SymplecticComponents, None).is_err());
    }
}
