//! Command-line front end: classification, stabilizer queries, normal
//! forms, golden witnesses, and a self-test suite, all with reproducible
//! seeds and JSON output.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use involut::classifier::{
    classify_involution, report_to_json, ud22_section6_walkthrough, FamilySpec, Verdict,
    DEFAULT_TRIALS,
};
use involut::error::Error;
use involut::matrix::{
    classify_projective_symmetry, matrix_from_json, matrix_to_json, proj_eq, proj_transpose,
    sample_tuple, tau_act, tuple_from_json, Family, ProjectiveMatrix, SignVector, SquareMatrix,
};
use involut::ncpoly::{trace_eval, trace_identity_test, NcPoly, TraceIdentity};
use involut::normal_form::{lift_matrix, skew_congruence_to_j, sym_congruence_to_identity};
use involut::scalar::{rat_int, rat_to_string, tower_scalar_to_json, TowerScalar};
use involut::stabilizer::{generates_full_algebra, stabilizer_element, StabilizerOutcome};

const SCHEMA: &str = "involut/1";

#[derive(Parser)]
#[command(name = "involut", version, about = "Exact involution classification on matrix-tuple group actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Full,
    Sym,
    Symp,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Full => Family::Full,
            FamilyArg::Sym => Family::SymmetricComponents,
            FamilyArg::Symp => Family::SymplecticComponents,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Identity,
    J,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the involution attached to a sampled tuple family.
    Classify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Comma-separated signs, e.g. "+,-" or "1,-1" (full family only).
        #[arg(long)]
        signs: Option<String>,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compute the stabilizer element of a tuple read from JSON.
    Stabilizer {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        signs: Option<String>,
    },
    /// Congruence normal form of a symmetric (identity) or skew (J) matrix.
    NormalForm {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        target: TargetArg,
    },
    /// Golden trace and walkthrough computations.
    Witness {
        #[arg(long)]
        name: String,
    },
    /// Run the property suite.
    Selftest,
}

fn parse_signs(s: &str, m: usize) -> Result<SignVector, Error> {
    let signs = s
        .split(',')
        .map(|tok| match tok.trim() {
            "+" | "1" | "+1" => Ok(1i8),
            "-" | "-1" | "−" | "−1" => Ok(-1i8),
            other => Err(Error::InvalidInput(format!("bad sign {other:?}"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if signs.len() != m {
        return Err(Error::InvalidInput(format!(
            "expected {m} signs, got {}",
            signs.len()
        )));
    }
    SignVector::new(signs)
}

fn read_json(path: &PathBuf) -> Result<serde_json::Value, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("malformed JSON: {e}")))
}

fn run() -> Result<u8, Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Classify { n, m, family, signs, trials, seed } => {
            let family: Family = family.into();
            let signs = signs.map(|s| parse_signs(&s, m)).transpose()?;
            let spec = FamilySpec::new(n, m, family, signs)?;
            let report = classify_involution(&spec, trials, seed)?;
            let mut out = report_to_json(&spec, seed, &report);
            out["trials_requested"] = serde_json::json!(trials);
            println!("{}", serde_json::to_string(&out).unwrap());
            Ok(match report.verdict {
                Verdict::Inconclusive | Verdict::NotGenerating => 3,
                _ => 0,
            })
        }
        Command::Stabilizer { input, signs } => {
            let v = read_json(&input)?;
            let (tuple, file_signs) = tuple_from_json(&v)?;
            let signs = match signs {
                Some(s) => parse_signs(&s, tuple.m())?,
                None => file_signs.unwrap_or_else(|| SignVector::all_plus(tuple.m())),
            };
            let generates = generates_full_algebra(&tuple);
            let mut out = serde_json::json!({
                "schema": SCHEMA,
                "command": "stabilizer",
                "n": tuple.n(),
                "m": tuple.m(),
                "signs": signs.signs(),
                "generates_full_algebra": generates,
            });
            if !generates {
                out["outcome"] = serde_json::json!("not-generating");
                println!("{}", serde_json::to_string(&out).unwrap());
                return Ok(3);
            }
            let code = match stabilizer_element(&signs, &tuple)? {
                StabilizerOutcome::Unique { g, symmetry } => {
                    out["outcome"] = serde_json::json!("unique");
                    out["stabilizer"] = matrix_to_json(g.representative());
                    out["symmetry"] = serde_json::json!(match symmetry {
                        involut::matrix::Symmetry::Symmetric => "symmetric",
                        involut::matrix::Symmetry::Skew => "skew",
                    });
                    0
                }
                StabilizerOutcome::NoneExists => {
                    out["outcome"] = serde_json::json!("none");
                    0
                }
                StabilizerOutcome::Ambiguous => {
                    out["outcome"] = serde_json::json!("ambiguous");
                    3
                }
            };
            println!("{}", serde_json::to_string(&out).unwrap());
            Ok(code)
        }
        Command::NormalForm { input, target } => {
            let v = read_json(&input)?;
            let m = matrix_from_json(&v)?;
            let mut out = serde_json::json!({
                "schema": SCHEMA,
                "command": "normal-form",
                "n": m.n(),
            });
            match target {
                TargetArg::Identity => {
                    let (b, ctx) = sym_congruence_to_identity(&m)?;
                    let lifted = lift_matrix(&m, &ctx)?;
                    let residual = b
                        .mul(&lifted)
                        .mul(&b.transpose())
                        .sub(&SquareMatrix::<TowerScalar>::identity(m.n()));
                    out["target"] = serde_json::json!("identity");
                    out["radicands"] = serde_json::json!(ctx
                        .radicands()
                        .iter()
                        .map(|d| d.to_string())
                        .collect::<Vec<_>>());
                    let rows: Vec<Vec<serde_json::Value>> = (0..m.n())
                        .map(|i| (0..m.n()).map(|j| tower_scalar_to_json(b.get(i, j))).collect())
                        .collect();
                    out["b"] = serde_json::json!(rows);
                    out["residual_zero"] = serde_json::json!(residual.is_zero());
                }
                TargetArg::J => {
                    let b = skew_congruence_to_j(&m)?;
                    let j = SquareMatrix::symplectic_j(m.n())?;
                    let residual = b.mul(&m).mul(&b.transpose()).sub(&j);
                    out["target"] = serde_json::json!("J");
                    out["b"] = matrix_to_json(&b);
                    out["residual_zero"] = serde_json::json!(residual.is_zero());
                }
            }
            println!("{}", serde_json::to_string(&out).unwrap());
            Ok(0)
        }
        Command::Witness { name } => {
            let out = match name.as_str() {
                "tr-xyz" => witness_tr_xyz()?,
                "tr-xy-deg6" => witness_tr_xy_deg6()?,
                "ud22-center" => witness_ud22_center()?,
                other => {
                    return Err(Error::InvalidInput(format!(
                        "unknown witness {other:?} (expected tr-xyz, tr-xy-deg6, ud22-center)"
                    )))
                }
            };
            println!("{}", serde_json::to_string(&out).unwrap());
            Ok(0)
        }
        Command::Selftest => {
            let (out, ok) = selftest();
            println!("{}", serde_json::to_string(&out).unwrap());
            Ok(if ok { 0 } else { 1 })
        }
    }
}

/// tr(XYZ) vs tr(ZYX) at (e₁₂, e₂₂, e₂₁) for n = 3.
fn witness_tr_xyz() -> Result<serde_json::Value, Error> {
    let a = involut::matrix::MatrixTuple::new(vec![
        SquareMatrix::unit(3, 1, 2),
        SquareMatrix::unit(3, 2, 2),
        SquareMatrix::unit(3, 2, 1),
    ])?;
    let xyz = NcPoly::monomial(3, &[1, 2, 3], rat_int(1));
    let zyx = NcPoly::monomial(3, &[3, 2, 1], rat_int(1));
    let t1 = trace_eval(&xyz, &a)?;
    let t2 = trace_eval(&zyx, &a)?;
    Ok(serde_json::json!({
        "schema": SCHEMA,
        "command": "witness",
        "name": "tr-xyz",
        "tr_XYZ": rat_to_string(&t1),
        "tr_ZYX": rat_to_string(&t2),
        "equal": t1 == t2,
    }))
}

/// tr(XYX²Y²) vs tr(Y²X²YX) at (e₁₂+e₂₃, e₁₂+e₃₁) for n = 3.
fn witness_tr_xy_deg6() -> Result<serde_json::Value, Error> {
    let x = SquareMatrix::unit(3, 1, 2).add(&SquareMatrix::unit(3, 2, 3));
    let y = SquareMatrix::unit(3, 1, 2).add(&SquareMatrix::unit(3, 3, 1));
    let a = involut::matrix::MatrixTuple::new(vec![x, y])?;
    let p = NcPoly::monomial(2, &[1, 2, 1, 1, 2, 2], rat_int(1));
    let q = NcPoly::monomial(2, &[2, 2, 1, 1, 2, 1], rat_int(1));
    let t1 = trace_eval(&p, &a)?;
    let t2 = trace_eval(&q, &a)?;
    Ok(serde_json::json!({
        "schema": SCHEMA,
        "command": "witness",
        "name": "tr-xy-deg6",
        "tr_XYX2Y2": rat_to_string(&t1),
        "tr_Y2X2YX": rat_to_string(&t2),
        "equal": t1 == t2,
    }))
}

/// tr(XY) = tr(YX) as a trace identity at n = 2, plus the explicit 2×2
/// stabilizer walkthrough.
fn witness_ud22_center() -> Result<serde_json::Value, Error> {
    let x = NcPoly::var(2, 1);
    let y = NcPoly::var(2, 2);
    let xy = x.mul(&y);
    let yx = y.mul(&x);
    let identity = matches!(
        trace_identity_test(&xy, &yx, 2, 50, 7)?,
        TraceIdentity::Identity
    );
    let w = ud22_section6_walkthrough(
        &rat_int(1),
        &rat_int(2),
        &rat_int(0),
        &rat_int(1),
        &rat_int(2),
        &rat_int(0),
    )?;
    Ok(serde_json::json!({
        "schema": SCHEMA,
        "command": "witness",
        "name": "ud22-center",
        "tr_XY_equals_tr_YX": identity,
        "walkthrough_g": matrix_to_json(w.g.representative()),
        "walkthrough_conjugation_ok": w.conjugation_matches_transpose,
        "walkthrough_g_symmetric": w.g_is_symmetric,
    }))
}

fn selftest() -> (serde_json::Value, bool) {
    let mut checks: Vec<(String, bool)> = Vec::new();
    let mut record = |name: &str, ok: bool| checks.push((name.to_string(), ok));

    // τ² = 1 and mixed equivariance on random samples
    {
        use involut::matrix::sample_projective;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mut tau_ok = true;
        let mut equiv_ok = true;
        for trial in 0..25 {
            let a = sample_tuple(3, 2, Family::Full, 5, trial).unwrap();
            let eps = SignVector::new(vec![1, -1]).unwrap();
            let t = tau_act(&eps, &a).unwrap();
            tau_ok &= tau_act(&eps, &t).unwrap() == a;
            let h = sample_projective(3, 5, &mut rng);
            let lhs = tau_act(&eps, &involut::matrix::conjugate_tuple(&h, &a).unwrap()).unwrap();
            let rhs = involut::matrix::conjugate_tuple(&proj_transpose(&h).inverse(), &t).unwrap();
            equiv_ok &= lhs == rhs;
        }
        record("tau_involutive", tau_ok);
        record("mixed_equivariance", equiv_ok);
    }
    // reversal involution laws and the evaluation identity
    {
        use involut::ncpoly::{eval, rho};
        let mut ok_rho = true;
        let mut ok_eval = true;
        for trial in 0..25 {
            let p = NcPoly::monomial(2, &[1, 2, 1], rat_int(2))
                .add(&NcPoly::monomial(2, &[2, 2], rat_int(trial as i64 - 10)));
            let q = NcPoly::monomial(2, &[2, 1], rat_int(3));
            ok_rho &= rho(&p.mul(&q)) == rho(&q).mul(&rho(&p)) && rho(&rho(&p)) == p;
            let a = sample_tuple(3, 2, Family::Full, 5, trial).unwrap();
            ok_eval &= eval(&rho(&p), &a).unwrap() == eval(&p, &a.transpose()).unwrap().transpose();
        }
        record("rho_anti_automorphism", ok_rho);
        record("rho_eval_identity", ok_eval);
    }
    // congruence normal forms have exactly zero residuals
    {
        let s = SquareMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let ok = match sym_congruence_to_identity(&s) {
            Ok((b, ctx)) => {
                let lifted = lift_matrix(&s, &ctx).unwrap();
                b.mul(&lifted).mul(&b.transpose()) == SquareMatrix::<TowerScalar>::identity(2)
            }
            Err(_) => false,
        };
        record("sym_congruence_residual", ok);
        let w = SquareMatrix::from_i64(&[&[0, 2], &[-2, 0]]);
        let ok = match skew_congruence_to_j(&w) {
            Ok(b) => b.mul(&w).mul(&b.transpose()) == SquareMatrix::symplectic_j(2).unwrap(),
            Err(_) => false,
        };
        record("skew_congruence_residual", ok);
    }
    // kind table spot checks
    {
        let spec = FamilySpec::new(2, 2, Family::Full, None).unwrap();
        let r = classify_involution(&spec, 3, 7).unwrap();
        record("classify_2_2_orthogonal", r.verdict == Verdict::FirstKindOrthogonal);
        let spec = FamilySpec::new(3, 2, Family::Full, None).unwrap();
        let r = classify_involution(&spec, 3, 7).unwrap();
        record("classify_3_2_unitary", r.verdict == Verdict::SecondKindUnitary);
    }
    // projective symmetry classes are congruence-stable
    {
        let g0 = ProjectiveMatrix::g0(2).unwrap();
        let h = ProjectiveMatrix::from_matrix(SquareMatrix::from_i64(&[&[1, 2], &[0, 1]])).unwrap();
        let hght = h.mul(&g0).mul(&proj_transpose(&h));
        record(
            "congruence_stability",
            classify_projective_symmetry(&hght) == involut::matrix::ProjectiveSymmetry::Skew
                && proj_eq(&proj_transpose(&g0), &g0),
        );
    }

    let all_ok = checks.iter().all(|(_, ok)| *ok);
    let list: Vec<serde_json::Value> = checks
        .iter()
        .map(|(name, ok)| serde_json::json!({ "check": name, "pass": ok }))
        .collect();
    (
        serde_json::json!({
            "schema": SCHEMA,
            "command": "selftest",
            "checks": list,
            "pass": all_ok,
        }),
        all_ok,
    )
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let out = serde_json::json!({
                "schema": SCHEMA,
                "error": e.to_string(),
            });
            eprintln!("{}", serde_json::to_string(&out).unwrap());
            ExitCode::from(2)
        }
    }
}
