use std::path::Path;

use putative::algebra::{distinct_labels, ContextSet, Fig1Operators};
use putative::analysis::{contextuality_report_for, gaussian_oracle, ReportSummary};
use putative::putative::{convolve_marginals, sample_putative};
use putative::stats::{ks_critical_value, ks_statistic};
use putative::{
    commuting_decomposition, make_gaussian, moments, quadrature_distribution, Fig1Variant,
    GridSpec, LinearForm, Rational,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::CliError;
use crate::scenario::{self, Loaded, StateSpec};

/// A file to be written under the output directory.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub file_name: String,
    pub bytes: Vec<u8>,
}

/// Everything a command produced, held in memory until the whole run has
/// succeeded.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    pub stdout: String,
    pub stderr: String,
    pub exit: i32,
}

fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("serializable report");
    bytes.push(b'\n');
    bytes
}

// ---------------------------------------------------------------- algebra

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Replaces `B` by `B' = X1 + X2 + P1 + P2`.
    CorruptB,
}

#[derive(Serialize)]
struct AlgebraReport {
    variant: &'static str,
    passed: bool,
    contexts_verified: usize,
    contexts: Vec<putative::algebra::ContextReport>,
    memberships: usize,
    distinct_labels: Vec<String>,
    middle_sum: MiddleSum,
    decompositions: DecompositionSummary,
}

#[derive(Serialize)]
struct MiddleSum {
    expression: String,
    expected: String,
    holds: bool,
}

#[derive(Serialize)]
struct DecompositionSummary {
    spot_checks: Vec<DecompositionCheck>,
    random_seed: u64,
    random_count: usize,
    random_failures: usize,
}

#[derive(Serialize)]
struct DecompositionCheck {
    alpha: String,
    beta: String,
    gamma: String,
    delta: String,
    summand_a: String,
    summand_b: String,
    commutator: String,
    holds: bool,
}

pub const DECOMPOSITION_SEED: u64 = 0x5eed;
pub const DECOMPOSITION_COUNT: usize = 1000;

fn check_decomposition(
    alpha: Rational,
    beta: Rational,
    gamma: Rational,
    delta: Rational,
) -> Result<DecompositionCheck, CliError> {
    let w = commuting_decomposition(alpha, beta, gamma, delta)?;
    let c = putative::commutator_coefficient(&w.summand_a, &w.summand_b)?;
    Ok(DecompositionCheck {
        alpha: alpha.to_string(),
        beta: beta.to_string(),
        gamma: gamma.to_string(),
        delta: delta.to_string(),
        summand_a: w.summand_a.expression(),
        summand_b: w.summand_b.expression(),
        commutator: c.to_string(),
        holds: w.verify()?,
    })
}

/// Random rational with numerator in `[-40, 40]` and denominator in `[1, 12]`.
fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.random_range(-40..=40), rng.random_range(1..=12))
}

/// Counts decompositions among `count` random instances that fail to sum to
/// their target or fail to commute.
pub fn random_decomposition_failures(count: usize, seed: u64) -> Result<usize, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut done = 0;
    while done < count {
        let (alpha, beta) = (random_rational(&mut rng), random_rational(&mut rng));
        if alpha == Rational::from_integer(0) && beta == Rational::from_integer(0) {
            continue;
        }
        let (gamma, delta) = (random_rational(&mut rng), random_rational(&mut rng));
        let w = commuting_decomposition(alpha, beta, gamma, delta)?;
        let c = putative::commutator_coefficient(&w.summand_a, &w.summand_b)?;
        if !(w.verify()? && c == Rational::from_integer(0)) {
            failures += 1;
        }
        done += 1;
    }
    Ok(failures)
}

pub fn verify_algebra(variant: Fig1Variant, fault: Option<Fault>) -> Result<Outcome, CliError> {
    let mut ops = Fig1Operators::<Rational>::new();
    if fault == Some(Fault::CorruptB) {
        let one = Rational::from_integer(1);
        ops.b = LinearForm::new(vec![one, one], vec![one, one])?.with_label("B'");
    }
    let mut contexts = ops.raw_contexts();
    if variant == Fig1Variant::AltTop {
        contexts.push(putative::algebra::alt_top_context()?);
    }
    let reports = contexts
        .iter()
        .map(ContextSet::report)
        .collect::<Result<Vec<_>, _>>()?;

    let two = Rational::from_integer(2);
    let zero = Rational::from_integer(0);
    let sum = ops.a.checked_add(&ops.b)?;
    let expected = LinearForm::new(vec![two, zero], vec![two, zero])?;
    let middle_sum = MiddleSum {
        expression: sum.expression(),
        expected: expected.expression(),
        holds: sum.same_operator(&expected),
    };

    let r = |n: i64, d: i64| Rational::new(n, d);
    let spot_checks = [
        (r(1, 1), r(1, 1), r(1, 1), r(1, 1)),
        (r(2, 1), r(2, 1), r(1, 1), r(1, 1)),
        (r(1, 1), r(0, 1), r(1, 1), r(1, 1)),
        (r(1, 1), r(-1, 1), r(3, 1), r(2, 1)),
        (r(3, 7), r(-5, 2), r(1, 3), r(-4, 9)),
    ]
    .into_iter()
    .map(|(a, b, g, d)| check_decomposition(a, b, g, d))
    .collect::<Result<Vec<_>, _>>()?;
    let random_failures = random_decomposition_failures(DECOMPOSITION_COUNT, DECOMPOSITION_SEED)?;

    let commuting = reports.iter().filter(|c| c.commuting).count();
    let passed = commuting == reports.len()
        && middle_sum.holds
        && spot_checks.iter().all(|c| c.holds)
        && random_failures == 0;

    let mut stderr = String::new();
    for c in reports.iter().filter(|c| !c.commuting) {
        for pair in &c.offending_pairs {
            stderr.push_str(&format!(
                "context {}: [{}, {}] = {} i\n",
                c.context_name, pair.first, pair.second, pair.coefficient_exact
            ));
        }
    }
    if !middle_sum.holds {
        stderr.push_str(&format!(
            "A + B = {} (expected {})\n",
            middle_sum.expression, middle_sum.expected
        ));
    }
    if random_failures > 0 {
        stderr.push_str(&format!("{random_failures} random decompositions failed\n"));
    }

    let report = AlgebraReport {
        variant: match variant {
            Fig1Variant::Standard => "standard",
            Fig1Variant::AltTop => "alt-top",
        },
        passed,
        contexts_verified: commuting,
        memberships: contexts.iter().map(|c| c.members().len()).sum(),
        distinct_labels: distinct_labels(&contexts).into_iter().collect(),
        contexts: reports,
        middle_sum,
        decompositions: DecompositionSummary {
            spot_checks,
            random_seed: DECOMPOSITION_SEED,
            random_count: DECOMPOSITION_COUNT,
            random_failures,
        },
    };
    Ok(Outcome {
        artifacts: vec![Artifact {
            file_name: "algebra.json".into(),
            bytes: json_bytes(&report),
        }],
        stdout: String::new(),
        stderr,
        exit: if passed { 0 } else { 1 },
    })
}

// ---------------------------------------------------------------- report

#[derive(Serialize)]
struct ReportFile<'a> {
    run_id: &'a str,
    verdict: &'a str,
    #[serde(flatten)]
    summary: ReportSummary,
    sigma_quantum_csv: String,
    sigma_putative_csv: String,
}

fn load_state(loaded: &Loaded) -> Result<putative::WaveFunction<f64>, CliError> {
    let psi = loaded.wavefunction()?;
    if let StateSpec::Grid { .. } = loaded.scenario.state {
        psi.check_resolved()?;
    }
    Ok(psi)
}

pub fn report(path: &Path, tolerance: Option<f64>) -> Result<Outcome, CliError> {
    let loaded = scenario::load(path)?;
    let s = &loaded.scenario;
    let tolerance = tolerance.unwrap_or(s.tolerance);
    let psi = load_state(&loaded)?;
    let report = contextuality_report_for(
        &psi,
        s.name.clone(),
        s.quadrature.alpha,
        s.quadrature.beta,
        tolerance,
    )?;
    let verdict = report.verdict_line();
    let mq = format!("{}.sigma_mq.csv", s.name);
    let pv = format!("{}.sigma_pv.csv", s.name);
    let file = ReportFile {
        run_id: &s.name,
        verdict: &verdict,
        summary: report.summary(),
        sigma_quantum_csv: mq.clone(),
        sigma_putative_csv: pv.clone(),
    };
    Ok(Outcome {
        artifacts: vec![
            Artifact {
                file_name: mq,
                bytes: report.sigma_quantum.to_csv_string().into_bytes(),
            },
            Artifact {
                file_name: pv,
                bytes: report.sigma_putative.to_csv_string().into_bytes(),
            },
            Artifact {
                file_name: format!("{}.report.json", s.name),
                bytes: json_bytes(&file),
            },
        ],
        stdout: format!("{verdict}\n"),
        stderr: String::new(),
        exit: 0,
    })
}

// ---------------------------------------------------------------- sample

#[derive(Serialize)]
struct SampleSummary<'a> {
    run_id: &'a str,
    seed: u64,
    count: usize,
    alpha: f64,
    beta: f64,
    sample_mean: f64,
    sample_variance: f64,
    predicted_mean: f64,
    predicted_variance: f64,
    /// Standard error of the sample variance under the predicted density.
    variance_standard_error: Option<f64>,
    ks_statistic: f64,
    ks_critical_1pct: f64,
    samples_csv: String,
}

pub fn sample(path: &Path) -> Result<Outcome, CliError> {
    let loaded = scenario::load(path)?;
    let s = &loaded.scenario;
    let count = s
        .sample_count
        .ok_or_else(|| CliError::schema("sample_count", "required by `sample`"))?;
    let seed = s
        .seed
        .ok_or_else(|| CliError::schema("seed", "required by `sample`"))?;
    let (alpha, beta) = (s.quadrature.alpha, s.quadrature.beta);
    if alpha == 0.0 || beta == 0.0 {
        return Err(CliError::schema(
            "quadrature",
            "sampling needs both alpha and beta nonzero",
        ));
    }
    let psi = load_state(&loaded)?;
    let rho = quadrature_distribution(&psi, alpha, 0.0)?;
    let varpi = quadrature_distribution(&psi, 0.0, beta)?;
    let predicted = convolve_marginals(&rho, &varpi)?;
    let batch = sample_putative(&rho, &varpi, count, seed)?;

    let mean = predicted.mean();
    let var = predicted.variance();
    let mu4: f64 = predicted
        .points()
        .zip(predicted.density())
        .map(|(x, d)| (x - mean).powi(4) * d)
        .sum::<f64>()
        * predicted.spacing();
    let n = count as f64;
    let variance_standard_error = (count > 1).then(|| {
        ((mu4 - var * var * (n - 3.0) / (n - 1.0)) / n)
            .max(0.0)
            .sqrt()
    });
    let mut sorted = batch.values.clone();
    let cdf = predicted.cumulative();
    let ks = ks_statistic(&mut sorted, |x| cdf.eval(x));

    let csv_name = format!("{}.samples.csv", s.name);
    let mut csv = Vec::new();
    batch.write_csv(&mut csv)?;
    let summary = SampleSummary {
        run_id: &s.name,
        seed,
        count,
        alpha,
        beta,
        sample_mean: batch.mean(),
        sample_variance: batch.variance(),
        predicted_mean: mean,
        predicted_variance: var,
        variance_standard_error,
        ks_statistic: ks,
        ks_critical_1pct: ks_critical_value(count, 0.01),
        samples_csv: csv_name.clone(),
    };
    Ok(Outcome {
        stdout: format!(
            "SAMPLED n={} mean={:.6} var={:.6} predicted_var={:.6}\n",
            count, summary.sample_mean, summary.sample_variance, var
        ),
        artifacts: vec![
            Artifact {
                file_name: csv_name,
                bytes: csv,
            },
            Artifact {
                file_name: format!("{}.sample_summary.json", s.name),
                bytes: json_bytes(&summary),
            },
        ],
        stderr: String::new(),
        exit: 0,
    })
}

// ---------------------------------------------------------------- oracle

pub const ORACLE_RELATIVE_TOL: f64 = 1e-7;
pub const UNCERTAINTY_TOL: f64 = 1e-9;

#[derive(Serialize)]
struct OracleCase {
    a: f64,
    c: f64,
    worst_relative_error: f64,
    uncertainty_product: f64,
    passed: bool,
}

#[derive(Serialize)]
struct OracleReport {
    seed: u64,
    count: usize,
    relative_tolerance: f64,
    uncertainty_tolerance: f64,
    passed: bool,
    failures: usize,
    cases: Vec<OracleCase>,
}

/// `|got - want| / max(|want|, 1)`.
pub fn relative_error(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1.0)
}

pub fn oracle_check(count: usize, seed: u64) -> Result<Outcome, CliError> {
    use rayon::prelude::*;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params: Vec<(f64, f64)> = (0..count)
        .map(|_| (rng.random_range(0.2..=5.0), rng.random_range(-3.0..=3.0)))
        .collect();
    let grid = GridSpec::<f64>::standard();
    let cases = params
        .par_iter()
        .map(|&(a, c)| {
            let m = moments(&make_gaussian(a, c, 0.0, 0.0, grid)?)?;
            let o = gaussian_oracle(a, c, 0.0, 0.0)?.moments();
            let worst = [
                (m.mean_x, o.mean_x),
                (m.mean_p, o.mean_p),
                (m.var_x, o.var_x),
                (m.var_p, o.var_p),
                (m.sym_cov, o.sym_cov),
            ]
            .into_iter()
            .map(|(g, w)| relative_error(g, w))
            .fold(0.0, f64::max);
            let product = m.uncertainty_product();
            Ok(OracleCase {
                a,
                c,
                worst_relative_error: worst,
                uncertainty_product: product,
                passed: worst <= ORACLE_RELATIVE_TOL
                    && (product - 0.25).abs() <= UNCERTAINTY_TOL
                    && (o.uncertainty_product() - 0.25).abs() <= UNCERTAINTY_TOL,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let failures = cases.iter().filter(|c| !c.passed).count();
    let report = OracleReport {
        seed,
        count,
        relative_tolerance: ORACLE_RELATIVE_TOL,
        uncertainty_tolerance: UNCERTAINTY_TOL,
        passed: failures == 0,
        failures,
        cases,
    };
    Ok(Outcome {
        stdout: String::new(),
        stderr: if failures > 0 {
            format!("{failures} of {count} states disagree with the oracle\n")
        } else {
            String::new()
        },
        artifacts: vec![Artifact {
            file_name: "oracle_check.json".into(),
            bytes: json_bytes(&report),
        }],
        exit: if failures == 0 { 0 } else { 1 },
    })
}
