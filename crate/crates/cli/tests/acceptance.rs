//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex;
use putative::algebra::Fig1Operators;
use putative::analysis::{contextuality_report, gaussian_oracle};
use putative::putative::{convolve_marginals, sample_putative};
use putative::state::{sample_eigenvector, EigenKind};
use putative::stats::{ks_critical_value, ks_statistic};
use putative::{
    commutator_coefficient, commuting_decomposition, fig1_contexts, make_gaussian, moments,
    quadrature_distribution, Fig1Variant, GridSpec, LinearForm, Rational, WaveFunction,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1.0)
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:.2?}, limit {limit:?}"))
    }
}

fn algebra() -> Outcome {
    let start = Instant::now();
    let contexts = fig1_contexts::<Rational>(Fig1Variant::Standard);
    if contexts.len() != 5 {
        return Err(format!("{} contexts", contexts.len()));
    }
    for ctx in &contexts {
        let members = ctx.members();
        for (i, l1) in members.iter().enumerate() {
            for l2 in &members[i + 1..] {
                let c = commutator_coefficient(l1, l2).map_err(|e| e.to_string())?;
                if c != Rational::from_integer(0) {
                    return Err(format!("[{l1}, {l2}] = {c} i in {}", ctx.name()));
                }
            }
        }
    }
    let ops = Fig1Operators::<Rational>::new();
    let two = Rational::from_integer(2);
    let zero = Rational::from_integer(0);
    let sum = ops.a.checked_add(&ops.b).map_err(|e| e.to_string())?;
    if !sum.same_operator(&LinearForm::new(vec![two, zero], vec![two, zero]).unwrap()) {
        return Err(format!("A + B = {}", sum.expression()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut rational = || Rational::new(rng.random_range(-60..=60), rng.random_range(1..=16));
    let mut checked = 0;
    while checked < 1000 {
        let (alpha, beta, gamma, delta) = (rational(), rational(), rational(), rational());
        if alpha == zero && beta == zero {
            continue;
        }
        let w = commuting_decomposition(alpha, beta, gamma, delta).map_err(|e| e.to_string())?;
        let c = commutator_coefficient(&w.summand_a, &w.summand_b).map_err(|e| e.to_string())?;
        if c != zero || !w.verify().map_err(|e| e.to_string())? {
            return Err(format!(
                "decomposition ({alpha}, {beta}, {gamma}, {delta}) fails"
            ));
        }
        checked += 1;
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!(
        "5 contexts commute, A+B = 2X1+2P1, 1000 decompositions commute ({elapsed:.2?})"
    ))
}

fn eigenfunctions() -> Outcome {
    let start = Instant::now();
    let grid = GridSpec::<f64>::spanning(4096, -32.0, 32.0).unwrap();
    let mut worst: f64 = 0.0;
    for k in 0..25 {
        let s = -12.0 + k as f64;
        for kind in [
            EigenKind::Quadrature {
                alpha: 1.0,
                beta: 1.0,
            },
            EigenKind::Momentum,
        ] {
            let r = sample_eigenvector(kind, s, grid)
                .and_then(|v| v.residual())
                .map_err(|e| e.to_string())?;
            worst = worst.max(r);
        }
    }
    let elapsed = start.elapsed();
    if worst >= 1e-6 {
        return Err(format!("worst residual {worst:.3e}"));
    }
    within(elapsed, Duration::from_secs(5))?;
    Ok(format!(
        "worst residual {worst:.2e} over 25 s values and 25 plane waves ({elapsed:.2?})"
    ))
}

fn oracle() -> Outcome {
    let grid = GridSpec::<f64>::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst, mut worst_product): (f64, f64) = (0.0, 0.0);
    for _ in 0..50 {
        let a = rng.random_range(0.2..=5.0);
        let c = rng.random_range(-3.0..=3.0);
        let m = make_gaussian(a, c, 0.0, 0.0, grid)
            .and_then(|psi| moments(&psi))
            .map_err(|e| e.to_string())?;
        let o = gaussian_oracle(a, c, 0.0, 0.0).map_err(|e| e.to_string())?;
        for (got, want) in [
            (m.mean_x, 0.0),
            (m.mean_p, 0.0),
            (m.var_x, o.var_x()),
            (m.var_p, o.var_p()),
            (m.sym_cov, o.sym_cov()),
        ] {
            worst = worst.max(rel(got, want));
        }
        worst_product = worst_product.max((m.uncertainty_product() - 0.25).abs());
    }
    if worst >= 1e-7 || worst_product >= 1e-9 {
        return Err(format!(
            "relative error {worst:.3e}, product error {worst_product:.3e}"
        ));
    }
    Ok(format!(
        "50 states, relative error {worst:.2e}, product error {worst_product:.2e}"
    ))
}

fn cat(grid: GridSpec<f64>, rng: &mut ChaCha8Rng) -> WaveFunction<f64> {
    let a = rng.random_range(0.5..2.0);
    let c = rng.random_range(-1.5..1.5);
    let x0 = rng.random_range(1.0..4.0);
    let p0 = rng.random_range(-1.0..1.0);
    let left = make_gaussian(a, c, -x0, p0, grid).unwrap();
    let right = make_gaussian(a, -c, x0, -p0, grid).unwrap();
    let w = Complex::from_polar(
        rng.random_range(0.3..1.0),
        rng.random_range(0.0..std::f64::consts::TAU),
    );
    left.superpose(Complex::new(1.0, 0.0), &right, w).unwrap()
}

fn variance_identity() -> Outcome {
    let grid = GridSpec::<f64>::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let psi = if k < 10 {
            let a = rng.random_range(0.3..3.0);
            let c = rng.random_range(-2.0..2.0);
            let x0 = rng.random_range(-3.0..3.0);
            let p0 = rng.random_range(-3.0..3.0);
            make_gaussian(a, c, x0, p0, grid).unwrap()
        } else {
            cat(grid, &mut rng)
        };
        let m = moments(&psi).map_err(|e| e.to_string())?;
        let sigma = quadrature_distribution(&psi, 1.0, 1.0).map_err(|e| e.to_string())?;
        let want = m.var_x + m.var_p + 2.0 * m.sym_cov;
        worst = worst.max((sigma.variance() - want).abs() / want);
    }
    if worst >= 1e-6 {
        return Err(format!("relative error {worst:.3e}"));
    }
    Ok(format!(
        "10 Gaussians and 10 cat states, relative error {worst:.2e}"
    ))
}

fn contradiction() -> Outcome {
    let grid = GridSpec::<f64>::standard();
    let start = Instant::now();
    let chirped = make_gaussian(1.0, -1.0, 0.0, 0.0, grid)
        .and_then(|psi| contextuality_report(&psi, "chirped", 1e-3))
        .map_err(|e| e.to_string())?;
    let t_chirped = start.elapsed();
    let v = &chirped.verdict;
    if (v.var_quantum - 2.5).abs() > 1e-4
        || (v.var_putative - 1.5).abs() > 1e-4
        || (v.gap - 1.0).abs() > 1e-4
        || !chirped.verdict_line().starts_with("CONTRADICTION")
    {
        return Err(format!(
            "a=1,c=-1: quantum {} putative {} gap {} ({})",
            v.var_quantum,
            v.var_putative,
            v.gap,
            chirped.verdict_line()
        ));
    }
    let start = Instant::now();
    let ground = make_gaussian(1.0, 0.0, 0.0, 0.0, grid)
        .and_then(|psi| contextuality_report(&psi, "ground", 1e-3))
        .map_err(|e| e.to_string())?;
    let t_ground = start.elapsed();
    if ground.verdict.gap.abs() > 1e-6
        || ground.tv_distance >= 1e-6
        || !ground.verdict_line().starts_with("CONSISTENT")
    {
        return Err(format!(
            "a=1,c=0: gap {} tv {} ({})",
            ground.verdict.gap,
            ground.tv_distance,
            ground.verdict_line()
        ));
    }
    within(t_chirped, Duration::from_secs(2))?;
    within(t_ground, Duration::from_secs(2))?;
    Ok(format!(
        "chirped: {} (var {:.6}/{:.6}); ground: gap {:.1e} tv {:.1e} {}",
        chirped.verdict_line(),
        v.var_quantum,
        v.var_putative,
        ground.verdict.gap,
        ground.tv_distance,
        ground.verdict_line()
    ))
}

fn sampler() -> Outcome {
    let psi = make_gaussian(1.0, -1.0, 0.0, 0.0, GridSpec::<f64>::standard())
        .map_err(|e| e.to_string())?;
    let rho = quadrature_distribution(&psi, 1.0, 0.0).map_err(|e| e.to_string())?;
    let varpi = quadrature_distribution(&psi, 0.0, 1.0).map_err(|e| e.to_string())?;
    let cdf = convolve_marginals(&rho, &varpi)
        .map_err(|e| e.to_string())?
        .cumulative();
    let n = 100_000;
    let critical = ks_critical_value(n, 0.01);
    let mut passes = 0;
    let mut worst: f64 = 0.0;
    for seed in 0..100 {
        let mut batch = sample_putative(&rho, &varpi, n, seed).map_err(|e| e.to_string())?;
        let d = ks_statistic(&mut batch.values, |s| cdf.eval(s));
        worst = worst.max(d);
        if d < critical {
            passes += 1;
        }
    }
    let summary = format!("{passes}/100 seeds below critical {critical:.5} (worst D {worst:.5})");
    if passes >= 95 {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn brute_force() -> Outcome {
    let grid = GridSpec::<f64>::spanning(128, -12.0, 12.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let a = rng.random_range(0.6..1.6);
        let c = rng.random_range(-0.8..0.8);
        let x0 = rng.random_range(-1.5..1.5);
        let p0 = rng.random_range(-1.5..1.5);
        let psi = make_gaussian(a, c, x0, p0, grid).map_err(|e| e.to_string())?;
        let sigma = quadrature_distribution(&psi, 1.0, 1.0).map_err(|e| e.to_string())?;
        for (s, d) in sigma.points().zip(sigma.density()) {
            let eta = sample_eigenvector(
                EigenKind::Quadrature {
                    alpha: 1.0,
                    beta: 1.0,
                },
                s,
                grid,
            )
            .map_err(|e| e.to_string())?;
            let direct = eta.overlap(&psi).map_err(|e| e.to_string())?.norm_sqr();
            worst = worst.max((direct - d).abs());
        }
    }
    if worst >= 1e-8 {
        return Err(format!("max density difference {worst:.3e}"));
    }
    Ok(format!(
        "5 states on n=128, max density difference {worst:.2e}"
    ))
}

fn run(args: &[&str], cwd: &Path) -> Result<(), String> {
    let o = Command::new(env!("CARGO_BIN_EXE_putative"))
        .args(args)
        .current_dir(cwd)
        .output()
        .map_err(|e| e.to_string())?;
    if o.status.success() {
        Ok(())
    } else {
        Err(format!("{args:?}: {}", String::from_utf8_lossy(&o.stderr)))
    }
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn determinism() -> Outcome {
    let tmp = TempDir::new().map_err(|e| e.to_string())?;
    let scenarios = tmp.path().join("scenarios");
    fs::create_dir(&scenarios).map_err(|e| e.to_string())?;
    for (name, a, c) in [
        ("chirped", 1.0, -1.0),
        ("ground", 1.0, 0.0),
        ("squeezed", 2.5, 0.7),
    ] {
        let text = format!(
            r#"{{"name": "{name}", "state": {{"family": "gaussian", "a": {a:?}, "c": {c:?}}},
                "grid": {{"n": 4096, "x_min": -32.0, "dx": 0.015625}},
                "quadrature": {{"alpha": 1.0, "beta": 1.0}},
                "sample_count": 200000, "seed": 17}}"#
        );
        fs::write(scenarios.join(format!("{name}.json")), text).map_err(|e| e.to_string())?;
    }
    for out in ["run1", "run2"] {
        run(&["report", "--all", "scenarios", "--out", out], tmp.path())?;
        run(&["sample", "--all", "scenarios", "--out", out], tmp.path())?;
        run(
            &[
                "report",
                "scenarios/chirped.json",
                "--out",
                &format!("{out}-single"),
            ],
            tmp.path(),
        )?;
        run(
            &[
                "sample",
                "scenarios/chirped.json",
                "--out",
                &format!("{out}-single"),
            ],
            tmp.path(),
        )?;
    }
    let mut compared = 0;
    for (a, b) in [("run1", "run2"), ("run1-single", "run2-single")] {
        let (sa, sb) = (snapshot(&tmp.path().join(a)), snapshot(&tmp.path().join(b)));
        if sa != sb {
            return Err(format!("{a} and {b} differ"));
        }
        compared += sa.len();
    }
    // a single run and a directory run of the same scenario agree too
    let single = snapshot(&tmp.path().join("run1-single"));
    let all = snapshot(&tmp.path().join("run1"));
    for (name, bytes) in &single {
        if all.iter().find(|(n, _)| n == name).map(|(_, b)| b) != Some(bytes) {
            return Err(format!("{name} differs between single and --all runs"));
        }
    }
    Ok(format!(
        "{compared} report/sample files byte-identical across repeated runs"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("algebra suite", algebra),
        ("eigenfunction suite", eigenfunctions),
        ("oracle validation", oracle),
        ("quadrature variance identity", variance_identity),
        ("contradiction reproduction", contradiction),
        ("convolution/sampler agreement", sampler),
        ("chirp vs brute force", brute_force),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
