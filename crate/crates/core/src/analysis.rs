//! Comparison of the quantum density of a quadrature with the putative one.

use serde::Serialize;

use crate::distribution::{Distribution, Variable};
use crate::error::{Error, Result};
use crate::putative::{convolve_marginals_onto, variance_verdict_for, VarianceVerdict};
use crate::scalar::Real;
use crate::state::{
    moments, quadrature_distribution, scaled_position_distribution_on, MomentSummary, WaveFunction,
};

/// Default threshold on both the variance gap and the TV distance.
pub const DEFAULT_TOLERANCE: f64 = 1e-3;

/// Half the L1 distance between two densities on the same lattice.
pub fn total_variation<T: Real>(d1: &Distribution<T>, d2: &Distribution<T>) -> Result<T> {
    if !d1.lattice().aligned_with(d2.lattice()) {
        return Err(Error::lattice("total variation needs aligned lattices"));
    }
    let l1: T = d1
        .density()
        .iter()
        .zip(d2.density())
        .map(|(a, b)| (*a - *b).abs())
        .sum();
    Ok(T::lit(0.5) * l1 * d1.spacing())
}

/// Closed-form moments of `exp(-(a + i c)(x - x0)^2 / 2 + i p0 x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianOracle<T> {
    pub a: T,
    pub c: T,
    pub x0: T,
    pub p0: T,
}

pub fn gaussian_oracle<T: Real>(a: T, c: T, x0: T, p0: T) -> Result<GaussianOracle<T>> {
    if !(a > T::zero()) || !a.is_finite() {
        return Err(Error::invalid(format!(
            "gaussian width parameter a = {a} must be positive"
        )));
    }
    Ok(GaussianOracle { a, c, x0, p0 })
}

impl<T: Real> GaussianOracle<T> {
    pub fn var_x(&self) -> T {
        T::one() / (self.a + self.a)
    }

    pub fn var_p(&self) -> T {
        (self.a * self.a + self.c * self.c) / (self.a + self.a)
    }

    pub fn sym_cov(&self) -> T {
        -self.c / (self.a + self.a)
    }

    pub fn var_s_quantum(&self) -> T {
        self.var_x() + self.var_p() + self.sym_cov() + self.sym_cov()
    }

    pub fn var_s_putative(&self) -> T {
        self.var_x() + self.var_p()
    }

    pub fn moments(&self) -> MomentSummary<T> {
        MomentSummary {
            mean_x: self.x0,
            mean_p: self.p0,
            var_x: self.var_x(),
            var_p: self.var_p(),
            sym_cov: self.sym_cov(),
        }
    }
}

/// Which criteria flagged a contradiction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Fired {
    /// `|gap| > tolerance`.
    pub dispersion: bool,
    /// `tv_distance > tolerance`.
    pub distribution: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContextualityReport<T> {
    pub state: String,
    pub alpha: T,
    pub beta: T,
    pub tolerance: T,
    pub moments: MomentSummary<T>,
    pub sigma_quantum: Distribution<T>,
    pub sigma_putative: Distribution<T>,
    pub verdict: VarianceVerdict<T>,
    pub tv_distance: T,
    pub fired: Fired,
    pub ks_pvalue_note: Option<String>,
}

impl<T: Real> ContextualityReport<T> {
    pub fn contradiction(&self) -> bool {
        self.fired.dispersion || self.fired.distribution
    }

    /// Machine-parsable one-line verdict.
    pub fn verdict_line(&self) -> String {
        format!(
            "{} gap={} tv={}",
            if self.contradiction() {
                "CONTRADICTION"
            } else {
                "CONSISTENT"
            },
            fixed6(self.verdict.gap.to_f64_lossy()),
            fixed6(self.tv_distance.to_f64_lossy())
        )
    }

    pub fn summary(&self) -> ReportSummary {
        let f = |v: T| v.to_f64_lossy();
        ReportSummary {
            state: self.state.clone(),
            alpha: f(self.alpha),
            beta: f(self.beta),
            tolerance: f(self.tolerance),
            mean_x: f(self.moments.mean_x),
            mean_p: f(self.moments.mean_p),
            var_x: f(self.moments.var_x),
            var_p: f(self.moments.var_p),
            sym_cov: f(self.moments.sym_cov),
            var_quantum: f(self.verdict.var_quantum),
            var_putative: f(self.verdict.var_putative),
            gap: f(self.verdict.gap),
            correlation_term: f(self.verdict.correlation_term),
            sigma_quantum_variance: f(self.sigma_quantum.variance()),
            sigma_putative_variance: f(self.sigma_putative.variance()),
            tv_distance: f(self.tv_distance),
            fired: self.fired,
            contradiction: self.contradiction(),
            ks_pvalue_note: self.ks_pvalue_note.clone(),
        }
    }
}

/// Six decimals, without a sign on values that round to zero.
fn fixed6(v: f64) -> String {
    let s = format!("{v:.6}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

/// Scalar part of a report, for JSON output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportSummary {
    pub state: String,
    pub alpha: f64,
    pub beta: f64,
    pub tolerance: f64,
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
    pub sym_cov: f64,
    pub var_quantum: f64,
    pub var_putative: f64,
    pub gap: f64,
    pub correlation_term: f64,
    pub sigma_quantum_variance: f64,
    pub sigma_putative_variance: f64,
    pub tv_distance: f64,
    pub fired: Fired,
    pub contradiction: bool,
    pub ks_pvalue_note: Option<String>,
}

/// Report for `S = X + P`.
pub fn contextuality_report<T: Real>(
    psi: &WaveFunction<T>,
    state: impl Into<String>,
    tolerance: T,
) -> Result<ContextualityReport<T>> {
    contextuality_report_for(psi, state, T::one(), T::one(), tolerance)
}

/// Report for `alpha X + beta P`.
///
/// The putative density is built on the quantum density's own lattice:
/// the density of `alpha x` is evaluated there through the band-limited
/// interpolant of `psi`, the density of `beta p` already lives there, and
/// the convolution is projected back without interpolation.
pub fn contextuality_report_for<T: Real>(
    psi: &WaveFunction<T>,
    state: impl Into<String>,
    alpha: T,
    beta: T,
    tolerance: T,
) -> Result<ContextualityReport<T>> {
    let m = moments(psi)?;
    let sigma_quantum = quadrature_distribution(psi, alpha, beta)?;
    let sigma_putative = if alpha == T::zero() || beta == T::zero() {
        // one marginal is a point mass at zero
        sigma_quantum.clone()
    } else {
        let lattice = *sigma_quantum.lattice();
        let x_part = scaled_position_distribution_on(psi, alpha, &lattice)?;
        let p_part = quadrature_distribution(psi, T::zero(), beta)?;
        convolve_marginals_onto(&x_part, &p_part, &lattice)?
    }
    .with_variable(Variable::S);
    let verdict = variance_verdict_for(&m, alpha, beta, tolerance);
    let tv_distance = total_variation(&sigma_quantum, &sigma_putative)?;
    let fired = Fired {
        dispersion: verdict.gap.abs() > tolerance,
        distribution: tv_distance > tolerance,
    };
    let ks_pvalue_note = (fired.distribution && !fired.dispersion)
        .then(|| "densities differ beyond tolerance although the variances agree".to_string());
    Ok(ContextualityReport {
        state: state.into(),
        alpha,
        beta,
        tolerance,
        moments: m,
        sigma_quantum,
        sigma_putative,
        verdict,
        tv_distance,
        fired,
        ks_pvalue_note,
    })
}
