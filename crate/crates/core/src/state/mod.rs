//! Discretized single-mode states and their quantum distributions.
//!
//! The position, momentum and quadrature densities are
//! `|<phi_x, psi>|^2`, `|<phi_p, psi>|^2` and `|<eta_s, psi>|^2`. The
//! quadrature density of `alpha X + beta P` is computed as the momentum
//! density of the chirped state `exp(i alpha x^2 / (2 beta)) psi(x)`,
//! rescaled by `beta`.

mod eigen;
pub mod spectral;

pub use eigen::{sample_eigenvector, EigenKind, GeneralizedEigenvector};

use num_complex::Complex;
use serde::Serialize;

use crate::algebra::LinearForm;
use crate::distribution::{Distribution, Variable};
use crate::error::{Error, Result};
use crate::grid::{GridSpec, Lattice, EDGE_MASS_THRESHOLD};
use crate::scalar::{AlgebraScalar, Real};

use spectral::{apply_quadrature, momentum_amplitudes, BandLimited};

/// Tolerance on the squared norm after normalization.
pub const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction<T> {
    grid: GridSpec<T>,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> WaveFunction<T> {
    /// Normalizes `amplitudes` and checks that the position density stays
    /// away from the grid edges.
    pub fn new(grid: GridSpec<T>, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.len() != grid.n() {
            return Err(Error::invalid(format!(
                "{} amplitudes for a grid of {} points",
                amplitudes.len(),
                grid.n()
            )));
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::invalid("amplitudes must be finite"));
        }
        let norm_sq = amplitudes.iter().map(|z| z.norm_sqr()).sum::<T>() * grid.dx();
        if !(norm_sq > T::zero()) {
            return Err(Error::invalid("state has zero norm"));
        }
        let scale = T::one() / norm_sq.sqrt();
        let psi = Self {
            grid,
            amplitudes: amplitudes.into_iter().map(|z| z.scale(scale)).collect(),
        };
        psi.check_position_resolved()?;
        Ok(psi)
    }

    pub fn from_fn(grid: GridSpec<T>, f: impl Fn(T) -> Complex<T>) -> Result<Self> {
        let amps = grid.xs().map(f).collect();
        Self::new(grid, amps)
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<T>() * self.grid.dx()
    }

    pub fn with_global_phase(&self, theta: T) -> Self {
        let phase = Complex::from_polar(T::one(), theta);
        Self {
            grid: self.grid,
            amplitudes: self.amplitudes.iter().map(|z| z * phase).collect(),
        }
    }

    /// Normalized `c1 psi1 + c2 psi2` on a shared grid.
    pub fn superpose(&self, c1: Complex<T>, other: &Self, c2: Complex<T>) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::invalid("superposition requires a common grid"));
        }
        let amps = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a * c1 + b * c2)
            .collect();
        Self::new(self.grid, amps)
    }

    /// Probability in the outer edge bands of the position grid.
    pub fn position_edge_mass(&self) -> T {
        edge_mass(&self.amplitudes, self.grid.edge_points(), self.grid.dx())
    }

    /// Probability in the outer edge bands of the momentum lattice.
    pub fn momentum_edge_mass(&self) -> T {
        let amps = momentum_amplitudes(&self.grid, &self.amplitudes);
        edge_mass(&amps, self.grid.edge_points(), self.grid.dp())
    }

    pub fn check_position_resolved(&self) -> Result<()> {
        check_edge("state (position)", self.position_edge_mass())
    }

    pub fn check_momentum_resolved(&self) -> Result<()> {
        check_edge("state (momentum)", self.momentum_edge_mass())
    }

    pub fn check_resolved(&self) -> Result<()> {
        self.check_position_resolved()?;
        self.check_momentum_resolved()
    }

    /// `psi~(p_j)` on the ascending momentum lattice.
    pub fn momentum_amplitudes(&self) -> Vec<Complex<T>> {
        momentum_amplitudes(&self.grid, &self.amplitudes)
    }

    /// Band-limited evaluation of `psi` between grid points.
    pub fn interpolator(&self) -> BandLimited<T> {
        BandLimited::new(&self.grid, &self.amplitudes)
    }
}

fn edge_mass<T: Real>(amps: &[Complex<T>], edge: usize, spacing: T) -> T {
    let n = amps.len();
    amps[..edge]
        .iter()
        .chain(&amps[n - edge..])
        .map(|z| z.norm_sqr())
        .sum::<T>()
        * spacing
}

fn check_edge<T: Real>(what: &str, mass: T) -> Result<()> {
    if mass < T::lit(EDGE_MASS_THRESHOLD) {
        Ok(())
    } else {
        Err(Error::Resolution {
            what: what.to_string(),
            edge_mass: mass.to_f64_lossy(),
            threshold: EDGE_MASS_THRESHOLD,
        })
    }
}

/// `psi(x) ~ exp(-(a + i c)(x - x0)^2 / 2 + i p0 x)`, normalized.
pub fn make_gaussian<T: Real>(
    a: T,
    c: T,
    x0: T,
    p0: T,
    grid: GridSpec<T>,
) -> Result<WaveFunction<T>> {
    if !(a > T::zero()) || !a.is_finite() {
        return Err(Error::invalid(format!(
            "gaussian width parameter a = {a} must be positive"
        )));
    }
    if !(c.is_finite() && x0.is_finite() && p0.is_finite()) {
        return Err(Error::invalid("gaussian parameters must be finite"));
    }
    let half = T::lit(0.5);
    let psi = WaveFunction::from_fn(grid, |x| {
        let d = x - x0;
        let exponent = Complex::new(-a * d * d * half, -c * d * d * half + p0 * x);
        exponent.exp()
    })?;
    psi.check_momentum_resolved()?;
    Ok(psi)
}

/// `rho(x_k) = |psi(x_k)|^2`.
pub fn position_distribution<T: Real>(psi: &WaveFunction<T>) -> Distribution<T> {
    let density = psi.amplitudes.iter().map(|z| z.norm_sqr()).collect();
    Distribution::from_parts(Variable::X, psi.grid.position_lattice(), density)
}

/// `varpi(p_j) = |psi~(p_j)|^2` on the centered momentum lattice.
pub fn momentum_distribution<T: Real>(psi: &WaveFunction<T>) -> Result<Distribution<T>> {
    momentum_density_of(&psi.grid, &psi.amplitudes, "state (momentum)")
}

fn momentum_density_of<T: Real>(
    grid: &GridSpec<T>,
    amplitudes: &[Complex<T>],
    what: &str,
) -> Result<Distribution<T>> {
    let amps = momentum_amplitudes(grid, amplitudes);
    check_edge(what, edge_mass(&amps, grid.edge_points(), grid.dp()))?;
    let density = amps.iter().map(|z| z.norm_sqr()).collect();
    Ok(Distribution::from_parts(
        Variable::P,
        grid.momentum_lattice(),
        density,
    ))
}

/// Density of the quadrature `alpha X + beta P`.
///
/// For `beta != 0` the lattice is `s_j = beta p_j` (sorted ascending); for
/// `beta == 0` it is `s_k = alpha x_k` and the density is `rho(s/alpha)/|alpha|`.
pub fn quadrature_distribution<T: Real>(
    psi: &WaveFunction<T>,
    alpha: T,
    beta: T,
) -> Result<Distribution<T>> {
    if !(alpha.is_finite() && beta.is_finite()) {
        return Err(Error::invalid("quadrature coefficients must be finite"));
    }
    if alpha == T::zero() && beta == T::zero() {
        return Err(Error::invalid(
            "quadrature alpha X + beta P must be nonzero",
        ));
    }
    if beta == T::zero() {
        return Ok(position_distribution(psi)
            .rescaled(alpha)?
            .with_variable(Variable::S));
    }
    let varpi = if alpha == T::zero() {
        momentum_distribution(psi)?
    } else {
        let rate = alpha / (beta + beta);
        let chirped: Vec<Complex<T>> = psi
            .grid
            .xs()
            .zip(&psi.amplitudes)
            .map(|(x, z)| z * Complex::from_polar(T::one(), rate * x * x))
            .collect();
        momentum_density_of(&psi.grid, &chirped, "chirped state (momentum)")?
    };
    Ok(varpi.rescaled(beta)?.with_variable(Variable::S))
}

/// Density of `alpha X` evaluated on an arbitrary lattice through the
/// band-limited interpolant of `psi`, renormalized on that lattice.
pub fn scaled_position_distribution_on<T: Real>(
    psi: &WaveFunction<T>,
    alpha: T,
    lattice: &Lattice<T>,
) -> Result<Distribution<T>> {
    if alpha == T::zero() || !alpha.is_finite() {
        return Err(Error::invalid("position scale must be finite and nonzero"));
    }
    let interp = psi.interpolator();
    let inv = T::one() / alpha;
    let density = lattice
        .points()
        .map(|s| interp.eval(s * inv).norm_sqr())
        .collect();
    Distribution::normalized(Variable::X, *lattice, density)
}

/// `(alpha X + beta P) psi` on the grid for a single-mode form.
pub fn apply_linear_form<T: Real, S: AlgebraScalar>(
    form: &LinearForm<S>,
    psi: &[Complex<T>],
    grid: &GridSpec<T>,
) -> Result<Vec<Complex<T>>> {
    let (alpha, beta) = form.single_mode().ok_or_else(|| {
        Error::Unsupported(format!(
            "grid engine is single-mode; form has {} modes",
            form.n_modes()
        ))
    })?;
    if psi.len() != grid.n() {
        return Err(Error::invalid("vector length does not match grid"));
    }
    let to_t = |s: S| {
        s.to_f64()
            .map(T::lit)
            .ok_or_else(|| Error::invalid("coefficient not representable as float"))
    };
    Ok(apply_quadrature(grid, to_t(alpha)?, to_t(beta)?, psi))
}

/// Means, variances and the symmetrized covariance
/// `C = (<XP + PX> - 2 <X><P>) / 2` of a state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentSummary<T> {
    pub mean_x: T,
    pub mean_p: T,
    pub var_x: T,
    pub var_p: T,
    pub sym_cov: T,
}

impl<T: Real> MomentSummary<T> {
    /// `var_x var_p - C^2`, at least 1/4 for any state.
    pub fn uncertainty_product(&self) -> T {
        self.var_x * self.var_p - self.sym_cov * self.sym_cov
    }

    /// Variance of `alpha X + beta P`.
    pub fn quadrature_variance(&self, alpha: T, beta: T) -> T {
        alpha * alpha * self.var_x
            + beta * beta * self.var_p
            + (alpha + alpha) * beta * self.sym_cov
    }
}

pub fn moments<T: Real>(psi: &WaveFunction<T>) -> Result<MomentSummary<T>> {
    psi.check_resolved()?;
    let rho = position_distribution(psi);
    let varpi = momentum_distribution(psi)?;
    let mean_x = rho.mean();
    let mean_p = varpi.mean();
    let p_psi = apply_quadrature(&psi.grid, T::zero(), T::one(), &psi.amplitudes);
    // <psi, X P psi>
    let xp: T = psi
        .grid
        .xs()
        .zip(&psi.amplitudes)
        .zip(&p_psi)
        .map(|((x, z), pz)| (z.conj() * pz).re * x)
        .sum::<T>()
        * psi.grid.dx();
    Ok(MomentSummary {
        mean_x,
        mean_p,
        var_x: rho.variance(),
        var_p: varpi.variance(),
        sym_cov: xp - mean_x * mean_p,
    })
}
