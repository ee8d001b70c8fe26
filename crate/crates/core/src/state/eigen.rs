//! Grid samples of generalized eigenvectors of `X`, `P` and `alpha X + beta P`.

use num_complex::Complex;

use super::spectral::apply_quadrature;
use super::WaveFunction;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::scalar::Real;

/// Fraction of the grid at each edge where the residual taper ramps down.
const TAPER_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EigenKind<T> {
    Position,
    Momentum,
    Quadrature { alpha: T, beta: T },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedEigenvector<T> {
    kind: EigenKind<T>,
    eigenvalue: T,
    grid: GridSpec<T>,
    amplitudes: Vec<Complex<T>>,
}

/// Samples the closed-form eigenfunction on `grid`.
///
/// * position: Kronecker column of height `1/dx` at the nearest grid point;
/// * momentum: `exp(i p x) / sqrt(2 pi)`;
/// * quadrature, `beta != 0`:
///   `e^{i pi/8} (2 pi |beta|)^{-1/2} exp(-i ((alpha x - s)^2 - s^2/2) / (2 alpha beta))`,
///   written so that `alpha = 0` stays finite. For `alpha = beta = 1` this is
///   `e^{i pi/8} (2 pi)^{-1/2} exp(-i ((x - s)^2/2 - s^2/4))`;
/// * quadrature, `beta == 0`: Kronecker column at `s/alpha` of height
///   `1/(sqrt|alpha| dx)`.
pub fn sample_eigenvector<T: Real>(
    kind: EigenKind<T>,
    eigenvalue: T,
    grid: GridSpec<T>,
) -> Result<GeneralizedEigenvector<T>> {
    let n = grid.n();
    let zero = Complex::new(T::zero(), T::zero());
    let inv_sqrt_tau = T::one() / T::TAU().sqrt();
    let amplitudes = match kind {
        EigenKind::Position => {
            let k = grid.nearest_index(eigenvalue)?;
            let mut v = vec![zero; n];
            v[k] = Complex::new(T::one() / grid.dx(), T::zero());
            v
        }
        EigenKind::Momentum => {
            check_momentum_range(&grid, eigenvalue)?;
            grid.xs()
                .map(|x| Complex::from_polar(inv_sqrt_tau, eigenvalue * x))
                .collect()
        }
        EigenKind::Quadrature { alpha, beta } => {
            if alpha == T::zero() && beta == T::zero() {
                return Err(Error::invalid(
                    "quadrature alpha X + beta P must be nonzero",
                ));
            }
            if beta == T::zero() {
                let k = grid.nearest_index(eigenvalue / alpha)?;
                let mut v = vec![zero; n];
                v[k] = Complex::new(T::one() / (alpha.abs().sqrt() * grid.dx()), T::zero());
                v
            } else {
                check_momentum_range(&grid, eigenvalue / beta)?;
                let s = eigenvalue;
                let branch = Complex::from_polar(T::one(), T::PI() / T::lit(8.0));
                let scale = T::one() / (T::TAU() * beta.abs()).sqrt();
                let offset = if alpha == T::zero() {
                    T::zero()
                } else {
                    s * s / (T::lit(4.0) * alpha * beta)
                };
                grid.xs()
                    .map(|x| {
                        let phase = (s * x - alpha * x * x * T::lit(0.5)) / beta - offset;
                        branch * Complex::from_polar(scale, phase)
                    })
                    .collect()
            }
        }
    };
    Ok(GeneralizedEigenvector {
        kind,
        eigenvalue,
        grid,
        amplitudes,
    })
}

fn check_momentum_range<T: Real>(grid: &GridSpec<T>, p: T) -> Result<()> {
    let lo = grid.p(0);
    let hi = grid.p(grid.n() - 1);
    // admit lattice points recovered as s / beta up to rounding
    let slack = (hi - lo) * T::lit(1e-12);
    if p >= lo - slack && p <= hi + slack {
        Ok(())
    } else {
        Err(Error::Range {
            value: p.to_f64_lossy(),
            min: lo.to_f64_lossy(),
            max: hi.to_f64_lossy(),
        })
    }
}

impl<T: Real> GeneralizedEigenvector<T> {
    pub fn kind(&self) -> EigenKind<T> {
        self.kind
    }

    pub fn eigenvalue(&self) -> T {
        self.eigenvalue
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    /// `<self, psi> = sum conj(v_k) psi_k dx`.
    pub fn overlap(&self, psi: &WaveFunction<T>) -> Result<Complex<T>> {
        if psi.grid() != &self.grid {
            return Err(Error::invalid(
                "eigenvector and state live on different grids",
            ));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(psi.amplitudes())
            .map(|(v, z)| v.conj() * z)
            .sum::<Complex<T>>()
            * self.grid.dx())
    }

    /// `|| (L - lambda) (w v) || / || v ||` restricted to the interior 80% of
    /// the grid, where `w` is a smooth taper equal to one on the interior and
    /// vanishing over the outer 10% on each side. The taper makes the
    /// periodic spectral derivative meaningful for non-periodic samples.
    pub fn residual(&self) -> Result<T> {
        let (alpha, beta) = match self.kind {
            EigenKind::Position => {
                return Err(Error::Unsupported(
                    "residual of the discrete position delta is not defined".into(),
                ))
            }
            EigenKind::Momentum => (T::zero(), T::one()),
            EigenKind::Quadrature { alpha, beta } => {
                if beta == T::zero() {
                    return Err(Error::Unsupported(
                        "residual of the discrete position delta is not defined".into(),
                    ));
                }
                (alpha, beta)
            }
        };
        let n = self.grid.n();
        let taper = taper_weights::<T>(n);
        let tapered: Vec<Complex<T>> = self
            .amplitudes
            .iter()
            .zip(&taper)
            .map(|(v, w)| v.scale(*w))
            .collect();
        let applied = apply_quadrature(&self.grid, alpha, beta, &tapered);
        let (lo, hi) = interior_range(n);
        let mut num = T::zero();
        let mut den = T::zero();
        for k in lo..hi {
            num = num + (applied[k] - tapered[k].scale(self.eigenvalue)).norm_sqr();
            den = den + self.amplitudes[k].norm_sqr();
        }
        Ok((num / den).sqrt())
    }
}

/// Interior index range `[lo, hi)`, excluding 10% of points at each edge.
pub(crate) fn interior_range(n: usize) -> (usize, usize) {
    let edge = ((n as f64) * TAPER_FRACTION).ceil() as usize;
    (edge, n - edge)
}

fn taper_weights<T: Real>(n: usize) -> Vec<T> {
    let (lo, hi) = interior_range(n);
    let ramp = |k: usize| -> T {
        // k runs from 0 (edge) to lo (interior start)
        let y = k as f64 / lo as f64;
        T::lit(smooth_step(y))
    };
    (0..n)
        .map(|k| {
            if k < lo {
                ramp(k)
            } else if k >= hi {
                ramp(n - 1 - k)
            } else {
                T::one()
            }
        })
        .collect()
}

/// C-infinity step from 0 at `y <= 0` to 1 at `y >= 1`.
fn smooth_step(y: f64) -> f64 {
    let f = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
    let a = f(y);
    let b = f(1.0 - y);
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::make_gaussian;

    fn grid() -> GridSpec<f64> {
        GridSpec::standard()
    }

    #[test]
    fn momentum_eigenvector_at_zero_is_flat() {
        let v = sample_eigenvector(EigenKind::Momentum, 0.0, grid()).unwrap();
        let expected = 1.0 / std::f64::consts::TAU.sqrt();
        assert!((expected - 0.3989).abs() < 1e-4);
        for z in v.amplitudes() {
            assert!((z.re - expected).abs() < 1e-15 && z.im == 0.0);
        }
    }

    #[test]
    fn momentum_eigenvectors_have_constant_modulus() {
        let v = sample_eigenvector(EigenKind::Momentum, 17.3, grid()).unwrap();
        let expected = 1.0 / std::f64::consts::TAU.sqrt();
        assert!(v
            .amplitudes()
            .iter()
            .all(|z| (z.norm() - expected).abs() < 1e-14));
    }

    #[test]
    fn quadrature_eigenvector_is_pure_phase() {
        let v = sample_eigenvector(
            EigenKind::Quadrature {
                alpha: 1.0,
                beta: 1.0,
            },
            0.0,
            grid(),
        )
        .unwrap();
        let expected = 1.0 / std::f64::consts::TAU.sqrt();
        assert!(v
            .amplitudes()
            .iter()
            .all(|z| (z.norm() - expected).abs() < 1e-14));
    }

    #[test]
    fn quadrature_eigen_residuals() {
        for s in [-1.0, 0.0, 2.0] {
            let v = sample_eigenvector(
                EigenKind::Quadrature {
                    alpha: 1.0,
                    beta: 1.0,
                },
                s,
                grid(),
            )
            .unwrap();
            let r = v.residual().unwrap();
            assert!(r < 1e-6, "s={s}: residual {r:e}");
        }
    }

    #[test]
    fn general_quadrature_eigen_residuals() {
        for (alpha, beta, s) in [
            (2.0, 0.5, 1.0),
            (-1.0, 1.0, -3.0),
            (1.0, -2.0, 4.0),
            (0.0, 1.5, 2.0),
        ] {
            let v = sample_eigenvector(EigenKind::Quadrature { alpha, beta }, s, grid()).unwrap();
            let r = v.residual().unwrap();
            assert!(r < 1e-6, "({alpha},{beta}) s={s}: residual {r:e}");
        }
    }

    #[test]
    fn plane_wave_residual() {
        for p in [-40.0, -0.37, 0.0, 12.5] {
            let v = sample_eigenvector(EigenKind::Momentum, p, grid()).unwrap();
            assert!(v.residual().unwrap() < 1e-6);
        }
    }

    #[test]
    fn position_eigenvector_picks_out_amplitude() {
        let g = grid();
        let psi = make_gaussian(1.0, 0.5, 0.2, 0.0, g).unwrap();
        let v = sample_eigenvector(EigenKind::Position, g.x(2100), g).unwrap();
        assert!((v.overlap(&psi).unwrap() - psi.amplitudes()[2100]).norm() < 1e-14);
        assert!(v.residual().is_err());
    }

    #[test]
    fn out_of_range_eigenvalues() {
        let g = grid();
        assert!(matches!(
            sample_eigenvector(EigenKind::Position, 40.0, g),
            Err(Error::Range { .. })
        ));
        assert!(matches!(
            sample_eigenvector(EigenKind::Momentum, 500.0, g),
            Err(Error::Range { .. })
        ));
        assert!(matches!(
            sample_eigenvector(
                EigenKind::Quadrature {
                    alpha: 1.0,
                    beta: 0.1
                },
                30.0,
                g
            ),
            Err(Error::Range { .. })
        ));
        assert!(sample_eigenvector(
            EigenKind::Quadrature {
                alpha: 0.0,
                beta: 0.0
            },
            0.0,
            g
        )
        .is_err());
    }

    #[test]
    fn smooth_step_endpoints() {
        assert_eq!(smooth_step(0.0), 0.0);
        assert_eq!(smooth_step(1.0), 1.0);
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
    }
}
