//! FFT kernels on a [`GridSpec`].
//!
//! Fourier convention: `phi_p(x) = exp(i p x) / sqrt(2 pi)`, so
//! `psi~(p) = (2 pi)^(-1/2) sum_k exp(-i p x_k) psi_k dx`.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::grid::GridSpec;
use crate::scalar::Real;

pub(crate) fn fft_in_place<T: Real>(data: &mut [Complex<T>]) {
    let mut planner = FftPlanner::<T>::new();
    planner.plan_fft_forward(data.len()).process(data);
}

/// Inverse FFT including the `1/n` factor.
pub(crate) fn ifft_in_place<T: Real>(data: &mut [Complex<T>]) {
    let mut planner = FftPlanner::<T>::new();
    planner.plan_fft_inverse(data.len()).process(data);
    let scale = T::one() / T::from_usize_lossy(data.len());
    data.iter_mut().for_each(|z| *z = z.scale(scale));
}

/// Continuous Fourier amplitudes `psi~(p_j)` on the ascending momentum
/// lattice of `grid`.
pub fn momentum_amplitudes<T: Real>(
    grid: &GridSpec<T>,
    amplitudes: &[Complex<T>],
) -> Vec<Complex<T>> {
    let n = grid.n();
    let mut spectrum = amplitudes.to_vec();
    fft_in_place(&mut spectrum);
    let prefactor = grid.dx() / T::TAU().sqrt();
    let half = n / 2;
    (0..n)
        .map(|j| {
            let bin = (j + half) % n;
            let p = grid.p(j);
            Complex::from_polar(prefactor, -p * grid.x_min()) * spectrum[bin]
        })
        .collect()
}

/// `(alpha X + beta P) v` with `X` pointwise and `P = -i d/dx` spectral.
/// The Nyquist bin is dropped from the derivative.
pub fn apply_quadrature<T: Real>(
    grid: &GridSpec<T>,
    alpha: T,
    beta: T,
    v: &[Complex<T>],
) -> Vec<Complex<T>> {
    let n = grid.n();
    let mut p_part = vec![Complex::new(T::zero(), T::zero()); n];
    if beta != T::zero() {
        p_part.copy_from_slice(v);
        fft_in_place(&mut p_part);
        for (m, z) in p_part.iter_mut().enumerate() {
            *z = if m == n / 2 {
                Complex::new(T::zero(), T::zero())
            } else {
                z.scale(grid.p_of_bin(m))
            };
        }
        ifft_in_place(&mut p_part);
    }
    grid.xs()
        .zip(v)
        .zip(p_part)
        .map(|((x, z), pz)| z.scale(alpha * x) + pz.scale(beta))
        .collect()
}

/// Band-limited (trigonometric) interpolant of grid samples, evaluated
/// off-grid. Points outside the grid's span evaluate to zero.
pub struct BandLimited<T> {
    grid: GridSpec<T>,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> BandLimited<T> {
    pub fn new(grid: &GridSpec<T>, amplitudes: &[Complex<T>]) -> Self {
        let n = grid.n();
        let mut spectrum = amplitudes.to_vec();
        fft_in_place(&mut spectrum);
        let inv_n = T::one() / T::from_usize_lossy(n);
        // Ascending frequency order, j = 0 is -n/2.
        let coeffs = (0..n)
            .map(|j| spectrum[(j + n / 2) % n].scale(inv_n))
            .collect();
        Self {
            grid: *grid,
            coeffs,
        }
    }

    pub fn eval(&self, x: T) -> Complex<T> {
        let g = &self.grid;
        let upper = g.x_min() + g.dx() * T::from_usize_lossy(g.n());
        if x < g.x_min() || x >= upper {
            return Complex::new(T::zero(), T::zero());
        }
        let t = x - g.x_min();
        let step = Complex::from_polar(T::one(), g.dp() * t);
        let mut phase = Complex::from_polar(T::one(), g.p(0) * t);
        let mut acc = Complex::new(T::zero(), T::zero());
        for c in &self.coeffs {
            acc = acc + *c * phase;
            phase = phase * step;
        }
        acc
    }
}
