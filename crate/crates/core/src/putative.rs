//! The hidden-variable prediction for `S = X + P`.
//!
//! Context-independent values add, `value(X + P) = value(X) + value(P)`, and
//! each value is distributed by its own quantum marginal. The predicted
//! density of `S` is therefore the convolution of `rho` and `varpi`, with
//! variance `var_x + var_p`.

use std::io::{self, Write};

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distribution::{Distribution, Variable};
use crate::error::{Error, Result};
use crate::grid::{same_spacing, Lattice};
use crate::scalar::Real;
use crate::state::spectral::{fft_in_place, ifft_in_place};
use crate::state::MomentSummary;

/// Samples drawn per RNG stream. Stream `k` produces samples
/// `[k * CHUNK, (k + 1) * CHUNK)`; chunks are concatenated in stream order.
pub const SAMPLE_CHUNK: usize = 1 << 16;

/// Density of the sum of independent draws from `rho` and `varpi`.
///
/// Both inputs are brought to a common spacing (the finer of the two; the
/// coarser input is linearly interpolated), zero-padded to avoid wrap-around
/// and convolved by FFT. The result lives on the full convolution lattice
/// and is renormalized once.
pub fn convolve_marginals<T: Real>(
    rho: &Distribution<T>,
    varpi: &Distribution<T>,
) -> Result<Distribution<T>> {
    if rho.is_empty() || varpi.is_empty() {
        return Err(Error::lattice("cannot convolve an empty distribution"));
    }
    let (a, b) = common_spacing(rho, varpi)?;
    let spacing = a.spacing();
    let len = a.len() + b.len() - 1;
    let fft_len = (a.len().max(b.len()) * 2).max(len).next_power_of_two();

    let padded = |d: &Distribution<T>| {
        let mut buf = vec![Complex::new(T::zero(), T::zero()); fft_len];
        for (slot, v) in buf.iter_mut().zip(d.density()) {
            *slot = Complex::new(*v, T::zero());
        }
        fft_in_place(&mut buf);
        buf
    };
    let fa = padded(&a);
    let fb = padded(&b);
    let mut product: Vec<Complex<T>> = fa.iter().zip(&fb).map(|(x, y)| x * y).collect();
    ifft_in_place(&mut product);

    let density = product[..len].iter().map(|z| z.re * spacing).collect();
    let lattice = Lattice::new(a.lattice().start + b.lattice().start, spacing, len);
    Distribution::normalized(Variable::S, lattice, density)
}

/// [`convolve_marginals`] followed by projection onto `target`: plain index
/// selection when the lattices are aligned, linear interpolation with
/// endpoint clamping otherwise.
pub fn convolve_marginals_onto<T: Real>(
    rho: &Distribution<T>,
    varpi: &Distribution<T>,
    target: &Lattice<T>,
) -> Result<Distribution<T>> {
    let full = convolve_marginals(rho, varpi)?;
    project(&full, target)
}

fn project<T: Real>(d: &Distribution<T>, target: &Lattice<T>) -> Result<Distribution<T>> {
    match d.lattice().offset_to(target) {
        Some(shift) => {
            let density = (0..target.len as i64)
                .map(|k| {
                    let idx = shift + k;
                    if idx >= 0 && (idx as usize) < d.len() {
                        d.density()[idx as usize]
                    } else {
                        T::zero()
                    }
                })
                .collect();
            Distribution::normalized(Variable::S, *target, density)
        }
        None => d.resample(target),
    }
}

fn common_spacing<T: Real>(
    rho: &Distribution<T>,
    varpi: &Distribution<T>,
) -> Result<(Distribution<T>, Distribution<T>)> {
    let (ha, hb) = (rho.spacing(), varpi.spacing());
    if same_spacing(ha, hb) {
        return Ok((rho.clone(), varpi.clone()));
    }
    let refine = |d: &Distribution<T>, h: T| {
        let span = d.lattice().end() - d.lattice().start;
        let len = (span / h).floor().to_usize().unwrap_or(0) + 1;
        d.resample(&Lattice::new(d.lattice().start, h, len))
    };
    if ha < hb {
        Ok((rho.clone(), refine(varpi, ha)?))
    } else {
        Ok((refine(rho, hb)?, varpi.clone()))
    }
}

/// Putative values `s = x + p` with `x ~ rho`, `p ~ varpi` drawn
/// independently.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch<T> {
    pub seed: u64,
    pub count: usize,
    pub values: Vec<T>,
}

impl<T: Real> SampleBatch<T> {
    pub fn mean(&self) -> T {
        self.values.iter().copied().sum::<T>() / T::from_usize_lossy(self.count)
    }

    /// Unbiased sample variance (zero for a single sample).
    pub fn variance(&self) -> T {
        if self.count < 2 {
            return T::zero();
        }
        let mean = self.mean();
        self.values
            .iter()
            .map(|v| (*v - mean) * (*v - mean))
            .sum::<T>()
            / T::from_usize_lossy(self.count - 1)
    }

    /// Single-column CSV with header `s_putative`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "s_putative")?;
        for v in &self.values {
            writeln!(out, "{:.16e}", v.to_f64_lossy())?;
        }
        Ok(())
    }
}

/// Inverse-CDF sampler for the cell model of [`Distribution::cdf`].
struct CellSampler<T> {
    edge0: T,
    spacing: T,
    cumulative: Vec<T>,
}

impl<T: Real> CellSampler<T> {
    fn new(d: &Distribution<T>) -> Self {
        let mut cumulative = Vec::with_capacity(d.len() + 1);
        let mut acc = T::zero();
        cumulative.push(acc);
        for v in d.density() {
            acc = acc + *v;
            cumulative.push(acc);
        }
        cumulative.iter_mut().for_each(|c| *c = *c / acc);
        Self {
            edge0: d.lattice().start - d.spacing() * T::lit(0.5),
            spacing: d.spacing(),
            cumulative,
        }
    }

    fn invert(&self, u: T) -> T {
        // first cell whose upper cumulative value exceeds u
        let upper = self.cumulative.partition_point(|c| *c <= u);
        let cell = upper.clamp(1, self.cumulative.len() - 1) - 1;
        let lo = self.cumulative[cell];
        let width = self.cumulative[cell + 1] - lo;
        let frac = if width > T::zero() {
            ((u - lo) / width).min(T::one())
        } else {
            T::lit(0.5)
        };
        self.edge0 + self.spacing * (T::from_usize_lossy(cell) + frac)
    }
}

pub fn sample_putative<T: Real>(
    rho: &Distribution<T>,
    varpi: &Distribution<T>,
    count: usize,
    seed: u64,
) -> Result<SampleBatch<T>> {
    if count == 0 {
        return Err(Error::invalid("sample count must be at least 1"));
    }
    let xs = CellSampler::new(rho);
    let ps = CellSampler::new(varpi);
    let chunks = count.div_ceil(SAMPLE_CHUNK);
    let values = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let len = SAMPLE_CHUNK.min(count - chunk * SAMPLE_CHUNK);
            (0..len)
                .map(|_| {
                    let u: f64 = rng.random();
                    let v: f64 = rng.random();
                    xs.invert(T::lit(u)) + ps.invert(T::lit(v))
                })
                .collect::<Vec<T>>()
        })
        .flatten()
        .collect();
    Ok(SampleBatch {
        seed,
        count,
        values,
    })
}

/// Quantum and putative variances of a quadrature, and their gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VarianceVerdict<T> {
    pub var_quantum: T,
    pub var_putative: T,
    pub gap: T,
    pub correlation_term: T,
    pub contradiction: bool,
}

/// Verdict for `S = X + P`.
pub fn variance_verdict<T: Real>(m: &MomentSummary<T>, tolerance: T) -> VarianceVerdict<T> {
    variance_verdict_for(m, T::one(), T::one(), tolerance)
}

/// Verdict for `alpha X + beta P`: putative variance
/// `alpha^2 var_x + beta^2 var_p`, quantum variance adds `2 alpha beta C`.
pub fn variance_verdict_for<T: Real>(
    m: &MomentSummary<T>,
    alpha: T,
    beta: T,
    tolerance: T,
) -> VarianceVerdict<T> {
    let var_putative = alpha * alpha * m.var_x + beta * beta * m.var_p;
    let correlation_term = (alpha + alpha) * beta * m.sym_cov;
    VarianceVerdict {
        var_quantum: var_putative + correlation_term,
        var_putative,
        gap: correlation_term,
        correlation_term,
        contradiction: correlation_term.abs() > tolerance,
    }
}
