//! Uniform position grids and the lattices densities live on.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Fraction of grid points on each side that must carry negligible mass.
pub const EDGE_FRACTION: f64 = 0.05;
/// Largest edge mass for which a state counts as resolved.
pub const EDGE_MASS_THRESHOLD: f64 = 1e-10;

/// Position grid `x_k = x_min + k dx`, `k = 0..n`, with `n` a power of two.
///
/// The conjugate momentum grid is `p_j = 2 pi j / (n dx)` for
/// `j = -n/2 .. n/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec<T> {
    n: usize,
    x_min: T,
    dx: T,
}

impl<T: Real> GridSpec<T> {
    pub fn new(n: usize, x_min: T, dx: T) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::invalid(format!(
                "grid size {n} must be a power of two >= 16"
            )));
        }
        if !(dx > T::zero()) || !dx.is_finite() {
            return Err(Error::invalid(format!(
                "grid spacing {dx} must be positive"
            )));
        }
        if !x_min.is_finite() {
            return Err(Error::invalid("grid origin must be finite"));
        }
        Ok(Self { n, x_min, dx })
    }

    /// `n` points covering `[lo, hi)`.
    pub fn spanning(n: usize, lo: T, hi: T) -> Result<Self> {
        Self::new(n, lo, (hi - lo) / T::from_usize_lossy(n))
    }

    /// The default acceptance grid: 4096 points on `[-32, 32)`.
    pub fn standard() -> Self {
        Self::spanning(4096, T::lit(-32.0), T::lit(32.0)).expect("valid default grid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_min(&self) -> T {
        self.x_min
    }

    pub fn dx(&self) -> T {
        self.dx
    }

    pub fn x(&self, k: usize) -> T {
        self.x_min + self.dx * T::from_usize_lossy(k)
    }

    pub fn xs(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.n).map(|k| self.x(k))
    }

    pub fn x_max(&self) -> T {
        self.x(self.n - 1)
    }

    pub fn dp(&self) -> T {
        T::TAU() / (T::from_usize_lossy(self.n) * self.dx)
    }

    /// Centered frequency index of FFT bin `m`.
    pub fn centered_index(&self, m: usize) -> i64 {
        let half = (self.n / 2) as i64;
        let m = m as i64;
        if m < half {
            m
        } else {
            m - self.n as i64
        }
    }

    /// Angular frequency of FFT bin `m`.
    pub fn p_of_bin(&self, m: usize) -> T {
        T::from_i64(self.centered_index(m)).expect("index fits") * self.dp()
    }

    /// `j`-th point of the ascending momentum lattice (`j = 0` is `-n/2 dp`).
    pub fn p(&self, j: usize) -> T {
        T::from_i64(j as i64 - (self.n / 2) as i64).expect("index fits") * self.dp()
    }

    pub fn position_lattice(&self) -> Lattice<T> {
        Lattice::new(self.x_min, self.dx, self.n)
    }

    pub fn momentum_lattice(&self) -> Lattice<T> {
        Lattice::new(self.p(0), self.dp(), self.n)
    }

    /// Number of points at each edge checked for leaking mass.
    pub fn edge_points(&self) -> usize {
        ((self.n as f64) * EDGE_FRACTION).ceil() as usize
    }

    /// Index of the grid point nearest `x`, or a range error.
    pub fn nearest_index(&self, x: T) -> Result<usize> {
        let k = ((x - self.x_min) / self.dx).round();
        if !(k >= T::zero()) || k > T::from_usize_lossy(self.n - 1) {
            return Err(Error::Range {
                value: x.to_f64_lossy(),
                min: self.x_min.to_f64_lossy(),
                max: self.x_max().to_f64_lossy(),
            });
        }
        Ok(k.to_usize().expect("checked range"))
    }
}

/// A uniform ascending lattice `start + k spacing`, `k = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lattice<T> {
    pub start: T,
    pub spacing: T,
    pub len: usize,
}

impl<T: Real> Lattice<T> {
    pub fn new(start: T, spacing: T, len: usize) -> Self {
        Self {
            start,
            spacing,
            len,
        }
    }

    pub fn point(&self, k: usize) -> T {
        self.start + self.spacing * T::from_usize_lossy(k)
    }

    pub fn points(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.len).map(|k| self.point(k))
    }

    pub fn end(&self) -> T {
        self.point(self.len.saturating_sub(1))
    }

    /// Index shift `k` such that `other.point(0) == self.point(k)` when the
    /// two lattices share a spacing and sit on a common sublattice.
    pub fn offset_to(&self, other: &Self) -> Option<i64> {
        if !same_spacing(self.spacing, other.spacing) {
            return None;
        }
        let shift = (other.start - self.start) / self.spacing;
        let rounded = shift.round();
        if (shift - rounded).abs() > T::lit(1e-6) {
            return None;
        }
        rounded.to_i64()
    }

    /// True when both lattices have the same spacing and the same points.
    pub fn aligned_with(&self, other: &Self) -> bool {
        self.len == other.len && self.offset_to(other) == Some(0)
    }
}

pub(crate) fn same_spacing<T: Real>(a: T, b: T) -> bool {
    (a - b).abs() <= T::lit(1e-12) * a.abs().max(b.abs())
}
