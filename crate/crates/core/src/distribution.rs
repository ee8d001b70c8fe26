//! Probability densities sampled on a uniform lattice.

use std::fmt;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Lattice;
use crate::scalar::Real;

/// Normalization tolerance for a [`Distribution`].
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Which random variable a density describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variable {
    X,
    P,
    S,
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variable::X => "x",
            Variable::P => "p",
            Variable::S => "s",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T> {
    variable: Variable,
    lattice: Lattice<T>,
    density: Vec<T>,
}

impl<T: Real> Distribution<T> {
    /// Strict constructor: the density must already be nonnegative and
    /// normalized.
    pub fn new(variable: Variable, lattice: Lattice<T>, density: Vec<T>) -> Result<Self> {
        check_shape(&lattice, &density)?;
        if density.iter().any(|d| !(*d >= T::zero())) {
            return Err(Error::invalid("density must be nonnegative"));
        }
        let mass = riemann_mass(&density, lattice.spacing);
        if (mass - T::one()).abs() > T::lit(NORMALIZATION_TOL) {
            return Err(Error::invalid(format!(
                "density integrates to {mass}, not 1"
            )));
        }
        Ok(Self {
            variable,
            lattice,
            density,
        })
    }

    /// Clamps roundoff negatives to zero and rescales to unit mass.
    pub fn normalized(
        variable: Variable,
        lattice: Lattice<T>,
        mut density: Vec<T>,
    ) -> Result<Self> {
        check_shape(&lattice, &density)?;
        for d in density.iter_mut() {
            if !d.is_finite() {
                return Err(Error::invalid("density contains non-finite values"));
            }
            if *d < T::zero() {
                *d = T::zero();
            }
        }
        let mass = riemann_mass(&density, lattice.spacing);
        if !(mass > T::zero()) {
            return Err(Error::invalid("density has no mass"));
        }
        density.iter_mut().for_each(|d| *d = *d / mass);
        Ok(Self {
            variable,
            lattice,
            density,
        })
    }

    /// Builds without any checks. Callers guarantee the invariants.
    pub(crate) fn from_parts(variable: Variable, lattice: Lattice<T>, density: Vec<T>) -> Self {
        Self {
            variable,
            lattice,
            density,
        }
    }

    pub fn variable(&self) -> Variable {
        self.variable
    }

    pub fn lattice(&self) -> &Lattice<T> {
        &self.lattice
    }

    pub fn density(&self) -> &[T] {
        &self.density
    }

    pub fn spacing(&self) -> T {
        self.lattice.spacing
    }

    pub fn len(&self) -> usize {
        self.density.len()
    }

    pub fn is_empty(&self) -> bool {
        self.density.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = T> + '_ {
        self.lattice.points()
    }

    pub fn with_variable(mut self, variable: Variable) -> Self {
        self.variable = variable;
        self
    }

    pub fn mass(&self) -> T {
        riemann_mass(&self.density, self.lattice.spacing)
    }

    pub fn mean(&self) -> T {
        self.points()
            .zip(&self.density)
            .map(|(s, d)| s * *d)
            .sum::<T>()
            * self.spacing()
    }

    /// Central second moment.
    pub fn variance(&self) -> T {
        let mean = self.mean();
        self.points()
            .zip(&self.density)
            .map(|(s, d)| (s - mean) * (s - mean) * *d)
            .sum::<T>()
            * self.spacing()
    }

    /// Peak density and its location.
    pub fn peak(&self) -> (T, T) {
        let (k, d) = self
            .density
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |acc, (k, d)| {
                if *d > acc.1 {
                    (k, *d)
                } else {
                    acc
                }
            });
        (self.lattice.point(k), d)
    }

    /// Distribution of `factor * V`: points scaled, density divided by
    /// `|factor|`, order flipped for negative factors.
    pub fn rescaled(&self, factor: T) -> Result<Self> {
        if factor == T::zero() || !factor.is_finite() {
            return Err(Error::invalid(
                "rescaling factor must be finite and nonzero",
            ));
        }
        let scale = factor.abs();
        let mut density: Vec<T> = self.density.iter().map(|d| *d / scale).collect();
        let lattice = if factor > T::zero() {
            Lattice::new(
                self.lattice.start * factor,
                self.spacing() * scale,
                self.len(),
            )
        } else {
            density.reverse();
            Lattice::new(
                self.lattice.end() * factor,
                self.spacing() * scale,
                self.len(),
            )
        };
        Ok(Self::from_parts(self.variable, lattice, density))
    }

    /// Piecewise-linear interpolation at `s`, clamped to the end values
    /// outside the lattice.
    pub fn interpolate(&self, s: T) -> T {
        let n = self.len();
        let t = (s - self.lattice.start) / self.spacing();
        if !(t > T::zero()) {
            return self.density[0];
        }
        let last = T::from_usize_lossy(n - 1);
        if t >= last {
            return self.density[n - 1];
        }
        let k = t.floor().to_usize().expect("in range");
        let frac = t - T::from_usize_lossy(k);
        self.density[k] * (T::one() - frac) + self.density[k + 1] * frac
    }

    /// Linear resampling onto `target`, renormalized there.
    pub fn resample(&self, target: &Lattice<T>) -> Result<Self> {
        if target.len == 0 || !(target.spacing > T::zero()) {
            return Err(Error::lattice("target lattice is empty"));
        }
        let density = target.points().map(|s| self.interpolate(s)).collect();
        Self::normalized(self.variable, *target, density)
    }

    /// Cumulative distribution under the cell model used by the sampler:
    /// node `k` carries mass `density[k] * spacing` spread uniformly over
    /// `[s_k - h/2, s_k + h/2]`. For many queries build [`Self::cumulative`]
    /// once instead.
    pub fn cdf(&self, s: T) -> T {
        self.cumulative().eval(s)
    }

    /// Prefix-summed form of [`Self::cdf`], `O(1)` per query.
    pub fn cumulative(&self) -> Cumulative<T> {
        let mut prefix = Vec::with_capacity(self.len() + 1);
        let mut acc = T::zero();
        prefix.push(acc);
        for d in &self.density {
            acc = acc + *d;
            prefix.push(acc);
        }
        let total = acc;
        prefix.iter_mut().for_each(|c| *c = *c / total);
        Cumulative {
            edge0: self.lattice.start - self.spacing() * T::lit(0.5),
            spacing: self.spacing(),
            prefix,
        }
    }

    /// Writes `variable,point,density` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "variable,point,density")?;
        for (s, d) in self.points().zip(&self.density) {
            writeln!(
                out,
                "{},{:.16e},{:.16e}",
                self.variable,
                s.to_f64_lossy(),
                d.to_f64_lossy()
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ascii output")
    }
}

fn check_shape<T: Real>(lattice: &Lattice<T>, density: &[T]) -> Result<()> {
    if density.is_empty() || lattice.len != density.len() {
        return Err(Error::lattice(format!(
            "lattice of {} points does not match {} density values",
            lattice.len,
            density.len()
        )));
    }
    if !(lattice.spacing > T::zero()) {
        return Err(Error::lattice("lattice spacing must be positive"));
    }
    Ok(())
}

fn riemann_mass<T: Real>(density: &[T], spacing: T) -> T {
    density.iter().copied().sum::<T>() * spacing
}

/// Cell-model CDF with precomputed prefix sums.
#[derive(Debug, Clone, PartialEq)]
pub struct Cumulative<T> {
    edge0: T,
    spacing: T,
    prefix: Vec<T>,
}

impl<T: Real> Cumulative<T> {
    pub fn eval(&self, s: T) -> T {
        let t = (s - self.edge0) / self.spacing;
        if !(t > T::zero()) {
            return T::zero();
        }
        let n = self.prefix.len() - 1;
        if t >= T::from_usize_lossy(n) {
            return T::one();
        }
        let k = t.floor().to_usize().expect("in range");
        let frac = t - T::from_usize_lossy(k);
        (self.prefix[k] + (self.prefix[k + 1] - self.prefix[k]) * frac).min(T::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(mean: f64, var: f64, lattice: Lattice<f64>) -> Distribution<f64> {
        let d = lattice
            .points()
            .map(|s| (-(s - mean) * (s - mean) / (2.0 * var)).exp())
            .collect();
        Distribution::normalized(Variable::S, lattice, d).unwrap()
    }

    #[test]
    fn strict_constructor_checks() {
        let l = Lattice::new(0.0, 0.5, 4);
        assert!(Distribution::new(Variable::X, l, vec![0.5, 0.5, 0.5, 0.5]).is_ok());
        assert!(Distribution::new(Variable::X, l, vec![1.0, 1.0, 0.5, -0.5]).is_err());
        assert!(Distribution::new(Variable::X, l, vec![1.0, 1.0, 1.0, 1.0]).is_err());
        assert!(Distribution::new(Variable::X, l, vec![1.0]).is_err());
        assert!(Distribution::normalized(Variable::X, l, vec![0.0; 4]).is_err());
    }

    #[test]
    fn gaussian_moments() {
        let d = gaussian(1.5, 0.7, Lattice::new(-20.0, 0.05, 800));
        assert!((d.mean() - 1.5).abs() < 1e-12);
        assert!((d.variance() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn rescaling_negative_factor() {
        let d = gaussian(1.0, 0.5, Lattice::new(-10.0, 0.01, 2000));
        let r = d.rescaled(-2.0).unwrap();
        assert!(r.lattice().spacing > 0.0);
        assert!((r.mass() - 1.0).abs() < 1e-12);
        assert!((r.mean() + 2.0).abs() < 1e-9);
        assert!((r.variance() - 2.0).abs() < 1e-9);
        assert!(d.rescaled(0.0).is_err());
    }

    #[test]
    fn cdf_is_monotone_and_bounded() {
        let d = gaussian(0.0, 1.0, Lattice::new(-8.0, 0.1, 161));
        assert_eq!(d.cdf(-100.0), 0.0);
        assert_eq!(d.cdf(100.0), 1.0);
        assert!((d.cdf(0.0) - 0.5).abs() < 1e-12);
        let mut prev = 0.0;
        for k in 0..400 {
            let c = d.cdf(-10.0 + 0.05 * k as f64);
            assert!(c >= prev);
            prev = c;
        }
    }

    #[test]
    fn csv_layout() {
        let l = Lattice::new(-0.5, 0.5, 2);
        let d = Distribution::new(Variable::P, l, vec![1.0, 1.0]).unwrap();
        assert_eq!(
            d.to_csv_string(),
            "variable,point,density\np,-5.0000000000000000e-1,1.0000000000000000e0\n\
             p,0.0000000000000000e0,1.0000000000000000e0\n"
        );
    }

    #[test]
    fn resampling_preserves_smooth_shape() {
        let d = gaussian(0.0, 1.0, Lattice::new(-10.0, 0.01, 2001));
        let r = d.resample(&Lattice::new(-10.0, 0.1, 201)).unwrap();
        assert!((r.variance() - 1.0).abs() < 1e-6);
    }
}
