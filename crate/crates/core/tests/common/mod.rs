#![allow(dead_code)]

use num_complex::Complex;
use putative::{make_gaussian, GridSpec, WaveFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `|got - want| / max(|want|, 1)`.
pub fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1.0)
}

/// Random chirped, displaced Gaussian with parameters small enough for the
/// 24-unit-wide n = 128 grid.
pub fn small_gaussian(rng: &mut ChaCha8Rng, grid: GridSpec<f64>) -> WaveFunction<f64> {
    let a = rng.random_range(0.6..1.6);
    let c = rng.random_range(-0.8..0.8);
    let x0 = rng.random_range(-1.5..1.5);
    let p0 = rng.random_range(-1.5..1.5);
    make_gaussian(a, c, x0, p0, grid).unwrap()
}

/// Superposition of two Gaussians with a random complex relative weight.
pub fn cat_state(rng: &mut ChaCha8Rng, grid: GridSpec<f64>, spread: f64) -> WaveFunction<f64> {
    let a = rng.random_range(0.5..2.0);
    let c = rng.random_range(-1.5..1.5);
    let x0 = rng.random_range(0.5..spread);
    let p0 = rng.random_range(-1.0..1.0);
    let left = make_gaussian(a, c, -x0, p0, grid).unwrap();
    let right = make_gaussian(a, -c, x0, -p0, grid).unwrap();
    let weight = Complex::from_polar(
        rng.random_range(0.3..1.0),
        rng.random_range(0.0..std::f64::consts::TAU),
    );
    left.superpose(Complex::new(1.0, 0.0), &right, weight)
        .unwrap()
}

/// Symmetric real double Gaussian.
pub fn even_cat(grid: GridSpec<f64>, x0: f64) -> WaveFunction<f64> {
    let left = make_gaussian(1.0, 0.0, -x0, 0.0, grid).unwrap();
    let right = make_gaussian(1.0, 0.0, x0, 0.0, grid).unwrap();
    let one = Complex::new(1.0, 0.0);
    left.superpose(one, &right, one).unwrap()
}
