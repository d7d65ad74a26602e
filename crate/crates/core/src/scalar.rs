//! Scalar traits shared by the numerical modules.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_traits::{Float, FromPrimitive, Num, ToPrimitive};
use rand::Rng;
use rand_distr::StandardNormal;

/// Exact or floating ring scalars: enough for Cayley–Dickson products and conjugation.
pub trait Ring: Copy + Num + Neg<Output = Self> + PartialEq + Debug {}

impl<T> Ring for T where T: Copy + Num + Neg<Output = T> + PartialEq + Debug {}

/// Floating scalars (`f32`, `f64`) for norms, projections and sampling.
pub trait Scalar: Ring + Float + FromPrimitive + ToPrimitive + Display + Send + Sync + 'static {
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub fn norm<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

pub fn distance<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y))
        .sqrt()
}

/// Gaussian-then-normalize: a uniform point on the unit sphere in `dim` coordinates.
pub fn sample_unit<T: Scalar, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<T> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len > 1e-6 {
            return v.iter().map(|x| T::lit(x / len)).collect();
        }
    }
}

/// A gaussian vector scaled to length `len`.
pub fn sample_direction<T: Scalar, R: Rng + ?Sized>(rng: &mut R, dim: usize, len: f64) -> Vec<T> {
    sample_unit::<f64, R>(rng, dim)
        .into_iter()
        .map(|x| T::lit(x * len))
        .collect()
}
