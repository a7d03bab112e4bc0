use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar type the crate is generic over.
///
/// `f32` and `f64` are the intended instantiations. The bounds are what the
/// algorithms actually need: transcendentals and constants (`Float`,
/// `FloatConst`), conversion of literal tolerances (`FromPrimitive`), and FFT
/// support (`rustfft::FftNum`).
pub trait Scalar:
    Float + FloatConst + FromPrimitive + rustfft::FftNum + Debug + Display + Send + Sync + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Converts an `f64` literal (tolerance, measure constant) into `T`.
pub(crate) fn real<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("finite f64 literal converts into the scalar type")
}

/// Deterministic pairwise sum. The reduction tree depends only on the slice
/// length, so a given multiset of addends in a given order always produces
/// the same floating-point result.
pub(crate) fn pairwise_sum<T: Scalar>(xs: &[T]) -> T {
    if xs.len() <= 4 {
        let mut acc = T::zero();
        for &x in xs {
            acc = acc + x;
        }
        acc
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// Pairwise sum for complex addends; same tree as [`pairwise_sum`].
pub(crate) fn pairwise_sum_complex<T: Scalar>(xs: &[Complex<T>]) -> Complex<T> {
    if xs.len() <= 4 {
        let mut acc = Complex::new(T::zero(), T::zero());
        for &x in xs {
            acc = acc + x;
        }
        acc
    } else {
        let mid = xs.len() / 2;
        pairwise_sum_complex(&xs[..mid]) + pairwise_sum_complex(&xs[mid..])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_sum_matches_sequential_on_integers() {
        let xs: Vec<f64> = (1..=100).map(|k| k as f64).collect();
        assert_eq!(pairwise_sum(&xs), 5050.0);
    }

    #[test]
    fn pairwise_sum_empty_is_zero() {
        assert_eq!(pairwise_sum::<f64>(&[]), 0.0);
    }

    #[test]
    fn f32_instantiation_compiles_and_sums() {
        let xs: Vec<f32> = vec![0.5; 16];
        assert_eq!(pairwise_sum(&xs), 8.0f32);
    }
}
