//! Helpers shared by the integration suites. Every random object comes
//! from a seeded ChaCha8 stream so failures replay exactly.
//!
//! Each test target compiles this module independently, so not every
//! helper is used by every target.
#![allow(dead_code)]

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tfcert_core::{Kernel64, Signal64, Tensor64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_signal(r: &mut ChaCha8Rng, n: usize) -> Signal64 {
    Signal64::new(
        (0..n)
            .map(|_| Complex::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
            .collect(),
    )
    .expect("nonempty")
}

pub fn random_kernel(r: &mut ChaCha8Rng, n: usize) -> Kernel64 {
    Kernel64::from_fn(n, |_, _| {
        Complex::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
    })
    .expect("nonempty")
}

pub fn random_tensor(r: &mut ChaCha8Rng, shape: &[usize]) -> Tensor64 {
    Tensor64::from_fn(shape, |_| {
        Complex::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
    })
    .expect("valid shape")
}

/// A nonzero signal that avoids near-zero norms (rejection sampled).
pub fn random_unit_signal(r: &mut ChaCha8Rng, n: usize) -> Signal64 {
    loop {
        let f = random_signal(r, n);
        let nrm = f.norm_l2();
        if nrm > 1e-3 {
            return f.scale(Complex::new(1.0 / nrm, 0.0));
        }
    }
}
