//! Finite time-frequency analysis on Z_N.
//!
//! The crate provides, in dependency order:
//!
//! * [`tensor`]: complex tensors of rank 1..=4 with nested mixed norms,
//!   axis permutations, and the duality pairing;
//! * [`tfa`]: signals, time-frequency shifts, the discrete short-time
//!   Fourier transform for signals and for kernels of operators, and the
//!   reconstruction map inverting a permuted transform;
//! * [`gabor`]: Gabor frames over divisor lattices, frame bounds, canonical
//!   dual windows, analysis and synthesis;
//! * [`modspace`]: the catalog of phase-space axis permutations and the
//!   mixed modulation norms (full-grid and lattice-sampled) they induce;
//! * [`kernel`]: Gabor matrices of operators, exact `l^1 -> l^p` and
//!   `l^p -> l^inf` operator norms, Schur-type bounds, and boundedness
//!   certificates, including the Fourier-matrix gap experiment;
//! * [`oracle`]: slow reference implementations and randomized lower-bound
//!   searches used to validate everything else. Oracle code only consumes
//!   the data types of the modules it checks, never their algorithms.
//!
//! Everything numeric is generic over the real scalar type through
//! [`Scalar`] (`f32` or `f64`); the aliases below fix the common
//! instantiations. All computations are deterministic: fixed reduction
//! trees for sums, seeded generators for anything randomized.

pub mod error;
pub mod gabor;
pub mod kernel;
pub mod linalg;
pub mod modspace;
pub mod oracle;
pub mod scalar;
pub mod tensor;
pub mod tfa;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Tensor64 = tensor::ComplexTensor<f64>;
pub type Tensor32 = tensor::ComplexTensor<f32>;
pub type Exponents64 = tensor::ExponentVector<f64>;
pub type Exponents32 = tensor::ExponentVector<f32>;
pub type Signal64 = tfa::Signal<f64>;
pub type Signal32 = tfa::Signal<f32>;
pub type Kernel64 = tfa::KernelMatrix<f64>;
pub type Kernel32 = tfa::KernelMatrix<f32>;
pub type Frame64 = gabor::GaborFrameData<f64>;
pub type Frame32 = gabor::GaborFrameData<f32>;
pub type GaborMatrix64 = kernel::GaborMatrix<f64>;
pub type Certificate64 = kernel::Certificate<f64>;
