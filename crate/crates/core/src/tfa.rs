//! Signals on Z_N and their time-frequency analysis.
//!
//! Conventions, fixed once here and relied on everywhere else:
//!
//! * time-frequency shift: `(pi(x, xi) f)(t) = e^{2 pi i xi t / N} f(t - x mod N)`;
//! * transform: `V_g f(x, xi) = sum_t f(t) conj(g(t - x)) e^{-2 pi i xi t / N}`,
//!   an unnormalized forward DFT of `t -> f(t) conj(g(t - x))` per shift `x`,
//!   stored as a rank-2 tensor with the time axis first;
//! * energy: `sum_{x, xi} |V_g f|^2 = N ||f||^2 ||g||^2`;
//! * kernels `K(t1, t2)` of operators `(A f)(t1) = sum_{t2} K(t1, t2) f(t2)`
//!   are analyzed with product windows `G = g tensor conj(gamma)`, producing a
//!   rank-4 table indexed `(x1, x2, xi1, xi2)`;
//! * the reconstruction map carries the phase-space measure weight `1/N`, so
//!   `upsilon_apply(V_g f o c, psi, c) = <psi, g> f` holds exactly for both
//!   rank-2 permutations `c`.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::scalar::{pairwise_sum_complex, real, Scalar};
use crate::tensor::{AxisPermutation, ComplexTensor};

/// Finite signal: a complex vector indexed by Z_N, N >= 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Signal<T> {
    values: Vec<Complex<T>>,
}

impl<T: Scalar> Signal<T> {
    pub fn new(values: Vec<Complex<T>>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyAxis { axis: 0 });
        }
        for (i, z) in values.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite(i));
            }
        }
        Ok(Self { values })
    }

    pub fn from_real(values: &[T]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex::new(x, T::zero())).collect())
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![Complex::new(T::zero(), T::zero()); n.max(0)])
    }

    pub fn delta(n: usize, pos: usize) -> Result<Self> {
        let mut s = Self::zeros(n)?;
        s.values[pos % n] = Complex::new(T::one(), T::zero());
        Ok(s)
    }

    pub fn constant(n: usize, value: Complex<T>) -> Result<Self> {
        Self::new(vec![value; n])
    }

    /// The modulus N of the underlying group.
    pub fn modulus(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.values
    }

    pub fn get(&self, t: usize) -> Complex<T> {
        self.values[t % self.values.len()]
    }

    /// `sum_t self(t) conj(other(t))`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.modulus() != other.modulus() {
            return Err(Error::ModulusMismatch(self.modulus(), other.modulus()));
        }
        let terms: Vec<Complex<T>> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| a * b.conj())
            .collect();
        Ok(pairwise_sum_complex(&terms))
    }

    pub fn norm_l2(&self) -> T {
        self.values
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.values
            .iter()
            .all(|z| z.re == T::zero() && z.im == T::zero())
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self {
            values: self.values.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.modulus() != other.modulus() {
            return Err(Error::ModulusMismatch(self.modulus(), other.modulus()));
        }
        Signal::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex::new(-T::one(), T::zero())))
    }

    pub fn to_tensor(&self) -> ComplexTensor<T> {
        ComplexTensor::new(&[self.modulus()], self.values.clone())
            .expect("signal invariants imply a valid rank-1 tensor")
    }
}

/// Time-frequency shift `pi(x, xi)` on Z_N; both components are stored
/// reduced mod N.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TFShift {
    n: usize,
    time: usize,
    freq: usize,
}

impl TFShift {
    pub fn new(n: usize, time: i64, freq: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyAxis { axis: 0 });
        }
        let m = n as i64;
        Ok(Self {
            n,
            time: time.rem_euclid(m) as usize,
            freq: freq.rem_euclid(m) as usize,
        })
    }

    pub fn modulus(&self) -> usize {
        self.n
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn freq(&self) -> usize {
        self.freq
    }
}

/// Unit phase `e^{2 pi i k / n}` with the argument reduced mod n first.
pub(crate) fn unit_phase<T: Scalar>(k: i64, n: usize) -> Complex<T> {
    let k = k.rem_euclid(n as i64);
    let angle = real::<T>(2.0) * T::PI() * T::from_i64(k).expect("small integer")
        / T::from_usize(n).expect("small integer");
    Complex::from_polar(T::one(), angle)
}

/// `(pi(z) f)(t) = e^{2 pi i z.freq t / N} f(t - z.time mod N)`.
pub fn tf_shift_apply<T: Scalar>(z: &TFShift, f: &Signal<T>) -> Result<Signal<T>> {
    let n = f.modulus();
    if z.modulus() != n {
        return Err(Error::ModulusMismatch(z.modulus(), n));
    }
    let mut out = Vec::with_capacity(n);
    for t in 0..n {
        let src = (t + n - z.time) % n;
        out.push(f.values[src] * unit_phase::<T>((z.freq * t) as i64, n));
    }
    Signal::new(out)
}

/// Short-time Fourier transform `V_g f`, a rank-2 tensor over `(x, xi)`.
///
/// Each time slice is one forward FFT of the windowed product, so the whole
/// table costs O(N^2 log N).
pub fn stft<T: Scalar>(f: &Signal<T>, g: &Signal<T>) -> Result<ComplexTensor<T>> {
    let n = f.modulus();
    if g.modulus() != n {
        return Err(Error::ModulusMismatch(n, g.modulus()));
    }
    let mut planner = FftPlanner::<T>::new();
    let fft = planner.plan_fft_forward(n);
    let mut out = ComplexTensor::zeros(&[n, n])?;
    let mut buf = vec![Complex::new(T::zero(), T::zero()); n];
    for x in 0..n {
        for t in 0..n {
            buf[t] = f.values[t] * g.values[(t + n - x) % n].conj();
        }
        fft.process(&mut buf);
        for (xi, &v) in buf.iter().enumerate() {
            out.entries_mut()[x + n * xi] = v;
        }
    }
    Ok(out)
}

/// Square kernel of an operator on signals: `(A f)(x) = sum_y K(x, y) f(y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelMatrix<T> {
    values: ComplexTensor<T>,
}

impl<T: Scalar> KernelMatrix<T> {
    pub fn new(values: ComplexTensor<T>) -> Result<Self> {
        if values.rank() != 2 || values.shape()[0] != values.shape()[1] {
            return Err(Error::ShapeMismatch {
                expected: vec![values.shape()[0], values.shape()[0]],
                got: values.shape().to_vec(),
            });
        }
        Ok(Self { values })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Result<Self> {
        Self::new(ComplexTensor::from_fn(&[n, n], |idx| f(idx[0], idx[1]))?)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |x, y| {
            if x == y {
                Complex::new(T::one(), T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    /// `K(x, y) = f(x) conj(h(y))`, the kernel of `u -> <u, h> f`.
    pub fn rank_one(f: &Signal<T>, h: &Signal<T>) -> Result<Self> {
        if f.modulus() != h.modulus() {
            return Err(Error::ModulusMismatch(f.modulus(), h.modulus()));
        }
        Self::from_fn(f.modulus(), |x, y| f.values[x] * h.values[y].conj())
    }

    pub fn modulus(&self) -> usize {
        self.values.shape()[0]
    }

    pub fn entry(&self, x: usize, y: usize) -> Complex<T> {
        self.values.get(&[x, y])
    }

    pub fn tensor(&self) -> &ComplexTensor<T> {
        &self.values
    }
}

/// `(A f)(x) = sum_y K(x, y) f(y)`.
pub fn apply_kernel<T: Scalar>(k: &KernelMatrix<T>, f: &Signal<T>) -> Result<Signal<T>> {
    let n = k.modulus();
    if f.modulus() != n {
        return Err(Error::ModulusMismatch(n, f.modulus()));
    }
    let out = crate::linalg::matvec(k.tensor(), f.values())?;
    Signal::new(out)
}

/// Rank-4 transform of a kernel with the product window `g tensor conj(gamma)`:
///
/// `V_G K(x1, x2, xi1, xi2) = sum_{t1, t2} K(t1, t2) conj(g(t1 - x1)) gamma(t2 - x2)
///  e^{-2 pi i (xi1 t1 + xi2 t2) / N}`,
///
/// i.e. a 2D forward DFT of the doubly windowed kernel per shift pair.
pub fn stft_kernel<T: Scalar>(
    k: &KernelMatrix<T>,
    g: &Signal<T>,
    gamma: &Signal<T>,
) -> Result<ComplexTensor<T>> {
    let n = k.modulus();
    if g.modulus() != n {
        return Err(Error::ModulusMismatch(n, g.modulus()));
    }
    if gamma.modulus() != n {
        return Err(Error::ModulusMismatch(n, gamma.modulus()));
    }
    let mut planner = FftPlanner::<T>::new();
    let fft = planner.plan_fft_forward(n);
    let mut out = ComplexTensor::zeros(&[n, n, n, n])?;
    let mut windowed = vec![Complex::new(T::zero(), T::zero()); n * n];
    let mut strideb = vec![Complex::new(T::zero(), T::zero()); n];
    let kdata = k.tensor().entries();
    for x2 in 0..n {
        for x1 in 0..n {
            for t2 in 0..n {
                let wg2 = gamma.values[(t2 + n - x2) % n];
                for t1 in 0..n {
                    let wg1 = g.values[(t1 + n - x1) % n].conj();
                    windowed[t1 + n * t2] = kdata[t1 + n * t2] * wg1 * wg2;
                }
            }
            // DFT along t1 in place (contiguous rows), then along t2 (strided)
            for t2 in 0..n {
                fft.process(&mut windowed[t2 * n..(t2 + 1) * n]);
            }
            for xi1 in 0..n {
                for t2 in 0..n {
                    strideb[t2] = windowed[xi1 + n * t2];
                }
                fft.process(&mut strideb);
                for (xi2, &v) in strideb.iter().enumerate() {
                    out.entries_mut()[x1 + n * (x2 + n * (xi1 + n * xi2))] = v;
                }
            }
        }
    }
    Ok(out)
}

/// Reconstruction from a rank-2 phase-space table along a permuted grid:
///
/// `upsilon_apply(F, psi, c)(t) = (1/N) sum_w F(w) (pi(w[c(0)], w[c(1)]) psi)(t)`.
///
/// The `1/N` is the discrete phase-space measure; with it the inversion
/// identity `upsilon_apply(V_g f o c, psi, c) = <psi, g> f` is exact.
pub fn upsilon_apply<T: Scalar>(
    table: &ComplexTensor<T>,
    psi: &Signal<T>,
    c: &AxisPermutation,
) -> Result<Signal<T>> {
    let n = psi.modulus();
    if table.rank() != 2 || c.len() != 2 {
        return Err(Error::RankOutOfRange(table.rank().max(c.len())));
    }
    if table.shape() != [n, n] {
        return Err(Error::ShapeMismatch {
            expected: vec![n, n],
            got: table.shape().to_vec(),
        });
    }
    let mut acc = vec![Complex::new(T::zero(), T::zero()); n];
    let mut w = [0usize; 2];
    for w2 in 0..n {
        w[1] = w2;
        for w1 in 0..n {
            w[0] = w1;
            let coeff = table.get(&w);
            if coeff.re == T::zero() && coeff.im == T::zero() {
                continue;
            }
            let mapped = c.apply_tuple(&w);
            let (time, freq) = (mapped[0], mapped[1]);
            for (t, a) in acc.iter_mut().enumerate() {
                let shifted = psi.values[(t + n - time) % n] * unit_phase::<T>((freq * t) as i64, n);
                *a = *a + coeff * shifted;
            }
        }
    }
    let inv_n = T::one() / T::from_usize(n).expect("small integer");
    Signal::new(acc.into_iter().map(|z| z * inv_n).collect())
}
