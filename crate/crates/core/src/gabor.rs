//! Gabor systems on divisor lattices of Z_N x Z_N.
//!
//! A lattice is the rectangular grid {(ja, kb)} with a | N and b | N. The
//! frame operator `S f = sum_lambda <f, pi(lambda) g> pi(lambda) g` is
//! assembled as an N x N matrix; its extremal eigenvalues are the optimal
//! frame constants, and the canonical dual window solves `S gamma = g`
//! by a direct Hermitian solve (N is small, iteration buys nothing).
//!
//! Construction order matters: density and window checks fail fast, the
//! eigensolver runs once, and `GaborFrameData` only exists for genuine
//! frames, so downstream code never re-validates.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{real, Scalar};
use crate::tensor::ComplexTensor;
use crate::tfa::{tf_shift_apply, Signal, TFShift};

/// Relative spectral-gap threshold: a window/lattice pair with
/// `A <= FRAME_RTOL * B` is rejected as numerically rank deficient.
const FRAME_RTOL: f64 = 1e-8;

/// Rectangular divisor lattice {(ja, kb) : 0 <= j < N/a, 0 <= k < N/b}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lattice {
    n: usize,
    a: usize,
    b: usize,
}

impl Lattice {
    /// Both steps must divide N. Density is not checked here: rank-deficient
    /// lattices (even the single point a = b = N) are legitimate inputs for
    /// frame-operator assembly; only frame construction insists on ab <= N.
    pub fn new(n: usize, a: usize, b: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyAxis { axis: 0 });
        }
        if a == 0 || n % a != 0 {
            return Err(Error::NonDivisorStep { step: a, n });
        }
        if b == 0 || n % b != 0 {
            return Err(Error::NonDivisorStep { step: b, n });
        }
        Ok(Self { n, a, b })
    }

    pub fn full(n: usize) -> Result<Self> {
        Self::new(n, 1, 1)
    }

    pub fn modulus(&self) -> usize {
        self.n
    }

    pub fn time_step(&self) -> usize {
        self.a
    }

    pub fn freq_step(&self) -> usize {
        self.b
    }

    /// Number of time nodes N/a.
    pub fn time_count(&self) -> usize {
        self.n / self.a
    }

    /// Number of frequency nodes N/b.
    pub fn freq_count(&self) -> usize {
        self.n / self.b
    }

    pub fn len(&self) -> usize {
        self.time_count() * self.freq_count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_full(&self) -> bool {
        self.a == 1 && self.b == 1
    }

    /// Lattice points (ja, kb) with the frequency index varying fastest,
    /// matching the row-major flattening used for Gabor matrices.
    pub fn points(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (a, b, fc) = (self.a, self.b, self.freq_count());
        (0..self.len()).map(move |r| ((r / fc) * a, (r % fc) * b))
    }
}

/// `S = sum_lambda (pi(lambda) g)(pi(lambda) g)^*`, assembled by outer
/// products. Hermitian PSD by construction.
pub fn frame_operator<T: Scalar>(g: &Signal<T>, lattice: &Lattice) -> Result<ComplexTensor<T>> {
    let n = g.modulus();
    if lattice.modulus() != n {
        return Err(Error::ModulusMismatch(lattice.modulus(), n));
    }
    if g.is_zero() {
        return Err(Error::ZeroWindow);
    }
    let mut s = ComplexTensor::zeros(&[n, n])?;
    for (x, xi) in lattice.points() {
        let shift = TFShift::new(n, x as i64, xi as i64)?;
        let h = tf_shift_apply(&shift, g)?;
        let hv = h.values();
        let entries = s.entries_mut();
        for y in 0..n {
            let w = hv[y].conj();
            for t in 0..n {
                entries[t + n * y] = entries[t + n * y] + hv[t] * w;
            }
        }
    }
    Ok(s)
}

/// Optimal frame constants: the extremal eigenvalues of the frame operator,
/// with eigensolver noise below zero clamped (S is PSD by construction).
pub fn frame_bounds<T: Scalar>(s: &ComplexTensor<T>) -> Result<(T, T)> {
    let eigs = linalg::hermitian_eigenvalues(s)?;
    let lower = eigs[0].max(T::zero());
    let upper = eigs[eigs.len() - 1].max(T::zero());
    Ok((lower, upper))
}

/// Canonical dual window: the solution of `S gamma = g`. Callers must have
/// established that S has a genuine spectral gap; the Cholesky factorization
/// will still reject outright singular input.
pub fn canonical_dual<T: Scalar>(g: &Signal<T>, s: &ComplexTensor<T>) -> Result<Signal<T>> {
    Signal::new(linalg::solve_hermitian_pd(s, g.values())?)
}

/// Analysis operator: `(C_g f)_{jk} = <f, pi(ja, kb) g>`, a rank-2 table of
/// shape (N/a, N/b). These are samples of the transform `V_g f` on the
/// lattice, computed here by direct inner products.
pub fn analyze<T: Scalar>(
    f: &Signal<T>,
    g: &Signal<T>,
    lattice: &Lattice,
) -> Result<ComplexTensor<T>> {
    let n = f.modulus();
    if g.modulus() != n {
        return Err(Error::ModulusMismatch(n, g.modulus()));
    }
    if lattice.modulus() != n {
        return Err(Error::ModulusMismatch(lattice.modulus(), n));
    }
    let (tc, fc) = (lattice.time_count(), lattice.freq_count());
    let mut out = ComplexTensor::zeros(&[tc, fc])?;
    for j in 0..tc {
        for k in 0..fc {
            let shift = TFShift::new(
                n,
                (j * lattice.time_step()) as i64,
                (k * lattice.freq_step()) as i64,
            )?;
            let atom = tf_shift_apply(&shift, g)?;
            out.entries_mut()[j + tc * k] = f.inner(&atom)?;
        }
    }
    Ok(out)
}

/// Synthesis operator: `D_gamma c = sum_{jk} c_{jk} pi(ja, kb) gamma`.
pub fn synthesize<T: Scalar>(
    cseq: &ComplexTensor<T>,
    gamma: &Signal<T>,
    lattice: &Lattice,
) -> Result<Signal<T>> {
    let n = gamma.modulus();
    if lattice.modulus() != n {
        return Err(Error::ModulusMismatch(lattice.modulus(), n));
    }
    let (tc, fc) = (lattice.time_count(), lattice.freq_count());
    if cseq.shape() != [tc, fc] {
        return Err(Error::ShapeMismatch {
            expected: vec![tc, fc],
            got: cseq.shape().to_vec(),
        });
    }
    let mut acc = vec![Complex::new(T::zero(), T::zero()); n];
    for j in 0..tc {
        for k in 0..fc {
            let coeff = cseq.get(&[j, k]);
            if coeff.re == T::zero() && coeff.im == T::zero() {
                continue;
            }
            let shift = TFShift::new(
                n,
                (j * lattice.time_step()) as i64,
                (k * lattice.freq_step()) as i64,
            )?;
            let atom = tf_shift_apply(&shift, gamma)?;
            for (t, a) in acc.iter_mut().enumerate() {
                *a = *a + coeff * atom.values()[t];
            }
        }
    }
    Signal::new(acc)
}

/// A validated Gabor frame: window, lattice, frame operator, optimal bounds,
/// and the canonical dual. Immutable after construction; existence of a value
/// implies `lower > FRAME_RTOL * upper`.
#[derive(Clone, Debug)]
pub struct GaborFrameData<T> {
    window: Signal<T>,
    lattice: Lattice,
    frame_op: ComplexTensor<T>,
    lower: T,
    upper: T,
    dual: Signal<T>,
}

impl<T: Scalar> GaborFrameData<T> {
    pub fn new(window: Signal<T>, lattice: Lattice) -> Result<Self> {
        let n = window.modulus();
        if lattice.modulus() != n {
            return Err(Error::ModulusMismatch(lattice.modulus(), n));
        }
        let ab = lattice.time_step() * lattice.freq_step();
        if ab > n {
            // fewer than N atoms can never span C^N
            return Err(Error::DensityTooLow { ab, n });
        }
        let frame_op = frame_operator(&window, &lattice)?;
        let (lower, upper) = frame_bounds(&frame_op)?;
        if lower <= real::<T>(FRAME_RTOL) * upper {
            return Err(Error::NotAFrame {
                lower: lower.to_f64().unwrap_or(0.0),
                upper: upper.to_f64().unwrap_or(0.0),
            });
        }
        let dual = canonical_dual(&window, &frame_op)?;
        Ok(Self {
            window,
            lattice,
            frame_op,
            lower,
            upper,
            dual,
        })
    }

    pub fn window(&self) -> &Signal<T> {
        &self.window
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn frame_op(&self) -> &ComplexTensor<T> {
        &self.frame_op
    }

    /// Optimal lower frame constant A.
    pub fn lower(&self) -> T {
        self.lower
    }

    /// Optimal upper frame constant B.
    pub fn upper(&self) -> T {
        self.upper
    }

    pub fn condition(&self) -> T {
        self.upper / self.lower
    }

    pub fn dual(&self) -> &Signal<T> {
        &self.dual
    }

    pub fn analyze(&self, f: &Signal<T>) -> Result<ComplexTensor<T>> {
        analyze(f, &self.window, &self.lattice)
    }

    pub fn synthesize(&self, cseq: &ComplexTensor<T>) -> Result<Signal<T>> {
        synthesize(cseq, &self.dual, &self.lattice)
    }

    /// `D_gamma C_g f`, which is `f` itself up to solver error.
    pub fn reconstruct(&self, f: &Signal<T>) -> Result<Signal<T>> {
        self.synthesize(&self.analyze(f)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modspace::gaussian_window;
    use crate::testutil::{random_signal, rng};
    use crate::tfa::stft;

    fn tf_matrix(n: usize, x: usize, xi: usize) -> ComplexTensor<f64> {
        ComplexTensor::from_fn(&[n, n], |idx| {
            let (t, y) = (idx[0], idx[1]);
            if y == (t + n - x) % n {
                crate::tfa::unit_phase::<f64>((xi * t) as i64, n)
            } else {
                Complex::new(0.0, 0.0)
            }
        })
        .unwrap()
    }

    #[test]
    fn lattice_rejects_non_divisor_steps() {
        assert!(matches!(
            Lattice::new(8, 3, 1),
            Err(Error::NonDivisorStep { step: 3, n: 8 })
        ));
        assert!(Lattice::new(8, 0, 1).is_err());
        assert!(Lattice::new(0, 1, 1).is_err());
    }

    #[test]
    fn lattice_points_enumerate_the_grid_frequency_fastest() {
        let l = Lattice::new(8, 4, 2).unwrap();
        let pts: Vec<_> = l.points().collect();
        assert_eq!(
            pts,
            vec![(0, 0), (0, 2), (0, 4), (0, 6), (4, 0), (4, 2), (4, 4), (4, 6)]
        );
        assert_eq!(l.len(), 8);
    }

    #[test]
    fn full_lattice_frame_operator_is_a_multiple_of_the_identity() {
        let n = 6;
        let mut r = rng(11);
        let g = random_signal(&mut r, n);
        let s = frame_operator(&g, &Lattice::full(n).unwrap()).unwrap();
        let scale = n as f64 * g.norm_l2().powi(2);
        for x in 0..n {
            for y in 0..n {
                let want = if x == y {
                    Complex::new(scale, 0.0)
                } else {
                    Complex::new(0.0, 0.0)
                };
                assert!((s.get(&[x, y]) - want).norm() < 1e-10 * scale);
            }
        }
    }

    #[test]
    fn single_point_lattice_gives_a_rank_one_projector() {
        let n = 4;
        let g = Signal::<f64>::delta(n, 0).unwrap();
        let l = Lattice::new(n, n, n).unwrap();
        let s = frame_operator(&g, &l).unwrap();
        for x in 0..n {
            for y in 0..n {
                let want = if x == 0 && y == 0 { 1.0 } else { 0.0 };
                assert!((s.get(&[x, y]) - Complex::new(want, 0.0)).norm() < 1e-15);
            }
        }
        let (a, b) = frame_bounds(&s).unwrap();
        assert!(a < 1e-12, "rank-deficient operator must report A ~ 0");
        assert!((b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn frame_operator_is_hermitian_psd() {
        let n = 8;
        let mut r = rng(5);
        let g = random_signal(&mut r, n);
        let s = frame_operator(&g, &Lattice::new(n, 1, 2).unwrap()).unwrap();
        for x in 0..n {
            for y in 0..n {
                assert!((s.get(&[x, y]) - s.get(&[y, x]).conj()).norm() < 1e-12);
            }
        }
        let eigs = linalg::hermitian_eigenvalues(&s).unwrap();
        assert!(eigs[0] > -1e-10);
    }

    #[test]
    fn full_lattice_bounds_are_tight() {
        let n = 6;
        let mut r = rng(23);
        let g = random_signal(&mut r, n);
        let s = frame_operator(&g, &Lattice::full(n).unwrap()).unwrap();
        let (a, b) = frame_bounds(&s).unwrap();
        let want = n as f64 * g.norm_l2().powi(2);
        assert!((a - want).abs() < 1e-9 * want);
        assert!((b - want).abs() < 1e-9 * want);
    }

    #[test]
    fn canonical_dual_of_a_tight_frame_is_the_rescaled_window() {
        let n = 6;
        let mut r = rng(31);
        let g = random_signal(&mut r, n);
        let data = GaborFrameData::new(g.clone(), Lattice::full(n).unwrap()).unwrap();
        let scale = 1.0 / (n as f64 * g.norm_l2().powi(2));
        let want = g.scale(Complex::new(scale, 0.0));
        assert!(data.dual().sub(&want).unwrap().norm_l2() < 1e-10 * want.norm_l2());
    }

    #[test]
    fn dual_satisfies_the_defining_linear_system() {
        let n = 8;
        let g = gaussian_window::<f64>(n).unwrap();
        let data = GaborFrameData::new(g.clone(), Lattice::new(n, 2, 2).unwrap()).unwrap();
        let sg = Signal::new(linalg::matvec(data.frame_op(), data.dual().values()).unwrap()).unwrap();
        assert!(sg.sub(&g).unwrap().norm_l2() < 1e-10 * g.norm_l2());
    }

    #[test]
    fn reconstruction_is_exact_on_random_signals() {
        let n = 8;
        let g = gaussian_window::<f64>(n).unwrap();
        let data = GaborFrameData::new(g, Lattice::new(n, 2, 2).unwrap()).unwrap();
        let mut r = rng(7);
        for _ in 0..20 {
            let f = random_signal(&mut r, n);
            let rec = data.reconstruct(&f).unwrap();
            let err = rec.sub(&f).unwrap().norm_l2() / f.norm_l2();
            assert!(err < 1e-9, "round-trip error {err}");
        }
    }

    #[test]
    fn analysis_with_dual_then_synthesis_with_window_also_reconstructs() {
        let n = 8;
        let g = gaussian_window::<f64>(n).unwrap();
        let data = GaborFrameData::new(g.clone(), Lattice::new(n, 2, 2).unwrap()).unwrap();
        let mut r = rng(13);
        let f = random_signal(&mut r, n);
        let coeffs = analyze(&f, data.dual(), data.lattice()).unwrap();
        let rec = synthesize(&coeffs, &g, data.lattice()).unwrap();
        assert!(rec.sub(&f).unwrap().norm_l2() < 1e-9 * f.norm_l2());
    }

    #[test]
    fn analyze_matches_subsampled_transform() {
        let n = 8;
        let mut r = rng(17);
        let f = random_signal(&mut r, n);
        let g = random_signal(&mut r, n);
        let l = Lattice::new(n, 2, 4).unwrap();
        let direct = analyze(&f, &g, &l).unwrap();
        let table = stft(&f, &g).unwrap();
        for j in 0..l.time_count() {
            for k in 0..l.freq_count() {
                let want = table.get(&[j * 2, k * 4]);
                assert!((direct.get(&[j, k]) - want).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn analyze_peaks_at_the_source_atom() {
        let n = 8;
        let g = gaussian_window::<f64>(n).unwrap();
        let l = Lattice::full(n).unwrap();
        let shift = TFShift::new(n, 3, 5).unwrap();
        let f = tf_shift_apply(&shift, &g).unwrap();
        let c = analyze(&f, &g, &l).unwrap();
        let peak = c.get(&[3, 5]).norm();
        assert!((peak - g.norm_l2().powi(2)).abs() < 1e-12);
        for j in 0..n {
            for k in 0..n {
                assert!(c.get(&[j, k]).norm() <= peak + 1e-12);
            }
        }
    }

    #[test]
    fn analyze_of_zero_is_zero_and_synthesize_of_zero_is_zero() {
        let n = 8;
        let g = gaussian_window::<f64>(n).unwrap();
        let l = Lattice::new(n, 2, 2).unwrap();
        let z = Signal::<f64>::zeros(n).unwrap();
        let c = analyze(&z, &g, &l).unwrap();
        assert!(c.entries().iter().all(|v| v.norm() == 0.0));
        let zc = ComplexTensor::<f64>::zeros(&[4, 4]).unwrap();
        assert!(synthesize(&zc, &g, &l).unwrap().is_zero());
    }

    #[test]
    fn synthesize_of_an_indicator_is_a_single_atom() {
        let n = 8;
        let g = gaussian_window::<f64>(n).unwrap();
        let l = Lattice::new(n, 2, 2).unwrap();
        let mut c = ComplexTensor::<f64>::zeros(&[4, 4]).unwrap();
        c.set(&[1, 3], Complex::new(1.0, 0.0));
        let out = synthesize(&c, &g, &l).unwrap();
        let want = tf_shift_apply(&TFShift::new(n, 2, 6).unwrap(), &g).unwrap();
        assert!(out.sub(&want).unwrap().norm_l2() < 1e-12);
    }

    #[test]
    fn frame_inequality_holds_for_random_signals() {
        let n = 8;
        let g = gaussian_window::<f64>(n).unwrap();
        let data = GaborFrameData::new(g.clone(), Lattice::new(n, 2, 2).unwrap()).unwrap();
        let mut r = rng(41);
        for _ in 0..100 {
            let f = random_signal(&mut r, n);
            let c = data.analyze(&f).unwrap();
            let energy: f64 = c.entries().iter().map(|z| z.norm_sqr()).sum();
            let nf = f.norm_l2().powi(2);
            assert!(energy >= data.lower() * nf * (1.0 - 1e-9));
            assert!(energy <= data.upper() * nf * (1.0 + 1e-9));
        }
    }

    #[test]
    fn frame_operator_commutes_with_lattice_shifts() {
        let n = 8;
        let g = gaussian_window::<f64>(n).unwrap();
        let l = Lattice::new(n, 2, 4).unwrap();
        let s = frame_operator(&g, &l).unwrap();
        let ns = linalg::frobenius(&s);
        for (x, xi) in l.points() {
            let p = tf_matrix(n, x, xi);
            let sp = linalg::matmul(&s, &p).unwrap();
            let ps = linalg::matmul(&p, &s).unwrap();
            let diff = linalg::frobenius(&sp.sub(&ps).unwrap());
            assert!(diff <= 1e-10 * ns, "commutator norm {diff} at ({x},{xi})");
        }
    }

    #[test]
    fn too_sparse_lattices_are_rejected_with_density_error() {
        let n = 8;
        let g = gaussian_window::<f64>(n).unwrap();
        let l = Lattice::new(n, 4, 4).unwrap();
        assert!(matches!(
            GaborFrameData::new(g, l),
            Err(Error::DensityTooLow { ab: 16, n: 8 })
        ));
    }

    #[test]
    fn critically_sampled_gaussian_is_not_a_frame() {
        // At density exactly 1 the periodized Gaussian system has a
        // numerically vanishing lower bound; construction must refuse it.
        let n = 8;
        let g = gaussian_window::<f64>(n).unwrap();
        let l = Lattice::new(n, 2, 4).unwrap();
        match GaborFrameData::new(g, l) {
            Err(Error::NotAFrame { lower, upper }) => {
                assert!(lower < 1e-8 * upper);
            }
            other => panic!("expected NotAFrame, got {other:?}"),
        }
    }

    #[test]
    fn zero_window_is_rejected() {
        let n = 8;
        let z = Signal::<f64>::zeros(n).unwrap();
        assert!(matches!(
            frame_operator(&z, &Lattice::full(n).unwrap()),
            Err(Error::ZeroWindow)
        ));
    }
}
