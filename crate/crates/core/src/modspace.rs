//! Mixed modulation norms: nested norms of axis-permuted transform tables.
//!
//! For signals the table is the rank-2 transform `V_g f`; for kernels it is
//! the rank-4 table produced with the product window `g tensor conj(gamma)`.
//! The norm of `f` in the space tagged by a permutation `c` and exponents
//! `p` is `mixed_norm(permute_axes(table, c), p)`.
//!
//! The named catalog `c0..c6` collects the seven axis shuffles that occur in
//! the boundedness theory. Off-by-inverse bugs are the dominant failure mode
//! with index permutations, so each entry also carries its defining 0/1
//! matrix and the tests cross-check tuple action, tensor action, and matrix
//! products against each other.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::gabor::{GaborFrameData, Lattice};
use crate::scalar::{real, Scalar};
use crate::tensor::{AxisPermutation, ComplexTensor, ExponentVector};
use crate::tfa::{stft, stft_kernel, KernelMatrix, Signal};

/// The named axis permutations. `C0` acts on rank-2 signal tables (it swaps
/// time and frequency, turning the modulation norm into the amalgam norm);
/// `C1..C6` act on rank-4 kernel tables.
///
/// Images are recorded 1-based as coordinate tuples: `Ck` sends `x` to
/// `(x_{i1}, ..., x_{ik})` where `images()` returns `(i1, ..., ik)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CatalogPerm {
    C0,
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
}

impl CatalogPerm {
    pub const ALL: [CatalogPerm; 7] = [
        CatalogPerm::C0,
        CatalogPerm::C1,
        CatalogPerm::C2,
        CatalogPerm::C3,
        CatalogPerm::C4,
        CatalogPerm::C5,
        CatalogPerm::C6,
    ];

    /// The rank-4 entries, in catalog order.
    pub const KERNEL: [CatalogPerm; 6] = [
        CatalogPerm::C1,
        CatalogPerm::C2,
        CatalogPerm::C3,
        CatalogPerm::C4,
        CatalogPerm::C5,
        CatalogPerm::C6,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CatalogPerm::C0 => "c0",
            CatalogPerm::C1 => "c1",
            CatalogPerm::C2 => "c2",
            CatalogPerm::C3 => "c3",
            CatalogPerm::C4 => "c4",
            CatalogPerm::C5 => "c5",
            CatalogPerm::C6 => "c6",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|c| c.name() == s.trim())
    }

    /// 1-based coordinate images, exactly as conventionally displayed.
    pub fn images(&self) -> &'static [usize] {
        match self {
            CatalogPerm::C0 => &[2, 1],
            CatalogPerm::C1 => &[1, 3, 2, 4],
            CatalogPerm::C2 => &[3, 1, 4, 2],
            CatalogPerm::C3 => &[2, 3, 1, 4],
            CatalogPerm::C4 => &[1, 4, 2, 3],
            CatalogPerm::C5 => &[2, 1, 3, 4],
            CatalogPerm::C6 => &[1, 2, 4, 3],
        }
    }

    pub fn rank(&self) -> usize {
        self.images().len()
    }

    pub fn axis_permutation(&self) -> AxisPermutation {
        let map: Vec<usize> = self.images().iter().map(|&i| i - 1).collect();
        AxisPermutation::new(&map).expect("catalog entries are bijections")
    }

    /// Defining matrix: `M[i][images()[i] - 1] = 1`, so that `M x` applied to
    /// a coordinate column equals the tuple action of the permutation.
    pub fn matrix(&self) -> Vec<Vec<u8>> {
        let img = self.images();
        let k = img.len();
        let mut m = vec![vec![0u8; k]; k];
        for (i, &j) in img.iter().enumerate() {
            m[i][j - 1] = 1;
        }
        m
    }
}

/// Periodized Gaussian `g(t) = sum_{|m| <= 3} exp(-pi (t + m N)^2 / N)`,
/// normalized to unit l2 norm. The truncation error is far below double
/// precision for every N >= 1. This is the default window everywhere a
/// canonical choice is needed.
pub fn gaussian_window<T: Scalar>(n: usize) -> Result<Signal<T>> {
    if n == 0 {
        return Err(Error::EmptyAxis { axis: 0 });
    }
    let mut vals = Vec::with_capacity(n);
    for t in 0..n {
        let mut acc = 0.0f64;
        for m in -3i64..=3 {
            let u = t as f64 + (m * n as i64) as f64;
            acc += (-std::f64::consts::PI * u * u / n as f64).exp();
        }
        vals.push(Complex::new(real::<T>(acc), T::zero()));
    }
    let g = Signal::new(vals)?;
    let norm = g.norm_l2();
    Ok(g.scale(Complex::new(T::one() / norm, T::zero())))
}

/// Pairing of a permutation and an exponent vector of matching length.
#[derive(Clone, Debug)]
pub struct ModNormSpec<T> {
    permutation: AxisPermutation,
    exponents: ExponentVector<T>,
}

impl<T: Scalar> ModNormSpec<T> {
    pub fn new(permutation: AxisPermutation, exponents: ExponentVector<T>) -> Result<Self> {
        if permutation.len() != exponents.len() {
            return Err(Error::ExponentLength {
                expected: permutation.len(),
                got: exponents.len(),
            });
        }
        Ok(Self {
            permutation,
            exponents,
        })
    }

    pub fn permutation(&self) -> &AxisPermutation {
        &self.permutation
    }

    pub fn exponents(&self) -> &ExponentVector<T> {
        &self.exponents
    }
}

/// `mixed_norm(permute_axes(V_g f, c), p)` for a rank-2 permutation `c`.
pub fn mod_norm_signal<T: Scalar>(
    f: &Signal<T>,
    g: &Signal<T>,
    c: &AxisPermutation,
    exps: &ExponentVector<T>,
) -> Result<T> {
    if g.is_zero() {
        return Err(Error::ZeroWindow);
    }
    stft(f, g)?.permute_axes(c)?.mixed_norm(exps)
}

/// Kernel analogue over the rank-4 table with window `g tensor conj(gamma)`.
pub fn mod_norm_kernel<T: Scalar>(
    k: &KernelMatrix<T>,
    g: &Signal<T>,
    gamma: &Signal<T>,
    c: &AxisPermutation,
    exps: &ExponentVector<T>,
) -> Result<T> {
    if g.is_zero() || gamma.is_zero() {
        return Err(Error::ZeroWindow);
    }
    stft_kernel(k, g, gamma)?.permute_axes(c)?.mixed_norm(exps)
}

/// Per-axis stride restriction: `out[i] = table[i * step]` along every axis.
/// A pure copy, so a step of 1 on every axis reproduces the input bitwise.
fn subsample<T: Scalar>(table: &ComplexTensor<T>, steps: &[usize]) -> Result<ComplexTensor<T>> {
    if steps.len() != table.rank() || steps.iter().any(|&s| s == 0) {
        return Err(Error::ShapeMismatch {
            expected: table.shape().to_vec(),
            got: steps.to_vec(),
        });
    }
    for (axis, (&extent, &step)) in table.shape().iter().zip(steps).enumerate() {
        if extent % step != 0 {
            return Err(Error::NonDivisorStep {
                step,
                n: table.shape()[axis],
            });
        }
    }
    let shape: Vec<usize> = table
        .shape()
        .iter()
        .zip(steps)
        .map(|(&e, &s)| e / s)
        .collect();
    let mut scaled = vec![0usize; steps.len()];
    ComplexTensor::from_fn(&shape, |idx| {
        for (s, (&i, &st)) in scaled.iter_mut().zip(idx.iter().zip(steps)) {
            *s = i * st;
        }
        table.get(&scaled)
    })
}

/// Mixed norm of the transform restricted to the frame's lattice. The frame
/// argument both carries the window and certifies that the restriction is
/// norm-equivalent to the full grid.
pub fn sampled_mod_norm_signal<T: Scalar>(
    f: &Signal<T>,
    frame: &GaborFrameData<T>,
    c: &AxisPermutation,
    exps: &ExponentVector<T>,
) -> Result<T> {
    let table = stft(f, frame.window())?;
    let l = frame.lattice();
    let sub = subsample(&table, &[l.time_step(), l.freq_step()])?;
    sub.permute_axes(c)?.mixed_norm(exps)
}

/// Kernel analogue on the product lattice, with the window pair
/// (frame window, canonical dual) used by the boundedness estimates.
pub fn sampled_mod_norm_kernel<T: Scalar>(
    k: &KernelMatrix<T>,
    frame: &GaborFrameData<T>,
    c: &AxisPermutation,
    exps: &ExponentVector<T>,
) -> Result<T> {
    let table = stft_kernel(k, frame.window(), frame.dual())?;
    let l = frame.lattice();
    let steps = [l.time_step(), l.time_step(), l.freq_step(), l.freq_step()];
    let sub = subsample(&table, &steps)?;
    sub.permute_axes(c)?.mixed_norm(exps)
}

/// Restriction of a rank-2 coefficient table to a lattice, exposed for the
/// boundedness certificates which need the raw sampled table.
pub fn sample_table_signal<T: Scalar>(
    table: &ComplexTensor<T>,
    lattice: &Lattice,
) -> Result<ComplexTensor<T>> {
    subsample(table, &[lattice.time_step(), lattice.freq_step()])
}

/// Rank-4 product-lattice restriction (time axes first, frequency axes last).
pub fn sample_table_kernel<T: Scalar>(
    table: &ComplexTensor<T>,
    lattice: &Lattice,
) -> Result<ComplexTensor<T>> {
    let steps = [
        lattice.time_step(),
        lattice.time_step(),
        lattice.freq_step(),
        lattice.freq_step(),
    ];
    subsample(table, &steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{random_kernel, random_signal, rng};

    fn exps2(p: f64, q: f64) -> ExponentVector<f64> {
        ExponentVector::from_values(&[p, q]).unwrap()
    }

    fn exps4(p: [f64; 4]) -> ExponentVector<f64> {
        ExponentVector::from_values(&p).unwrap()
    }

    fn matmul_u8(a: &[Vec<u8>], b: &[Vec<u8>]) -> Vec<Vec<u8>> {
        let k = a.len();
        let mut out = vec![vec![0u8; k]; k];
        for i in 0..k {
            for j in 0..k {
                out[i][j] = (0..k).map(|l| a[i][l] * b[l][j]).sum();
            }
        }
        out
    }

    #[test]
    fn catalog_names_round_trip() {
        for c in CatalogPerm::ALL {
            assert_eq!(CatalogPerm::parse(c.name()), Some(c));
        }
        assert_eq!(CatalogPerm::parse("c7"), None);
        assert_eq!(CatalogPerm::parse(" c3 "), Some(CatalogPerm::C3));
    }

    #[test]
    fn catalog_ranks_are_two_for_signals_four_for_kernels() {
        assert_eq!(CatalogPerm::C0.rank(), 2);
        for c in CatalogPerm::KERNEL {
            assert_eq!(c.rank(), 4);
        }
    }

    #[test]
    fn matrices_agree_with_tuple_action() {
        for c in CatalogPerm::ALL {
            let m = c.matrix();
            let perm = c.axis_permutation();
            let k = c.rank();
            // act on the coordinate column (10, 20, 30, 40)[..k]
            let x: Vec<usize> = (1..=k).map(|i| 10 * i).collect();
            let via_matrix: Vec<usize> = (0..k)
                .map(|i| (0..k).map(|j| m[i][j] as usize * x[j]).sum())
                .collect();
            assert_eq!(via_matrix, perm.apply_tuple(&x), "entry {}", c.name());
        }
    }

    #[test]
    fn late_catalog_entries_factor_through_earlier_ones() {
        // tuple action: c5(x) = c1(c3(x)) and c6(x) = c1(c4(x))
        let x = [7usize, 11, 13, 17];
        let (c1, c3, c4) = (
            CatalogPerm::C1.axis_permutation(),
            CatalogPerm::C3.axis_permutation(),
            CatalogPerm::C4.axis_permutation(),
        );
        assert_eq!(
            CatalogPerm::C5.axis_permutation().apply_tuple(&x),
            c1.apply_tuple(&c3.apply_tuple(&x))
        );
        assert_eq!(
            CatalogPerm::C6.axis_permutation().apply_tuple(&x),
            c1.apply_tuple(&c4.apply_tuple(&x))
        );
        // matrix products match the displayed factorizations
        assert_eq!(
            CatalogPerm::C5.matrix(),
            matmul_u8(&CatalogPerm::C1.matrix(), &CatalogPerm::C3.matrix())
        );
        assert_eq!(
            CatalogPerm::C6.matrix(),
            matmul_u8(&CatalogPerm::C1.matrix(), &CatalogPerm::C4.matrix())
        );
        // composition of the abstract permutations agrees too
        assert_eq!(c1.compose(&c3).unwrap(), CatalogPerm::C5.axis_permutation());
        assert_eq!(c1.compose(&c4).unwrap(), CatalogPerm::C6.axis_permutation());
    }

    #[test]
    fn catalog_tensor_action_is_consistent_bitwise() {
        let mut r = rng(3);
        let t = crate::testutil::random_tensor(&mut r, &[3, 2, 4, 2]);
        let c1 = CatalogPerm::C1.axis_permutation();
        let c3 = CatalogPerm::C3.axis_permutation();
        let via_c5 = t.permute_axes(&CatalogPerm::C5.axis_permutation()).unwrap();
        let chained = t.permute_axes(&c1).unwrap().permute_axes(&c3).unwrap();
        assert_eq!(via_c5, chained);
        let c4 = CatalogPerm::C4.axis_permutation();
        let via_c6 = t.permute_axes(&CatalogPerm::C6.axis_permutation()).unwrap();
        let chained6 = t.permute_axes(&c1).unwrap().permute_axes(&c4).unwrap();
        assert_eq!(via_c6, chained6);
    }

    #[test]
    fn gaussian_window_is_unit_norm_positive_and_symmetric() {
        for n in [4usize, 8, 9, 16] {
            let g = gaussian_window::<f64>(n).unwrap();
            assert!((g.norm_l2() - 1.0).abs() < 1e-12);
            for t in 0..n {
                assert!(g.get(t).re > 0.0);
                assert!(g.get(t).im == 0.0);
                let mirror = g.get((n - t) % n);
                assert!((g.get(t) - mirror).norm() < 1e-12);
            }
            // peak at the origin
            for t in 1..n {
                assert!(g.get(0).re >= g.get(t).re);
            }
        }
    }

    #[test]
    fn delta_window_norms_have_closed_forms() {
        // V_{delta}.delta is the indicator of {time offset 0}; the nested
        // norm then counts the frequency axis with the exponent that ends up
        // innermost or outermost depending on the permutation.
        let n = 8;
        let d = Signal::<f64>::delta(n, 0).unwrap();
        let id = AxisPermutation::identity(2).unwrap();
        let swap = CatalogPerm::C0.axis_permutation();
        for (p, q) in [(1.0, 2.0), (2.0, 1.0), (1.0, f64::INFINITY), (3.0, 1.5)] {
            let m = mod_norm_signal(&d, &d, &id, &exps2(p, q)).unwrap();
            assert!((m - (n as f64).powf(1.0 / q)).abs() < 1e-12, "M norm p={p} q={q}");
            let w = mod_norm_signal(&d, &d, &swap, &exps2(p, q)).unwrap();
            let want = if p.is_infinite() { 1.0 } else { (n as f64).powf(1.0 / p) };
            assert!((w - want).abs() < 1e-12, "amalgam norm p={p} q={q}");
        }
    }

    #[test]
    fn equal_exponents_erase_the_permutation_bitwise() {
        let n = 4;
        let mut r = rng(29);
        let g = gaussian_window::<f64>(n).unwrap();
        for _ in 0..5 {
            let k = random_kernel(&mut r, n);
            let gamma = random_signal(&mut r, n);
            for p in [1.0, 2.0, f64::INFINITY] {
                let e = exps4([p, p, p, p]);
                let vals: Vec<f64> = CatalogPerm::KERNEL
                    .iter()
                    .map(|c| mod_norm_kernel(&k, &g, &gamma, &c.axis_permutation(), &e).unwrap())
                    .collect();
                for v in &vals[1..] {
                    assert_eq!(v.to_bits(), vals[0].to_bits(), "p={p}");
                }
            }
        }
    }

    #[test]
    fn catalog_permutation_matches_a_hand_coded_shuffle() {
        let n = 4;
        let mut r = rng(57);
        let g = random_signal(&mut r, n);
        let gamma = random_signal(&mut r, n);
        let k = random_kernel(&mut r, n);
        let table = stft_kernel(&k, &g, &gamma).unwrap();
        for p in [1.0, 2.0, f64::INFINITY] {
            let e = exps4([p, p, f64::INFINITY, f64::INFINITY]);
            let via_catalog =
                mod_norm_kernel(&k, &g, &gamma, &CatalogPerm::C1.axis_permutation(), &e).unwrap();
            // shuffle spelled out entry by entry: out(y) = table(y1, y3, y2, y4)
            let shuffled = ComplexTensor::from_fn(&[n, n, n, n], |y| {
                table.get(&[y[0], y[2], y[1], y[3]])
            })
            .unwrap();
            let by_hand = shuffled.mixed_norm(&e).unwrap();
            assert!(
                (via_catalog - by_hand).abs() <= 1e-12 * by_hand.abs().max(1.0),
                "p={p}"
            );
        }
    }

    #[test]
    fn zero_kernel_has_zero_norm_everywhere() {
        let n = 4;
        let g = gaussian_window::<f64>(n).unwrap();
        let k = KernelMatrix::new(ComplexTensor::zeros(&[n, n]).unwrap()).unwrap();
        for c in CatalogPerm::KERNEL {
            let e = exps4([1.0, f64::INFINITY, 1.0, f64::INFINITY]);
            assert_eq!(
                mod_norm_kernel(&k, &g, &g, &c.axis_permutation(), &e).unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn zero_windows_are_rejected() {
        let n = 4;
        let z = Signal::<f64>::zeros(n).unwrap();
        let g = gaussian_window::<f64>(n).unwrap();
        let f = Signal::<f64>::delta(n, 1).unwrap();
        let id = AxisPermutation::identity(2).unwrap();
        assert!(matches!(
            mod_norm_signal(&f, &z, &id, &exps2(2.0, 2.0)),
            Err(Error::ZeroWindow)
        ));
        let k = KernelMatrix::<f64>::identity(n).unwrap();
        let c1 = CatalogPerm::C1.axis_permutation();
        let e = exps4([1.0, 1.0, f64::INFINITY, f64::INFINITY]);
        assert!(matches!(
            mod_norm_kernel(&k, &z, &g, &c1, &e),
            Err(Error::ZeroWindow)
        ));
        assert!(matches!(
            mod_norm_kernel(&k, &g, &z, &c1, &e),
            Err(Error::ZeroWindow)
        ));
    }

    #[test]
    fn mod_norms_satisfy_the_norm_axioms() {
        let n = 4;
        let mut r = rng(71);
        let g = gaussian_window::<f64>(n).unwrap();
        let id = AxisPermutation::identity(2).unwrap();
        let e = exps2(1.0, f64::INFINITY);
        for _ in 0..10 {
            let f1 = random_signal(&mut r, n);
            let f2 = random_signal(&mut r, n);
            let n1 = mod_norm_signal(&f1, &g, &id, &e).unwrap();
            let n2 = mod_norm_signal(&f2, &g, &id, &e).unwrap();
            let nsum = mod_norm_signal(&f1.add(&f2).unwrap(), &g, &id, &e).unwrap();
            assert!(nsum <= n1 + n2 + 1e-10 * (n1 + n2));
            let scaled = mod_norm_signal(&f1.scale(Complex::new(-2.5, 0.0)), &g, &id, &e).unwrap();
            assert!((scaled - 2.5 * n1).abs() < 1e-10 * n1);
        }
    }

    #[test]
    fn different_windows_give_equivalent_norms_on_an_ensemble() {
        let n = 8;
        let g1 = gaussian_window::<f64>(n).unwrap();
        let mut r = rng(101);
        let g2 = random_signal(&mut r, n);
        let id = AxisPermutation::identity(2).unwrap();
        let e = exps2(1.0, f64::INFINITY);
        for _ in 0..20 {
            let f = random_signal(&mut r, n);
            let a = mod_norm_signal(&f, &g1, &id, &e).unwrap();
            let b = mod_norm_signal(&f, &g2, &id, &e).unwrap();
            let ratio = a / b;
            // loose sanity window; sharp constants are pinned by the
            // calibration suite
            assert!(ratio > 1.0 / 50.0 && ratio < 50.0, "ratio {ratio}");
        }
    }

    #[test]
    fn full_lattice_sampling_is_the_identity_bitwise() {
        let n = 8;
        let g = gaussian_window::<f64>(n).unwrap();
        let frame = GaborFrameData::new(g.clone(), Lattice::full(n).unwrap()).unwrap();
        let mut r = rng(5);
        let f = random_signal(&mut r, n);
        for (c, e) in [
            (AxisPermutation::identity(2).unwrap(), exps2(1.0, f64::INFINITY)),
            (CatalogPerm::C0.axis_permutation(), exps2(2.0, 1.0)),
        ] {
            let full = mod_norm_signal(&f, &g, &c, &e).unwrap();
            let sampled = sampled_mod_norm_signal(&f, &frame, &c, &e).unwrap();
            assert_eq!(full.to_bits(), sampled.to_bits());
        }
        let k = random_kernel(&mut r, n);
        let c1 = CatalogPerm::C1.axis_permutation();
        let e4 = exps4([1.0, 1.0, f64::INFINITY, f64::INFINITY]);
        let full = mod_norm_kernel(&k, &g, frame.dual(), &c1, &e4).unwrap();
        let sampled = sampled_mod_norm_kernel(&k, &frame, &c1, &e4).unwrap();
        assert_eq!(full.to_bits(), sampled.to_bits());
    }

    #[test]
    fn coarse_lattice_sampling_vanishes_on_zero_input() {
        let n = 8;
        let g = gaussian_window::<f64>(n).unwrap();
        let frame = GaborFrameData::new(g, Lattice::new(n, 2, 2).unwrap()).unwrap();
        let z = Signal::<f64>::zeros(n).unwrap();
        let id = AxisPermutation::identity(2).unwrap();
        assert_eq!(
            sampled_mod_norm_signal(&z, &frame, &id, &exps2(2.0, 2.0)).unwrap(),
            0.0
        );
    }

    #[test]
    fn sampling_steps_must_divide_the_extents() {
        let t = ComplexTensor::<f64>::zeros(&[4, 4]).unwrap();
        assert!(subsample(&t, &[3, 1]).is_err());
        assert!(subsample(&t, &[1]).is_err());
        assert!(subsample(&t, &[0, 1]).is_err());
        let ok = subsample(&t, &[2, 4]).unwrap();
        assert_eq!(ok.shape(), &[2, 1]);
    }

    #[test]
    fn spec_pairs_validate_lengths() {
        let id4 = AxisPermutation::identity(4).unwrap();
        let e2 = exps2(1.0, 2.0);
        assert!(matches!(
            ModNormSpec::new(id4.clone(), e2.clone()),
            Err(Error::ExponentLength { expected: 4, got: 2 })
        ));
        let e4 = exps4([1.0, 2.0, 1.0, 2.0]);
        assert!(ModNormSpec::new(id4, e4).is_ok());
    }
}
