//! Complex tensors of rank 1..=4 with nested mixed norms.
//!
//! Storage is axis-1-fastest: the entry at multi-index `(i1, ..., ik)` sits at
//! linear index `i1 + n1*(i2 + n2*(i3 + n3*i4))`. The mixed norm with exponent
//! vector `(p1, ..., pk)` reduces axis 1 innermost with `p1` and axis k
//! outermost with `pk`, each reduction being a plain `l^p` norm with respect
//! to counting measure.
//!
//! Two guarantees matter downstream and are worth stating up front:
//!
//! * every sum inside a norm uses a fixed pairwise reduction tree, so results
//!   do not depend on evaluation order or thread count;
//! * when all exponents coincide the nested norm collapses to a flat `l^p`
//!   norm of the entry magnitudes, which this module evaluates over the
//!   *sorted* magnitudes. Any pure rearrangement of the entries (in
//!   particular any axis permutation) then produces a bit-identical value.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{pairwise_sum, pairwise_sum_complex, real, Scalar};

/// Ranks above 4 never occur: phase space for a kernel on Z_N x Z_N has four
/// coordinates and that is the largest object handled anywhere.
pub const MAX_RANK: usize = 4;

/// Extended-real exponent in `[1, inf]`. Infinity is a tag, not a float, so
/// norm code never does arithmetic on floating infinities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent<T> {
    Finite(T),
    Infinity,
}

impl<T: Scalar> Exponent<T> {
    /// Accepts values in `[1, inf]`; `T::infinity()` becomes the tag.
    pub fn new(value: T) -> Result<Self> {
        if value.is_infinite() && value > T::zero() {
            return Ok(Self::Infinity);
        }
        if !value.is_finite() || value < T::one() {
            return Err(Error::BadExponent(value.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self::Finite(value))
    }

    pub fn one() -> Self {
        Self::Finite(T::one())
    }

    pub fn two() -> Self {
        Self::Finite(T::one() + T::one())
    }

    pub fn infinity() -> Self {
        Self::Infinity
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Self::Infinity)
    }

    /// The exponent as a scalar; the infinite tag maps to `T::infinity()`.
    pub fn value(self) -> T {
        match self {
            Self::Finite(p) => p,
            Self::Infinity => T::infinity(),
        }
    }

    /// Conjugate exponent: `1/p + 1/p' = 1`, with `1` and `inf` swapped.
    pub fn dual(self) -> Self {
        match self {
            Self::Infinity => Self::Finite(T::one()),
            Self::Finite(p) if p == T::one() => Self::Infinity,
            Self::Finite(p) => Self::Finite(p / (p - T::one())),
        }
    }
}

/// Exponent vector for a nested mixed norm; length 1..=4 matches tensor rank.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentVector<T> {
    exps: Vec<Exponent<T>>,
}

impl<T: Scalar> ExponentVector<T> {
    pub fn new(exps: Vec<Exponent<T>>) -> Result<Self> {
        if exps.is_empty() || exps.len() > MAX_RANK {
            return Err(Error::RankOutOfRange(exps.len()));
        }
        Ok(Self { exps })
    }

    /// Builds from plain scalars; `T::infinity()` entries become the tag.
    pub fn from_values(values: &[T]) -> Result<Self> {
        let exps = values
            .iter()
            .map(|&v| Exponent::new(v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(exps)
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn get(&self, i: usize) -> Exponent<T> {
        self.exps[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = Exponent<T>> + '_ {
        self.exps.iter().copied()
    }

    pub fn all_equal(&self) -> bool {
        self.exps.iter().all(|&p| p == self.exps[0])
    }

    /// Entrywise conjugate exponents.
    pub fn dual(&self) -> Self {
        Self {
            exps: self.exps.iter().map(|p| p.dual()).collect(),
        }
    }
}

/// Entrywise conjugate exponent vector.
pub fn dual_exponents<T: Scalar>(p: &ExponentVector<T>) -> ExponentVector<T> {
    p.dual()
}

/// Permutation `c` of the axes `{0, ..., k-1}`.
///
/// Its action on an index tuple is `act(c, y) = (y[c(0)], ..., y[c(k-1)])`,
/// and [`ComplexTensor::permute_axes`] computes `t o c`, the tensor whose
/// entry at `y` is the input entry at `act(c, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxisPermutation {
    map: Vec<usize>,
}

impl AxisPermutation {
    pub fn new(map: &[usize]) -> Result<Self> {
        if map.is_empty() || map.len() > MAX_RANK {
            return Err(Error::RankOutOfRange(map.len()));
        }
        let mut seen = vec![false; map.len()];
        for &i in map {
            if i >= map.len() || seen[i] {
                return Err(Error::BadPermutation(map.to_vec(), map.len()));
            }
            seen[i] = true;
        }
        Ok(Self { map: map.to_vec() })
    }

    pub fn identity(k: usize) -> Result<Self> {
        Self::new(&(0..k).collect::<Vec<_>>())
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Self { map: inv }
    }

    /// Composition of tuple actions: `act(a.compose(b), y) = act(a, act(b, y))`.
    ///
    /// Equivalently, permuting a tensor by `a` and then by `b` is one
    /// permutation by `a.compose(b)`:
    /// `t.permute_axes(a).permute_axes(b) == t.permute_axes(a.compose(b))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::BadPermutation(other.map.clone(), self.len()));
        }
        let map: Vec<usize> = self.map.iter().map(|&i| other.map[i]).collect();
        Ok(Self { map })
    }

    /// Applies the tuple action to a multi-index.
    pub fn apply_tuple(&self, idx: &[usize]) -> Vec<usize> {
        self.map.iter().map(|&i| idx[i]).collect()
    }
}

/// Dense complex tensor of rank 1..=4, axis-1-fastest storage.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexTensor<T> {
    shape: Vec<usize>,
    entries: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexTensor<T> {
    /// Validates rank, extents, entry count, and finiteness.
    pub fn new(shape: &[usize], entries: Vec<Complex<T>>) -> Result<Self> {
        if shape.is_empty() || shape.len() > MAX_RANK {
            return Err(Error::RankOutOfRange(shape.len()));
        }
        for (axis, &n) in shape.iter().enumerate() {
            if n == 0 {
                return Err(Error::EmptyAxis { axis });
            }
        }
        let expected: usize = shape.iter().product();
        if entries.len() != expected {
            return Err(Error::EntryCount {
                expected,
                got: entries.len(),
            });
        }
        for (i, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite(i));
            }
        }
        Ok(Self {
            shape: shape.to_vec(),
            entries,
        })
    }

    pub fn zeros(shape: &[usize]) -> Result<Self> {
        let count: usize = shape.iter().product();
        Self::new(shape, vec![Complex::new(T::zero(), T::zero()); count])
    }

    pub fn from_fn(shape: &[usize], mut f: impl FnMut(&[usize]) -> Complex<T>) -> Result<Self> {
        let mut out = Self::zeros(shape)?;
        let mut idx = vec![0usize; shape.len()];
        for lin in 0..out.entries.len() {
            out.entries[lin] = f(&idx);
            // odometer increment, axis 1 fastest
            for (axis, i) in idx.iter_mut().enumerate() {
                *i += 1;
                if *i < shape[axis] {
                    break;
                }
                *i = 0;
            }
        }
        // re-validate finiteness of produced values
        Self::new(shape, out.entries)
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.entries
    }

    /// Linear index of a multi-index, axis 1 fastest.
    pub fn linear_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.shape.len());
        let mut lin = 0;
        for axis in (0..idx.len()).rev() {
            debug_assert!(idx[axis] < self.shape[axis]);
            lin = lin * self.shape[axis] + idx[axis];
        }
        lin
    }

    pub fn get(&self, idx: &[usize]) -> Complex<T> {
        self.entries[self.linear_index(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: Complex<T>) {
        let lin = self.linear_index(idx);
        self.entries[lin] = value;
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self {
            shape: self.shape.clone(),
            entries: self.entries.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch {
                expected: self.shape.clone(),
                got: other.shape.clone(),
            });
        }
        Ok(Self {
            shape: self.shape.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex::new(-T::one(), T::zero())))
    }

    /// The tensor `self o c`: entry at `y` is the input entry at
    /// `(y[c(0)], ..., y[c(k-1)])`. A pure rearrangement; the multiset of
    /// entries is preserved exactly.
    pub fn permute_axes(&self, c: &AxisPermutation) -> Result<Self> {
        let k = self.rank();
        if c.len() != k {
            return Err(Error::BadPermutation(c.map().to_vec(), k));
        }
        // Output axis c(i) runs over input axis i, so extents transport as
        // out_shape[c(i)] = shape[i].
        let mut out_shape = vec![0usize; k];
        for i in 0..k {
            out_shape[c.map()[i]] = self.shape[i];
        }
        let mut out = Self::zeros(&out_shape)?;
        let mut y = vec![0usize; k];
        let mut in_idx = vec![0usize; k];
        for lin in 0..out.entries.len() {
            for i in 0..k {
                in_idx[i] = y[c.map()[i]];
            }
            out.entries[lin] = self.entries[self.linear_index(&in_idx)];
            for (axis, yi) in y.iter_mut().enumerate() {
                *yi += 1;
                if *yi < out_shape[axis] {
                    break;
                }
                *yi = 0;
            }
        }
        Ok(out)
    }

    /// Nested mixed norm, axis 1 innermost.
    ///
    /// Equal exponent vectors take the order-canonical flat path (see the
    /// module docs), so the value is invariant under axis permutations down
    /// to the last bit. Distinct exponents reduce axis by axis.
    pub fn mixed_norm(&self, exps: &ExponentVector<T>) -> Result<T> {
        if exps.len() != self.rank() {
            return Err(Error::ExponentLength {
                expected: self.rank(),
                got: exps.len(),
            });
        }
        let mut vals: Vec<T> = self.entries.iter().map(|z| z.norm()).collect();
        if exps.all_equal() {
            vals.sort_by(|a, b| a.partial_cmp(b).expect("entries are finite"));
            return Ok(lp_reduce(&vals, exps.get(0)));
        }
        let shape = self.shape.clone();
        for axis in 0..shape.len() {
            let extent = shape[axis];
            vals = vals
                .chunks_exact(extent)
                .map(|chunk| lp_reduce(chunk, exps.get(axis)))
                .collect();
        }
        debug_assert_eq!(vals.len(), 1);
        Ok(vals[0])
    }
}

/// Plain `l^p` norm of nonnegative values: max for the infinite tag, pairwise
/// sum for `p = 1`, and a max-scaled pairwise power sum otherwise.
pub(crate) fn lp_reduce<T: Scalar>(vals: &[T], p: Exponent<T>) -> T {
    match p {
        Exponent::Infinity => vals.iter().fold(T::zero(), |m, &v| m.max(v)),
        Exponent::Finite(p) if p == T::one() => pairwise_sum(vals),
        Exponent::Finite(p) => {
            let m = vals.iter().fold(T::zero(), |m, &v| m.max(v));
            if m == T::zero() {
                return T::zero();
            }
            let powered: Vec<T> = vals.iter().map(|&v| (v / m).powf(p)).collect();
            m * pairwise_sum(&powered).powf(T::one() / p)
        }
    }
}

/// Sesquilinear pairing `sum over entries of t * conj(u)`.
pub fn pairing<T: Scalar>(t: &ComplexTensor<T>, u: &ComplexTensor<T>) -> Result<Complex<T>> {
    if t.shape() != u.shape() {
        return Err(Error::ShapeMismatch {
            expected: t.shape().to_vec(),
            got: u.shape().to_vec(),
        });
    }
    let terms: Vec<Complex<T>> = t
        .entries()
        .iter()
        .zip(u.entries())
        .map(|(&a, &b)| a * b.conj())
        .collect();
    Ok(pairwise_sum_complex(&terms))
}

/// Relative closeness helper used across the test suites.
pub fn rel_close<T: Scalar>(a: T, b: T, tol: f64) -> bool {
    let scale = T::one().max(a.abs().max(b.abs()));
    (a - b).abs() <= real::<T>(tol) * scale
}
