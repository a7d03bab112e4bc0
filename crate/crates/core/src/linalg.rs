//! Small dense complex linear algebra, sized for phase-space problems with
//! N <= 64. Matrices are rank-2 [`ComplexTensor`]s indexed `(row, col)`.
//!
//! Eigenvalues of Hermitian matrices come from a cyclic Jacobi sweep with
//! complex rotations; positive definite solves use an LL^H factorization.
//! Both are O(n^3) with tiny constants, which is all the frame layer needs.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{real, Scalar};
use crate::tensor::ComplexTensor;

fn require_square<T: Scalar>(m: &ComplexTensor<T>) -> Result<usize> {
    if m.rank() != 2 || m.shape()[0] != m.shape()[1] {
        return Err(Error::ShapeMismatch {
            expected: vec![m.shape()[0], m.shape()[0]],
            got: m.shape().to_vec(),
        });
    }
    Ok(m.shape()[0])
}

pub fn identity<T: Scalar>(n: usize) -> ComplexTensor<T> {
    ComplexTensor::from_fn(&[n, n], |idx| {
        if idx[0] == idx[1] {
            Complex::new(T::one(), T::zero())
        } else {
            Complex::new(T::zero(), T::zero())
        }
    })
    .expect("identity shape is valid")
}

pub fn adjoint<T: Scalar>(m: &ComplexTensor<T>) -> Result<ComplexTensor<T>> {
    if m.rank() != 2 {
        return Err(Error::RankOutOfRange(m.rank()));
    }
    let (r, c) = (m.shape()[0], m.shape()[1]);
    ComplexTensor::from_fn(&[c, r], |idx| m.get(&[idx[1], idx[0]]).conj())
}

pub fn matmul<T: Scalar>(a: &ComplexTensor<T>, b: &ComplexTensor<T>) -> Result<ComplexTensor<T>> {
    if a.rank() != 2 || b.rank() != 2 || a.shape()[1] != b.shape()[0] {
        return Err(Error::ShapeMismatch {
            expected: vec![a.shape()[1], b.shape()[1]],
            got: b.shape().to_vec(),
        });
    }
    let (m, k, n) = (a.shape()[0], a.shape()[1], b.shape()[1]);
    let mut out = ComplexTensor::zeros(&[m, n])?;
    for j in 0..n {
        for l in 0..k {
            let blj = b.get(&[l, j]);
            for i in 0..m {
                let v = out.get(&[i, j]) + a.get(&[i, l]) * blj;
                out.set(&[i, j], v);
            }
        }
    }
    Ok(out)
}

pub fn matvec<T: Scalar>(m: &ComplexTensor<T>, v: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    if m.rank() != 2 || m.shape()[1] != v.len() {
        return Err(Error::ShapeMismatch {
            expected: vec![m.shape()[0], v.len()],
            got: m.shape().to_vec(),
        });
    }
    let rows = m.shape()[0];
    let mut out = vec![Complex::new(T::zero(), T::zero()); rows];
    let data = m.entries();
    for (j, &vj) in v.iter().enumerate() {
        let col = &data[j * rows..(j + 1) * rows];
        for (o, &mij) in out.iter_mut().zip(col) {
            *o = *o + mij * vj;
        }
    }
    Ok(out)
}

pub fn frobenius<T: Scalar>(m: &ComplexTensor<T>) -> T {
    m.entries()
        .iter()
        .fold(T::zero(), |acc, z| acc + z.norm_sqr())
        .sqrt()
}

/// Eigenvalues of a Hermitian matrix, ascending. Only the Hermitian part of
/// the input participates; a materially non-Hermitian matrix is a caller bug
/// and is rejected.
pub fn hermitian_eigenvalues<T: Scalar>(m: &ComplexTensor<T>) -> Result<Vec<T>> {
    let n = require_square(m)?;
    let scale = frobenius(m).max(T::one());
    // reject clearly non-Hermitian input
    for i in 0..n {
        for j in i..n {
            let d = m.get(&[i, j]) - m.get(&[j, i]).conj();
            if d.norm() > real::<T>(1e-9) * scale {
                return Err(Error::ShapeMismatch {
                    expected: m.shape().to_vec(),
                    got: m.shape().to_vec(),
                });
            }
        }
    }
    let mut a: Vec<Complex<T>> = m.entries().to_vec();
    let at = |a: &Vec<Complex<T>>, i: usize, j: usize| a[i + n * j];

    let tol = T::epsilon() * scale * T::from_usize(n).expect("n fits");
    let max_sweeps = 100;
    for sweep in 0..=max_sweeps {
        let mut off = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                off = off + at(&a, i, j).norm_sqr();
            }
        }
        let off = (off + off).sqrt();
        if off <= tol {
            break;
        }
        if sweep == max_sweeps {
            return Err(Error::NoConvergence(max_sweeps));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = at(&a, p, q);
                let r = apq.norm();
                if r <= T::epsilon() * scale {
                    continue;
                }
                let alpha = at(&a, p, p).re;
                let beta = at(&a, q, q).re;
                let phase = apq / r;
                let theta = real::<T>(0.5) * (r + r).atan2(alpha - beta);
                let (s, c) = theta.sin_cos();
                // column update: col_p' = c*col_p + s*conj(phase)*col_q,
                //                col_q' = -s*phase*col_p + c*col_q
                let sp = phase.conj() * s;
                let sm = phase * s;
                for i in 0..n {
                    let aip = a[i + n * p];
                    let aiq = a[i + n * q];
                    a[i + n * p] = aip * c + aiq * sp;
                    a[i + n * q] = aiq * c - aip * sm;
                }
                // row update with the adjoint rotation
                for j in 0..n {
                    let apj = a[p + n * j];
                    let aqj = a[q + n * j];
                    a[p + n * j] = apj * c + aqj * sm;
                    a[q + n * j] = aqj * c - apj * sp;
                }
                a[p + n * q] = Complex::new(T::zero(), T::zero());
                a[q + n * p] = Complex::new(T::zero(), T::zero());
                a[p + n * p] = Complex::new(a[p + n * p].re, T::zero());
                a[q + n * q] = Complex::new(a[q + n * q].re, T::zero());
            }
        }
    }
    let mut eig: Vec<T> = (0..n).map(|i| a[i + n * i].re).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
    Ok(eig)
}

/// Solves `m x = rhs` for Hermitian positive definite `m` via LL^H.
pub fn solve_hermitian_pd<T: Scalar>(
    m: &ComplexTensor<T>,
    rhs: &[Complex<T>],
) -> Result<Vec<Complex<T>>> {
    let n = require_square(m)?;
    if rhs.len() != n {
        return Err(Error::ShapeMismatch {
            expected: vec![n],
            got: vec![rhs.len()],
        });
    }
    // lower factor, column-major like the tensor storage
    let mut l = vec![Complex::new(T::zero(), T::zero()); n * n];
    for j in 0..n {
        let mut d = m.get(&[j, j]).re;
        for k in 0..j {
            d = d - l[j + n * k].norm_sqr();
        }
        if !(d > T::zero()) || !d.is_finite() {
            return Err(Error::NotPositiveDefinite);
        }
        let djj = d.sqrt();
        l[j + n * j] = Complex::new(djj, T::zero());
        for i in (j + 1)..n {
            let mut s = m.get(&[i, j]);
            for k in 0..j {
                s = s - l[i + n * k] * l[j + n * k].conj();
            }
            l[i + n * j] = s / djj;
        }
    }
    // forward substitution L y = rhs
    let mut y = rhs.to_vec();
    for i in 0..n {
        for k in 0..i {
            let t = l[i + n * k] * y[k];
            y[i] = y[i] - t;
        }
        y[i] = y[i] / l[i + n * i];
    }
    // back substitution L^H x = y
    let mut x = y;
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            let t = l[k + n * i].conj() * x[k];
            x[i] = x[i] - t;
        }
        x[i] = x[i] / l[i + n * i];
    }
    Ok(x)
}
