//! Small dense linear algebra: fixed-size symmetric tensors, closed-form
//! symmetric eigenvalues and a pivoted Gaussian elimination.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Square matrix of compile-time size `D` stored row-major.
pub type Mat<T, const D: usize> = [[T; D]; D];

pub fn identity<T: Real, const D: usize>() -> Mat<T, D> {
    let mut m = [[T::zero(); D]; D];
    for (a, row) in m.iter_mut().enumerate() {
        row[a] = T::one();
    }
    m
}

pub fn zeros<T: Real, const D: usize>() -> Mat<T, D> {
    [[T::zero(); D]; D]
}

pub fn trace<T: Real, const D: usize>(m: &Mat<T, D>) -> T {
    (0..D).map(|a| m[a][a]).sum()
}

pub fn transpose<T: Real, const D: usize>(m: &Mat<T, D>) -> Mat<T, D> {
    let mut t = *m;
    for a in 0..D {
        for b in 0..D {
            t[a][b] = m[b][a];
        }
    }
    t
}

pub fn outer<T: Real, const D: usize>(x: &[T; D], y: &[T; D]) -> Mat<T, D> {
    let mut m = zeros::<T, D>();
    for a in 0..D {
        for b in 0..D {
            m[a][b] = x[a] * y[b];
        }
    }
    m
}

pub fn mat_add<T: Real, const D: usize>(x: &Mat<T, D>, y: &Mat<T, D>) -> Mat<T, D> {
    let mut m = *x;
    for a in 0..D {
        for b in 0..D {
            m[a][b] += y[a][b];
        }
    }
    m
}

pub fn mat_scale<T: Real, const D: usize>(x: &Mat<T, D>, s: T) -> Mat<T, D> {
    let mut m = *x;
    for row in m.iter_mut() {
        for v in row.iter_mut() {
            *v *= s;
        }
    }
    m
}

pub fn mat_vec<T: Real, const D: usize>(m: &Mat<T, D>, x: &[T; D]) -> [T; D] {
    let mut y = [T::zero(); D];
    for a in 0..D {
        for b in 0..D {
            y[a] += m[a][b] * x[b];
        }
    }
    y
}

pub fn mat_mul<T: Real, const D: usize>(x: &Mat<T, D>, y: &Mat<T, D>) -> Mat<T, D> {
    let mut m = zeros::<T, D>();
    for a in 0..D {
        for b in 0..D {
            for c in 0..D {
                m[a][b] += x[a][c] * y[c][b];
            }
        }
    }
    m
}

pub fn max_abs_diff<T: Real, const D: usize>(x: &Mat<T, D>, y: &Mat<T, D>) -> T {
    let mut d = T::zero();
    for a in 0..D {
        for b in 0..D {
            d = d.max((x[a][b] - y[a][b]).abs());
        }
    }
    d
}

/// Determinant for `D <= 3`.
pub fn det<T: Real, const D: usize>(m: &Mat<T, D>) -> T {
    match D {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        _ => {
            let flat: Vec<T> = m.iter().flat_map(|r| r.iter().copied()).collect();
            lu_det(flat, D)
        }
    }
}

/// Inverse of a small matrix via Gauss-Jordan elimination.
pub fn inverse<T: Real, const D: usize>(m: &Mat<T, D>) -> Option<Mat<T, D>> {
    let mut inv = zeros::<T, D>();
    for col in 0..D {
        let mut a: Vec<T> = m.iter().flat_map(|r| r.iter().copied()).collect();
        let mut rhs = vec![T::zero(); D];
        rhs[col] = T::one();
        solve_dense_in_place(&mut a, &mut rhs, D)?;
        for row in 0..D {
            inv[row][col] = rhs[row];
        }
    }
    Some(inv)
}

fn lu_det<T: Real>(mut a: Vec<T>, n: usize) -> T {
    let mut d = T::one();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i * n + k].abs().partial_cmp(&a[j * n + k].abs()).unwrap())
            .unwrap();
        if a[p * n + k] == T::zero() {
            return T::zero();
        }
        if p != k {
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            d = -d;
        }
        d *= a[k * n + k];
        for i in (k + 1)..n {
            let l = a[i * n + k] / a[k * n + k];
            for c in k..n {
                let v = a[k * n + c];
                a[i * n + c] -= l * v;
            }
        }
    }
    d
}

/// Solves `a x = b` in place (`b` is overwritten with `x`) with partial pivoting.
/// Returns `None` for a numerically singular system.
pub fn solve_dense_in_place<T: Real>(a: &mut [T], b: &mut [T], n: usize) -> Option<()> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].abs();
        for i in (k + 1)..n {
            let v = a[i * n + k].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if !(best > T::zero()) || !best.is_finite() {
            return None;
        }
        if p != k {
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            b.swap(k, p);
        }
        let pivot = a[k * n + k];
        for i in (k + 1)..n {
            let l = a[i * n + k] / pivot;
            if l != T::zero() {
                for c in k..n {
                    let v = a[k * n + c];
                    a[i * n + c] -= l * v;
                }
                let bk = b[k];
                b[i] -= l * bk;
            }
        }
    }
    for k in (0..n).rev() {
        let mut s = b[k];
        for c in (k + 1)..n {
            s -= a[k * n + c] * b[c];
        }
        b[k] = s / a[k * n + k];
    }
    Some(())
}

/// Largest `|m[a][b] - m[b][a]|`.
pub fn asymmetry<T: Real, const D: usize>(m: &Mat<T, D>) -> T {
    let mut d = T::zero();
    for a in 0..D {
        for b in (a + 1)..D {
            d = d.max((m[a][b] - m[b][a]).abs());
        }
    }
    d
}

/// Real eigenvalues of a symmetric 2x2 or 3x3 matrix in ascending order,
/// by the trace/determinant formula (2x2) or the trigonometric Cardano
/// formula (3x3).
pub fn eig_symmetric<T: Real, const D: usize>(m: &Mat<T, D>) -> Result<Vec<T>> {
    let asym = asymmetry(m);
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(T::one(), |acc, v| acc.max(v.abs()));
    if asym > T::lit(1e-10) * scale {
        return Err(Error::Contract(format!(
            "eig_symmetric called with asymmetric matrix (|A - A^T| = {:e})",
            asym.to_f64_lossy()
        )));
    }
    let mut ev = match D {
        1 => vec![m[0][0]],
        2 => {
            let off = T::lit(0.5) * (m[0][1] + m[1][0]);
            let mean = T::lit(0.5) * (m[0][0] + m[1][1]);
            let half_diff = T::lit(0.5) * (m[0][0] - m[1][1]);
            let r = half_diff.hypot(off);
            vec![mean - r, mean + r]
        }
        3 => eig_sym3([
            [m[0][0], m[0][1], m[0][2]],
            [m[1][0], m[1][1], m[1][2]],
            [m[2][0], m[2][1], m[2][2]],
        ]),
        _ => {
            return Err(Error::Contract(format!(
                "closed-form eigenvalues implemented for D <= 3, got {D}"
            )))
        }
    };
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(ev)
}

fn eig_sym3<T: Real>(m: [[T; 3]; 3]) -> Vec<T> {
    let half = T::lit(0.5);
    let a01 = half * (m[0][1] + m[1][0]);
    let a02 = half * (m[0][2] + m[2][0]);
    let a12 = half * (m[1][2] + m[2][1]);
    let p1 = a01 * a01 + a02 * a02 + a12 * a12;
    if p1 == T::zero() {
        return vec![m[0][0], m[1][1], m[2][2]];
    }
    let three = T::lit(3.0);
    let q = (m[0][0] + m[1][1] + m[2][2]) / three;
    let d0 = m[0][0] - q;
    let d1 = m[1][1] - q;
    let d2 = m[2][2] - q;
    let p2 = d0 * d0 + d1 * d1 + d2 * d2 + T::lit(2.0) * p1;
    let p = (p2 / T::lit(6.0)).sqrt();
    let b = [[d0 / p, a01 / p, a02 / p], [a01 / p, d1 / p, a12 / p], [a02 / p, a12 / p, d2 / p]];
    let r = half
        * (b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
            - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
            + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]));
    let r = r.max(-T::one()).min(T::one());
    let phi = r.acos() / three;
    let two_pi_3 = T::lit(2.0) * T::PI() / three;
    let e1 = q + T::lit(2.0) * p * phi.cos();
    let e3 = q + T::lit(2.0) * p * (phi + two_pi_3).cos();
    let e2 = three * q - e1 - e3;
    vec![e1, e2, e3]
}
