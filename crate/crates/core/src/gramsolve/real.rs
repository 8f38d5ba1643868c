//! Dense linear algebra over `f64` and `rug::Float` at a chosen precision.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::Float;

use crate::field::Z235;

pub trait Real:
    Clone
    + PartialOrd
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn with_f64(prec: u32, v: f64) -> Self;
    fn with_int(prec: u32, v: i64) -> Self;
    fn from_z235(prec: u32, z: &Z235) -> Self;
    /// `cos(π/k)`.
    fn cos_pi_over(prec: u32, k: u32) -> Self;
    fn precision(&self) -> u32;
    fn sqrt(&self) -> Self;
    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;
    /// Smallest relative spacing at this precision.
    fn epsilon(&self) -> f64 {
        2f64.powi(1 - self.precision() as i32)
    }
    fn to_decimal(&self, digits: usize) -> String;
}

impl Real for f64 {
    fn with_f64(_: u32, v: f64) -> Self {
        v
    }
    fn with_int(_: u32, v: i64) -> Self {
        v as f64
    }
    fn from_z235(_: u32, z: &Z235) -> Self {
        z.to_f64()
    }
    fn cos_pi_over(_: u32, k: u32) -> Self {
        (std::f64::consts::PI / k as f64).cos()
    }
    fn precision(&self) -> u32 {
        53
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_decimal(&self, digits: usize) -> String {
        format!("{:.*e}", digits.saturating_sub(1), self)
    }
}

impl Real for Float {
    fn with_f64(prec: u32, v: f64) -> Self {
        Float::with_val(prec, v)
    }
    fn with_int(prec: u32, v: i64) -> Self {
        Float::with_val(prec, v)
    }
    fn from_z235(prec: u32, z: &Z235) -> Self {
        z.to_float(prec)
    }
    fn cos_pi_over(prec: u32, k: u32) -> Self {
        let pi = Float::with_val(prec, Constant::Pi);
        (pi / k).cos()
    }
    fn precision(&self) -> u32 {
        self.prec()
    }
    fn sqrt(&self) -> Self {
        self.clone().sqrt()
    }
    fn abs(&self) -> Self {
        self.clone().abs()
    }
    fn to_f64(&self) -> f64 {
        Float::to_f64(self)
    }
    fn to_decimal(&self, digits: usize) -> String {
        self.to_string_radix(10, Some(digits))
    }
}

/// Decimal digits to binary precision, with guard bits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 64
}

fn zero_like<R: Real>(x: &R) -> R {
    R::with_int(x.precision(), 0)
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det<R: Real>(mut m: Vec<Vec<R>>) -> R {
    let n = m.len();
    if n == 0 {
        return R::with_int(53, 1);
    }
    let prec = m[0][0].precision();
    let mut d = R::with_int(prec, 1);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| {
                m[a][col]
                    .abs()
                    .partial_cmp(&m[b][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        if m[pivot][col] == zero_like(&m[pivot][col]) {
            return R::with_int(prec, 0);
        }
        if pivot != col {
            m.swap(pivot, col);
            d = -d;
        }
        let p = m[col][col].clone();
        d = d * p.clone();
        for r in col + 1..n {
            let f = m[r][col].clone() / p.clone();
            for c in col + 1..n {
                let v = m[r][c].clone() - f.clone() * m[col][c].clone();
                m[r][c] = v;
            }
        }
    }
    d
}

/// Inverse and determinant by Gauss-Jordan; `None` when a pivot vanishes exactly.
pub fn inverse<R: Real>(m: &[Vec<R>]) -> Option<(Vec<Vec<R>>, R)> {
    let n = m.len();
    let prec = m.first()?.first()?.precision();
    let mut a: Vec<Vec<R>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| R::with_int(prec, (i == j) as i64)));
            r
        })
        .collect();
    let mut d = R::with_int(prec, 1);
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| {
            a[x][col]
                .abs()
                .partial_cmp(&a[y][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot][col] == R::with_int(prec, 0) {
            return None;
        }
        if pivot != col {
            a.swap(pivot, col);
            d = -d;
        }
        let p = a[col][col].clone();
        d = d * p.clone();
        for c in 0..2 * n {
            a[col][c] = a[col][c].clone() / p.clone();
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..2 * n {
                let v = a[r][c].clone() - f.clone() * a[col][c].clone();
                a[r][c] = v;
            }
        }
    }
    Some((a.into_iter().map(|row| row[n..].to_vec()).collect(), d))
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues<R: Real>(m: &[Vec<R>]) -> Vec<R> {
    let n = m.len();
    if n == 0 {
        return Vec::new();
    }
    let mut a: Vec<Vec<R>> = m.to_vec();
    let prec = a[0][0].precision();
    let eps = a[0][0].epsilon();
    let norm: f64 = a
        .iter()
        .flatten()
        .map(|x| x.to_f64() * x.to_f64())
        .sum::<f64>()
        .sqrt();
    let threshold = R::with_f64(prec, (eps * norm).max(f64::MIN_POSITIVE));
    let one = R::with_int(prec, 1);
    let two = R::with_int(prec, 2);
    for _ in 0..100 {
        let mut off = zero_like(&a[0][0]);
        for p in 0..n {
            for q in p + 1..n {
                off = off + a[p][q].clone() * a[p][q].clone();
            }
        }
        if off.sqrt() < threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < threshold.clone() / R::with_int(prec, n as i64 * n as i64) {
                    continue;
                }
                let theta =
                    (a[q][q].clone() - a[p][p].clone()) / (two.clone() * a[p][q].clone());
                let root = (theta.clone() * theta.clone() + one.clone()).sqrt();
                let t = if theta >= zero_like(&theta) {
                    one.clone() / (theta.clone() + root)
                } else {
                    -(one.clone() / (root - theta.clone()))
                };
                let c = one.clone() / (t.clone() * t.clone() + one.clone()).sqrt();
                let s = t.clone() * c.clone();
                for k in 0..n {
                    let akp = a[k][p].clone();
                    let akq = a[k][q].clone();
                    a[k][p] = c.clone() * akp.clone() - s.clone() * akq.clone();
                    a[k][q] = s.clone() * akp + c.clone() * akq;
                }
                for k in 0..n {
                    let apk = a[p][k].clone();
                    let aqk = a[q][k].clone();
                    a[p][k] = c.clone() * apk.clone() - s.clone() * aqk.clone();
                    a[q][k] = s.clone() * apk + c.clone() * aqk;
                }
            }
        }
    }
    let mut ev: Vec<R> = (0..n).map(|i| a[i][i].clone()).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_and_inverse() {
        let m = vec![
            vec![2.0, 1.0, 0.0],
            vec![1.0, 3.0, 1.0],
            vec![0.0, 1.0, 4.0],
        ];
        assert!((det(m.clone()) - 18.0).abs() < 1e-12);
        let (inv, d) = inverse(&m).unwrap();
        assert!((d - 18.0).abs() < 1e-12);
        for i in 0..3 {
            for j in 0..3 {
                let e: f64 = (0..3).map(|k| m[i][k] * inv[k][j]).sum();
                assert!((e - (i == j) as i32 as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eigenvalues_high_precision() {
        let prec = 200;
        let f = |v: f64| Float::with_val(prec, v);
        let m = vec![
            vec![f(2.0), f(-1.0), f(0.0)],
            vec![f(-1.0), f(2.0), f(-1.0)],
            vec![f(0.0), f(-1.0), f(2.0)],
        ];
        let ev = symmetric_eigenvalues(&m);
        let two = f(2.0);
        let s2 = f(2.0).sqrt();
        let want = [two.clone() - s2.clone(), two.clone(), two + s2];
        for (a, b) in ev.iter().zip(&want) {
            assert!((a.clone() - b.clone()).abs() < 1e-55);
        }
    }

    #[test]
    fn cosines_agree() {
        let c = <Float as Real>::cos_pi_over(128, 7);
        assert!((c.to_f64() - (std::f64::consts::PI / 7.0).cos()).abs() < 1e-15);
    }
}
