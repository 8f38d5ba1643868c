//! Exact arithmetic in the ring `Z[√2, √3, √5]`.
//!
//! Elements are integer combinations of the eight square roots `√s` with `s`
//! a squarefree product of 2, 3, 5. Coordinate `i` belongs to the basis
//! element whose mask is `i` (bit 0 = √2, bit 1 = √3, bit 2 = √5), so
//! `√a · √b = c · √(ab/c²)` reduces to an xor of masks times the product of
//! the shared primes.
//!
//! Cosine matrices scaled by four live entirely in this ring, which keeps
//! determinants division-free.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use rug::Integer;

const PRIMES: [i64; 3] = [2, 3, 5];

/// Radicand of basis element `mask`.
const RADICAND: [i64; 8] = [1, 2, 3, 6, 5, 10, 15, 30];

/// Product of the primes shared by two masks, indexed by `a & b`.
const SHARED: [i64; 8] = [1, 2, 3, 6, 5, 10, 15, 30];

/// Display order of the basis: 1, √2, √3, √5, √6, √10, √15, √30.
const DISPLAY_ORDER: [usize; 8] = [0, 1, 2, 4, 3, 5, 6, 7];

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, serde::Serialize, serde::Deserialize)]
pub struct Z235 {
    c: [i64; 8],
}

impl Z235 {
    pub const ZERO: Z235 = Z235 { c: [0; 8] };
    pub const ONE: Z235 = Z235 {
        c: [1, 0, 0, 0, 0, 0, 0, 0],
    };

    pub fn from_int(n: i64) -> Self {
        let mut c = [0; 8];
        c[0] = n;
        Self { c }
    }

    /// `k·√radicand` for a squarefree radicand dividing 30.
    pub fn sqrt_times(k: i64, radicand: i64) -> Self {
        let mask = RADICAND
            .iter()
            .position(|&r| r == radicand)
            .expect("radicand must be a squarefree divisor of 30");
        let mut c = [0; 8];
        c[mask] = k;
        Self { c }
    }

    pub fn from_coords(c: [i64; 8]) -> Self {
        Self { c }
    }

    pub fn coords(&self) -> &[i64; 8] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    /// True when the element is a plain integer.
    pub fn as_int(&self) -> Option<i64> {
        self.c[1..].iter().all(|&x| x == 0).then_some(self.c[0])
    }

    pub fn to_f64(&self) -> f64 {
        self.c
            .iter()
            .zip(RADICAND)
            .map(|(&k, r)| k as f64 * (r as f64).sqrt())
            .sum()
    }

    /// Evaluates with `prec` bits of mantissa.
    pub fn to_float(&self, prec: u32) -> rug::Float {
        let mut acc = rug::Float::with_val(prec, 0);
        for (mask, &k) in self.c.iter().enumerate() {
            if k != 0 {
                let root = rug::Float::with_val(prec, RADICAND[mask]).sqrt();
                acc += root * k;
            }
        }
        acc
    }

    /// Galois conjugate flipping the sign of `√p` for each prime bit set in `flip`.
    pub fn conjugate(&self, flip: usize) -> Self {
        let mut c = self.c;
        for (mask, x) in c.iter_mut().enumerate() {
            if (mask & flip).count_ones() % 2 == 1 {
                *x = -*x;
            }
        }
        Self { c }
    }

    /// Exact sign, with a floating fast path.
    pub fn signum(&self) -> Ordering {
        let mut scale = 0.0;
        let mut v = 0.0;
        for (mask, &k) in self.c.iter().enumerate() {
            let t = k as f64 * (RADICAND[mask] as f64).sqrt();
            v += t;
            scale += t.abs();
        }
        if scale == 0.0 {
            return Ordering::Equal;
        }
        if v.abs() > 1e-9 * scale {
            return v.partial_cmp(&0.0).unwrap();
        }
        let big: Vec<Integer> = self.c.iter().map(|&x| Integer::from(x)).collect();
        exact_sign(&big, 3)
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }
}

/// Sign of an element of the tower over the first `level` primes.
fn exact_sign(x: &[Integer], level: usize) -> Ordering {
    if level == 0 {
        return x[0].cmp0();
    }
    let half = 1 << (level - 1);
    let a = &x[..half];
    let b = &x[half..2 * half];
    let sa = exact_sign(a, level - 1);
    let sb = exact_sign(b, level - 1);
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    // a and b√p have opposite signs: compare a² with p·b².
    let a2 = tower_mul(a, a);
    let b2 = tower_mul(b, b);
    let p = PRIMES[level - 1];
    let diff: Vec<Integer> = a2
        .iter()
        .zip(&b2)
        .map(|(u, v)| u - Integer::from(v * p))
        .collect();
    match exact_sign(&diff, level - 1) {
        Ordering::Equal => Ordering::Equal,
        Ordering::Greater => sa,
        Ordering::Less => sb,
    }
}

fn tower_mul(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let mut out = vec![Integer::new(); a.len()];
    for (i, x) in a.iter().enumerate() {
        if x.cmp0() == Ordering::Equal {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.cmp0() != Ordering::Equal {
                out[i ^ j] += Integer::from(x * y) * SHARED[i & j];
            }
        }
    }
    out
}

impl Add for Z235 {
    type Output = Z235;
    fn add(mut self, rhs: Z235) -> Z235 {
        self += rhs;
        self
    }
}

impl AddAssign for Z235 {
    fn add_assign(&mut self, rhs: Z235) {
        for (a, b) in self.c.iter_mut().zip(rhs.c) {
            *a += b;
        }
    }
}

impl Sub for Z235 {
    type Output = Z235;
    fn sub(mut self, rhs: Z235) -> Z235 {
        self -= rhs;
        self
    }
}

impl SubAssign for Z235 {
    fn sub_assign(&mut self, rhs: Z235) {
        for (a, b) in self.c.iter_mut().zip(rhs.c) {
            *a -= b;
        }
    }
}

impl Neg for Z235 {
    type Output = Z235;
    fn neg(self) -> Z235 {
        Z235 {
            c: self.c.map(|x| -x),
        }
    }
}

impl Mul for Z235 {
    type Output = Z235;
    fn mul(self, rhs: Z235) -> Z235 {
        let mut c = [0i64; 8];
        for (i, &x) in self.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in rhs.c.iter().enumerate() {
                if y != 0 {
                    c[i ^ j] += x * y * SHARED[i & j];
                }
            }
        }
        Z235 { c }
    }
}

impl Mul<i64> for Z235 {
    type Output = Z235;
    fn mul(self, k: i64) -> Z235 {
        Z235 {
            c: self.c.map(|x| x * k),
        }
    }
}

impl fmt::Debug for Z235 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Z235 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &mask in &DISPLAY_ORDER {
            let k = self.c[mask];
            if k == 0 {
                continue;
            }
            let sign = if k < 0 { "-" } else if first { "" } else { "+" };
            let mag = k.unsigned_abs();
            if mask == 0 {
                write!(f, "{sign}{mag}")?;
            } else if mag == 1 {
                write!(f, "{sign}√{}", RADICAND[mask])?;
            } else {
                write!(f, "{sign}{mag}√{}", RADICAND[mask])?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Minimal commutative ring interface shared by exact scalars and polynomials.
pub trait Ring: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
}

impl Ring for Z235 {
    fn zero() -> Self {
        Z235::ZERO
    }
    fn one() -> Self {
        Z235::ONE
    }
    fn is_zero(&self) -> bool {
        Z235::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        *self + *other
    }
    fn sub(&self, other: &Self) -> Self {
        *self - *other
    }
    fn mul(&self, other: &Self) -> Self {
        *self * *other
    }
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

/// Leading principal minors `det(M[..k, ..k])` for `k = 1..=n`, computed by
/// row-wise expansion over column subsets (no division).
pub fn leading_minors<R: Ring>(m: &[Vec<R>]) -> Vec<R> {
    let n = m.len();
    assert!(n <= 16, "subset expansion limited to 16 rows");
    let mut cur: Vec<Option<R>> = vec![None; 1 << n];
    cur[0] = Some(R::one());
    let mut minors = Vec::with_capacity(n);
    for (row, mrow) in m.iter().enumerate() {
        let mut next: Vec<Option<R>> = vec![None; 1 << n];
        for (set, val) in cur.iter().enumerate() {
            let Some(val) = val else { continue };
            if val.is_zero() || set.count_ones() as usize != row {
                continue;
            }
            for (col, entry) in mrow.iter().enumerate() {
                if set & (1 << col) != 0 || entry.is_zero() {
                    continue;
                }
                let above = (set >> (col + 1)).count_ones();
                let term = val.mul(entry);
                let slot = &mut next[set | (1 << col)];
                *slot = Some(match slot.take() {
                    None if above % 2 == 0 => term,
                    None => R::zero().sub(&term),
                    Some(acc) if above % 2 == 0 => acc.add(&term),
                    Some(acc) => acc.sub(&term),
                });
            }
        }
        let lead = (1usize << (row + 1)) - 1;
        minors.push(next[lead].clone().unwrap_or_else(R::zero));
        cur = next;
    }
    minors
}

pub fn determinant<R: Ring>(m: &[Vec<R>]) -> R {
    if m.is_empty() {
        return R::one();
    }
    leading_minors(m).pop().unwrap()
}
