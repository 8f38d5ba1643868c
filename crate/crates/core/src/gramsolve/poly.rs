//! Sparse multivariate polynomials over `Z[√2, √3, √5]` and interval bounds.

use std::collections::BTreeMap;
use std::fmt;

use crate::field::{Ring, Z235};

pub const MAX_VARS: usize = 12;

pub type Monomial = [u8; MAX_VARS];

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Z235>,
}

impl Poly {
    pub fn constant(c: Z235) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0; MAX_VARS], c);
        }
        Self { terms }
    }

    /// `c · v_i`.
    pub fn var(i: usize, c: Z235) -> Self {
        assert!(i < MAX_VARS);
        let mut m = [0; MAX_VARS];
        m[i] = 1;
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Z235)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Bit `i` set when variable `i` occurs.
    pub fn var_mask(&self) -> u32 {
        self.terms.keys().fold(0, |acc, m| {
            acc | m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .fold(0, |a, (i, _)| a | (1 << i))
        })
    }

    pub fn as_constant(&self) -> Option<Z235> {
        match self.terms.len() {
            0 => Some(Z235::ZERO),
            1 => self.terms.get(&[0; MAX_VARS]).copied(),
            _ => None,
        }
    }

    pub fn eval_f64(&self, vals: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .fold(c.to_f64(), |acc, (i, &e)| acc * vals[i].powi(e as i32))
            })
            .sum()
    }

    /// Sum of absolute term values, a scale for residual tolerances.
    pub fn magnitude_f64(&self, vals: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .fold(c.to_f64().abs(), |acc, (i, &e)| acc * vals[i].abs().powi(e as i32))
            })
            .sum()
    }

    /// Natural interval extension, widened to absorb rounding.
    pub fn eval_interval(&self, vals: &[Interval]) -> Interval {
        let mut acc = Interval::point(0.0);
        for (m, c) in &self.terms {
            let mut t = Interval::point(c.to_f64());
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&vals[i].powi(e as u32));
                }
            }
            acc = acc.add(&t);
        }
        acc.widened(self.terms.len())
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let name = names.get(i).cloned().unwrap_or_else(|| format!("v{i}"));
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            if mono.is_empty() {
                parts.push(format!("({c})"));
            } else {
                parts.push(format!("({c})*{}", mono.join("*")));
            }
        }
        parts.join(" + ")
    }
}

impl Ring for Poly {
    fn zero() -> Self {
        Poly::default()
    }

    fn one() -> Self {
        Poly::constant(Z235::ONE)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let e = terms.entry(*m).or_insert(Z235::ZERO);
            *e += *c;
            if e.is_zero() {
                terms.remove(m);
            }
        }
        Self { terms }
    }

    fn sub(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let e = terms.entry(*m).or_insert(Z235::ZERO);
            *e -= *c;
            if e.is_zero() {
                terms.remove(m);
            }
        }
        Self { terms }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<Monomial, Z235> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut m = *ma;
                for (x, y) in m.iter_mut().zip(mb) {
                    *x += y;
                }
                let e = terms.entry(m).or_insert(Z235::ZERO);
                *e += *ca * *cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Self { terms }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn split(&self) -> (Interval, Interval) {
        let m = self.mid();
        (Interval::new(self.lo, m), Interval::new(m, self.hi))
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(self.lo + o.lo, self.hi + o.hi)
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        Interval::new(
            c.iter().copied().fold(f64::INFINITY, f64::min),
            c.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        )
    }

    pub fn powi(&self, e: u32) -> Interval {
        if e == 0 {
            return Interval::point(1.0);
        }
        let a = self.lo.powi(e as i32);
        let b = self.hi.powi(e as i32);
        if e % 2 == 1 || self.lo >= 0.0 || self.hi <= 0.0 {
            Interval::new(a.min(b), a.max(b))
        } else {
            Interval::new(0.0, a.max(b))
        }
    }

    /// Outward widening covering about `ops` rounding steps.
    pub fn widened(&self, ops: usize) -> Interval {
        let slack = (self.lo.abs().max(self.hi.abs()) + 1.0) * f64::EPSILON * 4.0 * (ops + 1) as f64;
        Interval::new(self.lo - slack, self.hi + slack)
    }
}
