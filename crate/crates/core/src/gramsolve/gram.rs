use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::poly::{Interval, Poly};
use super::real::Real;
use crate::diagrams::{pairs, CoxeterVector, Weight};
use crate::field::{determinant, Z235};

pub const NODES: usize = 7;

/// Smallest admissible angle value `2cos(π/7)`.
pub fn angle_floor() -> f64 {
    2.0 * (std::f64::consts::PI / 7.0).cos()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GramEntry {
    /// Four times the entry.
    Known(Z235),
    /// `−y_i / 2`.
    Angle(usize),
    /// `−x_j`.
    Length(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicGram {
    entries: Vec<Vec<GramEntry>>,
    angle_pairs: Vec<(usize, usize)>,
    length_pairs: Vec<(usize, usize)>,
}

impl SymbolicGram {
    pub fn entry(&self, i: usize, j: usize) -> GramEntry {
        self.entries[i][j]
    }

    pub fn angle_pairs(&self) -> &[(usize, usize)] {
        &self.angle_pairs
    }

    pub fn length_pairs(&self) -> &[(usize, usize)] {
        &self.length_pairs
    }

    pub fn num_angles(&self) -> usize {
        self.angle_pairs.len()
    }

    pub fn num_lengths(&self) -> usize {
        self.length_pairs.len()
    }

    /// Numeric Gram matrix for angle weights `ks` and lengths `xs`.
    pub fn numeric<R: Real>(&self, prec: u32, ks: &[u32], xs: &[R]) -> Vec<Vec<R>> {
        let ys: Vec<R> = ks
            .iter()
            .map(|&k| R::cos_pi_over(prec, k) * R::with_int(prec, 2))
            .collect();
        self.numeric_with_angles(prec, &ys, xs)
    }

    /// Numeric Gram matrix for angle values `y_i = 2cos(π/k_i)` and lengths.
    pub fn numeric_with_angles<R: Real>(&self, prec: u32, ys: &[R], xs: &[R]) -> Vec<Vec<R>> {
        let four = R::with_int(prec, 4);
        let two = R::with_int(prec, 2);
        (0..NODES)
            .map(|i| {
                (0..NODES)
                    .map(|j| match self.entries[i][j] {
                        GramEntry::Known(z) => R::from_z235(prec, &z) / four.clone(),
                        GramEntry::Angle(a) => -(ys[a].clone() / two.clone()),
                        GramEntry::Length(l) => -xs[l].clone(),
                    })
                    .collect()
            })
            .collect()
    }
}

/// Replaces weights by Gram entries; unknowns are numbered in pair order.
pub fn substitute(v: &CoxeterVector) -> SymbolicGram {
    assert_eq!(v.nodes(), NODES, "Gram substitution expects seven facets");
    let mut entries = vec![vec![GramEntry::Known(Z235::ZERO); NODES]; NODES];
    for (i, row) in entries.iter_mut().enumerate() {
        row[i] = GramEntry::Known(Z235::from_int(4));
    }
    let mut angle_pairs = Vec::new();
    let mut length_pairs = Vec::new();
    for (i, j) in pairs(NODES) {
        let e = match v.get(i, j) {
            Weight::Divergent => {
                length_pairs.push((i, j));
                GramEntry::Length(length_pairs.len() - 1)
            }
            Weight::Angle(k) if k >= 7 => {
                angle_pairs.push((i, j));
                GramEntry::Angle(angle_pairs.len() - 1)
            }
            w => GramEntry::Known(w.scaled_cos().expect("finite weight below 7")),
        };
        entries[i][j] = e;
        entries[j][i] = e;
    }
    SymbolicGram {
        entries,
        angle_pairs,
        length_pairs,
    }
}

/// The seven principal 6×6 minor equations.
///
/// Equation `i` is `det(4·M_i) = 2048 · (2 det M_i)` where `M_i` deletes row
/// and column `i`. Variables are the angles `y_0..` followed by the lengths
/// `x_0..`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorSystem {
    pub equations: Vec<Poly>,
    pub num_angles: usize,
    pub num_lengths: usize,
}

impl MinorSystem {
    pub fn angle_var(&self, i: usize) -> usize {
        i
    }

    pub fn length_var(&self, j: usize) -> usize {
        self.num_angles + j
    }

    pub fn num_vars(&self) -> usize {
        self.num_angles + self.num_lengths
    }

    pub fn var_names(&self) -> Vec<String> {
        (0..self.num_angles)
            .map(|i| format!("y{}", i + 1))
            .chain((0..self.num_lengths).map(|j| format!("x{}", j + 1)))
            .collect()
    }

    fn length_mask(&self) -> u32 {
        ((1u32 << self.num_lengths) - 1) << self.num_angles
    }

    /// Indices of the equations free of length unknowns.
    pub fn length_free(&self) -> Vec<usize> {
        let lm = self.length_mask();
        (0..self.equations.len())
            .filter(|&i| self.equations[i].var_mask() & lm == 0)
            .collect()
    }
}

pub fn minor_system(g: &SymbolicGram) -> MinorSystem {
    let a = g.num_angles();
    let entry = |i: usize, j: usize| -> Poly {
        match g.entry(i, j) {
            GramEntry::Known(z) => Poly::constant(z),
            GramEntry::Angle(k) => Poly::var(k, Z235::from_int(-2)),
            GramEntry::Length(l) => Poly::var(a + l, Z235::from_int(-4)),
        }
    };
    let equations = (0..NODES)
        .map(|del| {
            let idx: Vec<usize> = (0..NODES).filter(|&r| r != del).collect();
            let m: Vec<Vec<Poly>> = idx
                .iter()
                .map(|&r| idx.iter().map(|&c| entry(r, c)).collect())
                .collect();
            determinant(&m)
        })
        .collect();
    MinorSystem {
        equations,
        num_angles: a,
        num_lengths: g.num_lengths(),
    }
}

/// True when interval bisection proves that the equations have no common
/// zero in the box. `budget` bounds the number of boxes examined.
pub fn excludes(eqs: &[&Poly], bx: &[Interval], budget: usize) -> bool {
    let mut stack = vec![bx.to_vec()];
    let mut seen = 0;
    while let Some(b) = stack.pop() {
        if eqs.iter().any(|p| !p.eval_interval(&b).contains(0.0)) {
            continue;
        }
        seen += 1;
        if seen >= budget {
            return false;
        }
        let Some(dim) = widest(&b) else {
            return false;
        };
        let (l, r) = b[dim].split();
        let mut bl = b.clone();
        bl[dim] = l;
        let mut br = b;
        br[dim] = r;
        stack.push(bl);
        stack.push(br);
    }
    true
}

fn widest(b: &[Interval]) -> Option<usize> {
    (0..b.len())
        .filter(|&i| b[i].width() > 0.0)
        .max_by(|&x, &y| b[x].width().partial_cmp(&b[y].width()).unwrap_or(Ordering::Equal))
}

struct Cell {
    key: f64,
    bx: Vec<Interval>,
}

impl PartialEq for Cell {
    fn eq(&self, o: &Self) -> bool {
        self.key == o.key
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Cell {
    fn cmp(&self, o: &Self) -> Ordering {
        self.key.partial_cmp(&o.key).unwrap_or(Ordering::Equal)
    }
}

/// Conservative bound on the smallest (or largest) value of `var` over the
/// common zero set of `eqs` in `bx`; `None` when the set is provably empty.
fn extreme(eqs: &[&Poly], bx: &[Interval], var: usize, lowest: bool, tol: f64) -> Option<f64> {
    let key = |b: &[Interval]| if lowest { -b[var].lo } else { b[var].hi };
    let others_tol = (1e-3 * 8f64.powi(bx.len() as i32 - 2)).min(1.0);
    let mut heap = BinaryHeap::new();
    heap.push(Cell {
        key: key(bx),
        bx: bx.to_vec(),
    });
    let mut steps = 0;
    while let Some(Cell { bx: b, .. }) = heap.pop() {
        if eqs.iter().any(|p| !p.eval_interval(&b).contains(0.0)) {
            continue;
        }
        steps += 1;
        let bound = if lowest { b[var].lo } else { b[var].hi };
        if steps > 20_000 {
            return Some(bound);
        }
        let rel = |i: usize| b[i].width() / if i == var { tol } else { others_tol };
        let Some(dim) = (0..b.len())
            .filter(|&i| rel(i) > 1.0)
            .max_by(|&x, &y| rel(x).partial_cmp(&rel(y)).unwrap_or(Ordering::Equal))
        else {
            return Some(bound);
        };
        let (l, r) = b[dim].split();
        for half in [l, r] {
            let mut nb = b.clone();
            nb[dim] = half;
            heap.push(Cell {
                key: key(&nb),
                bx: nb,
            });
        }
    }
    None
}

/// Angle box for each unknown from the length-free equations.
///
/// Returns `None` when the equations have no common zero with every angle in
/// `[2cos(π/7), 2]`.
pub fn feasible_angle_boxes(sys: &MinorSystem, tol: f64) -> Option<Vec<Interval>> {
    let free = sys.length_free();
    let eqs: Vec<&Poly> = free.iter().map(|&i| &sys.equations[i]).collect();
    let domain = Interval::new(angle_floor(), 2.0);
    let mut bx = vec![domain; sys.num_angles];
    if eqs
        .iter()
        .any(|p| p.as_constant().is_some_and(|c| !c.is_zero()))
    {
        return None;
    }
    let involved: Vec<&Poly> = eqs.iter().copied().filter(|p| p.var_mask() != 0).collect();
    for v in 0..sys.num_angles {
        if involved.iter().all(|p| p.var_mask() & (1 << v) == 0) {
            continue;
        }
        let lo = extreme(&involved, &bx, v, true, tol)?;
        let hi = extreme(&involved, &bx, v, false, tol)?;
        bx[v] = Interval::new(lo.max(domain.lo), hi.min(domain.hi));
    }
    Some(bx)
}

/// Box for one angle unknown.
pub fn feasible_angle_box(sys: &MinorSystem, var: usize) -> Option<Interval> {
    feasible_angle_boxes(sys, 1e-5).map(|b| b[var])
}
