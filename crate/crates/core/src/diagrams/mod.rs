//! Coxeter vectors and diagrams.
//!
//! A Coxeter vector lists the entries of the upper triangle of an `m × m`
//! Coxeter matrix in lexicographic pair order `01, 02, …, 0(m-1), 12, …`.

mod canonical;
mod classify;
mod dot;
mod library;
mod order;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::Z235;

pub use canonical::{canonical_form, canonical_packed, Canonicalizer};
pub(crate) use canonical::for_each_permutation;
pub use classify::{classify, component_kind, ComponentKind, Diagram, DiagramClass};
pub use dot::export_dot;
pub use library::{generate_library, LibraryClass, LibraryId, LibrarySet, VectorLibrary};
pub use order::elliptic_order;
pub(crate) use order::subset_order;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("vector contains a divergent entry at pair {0}")]
    Divergent(String),
    #[error("expected {expected} entries for {m} nodes, got {got}")]
    Length { m: usize, expected: usize, got: usize },
    #[error("bad entry {0:?}")]
    BadEntry(String),
    #[error("node count {0} outside the supported range")]
    NodeCount(usize),
    #[error("weight cap {0} unsupported (use 3..=7; 7 stands for every k >= 7)")]
    WeightCap(u32),
    #[error("diagram is not elliptic")]
    NotElliptic,
    #[error("elliptic component not in the catalog: {0}")]
    UnknownComponent(String),
    #[error("library cache: {0}")]
    Cache(String),
}

/// One Coxeter matrix entry.
///
/// The derived order (parallel, then angles by increasing `k`, then divergent)
/// is the order used for canonical forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Weight {
    /// Facets meet at infinity; Gram entry −1.
    Parallel,
    /// Dihedral angle π/k, `k ≥ 2`.
    Angle(u32),
    /// Facets are ultraparallel; Gram entry −cosh(distance).
    Divergent,
}

impl Weight {
    /// 3-bit code, monotone in the weight order. Angles above 7 share code 6.
    pub fn code(self) -> u8 {
        match self {
            Weight::Parallel => 0,
            Weight::Angle(k) => (k.min(7) - 1) as u8,
            Weight::Divergent => 7,
        }
    }

    pub fn from_code(c: u8) -> Weight {
        match c {
            0 => Weight::Parallel,
            7 => Weight::Divergent,
            c => Weight::Angle(c as u32 + 1),
        }
    }

    /// Four times the Gram entry, when it lies in `Z[√2,√3,√5]`.
    pub fn scaled_cos(self) -> Option<Z235> {
        match self {
            Weight::Parallel => Some(Z235::from_int(-4)),
            Weight::Angle(2) => Some(Z235::ZERO),
            Weight::Angle(3) => Some(Z235::from_int(-2)),
            Weight::Angle(4) => Some(Z235::sqrt_times(-2, 2)),
            Weight::Angle(5) => Some(Z235::from_int(-1) + Z235::sqrt_times(-1, 5)),
            Weight::Angle(6) => Some(Z235::sqrt_times(-2, 3)),
            _ => None,
        }
    }

    /// The Gram entry as a float (−cos π/k or −1).
    pub fn cos_entry(self) -> Option<f64> {
        match self {
            Weight::Parallel => Some(-1.0),
            Weight::Angle(k) => Some(-(std::f64::consts::PI / k as f64).cos()),
            Weight::Divergent => None,
        }
    }

    /// True for the entries that join two nodes in the diagram graph.
    pub fn is_edge(self) -> bool {
        self != Weight::Angle(2)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Parallel => write!(f, "0"),
            Weight::Angle(k) => write!(f, "{k}"),
            Weight::Divergent => write!(f, "inf"),
        }
    }
}

impl FromStr for Weight {
    type Err = DiagramError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "∞" | "Inf" | "INF" => Ok(Weight::Divergent),
            "0" => Ok(Weight::Parallel),
            t => match t.parse::<u32>() {
                Ok(k) if k >= 2 => Ok(Weight::Angle(k)),
                _ => Err(DiagramError::BadEntry(t.to_string())),
            },
        }
    }
}

/// Index of pair `(i, j)`, `i < j`, in lexicographic pair order for `m` nodes.
pub const fn pair_index(i: usize, j: usize, m: usize) -> usize {
    i * (2 * m - i - 1) / 2 + (j - i - 1)
}

pub const fn num_pairs(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

/// Pairs in lexicographic order.
pub fn pairs(m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(num_pairs(m));
    for i in 0..m {
        for j in i + 1..m {
            out.push((i, j));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CoxeterVector {
    m: usize,
    entries: Vec<Weight>,
}

impl CoxeterVector {
    pub fn new(m: usize, entries: Vec<Weight>) -> Result<Self, DiagramError> {
        if entries.len() != num_pairs(m) {
            return Err(DiagramError::Length {
                m,
                expected: num_pairs(m),
                got: entries.len(),
            });
        }
        Ok(Self { m, entries })
    }

    /// All-right-angle vector on `m` nodes.
    pub fn right_angled(m: usize) -> Self {
        Self {
            m,
            entries: vec![Weight::Angle(2); num_pairs(m)],
        }
    }

    pub fn nodes(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &[Weight] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Weight {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.entries[pair_index(i, j, self.m)],
            std::cmp::Ordering::Greater => self.entries[pair_index(j, i, self.m)],
            std::cmp::Ordering::Equal => panic!("diagonal has no weight"),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, w: Weight) {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.entries[pair_index(a, b, self.m)] = w;
    }

    /// Sub-vector on `nodes`, keeping their order.
    pub fn restrict(&self, nodes: &[usize]) -> CoxeterVector {
        let k = nodes.len();
        let mut entries = Vec::with_capacity(num_pairs(k));
        for a in 0..k {
            for b in a + 1..k {
                entries.push(self.get(nodes[a], nodes[b]));
            }
        }
        CoxeterVector { m: k, entries }
    }

    /// Relabels nodes: node `i` of `self` becomes node `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> CoxeterVector {
        let mut out = self.clone();
        for (i, j) in pairs(self.m) {
            out.set(perm[i], perm[j], self.get(i, j));
        }
        out
    }

    pub fn has_divergent(&self) -> bool {
        self.entries.contains(&Weight::Divergent)
    }

    /// Connectivity of the graph whose edges are all entries other than 2.
    pub fn is_connected(&self) -> bool {
        if self.m <= 1 {
            return true;
        }
        let mut seen = 1u32;
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            for j in 0..self.m {
                if j != i && seen & (1 << j) == 0 && self.get(i, j).is_edge() {
                    seen |= 1 << j;
                    stack.push(j);
                }
            }
        }
        seen.count_ones() as usize == self.m
    }

    /// Packs the entries into 3-bit codes, first entry in the highest bits.
    /// Angles above 7 collapse onto 7.
    pub fn pack(&self) -> u64 {
        self.entries
            .iter()
            .fold(0u64, |acc, w| (acc << 3) | w.code() as u64)
    }

    pub fn unpack(m: usize, code: u64) -> CoxeterVector {
        let e = num_pairs(m);
        let entries = (0..e)
            .map(|i| Weight::from_code(((code >> (3 * (e - 1 - i))) & 7) as u8))
            .collect();
        CoxeterVector { m, entries }
    }

    /// Four times the cosine matrix; `None` if some entry is outside the ring.
    pub fn scaled_cos_matrix(&self) -> Result<Vec<Vec<Z235>>, DiagramError> {
        let mut g = vec![vec![Z235::ZERO; self.m]; self.m];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = Z235::from_int(4);
        }
        for (i, j) in pairs(self.m) {
            let w = self.get(i, j);
            let v = w
                .scaled_cos()
                .ok_or_else(|| DiagramError::BadEntry(format!("{w} at {i}{j}")))?;
            g[i][j] = v;
            g[j][i] = v;
        }
        Ok(g)
    }

    /// Parses comma-separated tokens; the node count is inferred.
    pub fn parse(s: &str) -> Result<CoxeterVector, DiagramError> {
        let toks: Vec<&str> = s
            .trim()
            .trim_start_matches('{')
            .trim_end_matches('}')
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .collect();
        let n = toks.len();
        let m = (0..=16)
            .find(|&m| num_pairs(m) == n)
            .ok_or(DiagramError::Length {
                m: 0,
                expected: 0,
                got: n,
            })?;
        let entries = toks
            .iter()
            .map(|t| t.parse())
            .collect::<Result<Vec<Weight>, _>>()?;
        CoxeterVector::new(m, entries)
    }
}

impl fmt::Display for CoxeterVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

/// Exact cosine matrix entries (unscaled), for display and tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosMatrix {
    /// Four times the matrix.
    pub scaled: Vec<Vec<Z235>>,
}

impl CosMatrix {
    pub fn entry_f64(&self, i: usize, j: usize) -> f64 {
        self.scaled[i][j].to_f64() / 4.0
    }
}

pub fn to_cos_matrix(v: &CoxeterVector) -> Result<CosMatrix, DiagramError> {
    if let Some(pos) = v.entries.iter().position(|&w| w == Weight::Divergent) {
        let (i, j) = pairs(v.m)[pos];
        return Err(DiagramError::Divergent(format!("{i}{j}")));
    }
    Ok(CosMatrix {
        scaled: v.scaled_cos_matrix()?,
    })
}
