use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{pairs, CoxeterVector, DiagramError, Weight};
use crate::field::{leading_minors, Z235};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiagramClass {
    Elliptic,
    Parabolic,
    Lanner,
    QuasiLanner,
    Indefinite,
}

/// Type of a connected diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComponentKind {
    /// Positive definite cosine matrix.
    Elliptic,
    /// Positive semidefinite with one-dimensional kernel, proper parts elliptic.
    Parabolic,
    Other,
}

/// Full weight matrix with subset queries. Node subsets are bitmasks.
#[derive(Debug, Clone)]
pub struct Diagram {
    n: usize,
    w: Vec<Weight>,
}

impl Diagram {
    pub fn new(n: usize, weight: impl Fn(usize, usize) -> Weight) -> Self {
        let mut w = vec![Weight::Angle(2); n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    w[i * n + j] = weight(i, j);
                }
            }
        }
        Self { n, w }
    }

    pub fn from_vector(v: &CoxeterVector) -> Self {
        Self::new(v.nodes(), |i, j| v.get(i, j))
    }

    pub fn nodes(&self) -> usize {
        self.n
    }

    pub fn full(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    pub fn weight(&self, i: usize, j: usize) -> Weight {
        self.w[i * self.n + j]
    }

    fn members(mask: u32) -> impl Iterator<Item = usize> {
        (0..32).filter(move |i| mask & (1 << i) != 0)
    }

    /// Connected components of the subdiagram on `mask`.
    pub fn components(&self, mask: u32) -> Vec<u32> {
        let mut left = mask;
        let mut out = Vec::new();
        while left != 0 {
            let start = left.trailing_zeros() as usize;
            let mut comp = 1u32 << start;
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for j in Self::members(left & !comp) {
                    if self.weight(i, j).is_edge() {
                        comp |= 1 << j;
                        stack.push(j);
                    }
                }
            }
            left &= !comp;
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self, mask: u32) -> bool {
        mask != 0 && self.components(mask).len() == 1
    }

    /// Kind of a connected subdiagram.
    pub fn kind(&self, comp: u32) -> ComponentKind {
        let nodes: Vec<usize> = Self::members(comp).collect();
        let k = nodes.len();
        if k == 1 {
            return ComponentKind::Elliptic;
        }
        let mut large = false;
        let mut parallel = false;
        for (a, b) in pairs(k) {
            match self.weight(nodes[a], nodes[b]) {
                Weight::Divergent => return ComponentKind::Other,
                Weight::Parallel => parallel = true,
                Weight::Angle(m) if m >= 7 => large = true,
                _ => {}
            }
        }
        if parallel {
            return if k == 2 {
                ComponentKind::Parabolic
            } else {
                ComponentKind::Other
            };
        }
        if large {
            // I2(m) is the only connected finite or affine diagram with m >= 7.
            return if k == 2 {
                ComponentKind::Elliptic
            } else {
                ComponentKind::Other
            };
        }
        let g: Vec<Vec<Z235>> = nodes
            .iter()
            .map(|&i| {
                nodes
                    .iter()
                    .map(|&j| {
                        if i == j {
                            Z235::from_int(4)
                        } else {
                            self.weight(i, j).scaled_cos().expect("ring entry")
                        }
                    })
                    .collect()
            })
            .collect();
        let minors = leading_minors(&g);
        let (last, proper) = minors.split_last().unwrap();
        if proper.iter().any(|x| x.signum() != Ordering::Greater) {
            return ComponentKind::Other;
        }
        match last.signum() {
            Ordering::Greater => ComponentKind::Elliptic,
            Ordering::Equal => ComponentKind::Parabolic,
            Ordering::Less => ComponentKind::Other,
        }
    }

    pub fn is_elliptic(&self, mask: u32) -> bool {
        self.components(mask)
            .into_iter()
            .all(|c| self.kind(c) == ComponentKind::Elliptic)
    }

    /// Every component parabolic (the empty diagram does not count).
    pub fn is_parabolic(&self, mask: u32) -> bool {
        mask != 0
            && self
                .components(mask)
                .into_iter()
                .all(|c| self.kind(c) == ComponentKind::Parabolic)
    }

    /// Positive semidefinite, i.e. every component elliptic or parabolic.
    pub fn is_psd(&self, mask: u32) -> bool {
        self.components(mask)
            .into_iter()
            .all(|c| self.kind(c) != ComponentKind::Other)
    }

    pub fn is_connected_parabolic(&self, mask: u32) -> bool {
        self.is_connected(mask) && self.kind(mask) == ComponentKind::Parabolic
    }

    /// Rank of a parabolic subdiagram: nodes minus components.
    pub fn parabolic_rank(&self, mask: u32) -> usize {
        mask.count_ones() as usize - self.components(mask).len()
    }

    pub fn classify_subset(&self, mask: u32) -> DiagramClass {
        let comps = self.components(mask);
        let kinds: Vec<ComponentKind> = comps.iter().map(|&c| self.kind(c)).collect();
        if kinds.iter().all(|&k| k == ComponentKind::Elliptic) {
            return DiagramClass::Elliptic;
        }
        if kinds.iter().all(|&k| k == ComponentKind::Parabolic) {
            return DiagramClass::Parabolic;
        }
        if comps.len() != 1 {
            return DiagramClass::Indefinite;
        }
        // Both conditions are hereditary, so maximal proper subdiagrams suffice.
        let mut all_elliptic = true;
        for i in Self::members(mask) {
            let sub = mask & !(1 << i);
            if self.is_elliptic(sub) {
                continue;
            }
            all_elliptic = false;
            if !self.is_connected_parabolic(sub) {
                return DiagramClass::Indefinite;
            }
        }
        if all_elliptic {
            DiagramClass::Lanner
        } else {
            DiagramClass::QuasiLanner
        }
    }
}

/// Kind of a connected vector; see [`Diagram::kind`].
pub fn component_kind(v: &CoxeterVector) -> ComponentKind {
    let d = Diagram::from_vector(v);
    if !d.is_connected(d.full()) {
        return ComponentKind::Other;
    }
    d.kind(d.full())
}

pub fn classify(v: &CoxeterVector) -> Result<DiagramClass, DiagramError> {
    if let Some(pos) = v.entries().iter().position(|&w| w == Weight::Divergent) {
        let (i, j) = pairs(v.nodes())[pos];
        return Err(DiagramError::Divergent(format!("{i}{j}")));
    }
    if v.nodes() == 0 {
        return Ok(DiagramClass::Elliptic);
    }
    let d = Diagram::from_vector(v);
    Ok(d.classify_subset(d.full()))
}
