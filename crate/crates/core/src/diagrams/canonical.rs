use std::sync::OnceLock;

use super::{num_pairs, pair_index, CoxeterVector};

/// Orbit minimization over all node relabelings of packed vectors.
#[derive(Debug, Clone)]
pub struct Canonicalizer {
    m: usize,
    /// For each relabeling, the old position feeding each new position.
    sources: Vec<Vec<u8>>,
}

impl Canonicalizer {
    pub fn new(m: usize) -> Self {
        assert!((1..=8).contains(&m), "canonical forms support up to 8 nodes");
        let mut sources = Vec::new();
        let mut sigma: Vec<usize> = (0..m).collect();
        for_each_permutation(&mut sigma, 0, &mut |s| {
            let mut src = Vec::with_capacity(num_pairs(m));
            for a in 0..m {
                for b in a + 1..m {
                    let (x, y) = if s[a] < s[b] { (s[a], s[b]) } else { (s[b], s[a]) };
                    src.push(pair_index(x, y, m) as u8);
                }
            }
            sources.push(src);
        });
        Self { m, sources }
    }

    /// Shared instance for seven nodes.
    pub fn seven() -> &'static Canonicalizer {
        static C7: OnceLock<Canonicalizer> = OnceLock::new();
        C7.get_or_init(|| Canonicalizer::new(7))
    }

    pub fn nodes(&self) -> usize {
        self.m
    }

    /// Lexicographically minimal packed code in the orbit of `code`.
    pub fn canonical(&self, code: u64) -> u64 {
        let e = num_pairs(self.m);
        let mut digits = [0u8; 28];
        for (p, d) in digits.iter_mut().enumerate().take(e) {
            *d = ((code >> (3 * (e - 1 - p))) & 7) as u8;
        }
        let mut best = digits;
        for src in &self.sources {
            let mut less = false;
            let mut cand = [0u8; 28];
            let mut abandoned = false;
            for q in 0..e {
                let d = digits[src[q] as usize];
                cand[q] = d;
                if !less {
                    if d > best[q] {
                        abandoned = true;
                        break;
                    }
                    if d < best[q] {
                        less = true;
                    }
                }
            }
            if !abandoned && less {
                best = cand;
            }
        }
        best[..e].iter().fold(0u64, |acc, &d| (acc << 3) | d as u64)
    }

    /// Number of relabelings fixing `code`.
    pub fn stabilizer_size(&self, code: u64) -> usize {
        let e = num_pairs(self.m);
        let digit = |p: usize| (code >> (3 * (e - 1 - p))) & 7;
        self.sources
            .iter()
            .filter(|src| (0..e).all(|q| digit(src[q] as usize) == digit(q)))
            .count()
    }
}

pub(crate) fn for_each_permutation(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        for_each_permutation(p, k + 1, f);
        p.swap(k, i);
    }
}

pub fn canonical_packed(code: u64) -> u64 {
    Canonicalizer::seven().canonical(code)
}

/// Lexicographically minimal relabeling of `v`.
pub fn canonical_form(v: &CoxeterVector) -> CoxeterVector {
    let m = v.nodes();
    if m <= 1 {
        return v.clone();
    }
    let mut best = v.clone();
    let mut sigma: Vec<usize> = (0..m).collect();
    for_each_permutation(&mut sigma, 0, &mut |s| {
        let cand = v.permuted(s);
        if cand.entries() < best.entries() {
            best = cand;
        }
    });
    best
}
