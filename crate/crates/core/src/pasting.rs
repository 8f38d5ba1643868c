//! Block pasting.
//!
//! Every vertex contributes a block of candidate rows over the 21 pair
//! columns; blocks are joined on shared columns and rows violating an
//! incidence condition are dropped as soon as the condition's columns are all
//! determined. Rows are packed like [`CoxeterVector::pack`] with 7 nodes.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::{
    is_admissible, link_classes, mask_facets, CombinatorialPolytope, FacetMask, IncidenceData,
    LinkClass, NUM_FACETS,
};
use crate::diagrams::{pair_index, Canonicalizer, CoxeterVector, LibrarySet, VectorLibrary, Weight};

pub const COLUMNS: usize = 21;
pub const DEFAULT_ROW_LIMIT: usize = 50_000_000;

const DIVERGENT: u64 = 7;
const RIGHT: u64 = 1;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PastingError {
    #[error("polytope {0} is not admissible")]
    NotAdmissible(String),
    #[error("chunk at bracket {vertex} contains the disjoint pair {pair}")]
    DisjointInChunk { vertex: usize, pair: String },
    #[error("row limit {limit} exceeded at step {step}: {rows} rows")]
    RowLimit { step: usize, rows: usize, limit: usize },
    #[error("paste order is not a permutation of the {0} blocks")]
    BadOrder(usize),
}

fn shift(col: usize) -> u32 {
    3 * (COLUMNS - 1 - col) as u32
}

fn column(a: u8, b: u8) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    pair_index(a as usize, b as usize, NUM_FACETS)
}

/// Columns of all pairs inside a facet set, as a 21-bit mask.
pub fn columns_of(set: FacetMask) -> u32 {
    let fs = mask_facets(set);
    let mut m = 0;
    for (i, &a) in fs.iter().enumerate() {
        for &b in &fs[i + 1..] {
            m |= 1 << column(a, b);
        }
    }
    m
}

fn value_mask(cols: u32) -> u64 {
    (0..COLUMNS)
        .filter(|c| cols & (1 << c) != 0)
        .fold(0, |m, c| m | (7u64 << shift(c)))
}

/// The facets of one vertex, in the form the block builder consumes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chunk {
    pub vertex: usize,
    /// Facets, ascending.
    pub facets: Vec<u8>,
    pub link: LinkClass,
    /// Pair labels `10a + b`, ascending.
    pub label_set: Vec<u8>,
    /// Column indices of the pairs, ascending.
    pub index_set: Vec<usize>,
}

pub fn chunks(p: &CombinatorialPolytope) -> Vec<Chunk> {
    link_classes(p)
        .into_iter()
        .enumerate()
        .map(|(v, link)| {
            let mut facets = p.brackets[v].facets().to_vec();
            facets.sort_unstable();
            let mut label_set = Vec::new();
            let mut index_set = Vec::new();
            for (i, &a) in facets.iter().enumerate() {
                for &b in &facets[i + 1..] {
                    label_set.push(10 * a + b);
                    index_set.push(column(a, b));
                }
            }
            Chunk {
                vertex: v,
                facets,
                link,
                label_set,
                index_set,
            }
        })
        .collect()
}

/// Candidate rows for some set of determined (`active`) columns.
///
/// Inactive columns hold code 0 except divergent columns, which hold ∞.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub active: u32,
    pub rows: Vec<u64>,
}

impl Block {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row_vector(&self, i: usize) -> CoxeterVector {
        CoxeterVector::unpack(NUM_FACETS, self.rows[i])
    }
}

fn divergent_fill(d: &[FacetMask]) -> u64 {
    d.iter()
        .map(|&pair| {
            let f = mask_facets(pair);
            DIVERGENT << shift(column(f[0], f[1]))
        })
        .fold(0, |a, b| a | b)
}

/// Instantiates the preblock library of the chunk's link type on its facets.
pub fn build_block(
    chunk: &Chunk,
    d: &[FacetMask],
    libs: &LibrarySet,
) -> Result<Block, PastingError> {
    let set = chunk.facets.iter().fold(0u8, |m, &f| m | (1 << f));
    if let Some(&pair) = d.iter().find(|&&pair| set & pair == pair) {
        let f = mask_facets(pair);
        return Err(PastingError::DisjointInChunk {
            vertex: chunk.vertex,
            pair: format!("{}{}", f[0], f[1]),
        });
    }
    // Library node i sits on facet nodes[i].
    let (lib, nodes): (&VectorLibrary, Vec<u8>) = match chunk.link {
        LinkClass::Simplex | LinkClass::Other => (&libs.pb4, chunk.facets.clone()),
        LinkClass::Prism { parallel: (p, q) } => {
            let mut nodes = vec![p, q];
            nodes.extend(chunk.facets.iter().filter(|&&f| f != p && f != q));
            (&libs.pb5, nodes)
        }
        LinkClass::Cube { parallel } => (
            &libs.pb6,
            parallel.iter().flat_map(|&(a, b)| [a, b]).collect(),
        ),
    };
    let n = nodes.len();
    let mut targets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            targets.push(shift(column(nodes[i], nodes[j])));
        }
    }
    let fill = divergent_fill(d);
    let e = targets.len();
    let rows = lib
        .codes()
        .iter()
        .map(|&code| {
            let mut row = fill;
            for (p, &sh) in targets.iter().enumerate() {
                let digit = (code >> (3 * (e - 1 - p))) & 7;
                row |= digit << sh;
            }
            row
        })
        .collect();
    Ok(Block {
        active: columns_of(set),
        rows,
    })
}

/// Hash join on the shared active columns.
pub fn paste(acc: &Block, b: &Block) -> Block {
    let (active, rows, _) = join_filtered(acc, b, &|_| true);
    Block { active, rows }
}

fn join_filtered(
    acc: &Block,
    b: &Block,
    keep: &(dyn Fn(u64) -> bool + Sync),
) -> (u32, Vec<u64>, usize) {
    let key_mask = value_mask(acc.active & b.active);
    let new_mask = value_mask(b.active & !acc.active);
    let mut by_key: HashMap<u64, Vec<u64>> = HashMap::new();
    for &r in &b.rows {
        by_key.entry(r & key_mask).or_default().push(r & new_mask);
    }
    let parts: Vec<(Vec<u64>, usize)> = acc
        .rows
        .par_chunks(1 << 14)
        .map(|chunk| {
            let mut out = Vec::new();
            let mut joined = 0;
            for &r in chunk {
                if let Some(ext) = by_key.get(&(r & key_mask)) {
                    joined += ext.len();
                    for &x in ext {
                        let merged = r | x;
                        if keep(merged) {
                            out.push(merged);
                        }
                    }
                }
            }
            (out, joined)
        })
        .collect();
    let joined = parts.iter().map(|p| p.1).sum();
    let rows = parts.into_iter().flat_map(|p| p.0).collect();
    (acc.active | b.active, rows, joined)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckKind {
    /// Connected sub-vector must lie in `L_k`.
    Lanner,
    /// Sub-vector must not lie in `S_k`.
    Spherical,
    /// Sub-vector must not lie in `E_k`.
    Euclidean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleCheck {
    pub kind: CheckKind,
    pub tuple: FacetMask,
}

/// A check compiled against the library set.
struct Compiled {
    kind: CheckKind,
    shifts: Vec<u32>,
    lookup: Lookup,
}

enum Lookup {
    Table(Vec<bool>),
    Sorted(Vec<u64>),
}

impl Lookup {
    fn new(lib: &VectorLibrary) -> Self {
        let n = lib.id().n;
        let bits = 3 * n * (n - 1) / 2;
        if bits <= 18 {
            let mut t = vec![false; 1 << bits];
            for &c in lib.codes() {
                t[c as usize] = true;
            }
            Lookup::Table(t)
        } else {
            Lookup::Sorted(lib.codes().to_vec())
        }
    }

    fn contains(&self, code: u64) -> bool {
        match self {
            Lookup::Table(t) => t[code as usize],
            Lookup::Sorted(v) => v.binary_search(&code).is_ok(),
        }
    }
}

impl Compiled {
    fn new(check: TupleCheck, libs: &LibrarySet) -> Self {
        let fs = mask_facets(check.tuple);
        let k = fs.len();
        let mut shifts = Vec::new();
        for (i, &a) in fs.iter().enumerate() {
            for &b in &fs[i + 1..] {
                shifts.push(shift(column(a, b)));
            }
        }
        let lib = match check.kind {
            CheckKind::Lanner => libs.lanner(k),
            CheckKind::Spherical => libs.spherical(k),
            CheckKind::Euclidean => libs.euclidean(k),
        };
        Self {
            kind: check.kind,
            shifts,
            lookup: Lookup::new(lib),
        }
    }

    fn passes(&self, row: u64) -> bool {
        let mut code = 0u64;
        let mut edges = 0u32;
        for (p, &sh) in self.shifts.iter().enumerate() {
            let d = (row >> sh) & 7;
            code = (code << 3) | d;
            if d != RIGHT {
                edges |= 1 << p;
            }
        }
        match self.kind {
            CheckKind::Lanner => !small_connected(self.shifts.len(), edges) || self.lookup.contains(code),
            CheckKind::Spherical | CheckKind::Euclidean => !self.lookup.contains(code),
        }
    }
}

/// Connectivity of a 3- or 4-node graph given by its edge bits in pair order.
fn small_connected(pairs: usize, edges: u32) -> bool {
    let n = match pairs {
        3 => 3,
        6 => 4,
        _ => unreachable!("saving checks use triples and quadruples"),
    };
    let mut idx = 0;
    let mut adj = [0u32; 4];
    for i in 0..n {
        for j in i + 1..n {
            if edges & (1 << idx) != 0 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
            idx += 1;
        }
    }
    let mut seen = 1u32;
    let mut frontier = 1u32;
    while frontier != 0 {
        let i = frontier.trailing_zeros() as usize;
        frontier &= !(1 << i);
        let fresh = adj[i] & !seen;
        seen |= fresh;
        frontier |= fresh;
    }
    seen == (1 << n) - 1
}

/// Removes rows that violate any check of the layer.
pub fn prune(b: Block, layer: &[TupleCheck], libs: &LibrarySet) -> Block {
    let compiled: Vec<Compiled> = layer.iter().map(|&c| Compiled::new(c, libs)).collect();
    let rows = b
        .rows
        .into_par_iter()
        .filter(|&r| compiled.iter().all(|c| c.passes(r)))
        .collect();
    Block {
        active: b.active,
        rows,
    }
}

/// All incidence checks, tagged with the tuple's kind.
pub fn incidence_checks(inc: &IncidenceData) -> Vec<TupleCheck> {
    let mut out = Vec::new();
    let mut add = |kind, set: &[FacetMask]| {
        out.extend(set.iter().map(|&tuple| TupleCheck { kind, tuple }));
    };
    add(CheckKind::Lanner, &inc.l3);
    add(CheckKind::Lanner, &inc.l4);
    add(CheckKind::Spherical, &inc.s3);
    add(CheckKind::Spherical, &inc.s4);
    add(CheckKind::Spherical, &inc.s5);
    add(CheckKind::Spherical, &inc.s6);
    add(CheckKind::Euclidean, &inc.e3);
    add(CheckKind::Euclidean, &inc.e4);
    add(CheckKind::Euclidean, &inc.e5);
    add(CheckKind::Euclidean, &inc.e6);
    out
}

/// Assigns each check to the first paste step after which all its columns are active.
pub fn prune_layers(blocks_active: &[u32], checks: &[TupleCheck]) -> Vec<Vec<TupleCheck>> {
    let mut layers = vec![Vec::new(); blocks_active.len()];
    let mut seen = 0u32;
    let mut pending: Vec<TupleCheck> = checks.to_vec();
    for (step, &a) in blocks_active.iter().enumerate() {
        seen |= a;
        pending.retain(|c| {
            let cols = columns_of(c.tuple);
            if cols & seen == cols {
                layers[step].push(*c);
                false
            } else {
                true
            }
        });
    }
    layers
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PasteConfig {
    pub row_limit: usize,
    /// Block order as bracket indices; bracket order when absent.
    pub order: Option<Vec<usize>>,
}

impl Default for PasteConfig {
    fn default() -> Self {
        Self {
            row_limit: DEFAULT_ROW_LIMIT,
            order: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepStats {
    pub vertex: usize,
    pub joined: usize,
    pub kept: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelcperSet {
    pub polytope: String,
    /// Canonical vectors, ascending by packed code.
    pub vectors: Vec<CoxeterVector>,
    pub steps: Vec<StepStats>,
    /// Rows after the last paste, before connectivity and dedup.
    pub raw_rows: usize,
    pub connected_rows: usize,
}

impl SelcperSet {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

fn row_connected(row: u64) -> bool {
    let v = CoxeterVector::unpack(NUM_FACETS, row);
    v.is_connected()
}

pub fn enumerate_selcper(
    p: &CombinatorialPolytope,
    inc: &IncidenceData,
    libs: &LibrarySet,
    cfg: &PasteConfig,
) -> Result<SelcperSet, PastingError> {
    if !is_admissible(p) {
        return Err(PastingError::NotAdmissible(p.name()));
    }
    let all = chunks(p);
    let order: Vec<usize> = match &cfg.order {
        None => (0..all.len()).collect(),
        Some(o) => {
            let mut sorted = o.clone();
            sorted.sort_unstable();
            if sorted != (0..all.len()).collect::<Vec<_>>() {
                return Err(PastingError::BadOrder(all.len()));
            }
            o.clone()
        }
    };
    let blocks = order
        .iter()
        .map(|&i| build_block(&all[i], &inc.d, libs))
        .collect::<Result<Vec<_>, _>>()?;
    let actives: Vec<u32> = blocks.iter().map(|b| b.active).collect();
    let layers = prune_layers(&actives, &incidence_checks(inc));

    let mut steps = Vec::with_capacity(blocks.len());
    let first = prune(blocks[0].clone(), &layers[0], libs);
    steps.push(StepStats {
        vertex: order[0],
        joined: blocks[0].len(),
        kept: first.len(),
    });
    let mut acc = first;
    for (step, b) in blocks.iter().enumerate().skip(1) {
        let compiled: Vec<Compiled> = layers[step].iter().map(|&c| Compiled::new(c, libs)).collect();
        let keep = |r: u64| compiled.iter().all(|c| c.passes(r));
        let (active, rows, joined) = join_filtered(&acc, b, &keep);
        steps.push(StepStats {
            vertex: order[step],
            joined,
            kept: rows.len(),
        });
        if rows.len() > cfg.row_limit {
            return Err(PastingError::RowLimit {
                step,
                rows: rows.len(),
                limit: cfg.row_limit,
            });
        }
        acc = Block { active, rows };
    }

    let raw_rows = acc.len();
    let connected: Vec<u64> = acc.rows.into_par_iter().filter(|&r| row_connected(r)).collect();
    let connected_rows = connected.len();
    let canon = Canonicalizer::seven();
    let mut codes: Vec<u64> = connected.into_par_iter().map(|r| canon.canonical(r)).collect();
    codes.par_sort_unstable();
    codes.dedup();
    Ok(SelcperSet {
        polytope: p.name(),
        vectors: codes
            .into_iter()
            .map(|c| CoxeterVector::unpack(NUM_FACETS, c))
            .collect(),
        steps,
        raw_rows,
        connected_rows,
    })
}

/// Formats a SELCper line: `<polytope>: <21 tokens>`.
pub fn format_selcper_line(polytope: &str, v: &CoxeterVector) -> String {
    format!("{polytope}: {v}")
}

/// Parses a SELCper line back into its polytope tag and vector.
pub fn parse_selcper_line(line: &str) -> Option<(String, CoxeterVector)> {
    let (tag, body) = line.split_once(':')?;
    let v = CoxeterVector::parse(body).ok()?;
    (v.nodes() == NUM_FACETS).then(|| (tag.trim().to_string(), v))
}

/// Weight at the column of facets `a`, `b` in a packed row.
pub fn row_weight(row: u64, a: u8, b: u8) -> Weight {
    Weight::from_code(((row >> shift(column(a, b))) & 7) as u8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{derive_incidence, polytope_by_label};
    use std::sync::OnceLock;

    fn libs() -> &'static LibrarySet {
        static L: OnceLock<LibrarySet> = OnceLock::new();
        L.get_or_init(|| LibrarySet::generate(7).unwrap())
    }

    #[test]
    fn prism_block_of_p8() {
        let p = polytope_by_label(8).unwrap();
        let inc = derive_incidence(&p).unwrap();
        let ch = chunks(&p);
        assert_eq!(ch[0].facets, [2, 3, 4, 5, 6]);
        assert_eq!(ch[0].label_set, [23, 24, 25, 26, 34, 35, 36, 45, 46, 56]);
        let b = build_block(&ch[0], &inc.d, libs()).unwrap();
        assert_eq!(b.len(), 10);
        let want = [2, 2, 2, 0, 6, 3, 2, 2, 2, 2];
        let hit = b.rows.iter().any(|&r| {
            let got: Vec<u32> = ch[0]
                .label_set
                .iter()
                .map(|&l| match row_weight(r, l / 10, l % 10) {
                    Weight::Angle(k) => k,
                    _ => 0,
                })
                .collect();
            got == want && row_weight(r, 0, 5) == Weight::Divergent
        });
        assert!(hit);
    }

    #[test]
    fn block_sizes_by_link() {
        let p1 = polytope_by_label(1).unwrap();
        let inc = derive_incidence(&p1).unwrap();
        let ch = chunks(&p1);
        assert_eq!(build_block(&ch[0], &inc.d, libs()).unwrap().len(), 1);
        assert_eq!(build_block(&ch[1], &inc.d, libs()).unwrap().len(), 269);
    }

    #[test]
    fn worked_join_example() {
        // Key columns 01..04 shared; x1 and x2 each meet one of y1, y2; y3 meets none.
        let key = (1 << 0) | (1 << 1) | (1 << 2) | (1 << 3);
        let key_row = |vals: [u64; 4]| {
            vals.iter()
                .enumerate()
                .fold(0u64, |r, (c, &v)| r | (v << shift(c)))
        };
        let acc = Block {
            active: key | (1 << 4),
            rows: vec![
                key_row([1, 2, 1, 1]) | (3 << shift(4)),
                key_row([1, 1, 1, 1]) | (4 << shift(4)),
            ],
        };
        let b = Block {
            active: key | (1 << 5),
            rows: vec![
                key_row([1, 2, 1, 1]) | (2 << shift(5)),
                key_row([1, 1, 1, 1]) | (5 << shift(5)),
                key_row([2, 2, 2, 2]) | (1 << shift(5)),
            ],
        };
        let out = paste(&acc, &b);
        assert_eq!(out.len(), 2);
        assert_eq!(out.active, key | (1 << 4) | (1 << 5));
    }

    #[test]
    fn disjoint_and_duplicate_pastes() {
        let a = Block {
            active: 1,
            rows: vec![1 << shift(0), 2 << shift(0)],
        };
        let b = Block {
            active: 2,
            rows: vec![1 << shift(1), 3 << shift(1), 4 << shift(1)],
        };
        assert_eq!(paste(&a, &b).len(), 6);
        assert_eq!(paste(&a, &a), a);
    }

    #[test]
    fn prune_examples() {
        let l = libs();
        // Tuple {0,1,2}: columns 01, 02, 12.
        let row = |w01: u64, w02: u64, w12: u64| {
            (w01 << shift(0)) | (w02 << shift(1)) | (w12 << shift(6))
        };
        let euclid = TupleCheck {
            kind: CheckKind::Euclidean,
            tuple: 0b111,
        };
        let a2 = row(2, 2, 2); // codes of weight 3
        assert!(prune(Block { active: 0, rows: vec![a2] }, &[euclid], l).is_empty());
        let sph = TupleCheck {
            kind: CheckKind::Spherical,
            tuple: 0b111,
        };
        // (2,3,3) is A3.
        let a3 = row(1, 2, 2);
        assert!(prune(Block { active: 0, rows: vec![a3] }, &[sph], l).is_empty());
        // Disconnected quadruple survives the saving test.
        let lan = TupleCheck {
            kind: CheckKind::Lanner,
            tuple: 0b1111,
        };
        let disc = (2 << shift(0)) | (1 << shift(1)) | (1 << shift(2)) | (1 << shift(6)) | (1 << shift(7)) | (1 << shift(11));
        assert_eq!(prune(Block { active: 0, rows: vec![disc] }, &[lan], l).len(), 1);
    }

    #[test]
    fn small_polytopes_match_reference_counts() {
        for (label, want) in [(2, 2), (11, 13), (1, 13)] {
            let p = polytope_by_label(label).unwrap();
            let inc = derive_incidence(&p).unwrap();
            let s = enumerate_selcper(&p, &inc, libs(), &PasteConfig::default()).unwrap();
            assert_eq!(s.len(), want, "P{label}");
        }
    }

    #[test]
    fn selcper_line_round_trip() {
        let v = CoxeterVector::parse("2,2,2,7,2,inf,7,2,2,2,inf,3,2,2,2,2,5,2,3,2,2").unwrap();
        let line = format_selcper_line("P15", &v);
        assert_eq!(parse_selcper_line(&line), Some(("P15".to_string(), v)));
    }
}
