use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classify::DiagramClass;
use super::{num_pairs, CoxeterVector, Diagram, DiagramError, Weight};

/// Which diagrams a library holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LibraryClass {
    /// `S_n`: elliptic diagrams.
    Elliptic,
    /// `E_n`: every component parabolic.
    Parabolic,
    /// Connected parabolic diagrams.
    ConnectedParabolic,
    /// `L_n`: Lannér and quasi-Lannér diagrams.
    LannerLike,
    /// `PB4`: elliptic or connected parabolic on four nodes.
    SimplexPreblock,
    /// `PB5`: nodes 0 and 1 parallel, right angles to a connected parabolic triangle on 2, 3, 4.
    PrismPreblock,
    /// `PB6`: three parallel pairs 01, 23, 45 and right angles elsewhere.
    CubePreblock,
}

impl LibraryClass {
    fn tag(self) -> u8 {
        match self {
            LibraryClass::Elliptic => 0,
            LibraryClass::Parabolic => 1,
            LibraryClass::ConnectedParabolic => 2,
            LibraryClass::LannerLike => 3,
            LibraryClass::SimplexPreblock => 4,
            LibraryClass::PrismPreblock => 5,
            LibraryClass::CubePreblock => 6,
        }
    }

    fn from_tag(t: u8) -> Option<Self> {
        Some(match t {
            0 => LibraryClass::Elliptic,
            1 => LibraryClass::Parabolic,
            2 => LibraryClass::ConnectedParabolic,
            3 => LibraryClass::LannerLike,
            4 => LibraryClass::SimplexPreblock,
            5 => LibraryClass::PrismPreblock,
            6 => LibraryClass::CubePreblock,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LibraryId {
    pub n: usize,
    pub weight_cap: u32,
    pub class: LibraryClass,
}

impl LibraryId {
    pub fn new(n: usize, weight_cap: u32, class: LibraryClass) -> Self {
        Self {
            n,
            weight_cap,
            class,
        }
    }

    pub fn name(&self) -> String {
        let prefix = match self.class {
            LibraryClass::Elliptic => "S",
            LibraryClass::Parabolic => "E",
            LibraryClass::ConnectedParabolic => "C",
            LibraryClass::LannerLike => "L",
            LibraryClass::SimplexPreblock
            | LibraryClass::PrismPreblock
            | LibraryClass::CubePreblock => "PB",
        };
        format!("{prefix}{}", self.n)
    }
}

impl fmt::Display for LibraryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (cap {})", self.name(), self.weight_cap)
    }
}

/// A set of labeled vectors on `n` nodes, stored as sorted packed codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorLibrary {
    id: LibraryId,
    codes: Vec<u64>,
}

const MAGIC: &[u8; 4] = b"CXLB";
const FORMAT_VERSION: u8 = 1;

impl VectorLibrary {
    pub fn from_codes(id: LibraryId, mut codes: Vec<u64>) -> Self {
        codes.sort_unstable();
        codes.dedup();
        Self { id, codes }
    }

    pub fn id(&self) -> LibraryId {
        self.id
    }

    pub fn name(&self) -> String {
        self.id.name()
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    pub fn contains_code(&self, code: u64) -> bool {
        self.codes.binary_search(&code).is_ok()
    }

    pub fn contains(&self, v: &CoxeterVector) -> bool {
        v.nodes() == self.id.n && self.contains_code(v.pack())
    }

    pub fn vectors(&self) -> impl Iterator<Item = CoxeterVector> + '_ {
        self.codes
            .iter()
            .map(move |&c| CoxeterVector::unpack(self.id.n, c))
    }

    /// Compact binary form: magic, version, n, cap, class, count, codes (little endian).
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(12 + 8 * self.codes.len());
        out.extend_from_slice(MAGIC);
        out.push(FORMAT_VERSION);
        out.push(self.id.n as u8);
        out.push(self.id.weight_cap as u8);
        out.push(self.id.class.tag());
        out.extend_from_slice(&(self.codes.len() as u32).to_le_bytes());
        for c in &self.codes {
            out.extend_from_slice(&c.to_le_bytes());
        }
        out
    }

    /// Decodes a cache blob, checking it was produced for `expect`.
    pub fn from_bytes(bytes: &[u8], expect: LibraryId) -> Result<Self, DiagramError> {
        let bad = |m: &str| DiagramError::Cache(m.to_string());
        if bytes.len() < 12 || &bytes[..4] != MAGIC {
            return Err(bad("not a library file"));
        }
        if bytes[4] != FORMAT_VERSION {
            return Err(bad("format version mismatch"));
        }
        let class = LibraryClass::from_tag(bytes[7]).ok_or_else(|| bad("unknown class tag"))?;
        let id = LibraryId::new(bytes[5] as usize, bytes[6] as u32, class);
        if id != expect {
            return Err(bad(&format!("cache holds {id}, wanted {expect}")));
        }
        let count = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
        let body = &bytes[12..];
        if body.len() != 8 * count {
            return Err(bad("truncated"));
        }
        let codes = body
            .chunks_exact(8)
            .map(|ch| u64::from_le_bytes(ch.try_into().unwrap()))
            .collect();
        Ok(Self::from_codes(id, codes))
    }
}

/// Labeled weights being assigned during the search.
#[derive(Clone)]
struct Partial {
    n: usize,
    codes: [[u8; 8]; 8],
}

impl Partial {
    fn diagram(&self, nodes: usize) -> Diagram {
        Diagram::new(nodes, |i, j| Weight::from_code(self.codes[i][j]))
    }

    fn pack(&self) -> u64 {
        let mut acc = 0u64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                acc = (acc << 3) | self.codes[i][j] as u64;
            }
        }
        acc
    }

    fn set(&mut self, i: usize, j: usize, c: u8) {
        self.codes[i][j] = c;
        self.codes[j][i] = c;
    }
}

/// Enumerates labeled vectors on `n` nodes over `alphabet` whose every proper
/// prefix satisfies `hereditary` and whose full diagram satisfies `accept`.
fn search(
    n: usize,
    alphabet: &[u8],
    hereditary: &(dyn Fn(&Diagram, u32) -> bool + Sync),
    accept: &(dyn Fn(&Diagram) -> bool + Sync),
) -> Vec<u64> {
    // Admissible triangles for the hereditary property, indexed by three codes.
    let mut triple_ok = [false; 512];
    for a in alphabet {
        for b in alphabet {
            for c in alphabet {
                let v = CoxeterVector::new(
                    3,
                    vec![Weight::from_code(*a), Weight::from_code(*b), Weight::from_code(*c)],
                )
                .unwrap();
                let d = Diagram::from_vector(&v);
                triple_ok[((*a as usize) << 6) | ((*b as usize) << 3) | *c as usize] =
                    hereditary(&d, 7);
            }
        }
    }
    let ctx = Search {
        n,
        alphabet,
        triple_ok,
        hereditary,
        accept,
    };
    let start = Partial {
        n,
        codes: [[1; 8]; 8],
    };
    if n <= 2 {
        let mut out = Vec::new();
        ctx.extend(start, 1, 0, &mut out);
        return out;
    }
    // Seed states: nodes 0..3 fully assigned, then fan out in parallel.
    let mut seeds = Vec::new();
    ctx.collect_seeds(start, 1, 0, &mut seeds);
    let mut out: Vec<u64> = seeds
        .into_par_iter()
        .flat_map_iter(|p| {
            let mut local = Vec::new();
            ctx.extend(p, 3, 0, &mut local);
            local
        })
        .collect();
    out.sort_unstable();
    out
}

struct Search<'a> {
    n: usize,
    alphabet: &'a [u8],
    triple_ok: [bool; 512],
    hereditary: &'a (dyn Fn(&Diagram, u32) -> bool + Sync),
    accept: &'a (dyn Fn(&Diagram) -> bool + Sync),
}

impl Search<'_> {
    fn triples_fine(&self, p: &Partial, i: usize, j: usize) -> bool {
        // With three nodes the triangle is the whole diagram, not a prefix.
        if self.n == 3 {
            return true;
        }
        (0..i).all(|a| {
            let idx = ((p.codes[a][i] as usize) << 6)
                | ((p.codes[a][j] as usize) << 3)
                | p.codes[i][j] as usize;
            self.triple_ok[idx]
        })
    }

    /// Node `j` done: check the prefix on nodes `0..=j`.
    fn node_done(&self, p: &Partial, j: usize) -> bool {
        let k = j + 1;
        if k <= 3 || k == self.n {
            return true;
        }
        (self.hereditary)(&p.diagram(k), (1 << k) - 1)
    }

    fn collect_seeds(&self, mut p: Partial, j: usize, i: usize, out: &mut Vec<Partial>) {
        if j == 3 {
            out.push(p);
            return;
        }
        for &c in self.alphabet {
            p.set(i, j, c);
            if !self.triples_fine(&p, i, j) {
                continue;
            }
            if i + 1 < j {
                self.collect_seeds(p.clone(), j, i + 1, out);
            } else if self.node_done(&p, j) {
                self.collect_seeds(p.clone(), j + 1, 0, out);
            }
        }
    }

    fn extend(&self, mut p: Partial, j: usize, i: usize, out: &mut Vec<u64>) {
        if j == self.n {
            if (self.accept)(&p.diagram(self.n)) {
                out.push(p.pack());
            }
            return;
        }
        for &c in self.alphabet {
            p.set(i, j, c);
            if !self.triples_fine(&p, i, j) {
                continue;
            }
            if i + 1 < j {
                self.extend(p.clone(), j, i + 1, out);
            } else if self.node_done(&p, j) {
                self.extend(p.clone(), j + 1, 0, out);
            }
        }
    }
}

fn alphabet(weight_cap: u32, with_parallel: bool) -> Vec<u8> {
    let mut a = Vec::new();
    if with_parallel {
        a.push(Weight::Parallel.code());
    }
    a.extend((2..=weight_cap).map(|k| Weight::Angle(k).code()));
    a
}

/// Exhaustive labeled enumeration of one library.
pub fn generate_library(
    n: usize,
    weight_cap: u32,
    class: LibraryClass,
) -> Result<VectorLibrary, DiagramError> {
    if !(3..=7).contains(&weight_cap) {
        return Err(DiagramError::WeightCap(weight_cap));
    }
    if !(2..=6).contains(&n) {
        return Err(DiagramError::NodeCount(n));
    }
    let id = LibraryId::new(n, weight_cap, class);
    let psd = |d: &Diagram, m: u32| d.is_psd(m);
    let codes = match class {
        LibraryClass::Elliptic => search(
            n,
            &alphabet(weight_cap, false),
            &|d: &Diagram, m: u32| d.is_elliptic(m),
            &|d: &Diagram| d.is_elliptic(d.full()),
        ),
        LibraryClass::Parabolic => search(n, &alphabet(weight_cap, true), &psd, &|d: &Diagram| {
            d.is_parabolic(d.full())
        }),
        LibraryClass::ConnectedParabolic => {
            search(n, &alphabet(weight_cap, true), &psd, &|d: &Diagram| {
                d.is_connected_parabolic(d.full())
            })
        }
        LibraryClass::LannerLike => search(n, &alphabet(weight_cap, true), &psd, &|d: &Diagram| {
            matches!(
                d.classify_subset(d.full()),
                DiagramClass::Lanner | DiagramClass::QuasiLanner
            )
        }),
        LibraryClass::SimplexPreblock => {
            if n != 4 {
                return Err(DiagramError::NodeCount(n));
            }
            search(n, &alphabet(weight_cap, true), &psd, &|d: &Diagram| {
                d.is_elliptic(d.full()) || d.is_connected_parabolic(d.full())
            })
        }
        LibraryClass::PrismPreblock => {
            if n != 5 {
                return Err(DiagramError::NodeCount(n));
            }
            let triangles = generate_library(3, weight_cap, LibraryClass::ConnectedParabolic)?;
            triangles
                .vectors()
                .map(|t| {
                    let mut v = CoxeterVector::right_angled(5);
                    v.set(0, 1, Weight::Parallel);
                    v.set(2, 3, t.get(0, 1));
                    v.set(2, 4, t.get(0, 2));
                    v.set(3, 4, t.get(1, 2));
                    v.pack()
                })
                .collect()
        }
        LibraryClass::CubePreblock => {
            if n != 6 {
                return Err(DiagramError::NodeCount(n));
            }
            let mut v = CoxeterVector::right_angled(6);
            for (a, b) in [(0, 1), (2, 3), (4, 5)] {
                v.set(a, b, Weight::Parallel);
            }
            vec![v.pack()]
        }
    };
    debug_assert!(codes.iter().all(|&c| c < 1u64 << (3 * num_pairs(n))));
    Ok(VectorLibrary::from_codes(id, codes))
}

/// Every library the enumeration consults.
#[derive(Debug, Clone)]
pub struct LibrarySet {
    pub weight_cap: u32,
    pub s: [VectorLibrary; 4],
    pub e: [VectorLibrary; 4],
    pub l: [VectorLibrary; 2],
    pub pb4: VectorLibrary,
    pub pb5: VectorLibrary,
    pub pb6: VectorLibrary,
}

impl LibrarySet {
    /// Identifiers in a fixed order: S3..S6, E3..E6, L3, L4, PB4, PB5, PB6.
    pub fn ids(weight_cap: u32) -> Vec<LibraryId> {
        let mut ids = Vec::new();
        for n in 3..=6 {
            ids.push(LibraryId::new(n, weight_cap, LibraryClass::Elliptic));
        }
        for n in 3..=6 {
            ids.push(LibraryId::new(n, weight_cap, LibraryClass::Parabolic));
        }
        ids.push(LibraryId::new(3, weight_cap, LibraryClass::LannerLike));
        ids.push(LibraryId::new(4, weight_cap, LibraryClass::LannerLike));
        ids.push(LibraryId::new(4, weight_cap, LibraryClass::SimplexPreblock));
        ids.push(LibraryId::new(5, weight_cap, LibraryClass::PrismPreblock));
        ids.push(LibraryId::new(6, weight_cap, LibraryClass::CubePreblock));
        ids
    }

    pub fn generate(weight_cap: u32) -> Result<Self, DiagramError> {
        let libs = Self::ids(weight_cap)
            .into_iter()
            .map(|id| generate_library(id.n, id.weight_cap, id.class))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_libraries(weight_cap, libs)
    }

    /// Assembles a set from libraries given in [`LibrarySet::ids`] order.
    pub fn from_libraries(weight_cap: u32, libs: Vec<VectorLibrary>) -> Result<Self, DiagramError> {
        let ids = Self::ids(weight_cap);
        if libs.len() != ids.len() || libs.iter().zip(&ids).any(|(l, id)| l.id() != *id) {
            return Err(DiagramError::Cache("library set incomplete or out of order".into()));
        }
        let mut it = libs.into_iter();
        let mut next = || it.next().unwrap();
        Ok(Self {
            weight_cap,
            s: [next(), next(), next(), next()],
            e: [next(), next(), next(), next()],
            l: [next(), next()],
            pb4: next(),
            pb5: next(),
            pb6: next(),
        })
    }

    pub fn all(&self) -> Vec<&VectorLibrary> {
        let mut v: Vec<&VectorLibrary> = self.s.iter().collect();
        v.extend(self.e.iter());
        v.extend(self.l.iter());
        v.extend([&self.pb4, &self.pb5, &self.pb6]);
        v
    }

    pub fn spherical(&self, k: usize) -> &VectorLibrary {
        &self.s[k - 3]
    }

    pub fn euclidean(&self, k: usize) -> &VectorLibrary {
        &self.e[k - 3]
    }

    pub fn lanner(&self, k: usize) -> &VectorLibrary {
        &self.l[k - 3]
    }
}
