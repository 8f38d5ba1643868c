//! Combinatorial data of simple-ish 4-polytopes with seven facets.
//!
//! A polytope is given by its facet brackets: one bracket per vertex, listing
//! the facets through that vertex. Everything downstream (block construction,
//! pruning tuples, the face lattice used in certification) is derived from the
//! brackets alone.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Number of facets of every polytope handled by the census.
pub const NUM_FACETS: usize = 7;

/// A set of facets encoded as a bitmask (bit `i` is facet `i`).
pub type FacetMask = u8;

static BUNDLED: &str = include_str!("../data/polytopes.txt");

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CombinatoricsError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("bracket {0} does not exist")]
    NoSuchBracket(usize),
    #[error("bracket {0} has {1} facets; links are only computed for brackets of size 5 or 6")]
    SimplexLink(usize, usize),
    #[error("polytope {0} is not admissible")]
    NotAdmissible(u32),
    #[error("no bundled polytope named P{0}")]
    UnknownLabel(u32),
}

/// Facets incident to one vertex. Facet order is kept as written in the input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bracket {
    facets: Vec<u8>,
}

impl Bracket {
    pub fn new(facets: Vec<u8>) -> Self {
        Self { facets }
    }

    pub fn facets(&self) -> &[u8] {
        &self.facets
    }

    pub fn len(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn mask(&self) -> FacetMask {
        self.facets.iter().fold(0, |m, &f| m | (1 << f))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinatorialPolytope {
    pub id: u32,
    pub num_facets: usize,
    pub brackets: Vec<Bracket>,
    /// Admissible label `k` for the name `P_k`, when the input names one.
    pub source_name: Option<u32>,
}

impl CombinatorialPolytope {
    pub fn name(&self) -> String {
        match self.source_name {
            Some(k) => format!("P{k}"),
            None => format!("#{}", self.id),
        }
    }

    pub fn bracket_masks(&self) -> Vec<FacetMask> {
        self.brackets.iter().map(Bracket::mask).collect()
    }

    /// Number of brackets containing every facet of `set`.
    pub fn brackets_containing(&self, set: FacetMask) -> usize {
        self.brackets
            .iter()
            .filter(|b| b.mask() & set == set)
            .count()
    }
}

/// Combinatorial type of a vertex link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LinkClass {
    Simplex,
    /// Triangular prism; the pair holds the two triangle facets.
    Prism { parallel: (u8, u8) },
    /// Cube; the three pairs of opposite facets.
    Cube { parallel: [(u8, u8); 3] },
    Other,
}

impl LinkClass {
    pub fn parallel_pairs(&self) -> Vec<(u8, u8)> {
        match *self {
            LinkClass::Prism { parallel } => vec![parallel],
            LinkClass::Cube { parallel } => parallel.to_vec(),
            _ => Vec::new(),
        }
    }
}

/// Tuple sets that drive pruning during enumeration.
///
/// All tuples are facet masks; every list is sorted lexicographically by the
/// ascending facet sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceData {
    pub d: Vec<FacetMask>,
    pub l3: Vec<FacetMask>,
    pub l4: Vec<FacetMask>,
    pub s3: Vec<FacetMask>,
    pub s4: Vec<FacetMask>,
    pub s5: Vec<FacetMask>,
    pub s6: Vec<FacetMask>,
    pub e3: Vec<FacetMask>,
    pub e4: Vec<FacetMask>,
    pub e5: Vec<FacetMask>,
    pub e6: Vec<FacetMask>,
}

impl IncidenceData {
    pub fn cardinalities(&self) -> [usize; 11] {
        [
            self.d.len(),
            self.l3.len(),
            self.l4.len(),
            self.s3.len(),
            self.e3.len(),
            self.s4.len(),
            self.e4.len(),
            self.s5.len(),
            self.e5.len(),
            self.s6.len(),
            self.e6.len(),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinedFVector {
    pub cubes: usize,
    pub prisms: usize,
    pub simplices: usize,
    pub edges: usize,
    pub faces2: usize,
    pub facets: usize,
    pub body: usize,
}

impl RefinedFVector {
    pub fn vertices(&self) -> usize {
        self.cubes + self.prisms + self.simplices
    }
}

impl fmt::Display for RefinedFVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(({},{},{}),{},{},{},{})",
            self.cubes, self.prisms, self.simplices, self.edges, self.faces2, self.facets, self.body
        )
    }
}

pub fn mask_facets(mask: FacetMask) -> Vec<u8> {
    (0..8).filter(|i| mask & (1 << i) != 0).collect()
}

pub fn facets_mask(facets: &[u8]) -> FacetMask {
    facets.iter().fold(0, |m, &f| m | (1 << f))
}

/// Formats a tuple as its facet digits, e.g. `{1,2,6}` becomes `126`.
pub fn mask_label(mask: FacetMask) -> String {
    mask_facets(mask).iter().map(|f| f.to_string()).collect()
}

fn sort_lex(v: &mut Vec<FacetMask>) {
    v.sort_by_key(|&m| mask_facets(m));
    v.dedup();
}

/// All `k`-subsets of `0..n` as masks.
fn subsets(n: usize, k: usize) -> impl Iterator<Item = FacetMask> {
    (0u16..(1 << n))
        .filter(move |m| m.count_ones() as usize == k)
        .map(|m| m as FacetMask)
}

/// Parses a bracket-list document, one polytope per non-empty line.
///
/// Line grammar: `<id>[ <name>]: [i,...][i,...]...`. Lines starting with `#`
/// are comments.
pub fn parse_polytopes(text: &str) -> Result<Vec<CombinatorialPolytope>, CombinatoricsError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_line(line, idx + 1)?);
    }
    Ok(out)
}

fn parse_line(line: &str, lineno: usize) -> Result<CombinatorialPolytope, CombinatoricsError> {
    let err = |message: String| CombinatoricsError::Parse {
        line: lineno,
        message,
    };
    let (head, body) = line
        .split_once(':')
        .ok_or_else(|| err("missing ':' after polytope id".into()))?;
    let mut head_parts = head.split_whitespace();
    let id: u32 = head_parts
        .next()
        .ok_or_else(|| err("missing polytope id".into()))?
        .parse()
        .map_err(|_| err(format!("bad polytope id in {head:?}")))?;
    let source_name = match head_parts.next() {
        None => None,
        Some(name) => {
            let digits = name
                .strip_prefix('P')
                .or_else(|| name.strip_prefix("P_"))
                .ok_or_else(|| err(format!("bad name {name:?}")))?;
            Some(
                digits
                    .trim_start_matches('_')
                    .parse()
                    .map_err(|_| err(format!("bad name {name:?}")))?,
            )
        }
    };
    if head_parts.next().is_some() {
        return Err(err("unexpected token before ':'".into()));
    }

    let compact: String = body.chars().filter(|c| !c.is_whitespace()).collect();
    let mut rest = compact.as_str();
    let mut brackets: Vec<Bracket> = Vec::new();
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('[')
            .ok_or_else(|| err(format!("expected '[' at {rest:?}")))?;
        let close = inner
            .find(']')
            .ok_or_else(|| err("unterminated bracket".into()))?;
        let mut facets = Vec::new();
        for tok in inner[..close].split(',') {
            let f: u8 = tok
                .parse()
                .map_err(|_| err(format!("bad facet index {tok:?}")))?;
            if f as usize >= NUM_FACETS {
                return Err(err(format!("facet index {f} out of range 0..{NUM_FACETS}")));
            }
            if facets.contains(&f) {
                return Err(err(format!("facet {f} repeated in a bracket")));
            }
            facets.push(f);
        }
        if !(4..=6).contains(&facets.len()) {
            return Err(err(format!("bracket of size {} (expected 4..6)", facets.len())));
        }
        let b = Bracket::new(facets);
        if brackets.iter().any(|o| o.mask() == b.mask()) {
            return Err(err(format!("duplicate bracket {:?}", b.facets())));
        }
        brackets.push(b);
        rest = &inner[close + 1..];
    }
    if brackets.is_empty() {
        return Err(err("no brackets".into()));
    }
    let masks: Vec<FacetMask> = brackets.iter().map(Bracket::mask).collect();
    for (i, &a) in masks.iter().enumerate() {
        for (j, &b) in masks.iter().enumerate() {
            if i != j && a & b == a {
                return Err(err(format!("bracket {i} is contained in bracket {j}")));
            }
        }
    }
    Ok(CombinatorialPolytope {
        id,
        num_facets: NUM_FACETS,
        brackets,
        source_name,
    })
}

/// The 31 combinatorial types shipped with the crate.
pub fn bundled_polytopes() -> Vec<CombinatorialPolytope> {
    parse_polytopes(BUNDLED).expect("bundled polytope data is well formed")
}

/// Looks up the bundled polytope named `P_label`.
pub fn polytope_by_label(label: u32) -> Result<CombinatorialPolytope, CombinatoricsError> {
    bundled_polytopes()
        .into_iter()
        .find(|p| p.source_name == Some(label))
        .ok_or(CombinatoricsError::UnknownLabel(label))
}

/// Link vertices of the vertex at bracket `v`: the 3-facet intersections with
/// every other bracket that shares exactly three facets with it.
pub fn vertex_link(
    p: &CombinatorialPolytope,
    v: usize,
) -> Result<Vec<FacetMask>, CombinatoricsError> {
    let b = p.brackets.get(v).ok_or(CombinatoricsError::NoSuchBracket(v))?;
    if b.len() < 5 {
        return Err(CombinatoricsError::SimplexLink(v, b.len()));
    }
    let bm = b.mask();
    Ok(p
        .brackets
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != v)
        .map(|(_, o)| o.mask() & bm)
        .filter(|m| m.count_ones() == 3)
        .collect())
}

/// Pairs of bracket facets that never share a link vertex.
fn non_adjacent_pairs(bracket: FacetMask, link: &[FacetMask]) -> Vec<(u8, u8)> {
    let fs = mask_facets(bracket);
    let mut out = Vec::new();
    for (i, &a) in fs.iter().enumerate() {
        for &b in &fs[i + 1..] {
            let pair = (1u8 << a) | (1u8 << b);
            if !link.iter().any(|&l| l & pair == pair) {
                out.push((a, b));
            }
        }
    }
    out
}

pub fn classify_link(p: &CombinatorialPolytope, v: usize) -> LinkClass {
    let Some(b) = p.brackets.get(v) else {
        return LinkClass::Other;
    };
    let bm = b.mask();
    match b.len() {
        4 => return LinkClass::Simplex,
        5 | 6 => {}
        _ => return LinkClass::Other,
    }
    // A link vertex shared by four or more facets would be a non-simple edge.
    let too_close = p
        .brackets
        .iter()
        .enumerate()
        .any(|(i, o)| i != v && (o.mask() & bm).count_ones() >= 4);
    if too_close {
        return LinkClass::Other;
    }
    let link = vertex_link(p, v).expect("size checked above");
    let pairs = non_adjacent_pairs(bm, &link);
    if b.len() == 5 {
        if link.len() == 6 && pairs.len() == 1 {
            return LinkClass::Prism { parallel: pairs[0] };
        }
        return LinkClass::Other;
    }
    let covered = pairs
        .iter()
        .fold(0u8, |m, &(a, b)| m | (1 << a) | (1 << b));
    if link.len() == 8 && pairs.len() == 3 && covered == bm {
        return LinkClass::Cube {
            parallel: [pairs[0], pairs[1], pairs[2]],
        };
    }
    LinkClass::Other
}

pub fn link_classes(p: &CombinatorialPolytope) -> Vec<LinkClass> {
    (0..p.brackets.len()).map(|v| classify_link(p, v)).collect()
}

pub fn is_admissible(p: &CombinatorialPolytope) -> bool {
    link_classes(p).iter().all(|c| *c != LinkClass::Other)
}

/// Facet pairs lying in no common bracket.
pub fn disjoint_pairs(p: &CombinatorialPolytope) -> Vec<FacetMask> {
    let mut d: Vec<FacetMask> = subsets(p.num_facets, 2)
        .filter(|&pair| p.brackets_containing(pair) == 0)
        .collect();
    sort_lex(&mut d);
    d
}

/// Parallel pairs forced by prism and cube links, as masks.
pub fn predetermined_parallel(p: &CombinatorialPolytope) -> Vec<FacetMask> {
    let mut out: Vec<FacetMask> = link_classes(p)
        .iter()
        .flat_map(|c| c.parallel_pairs())
        .map(|(a, b)| (1 << a) | (1 << b))
        .collect();
    sort_lex(&mut out);
    out
}

pub fn derive_incidence(p: &CombinatorialPolytope) -> Result<IncidenceData, CombinatoricsError> {
    if !is_admissible(p) {
        return Err(CombinatoricsError::NotAdmissible(p.id));
    }
    let n = p.num_facets;
    let d = disjoint_pairs(p);
    let free = |m: FacetMask| d.iter().all(|&pair| m & pair != pair);
    let masks = p.bracket_masks();
    let classes = link_classes(p);
    let parallel = predetermined_parallel(p);

    let prism_triangles: Vec<FacetMask> = classes
        .iter()
        .zip(&masks)
        .filter_map(|(c, &m)| match c {
            LinkClass::Prism { parallel: (a, b) } => Some(m & !((1 << a) | (1 << b))),
            _ => None,
        })
        .collect();
    // Two parallel pairs form an Ã1+Ã1, as inside a cube link.
    let parallel_unions: Vec<FacetMask> = parallel
        .iter()
        .flat_map(|&a| parallel.iter().filter(move |&&b| a & b == 0).map(move |&b| a | b))
        .collect();
    let link_brackets = |want_prism: bool| -> Vec<FacetMask> {
        classes
            .iter()
            .zip(&masks)
            .filter(|(c, _)| match c {
                LinkClass::Prism { .. } => want_prism,
                LinkClass::Cube { .. } => !want_prism,
                _ => false,
            })
            .map(|(_, &m)| m)
            .collect()
    };
    let prism_brackets = link_brackets(true);
    let cube_brackets = link_brackets(false);

    let free_subsets = |k: usize| -> Vec<FacetMask> { subsets(n, k).filter(|&m| free(m)).collect() };

    let triples = free_subsets(3);
    let mut s3: Vec<FacetMask> = triples
        .iter()
        .copied()
        .filter(|&t| p.brackets_containing(t) <= 1)
        .collect();
    // Three facets through an ideal prism vertex meet at infinity, so the
    // prism's side triple is Euclidean rather than a hyperbolic triangle.
    let mut l3: Vec<FacetMask> = s3
        .iter()
        .copied()
        .filter(|t| !prism_triangles.contains(t))
        .collect();
    let mut e3: Vec<FacetMask> = triples
        .iter()
        .copied()
        .filter(|t| !prism_triangles.contains(t))
        .collect();

    let quads = free_subsets(4);
    let mut s4: Vec<FacetMask> = quads
        .iter()
        .copied()
        .filter(|q| !masks.contains(q))
        .collect();
    // A quadruple holding a hyperbolic triangle cannot bound a tetrahedron.
    let mut l4: Vec<FacetMask> = s4
        .iter()
        .copied()
        .filter(|&q| parallel.iter().all(|&pp| q & pp != pp))
        .filter(|&q| l3.iter().all(|&t| q & t != t))
        .collect();
    let mut e4: Vec<FacetMask> = s4
        .iter()
        .copied()
        .filter(|q| !parallel_unions.contains(q))
        .collect();

    let mut s5 = free_subsets(5);
    let mut e5: Vec<FacetMask> = s5
        .iter()
        .copied()
        .filter(|m| !prism_brackets.contains(m))
        .collect();
    let mut s6 = free_subsets(6);
    let mut e6: Vec<FacetMask> = s6
        .iter()
        .copied()
        .filter(|m| !cube_brackets.contains(m))
        .collect();

    for v in [
        &mut l3, &mut l4, &mut s3, &mut s4, &mut s5, &mut s6, &mut e3, &mut e4, &mut e5, &mut e6,
    ] {
        sort_lex(v);
    }
    Ok(IncidenceData {
        d,
        l3,
        l4,
        s3,
        s4,
        s5,
        s6,
        e3,
        e4,
        e5,
        e6,
    })
}

pub fn combinatorial_f_vector(p: &CombinatorialPolytope) -> RefinedFVector {
    let mut f = RefinedFVector {
        cubes: 0,
        prisms: 0,
        simplices: 0,
        edges: 0,
        faces2: 0,
        facets: p.num_facets,
        body: 1,
    };
    for c in link_classes(p) {
        match c {
            LinkClass::Cube { .. } => f.cubes += 1,
            LinkClass::Prism { .. } => f.prisms += 1,
            LinkClass::Simplex => f.simplices += 1,
            LinkClass::Other => {}
        }
    }
    f.edges = subsets(p.num_facets, 3)
        .filter(|&t| p.brackets_containing(t) >= 2)
        .count();
    f.faces2 = subsets(p.num_facets, 2)
        .filter(|&t| p.brackets_containing(t) >= 3)
        .count();
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(v: &[FacetMask]) -> Vec<String> {
        v.iter().map(|&m| mask_label(m)).collect()
    }

    #[test]
    fn parses_bundled_rows() {
        let all = bundled_polytopes();
        assert_eq!(all.len(), 31);
        assert_eq!(all[0].brackets.len(), 9);
        assert_eq!(all[0].brackets[0].facets(), &[6, 5, 4, 3, 2, 1]);
        assert_eq!(all[0].source_name, Some(1));
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(parse_polytopes("").unwrap().is_empty());
        let e = parse_polytopes("1: [7,0,1,2]").unwrap_err();
        assert!(matches!(e, CombinatoricsError::Parse { line: 1, .. }));
        assert!(parse_polytopes("1: [0,1,2,3][3,2,1,0]").is_err());
        assert!(parse_polytopes("1: [0,1,2,3").is_err());
        assert!(parse_polytopes("1 [0,1,2,3]").is_err());
        assert!(parse_polytopes("\n\n2: [0,1,2,3][0,1,2,3,4]").is_err());
    }

    #[test]
    fn parse_is_whitespace_insensitive() {
        let p = parse_polytopes("5 P3 :  [ 0, 1 ,2,3] [4,5,6,0]").unwrap();
        assert_eq!(p[0].id, 5);
        assert_eq!(p[0].source_name, Some(3));
        assert_eq!(p[0].brackets.len(), 2);
    }

    #[test]
    fn cube_link_of_first_row() {
        let p = &bundled_polytopes()[0];
        let link = labels(&vertex_link(p, 0).unwrap());
        assert_eq!(link, ["456", "356", "246", "236", "145", "135", "124", "123"]);
        assert_eq!(
            classify_link(p, 0),
            LinkClass::Cube {
                parallel: [(1, 6), (2, 5), (3, 4)]
            }
        );
    }

    #[test]
    fn second_row_is_not_admissible() {
        let p = &bundled_polytopes()[1];
        let link = labels(&vertex_link(p, 0).unwrap());
        assert_eq!(link, ["456", "356", "346", "245", "235", "134", "124", "123"]);
        assert_eq!(classify_link(p, 0), LinkClass::Other);
        assert!(!is_admissible(p));
    }

    #[test]
    fn simplex_bracket_has_no_link() {
        let p = &bundled_polytopes()[0];
        assert!(matches!(
            vertex_link(p, 1),
            Err(CombinatoricsError::SimplexLink(1, 4))
        ));
        assert_eq!(classify_link(p, 1), LinkClass::Simplex);
    }

    #[test]
    fn prism_pair_of_p8() {
        let p = polytope_by_label(8).unwrap();
        assert_eq!(vertex_link(&p, 0).unwrap().len(), 6);
        assert_eq!(classify_link(&p, 0), LinkClass::Prism { parallel: (2, 6) });
        assert_eq!(labels(&disjoint_pairs(&p)), ["05"]);
    }

    #[test]
    fn single_simplex_is_admissible() {
        let p = parse_polytopes("1: [0,1,2,3]").unwrap();
        assert!(is_admissible(&p[0]));
    }

    #[test]
    fn sixteen_admissible() {
        let all = bundled_polytopes();
        let adm: Vec<u32> = all.iter().filter(|p| is_admissible(p)).map(|p| p.id).collect();
        assert_eq!(adm, [1, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 27, 28, 29, 30, 31]);
        for p in &all {
            assert_eq!(is_admissible(p), p.source_name.is_some(), "row {}", p.id);
        }
    }

    #[test]
    fn incidence_of_p11() {
        let p = polytope_by_label(11).unwrap();
        let inc = derive_incidence(&p).unwrap();
        assert_eq!(labels(&inc.d), ["05", "06"]);
        assert_eq!(labels(&inc.l3), ["126", "236", "246", "256"]);
        assert_eq!(labels(&inc.l4), ["1234", "1345", "2345", "3456"]);
        assert_eq!(labels(&inc.s3), ["126", "236", "246", "256", "345"]);
        assert_eq!(inc.cardinalities(), [2, 4, 4, 5, 25, 10, 10, 7, 6, 1, 1]);
        assert!(!inc.e3.contains(&facets_mask(&[3, 4, 5])));
        let mut e5 = inc.s5.clone();
        e5.retain(|&m| m != facets_mask(&[2, 3, 4, 5, 6]));
        assert_eq!(inc.e5, e5);
        assert_eq!(labels(&inc.s6), ["123456"]);
        assert_eq!(inc.e6, inc.s6);
    }

    #[test]
    fn incidence_never_contains_disjoint_pairs() {
        for p in bundled_polytopes().iter().filter(|p| is_admissible(p)) {
            let inc = derive_incidence(p).unwrap();
            let all = [
                &inc.l3, &inc.l4, &inc.s3, &inc.s4, &inc.s5, &inc.s6, &inc.e3, &inc.e4, &inc.e5,
                &inc.e6,
            ];
            for set in all {
                for &t in set.iter() {
                    assert!(inc.d.iter().all(|&pair| t & pair != pair));
                }
            }
            for &t in &inc.l3 {
                assert!(inc.s3.contains(&t));
            }
            for &t in &inc.l4 {
                assert!(inc.s4.contains(&t));
            }
        }
    }

    #[test]
    fn disjoint_pairs_match_reference() {
        let expect: [(u32, &[&str]); 16] = [
            (1, &[]),
            (2, &[]),
            (3, &[]),
            (4, &["02"]),
            (5, &[]),
            (6, &["03"]),
            (7, &[]),
            (8, &["05"]),
            (9, &["06", "12"]),
            (10, &["06"]),
            (11, &["05", "06"]),
            (12, &[]),
            (13, &["06", "15"]),
            (14, &["06"]),
            (15, &["06", "16"]),
            (16, &["05", "06", "16"]),
        ];
        for (label, d) in expect {
            let p = polytope_by_label(label).unwrap();
            assert_eq!(labels(&disjoint_pairs(&p)), d, "P{label}");
        }
    }

    #[test]
    fn refined_f_vectors() {
        let expect = [
            "((1,0,8),20,18,7,1)",
            "((0,3,5),19,18,7,1)",
            "((0,2,8),22,19,7,1)",
            "((0,2,7),20,18,7,1)",
            "((0,2,8),22,19,7,1)",
            "((0,2,7),20,18,7,1)",
            "((0,1,11),25,20,7,1)",
            "((0,1,10),23,19,7,1)",
            "((0,1,9),21,18,7,1)",
            "((0,1,10),23,19,7,1)",
            "((0,1,9),21,18,7,1)",
            "((0,0,14),28,21,7,1)",
            "((0,0,12),24,19,7,1)",
            "((0,0,13),26,20,7,1)",
            "((0,0,12),24,19,7,1)",
            "((0,0,11),22,18,7,1)",
        ];
        for (i, want) in expect.iter().enumerate() {
            let p = polytope_by_label(i as u32 + 1).unwrap();
            let f = combinatorial_f_vector(&p);
            assert_eq!(f.to_string(), *want, "P{}", i + 1);
            assert_eq!(f.vertices(), p.brackets.len());
        }
    }
}
