//! Vertex structure, Euler characteristic, volume and arithmeticity of
//! realized polytopes.
//!
//! Records carry canonically relabeled vectors, so the vertex structure is
//! read off the diagram (elliptic subdiagrams of rank 4 are ordinary
//! vertices, parabolic ones of rank 3 are ideal) and matched against the
//! brackets of the combinatorial type by a facet relabeling.

use std::fmt;

use rug::float::Constant;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::{CombinatorialPolytope, FacetMask, NUM_FACETS};
use crate::diagrams::{for_each_permutation, pairs, subset_order, CoxeterVector, Diagram, Weight};
use crate::field::Z235;
use crate::gramsolve::real::bits_for_digits;
use crate::gramsolve::{substitute, Realization, SolveOutcome};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InvariantError {
    #[error("vertex structure does not match the brackets: {0}")]
    PosetMismatch(String),
    #[error("non-positive Euler characteristic {0}")]
    NonPositive(String),
    #[error("realization does not fit the vector: {0}")]
    Shape(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexStatus {
    Ordinary,
    Ideal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FiniteVolume {
    Compact,
    NonCompact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Arithmeticity {
    Arithmetic,
    NonArithmetic,
    Inconclusive,
    NotApplicableCompact,
}

impl fmt::Display for Arithmeticity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arithmeticity::Arithmetic => "arithmetic",
            Arithmeticity::NonArithmetic => "non-arithmetic",
            Arithmeticity::Inconclusive => "inconclusive",
            Arithmeticity::NotApplicableCompact => "compact",
        })
    }
}

/// The SELCper vector with each angle unknown replaced by its weight.
pub fn realized_vector(selcper: &CoxeterVector, angle_weights: &[u32]) -> Result<CoxeterVector, InvariantError> {
    let g = substitute(selcper);
    if g.num_angles() != angle_weights.len() {
        return Err(InvariantError::Shape(format!(
            "{} angle unknowns, {} weights",
            g.num_angles(),
            angle_weights.len()
        )));
    }
    let mut v = selcper.clone();
    for (&(i, j), &k) in g.angle_pairs().iter().zip(angle_weights) {
        v.set(i, j, Weight::Angle(k));
    }
    Ok(v)
}

/// Node sets of ordinary and ideal vertices read off the diagram.
pub fn vertex_sets(d: &Diagram) -> (Vec<u32>, Vec<u32>) {
    let mut ordinary = Vec::new();
    let mut ideal = Vec::new();
    for mask in 1..=d.full() {
        let n = mask.count_ones();
        if n == 4 && d.is_elliptic(mask) {
            ordinary.push(mask);
        } else if n >= 4 && d.is_parabolic(mask) && d.parabolic_rank(mask) == 3 {
            ideal.push(mask);
        }
    }
    (ordinary, ideal)
}

/// Vertex statuses in the bracket order of the combinatorial type, with the
/// relabeling that carries facet `f` to diagram node `relabel[f]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexMatch {
    pub relabel: Vec<usize>,
    pub statuses: Vec<VertexStatus>,
}

fn map_mask(mask: FacetMask, relabel: &[usize]) -> u32 {
    (0..NUM_FACETS)
        .filter(|&f| mask & (1 << f) != 0)
        .fold(0, |m, f| m | (1 << relabel[f]))
}

pub fn vertex_statuses(v: &CoxeterVector, p: &CombinatorialPolytope) -> Result<VertexMatch, InvariantError> {
    let d = Diagram::from_vector(v);
    let (ordinary, ideal) = vertex_sets(&d);
    let mut derived: Vec<u32> = ordinary.iter().chain(&ideal).copied().collect();
    derived.sort_unstable();
    let brackets = p.bracket_masks();
    if derived.len() != brackets.len() {
        return Err(InvariantError::PosetMismatch(format!(
            "{} vertex sets in the diagram, {} brackets",
            derived.len(),
            brackets.len()
        )));
    }
    let mut found = None;
    let mut perm: Vec<usize> = (0..NUM_FACETS).collect();
    for_each_permutation(&mut perm, 0, &mut |s| {
        if found.is_some() {
            return;
        }
        let mut mapped: Vec<u32> = brackets.iter().map(|&b| map_mask(b, s)).collect();
        mapped.sort_unstable();
        if mapped == derived {
            found = Some(s.to_vec());
        }
    });
    let relabel = found.ok_or_else(|| InvariantError::PosetMismatch("no facet relabeling matches".into()))?;
    let statuses = brackets
        .iter()
        .map(|&b| {
            if ideal.contains(&map_mask(b, &relabel)) {
                VertexStatus::Ideal
            } else {
                VertexStatus::Ordinary
            }
        })
        .collect();
    Ok(VertexMatch { relabel, statuses })
}

/// Finite-volume test with the face poset cross-check: every elliptic
/// subdiagram lies in some vertex, and every elliptic triple (an edge) lies in
/// exactly two.
pub fn check_finite_volume(v: &CoxeterVector, p: &CombinatorialPolytope) -> Result<FiniteVolume, InvariantError> {
    let m = vertex_statuses(v, p)?;
    let d = Diagram::from_vector(v);
    let vertices: Vec<u32> = p.bracket_masks().iter().map(|&b| map_mask(b, &m.relabel)).collect();
    for mask in 1..d.full() {
        if mask.count_ones() > 4 || !d.is_elliptic(mask) {
            continue;
        }
        let holders = vertices.iter().filter(|&&b| b & mask == mask).count();
        if holders == 0 || (mask.count_ones() == 3 && holders != 2) {
            return Err(InvariantError::PosetMismatch(format!(
                "elliptic subset {mask:07b} lies in {holders} vertices"
            )));
        }
    }
    Ok(if m.statuses.contains(&VertexStatus::Ideal) {
        FiniteVolume::NonCompact
    } else {
        FiniteVolume::Compact
    })
}

pub fn cusp_count(statuses: &[VertexStatus]) -> usize {
    statuses.iter().filter(|&&s| s == VertexStatus::Ideal).count()
}

/// Steinberg sum of `(−1)^|S| / |W_S|` over elliptic node subsets, the empty
/// set included.
pub fn euler_characteristic(v: &CoxeterVector) -> Rational {
    let d = Diagram::from_vector(v);
    let mut chi = Rational::from(1);
    for mask in 1..=d.full() {
        if !d.is_elliptic(mask) {
            continue;
        }
        let order = subset_order(&d, mask).expect("elliptic subsets have a catalogued order");
        let term = Rational::from((1, order));
        if mask.count_ones() % 2 == 0 {
            chi += term;
        } else {
            chi -= term;
        }
    }
    chi
}

/// Volume over `π²` of a 4-polytope with Euler characteristic `chi`.
pub fn volume4(chi: &Rational) -> Result<Rational, InvariantError> {
    if *chi <= 0 {
        return Err(InvariantError::NonPositive(chi.to_string()));
    }
    Ok(Rational::from((4, 3)) * chi)
}

/// Distance from a rational integer, graded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Integrality {
    Integer,
    NotInteger,
    Unclear,
}

const INTEGER_TOL: f64 = 1e-25;
const FAIL_TOL: f64 = 1e-10;

fn grade(x: &Float) -> Integrality {
    let dist = (x.clone() - x.clone().round()).abs().to_f64();
    if dist < INTEGER_TOL {
        Integrality::Integer
    } else if dist >= FAIL_TOL {
        Integrality::NotInteger
    } else {
        Integrality::Unclear
    }
}

/// An entry of `2G`.
#[derive(Debug, Clone)]
enum TwoG {
    /// Twice the entry, stored as `4G`, so the value is `z / 2`.
    Exact(Z235),
    Numeric(Float),
}

fn exact_integer(z: &Z235, halvings: u32) -> bool {
    let c = z.coords();
    c[1..].iter().all(|&x| x == 0) && c[0] % (1i64 << halvings) == 0
}

/// Simple cycles of length at least three, each listed once.
fn simple_cycles(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    fn extend(adj: &[Vec<bool>], path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let start = path[0];
        let last = *path.last().unwrap();
        for next in start + 1..adj.len() {
            if !adj[last][next] || path.contains(&next) {
                continue;
            }
            path.push(next);
            if path.len() >= 3 && adj[next][start] && path[1] < next {
                out.push(path.clone());
            }
            extend(adj, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    for s in 0..adj.len() {
        extend(adj, &mut vec![s], &mut out);
    }
    out
}

/// Vinberg's cycle test for a non-compact polytope: every cycle of `2G`,
/// squares of single entries included, must be a rational integer.
pub fn arithmeticity_noncompact(v: &CoxeterVector, lengths: &[String], digits: u32) -> Result<Arithmeticity, InvariantError> {
    let prec = bits_for_digits(digits);
    let g = substitute(v);
    if g.num_angles() > 0 {
        // Weights above six are not in the entry ring.
        return arithmeticity_numeric(v, lengths, prec);
    }
    if g.num_lengths() != lengths.len() {
        return Err(InvariantError::Shape(format!("{} lengths expected", g.num_lengths())));
    }
    let n = v.nodes();
    let mut entries = vec![vec![TwoG::Exact(Z235::ZERO); n]; n];
    for (i, j) in pairs(n) {
        let e = match v.get(i, j) {
            Weight::Divergent => {
                let l = g
                    .length_pairs()
                    .iter()
                    .position(|&p| p == (i, j))
                    .ok_or_else(|| InvariantError::Shape(format!("no length at {i}{j}")))?;
                let x = Float::parse(&lengths[l])
                    .map_err(|e| InvariantError::Shape(e.to_string()))?;
                TwoG::Numeric(Float::with_val(prec, x) * -2)
            }
            w => TwoG::Exact(w.scaled_cos().expect("ring entry")),
        };
        entries[i][j] = e.clone();
        entries[j][i] = e;
    }
    Ok(grade_cycles(&entries, prec))
}

fn arithmeticity_numeric(v: &CoxeterVector, lengths: &[String], prec: u32) -> Result<Arithmeticity, InvariantError> {
    let g = substitute(v);
    let n = v.nodes();
    let mut entries = vec![vec![TwoG::Exact(Z235::ZERO); n]; n];
    for (i, j) in pairs(n) {
        let val = match v.get(i, j) {
            Weight::Divergent => {
                let l = g
                    .length_pairs()
                    .iter()
                    .position(|&p| p == (i, j))
                    .ok_or_else(|| InvariantError::Shape(format!("no length at {i}{j}")))?;
                let x = Float::parse(&lengths[l]).map_err(|e| InvariantError::Shape(e.to_string()))?;
                Float::with_val(prec, x) * -2
            }
            Weight::Parallel => Float::with_val(prec, -2),
            Weight::Angle(k) => {
                let c = Float::with_val(prec, Constant::Pi) / k;
                c.cos() * -2
            }
        };
        entries[i][j] = TwoG::Numeric(val.clone());
        entries[j][i] = TwoG::Numeric(val);
    }
    Ok(grade_cycles(&entries, prec))
}

fn grade_cycles(entries: &[Vec<TwoG>], prec: u32) -> Arithmeticity {
    let n = entries.len();
    let nonzero = |e: &TwoG| match e {
        TwoG::Exact(z) => !z.is_zero(),
        TwoG::Numeric(_) => true,
    };
    let adj: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i != j && nonzero(&entries[i][j])).collect()).collect();
    let mut cycles: Vec<Vec<usize>> = pairs(n)
        .into_iter()
        .filter(|&(i, j)| adj[i][j])
        .map(|(i, j)| vec![i, j])
        .collect();
    cycles.extend(simple_cycles(&adj));
    let mut unclear = false;
    for c in &cycles {
        let steps: Vec<(usize, usize)> = (0..c.len()).map(|t| (c[t], c[(t + 1) % c.len()])).collect();
        let all_exact = steps.iter().all(|&(a, b)| matches!(entries[a][b], TwoG::Exact(_)));
        let verdict = if all_exact {
            let prod = steps.iter().fold(Z235::ONE, |acc, &(a, b)| match entries[a][b] {
                TwoG::Exact(z) => acc * z,
                TwoG::Numeric(_) => unreachable!(),
            });
            if exact_integer(&prod, steps.len() as u32) {
                Integrality::Integer
            } else {
                Integrality::NotInteger
            }
        } else {
            let prod = steps.iter().fold(Float::with_val(prec, 1), |acc, &(a, b)| {
                acc * match &entries[a][b] {
                    TwoG::Exact(z) => z.to_float(prec) / 2,
                    TwoG::Numeric(x) => x.clone(),
                }
            });
            grade(&prod)
        };
        match verdict {
            Integrality::NotInteger => return Arithmeticity::NonArithmetic,
            Integrality::Unclear => unclear = true,
            Integrality::Integer => {}
        }
    }
    if unclear {
        Arithmeticity::Inconclusive
    } else {
        Arithmeticity::Arithmetic
    }
}

/// Lexicographically least relabeling with full angle weights.
pub fn exact_canonical(v: &CoxeterVector) -> CoxeterVector {
    let mut best = v.clone();
    let mut perm: Vec<usize> = (0..v.nodes()).collect();
    for_each_permutation(&mut perm, 0, &mut |s| {
        let w = v.permuted(s);
        if w.entries() < best.entries() {
            best = w;
        }
    });
    best
}

/// One realized polytope of the census.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolytopeRecord {
    pub polytope_id: String,
    pub index: usize,
    /// Realized vector, 21 entries.
    pub vector: String,
    pub selcper: String,
    pub angle_weights: Vec<u32>,
    pub lengths: Vec<String>,
    pub vertex_statuses: Vec<VertexStatus>,
    pub compact: bool,
    pub cusps: usize,
    pub euler_char: String,
    pub volume_pi2: String,
    pub volume_decimal: String,
    pub arithmetic: Arithmeticity,
}

impl PolytopeRecord {
    pub fn euler_rational(&self) -> Rational {
        self.euler_char.parse().expect("stored as p/q")
    }

    pub fn volume_rational(&self) -> Rational {
        self.volume_pi2.parse().expect("stored as p/q")
    }
}

/// Assembles and certifies the record of one realization. `index` is filled
/// in by the caller once records are ordered.
pub fn build_record(
    p: &CombinatorialPolytope,
    selcper: &CoxeterVector,
    r: &Realization,
    digits: u32,
) -> Result<PolytopeRecord, InvariantError> {
    let v = realized_vector(selcper, &r.angle_weights)?;
    let shape = check_finite_volume(&v, p)?;
    let m = vertex_statuses(&v, p)?;
    let chi = euler_characteristic(&v);
    let vol = volume4(&chi)?;
    let arithmetic = match shape {
        FiniteVolume::Compact => Arithmeticity::NotApplicableCompact,
        FiniteVolume::NonCompact => arithmeticity_noncompact(&v, &r.lengths, digits)?,
    };
    let prec = bits_for_digits(digits);
    let pi = Float::with_val(prec, Constant::Pi);
    let volume = Float::with_val(prec, &vol) * pi.clone() * pi;
    Ok(PolytopeRecord {
        polytope_id: p.name(),
        index: 0,
        vector: v.to_string(),
        selcper: selcper.to_string(),
        angle_weights: r.angle_weights.clone(),
        lengths: r.lengths.clone(),
        cusps: cusp_count(&m.statuses),
        vertex_statuses: m.statuses,
        compact: shape == FiniteVolume::Compact,
        euler_char: chi.to_string(),
        volume_pi2: vol.to_string(),
        volume_decimal: volume.to_string_radix(10, Some(20)),
        arithmetic,
    })
}

/// Records for every accepted outcome of one polytope, numbered from one.
/// Realizations related by a symmetry of their SELCper vector are kept once.
pub fn assemble_records(
    p: &CombinatorialPolytope,
    vectors: &[CoxeterVector],
    outcomes: &[SolveOutcome],
    digits: u32,
) -> Result<Vec<PolytopeRecord>, InvariantError> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for (v, o) in vectors.iter().zip(outcomes) {
        let SolveOutcome::Accepted { realizations, .. } = o else {
            continue;
        };
        for r in realizations {
            let key = exact_canonical(&realized_vector(v, &r.angle_weights)?);
            if !seen.insert(key) {
                continue;
            }
            let mut rec = build_record(p, v, r, digits)?;
            rec.index = out.len() + 1;
            out.push(rec);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::polytope_by_label;

    fn parse(s: &str) -> CoxeterVector {
        CoxeterVector::parse(s).unwrap()
    }

    #[test]
    fn steinberg_sums() {
        assert_eq!(euler_characteristic(&parse("2,3,7")), Rational::from((-1, 84)));
        assert_eq!(euler_characteristic(&CoxeterVector::right_angled(1)), Rational::from((1, 2)));
        // For a finite group the sum collapses to 1/|W|; A3 has order 24.
        assert_eq!(euler_characteristic(&parse("3,2,3")), Rational::from((1, 24)));
    }

    #[test]
    fn volume_scaling() {
        assert_eq!(volume4(&Rational::from((3, 4))).unwrap(), Rational::from(1));
        assert_eq!(volume4(&Rational::from((3, 400))).unwrap(), Rational::from((1, 100)));
        assert!(volume4(&Rational::from(-1)).is_err());
    }

    #[test]
    fn cycles_of_a_triangle_and_square() {
        let mut adj = vec![vec![false; 4]; 4];
        for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)] {
            adj[a][b] = true;
            adj[b][a] = true;
        }
        assert_eq!(simple_cycles(&adj).len(), 3);
    }

    #[test]
    fn arithmetic_grading() {
        // Entries −1/2, −√2/2 and −1 along paths, so only squares occur.
        let v = parse("3,2,2,2,2,2,4,2,2,2,2,4,2,2,2,2,2,2,0,2,2");
        assert_eq!(arithmeticity_noncompact(&v, &[], 40).unwrap(), Arithmeticity::Arithmetic);
        let golden = parse("5,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2");
        assert_eq!(arithmeticity_noncompact(&golden, &[], 40).unwrap(), Arithmeticity::NonArithmetic);
        let near = Float::with_val(200, Float::parse("2.0000000001").unwrap());
        assert_eq!(grade(&near), Integrality::NotInteger);
        let closer = Float::with_val(200, Float::parse("2.00000000000000000001").unwrap());
        assert_eq!(grade(&closer), Integrality::Unclear);
    }

    #[test]
    fn exact_canonical_is_idempotent() {
        let v = parse("2,2,3,2,8,2,2,inf,2,2,2,3,2,2,7,2,2,2,2,2,4");
        let c = exact_canonical(&v);
        assert_eq!(exact_canonical(&c), c);
        assert_eq!(exact_canonical(&v.permuted(&[6, 5, 4, 3, 2, 1, 0])), c);
    }

    #[test]
    fn realized_vector_fills_angles() {
        let s = parse("2,2,2,7,2,inf,7,2,2,2,inf,3,2,2,2,2,5,2,3,2,2");
        let v = realized_vector(&s, &[8, 9]).unwrap();
        assert_eq!(v.get(0, 4), Weight::Angle(8));
        assert_eq!(v.get(1, 2), Weight::Angle(9));
        assert!(realized_vector(&s, &[8]).is_err());
    }

    #[test]
    fn p1_records_have_a_cusp() {
        let p = polytope_by_label(1).unwrap();
        let v = parse("0,2,2,2,2,2,2,2,2,2,3,0,2,2,2,2,2,3,0,2,3");
        assert_eq!(check_finite_volume(&v, &p).unwrap(), FiniteVolume::NonCompact);
        let m = vertex_statuses(&v, &p).unwrap();
        let d = Diagram::from_vector(&v);
        let (ordinary, ideal) = vertex_sets(&d);
        assert_eq!(cusp_count(&m.statuses), ideal.len());
        assert_eq!(cusp_count(&m.statuses), p.brackets.len() - ordinary.len());
        assert!(cusp_count(&m.statuses) >= 1);
        let chi = euler_characteristic(&v);
        assert!(volume4(&chi).unwrap() > 0);
    }
}
