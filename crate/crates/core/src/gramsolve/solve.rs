use std::fmt;

use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use super::gram::{angle_floor, excludes, feasible_angle_boxes, minor_system, substitute, MinorSystem, SymbolicGram, NODES};
use super::lengths::{complete, covers, Completion, Cover};
use super::poly::{Interval, Poly};
use super::real::{bits_for_digits, det, symmetric_eigenvalues, Real};
use super::search::continuous_solution;
use crate::diagrams::CoxeterVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    /// Working precision in decimal digits.
    pub digits: u32,
    pub tol_res: f64,
    pub tol_zero: f64,
    /// Largest angle denominator scanned when no finite range is derived.
    pub k_max: u32,
    /// Candidate sets larger than this run the single-minor filter first.
    pub one_eq_threshold: usize,
    pub starts: usize,
    pub seed: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            digits: 40,
            tol_res: 1e-25,
            tol_zero: 1e-20,
            k_max: 30,
            one_eq_threshold: 100,
            starts: 64,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stage {
    OneEq,
    SevenEq,
    Integrality,
    Signature,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::OneEq => "one-eq",
            Stage::SevenEq => "seven-eq",
            Stage::Integrality => "integrality",
            Stage::Signature => "signature",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
    /// Some eigenvalue lies within ten times the dead band.
    pub marginal: bool,
}

impl Signature {
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.positive, self.zero, self.negative)
    }

    pub fn is_hyperbolic_4(&self) -> bool {
        self.counts() == (4, 2, 1)
    }
}

/// One certified Gram matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Realization {
    /// `k_i` for each angle unknown, in pair order.
    pub angle_weights: Vec<u32>,
    /// Lengths as decimal strings at working precision.
    pub lengths: Vec<String>,
    pub lengths_f64: Vec<f64>,
    /// Eigenvalues, ascending, as decimal strings.
    pub eigenvalues: Vec<String>,
    pub signature: Signature,
    /// Largest `|2 det M_i|` at twice the working precision.
    pub max_residual: f64,
    /// Largest eigenvalue movement under precision doubling.
    pub eigen_drift: f64,
    pub gram: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SolveOutcome {
    Accepted {
        realizations: Vec<Realization>,
        /// The angle scan stopped at `k_max` for some unknown.
        k_capped: bool,
    },
    Rejected {
        stage: Stage,
        detail: String,
        /// The rejection rests on an exhausted search rather than a proof.
        exhausted: bool,
    },
}

impl SolveOutcome {
    pub fn is_accepted(&self) -> bool {
        matches!(self, SolveOutcome::Accepted { .. })
    }

    /// Stage reached: rejection stage, or `None` when accepted.
    pub fn rejected_at(&self) -> Option<Stage> {
        match self {
            SolveOutcome::Accepted { .. } => None,
            SolveOutcome::Rejected { stage, .. } => Some(*stage),
        }
    }

    fn reject(stage: Stage, detail: impl Into<String>, exhausted: bool) -> Self {
        SolveOutcome::Rejected {
            stage,
            detail: detail.into(),
            exhausted,
        }
    }
}

/// Eigenvalue counts with a dead band of `tol_zero`.
pub fn signature<R: Real>(gram: &[Vec<R>], tol_zero: f64) -> Signature {
    signature_of(&symmetric_eigenvalues(gram), tol_zero)
}

fn signature_of<R: Real>(ev: &[R], tol_zero: f64) -> Signature {
    let mut s = Signature {
        positive: 0,
        zero: 0,
        negative: 0,
        marginal: false,
    };
    for e in ev {
        let v = e.to_f64();
        if v.abs() <= tol_zero {
            s.zero += 1;
        } else if v > 0.0 {
            s.positive += 1;
        } else {
            s.negative += 1;
        }
        if v.abs() > tol_zero && v.abs() < 10.0 * tol_zero {
            s.marginal = true;
        }
    }
    s
}

fn principal_minor<R: Real>(gram: &[Vec<R>], del: usize) -> R {
    let idx: Vec<usize> = (0..gram.len()).filter(|&r| r != del).collect();
    det(idx
        .iter()
        .map(|&r| idx.iter().map(|&c| gram[r][c].clone()).collect())
        .collect())
}

/// Covers ordered by how well conditioned their inner block is.
fn ranked_covers(g: &SymbolicGram, gram: &[Vec<f64>]) -> Vec<Cover> {
    let mut cs: Vec<(f64, Cover)> = covers(g)
        .into_iter()
        .map(|c| {
            let s = c.rest();
            let m: Vec<Vec<f64>> = s.iter().map(|&i| s.iter().map(|&j| gram[i][j]).collect()).collect();
            (det(m).abs(), c)
        })
        .collect();
    cs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    cs.into_iter().map(|(_, c)| c).collect()
}

/// Length solutions for fixed angles, at the precision of `gram`.
fn solve_lengths<R: Real>(g: &SymbolicGram, gram: &[Vec<R>], order: &[Cover], rel_tol: f64) -> Option<Vec<Vec<R>>> {
    for &c in order {
        match complete(g, gram, c, rel_tol) {
            Completion::Solved(sols) => return Some(sols),
            Completion::Singular | Completion::Underdetermined => continue,
        }
    }
    None
}

enum Certified {
    Realized(Box<Realization>),
    WrongSignature(Signature),
    NotASolution(String),
}

struct Evaluated {
    lengths: Vec<Float>,
    gram: Vec<Vec<Float>>,
    residual: f64,
    eigen: Vec<Float>,
}

fn evaluate(g: &SymbolicGram, ks: &[u32], approx: &[f64], order: &[Cover], prec: u32) -> Result<Evaluated, String> {
    let p = g.num_lengths();
    let zeros: Vec<Float> = (0..p).map(|_| Float::with_val(prec, 0)).collect();
    let base: Vec<Vec<Float>> = g.numeric(prec, ks, &zeros);
    let lengths = if p == 0 {
        Vec::new()
    } else {
        let sols = solve_lengths(g, &base, order, 1e-6).ok_or("no usable cover at high precision")?;
        sols.into_iter()
            .min_by(|a, b| {
                let d = |s: &Vec<Float>| s.iter().zip(approx).map(|(x, y)| ((x.to_f64() - y) / y).abs()).fold(0.0, f64::max);
                d(a).partial_cmp(&d(b)).unwrap_or(std::cmp::Ordering::Equal)
            })
            .filter(|s| s.iter().zip(approx).all(|(x, y)| ((x.to_f64() - y) / y).abs() < 1e-6))
            .ok_or("approximate lengths do not refine")?
    };
    let gram: Vec<Vec<Float>> = g.numeric(prec, ks, &lengths);
    let two = Float::with_val(prec, 2);
    let residual = (0..NODES)
        .map(|i| (principal_minor(&gram, i) * two.clone()).abs().to_f64())
        .fold(0.0, f64::max);
    let eigen = symmetric_eigenvalues(&gram);
    Ok(Evaluated {
        lengths,
        gram,
        residual,
        eigen,
    })
}

fn certify(g: &SymbolicGram, ks: &[u32], approx: &[f64], order: &[Cover], cfg: &SolveConfig) -> Certified {
    let mut prec = bits_for_digits(cfg.digits);
    let mut work = match evaluate(g, ks, approx, order, prec) {
        Ok(e) => e,
        Err(msg) => return Certified::NotASolution(msg),
    };
    if work.residual >= cfg.tol_res {
        return Certified::NotASolution(format!("residual {:e}", work.residual));
    }
    let mut sig = signature_of(&work.eigen, cfg.tol_zero);
    for _ in 0..3 {
        if !sig.marginal {
            break;
        }
        prec *= 2;
        match evaluate(g, ks, approx, order, prec) {
            Ok(e) => work = e,
            Err(msg) => return Certified::NotASolution(msg),
        }
        sig = signature_of(&work.eigen, cfg.tol_zero);
    }
    if let Some(x) = work.lengths.iter().find(|x| x.to_f64() <= 1.0 + 1e-9) {
        return Certified::NotASolution(format!("tangent facets: length {}", x.to_f64()));
    }
    if !sig.is_hyperbolic_4() {
        return Certified::WrongSignature(sig);
    }
    let doubled = match evaluate(g, ks, approx, order, 2 * prec) {
        Ok(e) => e,
        Err(msg) => return Certified::NotASolution(msg),
    };
    let drift = work
        .eigen
        .iter()
        .zip(&doubled.eigen)
        .map(|(a, b)| (a.clone() - b.clone()).abs().to_f64())
        .fold(0.0, f64::max);
    let sig2 = signature_of(&doubled.eigen, cfg.tol_zero);
    if doubled.residual >= cfg.tol_res || drift >= 10.0 * cfg.tol_zero || sig2.counts() != sig.counts() {
        return Certified::NotASolution(format!(
            "unstable under doubling: residual {:e}, drift {:e}",
            doubled.residual, drift
        ));
    }
    let digits = cfg.digits as usize;
    Certified::Realized(Box::new(Realization {
        angle_weights: ks.to_vec(),
        lengths: work.lengths.iter().map(|x| x.to_decimal(digits)).collect(),
        lengths_f64: work.lengths.iter().map(|x| x.to_f64()).collect(),
        eigenvalues: work.eigen.iter().map(|x| x.to_decimal(digits)).collect(),
        signature: sig,
        max_residual: doubled.residual,
        eigen_drift: drift,
        gram: work.gram.iter().map(|r| r.iter().map(|x| x.to_f64()).collect()).collect(),
    }))
}

fn y_of(k: u32) -> f64 {
    2.0 * (std::f64::consts::PI / k as f64).cos()
}

/// Angle weights `7..=k_max` whose value falls in the box.
fn candidate_weights(b: &Interval, k_max: u32) -> (Vec<u32>, bool) {
    let ks: Vec<u32> = (7..=k_max).filter(|&k| {
        let y = y_of(k);
        y >= b.lo - 1e-9 && y <= b.hi + 1e-9
    })
    .collect();
    let capped = b.hi + 1e-9 >= y_of(k_max + 1);
    (ks, capped)
}

struct Scan<'a> {
    g: &'a SymbolicGram,
    eqs: Vec<&'a Poly>,
    order: Vec<usize>,
    options: Vec<Vec<u32>>,
    boxes: Vec<Interval>,
    found: Vec<(Vec<u32>, Vec<f64>)>,
}

impl Scan<'_> {
    fn run(&mut self, depth: usize, ks: &mut Vec<u32>) {
        let a = self.order.len();
        if depth > 0 && depth < a {
            let mut bx = self.boxes.clone();
            for (d, &v) in self.order[..depth].iter().enumerate() {
                bx[v] = Interval::point(y_of(ks[d]));
            }
            if excludes(&self.eqs, &bx, 48) {
                return;
            }
        }
        if depth == a {
            self.leaf(ks);
            return;
        }
        let v = self.order[depth];
        for i in 0..self.options[v].len() {
            ks.push(self.options[v][i]);
            self.run(depth + 1, ks);
            ks.pop();
        }
    }

    fn leaf(&mut self, ks_in_order: &[u32]) {
        let mut ks = vec![0; self.order.len()];
        for (d, &v) in self.order.iter().enumerate() {
            ks[v] = ks_in_order[d];
        }
        let ys: Vec<f64> = ks.iter().map(|&k| y_of(k)).collect();
        for p in &self.eqs {
            if p.eval_f64(&ys).abs() > 1e-8 * (1.0 + p.magnitude_f64(&ys)) {
                return;
            }
        }
        let p = self.g.num_lengths();
        if p == 0 {
            self.found.push((ks, Vec::new()));
            return;
        }
        let gram: Vec<Vec<f64>> = self.g.numeric(53, &ks, &vec![0.0; p]);
        let order = ranked_covers(self.g, &gram);
        if let Some(sols) = solve_lengths(self.g, &gram, &order, 1e-7) {
            for xs in sols {
                self.found.push((ks.clone(), xs));
            }
        }
    }
}

fn length_free_equations(sys: &MinorSystem) -> Vec<&Poly> {
    sys.length_free().into_iter().map(|i| &sys.equations[i]).collect()
}

/// Runs stages two to four on one SELCper vector.
pub fn solve(v: &CoxeterVector, cfg: &SolveConfig) -> SolveOutcome {
    solve_staged(v, cfg, false)
}

/// Like [`solve`], optionally preceded by the single-minor filter.
pub fn solve_staged(v: &CoxeterVector, cfg: &SolveConfig, one_eq: bool) -> SolveOutcome {
    let g = substitute(v);
    let sys = minor_system(&g);
    solve_gram(&g, &sys, cfg, one_eq)
}

/// Solves a candidate set in parallel; outcomes follow the input order.
pub fn solve_all(vectors: &[CoxeterVector], cfg: &SolveConfig) -> Vec<SolveOutcome> {
    let one_eq = vectors.len() > cfg.one_eq_threshold;
    vectors.par_iter().map(|v| solve_staged(v, cfg, one_eq)).collect()
}

/// Survivors after each round for one candidate set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundCounts {
    pub candidates: usize,
    /// `None` when the single-minor round was skipped.
    pub one_eq: Option<usize>,
    pub seven_eq: usize,
    pub integrality: usize,
    pub signature: usize,
}

impl RoundCounts {
    pub fn tally(outcomes: &[SolveOutcome], one_eq_ran: bool) -> Self {
        let dropped = |s: Stage| outcomes.iter().filter(|o| o.rejected_at() == Some(s)).count();
        let n = outcomes.len();
        let r1 = n - dropped(Stage::OneEq);
        let r2 = r1 - dropped(Stage::SevenEq);
        let r3 = r2 - dropped(Stage::Integrality);
        let r4 = r3 - dropped(Stage::Signature);
        Self {
            candidates: n,
            one_eq: one_eq_ran.then_some(r1),
            seven_eq: r2,
            integrality: r3,
            signature: r4,
        }
    }
}

pub fn solve_gram(g: &SymbolicGram, sys: &MinorSystem, cfg: &SolveConfig, one_eq: bool) -> SolveOutcome {
    let a = g.num_angles();
    let eqs = length_free_equations(sys);
    let domain = vec![Interval::new(angle_floor(), 2.0); a];

    if one_eq {
        for (i, p) in sys.length_free().into_iter().zip(&eqs) {
            let dead = match p.as_constant() {
                Some(c) => !c.is_zero(),
                None => excludes(&[*p], &domain, 4096),
            };
            if dead {
                return SolveOutcome::reject(Stage::OneEq, format!("minor {i} has no admissible zero"), false);
            }
        }
    }

    let Some(boxes) = feasible_angle_boxes(sys, 1e-6) else {
        return SolveOutcome::reject(Stage::SevenEq, "length-free minors have no common zero", false);
    };

    let mut options = Vec::with_capacity(a);
    let mut k_capped = false;
    for b in &boxes {
        let (ks, capped) = candidate_weights(b, cfg.k_max);
        k_capped |= capped;
        options.push(ks);
    }
    let mut order: Vec<usize> = (0..a).collect();
    order.sort_by_key(|&v| {
        let uses = eqs.iter().filter(|p| p.var_mask() & (1 << v) != 0).count();
        (std::cmp::Reverse(uses), options[v].len())
    });
    let mut scan = Scan {
        g,
        eqs: eqs.clone(),
        order,
        options,
        boxes: boxes.clone(),
        found: Vec::new(),
    };
    scan.run(0, &mut Vec::new());

    let mut realizations = Vec::new();
    let mut wrong = Vec::new();
    let mut rejects = Vec::new();
    for (ks, xs) in &scan.found {
        let p = g.num_lengths();
        let gram: Vec<Vec<f64>> = g.numeric(53, ks, &vec![0.0; p]);
        let order = ranked_covers(g, &gram);
        match certify(g, ks, xs, &order, cfg) {
            Certified::Realized(r) => realizations.push(*r),
            Certified::WrongSignature(s) => wrong.push((ks.clone(), s)),
            Certified::NotASolution(msg) => rejects.push(msg),
        }
    }
    if !realizations.is_empty() {
        realizations.sort_by(|x, y| x.angle_weights.cmp(&y.angle_weights));
        return SolveOutcome::Accepted {
            realizations,
            k_capped,
        };
    }
    if let Some((ks, s)) = wrong.first() {
        return SolveOutcome::reject(
            Stage::Signature,
            format!("weights {ks:?}: eigenvalue counts {:?}", s.counts()),
            false,
        );
    }
    if a == 0 {
        let detail = match rejects.first() {
            Some(m) => format!("no certified root: {m}"),
            None => "no real lengths above one".to_string(),
        };
        return SolveOutcome::reject(Stage::SevenEq, detail, false);
    }
    match continuous_solution(g, cfg.starts, cfg.seed) {
        Some(sol) => SolveOutcome::reject(
            Stage::Integrality,
            format!(
                "real solution y = {:?} has no angle 2cos(pi/k) with 7 <= k <= {}",
                sol.angles, cfg.k_max
            ),
            k_capped,
        ),
        None => SolveOutcome::reject(Stage::SevenEq, "no certified root: search exhausted", true),
    }
}

/// Direct test for Gram matrices without unknowns: rank five and signature (4,1).
pub fn direct_signature_test(v: &CoxeterVector, cfg: &SolveConfig) -> Option<bool> {
    let g = substitute(v);
    if g.num_angles() + g.num_lengths() > 0 {
        return None;
    }
    let prec = bits_for_digits(cfg.digits);
    let gram: Vec<Vec<Float>> = g.numeric::<Float>(prec, &[], &[]);
    Some(signature(&gram, cfg.tol_zero).is_hyperbolic_4())
}
