//! Length unknowns by rank-5 completion.
//!
//! Pick facets `t`, `u` touching every length unknown so that the other five
//! facets `S` have a fully known, invertible Gram block `G_S`. With
//! `H = G_S⁻¹` and `g_r` the row of facet `r` restricted to `S`, the 7×7
//! matrix has rank 5 exactly when `g_tᵀHg_t = 1`, `g_uᵀHg_u = 1` and
//! `g_tᵀHg_u = G_tu`. A row holding one length is a quadratic in it, and a
//! length at `(t,u)` is read off the last relation.

use super::gram::{SymbolicGram, NODES};
use super::real::{inverse, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cover {
    pub t: usize,
    pub u: usize,
}

impl Cover {
    pub fn rest(&self) -> Vec<usize> {
        (0..NODES).filter(|&i| i != self.t && i != self.u).collect()
    }
}

/// Covers of the length pairs with at most one length per outer row.
pub fn covers(g: &SymbolicGram) -> Vec<Cover> {
    let lp = g.length_pairs();
    let mut out = Vec::new();
    for t in 0..NODES {
        for u in t + 1..NODES {
            let touches = |r: usize| {
                lp.iter()
                    .filter(|&&(a, b)| (a == r || b == r) && (a, b) != (t, u))
                    .count()
            };
            let covered = lp.iter().all(|&(a, b)| a == t || a == u || b == t || b == u);
            if covered && touches(t) <= 1 && touches(u) <= 1 {
                out.push(Cover { t, u });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum Completion<R> {
    /// All solutions with every length above one (possibly none).
    Solved(Vec<Vec<R>>),
    /// `G_S` is numerically singular.
    Singular,
    /// Some length is left free by the relations.
    Underdetermined,
}

fn dot<R: Real>(a: &[R], h: &[Vec<R>], b: &[R]) -> R {
    let prec = a[0].precision();
    let mut acc = R::with_int(prec, 0);
    for i in 0..a.len() {
        let mut row = R::with_int(prec, 0);
        for j in 0..b.len() {
            row = row + h[i][j].clone() * b[j].clone();
        }
        acc = acc + a[i].clone() * row;
    }
    acc
}

fn abs_dot<R: Real>(a: &[R], h: &[Vec<R>], b: &[R]) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.len() {
        for j in 0..b.len() {
            acc += (a[i].to_f64() * h[i][j].to_f64() * b[j].to_f64()).abs();
        }
    }
    acc
}

/// Roots above one of `A x² + B x + C`, with `scale` bounding the coefficient
/// noise. `None` when all coefficients vanish.
fn roots_above_one<R: Real>(a: R, b: R, c: R, scale: f64, rel_tol: f64) -> Option<Vec<R>> {
    let prec = a.precision();
    let tiny = scale * rel_tol;
    let zero = R::with_int(prec, 0);
    let one = R::with_int(prec, 1);
    let two = R::with_int(prec, 2);
    let four = R::with_int(prec, 4);
    let mut roots = Vec::new();
    if a.abs().to_f64() <= tiny {
        if b.abs().to_f64() <= tiny {
            return if c.abs().to_f64() <= tiny { None } else { Some(roots) };
        }
        roots.push(-(c / b));
    } else {
        let disc = b.clone() * b.clone() - four * a.clone() * c.clone();
        if disc < zero {
            if disc.abs().to_f64() > tiny * scale {
                return Some(roots);
            }
            roots.push(-(b / (two * a)));
        } else {
            let s = disc.sqrt();
            // Cancellation-free pair of roots.
            let q = if b >= zero {
                -(b + s) / two.clone()
            } else {
                (s - b) / two.clone()
            };
            if q.abs().to_f64() > 0.0 {
                roots.push(q.clone() / a);
                roots.push(c / q);
            } else {
                roots.push(zero.clone());
            }
        }
    }
    roots.retain(|x| *x > one);
    Some(roots)
}

/// Solves for the lengths given a numeric Gram matrix whose length entries
/// are ignored. `rel_tol` is the relative tolerance for the consistency
/// relations.
pub fn complete<R: Real>(
    g: &SymbolicGram,
    gram: &[Vec<R>],
    cover: Cover,
    rel_tol: f64,
) -> Completion<R> {
    let prec = gram[0][0].precision();
    let s = cover.rest();
    let gs: Vec<Vec<R>> = s
        .iter()
        .map(|&i| s.iter().map(|&j| gram[i][j].clone()).collect())
        .collect();
    let Some((h, det)) = inverse(&gs) else {
        return Completion::Singular;
    };
    if det.abs().to_f64() < 1e-10 {
        return Completion::Singular;
    }
    let lp = g.length_pairs();
    let length_at = |r: usize, c: usize| {
        lp.iter()
            .position(|&(a, b)| (a == r && b == c) || (a == c && b == r))
    };
    let zero = R::with_int(prec, 0);
    let one = R::with_int(prec, 1);
    let two = R::with_int(prec, 2);

    // Per outer row: candidate (row vector, assigned length) pairs.
    let mut branches: Vec<Vec<(Vec<R>, Option<(usize, R)>)>> = Vec::new();
    for r in [cover.t, cover.u] {
        let mut row: Vec<R> = s.iter().map(|&c| gram[r][c].clone()).collect();
        let unknown = s
            .iter()
            .enumerate()
            .find_map(|(k, &c)| length_at(r, c).map(|l| (k, l)));
        match unknown {
            None => {
                let v = dot(&row, &h, &row);
                let scale = abs_dot(&row, &h, &row) + 1.0;
                if (v - one.clone()).abs().to_f64() > rel_tol * scale {
                    return Completion::Solved(Vec::new());
                }
                branches.push(vec![(row, None)]);
            }
            Some((k, l)) => {
                row[k] = zero.clone();
                let hc: R = (0..s.len()).fold(zero.clone(), |acc, j| acc + h[k][j].clone() * row[j].clone());
                let a = h[k][k].clone();
                let b = -(two.clone() * hc);
                let c = dot(&row, &h, &row) - one.clone();
                let scale = abs_dot(&row, &h, &row) + h[k][k].abs().to_f64() + 1.0;
                let Some(roots) = roots_above_one(a, b, c, scale, rel_tol) else {
                    return Completion::Underdetermined;
                };
                let mut opts = Vec::new();
                for x in roots {
                    let mut full = row.clone();
                    full[k] = -x.clone();
                    opts.push((full, Some((l, x))));
                }
                branches.push(opts);
            }
        }
    }
    let tu_length = length_at(cover.t, cover.u);
    let mut out = Vec::new();
    for (gt, lt) in &branches[0] {
        for (gu, lu) in &branches[1] {
            let pred = dot(gt, &h, gu);
            let mut xs: Vec<Option<R>> = vec![None; lp.len()];
            if let Some((l, x)) = lt {
                xs[*l] = Some(x.clone());
            }
            if let Some((l, x)) = lu {
                xs[*l] = Some(x.clone());
            }
            match tu_length {
                Some(l) => {
                    let x = -pred;
                    if x <= one {
                        continue;
                    }
                    xs[l] = Some(x);
                }
                None => {
                    let scale = abs_dot(gt, &h, gu) + 1.0;
                    if (pred - gram[cover.t][cover.u].clone()).abs().to_f64() > rel_tol * scale {
                        continue;
                    }
                }
            }
            if xs.iter().all(|x| x.is_some()) {
                out.push(xs.into_iter().map(|x| x.unwrap()).collect());
            }
        }
    }
    Completion::Solved(out)
}
