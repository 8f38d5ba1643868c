//! Continuous search for real solutions of the minor system.
//!
//! Angles are parametrized as `y = 2cos θ` with `θ` in `(0, arccos 0.9]`
//! and lengths as `x = 1 + s²`, so the box constraints hold by construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gram::{SymbolicGram, NODES};
use super::lengths::{complete, covers, Completion};
use super::real::det;

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousSolution {
    pub angles: Vec<f64>,
    pub lengths: Vec<f64>,
    pub residual: f64,
}

fn theta_max() -> f64 {
    0.9f64.acos()
}

/// Principal 6×6 minors divided by the product of their row norms.
fn relative_minors(gram: &[Vec<f64>]) -> Vec<f64> {
    (0..NODES)
        .map(|del| {
            let idx: Vec<usize> = (0..NODES).filter(|&r| r != del).collect();
            let m: Vec<Vec<f64>> = idx
                .iter()
                .map(|&r| idx.iter().map(|&c| gram[r][c]).collect())
                .collect();
            let hadamard: f64 = m
                .iter()
                .map(|row| row.iter().map(|x| x * x).sum::<f64>().sqrt())
                .product();
            det(m) / hadamard
        })
        .collect()
}

struct Problem<'a> {
    g: &'a SymbolicGram,
    a: usize,
}

impl Problem<'_> {
    fn unpack(&self, z: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let ys = z[..self.a].iter().map(|t| 2.0 * t.cos()).collect();
        let xs = z[self.a..].iter().map(|s| 1.0 + s * s).collect();
        (ys, xs)
    }

    fn residual(&self, z: &[f64]) -> Vec<f64> {
        let (ys, xs) = self.unpack(z);
        let gram: Vec<Vec<f64>> = self.g.numeric_with_angles(53, &ys, &xs);
        relative_minors(&gram)
    }

    fn clamp(&self, z: &mut [f64]) {
        for t in &mut z[..self.a] {
            *t = t.abs().clamp(1e-9, theta_max());
        }
    }
}

fn norm(r: &[f64]) -> f64 {
    r.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Solves the square system `(JᵀJ + λ diag) δ = −Jᵀr`.
fn lm_step(j: &[Vec<f64>], r: &[f64], lambda: f64) -> Option<Vec<f64>> {
    let n = j[0].len();
    let mut a = vec![vec![0.0; n]; n];
    let mut b = vec![0.0; n];
    for (row, &ri) in j.iter().zip(r) {
        for p in 0..n {
            b[p] -= row[p] * ri;
            for q in 0..n {
                a[p][q] += row[p] * row[q];
            }
        }
    }
    for (p, row) in a.iter_mut().enumerate() {
        row[p] += lambda * (row[p] + 1e-12);
    }
    let (inv, _) = super::real::inverse(&a)?;
    Some((0..n).map(|p| (0..n).map(|q| inv[p][q] * b[q]).sum()).collect())
}

fn levenberg_marquardt(pb: &Problem, mut z: Vec<f64>, iters: usize) -> (Vec<f64>, f64) {
    let mut r = pb.residual(&z);
    let mut cost = norm(&r);
    let mut lambda = 1e-3;
    for _ in 0..iters {
        if cost < 1e-14 {
            break;
        }
        let h = 1e-7;
        let cols: Vec<Vec<f64>> = (0..z.len())
            .map(|k| {
                let mut zp = z.clone();
                let mut zm = z.clone();
                zp[k] += h;
                zm[k] -= h;
                let rp = pb.residual(&zp);
                let rm = pb.residual(&zm);
                rp.iter().zip(&rm).map(|(p, m)| (p - m) / (2.0 * h)).collect()
            })
            .collect();
        let jac: Vec<Vec<f64>> = (0..r.len())
            .map(|i| cols.iter().map(|c| c[i]).collect())
            .collect();
        let mut improved = false;
        for _ in 0..12 {
            let Some(step) = lm_step(&jac, &r, lambda) else {
                lambda *= 10.0;
                continue;
            };
            let mut zn: Vec<f64> = z.iter().zip(&step).map(|(a, b)| a + b).collect();
            pb.clamp(&mut zn);
            let rn = pb.residual(&zn);
            let cn = norm(&rn);
            if cn < cost {
                z = zn;
                r = rn;
                cost = cn;
                lambda = (lambda * 0.3).max(1e-12);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    (z, cost)
}

/// Multistart search for a point with all seven minors vanishing, every
/// angle in `(1.8, 2)` and every length above one.
pub fn continuous_solution(
    g: &SymbolicGram,
    starts: usize,
    seed: u64,
) -> Option<ContinuousSolution> {
    let a = g.num_angles();
    let p = g.num_lengths();
    let pb = Problem { g, a };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cover_list = covers(g);
    for _ in 0..starts {
        let thetas: Vec<f64> = (0..a).map(|_| rng.random_range(1e-3..theta_max())).collect();
        let mut seeds: Vec<Vec<f64>> = Vec::new();
        if p > 0 {
            let ys: Vec<f64> = thetas.iter().map(|t| 2.0 * t.cos()).collect();
            let gram: Vec<Vec<f64>> = g.numeric_with_angles(53, &ys, &vec![0.0; p]);
            for c in &cover_list {
                if let Completion::Solved(sols) = complete(g, &gram, *c, 1e30) {
                    seeds.extend(sols);
                    break;
                }
            }
        }
        if seeds.is_empty() {
            seeds.push((0..p).map(|_| rng.random_range(1.05..6.0)).collect());
        }
        for xs in seeds {
            let mut z = thetas.clone();
            z.extend(xs.iter().map(|x| (x - 1.0).max(1e-6).sqrt()));
            let (z, cost) = levenberg_marquardt(&pb, z, 200);
            if cost > 1e-11 {
                continue;
            }
            let (ys, xs) = pb.unpack(&z);
            let inside = z[..a].iter().all(|&t| t > 1e-7 && t <= theta_max())
                && xs.iter().all(|&x| x > 1.0 + 1e-9);
            if inside {
                return Some(ContinuousSolution {
                    angles: ys,
                    lengths: xs,
                    residual: cost,
                });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::CoxeterVector;
    use crate::gramsolve::gram::substitute;

    #[test]
    fn singleton_example_is_found() {
        let v = CoxeterVector::parse("2,3,2,4,2,inf,2,7,2,2,inf,4,2,3,2,2,2,2,5,2,2").unwrap();
        let g = substitute(&v);
        let sol = continuous_solution(&g, 64, 7).expect("a real solution exists");
        let s5 = 5f64.sqrt();
        let want = 2.0 / (7.0 + 4.0 * s5 - 2.0 * 2f64.sqrt() * (3.0 + s5)).sqrt();
        assert!((sol.angles[0] - want).abs() < 1e-6, "{sol:?}");
        let x1 = (1.5 + s5 + (7.0 + 3.0 * s5).sqrt()).sqrt();
        assert!(sol.lengths.iter().any(|x| (x - x1).abs() < 1e-6), "{sol:?}");
    }

    #[test]
    fn vague_example_has_real_points() {
        let v = CoxeterVector::parse("2,2,2,7,2,inf,7,2,2,2,inf,3,2,2,2,2,5,2,3,2,2").unwrap();
        let sol = continuous_solution(&substitute(&v), 64, 7).expect("a real family exists");
        assert!(sol.angles[0] > 1.8019 && sol.angles[0] < 1.9148);
    }
}
