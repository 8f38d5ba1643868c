use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

/// Labels processed by default; all of them finish within seconds.
pub const FAST_LABELS: [u32; 11] = [1, 2, 3, 4, 5, 6, 7, 10, 11, 15, 16];
/// Labels added by `--full-census`. Solving P13 alone takes about an hour on
/// one core.
pub const SLOW_LABELS: [u32; 5] = [8, 9, 12, 13, 14];

#[derive(Debug, Parser)]
#[command(name = "census", version, about = "Census of hyperbolic Coxeter 4-polytopes with seven facets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Admissibility and incidence data for every combinatorial type.
    Derive,
    /// Diagram libraries.
    Libgen,
    /// SELCper vectors per polytope.
    Enumerate,
    /// Gram matrix realization of every SELCper vector.
    Solve,
    /// Invariants and the final census files.
    Certify,
    /// Every stage in order.
    All,
    /// DOT rendering of a vector or census record.
    ExportDot(DotArgs),
}

#[derive(Debug, Clone, PartialEq, Eq, Args)]
pub struct DotArgs {
    /// Census record as `<label>:<index>`, e.g. `16:3`.
    #[arg(long, value_parser = parse_record_ref, conflicts_with = "vector")]
    pub record: Option<(u32, usize)>,
    /// 21 comma-separated entries.
    #[arg(long)]
    pub vector: Option<String>,
}

fn parse_record_ref(s: &str) -> Result<(u32, usize), String> {
    let (l, i) = s.split_once(':').ok_or("expected <label>:<index>")?;
    let label = l.trim().trim_start_matches('P').parse().map_err(|e| format!("{e}"))?;
    let index = i.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((label, index))
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Polytope list; the bundled list when absent.
    #[arg(long, global = true, env = "CENSUS_INPUT")]
    pub input: Option<PathBuf>,
    #[arg(long, global = true, env = "CENSUS_OUT", default_value = "census-out")]
    pub out: PathBuf,
    #[arg(long, global = true, env = "CENSUS_WEIGHT_CAP", default_value_t = 7)]
    pub weight_cap: u32,
    #[arg(long, global = true, env = "CENSUS_K_MAX_ANGLE", default_value_t = 30)]
    pub k_max_angle: u32,
    #[arg(long, global = true, env = "CENSUS_DIGITS", default_value_t = 40)]
    pub digits: u32,
    #[arg(long, global = true, env = "CENSUS_TOL_RES", default_value = "1e-25")]
    pub tol_res: String,
    #[arg(long, global = true, env = "CENSUS_TOL_ZERO", default_value = "1e-20")]
    pub tol_zero: String,
    /// Worker threads; all cores when absent.
    #[arg(long, global = true, env = "CENSUS_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, global = true, env = "CENSUS_ROW_LIMIT", default_value_t = 50_000_000)]
    pub row_limit: usize,
    #[arg(long, global = true, env = "CENSUS_SEED", default_value_t = 0x5eed)]
    pub seed: u64,
    /// Comma-separated labels to process.
    #[arg(long, global = true, env = "CENSUS_POLYTOPE", value_delimiter = ',')]
    pub polytope: Vec<u32>,
    /// Include the slow labels as well.
    #[arg(long, global = true, env = "CENSUS_FULL_CENSUS")]
    pub full_census: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub input: Option<PathBuf>,
    pub out: PathBuf,
    pub weight_cap: u32,
    pub k_max_angle: u32,
    pub digits: u32,
    pub tol_res: String,
    pub tol_zero: String,
    pub threads: Option<usize>,
    pub row_limit: usize,
    pub seed: u64,
    pub labels: Vec<u32>,
}

impl PipelineConfig {
    pub fn from_options(o: &Options) -> Result<Self> {
        let labels = if !o.polytope.is_empty() {
            let mut l = o.polytope.clone();
            l.sort_unstable();
            l.dedup();
            l
        } else if o.full_census {
            let mut l: Vec<u32> = FAST_LABELS.iter().chain(&SLOW_LABELS).copied().collect();
            l.sort_unstable();
            l
        } else {
            FAST_LABELS.to_vec()
        };
        let cfg = Self {
            input: o.input.clone(),
            out: o.out.clone(),
            weight_cap: o.weight_cap,
            k_max_angle: o.k_max_angle,
            digits: o.digits,
            tol_res: o.tol_res.clone(),
            tol_zero: o.tol_zero.clone(),
            threads: o.threads,
            row_limit: o.row_limit,
            seed: o.seed,
            labels,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(6..=7).contains(&self.weight_cap) {
            bail!("--weight-cap must be 6 or 7, got {}", self.weight_cap);
        }
        if self.digits < 30 {
            bail!("--digits must be at least 30, got {}", self.digits);
        }
        if self.k_max_angle < 7 {
            bail!("--k-max-angle must be at least 7, got {}", self.k_max_angle);
        }
        self.tol_res_f64()?;
        self.tol_zero_f64()?;
        Ok(())
    }

    pub fn tol_res_f64(&self) -> Result<f64> {
        self.tol_res.parse().with_context(|| format!("bad --tol-res {:?}", self.tol_res))
    }

    pub fn tol_zero_f64(&self) -> Result<f64> {
        self.tol_zero.parse().with_context(|| format!("bad --tol-zero {:?}", self.tol_zero))
    }

    pub fn solve_config(&self) -> Result<coxeter_census::SolveConfig> {
        Ok(coxeter_census::SolveConfig {
            digits: self.digits,
            tol_res: self.tol_res_f64()?,
            tol_zero: self.tol_zero_f64()?,
            k_max: self.k_max_angle,
            seed: self.seed,
            ..Default::default()
        })
    }
}
