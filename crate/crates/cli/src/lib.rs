//! Command-line pipeline: derive, libgen, enumerate, solve, certify.
//!
//! Every stage writes under `--out` and is skipped when its inputs and the
//! configuration it reads hash to the key stored by the previous run.

pub mod config;
pub mod report;
pub mod stages;

use anyhow::{anyhow, bail, Result};
use coxeter_census::diagrams::export_dot;
use coxeter_census::CoxeterVector;

pub use config::{Cli, Command, DotArgs, Options, PipelineConfig};
pub use report::{Expected, Report};
pub use stages::Pipeline;

/// Runs one command and returns what should go to stdout.
pub fn run(command: &Command, cfg: PipelineConfig) -> Result<String> {
    let threads = cfg.threads.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    pool.install(|| run_in_pool(command, cfg))
}

fn run_in_pool(command: &Command, cfg: PipelineConfig) -> Result<String> {
    let weight_cap = cfg.weight_cap;
    let mut pipe = Pipeline::new(cfg)?;
    match command {
        Command::Derive => pipe.derive()?,
        Command::Libgen => pipe.libgen()?,
        Command::Enumerate => pipe.enumerate()?,
        Command::Solve => pipe.solve()?,
        Command::Certify => pipe.certify()?,
        Command::All => {
            pipe.derive()?;
            pipe.libgen()?;
            pipe.enumerate()?;
            pipe.solve()?;
            pipe.certify()?;
        }
        Command::ExportDot(args) => return export(&pipe, args),
    }
    pipe.report.compare(&Expected::bundled(), weight_cap);
    pipe.save_report()?;
    Ok(summary(&pipe.report))
}

fn export(pipe: &Pipeline, args: &DotArgs) -> Result<String> {
    match (&args.record, &args.vector) {
        (Some((label, index)), _) => {
            let name = format!("P{label}");
            let rec = pipe
                .records()?
                .into_iter()
                .find(|r| r.polytope_id == name && r.index == *index)
                .ok_or_else(|| anyhow!("no census record {name}:{index}"))?;
            let v = CoxeterVector::parse(&rec.vector).map_err(|e| anyhow!("{e}"))?;
            Ok(export_dot(&v, Some(&rec.lengths)))
        }
        (None, Some(s)) => {
            let v = CoxeterVector::parse(s).map_err(|e| anyhow!("{e}"))?;
            Ok(export_dot(&v, None))
        }
        (None, None) => bail!("export-dot needs --record <label>:<index> or --vector <entries>"),
    }
}

fn summary(r: &Report) -> String {
    let mut out = String::new();
    for (label, p) in &r.polytopes {
        let mut parts = vec![format!("P{label}")];
        if let Some(n) = p.selcper {
            parts.push(format!("selcper {n}"));
        }
        if let Some(rc) = &p.rounds {
            let first = rc.one_eq.map_or("-".to_string(), |n| n.to_string());
            parts.push(format!(
                "rounds {first}/{}/{}/{}",
                rc.seven_eq, rc.integrality, rc.signature
            ));
        }
        if let (Some(c), Some(n)) = (p.compact, p.noncompact) {
            parts.push(format!("compact {c} noncompact {n}"));
        }
        out.push_str(&parts.join("  "));
        out.push('\n');
    }
    for c in &r.checks {
        let mark = if c.ok { "ok  " } else { "FAIL" };
        out.push_str(&format!("{mark} {}: expected {}, observed {}\n", c.what, c.expected, c.observed));
    }
    out
}
