//! Run summary and comparison against the bundled reference counts.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::Result;
use coxeter_census::gramsolve::RoundCounts;
use coxeter_census::pasting::StepStats;
use serde::{Deserialize, Serialize};

pub const REPORT_FILE: &str = "report.json";

const EXPECTED_JSON: &str = include_str!("../data/expected.json");

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpectedPolytope {
    pub selcper: usize,
    /// Survivors after the one-equation, seven-equation, integrality and
    /// signature rounds; `None` where the first round was skipped.
    pub rounds: [Option<usize>; 4],
    pub compact: usize,
    pub noncompact: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpectedTotal {
    pub compact: usize,
    pub noncompact: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Expected {
    pub admissible: Vec<String>,
    pub libraries: BTreeMap<String, usize>,
    pub polytopes: BTreeMap<u32, ExpectedPolytope>,
    pub total: ExpectedTotal,
}

impl Expected {
    pub fn bundled() -> Self {
        serde_json::from_str(EXPECTED_JSON).expect("bundled expected.json is valid")
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct DeriveSummary {
    pub polytopes: usize,
    pub admissible: Vec<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct PolytopeSummary {
    pub selcper: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<StepStats>>,
    pub rounds: Option<RoundCounts>,
    pub compact: Option<usize>,
    pub noncompact: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub what: String,
    pub expected: String,
    pub observed: String,
    pub ok: bool,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Report {
    pub derive: Option<DeriveSummary>,
    pub libraries: BTreeMap<String, usize>,
    pub polytopes: BTreeMap<u32, PolytopeSummary>,
    /// Wall seconds per stage, keyed `stage` or `stage/P<k>`.
    pub seconds: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
}

fn label_of(name: &str) -> u32 {
    name.trim_start_matches('P').parse().expect("names are P<k>")
}

impl Report {
    /// The previous report in `path`, or an empty one.
    pub fn load(path: &Path) -> Self {
        fs::read_to_string(path)
            .ok()
            .and_then(|s| serde_json::from_str(&s).ok())
            .unwrap_or_default()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        crate::stages::write_atomic(path, text.as_bytes())
    }

    pub fn derive(&mut self, polytopes: usize, admissible: Vec<String>, secs: f64) {
        self.derive = Some(DeriveSummary { polytopes, admissible });
        self.seconds.insert("derive".into(), secs);
    }

    pub fn libgen(&mut self, counts: BTreeMap<String, usize>, secs: f64) {
        self.libraries = counts;
        self.seconds.insert("libgen".into(), secs);
    }

    pub fn enumerate(&mut self, name: &str, count: usize, steps: Option<Vec<StepStats>>, secs: f64) {
        let entry = self.polytopes.entry(label_of(name)).or_default();
        if entry.selcper != Some(count) {
            entry.rounds = None;
            entry.compact = None;
            entry.noncompact = None;
        }
        entry.selcper = Some(count);
        if steps.is_some() {
            entry.steps = steps;
            self.seconds.insert(format!("enumerate/{name}"), secs);
        }
    }

    pub fn solve(&mut self, name: &str, rounds: RoundCounts, secs: Option<f64>) {
        self.polytopes.entry(label_of(name)).or_default().rounds = Some(rounds);
        if let Some(secs) = secs {
            self.seconds.insert(format!("solve/{name}"), secs);
        }
    }

    pub fn certify(&mut self, per: BTreeMap<String, (usize, usize)>, secs: f64) {
        for (name, (c, n)) in per {
            let entry = self.polytopes.entry(label_of(&name)).or_default();
            entry.compact = Some(c);
            entry.noncompact = Some(n);
        }
        self.seconds.insert("certify".into(), secs);
    }

    /// Recomputes `checks` for everything this report has observed. Library
    /// and SELCper counts are only comparable at weight cap 7.
    pub fn compare(&mut self, expected: &Expected, weight_cap: u32) {
        let mut checks = Vec::new();
        let mut push = |what: String, e: String, o: String| {
            checks.push(Check {
                ok: e == o,
                what,
                expected: e,
                observed: o,
            });
        };
        if let Some(d) = &self.derive {
            push("admissible".into(), expected.admissible.join(","), d.admissible.join(","));
        }
        if weight_cap == 7 {
            for (name, &n) in &self.libraries {
                if let Some(e) = expected.libraries.get(name) {
                    push(format!("library {name}"), e.to_string(), n.to_string());
                }
            }
        }
        let mut totals = (0, 0);
        let mut all_certified = true;
        for label in 1..=16u32 {
            let Some(e) = expected.polytopes.get(&label) else { continue };
            let Some(s) = self.polytopes.get(&label) else {
                all_certified = false;
                continue;
            };
            if let (Some(n), 7) = (s.selcper, weight_cap) {
                push(format!("P{label} selcper"), e.selcper.to_string(), n.to_string());
            }
            if let (Some(r), Some(want)) = (&s.rounds, e.rounds[3]) {
                push(format!("P{label} survivors"), want.to_string(), r.signature.to_string());
            }
            match (s.compact, s.noncompact) {
                (Some(c), Some(n)) => {
                    push(
                        format!("P{label} compact/noncompact"),
                        format!("{}/{}", e.compact, e.noncompact),
                        format!("{c}/{n}"),
                    );
                    totals.0 += c;
                    totals.1 += n;
                }
                _ => all_certified = false,
            }
        }
        if all_certified {
            push(
                "census compact/noncompact".into(),
                format!("{}/{}", expected.total.compact, expected.total.noncompact),
                format!("{}/{}", totals.0, totals.1),
            );
        }
        self.checks = checks;
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.ok)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_totals_add_up() {
        let e = Expected::bundled();
        assert_eq!(e.polytopes.len(), 16);
        let c: usize = e.polytopes.values().map(|p| p.compact).sum();
        let n: usize = e.polytopes.values().map(|p| p.noncompact).sum();
        assert_eq!((c, n), (e.total.compact, e.total.noncompact));
        for p in e.polytopes.values() {
            assert_eq!(p.rounds[3], Some(p.compact + p.noncompact));
        }
    }

    #[test]
    fn comparison_flags_mismatches() {
        let mut r = Report::default();
        r.enumerate("P2", 2, Some(Vec::new()), 0.0);
        r.enumerate("P3", 46, Some(Vec::new()), 0.0);
        r.compare(&Expected::bundled(), 7);
        let bad: Vec<&str> = r.failures().map(|c| c.what.as_str()).collect();
        assert_eq!(bad, ["P3 selcper"]);
    }

    #[test]
    fn new_candidates_invalidate_later_stages() {
        let mut r = Report::default();
        r.enumerate("P2", 2, None, 0.0);
        r.certify(BTreeMap::from([("P2".to_string(), (0, 2))]), 0.0);
        r.enumerate("P2", 3, None, 0.0);
        assert_eq!(r.polytopes[&2].compact, None);
    }
}
