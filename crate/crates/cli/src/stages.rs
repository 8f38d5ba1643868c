use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use coxeter_census::combinatorics::{
    bundled_polytopes, derive_incidence, is_admissible, link_classes, parse_polytopes, LinkClass,
};
use coxeter_census::diagrams::{LibraryId, VectorLibrary};
use coxeter_census::gramsolve::{solve_all, RoundCounts};
use coxeter_census::invariants::assemble_records;
use coxeter_census::pasting::{enumerate_selcper, format_selcper_line, parse_selcper_line};
use coxeter_census::{
    CombinatorialPolytope, CoxeterVector, IncidenceData, LibrarySet, PasteConfig, PolytopeRecord, SolveOutcome,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::PipelineConfig;
use crate::report::Report;

pub const DERIVE_FILE: &str = "derive.json";
pub const LIBRARY_DIR: &str = "libraries";
pub const SELCPER_DIR: &str = "selcper";
pub const SOLVE_DIR: &str = "solve";
pub const CENSUS_JSONL: &str = "census.jsonl";
pub const CENSUS_CSV: &str = "census.csv";
const KEY_DIR: &str = ".keys";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeriveEntry {
    pub id: u32,
    pub name: String,
    pub admissible: bool,
    pub links: Vec<LinkClass>,
    pub incidence: Option<IncidenceData>,
}

/// One line of a solve file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveLine {
    pub polytope_id: String,
    pub vector: String,
    pub outcome: SolveOutcome,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Content hash of a stage's inputs and the configuration it reads.
struct StageKey {
    hasher: Sha256,
}

impl StageKey {
    fn new(stage: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(stage.as_bytes());
        Self { hasher }
    }

    fn value(mut self, v: impl Serialize) -> Self {
        self.hasher.update(serde_json::to_vec(&v).expect("serializable"));
        self
    }

    fn file(mut self, path: &Path) -> Result<Self> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(&bytes);
        Ok(self)
    }

    fn finish(self) -> String {
        hex(&self.hasher.finalize())
    }
}

pub struct Pipeline {
    pub cfg: PipelineConfig,
    pub report: Report,
    polytopes: Vec<CombinatorialPolytope>,
    input_text: String,
}

impl Pipeline {
    pub fn new(cfg: PipelineConfig) -> Result<Self> {
        let (polytopes, input_text) = match &cfg.input {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                (parse_polytopes(&text).map_err(|e| anyhow!("{e}"))?, text)
            }
            None => (bundled_polytopes(), "bundled".to_string()),
        };
        fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
        let report = Report::load(&cfg.out.join(crate::report::REPORT_FILE));
        Ok(Self {
            cfg,
            report,
            polytopes,
            input_text,
        })
    }

    fn path(&self, rel: impl AsRef<Path>) -> PathBuf {
        self.cfg.out.join(rel)
    }

    fn key_path(&self, name: &str) -> PathBuf {
        self.path(KEY_DIR).join(format!("{name}.sha256"))
    }

    /// True when `outputs` exist and were produced from the same key.
    fn cached(&self, name: &str, key: &str, outputs: &[PathBuf]) -> bool {
        outputs.iter().all(|p| p.exists())
            && fs::read_to_string(self.key_path(name)).is_ok_and(|k| k.trim() == key)
    }

    fn store_key(&self, name: &str, key: &str) -> Result<()> {
        fs::create_dir_all(self.path(KEY_DIR))?;
        fs::write(self.key_path(name), format!("{key}\n"))?;
        Ok(())
    }

    fn require(&self, path: &Path, stage: &str) -> Result<()> {
        if !path.exists() {
            bail!(
                "missing {}: run `census {stage}` first with the same --out and polytope selection",
                path.display()
            );
        }
        Ok(())
    }

    pub fn polytope(&self, label: u32) -> Result<&CombinatorialPolytope> {
        self.polytopes
            .iter()
            .find(|p| p.source_name == Some(label))
            .ok_or_else(|| anyhow!("no polytope labeled P{label} in the input"))
    }

    fn selcper_path(&self, label: u32) -> PathBuf {
        self.path(SELCPER_DIR).join(format!("P{label}.txt"))
    }

    fn solve_path(&self, label: u32) -> PathBuf {
        self.path(SOLVE_DIR).join(format!("P{label}.jsonl"))
    }

    pub fn derive(&mut self) -> Result<()> {
        let start = Instant::now();
        let out = self.path(DERIVE_FILE);
        let key = StageKey::new("derive").value(&self.input_text).finish();
        if !self.cached("derive", &key, std::slice::from_ref(&out)) {
            let entries: Vec<DeriveEntry> = self
                .polytopes
                .iter()
                .map(|p| {
                    let admissible = is_admissible(p);
                    Ok(DeriveEntry {
                        id: p.id,
                        name: p.name(),
                        admissible,
                        links: link_classes(p),
                        incidence: if admissible {
                            Some(derive_incidence(p).map_err(|e| anyhow!("{}: {e}", p.name()))?)
                        } else {
                            None
                        },
                    })
                })
                .collect::<Result<_>>()?;
            write_atomic(&out, serde_json::to_string_pretty(&entries)?.as_bytes())?;
            self.store_key("derive", &key)?;
        }
        let entries: Vec<DeriveEntry> = serde_json::from_str(&fs::read_to_string(&out)?)?;
        let admissible: Vec<String> = entries.iter().filter(|e| e.admissible).map(|e| e.name.clone()).collect();
        self.report.derive(entries.len(), admissible, start.elapsed().as_secs_f64());
        Ok(())
    }

    fn library_paths(&self) -> Vec<(LibraryId, PathBuf)> {
        LibrarySet::ids(self.cfg.weight_cap)
            .into_iter()
            .map(|id| {
                let p = self.path(LIBRARY_DIR).join(format!("{}.bin", id.name()));
                (id, p)
            })
            .collect()
    }

    pub fn libgen(&mut self) -> Result<()> {
        let start = Instant::now();
        let paths = self.library_paths();
        let key = StageKey::new("libgen").value(self.cfg.weight_cap).finish();
        let outputs: Vec<PathBuf> = paths.iter().map(|(_, p)| p.clone()).collect();
        if !self.cached("libgen", &key, &outputs) {
            let set = LibrarySet::generate(self.cfg.weight_cap).map_err(|e| anyhow!("{e}"))?;
            fs::create_dir_all(self.path(LIBRARY_DIR))?;
            for (lib, (_, path)) in set.all().into_iter().zip(&paths) {
                write_atomic(path, &lib.to_bytes())?;
            }
            self.store_key("libgen", &key)?;
        }
        let set = self.load_libraries()?;
        let counts = set.all().iter().map(|l| (l.name(), l.len())).collect();
        self.report.libgen(counts, start.elapsed().as_secs_f64());
        Ok(())
    }

    fn load_libraries(&self) -> Result<LibrarySet> {
        let mut libs = Vec::new();
        for (id, path) in self.library_paths() {
            self.require(&path, "libgen")?;
            let bytes = fs::read(&path)?;
            libs.push(VectorLibrary::from_bytes(&bytes, id).map_err(|e| anyhow!("{}: {e}", path.display()))?);
        }
        LibrarySet::from_libraries(self.cfg.weight_cap, libs).map_err(|e| anyhow!("{e}"))
    }

    pub fn enumerate(&mut self) -> Result<()> {
        let derive = self.path(DERIVE_FILE);
        self.require(&derive, "derive")?;
        let lib_files: Vec<PathBuf> = self.library_paths().into_iter().map(|(_, p)| p).collect();
        for p in &lib_files {
            self.require(p, "libgen")?;
        }
        let entries: Vec<DeriveEntry> = serde_json::from_str(&fs::read_to_string(&derive)?)?;
        let mut libs = None;
        fs::create_dir_all(self.path(SELCPER_DIR))?;
        for &label in &self.cfg.labels.clone() {
            let start = Instant::now();
            let name = format!("P{label}");
            let entry = entries
                .iter()
                .find(|e| e.name == name)
                .ok_or_else(|| anyhow!("{name} missing from {}", derive.display()))?;
            let inc = entry
                .incidence
                .as_ref()
                .ok_or_else(|| anyhow!("{name} is not admissible"))?;
            let out = self.selcper_path(label);
            let mut key = StageKey::new("enumerate").value(&name).value(inc).value(self.cfg.row_limit);
            for p in &lib_files {
                key = key.file(p)?;
            }
            let key = key.finish();
            let stage = format!("enumerate-{name}");
            let mut stats = None;
            if !self.cached(&stage, &key, std::slice::from_ref(&out)) {
                if libs.is_none() {
                    libs = Some(self.load_libraries()?);
                }
                let p = self.polytope(label)?.clone();
                let pc = PasteConfig {
                    row_limit: self.cfg.row_limit,
                    ..Default::default()
                };
                let set = enumerate_selcper(&p, inc, libs.as_ref().unwrap(), &pc).map_err(|e| anyhow!("{name}: {e}"))?;
                let mut text = String::new();
                for v in &set.vectors {
                    text.push_str(&format_selcper_line(&name, v));
                    text.push('\n');
                }
                write_atomic(&out, text.as_bytes())?;
                self.store_key(&stage, &key)?;
                stats = Some(set.steps);
            }
            let vectors = read_selcper(&out)?;
            self.report.enumerate(&name, vectors.len(), stats, start.elapsed().as_secs_f64());
        }
        Ok(())
    }

    pub fn solve(&mut self) -> Result<()> {
        let solve_cfg = self.cfg.solve_config()?;
        fs::create_dir_all(self.path(SOLVE_DIR))?;
        for &label in &self.cfg.labels.clone() {
            let start = Instant::now();
            let name = format!("P{label}");
            let input = self.selcper_path(label);
            self.require(&input, "enumerate")?;
            let out = self.solve_path(label);
            let key = StageKey::new("solve").value(&solve_cfg).file(&input)?.finish();
            let stage = format!("solve-{name}");
            let vectors = read_selcper(&input)?;
            let fresh = !self.cached(&stage, &key, std::slice::from_ref(&out));
            if fresh {
                let outcomes = solve_all(&vectors, &solve_cfg);
                let mut text = Vec::new();
                for (v, o) in vectors.iter().zip(outcomes) {
                    let line = SolveLine {
                        polytope_id: name.clone(),
                        vector: v.to_string(),
                        outcome: o,
                    };
                    serde_json::to_writer(&mut text, &line)?;
                    text.push(b'\n');
                }
                write_atomic(&out, &text)?;
                self.store_key(&stage, &key)?;
            }
            let outcomes: Vec<SolveOutcome> = read_solve(&out)?.into_iter().map(|l| l.outcome).collect();
            let rounds = RoundCounts::tally(&outcomes, vectors.len() > solve_cfg.one_eq_threshold);
            self.report.solve(&name, rounds, fresh.then(|| start.elapsed().as_secs_f64()));
        }
        Ok(())
    }

    pub fn certify(&mut self) -> Result<()> {
        let start = Instant::now();
        let mut records: Vec<PolytopeRecord> = Vec::new();
        let mut per: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        for &label in &self.cfg.labels.clone() {
            let name = format!("P{label}");
            let input = self.solve_path(label);
            self.require(&input, "solve")?;
            let lines = read_solve(&input)?;
            let vectors: Vec<CoxeterVector> = lines
                .iter()
                .map(|l| CoxeterVector::parse(&l.vector).map_err(|e| anyhow!("{e}")))
                .collect::<Result<_>>()?;
            let outcomes: Vec<SolveOutcome> = lines.into_iter().map(|l| l.outcome).collect();
            let p = self.polytope(label)?;
            let recs = assemble_records(p, &vectors, &outcomes, self.cfg.digits).map_err(|e| anyhow!("{name}: {e}"))?;
            let compact = recs.iter().filter(|r| r.compact).count();
            per.insert(name, (compact, recs.len() - compact));
            records.extend(recs);
        }
        let mut jsonl = Vec::new();
        for r in &records {
            serde_json::to_writer(&mut jsonl, r)?;
            jsonl.push(b'\n');
        }
        write_atomic(&self.path(CENSUS_JSONL), &jsonl)?;
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["label", "index", "vector", "arithmetic", "cusps", "volume_pi2", "volume"])?;
        for r in &records {
            w.write_record([
                r.polytope_id.as_str(),
                &r.index.to_string(),
                &r.vector,
                &r.arithmetic.to_string(),
                &r.cusps.to_string(),
                &r.volume_pi2,
                &r.volume_decimal,
            ])?;
        }
        write_atomic(&self.path(CENSUS_CSV), &w.into_inner().map_err(|e| anyhow!("{e}"))?)?;
        self.report.certify(per, start.elapsed().as_secs_f64());
        Ok(())
    }

    pub fn records(&self) -> Result<Vec<PolytopeRecord>> {
        let path = self.path(CENSUS_JSONL);
        self.require(&path, "certify")?;
        let f = fs::File::open(&path)?;
        BufReader::new(f)
            .lines()
            .map(|l| Ok(serde_json::from_str(&l?)?))
            .collect()
    }

    pub fn save_report(&self) -> Result<()> {
        self.report.save(&self.path(crate::report::REPORT_FILE))
    }
}

pub fn read_selcper(path: &Path) -> Result<Vec<CoxeterVector>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            parse_selcper_line(l)
                .map(|(_, v)| v)
                .ok_or_else(|| anyhow!("{}: bad line {l:?}", path.display()))
        })
        .collect()
}

pub fn read_solve(path: &Path) -> Result<Vec<SolveLine>> {
    let f = fs::File::open(path).with_context(|| format!("reading {}", path.display()))?;
    BufReader::new(f)
        .lines()
        .map(|l| Ok(serde_json::from_str(&l?)?))
        .collect()
}

/// Writes through a temporary file so an interrupted run leaves no torn output.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}
