//! Run configurations, versioned reports and the content-addressed cache.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::abgrp::describe_factors;
use crate::bloch::{admissible, bw_report_with_budget, DEFAULT_SYMBOL_BUDGET};
use crate::error::{Error, Result};
use crate::homcalc::{gl2_order, BarHomology, GroupSpec};
use crate::rings::{ring, RingSpec};
use crate::suites::{run_suite, Outcome, Suite, SuiteConfig, Verdict};

pub const REPORT_SCHEMA: u32 = 1;
pub const TOOL: &str = concat!("blochlab ", env!("CARGO_PKG_VERSION"));

/// One unit of work in a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Job {
    Bloch {
        ring: String,
    },
    Verify {
        suite: Suite,
        target: String,
    },
    Homology {
        group: String,
        degree: usize,
        modulus: Option<u64>,
    },
    RingInfo {
        ring: String,
    },
}

impl Job {
    /// Parses every spec the job names without computing anything.
    pub fn validate(&self) -> Result<()> {
        match self {
            Job::Bloch { ring } | Job::RingInfo { ring } => RingSpec::parse(ring)?.validate(),
            Job::Verify { suite, target } => suite.validate_target(target),
            Job::Homology { group, modulus, .. } => {
                GroupSpec::parse(group)?;
                match modulus {
                    Some(m) if *m < 2 => Err(Error::InvalidSpec(format!("coefficients Z/{m}: need m ≥ 2"))),
                    _ => Ok(()),
                }
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Job::Bloch { ring } => format!("bloch {ring}"),
            Job::Verify { suite, target } => format!("verify {suite} {target}"),
            Job::Homology { group, degree, modulus } => match modulus {
                Some(m) => format!("homology {group} {degree} Z/{m}"),
                None => format!("homology {group} {degree}"),
            },
            Job::RingInfo { ring } => format!("ring {ring}"),
        }
    }

    pub fn run(&self, cfg: &SuiteConfig) -> Result<Outcome> {
        let out = match self {
            Job::Verify { suite, target } => return run_suite(*suite, target, cfg),
            Job::Bloch { ring: spec } => bloch(spec),
            Job::Homology { group, degree, modulus } => homology(group, *degree, *modulus, cfg),
            Job::RingInfo { ring: spec } => ring_info(spec),
        };
        out.or_else(Outcome::from_error)
    }
}

fn bloch(spec: &str) -> Result<Outcome> {
    let r = ring(spec)?;
    let rep = bw_report_with_budget(&r, DEFAULT_SYMBOL_BUDGET)?;
    let failed: Vec<&str> = rep
        .certificates
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.as_str())
        .collect();
    let summary = if failed.is_empty() {
        format!("pre-Bloch {}, all certificates pass", rep.groups.pre_bloch.description)
    } else {
        format!("failing certificates: {}", failed.join(", "))
    };
    let verdict = if rep.all_pass() { Verdict::Pass } else { Verdict::Fail };
    Ok(Outcome::new(
        verdict,
        summary,
        serde_json::to_value(&rep).expect("report serializes"),
    ))
}

fn homology(group: &str, degree: usize, modulus: Option<u64>, cfg: &SuiteConfig) -> Result<Outcome> {
    let g = std::sync::Arc::new(GroupSpec::parse(group)?.build()?);
    let mut h = BarHomology::with_budget(g, cfg.tuple_budget);
    h.integral_budget = cfg.solve_budget.min(cfg.tuple_budget);
    let hn = match modulus {
        None => h.homology(degree)?,
        Some(m) => h.homology_mod(degree, m)?,
    };
    let summary = format!(
        "{:?}",
        hn.invariant_factors.iter().map(|x| x.to_string()).collect::<Vec<_>>()
    )
    .replace('"', "");
    Ok(Outcome::new(
        Verdict::Pass,
        summary,
        serde_json::to_value(&hn).expect("homology serializes"),
    ))
}

fn ring_info(spec: &str) -> Result<Outcome> {
    let r = ring(spec)?;
    let orders: Vec<crate::Int> = r
        .unit_group()
        .generators
        .iter()
        .map(|&(_, o)| crate::Int::from(o as i64))
        .collect();
    let data = json!({
        "spec": r.spec.to_string(),
        "size": r.size(),
        "units": r.units().len(),
        "unit_group": describe_factors(&orders),
        "local": r.is_local(),
        "field": r.is_field(),
        "admissible": admissible(&r).len(),
        "gl2_order": if r.is_local() { Some(gl2_order(&r)) } else { None },
        "table_hash": r.table_hash(),
    });
    Ok(Outcome::new(
        Verdict::Pass,
        format!("{} elements, {} units", r.size(), r.units().len()),
        data,
    ))
}

/// Everything that determines a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub jobs: Vec<Job>,
    pub budgets: SuiteConfig,
}

impl RunConfig {
    pub fn new(jobs: Vec<Job>, budgets: SuiteConfig) -> Self {
        RunConfig { jobs, budgets }
    }

    /// SHA-256 of the tool version and the canonical JSON of the config.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(TOOL.as_bytes());
        h.update(serde_json::to_vec(self).expect("config serializes"));
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JobResult {
    pub job: Job,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub config_hash: String,
    pub config: RunConfig,
    pub verdict: Verdict,
    pub results: Vec<JobResult>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One row per job: label, verdict, summary.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["job", "verdict", "summary"]).expect("in-memory write");
        for r in &self.results {
            w.write_record([r.job.label(), r.outcome.verdict.to_string(), r.outcome.summary.clone()])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }
}

/// Validates the config, then runs the jobs in parallel and assembles the
/// results in job order.
pub fn run(config: &RunConfig) -> Result<Report> {
    for j in &config.jobs {
        j.validate()?;
    }
    let results = config
        .jobs
        .par_iter()
        .map(|job| {
            Ok(JobResult {
                job: job.clone(),
                outcome: job.run(&config.budgets)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report {
        schema: REPORT_SCHEMA,
        tool: TOOL.into(),
        config_hash: config.hash(),
        config: config.clone(),
        verdict: Verdict::combine(results.iter().map(|r| r.outcome.verdict)),
        results,
    })
}

/// How a cached run was served.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CacheOutcome {
    Disabled,
    Miss,
    /// Served from cache after recomputing the job at this index.
    Hit {
        revalidated: usize,
    },
    /// The recomputed job disagreed with the cache; everything was rerun.
    Stale {
        revalidated: usize,
    },
}

/// Reports stored as `<config hash>.json` under one directory.
pub struct Cache {
    dir: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CacheEntry {
    pub config_hash: String,
    pub tool: String,
    pub verdict: Verdict,
    pub jobs: Vec<String>,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, hash: &str) -> PathBuf {
        self.dir.join(format!("{hash}.json"))
    }

    pub fn load(&self, hash: &str) -> Result<Option<Report>> {
        let p = self.path(hash);
        if !p.exists() {
            return Ok(None);
        }
        let text = fs::read_to_string(&p)?;
        let rep: Report = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
        Ok((rep.schema == REPORT_SCHEMA && rep.config_hash == hash).then_some(rep))
    }

    /// Writes through a temporary file so readers never see partial reports.
    pub fn store(&self, rep: &Report) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!(".{}.tmp", rep.config_hash));
        fs::write(&tmp, rep.to_json())?;
        fs::rename(&tmp, self.path(&rep.config_hash))?;
        Ok(())
    }

    /// Cached reports, sorted by hash. Hashes that do not parse are skipped.
    pub fn entries(&self) -> Result<Vec<CacheEntry>> {
        if !self.dir.exists() {
            return Ok(Vec::new());
        }
        let mut hashes: Vec<String> = fs::read_dir(&self.dir)?
            .filter_map(|e| e.ok())
            .filter_map(|e| e.file_name().to_str()?.strip_suffix(".json").map(str::to_string))
            .collect();
        hashes.sort();
        let mut out = Vec::new();
        for h in hashes {
            if let Ok(Some(r)) = self.load(&h) {
                out.push(CacheEntry {
                    config_hash: h,
                    tool: r.tool,
                    verdict: r.verdict,
                    jobs: r.config.jobs.iter().map(Job::label).collect(),
                });
            }
        }
        Ok(out)
    }
}

/// Runs through the cache. A hit is served only after one seeded job has
/// been recomputed and found identical to its cached result.
pub fn run_cached(config: &RunConfig, cache: Option<&Cache>) -> Result<(Report, CacheOutcome)> {
    let Some(cache) = cache else {
        return Ok((run(config)?, CacheOutcome::Disabled));
    };
    let hash = config.hash();
    if let Some(rep) = cache.load(&hash)? {
        if rep.config == *config && !rep.results.is_empty() {
            let mut rng =
                ChaCha8Rng::seed_from_u64(config.budgets.seed ^ u64::from_str_radix(&hash[..16], 16).unwrap_or(0));
            let i = rng.gen_range(0..rep.results.len());
            let fresh = JobResult {
                job: rep.results[i].job.clone(),
                outcome: rep.results[i].job.run(&config.budgets)?,
            };
            if roundtrip(&fresh) == roundtrip(&rep.results[i]) {
                return Ok((rep, CacheOutcome::Hit { revalidated: i }));
            }
            let rep = run(config)?;
            cache.store(&rep)?;
            return Ok((rep, CacheOutcome::Stale { revalidated: i }));
        }
    }
    let rep = run(config)?;
    cache.store(&rep)?;
    Ok((rep, CacheOutcome::Miss))
}

/// Compares results in their serialized form, the form the cache holds.
fn roundtrip(r: &JobResult) -> Value {
    serde_json::from_str(&serde_json::to_string(r).expect("result serializes")).expect("result parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> RunConfig {
        RunConfig::new(
            vec![
                Job::Verify {
                    suite: Suite::Lemma11,
                    target: "gf:5".into(),
                },
                Job::Homology {
                    group: "cyclic:2".into(),
                    degree: 3,
                    modulus: None,
                },
                Job::RingInfo { ring: "zmod:9".into() },
            ],
            SuiteConfig::default(),
        )
    }

    #[test]
    fn reports_are_deterministic() {
        let c = small_config();
        let a = run(&c).unwrap();
        let b = run(&c).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.verdict, Verdict::Pass);
        assert_eq!(a.results[1].outcome.summary, "[2]");
        assert!(a.to_csv().starts_with("job,verdict,summary\n"));
        let back: Report = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(back.to_json(), a.to_json());
    }

    #[test]
    fn cache_hits_revalidate() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let c = small_config();
        let (a, o) = run_cached(&c, Some(&cache)).unwrap();
        assert_eq!(o, CacheOutcome::Miss);
        let (b, o) = run_cached(&c, Some(&cache)).unwrap();
        assert!(matches!(o, CacheOutcome::Hit { .. }));
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(cache.entries().unwrap().len(), 1);

        // A tampered entry is detected when its job is the one recomputed.
        let mut bad = a.clone();
        for r in &mut bad.results {
            r.outcome.summary.push('!');
        }
        cache.store(&bad).unwrap();
        let (c2, o) = run_cached(&c, Some(&cache)).unwrap();
        assert!(matches!(o, CacheOutcome::Stale { .. }));
        assert_eq!(c2.to_json(), a.to_json());
    }

    #[test]
    fn budget_and_parse_errors() {
        let c = RunConfig::new(
            vec![Job::Homology {
                group: "gl2:gf:4".into(),
                degree: 3,
                modulus: None,
            }],
            SuiteConfig::default(),
        );
        let r = run(&c).unwrap();
        assert_eq!(r.verdict, Verdict::Budget);
        assert!(r.results[0].outcome.summary.contains("180^4"));
        let bad = RunConfig::new(
            vec![Job::Bloch {
                ring: "gf:banana".into(),
            }],
            SuiteConfig::default(),
        );
        assert!(matches!(run(&bad), Err(Error::Parse(_))));
    }
}
