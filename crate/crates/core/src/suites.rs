//! Named verification suites. Each suite runs on one target and yields a
//! verdict together with the certificate that supports it.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bloch::{admissible_pairs, five_term_identity_in, unit_tensor_square};
use crate::confcx::{complex_exactness, verify_pre_bloch_coinvariants, DEFAULT_FRAME_BUDGET};
use crate::error::{Error, Result};
use crate::homcalc::{
    abelian_types, exhaustive_commuting_checks, exterior_to_h2, gl2_order, random_commuting_checks, shuffle_checks,
    verify_degree_two, verify_delta3, verify_torus_identities, FiniteGroup, GroupSpec, IdentityTally, TorusVerdict,
    DEFAULT_INTEGRAL_BUDGET, DEFAULT_TUPLE_BUDGET,
};
use crate::rings::{ring, FiniteRing, ZOO};

/// Largest `|GL₂(R)|` accepted by the degree-two suite.
pub const MAX_SECTION4_GL2: u64 = 480;
pub const DEFAULT_MAX_TORUS: usize = 64;
pub const DEFAULT_SEED: u64 = 1;

/// Outcome of one check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
    Budget,
}

impl Verdict {
    /// Combines verdicts: any failure wins, then budget, then inconclusive.
    pub fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut out = Verdict::Pass;
        for v in verdicts {
            out = match (out, v) {
                (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
                (Verdict::Budget, _) | (_, Verdict::Budget) => Verdict::Budget,
                (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
                _ => Verdict::Pass,
            };
        }
        out
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail | Verdict::Inconclusive => 1,
            Verdict::Budget => 3,
        }
    }

    fn of(pass: bool) -> Verdict {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Budget => "budget",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Lemma11,
    Formula1,
    ComplexExact,
    Section4,
    Lemma35,
    Lemma53,
    Delta3,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Lemma11,
        Suite::Formula1,
        Suite::ComplexExact,
        Suite::Section4,
        Suite::Lemma35,
        Suite::Lemma53,
        Suite::Delta3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma11 => "lemma11",
            Suite::Formula1 => "formula1",
            Suite::ComplexExact => "complex-exact",
            Suite::Section4 => "section4",
            Suite::Lemma35 => "lemma35",
            Suite::Lemma53 => "lemma53",
            Suite::Delta3 => "delta3",
        }
    }

    /// Targets used when none is given on the command line.
    pub fn default_targets(self) -> Vec<String> {
        let v: &[&str] = match self {
            Suite::Lemma11 | Suite::Delta3 => ZOO,
            Suite::Formula1 | Suite::ComplexExact => &["gf:3", "gf:4", "gf:5"],
            Suite::Section4 | Suite::Lemma53 => &["gf:4", "gf:5"],
            Suite::Lemma35 => &["all"],
        };
        v.iter().map(|s| s.to_string()).collect()
    }

    /// Rejects targets the suite cannot interpret, before anything runs.
    pub fn validate_target(self, target: &str) -> Result<()> {
        match self {
            Suite::Lemma35 => lemma35_groups(target).map(|_| ()),
            _ => crate::rings::RingSpec::parse(target).and_then(|s| s.validate()),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
            Error::Parse(format!("unknown suite '{s}' (expected one of {})", names.join(", ")))
        })
    }
}

/// Budgets and seed shared by all suites.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    /// Cell limit for building chain groups.
    pub tuple_budget: u64,
    /// Cell limit for integral boundary solves.
    pub solve_budget: u64,
    pub max_torus: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            tuple_budget: DEFAULT_TUPLE_BUDGET,
            solve_budget: DEFAULT_INTEGRAL_BUDGET,
            max_torus: DEFAULT_MAX_TORUS,
            seed: DEFAULT_SEED,
        }
    }
}

/// A verdict, a one-line summary and the certificate data behind them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub verdict: Verdict,
    pub summary: String,
    pub certificate: Value,
}

impl Outcome {
    pub fn new(verdict: Verdict, summary: impl Into<String>, certificate: Value) -> Self {
        Outcome {
            verdict,
            summary: summary.into(),
            certificate,
        }
    }

    /// Maps recoverable errors to verdicts; parse errors stay errors.
    pub fn from_error(e: Error) -> Result<Outcome> {
        let verdict = match &e {
            Error::Parse(_) | Error::InvalidSpec(_) => return Err(e),
            Error::Budget { .. } => Verdict::Budget,
            Error::Precondition(_) | Error::Unsupported(_) => Verdict::Inconclusive,
            Error::Structural(_) | Error::Io(_) => Verdict::Fail,
        };
        Ok(Outcome::new(verdict, e.to_string(), Value::Null))
    }
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("certificate serializes")
}

pub fn run_suite(suite: Suite, target: &str, cfg: &SuiteConfig) -> Result<Outcome> {
    let run = || -> Result<Outcome> {
        match suite {
            Suite::Lemma35 => lemma35(target, cfg),
            _ => {
                let r = ring(target)?;
                match suite {
                    Suite::Lemma11 => lemma11(&r),
                    Suite::Formula1 => formula1(&r),
                    Suite::ComplexExact => complex_exact(&r),
                    Suite::Section4 => section4(&r),
                    Suite::Lemma53 => lemma53(&r, cfg),
                    Suite::Delta3 => delta3(&r),
                    Suite::Lemma35 => unreachable!(),
                }
            }
        }
    };
    run().or_else(Outcome::from_error)
}

fn lemma11(r: &Arc<FiniteRing>) -> Result<Outcome> {
    let t = unit_tensor_square(r);
    let pairs = admissible_pairs(r);
    let mut failures = Vec::new();
    for &(a, b) in &pairs {
        if !five_term_identity_in(r, &t, a, b)? {
            failures.push([r.name(a), r.name(b)]);
        }
    }
    let summary = if failures.is_empty() {
        format!("{} pairs, all hold", pairs.len())
    } else {
        format!("{} of {} pairs fail", failures.len(), pairs.len())
    };
    Ok(Outcome::new(
        Verdict::of(failures.is_empty()),
        summary,
        json!({ "pairs": pairs.len(), "failures": failures }),
    ))
}

fn formula1(r: &Arc<FiniteRing>) -> Result<Outcome> {
    let c = verify_pre_bloch_coinvariants(r, DEFAULT_FRAME_BUDGET)?;
    let summary = format!(
        "coinvariants {:?}, pre-Bloch {:?}, isomorphism {}",
        c.coinvariant_quotient, c.pre_bloch, c.isomorphism
    );
    Ok(Outcome::new(Verdict::of(c.pass), summary, to_json(&c)))
}

fn complex_exact(r: &Arc<FiniteRing>) -> Result<Outcome> {
    let degrees = complex_exactness(r, 3, DEFAULT_FRAME_BUDGET)?;
    let exact: Vec<usize> = degrees.iter().filter(|d| d.exact).map(|d| d.degree).collect();
    let pass = exact.len() == degrees.len();
    let summary = format!("exact in {} of {} degrees", exact.len(), degrees.len());
    Ok(Outcome::new(Verdict::of(pass), summary, to_json(&degrees)))
}

fn section4(r: &Arc<FiniteRing>) -> Result<Outcome> {
    let n = gl2_order(r);
    if n > MAX_SECTION4_GL2 {
        return Err(Error::budget(
            format!("GL_2({})", r.spec),
            format!("order {n}"),
            format!("order {MAX_SECTION4_GL2}"),
        ));
    }
    let checks = verify_degree_two(r, true)?;
    let failing: Vec<&str> = checks.iter().filter(|c| !c.pass()).map(|c| c.a.as_str()).collect();
    let summary = if failing.is_empty() {
        format!("{} values of a, all identities hold", checks.len())
    } else {
        format!("fails at a = {}", failing.join(", "))
    };
    Ok(Outcome::new(Verdict::of(failing.is_empty()), summary, to_json(&checks)))
}

fn delta3(r: &Arc<FiniteRing>) -> Result<Outcome> {
    let checks = verify_delta3(r)?;
    let pass = checks.iter().all(|c| c.pass());
    let summary = format!(
        "{} values of a, {} hold",
        checks.len(),
        checks.iter().filter(|c| c.pass()).count()
    );
    Ok(Outcome::new(Verdict::of(pass), summary, to_json(&checks)))
}

fn lemma53(r: &Arc<FiniteRing>, cfg: &SuiteConfig) -> Result<Outcome> {
    let t = r.units().len().pow(2);
    if t > cfg.max_torus {
        return Err(Error::budget(
            format!("torus of {}", r.spec),
            format!("order {t}"),
            format!("order {}", cfg.max_torus),
        ));
    }
    let checks = verify_torus_identities(r, cfg.tuple_budget, cfg.solve_budget)?;
    let verdict = Verdict::combine(checks.iter().map(|c| match c.verdict {
        TorusVerdict::Certified => Verdict::Pass,
        TorusVerdict::ModularOnly | TorusVerdict::InconclusiveAtGl2 => Verdict::Inconclusive,
    }));
    let parts: Vec<String> = checks
        .iter()
        .map(|c| format!("{}: {}/{} certified", c.name, c.certified, c.cases))
        .collect();
    Ok(Outcome::new(
        verdict,
        format!("torus order {t}; {}", parts.join("; ")),
        to_json(&checks),
    ))
}

/// Abelian groups named by a `lemma35` target, as invariant factors.
fn lemma35_groups(target: &str) -> Result<Vec<Vec<usize>>> {
    if target == "all" {
        return Ok(Vec::new());
    }
    match GroupSpec::parse(target)? {
        GroupSpec::Cyclic(n) => Ok(vec![vec![n]]),
        GroupSpec::Abelian(f) => Ok(vec![f]),
        _ => Err(Error::InvalidSpec(format!(
            "lemma35 needs 'all', cyclic:<n> or abelian:<a>x<b>.., got '{target}'"
        ))),
    }
}

fn tally_verdict(t: &IdentityTally) -> Verdict {
    if t.pass() {
        Verdict::Pass
    } else if t.certified + t.modular_only == t.cases {
        Verdict::Inconclusive
    } else {
        Verdict::Fail
    }
}

/// The `c`-cycle identities: multilinearity, the sign rule, shuffles and
/// `Λ²A ≅ H₂(A)`. The target `all` sweeps the standard ranges.
fn lemma35(target: &str, cfg: &SuiteConfig) -> Result<Outcome> {
    let named = lemma35_groups(target)?;
    let sweep = named.is_empty();
    let exterior_groups: Vec<Vec<usize>> = if sweep {
        (2..=16).flat_map(abelian_types).collect()
    } else {
        named.clone()
    };
    let exhaustive_groups: Vec<Vec<usize>> = if sweep {
        (2..=6).flat_map(abelian_types).collect()
    } else {
        named.clone()
    };

    let mut exterior = Vec::new();
    for f in &exterior_groups {
        exterior.push(exterior_to_h2(f)?);
    }
    let mut tallies = Vec::new();
    for f in &exhaustive_groups {
        let g = Arc::new(FiniteGroup::abelian(f));
        for n in 1..=3 {
            for mut t in exhaustive_commuting_checks(&g, n)? {
                t.name = format!("{} degree {n} on {}", t.name, g.label);
                tallies.push(t);
            }
        }
    }
    if sweep {
        for mut t in random_commuting_checks(100, 12, cfg.seed)? {
            t.name = format!("{} random", t.name);
            tallies.push(t);
        }
        let pairs = [
            (vec![2], vec![2]),
            (vec![2], vec![3]),
            (vec![3], vec![2]),
            (vec![4], vec![4]),
        ];
        tallies.push(shuffle_checks(&pairs)?);
    }
    let verdict = Verdict::combine(
        exterior
            .iter()
            .map(|e| Verdict::of(e.bijective))
            .chain(tallies.iter().map(tally_verdict)),
    );
    let cases: usize = tallies.iter().map(|t| t.cases).sum();
    let summary = format!(
        "{} exterior comparisons, {} bijective; {} boundary cases, {} certified",
        exterior.len(),
        exterior.iter().filter(|e| e.bijective).count(),
        cases,
        tallies.iter().map(|t| t.certified).sum::<usize>()
    );
    Ok(Outcome::new(
        verdict,
        summary,
        json!({ "exterior": exterior, "identities": tallies }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(serde_json::to_value(s).unwrap(), json!(s.name()));
        }
        assert!("lemma12".parse::<Suite>().is_err());
    }

    #[test]
    fn verdicts_combine_by_severity() {
        use Verdict::*;
        assert_eq!(Verdict::combine([]), Pass);
        assert_eq!(Verdict::combine([Pass, Inconclusive, Budget]), Budget);
        assert_eq!(Verdict::combine([Budget, Fail]), Fail);
        assert_eq!(Budget.exit_code(), 3);
    }

    #[test]
    fn small_suites() {
        let cfg = SuiteConfig::default();
        let o = run_suite(Suite::Lemma11, "gf:5", &cfg).unwrap();
        assert_eq!(o.verdict, Verdict::Pass);
        assert_eq!(o.certificate["pairs"], json!(6));
        assert_eq!(
            run_suite(Suite::Delta3, "zmod:25", &cfg).unwrap().verdict,
            Verdict::Pass
        );
        let o = run_suite(Suite::Section4, "gf:4", &cfg).unwrap();
        assert_eq!(o.verdict, Verdict::Pass, "{o:?}");
        assert_eq!(o.certificate.as_array().unwrap().len(), 2);
        assert_eq!(
            run_suite(Suite::Lemma35, "abelian:2x2", &cfg).unwrap().verdict,
            Verdict::Pass
        );
    }

    #[test]
    fn gates_and_errors() {
        let cfg = SuiteConfig {
            max_torus: 16,
            ..SuiteConfig::default()
        };
        assert_eq!(
            run_suite(Suite::Lemma53, "gf:7", &cfg).unwrap().verdict,
            Verdict::Budget
        );
        assert_eq!(
            run_suite(Suite::Section4, "gf:7", &cfg).unwrap().verdict,
            Verdict::Budget
        );
        assert!(matches!(
            run_suite(Suite::Lemma11, "gf:banana", &cfg),
            Err(Error::Parse(_))
        ));
        assert!(Suite::Lemma35.validate_target("gl2:gf:2").is_err());
        assert!(Suite::Lemma11.validate_target("gf:6").is_err());
    }
}
