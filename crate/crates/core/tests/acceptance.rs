//! End-to-end acceptance run. Prints one line per criterion and exits
//! non-zero if any criterion fails or overruns its time limit.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use blochlab::abgrp::{tensor, tor1, AbPresentation};
use blochlab::bloch::{bw_report, Comparison};
use blochlab::confcx::{complex_exactness, verify_pre_bloch_coinvariants, DEFAULT_FRAME_BUDGET};
use blochlab::homcalc::{
    abelian_types, cyclic_homology_periodic, exhaustive_commuting_checks, exterior_to_h2, random_commuting_checks,
    shuffle_checks, verify_degree_two, verify_delta3, verify_torus_identities, BarHomology, FiniteGroup, GroupSpec,
    TorusVerdict, DEFAULT_INTEGRAL_BUDGET, DEFAULT_TUPLE_BUDGET,
};
use blochlab::report::{run, Job, RunConfig};
use blochlab::rings::{ring, ZOO};
use blochlab::suites::{run_suite, Suite, SuiteConfig, Verdict};
use blochlab::{Int, Result};

type Check = fn() -> Result<std::result::Result<String, String>>;

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

fn ok_if(pass: bool, detail: String) -> Result<std::result::Result<String, String>> {
    Ok(if pass { Ok(detail) } else { Err(detail) })
}

fn five_term_on_zoo() -> Result<std::result::Result<String, String>> {
    let cfg = SuiteConfig::default();
    let mut pairs = 0;
    let mut bad = Vec::new();
    for s in ZOO {
        let o = run_suite(Suite::Lemma11, s, &cfg)?;
        pairs += o.certificate["pairs"].as_u64().unwrap_or(0);
        if o.verdict != Verdict::Pass {
            bad.push(*s);
        }
    }
    ok_if(
        bad.is_empty(),
        format!("{pairs} admissible pairs over {} rings; failing {bad:?}", ZOO.len()),
    )
}

fn bloch_exactness_on_zoo() -> Result<std::result::Result<String, String>> {
    let mut bad = Vec::new();
    for s in ZOO {
        let rep = bw_report(&ring(s)?)?;
        let exact = rep
            .certificates
            .iter()
            .filter(|c| c.name.starts_with("exact_at") || c.name == "k2_surjective")
            .collect::<Vec<_>>();
        if exact.len() != 3 || !exact.iter().all(|c| c.pass) {
            bad.push(*s);
        }
    }
    ok_if(
        bad.is_empty(),
        format!("three exactness certificates per ring; failing {bad:?}"),
    )
}

fn milnor_models_agree() -> Result<std::result::Result<String, String>> {
    let mut bad = Vec::new();
    for q in [4, 5, 7, 8, 9, 11, 13] {
        let rep = bw_report(&ring(&format!("gf:{q}"))?)?;
        let trivial = rep.groups.k2m_symbolic.invariant_factors.is_empty()
            && rep.groups.k2m_cokernel.invariant_factors.is_empty();
        if rep.k2m_comparison != Comparison::Iso || !trivial {
            bad.push(q);
        }
    }
    ok_if(
        bad.is_empty(),
        format!("symbolic ≅ cokernel = 0 for 7 fields; failing q in {bad:?}"),
    )
}

/// Pre-Bloch group of `Z/n` by direct enumeration, valid when no admissible
/// pair exists: free on the admissible elements.
fn enumerated_pre_bloch_rank(n: i64) -> Option<usize> {
    let unit = |x: i64| num_integer::gcd(x.rem_euclid(n), n) == 1;
    let adm: Vec<i64> = (0..n).filter(|&a| unit(a) && unit(1 - a)).collect();
    let pairs = adm
        .iter()
        .flat_map(|&a| adm.iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| unit(a - b))
        .count();
    (pairs == 0).then_some(adm.len())
}

fn degenerate_pre_bloch() -> Result<std::result::Result<String, String>> {
    let mut lines = Vec::new();
    let mut pass = true;
    for (spec, n) in [("zmod:8", 8), ("gf:3", 3), ("zmod:9", 9)] {
        let got = bw_report(&ring(spec)?)?.groups.pre_bloch.invariant_factors;
        let oracle = enumerated_pre_bloch_rank(n).map(|k| vec![Int::ZERO; k]);
        pass &= oracle.as_ref() == Some(&got);
        lines.push(format!("{spec} {got:?}"));
    }
    ok_if(pass, lines.join(", "))
}

fn exterior_square_iso() -> Result<std::result::Result<String, String>> {
    let types: Vec<Vec<usize>> = (2..=16).flat_map(abelian_types).collect();
    let mut bad = Vec::new();
    for f in &types {
        if !exterior_to_h2(f)?.bijective {
            bad.push(f.clone());
        }
    }
    ok_if(
        bad.is_empty(),
        format!("{} isomorphism types; failing {bad:?}", types.len()),
    )
}

fn commuting_cycle_identities() -> Result<std::result::Result<String, String>> {
    let mut tallies = Vec::new();
    for f in (2..=6).flat_map(abelian_types) {
        let g = Arc::new(FiniteGroup::abelian(&f));
        for n in 1..=3 {
            tallies.extend(exhaustive_commuting_checks(&g, n)?);
        }
    }
    tallies.extend(random_commuting_checks(100, 12, 1)?);
    tallies.push(shuffle_checks(&[
        (vec![2], vec![2]),
        (vec![2], vec![3]),
        (vec![4], vec![4]),
    ])?);
    let cases: usize = tallies.iter().map(|t| t.cases).sum();
    let failed: usize = tallies.iter().map(|t| t.cases - t.certified).sum();
    ok_if(
        failed == 0,
        format!("{cases} boundary certificates, {failed} uncertified"),
    )
}

fn degree_two_chain_identities() -> Result<std::result::Result<String, String>> {
    let mut n = 0;
    let mut bad = Vec::new();
    for s in ["gf:4", "gf:5"] {
        for c in verify_degree_two(&ring(s)?, true)? {
            n += 1;
            if !(c.pass() && c.exterior_class == Some(true)) {
                bad.push(format!("{s} a={}", c.a));
            }
        }
    }
    ok_if(bad.is_empty(), format!("{n} values of a; failing {bad:?}"))
}

fn delta3_on_zoo() -> Result<std::result::Result<String, String>> {
    let mut n = 0;
    let mut bad = Vec::new();
    for s in ZOO {
        for c in verify_delta3(&ring(s)?)? {
            n += 1;
            if !c.pass() {
                bad.push(format!("{s} a={}", c.a));
            }
        }
    }
    ok_if(bad.is_empty(), format!("{n} values of a over the zoo; failing {bad:?}"))
}

fn configuration_complex() -> Result<std::result::Result<String, String>> {
    let mut bad = Vec::new();
    for s in ["gf:3", "gf:4", "gf:5"] {
        let r = ring(s)?;
        let f = verify_pre_bloch_coinvariants(&r, DEFAULT_FRAME_BUDGET)?;
        let e = complex_exactness(&r, 3, DEFAULT_FRAME_BUDGET)?;
        if !f.pass || !e.iter().all(|d| d.exact) {
            bad.push(s);
        }
    }
    ok_if(
        bad.is_empty(),
        format!("coinvariants and exactness in degrees ≤ 3; failing {bad:?}"),
    )
}

fn torus_degree_three_identities() -> Result<std::result::Result<String, String>> {
    let mut lines = Vec::new();
    let mut pass = true;
    for s in ["gf:4", "gf:5"] {
        for c in verify_torus_identities(&ring(s)?, DEFAULT_TUPLE_BUDGET, DEFAULT_INTEGRAL_BUDGET)? {
            pass &= c.verdict == TorusVerdict::Certified && c.certified == c.cases && c.max_witness_cells > 0;
            lines.push(format!("{s} {} {}/{}", c.name, c.certified, c.cases));
        }
    }
    ok_if(pass, lines.join(", "))
}

fn homology_oracles() -> Result<std::result::Result<String, String>> {
    let mut bad = Vec::new();
    for m in 2..=12u64 {
        let h = BarHomology::new(Arc::new(FiniteGroup::cyclic(m as usize)));
        for n in 0..=3 {
            if h.homology(n)?.invariant_factors != cyclic_homology_periodic(m, n) {
                bad.push(format!("Z/{m} H{n}"));
            }
        }
    }
    let g = Arc::new(GroupSpec::parse("gl2:gf:2")?.build()?);
    let h = BarHomology::new(g);
    let h3 = h.homology(3)?;
    let h2 = h.homology(2)?.presentation();
    if h3.invariant_factors != ints(&[6]) {
        bad.push("GL2(F2) H3".into());
    }
    for p in [2i64, 3] {
        let zp = AbPresentation::cyclic(p);
        let expected = &tensor(&Arc::new(h3.presentation()), &Arc::new(zp.clone()))
            .group
            .order()
            .unwrap()
            * &tor1(&h2, &zp).order().unwrap();
        if h.homology_mod(3, p as u64)?.order() != Some(expected) {
            bad.push(format!("GL2(F2) H3 mod {p}"));
        }
    }
    ok_if(
        bad.is_empty(),
        format!("cyclic m ≤ 12 in degrees ≤ 3, GL2(F2) with two coefficient checks; failing {bad:?}"),
    )
}

fn full_suite_determinism() -> Result<std::result::Result<String, String>> {
    let jobs: Vec<Job> = Suite::ALL
        .iter()
        .flat_map(|&s| {
            s.default_targets()
                .into_iter()
                .map(move |target| Job::Verify { suite: s, target })
        })
        .collect();
    let config = RunConfig::new(jobs, SuiteConfig::default());
    let a = run(&config)?.to_json();
    let b = run(&config)?.to_json();
    ok_if(
        a == b,
        format!("two full runs, {} bytes each, config {}", a.len(), &config.hash()[..12]),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Check, u64); 12] = [
        (
            "five-term identity on every admissible pair of the zoo",
            five_term_on_zoo,
            10,
        ),
        (
            "exactness of the Bloch-Wigner sequence on the zoo",
            bloch_exactness_on_zoo,
            30,
        ),
        (
            "symbolic and cokernel Milnor K2 agree and vanish on fields",
            milnor_models_agree,
            60,
        ),
        ("degenerate pre-Bloch groups match enumeration", degenerate_pre_bloch, 5),
        (
            "exterior square maps onto H2 for abelian groups of order ≤ 16",
            exterior_square_iso,
            300,
        ),
        (
            "commuting-cycle identities certified as boundaries",
            commuting_cycle_identities,
            600,
        ),
        (
            "degree-two chain identities over gf:4 and gf:5",
            degree_two_chain_identities,
            300,
        ),
        ("delta-three boundary identity on the zoo", delta3_on_zoo, 10),
        (
            "configuration complex coinvariants and exactness",
            configuration_complex,
            300,
        ),
        (
            "torus degree-three identities with integral witnesses",
            torus_degree_three_identities,
            900,
        ),
        ("bar homology agrees with independent oracles", homology_oracles, 600),
        ("byte-identical reports across runs", full_suite_determinism, 1200),
    ];
    let mut failures = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = check();
        let dt = t.elapsed();
        let in_time = dt <= Duration::from_secs(*limit);
        let (pass, detail) = match result {
            Ok(Ok(d)) => (in_time, d),
            Ok(Err(d)) => (false, d),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "[{}] {:>2}/12 {name}: {detail} ({:.2} s, limit {limit} s)",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            dt.as_secs_f64()
        );
    }
    println!("{} of 12 criteria pass", 12 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
