//! The full Bloch-Wigner style report for one ring.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::abgrp::{describe_factors, is_exact, tor1, AbHom, AbPresentation, ExactnessWitness};
use crate::error::Result;
use crate::int::Int;
use crate::rings::FiniteRing;

use super::milnor::{milnor_k_with_budget, sym_to_k2, Comparison, DEFAULT_SYMBOL_BUDGET};
use super::prebloch::{
    admissible_pairs, bloch_group, five_term_identity_in, lambda_map, pre_bloch, sym_square, unit_tensor_square,
};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub invariant_factors: Vec<Int>,
    pub description: String,
    pub ngens: usize,
    pub nrels: usize,
}

impl GroupSummary {
    pub fn of(g: &AbPresentation) -> Self {
        let f = g.invariant_factors();
        GroupSummary {
            description: describe_factors(&f),
            invariant_factors: f,
            ngens: g.ngens(),
            nrels: g.relations().nrows(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generators {
    /// `(name, order)` of the unit-group decomposition.
    pub units: Vec<(String, u64)>,
    pub admissible: Vec<String>,
    pub admissible_pairs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Groups {
    pub pre_bloch: GroupSummary,
    pub bloch: GroupSummary,
    pub sym_square: GroupSummary,
    pub k2m_symbolic: GroupSummary,
    pub k2m_cokernel: GroupSummary,
    pub tor_mu: GroupSummary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<ExactnessWitness>,
}

impl Certificate {
    fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Certificate {
            name: name.into(),
            pass,
            detail: detail.into(),
            witnesses: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BwReport {
    pub schema: u32,
    pub ring: String,
    pub table_hash: String,
    pub generators: Generators,
    pub groups: Groups,
    pub certificates: Vec<Certificate>,
    pub k2m_comparison: Comparison,
    /// Always the torsion subgroup of `R^x`, which is all of it here.
    pub mu_definition: String,
    /// Finite rings never have many units; theorem-level claims are not asserted.
    pub hypothesis_satisfied: bool,
}

impl BwReport {
    pub fn all_pass(&self) -> bool {
        self.certificates.iter().all(|c| c.pass)
    }
}

fn exactness(name: &str, f: &AbHom, g: &AbHom) -> Certificate {
    let cert = is_exact(f, g);
    let mut c = Certificate::new(name, cert.exact, if cert.exact { "im = ker" } else { "im != ker" });
    c.witnesses = cert.witnesses;
    c
}

pub fn bw_report(ring: &Arc<FiniteRing>) -> Result<BwReport> {
    bw_report_with_budget(ring, DEFAULT_SYMBOL_BUDGET)
}

pub fn bw_report_with_budget(ring: &Arc<FiniteRing>, symbol_budget: usize) -> Result<BwReport> {
    let pb = pre_bloch(ring);
    let sym = sym_square(ring);
    let lambda = lambda_map(&pb, &sym)?;
    let (bloch, inc) = bloch_group(&lambda);
    let k2 = milnor_k_with_budget(ring, 2, symbol_budget)?;
    let to_k2 = sym_to_k2(ring, sym.group(), &k2);
    let mu = ring.unit_group().presentation();
    let tor = tor1(mu, mu);

    let mut certs = vec![Certificate::new(
        "lambda_well_defined",
        true,
        "five-term rows map into the relation lattice",
    )];

    let t = unit_tensor_square(ring);
    let pairs = admissible_pairs(ring);
    let mut bad = None;
    for &(a, b) in &pairs {
        if !five_term_identity_in(ring, &t, a, b)? {
            bad = Some((a, b));
            break;
        }
    }
    certs.push(Certificate::new(
        "five_term_identity",
        bad.is_none(),
        match bad {
            None => format!("{} admissible pairs", pairs.len()),
            Some((a, b)) => format!("fails at ({}, {})", ring.name(a), ring.name(b)),
        },
    ));

    let wd = to_k2.check_well_defined() == crate::abgrp::WellDefined::Yes;
    certs.push(Certificate::new(
        "sym_to_k2_well_defined",
        wd,
        "a⊗b ↦ {a,b} on the symmetric quotient",
    ));
    certs.push(exactness("exact_at_pre_bloch", &inc, &lambda));
    if wd {
        certs.push(exactness("exact_at_sym_square", &lambda, &to_k2));
        certs.push(Certificate::new(
            "k2_surjective",
            to_k2.is_surjective(),
            "(R^x⊗R^x)_σ → K₂^M onto",
        ));
    }

    let comparison = k2.comparison.unwrap_or(Comparison::Budget);
    let ug = ring.unit_group();
    Ok(BwReport {
        schema: REPORT_SCHEMA,
        ring: ring.spec.to_string(),
        table_hash: ring.table_hash(),
        generators: Generators {
            units: ug
                .generators
                .iter()
                .map(|&(g, o)| (ring.name(g).to_string(), o))
                .collect(),
            admissible: pb.admissible.iter().map(|&a| ring.name(a).to_string()).collect(),
            admissible_pairs: pairs.len(),
        },
        groups: Groups {
            pre_bloch: GroupSummary::of(&pb.group),
            bloch: GroupSummary::of(&bloch),
            sym_square: GroupSummary::of(sym.group()),
            k2m_symbolic: GroupSummary::of(&k2.symbolic),
            k2m_cokernel: GroupSummary::of(k2.cokernel.as_ref().expect("n = 2 has a cokernel model")),
            tor_mu: GroupSummary::of(&tor),
        },
        certificates: certs,
        k2m_comparison: comparison,
        mu_definition: "torsion subgroup of R^x (all of R^x for a finite ring)".into(),
        // A finite ring has no n-tuple with all subfamily sums units once n
        // reaches |R| (pigeonhole on prefix sums), so the many-units hypothesis always fails.
        hypothesis_satisfied: false,
    })
}
