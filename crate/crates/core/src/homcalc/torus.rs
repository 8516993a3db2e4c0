//! Degree-three cycles on the diagonal torus: the classes `Φ(a⊗{b,c})` and
//! `a∪(b∧c)`, the two relations between them, and the reduced group `Ĥ₃`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::abgrp::describe_factors;
use crate::confcx::Mat2;
use crate::error::Result;
use crate::int::Int;
use crate::rings::{Elt, FiniteRing};

use super::chain::{c_cycle, BarChain};
use super::group::{FiniteGroup, MatrixGroup};
use super::homology::{BarHomology, BoundaryVerdict};
use super::section4::TorusContext;

/// `Φ(a⊗{b,c}) = c(diag(a,a), diag(b,1), diag(c,c⁻¹))`.
pub fn phi_chain(cx: &TorusContext, a: Elt, b: Elt, c: Elt) -> Result<BarChain> {
    let r = &cx.ring;
    c_cycle(
        &cx.torus,
        &[cx.element(a, a), cx.element(b, 1), cx.element(c, r.inv_unit(c))],
    )
}

/// `a∪(b∧c) = c(diag(a,1), diag(1,b), diag(1,c))`.
pub fn cup_chain(cx: &TorusContext, a: Elt, b: Elt, c: Elt) -> Result<BarChain> {
    c_cycle(&cx.torus, &[cx.element(a, 1), cx.element(1, b), cx.element(1, c)])
}

/// Image of `c(a,b,c) ∈ H₃(R^x)` under `x ↦ diag(x,1)`.
pub fn inc_chain(cx: &TorusContext, a: Elt, b: Elt, c: Elt) -> Result<BarChain> {
    c_cycle(&cx.torus, &[cx.element(a, 1), cx.element(b, 1), cx.element(c, 1)])
}

/// `Φ(a⊗{b,c})` against `inc c(a,b,c) - c∪(a∧b) + a∪(b∧c) + b∪(a∧c)`.
pub fn phi_expansion(cx: &TorusContext, a: Elt, b: Elt, c: Elt) -> Result<(BarChain, BarChain)> {
    let lhs = phi_chain(cx, a, b, c)?;
    let rhs = inc_chain(cx, a, b, c)?
        .minus(&cup_chain(cx, c, a, b)?)
        .plus(&cup_chain(cx, a, b, c)?)
        .plus(&cup_chain(cx, b, a, c)?);
    Ok((lhs, rhs))
}

/// `2 a∪(b∧c)` against `2 inc c(a,b,c) + Φ(b⊗{a,c}) - Φ(c⊗{a,b})`.
pub fn cup_doubling(cx: &TorusContext, a: Elt, b: Elt, c: Elt) -> Result<(BarChain, BarChain)> {
    let two = Int::from(2);
    let lhs = cup_chain(cx, a, b, c)?.scaled(&two);
    let rhs = inc_chain(cx, a, b, c)?
        .scaled(&two)
        .plus(&phi_chain(cx, b, a, c)?)
        .minus(&phi_chain(cx, c, a, b)?);
    Ok((lhs, rhs))
}

/// Status of one identity over all unit triples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TorusVerdict {
    /// Every case holds in `H₃(T)` with an integral witness, hence in `H₃(GL₂)`.
    Certified,
    /// Some case holds only with mod-p evidence.
    ModularOnly,
    /// Some case fails in `H₃(T)`; nothing follows for `GL₂`.
    InconclusiveAtGl2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusIdentityCheck {
    pub name: String,
    pub cases: usize,
    pub certified: usize,
    pub verdict: TorusVerdict,
    /// Triples `(a, b, c)` that fail in `H₃(T)`, at most ten.
    pub failures: Vec<[String; 3]>,
    /// Cell count of the largest integral witness.
    pub max_witness_cells: usize,
}

type Identity = fn(&TorusContext, Elt, Elt, Elt) -> Result<(BarChain, BarChain)>;

/// Both degree-three relations, each over every triple of units. Needs
/// `|T|^4` within `solve_budget`.
pub fn verify_torus_identities(
    ring: &Arc<FiniteRing>,
    tuple_budget: u64,
    solve_budget: u64,
) -> Result<Vec<TorusIdentityCheck>> {
    let cx = TorusContext::new(ring, false)?;
    let mut h = BarHomology::with_budget(cx.torus.clone(), tuple_budget);
    h.integral_budget = solve_budget.min(tuple_budget);
    // Only integral witnesses certify, so an unaffordable solve is a budget stop.
    h.check_budget(4, h.integral_budget)?;
    let units = ring.units().to_vec();
    let ids: [(&str, Identity); 2] = [("phi_expansion", phi_expansion), ("cup_doubling", cup_doubling)];
    let mut out = Vec::new();
    for (name, f) in ids {
        let mut check = TorusIdentityCheck {
            name: name.into(),
            cases: 0,
            certified: 0,
            verdict: TorusVerdict::Certified,
            failures: Vec::new(),
            max_witness_cells: 0,
        };
        for &a in &units {
            for &b in &units {
                for &c in &units {
                    let (lhs, rhs) = f(&cx, a, b, c)?;
                    let cert = h.class_equal(&lhs, &rhs)?;
                    check.cases += 1;
                    match cert.verdict {
                        BoundaryVerdict::Boundary => {
                            check.certified += 1;
                            let cells = cert.witness.as_ref().map_or(0, |w| w.len());
                            check.max_witness_cells = check.max_witness_cells.max(cells);
                        }
                        BoundaryVerdict::ModularOnly => {
                            if check.verdict == TorusVerdict::Certified {
                                check.verdict = TorusVerdict::ModularOnly;
                            }
                        }
                        BoundaryVerdict::NotBoundary | BoundaryVerdict::NotCycle => {
                            check.verdict = TorusVerdict::InconclusiveAtGl2;
                            if check.failures.len() < 10 {
                                check.failures.push([a, b, c].map(|x| ring.name(x).to_string()));
                            }
                        }
                    }
                }
            }
        }
        out.push(check);
    }
    Ok(out)
}

/// `Ĥ₃ = H₃(GL₂) / (inc H₃(R^x) + a∪(b∧c))`, with `inc(x) = diag(x,1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedH3 {
    pub ring: String,
    pub h3_gl2: Vec<Int>,
    pub h3_units: Vec<Int>,
    pub invariant_factors: Vec<Int>,
    pub description: String,
    pub image_generators: usize,
}

pub fn reduced_h3(ring: &Arc<FiniteRing>, tuple_budget: u64, solve_budget: u64) -> Result<ReducedH3> {
    let g = MatrixGroup::gl2(ring)?;
    let gl = Arc::new(g.group.clone());
    let mut hg = BarHomology::with_budget(gl.clone(), tuple_budget);
    hg.integral_budget = solve_budget.min(tuple_budget);
    let p3 = hg.chains_mod_boundaries(3)?;
    let h3 = hg.homology(3)?;

    let units = Arc::new(FiniteGroup::units(ring)?);
    let hu = BarHomology::new(units.clone());
    let pu = hu.chains_mod_boundaries(3)?;
    let unit_elt = ring.units().to_vec();
    let to_gl = |u: u32| {
        g.index_of(&Mat2::diag(unit_elt[u as usize], 1))
            .expect("diagonal is invertible")
    };
    let mut image: Vec<BarChain> = Vec::new();
    for (k, d) in pu.invariant_factors().iter().enumerate() {
        if d.is_zero() {
            continue;
        }
        let z = BarChain::from_dense(3, units.order(), &pu.lift(k));
        image.push(BarChain::from_terms(
            3,
            z.terms()
                .map(|(t, x)| (t.iter().map(|&u| to_gl(u)).collect(), x.clone())),
        ));
    }
    let gens: Vec<Elt> = ring.unit_group().generators.iter().map(|&(u, _)| u).collect();
    for &a in &gens {
        for &b in &gens {
            for &c in &gens {
                let cells = [Mat2::diag(a, 1), Mat2::diag(1, b), Mat2::diag(1, c)].map(|m| g.index_of(&m).unwrap());
                image.push(c_cycle(&gl, &cells)?);
            }
        }
    }
    let ord = gl.order();
    let q = p3.with_relations(image.iter().map(|z| z.to_row(ord)));
    let f = q.torsion_factors();
    Ok(ReducedH3 {
        ring: ring.spec.to_string(),
        h3_gl2: h3.invariant_factors,
        h3_units: hu.homology(3)?.invariant_factors,
        description: describe_factors(&f),
        invariant_factors: f,
        image_generators: image.len(),
    })
}
