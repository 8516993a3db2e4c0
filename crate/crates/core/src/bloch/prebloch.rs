//! The pre-Bloch group, the map λ and the Bloch group.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::abgrp::matrix::{row_from_dense, row_from_pairs};
use crate::abgrp::{kernel, sym_quotient, tensor, AbHom, AbPresentation, Bilinear, SparseRow, WellDefined};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::rings::{Elt, FiniteRing};

/// `a` with both `a` and `1 - a` units, in index order.
pub fn admissible(ring: &FiniteRing) -> Vec<Elt> {
    ring.units()
        .iter()
        .copied()
        .filter(|&a| ring.is_unit(ring.one_minus(a)))
        .collect()
}

/// A formal combination of symbols `[a]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QElement {
    pub terms: BTreeMap<Elt, i64>,
}

impl QElement {
    pub fn add_symbol(&mut self, a: Elt, c: i64) {
        let e = self.terms.entry(a).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&a);
        }
    }

    pub fn support(&self) -> impl Iterator<Item = Elt> + '_ {
        self.terms.keys().copied()
    }

    pub fn render(&self, ring: &FiniteRing) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(a, c)| format!("{c:+}[{}]", ring.name(*a)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// The five arguments `a, b, b/a, (1-a^-1)/(1-b^-1), (1-a)/(1-b)` with signs.
pub fn five_term_args(ring: &FiniteRing, a: Elt, b: Elt) -> Result<[(Elt, i64); 5]> {
    for (what, x) in [
        ("a", a),
        ("1-a", ring.one_minus(a)),
        ("b", b),
        ("1-b", ring.one_minus(b)),
        ("a-b", ring.sub(a, b)),
    ] {
        if !ring.is_unit(x) {
            return Err(Error::Precondition(format!(
                "{what} = {} is not a unit (a = {}, b = {})",
                ring.name(x),
                ring.name(a),
                ring.name(b)
            )));
        }
    }
    let ai = ring.inv_unit(a);
    let bi = ring.inv_unit(b);
    let args = [
        (a, 1),
        (b, -1),
        (ring.mul(b, ai), 1),
        (ring.div(ring.one_minus(ai), ring.one_minus(bi)), -1),
        (ring.div(ring.one_minus(a), ring.one_minus(b)), 1),
    ];
    for (x, _) in &args {
        assert!(
            ring.is_unit(*x) && ring.is_unit(ring.one_minus(*x)),
            "five-term argument {} is not admissible",
            ring.name(*x)
        );
    }
    Ok(args)
}

/// `[a] - [b] + [b/a] - [(1-a^-1)/(1-b^-1)] + [(1-a)/(1-b)]`.
pub fn five_term(ring: &FiniteRing, a: Elt, b: Elt) -> Result<QElement> {
    let mut q = QElement::default();
    for (x, c) in five_term_args(ring, a, b)? {
        q.add_symbol(x, c);
    }
    Ok(q)
}

/// Ordered pairs satisfying the five-term hypotheses.
pub fn admissible_pairs(ring: &FiniteRing) -> Vec<(Elt, Elt)> {
    let adm = admissible(ring);
    let mut out = Vec::new();
    for &a in &adm {
        for &b in &adm {
            if ring.is_unit(ring.sub(a, b)) {
                out.push((a, b));
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct PreBloch {
    pub ring: Arc<FiniteRing>,
    pub admissible: Vec<Elt>,
    index: Vec<Option<u32>>,
    pub group: Arc<AbPresentation>,
}

impl PreBloch {
    pub fn gen_of(&self, a: Elt) -> Option<usize> {
        self.index[a as usize].map(|i| i as usize)
    }

    pub fn vector(&self, q: &QElement) -> Vec<Int> {
        let mut v = vec![Int::ZERO; self.admissible.len()];
        for (a, c) in &q.terms {
            let g = self.gen_of(*a).expect("symbol outside the admissible set");
            v[g] += &Int::from(*c);
        }
        v
    }
}

/// Admissible generators modulo all five-term relations, deduplicated.
pub fn pre_bloch(ring: &Arc<FiniteRing>) -> PreBloch {
    pre_bloch_ordered(ring, &admissible(ring))
}

/// As [`pre_bloch`] with the generators enumerated in the given order.
pub fn pre_bloch_ordered(ring: &Arc<FiniteRing>, order: &[Elt]) -> PreBloch {
    let mut index = vec![None; ring.size()];
    for (i, &a) in order.iter().enumerate() {
        index[a as usize] = Some(i as u32);
    }
    let mut rows: Vec<SparseRow> = admissible_pairs(ring)
        .into_iter()
        .map(|(a, b)| {
            let args = five_term_args(ring, a, b).expect("pair is admissible");
            row_from_pairs(
                args.iter()
                    .map(|(x, c)| (index[*x as usize].unwrap(), Int::from(*c)))
                    .collect(),
            )
        })
        .filter(|r| !r.is_empty())
        .collect();
    rows.sort();
    rows.dedup();
    PreBloch {
        ring: ring.clone(),
        admissible: order.to_vec(),
        index,
        group: Arc::new(AbPresentation::from_rows(order.len(), rows)),
    }
}

/// Vector of a unit on the unit-group generators.
pub fn unit_vec(ring: &FiniteRing, u: Elt) -> Vec<Int> {
    ring.unit_group().vector(u)
}

/// The unit with exponent vector `v` (entries reduced mod the orders).
pub fn unit_from_vec(ring: &FiniteRing, v: &[Int]) -> Elt {
    let ug = ring.unit_group();
    let exps: Vec<u64> = v
        .iter()
        .zip(&ug.generators)
        .map(|(x, g)| x.rem_euclid(&Int::from(g.1)).to_i64().unwrap() as u64)
        .collect();
    ug.element(ring, &exps)
}

/// The unit represented by canonical generator `i` of `R^x`.
pub fn canonical_unit(ring: &FiniteRing, i: usize) -> Elt {
    unit_from_vec(ring, &ring.unit_group().presentation().lift(i))
}

/// `(R^x ⊗ R^x)_σ` with access to the classes `a ⊗ b`.
#[derive(Debug, Clone)]
pub struct SymSquare {
    pub ring: Arc<FiniteRing>,
    pub pairing: Bilinear,
}

impl SymSquare {
    pub fn group(&self) -> &Arc<AbPresentation> {
        &self.pairing.group
    }

    pub fn class(&self, a: Elt, b: Elt) -> Vec<Int> {
        self.pairing.pair(&unit_vec(&self.ring, a), &unit_vec(&self.ring, b))
    }
}

pub fn sym_square(ring: &Arc<FiniteRing>) -> SymSquare {
    SymSquare {
        ring: ring.clone(),
        pairing: sym_quotient(ring.unit_group().presentation()),
    }
}

/// `R^x ⊗ R^x`.
pub fn unit_tensor_square(ring: &FiniteRing) -> Bilinear {
    let u = ring.unit_group().presentation();
    tensor(u, u)
}

/// λ: [a] ↦ a ⊗ (1 - a), with its well-definedness certified.
pub fn lambda_map(pb: &PreBloch, sym: &SymSquare) -> Result<AbHom> {
    let ring = &pb.ring;
    let images = pb
        .admissible
        .iter()
        .map(|&a| row_from_dense(&sym.class(a, ring.one_minus(a))))
        .collect();
    let f = AbHom::new(pb.group.clone(), sym.group().clone(), images);
    match f.check_well_defined() {
        WellDefined::Yes => Ok(f),
        WellDefined::No(i) => Err(Error::Structural(format!(
            "λ is not well defined: relation {i} has nonzero image"
        ))),
    }
}

/// Whether λ′ of the five-term element equals `a⊗c + c⊗a`, `c = (1-a)/(1-b)`,
/// exactly in `R^x ⊗ R^x`.
pub fn five_term_identity(ring: &FiniteRing, a: Elt, b: Elt) -> Result<bool> {
    let t = unit_tensor_square(ring);
    five_term_identity_in(ring, &t, a, b)
}

pub fn five_term_identity_in(ring: &FiniteRing, t: &Bilinear, a: Elt, b: Elt) -> Result<bool> {
    let args = five_term_args(ring, a, b)?;
    let uv = |x: Elt| unit_vec(ring, x);
    let mut lhs = vec![Int::ZERO; t.group.ngens()];
    for (x, c) in args {
        let v = t.pair(&uv(x), &uv(ring.one_minus(x)));
        for (l, y) in lhs.iter_mut().zip(v) {
            *l += &(&Int::from(c) * &y);
        }
    }
    let c = ring.div(ring.one_minus(a), ring.one_minus(b));
    let mut rhs = t.pair(&uv(a), &uv(c));
    for (r, y) in rhs.iter_mut().zip(t.pair(&uv(c), &uv(a))) {
        *r += &y;
    }
    Ok(t.group.coords(&lhs) == t.group.coords(&rhs))
}

/// `B(R) = ker λ` with its inclusion into `𝔭(R)`.
pub fn bloch_group(lambda: &AbHom) -> (Arc<AbPresentation>, AbHom) {
    kernel(lambda)
}
