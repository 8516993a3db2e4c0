//! Milnor K-groups by symbols and the tensor-cokernel model of K₂.

use std::sync::Arc;

use crate::abgrp::matrix::{row_from_dense, row_from_pairs};
use crate::abgrp::{AbHom, AbPresentation, Bilinear, SparseRow, WellDefined};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::rings::{Elt, FiniteRing};

use super::prebloch::{admissible, canonical_unit, unit_tensor_square, unit_vec};

/// Default limit on the number of symbol generators `|R^x|^n`.
pub const DEFAULT_SYMBOL_BUDGET: usize = 1 << 16;

/// Three-valued outcome of comparing the two models of K₂.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Iso,
    NotIso,
    Budget,
}

/// Symbols `{a_1, .., a_n}` on units, indexed in mixed radix over the unit list.
#[derive(Debug, Clone)]
pub struct SymbolIndex {
    units: Vec<Elt>,
    pos: Vec<u32>,
    pub n: usize,
}

impl SymbolIndex {
    pub fn new(ring: &FiniteRing, n: usize) -> Self {
        let units = ring.units().to_vec();
        let mut pos = vec![u32::MAX; ring.size()];
        for (i, &u) in units.iter().enumerate() {
            pos[u as usize] = i as u32;
        }
        SymbolIndex { units, pos, n }
    }

    pub fn count(&self) -> usize {
        self.units.len().pow(self.n as u32)
    }

    pub fn index(&self, syms: &[Elt]) -> usize {
        syms.iter()
            .fold(0, |acc, &u| acc * self.units.len() + self.pos[u as usize] as usize)
    }

    pub fn symbols(&self, mut idx: usize) -> Vec<Elt> {
        let k = self.units.len();
        let mut out = vec![0; self.n];
        for slot in out.iter_mut().rev() {
            *slot = self.units[idx % k];
            idx /= k;
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct MilnorK {
    pub n: usize,
    pub symbols: SymbolIndex,
    pub symbolic: Arc<AbPresentation>,
    /// For `n = 2`: `R^x ⊗ R^x / <a ⊗ (1-a)>`.
    pub cokernel: Option<Arc<AbPresentation>>,
    /// For `n = 2`: the map `a ⊗ b ↦ {a, b}` from the cokernel model.
    pub comparison_map: Option<AbHom>,
    pub comparison: Option<Comparison>,
}

impl MilnorK {
    pub fn symbol(&self, syms: &[Elt]) -> Vec<Int> {
        let mut v = vec![Int::ZERO; self.symbolic.ngens()];
        v[self.symbols.index(syms)] = Int::ONE;
        v
    }
}

/// Symbolic presentation: multilinearity in each slot plus
/// `{.., a_i, .., a_j, ..} = 0` whenever `a_i + a_j ∈ {0, 1}`.
pub fn milnor_symbolic(ring: &FiniteRing, n: usize, budget: usize) -> Result<(SymbolIndex, AbPresentation)> {
    if !(1..=3).contains(&n) {
        return Err(Error::Unsupported(format!("K_{n}^M is only built for n in 1..=3")));
    }
    let idx = SymbolIndex::new(ring, n);
    let count = idx.count();
    if count > budget {
        return Err(Error::budget(
            format!("K_{n}^M symbols"),
            format!("{count} generators"),
            format!("{budget} generators"),
        ));
    }
    let gens: Vec<Elt> = ring.unit_group().generators.iter().map(|g| g.0).collect();
    let mut rows: Vec<SparseRow> = Vec::new();
    // Multilinearity against generators suffices: every unit is a word in them.
    for t in 0..count {
        let syms = idx.symbols(t);
        for slot in 0..n {
            for &g in &gens {
                let mut prod = syms.clone();
                prod[slot] = ring.mul(syms[slot], g);
                let mut single = syms.clone();
                single[slot] = g;
                let r = row_from_pairs(vec![
                    (idx.index(&prod) as u32, Int::ONE),
                    (t as u32, Int::from(-1)),
                    (idx.index(&single) as u32, Int::from(-1)),
                ]);
                if !r.is_empty() {
                    rows.push(r);
                }
            }
        }
        let vanishes = (0..n).any(|i| {
            (i + 1..n).any(|j| {
                let s = ring.add(syms[i], syms[j]);
                s == 0 || s == 1
            })
        });
        if vanishes {
            rows.push(vec![(t as u32, Int::ONE)]);
        }
    }
    rows.sort();
    rows.dedup();
    Ok((idx, AbPresentation::from_rows(count, rows)))
}

/// `R^x ⊗ R^x / <a ⊗ (1 - a)>` together with the pairing on the tensor square.
pub fn k2_cokernel(ring: &FiniteRing) -> (Bilinear, Arc<AbPresentation>) {
    let t = unit_tensor_square(ring);
    let extra: Vec<SparseRow> = admissible(ring)
        .into_iter()
        .map(|a| row_from_dense(&t.pair(&unit_vec(ring, a), &unit_vec(ring, ring.one_minus(a)))))
        .collect();
    let q = Arc::new(t.group.with_relations(extra));
    (t, q)
}

/// Map from a group generated by canonical pairs `[i, j]` of `R^x` to the
/// symbolic K₂: `[i, j] ↦ {u_i, u_j}`.
pub fn pairs_to_symbols(ring: &FiniteRing, source: Arc<AbPresentation>, k2: &MilnorK) -> AbHom {
    let k = ring.unit_group().presentation().rank_canonical();
    assert_eq!(source.ngens(), k * k, "source must be generated by canonical pairs");
    let reps: Vec<Elt> = (0..k).map(|i| canonical_unit(ring, i)).collect();
    let images = (0..k * k)
        .map(|g| {
            let (i, j) = (g / k, g % k);
            vec![(k2.symbols.index(&[reps[i], reps[j]]) as u32, Int::ONE)]
        })
        .collect();
    AbHom::new(source, k2.symbolic.clone(), images)
}

pub fn milnor_k(ring: &FiniteRing, n: usize) -> Result<MilnorK> {
    milnor_k_with_budget(ring, n, DEFAULT_SYMBOL_BUDGET)
}

pub fn milnor_k_with_budget(ring: &FiniteRing, n: usize, budget: usize) -> Result<MilnorK> {
    let (symbols, symbolic) = milnor_symbolic(ring, n, budget)?;
    let mut out = MilnorK {
        n,
        symbols,
        symbolic: Arc::new(symbolic),
        cokernel: None,
        comparison_map: None,
        comparison: None,
    };
    if n == 2 {
        let (_, q) = k2_cokernel(ring);
        // a ⊗ b ↦ {a, b} is always defined on the cokernel model; the two
        // models agree iff it is bijective.
        let map = pairs_to_symbols(ring, q.clone(), &out);
        if map.check_well_defined() != WellDefined::Yes {
            return Err(Error::Structural("a ⊗ b ↦ {a, b} fails on the cokernel model".into()));
        }
        out.comparison = Some(if map.is_isomorphism() {
            Comparison::Iso
        } else {
            Comparison::NotIso
        });
        out.cokernel = Some(q);
        out.comparison_map = Some(map);
    }
    Ok(out)
}

/// The map `(R^x ⊗ R^x)_σ → K₂^M`, `a ⊗ b ↦ {a, b}`, if well defined.
pub fn sym_to_k2(ring: &FiniteRing, sym: &Arc<AbPresentation>, k2: &MilnorK) -> AbHom {
    pairs_to_symbols(ring, sym.clone(), k2)
}
