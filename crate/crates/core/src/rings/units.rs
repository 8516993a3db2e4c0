//! Decomposition of the unit group and the many-units witness search.

use std::sync::Arc;

use crate::abgrp::AbPresentation;
use crate::error::{Error, Result};
use crate::int::Int;

use super::ring::{Elt, FiniteRing};

/// `R^x` as an internal direct sum of cyclic subgroups.
#[derive(Debug, Clone)]
pub struct UnitGroup {
    /// `(generator, order)` pairs, orders non-increasing.
    pub generators: Vec<(Elt, u64)>,
    /// Exponent vector of each ring element, `None` for non-units.
    coords: Vec<Option<Vec<u64>>>,
    presentation: Arc<AbPresentation>,
}

impl UnitGroup {
    pub(crate) fn placeholder() -> Self {
        UnitGroup {
            generators: Vec::new(),
            coords: Vec::new(),
            presentation: Arc::new(AbPresentation::trivial()),
        }
    }

    /// Greedy decomposition: repeatedly take an element of maximal order
    /// modulo the subgroup found so far, lift it to an element of exactly that
    /// order, and enlarge the subgroup. The result is checked for bijectivity.
    pub(crate) fn decompose(ring: &FiniteRing) -> Result<UnitGroup> {
        let n = ring.size();
        let units = ring.units();
        let mut in_h = vec![false; n];
        in_h[1] = true;
        let mut h: Vec<Elt> = vec![1];
        let mut generators = Vec::new();
        while h.len() < units.len() {
            let qorder = |x: Elt| -> u64 {
                let mut y = x;
                let mut m = 1;
                while !in_h[y as usize] {
                    y = ring.mul(y, x);
                    m += 1;
                }
                m
            };
            let (m, x) = units
                .iter()
                .map(|&x| (qorder(x), x))
                .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
                .unwrap();
            let lift = h
                .iter()
                .map(|&t| ring.mul(x, t))
                .filter(|&y| ring.pow(y, m) == 1)
                .min()
                .ok_or_else(|| Error::Structural(format!("{}: no lift of exact order {m}", ring.spec)))?;
            let mut new_h = Vec::with_capacity(h.len() * m as usize);
            let mut p = 1;
            for _ in 0..m {
                for &t in &h {
                    new_h.push(ring.mul(p, t));
                }
                p = ring.mul(p, lift);
            }
            for &y in &new_h {
                in_h[y as usize] = true;
            }
            h = new_h;
            generators.push((lift, m));
        }
        let mut coords: Vec<Option<Vec<u64>>> = vec![None; n];
        let mut exps = vec![0u64; generators.len()];
        let total: u64 = generators.iter().map(|g| g.1).product();
        for _ in 0..total {
            let y = generators
                .iter()
                .zip(&exps)
                .fold(1, |acc, (g, &e)| ring.mul(acc, ring.pow(g.0, e)));
            if coords[y as usize].is_some() {
                return Err(Error::Structural(format!(
                    "{}: unit decomposition is not injective",
                    ring.spec
                )));
            }
            coords[y as usize] = Some(exps.clone());
            for (e, g) in exps.iter_mut().zip(&generators) {
                *e += 1;
                if *e < g.1 {
                    break;
                }
                *e = 0;
            }
        }
        if total as usize != units.len() {
            return Err(Error::Structural(format!(
                "{}: unit decomposition is not surjective",
                ring.spec
            )));
        }
        let orders: Vec<Int> = generators.iter().map(|g| Int::from(g.1)).collect();
        Ok(UnitGroup {
            generators,
            coords,
            presentation: Arc::new(AbPresentation::diagonal(&orders)),
        })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn order(&self) -> u64 {
        self.generators.iter().map(|g| g.1).product()
    }

    /// Exponent vector of a unit.
    pub fn exponents(&self, u: Elt) -> &[u64] {
        self.coords[u as usize]
            .as_deref()
            .unwrap_or_else(|| panic!("element {u} is not a unit"))
    }

    /// Exponent vector of a unit as a presentation vector.
    pub fn vector(&self, u: Elt) -> Vec<Int> {
        self.exponents(u).iter().map(|&x| Int::from(x)).collect()
    }

    /// Presentation on the decomposition generators.
    pub fn presentation(&self) -> &Arc<AbPresentation> {
        &self.presentation
    }

    pub fn invariant_factors(&self) -> Vec<i64> {
        self.presentation.invariant_factors_i64()
    }

    /// The unit with the given exponent vector.
    pub fn element(&self, ring: &FiniteRing, exps: &[u64]) -> Elt {
        self.generators
            .iter()
            .zip(exps)
            .fold(1, |acc, (g, &e)| ring.mul(acc, ring.pow(g.0, e % g.1)))
    }
}

/// Result of the many-units witness search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ManyUnits {
    Witness(Vec<Elt>),
    NoneExists,
}

/// Searches for `n` elements (repetition allowed) all of whose nonempty
/// subfamily sums are units. `budget` bounds the number of search nodes.
pub fn many_units_witness(ring: &FiniteRing, n: usize, budget: u64) -> Result<ManyUnits> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let mut visited = 0u64;
    let mut chosen: Vec<Elt> = Vec::new();
    let mut sums: Vec<Elt> = vec![0];
    fn go(
        ring: &FiniteRing,
        n: usize,
        start: Elt,
        chosen: &mut Vec<Elt>,
        sums: &mut Vec<Elt>,
        visited: &mut u64,
        budget: u64,
    ) -> Result<bool> {
        if chosen.len() == n {
            return Ok(true);
        }
        for &x in ring.units().iter().filter(|&&x| x >= start) {
            *visited += 1;
            if *visited > budget {
                return Err(Error::budget("many-units search", "more nodes", budget));
            }
            // x + s must be a unit for every existing subfamily sum s.
            if !sums.iter().all(|&s| ring.is_unit(ring.add(s, x))) {
                continue;
            }
            let k = sums.len();
            for i in 0..k {
                let s = ring.add(sums[i], x);
                sums.push(s);
            }
            chosen.push(x);
            if go(ring, n, x, chosen, sums, visited, budget)? {
                return Ok(true);
            }
            chosen.pop();
            sums.truncate(k);
        }
        Ok(false)
    }
    if go(ring, n, 0, &mut chosen, &mut sums, &mut visited, budget)? {
        Ok(ManyUnits::Witness(chosen))
    } else {
        Ok(ManyUnits::NoneExists)
    }
}
