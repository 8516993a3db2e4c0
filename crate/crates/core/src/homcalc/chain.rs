//! Chains in the bar complex of a finite group with trivial coefficients.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::abgrp::SparseRow;
use crate::error::{Error, Result};
use crate::int::Int;

use super::group::FiniteGroup;

/// `Σ c [g_1 | .. | g_n]` with nonzero coefficients and sorted support.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BarChain {
    pub degree: usize,
    terms: BTreeMap<Vec<u32>, Int>,
}

impl BarChain {
    pub fn zero(degree: usize) -> Self {
        BarChain {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn cell(tuple: Vec<u32>) -> Self {
        let mut c = Self::zero(tuple.len());
        c.add_term(tuple, Int::ONE);
        c
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (Vec<u32>, Int)>) -> Self {
        let mut c = Self::zero(degree);
        for (t, x) in terms {
            c.add_term(t, x);
        }
        c
    }

    pub fn add_term(&mut self, tuple: Vec<u32>, coef: Int) {
        assert_eq!(tuple.len(), self.degree, "bar cell of the wrong degree");
        if coef.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(tuple) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += &coef;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(coef);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &BarChain, s: &Int) {
        for (t, x) in &other.terms {
            self.add_term(t.clone(), x * s);
        }
    }

    pub fn plus(&self, other: &BarChain) -> BarChain {
        let mut c = self.clone();
        c.add_scaled(other, &Int::ONE);
        c
    }

    pub fn minus(&self, other: &BarChain) -> BarChain {
        let mut c = self.clone();
        c.add_scaled(other, &Int::from(-1));
        c
    }

    pub fn scaled(&self, s: &Int) -> BarChain {
        let mut c = Self::zero(self.degree);
        c.add_scaled(self, s);
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Int)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, tuple: &[u32]) -> Int {
        self.terms.get(tuple).cloned().unwrap_or(Int::ZERO)
    }

    /// Sparse vector on the cell basis, cells indexed in base `|G|` with the
    /// first entry most significant.
    pub fn to_row(&self, order: usize) -> SparseRow {
        let mut r: SparseRow = self
            .terms
            .iter()
            .map(|(t, x)| (cell_index(t, order) as u32, x.clone()))
            .collect();
        r.sort_by_key(|e| e.0);
        r
    }

    pub fn to_dense(&self, order: usize) -> Vec<Int> {
        let mut v = vec![Int::ZERO; order.pow(self.degree as u32)];
        for (t, x) in &self.terms {
            v[cell_index(t, order)] += x;
        }
        v
    }

    pub fn from_dense(degree: usize, order: usize, v: &[Int]) -> BarChain {
        let mut c = Self::zero(degree);
        for (i, x) in v.iter().enumerate() {
            if !x.is_zero() {
                c.add_term(cell_tuple(i, degree, order), x.clone());
            }
        }
        c
    }

    pub fn render(&self, g: &FiniteGroup) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (t, x)) in self.terms.iter().enumerate() {
            let neg = x.is_negative();
            let a = x.abs();
            s.push_str(match (k, neg) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            });
            if !a.is_one() {
                s.push_str(&a.to_string());
            }
            let names: Vec<&str> = t.iter().map(|&e| g.name(e)).collect();
            s.push('[');
            s.push_str(&names.join("|"));
            s.push(']');
        }
        s
    }

    pub fn to_json(&self, g: &FiniteGroup) -> ChainJson {
        ChainJson {
            group: g.label.clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(t, x)| (x.clone(), t.clone())).collect(),
        }
    }

    pub fn from_json(j: &ChainJson, g: &FiniteGroup) -> Result<BarChain> {
        let mut c = Self::zero(j.degree);
        for (coef, cell) in &j.terms {
            if cell.len() != j.degree {
                return Err(Error::Parse(format!("cell {cell:?} is not of degree {}", j.degree)));
            }
            if let Some(e) = cell.iter().find(|&&e| e as usize >= g.order()) {
                return Err(Error::Parse(format!("no element {e} in {}", g.label)));
            }
            c.add_term(cell.clone(), coef.clone());
        }
        Ok(c)
    }
}

/// Serialized chain: `(coefficient, element indices)` per cell, sorted support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainJson {
    pub group: String,
    pub degree: usize,
    pub terms: Vec<(Int, Vec<u32>)>,
}

pub fn cell_index(t: &[u32], order: usize) -> usize {
    t.iter().fold(0, |acc, &g| acc * order + g as usize)
}

pub fn cell_tuple(mut i: usize, degree: usize, order: usize) -> Vec<u32> {
    let mut t = vec![0u32; degree];
    for k in (0..degree).rev() {
        t[k] = (i % order) as u32;
        i /= order;
    }
    t
}

/// Boundary terms of one cell: `(sign, face)`.
pub fn cell_boundary(g: &FiniteGroup, t: &[u32]) -> Vec<(i64, Vec<u32>)> {
    let n = t.len();
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(n + 1);
    out.push((1, t[1..].to_vec()));
    for i in 0..n - 1 {
        let mut f = Vec::with_capacity(n - 1);
        f.extend_from_slice(&t[..i]);
        f.push(g.mul(t[i], t[i + 1]));
        f.extend_from_slice(&t[i + 2..]);
        out.push((if i % 2 == 0 { -1 } else { 1 }, f));
    }
    out.push((if n % 2 == 0 { 1 } else { -1 }, t[..n - 1].to_vec()));
    out
}

/// `∂[g_1|..|g_n] = [g_2|..|g_n] + Σ (-1)^i [..|g_i g_{i+1}|..] + (-1)^n [g_1|..|g_{n-1}]`.
pub fn bar_boundary(g: &FiniteGroup, c: &BarChain) -> BarChain {
    let mut out = BarChain::zero(c.degree.saturating_sub(1));
    if c.degree == 0 {
        return out;
    }
    for (t, x) in c.terms() {
        for (s, f) in cell_boundary(g, t) {
            out.add_term(f, x * &Int::from(s));
        }
    }
    out
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    if n == 0 {
        return vec![(vec![], 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        // Insert n-1 at position k; that costs n-1-k transpositions.
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            let sign = if (n - 1 - k) % 2 == 0 { s } else { -s };
            out.push((q, sign));
        }
    }
    out
}

/// `c(g_1, .., g_n) = Σ_σ sign(σ) [g_σ(1) | .. | g_σ(n)]` for pairwise
/// commuting elements.
pub fn c_cycle(g: &FiniteGroup, elems: &[u32]) -> Result<BarChain> {
    for (i, &a) in elems.iter().enumerate() {
        for &b in &elems[i + 1..] {
            if !g.commute(a, b) {
                return Err(Error::Precondition(format!(
                    "c-cycle arguments {} and {} do not commute",
                    g.name(a),
                    g.name(b)
                )));
            }
        }
    }
    let mut c = BarChain::zero(elems.len());
    for (p, s) in permutations(elems.len()) {
        c.add_term(p.iter().map(|&i| elems[i]).collect(), Int::from(s));
    }
    debug_assert!(bar_boundary(g, &c).is_zero());
    Ok(c)
}

/// Shuffle product into the bar complex of `G × H` (product indexing
/// `(g, h) ↦ g |H| + h`).
pub fn shuffle(x: &BarChain, y: &BarChain, h_order: usize) -> BarChain {
    let (p, q) = (x.degree, y.degree);
    let mut out = BarChain::zero(p + q);
    // A shuffle is the set of positions taken by the left factor.
    let mut shuffles = Vec::new();
    choose(p + q, p, 0, &mut Vec::new(), &mut shuffles);
    for (a, ca) in x.terms() {
        for (b, cb) in y.terms() {
            let coef = ca * cb;
            for pos in &shuffles {
                let mut cell = Vec::with_capacity(p + q);
                let (mut i, mut j) = (0, 0);
                let mut inversions = 0usize;
                for k in 0..p + q {
                    if pos.contains(&k) {
                        cell.push(a[i] * h_order as u32);
                        inversions += j;
                        i += 1;
                    } else {
                        cell.push(b[j]);
                        j += 1;
                    }
                }
                let s = if inversions % 2 == 0 { coef.clone() } else { -&coef };
                out.add_term(cell, s);
            }
        }
    }
    out
}

fn choose(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..n {
        cur.push(i);
        choose(n, k, i + 1, cur, out);
        cur.pop();
    }
}
