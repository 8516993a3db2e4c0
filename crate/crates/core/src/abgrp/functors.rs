//! Tensor products, symmetric and exterior squares, Tor.
//!
//! All constructions work on the canonical generators of their inputs, so
//! `A ⊗ B` is generated by `a_i ⊗ b_j` for canonical generators `a_i`, `b_j`.
//! The returned [`Bilinear`] gives access to the pairing on arbitrary
//! elements written on the original generators.

use std::sync::Arc;

use crate::int::Int;

use super::matrix::{row_from_pairs, SparseRow};
use super::presentation::AbPresentation;

/// A group receiving a bilinear pairing `A x B -> group`.
#[derive(Clone, Debug)]
pub struct Bilinear {
    pub left: Arc<AbPresentation>,
    pub right: Arc<AbPresentation>,
    pub group: Arc<AbPresentation>,
    kb: usize,
}

impl Bilinear {
    /// Generator index of `a_i ⊗ b_j`.
    pub fn gen(&self, i: usize, j: usize) -> usize {
        i * self.kb + j
    }

    /// Pairing of elements given on the canonical generators.
    pub fn pair_canonical(&self, x: &[Int], y: &[Int]) -> Vec<Int> {
        let mut out = vec![Int::ZERO; self.group.ngens()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    out[self.gen(i, j)] += &(xi * yj);
                }
            }
        }
        out
    }

    /// Pairing of elements given on the original generators.
    pub fn pair(&self, x: &[Int], y: &[Int]) -> Vec<Int> {
        self.pair_canonical(&self.left.coords(x), &self.right.coords(y))
    }
}

fn tensor_rows(fa: &[Int], fb: &[Int]) -> Vec<SparseRow> {
    let kb = fb.len();
    let mut rows = Vec::new();
    for (i, e) in fa.iter().enumerate() {
        for (j, d) in fb.iter().enumerate() {
            let g = (i * kb + j) as u32;
            for x in [e, d] {
                if !x.is_zero() {
                    rows.push(vec![(g, x.clone())]);
                }
            }
        }
    }
    rows
}

/// `A ⊗ B`.
pub fn tensor(a: &Arc<AbPresentation>, b: &Arc<AbPresentation>) -> Bilinear {
    let fa = a.invariant_factors();
    let fb = b.invariant_factors();
    let group = AbPresentation::from_rows(fa.len() * fb.len(), tensor_rows(&fa, &fb));
    Bilinear {
        left: a.clone(),
        right: b.clone(),
        group: Arc::new(group),
        kb: fb.len(),
    }
}

fn square_quotient(a: &Arc<AbPresentation>, alternating: bool) -> Bilinear {
    let fa = a.invariant_factors();
    let k = fa.len();
    let mut rows = tensor_rows(&fa, &fa);
    for i in 0..k {
        for j in i..k {
            let (ij, ji) = ((i * k + j) as u32, (j * k + i) as u32);
            rows.push(row_from_pairs(vec![(ij, Int::ONE), (ji, Int::ONE)]));
            if alternating && i == j {
                rows.push(vec![(ij, Int::ONE)]);
            }
        }
    }
    Bilinear {
        left: a.clone(),
        right: a.clone(),
        group: Arc::new(AbPresentation::from_rows(k * k, rows)),
        kb: k,
    }
}

/// `(A ⊗ A)_σ`: the tensor square modulo `x⊗y + y⊗x`.
pub fn sym_quotient(a: &Arc<AbPresentation>) -> Bilinear {
    square_quotient(a, false)
}

/// `Λ²A`: the tensor square modulo `x⊗x`.
pub fn exterior_square(a: &Arc<AbPresentation>) -> Bilinear {
    square_quotient(a, true)
}

/// `Tor₁(A, B)` from the invariant-factor decompositions.
pub fn tor1(a: &AbPresentation, b: &AbPresentation) -> AbPresentation {
    let ta = a.torsion_factors();
    let tb = b.torsion_factors();
    let mut f = Vec::new();
    for x in &ta {
        for y in &tb {
            f.push(x.gcd(y));
        }
    }
    AbPresentation::diagonal(&f).canonical()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(fs: &[i64]) -> Arc<AbPresentation> {
        Arc::new(AbPresentation::diagonal(
            &fs.iter().map(|&d| Int::from(d)).collect::<Vec<_>>(),
        ))
    }

    #[test]
    fn examples() {
        assert_eq!(tensor(&cyc(&[4]), &cyc(&[6])).group.invariant_factors_i64(), vec![2]);
        assert_eq!(tensor(&cyc(&[0]), &cyc(&[2, 3])).group.invariant_factors_i64(), vec![6]);
        assert_eq!(tensor(&cyc(&[3]), &cyc(&[3])).group.invariant_factors_i64(), vec![3]);
        assert!(sym_quotient(&cyc(&[3])).group.is_trivial());
        assert_eq!(sym_quotient(&cyc(&[2])).group.invariant_factors_i64(), vec![2]);
        assert_eq!(sym_quotient(&cyc(&[4])).group.invariant_factors_i64(), vec![2]);
        assert!(exterior_square(&cyc(&[7])).group.is_trivial());
        assert_eq!(exterior_square(&cyc(&[2, 2])).group.invariant_factors_i64(), vec![2]);
        assert_eq!(exterior_square(&cyc(&[2, 4])).group.invariant_factors_i64(), vec![2]);
        assert_eq!(tor1(&cyc(&[4]), &cyc(&[6])).invariant_factors_i64(), vec![2]);
        assert!(tor1(&cyc(&[0]), &cyc(&[5])).is_trivial());
        assert_eq!(tor1(&cyc(&[3, 4]), &cyc(&[6])).invariant_factors_i64(), vec![6]);
    }

    #[test]
    fn pairing_is_bilinear() {
        let a = cyc(&[2, 4]);
        let b = cyc(&[6]);
        let t = tensor(&a, &b);
        let x1 = vec![Int::from(1), Int::from(3)];
        let x2 = vec![Int::from(1), Int::from(2)];
        let y = vec![Int::from(5)];
        let sum: Vec<Int> = x1.iter().zip(&x2).map(|(p, q)| p + q).collect();
        let lhs = t.pair(&sum, &y);
        let rhs: Vec<Int> = t
            .pair(&x1, &y)
            .iter()
            .zip(t.pair(&x2, &y))
            .map(|(p, q)| p + &q)
            .collect();
        assert_eq!(t.group.coords(&lhs), t.group.coords(&rhs));
    }
}
