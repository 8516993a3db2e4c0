//! Lines in `R²` over a local ring and the `GL₂(R)` action on them.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rings::{Elt, FiniteRing};

/// A 2×2 matrix `[[a, b], [c, d]]` over a finite ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2(pub [Elt; 4]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([1, 0, 0, 1]);

    pub fn diag(a: Elt, d: Elt) -> Self {
        Mat2([a, 0, 0, d])
    }

    pub fn det(&self, r: &FiniteRing) -> Elt {
        let [a, b, c, d] = self.0;
        r.sub(r.mul(a, d), r.mul(b, c))
    }

    pub fn mul(&self, r: &FiniteRing, o: &Mat2) -> Mat2 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = o.0;
        Mat2([
            r.add(r.mul(a, e), r.mul(b, g)),
            r.add(r.mul(a, f), r.mul(b, h)),
            r.add(r.mul(c, e), r.mul(d, g)),
            r.add(r.mul(c, f), r.mul(d, h)),
        ])
    }

    /// Inverse of an invertible matrix.
    pub fn inv(&self, r: &FiniteRing) -> Mat2 {
        let [a, b, c, d] = self.0;
        let di = r.inv_unit(self.det(r));
        Mat2([r.mul(d, di), r.neg(r.mul(b, di)), r.neg(r.mul(c, di)), r.mul(a, di)])
    }

    /// Image of the column vector `(x, y)`.
    pub fn apply(&self, r: &FiniteRing, v: [Elt; 2]) -> [Elt; 2] {
        let [a, b, c, d] = self.0;
        [
            r.add(r.mul(a, v[0]), r.mul(b, v[1])),
            r.add(r.mul(c, v[0]), r.mul(d, v[1])),
        ]
    }

    pub fn render(&self, r: &FiniteRing) -> String {
        let n: Vec<&str> = self.0.iter().map(|&x| r.name(x)).collect();
        format!("[[{},{}],[{},{}]]", n[0], n[1], n[2], n[3])
    }
}

/// The lines of `R²` with canonical representatives, in lexicographic order
/// of the representatives.
#[derive(Debug, Clone)]
pub struct Lines {
    pub ring: Arc<FiniteRing>,
    reps: Vec<[Elt; 2]>,
    index: HashMap<[Elt; 2], u32>,
}

/// Scales `v` so that its first unit coordinate is 1; `None` if `v` is not
/// unimodular.
pub fn canonical_line(r: &FiniteRing, v: [Elt; 2]) -> Option<[Elt; 2]> {
    let u = if r.is_unit(v[0]) {
        v[0]
    } else if r.is_unit(v[1]) {
        v[1]
    } else {
        return None;
    };
    let ui = r.inv_unit(u);
    Some([r.mul(v[0], ui), r.mul(v[1], ui)])
}

impl Lines {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn rep(&self, i: u32) -> [Elt; 2] {
        self.reps[i as usize]
    }

    pub fn reps(&self) -> &[[Elt; 2]] {
        &self.reps
    }

    /// Index of the line through a unimodular vector.
    pub fn of(&self, v: [Elt; 2]) -> Option<u32> {
        canonical_line(&self.ring, v).map(|c| self.index[&c])
    }

    pub fn infinity(&self) -> u32 {
        self.of([1, 0]).unwrap()
    }

    pub fn zero(&self) -> u32 {
        self.of([0, 1]).unwrap()
    }

    pub fn one(&self) -> u32 {
        self.of([1, 1]).unwrap()
    }

    /// The line `b⁻¹ := <e₁ + b e₂>`.
    pub fn inverse_point(&self, b: Elt) -> u32 {
        self.of([1, b]).unwrap()
    }

    /// Whether two lines span `R²`.
    pub fn general_position(&self, i: u32, j: u32) -> bool {
        let r = &self.ring;
        let (v, w) = (self.rep(i), self.rep(j));
        r.is_unit(r.sub(r.mul(v[0], w[1]), r.mul(v[1], w[0])))
    }

    /// Permutation of lines induced by `g`.
    pub fn permutation(&self, g: &Mat2) -> Vec<u32> {
        self.reps
            .iter()
            .map(|&v| self.of(g.apply(&self.ring, v)).expect("GL₂ preserves lines"))
            .collect()
    }

    pub fn name(&self, i: u32) -> String {
        let [x, y] = self.rep(i);
        format!("<{},{}>", self.ring.name(x), self.ring.name(y))
    }
}

/// All lines of `R²`; `R` must be local.
pub fn lines(ring: &Arc<FiniteRing>) -> Result<Lines> {
    if !ring.is_local() {
        return Err(Error::Unsupported(format!(
            "{}: configuration complexes need a local ring",
            ring.spec
        )));
    }
    let mut reps = Vec::new();
    for x in ring.elements() {
        for y in ring.elements() {
            if canonical_line(ring, [x, y]) == Some([x, y]) {
                reps.push([x, y]);
            }
        }
    }
    reps.sort();
    let index = reps.iter().enumerate().map(|(i, v)| (*v, i as u32)).collect();
    Ok(Lines {
        ring: ring.clone(),
        reps,
        index,
    })
}

/// Elementary and diagonal matrices generating `GL₂` of a local ring.
pub fn gl2_generators(r: &FiniteRing) -> Vec<Mat2> {
    let mut g = Vec::new();
    for x in r.elements().skip(1) {
        g.push(Mat2([1, x, 0, 1]));
        g.push(Mat2([1, 0, x, 1]));
    }
    for &(u, _) in &r.unit_group().generators {
        g.push(Mat2::diag(u, 1));
    }
    g
}

/// Every element of `GL₂(R)`, sorted.
pub fn gl2_elements(r: &FiniteRing) -> Vec<Mat2> {
    let local = r.is_local();
    let mut out = Vec::new();
    for a in r.elements() {
        for b in r.elements() {
            // Over a local ring an invertible matrix has a unit in each row.
            if local && !(r.is_unit(a) || r.is_unit(b)) {
                continue;
            }
            for c in r.elements() {
                for d in r.elements() {
                    let m = Mat2([a, b, c, d]);
                    if r.is_unit(m.det(r)) {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}
