//! Finitely presented abelian groups, their elements and homomorphisms.

use std::sync::{Arc, OnceLock};

use crate::int::Int;

use super::matrix::{row_from_dense, row_to_dense, SparseMatrix, SparseRow};
use super::smith::SmithData;

/// `Z^ngens / rowspace(relations)`.
#[derive(Debug)]
pub struct AbPresentation {
    relations: SparseMatrix,
    smith: OnceLock<Arc<SmithData>>,
}

impl Clone for AbPresentation {
    fn clone(&self) -> Self {
        let p = AbPresentation::new(self.relations.clone());
        if let Some(s) = self.smith.get() {
            let _ = p.smith.set(s.clone());
        }
        p
    }
}

impl AbPresentation {
    pub fn new(relations: SparseMatrix) -> Self {
        AbPresentation {
            relations,
            smith: OnceLock::new(),
        }
    }

    pub fn from_rows(ngens: usize, rows: Vec<SparseRow>) -> Self {
        Self::new(SparseMatrix::from_rows(ngens, rows))
    }

    pub fn free(n: usize) -> Self {
        Self::new(SparseMatrix::new(n))
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    /// `Z/n` (with `n = 0` meaning `Z`).
    pub fn cyclic(n: i64) -> Self {
        Self::diagonal(&[Int::from(n)])
    }

    /// `Z/d_1 + .. + Z/d_k` on one generator per factor.
    pub fn diagonal(factors: &[Int]) -> Self {
        let rows = factors
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(|(i, d)| vec![(i as u32, d.clone())])
            .collect();
        Self::from_rows(factors.len(), rows)
    }

    pub fn ngens(&self) -> usize {
        self.relations.cols
    }

    pub fn relations(&self) -> &SparseMatrix {
        &self.relations
    }

    /// Memoized Smith data; computed on first use.
    pub fn smith(&self) -> &Arc<SmithData> {
        self.smith.get_or_init(|| Arc::new(SmithData::compute(&self.relations)))
    }

    pub fn invariant_factors(&self) -> Vec<Int> {
        self.smith().factors().to_vec()
    }

    pub fn invariant_factors_i64(&self) -> Vec<i64> {
        self.invariant_factors()
            .iter()
            .map(|d| d.to_i64().expect("factor fits in i64"))
            .collect()
    }

    /// Number of canonical generators.
    pub fn rank_canonical(&self) -> usize {
        self.smith().factors().len()
    }

    pub fn free_rank(&self) -> usize {
        self.smith().factors().iter().filter(|d| d.is_zero()).count()
    }

    pub fn torsion_factors(&self) -> Vec<Int> {
        self.smith()
            .factors()
            .iter()
            .filter(|d| !d.is_zero())
            .cloned()
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.smith().factors().is_empty()
    }

    /// Group order, `None` if infinite.
    pub fn order(&self) -> Option<Int> {
        let f = self.smith().factors();
        if f.iter().any(|d| d.is_zero()) {
            return None;
        }
        Some(f.iter().fold(Int::ONE, |a, d| &a * d))
    }

    pub fn coords(&self, z: &[Int]) -> Vec<Int> {
        self.smith().coords(z)
    }

    pub fn coords_sparse(&self, z: &SparseRow) -> Vec<Int> {
        self.smith().coords_sparse(z)
    }

    pub fn is_zero(&self, z: &[Int]) -> bool {
        self.coords(z).iter().all(|x| x.is_zero())
    }

    pub fn lift(&self, k: usize) -> Vec<Int> {
        self.smith().lift(k)
    }

    /// Integral combination of relations equal to `z`, if `z` is trivial.
    pub fn solve(&self, z: &[Int]) -> Option<Vec<Int>> {
        self.smith().solve(&self.relations, z)
    }

    /// Vector on the generators for canonical coordinates `c`.
    pub fn from_coords(&self, c: &[Int]) -> Vec<Int> {
        let mut z = vec![Int::ZERO; self.ngens()];
        for (k, x) in c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (zi, li) in z.iter_mut().zip(self.lift(k)) {
                if !li.is_zero() {
                    *zi += &(x * &li);
                }
            }
        }
        z
    }

    /// The same group presented on its canonical generators.
    pub fn canonical(&self) -> AbPresentation {
        AbPresentation::diagonal(self.smith().factors())
    }

    /// Appends relations, keeping the generators.
    pub fn with_relations(&self, extra: impl IntoIterator<Item = SparseRow>) -> AbPresentation {
        let mut m = self.relations.clone();
        for r in extra {
            m.push(r);
        }
        AbPresentation::new(m)
    }

    pub fn element(self: &Arc<Self>, z: Vec<Int>) -> AbElement {
        AbElement::new(self.clone(), z)
    }
}

/// Renders invariant factors as `Z/2 + Z/4 + Z`.
pub fn describe_factors(f: &[Int]) -> String {
    if f.is_empty() {
        return "0".into();
    }
    f.iter()
        .map(|d| if d.is_zero() { "Z".to_string() } else { format!("Z/{d}") })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// An element of a presented group, compared through canonical coordinates.
#[derive(Clone, Debug)]
pub struct AbElement {
    pub group: Arc<AbPresentation>,
    pub vector: Vec<Int>,
}

impl AbElement {
    pub fn new(group: Arc<AbPresentation>, vector: Vec<Int>) -> Self {
        assert_eq!(vector.len(), group.ngens(), "element length mismatch");
        AbElement { group, vector }
    }

    pub fn canonical(&self) -> Vec<Int> {
        self.group.coords(&self.vector)
    }

    pub fn is_zero(&self) -> bool {
        self.group.is_zero(&self.vector)
    }
}

impl PartialEq for AbElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group) && self.canonical() == other.canonical()
    }
}

/// A homomorphism given by the images of the source generators.
#[derive(Clone, Debug)]
pub struct AbHom {
    pub source: Arc<AbPresentation>,
    pub target: Arc<AbPresentation>,
    /// Row `i` is the image of source generator `i` on target generators.
    pub images: Vec<SparseRow>,
}

/// Outcome of a well-definedness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WellDefined {
    Yes,
    /// Index of a source relation whose image is nonzero.
    No(usize),
}

impl AbHom {
    pub fn new(source: Arc<AbPresentation>, target: Arc<AbPresentation>, images: Vec<SparseRow>) -> Self {
        assert_eq!(images.len(), source.ngens(), "one image per source generator");
        AbHom { source, target, images }
    }

    pub fn zero(source: Arc<AbPresentation>, target: Arc<AbPresentation>) -> Self {
        let n = source.ngens();
        Self::new(source, target, vec![Vec::new(); n])
    }

    pub fn identity(group: Arc<AbPresentation>) -> Self {
        let images = (0..group.ngens()).map(|i| vec![(i as u32, Int::ONE)]).collect();
        Self::new(group.clone(), group, images)
    }

    /// Image of a vector on the source generators.
    pub fn apply(&self, x: &[Int]) -> Vec<Int> {
        let mut out = vec![Int::ZERO; self.target.ngens()];
        for (xi, img) in x.iter().zip(&self.images) {
            if xi.is_zero() {
                continue;
            }
            for (c, v) in img {
                out[*c as usize] += &(xi * v);
            }
        }
        out
    }

    pub fn apply_sparse(&self, x: &SparseRow) -> Vec<Int> {
        self.apply(&row_to_dense(x, self.source.ngens()))
    }

    /// Checks that every source relation maps to zero in the target.
    pub fn check_well_defined(&self) -> WellDefined {
        for (i, r) in self.source.relations().rows.iter().enumerate() {
            let img = self.apply_sparse(r);
            if !self.target.is_zero(&img) {
                return WellDefined::No(i);
            }
        }
        WellDefined::Yes
    }

    pub fn compose(&self, g: &AbHom) -> AbHom {
        let images = self
            .images
            .iter()
            .map(|img| row_from_dense(&g.apply_sparse(img)))
            .collect();
        AbHom::new(self.source.clone(), g.target.clone(), images)
    }

    /// `C[j] = canonical target coords of f(lift_source(j))`.
    pub fn canonical_matrix(&self) -> Vec<Vec<Int>> {
        (0..self.source.rank_canonical())
            .map(|j| self.target.coords(&self.apply(&self.source.lift(j))))
            .collect()
    }

    pub fn is_zero_map(&self) -> bool {
        self.canonical_matrix().iter().all(|r| r.iter().all(|x| x.is_zero()))
    }

    /// Injective iff the kernel is trivial.
    pub fn is_injective(&self) -> bool {
        kernel(self).0.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        cokernel(self).0.is_trivial()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

/// Basis of the integer left kernel of the matrix with the given dense rows.
fn left_kernel(rows: Vec<Vec<Int>>, cols: usize) -> Vec<Vec<Int>> {
    let m = SparseMatrix::from_rows(cols, rows.iter().map(|r| row_from_dense(r)).collect());
    let sd = SmithData::compute(&m);
    sd.left_kernel()
}

/// Kernel of `f` with its inclusion into the source.
pub fn kernel(f: &AbHom) -> (Arc<AbPresentation>, AbHom) {
    let a = &f.source;
    let b = &f.target;
    let fa = a.smith().factors().to_vec();
    let fb = b.smith().factors().to_vec();
    let (ka, kb) = (fa.len(), fb.len());
    let c = f.canonical_matrix();
    // x in Z^ka maps to 0 iff (x, y) is in the left kernel of [C; diag(d_B)].
    let mut stacked = c.clone();
    for (i, d) in fb.iter().enumerate() {
        let mut r = vec![Int::ZERO; kb];
        r[i] = d.clone();
        stacked.push(r);
    }
    let gens: Vec<Vec<Int>> = left_kernel(stacked, kb)
        .into_iter()
        .map(|v| v[..ka].to_vec())
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    // Relations among the generators: mu with mu * G in diag(e_A) lattice.
    let s = gens.len();
    let mut stacked = gens.clone();
    for (i, e) in fa.iter().enumerate() {
        let mut r = vec![Int::ZERO; ka];
        r[i] = e.clone();
        stacked.push(r);
    }
    let rels: Vec<SparseRow> = left_kernel(stacked, ka)
        .into_iter()
        .map(|v| row_from_dense(&v[..s]))
        .filter(|r| !r.is_empty())
        .collect();
    let k = Arc::new(AbPresentation::from_rows(s, rels));
    let images = gens.iter().map(|g| row_from_dense(&a.from_coords(g))).collect();
    let inc = AbHom::new(k.clone(), a.clone(), images);
    (k, inc)
}

/// Cokernel of `f` with the projection from the target.
pub fn cokernel(f: &AbHom) -> (Arc<AbPresentation>, AbHom) {
    let q = Arc::new(f.target.with_relations(f.images.iter().cloned()));
    let proj = AbHom::new(
        f.target.clone(),
        q.clone(),
        (0..f.target.ngens()).map(|i| vec![(i as u32, Int::ONE)]).collect(),
    );
    (q, proj)
}

/// Witness from an exactness check.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ExactnessWitness {
    /// Source generator of `f` with `g(f(x)) != 0`.
    CompositeNonzero { source_gen: usize },
    /// Kernel element of `g` (on the middle generators) not in the image of `f`.
    KernelNotImage { element: Vec<Int> },
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ExactnessCertificate {
    pub exact: bool,
    pub witnesses: Vec<ExactnessWitness>,
}

/// Decides `im f = ker g` at the middle node.
pub fn is_exact(f: &AbHom, g: &AbHom) -> ExactnessCertificate {
    assert_eq!(f.target.ngens(), g.source.ngens(), "maps do not compose");
    let mut witnesses = Vec::new();
    for j in 0..f.source.ngens() {
        let img = g.apply_sparse(&f.images[j]);
        if !g.target.is_zero(&img) {
            witnesses.push(ExactnessWitness::CompositeNonzero { source_gen: j });
        }
    }
    if witnesses.is_empty() {
        let (_, inc) = kernel(g);
        let (q, _) = cokernel(f);
        for img in &inc.images {
            let v = row_to_dense(img, g.source.ngens());
            if !q.is_zero(&v) {
                witnesses.push(ExactnessWitness::KernelNotImage { element: v });
            }
        }
    }
    ExactnessCertificate {
        exact: witnesses.is_empty(),
        witnesses,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(p: AbPresentation) -> Arc<AbPresentation> {
        Arc::new(p)
    }

    fn mul_map(n: i64, m: i64, k: i64) -> AbHom {
        AbHom::new(
            arc(AbPresentation::cyclic(n)),
            arc(AbPresentation::cyclic(m)),
            vec![vec![(0, Int::from(k))]],
        )
    }

    #[test]
    fn kernels_of_cyclic_maps() {
        let f = AbHom::zero(arc(AbPresentation::cyclic(4)), arc(AbPresentation::cyclic(2)));
        assert_eq!(kernel(&f).0.invariant_factors_i64(), vec![4]);
        let f = mul_map(4, 4, 2);
        assert_eq!(kernel(&f).0.invariant_factors_i64(), vec![2]);
        let (k, inc) = kernel(&f);
        assert_eq!(inc.check_well_defined(), WellDefined::Yes);
        assert!(inc.compose(&f).is_zero_map());
        assert!(inc.is_injective());
        assert_eq!(k.order(), Some(Int::from(2)));
    }

    #[test]
    fn cokernels() {
        let f = mul_map(0, 0, 2);
        assert_eq!(cokernel(&f).0.invariant_factors_i64(), vec![2]);
        let m = SparseMatrix::from_dense(&crate::abgrp::IntMatrix::from_i64(&[&[2, 4], &[6, 8]]));
        let g = AbPresentation::new(m);
        assert_eq!(g.invariant_factors_i64(), vec![2, 4]);
    }

    #[test]
    fn exactness_examples() {
        let f = mul_map(0, 0, 2);
        let g = AbHom::new(
            arc(AbPresentation::cyclic(0)),
            arc(AbPresentation::cyclic(2)),
            vec![vec![(0, Int::ONE)]],
        );
        let g = AbHom::new(f.target.clone(), g.target.clone(), g.images);
        assert!(is_exact(&f, &g).exact);
        let z2 = arc(AbPresentation::cyclic(2));
        let zero_in = AbHom::zero(arc(AbPresentation::trivial()), z2.clone());
        let zero_out = AbHom::zero(z2.clone(), z2);
        let cert = is_exact(&zero_in, &zero_out);
        assert!(!cert.exact);
        assert_eq!(cert.witnesses.len(), 1);
    }
}
