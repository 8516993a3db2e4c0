//! Frames in general position, their `GL₂` orbits and the coinvariant complex.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::abgrp::matrix::row_from_pairs;
use crate::abgrp::{is_exact, AbHom, AbPresentation, ExactnessWitness, SparseMatrix, SparseRow, WellDefined};
use crate::bloch::{admissible, admissible_pairs, pre_bloch};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::rings::{Elt, FiniteRing};

use super::lines::{gl2_generators, lines, Lines};

pub type Frame = Vec<u32>;

/// Default limit on the number of frames in one degree.
pub const DEFAULT_FRAME_BUDGET: usize = 1 << 20;

/// Frames of one degree, sorted lexicographically.
#[derive(Debug, Clone)]
pub struct Frames {
    pub degree: usize,
    pub list: Vec<Frame>,
    index: HashMap<Frame, u32>,
}

impl Frames {
    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn index_of(&self, f: &[u32]) -> Option<u32> {
        self.index.get(f).copied()
    }
}

/// All `(l+1)`-tuples of pairwise general-position lines.
pub fn frames(lines: &Lines, l: usize, budget: usize) -> Result<Frames> {
    let n = lines.len() as u32;
    let gp: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| lines.general_position(i, j)).collect())
        .collect();
    let mut list = Vec::new();
    let mut cur: Vec<u32> = Vec::with_capacity(l + 1);
    fn go(n: u32, l: usize, gp: &[Vec<bool>], cur: &mut Vec<u32>, list: &mut Vec<Frame>, budget: usize) -> Result<()> {
        if cur.len() == l + 1 {
            if list.len() == budget {
                return Err(Error::budget(
                    format!("frames of degree {l}"),
                    format!("more than {budget}"),
                    budget,
                ));
            }
            list.push(cur.clone());
            return Ok(());
        }
        for x in 0..n {
            if cur.iter().all(|&y| gp[y as usize][x as usize]) {
                cur.push(x);
                go(n, l, gp, cur, list, budget)?;
                cur.pop();
            }
        }
        Ok(())
    }
    go(n, l, &gp, &mut cur, &mut list, budget)?;
    let index = list.iter().enumerate().map(|(i, f)| (f.clone(), i as u32)).collect();
    Ok(Frames { degree: l, list, index })
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let p = parent[parent[x as usize] as usize];
        parent[x as usize] = p;
        x = p;
    }
    x
}

/// `GL₂` orbits on the frames of one degree.
#[derive(Debug, Clone)]
pub struct Orbits {
    /// Orbit number of each frame.
    pub orbit_of: Vec<u32>,
    /// Lexicographically least frame index of each orbit, increasing.
    pub reps: Vec<u32>,
    pub sizes: Vec<usize>,
}

/// Orbits of frames under the permutations induced by a generating set.
pub fn orbits(frames: &Frames, perms: &[Vec<u32>]) -> Orbits {
    let m = frames.len();
    let mut parent: Vec<u32> = (0..m as u32).collect();
    for perm in perms {
        for (i, f) in frames.list.iter().enumerate() {
            let g: Frame = f.iter().map(|&x| perm[x as usize]).collect();
            let j = frames.index_of(&g).expect("GL₂ preserves general position");
            let (a, b) = (find(&mut parent, i as u32), find(&mut parent, j));
            if a != b {
                // Keep the smaller index as root so roots are least members.
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi as usize] = lo;
            }
        }
    }
    let mut number = HashMap::new();
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    let mut orbit_of = vec![0u32; m];
    for i in 0..m as u32 {
        let root = find(&mut parent, i);
        let k = *number.entry(root).or_insert_with(|| {
            reps.push(root);
            sizes.push(0);
            reps.len() as u32 - 1
        });
        sizes[k as usize] += 1;
        orbit_of[i as usize] = k;
    }
    Orbits { orbit_of, reps, sizes }
}

/// Alternating face sum of a frame as `(face frame, sign)` pairs.
fn faces(f: &[u32]) -> impl Iterator<Item = (Frame, i64)> + '_ {
    (0..f.len()).map(move |i| {
        let mut g = f.to_vec();
        g.remove(i);
        (g, if i % 2 == 0 { 1 } else { -1 })
    })
}

#[derive(Debug, Clone)]
pub struct OrbitComplex {
    pub ring: Arc<FiniteRing>,
    pub lines: Lines,
    /// Frames in degrees `0..=l_max`.
    pub frames: Vec<Frames>,
    pub orbits: Vec<Orbits>,
}

impl OrbitComplex {
    pub fn build(ring: &Arc<FiniteRing>, l_max: usize, budget: usize) -> Result<Self> {
        if l_max > 4 {
            return Err(Error::Unsupported(format!(
                "configuration complex only up to degree 4, asked for {l_max}"
            )));
        }
        let lines = lines(ring)?;
        let perms: Vec<Vec<u32>> = gl2_generators(ring).iter().map(|g| lines.permutation(g)).collect();
        let mut fs = Vec::new();
        let mut os = Vec::new();
        for l in 0..=l_max {
            let f = frames(&lines, l, budget)?;
            os.push(orbits(&f, &perms));
            fs.push(f);
        }
        Ok(OrbitComplex {
            ring: ring.clone(),
            lines,
            frames: fs,
            orbits: os,
        })
    }

    pub fn l_max(&self) -> usize {
        self.frames.len() - 1
    }

    /// `∂_l: C_l → C_{l-1}` on frames, rows indexed by degree-`l` frames.
    /// For `l = 0` this is the augmentation to `Z`.
    pub fn boundary(&self, l: usize) -> SparseMatrix {
        let f = &self.frames[l];
        if l == 0 {
            return SparseMatrix::from_rows(1, vec![vec![(0, Int::ONE)]; f.len()]);
        }
        let lower = &self.frames[l - 1];
        let rows = f
            .list
            .iter()
            .map(|fr| {
                row_from_pairs(
                    faces(fr)
                        .map(|(g, s)| (lower.index_of(&g).unwrap(), Int::from(s)))
                        .collect(),
                )
            })
            .collect();
        SparseMatrix::from_rows(lower.len(), rows)
    }

    /// `∂_l` on coinvariants, rows indexed by degree-`l` orbits.
    pub fn orbit_boundary(&self, l: usize) -> SparseMatrix {
        assert!(l >= 1);
        let (f, o) = (&self.frames[l], &self.orbits[l]);
        let (lower, lo) = (&self.frames[l - 1], &self.orbits[l - 1]);
        let rows = o
            .reps
            .iter()
            .map(|&rep| {
                row_from_pairs(
                    faces(&f.list[rep as usize])
                        .map(|(g, s)| (lo.orbit_of[lower.index_of(&g).unwrap() as usize], Int::from(s)))
                        .collect(),
                )
            })
            .collect();
        SparseMatrix::from_rows(lo.reps.len(), rows)
    }

    /// Checks `∂_{l-1} ∂_l = 0` on frames and on coinvariants.
    pub fn check_boundary_squared(&self) -> Result<()> {
        for l in 1..=self.l_max() {
            let (hi, lo) = (self.boundary(l), self.boundary(l - 1));
            for r in &hi.rows {
                if !lo.row_mul(r).is_empty() {
                    return Err(Error::Structural(format!("∂∂ ≠ 0 on frames in degree {l}")));
                }
            }
            if l >= 2 {
                let (hi, lo) = (self.orbit_boundary(l), self.orbit_boundary(l - 1));
                for r in &hi.rows {
                    if !lo.row_mul(r).is_empty() {
                        return Err(Error::Structural(format!("∂∂ ≠ 0 on coinvariants in degree {l}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// The orbit of a frame given by lines.
    pub fn orbit_of_frame(&self, f: &[u32]) -> Option<u32> {
        let l = f.len() - 1;
        let i = self.frames.get(l)?.index_of(f)?;
        Some(self.orbits[l].orbit_of[i as usize])
    }

    /// `(∞, 0, 1, a⁻¹, b⁻¹, ..)`.
    pub fn standard_frame(&self, xs: &[Elt]) -> Frame {
        let ln = &self.lines;
        let mut f = vec![ln.infinity(), ln.zero(), ln.one()];
        f.extend(xs.iter().map(|&x| ln.inverse_point(x)));
        f
    }
}

/// Labels of the orbits in one degree.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitLabel {
    pub label: String,
    /// Parameters `a` or `(a, b)` of the standard frame in the orbit.
    pub params: Vec<Elt>,
    pub orbit: u32,
    pub size: usize,
    pub representative: Vec<String>,
}

/// Matches orbits of degree 3 with `p(a)` and degree 4 with `p(a, b)`,
/// checking that the matching is a bijection. Degrees below 3 get positional
/// labels.
pub fn orbit_decomposition(cx: &OrbitComplex, l: usize) -> Result<Vec<OrbitLabel>> {
    let ring = &cx.ring;
    let o = &cx.orbits[l];
    let params: Vec<Vec<Elt>> = match l {
        3 => admissible(ring).into_iter().map(|a| vec![a]).collect(),
        4 => admissible_pairs(ring).into_iter().map(|(a, b)| vec![a, b]).collect(),
        _ => Vec::new(),
    };
    let mut labels: Vec<Option<OrbitLabel>> = vec![None; o.reps.len()];
    let fr = &cx.frames[l];
    if l >= 3 {
        for p in params {
            let f = cx.standard_frame(&p);
            let k = cx
                .orbit_of_frame(&f)
                .ok_or_else(|| Error::Structural(format!("standard frame for {p:?} is not in general position")))?;
            let names: Vec<&str> = p.iter().map(|&x| ring.name(x)).collect();
            let label = format!("p({})", names.join(","));
            if let Some(prev) = &labels[k as usize] {
                return Err(Error::Structural(format!(
                    "orbit {k} contains both {} and {label}",
                    prev.label
                )));
            }
            labels[k as usize] = Some(OrbitLabel {
                label,
                params: p,
                orbit: k,
                size: o.sizes[k as usize],
                representative: Vec::new(),
            });
        }
    } else {
        for k in 0..o.reps.len() {
            labels[k] = Some(OrbitLabel {
                label: format!("o{l}_{k}"),
                params: Vec::new(),
                orbit: k as u32,
                size: o.sizes[k],
                representative: Vec::new(),
            });
        }
    }
    labels
        .into_iter()
        .enumerate()
        .map(|(k, lab)| {
            let mut lab =
                lab.ok_or_else(|| Error::Structural(format!("degree-{l} orbit {k} has no standard representative")))?;
            lab.representative = fr.list[o.reps[k] as usize].iter().map(|&x| cx.lines.name(x)).collect();
            Ok(lab)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Formula1Certificate {
    pub ring: String,
    pub orbits_degree3: usize,
    pub orbits_degree4: usize,
    pub coinvariant_quotient: Vec<Int>,
    pub pre_bloch: Vec<Int>,
    pub well_defined: bool,
    pub isomorphism: bool,
    pub pass: bool,
}

/// `coker(C₄_{GL₂} → C₃_{GL₂})` compared with `𝔭(R)` via `p(a) ↦ [a]`.
pub fn verify_pre_bloch_coinvariants(ring: &Arc<FiniteRing>, budget: usize) -> Result<Formula1Certificate> {
    let cx = OrbitComplex::build(ring, 4, budget)?;
    cx.check_boundary_squared()?;
    let l3 = orbit_decomposition(&cx, 3)?;
    let l4 = orbit_decomposition(&cx, 4)?;
    let rel = cx.orbit_boundary(4);
    let quotient = Arc::new(AbPresentation::new(rel));
    let pb = pre_bloch(ring);
    let images: Vec<SparseRow> = l3
        .iter()
        .map(|lab| vec![(pb.gen_of(lab.params[0]).unwrap() as u32, Int::ONE)])
        .collect();
    let phi = AbHom::new(quotient.clone(), pb.group.clone(), images);
    let well_defined = phi.check_well_defined() == WellDefined::Yes;
    let isomorphism = well_defined && phi.is_isomorphism();
    Ok(Formula1Certificate {
        ring: ring.spec.to_string(),
        orbits_degree3: l3.len(),
        orbits_degree4: l4.len(),
        coinvariant_quotient: quotient.invariant_factors(),
        pre_bloch: pb.group.invariant_factors(),
        well_defined,
        isomorphism,
        pass: isomorphism,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeExactness {
    pub degree: usize,
    pub exact: bool,
    pub witnesses: Vec<ExactnessWitness>,
}

/// `ker ∂_l = im ∂_{l+1}` for `l = 0..l_max-1`, with `∂₀` the augmentation.
pub fn complex_exactness(ring: &Arc<FiniteRing>, l_max: usize, budget: usize) -> Result<Vec<DegreeExactness>> {
    let cx = OrbitComplex::build(ring, l_max, budget)?;
    cx.check_boundary_squared()?;
    let free = |n: usize| Arc::new(AbPresentation::free(n));
    let mut out = Vec::new();
    for l in 0..l_max {
        let target = if l == 0 { 1 } else { cx.frames[l - 1].len() };
        let g = AbHom::new(free(cx.frames[l].len()), free(target), cx.boundary(l).rows);
        let f = AbHom::new(free(cx.frames[l + 1].len()), g.source.clone(), cx.boundary(l + 1).rows);
        let cert = is_exact(&f, &g);
        out.push(DegreeExactness {
            degree: l,
            exact: cert.exact,
            witnesses: cert.witnesses,
        });
    }
    Ok(out)
}

/// Orbit table of one degree for fixtures.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitTable {
    pub ring: String,
    pub degree: usize,
    pub lines: Vec<String>,
    pub frames: usize,
    pub orbits: Vec<OrbitLabel>,
}

pub fn orbit_table(cx: &OrbitComplex, l: usize) -> Result<OrbitTable> {
    Ok(OrbitTable {
        ring: cx.ring.spec.to_string(),
        degree: l,
        lines: (0..cx.lines.len() as u32).map(|i| cx.lines.name(i)).collect(),
        frames: cx.frames[l].len(),
        orbits: orbit_decomposition(cx, l)?,
    })
}
