//! The explicit degree-two identities relating the element `[a]` of the
//! pre-Bloch group to a cycle on the diagonal torus.
//!
//! For an admissible `a` put `g1 = [[0,1],[a-1,1]]`, `g2 = [[1-a,a],[0,a]]`,
//! `g3 = diag(1,a)`. A chain `u_a` in the standard resolution of `GL₂`
//! satisfies `δ u_a ⊗ (∞,0) = z_a`, and pushing `u_a ⊗ ∂(∞,0)` to the torus
//! through the Borel section gives a sixteen-term bar cycle `X_a`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::abgrp::AbPresentation;
use crate::bloch::admissible;
use crate::confcx::{canonical_line, Mat2};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::rings::{Elt, FiniteRing};

use super::chain::{bar_boundary, c_cycle, BarChain};
use super::group::FiniteGroup;
use super::homology::BarHomology;

/// Tuples of matrices tensored with the frame `(∞, 0)`, each reduced to the
/// least representative of its orbit under right multiplication by the torus.
type StdChain = BTreeMap<Vec<Mat2>, i64>;

const W: Mat2 = Mat2([0, 1, 1, 0]);

struct Gl2Ctx<'r> {
    r: &'r FiniteRing,
    torus: Vec<Mat2>,
}

impl<'r> Gl2Ctx<'r> {
    fn new(r: &'r FiniteRing) -> Self {
        let u = r.units();
        let torus = u
            .iter()
            .flat_map(|&x| u.iter().map(move |&y| Mat2::diag(x, y)))
            .collect();
        Gl2Ctx { r, torus }
    }

    fn mul(&self, a: &Mat2, b: &Mat2) -> Mat2 {
        a.mul(self.r, b)
    }

    fn scalar(&self, s: Elt, g: &Mat2) -> Mat2 {
        Mat2::diag(s, s).mul(self.r, g)
    }

    /// `tuple ⊗ (l0, l1)` rewritten on the frame `(∞, 0)`: with `h` sending
    /// `(∞, 0)` to the frame, `x ⊗ h·c = x h ⊗ c`.
    fn normalize(&self, tuple: &[Mat2], frame: [[Elt; 2]; 2]) -> Vec<Mat2> {
        let [v0, v1] = frame;
        let h = Mat2([v0[0], v1[0], v0[1], v1[1]]);
        debug_assert!(self.r.is_unit(h.det(self.r)));
        let base: Vec<Mat2> = tuple.iter().map(|g| self.mul(g, &h)).collect();
        self.torus
            .iter()
            .map(|t| base.iter().map(|g| self.mul(g, t)).collect::<Vec<_>>())
            .min()
            .unwrap()
    }

    fn add(&self, c: &mut StdChain, coef: i64, tuple: &[Mat2], frame: [[Elt; 2]; 2]) {
        let k = self.normalize(tuple, frame);
        let e = c.entry(k.clone()).or_insert(0);
        *e += coef;
        if *e == 0 {
            c.remove(&k);
        }
    }

    /// Section of `GL₂ → GL₂/B` on the line `g(∞)`: the identity over `∞`,
    /// `[[1,0],[b,1]]` over `<1,b>` and `[[c,1],[1,0]]` over `<c,1>` with `c`
    /// a non-unit (this covers `0` by `w`).
    fn section(&self, g: &Mat2) -> Mat2 {
        let l = canonical_line(self.r, g.apply(self.r, [1, 0])).expect("unimodular column");
        if l[0] == 1 {
            Mat2([1, 0, l[1], 1])
        } else {
            Mat2([l[0], 1, 1, 0])
        }
    }

    /// Diagonal of `s(g∞)⁻¹ g`, which lies in the Borel subgroup.
    fn borel_diagonal(&self, g: &Mat2) -> (Elt, Elt) {
        let b = self.section(g).inv(self.r).mul(self.r, g);
        assert_eq!(b.0[2], 0, "section image is not upper triangular");
        (b.0[0], b.0[3])
    }
}

/// The three matrices attached to `a`.
fn generators(r: &FiniteRing, a: Elt) -> [Mat2; 3] {
    let am1 = r.sub(a, 1);
    let oma = r.one_minus(a);
    [Mat2([0, 1, am1, 1]), Mat2([oma, a, 0, a]), Mat2([1, 0, 0, a])]
}

/// The eight-term chain `u_a` in degree two of the standard resolution.
fn u_chain(cx: &Gl2Ctx, a: Elt) -> Vec<(i64, [Mat2; 3])> {
    let r = cx.r;
    let [g1, g2, g3] = generators(r, a);
    let ai = r.inv_unit(a);
    let ai2 = r.mul(ai, ai);
    let ai3 = r.mul(ai2, ai);
    let m = |x: &Mat2, y: &Mat2| cx.mul(x, y);
    let g22 = m(&g2, &g2);
    let g33 = m(&g3, &g3);
    let g3i = g3.inv(r);
    let id = Mat2::IDENTITY;
    vec![
        (1, [m(&g3, &g1), g2, g1]),
        (-1, [m(&g3, &g2), m(&g3, &g1), g2]),
        (-1, [cx.scalar(ai, &m(&g22, &g33)), g22, m(&g1, &g2)]),
        (1, [cx.scalar(ai3, &m(&g22, &g33)), cx.scalar(ai2, &g22), id]),
        (-1, [cx.scalar(ai3, &m(&g22, &g33)), cx.scalar(ai, &g33), id]),
        (1, [cx.scalar(ai, &m(&g2, &g1)), cx.scalar(ai, &m(&g1, &g1)), id]),
        (-1, [m(&m(&g1, &g1), &g3i), cx.scalar(a, &g3i), id]),
        (1, [g3, cx.scalar(ai, &g33), id]),
    ]
}

/// Position of an element in `R^x × R^x`.
struct TorusIndex {
    pos: Vec<u32>,
    nu: u32,
}

impl TorusIndex {
    fn new(r: &FiniteRing) -> Self {
        let mut pos = vec![u32::MAX; r.size()];
        for (i, &u) in r.units().iter().enumerate() {
            pos[u as usize] = i as u32;
        }
        TorusIndex {
            pos,
            nu: r.units().len() as u32,
        }
    }

    fn of(&self, x: Elt, y: Elt) -> u32 {
        let (i, j) = (self.pos[x as usize], self.pos[y as usize]);
        assert!(i != u32::MAX && j != u32::MAX, "torus coordinates must be units");
        i * self.nu + j
    }
}

/// One differing cell between two chains, rendered with group names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDiff {
    pub cell: String,
    pub computed: Int,
    pub expected: Int,
}

fn diff_chains(g: &FiniteGroup, computed: &BarChain, expected: &BarChain) -> Vec<TermDiff> {
    let d = computed.minus(expected);
    d.terms()
        .map(|(t, _)| TermDiff {
            cell: t.iter().map(|&e| g.name(e)).collect::<Vec<_>>().join("|"),
            computed: computed.coefficient(t),
            expected: expected.coefficient(t),
        })
        .collect()
}

/// Results of every identity for one admissible `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeTwoCheck {
    pub a: String,
    /// `δ₂(u_a) ⊗ (∞,0) = z_a` in the torus-normalized module.
    pub boundary_of_u: bool,
    /// The pushed-forward chain equals the sixteen-term `X_a`.
    pub bar_form: bool,
    pub bar_form_diff: Vec<TermDiff>,
    /// Section map and standard-to-bar conversion commute with boundaries on
    /// the tested chains.
    pub chain_maps_commute: bool,
    /// `X_a ↦ (a,1)∧(1-a,1) - (a,1)∧(1,1-a)` in `Λ²(R^x×R^x)/K`; `None`
    /// when torus homology was not requested.
    pub exterior_class: Option<bool>,
    /// `∂[(a⁻¹,a) | (-1,a) | (-a,a⁻¹)]` has the stated four terms.
    pub delta3: bool,
    /// `X_a + ∂[(a⁻¹,a) | (-1,a) | (-a,a⁻¹)]` is the stated sum of seven `c`-cycles.
    pub c_form: bool,
}

impl DegreeTwoCheck {
    pub fn pass(&self) -> bool {
        self.boundary_of_u
            && self.bar_form
            && self.chain_maps_commute
            && self.exterior_class != Some(false)
            && self.delta3
            && self.c_form
    }
}

/// Torus data shared by every `a`.
pub struct TorusContext {
    pub ring: Arc<FiniteRing>,
    pub torus: Arc<FiniteGroup>,
    index: TorusIndex,
    homology: Option<BarHomology>,
    /// `C_2 / (im ∂₃ + K)`.
    exterior_quotient: Option<Arc<AbPresentation>>,
}

impl TorusContext {
    /// With `with_homology` the class identity in `Λ²/K` is also prepared.
    pub fn new(ring: &Arc<FiniteRing>, with_homology: bool) -> Result<Self> {
        let torus = Arc::new(FiniteGroup::torus(ring)?);
        let index = TorusIndex::new(ring);
        let mut cx = TorusContext {
            ring: ring.clone(),
            torus,
            index,
            homology: None,
            exterior_quotient: None,
        };
        if with_homology {
            let h = BarHomology::new(cx.torus.clone());
            let p2 = h.chains_mod_boundaries(2)?;
            let ord = cx.torus.order();
            // K is generated by swap(x)∧swap(y) - x∧y over generators x, y.
            let ug = &ring.unit_group().generators;
            let mut gens = Vec::new();
            for &(u, _) in ug {
                gens.push((u, 1));
                gens.push((1, u));
            }
            let mut extra = Vec::new();
            for (i, &x) in gens.iter().enumerate() {
                for &y in &gens[i + 1..] {
                    let k = cx.wedge((x.1, x.0), (y.1, y.0))?.minus(&cx.wedge(x, y)?);
                    extra.push(k.to_row(ord));
                }
            }
            cx.exterior_quotient = Some(Arc::new(p2.with_relations(extra)));
            cx.homology = Some(h);
        }
        Ok(cx)
    }

    pub fn element(&self, x: Elt, y: Elt) -> u32 {
        self.index.of(x, y)
    }

    fn wedge(&self, x: (Elt, Elt), y: (Elt, Elt)) -> Result<BarChain> {
        c_cycle(&self.torus, &[self.element(x.0, x.1), self.element(y.0, y.1)])
    }

    fn cell2(&self, x: (Elt, Elt), y: (Elt, Elt)) -> Vec<u32> {
        vec![self.element(x.0, x.1), self.element(y.0, y.1)]
    }

    pub fn homology(&self) -> Option<&BarHomology> {
        self.homology.as_ref()
    }
}

/// The sixteen-term `X_a` as printed.
pub fn expected_bar_form(cx: &TorusContext, a: Elt) -> BarChain {
    let r = &cx.ring;
    let ai = r.inv_unit(a);
    let oma = r.one_minus(a);
    let am1 = r.sub(a, 1);
    let m1 = r.neg(1);
    let ai2 = r.mul(ai, ai);
    let f = r.mul(ai2, r.mul(oma, oma));
    let gg = r.neg(r.mul(ai, r.mul(oma, oma)));
    let hh = r.mul(ai, am1);
    let kk = r.neg(r.mul(ai, r.mul(am1, am1)));
    let (am, ami, a2) = (r.neg(a), r.neg(ai), r.mul(a, a));
    let terms: [(i64, (Elt, Elt), (Elt, Elt)); 16] = [
        (-1, (am, ai), (m1, a)),
        (1, (ai, a), (a, 1)),
        (1, (ami, a2), (am, ai)),
        (-1, (a, 1), (ai, a)),
        (1, (ai, a), (m1, a)),
        (-1, (a, ai), (1, a)),
        (-1, (ai, a), (f, 1)),
        (1, (a, ai), (ai, gg)),
        (1, (f, 1), (ai, a)),
        (-1, (ai, gg), (a, ai)),
        (-1, (a, 1), (hh, hh)),
        (1, (1, a), (ai, kk)),
        (1, (hh, hh), (a, 1)),
        (-1, (ai, kk), (1, a)),
        (-1, (a, 1), (ai, a)),
        (1, (1, a), (a, ai)),
    ];
    BarChain::from_terms(2, terms.iter().map(|&(c, x, y)| (cx.cell2(x, y), Int::from(c))))
}

/// `Σ c(x_i, y_i)` form of `X_a + ∂[(a⁻¹,a) | (-1,a) | (-a,a⁻¹)]`.
pub fn expected_c_form(cx: &TorusContext, a: Elt) -> Result<BarChain> {
    let r = &cx.ring;
    let ai = r.inv_unit(a);
    let oma = r.one_minus(a);
    let am1 = r.sub(a, 1);
    let f = r.mul(r.mul(ai, ai), r.mul(oma, oma));
    let gg = r.neg(r.mul(ai, r.mul(oma, oma)));
    let hh = r.mul(ai, am1);
    let kk = r.neg(r.mul(ai, r.mul(am1, am1)));
    let parts: [(i64, (Elt, Elt), (Elt, Elt)); 7] = [
        (1, (r.neg(1), a), (r.neg(a), ai)),
        (2, (ai, a), (a, 1)),
        (1, (1, a), (a, ai)),
        (1, (f, 1), (ai, a)),
        (1, (a, ai), (ai, gg)),
        (1, (hh, hh), (a, 1)),
        (1, (1, a), (ai, kk)),
    ];
    let mut out = BarChain::zero(2);
    for (c, x, y) in parts {
        out.add_scaled(&cx.wedge(x, y)?, &Int::from(c));
    }
    Ok(out)
}

/// `[(a⁻¹,a) | (-1,a) | (-a,a⁻¹)]` and the stated value of its boundary.
pub fn delta3_identity(cx: &TorusContext, a: Elt) -> (BarChain, BarChain) {
    let r = &cx.ring;
    let ai = r.inv_unit(a);
    let x = (ai, a);
    let y = (r.neg(1), a);
    let z = (r.neg(a), ai);
    let cell = BarChain::cell(vec![cx.element(x.0, x.1), cx.element(y.0, y.1), cx.element(z.0, z.1)]);
    let stated = BarChain::from_terms(
        2,
        [
            (cx.cell2(y, z), Int::ONE),
            (cx.cell2(x, (a, 1)), Int::ONE),
            (cx.cell2((r.neg(ai), r.mul(a, a)), z), Int::from(-1)),
            (cx.cell2(x, y), Int::from(-1)),
        ],
    );
    (cell, stated)
}

/// Standard-resolution triple ⊗ `(∞)` pushed to a torus bar cell.
fn to_bar(gl: &Gl2Ctx, cx: &TorusContext, tuple: &[Mat2]) -> Vec<u32> {
    let r = gl.r;
    let diag: Vec<(Elt, Elt)> = tuple.iter().map(|g| gl.borel_diagonal(g)).collect();
    diag.windows(2)
        .map(|w| {
            let (x, y) = (w[0], w[1]);
            cx.element(r.div(x.0, y.0), r.div(x.1, y.1))
        })
        .collect()
}

/// The pushed-forward chain `(u_a w - u_a) ⊗ (∞)` on the torus.
pub fn pushed_bar_form(cx: &TorusContext, a: Elt) -> BarChain {
    let gl = Gl2Ctx::new(&cx.ring);
    let mut x = BarChain::zero(2);
    for (c, tup) in u_chain(&gl, a) {
        let tw: Vec<Mat2> = tup.iter().map(|g| gl.mul(g, &W)).collect();
        x.add_term(to_bar(&gl, cx, &tw), Int::from(c));
        x.add_term(to_bar(&gl, cx, &tup), Int::from(-c));
    }
    x
}

/// `δ₂(u_a) ⊗ (∞,0)` and `z_a`, both torus-normalized.
fn boundary_of_u(gl: &Gl2Ctx, a: Elt) -> (StdChain, StdChain) {
    let r = gl.r;
    let [g1, g2, g3] = generators(r, a);
    let (inf, zero, one) = ([1, 0], [0, 1], [1, 1]);
    let mut z = StdChain::new();
    for (c, tup) in [(1, [g2, g1]), (-1, [g3, Mat2::IDENTITY])] {
        gl.add(&mut z, c, &tup, [zero, one]);
        gl.add(&mut z, -c, &tup, [inf, one]);
        gl.add(&mut z, c, &tup, [inf, zero]);
    }
    let mut d = StdChain::new();
    for (c, [x0, x1, x2]) in u_chain(gl, a) {
        gl.add(&mut d, c, &[x1, x2], [inf, zero]);
        gl.add(&mut d, -c, &[x0, x2], [inf, zero]);
        gl.add(&mut d, c, &[x0, x1], [inf, zero]);
    }
    (d, z)
}

/// `∂(to_bar t) = to_bar(δ t)` for every triple occurring in `u_a` and `u_a w`.
fn maps_commute(gl: &Gl2Ctx, cx: &TorusContext, a: Elt) -> bool {
    let mut tuples = Vec::new();
    for (_, tup) in u_chain(gl, a) {
        tuples.push(tup.to_vec());
        tuples.push(tup.iter().map(|g| gl.mul(g, &W)).collect());
    }
    tuples.iter().all(|t| {
        let lhs = bar_boundary(&cx.torus, &BarChain::cell(to_bar(gl, cx, t)));
        let mut rhs = BarChain::zero(1);
        for (s, face) in [(1, vec![t[1], t[2]]), (-1, vec![t[0], t[2]]), (1, vec![t[0], t[1]])] {
            rhs.add_term(to_bar(gl, cx, &face), Int::from(s));
        }
        lhs == rhs
    })
}

pub fn verify_degree_two_at(cx: &TorusContext, a: Elt) -> Result<DegreeTwoCheck> {
    let r = &cx.ring;
    if !admissible(r).contains(&a) {
        return Err(Error::Precondition(format!("{} is not admissible", r.name(a))));
    }
    let gl = Gl2Ctx::new(r);
    let (du, z) = boundary_of_u(&gl, a);
    let x = pushed_bar_form(cx, a);
    let expected = expected_bar_form(cx, a);
    let (cell, stated) = delta3_identity(cx, a);
    let d3 = bar_boundary(&cx.torus, &cell);
    let c_form = expected_c_form(cx, a)?;
    let exterior_class = match &cx.exterior_quotient {
        Some(q) => Some({
            let oma = r.one_minus(a);
            let target = cx.wedge((a, 1), (oma, 1))?.minus(&cx.wedge((a, 1), (1, oma))?);
            let diff = x.minus(&target);
            bar_boundary(&cx.torus, &x).is_zero() && q.solve(&diff.to_dense(cx.torus.order())).is_some()
        }),
        None => None,
    };
    Ok(DegreeTwoCheck {
        a: r.name(a).to_string(),
        boundary_of_u: du == z,
        bar_form: x == expected,
        bar_form_diff: diff_chains(&cx.torus, &x, &expected),
        chain_maps_commute: maps_commute(&gl, cx, a),
        exterior_class,
        delta3: d3 == stated,
        c_form: expected.plus(&d3) == c_form,
    })
}

/// Every identity for every admissible `a`; `R` must be local.
pub fn verify_degree_two(ring: &Arc<FiniteRing>, with_homology: bool) -> Result<Vec<DegreeTwoCheck>> {
    if !ring.is_local() {
        return Err(Error::Unsupported(format!(
            "{}: the Borel section needs a local ring",
            ring.spec
        )));
    }
    let cx = TorusContext::new(ring, with_homology)?;
    admissible(ring)
        .into_iter()
        .map(|a| verify_degree_two_at(&cx, a))
        .collect()
}

/// The δ₃ boundary and the resulting `c`-form of `X_a`, for one `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Delta3Check {
    pub a: String,
    pub delta3: bool,
    pub c_form: bool,
    pub delta3_diff: Vec<TermDiff>,
}

impl Delta3Check {
    pub fn pass(&self) -> bool {
        self.delta3 && self.c_form
    }
}

/// Bar-level identities only, which live in the torus and need no section.
pub fn verify_delta3(ring: &Arc<FiniteRing>) -> Result<Vec<Delta3Check>> {
    let cx = TorusContext::new(ring, false)?;
    admissible(ring)
        .into_iter()
        .map(|a| {
            let (cell, stated) = delta3_identity(&cx, a);
            let d3 = bar_boundary(&cx.torus, &cell);
            let c_form = expected_bar_form(&cx, a).plus(&d3) == expected_c_form(&cx, a)?;
            Ok(Delta3Check {
                a: ring.name(a).to_string(),
                delta3: d3 == stated,
                c_form,
                delta3_diff: diff_chains(&cx.torus, &d3, &stated),
            })
        })
        .collect()
}
