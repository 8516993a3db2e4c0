//! Identities satisfied by the cycles `c(g_1, .., g_n)` of commuting tuples.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::abgrp::matrix::row_from_dense;
use crate::abgrp::{exterior_square, AbHom, AbPresentation};
use crate::error::Result;
use crate::int::Int;

use super::chain::{c_cycle, shuffle, BarChain};
use super::group::{abelian_types, FiniteGroup};
use super::homology::{BarHomology, BoundaryVerdict};

/// Tally for one identity over a family of cases.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityTally {
    pub name: String,
    pub cases: usize,
    pub certified: usize,
    pub modular_only: usize,
    /// First few failing cases, rendered.
    pub failures: Vec<String>,
}

impl IdentityTally {
    fn new(name: &str) -> Self {
        IdentityTally {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn pass(&self) -> bool {
        self.certified == self.cases
    }

    fn record(&mut self, verdict: BoundaryVerdict, case: impl FnOnce() -> String) {
        self.cases += 1;
        match verdict {
            BoundaryVerdict::Boundary => self.certified += 1,
            BoundaryVerdict::ModularOnly => self.modular_only += 1,
            _ => {
                if self.failures.len() < 5 {
                    self.failures.push(case());
                }
            }
        }
    }

    fn merge(&mut self, o: IdentityTally) {
        self.cases += o.cases;
        self.certified += o.certified;
        self.modular_only += o.modular_only;
        for f in o.failures {
            if self.failures.len() < 5 {
                self.failures.push(f);
            }
        }
    }
}

fn names(g: &FiniteGroup, xs: &[u32]) -> String {
    xs.iter().map(|&x| g.name(x)).collect::<Vec<_>>().join(",")
}

/// `c(gh, g_2, ..) - c(g, g_2, ..) - c(h, g_2, ..)` is a boundary.
pub fn multilinearity_case(h: &BarHomology, g1: u32, k1: u32, rest: &[u32]) -> Result<BoundaryVerdict> {
    let g = &h.group;
    let with = |x: u32| -> Result<BarChain> {
        let mut v = vec![x];
        v.extend_from_slice(rest);
        c_cycle(g, &v)
    };
    let z = with(g.mul(g1, k1))?.minus(&with(g1)?).minus(&with(k1)?);
    Ok(h.boundary_certificate(&z)?.verdict)
}

/// `c(g_σ) - sign(σ) c(g)` is a boundary (in fact zero).
pub fn sign_rule_case(h: &BarHomology, elems: &[u32], perm: &[usize], sign: i64) -> Result<BoundaryVerdict> {
    let g = &h.group;
    let permuted: Vec<u32> = perm.iter().map(|&i| elems[i]).collect();
    let z = c_cycle(g, &permuted)?.minus(&c_cycle(g, elems)?.scaled(&Int::from(sign)));
    Ok(h.boundary_certificate(&z)?.verdict)
}

fn transpositions(n: usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut p: Vec<usize> = (0..n).collect();
            p.swap(i, j);
            out.push((p, -1));
        }
    }
    if n >= 3 {
        // The rotation, an n-cycle of sign (-1)^(n-1).
        let q: Vec<usize> = (1..n).chain([0]).collect();
        out.push((q, if n % 2 == 1 { 1 } else { -1 }));
    }
    out
}

/// Multilinearity in the first slot and the sign rule, on every tuple of
/// degree `n` in an abelian group.
pub fn exhaustive_commuting_checks(g: &Arc<FiniteGroup>, n: usize) -> Result<[IdentityTally; 2]> {
    let h = BarHomology::new(g.clone());
    let ord = g.order() as u32;
    let mut lin = IdentityTally::new("multilinearity");
    let mut sgn = IdentityTally::new("sign_rule");
    let total = (ord as usize).pow(n as u32 + 1);
    for idx in 0..total {
        let t = super::chain::cell_tuple(idx, n + 1, ord as usize);
        let (g1, k1, rest) = (t[0], t[1], &t[2..]);
        let v = multilinearity_case(&h, g1, k1, rest)?;
        lin.record(v, || {
            format!("{}: ({}·{}, {})", g.label, g.name(g1), g.name(k1), names(g, rest))
        });
    }
    let total = (ord as usize).pow(n as u32);
    for idx in 0..total {
        let t = super::chain::cell_tuple(idx, n, ord as usize);
        for (p, s) in transpositions(n) {
            let v = sign_rule_case(&h, &t, &p, s)?;
            sgn.record(v, || format!("{}: ({}) by {:?}", g.label, names(g, &t), p));
        }
    }
    Ok([lin, sgn])
}

/// Seeded random multilinearity and sign cases in abelian groups of order at
/// most `max_order`, degree between 2 and 3.
pub fn random_commuting_checks(count: usize, max_order: usize, seed: u64) -> Result<[IdentityTally; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let groups: Vec<Vec<usize>> = (2..=max_order).flat_map(abelian_types).collect();
    let mut lin = IdentityTally::new("multilinearity");
    let mut sgn = IdentityTally::new("sign_rule");
    let mut cache: Vec<(Vec<usize>, Arc<BarHomology>)> = Vec::new();
    for _ in 0..count {
        let f = groups[rng.gen_range(0..groups.len())].clone();
        let n = rng.gen_range(2..=3usize);
        let h = match cache.iter().find(|(ff, _)| *ff == f) {
            Some((_, h)) => h.clone(),
            None => {
                let h = Arc::new(BarHomology::new(Arc::new(FiniteGroup::abelian(&f))));
                cache.push((f.clone(), h.clone()));
                h
            }
        };
        let g = &h.group;
        let ord = g.order() as u32;
        let t: Vec<u32> = (0..=n).map(|_| rng.gen_range(0..ord)).collect();
        let v = multilinearity_case(&h, t[0], t[1], &t[2..])?;
        lin.record(v, || format!("{}: ({})", g.label, names(g, &t)));
        let elems = &t[1..];
        let perms = transpositions(n);
        let (p, s) = &perms[rng.gen_range(0..perms.len())];
        let v = sign_rule_case(&h, elems, p, *s)?;
        sgn.record(v, || format!("{}: ({}) by {:?}", g.label, names(g, elems), p));
    }
    Ok([lin, sgn])
}

/// `c(g) ⋆ c(h) = c((g,1), (1,h))` in `G × H`, exactly and in homology.
pub fn shuffle_case(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gh: &BarHomology,
    xs: &[u32],
    ys: &[u32],
) -> Result<BoundaryVerdict> {
    let k = h.order();
    let lhs = shuffle(&c_cycle(g, xs)?, &c_cycle(h, ys)?, k);
    let mut pairs: Vec<u32> = xs.iter().map(|&x| x * k as u32).collect();
    pairs.extend(ys.iter().copied());
    let rhs = c_cycle(&gh.group, &pairs)?;
    Ok(gh.class_equal(&lhs, &rhs)?.verdict)
}

/// Shuffle products of `c`-cycles in degrees `p + q ≤ 3` for each pair of
/// groups, exhaustively in the entries.
pub fn shuffle_checks(pairs: &[(Vec<usize>, Vec<usize>)]) -> Result<IdentityTally> {
    let mut tally = IdentityTally::new("shuffle");
    for (a, b) in pairs {
        let g = FiniteGroup::abelian(a);
        let h = FiniteGroup::abelian(b);
        let prod = Arc::new(FiniteGroup::product(&g, &h)?);
        let ph = BarHomology::new(prod.clone());
        let mut t = IdentityTally::new("shuffle");
        for (p, q) in [(1usize, 1usize), (1, 2), (2, 1)] {
            let cases_g = (g.order()).pow(p as u32);
            let cases_h = (h.order()).pow(q as u32);
            for i in 0..cases_g {
                let xs = super::chain::cell_tuple(i, p, g.order());
                for j in 0..cases_h {
                    let ys = super::chain::cell_tuple(j, q, h.order());
                    let v = shuffle_case(&g, &h, &ph, &xs, &ys)?;
                    t.record(v, || {
                        format!(
                            "{} × {}: c({}) ⋆ c({})",
                            g.label,
                            h.label,
                            names(&g, &xs),
                            names(&h, &ys)
                        )
                    });
                }
            }
        }
        tally.merge(t);
    }
    Ok(tally)
}

/// `Λ²A → H₂(A)`, `a∧b ↦ c(a,b)`, for one abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExteriorComparison {
    pub group: String,
    pub exterior: Vec<Int>,
    pub h2: Vec<Int>,
    pub well_defined: bool,
    pub injective: bool,
    pub bijective: bool,
}

pub fn exterior_to_h2(factors: &[usize]) -> Result<ExteriorComparison> {
    let g = Arc::new(FiniteGroup::abelian(factors));
    let h = BarHomology::new(g.clone());
    let a = Arc::new(AbPresentation::diagonal(
        &factors.iter().map(|&f| Int::from(f)).collect::<Vec<_>>(),
    ));
    let ext = exterior_square(&a);
    let k = a.rank_canonical();
    // Group element of canonical generator i of A.
    let elem = |i: usize| -> u32 {
        let v = a.lift(i);
        let digits: Vec<usize> = v
            .iter()
            .zip(factors)
            .map(|(x, &f)| x.rem_euclid(&Int::from(f)).to_i64().unwrap() as usize)
            .collect();
        digits.iter().zip(factors).fold(0, |acc, (d, f)| acc * f + d) as u32
    };
    let p2 = h.chains_mod_boundaries(2)?;
    let ord = g.order();
    let images = (0..k * k)
        .map(|gi| {
            let (i, j) = (gi / k, gi % k);
            let z = c_cycle(&g, &[elem(i), elem(j)])?;
            Ok(row_from_dense(&z.to_dense(ord)))
        })
        .collect::<Result<Vec<_>>>()?;
    let f = AbHom::new(ext.group.clone(), p2.clone(), images);
    let well_defined = f.check_well_defined() == crate::abgrp::WellDefined::Yes;
    let h2 = h.homology(2)?;
    let injective = well_defined && f.is_injective();
    let bijective = injective && ext.group.order() == h2.order();
    Ok(ExteriorComparison {
        group: g.label.clone(),
        exterior: ext.group.invariant_factors(),
        h2: h2.invariant_factors,
        well_defined,
        injective,
        bijective,
    })
}
