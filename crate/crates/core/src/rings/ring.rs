//! Explicit finite commutative rings as operation tables.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

use super::spec::RingSpec;
use super::units::UnitGroup;

/// Default limit on the number of ring elements.
pub const DEFAULT_RING_BUDGET: usize = 4096;

/// Element index.
pub type Elt = u32;

/// Nilpotent presentation `R = base[x]/(x^m)` of a dual or truncated ring.
#[derive(Debug)]
pub struct NilpotentData {
    pub base: Arc<FiniteRing>,
    /// The designated nilpotent generator.
    pub generator: Elt,
    /// Base element index -> ring element index.
    pub section: Vec<Elt>,
    /// Ring element index -> base element index (set the generator to 0).
    pub augmentation: Vec<Elt>,
}

/// A finite commutative ring with elements `0..size`, `0` the zero and `1`
/// the identity.
#[derive(Debug)]
pub struct FiniteRing {
    pub spec: RingSpec,
    size: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    units: Vec<Elt>,
    names: Vec<String>,
    nilpotent: Option<NilpotentData>,
    unit_group: UnitGroup,
}

const NONE: u16 = u16::MAX;

/// Tables produced by a constructor, before derived data is filled in.
struct Raw {
    size: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    names: Vec<String>,
    nilpotent: Option<NilpotentData>,
}

fn poly_name(coeffs: &[String], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c == "0" {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let coef = if c.contains('+') || c.contains(',') {
            format!("({c})")
        } else {
            c.clone()
        };
        terms.push(match (i, coef.as_str()) {
            (0, _) => coef,
            (_, "1") => mono,
            _ => format!("{coef}{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

fn zmod(n: usize) -> Raw {
    let mut add = vec![0u16; n * n];
    let mut mul = vec![0u16; n * n];
    for a in 0..n {
        for b in 0..n {
            add[a * n + b] = ((a + b) % n) as u16;
            mul[a * n + b] = ((a * b) % n) as u16;
        }
    }
    Raw {
        size: n,
        add,
        mul,
        names: (0..n).map(|i| i.to_string()).collect(),
        nilpotent: None,
    }
}

/// Coefficient vector (low degree first) of encoding `e` in base `p`.
fn digits(mut e: usize, p: usize, k: usize) -> Vec<usize> {
    let mut d = vec![0; k];
    for x in d.iter_mut() {
        *x = e % p;
        e /= p;
    }
    d
}

fn poly_rem(mut a: Vec<usize>, f: &[usize], p: usize) -> Vec<usize> {
    // f monic of degree deg f.
    let df = f.len() - 1;
    while a.len() > df {
        let lead = a.pop().unwrap();
        if lead == 0 {
            continue;
        }
        let off = a.len() - df;
        for i in 0..df {
            a[off + i] = (a[off + i] + (p - lead) * f[i] % p) % p;
        }
    }
    a
}

fn poly_mul(a: &[usize], b: &[usize], p: usize) -> Vec<usize> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// Whether the monic polynomial `f` (low degree first) is irreducible over Z/p.
fn irreducible(f: &[usize], p: usize) -> bool {
    let k = f.len() - 1;
    for d in 1..=k / 2 {
        for e in 0..p.pow(d as u32) {
            let mut g = digits(e, p, d);
            g.push(1);
            let r = poly_rem(f.to_vec(), &g, p);
            if r.iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

/// The least monic irreducible of degree `k` over Z/p, ordered by the
/// encoding `sum c_i p^i` of its lower coefficients.
pub fn least_irreducible(p: usize, k: usize) -> Vec<usize> {
    (0..p.pow(k as u32))
        .map(|e| {
            let mut f = digits(e, p, k);
            f.push(1);
            f
        })
        .find(|f| irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

fn gf(p: usize, k: usize) -> Raw {
    if k == 1 {
        return zmod(p);
    }
    let f = least_irreducible(p, k);
    let n = p.pow(k as u32);
    let polys: Vec<Vec<usize>> = (0..n).map(|e| digits(e, p, k)).collect();
    let encode = |v: &[usize]| v.iter().rev().fold(0, |acc, &c| acc * p + c);
    let mut add = vec![0u16; n * n];
    let mut mul = vec![0u16; n * n];
    for a in 0..n {
        for b in a..n {
            let s: Vec<usize> = polys[a].iter().zip(&polys[b]).map(|(x, y)| (x + y) % p).collect();
            let mut m = poly_rem(poly_mul(&polys[a], &polys[b], p), &f, p);
            m.resize(k, 0);
            let (s, m) = (encode(&s) as u16, encode(&m) as u16);
            add[a * n + b] = s;
            add[b * n + a] = s;
            mul[a * n + b] = m;
            mul[b * n + a] = m;
        }
    }
    let digit_names: Vec<String> = (0..p).map(|i| i.to_string()).collect();
    let names = polys
        .iter()
        .map(|v| {
            let c: Vec<String> = v.iter().map(|&x| digit_names[x].clone()).collect();
            poly_name(&c, "w")
        })
        .collect();
    Raw {
        size: n,
        add,
        mul,
        names,
        nilpotent: None,
    }
}

/// `base[x]/(x^m)`, with element `sum c_i x^i` at index `sum c_i |base|^i`.
fn truncated(base: Arc<FiniteRing>, m: usize, var: &str) -> Raw {
    let b = base.size();
    let n = b.pow(m as u32);
    let vecs: Vec<Vec<usize>> = (0..n).map(|e| digits(e, b, m)).collect();
    let encode = |v: &[usize]| v.iter().rev().fold(0, |acc, &c| acc * b + c);
    let mut add = vec![0u16; n * n];
    let mut mul = vec![0u16; n * n];
    for i in 0..n {
        for j in i..n {
            let (x, y) = (&vecs[i], &vecs[j]);
            let s: Vec<usize> = x
                .iter()
                .zip(y)
                .map(|(&u, &v)| base.add(u as Elt, v as Elt) as usize)
                .collect();
            let mut prod = vec![0usize; m];
            for (di, &u) in x.iter().enumerate() {
                if u == 0 {
                    continue;
                }
                for (dj, &v) in y.iter().enumerate().take(m - di) {
                    let t = base.mul(u as Elt, v as Elt);
                    prod[di + dj] = base.add(prod[di + dj] as Elt, t) as usize;
                }
            }
            let (s, pr) = (encode(&s) as u16, encode(&prod) as u16);
            add[i * n + j] = s;
            add[j * n + i] = s;
            mul[i * n + j] = pr;
            mul[j * n + i] = pr;
        }
    }
    let names = vecs
        .iter()
        .map(|v| {
            let c: Vec<String> = v.iter().map(|&x| base.name(x as Elt).to_string()).collect();
            poly_name(&c, var)
        })
        .collect();
    let section = (0..b as Elt).collect();
    let augmentation = vecs.iter().map(|v| v[0] as Elt).collect();
    Raw {
        size: n,
        add,
        mul,
        names,
        nilpotent: Some(NilpotentData {
            base,
            generator: b as Elt,
            section,
            augmentation,
        }),
    }
}

fn product(factors: Vec<Arc<FiniteRing>>) -> Raw {
    let sizes: Vec<usize> = factors.iter().map(|f| f.size()).collect();
    let n: usize = sizes.iter().product();
    let decode = |mut e: usize| -> Vec<usize> {
        sizes
            .iter()
            .map(|&s| {
                let d = e % s;
                e /= s;
                d
            })
            .collect()
    };
    let encode = |v: &[usize]| -> usize { v.iter().zip(&sizes).rev().fold(0, |acc, (&c, &s)| acc * s + c) };
    // Natural mixed-radix index of (1, .., 1); swapped with index 1 so that
    // the identity sits at 1.
    let one_nat = encode(&vec![1; sizes.len()]);
    let to_nat = |i: usize| -> usize {
        if i == 1 {
            one_nat
        } else if i == one_nat {
            1
        } else {
            i
        }
    };
    let comps: Vec<Vec<usize>> = (0..n).map(|i| decode(to_nat(i))).collect();
    let mut add = vec![0u16; n * n];
    let mut mul = vec![0u16; n * n];
    for i in 0..n {
        for j in i..n {
            let s: Vec<usize> = (0..sizes.len())
                .map(|t| factors[t].add(comps[i][t] as Elt, comps[j][t] as Elt) as usize)
                .collect();
            let p: Vec<usize> = (0..sizes.len())
                .map(|t| factors[t].mul(comps[i][t] as Elt, comps[j][t] as Elt) as usize)
                .collect();
            let (s, p) = (to_nat(encode(&s)) as u16, to_nat(encode(&p)) as u16);
            add[i * n + j] = s;
            add[j * n + i] = s;
            mul[i * n + j] = p;
            mul[j * n + i] = p;
        }
    }
    let names = comps
        .iter()
        .map(|c| {
            let parts: Vec<&str> = c.iter().enumerate().map(|(t, &x)| factors[t].name(x as Elt)).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    Raw {
        size: n,
        add,
        mul,
        names,
        nilpotent: None,
    }
}

/// Builds the ring for `spec` with the default budget.
pub fn build_ring(spec: &RingSpec) -> Result<Arc<FiniteRing>> {
    build_ring_with_budget(spec, DEFAULT_RING_BUDGET)
}

pub fn build_ring_with_budget(spec: &RingSpec, budget: usize) -> Result<Arc<FiniteRing>> {
    spec.validate()?;
    let size = spec.size();
    if size > budget as u128 || size >= NONE as u128 {
        return Err(Error::budget(
            format!("ring {spec}"),
            format!("{size} elements"),
            format!("{} elements", budget.min(NONE as usize - 1)),
        ));
    }
    let raw = match spec {
        RingSpec::Zmod(n) => zmod(*n as usize),
        RingSpec::GF { p, k } => gf(*p as usize, *k as usize),
        RingSpec::Dual(b) => truncated(build_ring_with_budget(b, budget)?, 2, "e"),
        RingSpec::Trunc(b, m) => truncated(build_ring_with_budget(b, budget)?, *m as usize, "t"),
        RingSpec::Prod(v) => product(
            v.iter()
                .map(|s| build_ring_with_budget(s, budget))
                .collect::<Result<_>>()?,
        ),
    };
    let ring = FiniteRing::from_raw(spec.clone(), raw)?;
    ring.check_axioms(0x5eed)?;
    Ok(Arc::new(ring))
}

impl FiniteRing {
    fn from_raw(spec: RingSpec, raw: Raw) -> Result<FiniteRing> {
        let n = raw.size;
        let mut neg = vec![NONE; n];
        let mut inv = vec![NONE; n];
        for a in 0..n {
            for b in 0..n {
                if raw.add[a * n + b] == 0 {
                    neg[a] = b as u16;
                }
                if raw.mul[a * n + b] == 1 {
                    inv[a] = b as u16;
                }
            }
        }
        if neg.contains(&NONE) {
            return Err(Error::Structural(format!("{spec}: additive inverse missing")));
        }
        let units: Vec<Elt> = (0..n as Elt).filter(|&a| inv[a as usize] != NONE).collect();
        let mut ring = FiniteRing {
            spec,
            size: n,
            add: raw.add,
            mul: raw.mul,
            neg,
            inv,
            units,
            names: raw.names,
            nilpotent: raw.nilpotent,
            unit_group: UnitGroup::placeholder(),
        };
        ring.unit_group = UnitGroup::decompose(&ring)?;
        Ok(ring)
    }

    /// Ring axioms on all triples for small rings, on seeded random triples
    /// otherwise.
    pub fn check_axioms(&self, seed: u64) -> Result<()> {
        let n = self.size as Elt;
        let check = |a: Elt, b: Elt, c: Elt| -> bool {
            self.add(a, b) == self.add(b, a)
                && self.mul(a, b) == self.mul(b, a)
                && self.add(self.add(a, b), c) == self.add(a, self.add(b, c))
                && self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
                && self.mul(a, self.add(b, c)) == self.add(self.mul(a, b), self.mul(a, c))
        };
        let fail = |a, b, c| {
            Err(Error::Structural(format!(
                "{}: ring axioms fail at ({a},{b},{c})",
                self.spec
            )))
        };
        if (self.size as u64).pow(3) <= 1 << 18 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !check(a, b, c) {
                            return fail(a, b, c);
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..100_000 {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !check(a, b, c) {
                    return fail(a, b, c);
                }
            }
        }
        for a in 0..n {
            if self.add(0, a) != a || self.mul(1, a) != a || self.mul(0, a) != 0 {
                return Err(Error::Structural(format!("{}: identity laws fail at {a}", self.spec)));
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn add(&self, a: Elt, b: Elt) -> Elt {
        self.add[a as usize * self.size + b as usize] as Elt
    }

    #[inline]
    pub fn mul(&self, a: Elt, b: Elt) -> Elt {
        self.mul[a as usize * self.size + b as usize] as Elt
    }

    #[inline]
    pub fn neg(&self, a: Elt) -> Elt {
        self.neg[a as usize] as Elt
    }

    #[inline]
    pub fn sub(&self, a: Elt, b: Elt) -> Elt {
        self.add(a, self.neg(b))
    }

    /// `1 - a`.
    #[inline]
    pub fn one_minus(&self, a: Elt) -> Elt {
        self.sub(1, a)
    }

    #[inline]
    pub fn is_unit(&self, a: Elt) -> bool {
        self.inv[a as usize] != NONE
    }

    pub fn inv(&self, a: Elt) -> Option<Elt> {
        let v = self.inv[a as usize];
        (v != NONE).then_some(v as Elt)
    }

    /// Inverse of a known unit.
    pub fn inv_unit(&self, a: Elt) -> Elt {
        self.inv(a)
            .unwrap_or_else(|| panic!("{} is not a unit in {}", self.name(a), self.spec))
    }

    pub fn div(&self, a: Elt, b: Elt) -> Elt {
        self.mul(a, self.inv_unit(b))
    }

    pub fn pow(&self, a: Elt, e: u64) -> Elt {
        (0..e).fold(1, |acc, _| self.mul(acc, a))
    }

    pub fn units(&self) -> &[Elt] {
        &self.units
    }

    pub fn elements(&self) -> impl Iterator<Item = Elt> {
        0..self.size as Elt
    }

    pub fn name(&self, a: Elt) -> &str {
        &self.names[a as usize]
    }

    pub fn find(&self, name: &str) -> Option<Elt> {
        self.names.iter().position(|n| n == name).map(|i| i as Elt)
    }

    pub fn unit_group(&self) -> &UnitGroup {
        &self.unit_group
    }

    pub fn nilpotent(&self) -> Option<&NilpotentData> {
        self.nilpotent.as_ref()
    }

    /// Local iff the non-units are closed under addition.
    pub fn is_local(&self) -> bool {
        let nonunits: Vec<Elt> = self.elements().filter(|&a| !self.is_unit(a)).collect();
        nonunits
            .iter()
            .all(|&a| nonunits.iter().all(|&b| !self.is_unit(self.add(a, b))))
    }

    pub fn is_field(&self) -> bool {
        self.units.len() + 1 == self.size
    }

    /// Stable digest of the operation tables.
    pub fn table_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.spec.to_string().as_bytes());
        for t in [&self.add, &self.mul] {
            for v in t.iter() {
                h.update(v.to_le_bytes());
            }
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}
