//! Finite groups given by multiplication tables.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::confcx::{gl2_elements, Mat2};
use crate::error::{Error, Result};
use crate::rings::{ring, FiniteRing};

/// Largest group order for which a multiplication table is built.
pub const MAX_TABLE_ORDER: usize = 1 << 13;

/// Portable form of a multiplication table, row `i` holding `i·j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTable {
    pub label: String,
    pub names: Vec<String>,
    pub table: Vec<Vec<u32>>,
}

/// A finite group with identity at index 0.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub label: String,
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    names: Vec<String>,
}

impl FiniteGroup {
    /// Builds the table of a group whose elements are listed with the
    /// identity first.
    pub fn from_elements<T: Clone + Eq + Hash>(
        label: impl Into<String>,
        elems: &[T],
        mul: impl Fn(&T, &T) -> T,
        name: impl Fn(&T) -> String,
    ) -> Result<Self> {
        let label = label.into();
        let n = elems.len();
        if n > MAX_TABLE_ORDER {
            return Err(Error::budget(
                format!("multiplication table of {label}"),
                format!("order {n}"),
                format!("order {MAX_TABLE_ORDER}"),
            ));
        }
        let index: HashMap<&T, u32> = elems.iter().enumerate().map(|(i, e)| (e, i as u32)).collect();
        let mut table = vec![0u32; n * n];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                table[i * n + j] = *index
                    .get(&mul(a, b))
                    .ok_or_else(|| Error::Structural(format!("{label}: product leaves the element list")))?;
            }
        }
        Self::from_table(label, table, elems.iter().map(name).collect())
    }

    pub fn from_table(label: impl Into<String>, table: Vec<u32>, names: Vec<String>) -> Result<Self> {
        let label = label.into();
        let n = names.len();
        assert_eq!(table.len(), n * n);
        if n == 0 || (0..n).any(|i| table[i] != i as u32 || table[i * n] != i as u32) {
            return Err(Error::Structural(format!("{label}: element 0 is not the identity")));
        }
        let mut inverse = vec![u32::MAX; n];
        for i in 0..n {
            inverse[i] = (0..n as u32)
                .find(|&j| table[i * n + j as usize] == 0)
                .ok_or_else(|| Error::Structural(format!("{label}: element {i} has no inverse")))?;
        }
        Ok(FiniteGroup {
            label,
            order: n,
            table,
            inverse,
            names,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn to_table(&self) -> GroupTable {
        GroupTable {
            label: self.label.clone(),
            names: self.names.clone(),
            table: self.table.chunks(self.order).map(|r| r.to_vec()).collect(),
        }
    }

    /// Rebuilds a group from an exported table, checking the axioms.
    pub fn from_group_table(t: &GroupTable) -> Result<Self> {
        let n = t.names.len();
        if t.table.len() != n
            || t.table
                .iter()
                .any(|r| r.len() != n || r.iter().any(|&x| x as usize >= n))
        {
            return Err(Error::Parse(format!("{}: table is not {n} by {n}", t.label)));
        }
        let g = Self::from_table(t.label.clone(), t.table.concat(), t.names.clone())?;
        g.check_axioms(0)?;
        Ok(g)
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        (0..e).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn commute(&self, a: u32, b: u32) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order as u32).all(|a| (0..a).all(|b| self.commute(a, b)))
    }

    pub fn name(&self, a: u32) -> &str {
        &self.names[a as usize]
    }

    pub fn find(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }

    pub fn element_order(&self, a: u32) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Associativity on all triples up to order 64, on `10^5` seeded random
    /// triples above; inverses are checked exhaustively.
    pub fn check_axioms(&self, seed: u64) -> Result<()> {
        let n = self.order as u32;
        let bad = |a, b, c| self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c));
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if bad(a, b, c) {
                            return Err(Error::Structural(format!("{}: not associative", self.label)));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..100_000 {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if bad(a, b, c) {
                    return Err(Error::Structural(format!("{}: not associative", self.label)));
                }
            }
        }
        for a in 0..n {
            if self.mul(a, self.inv(a)) != 0 || self.mul(self.inv(a), a) != 0 {
                return Err(Error::Structural(format!("{}: bad inverse of {a}", self.label)));
            }
        }
        Ok(())
    }

    pub fn cyclic(n: usize) -> Self {
        Self::abelian(&[n])
    }

    /// `Z/n_1 × .. × Z/n_k`; element index is mixed radix with the first
    /// factor most significant.
    pub fn abelian(factors: &[usize]) -> Self {
        let n: usize = factors.iter().product();
        let digits = |mut x: usize| {
            let mut d = vec![0; factors.len()];
            for (k, f) in factors.iter().enumerate().rev() {
                d[k] = x % f;
                x /= f;
            }
            d
        };
        let index = |d: &[usize]| d.iter().zip(factors).fold(0, |acc, (x, f)| acc * f + x);
        let mut table = vec![0u32; n * n];
        for i in 0..n {
            let di = digits(i);
            for j in 0..n {
                let s: Vec<usize> = digits(j)
                    .iter()
                    .zip(&di)
                    .zip(factors)
                    .map(|((a, b), f)| (a + b) % f)
                    .collect();
                table[i * n + j] = index(&s) as u32;
            }
        }
        let names = (0..n)
            .map(|i| {
                let d = digits(i);
                if d.len() == 1 {
                    d[0].to_string()
                } else {
                    format!("({})", d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
                }
            })
            .collect();
        let label = if factors.len() == 1 {
            format!("cyclic:{}", factors[0])
        } else {
            format!(
                "abelian:{}",
                factors.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("x")
            )
        };
        Self::from_table(label, table, names).expect("abelian group table")
    }

    /// Direct product; `(g, h)` has index `g |H| + h`.
    pub fn product(g: &FiniteGroup, h: &FiniteGroup) -> Result<Self> {
        let (m, k) = (g.order, h.order);
        let n = m * k;
        if n > MAX_TABLE_ORDER {
            return Err(Error::budget(
                "multiplication table of a product",
                format!("order {n}"),
                format!("order {MAX_TABLE_ORDER}"),
            ));
        }
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let x = g.mul((a / k) as u32, (b / k) as u32) as usize;
                let y = h.mul((a % k) as u32, (b % k) as u32) as usize;
                table[a * n + b] = (x * k + y) as u32;
            }
        }
        let names = (0..n)
            .map(|a| format!("({},{})", g.names[a / k], h.names[a % k]))
            .collect();
        Self::from_table(format!("prod:{},{}", g.label, h.label), table, names)
    }

    /// `R^x`; index `i` is the `i`-th unit in ring order, so the identity is 0.
    pub fn units(r: &FiniteRing) -> Result<Self> {
        let units = r.units().to_vec();
        Self::from_elements(
            format!("units:{}", r.spec),
            &units,
            |a, b| r.mul(*a, *b),
            |a| r.name(*a).to_string(),
        )
    }

    /// The diagonal torus `R^x × R^x`, element `(x, y)` standing for `diag(x, y)`.
    pub fn torus(r: &FiniteRing) -> Result<Self> {
        let u = Self::units(r)?;
        let mut t = Self::product(&u, &u)?;
        t.label = format!("torus:{}", r.spec);
        Ok(t)
    }

    /// Subgroup generated by the given elements, with the embedding.
    pub fn generated(&self, gens: &[u32]) -> Result<(FiniteGroup, Vec<u32>)> {
        let mut elems = vec![0u32];
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    elems.push(y);
                }
            }
            i += 1;
        }
        elems[1..].sort();
        let sub = Self::from_elements(
            format!("<{}>", self.label),
            &elems,
            |a, b| self.mul(*a, *b),
            |a| self.names[*a as usize].clone(),
        )?;
        Ok((sub, elems))
    }
}

/// A group of invertible 2×2 matrices over a ring.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    pub ring: Arc<FiniteRing>,
    pub group: FiniteGroup,
    pub mats: Vec<Mat2>,
    index: HashMap<Mat2, u32>,
}

impl MatrixGroup {
    pub fn new(label: String, ring: &Arc<FiniteRing>, mut mats: Vec<Mat2>) -> Result<Self> {
        mats.sort();
        let pos = mats
            .iter()
            .position(|m| *m == Mat2::IDENTITY)
            .ok_or_else(|| Error::Structural(format!("{label}: identity matrix missing")))?;
        let id = mats.remove(pos);
        mats.insert(0, id);
        let r = ring.clone();
        let group = FiniteGroup::from_elements(label, &mats, |a, b| a.mul(&r, b), |m| m.render(&r))?;
        let index = mats.iter().enumerate().map(|(i, m)| (*m, i as u32)).collect();
        Ok(MatrixGroup {
            ring: ring.clone(),
            group,
            mats,
            index,
        })
    }

    pub fn index_of(&self, m: &Mat2) -> Option<u32> {
        self.index.get(m).copied()
    }

    pub fn gl2(r: &Arc<FiniteRing>) -> Result<Self> {
        let mats = gl2_elements(r);
        check_order(&format!("gl2:{}", r.spec), mats.len())?;
        Self::new(format!("gl2:{}", r.spec), r, mats)
    }

    pub fn sl2(r: &Arc<FiniteRing>) -> Result<Self> {
        let mats: Vec<Mat2> = gl2_elements(r).into_iter().filter(|m| m.det(r) == 1).collect();
        check_order(&format!("sl2:{}", r.spec), mats.len())?;
        Self::new(format!("sl2:{}", r.spec), r, mats)
    }
}

fn check_order(label: &str, n: usize) -> Result<()> {
    if n > MAX_TABLE_ORDER {
        return Err(Error::budget(
            format!("multiplication table of {label}"),
            format!("order {n}"),
            format!("order {MAX_TABLE_ORDER}"),
        ));
    }
    Ok(())
}

/// Order of `GL₂(R)` for a local ring, computed without building the group.
pub fn gl2_order(r: &FiniteRing) -> u64 {
    let n = r.size() as u64;
    let u = r.units().len() as u64;
    if r.is_local() {
        // Columns: unimodular first column, second column completing a basis.
        let m = n - u;
        (n * n - m * m) * (n * n - n * m)
    } else {
        gl2_elements(r).len() as u64
    }
}

/// Splits on commas that are not inside parentheses.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn strip_parens(s: &str) -> &str {
    s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s)
}

/// Group specifications: `cyclic:<n>`, `abelian:<n>x<m>..`, `units:<ring>`,
/// `torus:<ring>`, `gl2:<ring>`, `sl2:<ring>`, `prod:<group>,<group>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Abelian(Vec<usize>),
    Units(String),
    Torus(String),
    Gl2(String),
    Sl2(String),
    Prod(Vec<GroupSpec>),
}

impl GroupSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("group spec '{s}' has no ':'")))?;
        let num = |t: &str| -> Result<usize> {
            t.parse::<usize>()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| Error::Parse(format!("bad group order '{t}' in '{s}'")))
        };
        let ring_arg = |t: &str| -> Result<String> {
            crate::rings::RingSpec::parse(t)?;
            Ok(t.to_string())
        };
        Ok(match head {
            "cyclic" => GroupSpec::Cyclic(num(rest)?),
            "abelian" => GroupSpec::Abelian(rest.split('x').map(num).collect::<Result<_>>()?),
            "units" => GroupSpec::Units(ring_arg(rest)?),
            "torus" => GroupSpec::Torus(ring_arg(rest)?),
            "gl2" => GroupSpec::Gl2(ring_arg(rest)?),
            "sl2" => GroupSpec::Sl2(ring_arg(rest)?),
            "prod" => {
                let parts = split_top(rest);
                if parts.len() < 2 {
                    return Err(Error::Parse(format!("prod needs two factors in '{s}'")));
                }
                GroupSpec::Prod(
                    parts
                        .into_iter()
                        .map(|p| GroupSpec::parse(strip_parens(p)))
                        .collect::<Result<_>>()?,
                )
            }
            _ => return Err(Error::Parse(format!("unknown group kind '{head}' in '{s}'"))),
        })
    }

    /// Order of the group, computed without building its table.
    pub fn order(&self) -> Result<u64> {
        Ok(match self {
            GroupSpec::Cyclic(n) => *n as u64,
            GroupSpec::Abelian(f) => f.iter().map(|&x| x as u64).product(),
            GroupSpec::Units(r) => ring(r)?.units().len() as u64,
            GroupSpec::Torus(r) => (ring(r)?.units().len() as u64).pow(2),
            GroupSpec::Gl2(r) => gl2_order(&*ring(r)?),
            GroupSpec::Sl2(r) => {
                let r = ring(r)?;
                gl2_order(&r) / r.units().len() as u64
            }
            GroupSpec::Prod(ps) => ps.iter().map(|p| p.order()).product::<Result<u64>>()?,
        })
    }

    pub fn build(&self) -> Result<FiniteGroup> {
        Ok(match self {
            GroupSpec::Cyclic(n) => FiniteGroup::cyclic(*n),
            GroupSpec::Abelian(f) => FiniteGroup::abelian(f),
            GroupSpec::Units(r) => FiniteGroup::units(&*ring(r)?)?,
            GroupSpec::Torus(r) => FiniteGroup::torus(&*ring(r)?)?,
            GroupSpec::Gl2(r) => MatrixGroup::gl2(&ring(r)?)?.group,
            GroupSpec::Sl2(r) => MatrixGroup::sl2(&ring(r)?)?.group,
            GroupSpec::Prod(ps) => {
                let mut g = ps[0].build()?;
                for p in &ps[1..] {
                    g = FiniteGroup::product(&g, &p.build()?)?;
                }
                g
            }
        })
    }
}

/// All isomorphism types of abelian groups of order `n`, as invariant-factor
/// lists `d_1 | d_2 | ..`.
pub fn abelian_types(n: usize) -> Vec<Vec<usize>> {
    fn partitions(k: u32, max: u32) -> Vec<Vec<u32>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in (1..=k.min(max)).rev() {
            for mut rest in partitions(k - first, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    let mut primes = Vec::new();
    let mut m = n;
    let mut p = 2;
    while m > 1 {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            primes.push((p, e));
        }
        p += 1;
    }
    let mut types: Vec<Vec<usize>> = vec![vec![]];
    for (p, e) in primes {
        let mut next = Vec::new();
        for t in &types {
            for part in partitions(e, e) {
                // Combine elementwise from the largest factor down.
                let len = t.len().max(part.len());
                let mut f = vec![1usize; len];
                for (i, x) in t.iter().rev().enumerate() {
                    f[len - 1 - i] *= x;
                }
                for (i, &x) in part.iter().enumerate() {
                    f[len - 1 - i] *= p.pow(x);
                }
                next.push(f);
            }
        }
        types = next;
    }
    if n == 1 {
        return vec![vec![1]];
    }
    types
}
