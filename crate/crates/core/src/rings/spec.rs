//! Ring specifications and their text grammar.
//!
//! ```text
//! zmod:<n>          Z/n
//! gf:<p>^<k>        the field with p^k elements (also gf:<q>)
//! dual:<spec>       R[e]/(e^2)
//! trunc:<spec>:<m>  R[t]/(t^m)
//! prod:<a>,<b>,..   direct product; nested products are parenthesized
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingSpec {
    Zmod(u64),
    GF { p: u64, k: u32 },
    Dual(Box<RingSpec>),
    Trunc(Box<RingSpec>, u32),
    Prod(Vec<RingSpec>),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Writes `q = p^k` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

impl RingSpec {
    /// Element count, saturating on overflow.
    pub fn size(&self) -> u128 {
        match self {
            RingSpec::Zmod(n) => *n as u128,
            RingSpec::GF { p, k } => (*p as u128).saturating_pow(*k),
            RingSpec::Dual(b) => b.size().saturating_mul(b.size()),
            RingSpec::Trunc(b, m) => b.size().saturating_pow(*m),
            RingSpec::Prod(v) => v.iter().fold(1u128, |a, s| a.saturating_mul(s.size())),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            RingSpec::Zmod(n) if *n < 2 => Err(Error::InvalidSpec(format!("zmod:{n} needs n >= 2"))),
            RingSpec::GF { p, .. } if !is_prime(*p) => Err(Error::InvalidSpec(format!("{p} is not prime"))),
            RingSpec::GF { k: 0, .. } => Err(Error::InvalidSpec("gf needs k >= 1".into())),
            RingSpec::Dual(b) => b.validate(),
            RingSpec::Trunc(b, m) => {
                if *m < 2 {
                    return Err(Error::InvalidSpec(format!("trunc needs m >= 2, got {m}")));
                }
                b.validate()
            }
            RingSpec::Prod(v) => {
                if v.len() < 2 {
                    return Err(Error::InvalidSpec("prod needs at least two factors".into()));
                }
                v.iter().try_for_each(|s| s.validate())
            }
            _ => Ok(()),
        }
    }

    pub fn parse(s: &str) -> Result<RingSpec> {
        let spec = parse_inner(s.trim())?;
        spec.validate()?;
        Ok(spec)
    }
}

fn parse_num<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("expected {what}, found {s:?}")))
}

fn strip_parens(s: &str) -> &str {
    let t = s.trim();
    if t.starts_with('(') && t.ends_with(')') {
        // Only strip if the parentheses enclose the whole string.
        let mut depth = 0i32;
        for (i, ch) in t.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 && i != t.len() - 1 {
                        return t;
                    }
                }
                _ => {}
            }
        }
        return &t[1..t.len() - 1];
    }
    t
}

fn split_top(s: &str) -> Result<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse(format!("unbalanced parentheses in {s:?}")));
                }
            }
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced parentheses in {s:?}")));
    }
    parts.push(&s[start..]);
    Ok(parts)
}

fn parse_inner(s: &str) -> Result<RingSpec> {
    let s = strip_parens(s);
    let (tag, rest) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("missing ring tag in {s:?}")))?;
    match tag {
        "zmod" => Ok(RingSpec::Zmod(parse_num(rest, "an integer modulus")?)),
        "gf" => {
            if let Some((p, k)) = rest.split_once('^') {
                Ok(RingSpec::GF {
                    p: parse_num(p, "a prime")?,
                    k: parse_num(k, "an exponent")?,
                })
            } else {
                let q: u64 = parse_num(rest, "a prime power")?;
                let (p, k) = prime_power(q).ok_or_else(|| Error::InvalidSpec(format!("{q} is not a prime power")))?;
                Ok(RingSpec::GF { p, k })
            }
        }
        "dual" => Ok(RingSpec::Dual(Box::new(parse_inner(rest)?))),
        "trunc" => {
            let (base, m) = rest
                .rsplit_once(':')
                .ok_or_else(|| Error::Parse(format!("trunc needs <spec>:<m>, got {rest:?}")))?;
            Ok(RingSpec::Trunc(
                Box::new(parse_inner(base)?),
                parse_num(m, "a truncation degree")?,
            ))
        }
        "prod" => Ok(RingSpec::Prod(
            split_top(rest)?.into_iter().map(parse_inner).collect::<Result<_>>()?,
        )),
        other => Err(Error::Parse(format!("unknown ring tag {other:?}"))),
    }
}

impl FromStr for RingSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RingSpec::parse(s)
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Zmod(n) => write!(f, "zmod:{n}"),
            RingSpec::GF { p, k } => write!(f, "gf:{}", p.pow(*k)),
            RingSpec::Dual(b) => write!(f, "dual:{b}"),
            RingSpec::Trunc(b, m) => write!(f, "trunc:{b}:{m}"),
            RingSpec::Prod(v) => {
                write!(f, "prod:")?;
                for (i, s) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    let r = s.to_string();
                    if r.contains(',') {
                        write!(f, "({r})")?;
                    } else {
                        write!(f, "{r}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_examples() {
        assert_eq!(RingSpec::parse("gf:4").unwrap(), RingSpec::GF { p: 2, k: 2 });
        assert_eq!(RingSpec::parse("gf:2^2").unwrap(), RingSpec::GF { p: 2, k: 2 });
        assert_eq!(
            RingSpec::parse("trunc:gf:4:3").unwrap(),
            RingSpec::Trunc(Box::new(RingSpec::GF { p: 2, k: 2 }), 3)
        );
        assert_eq!(
            RingSpec::parse("prod:zmod:2,(prod:zmod:3,gf:5)").unwrap().to_string(),
            "prod:zmod:2,(prod:zmod:3,gf:5)"
        );
        assert!(matches!(RingSpec::parse("gf:banana"), Err(Error::Parse(_))));
        assert!(matches!(RingSpec::parse("gf:6"), Err(Error::InvalidSpec(_))));
        assert!(matches!(RingSpec::parse("zmod:1"), Err(Error::InvalidSpec(_))));
        assert!(RingSpec::parse("trunc:zmod:3:1").is_err());
    }

    fn arb_spec() -> impl Strategy<Value = RingSpec> {
        let leaf = prop_oneof![
            (2u64..50).prop_map(RingSpec::Zmod),
            prop_oneof![Just(2u64), Just(3), Just(5), Just(7)]
                .prop_flat_map(|p| (Just(p), 1u32..4))
                .prop_map(|(p, k)| RingSpec::GF { p, k }),
        ];
        leaf.prop_recursive(3, 12, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(|s| RingSpec::Dual(Box::new(s))),
                (inner.clone(), 2u32..5).prop_map(|(s, m)| RingSpec::Trunc(Box::new(s), m)),
                prop::collection::vec(inner, 2..4).prop_map(RingSpec::Prod),
            ]
        })
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(s in arb_spec()) {
            let text = s.to_string();
            prop_assert_eq!(RingSpec::parse(&text).unwrap(), s);
        }
    }
}
