use std::sync::Arc;

use super::*;
use crate::abgrp::WellDefined;
use crate::rings::{ring, FiniteRing, ZOO};

fn names(r: &FiniteRing, xs: &[u32]) -> Vec<String> {
    xs.iter().map(|&x| r.name(x).to_string()).collect()
}

fn factors(g: &crate::abgrp::AbPresentation) -> Vec<i64> {
    g.invariant_factors_i64()
}

#[test]
fn admissible_sets() {
    let r = ring("zmod:8").unwrap();
    assert!(admissible(&r).is_empty());
    let r = ring("gf:4").unwrap();
    assert_eq!(names(&r, &admissible(&r)), ["w", "1+w"]);
    let r = ring("zmod:9").unwrap();
    assert_eq!(names(&r, &admissible(&r)), ["2", "5", "8"]);
}

#[test]
fn five_term_elements() {
    let r = ring("gf:4").unwrap();
    let w = r.find("w").unwrap();
    let w2 = r.mul(w, w);
    let q = five_term(&r, w, w2).unwrap();
    assert!(q.support().all(|x| admissible(&r).contains(&x)));
    let args = five_term_args(&r, w, w2).unwrap();
    assert_eq!(args[2].0, w);

    let r = ring("zmod:9").unwrap();
    let err = five_term(&r, 2, 5).unwrap_err().to_string();
    assert!(err.contains("a-b = 6"), "{err}");
    let r = ring("zmod:25").unwrap();
    assert!(five_term(&r, 2, 7).is_err());
}

#[test]
fn pre_bloch_examples() {
    assert!(pre_bloch(&ring("zmod:8").unwrap()).group.is_trivial());
    assert_eq!(factors(&pre_bloch(&ring("zmod:3").unwrap()).group), vec![0]);
    assert_eq!(factors(&pre_bloch(&ring("zmod:9").unwrap()).group), vec![0, 0, 0]);
    // |p(F_q)| = q + 1 for the fields in the zoo.
    for q in [4, 5, 7, 8, 9] {
        let r = ring(&format!("gf:{q}")).unwrap();
        assert_eq!(pre_bloch(&r).group.order(), Some(crate::Int::from(q + 1)));
    }
}

#[test]
fn lambda_examples() {
    let r = ring("gf:4").unwrap();
    let pb = pre_bloch(&r);
    let sym = sym_square(&r);
    let l = lambda_map(&pb, &sym).unwrap();
    assert!(l.is_zero_map());
    let (b, inc) = bloch_group(&l);
    assert_eq!(factors(&b), factors(&pb.group));
    assert!(inc.is_isomorphism());

    let r = ring("gf:5").unwrap();
    let pb = pre_bloch(&r);
    let sym = sym_square(&r);
    assert_eq!(factors(sym.group()), vec![2]);
    let l = lambda_map(&pb, &sym).unwrap();
    let g3 = pb.gen_of(3).unwrap();
    let mut v = vec![crate::Int::ZERO; pb.admissible.len()];
    v[g3] = crate::Int::ONE;
    assert!(!sym.group().is_zero(&l.apply(&v)));
    let (b, inc) = bloch_group(&l);
    assert_eq!(factors(&b), vec![3]);
    assert!(inc.is_injective());
    assert_eq!(inc.check_well_defined(), WellDefined::Yes);
}

#[test]
fn sym_square_is_alternating_on_zoo() {
    for s in ["gf:5", "zmod:9", "trunc:gf:4:3"] {
        let r = ring(s).unwrap();
        let sym = sym_square(&r);
        for &a in r.units() {
            for &b in r.units() {
                let mut v = sym.class(a, b);
                for (x, y) in v.iter_mut().zip(sym.class(b, a)) {
                    *x += &y;
                }
                assert!(sym.group().is_zero(&v), "{s}: {a} {b}");
            }
        }
    }
}

#[test]
fn five_term_identity_holds() {
    let r = ring("gf:5").unwrap();
    assert!(five_term_identity(&r, 2, 3).unwrap());
    let r = ring("gf:4").unwrap();
    let w = r.find("w").unwrap();
    assert!(five_term_identity(&r, w, r.mul(w, w)).unwrap());
    for s in ZOO.iter().take(7) {
        let r = ring(s).unwrap();
        let t = unit_tensor_square(&r);
        for (a, b) in admissible_pairs(&r) {
            assert!(five_term_identity_in(&r, &t, a, b).unwrap(), "{s}: ({a}, {b})");
        }
    }
}

#[test]
fn milnor_examples() {
    for s in ["gf:4", "gf:5"] {
        let k = milnor_k(&ring(s).unwrap(), 2).unwrap();
        assert!(k.symbolic.is_trivial());
        assert!(k.cokernel.as_ref().unwrap().is_trivial());
        assert_eq!(k.comparison, Some(Comparison::Iso));
    }
    let r = ring("zmod:8").unwrap();
    let k1 = milnor_k(&r, 1).unwrap();
    assert_eq!(factors(&k1.symbolic), r.unit_group().invariant_factors());
    assert!(matches!(
        milnor_k_with_budget(&ring("gf:13").unwrap(), 3, 1000),
        Err(crate::Error::Budget { .. })
    ));
    assert!(milnor_k(&r, 4).is_err());
}

#[test]
fn milnor_vanishing_relations() {
    let r = ring("gf:7").unwrap();
    let k = milnor_k(&r, 3).unwrap();
    for t in 0..k.symbols.count() {
        let s = k.symbols.symbols(t);
        if r.add(s[0], s[2]) == 1 || r.add(s[1], s[2]) == 0 {
            assert!(k.symbolic.is_zero(&k.symbol(&s)));
        }
    }
}

#[test]
fn pre_bloch_order_independent() {
    let r = ring("gf:9").unwrap();
    let mut order = admissible(&r);
    let base = factors(&pre_bloch(&r).group);
    order.reverse();
    assert_eq!(factors(&pre_bloch_ordered(&r, &order).group), base);
    order.rotate_left(3);
    assert_eq!(factors(&pre_bloch_ordered(&r, &order).group), base);
}

#[test]
fn relative_groups() {
    let r = ring("dual:zmod:8").unwrap();
    let g = relative_group(RelativeFunctor::PreBloch, &r).unwrap();
    assert!(g.group.is_trivial());
    let r = ring("dual:gf:5").unwrap();
    let g = relative_group(RelativeFunctor::MilnorK2, &r).unwrap();
    assert!(g.inclusion.compose(&g.induced).is_zero_map());
    let r = ring("dual:gf:4").unwrap();
    for f in RelativeFunctor::ALL {
        let g = relative_group(f, &r).unwrap();
        assert!(g.inclusion.is_injective());
    }
    assert!(relative_group(RelativeFunctor::SymSquare, &ring("gf:5").unwrap()).is_err());
    assert!("k3".parse::<RelativeFunctor>().is_err());
}

#[test]
fn report_examples() {
    let rep = bw_report(&ring("gf:4").unwrap()).unwrap();
    assert_eq!(
        rep.groups.bloch.invariant_factors,
        rep.groups.pre_bloch.invariant_factors
    );
    assert!(rep.groups.sym_square.invariant_factors.is_empty());
    assert!(rep.groups.k2m_symbolic.invariant_factors.is_empty());
    assert_eq!(rep.groups.tor_mu.description, "Z/3");
    assert!(rep.all_pass());

    let rep = bw_report(&ring("zmod:8").unwrap()).unwrap();
    assert!(rep.groups.pre_bloch.invariant_factors.is_empty());
    assert_eq!(rep.groups.tor_mu.description, "Z/2 + Z/2 + Z/2 + Z/2");

    let r: Arc<_> = ring("gf:7").unwrap();
    let rep = bw_report(&r).unwrap();
    assert!(rep.all_pass());
    let json = serde_json::to_string(&rep).unwrap();
    let back: BwReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, rep);
    assert!(json.starts_with("{\"schema\":1,\"ring\":\"gf:7\""));
}
