use std::sync::Arc;

use super::*;
use crate::int::Int;
use crate::rings::ring;

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

#[test]
fn matrix_group_orders() {
    let orders = [("gf:2", 6), ("gf:3", 48), ("gf:4", 180), ("gf:5", 480), ("zmod:4", 96)];
    for (spec, n) in orders {
        assert_eq!(gl2_order(&ring(spec).unwrap()), n, "{spec}");
    }
    let g = MatrixGroup::gl2(&ring("gf:3").unwrap()).unwrap();
    assert_eq!(g.group.order(), 48);
    g.group.check_axioms(1).unwrap();
    let s = MatrixGroup::sl2(&ring("gf:3").unwrap()).unwrap();
    assert_eq!(s.group.order(), 24);
    assert!(!s.group.is_abelian());
}

#[test]
fn group_specs() {
    let s = GroupSpec::parse("gl2:gf:4").unwrap();
    assert_eq!(s.order().unwrap(), 180);
    let p = GroupSpec::parse("prod:(cyclic:2),(cyclic:3)").unwrap();
    let g = p.build().unwrap();
    assert_eq!(g.order(), 6);
    assert!(g.is_abelian());
    g.check_axioms(0).unwrap();
    assert_eq!(GroupSpec::parse("torus:gf:5").unwrap().order().unwrap(), 16);
    assert_eq!(GroupSpec::parse("abelian:2x4").unwrap().build().unwrap().order(), 8);
    assert!(GroupSpec::parse("cyclic:0").is_err());
    assert!(GroupSpec::parse("klein").is_err());
    assert!(GroupSpec::parse("units:gf:6").is_err());
}

#[test]
fn abelian_type_counts() {
    let counts: Vec<usize> = (1..=16).map(|n| abelian_types(n).len()).collect();
    assert_eq!(counts, vec![1, 1, 1, 2, 1, 1, 1, 3, 2, 1, 1, 2, 1, 1, 1, 5]);
    for n in 1..=16 {
        for t in abelian_types(n) {
            assert_eq!(t.iter().product::<usize>(), n);
            assert!(t.windows(2).all(|w| w[1] % w[0] == 0), "{t:?}");
        }
    }
}

#[test]
fn generated_subgroup() {
    let g = FiniteGroup::cyclic(12);
    let (h, emb) = g.generated(&[8]).unwrap();
    assert_eq!(h.order(), 3);
    assert_eq!(emb, vec![0, 4, 8]);
}

#[test]
fn boundary_examples() {
    let g = FiniteGroup::cyclic(5);
    let d = bar_boundary(&g, &BarChain::cell(vec![2, 4]));
    // ∂[a|b] = [b] - [ab] + [a].
    let expected = BarChain::from_terms(1, [(vec![4], Int::ONE), (vec![1], Int::from(-1)), (vec![2], Int::ONE)]);
    assert_eq!(d, expected);
    assert!(bar_boundary(&g, &BarChain::cell(vec![3])).is_zero());
}

#[test]
fn boundary_squares_to_zero() {
    let g = MatrixGroup::gl2(&ring("gf:2").unwrap()).unwrap().group;
    for n in 2..=4 {
        for i in 0..200usize {
            let t = chain::cell_tuple((i * 7919) % g.order().pow(n as u32), n, g.order());
            let c = BarChain::cell(t);
            assert!(bar_boundary(&g, &bar_boundary(&g, &c)).is_zero());
        }
    }
}

#[test]
fn cyclic_homology_matches_periodic_resolution() {
    for m in 2..=6u64 {
        let h = BarHomology::new(Arc::new(FiniteGroup::cyclic(m as usize)));
        for n in 0..=3 {
            assert_eq!(
                h.homology(n).unwrap().invariant_factors,
                cyclic_homology_periodic(m, n),
                "Z/{m} in degree {n}"
            );
        }
    }
    assert_eq!(cyclic_homology_periodic(7, 3), ints(&[7]));
    assert_eq!(cyclic_homology_periodic(7, 4), ints(&[]));
    assert_eq!(cyclic_homology_periodic(7, 0), ints(&[0]));
}

#[test]
fn symmetric_group_homology() {
    let g = Arc::new(MatrixGroup::gl2(&ring("gf:2").unwrap()).unwrap().group);
    let h = BarHomology::new(g);
    assert_eq!(h.homology(1).unwrap().invariant_factors, ints(&[2]));
    assert_eq!(h.homology(2).unwrap().invariant_factors, ints(&[]));
    assert_eq!(h.homology(3).unwrap().invariant_factors, ints(&[6]));
    assert_eq!(h.homology_mod(3, 2).unwrap().invariant_factors, ints(&[2]));
    assert_eq!(h.homology_mod(3, 3).unwrap().invariant_factors, ints(&[3]));
    assert_eq!(h.homology_mod(3, 6).unwrap().invariant_factors, ints(&[6]));
    assert_eq!(h.homology_mod(2, 2).unwrap().invariant_factors, ints(&[2]));
}

#[test]
fn universal_coefficients_on_small_groups() {
    let groups = [vec![4usize], vec![2, 2], vec![6], vec![2, 4]];
    for f in groups {
        let g = Arc::new(FiniteGroup::abelian(&f));
        let h = BarHomology::new(g);
        for n in 1..=2 {
            let hn = h.homology(n).unwrap().presentation();
            let hm = h.homology(n - 1).unwrap().presentation();
            for m in [2u64, 3, 4] {
                let mm = crate::abgrp::AbPresentation::cyclic(m as i64);
                let tensor = crate::abgrp::tensor(&Arc::new(hn.clone()), &Arc::new(mm.clone()));
                let tor = crate::abgrp::tor1(&hm, &mm);
                let expect = &tensor.group.order().unwrap() * &tor.order().unwrap();
                let got = h.homology_mod(n, m).unwrap().order().unwrap();
                assert_eq!(got, expect, "{f:?} degree {n} mod {m}");
            }
        }
    }
}

#[test]
fn budget_error_names_the_cell_count() {
    let g = Arc::new(GroupSpec::parse("gl2:gf:4").unwrap().build().unwrap());
    let h = BarHomology::new(g);
    let e = h.homology(3).unwrap_err().to_string();
    assert!(e.contains("180^4 = 1049760000"), "{e}");
}

#[test]
fn c_cycles_and_commutation() {
    let g = FiniteGroup::abelian(&[2, 2]);
    let c = c_cycle(&g, &[1, 2]).unwrap();
    assert_eq!(c.len(), 2);
    assert!(bar_boundary(&g, &c).is_zero());
    let s3 = MatrixGroup::gl2(&ring("gf:2").unwrap()).unwrap().group;
    let non = (1..6u32)
        .flat_map(|a| (1..6u32).map(move |b| (a, b)))
        .find(|&(a, b)| !s3.commute(a, b))
        .unwrap();
    assert!(c_cycle(&s3, &[non.0, non.1]).is_err());
}

#[test]
fn chain_json_round_trip() {
    let g = FiniteGroup::abelian(&[2, 3]);
    let c = c_cycle(&g, &[1, 2, 3]).unwrap();
    let j = serde_json::to_string(&c.to_json(&g)).unwrap();
    let back: ChainJson = serde_json::from_str(&j).unwrap();
    assert_eq!(BarChain::from_json(&back, &g).unwrap(), c);
    assert!(j.contains("[1,[1,2,3]]") || j.contains("[\"1\",[1,2,3]]"), "{j}");
    let table = serde_json::to_string(&g.to_table()).unwrap();
    let h = FiniteGroup::from_group_table(&serde_json::from_str(&table).unwrap()).unwrap();
    assert_eq!(h.order(), 6);
    assert!((0..6).all(|a| (0..6).all(|b| h.mul(a, b) == g.mul(a, b))));
}

#[test]
fn shuffle_is_c_cycle_of_product() {
    let g = FiniteGroup::cyclic(2);
    let h = FiniteGroup::cyclic(3);
    let p = FiniteGroup::product(&g, &h).unwrap();
    let lhs = shuffle(&c_cycle(&g, &[1]).unwrap(), &c_cycle(&h, &[1, 2]).unwrap(), 3);
    let rhs = c_cycle(&p, &[3, 1, 2]).unwrap();
    assert_eq!(lhs, rhs);
    let t = shuffle_checks(&[(vec![2], vec![2]), (vec![2], vec![3])]).unwrap();
    assert!(t.pass(), "{t:?}");
}

#[test]
fn commuting_identities_exhaustive_small() {
    for f in [vec![2usize], vec![3], vec![2, 2]] {
        let g = Arc::new(FiniteGroup::abelian(&f));
        for n in 2..=3 {
            for t in exhaustive_commuting_checks(&g, n).unwrap() {
                assert!(t.pass(), "{f:?} degree {n}: {t:?}");
            }
        }
    }
}

#[test]
fn commuting_identities_random() {
    for t in random_commuting_checks(12, 8, 7).unwrap() {
        assert!(t.pass(), "{t:?}");
    }
}

#[test]
fn exterior_square_is_h2() {
    for f in [vec![2usize, 2], vec![2, 4], vec![3, 3], vec![6]] {
        let c = exterior_to_h2(&f).unwrap();
        assert!(c.bijective, "{c:?}");
    }
}

#[test]
fn boundary_certificates_and_modular_fallback() {
    let g = Arc::new(FiniteGroup::cyclic(3));
    let mut h = BarHomology::new(g.clone());
    let z = bar_boundary(&g, &BarChain::cell(vec![1, 2, 2]));
    let cert = h.boundary_certificate(&z).unwrap();
    assert!(cert.is_boundary());
    let not_cycle = BarChain::cell(vec![1, 1]);
    assert_eq!(
        h.boundary_certificate(&not_cycle).unwrap().verdict,
        BoundaryVerdict::NotCycle
    );
    // A generator of H₁ = Z/3 is not a boundary.
    assert_eq!(
        h.boundary_certificate(&BarChain::cell(vec![1])).unwrap().verdict,
        BoundaryVerdict::NotBoundary
    );
    h.integral_budget = 1;
    let cert = h.boundary_certificate(&z).unwrap();
    assert_eq!(cert.verdict, BoundaryVerdict::ModularOnly);
    assert_eq!(cert.primes, vec![2, 3, 5, 7, 101]);
    assert_eq!(
        h.boundary_certificate(&BarChain::cell(vec![1])).unwrap().verdict,
        BoundaryVerdict::NotBoundary
    );
}

#[test]
fn degree_two_identities_small_fields() {
    for spec in ["gf:4", "gf:5"] {
        let checks = verify_degree_two(&ring(spec).unwrap(), true).unwrap();
        assert!(!checks.is_empty());
        for c in checks {
            assert!(c.pass(), "{spec}: {c:?}");
            assert_eq!(c.exterior_class, Some(true));
            assert!(c.bar_form_diff.is_empty());
        }
    }
}

#[test]
fn delta3_over_local_rings() {
    for spec in ["gf:7", "zmod:9", "dual:gf:3"] {
        for c in verify_degree_two(&ring(spec).unwrap(), false).unwrap() {
            assert!(c.delta3 && c.c_form, "{spec}: {c:?}");
        }
        assert!(verify_delta3(&ring(spec).unwrap()).unwrap().iter().all(|c| c.pass()));
    }
}

#[test]
fn torus_identities_gf4() {
    let checks =
        verify_torus_identities(&ring("gf:4").unwrap(), DEFAULT_TUPLE_BUDGET, DEFAULT_INTEGRAL_BUDGET).unwrap();
    assert_eq!(checks.len(), 2);
    for c in checks {
        assert_eq!(c.cases, 27);
        assert_eq!(c.verdict, TorusVerdict::Certified, "{c:?}");
    }
}

#[test]
fn reduced_h3_of_gf2() {
    let r = reduced_h3(&ring("gf:2").unwrap(), DEFAULT_TUPLE_BUDGET, DEFAULT_INTEGRAL_BUDGET).unwrap();
    assert_eq!(r.h3_gl2, ints(&[6]));
    assert_eq!(r.invariant_factors, ints(&[6]));
}

#[test]
fn identity_entry_gives_zero_class() {
    let g = Arc::new(FiniteGroup::abelian(&[2, 3]));
    let h = BarHomology::new(g.clone());
    for x in 1..6u32 {
        let z = c_cycle(&g, &[0, x]).unwrap();
        assert!(h.boundary_certificate(&z).unwrap().is_boundary());
    }
}

#[test]
fn multilinearity_in_cyclic_four() {
    let g = Arc::new(FiniteGroup::cyclic(4));
    let h = BarHomology::new(g.clone());
    for (a, b, k) in [(1, 1, 1), (1, 2, 3), (3, 3, 2)] {
        let z = c_cycle(&g, &[g.mul(a, b), k])
            .unwrap()
            .minus(&c_cycle(&g, &[a, k]).unwrap())
            .minus(&c_cycle(&g, &[b, k]).unwrap());
        assert!(h.boundary_certificate(&z).unwrap().is_boundary(), "{a} {b} {k}");
    }
}

#[test]
fn shuffle_up_to_boundary_in_z4_squared() {
    let g = FiniteGroup::cyclic(4);
    let p = Arc::new(FiniteGroup::product(&g, &g).unwrap());
    let h = BarHomology::new(p.clone());
    // c(a,b) ⋆ c(d) against c((a,1),(b,1),(1,d)).
    for (a, b, d) in [(1u32, 2u32, 3u32), (1, 3, 1), (2, 2, 2)] {
        let lhs = shuffle(&c_cycle(&g, &[a, b]).unwrap(), &c_cycle(&g, &[d]).unwrap(), 4);
        let rhs = c_cycle(&p, &[a * 4, b * 4, d]).unwrap();
        assert!(h.class_equal(&lhs, &rhs).unwrap().is_boundary());
    }
    // Identity inputs give class zero.
    let z = shuffle(&c_cycle(&g, &[0]).unwrap(), &c_cycle(&g, &[1]).unwrap(), 4);
    assert!(h.boundary_certificate(&z).unwrap().is_boundary());
}

#[test]
fn torus_chains_are_cycles_and_cup_with_unit_vanishes() {
    let r = ring("gf:5").unwrap();
    let cx = TorusContext::new(&r, false).unwrap();
    let h = BarHomology::new(cx.torus.clone());
    for &a in r.units() {
        for &c in r.units() {
            let phi = phi_chain(&cx, a, 2, c).unwrap();
            assert!(bar_boundary(&cx.torus, &phi).is_zero());
            let cup = cup_chain(&cx, a, 1, c).unwrap();
            assert!(h.boundary_certificate(&cup).unwrap().is_boundary());
        }
    }
}
