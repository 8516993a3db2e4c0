use super::*;
use crate::rings::ring;

#[test]
fn line_counts() {
    for (s, n) in [("gf:3", 4), ("gf:4", 5), ("dual:gf:3", 12)] {
        let r = ring(s).unwrap();
        let ls = lines(&r).unwrap();
        assert_eq!(ls.len(), n, "{s}");
        for &v in ls.reps() {
            assert_eq!(canonical_line(&r, v), Some(v));
        }
        let _ = (ls.infinity(), ls.zero(), ls.one());
        for b in r.elements() {
            ls.inverse_point(b);
        }
    }
    assert!(lines(&ring("zmod:6").unwrap()).is_err());
}

#[test]
fn frame_counts() {
    let r = ring("gf:3").unwrap();
    let ls = lines(&r).unwrap();
    assert_eq!(frames(&ls, 3, 1 << 20).unwrap().len(), 24);
    assert_eq!(frames(&ls, 0, 1 << 20).unwrap().len(), 4);
    let ls = lines(&ring("gf:4").unwrap()).unwrap();
    assert_eq!(frames(&ls, 1, 1 << 20).unwrap().len(), 20);
    assert!(frames(&ls, 3, 10).is_err());
}

#[test]
fn gl2_orders() {
    assert_eq!(gl2_elements(&ring("gf:2").unwrap()).len(), 6);
    assert_eq!(gl2_elements(&ring("gf:3").unwrap()).len(), 48);
    assert_eq!(gl2_elements(&ring("gf:4").unwrap()).len(), 180);
}

#[test]
fn orbit_labels() {
    let r = ring("gf:3").unwrap();
    let cx = OrbitComplex::build(&r, 4, 1 << 20).unwrap();
    let l3 = orbit_decomposition(&cx, 3).unwrap();
    assert_eq!(l3.len(), 1);
    assert_eq!(l3[0].label, "p(2)");

    let r = ring("gf:4").unwrap();
    let cx = OrbitComplex::build(&r, 3, 1 << 20).unwrap();
    let mut labels: Vec<_> = orbit_decomposition(&cx, 3)
        .unwrap()
        .into_iter()
        .map(|l| l.label)
        .collect();
    labels.sort();
    assert_eq!(labels, ["p(1+w)", "p(w)"]);

    let r = ring("gf:5").unwrap();
    let cx = OrbitComplex::build(&r, 4, 1 << 20).unwrap();
    assert_eq!(orbit_decomposition(&cx, 4).unwrap().len(), 6);
    for l in 0..=4 {
        assert_eq!(cx.orbits[l].sizes.iter().sum::<usize>(), cx.frames[l].len());
    }
    cx.check_boundary_squared().unwrap();
}

#[test]
fn coinvariants_match_pre_bloch() {
    for s in ["gf:3", "gf:4", "gf:5"] {
        let c = verify_pre_bloch_coinvariants(&ring(s).unwrap(), 1 << 20).unwrap();
        assert!(c.pass, "{s}: {c:?}");
        assert_eq!(c.coinvariant_quotient, c.pre_bloch);
    }
}

#[test]
fn exactness_of_complex() {
    for (s, l) in [("gf:3", 3), ("gf:4", 3), ("gf:5", 2)] {
        let e = complex_exactness(&ring(s).unwrap(), l, 1 << 20).unwrap();
        assert_eq!(e.len(), l);
        assert!(e.iter().all(|d| d.exact), "{s}: {e:?}");
    }
}
