//! Explicit finite commutative rings.

mod hom;
mod ring;
mod spec;
mod units;

pub use hom::{augmentation, section, RingHom};
pub use ring::{
    build_ring, build_ring_with_budget, least_irreducible, Elt, FiniteRing, NilpotentData, DEFAULT_RING_BUDGET,
};
pub use spec::{is_prime, prime_power, RingSpec};
pub use units::{many_units_witness, ManyUnits, UnitGroup};

/// The standard collection of rings used by the verification suites.
pub const ZOO: &[&str] = &[
    "gf:4",
    "gf:5",
    "gf:7",
    "gf:8",
    "gf:9",
    "gf:11",
    "gf:13",
    "zmod:9",
    "zmod:25",
    "dual:gf:5",
    "trunc:gf:4:3",
];

/// Parses and builds a ring in one step.
pub fn ring(spec: &str) -> crate::Result<std::sync::Arc<FiniteRing>> {
    build_ring(&RingSpec::parse(spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_units() {
        let r = ring("zmod:5").unwrap();
        assert_eq!(r.size(), 5);
        assert_eq!(r.units(), &[1, 2, 3, 4]);
        let r = ring("gf:4").unwrap();
        assert_eq!(r.size(), 4);
        let w = r.find("w").unwrap();
        assert_eq!(r.mul(w, w), r.add(w, 1));
        let r = ring("dual:zmod:5").unwrap();
        assert_eq!(r.size(), 25);
        assert_eq!(r.units().len(), 20);
    }

    #[test]
    fn least_irreducibles() {
        assert_eq!(least_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(least_irreducible(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(least_irreducible(3, 2), vec![1, 0, 1]);
    }

    #[test]
    fn unit_group_factors() {
        assert_eq!(ring("zmod:8").unwrap().unit_group().invariant_factors(), vec![2, 2]);
        assert_eq!(ring("gf:4").unwrap().unit_group().invariant_factors(), vec![3]);
        assert_eq!(ring("dual:zmod:5").unwrap().unit_group().invariant_factors(), vec![20]);
        assert_eq!(
            ring("zmod:2").unwrap().unit_group().invariant_factors(),
            Vec::<i64>::new()
        );
        assert_eq!(
            ring("trunc:gf:4:3").unwrap().unit_group().invariant_factors(),
            vec![4, 12]
        );
    }

    #[test]
    fn unit_counts_of_nilpotent_extensions() {
        for base in ["zmod:3", "gf:4", "zmod:4"] {
            let b = ring(base).unwrap();
            let d = ring(&format!("dual:{base}")).unwrap();
            assert_eq!(d.units().len(), b.units().len() * b.size());
            let t = ring(&format!("trunc:{base}:3")).unwrap();
            assert_eq!(t.units().len(), b.units().len() * b.size().pow(2));
        }
    }

    #[test]
    fn augmentation_examples() {
        let r = ring("dual:zmod:5").unwrap();
        let aug = augmentation(&r).unwrap();
        assert_eq!(aug.apply(r.find("2+3e").unwrap()), 2);
        assert!(aug.reflects_units());
        let sec = section(&r).unwrap();
        assert!((0..5).all(|a| aug.apply(sec.apply(a)) == a));
        let r = ring("trunc:gf:4:3").unwrap();
        let aug = augmentation(&r).unwrap();
        let x = r.find("w+t^2").unwrap();
        assert_eq!(aug.target.name(aug.apply(x)), "w");
        assert!(aug.reflects_units());
        assert!(augmentation(&ring("gf:5").unwrap()).is_err());
    }

    #[test]
    fn many_units_examples() {
        let r = ring("zmod:7").unwrap();
        match many_units_witness(&r, 2, 1 << 20).unwrap() {
            ManyUnits::Witness(w) => {
                assert_eq!(w.len(), 2);
                assert!(r.is_unit(w[0]) && r.is_unit(w[1]) && r.is_unit(r.add(w[0], w[1])));
            }
            ManyUnits::NoneExists => panic!("expected a witness"),
        }
        let r = ring("zmod:2").unwrap();
        assert_eq!(many_units_witness(&r, 2, 1 << 20).unwrap(), ManyUnits::NoneExists);
        assert_eq!(many_units_witness(&r, 1, 1 << 20).unwrap(), ManyUnits::Witness(vec![1]));
        let r = ring("gf:13").unwrap();
        assert!(matches!(
            many_units_witness(&r, 12, 3),
            Err(crate::Error::Budget { .. })
        ));
    }

    #[test]
    fn locality_and_budget() {
        assert!(ring("zmod:9").unwrap().is_local());
        assert!(ring("dual:gf:3").unwrap().is_local());
        assert!(!ring("zmod:6").unwrap().is_local());
        assert!(!ring("prod:gf:2,gf:3").unwrap().is_local());
        assert!(matches!(ring("gf:2^13"), Err(crate::Error::Budget { .. })));
    }

    #[test]
    fn product_identity_at_one() {
        let r = ring("prod:zmod:2,zmod:3").unwrap();
        assert_eq!(r.name(1), "(1,1)");
        assert_eq!(r.units().len(), 2);
    }

    #[test]
    fn deterministic_tables() {
        for s in ZOO {
            assert_eq!(ring(s).unwrap().table_hash(), ring(s).unwrap().table_hash());
        }
    }
}
