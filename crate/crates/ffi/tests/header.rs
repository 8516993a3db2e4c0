//! The generated header declares every exported symbol.

#[test]
fn header_declares_exports() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/blochlab.h")).unwrap();
    for f in [
        "bl_version",
        "bl_last_error",
        "bl_ring_new",
        "bl_ring_free",
        "bl_ring_size",
        "bl_ring_unit_count",
        "bl_bloch_report",
        "bl_verify",
        "bl_homology",
        "bl_string_free",
    ] {
        assert!(h.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(h.contains("BL_STATUS_BUDGET = 3"));
    assert!(h.contains("typedef struct BlRing BlRing;"));
}
