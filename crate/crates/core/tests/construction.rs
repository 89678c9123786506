use lensurf_core::construction::{
    construct_surface, h0, sheet_count, Checked, Construction, Family,
};
use lensurf_core::fundamental::{haken_fund_criterion, minimality_oracle, Status, DEFAULT_BUDGET};
use lensurf_core::normal::layering::DiskComplex;
use lensurf_core::normal::{edge_weight, euler_characteristic};
use lensurf_core::placement::{compression_schedule, verify_placements, PatchKind, Region, Role};
use lensurf_core::quad::reconstruct_tdisks;
use lensurf_core::{EdgeClass, LensError, LensParams, Triangulation};

#[test]
fn every_intermediate_surface_has_unit_core_weights() {
    for n in 2..=5 {
        let c = Construction::new(n).unwrap();
        let tri = c.triangulation();
        for (k, h) in c.run().unwrap().iter().enumerate() {
            let haken = reconstruct_tdisks(tri, h).unwrap();
            assert_eq!(
                edge_weight(tri, &haken, EdgeClass::Vertical).unwrap(),
                1,
                "n {n} k {k}"
            );
            assert_eq!(
                edge_weight(tri, &haken, EdgeClass::Horizontal).unwrap(),
                1,
                "n {n} k {k}"
            );
            assert!(haken_fund_criterion(tri, &haken).unwrap());
            assert_eq!(
                euler_characteristic(tri, &haken).unwrap(),
                c.family().expected_euler(k),
                "n {n} k {k}"
            );
        }
    }
}

#[test]
fn final_surfaces_are_glued_closed_surfaces() {
    for n in 2..=5 {
        let c = Construction::new(n).unwrap();
        let tri = c.triangulation();
        let h = c.run().unwrap().pop().unwrap();
        let haken = reconstruct_tdisks(tri, &h).unwrap();
        let mut complex = DiskComplex::build(tri, &haken).unwrap();
        assert!(complex.sides_fully_glued());
        assert_eq!(complex.component_count(), 1);
        assert_eq!(complex.component_orientability(), vec![false]);
    }
}

#[test]
fn all_four_sheet_positions() {
    for n in 2..=6 {
        let r = construct_surface(n).unwrap();
        assert_eq!(r.sheets.len(), 4);
        for s in &r.sheets {
            assert_eq!(s.count, n as i64 - 2, "n {n} m {}", s.m);
        }
        assert_eq!(r.surface.connected, Checked::Yes);
    }
}

#[test]
fn sheet_positions_of_n4() {
    let f = Family::new(4).unwrap();
    assert_eq!(f.sheet_positions(), [15, 16, 56, 57]);
    let h = Construction::new(4).unwrap().run().unwrap().pop().unwrap();
    assert_eq!(sheet_count(&h, 15).unwrap(), 2);
}

#[test]
fn h1_of_l83_is_fundamental_by_search() {
    let c = Construction::new(2).unwrap();
    let tri = c.triangulation();
    let h = reconstruct_tdisks(tri, &c.run().unwrap()[1]).unwrap();
    let v = minimality_oracle(tri, &h, DEFAULT_BUDGET).unwrap();
    assert_eq!(v.status, Status::Fundamental);
    assert_eq!(v, minimality_oracle(tri, &h, DEFAULT_BUDGET).unwrap());
}

#[test]
fn h0_reconstruction_of_l83() {
    let params = LensParams::new(8, 3).unwrap();
    let tri = Triangulation::build(params).unwrap();
    let haken = reconstruct_tdisks(&tri, &h0(params).unwrap()).unwrap();
    assert_eq!(euler_characteristic(&tri, &haken).unwrap(), -2);
}

#[test]
fn schedule_examples() {
    let s = compression_schedule(2).unwrap();
    let tets: Vec<usize> = s.placements.iter().map(|pl| pl.tet).collect();
    assert_eq!(tets, vec![1, 2, 4, 5]);

    // 3 q_n + 2i - 1 = 34 reduces to q_{n-1} + 2i - 1 = 4 modulo 30
    let s = compression_schedule(3).unwrap();
    let second = s
        .step(2)
        .find(|pl| pl.disk == 1 && pl.pair == 2 && pl.role == Role::Leading)
        .unwrap();
    assert_eq!(second.tet, (3 * 11 + 1) % 30);
    assert_eq!(second.tet, 3 + 1);
    assert_eq!(second.kind, PatchKind::Quadrilateral);

    let ends: Vec<_> = s
        .step(2)
        .filter(|pl| pl.kind == PatchKind::Trigonal)
        .map(|pl| pl.region)
        .collect();
    assert!(ends.iter().all(|&r| r == Region::Last));
}

#[test]
fn placement_reports() {
    for n in 2..=5 {
        assert!(verify_placements(n).unwrap().all_pass(), "n = {n}");
    }
    let r = verify_placements(3).unwrap();
    assert!(r.check('a').unwrap().description.contains("tau_11"));
}

#[test]
fn construction_needs_n_at_least_two() {
    assert!(matches!(
        construct_surface(1),
        Err(LensError::OutOfRange(_))
    ));
    assert!(matches!(
        compression_schedule(0),
        Err(LensError::OutOfRange(_))
    ));
}
