use geomkit::catalog::{
    complete_bipartite_digon, fano_structure_orbits, fano_structures, neumaier, neumaier_with_orbit, projective_space,
    symplectic_polar_space,
};
use geomkit::coset::stabilizer_complex;
use geomkit::iso::find_isomorphism;
use geomkit::verify::{
    c3_building_test, classify_rank2, detect_c3_roles, diagram_of, is_flat, is_geometry, Rank2Kind,
};
use geomkit::{GeomError, Simplex};

#[test]
fn neumaier_is_a_flat_c3_geometry_but_not_a_building() {
    let n = neumaier();
    let tc = &n.geometry;
    assert_eq!(tc.type_counts(), vec![7, 35, 15]);
    assert_eq!(tc.complex().chambers().len(), 315);
    assert!(is_geometry(tc).is_geometry());
    let m = diagram_of(tc).unwrap();
    assert_eq!(m.name().as_deref(), Some("C3"));
    let roles = detect_c3_roles(&m).unwrap();
    assert_eq!(roles, [0, 1, 2]);
    assert!(is_flat(tc, 0, 2).unwrap());
    let verdict = c3_building_test(tc, roles).unwrap();
    assert!(!verdict.is_building);
    let w = verdict.witness.unwrap();
    assert_eq!(w.lines, [7, 8]);
    assert_eq!(w.points, [0, 1]);
    for &l in &w.lines {
        for &p in &w.points {
            assert!(tc.complex().contains(&Simplex::new([p, l])));
        }
    }
}

#[test]
fn neumaier_action_is_chamber_transitive_alt7() {
    let n = neumaier();
    let action = n.action.unwrap();
    assert_eq!(action.group().order(), 2520);
    let report = action.verify();
    assert!(report.is_valid() && report.chamber_transitive && report.faithful);
    let gamma = action.target().complex().chambers()[0].clone();
    assert_eq!(action.stabilizer(&gamma).order(), 8);
    let sc = stabilizer_complex(&action, &gamma).unwrap();
    let orders: Vec<u128> = (0..3).map(|i| sc.vertex_group(i).order()).collect();
    assert_eq!(orders, vec![360, 72, 168]);
    // orbit-stabilizer for every flag variety
    let tc = action.target();
    for (mask, count) in tc.flag_variety_sizes() {
        let face = tc.face_of_type(&gamma, mask);
        assert_eq!(action.stabilizer(&face).order() * count as u128, 2520);
    }
}

#[test]
fn thirty_fano_structures_split_into_two_orbits() {
    assert_eq!(fano_structures().len(), 30);
    let [a, b] = fano_structure_orbits();
    assert_eq!((a.len(), b.len()), (15, 15));
    assert_eq!(a[0], fano_structures()[0]);
}

#[test]
fn the_two_neumaier_builds_are_isomorphic() {
    let a = neumaier_with_orbit(0).unwrap().geometry;
    let b = neumaier_with_orbit(1).unwrap().geometry;
    assert!(find_isomorphism(&a, &b).is_some());
    assert!(matches!(neumaier_with_orbit(2), Err(GeomError::UnsupportedParameters(_))));
}

#[test]
fn neumaier_residues() {
    let tc = neumaier().geometry;
    let fano = projective_space(2, 2).unwrap().geometry;
    for p in tc.vertices_of_type(0) {
        let (link, _) = tc.link(&Simplex::new([p])).unwrap();
        assert_eq!(classify_rank2(&link).unwrap().kind, Rank2Kind::GeneralizedNGon(4));
    }
    for pl in tc.vertices_of_type(2) {
        let (link, _) = tc.link(&Simplex::new([pl])).unwrap();
        assert_eq!(classify_rank2(&link).unwrap().kind, Rank2Kind::GeneralizedNGon(3));
        assert!(find_isomorphism(&link, &fano).is_some());
    }
}

#[test]
fn symplectic_polar_space_is_a_building() {
    let w = symplectic_polar_space(6, 2).unwrap();
    let tc = &w.geometry;
    assert_eq!(tc.type_counts(), vec![63, 315, 135]);
    assert_eq!(tc.complex().chambers().len(), 2835);
    assert!(is_geometry(tc).is_geometry());
    let m = diagram_of(tc).unwrap();
    assert_eq!(m.name().as_deref(), Some("C3"));
    let roles = detect_c3_roles(&m).unwrap();
    assert!(c3_building_test(tc, roles).unwrap().is_building);
    assert!(!is_flat(tc, roles[0], roles[2]).unwrap());
    let action = w.action.unwrap();
    assert_eq!(action.group().order(), 1451520);
    let report = action.verify();
    assert!(report.is_valid() && report.chamber_transitive);
}

#[test]
fn symplectic_parameters_outside_the_catalog_are_rejected() {
    assert!(matches!(symplectic_polar_space(6, 3), Err(GeomError::UnsupportedParameters(_))));
    assert!(matches!(symplectic_polar_space(5, 2), Err(GeomError::UnsupportedParameters(_))));
}

#[test]
fn small_symplectic_quadrangle() {
    let w = symplectic_polar_space(4, 2).unwrap();
    assert_eq!(w.geometry.type_counts(), vec![15, 15]);
    assert_eq!(classify_rank2(&w.geometry).unwrap().kind, Rank2Kind::GeneralizedNGon(4));
    assert_eq!(w.action.unwrap().group().order(), 720);
}

#[test]
fn projective_three_space() {
    let p = projective_space(3, 2).unwrap();
    let tc = &p.geometry;
    assert_eq!(tc.type_counts(), vec![15, 35, 15]);
    assert_eq!(tc.complex().vertex_count(), 65);
    assert_eq!(diagram_of(tc).unwrap().name().as_deref(), Some("A3"));
    assert!(is_geometry(tc).is_geometry());
    let action = p.action.unwrap();
    assert_eq!(action.group().order(), 20160);
    assert!(action.verify().chamber_transitive);
    let (d, _, _) = tc.complex().chamber_diameter().unwrap();
    assert_eq!(d, 6);
}

#[test]
fn projective_planes() {
    let fano = projective_space(2, 2).unwrap();
    assert_eq!(classify_rank2(&fano.geometry).unwrap().kind, Rank2Kind::GeneralizedNGon(3));
    assert_eq!(fano.action.unwrap().group().order(), 168);
    let p23 = projective_space(2, 3).unwrap();
    assert_eq!(p23.geometry.complex().chambers().len(), 52);
    assert_eq!(p23.action.unwrap().group().order(), 5616);
    assert!(matches!(projective_space(4, 2), Err(GeomError::UnsupportedParameters(_))));
    assert!(matches!(projective_space(2, 5), Err(GeomError::UnsupportedParameters(_))));
}

#[test]
fn digons() {
    let d = complete_bipartite_digon(3, 3).unwrap();
    assert_eq!(d.geometry.complex().chambers().len(), 9);
    assert_eq!(classify_rank2(&d.geometry).unwrap().kind, Rank2Kind::GeneralizedNGon(2));
    let d = complete_bipartite_digon(3, 4).unwrap();
    assert_eq!(d.geometry.complex().chambers().len(), 12);
    assert!(d.geometry.complex().is_thick().unwrap());
    assert!(matches!(complete_bipartite_digon(2, 3), Err(GeomError::TooThin)));
    assert!(find_isomorphism(&complete_bipartite_digon(3, 4).unwrap().geometry, &projective_space(2, 2).unwrap().geometry).is_none());
}

/// Brute-force kernel of the chamber stabilizer on the vertices of `E_1`.
fn brute_force_e1_kernel(action: &geomkit::action::GeometryAction, gamma: &Simplex) -> u128 {
    let c = action.target().complex();
    let verts: Vec<usize> = c.e_k_set(gamma, 1).unwrap().iter().flat_map(|s| s.iter()).collect();
    let elements = action.group().enumerate_elements(100_000).unwrap();
    elements
        .iter()
        .filter(|g| gamma.iter().chain(verts.iter().copied()).all(|v| g.apply(v) == v))
        .count() as u128
}

#[test]
fn chamber_stabilizer_kernels_on_e1() {
    // finite polygons admit elations fixing both panels of a chamber pointwise;
    // only joins of panels (digons) force the kernel to be trivial
    let catalog = [
        (neumaier(), 2),
        (projective_space(2, 2).unwrap(), 2),
        (projective_space(2, 3).unwrap(), 3),
        (projective_space(3, 2).unwrap(), 8),
        (symplectic_polar_space(4, 2).unwrap(), 4),
        (complete_bipartite_digon(3, 4).unwrap(), 1),
    ];
    for (entry, expected) in catalog {
        let action = entry.action.unwrap();
        assert!(action.verify().faithful, "{}", entry.provenance);
        for gamma in action.target().complex().chambers().iter().take(3) {
            let k = action.chamber_kernel_on_e1(gamma).unwrap();
            assert_eq!(k.order(), brute_force_e1_kernel(&action, gamma), "{}", entry.provenance);
            assert_eq!(k.order(), expected, "{}", entry.provenance);
        }
    }
}

#[test]
fn point_stabilizer_kernel_on_its_link() {
    let action = neumaier().action.unwrap();
    let p = Simplex::new([0]);
    let stab = action.stabilizer(&p);
    let link = action.target().complex().link_simplices(&p).unwrap();
    let k = action.kernel_on_subcomplex(&stab, link.iter());
    assert!(k.is_subgroup_of(&stab));
    assert_eq!(stab.order() % k.order(), 0);
}
