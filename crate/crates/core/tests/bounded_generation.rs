mod common;

use geomkit::action::{bounded_generation_check, residue_longest_word};
use geomkit::catalog::{neumaier, projective_space};
use geomkit::coset::coset_geometry;
use geomkit::verify::{diagram_of, is_geometry};
use geomkit::{GeomError, Simplex, DEFAULT_CAP};

#[test]
fn neumaier_from_the_empty_simplex() {
    let action = neumaier().action.unwrap();
    let gamma = action.target().complex().chambers()[0].clone();
    let beta = Simplex::empty();
    let s = residue_longest_word(action.target(), &beta, DEFAULT_CAP).unwrap();
    assert_eq!(s, 9);
    let r = bounded_generation_check(&action, &gamma, &beta, s, DEFAULT_CAP).unwrap();
    assert!(r.holds);
    assert_eq!((r.s, r.t, r.stabilizer_order), (9, 3, 2520));
    assert!(r.measured_diameter <= 9, "{r:?}");
}

#[test]
fn fano_from_the_empty_simplex() {
    let action = projective_space(2, 2).unwrap().action.unwrap();
    let gamma = action.target().complex().chambers()[0].clone();
    let s = residue_longest_word(action.target(), &Simplex::empty(), DEFAULT_CAP).unwrap();
    assert_eq!(s, 3);
    let r = bounded_generation_check(&action, &gamma, &Simplex::empty(), s, DEFAULT_CAP).unwrap();
    assert!(r.holds && r.measured_diameter <= 3);
    assert_eq!((r.t, r.stabilizer_order), (2, 168));
}

#[test]
fn chamber_as_beta_has_diameter_zero() {
    let action = neumaier().action.unwrap();
    let gamma = action.target().complex().chambers()[5].clone();
    let s = residue_longest_word(action.target(), &gamma, DEFAULT_CAP).unwrap();
    assert_eq!(s, 0);
    let r = bounded_generation_check(&action, &gamma, &gamma, s, DEFAULT_CAP).unwrap();
    assert!(r.holds);
    assert_eq!((r.measured_diameter, r.t, r.stabilizer_order), (0, 0, 8));
}

#[test]
fn vertex_residues_in_neumaier() {
    let action = neumaier().action.unwrap();
    let gamma = action.target().complex().chambers()[0].clone();
    let tc = action.target();
    // point residue is a generalized quadrangle, plane residue a Fano plane
    for (t, expected) in [(0, 4), (2, 3)] {
        let beta = tc.face_of_type(&gamma, 1 << t);
        let s = residue_longest_word(tc, &beta, DEFAULT_CAP).unwrap();
        assert_eq!(s, expected);
        let r = bounded_generation_check(&action, &gamma, &beta, s, DEFAULT_CAP).unwrap();
        assert!(r.holds && r.measured_diameter <= s);
    }
}

#[test]
fn beta_outside_gamma_is_rejected() {
    let action = neumaier().action.unwrap();
    let c = action.target().complex();
    let gamma = c.chambers()[0].clone();
    let other = c.chambers().iter().find(|ch| ch.intersection(&gamma).is_empty()).unwrap().clone();
    let beta = Simplex::new([other.vertices()[0]]);
    assert!(bounded_generation_check(&action, &gamma, &beta, 9, DEFAULT_CAP).is_err());
    assert!(matches!(
        bounded_generation_check(&action, &beta, &beta, 9, DEFAULT_CAP),
        Err(GeomError::NotAChamber(_))
    ));
}

#[test]
fn triangle_diagram_is_not_spherical() {
    let sc = common::alt7_triangle();
    let res = coset_geometry(&sc).unwrap();
    let tc = &res.geometry;
    assert!(is_geometry(tc).is_geometry());
    assert_eq!(tc.type_counts(), vec![120, 120, 120]);
    let m = diagram_of(tc).unwrap();
    assert!((0..3).all(|i| (0..3).all(|j| m.get(i, j) == if i == j { 1 } else { 3 })));
    assert!(!m.is_spherical());
    assert_eq!(residue_longest_word(tc, &Simplex::empty(), DEFAULT_CAP), Err(GeomError::NonSphericalResidue));
    // vertex residues are projective planes, so the bound is available there
    let gamma = tc.complex().chambers()[0].clone();
    let beta = Simplex::new([gamma.vertices()[0]]);
    let s = residue_longest_word(tc, &beta, DEFAULT_CAP).unwrap();
    assert_eq!(s, 3);
    let r = bounded_generation_check(&res.action, &gamma, &beta, s, DEFAULT_CAP).unwrap();
    assert_eq!(r.stabilizer_order, 21);
    assert!(r.holds && r.measured_diameter <= s);
}

#[test]
fn cap_overflow_is_not_reported_as_non_spherical() {
    let tc = neumaier().geometry;
    assert_eq!(residue_longest_word(&tc, &Simplex::empty(), 10), Err(GeomError::CapExceeded(10)));
}
