mod common;

use std::collections::BTreeMap;

use common::{affine_complex, labels, thin_a2};
use geomkit::catalog::{neumaier, projective_space, symplectic_polar_space, CatalogGeometry};
use geomkit::coset::{coset_geometry, stabilizer_complex, SubgroupComplex};
use geomkit::iso::find_isomorphism;
use geomkit::verify::is_geometry;
use geomkit::{GeomError, PermGroup, Permutation, Simplex};

fn round_trip(entry: CatalogGeometry) {
    let action = entry.action.unwrap();
    let gamma = action.target().complex().chambers()[0].clone();
    let sc = stabilizer_complex(&action, &gamma).unwrap();
    let r = coset_geometry(&sc).unwrap();
    assert!(r.is_thick, "{}", entry.provenance);
    assert!(r.action.verify().is_valid());
    assert!(r.action.verify().chamber_transitive);
    let iso = find_isomorphism(&r.geometry, action.target()).expect(&entry.provenance);
    // the isomorphism is a bijection preserving types
    let mut seen = vec![false; iso.len()];
    for (v, &w) in iso.iter().enumerate() {
        assert!(!seen[w]);
        seen[w] = true;
        assert_eq!(r.geometry.types()[r.geometry.type_of(v)], action.target().types()[action.target().type_of(w)]);
    }
}

#[test]
fn fano_round_trip() {
    round_trip(projective_space(2, 2).unwrap());
}

#[test]
fn projective_three_space_round_trip() {
    round_trip(projective_space(3, 2).unwrap());
}

#[test]
fn neumaier_round_trip() {
    round_trip(neumaier());
}

#[test]
fn symplectic_round_trip() {
    round_trip(symplectic_polar_space(6, 2).unwrap());
}

#[test]
fn neumaier_stabilizer_orders() {
    let action = neumaier().action.unwrap();
    let gamma = action.target().complex().chambers()[0].clone();
    let sc = stabilizer_complex(&action, &gamma).unwrap();
    let orders: BTreeMap<u32, u128> = sc.groups().iter().map(|(&m, g)| (m, g.order())).collect();
    // |G| / |flag variety of type J|
    let tc = action.target();
    for (mask, count) in tc.flag_variety_sizes().into_iter().filter(|&(m, _)| m != 0) {
        assert_eq!(orders[&mask], 2520 / count as u128);
    }
    assert_eq!((orders[&1], orders[&2], orders[&4], orders[&7]), (360, 72, 168, 8));
    for (&j, gj) in sc.groups() {
        for (&k, gk) in sc.groups() {
            if j & k == j {
                assert!(gk.is_subgroup_of(gj));
            }
        }
    }
}

#[test]
fn non_chamber_is_rejected() {
    let action = neumaier().action.unwrap();
    assert!(matches!(stabilizer_complex(&action, &Simplex::new([0, 7])), Err(GeomError::NotAChamber(_))));
}

#[test]
fn rank_one_transitive_action() {
    let g = PermGroup::symmetric(3);
    let mut groups = BTreeMap::new();
    groups.insert(1, g.stabilizer(&0usize));
    let sc = SubgroupComplex::new(g, labels(1), groups).unwrap();
    let r = coset_geometry(&sc).unwrap();
    assert_eq!(r.geometry.complex().vertex_count(), 3);
    assert_eq!(r.geometry.complex().chambers().len(), 3);
}

#[test]
fn thin_coxeter_complex_is_accepted_and_flagged() {
    let (sc, _) = thin_a2();
    let r = coset_geometry(&sc).unwrap();
    assert!(!r.is_thick);
    let report = is_geometry(&r.geometry);
    assert!(!report.is_thick && report.thin_panel.is_some());
}

#[test]
fn non_generating_subgroups_are_reported() {
    // vertex subgroups inside Sym(3) x 1 cannot reach the second factor
    let g = PermGroup::generated_by(
        6,
        [&[0, 1][..], &[0, 1, 2], &[3, 4]].map(|c| Permutation::from_cycles(6, &[c]).unwrap()),
    );
    let a = Permutation::from_cycles(6, &[&[0, 1]]).unwrap();
    let b = Permutation::from_cycles(6, &[&[1, 2]]).unwrap();
    let mut groups = BTreeMap::new();
    groups.insert(1, PermGroup::new(6, vec![b]).unwrap());
    groups.insert(2, PermGroup::new(6, vec![a]).unwrap());
    groups.insert(3, PermGroup::trivial(6));
    let sc = SubgroupComplex::new(g, labels(2), groups).unwrap();
    assert!(matches!(coset_geometry(&sc), Err(GeomError::NotGalleryConnected)));
}

#[test]
fn invalid_subgroup_complexes() {
    let g = PermGroup::symmetric(3);
    let mut groups = BTreeMap::new();
    groups.insert(1, g.clone());
    assert!(matches!(SubgroupComplex::new(g.clone(), labels(1), groups), Err(GeomError::InvalidSubgroupComplex(_))));
    assert!(matches!(
        SubgroupComplex::new(g, labels(2), BTreeMap::new()),
        Err(GeomError::InvalidSubgroupComplex(_))
    ));
}

#[test]
fn simplices_and_cosets_correspond() {
    let (sc, _) = affine_complex(3);
    let r = coset_geometry(&sc).unwrap();
    let c = r.geometry.complex();
    assert_eq!(c.chambers().len(), 54);
    for s in c.simplices().iter().filter(|s| !s.is_empty()) {
        let (mask, rep) = r.simplex_coset(s).unwrap();
        assert_eq!(mask, r.geometry.type_mask(s));
        assert_eq!(r.coset_simplex(mask, &rep).as_ref(), Some(s));
        // reversed inclusion: faces correspond to larger cosets containing rep
        for v in s.iter() {
            let t = r.geometry.type_of(v);
            assert_eq!(r.vertex_of_coset(t, &rep), Some(v));
        }
    }
}

#[test]
fn residues_are_orbits_of_stabilizers() {
    // residue of gG_J is {h gG_K : h in gG_Jg^-1, K containing J}
    let action = projective_space(2, 2).unwrap().action.unwrap();
    let gamma = action.target().complex().chambers()[0].clone();
    let sc = stabilizer_complex(&action, &gamma).unwrap();
    let r = coset_geometry(&sc).unwrap();
    let c = r.geometry.complex();
    let v = r.vertex_of_coset(0, &Permutation::identity(sc.ambient().degree())).unwrap();
    let stab = r.action.stabilizer(&Simplex::new([v]));
    let mut from_group: Vec<Simplex> = Vec::new();
    let chamber = r.coset_simplex(3, &Permutation::identity(sc.ambient().degree())).unwrap();
    for g in stab.enumerate_elements(1000).unwrap() {
        from_group.push(chamber.map(|x| g.apply(x)));
    }
    from_group.sort();
    from_group.dedup();
    let residue: Vec<Simplex> = c.chambers().iter().filter(|ch| ch.contains(v)).cloned().collect();
    assert_eq!(from_group, residue);
}
