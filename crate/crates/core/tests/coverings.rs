mod common;

use common::{affine_complex, affine_reduction};
use geomkit::coset::{basic_coset_construction, BasicCosetConstruction};
use geomkit::covering::{quotient_by_free_action, CoveringMap, SimplicialMap};
use geomkit::iso::find_isomorphism;
use geomkit::{GeomError, PermGroup, Permutation, TypedComplex};

fn torus_cover() -> BasicCosetConstruction {
    let (sc, gens) = affine_complex(3);
    let psi = affine_reduction(&sc, &gens, 6);
    basic_coset_construction(&sc, &psi).unwrap()
}

#[test]
fn identity_is_a_covering_at_every_level() {
    let bcc = torus_cover();
    let id = CoveringMap::identity(&bcc.base.geometry);
    for k in 0..=3 {
        assert!(id.is_k_covering(k));
    }
    assert!(id.deck_transformations().unwrap().is_trivial());
}

#[test]
fn lifts_are_unique() {
    let bcc = torus_cover();
    let rho = &bcc.covering;
    let up = rho.source().complex();
    let base_group = bcc.base.action.group();
    let gamma1 = up.chambers()[0].clone();
    let mut lifted = 0;
    for g in base_group.enumerate_elements(100).unwrap().iter().take(20) {
        let target = rho.map.apply(&gamma1).map(|v| g.apply(v));
        for gamma2 in up.chambers().iter().filter(|c| rho.map.apply(c) == target) {
            let a = rho.lift_with_order(g, &gamma1, gamma2, false).unwrap();
            let b = rho.lift_with_order(g, &gamma1, gamma2, true).unwrap();
            assert_eq!(a, b);
            if let Some(l) = a {
                lifted += 1;
                assert!(up.chambers().binary_search(&gamma1.map(|v| l.apply(v))).is_ok());
                assert_eq!(gamma1.map(|v| l.apply(v)), *gamma2);
            }
        }
    }
    // the torus group lifts: every base automorphism has |F| lifts per chamber
    assert_eq!(lifted, 20 * 4);
}

#[test]
fn deck_group_is_the_kernel() {
    let bcc = torus_cover();
    let deck = bcc.covering.deck_transformations().unwrap();
    assert_eq!(deck.order(), bcc.f_kernel.order());
    assert_eq!(deck, bcc.f_on_lifted());
}

#[test]
fn deck_transformations_lift_the_identity() {
    let bcc = torus_cover();
    let rho = &bcc.covering;
    let id = Permutation::identity(rho.target().complex().vertex_count());
    let gamma1 = rho.source().complex().chambers()[0].clone();
    for f in bcc.f_on_lifted().enumerate_elements(10).unwrap() {
        let gamma2 = gamma1.map(|v| f.apply(v));
        assert_eq!(rho.lift_automorphism(&id, &gamma1, &gamma2).unwrap(), Some(f));
    }
}

#[test]
fn deck_stabilizers_of_small_corank_are_trivial() {
    let bcc = torus_cover();
    let deck = bcc.covering.deck_transformations().unwrap();
    let up = bcc.covering.source().complex();
    for s in up.simplices().iter().filter(|s| up.corank(s) <= 2) {
        assert!(deck.pointwise_stabilizer(s.vertices()).is_trivial(), "{s}");
    }
}

#[test]
fn chamber_mismatch_is_reported() {
    let bcc = torus_cover();
    let id = CoveringMap::identity(&bcc.base.geometry);
    let c = bcc.base.geometry.complex().chambers();
    let g = Permutation::identity(bcc.base.geometry.complex().vertex_count());
    assert!(matches!(id.lift_automorphism(&g, &c[0], &c[1]), Err(GeomError::ChamberMismatch)));
    assert_eq!(id.lift_automorphism(&g, &c[0], &c[0]).unwrap(), Some(g));
}

/// The action of a group on the vertex orbits of a normal subgroup.
fn induced_on_orbits(group: &PermGroup, normal: &PermGroup, n: usize) -> (Vec<usize>, PermGroup) {
    let mut orbit_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for v in 0..n {
        if orbit_of[v] == usize::MAX {
            for &w in normal.orbit(&v).points() {
                orbit_of[w] = reps.len();
            }
            reps.push(v);
        }
    }
    let gens = group
        .generators()
        .iter()
        .map(|g| Permutation::from_images(reps.iter().map(|&r| orbit_of[g.apply(r)]).collect()).unwrap());
    let induced = PermGroup::generated_by(reps.len(), gens);
    (orbit_of, induced)
}

#[test]
fn composition_of_coverings_reverifies() {
    let bcc = torus_cover();
    let up = &bcc.lifted.geometry;
    let f = bcc.f_on_lifted();
    let n = up.complex().vertex_count();
    let f1 = PermGroup::generated_by(n, [f.generators()[0].clone()]);
    assert!(f1.order() > 1 && f1.order() < f.order());
    let (middle, first) = quotient_by_free_action(up, &f1).unwrap();
    let (orbit_of, induced) = induced_on_orbits(&f, &f1, n);
    assert_eq!(first.vertex_map(), orbit_of.as_slice());
    let (bottom, second) = quotient_by_free_action(&middle, &induced).unwrap();
    let composite = CoveringMap::compose(&first, &second).unwrap();
    let k = first.verified_up_to.min(second.verified_up_to);
    assert!(composite.is_k_covering(k));
    assert_eq!(composite.verified_up_to, 2);
    assert!(find_isomorphism(&bottom, &bcc.base.geometry).is_some());
    // with identities on either side
    let left = CoveringMap::compose(&CoveringMap::identity(up), &bcc.covering).unwrap();
    let right = CoveringMap::compose(&bcc.covering, &CoveringMap::identity(&bcc.base.geometry)).unwrap();
    assert_eq!(left.verified_up_to, bcc.covering.verified_up_to);
    assert_eq!(right.verified_up_to, bcc.covering.verified_up_to);
}

#[test]
fn quotients() {
    let bcc = torus_cover();
    let up = &bcc.lifted.geometry;
    let n = up.complex().vertex_count();
    let (q, map) = quotient_by_free_action(up, &PermGroup::trivial(n)).unwrap();
    assert_eq!(q.complex().maximal_simplices(), up.complex().maximal_simplices());
    assert_eq!(map.verified_up_to, 3);
    let (q, map) = quotient_by_free_action(up, &bcc.f_on_lifted()).unwrap();
    assert_eq!(map.verified_up_to, 2);
    assert!(find_isomorphism(&q, &bcc.base.geometry).is_some());
    let neumaier = geomkit::catalog::neumaier().action.unwrap();
    let chamber = neumaier.target().complex().chambers()[0].clone();
    assert!(matches!(
        quotient_by_free_action(neumaier.target(), &neumaier.stabilizer(&chamber)),
        Err(GeomError::NotFreeOnChambers(c)) if c == chamber
    ));
}

#[test]
fn collapse_is_not_a_covering() {
    let bcc = torus_cover();
    let base: &TypedComplex = &bcc.base.geometry;
    let n = base.complex().vertex_count();
    let collapse = SimplicialMap::new(base.clone(), base.clone(), vec![0; n]).unwrap();
    let report = collapse.verify().unwrap();
    assert!(!report.regular);
    assert_eq!(report.failure.as_deref(), Some("not regular"));
    assert!(matches!(CoveringMap::verify(collapse), Err(GeomError::NotSimplicial(m)) if m == "not regular"));
}
