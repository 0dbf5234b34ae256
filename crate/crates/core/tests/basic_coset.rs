mod common;

use std::collections::BTreeMap;

use common::{affine_complex, affine_reduction, thin_a2};
use geomkit::catalog::{affine_a2_group, neumaier, projective_space};
use geomkit::coset::{
    basic_coset_construction, search_compatible_homomorphisms, stabilizer_complex, universal_over_family,
    verify_universal_property, FamilyMember, SimpleHomomorphism, SubgroupComplex,
};
use geomkit::iso::find_isomorphism;
use geomkit::{GeomError, PermGroup, Permutation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Runs the construction and asserts every postcondition; returns `|F|`.
fn check(sc: &SubgroupComplex, psi: &SimpleHomomorphism) -> u128 {
    let bcc = basic_coset_construction(sc, psi).unwrap();
    let report = bcc.postconditions(psi).unwrap();
    assert!(report.all_hold(), "{report:?}");
    let f = report.f_order;
    let up = bcc.lifted.geometry.complex().chambers().len() as u128;
    let down = bcc.base.geometry.complex().chambers().len() as u128;
    assert_eq!(up, f * down);
    let m = bcc.h_degree;
    let n = sc.ambient().degree();
    let pr2 = PermGroup::generated_by(n, bcc.g_prime.generators().iter().map(|g| g.restrict(m, n)));
    assert_eq!(bcc.g_prime.order(), f * pr2.order());
    f
}

#[test]
fn trivial_psi_reproduces_the_base() {
    let action = projective_space(2, 2).unwrap().action.unwrap();
    let gamma = action.target().complex().chambers()[0].clone();
    let sc = stabilizer_complex(&action, &gamma).unwrap();
    let psi = SimpleHomomorphism::trivial(&sc, PermGroup::symmetric(3));
    assert_eq!(check(&sc, &psi), 1);
    let bcc = basic_coset_construction(&sc, &psi).unwrap();
    assert_eq!(bcc.g_prime.order(), 168);
    assert!(find_isomorphism(&bcc.lifted.geometry, &bcc.base.geometry).is_some());
}

#[test]
fn restricted_global_homomorphism_has_trivial_kernel() {
    let action = neumaier().action.unwrap();
    let gamma = action.target().complex().chambers()[0].clone();
    let sc = stabilizer_complex(&action, &gamma).unwrap();
    let g = action.group().clone();
    let psi = SimpleHomomorphism::from_global(&sc, g.clone(), g.generators()).unwrap();
    assert_eq!(check(&sc, &psi), 1);
    let bcc = basic_coset_construction(&sc, &psi).unwrap();
    assert_eq!(bcc.g_prime.order(), 2520);
    assert!(find_isomorphism(&bcc.lifted.geometry, action.target()).is_some());
}

#[test]
fn affine_torus_has_a_fourfold_cover() {
    let (sc, gens) = affine_complex(3);
    let psi = affine_reduction(&sc, &gens, 6);
    assert_eq!(check(&sc, &psi), 4);
    let bcc = basic_coset_construction(&sc, &psi).unwrap();
    // a genuine cover of a rank-3 geometry is a 2-covering but not a 3-covering
    assert_eq!(bcc.covering.verified_up_to, 2);
    assert_eq!(bcc.g_prime.order(), 216);
}

#[test]
fn incompatible_psi_is_rejected() {
    let (sc, gens) = affine_complex(3);
    let mut psi = affine_reduction(&sc, &gens, 6);
    // send the generator of one rank-one subgroup somewhere else
    let (_, other) = affine_a2_group(6).unwrap();
    let pairs = psi.maps.get_mut(&0b011).unwrap();
    pairs[0].1 = &other[0] * &other[1];
    assert!(matches!(basic_coset_construction(&sc, &psi), Err(GeomError::IncompatibleSimpleHomomorphism(_))));
}

/// Every compatible `psi` found by random search satisfies the postconditions.
fn search_suite(sc: &SubgroupComplex, target: &PermGroup, attempts: usize, seed: u64) -> Vec<u128> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let found = search_compatible_homomorphisms(sc, target, attempts, &mut rng);
    found.iter().map(|psi| check(sc, psi)).collect()
}

#[test]
fn random_search_on_the_affine_torus() {
    let (sc, _) = affine_complex(3);
    let (h, _) = affine_a2_group(6).unwrap();
    let orders = search_suite(&sc, &h, 300, 7);
    assert!(!orders.is_empty(), "no nontrivial simple homomorphism found");
    assert!(orders.iter().any(|&f| f > 1), "{orders:?}");
}

#[test]
fn random_search_on_the_fano_plane() {
    let action = projective_space(2, 2).unwrap().action.unwrap();
    let gamma = action.target().complex().chambers()[0].clone();
    let sc = stabilizer_complex(&action, &gamma).unwrap();
    // the two vertex stabilizers map onto Sym(3) with different kernels on the
    // chamber stabilizer, so only the trivial map is compatible
    let orders = search_suite(&sc, &PermGroup::symmetric(3), 3000, 11);
    assert_eq!(orders, vec![1]);
}

#[test]
fn random_search_on_the_thin_hexagon() {
    let (sc, _) = thin_a2();
    let orders = search_suite(&sc, &PermGroup::symmetric(4), 300, 13);
    assert!(!orders.is_empty());
}

fn affine_member(n: usize) -> (FamilyMember, Vec<Permutation>) {
    let (sc, gens) = affine_complex(n);
    let r = geomkit::coset::coset_geometry(&sc).unwrap();
    let chamber = r.coset_simplex(sc.full_mask(), &Permutation::identity(sc.ambient().degree())).unwrap();
    let action = r.action.clone();
    (FamilyMember { action, chamber, identification: SimpleHomomorphism::trivial(&sc, PermGroup::trivial(1)) }, gens)
}

/// The identification of the mod-`n` parabolic complex with the chamber
/// stabilizers of the coset geometry of the mod-`m` group.
fn affine_identification(n: usize, m: usize) -> (SubgroupComplex, FamilyMember) {
    let (sc, gens) = affine_complex(n);
    let (mut member, _) = affine_member(m);
    let (_, targets) = affine_a2_group(m).unwrap();
    let (sc_m, _) = affine_complex(m);
    let geom = geomkit::coset::coset_geometry(&sc_m).unwrap();
    let on_vertices: Vec<Permutation> = targets.iter().map(|t| geom.vertex_permutation(t)).collect();
    let maps = sc
        .groups()
        .iter()
        .map(|(&mask, gj)| {
            let pairs = gj
                .generators()
                .iter()
                .map(|x| (x.clone(), on_vertices[gens.iter().position(|s| s == x).unwrap()].clone()))
                .collect();
            (mask, pairs)
        })
        .collect::<BTreeMap<_, _>>();
    member.identification = SimpleHomomorphism { target: member.action.group().clone(), maps };
    (sc, member)
}

#[test]
fn universal_over_a_single_member_is_the_member() {
    let (sc, member) = affine_identification(3, 3);
    let u = universal_over_family(&sc, &[member]).unwrap();
    assert_eq!(u.g_hat.order(), 54);
    let m = &u.morphisms[0];
    assert_eq!(m.source().complex().vertex_count(), m.target().complex().vertex_count());
    assert_eq!(m.verified_up_to, 3);
}

#[test]
fn universal_over_two_tori() {
    let (sc, small) = affine_identification(3, 3);
    let (_, large) = affine_identification(3, 6);
    let u = universal_over_family(&sc, &[small, large]).unwrap();
    assert_eq!(u.g_hat.order(), 216);
    assert_eq!(u.result.geometry.complex().chambers().len(), 216);
    // onto the large torus an isomorphism, onto the small one a fourfold cover
    assert_eq!(u.morphisms[1].target().complex().chambers().len(), 216);
    assert_eq!(u.morphisms[0].target().complex().chambers().len(), 54);
    assert_eq!((u.morphisms[0].verified_up_to, u.morphisms[1].verified_up_to), (2, 3));
    let deck = u.morphisms[0].deck_transformations().unwrap();
    assert_eq!(deck.order(), 4);
}

#[test]
fn two_identical_neumaier_members() {
    let action = neumaier().action.unwrap();
    let gamma = action.target().complex().chambers()[0].clone();
    let sc = stabilizer_complex(&action, &gamma).unwrap();
    let id = SimpleHomomorphism::from_global(&sc, action.group().clone(), action.group().generators()).unwrap();
    let member = FamilyMember { action: action.clone(), chamber: gamma, identification: id };
    let u = universal_over_family(&sc, &[member.clone(), member]).unwrap();
    assert_eq!(u.g_hat.order(), 2520);
    for m in &u.morphisms {
        assert_eq!(m.source().complex().chambers().len(), 315);
        assert_eq!(m.verified_up_to, 3);
    }
}

#[test]
fn inconsistent_identification_is_rejected() {
    let (sc, mut member) = affine_identification(3, 3);
    member.chamber = member.action.target().complex().chambers()[1].clone();
    assert!(matches!(universal_over_family(&sc, &[member]), Err(GeomError::InconsistentIdentification(0))));
}

#[test]
fn universal_property_factorings() {
    let (sc, small) = affine_identification(3, 3);
    let (_, large) = affine_identification(3, 6);
    let u = universal_over_family(&sc, &[small, large]).unwrap();
    let sc_hat = &u.subgroup_complex;
    // trivial target
    let f = verify_universal_property(sc_hat, &SimpleHomomorphism::trivial(sc_hat, PermGroup::trivial(2))).unwrap();
    assert!(f.unique && f.images.iter().all(|p| p.is_identity()));
    // inclusion into the group itself factors through the identity
    let g_hat = sc_hat.ambient().clone();
    let inclusion = SimpleHomomorphism::from_global(sc_hat, g_hat.clone(), g_hat.generators()).unwrap();
    let f = verify_universal_property(sc_hat, &inclusion).unwrap();
    assert_eq!(f.images, g_hat.generators().to_vec());
    // reduction to the mod-2 group
    let (h, targets) = affine_a2_group(2).unwrap();
    let diag: Vec<Permutation> = (0..3).map(|i| sc_hat.group(0b111 ^ (1 << i)).generators()[0].clone()).collect();
    let maps = sc_hat
        .groups()
        .iter()
        .map(|(&mask, gj)| {
            let pairs = gj
                .generators()
                .iter()
                .map(|x| (x.clone(), targets[diag.iter().position(|d| d == x).unwrap()].clone()))
                .collect();
            (mask, pairs)
        })
        .collect::<BTreeMap<_, _>>();
    let phi = SimpleHomomorphism { target: h.clone(), maps };
    let f = verify_universal_property(sc_hat, &phi).unwrap();
    assert_eq!(PermGroup::generated_by(h.degree(), f.images), h);
}

#[test]
fn non_universal_input_has_no_factoring() {
    let (sc, gens) = affine_complex(3);
    let psi = affine_reduction(&sc, &gens, 6);
    assert!(matches!(verify_universal_property(&sc, &psi), Err(GeomError::NoFactoring)));
    let psi = affine_reduction(&sc, &gens, 3);
    assert!(verify_universal_property(&sc, &psi).is_ok());
}
