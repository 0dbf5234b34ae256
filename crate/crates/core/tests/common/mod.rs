#![allow(dead_code)]

use std::collections::BTreeMap;

use geomkit::catalog::affine_a2_group;
use geomkit::coset::{SimpleHomomorphism, SubgroupComplex};
use geomkit::{PermGroup, Permutation};

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("t{i}")).collect()
}

/// Parabolic subgroup complex of the affine A2 reflection group mod `n`.
pub fn affine_complex(n: usize) -> (SubgroupComplex, Vec<Permutation>) {
    let (g, gens) = affine_a2_group(n).unwrap();
    (SubgroupComplex::parabolic(g, labels(3), &gens).unwrap(), gens)
}

/// `s_i -> t_i` on every parabolic subgroup, for `t_i` the generators of the
/// affine group mod `m`. Compatible whenever `n` and `m` are both at least 2.
pub fn affine_reduction(sc: &SubgroupComplex, source: &[Permutation], m: usize) -> SimpleHomomorphism {
    let (h, targets) = affine_a2_group(m).unwrap();
    let maps = sc
        .groups()
        .iter()
        .map(|(&mask, gj)| {
            let pairs = gj
                .generators()
                .iter()
                .map(|x| (x.clone(), targets[source.iter().position(|s| s == x).unwrap()].clone()))
                .collect();
            (mask, pairs)
        })
        .collect::<BTreeMap<_, _>>();
    SimpleHomomorphism { target: h, maps }
}

/// Sym(3) with the thin A2 subgroup data `<(0 1)>`, `<(1 2)>`.
pub fn thin_a2() -> (SubgroupComplex, Vec<Permutation>) {
    let a = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
    let b = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
    let gens = vec![a, b];
    (SubgroupComplex::parabolic(PermGroup::symmetric(3), labels(2), &gens).unwrap(), gens)
}

/// A thick rank-3 coset geometry of `Alt(7)` with triangle diagram: three
/// elements of order 3, any two generating a Frobenius group of order 21.
pub fn alt7_triangle() -> SubgroupComplex {
    let a = Permutation::from_images(vec![0, 2, 3, 1, 5, 6, 4]).unwrap();
    let b = Permutation::from_images(vec![1, 4, 2, 5, 0, 6, 3]).unwrap();
    let c = Permutation::from_images(vec![2, 4, 6, 3, 5, 1, 0]).unwrap();
    let gen = |xs: &[&Permutation]| PermGroup::generated_by(7, xs.iter().map(|&x| x.clone()));
    let groups = BTreeMap::from([
        (0b001, gen(&[&b, &c])),
        (0b010, gen(&[&a, &c])),
        (0b100, gen(&[&a, &b])),
        (0b011, gen(&[&c])),
        (0b101, gen(&[&b])),
        (0b110, gen(&[&a])),
        (0b111, PermGroup::trivial(7)),
    ]);
    SubgroupComplex::new(PermGroup::alternating(7), labels(3), groups).unwrap()
}
