//! Type-preserving permutation actions on geometries.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::complex::{Simplex, VertexId};
use crate::coxeter::{enumerate_group, CoxeterMatrix};
use crate::error::{GeomError, Result};
use crate::perm::{PermGroup, Permutation};
use crate::typed::TypedComplex;
use crate::verify::diagram_of;

/// A permutation group acting on the vertex table of a typed complex.
#[derive(Clone, Debug)]
pub struct GeometryAction {
    group: PermGroup,
    target: TypedComplex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionReport {
    pub preserves_simplices: bool,
    pub preserves_types: bool,
    pub chamber_transitive: bool,
    pub faithful: bool,
    pub chamber_orbits: usize,
    /// Index of the first generator that is not a type-preserving automorphism.
    pub offending_generator: Option<usize>,
}

impl ActionReport {
    pub fn is_valid(&self) -> bool {
        self.preserves_simplices && self.preserves_types
    }
}

impl GeometryAction {
    pub fn new(group: PermGroup, target: TypedComplex) -> Result<Self> {
        if group.degree() != target.complex().vertex_count() {
            return Err(GeomError::DegreeMismatch(group.degree(), target.complex().vertex_count()));
        }
        Ok(GeometryAction { group, target })
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn target(&self) -> &TypedComplex {
        &self.target
    }

    pub fn is_automorphism(&self, g: &Permutation) -> (bool, bool) {
        let tc = &self.target;
        let types = (0..g.degree()).all(|v| tc.type_of(g.apply(v)) == tc.type_of(v));
        let max = tc.complex().maximal_simplices();
        let simplices = max.iter().all(|m| max.binary_search(&m.map(|v| g.apply(v))).is_ok());
        (simplices, types)
    }

    pub fn verify(&self) -> ActionReport {
        let mut preserves_simplices = true;
        let mut preserves_types = true;
        let mut offending_generator = None;
        for (i, g) in self.group.generators().iter().enumerate() {
            let (s, t) = self.is_automorphism(g);
            if !(s && t) && offending_generator.is_none() {
                offending_generator = Some(i);
            }
            preserves_simplices &= s;
            preserves_types &= t;
        }
        let chamber_orbits = self.chamber_orbits().len();
        ActionReport {
            preserves_simplices,
            preserves_types,
            chamber_transitive: chamber_orbits == 1,
            faithful: self.kernel_on_vertices(&self.group, 0..self.target.complex().vertex_count()).is_trivial(),
            chamber_orbits,
            offending_generator,
        }
    }

    /// Chamber orbits, each listed by chamber index.
    pub fn chamber_orbits(&self) -> Vec<Vec<usize>> {
        let c = self.target.complex();
        let n = c.chambers().len();
        let mut seen = vec![false; n];
        let mut orbits = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit = vec![start];
            let mut i = 0;
            while i < orbit.len() {
                let ch = &c.chambers()[orbit[i]];
                for g in self.group.generators() {
                    if let Some(j) = c.chamber_index(&ch.map(|v| g.apply(v))) {
                        if !seen[j] {
                            seen[j] = true;
                            orbit.push(j);
                        }
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        orbits
    }

    /// Setwise stabilizer of a simplex; for type-preserving actions this fixes
    /// the simplex pointwise.
    pub fn stabilizer(&self, s: &Simplex) -> PermGroup {
        self.group.pointwise_stabilizer(s.vertices())
    }

    /// Elements of `subgroup` fixing every vertex in `vertices`.
    pub fn kernel_on_vertices(&self, subgroup: &PermGroup, vertices: impl IntoIterator<Item = VertexId>) -> PermGroup {
        let pts: Vec<VertexId> = vertices.into_iter().collect();
        subgroup.pointwise_stabilizer(&pts)
    }

    /// Elements of `subgroup` acting trivially on every vertex occurring in `simplices`.
    pub fn kernel_on_subcomplex<'a>(
        &self,
        subgroup: &PermGroup,
        simplices: impl IntoIterator<Item = &'a Simplex>,
    ) -> PermGroup {
        let mut verts: Vec<VertexId> = simplices.into_iter().flat_map(|s| s.iter()).collect();
        verts.sort_unstable();
        verts.dedup();
        self.kernel_on_vertices(subgroup, verts)
    }

    /// Kernel of the chamber stabilizer on `E_1(gamma)`.
    pub fn chamber_kernel_on_e1(&self, gamma: &Simplex) -> Result<PermGroup> {
        let c = self.target.complex();
        if c.chamber_index(gamma).is_none() {
            return Err(GeomError::NotAChamber(gamma.clone()));
        }
        let e1 = c.e_k_set(gamma, 1)?;
        let stab = self.stabilizer(gamma);
        Ok(self.kernel_on_subcomplex(&stab, e1.iter()))
    }
}

/// Longest word length of the Coxeter group of the residue of `beta`.
pub fn residue_longest_word(tc: &TypedComplex, beta: &Simplex, cap: usize) -> Result<usize> {
    let corank = tc.complex().corank(beta);
    let (link, _) = tc.link(beta)?;
    let m = match corank {
        0 => return Ok(0),
        1 => CoxeterMatrix::a(1),
        _ => diagram_of(&link)?,
    };
    if !m.is_spherical() {
        return Err(GeomError::NonSphericalResidue);
    }
    Ok(enumerate_group(&m, cap)?.longest_word_length())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundedGeneration {
    pub holds: bool,
    pub measured_diameter: usize,
    pub s: usize,
    pub t: usize,
    pub stabilizer_order: usize,
}

/// Word-length bound for `G_beta` over the stabilizers of the corank-one faces
/// of `gamma` containing `beta`: breadth-first search from `G_gamma` (depth 0),
/// one step multiplying by an element of any of these face stabilizers.
pub fn bounded_generation_check(
    action: &GeometryAction,
    gamma: &Simplex,
    beta: &Simplex,
    s: usize,
    cap: usize,
) -> Result<BoundedGeneration> {
    let c = action.target().complex();
    if c.chamber_index(gamma).is_none() {
        return Err(GeomError::NotAChamber(gamma.clone()));
    }
    if !beta.is_subset(gamma) {
        return Err(GeomError::SimplexNotInComplex(beta.clone()));
    }
    let missing = gamma.difference(beta);
    let t = missing.len();
    let g_beta = action.stabilizer(beta).enumerate_elements(cap)?;
    let g_gamma = action.stabilizer(gamma).enumerate_elements(cap)?;
    let mut steps: Vec<Permutation> = Vec::new();
    let mut step_set = HashSet::new();
    for v in missing.iter() {
        for g in action.stabilizer(&gamma.without(v)).enumerate_elements(cap)? {
            if step_set.insert(g.clone()) {
                steps.push(g);
            }
        }
    }
    let mut depth: HashMap<Permutation, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for g in g_gamma {
        depth.insert(g.clone(), 0);
        queue.push_back(g);
    }
    let mut measured = 0;
    while let Some(x) = queue.pop_front() {
        let d = depth[&x];
        measured = measured.max(d);
        for st in &steps {
            let y = &x * st;
            if !depth.contains_key(&y) {
                depth.insert(y.clone(), d + 1);
                queue.push_back(y);
            }
        }
    }
    let all_reached = g_beta.iter().all(|g| depth.contains_key(g));
    Ok(BoundedGeneration {
        holds: all_reached && measured <= s * t,
        measured_diameter: measured,
        s,
        t,
        stabilizer_order: g_beta.len(),
    })
}

/// Normal subgroups of a small group, by joining normal closures of single
/// elements. Experimental; refuses groups larger than `cap`.
pub fn normal_subgroups(group: &PermGroup, cap: usize) -> Result<Vec<PermGroup>> {
    let elems = group.enumerate_elements(cap)?;
    let mut found: Vec<PermGroup> = vec![PermGroup::trivial(group.degree())];
    let mut closures: Vec<PermGroup> = Vec::new();
    let mut covered: HashSet<Permutation> = HashSet::new();
    for g in &elems {
        if covered.contains(g) || g.is_identity() {
            continue;
        }
        let n = group.normal_closure(std::slice::from_ref(g));
        // every conjugate of g has the same normal closure
        for h in group.generators() {
            covered.insert(&(h * g) * &h.inverse());
        }
        if !closures.contains(&n) {
            closures.push(n);
        }
    }
    let mut frontier: Vec<PermGroup> = closures.clone();
    found.extend(closures.iter().cloned());
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for b in &closures {
                let j = a.join(b);
                if !found.contains(&j) {
                    found.push(j.clone());
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    found.sort_by_key(|n| n.order());
    Ok(found)
}

/// Proper normal subgroups still transitive on chambers; empty means the
/// action is minimal in the finite sense.
pub fn chamber_transitive_normal_subgroups(action: &GeometryAction, cap: usize) -> Result<Vec<PermGroup>> {
    let order = action.group().order();
    let mut out = Vec::new();
    for n in normal_subgroups(action.group(), cap)? {
        if n.order() == order {
            continue;
        }
        let sub = GeometryAction::new(n.clone(), action.target().clone())?;
        if sub.chamber_orbits().len() == 1 {
            out.push(n);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Complex;

    fn triangle_action() -> GeometryAction {
        // three points of one type, the rank-1 complex
        let c = Complex::new(3, vec![vec![0], vec![1], vec![2]]).unwrap();
        let tc = TypedComplex::from_labels(c, &["p"], vec![0, 0, 0]).unwrap();
        GeometryAction::new(PermGroup::symmetric(3), tc).unwrap()
    }

    #[test]
    fn symmetric_group_on_three_points() {
        let a = triangle_action();
        let r = a.verify();
        assert!(r.is_valid() && r.chamber_transitive && r.faithful);
        assert_eq!(a.stabilizer(&Simplex::from([0])).order(), 2);
        let normals = normal_subgroups(a.group(), 100).unwrap();
        assert_eq!(normals.iter().map(|n| n.order()).collect::<Vec<_>>(), vec![1, 3, 6]);
        assert_eq!(chamber_transitive_normal_subgroups(&a, 100).unwrap().len(), 1);
    }

    #[test]
    fn type_breaking_generator_is_reported() {
        let c = Complex::new(2, vec![vec![0, 1]]).unwrap();
        let tc = TypedComplex::from_labels(c, &["p", "l"], vec![0, 1]).unwrap();
        let swap = Permutation::from_cycles(2, &[&[0, 1]]).unwrap();
        let a = GeometryAction::new(PermGroup::new(2, vec![swap]).unwrap(), tc).unwrap();
        let r = a.verify();
        assert!(r.preserves_simplices && !r.preserves_types);
        assert_eq!(r.offending_generator, Some(0));
    }

    #[test]
    fn identity_action_on_one_chamber() {
        let c = Complex::new(2, vec![vec![0, 1]]).unwrap();
        let tc = TypedComplex::from_labels(c, &["p", "l"], vec![0, 1]).unwrap();
        let a = GeometryAction::new(PermGroup::trivial(2), tc).unwrap();
        let r = a.verify();
        assert!(r.is_valid() && r.faithful && r.chamber_transitive);
        let gamma = Simplex::from([0, 1]);
        let b = bounded_generation_check(&a, &gamma, &gamma, 0, 10).unwrap();
        assert_eq!((b.holds, b.measured_diameter, b.t), (true, 0, 0));
    }

    #[test]
    fn degree_must_match() {
        let c = Complex::new(2, vec![vec![0, 1]]).unwrap();
        let tc = TypedComplex::from_labels(c, &["p", "l"], vec![0, 1]).unwrap();
        assert_eq!(GeometryAction::new(PermGroup::trivial(3), tc).unwrap_err(), GeomError::DegreeMismatch(3, 2));
    }
}
