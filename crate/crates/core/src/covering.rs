//! Type-preserving simplicial maps, k-coverings, lifts and deck transformations.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::complex::{Complex, Simplex, VertexId};
use crate::error::{GeomError, Result};
use crate::perm::{PermGroup, Permutation};
use crate::typed::TypedComplex;

/// A vertex map between two typed complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    pub source: TypedComplex,
    pub target: TypedComplex,
    pub vertex_map: Vec<VertexId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoveringReport {
    pub simplicial: bool,
    pub regular: bool,
    pub type_preserving: bool,
    pub vertex_surjective: bool,
    pub simplex_surjective: bool,
    /// Largest `k` such that links of all simplices of corank at most `k`
    /// map isomorphically; `None` when the map is not even a 0-covering.
    pub max_k: Option<usize>,
    /// A simplex where the link map fails to be an isomorphism.
    pub failing_simplex: Option<Simplex>,
    pub failure: Option<String>,
}

impl CoveringReport {
    pub fn is_k_covering(&self, k: usize) -> bool {
        self.max_k.is_some_and(|m| m >= k)
    }
}

impl SimplicialMap {
    pub fn new(source: TypedComplex, target: TypedComplex, vertex_map: Vec<VertexId>) -> Result<Self> {
        if vertex_map.len() != source.complex().vertex_count() {
            return Err(GeomError::DegreeMismatch(vertex_map.len(), source.complex().vertex_count()));
        }
        if let Some(&v) = vertex_map.iter().find(|&&v| v >= target.complex().vertex_count()) {
            return Err(GeomError::VertexOutOfRange { vertex: v, count: target.complex().vertex_count() });
        }
        Ok(SimplicialMap { source, target, vertex_map })
    }

    pub fn identity(tc: &TypedComplex) -> Self {
        let n = tc.complex().vertex_count();
        SimplicialMap { source: tc.clone(), target: tc.clone(), vertex_map: (0..n).collect() }
    }

    pub fn apply(&self, s: &Simplex) -> Simplex {
        s.map(|v| self.vertex_map[v])
    }

    fn type_translation(&self) -> Result<Vec<usize>> {
        let (a, b) = (self.source.types(), self.target.types());
        if a.len() != b.len() {
            return Err(GeomError::TypeSetMismatch);
        }
        a.iter()
            .map(|l| b.iter().position(|m| m == l).ok_or(GeomError::TypeSetMismatch))
            .collect()
    }

    /// Checks every covering condition, reporting surjectivity on vertices and
    /// on simplices separately.
    pub fn verify(&self) -> Result<CoveringReport> {
        let translate = self.type_translation()?;
        let src = self.source.complex();
        let dst = self.target.complex();
        let mut r = CoveringReport::default();
        let fail = |mut r: CoveringReport, msg: &str| {
            r.failure = Some(msg.to_string());
            Ok(r)
        };
        r.type_preserving = (0..src.vertex_count())
            .all(|v| self.target.type_of(self.vertex_map[v]) == translate[self.source.type_of(v)]);
        r.regular = src.maximal_simplices().iter().all(|m| self.apply(m).len() == m.len());
        r.simplicial = src.maximal_simplices().iter().all(|m| dst.contains(&self.apply(m)));
        let mut hit = vec![false; dst.vertex_count()];
        for &v in &self.vertex_map {
            hit[v] = true;
        }
        r.vertex_surjective = hit.iter().all(|&h| h);
        let images: BTreeSet<Simplex> = src.maximal_simplices().iter().map(|m| self.apply(m)).collect();
        r.simplex_surjective = dst.maximal_simplices().iter().all(|m| images.contains(m));
        if !r.simplicial {
            return fail(r, "not simplicial");
        }
        if !r.regular {
            return fail(r, "not regular");
        }
        if !r.type_preserving {
            return fail(r, "not type preserving");
        }
        if !(r.vertex_surjective && r.simplex_surjective) {
            return fail(r, "not surjective");
        }
        let mut max_k = src.rank();
        let mut failing: Option<Simplex> = None;
        for alpha in src.simplices() {
            let corank = src.corank(alpha);
            if corank == 0 || corank > max_k {
                continue;
            }
            if !self.link_is_isomorphic(alpha) {
                max_k = corank - 1;
                failing = Some(alpha.clone());
            }
        }
        r.max_k = Some(max_k);
        r.failing_simplex = failing;
        Ok(r)
    }

    /// Whether the induced map `lk(alpha) -> lk(rho(alpha))` is an isomorphism.
    pub fn link_is_isomorphic(&self, alpha: &Simplex) -> bool {
        let src = self.source.complex();
        let dst = self.target.complex();
        let image = self.apply(alpha);
        let up: Vec<Simplex> = src.maximal_containing(alpha).map(|m| m.difference(alpha)).collect();
        let down: BTreeSet<Simplex> = dst.maximal_containing(&image).map(|m| m.difference(&image)).collect();
        let mapped: BTreeSet<Simplex> = up.iter().map(|s| self.apply(s)).collect();
        if mapped.len() != up.len() || mapped != down {
            return false;
        }
        let mut used: HashMap<VertexId, VertexId> = HashMap::new();
        for s in &up {
            for v in s.iter() {
                let w = self.vertex_map[v];
                if *used.entry(w).or_insert(v) != v {
                    return false;
                }
            }
        }
        true
    }
}

/// A simplicial map verified as a covering, carrying the largest `k` it satisfies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringMap {
    pub map: SimplicialMap,
    pub verified_up_to: usize,
    pub report: CoveringReport,
}

impl CoveringMap {
    pub fn verify(map: SimplicialMap) -> Result<CoveringMap> {
        let report = map.verify()?;
        match report.max_k {
            Some(k) => Ok(CoveringMap { map, verified_up_to: k, report }),
            None => Err(GeomError::NotSimplicial(report.failure.unwrap_or_default())),
        }
    }

    pub fn identity(tc: &TypedComplex) -> CoveringMap {
        CoveringMap::verify(SimplicialMap::identity(tc)).expect("identity is a covering")
    }

    pub fn source(&self) -> &TypedComplex {
        &self.map.source
    }

    pub fn target(&self) -> &TypedComplex {
        &self.map.target
    }

    pub fn vertex_map(&self) -> &[VertexId] {
        &self.map.vertex_map
    }

    pub fn is_k_covering(&self, k: usize) -> bool {
        self.verified_up_to >= k
    }

    /// `second ∘ first`, re-verified.
    pub fn compose(first: &CoveringMap, second: &CoveringMap) -> Result<CoveringMap> {
        if first.target() != second.source() {
            return Err(GeomError::TypeSetMismatch);
        }
        let vertex_map = first.vertex_map().iter().map(|&v| second.vertex_map()[v]).collect();
        CoveringMap::verify(SimplicialMap::new(first.source().clone(), second.target().clone(), vertex_map)?)
    }

    /// The lift `g~` of the base automorphism `g` with `g~(gamma1) = gamma2`, if
    /// propagation along galleries is globally consistent.
    pub fn lift_automorphism(&self, g: &Permutation, gamma1: &Simplex, gamma2: &Simplex) -> Result<Option<Permutation>> {
        self.lift_with_order(g, gamma1, gamma2, false)
    }

    /// As [`CoveringMap::lift_automorphism`]; `reverse` visits chamber
    /// neighbours in the opposite order, giving an independent propagation.
    pub fn lift_with_order(
        &self,
        g: &Permutation,
        gamma1: &Simplex,
        gamma2: &Simplex,
        reverse: bool,
    ) -> Result<Option<Permutation>> {
        let up = self.source().complex();
        let rho = self.vertex_map();
        let i1 = up.chamber_index(gamma1).ok_or_else(|| GeomError::NotAChamber(gamma1.clone()))?;
        up.chamber_index(gamma2).ok_or_else(|| GeomError::NotAChamber(gamma2.clone()))?;
        if self.map.apply(gamma1).map(|v| g.apply(v)) != self.map.apply(gamma2) {
            return Err(GeomError::ChamberMismatch);
        }
        let n = up.vertex_count();
        let mut phi: Vec<Option<VertexId>> = vec![None; n];
        // match vertices of gamma1 to gamma2 by their required projections
        for v in gamma1.iter() {
            let want = g.apply(rho[v]);
            match gamma2.iter().find(|&w| rho[w] == want) {
                Some(w) => phi[v] = Some(w),
                None => return Ok(None),
            }
        }
        let mut image_of: Vec<Option<Simplex>> = vec![None; up.chambers().len()];
        image_of[i1] = Some(gamma2.clone());
        let mut queue = VecDeque::from([i1]);
        while let Some(ci) = queue.pop_front() {
            let c = up.chambers()[ci].clone();
            let c_img = image_of[ci].clone().unwrap();
            let mut neighbors = up.chamber_neighbors(ci).to_vec();
            if reverse {
                neighbors.reverse();
            }
            for di in neighbors {
                let d = &up.chambers()[di];
                let panel = c.intersection(d);
                let w = d.difference(&panel).vertices()[0];
                let panel_img = panel.map(|v| phi[v].unwrap());
                if !panel_img.is_subset(&c_img) {
                    return Ok(None);
                }
                let want = g.apply(rho[w]);
                let candidates: Vec<VertexId> = up
                    .panel_chambers(&panel_img)
                    .iter()
                    .map(|&k| up.chambers()[k].difference(&panel_img).vertices()[0])
                    .filter(|&x| rho[x] == want)
                    .collect();
                if candidates.len() != 1 {
                    return Ok(None);
                }
                let w_img = candidates[0];
                match phi[w] {
                    Some(x) if x != w_img => return Ok(None),
                    _ => phi[w] = Some(w_img),
                }
                let d_img = panel_img.with(w_img);
                match &image_of[di] {
                    Some(prev) if *prev != d_img => return Ok(None),
                    Some(_) => {}
                    None => {
                        image_of[di] = Some(d_img);
                        queue.push_back(di);
                    }
                }
            }
        }
        let Some(images) = phi.into_iter().collect::<Option<Vec<VertexId>>>() else {
            return Ok(None);
        };
        let Ok(lift) = Permutation::from_images(images) else {
            return Ok(None);
        };
        let chambers_ok = up.chambers().iter().all(|c| up.chamber_index(&c.map(|v| lift.apply(v))).is_some());
        let commutes = (0..n).all(|v| rho[lift.apply(v)] == g.apply(rho[v]));
        Ok((chambers_ok && commutes).then_some(lift))
    }

    /// All lifts of the identity, found over the fiber of one chamber.
    pub fn deck_transformations(&self) -> Result<PermGroup> {
        let up = self.source().complex();
        let n = up.vertex_count();
        let id = Permutation::identity(self.target().complex().vertex_count());
        let Some(gamma0) = up.chambers().first().cloned() else {
            return Ok(PermGroup::trivial(n));
        };
        let base = self.map.apply(&gamma0);
        let mut lifts = Vec::new();
        for c in up.chambers() {
            if self.map.apply(c) == base {
                if let Some(l) = self.lift_automorphism(&id, &gamma0, c)? {
                    lifts.push(l);
                }
            }
        }
        Ok(PermGroup::generated_by(n, lifts))
    }
}

/// Whether no nonidentity element of `group` fixes a chamber of `tc`.
pub fn acts_freely_on_chambers(tc: &TypedComplex, group: &PermGroup) -> Option<Simplex> {
    let c = tc.complex();
    let mut seen = vec![false; c.chambers().len()];
    for (i, ch) in c.chambers().iter().enumerate() {
        if seen[i] {
            continue;
        }
        for x in group.orbit(ch).points() {
            if let Some(j) = c.chamber_index(x) {
                seen[j] = true;
            }
        }
        if !group.pointwise_stabilizer(ch.vertices()).is_trivial() {
            return Some(ch.clone());
        }
    }
    None
}

/// The quotient by a group of type-preserving automorphisms acting freely on
/// chambers, with the orbit map verified as a covering.
pub fn quotient_by_free_action(tc: &TypedComplex, group: &PermGroup) -> Result<(TypedComplex, CoveringMap)> {
    let c = tc.complex();
    let max = c.maximal_simplices();
    for g in group.generators() {
        if g.degree() != c.vertex_count() {
            return Err(GeomError::DegreeMismatch(g.degree(), c.vertex_count()));
        }
        if (0..g.degree()).any(|v| tc.type_of(g.apply(v)) != tc.type_of(v)) {
            return Err(GeomError::TypeBroken);
        }
        if let Some(m) = max.iter().find(|m| max.binary_search(&m.map(|v| g.apply(v))).is_err()) {
            return Err(GeomError::NotSimplicial(format!("{m} is not mapped to a simplex")));
        }
    }
    if let Some(ch) = acts_freely_on_chambers(tc, group) {
        return Err(GeomError::NotFreeOnChambers(ch));
    }
    let mut orbit_of = vec![usize::MAX; c.vertex_count()];
    let mut vertex_type = Vec::new();
    for v in 0..c.vertex_count() {
        if orbit_of[v] != usize::MAX {
            continue;
        }
        let id = vertex_type.len();
        for &w in group.orbit(&v).points() {
            orbit_of[w] = id;
        }
        vertex_type.push(tc.type_of(v));
    }
    let mut simplices: Vec<Simplex> = max.iter().map(|m| m.map(|v| orbit_of[v])).collect();
    simplices.sort();
    simplices.dedup();
    let complex = Complex::from_simplices(vertex_type.len(), simplices)?;
    let quotient = TypedComplex::new(complex, tc.types().to_vec(), vertex_type)?;
    let map = SimplicialMap::new(tc.clone(), quotient.clone(), orbit_of)?;
    Ok((quotient, CoveringMap::verify(map)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> TypedComplex {
        let max: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        let c = Complex::new(n, max).unwrap();
        TypedComplex::from_labels(c, &["a", "b"], (0..n).map(|v| v % 2).collect()).unwrap()
    }

    #[test]
    fn twelve_cycle_covers_hexagon() {
        let up = cycle(12);
        let down = cycle(6);
        let map = SimplicialMap::new(up.clone(), down, (0..12).map(|v| v % 6).collect()).unwrap();
        let cov = CoveringMap::verify(map).unwrap();
        // vertex links are isomorphic, the whole complex is not
        assert_eq!(cov.verified_up_to, 1);
        let deck = cov.deck_transformations().unwrap();
        assert_eq!(deck.order(), 2);
        let (q, qmap) = quotient_by_free_action(&up, &deck).unwrap();
        assert_eq!(q.complex().vertex_count(), 6);
        assert_eq!(qmap.verified_up_to, 1);
    }

    #[test]
    fn collapse_is_not_regular() {
        let up = cycle(6);
        let c = Complex::new(2, vec![vec![0, 1]]).unwrap();
        let down = TypedComplex::from_labels(c, &["a", "b"], vec![0, 1]).unwrap();
        let map = SimplicialMap::new(up, down, vec![0, 1, 0, 1, 0, 1]).unwrap();
        let r = map.verify().unwrap();
        assert!(r.regular && r.simplicial);
        assert_eq!(r.max_k, Some(0));

        let up = cycle(6);
        let collapse = SimplicialMap::new(up.clone(), up, vec![0; 6]).unwrap();
        let r = collapse.verify().unwrap();
        assert!(!r.regular || !r.simplicial);
        assert_eq!(r.max_k, None);
    }

    #[test]
    fn identity_lifts() {
        let h = cycle(6);
        let id = CoveringMap::identity(&h);
        assert_eq!(id.verified_up_to, 2);
        let rot = Permutation::from_images((0..6).map(|v| (v + 2) % 6).collect()).unwrap();
        let g1 = Simplex::from([0, 1]);
        let g2 = Simplex::from([2, 3]);
        assert_eq!(id.lift_automorphism(&rot, &g1, &g2).unwrap(), Some(rot.clone()));
        assert_eq!(id.lift_automorphism(&rot, &g1, &g1), Err(GeomError::ChamberMismatch));
        assert!(id.deck_transformations().unwrap().is_trivial());
    }

    #[test]
    fn fixing_a_chamber_is_rejected() {
        let mut max = Vec::new();
        for a in 0..3 {
            for b in 3..6 {
                max.push(vec![a, b]);
            }
        }
        let c = Complex::new(6, max).unwrap();
        let digon = TypedComplex::from_labels(c, &["a", "b"], vec![0, 0, 0, 1, 1, 1]).unwrap();
        let swap = Permutation::from_cycles(6, &[&[4, 5]]).unwrap();
        let g = PermGroup::new(6, vec![swap]).unwrap();
        assert_eq!(
            quotient_by_free_action(&digon, &g).unwrap_err(),
            GeomError::NotFreeOnChambers(Simplex::from([0, 3]))
        );
        let mixed = Permutation::from_cycles(6, &[&[0, 3]]).unwrap();
        let g = PermGroup::new(6, vec![mixed]).unwrap();
        assert_eq!(quotient_by_free_action(&digon, &g).unwrap_err(), GeomError::TypeBroken);
    }
}
