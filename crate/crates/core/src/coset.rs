//! Coset geometries of simple complexes of groups, the basic coset
//! construction, and the universal object over a family of geometries.
//!
//! Cosets `gK` are represented by their canonical element: the unique member
//! whose images of the base points of `K`'s stabilizer chain are
//! lexicographically least. Groups act on cosets by left multiplication.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rand::Rng;

use crate::action::GeometryAction;
use crate::complex::{Complex, Simplex, VertexId};
use crate::covering::{acts_freely_on_chambers, quotient_by_free_action, CoveringMap, SimplicialMap};
use crate::error::{GeomError, Result};
use crate::iso::find_isomorphism;
use crate::perm::{PermGroup, Permutation, StabChain};
use crate::typed::{mask_members, TypeMask, TypedComplex};

/// The canonical element of the left coset `gK`.
pub fn canonical_coset_rep(g: &Permutation, k: &StabChain) -> Permutation {
    let mut g = g.clone();
    for level in 0..k.levels() {
        let x = *k.basic_orbit(level).iter().min_by_key(|&&x| g.apply(x)).unwrap();
        g = &g * k.transversal(level, x).unwrap();
    }
    g
}

/// Subgroups `G_J` of an ambient group for every nonempty type set `J`, with
/// `G_K` contained in `G_J` whenever `J` is contained in `K`.
#[derive(Clone, Debug)]
pub struct SubgroupComplex {
    ambient: PermGroup,
    types: Vec<String>,
    groups: BTreeMap<TypeMask, PermGroup>,
}

impl SubgroupComplex {
    pub fn new(ambient: PermGroup, types: Vec<String>, groups: BTreeMap<TypeMask, PermGroup>) -> Result<Self> {
        let invalid = |m: String| Err(GeomError::InvalidSubgroupComplex(m));
        let t = types.len();
        if t == 0 || t > 16 {
            return invalid(format!("{t} types"));
        }
        let full: TypeMask = (1 << t) - 1;
        for mask in 1..=full {
            let Some(g) = groups.get(&mask) else {
                return invalid(format!("no subgroup for type set {:?}", mask_members(mask)));
            };
            if !g.is_subgroup_of(&ambient) {
                return invalid(format!("subgroup for {:?} is not in the ambient group", mask_members(mask)));
            }
        }
        if let Some(&m) = groups.keys().find(|&&m| m == 0 || m > full) {
            return invalid(format!("unexpected type set {:?}", mask_members(m)));
        }
        for (&j, gj) in &groups {
            for (&k, gk) in &groups {
                if j & k == j && j != k && !gk.is_subgroup_of(gj) {
                    return invalid(format!(
                        "subgroup for {:?} is not contained in the one for {:?}",
                        mask_members(k),
                        mask_members(j)
                    ));
                }
            }
        }
        let order = ambient.order();
        for i in 0..t {
            if groups[&(1 << i)].order() == order {
                return invalid(format!("vertex subgroup of type {} is not proper", types[i]));
            }
        }
        Ok(SubgroupComplex { ambient, types, groups })
    }

    /// `G_J` as the intersection of the vertex subgroups for `i` in `J`.
    pub fn from_vertex_groups(ambient: PermGroup, types: Vec<String>, vertex_groups: Vec<PermGroup>, cap: usize) -> Result<Self> {
        let t = types.len();
        if vertex_groups.len() != t {
            return Err(GeomError::InvalidSubgroupComplex("one vertex subgroup per type expected".into()));
        }
        let mut groups = BTreeMap::new();
        for mask in 1u32..(1 << t) {
            let members = mask_members(mask);
            let mut g = vertex_groups[members[0]].clone();
            for &i in &members[1..] {
                g = g.intersection(&vertex_groups[i], cap)?;
            }
            groups.insert(mask, g);
        }
        SubgroupComplex::new(ambient, types, groups)
    }

    /// Standard parabolic subgroups for a group generated by `gens` indexed by
    /// type: the vertex of type `i` is fixed by every generator except the `i`-th,
    /// so `G_J` is generated by the generators outside `J`.
    pub fn parabolic(ambient: PermGroup, types: Vec<String>, gens: &[Permutation]) -> Result<Self> {
        let t = types.len();
        let degree = ambient.degree();
        let mut groups = BTreeMap::new();
        for mask in 1u32..(1 << t) {
            let g = (0..t).filter(|i| mask >> i & 1 == 0).map(|i| gens[i].clone());
            groups.insert(mask, PermGroup::generated_by(degree, g));
        }
        SubgroupComplex::new(ambient, types, groups)
    }

    pub fn ambient(&self) -> &PermGroup {
        &self.ambient
    }

    pub fn types(&self) -> &[String] {
        &self.types
    }

    pub fn rank(&self) -> usize {
        self.types.len()
    }

    pub fn full_mask(&self) -> TypeMask {
        (1 << self.types.len()) - 1
    }

    pub fn group(&self, mask: TypeMask) -> &PermGroup {
        &self.groups[&mask]
    }

    pub fn groups(&self) -> &BTreeMap<TypeMask, PermGroup> {
        &self.groups
    }

    pub fn vertex_group(&self, i: usize) -> &PermGroup {
        &self.groups[&(1 << i)]
    }

    pub fn chamber_group(&self) -> &PermGroup {
        &self.groups[&self.full_mask()]
    }
}

/// Stabilizers of the faces of a chamber, indexed by the faces' types.
pub fn stabilizer_complex(action: &GeometryAction, gamma: &Simplex) -> Result<SubgroupComplex> {
    let tc = action.target();
    if tc.complex().chamber_index(gamma).is_none() {
        return Err(GeomError::NotAChamber(gamma.clone()));
    }
    let mut groups = BTreeMap::new();
    for mask in 1..=tc.full_mask() {
        groups.insert(mask, action.stabilizer(&tc.face_of_type(gamma, mask)));
    }
    SubgroupComplex::new(action.group().clone(), tc.types().to_vec(), groups)
}

/// A coset geometry with its action and the coset of every vertex.
#[derive(Clone, Debug)]
pub struct CosetGeometryResult {
    pub geometry: TypedComplex,
    pub action: GeometryAction,
    /// `(type, canonical representative)` of each vertex.
    pub vertex_cosets: Vec<(usize, Permutation)>,
    /// A representative `g` of each chamber `{gK_1, ..., gK_t}`, aligned with
    /// the complex's chamber order.
    pub chamber_reps: Vec<Permutation>,
    pub is_thick: bool,
    subgroups: SubgroupComplex,
    vertex_index: HashMap<(usize, Permutation), VertexId>,
}

impl CosetGeometryResult {
    pub fn subgroup_complex(&self) -> &SubgroupComplex {
        &self.subgroups
    }

    pub fn vertex_of_coset(&self, t: usize, g: &Permutation) -> Option<VertexId> {
        let rep = canonical_coset_rep(g, self.subgroups.vertex_group(t).chain());
        self.vertex_index.get(&(t, rep)).copied()
    }

    /// The permutation of vertices induced by left multiplication with `g`.
    pub fn vertex_permutation(&self, g: &Permutation) -> Permutation {
        let images = self
            .vertex_cosets
            .iter()
            .map(|(t, rep)| self.vertex_of_coset(*t, &(g * rep)).expect("cosets are closed under the group"))
            .collect();
        Permutation::from_images(images).expect("left multiplication permutes cosets")
    }

    /// The coset `gG_J` corresponding to a nonempty simplex of type `J`.
    pub fn simplex_coset(&self, s: &Simplex) -> Option<(TypeMask, Permutation)> {
        if s.is_empty() {
            return None;
        }
        let c = self.geometry.complex();
        let chamber = c.maximal_containing(s).next()?;
        let rep = &self.chamber_reps[c.chamber_index(chamber)?];
        let mask = self.geometry.type_mask(s);
        Some((mask, canonical_coset_rep(rep, self.subgroups.group(mask).chain())))
    }

    /// The simplex `{gK_i : i in J}`.
    pub fn coset_simplex(&self, mask: TypeMask, g: &Permutation) -> Option<Simplex> {
        mask_members(mask).into_iter().map(|i| self.vertex_of_coset(i, g)).collect::<Option<Vec<_>>>().map(Simplex::new)
    }
}

/// The nerve of the cosets of the vertex subgroups: chambers are
/// `{gK_1, ..., gK_t}` for `g` running over representatives of `G / G_I`.
pub fn coset_geometry(sc: &SubgroupComplex) -> Result<CosetGeometryResult> {
    let g = sc.ambient();
    let t = sc.rank();
    let degree = g.degree();
    let b_chain = sc.chamber_group().chain();
    let id = Permutation::identity(degree);
    let mut reps = vec![canonical_coset_rep(&id, b_chain)];
    let mut seen: HashSet<Permutation> = reps.iter().cloned().collect();
    let mut i = 0;
    while i < reps.len() {
        for s in g.generators() {
            let h = canonical_coset_rep(&(s * &reps[i]), b_chain);
            if seen.insert(h.clone()) {
                reps.push(h);
            }
        }
        i += 1;
    }
    drop(seen);
    let mut local: Vec<HashMap<Permutation, usize>> = vec![HashMap::new(); t];
    let mut local_list: Vec<Vec<Permutation>> = vec![Vec::new(); t];
    let mut chamber_local: Vec<Vec<usize>> = Vec::with_capacity(reps.len());
    for rep in &reps {
        let mut ids = Vec::with_capacity(t);
        for ty in 0..t {
            let k = canonical_coset_rep(rep, sc.vertex_group(ty).chain());
            let next = local_list[ty].len();
            let id = *local[ty].entry(k.clone()).or_insert(next);
            if id == next {
                local_list[ty].push(k);
            }
            ids.push(id);
        }
        chamber_local.push(ids);
    }
    let mut offsets = vec![0; t + 1];
    for ty in 0..t {
        offsets[ty + 1] = offsets[ty] + local_list[ty].len();
    }
    let n = offsets[t];
    let mut vertex_cosets = Vec::with_capacity(n);
    let mut vertex_type = Vec::with_capacity(n);
    for (ty, list) in local_list.into_iter().enumerate() {
        for k in list {
            vertex_cosets.push((ty, k));
            vertex_type.push(ty);
        }
    }
    let vertex_index: HashMap<(usize, Permutation), VertexId> =
        vertex_cosets.iter().cloned().enumerate().map(|(v, key)| (key, v)).collect();
    let mut chamber_of: HashMap<Simplex, usize> = HashMap::new();
    for (ci, ids) in chamber_local.iter().enumerate() {
        let s = Simplex::new(ids.iter().enumerate().map(|(ty, &l)| offsets[ty] + l));
        chamber_of.entry(s).or_insert(ci);
    }
    let complex = Complex::from_simplices(n, chamber_of.keys().cloned().collect())?;
    let chamber_reps = complex.chambers().iter().map(|c| reps[chamber_of[c]].clone()).collect();
    if !complex.is_chamber_complex() {
        return Err(GeomError::NotGalleryConnected);
    }
    let is_thick = complex.thin_panel().is_none();
    let geometry = TypedComplex::new(complex, sc.types().to_vec(), vertex_type)?;
    let mut result = CosetGeometryResult {
        action: GeometryAction::new(PermGroup::trivial(n), geometry.clone())?,
        geometry,
        vertex_cosets,
        chamber_reps,
        is_thick,
        subgroups: sc.clone(),
        vertex_index,
    };
    let gens = g.generators().iter().map(|s| result.vertex_permutation(s)).collect();
    result.action = GeometryAction::new(PermGroup::new(n, gens)?, result.geometry.clone())?;
    Ok(result)
}

/// Evaluates a homomorphism given by its graph `{(psi(g), g)}` inside
/// `Sym(H) x Sym(G)` on the disjoint union with the `H` points first.
#[derive(Clone, Debug)]
pub struct GraphEvaluator {
    h_degree: usize,
    g_degree: usize,
    chain: StabChain,
}

impl GraphEvaluator {
    pub fn new(graph: &PermGroup, h_degree: usize, g_base: &[usize]) -> Self {
        let hint: Vec<usize> = g_base.iter().map(|&p| p + h_degree).collect();
        let chain = graph.chain_with_base(&hint);
        GraphEvaluator { h_degree, g_degree: graph.degree() - h_degree, chain }
    }

    /// `psi(g)`, or `None` if `g` is outside the projection of the graph.
    pub fn evaluate(&self, g: &Permutation) -> Option<Permutation> {
        let mut r = Permutation::direct_sum(&Permutation::identity(self.h_degree), g);
        for level in 0..self.chain.levels() {
            let p = self.chain.base_point(level);
            if p < self.h_degree {
                break;
            }
            let u_inv = self.chain.transversal_inverse(level, r.apply(p))?;
            r = u_inv * &r;
        }
        if !r.restrict(self.h_degree, self.g_degree).is_identity() {
            return None;
        }
        Some(r.restrict(0, self.h_degree).inverse())
    }
}

/// Homomorphisms `G_J -> H` given on generators of each `G_J`.
#[derive(Clone, Debug)]
pub struct SimpleHomomorphism {
    pub target: PermGroup,
    /// `(generator of G_J, image in H)` per type set.
    pub maps: BTreeMap<TypeMask, Vec<(Permutation, Permutation)>>,
}

fn incompatible<T>(msg: String) -> Result<T> {
    Err(GeomError::IncompatibleSimpleHomomorphism(msg))
}

impl SimpleHomomorphism {
    pub fn trivial(sc: &SubgroupComplex, target: PermGroup) -> Self {
        let id = Permutation::identity(target.degree());
        let maps = sc
            .groups()
            .iter()
            .map(|(&m, g)| (m, g.generators().iter().map(|x| (x.clone(), id.clone())).collect()))
            .collect();
        SimpleHomomorphism { target, maps }
    }

    /// Restrictions of the homomorphism `G -> H` sending the `i`-th generator of
    /// the ambient group to `images[i]`.
    pub fn from_global(sc: &SubgroupComplex, target: PermGroup, images: &[Permutation]) -> Result<Self> {
        let g = sc.ambient();
        if images.len() != g.generators().len() {
            return incompatible("one image per ambient generator expected".into());
        }
        let graph = PermGroup::generated_by(
            target.degree() + g.degree(),
            images.iter().zip(g.generators()).map(|(h, x)| Permutation::direct_sum(h, x)),
        );
        if graph.order() != g.order() {
            return incompatible("generator images do not define a homomorphism".into());
        }
        let eval = GraphEvaluator::new(&graph, target.degree(), &g.chain().base());
        let mut maps = BTreeMap::new();
        for (&m, gj) in sc.groups() {
            let pairs = gj.generators().iter().map(|x| (x.clone(), eval.evaluate(x).unwrap())).collect();
            maps.insert(m, pairs);
        }
        Ok(SimpleHomomorphism { target, maps })
    }

    fn pairs(&self, mask: TypeMask) -> Result<&[(Permutation, Permutation)]> {
        match self.maps.get(&mask) {
            Some(p) => Ok(p),
            None => incompatible(format!("no map for type set {:?}", mask_members(mask))),
        }
    }

    /// `<(psi_J(x), x)>` on the disjoint union of the two domains.
    pub fn graph_group(&self, mask: TypeMask, g_degree: usize) -> Result<PermGroup> {
        let pairs = self.pairs(mask)?;
        Ok(PermGroup::generated_by(
            self.target.degree() + g_degree,
            pairs.iter().map(|(x, h)| Permutation::direct_sum(h, x)),
        ))
    }

    /// Each map is a well-defined homomorphism on `G_J` with values in the
    /// target, and the maps commute with the inclusions.
    pub fn check(&self, sc: &SubgroupComplex) -> Result<()> {
        let n = sc.ambient().degree();
        let mut graphs = BTreeMap::new();
        for (&mask, gj) in sc.groups() {
            let pairs = self.pairs(mask)?;
            for (x, h) in pairs {
                if x.degree() != n || !gj.contains(x) {
                    return incompatible(format!("{x} is not in the subgroup for {:?}", mask_members(mask)));
                }
                if !self.target.contains(h) {
                    return incompatible(format!("{h} is not in the target group"));
                }
            }
            let sources = PermGroup::generated_by(n, pairs.iter().map(|(x, _)| x.clone()));
            if sources.order() != gj.order() {
                return incompatible(format!("generators for {:?} do not generate the subgroup", mask_members(mask)));
            }
            let graph = self.graph_group(mask, n)?;
            if graph.order() != gj.order() {
                return incompatible(format!("map on {:?} is not a homomorphism", mask_members(mask)));
            }
            graphs.insert(mask, graph);
        }
        for (&j, gj) in &graphs {
            for (&k, gk) in &graphs {
                if j & k == j && j != k && !gk.is_subgroup_of(gj) {
                    return incompatible(format!(
                        "maps on {:?} and {:?} disagree",
                        mask_members(j),
                        mask_members(k)
                    ));
                }
            }
        }
        Ok(())
    }

    /// Images of all generators, for reporting.
    pub fn images(&self) -> Vec<Permutation> {
        self.maps.values().flat_map(|p| p.iter().map(|(_, h)| h.clone())).collect()
    }
}

/// Randomized search for simple homomorphisms into `target`: type sets are
/// visited from large to small, images of generators inherited from larger
/// type sets or lying in the span of earlier generators are forced, the
/// remaining generators get random images of compatible order, and the result
/// is kept if every map is a homomorphism.
pub fn search_compatible_homomorphisms<R: Rng + ?Sized>(
    sc: &SubgroupComplex,
    target: &PermGroup,
    attempts: usize,
    rng: &mut R,
) -> Vec<SimpleHomomorphism> {
    let n = sc.ambient().degree();
    let mut masks: Vec<TypeMask> = sc.groups().keys().copied().collect();
    masks.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
    let mut found: Vec<SimpleHomomorphism> = Vec::new();
    let mut seen: HashSet<Vec<Permutation>> = HashSet::new();
    'attempt: for _ in 0..attempts {
        let mut maps: BTreeMap<TypeMask, Vec<(Permutation, Permutation)>> = BTreeMap::new();
        for &mask in &masks {
            let gj = sc.group(mask);
            let mut pairs: Vec<(Permutation, Permutation)> = Vec::new();
            for (&k, kp) in &maps {
                if k & mask == mask && k != mask {
                    for p in kp {
                        if !pairs.iter().any(|(x, _)| *x == p.0) {
                            pairs.push(p.clone());
                        }
                    }
                }
            }
            for x in gj.generators() {
                if pairs.iter().any(|(y, _)| y == x) {
                    continue;
                }
                let sources = PermGroup::generated_by(n, pairs.iter().map(|(y, _)| y.clone()));
                let image = if sources.contains(x) {
                    let graph = PermGroup::generated_by(
                        target.degree() + n,
                        pairs.iter().map(|(y, h)| Permutation::direct_sum(h, y)),
                    );
                    if graph.order() != sources.order() {
                        continue 'attempt;
                    }
                    let eval = GraphEvaluator::new(&graph, target.degree(), &sc.ambient().chain().base());
                    eval.evaluate(x).expect("x lies in the projection of the graph")
                } else {
                    let ord = x.order();
                    let mut pick = Permutation::identity(target.degree());
                    for _ in 0..200 {
                        let h = target.chain().random_element(rng);
                        if ord % h.order() == 0 {
                            pick = h;
                            break;
                        }
                    }
                    pick
                };
                pairs.push((x.clone(), image));
            }
            let graph = PermGroup::generated_by(
                target.degree() + n,
                pairs.iter().map(|(x, h)| Permutation::direct_sum(h, x)),
            );
            if graph.order() != gj.order() {
                continue 'attempt;
            }
            maps.insert(mask, pairs);
        }
        let psi = SimpleHomomorphism { target: target.clone(), maps };
        if psi.check(sc).is_ok() && seen.insert(psi.images()) {
            found.push(psi);
        }
    }
    found
}

/// Output of the basic coset construction over `(G, sc)` and `psi: sc -> H`.
#[derive(Clone, Debug)]
pub struct BasicCosetConstruction {
    /// `G'` inside `Sym(H) x Sym(G)`, `H` points first.
    pub g_prime: PermGroup,
    pub h_degree: usize,
    pub lifted_complex: SubgroupComplex,
    pub lifted: CosetGeometryResult,
    pub base: CosetGeometryResult,
    pub covering: CoveringMap,
    /// Kernel of the second projection on `G'`.
    pub f_kernel: PermGroup,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicCosetReport {
    pub covering_k: usize,
    pub rank: usize,
    pub f_order: u128,
    /// `F` meets every lifted stabilizer trivially.
    pub f_meets_stabilizers_trivially: bool,
    /// The stabilizer in `G'` of each base simplex is the lifted stabilizer times `F`.
    pub stabilizers_split: bool,
    /// The first projection of `G'` is generated by the images of `psi`.
    pub first_projection_matches: bool,
    pub f_acts_freely: bool,
    pub panels_match: bool,
    pub quotient_isomorphic_to_base: bool,
}

impl BasicCosetReport {
    pub fn all_hold(&self) -> bool {
        self.covering_k + 1 >= self.rank
            && self.f_meets_stabilizers_trivially
            && self.stabilizers_split
            && self.first_projection_matches
            && self.f_acts_freely
            && self.panels_match
            && self.quotient_isomorphic_to_base
    }
}

pub fn basic_coset_construction(sc: &SubgroupComplex, psi: &SimpleHomomorphism) -> Result<BasicCosetConstruction> {
    psi.check(sc)?;
    let n = sc.ambient().degree();
    let m = psi.target.degree();
    let mut lifted_groups = BTreeMap::new();
    for &mask in sc.groups().keys() {
        lifted_groups.insert(mask, psi.graph_group(mask, n)?);
    }
    let g_prime = PermGroup::generated_by(
        m + n,
        lifted_groups.values().flat_map(|g| g.generators().iter().cloned()),
    );
    let lifted_groups = lifted_groups
        .into_iter()
        .map(|(k, g)| Ok((k, PermGroup::new(m + n, g.generators().to_vec())?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let lifted_complex = SubgroupComplex::new(g_prime.clone(), sc.types().to_vec(), lifted_groups)?;
    let lifted = coset_geometry(&lifted_complex)?;
    let base = coset_geometry(sc)?;
    let g_points: Vec<usize> = (m..m + n).collect();
    let f_kernel = g_prime.pointwise_stabilizer(&g_points);
    let vertex_map = lifted
        .vertex_cosets
        .iter()
        .map(|(t, rep)| {
            base.vertex_of_coset(*t, &rep.restrict(m, n))
                .ok_or_else(|| GeomError::IncompatibleSimpleHomomorphism("projection leaves the base group".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let covering =
        CoveringMap::verify(SimplicialMap::new(lifted.geometry.clone(), base.geometry.clone(), vertex_map)?)?;
    Ok(BasicCosetConstruction { g_prime, h_degree: m, lifted_complex, lifted, base, covering, f_kernel })
}

impl BasicCosetConstruction {
    /// `F` as vertex permutations of the lifted geometry.
    pub fn f_on_lifted(&self) -> PermGroup {
        let gens = self.f_kernel.generators().iter().map(|f| self.lifted.vertex_permutation(f));
        PermGroup::generated_by(self.lifted.geometry.complex().vertex_count(), gens)
    }

    pub fn postconditions(&self, psi: &SimpleHomomorphism) -> Result<BasicCosetReport> {
        let m = self.h_degree;
        let n = self.g_prime.degree() - m;
        let f_order = self.f_kernel.order();
        let base_tc = &self.base.geometry;
        // G' acting on the base geometry through the second projection
        let through_base = PermGroup::generated_by(
            base_tc.complex().vertex_count(),
            self.g_prime.generators().iter().map(|g| self.base.vertex_permutation(&g.restrict(m, n))),
        );
        let g_prime_order = self.g_prime.order();
        let kernel_through_base = g_prime_order / through_base.order();
        let base_chamber = self.base.coset_simplex(self.base.subgroup_complex().full_mask(), &Permutation::identity(n)).unwrap();
        let mut trivial_meet = true;
        let mut split = true;
        for (&mask, gamma_j) in self.lifted_complex.groups() {
            let with_f = gamma_j.join(&self.f_kernel);
            trivial_meet &= with_f.order() == gamma_j.order() * f_order;
            let face = base_tc.face_of_type(&base_chamber, mask);
            let orbit = through_base.orbit(&face).len() as u128;
            split &= with_f.order() == g_prime_order / orbit && kernel_through_base >= 1;
        }
        let pr1 = PermGroup::generated_by(m, self.g_prime.generators().iter().map(|g| g.restrict(0, m)));
        let images = PermGroup::generated_by(m, psi.images());
        let f_lifted = self.f_on_lifted();
        let f_acts_freely = acts_freely_on_chambers(&self.lifted.geometry, &f_lifted).is_none();
        let panel_sizes = |tc: &TypedComplex| {
            let mut sizes: BTreeMap<TypeMask, BTreeSet<usize>> = BTreeMap::new();
            for (p, ch) in tc.complex().panels() {
                sizes.entry(tc.type_mask(p)).or_default().insert(ch.len());
            }
            sizes
        };
        let panels_match = panel_sizes(&self.lifted.geometry) == panel_sizes(base_tc);
        let quotient_isomorphic_to_base = match quotient_by_free_action(&self.lifted.geometry, &f_lifted) {
            Ok((q, _)) => find_isomorphism(&q, base_tc).is_some(),
            Err(_) => false,
        };
        Ok(BasicCosetReport {
            covering_k: self.covering.verified_up_to,
            rank: base_tc.type_count(),
            f_order,
            f_meets_stabilizers_trivially: trivial_meet,
            stabilizers_split: split,
            first_projection_matches: pr1 == images,
            f_acts_freely,
            panels_match,
            quotient_isomorphic_to_base,
        })
    }
}


/// One member of a family: a geometry with its group, a chamber, and an
/// identification of the subgroup complex with the chamber's stabilizers.
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub action: GeometryAction,
    pub chamber: Simplex,
    /// Isomorphisms `G_J -> (stabilizer of the type-J face of the chamber)`.
    pub identification: SimpleHomomorphism,
}

#[derive(Clone, Debug)]
pub struct UniversalFamily {
    pub g_hat: PermGroup,
    pub subgroup_complex: SubgroupComplex,
    pub result: CosetGeometryResult,
    /// Equivariant coverings onto each member, in family order.
    pub morphisms: Vec<CoveringMap>,
}

/// The group generated by the diagonal images of the subgroup complex in the
/// product of the members' groups, its coset geometry, and the induced maps
/// to every member. Universality is relative to the supplied family.
pub fn universal_over_family(sc: &SubgroupComplex, family: &[FamilyMember]) -> Result<UniversalFamily> {
    if family.is_empty() {
        return Err(GeomError::InvalidSubgroupComplex("empty family".into()));
    }
    let t = sc.rank();
    let mut offsets = vec![0];
    for (k, member) in family.iter().enumerate() {
        let tc = member.action.target();
        if member.identification.target.degree() != member.action.group().degree()
            || member.identification.check(sc).is_err()
            || tc.type_count() != t
        {
            return Err(GeomError::InconsistentIdentification(k));
        }
        if tc.complex().chamber_index(&member.chamber).is_none() {
            return Err(GeomError::InconsistentIdentification(k));
        }
        for (&mask, gj) in sc.groups() {
            let face = face_by_labels(tc, &member.chamber, sc.types(), mask).ok_or(GeomError::InconsistentIdentification(k))?;
            let image = PermGroup::generated_by(
                member.action.group().degree(),
                member.identification.maps[&mask].iter().map(|(_, h)| h.clone()),
            );
            if image.order() != gj.order() || image != member.action.stabilizer(&face) {
                return Err(GeomError::InconsistentIdentification(k));
            }
        }
        offsets.push(offsets[k] + member.action.group().degree());
    }
    let total = *offsets.last().unwrap();
    let n = sc.ambient().degree();
    let base = sc.ambient().chain().base();
    let mut groups = BTreeMap::new();
    for (&mask, gj) in sc.groups() {
        let evaluators = family
            .iter()
            .map(|member| {
                let graph = member.identification.graph_group(mask, n)?;
                Ok(GraphEvaluator::new(&graph, member.action.group().degree(), &base))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut gens = Vec::with_capacity(gj.generators().len());
        for x in gj.generators() {
            let mut images = Vec::with_capacity(total);
            for (k, eval) in evaluators.iter().enumerate() {
                let h = eval.evaluate(x).ok_or(GeomError::InconsistentIdentification(k))?;
                images.extend(h.images().iter().map(|&p| p + offsets[k]));
            }
            gens.push(Permutation::from_images(images)?);
        }
        groups.insert(mask, PermGroup::new(total, gens)?);
    }
    let g_hat = PermGroup::generated_by(total, groups.values().flat_map(|g| g.generators().iter().cloned()));
    let subgroup_complex = SubgroupComplex::new(g_hat.clone(), sc.types().to_vec(), groups)?;
    let result = coset_geometry(&subgroup_complex)?;
    let mut morphisms = Vec::new();
    for (k, member) in family.iter().enumerate() {
        let tc = member.action.target();
        let deg = member.action.group().degree();
        let chamber_vertex: Vec<VertexId> =
            (0..t).map(|i| face_by_labels(tc, &member.chamber, sc.types(), 1 << i).unwrap().vertices()[0]).collect();
        let vertex_map =
            result.vertex_cosets.iter().map(|(i, rep)| rep.restrict(offsets[k], deg).apply(chamber_vertex[*i])).collect();
        morphisms.push(CoveringMap::verify(SimplicialMap::new(result.geometry.clone(), tc.clone(), vertex_map)?)?);
    }
    Ok(UniversalFamily { g_hat, subgroup_complex, result, morphisms })
}

fn face_by_labels(tc: &TypedComplex, chamber: &Simplex, labels: &[String], mask: TypeMask) -> Option<Simplex> {
    let mut m = 0;
    for i in mask_members(mask) {
        m |= 1 << tc.type_index(&labels[i]).ok()?;
    }
    Some(tc.face_of_type(chamber, m))
}

/// Images of the generators of `G^` under the unique homomorphism to the
/// target of `phi` extending every `phi_J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factoring {
    pub images: Vec<Permutation>,
    /// The stabilizers generate `G^`, so the factoring is determined by `phi`.
    pub unique: bool,
}

/// Builds the factoring homomorphism through the graph of `phi` (the basic
/// coset construction with `G^` as base): it exists iff the kernel of the
/// second projection is trivial.
pub fn verify_universal_property(sc: &SubgroupComplex, phi: &SimpleHomomorphism) -> Result<Factoring> {
    phi.check(sc)?;
    let g = sc.ambient();
    let n = g.degree();
    let m = phi.target.degree();
    let graph = PermGroup::generated_by(
        m + n,
        phi.maps.values().flat_map(|p| p.iter().map(|(x, h)| Permutation::direct_sum(h, x))),
    );
    let g_points: Vec<usize> = (m..m + n).collect();
    if !graph.pointwise_stabilizer(&g_points).is_trivial() {
        return Err(GeomError::NoFactoring);
    }
    let generated = PermGroup::generated_by(n, sc.groups().values().flat_map(|x| x.generators().iter().cloned()));
    if generated != *g {
        return Err(GeomError::NoFactoring);
    }
    let eval = GraphEvaluator::new(&graph, m, &g.chain().base());
    let images = g.generators().iter().map(|x| eval.evaluate(x).ok_or(GeomError::NoFactoring)).collect::<Result<Vec<_>>>()?;
    for pairs in phi.maps.values() {
        for (x, h) in pairs {
            if eval.evaluate(x).as_ref() != Some(h) {
                return Err(GeomError::NoFactoring);
            }
        }
    }
    Ok(Factoring { images, unique: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::affine_a2_group;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("t{i}")).collect()
    }

    #[test]
    fn canonical_rep_is_constant_on_cosets() {
        let g = PermGroup::symmetric(5);
        let k = PermGroup::symmetric(5).stabilizer(&0usize);
        let elems = g.enumerate_elements(200).unwrap();
        let kel = k.enumerate_elements(200).unwrap();
        let mut reps = HashSet::new();
        for x in &elems {
            let r = canonical_coset_rep(x, k.chain());
            for y in &kel {
                assert_eq!(canonical_coset_rep(&(x * y), k.chain()), r);
            }
            reps.insert(r);
        }
        assert_eq!(reps.len(), 5);
    }

    #[test]
    fn thin_a2_coxeter_complex_is_a_hexagon() {
        let s = PermGroup::symmetric(3);
        let a = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        let sc = SubgroupComplex::parabolic(s, labels(2), &[a, b]).unwrap();
        let r = coset_geometry(&sc).unwrap();
        assert_eq!(r.geometry.complex().vertex_count(), 6);
        assert_eq!(r.geometry.complex().chambers().len(), 6);
        assert!(!r.is_thick);
        assert!(r.action.verify().is_valid());
    }

    #[test]
    fn inconsistent_inclusions_are_rejected() {
        let s = PermGroup::symmetric(3);
        let a = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        let mut groups = BTreeMap::new();
        groups.insert(1, PermGroup::new(3, vec![a]).unwrap());
        groups.insert(2, PermGroup::new(3, vec![b.clone()]).unwrap());
        groups.insert(3, PermGroup::new(3, vec![b]).unwrap());
        assert!(matches!(SubgroupComplex::new(s, labels(2), groups), Err(GeomError::InvalidSubgroupComplex(_))));
    }

    #[test]
    fn affine_torus_covering() {
        let (g3, gens3) = affine_a2_group(3).unwrap();
        let (g6, gens6) = affine_a2_group(6).unwrap();
        let sc = SubgroupComplex::parabolic(g3, labels(3), &gens3).unwrap();
        let psi = SimpleHomomorphism::from_global(&sc, g6.clone(), &gens6);
        // s_i -> s_i is not a homomorphism G_3 -> G_6, but it is on each parabolic
        assert!(psi.is_err());
        let mut maps = BTreeMap::new();
        for (&mask, gj) in sc.groups() {
            let pairs = gj
                .generators()
                .iter()
                .map(|x| (x.clone(), gens6[gens3.iter().position(|s| s == x).unwrap()].clone()))
                .collect();
            maps.insert(mask, pairs);
        }
        let psi = SimpleHomomorphism { target: g6, maps };
        let bcc = basic_coset_construction(&sc, &psi).unwrap();
        assert_eq!(bcc.f_kernel.order(), 4);
        assert_eq!(bcc.lifted.geometry.complex().chambers().len(), 4 * bcc.base.geometry.complex().chambers().len());
        let report = bcc.postconditions(&psi).unwrap();
        assert!(report.all_hold(), "{report:?}");
    }
}
