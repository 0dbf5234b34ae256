//! Finite permutation groups: orbits with Schreier trees, stabilizers from
//! Schreier generators, and membership through stabilizer chains.

mod chain;
mod permutation;

pub use chain::StabChain;
pub use permutation::Permutation;

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::OnceLock;

use crate::complex::Simplex;
use crate::error::{GeomError, Result};

/// Something a permutation of the underlying points acts on.
pub trait PermAction: Clone + Eq + Hash {
    fn act(&self, g: &Permutation) -> Self;
}

impl PermAction for usize {
    fn act(&self, g: &Permutation) -> Self {
        g.apply(*self)
    }
}

/// Setwise action; the image is re-sorted.
impl PermAction for Simplex {
    fn act(&self, g: &Permutation) -> Self {
        Simplex::new(self.iter().map(|v| g.apply(v)))
    }
}

/// A set of simplices (kept sorted), acted on elementwise.
impl PermAction for Vec<Simplex> {
    fn act(&self, g: &Permutation) -> Self {
        let mut out: Vec<Simplex> = self.iter().map(|s| s.act(g)).collect();
        out.sort();
        out
    }
}

/// An orbit together with its Schreier tree.
#[derive(Clone, Debug)]
pub struct Orbit<T> {
    points: Vec<T>,
    index: HashMap<T, usize>,
    /// `(parent index, generator index)`; `None` at the root.
    parent: Vec<Option<(usize, usize)>>,
}

impl<T: PermAction> Orbit<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn contains(&self, x: &T) -> bool {
        self.index.contains_key(x)
    }

    pub fn position(&self, x: &T) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn parent(&self, i: usize) -> Option<(usize, usize)> {
        self.parent[i]
    }

    /// Transversal elements `u_i` with `u_i(root) = points[i]`, for every point.
    pub fn transversal(&self, group: &PermGroup) -> Vec<Permutation> {
        let mut reps: Vec<Permutation> = Vec::with_capacity(self.points.len());
        for i in 0..self.points.len() {
            let u = match self.parent[i] {
                None => Permutation::identity(group.degree()),
                Some((p, s)) => &group.generators[s] * &reps[p],
            };
            reps.push(u);
        }
        reps
    }
}

#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabChain>,
}

impl PartialEq for PermGroup {
    /// Equality as subgroups of `Sym(degree)`.
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.order() == other.order()
            && other.generators.iter().all(|g| self.contains(g))
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(GeomError::DegreeMismatch(g.degree(), degree));
            }
        }
        Ok(PermGroup { degree, generators, chain: OnceLock::new() })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup { degree, generators: Vec::new(), chain: OnceLock::new() }
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Permutation::from_cycles(n, &[&[0, 1]]).unwrap());
            let cyc: Vec<usize> = (0..n).collect();
            gens.push(Permutation::from_cycles(n, &[&cyc]).unwrap());
        }
        PermGroup { degree: n, generators: gens, chain: OnceLock::new() }
    }

    /// `Alt(n)` from the 3-cycles `(0 1 k)`.
    pub fn alternating(n: usize) -> Self {
        let gens = (2..n).map(|k| Permutation::from_cycles(n, &[&[0, 1, k]]).unwrap()).collect();
        PermGroup { degree: n, generators: gens, chain: OnceLock::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::from_generators(self.degree, &self.generators, &[]))
    }

    /// A fresh chain whose base begins with `points`.
    pub fn chain_with_base(&self, points: &[usize]) -> StabChain {
        StabChain::from_generators(self.degree, &self.generators, points)
    }

    pub fn order(&self) -> u128 {
        self.chain().order()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(Permutation::is_identity)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.chain().contains(g)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    /// All elements in sorted order, or `CapExceeded` if there are more than `cap`.
    pub fn enumerate_elements(&self, cap: usize) -> Result<Vec<Permutation>> {
        if self.order() > cap as u128 {
            return Err(GeomError::CapExceeded(cap));
        }
        let mut elems = self.chain().elements();
        elems.sort();
        Ok(elems)
    }

    /// Subgroup generated by `gens`, dropping generators that are already
    /// members of the subgroup generated by the earlier ones.
    pub fn generated_by(degree: usize, gens: impl IntoIterator<Item = Permutation>) -> Self {
        let mut chain = StabChain::new(degree);
        let mut kept = Vec::new();
        for g in gens {
            assert_eq!(g.degree(), degree);
            if chain.extend(&g) {
                kept.push(g);
            }
        }
        let group = PermGroup { degree, generators: kept, chain: OnceLock::new() };
        let _ = group.chain.set(chain);
        group
    }

    pub fn orbit<T: PermAction>(&self, x: &T) -> Orbit<T> {
        let mut points = vec![x.clone()];
        let mut index = HashMap::from([(x.clone(), 0)]);
        let mut parent = vec![None];
        let mut i = 0;
        while i < points.len() {
            for (s, g) in self.generators.iter().enumerate() {
                let y = points[i].act(g);
                if !index.contains_key(&y) {
                    index.insert(y.clone(), points.len());
                    points.push(y);
                    parent.push(Some((i, s)));
                }
            }
            i += 1;
        }
        Orbit { points, index, parent }
    }

    /// Stabilizer of `x` from Schreier generators, reduced by membership tests
    /// against the subgroup accumulated so far.
    pub fn stabilizer<T: PermAction>(&self, x: &T) -> PermGroup {
        let orbit = self.orbit(x);
        self.stabilizer_from_orbit(&orbit)
    }

    pub fn stabilizer_from_orbit<T: PermAction>(&self, orbit: &Orbit<T>) -> PermGroup {
        let target = self.order() / orbit.len() as u128;
        let reps = orbit.transversal(self);
        let mut chain = StabChain::new(self.degree);
        let mut kept = Vec::new();
        'outer: for (i, y) in orbit.points.iter().enumerate() {
            for g in &self.generators {
                if chain.order() == target {
                    break 'outer;
                }
                let j = orbit.index[&y.act(g)];
                let schreier = &(&reps[j].inverse() * g) * &reps[i];
                if chain.extend(&schreier) {
                    kept.push(schreier);
                }
            }
        }
        debug_assert_eq!(chain.order(), target);
        let group = PermGroup { degree: self.degree, generators: kept, chain: OnceLock::new() };
        let _ = group.chain.set(chain);
        group
    }

    /// Elements fixing every point of `points`.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> PermGroup {
        let mut hint: Vec<usize> = Vec::new();
        for &p in points {
            if !hint.contains(&p) {
                hint.push(p);
            }
        }
        let chain = self.chain_with_base(&hint);
        // Levels only exist while the group is nontrivial; past the last
        // level the stabilizer is trivial.
        let gens = if chain.levels() > hint.len() {
            chain.generators_at(hint.len()).to_vec()
        } else {
            Vec::new()
        };
        PermGroup::generated_by(self.degree, gens)
    }

    /// `<self, other>`.
    pub fn join(&self, other: &PermGroup) -> PermGroup {
        PermGroup::generated_by(
            self.degree,
            self.generators.iter().chain(other.generators.iter()).cloned(),
        )
    }

    /// Intersection with a subgroup given by a membership predicate, by
    /// filtering the elements of `self` (small groups only).
    pub fn filter_subgroup(&self, cap: usize, keep: impl Fn(&Permutation) -> bool) -> Result<PermGroup> {
        let elems = self.enumerate_elements(cap)?;
        Ok(PermGroup::generated_by(self.degree, elems.into_iter().filter(|g| keep(g))))
    }

    pub fn intersection(&self, other: &PermGroup, cap: usize) -> Result<PermGroup> {
        let (small, big) = if self.order() <= other.order() { (self, other) } else { (other, self) };
        small.filter_subgroup(cap, |g| big.contains(g))
    }

    /// Normal closure of `gens` in `self`.
    pub fn normal_closure(&self, gens: &[Permutation]) -> PermGroup {
        let mut chain = StabChain::new(self.degree);
        let mut kept: Vec<Permutation> = Vec::new();
        let mut queue: Vec<Permutation> = gens.to_vec();
        while let Some(h) = queue.pop() {
            if chain.extend(&h) {
                for g in &self.generators {
                    queue.push(&(g * &h) * &g.inverse());
                }
                kept.push(h);
            }
        }
        let group = PermGroup { degree: self.degree, generators: kept, chain: OnceLock::new() };
        let _ = group.chain.set(chain);
        group
    }

    pub fn is_normal_in(&self, ambient: &PermGroup) -> bool {
        ambient.generators.iter().all(|g| {
            let g_inv = g.inverse();
            self.generators.iter().all(|h| self.contains(&(&(g * h) * &g_inv)))
        })
    }
}
