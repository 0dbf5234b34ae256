//! Finite simplicial complexes stored by their maximal simplices.
//!
//! The closure, the chamber graph and the vertex adjacency are materialized
//! lazily and cached; a `Complex` is immutable once built. The empty simplex
//! belongs to every complex.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{GeomError, Result};

pub type VertexId = usize;

/// A sorted, duplicate-free set of vertex ids.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    /// Sorts and deduplicates.
    pub fn new(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        let mut v: Vec<VertexId> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Simplex(v)
    }

    /// Like [`Simplex::new`] but rejects repeated vertices.
    pub fn try_new(vertices: impl IntoIterator<Item = VertexId>) -> Result<Self> {
        let mut v: Vec<VertexId> = vertices.into_iter().collect();
        v.sort_unstable();
        for w in v.windows(2) {
            if w[0] == w[1] {
                return Err(GeomError::DuplicateVertexInSimplex { vertex: w[0] });
            }
        }
        Ok(Simplex(v))
    }

    pub fn empty() -> Self {
        Simplex(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset(&self, other: &Simplex) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.any(|w| w == v))
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        self.0.iter().all(|&v| !other.contains(v))
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        Simplex::new(self.iter().chain(other.iter()))
    }

    pub fn intersection(&self, other: &Simplex) -> Simplex {
        Simplex(self.0.iter().copied().filter(|&v| other.contains(v)).collect())
    }

    pub fn difference(&self, other: &Simplex) -> Simplex {
        Simplex(self.0.iter().copied().filter(|&v| !other.contains(v)).collect())
    }

    pub fn without(&self, v: VertexId) -> Simplex {
        Simplex(self.0.iter().copied().filter(|&w| w != v).collect())
    }

    pub fn with(&self, v: VertexId) -> Simplex {
        Simplex::new(self.iter().chain(std::iter::once(v)))
    }

    /// All subsets, including the empty one and `self`.
    pub fn faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.0.len();
        (0u32..1 << n).map(move |mask| {
            Simplex((0..n).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]).collect())
        })
    }

    pub fn map(&self, f: impl Fn(VertexId) -> VertexId) -> Simplex {
        Simplex::new(self.iter().map(f))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl<const N: usize> From<[VertexId; N]> for Simplex {
    fn from(v: [VertexId; N]) -> Self {
        Simplex::new(v)
    }
}

#[derive(Debug)]
struct ChamberData {
    chambers: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
    /// corank-1 face -> chambers containing it
    panels: HashMap<Simplex, Vec<usize>>,
    adjacency: Vec<Vec<usize>>,
}

#[derive(Debug, Default)]
struct Cache {
    simplices: OnceLock<Vec<Simplex>>,
    members: OnceLock<HashSet<Simplex>>,
    chambers: OnceLock<ChamberData>,
    neighbors: OnceLock<Vec<Vec<VertexId>>>,
    /// vertex -> indices into `maximal`
    incidence: OnceLock<Vec<Vec<usize>>>,
}

#[derive(Debug)]
pub struct Complex {
    vertex_count: usize,
    maximal: Vec<Simplex>,
    rank: usize,
    cache: Cache,
}

impl Clone for Complex {
    fn clone(&self) -> Self {
        Complex::from_maximal_unchecked(self.vertex_count, self.maximal.clone())
    }
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count && self.maximal == other.maximal
    }
}

impl Eq for Complex {}

/// A link relabeled onto dense vertex ids, with the map back to the parent.
#[derive(Clone, Debug)]
pub struct Link {
    pub complex: Complex,
    /// `original[new id] = parent id`
    pub original: Vec<VertexId>,
}

impl Complex {
    pub fn new(vertex_count: usize, maximal: Vec<Vec<VertexId>>) -> Result<Self> {
        let simplices = maximal
            .into_iter()
            .map(Simplex::try_new)
            .collect::<Result<Vec<_>>>()?;
        Complex::from_simplices(vertex_count, simplices)
    }

    pub fn from_simplices(vertex_count: usize, mut maximal: Vec<Simplex>) -> Result<Self> {
        if maximal.is_empty() || vertex_count == 0 {
            return Err(GeomError::EmptyComplex);
        }
        let mut covered = vec![false; vertex_count];
        for s in &maximal {
            for v in s.iter() {
                if v >= vertex_count {
                    return Err(GeomError::VertexOutOfRange { vertex: v, count: vertex_count });
                }
                covered[v] = true;
            }
        }
        if let Some(v) = covered.iter().position(|c| !c) {
            return Err(GeomError::UncoveredVertex(v));
        }
        maximal.sort();
        let mut incidence = vec![Vec::new(); vertex_count];
        for (i, s) in maximal.iter().enumerate() {
            for v in s.iter() {
                incidence[v].push(i);
            }
        }
        for (i, s) in maximal.iter().enumerate() {
            let first = s.vertices()[0];
            for &j in &incidence[first] {
                if i != j && s.len() <= maximal[j].len() && s.is_subset(&maximal[j]) {
                    return Err(GeomError::ContainedMaximalSimplex {
                        inner: s.clone(),
                        outer: maximal[j].clone(),
                    });
                }
            }
        }
        let complex = Complex::from_maximal_unchecked(vertex_count, maximal);
        let _ = complex.cache.incidence.set(incidence);
        Ok(complex)
    }

    /// No validation; `maximal` must be an antichain covering every vertex.
    pub(crate) fn from_maximal_unchecked(vertex_count: usize, mut maximal: Vec<Simplex>) -> Self {
        maximal.sort();
        let rank = maximal.iter().map(Simplex::len).max().unwrap_or(0);
        Complex { vertex_count, maximal, rank, cache: Cache::default() }
    }

    /// The complex whose simplices are the cliques of a graph.
    pub fn clique_complex(vertex_count: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut adj = vec![BTreeSet::new(); vertex_count];
        for &(a, b) in edges {
            if a >= vertex_count || b >= vertex_count {
                return Err(GeomError::VertexOutOfRange { vertex: a.max(b), count: vertex_count });
            }
            if a != b {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        let mut cliques = Vec::new();
        let p: BTreeSet<VertexId> = (0..vertex_count).collect();
        bron_kerbosch(&adj, Vec::new(), p, BTreeSet::new(), &mut cliques);
        Complex::from_simplices(vertex_count, cliques.into_iter().map(Simplex::new).collect())
    }

    /// Simplicial join; vertices of `b` are shifted by `a.vertex_count()`.
    pub fn join(a: &Complex, b: &Complex) -> Complex {
        let off = a.vertex_count;
        let mut maximal = Vec::new();
        for s in &a.maximal {
            for t in &b.maximal {
                maximal.push(Simplex::new(s.iter().chain(t.iter().map(|v| v + off))));
            }
        }
        Complex::from_maximal_unchecked(a.vertex_count + b.vertex_count, maximal)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn maximal_simplices(&self) -> &[Simplex] {
        &self.maximal
    }

    pub fn corank(&self, s: &Simplex) -> usize {
        self.rank - s.len()
    }

    fn incidence(&self) -> &[Vec<usize>] {
        self.cache.incidence.get_or_init(|| {
            let mut inc = vec![Vec::new(); self.vertex_count];
            for (i, s) in self.maximal.iter().enumerate() {
                for v in s.iter() {
                    inc[v].push(i);
                }
            }
            inc
        })
    }

    /// Maximal simplices containing `s`.
    pub fn maximal_containing<'a>(&'a self, s: &'a Simplex) -> Box<dyn Iterator<Item = &'a Simplex> + 'a> {
        match s.vertices().first() {
            None => Box::new(self.maximal.iter()),
            Some(&v) if v < self.vertex_count => Box::new(
                self.incidence()[v]
                    .iter()
                    .map(move |&i| &self.maximal[i])
                    .filter(move |m| s.is_subset(m)),
            ),
            Some(_) => Box::new(std::iter::empty()),
        }
    }

    /// Every simplex including the empty one, sorted by size then lexicographically.
    pub fn simplices(&self) -> &[Simplex] {
        self.cache.simplices.get_or_init(|| {
            let mut all: Vec<Simplex> = self.members().iter().cloned().collect();
            all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            all
        })
    }

    fn members(&self) -> &HashSet<Simplex> {
        self.cache.members.get_or_init(|| {
            let mut set = HashSet::new();
            for m in &self.maximal {
                for f in m.faces() {
                    set.insert(f);
                }
            }
            set
        })
    }

    pub fn simplex_count(&self) -> usize {
        self.members().len()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.members().contains(s)
    }

    fn require(&self, s: &Simplex) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(GeomError::SimplexNotInComplex(s.clone()))
        }
    }

    pub fn link(&self, alpha: &Simplex) -> Result<Link> {
        self.require(alpha)?;
        if alpha.is_empty() {
            return Ok(Link { complex: self.clone(), original: (0..self.vertex_count).collect() });
        }
        let rests: BTreeSet<Simplex> =
            self.maximal_containing(alpha).map(|m| m.difference(alpha)).collect();
        let original: Vec<VertexId> =
            rests.iter().flat_map(|s| s.iter()).collect::<BTreeSet<_>>().into_iter().collect();
        let relabel: HashMap<VertexId, VertexId> =
            original.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let maximal = rests.iter().map(|s| s.map(|v| relabel[&v])).collect();
        Ok(Link { complex: Complex::from_maximal_unchecked(original.len(), maximal), original })
    }

    /// Link simplices in the parent's vertex ids.
    pub fn link_simplices(&self, alpha: &Simplex) -> Result<BTreeSet<Simplex>> {
        self.require(alpha)?;
        let mut out = BTreeSet::new();
        for m in self.maximal_containing(alpha) {
            for f in m.difference(alpha).faces() {
                out.insert(f);
            }
        }
        Ok(out)
    }

    /// All simplices containing `alpha`, sorted.
    pub fn residue(&self, alpha: &Simplex) -> Result<Vec<Simplex>> {
        let link = self.link_simplices(alpha)?;
        Ok(link.into_iter().map(|b| b.union(alpha)).collect::<BTreeSet<_>>().into_iter().collect())
    }

    /// Union of the links of the corank-`k` faces of `alpha`.
    pub fn e_k_set(&self, alpha: &Simplex, k: usize) -> Result<BTreeSet<Simplex>> {
        self.require(alpha)?;
        let corank = self.corank(alpha);
        if k < corank {
            return Err(GeomError::KTooSmall { k, corank });
        }
        let mut out = BTreeSet::new();
        if k > self.rank {
            return Ok(out);
        }
        let face_len = self.rank - k;
        for beta in alpha.faces().filter(|b| b.len() == face_len) {
            out.extend(self.link_simplices(&beta)?);
        }
        Ok(out)
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency()[v]
    }

    fn adjacency(&self) -> &[Vec<VertexId>] {
        self.cache.neighbors.get_or_init(|| {
            let mut adj = vec![BTreeSet::new(); self.vertex_count];
            for m in &self.maximal {
                for a in m.iter() {
                    for b in m.iter() {
                        if a != b {
                            adj[a].insert(b);
                        }
                    }
                }
            }
            adj.into_iter().map(|s| s.into_iter().collect()).collect()
        })
    }

    pub fn is_adjacent(&self, a: VertexId, b: VertexId) -> bool {
        self.adjacency()[a].binary_search(&b).is_ok()
    }

    pub fn one_skeleton_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.vertex_count
    }

    /// A clique of the 1-skeleton that is not a simplex, if one exists.
    ///
    /// All cliques are simplices iff every simplex extends by every common
    /// neighbour of its vertices, which avoids enumerating cliques directly.
    pub fn flag_violation(&self) -> Option<Simplex> {
        let adj = self.adjacency();
        for s in self.simplices() {
            let candidates: Vec<VertexId> = match s.vertices().first() {
                None => (0..self.vertex_count).collect(),
                Some(&v) => adj[v]
                    .iter()
                    .copied()
                    .filter(|&w| !s.contains(w) && s.iter().all(|u| self.is_adjacent(u, w)))
                    .collect(),
            };
            for w in candidates {
                let bigger = s.with(w);
                if !self.contains(&bigger) {
                    return Some(bigger);
                }
            }
        }
        None
    }

    pub fn is_flag_complex(&self) -> bool {
        self.flag_violation().is_none()
    }

    pub fn is_pure(&self) -> bool {
        self.maximal.iter().all(|m| m.len() == self.rank)
    }

    fn chamber_data(&self) -> &ChamberData {
        self.cache.chambers.get_or_init(|| {
            let chambers: Vec<Simplex> =
                self.maximal.iter().filter(|m| m.len() == self.rank).cloned().collect();
            let index = chambers.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
            let mut panels: HashMap<Simplex, Vec<usize>> = HashMap::new();
            for (i, c) in chambers.iter().enumerate() {
                for v in c.iter() {
                    panels.entry(c.without(v)).or_default().push(i);
                }
            }
            let mut adjacency = vec![BTreeSet::new(); chambers.len()];
            for members in panels.values() {
                for &a in members {
                    for &b in members {
                        if a != b {
                            adjacency[a].insert(b);
                        }
                    }
                }
            }
            let adjacency = adjacency.into_iter().map(|s| s.into_iter().collect()).collect();
            ChamberData { chambers, index, panels, adjacency }
        })
    }

    /// Maximal simplices of full rank.
    pub fn chambers(&self) -> &[Simplex] {
        &self.chamber_data().chambers
    }

    pub fn chamber_index(&self, c: &Simplex) -> Option<usize> {
        self.chamber_data().index.get(c).copied()
    }

    pub fn chamber_neighbors(&self, i: usize) -> &[usize] {
        &self.chamber_data().adjacency[i]
    }

    /// Chambers through a corank-1 simplex.
    pub fn panel_chambers(&self, panel: &Simplex) -> &[usize] {
        self.chamber_data().panels.get(panel).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn panels(&self) -> impl Iterator<Item = (&Simplex, &[usize])> {
        self.chamber_data().panels.iter().map(|(p, c)| (p, c.as_slice()))
    }

    /// Chamber-graph distances from chamber `i`; `None` when unreachable.
    pub fn chamber_distances(&self, i: usize) -> Vec<Option<usize>> {
        let data = self.chamber_data();
        let mut dist = vec![None; data.chambers.len()];
        let mut queue = VecDeque::from([i]);
        dist[i] = Some(0);
        while let Some(c) = queue.pop_front() {
            let d = dist[c].unwrap();
            for &n in &data.adjacency[c] {
                if dist[n].is_none() {
                    dist[n] = Some(d + 1);
                    queue.push_back(n);
                }
            }
        }
        dist
    }

    pub fn is_chamber_complex(&self) -> bool {
        if !self.is_pure() {
            return false;
        }
        self.chamber_distances(0).iter().all(Option::is_some)
    }

    pub fn is_thick(&self) -> Result<bool> {
        if !self.is_chamber_complex() {
            return Err(GeomError::NotAChamberComplex);
        }
        Ok(self.thin_panel().is_none())
    }

    /// A corank-1 simplex lying in fewer than three chambers.
    pub fn thin_panel(&self) -> Option<Simplex> {
        let mut thin: Vec<&Simplex> =
            self.panels().filter(|(_, c)| c.len() < 3).map(|(p, _)| p).collect();
        thin.sort();
        thin.first().map(|p| (*p).clone())
    }

    fn require_chamber(&self, c: &Simplex) -> Result<usize> {
        self.chamber_index(c).ok_or_else(|| GeomError::NotAChamber(c.clone()))
    }

    pub fn gallery_distance(&self, a: &Simplex, b: &Simplex) -> Result<usize> {
        let i = self.require_chamber(a)?;
        let j = self.require_chamber(b)?;
        self.chamber_distances(i)[j].ok_or(GeomError::NotAChamberComplex)
    }

    /// A shortest gallery from `a` to `b` (BFS, lowest chamber index first).
    pub fn minimal_gallery(&self, a: &Simplex, b: &Simplex) -> Result<Vec<Simplex>> {
        let i = self.require_chamber(a)?;
        let j = self.require_chamber(b)?;
        let dist = self.chamber_distances(j);
        if dist[i].is_none() {
            return Err(GeomError::NotAChamberComplex);
        }
        let mut path = vec![i];
        let mut cur = i;
        while cur != j {
            let d = dist[cur].unwrap();
            cur = *self
                .chamber_neighbors(cur)
                .iter()
                .find(|&&n| dist[n] == Some(d - 1))
                .expect("BFS predecessor");
            path.push(cur);
        }
        Ok(path.into_iter().map(|k| self.chambers()[k].clone()).collect())
    }

    /// Largest chamber-graph distance, with a pair realizing it.
    pub fn chamber_diameter(&self) -> Option<(usize, usize, usize)> {
        let n = self.chambers().len();
        let mut best: Option<(usize, usize, usize)> = None;
        for i in 0..n {
            let dist = self.chamber_distances(i);
            for (j, d) in dist.iter().enumerate() {
                let d = (*d)?;
                if best.is_none_or(|(bd, _, _)| d > bd) {
                    best = Some((d, i, j));
                }
            }
        }
        best
    }
}

fn bron_kerbosch(
    adj: &[BTreeSet<VertexId>],
    r: Vec<VertexId>,
    mut p: BTreeSet<VertexId>,
    mut x: BTreeSet<VertexId>,
    out: &mut Vec<Vec<VertexId>>,
) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r);
        }
        return;
    }
    let pivot = *p.iter().chain(x.iter()).max_by_key(|&&u| adj[u].intersection(&p).count()).unwrap();
    let candidates: Vec<VertexId> = p.difference(&adj[pivot]).copied().collect();
    for v in candidates {
        let mut r2 = r.clone();
        r2.push(v);
        let p2 = p.intersection(&adj[v]).copied().collect();
        let x2 = x.intersection(&adj[v]).copied().collect();
        bron_kerbosch(adj, r2, p2, x2, out);
        p.remove(&v);
        x.insert(v);
    }
}
