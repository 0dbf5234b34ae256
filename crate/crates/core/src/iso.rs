//! Type-preserving isomorphism search between typed complexes.
//!
//! Backtracking over the 1-skeleton, seeded at the first chamber of `a`: the
//! next vertex is always the one with the most mapped neighbours, each
//! candidate image must have the same type and degree, agree on adjacency with
//! everything mapped so far and complete maximal simplices onto maximal
//! simplices, and a complete assignment is accepted once it carries maximal
//! simplices onto maximal simplices.

use std::collections::{BTreeMap, HashSet, VecDeque};

use crate::complex::{Simplex, VertexId};
use crate::typed::TypedComplex;

/// Type index of `a` to type index of `b`: by label when the label sets agree,
/// positionally otherwise.
fn type_correspondence(a: &TypedComplex, b: &TypedComplex) -> Option<Vec<usize>> {
    if a.type_count() != b.type_count() {
        return None;
    }
    let by_label: Option<Vec<usize>> = a.types().iter().map(|l| b.types().iter().position(|m| m == l)).collect();
    Some(by_label.unwrap_or_else(|| (0..a.type_count()).collect()))
}

struct Search<'a> {
    a: &'a TypedComplex,
    b: &'a TypedComplex,
    order: Vec<VertexId>,
    color_a: Vec<(usize, usize)>,
    color_b: Vec<(usize, usize)>,
    adj_b: Vec<Vec<bool>>,
    max_a: Vec<Vec<Simplex>>,
    max_b: Vec<Vec<Simplex>>,
    max_b_set: HashSet<Simplex>,
    map: Vec<Option<VertexId>>,
    mapped_degree: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn consistent(&self, v: VertexId, w: VertexId) -> bool {
        let ca = self.a.complex();
        let mapped_neighbors = ca.neighbors(v).iter().filter(|&&u| self.map[u].is_some()).count();
        for &u in ca.neighbors(v) {
            if let Some(x) = self.map[u] {
                if !self.adj_b[w][x] {
                    return false;
                }
            }
        }
        // w must not be adjacent to images of non-neighbours of v
        let mapped_image_neighbors =
            self.b.complex().neighbors(w).iter().filter(|&&x| self.used[x]).count();
        if mapped_neighbors != mapped_image_neighbors {
            return false;
        }
        // maximal simplices completed by v must map onto those completed by w
        let mut completed = 0;
        for m in &self.max_a[v] {
            if m.iter().all(|u| u == v || self.map[u].is_some()) {
                let image = m.map(|u| if u == v { w } else { self.map[u].unwrap() });
                if !self.max_b_set.contains(&image) {
                    return false;
                }
                completed += 1;
            }
        }
        let completed_b = self.max_b[w].iter().filter(|m| m.iter().all(|x| x == w || self.used[x])).count();
        completed == completed_b
    }

    fn candidates(&self, v: VertexId) -> Vec<VertexId> {
        let anchor = self.a.complex().neighbors(v).iter().find_map(|&u| self.map[u]);
        let pool: Vec<VertexId> = match anchor {
            Some(x) => self.b.complex().neighbors(x).to_vec(),
            None => (0..self.b.complex().vertex_count()).collect(),
        };
        let mut out: Vec<VertexId> = pool
            .into_iter()
            .filter(|&w| !self.used[w] && self.color_b[w] == self.color_a[v])
            .collect();
        // prefer the identity
        if let Some(pos) = out.iter().position(|&w| w == v) {
            out.remove(pos);
            out.insert(0, v);
        }
        out
    }

    /// The unmapped vertex with the most mapped neighbours, first in `order` on ties.
    fn next_vertex(&self) -> Option<VertexId> {
        let mut best: Option<(usize, VertexId)> = None;
        for &v in &self.order {
            if self.map[v].is_none() && best.is_none_or(|(c, _)| self.mapped_degree[v] > c) {
                best = Some((self.mapped_degree[v], v));
            }
        }
        best.map(|(_, v)| v)
    }

    fn assign(&mut self, v: VertexId, w: Option<VertexId>) {
        let delta: isize = if w.is_some() { 1 } else { -1 };
        for &u in self.a.complex().neighbors(v) {
            self.mapped_degree[u] = (self.mapped_degree[u] as isize + delta) as usize;
        }
        if let Some(x) = self.map[v] {
            self.used[x] = false;
        }
        if let Some(x) = w {
            self.used[x] = true;
        }
        self.map[v] = w;
    }

    fn run(&mut self) -> bool {
        let Some(v) = self.next_vertex() else {
            return self.maximal_simplices_match();
        };
        for w in self.candidates(v) {
            if !self.consistent(v, w) {
                continue;
            }
            self.assign(v, Some(w));
            if self.run() {
                return true;
            }
            self.assign(v, None);
        }
        false
    }

    fn maximal_simplices_match(&self) -> bool {
        let max_b = self.b.complex().maximal_simplices();
        let mut mapped: Vec<Simplex> = self
            .a
            .complex()
            .maximal_simplices()
            .iter()
            .map(|s| s.map(|v| self.map[v].unwrap()))
            .collect();
        mapped.sort();
        mapped == max_b
    }
}

/// A type-preserving simplicial isomorphism `a -> b` as a vertex image table.
pub fn find_isomorphism(a: &TypedComplex, b: &TypedComplex) -> Option<Vec<VertexId>> {
    let ca = a.complex();
    let cb = b.complex();
    let tmap = type_correspondence(a, b)?;
    if ca.vertex_count() != cb.vertex_count()
        || ca.maximal_simplices().len() != cb.maximal_simplices().len()
        || ca.rank() != cb.rank()
    {
        return None;
    }
    let color_a: Vec<(usize, usize)> =
        (0..ca.vertex_count()).map(|v| (tmap[a.type_of(v)], ca.neighbors(v).len())).collect();
    let color_b: Vec<(usize, usize)> = (0..cb.vertex_count()).map(|v| (b.type_of(v), cb.neighbors(v).len())).collect();
    let histogram = |c: &[(usize, usize)]| {
        let mut h = BTreeMap::new();
        for &x in c {
            *h.entry(x).or_insert(0usize) += 1;
        }
        h
    };
    if histogram(&color_a) != histogram(&color_b) {
        return None;
    }
    let n = ca.vertex_count();
    let mut adj_b = vec![vec![false; n]; n];
    for (v, row) in adj_b.iter_mut().enumerate() {
        for &w in cb.neighbors(v) {
            row[w] = true;
        }
    }
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut starts: Vec<VertexId> = ca.maximal_simplices().first().map(|s| s.vertices().to_vec()).unwrap_or_default();
    starts.extend(0..n);
    for s in starts {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in ca.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let incident = |c: &crate::complex::Complex| {
        let mut out = vec![Vec::new(); c.vertex_count()];
        for m in c.maximal_simplices() {
            for v in m.iter() {
                out[v].push(m.clone());
            }
        }
        out
    };
    let mut search = Search {
        a,
        b,
        order,
        color_a,
        color_b,
        adj_b,
        max_a: incident(ca),
        max_b: incident(cb),
        max_b_set: cb.maximal_simplices().iter().cloned().collect(),
        map: vec![None; n],
        mapped_degree: vec![0; n],
        used: vec![false; n],
    };
    if search.run() {
        Some(search.map.into_iter().map(Option::unwrap).collect())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Complex;

    fn cycle(n: usize, shift: usize) -> TypedComplex {
        let max: Vec<Vec<usize>> = (0..n).map(|i| vec![(i + shift) % n, (i + shift + 1) % n]).collect();
        let c = Complex::new(n, max).unwrap();
        TypedComplex::from_labels(c, &["a", "b"], (0..n).map(|v| v % 2).collect()).unwrap()
    }

    #[test]
    fn identity_is_preferred() {
        let h = cycle(6, 0);
        assert_eq!(find_isomorphism(&h, &h), Some((0..6).collect()));
    }

    #[test]
    fn distinguishes_cycle_lengths() {
        let mut two: Vec<Vec<usize>> = Vec::new();
        for i in 0..4 {
            two.push(vec![i, (i + 1) % 4]);
            two.push(vec![4 + i, 4 + (i + 1) % 4]);
        }
        let c = Complex::new(8, two).unwrap();
        let squares = TypedComplex::from_labels(c, &["a", "b"], (0..8).map(|v| v % 2).collect()).unwrap();
        assert_eq!(find_isomorphism(&cycle(8, 0), &squares), None);
    }

    #[test]
    fn result_is_an_isomorphism() {
        let a = cycle(10, 0);
        let perm: Vec<usize> = vec![2, 7, 4, 9, 6, 1, 8, 3, 0, 5];
        let max: Vec<Vec<usize>> = a.complex().maximal_simplices().iter().map(|s| s.iter().map(|v| perm[v]).collect()).collect();
        let c = Complex::new(10, max).unwrap();
        let types = (0..10).map(|w| a.type_of(perm.iter().position(|&x| x == w).unwrap())).collect();
        let b = TypedComplex::from_labels(c, &["a", "b"], types).unwrap();
        let iso = find_isomorphism(&a, &b).unwrap();
        for s in a.complex().maximal_simplices() {
            assert!(b.complex().contains(&s.map(|v| iso[v])));
        }
    }
}
