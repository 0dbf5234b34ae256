//! Coxeter matrices and finite Coxeter groups.
//!
//! Groups are enumerated by Todd–Coxeter coset enumeration over the trivial
//! subgroup of `<I | (s_i s_j)^{M_ij} = 1>` (HLT strategy, lookahead when the
//! table fills up). Arithmetic is exact; there are no reflection matrices.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{GeomError, Result};

pub const DEFAULT_CAP: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterMatrix {
    labels: Vec<String>,
    entries: Vec<Vec<u32>>,
}

impl CoxeterMatrix {
    /// Checks only that `entries` is square of the right size; see [`CoxeterMatrix::validate`].
    pub fn new(labels: Vec<String>, entries: Vec<Vec<u32>>) -> Result<Self> {
        if entries.len() != labels.len() || entries.iter().any(|r| r.len() != labels.len()) {
            return Err(GeomError::InvalidCoxeterMatrix("not square".into()));
        }
        Ok(CoxeterMatrix { labels, entries })
    }

    pub fn from_entries(entries: Vec<Vec<u32>>) -> Result<Self> {
        let labels = (0..entries.len()).map(|i| i.to_string()).collect();
        CoxeterMatrix::new(labels, entries)
    }

    /// Linear diagram: `edges[i]` is the entry between nodes `i` and `i + 1`,
    /// all other pairs commute.
    pub fn linear(edges: &[u32]) -> Self {
        let n = edges.len() + 1;
        let mut entries = vec![vec![2; n]; n];
        for i in 0..n {
            entries[i][i] = 1;
        }
        for (i, &m) in edges.iter().enumerate() {
            entries[i][i + 1] = m;
            entries[i + 1][i] = m;
        }
        CoxeterMatrix::from_entries(entries).unwrap()
    }

    pub fn a(n: usize) -> Self {
        CoxeterMatrix::linear(&vec![3; n.saturating_sub(1)])
    }

    /// `3, ..., 3, 4`
    pub fn c(n: usize) -> Self {
        let mut edges = vec![3; n.saturating_sub(2)];
        edges.push(4);
        CoxeterMatrix::linear(&edges)
    }

    pub fn f4() -> Self {
        CoxeterMatrix::linear(&[3, 4, 3])
    }

    pub fn h3() -> Self {
        CoxeterMatrix::linear(&[5, 3])
    }

    pub fn h4() -> Self {
        CoxeterMatrix::linear(&[5, 3, 3])
    }

    pub fn i2(m: u32) -> Self {
        CoxeterMatrix::linear(&[m])
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.labels.len() {
            return Err(GeomError::InvalidCoxeterMatrix("label count".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entries(&self) -> &[Vec<u32>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i][j]
    }

    pub fn validate(&self) -> bool {
        let n = self.rank();
        (0..n).all(|i| {
            self.entries[i][i] == 1
                && (0..n).all(|j| i == j || (self.entries[i][j] >= 2 && self.entries[i][j] == self.entries[j][i]))
        })
    }

    /// Restriction to the nodes in `nodes`, in that order.
    pub fn restrict(&self, nodes: &[usize]) -> CoxeterMatrix {
        let labels = nodes.iter().map(|&i| self.labels[i].clone()).collect();
        let entries = nodes.iter().map(|&i| nodes.iter().map(|&j| self.entries[i][j]).collect()).collect();
        CoxeterMatrix { labels, entries }
    }

    /// Connected components of the graph joining `i`, `j` when `M_ij >= 3`.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.rank();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut i = 0;
            while i < members.len() {
                let u = members[i];
                for v in 0..n {
                    if v != u && comp[v] == usize::MAX && self.entries[u][v] >= 3 {
                        comp[v] = id;
                        members.push(v);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Nodes in diagram order if the diagram is a path (or a single node).
    fn path_order(&self, nodes: &[usize]) -> Option<Vec<usize>> {
        if nodes.len() == 1 {
            return Some(nodes.to_vec());
        }
        let degree = |u: usize| nodes.iter().filter(|&&v| v != u && self.entries[u][v] >= 3).count();
        let ends: Vec<usize> = nodes.iter().copied().filter(|&u| degree(u) == 1).collect();
        if ends.len() != 2 || nodes.iter().any(|&u| degree(u) > 2) {
            return None;
        }
        // orient so the larger end label comes last, which reads C_n as 3..3,4
        let mut start = ends[0];
        let last_edge = |from: usize| {
            let next = nodes.iter().copied().find(|&v| v != from && self.entries[from][v] >= 3).unwrap();
            self.entries[from][next]
        };
        if last_edge(ends[0]) > last_edge(ends[1]) {
            start = ends[1];
        }
        let mut order = vec![start];
        while order.len() < nodes.len() {
            let u = *order.last().unwrap();
            let next = nodes
                .iter()
                .copied()
                .find(|&v| !order.contains(&v) && self.entries[u][v] >= 3)?;
            order.push(next);
        }
        Some(order)
    }

    /// Conventional name of a spherical diagram such as `C3` or `A2xA1`, when recognized.
    pub fn name(&self) -> Option<String> {
        let mut parts = Vec::new();
        for comp in self.components() {
            let Some(order) = self.path_order(&comp) else {
                parts.push(self.branched_name(&comp)?);
                continue;
            };
            let edges: Vec<u32> = order.windows(2).map(|w| self.entries[w[0]][w[1]]).collect();
            let n = order.len();
            let name = match edges.as_slice() {
                [] => "A1".to_string(),
                e if e.iter().all(|&m| m == 3) => format!("A{n}"),
                [m] if *m == 4 => "C2".to_string(),
                [m] => format!("I2({m})"),
                [3, 4, 3] => "F4".to_string(),
                [5, 3] | [3, 5] => "H3".to_string(),
                [5, 3, 3] | [3, 3, 5] => "H4".to_string(),
                e if e[..e.len() - 1].iter().all(|&m| m == 3) && e[e.len() - 1] == 4 => format!("C{n}"),
                _ => return None,
            };
            parts.push(name);
        }
        Some(parts.join("x"))
    }

    /// `D_n` or `E_6..E_8`: a tree of simple edges with one node of degree three.
    fn branched_name(&self, nodes: &[usize]) -> Option<String> {
        let adjacent = |u: usize| nodes.iter().copied().filter(move |&v| v != u && self.entries[u][v] >= 3);
        if nodes.iter().any(|&u| adjacent(u).any(|v| self.entries[u][v] != 3)) {
            return None;
        }
        let edges: usize = nodes.iter().map(|&u| adjacent(u).count()).sum::<usize>() / 2;
        if edges + 1 != nodes.len() {
            return None;
        }
        let branch: Vec<usize> = nodes.iter().copied().filter(|&u| adjacent(u).count() >= 3).collect();
        let [center] = branch.as_slice() else { return None };
        if adjacent(*center).count() != 3 {
            return None;
        }
        let mut arms: Vec<usize> = adjacent(*center)
            .map(|first| {
                let (mut prev, mut cur, mut len) = (*center, first, 1);
                while let Some(next) = adjacent(cur).find(|&v| v != prev) {
                    (prev, cur, len) = (cur, next, len + 1);
                }
                len
            })
            .collect();
        arms.sort_unstable();
        let n = nodes.len();
        match arms.as_slice() {
            [1, 1, _] => Some(format!("D{n}")),
            [1, 2, 2..=4] => Some(format!("E{n}")),
            _ => None,
        }
    }

    /// Whether the Coxeter group is finite, by the classification of
    /// connected spherical diagrams.
    pub fn is_spherical(&self) -> bool {
        self.validate() && self.name().is_some()
    }
}

impl fmt::Display for CoxeterMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "[")?;
            for (j, m) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{m}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// A word in the generators, as indices into the index set.
pub type CoxeterWord = Vec<usize>;

/// An enumerated finite Coxeter group. Element 0 is the identity; elements are
/// numbered in breadth-first (shortlex) order.
#[derive(Clone, Debug)]
pub struct CoxeterGroupTable {
    rank: usize,
    /// `right[e * rank + s] = e * s`
    right: Vec<u32>,
    lengths: Vec<u32>,
    /// BFS parent `(element, generator)` with `parent * generator = element`
    parent: Vec<Option<(u32, u32)>>,
}

impl CoxeterGroupTable {
    pub fn order(&self) -> usize {
        self.lengths.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul_gen(&self, e: usize, s: usize) -> usize {
        self.right[e * self.rank + s] as usize
    }

    pub fn length(&self, e: usize) -> usize {
        self.lengths[e] as usize
    }

    pub fn evaluate(&self, word: &[usize]) -> Result<usize> {
        let mut e = 0;
        for &s in word {
            if s >= self.rank {
                return Err(GeomError::LetterOutOfRange { letter: s, rank: self.rank });
            }
            e = self.mul_gen(e, s);
        }
        Ok(e)
    }

    pub fn is_reduced(&self, word: &[usize]) -> Result<bool> {
        let e = self.evaluate(word)?;
        Ok(self.length(e) == word.len())
    }

    /// The shortlex-least reduced word for `e`.
    pub fn reduced_word(&self, mut e: usize) -> CoxeterWord {
        let mut word = Vec::with_capacity(self.length(e));
        while let Some((p, s)) = self.parent[e] {
            word.push(s as usize);
            e = p as usize;
        }
        word.reverse();
        word
    }

    pub fn longest_word_length(&self) -> usize {
        self.lengths.iter().copied().max().unwrap_or(0) as usize
    }

    /// Elements attaining the maximal length (exactly one for a finite group).
    pub fn longest_elements(&self) -> Vec<usize> {
        let max = self.longest_word_length() as u32;
        (0..self.order()).filter(|&e| self.lengths[e] == max).collect()
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        self.reduced_word(b).into_iter().fold(a, |e, s| self.mul_gen(e, s))
    }
}

const UNDEF: u32 = u32::MAX;

struct Enumerator<'a> {
    rank: usize,
    relators: &'a [Vec<usize>],
    table: Vec<u32>,
    parent: Vec<u32>,
    queue: VecDeque<u32>,
}

impl<'a> Enumerator<'a> {
    fn rows(&self) -> usize {
        self.parent.len()
    }

    fn get(&self, c: u32, s: usize) -> u32 {
        self.table[c as usize * self.rank + s]
    }

    fn set(&mut self, c: u32, s: usize, d: u32) {
        self.table[c as usize * self.rank + s] = d;
    }

    fn define(&mut self, c: u32, s: usize) -> u32 {
        let d = self.parent.len() as u32;
        self.parent.push(d);
        self.table.extend(std::iter::repeat_n(UNDEF, self.rank));
        self.set(c, s, d);
        self.set(d, s, c);
        d
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut x = c;
        while self.parent[x as usize] != r {
            let next = self.parent[x as usize];
            self.parent[x as usize] = r;
            x = next;
        }
        r
    }

    fn merge(&mut self, a: u32, b: u32) {
        let a = self.rep(a);
        let b = self.rep(b);
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.parent[hi as usize] = lo;
            self.queue.push_back(hi);
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.merge(a, b);
        while let Some(e) = self.queue.pop_front() {
            for s in 0..self.rank {
                let f = self.get(e, s);
                if f == UNDEF {
                    continue;
                }
                // generators are involutions: the back edge lives in the same column
                self.set(f, s, UNDEF);
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let x = self.get(e1, s);
                if x != UNDEF {
                    self.merge(f1, x);
                    continue;
                }
                let y = self.get(f1, s);
                if y != UNDEF {
                    self.merge(e1, y);
                    continue;
                }
                self.set(e1, s, f1);
                self.set(f1, s, e1);
            }
        }
    }

    fn is_live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    /// Scans relator `w` from `c`; with `fill` undefined positions are defined.
    fn scan(&mut self, c: u32, w: &[usize], fill: bool) {
        let mut f = c;
        let mut i = 0usize;
        let mut b = c;
        let mut j = w.len();
        loop {
            while i < j && self.get(f, w[i]) != UNDEF {
                f = self.get(f, w[i]);
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return;
            }
            while j > i && self.get(b, w[j - 1]) != UNDEF {
                b = self.get(b, w[j - 1]);
                j -= 1;
            }
            if j == i {
                if f != b {
                    self.coincidence(f, b);
                }
                return;
            }
            if j == i + 1 {
                // deduction
                let s = w[i];
                self.set(f, s, b);
                self.set(b, s, f);
                return;
            }
            if !fill {
                return;
            }
            self.define(f, w[i]);
        }
    }

    fn lookahead(&mut self) {
        let mut c = 0;
        while (c as usize) < self.rows() {
            if self.is_live(c) {
                for r in 0..self.relators.len() {
                    let w = self.relators[r].clone();
                    self.scan(c, &w, false);
                    if !self.is_live(c) {
                        break;
                    }
                }
            }
            c += 1;
        }
    }

    /// Drops dead rows; returns the new index of the first live row `>= from`.
    fn compact(&mut self, from: u32) -> u32 {
        let n = self.rows();
        let mut new_id = vec![UNDEF; n];
        let mut next = 0u32;
        for c in 0..n as u32 {
            if self.is_live(c) {
                new_id[c as usize] = next;
                next += 1;
            }
        }
        let mut table = Vec::with_capacity(next as usize * self.rank);
        for c in 0..n as u32 {
            if !self.is_live(c) {
                continue;
            }
            for s in 0..self.rank {
                let d = self.get(c, s);
                table.push(if d == UNDEF { UNDEF } else { new_id[self.rep(d) as usize] });
            }
        }
        let resume = (from..n as u32).find(|&c| self.is_live(c)).map_or(next, |c| new_id[c as usize]);
        self.table = table;
        self.parent = (0..next).collect();
        resume
    }
}

/// Enumerates the Coxeter group of `m`, failing with `CapExceeded` when the
/// coset table would grow beyond `cap` rows (infinite group or cap too small).
pub fn enumerate_group(m: &CoxeterMatrix, cap: usize) -> Result<CoxeterGroupTable> {
    if !m.validate() {
        return Err(GeomError::InvalidCoxeterMatrix(m.to_string()));
    }
    let rank = m.rank();
    let mut relators = Vec::new();
    for i in 0..rank {
        for j in i + 1..rank {
            let k = m.get(i, j) as usize;
            relators.push([i, j].repeat(k));
        }
    }
    let max_rel: usize = relators.iter().map(Vec::len).sum::<usize>().max(1);
    if cap < 1 {
        return Err(GeomError::CapExceeded(cap));
    }
    let mut en = Enumerator {
        rank,
        relators: &relators,
        table: vec![UNDEF; rank],
        parent: vec![0],
        queue: VecDeque::new(),
    };
    let mut c = 0u32;
    while (c as usize) < en.rows() {
        if en.rows() + max_rel > cap {
            en.lookahead();
            c = en.compact(c);
            if en.rows() + max_rel > cap {
                return Err(GeomError::CapExceeded(cap));
            }
            continue;
        }
        if en.is_live(c) {
            for r in 0..relators.len() {
                en.scan(c, &relators[r], true);
                if !en.is_live(c) {
                    break;
                }
            }
            if en.is_live(c) {
                for s in 0..rank {
                    if en.get(c, s) == UNDEF {
                        en.define(c, s);
                    }
                }
            }
        }
        c += 1;
    }
    en.compact(0);
    Ok(relabel_bfs(rank, &en.table, en.rows()))
}

fn relabel_bfs(rank: usize, table: &[u32], n: usize) -> CoxeterGroupTable {
    let mut new_id = vec![UNDEF; n];
    let mut order = vec![0u32];
    let mut lengths = vec![0u32];
    let mut parent = vec![None];
    new_id[0] = 0;
    let mut i = 0;
    while i < order.len() {
        let c = order[i] as usize;
        for s in 0..rank {
            let d = table[c * rank + s] as usize;
            if new_id[d] == UNDEF {
                new_id[d] = order.len() as u32;
                order.push(d as u32);
                lengths.push(lengths[i] + 1);
                parent.push(Some((i as u32, s as u32)));
            }
        }
        i += 1;
    }
    let mut right = vec![0u32; n * rank];
    for (new, &old) in order.iter().enumerate() {
        for s in 0..rank {
            right[new * rank + s] = new_id[table[old as usize * rank + s] as usize];
        }
    }
    CoxeterGroupTable { rank, right, lengths, parent }
}
