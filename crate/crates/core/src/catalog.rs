//! Concrete finite geometries: the Neumaier geometry, projective spaces,
//! symplectic polar spaces and generalized digons, with their groups.

use std::collections::{BTreeSet, HashMap};

use crate::action::GeometryAction;
use crate::complex::{Complex, Simplex};
use crate::error::{GeomError, Result};
use crate::perm::{PermGroup, Permutation};
use crate::typed::TypedComplex;

/// A catalog geometry, its automorphism group action when known, and a
/// provenance string naming the construction.
#[derive(Clone, Debug)]
pub struct CatalogGeometry {
    pub geometry: TypedComplex,
    pub action: Option<GeometryAction>,
    pub provenance: String,
}

pub type Triple = [usize; 3];

/// The seven lines of a projective plane on the points `0..7`, sorted.
pub type FanoStructure = [Triple; 7];

/// All projective-plane structures on seven labeled points, in lexicographic order.
pub fn fano_structures() -> Vec<FanoStructure> {
    fn pair_index(a: usize, b: usize) -> usize {
        a * 7 + b
    }
    fn extend(lines: &mut Vec<Triple>, covered: &mut [bool; 49], out: &mut Vec<FanoStructure>) {
        let Some((a, b)) = (0..7)
            .flat_map(|a| (a + 1..7).map(move |b| (a, b)))
            .find(|&(a, b)| !covered[pair_index(a, b)])
        else {
            let mut s: Vec<Triple> = lines.clone();
            s.sort();
            out.push(s.try_into().unwrap());
            return;
        };
        for c in 0..7 {
            if c == a || c == b {
                continue;
            }
            let mut t = [a, b, c];
            t.sort();
            let pairs = [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])];
            if pairs.iter().any(|&(x, y)| covered[pair_index(x, y)]) {
                continue;
            }
            for &(x, y) in &pairs {
                covered[pair_index(x, y)] = true;
            }
            lines.push(t);
            extend(lines, covered, out);
            lines.pop();
            for &(x, y) in &pairs {
                covered[pair_index(x, y)] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), &mut [false; 49], &mut out);
    out.sort();
    out.dedup();
    out
}

/// `(0 1 2)` and `(0 1 2 3 4 5 6)`, generating `Alt(7)`.
pub fn alt7_generators() -> Vec<Permutation> {
    vec![
        Permutation::from_cycles(7, &[&[0, 1, 2]]).unwrap(),
        Permutation::from_cycles(7, &[&[0, 1, 2, 3, 4, 5, 6]]).unwrap(),
    ]
}

fn act_on_structure(g: &Permutation, s: &FanoStructure) -> FanoStructure {
    let mut lines: Vec<Triple> = s
        .iter()
        .map(|t| {
            let mut u = t.map(|p| g.apply(p));
            u.sort();
            u
        })
        .collect();
    lines.sort();
    lines.try_into().unwrap()
}

/// The two `Alt(7)`-orbits on Fano structures; the first contains the
/// lexicographically least structure. Each orbit is sorted.
pub fn fano_structure_orbits() -> [Vec<FanoStructure>; 2] {
    let all = fano_structures();
    let gens = alt7_generators();
    let mut first = vec![all[0]];
    let mut seen: BTreeSet<FanoStructure> = BTreeSet::from([all[0]]);
    let mut i = 0;
    while i < first.len() {
        for g in &gens {
            let t = act_on_structure(g, &first[i]);
            if seen.insert(t) {
                first.push(t);
            }
        }
        i += 1;
    }
    first.sort();
    let second = all.into_iter().filter(|s| !seen.contains(s)).collect();
    [first, second]
}

/// Flat C3 geometry on 7 points, the 35 three-subsets as lines, and one
/// `Alt(7)`-orbit of 15 Fano structures as planes (`orbit` 0 is the orbit of
/// the lexicographically least structure). Points are `0..7`, lines `7..42`
/// in lexicographic order, planes `42..57` in lexicographic order.
pub fn neumaier_with_orbit(orbit: usize) -> Result<CatalogGeometry> {
    if orbit > 1 {
        return Err(GeomError::UnsupportedParameters(format!("orbit {orbit}")));
    }
    let planes = fano_structure_orbits()[orbit].clone();
    let lines: Vec<Triple> = (0..7)
        .flat_map(|a| (a + 1..7).flat_map(move |b| (b + 1..7).map(move |c| [a, b, c])))
        .collect();
    let line_id: HashMap<Triple, usize> = lines.iter().enumerate().map(|(i, &l)| (l, 7 + i)).collect();
    let plane_id: HashMap<FanoStructure, usize> =
        planes.iter().enumerate().map(|(i, &p)| (p, 7 + lines.len() + i)).collect();
    let n = 7 + lines.len() + planes.len();
    let mut chambers = Vec::new();
    for plane in &planes {
        for l in plane {
            for &p in l {
                chambers.push(Simplex::new([p, line_id[l], plane_id[plane]]));
            }
        }
    }
    let complex = Complex::from_simplices(n, chambers)?;
    let types = (0..n).map(|v| if v < 7 { 0 } else if v < 7 + lines.len() { 1 } else { 2 }).collect();
    let geometry = TypedComplex::from_labels(complex, &["point", "line", "plane"], types)?;
    let gens = alt7_generators()
        .iter()
        .map(|g| {
            let mut images: Vec<usize> = (0..7).map(|p| g.apply(p)).collect();
            for l in &lines {
                let mut t = l.map(|p| g.apply(p));
                t.sort();
                images.push(line_id[&t]);
            }
            for s in &planes {
                images.push(plane_id[&act_on_structure(g, s)]);
            }
            Permutation::from_images(images)
        })
        .collect::<Result<Vec<_>>>()?;
    let action = GeometryAction::new(PermGroup::new(n, gens)?, geometry.clone())?;
    Ok(CatalogGeometry { geometry, action: Some(action), provenance: format!("neumaier orbit={orbit}") })
}

pub fn neumaier() -> CatalogGeometry {
    neumaier_with_orbit(0).expect("the Neumaier construction is fixed")
}

/// Arithmetic in `GF(q)^d` for a small prime `q`, vectors encoded base `q`.
#[derive(Clone, Copy, Debug)]
struct VectorSpace {
    q: u32,
    d: usize,
}

impl VectorSpace {
    fn size(&self) -> u32 {
        self.q.pow(self.d as u32)
    }

    fn decode(&self, mut x: u32) -> Vec<u32> {
        let mut out = vec![0; self.d];
        for c in out.iter_mut() {
            *c = x % self.q;
            x /= self.q;
        }
        out
    }

    fn encode(&self, v: &[u32]) -> u32 {
        v.iter().rev().fold(0, |acc, &c| acc * self.q + c % self.q)
    }

    fn add_scaled(&self, x: u32, c: u32, y: u32) -> u32 {
        let a = self.decode(x);
        let b = self.decode(y);
        let v: Vec<u32> = a.iter().zip(&b).map(|(p, r)| (p + c * r) % self.q).collect();
        self.encode(&v)
    }

    fn apply_matrix(&self, m: &[Vec<u32>], x: u32) -> u32 {
        let v = self.decode(x);
        let w: Vec<u32> = m
            .iter()
            .map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum::<u32>() % self.q)
            .collect();
        self.encode(&w)
    }

    /// The standard alternating form pairing coordinates `2i` and `2i+1`.
    fn symplectic(&self, x: u32, y: u32) -> u32 {
        let a = self.decode(x);
        let b = self.decode(y);
        let mut s = 0;
        for i in (0..self.d).step_by(2) {
            s += a[i] * b[i + 1] + (self.q - 1) * a[i + 1] * b[i];
        }
        s % self.q
    }

    /// `S + <v>` as a sorted vector list.
    fn extend_span(&self, s: &[u32], v: u32) -> Vec<u32> {
        let mut out: BTreeSet<u32> = BTreeSet::new();
        for &x in s {
            for c in 0..self.q {
                out.insert(self.add_scaled(x, c, v));
            }
        }
        out.into_iter().collect()
    }
}

/// Subspaces of dimensions `1..=top` satisfying `admissible` (closed under
/// taking subspaces), their chains as chambers, and vertex ids ordered by
/// dimension then by sorted vector list.
struct SubspaceGeometry {
    subspaces: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    geometry: TypedComplex,
}

impl SubspaceGeometry {
    fn build(space: VectorSpace, top: usize, labels: &[&str], admissible: impl Fn(&[u32], u32) -> bool) -> Result<Self> {
        let mut layers: Vec<Vec<Vec<u32>>> = vec![vec![vec![0]]];
        for _ in 0..top {
            let mut next: BTreeSet<Vec<u32>> = BTreeSet::new();
            for s in layers.last().unwrap() {
                for v in 1..space.size() {
                    if s.binary_search(&v).is_err() && admissible(s, v) {
                        next.insert(space.extend_span(s, v));
                    }
                }
            }
            layers.push(next.into_iter().collect());
        }
        let subspaces: Vec<Vec<u32>> = layers[1..].iter().flatten().cloned().collect();
        let types: Vec<usize> = layers[1..].iter().enumerate().flat_map(|(d, l)| std::iter::repeat_n(d, l.len())).collect();
        let index: HashMap<Vec<u32>, usize> = subspaces.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let is_sub = |a: &[u32], b: &[u32]| a.iter().all(|x| b.binary_search(x).is_ok());
        // up[i] = subspaces of the next dimension containing subspace i
        let mut up: Vec<Vec<usize>> = vec![Vec::new(); subspaces.len()];
        let mut offset = 0;
        for d in 1..top {
            let lower = &layers[d];
            let upper = &layers[d + 1];
            for (i, a) in lower.iter().enumerate() {
                for (j, b) in upper.iter().enumerate() {
                    if is_sub(a, b) {
                        up[offset + i].push(offset + lower.len() + j);
                    }
                }
            }
            offset += lower.len();
        }
        let mut chambers = Vec::new();
        let mut stack: Vec<Vec<usize>> = (0..layers[1].len()).map(|i| vec![i]).collect();
        while let Some(chain) = stack.pop() {
            if chain.len() == top {
                chambers.push(Simplex::new(chain));
                continue;
            }
            for &u in &up[*chain.last().unwrap()] {
                let mut c = chain.clone();
                c.push(u);
                stack.push(c);
            }
        }
        let complex = Complex::from_simplices(subspaces.len(), chambers)?;
        let geometry = TypedComplex::from_labels(complex, &labels[..top], types)?;
        Ok(SubspaceGeometry { subspaces, index, geometry })
    }

    /// The permutation of subspaces induced by a linear map on vectors.
    fn induced(&self, f: impl Fn(u32) -> u32) -> Result<Permutation> {
        let images = self
            .subspaces
            .iter()
            .map(|s| {
                let mut t: Vec<u32> = s.iter().map(|&x| f(x)).collect();
                t.sort_unstable();
                self.index.get(&t).copied().ok_or_else(|| GeomError::UnsupportedParameters("map is not semilinear".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_images(images)
    }
}

const SUBSPACE_LABELS: [&str; 3] = ["point", "line", "plane"];

/// Elementary transvections and one diagonal generator of `GL(d, q)`.
fn general_linear_generators(d: usize, q: u32) -> Vec<Vec<Vec<u32>>> {
    let identity = |d: usize| -> Vec<Vec<u32>> { (0..d).map(|i| (0..d).map(|j| u32::from(i == j)).collect()).collect() };
    let mut gens = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i != j {
                let mut m = identity(d);
                m[i][j] = 1;
                gens.push(m);
            }
        }
    }
    if q > 2 {
        let mut m = identity(d);
        // 2 generates the multiplicative group of GF(3)
        m[0][0] = 2;
        gens.push(m);
    }
    gens
}

/// Flags of proper nonzero subspaces of `GF(q)^(n+1)`, with the action of
/// `PGL(n+1, q)`. Supports `2 <= n <= 3`, `q` in `{2, 3}`.
pub fn projective_space(n: usize, q: u32) -> Result<CatalogGeometry> {
    if !(2..=3).contains(&n) || !(q == 2 || q == 3) {
        return Err(GeomError::UnsupportedParameters(format!("projective space n={n} q={q}")));
    }
    let space = VectorSpace { q, d: n + 1 };
    let sg = SubspaceGeometry::build(space, n, &SUBSPACE_LABELS, |_, _| true)?;
    let gens = general_linear_generators(space.d, q)
        .iter()
        .map(|m| sg.induced(|x| space.apply_matrix(m, x)))
        .collect::<Result<Vec<_>>>()?;
    let degree = sg.geometry.complex().vertex_count();
    let action = GeometryAction::new(PermGroup::generated_by(degree, gens), sg.geometry.clone())?;
    Ok(CatalogGeometry { geometry: sg.geometry, action: Some(action), provenance: format!("projective_space n={n} q={q}") })
}

/// Chains of totally isotropic subspaces of `GF(2)^dim` under the standard
/// alternating form, with the action of `Sp(dim, 2)` generated by symplectic
/// transvections. Supports `dim` in `{4, 6}` and `q = 2`.
pub fn symplectic_polar_space(dim: usize, q: u32) -> Result<CatalogGeometry> {
    if !(dim == 4 || dim == 6) || q != 2 {
        return Err(GeomError::UnsupportedParameters(format!("symplectic polar space dim={dim} q={q}")));
    }
    let space = VectorSpace { q, d: dim };
    let top = dim / 2;
    let sg = SubspaceGeometry::build(space, top, &SUBSPACE_LABELS, |s, v| s.iter().all(|&x| space.symplectic(x, v) == 0))?;
    let mut transvection_vectors: Vec<u32> = (0..dim).map(|i| 1 << i).collect();
    for i in 0..dim {
        for j in i + 1..dim {
            transvection_vectors.push(1 << i | 1 << j);
        }
    }
    let gens = transvection_vectors
        .iter()
        .map(|&v| sg.induced(|x| if space.symplectic(x, v) == 1 { x ^ v } else { x }))
        .collect::<Result<Vec<_>>>()?;
    let degree = sg.geometry.complex().vertex_count();
    let action = GeometryAction::new(PermGroup::generated_by(degree, gens), sg.geometry.clone())?;
    Ok(CatalogGeometry {
        geometry: sg.geometry,
        action: Some(action),
        provenance: format!("symplectic_polar_space dim={dim} q={q}"),
    })
}

/// The complete bipartite graph `K_{m,n}` as a rank-2 geometry with
/// `Sym(m) x Sym(n)`.
pub fn complete_bipartite_digon(m: usize, n: usize) -> Result<CatalogGeometry> {
    if m < 3 || n < 3 {
        return Err(GeomError::TooThin);
    }
    let mut chambers = Vec::new();
    for a in 0..m {
        for b in 0..n {
            chambers.push(Simplex::new([a, m + b]));
        }
    }
    let complex = Complex::from_simplices(m + n, chambers)?;
    let types = (0..m + n).map(|v| usize::from(v >= m)).collect();
    let geometry = TypedComplex::from_labels(complex, &["left", "right"], types)?;
    let gens = PermGroup::symmetric(m)
        .generators()
        .iter()
        .map(|g| g.embed(0, m + n))
        .chain(PermGroup::symmetric(n).generators().iter().map(|g| g.embed(m, m + n)))
        .collect();
    let action = GeometryAction::new(PermGroup::new(m + n, gens)?, geometry.clone())?;
    Ok(CatalogGeometry { geometry, action: Some(action), provenance: format!("digon m={m} n={n}") })
}

/// The affine Weyl group of type A2 reduced mod `n`, acting on `(Z/n)^2`;
/// generators are `[s0, s1, s2]` with `s1`, `s2` the finite reflections.
pub fn affine_a2_group(n: usize) -> Result<(PermGroup, Vec<Permutation>)> {
    if n < 2 {
        return Err(GeomError::UnsupportedParameters(format!("affine A2 n={n}")));
    }
    let idx = |a: usize, b: usize| (a % n) * n + b % n;
    let neg = |x: usize| (n - x % n) % n;
    let mut s0 = Vec::with_capacity(n * n);
    let mut s1 = Vec::with_capacity(n * n);
    let mut s2 = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let c = neg(a + b);
            s0.push(idx(c + 1, b));
            s1.push(idx(b, a));
            s2.push(idx(a, c));
        }
    }
    let gens = vec![Permutation::from_images(s0)?, Permutation::from_images(s1)?, Permutation::from_images(s2)?];
    Ok((PermGroup::new(n * n, gens.clone())?, gens))
}
