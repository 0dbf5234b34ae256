//! Geometry axioms, polygon classification, diagrams and the C3 tests.

use std::collections::{HashMap, VecDeque};

use crate::complex::{Complex, Simplex, VertexId};
use crate::coxeter::{CoxeterGroupTable, CoxeterMatrix};
use crate::error::{GeomError, Result};
use crate::typed::{mask_members, Gallery, TypedComplex};

/// Largest gonality recognized by [`classify_rank2`].
pub const MAX_GONALITY: usize = 12;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeometryReport {
    pub is_pure: bool,
    pub is_flag: bool,
    pub is_thick: bool,
    pub residually_connected: bool,
    /// A maximal simplex of less than full rank.
    pub impure_simplex: Option<Simplex>,
    /// A clique of the 1-skeleton that is missing.
    pub missing_clique: Option<Simplex>,
    /// A panel in fewer than three chambers.
    pub thin_panel: Option<Simplex>,
    /// A nonmaximal simplex whose link is not a chamber complex.
    pub disconnected_link: Option<Simplex>,
}

impl GeometryReport {
    pub fn is_geometry(&self) -> bool {
        self.is_pure && self.is_flag && self.is_thick && self.residually_connected
    }
}

pub fn is_geometry(tc: &TypedComplex) -> GeometryReport {
    let c = tc.complex();
    let impure_simplex = c.maximal_simplices().iter().find(|m| m.len() != c.rank()).cloned();
    let missing_clique = c.flag_violation();
    let thin_panel = c.thin_panel();
    let disconnected_link = c
        .simplices()
        .iter()
        .filter(|s| c.corank(s) > 0 && c.maximal_simplices().binary_search(s).is_err())
        .find(|s| !c.link(s).map(|l| l.complex.is_chamber_complex()).unwrap_or(false))
        .cloned();
    GeometryReport {
        is_pure: impure_simplex.is_none(),
        is_flag: missing_clique.is_none(),
        is_thick: thin_panel.is_none() && impure_simplex.is_none(),
        residually_connected: disconnected_link.is_none(),
        impure_simplex,
        missing_clique,
        thin_panel,
        disconnected_link,
    }
}

/// Geometry test through vertex links: a connected flag complex all of whose
/// vertex links are thick chamber complexes of corank one.
pub fn geometry_by_local_recognition(tc: &TypedComplex) -> bool {
    let c = tc.complex();
    if c.rank() < 2 {
        // rank one: a set of at least three points
        return c.vertex_count() >= 3;
    }
    if !c.is_flag_complex() || !c.one_skeleton_connected() {
        return false;
    }
    (0..c.vertex_count()).all(|v| match c.link(&Simplex::from([v])) {
        Ok(link) => {
            link.complex.rank() + 1 == tc.type_count()
                && link.complex.is_chamber_complex()
                && link.complex.thin_panel().is_none()
        }
        Err(_) => false,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rank2Kind {
    GeneralizedNGon(usize),
    NotThick,
    NotGeneralizedPolygon,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rank2Classification {
    pub kind: Rank2Kind,
    /// `None` for a forest.
    pub girth: Option<usize>,
    /// `None` for a disconnected graph.
    pub diameter: Option<usize>,
}

fn bfs(adj: &[Vec<usize>], start: usize) -> (Vec<Option<usize>>, Vec<usize>) {
    let mut dist = vec![None; adj.len()];
    let mut parent = vec![usize::MAX; adj.len()];
    dist[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if dist[w].is_none() {
                dist[w] = Some(dist[u].unwrap() + 1);
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    (dist, parent)
}

/// Girth and diameter of a graph given by adjacency lists.
pub fn girth_and_diameter(adj: &[Vec<usize>]) -> (Option<usize>, Option<usize>) {
    let mut girth: Option<usize> = None;
    let mut diameter = Some(0);
    for s in 0..adj.len() {
        let (dist, parent) = bfs(adj, s);
        for u in 0..adj.len() {
            match dist[u] {
                None => diameter = None,
                Some(d) => diameter = diameter.map(|x| x.max(d)),
            }
            let Some(du) = dist[u] else { continue };
            for &w in &adj[u] {
                if parent[u] == w || parent[w] == u {
                    continue;
                }
                if let Some(dw) = dist[w] {
                    let cycle = du + dw + 1;
                    girth = Some(girth.map_or(cycle, |g| g.min(cycle)));
                }
            }
        }
    }
    (girth, diameter)
}

fn adjacency_lists(c: &Complex) -> Vec<Vec<usize>> {
    (0..c.vertex_count()).map(|v| c.neighbors(v).to_vec()).collect()
}

pub fn classify_rank2(tc: &TypedComplex) -> Result<Rank2Classification> {
    let c = tc.complex();
    if c.rank() != 2 || tc.type_count() != 2 {
        return Err(GeomError::WrongRank { expected: 2, found: c.rank() });
    }
    let adj = adjacency_lists(c);
    let (girth, diameter) = girth_and_diameter(&adj);
    let thick = adj.iter().all(|n| n.len() >= 3);
    let kind = if !thick {
        Rank2Kind::NotThick
    } else {
        match (girth, diameter) {
            (Some(g), Some(d)) if g == 2 * d && (2..=MAX_GONALITY).contains(&d) => Rank2Kind::GeneralizedNGon(d),
            _ => Rank2Kind::NotGeneralizedPolygon,
        }
    };
    Ok(Rank2Classification { kind, girth, diameter })
}

/// The Coxeter matrix read off from all corank-2 links, labeled by the type list.
pub fn diagram_of(tc: &TypedComplex) -> Result<CoxeterMatrix> {
    let n = tc.type_count();
    let mut entries = vec![vec![2u32; n]; n];
    for (i, row) in entries.iter_mut().enumerate() {
        row[i] = 1;
    }
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    let c = tc.complex();
    if c.rank() >= 2 {
        for alpha in c.simplices().iter().filter(|s| c.corank(s) == 2) {
            let (link, _) = tc.link(alpha)?;
            let class = classify_rank2(&link)?;
            let Rank2Kind::GeneralizedNGon(m) = class.kind else {
                return Err(GeomError::NotAPolygon(alpha.clone()));
            };
            let pair = mask_members(tc.cotype_mask(alpha));
            let (i, j) = (pair[0], pair[1]);
            match seen.get(&(i, j)) {
                Some(&prev) if prev != m => return Err(GeomError::InconsistentGonality(i, j, prev, m)),
                _ => {
                    seen.insert((i, j), m);
                }
            }
            entries[i][j] = m as u32;
            entries[j][i] = m as u32;
        }
    }
    CoxeterMatrix::new(tc.types().to_vec(), entries)
}

/// Type indices `[point, line, plane]` forced by a C3 diagram: the line is the
/// middle node, the plane sits on the 4-edge.
pub fn detect_c3_roles(m: &CoxeterMatrix) -> Option<[usize; 3]> {
    if m.rank() != 3 || m.name().as_deref() != Some("C3") {
        return None;
    }
    let line = (0..3).find(|&i| (0..3).filter(|&j| j != i && m.get(i, j) >= 3).count() == 2)?;
    let plane = (0..3).find(|&j| j != line && m.get(line, j) == 4)?;
    let point = (0..3).find(|&j| j != line && j != plane)?;
    Some([point, line, plane])
}

fn check_c3_roles(tc: &TypedComplex, roles: [usize; 3]) -> Result<()> {
    let m = diagram_of(tc)?;
    let detected = detect_c3_roles(&m).ok_or(GeomError::WrongDiagram)?;
    if detected != roles {
        return Err(GeomError::RoleMismatch { declared: roles, detected });
    }
    Ok(())
}

/// Two distinct lines sharing two distinct points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DigonWitness {
    pub lines: [VertexId; 2],
    pub points: [VertexId; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildingVerdict {
    pub is_building: bool,
    pub witness: Option<DigonWitness>,
}

/// A C3 geometry is a building iff no two distinct lines share two points.
/// `roles` gives the type indices of points, lines and planes.
pub fn c3_building_test(tc: &TypedComplex, roles: [usize; 3]) -> Result<BuildingVerdict> {
    check_c3_roles(tc, roles)?;
    Ok(match find_digon(tc, roles[0], roles[1]) {
        Some(w) => BuildingVerdict { is_building: false, witness: Some(w) },
        None => BuildingVerdict { is_building: true, witness: None },
    })
}

fn find_digon(tc: &TypedComplex, point: usize, line: usize) -> Option<DigonWitness> {
    let c = tc.complex();
    let mut first_line: HashMap<(VertexId, VertexId), VertexId> = HashMap::new();
    for l in tc.vertices_of_type(line) {
        let pts: Vec<VertexId> = c.neighbors(l).iter().copied().filter(|&v| tc.type_of(v) == point).collect();
        for (a, &p) in pts.iter().enumerate() {
            for &q in &pts[a + 1..] {
                if let Some(&l0) = first_line.get(&(p, q)) {
                    return Some(DigonWitness { lines: [l0, l], points: [p, q] });
                }
                first_line.insert((p, q), l);
            }
        }
    }
    None
}

/// A point and a plane that are not incident, if any.
pub fn non_incident_point_plane(tc: &TypedComplex, point: usize, plane: usize) -> Result<Option<(VertexId, VertexId)>> {
    if tc.type_count() != 3 || tc.complex().rank() != 3 {
        return Err(GeomError::WrongRank { expected: 3, found: tc.complex().rank() });
    }
    let c = tc.complex();
    for p in tc.vertices_of_type(point) {
        for q in tc.vertices_of_type(plane) {
            if !c.is_adjacent(p, q) {
                return Ok(Some((p, q)));
            }
        }
    }
    Ok(None)
}

/// Every point incident with every plane.
pub fn is_flat(tc: &TypedComplex, point: usize, plane: usize) -> Result<bool> {
    Ok(non_incident_point_plane(tc, point, plane)?.is_none())
}

/// Splits a geometry along the connected components of its diagram. The
/// factors' type lists follow the component order, and their join is checked
/// to reproduce `tc`.
pub fn join_decompose(tc: &TypedComplex, m: &CoxeterMatrix) -> Result<Vec<TypedComplex>> {
    if !is_geometry(tc).is_geometry() {
        return Err(GeomError::NotAGeometry);
    }
    if m.rank() != tc.type_count() {
        return Err(GeomError::TypeSetMismatch);
    }
    let comps = m.components();
    if comps.len() == 1 {
        return Ok(vec![tc.clone()]);
    }
    let c = tc.complex();
    let mut factors = Vec::new();
    let mut original: Vec<VertexId> = Vec::new();
    for comp in &comps {
        let mask = comp.iter().fold(0u32, |acc, &t| acc | 1 << t);
        let verts: Vec<VertexId> = (0..c.vertex_count()).filter(|&v| mask >> tc.type_of(v) & 1 == 1).collect();
        let index: HashMap<VertexId, VertexId> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut faces: Vec<Simplex> =
            c.maximal_simplices().iter().map(|s| tc.face_of_type(s, mask).map(|v| index[&v])).collect();
        faces.sort();
        faces.dedup();
        let complex = Complex::from_simplices(verts.len(), faces)?;
        let types = comp.iter().map(|&t| tc.types()[t].clone()).collect();
        let local: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let vertex_type = verts.iter().map(|&v| local[&tc.type_of(v)]).collect();
        factors.push(TypedComplex::new(complex, types, vertex_type)?);
        original.extend(verts);
    }
    let mut joined = factors[0].clone();
    for f in &factors[1..] {
        joined = TypedComplex::join(&joined, f)?;
    }
    let mut rebuilt: Vec<Simplex> =
        joined.complex().maximal_simplices().iter().map(|s| s.map(|v| original[v])).collect();
    rebuilt.sort();
    if rebuilt != c.maximal_simplices() {
        return Err(GeomError::NotAJoin);
    }
    Ok(factors)
}

/// Whether the type of the BFS-minimal gallery from `a` to `b` is a reduced
/// word; the table must be enumerated for the diagram of `tc`.
pub fn minimal_gallery_is_reduced(tc: &TypedComplex, table: &CoxeterGroupTable, a: &Simplex, b: &Simplex) -> Result<bool> {
    let gallery = Gallery::new(tc.complex().minimal_gallery(a, b)?);
    let word = tc.gallery_type(&gallery)?;
    table.is_reduced(&word)
}
