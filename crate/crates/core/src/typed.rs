//! Complexes with a type function: the carrier for geometries.

use std::collections::{BTreeMap, HashMap};

use crate::complex::{Complex, Simplex, VertexId};
use crate::error::{GeomError, Result};

/// Bit `i` set means type `i` is present.
pub type TypeMask = u32;

pub fn mask_of(types: impl IntoIterator<Item = usize>) -> TypeMask {
    types.into_iter().fold(0, |m, t| m | 1 << t)
}

pub fn mask_members(mask: TypeMask) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

/// A sequence of chambers, consecutive ones sharing at least a panel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gallery {
    pub chambers: Vec<Simplex>,
}

impl Gallery {
    pub fn new(chambers: Vec<Simplex>) -> Self {
        Gallery { chambers }
    }

    pub fn len(&self) -> usize {
        self.chambers.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.chambers.len() <= 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypedComplex {
    complex: Complex,
    types: Vec<String>,
    vertex_type: Vec<usize>,
}

impl TypedComplex {
    pub fn new(complex: Complex, types: Vec<String>, vertex_type: Vec<usize>) -> Result<Self> {
        for (i, t) in types.iter().enumerate() {
            if types[..i].contains(t) {
                return Err(GeomError::DuplicateTypeLabel(t.clone()));
            }
        }
        if types.len() > 32 {
            return Err(GeomError::UnsupportedParameters("more than 32 types".into()));
        }
        if vertex_type.len() != complex.vertex_count() {
            return Err(GeomError::DegreeMismatch(vertex_type.len(), complex.vertex_count()));
        }
        if let Some(&t) = vertex_type.iter().find(|&&t| t >= types.len()) {
            return Err(GeomError::UnknownTypeLabel(format!("#{t}")));
        }
        for m in complex.maximal_simplices() {
            let mask = mask_of(m.iter().map(|v| vertex_type[v]));
            if mask.count_ones() as usize != m.len() {
                return Err(GeomError::TypeNotInjective(m.clone()));
            }
        }
        Ok(TypedComplex { complex, types, vertex_type })
    }

    pub fn from_labels(complex: Complex, types: &[&str], vertex_type: Vec<usize>) -> Result<Self> {
        TypedComplex::new(complex, types.iter().map(|s| s.to_string()).collect(), vertex_type)
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn types(&self) -> &[String] {
        &self.types
    }

    pub fn type_count(&self) -> usize {
        self.types.len()
    }

    pub fn full_mask(&self) -> TypeMask {
        (1u32 << self.types.len()).wrapping_sub(1)
    }

    pub fn type_of(&self, v: VertexId) -> usize {
        self.vertex_type[v]
    }

    pub fn vertex_types(&self) -> &[usize] {
        &self.vertex_type
    }

    pub fn type_index(&self, label: &str) -> Result<usize> {
        self.types
            .iter()
            .position(|t| t == label)
            .ok_or_else(|| GeomError::UnknownTypeLabel(label.to_string()))
    }

    pub fn type_mask(&self, s: &Simplex) -> TypeMask {
        mask_of(s.iter().map(|v| self.vertex_type[v]))
    }

    pub fn cotype_mask(&self, s: &Simplex) -> TypeMask {
        self.full_mask() & !self.type_mask(s)
    }

    pub fn vertices_of_type(&self, t: usize) -> Vec<VertexId> {
        (0..self.vertex_type.len()).filter(|&v| self.vertex_type[v] == t).collect()
    }

    /// Vertex counts per type, in declared type order.
    pub fn type_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.types.len()];
        for &t in &self.vertex_type {
            counts[t] += 1;
        }
        counts
    }

    /// The face of `s` consisting of its vertices whose type lies in `mask`.
    pub fn face_of_type(&self, s: &Simplex, mask: TypeMask) -> Simplex {
        Simplex::new(s.iter().filter(|&v| mask >> self.vertex_type[v] & 1 == 1))
    }

    /// The vertex of `s` of type `t`, if present.
    pub fn vertex_of_type(&self, s: &Simplex, t: usize) -> Option<VertexId> {
        s.iter().find(|&v| self.vertex_type[v] == t)
    }

    /// Type of a nonstammering gallery: the cotype of each consecutive intersection.
    pub fn gallery_type(&self, g: &Gallery) -> Result<Vec<usize>> {
        for c in &g.chambers {
            if self.complex.chamber_index(c).is_none() {
                return Err(GeomError::NotAChamber(c.clone()));
            }
        }
        let mut out = Vec::with_capacity(g.len());
        for (k, w) in g.chambers.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(GeomError::StammeringGallery(k + 1));
            }
            let shared = w[0].intersection(&w[1]);
            if self.complex.corank(&shared) != 1 {
                return Err(GeomError::NotAGallery(k + 1));
            }
            let cotype = self.cotype_mask(&shared);
            out.push(cotype.trailing_zeros() as usize);
        }
        Ok(out)
    }

    /// All simplices of type exactly `labels`.
    pub fn flag_variety(&self, labels: &[&str]) -> Result<Vec<Simplex>> {
        let mut mask = 0;
        for l in labels {
            mask |= 1 << self.type_index(l)?;
        }
        Ok(self.flag_variety_mask(mask))
    }

    pub fn flag_variety_mask(&self, mask: TypeMask) -> Vec<Simplex> {
        self.complex
            .simplices()
            .iter()
            .filter(|s| self.type_mask(s) == mask)
            .cloned()
            .collect()
    }

    /// Link of `alpha` as a typed complex over the cotype of `alpha`, with the
    /// map from link vertices back to this complex.
    pub fn link(&self, alpha: &Simplex) -> Result<(TypedComplex, Vec<VertexId>)> {
        let link = self.complex.link(alpha)?;
        let cotype = self.cotype_mask(alpha);
        let kept: Vec<usize> = (0..self.types.len()).filter(|t| cotype >> t & 1 == 1).collect();
        let new_index: HashMap<usize, usize> = kept.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let types = kept.iter().map(|&t| self.types[t].clone()).collect();
        let vertex_type = link.original.iter().map(|&v| new_index[&self.vertex_type[v]]).collect();
        let tc = TypedComplex { complex: link.complex, types, vertex_type };
        Ok((tc, link.original))
    }

    /// Same complex with the type list reordered: new type `i` is old type `order[i]`.
    pub fn permute_types(&self, order: &[usize]) -> Result<TypedComplex> {
        let mut inverse = vec![usize::MAX; self.types.len()];
        for (i, &t) in order.iter().enumerate() {
            inverse[t] = i;
        }
        if order.len() != self.types.len() || inverse.contains(&usize::MAX) {
            return Err(GeomError::TypeSetMismatch);
        }
        let types = order.iter().map(|&t| self.types[t].clone()).collect();
        let vertex_type = self.vertex_type.iter().map(|&t| inverse[t]).collect();
        Ok(TypedComplex { complex: self.complex.clone(), types, vertex_type })
    }

    /// Simplicial join; the type list of `b` follows that of `a`.
    pub fn join(a: &TypedComplex, b: &TypedComplex) -> Result<TypedComplex> {
        let complex = Complex::join(&a.complex, &b.complex);
        let types = a.types.iter().chain(b.types.iter()).cloned().collect();
        let off = a.types.len();
        let vertex_type =
            a.vertex_type.iter().copied().chain(b.vertex_type.iter().map(|t| t + off)).collect();
        TypedComplex::new(complex, types, vertex_type)
    }

    /// Number of simplices of each type mask.
    pub fn flag_variety_sizes(&self) -> BTreeMap<TypeMask, usize> {
        let mut out = BTreeMap::new();
        for s in self.complex.simplices() {
            *out.entry(self.type_mask(s)).or_insert(0) += 1;
        }
        out
    }
}
