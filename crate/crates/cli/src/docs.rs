//! Interchange documents. Every document is UTF-8 JSON with sorted keys, a
//! `schema_version` field and a trailing newline.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use geomkit::action::GeometryAction;
use geomkit::coset::{SimpleHomomorphism, SubgroupComplex};
use geomkit::{mask_of, Complex, CoxeterMatrix, PermGroup, Permutation, TypedComplex};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexEntry {
    pub id: usize,
    #[serde(rename = "type")]
    pub ty: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramDocument {
    pub labels: Vec<String>,
    pub entries: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDocument {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometryDocument {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub types: Vec<String>,
    pub vertices: Vec<VertexEntry>,
    pub maximal_simplices: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagram: Option<DiagramDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    /// A group acting on the vertices, making the document an action bundle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupEntry {
    pub types: Vec<String>,
    pub generators: Vec<Vec<usize>>,
}

/// Subgroups for every nonempty type set, or only for single types (the
/// others are then intersections).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupComplexDocument {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub types: Vec<String>,
    pub subgroups: Vec<SubgroupEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImagePair {
    pub source: Vec<usize>,
    pub image: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomomorphismEntry {
    pub types: Vec<String>,
    pub pairs: Vec<ImagePair>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomomorphismDocument {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub target: GroupDocument,
    pub maps: Vec<HomomorphismEntry>,
}

/// A geometry given inline or as a path relative to the referring document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GeometryRef {
    Path(String),
    Inline(Box<GeometryDocument>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringDocument {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub source: GeometryRef,
    pub target: GeometryRef,
    pub vertex_map: Vec<usize>,
}

pub fn to_canonical_string<T: Serialize>(doc: &T) -> Result<String, CliError> {
    // serde_json maps are ordered, so going through Value sorts every key
    let value = serde_json::to_value(doc)?;
    let mut s = serde_json::to_string_pretty(&value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_document<T: Serialize>(path: &Path, doc: &T) -> Result<(), CliError> {
    fs::write(path, to_canonical_string(doc)?)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub fn read_document<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    if let Some(v) = value.get("schema_version") {
        if v.as_u64() != Some(SCHEMA_VERSION as u64) {
            return Err(CliError::Parse(format!("{}: unsupported schema_version {v}", path.display())));
        }
    }
    serde_json::from_value(value).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn invalid(what: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Parse(format!("invalid {what}: {e}"))
}

fn permutation(images: &[usize], degree: usize) -> Result<Permutation, CliError> {
    if images.len() != degree {
        return Err(invalid("permutation", format!("{} images for degree {degree}", images.len())));
    }
    Permutation::from_images(images.to_vec()).map_err(|e| invalid("permutation", e))
}

impl GroupDocument {
    pub fn from_group(group: &PermGroup, name: Option<String>) -> Self {
        GroupDocument {
            schema_version: SCHEMA_VERSION,
            degree: group.degree(),
            generators: group.generators().iter().map(|g| g.images().to_vec()).collect(),
            name,
        }
    }

    pub fn to_group(&self) -> Result<PermGroup, CliError> {
        let gens = self.generators.iter().map(|g| permutation(g, self.degree)).collect::<Result<Vec<_>, _>>()?;
        PermGroup::new(self.degree, gens).map_err(|e| invalid("group", e))
    }
}

impl GeometryDocument {
    pub fn from_typed(tc: &TypedComplex, provenance: Option<String>) -> Self {
        let c = tc.complex();
        GeometryDocument {
            schema_version: SCHEMA_VERSION,
            types: tc.types().to_vec(),
            vertices: (0..c.vertex_count())
                .map(|v| VertexEntry { id: v, ty: tc.types()[tc.type_of(v)].clone() })
                .collect(),
            maximal_simplices: c.maximal_simplices().iter().map(|s| s.vertices().to_vec()).collect(),
            diagram: None,
            provenance,
            group: None,
        }
    }

    pub fn with_action(mut self, action: Option<&GeometryAction>, name: Option<String>) -> Self {
        self.group = action.map(|a| GroupDocument::from_group(a.group(), name));
        self
    }

    pub fn with_diagram(mut self, m: Option<&CoxeterMatrix>) -> Self {
        self.diagram = m.map(|m| DiagramDocument { labels: m.labels().to_vec(), entries: m.entries().to_vec() });
        self
    }

    pub fn to_typed(&self) -> Result<TypedComplex, CliError> {
        let n = self.vertices.len();
        let mut vertex_type = vec![usize::MAX; n];
        for entry in &self.vertices {
            if entry.id >= n || vertex_type[entry.id] != usize::MAX {
                return Err(invalid("geometry", format!("vertex ids must be dense from 0, found {}", entry.id)));
            }
            vertex_type[entry.id] = self
                .types
                .iter()
                .position(|t| *t == entry.ty)
                .ok_or_else(|| invalid("geometry", format!("unknown type {:?}", entry.ty)))?;
        }
        let complex = Complex::new(n, self.maximal_simplices.clone()).map_err(|e| invalid("geometry", e))?;
        TypedComplex::new(complex, self.types.clone(), vertex_type).map_err(|e| invalid("geometry", e))
    }

    /// The geometry with the bundled group acting on it.
    pub fn to_action(&self) -> Result<GeometryAction, CliError> {
        let tc = self.to_typed()?;
        let group = self.group.as_ref().ok_or_else(|| invalid("action bundle", "no group"))?.to_group()?;
        GeometryAction::new(group, tc).map_err(|e| invalid("action bundle", e))
    }
}

fn mask_of_labels(types: &[String], labels: &[String]) -> Result<u32, CliError> {
    let idx = labels
        .iter()
        .map(|l| types.iter().position(|t| t == l).ok_or_else(|| invalid("type set", format!("unknown type {l:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(mask_of(idx))
}

fn labels_of_mask(types: &[String], mask: u32) -> Vec<String> {
    geomkit::mask_members(mask).into_iter().map(|i| types[i].clone()).collect()
}

impl SubgroupComplexDocument {
    pub fn from_complex(sc: &SubgroupComplex) -> Self {
        let types = sc.types().to_vec();
        let subgroups = sc
            .groups()
            .iter()
            .map(|(&mask, g)| SubgroupEntry {
                types: labels_of_mask(&types, mask),
                generators: g.generators().iter().map(|p| p.images().to_vec()).collect(),
            })
            .collect();
        SubgroupComplexDocument { schema_version: SCHEMA_VERSION, types, subgroups }
    }

    pub fn to_complex(&self, ambient: PermGroup, cap: usize) -> Result<SubgroupComplex, CliError> {
        let n = ambient.degree();
        let t = self.types.len();
        let mut groups: BTreeMap<u32, PermGroup> = BTreeMap::new();
        for entry in &self.subgroups {
            let mask = mask_of_labels(&self.types, &entry.types)?;
            if mask == 0 || groups.contains_key(&mask) {
                return Err(invalid("subgroup complex", format!("type set {:?} empty or repeated", entry.types)));
            }
            let gens = entry.generators.iter().map(|g| permutation(g, n)).collect::<Result<Vec<_>, _>>()?;
            groups.insert(mask, PermGroup::generated_by(n, gens));
        }
        let singletons_only = groups.keys().all(|m| m.count_ones() == 1);
        if singletons_only && groups.len() == t && t > 1 {
            let vertex_groups = (0..t).map(|i| groups[&(1 << i)].clone()).collect();
            return Ok(SubgroupComplex::from_vertex_groups(ambient, self.types.clone(), vertex_groups, cap)?);
        }
        Ok(SubgroupComplex::new(ambient, self.types.clone(), groups)?)
    }
}

impl HomomorphismDocument {
    pub fn from_homomorphism(sc: &SubgroupComplex, psi: &SimpleHomomorphism) -> Self {
        let maps = psi
            .maps
            .iter()
            .map(|(&mask, pairs)| HomomorphismEntry {
                types: labels_of_mask(sc.types(), mask),
                pairs: pairs
                    .iter()
                    .map(|(x, h)| ImagePair { source: x.images().to_vec(), image: h.images().to_vec() })
                    .collect(),
            })
            .collect();
        HomomorphismDocument {
            schema_version: SCHEMA_VERSION,
            target: GroupDocument::from_group(&psi.target, None),
            maps,
        }
    }

    pub fn to_homomorphism(&self, sc: &SubgroupComplex) -> Result<SimpleHomomorphism, CliError> {
        let target = self.target.to_group()?;
        let n = sc.ambient().degree();
        let mut maps = BTreeMap::new();
        for entry in &self.maps {
            let mask = mask_of_labels(sc.types(), &entry.types)?;
            let pairs = entry
                .pairs
                .iter()
                .map(|p| Ok((permutation(&p.source, n)?, permutation(&p.image, target.degree())?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            maps.insert(mask, pairs);
        }
        Ok(SimpleHomomorphism { target, maps })
    }
}

impl GeometryRef {
    pub fn resolve(&self, base: &Path) -> Result<GeometryDocument, CliError> {
        match self {
            GeometryRef::Inline(doc) => Ok((**doc).clone()),
            GeometryRef::Path(p) => {
                let path = PathBuf::from(p);
                let path = if path.is_absolute() { path } else { base.join(path) };
                read_document(&path)
            }
        }
    }
}
