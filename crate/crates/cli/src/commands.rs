use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use geomkit::action::{bounded_generation_check, residue_longest_word, GeometryAction};
use geomkit::catalog::{
    complete_bipartite_digon, fano_structure_orbits, neumaier_with_orbit, projective_space, symplectic_polar_space,
    CatalogGeometry,
};
use geomkit::coset::{basic_coset_construction, coset_geometry, stabilizer_complex};
use geomkit::covering::{quotient_by_free_action, CoveringMap, SimplicialMap};
use geomkit::iso::find_isomorphism;
use geomkit::verify::{c3_building_test, diagram_of, geometry_by_local_recognition, is_geometry, non_incident_point_plane};
use geomkit::{Simplex, TypedComplex, DEFAULT_CAP};
use serde_json::{json, Value};

use crate::docs::{
    read_document, write_document, CoveringDocument, GeometryDocument, GeometryRef, GroupDocument,
    HomomorphismDocument, SubgroupComplexDocument, SCHEMA_VERSION,
};
use crate::error::CliError;
use crate::report::Report;

#[derive(Debug, Parser)]
#[command(name = "geomkit", version, about = "Finite incidence geometries: catalog, verification, coset constructions and coverings")]
pub struct Cli {
    /// Print reports as JSON documents.
    #[arg(long, global = true)]
    pub json: bool,
    /// Cap on enumerated group and coset sizes.
    #[arg(long, global = true, env = "GEOMKIT_CAP", default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a catalog geometry: neumaier, pg, symplectic or digon.
    Catalog(CatalogArgs),
    /// Run verification checks on a geometry document.
    Verify(VerifyArgs),
    /// Build the coset geometry of a group and a subgroup complex.
    Coset(CosetArgs),
    /// Run the basic coset construction for a simple homomorphism.
    BasicCoset(BasicCosetArgs),
    /// Check that a vertex map is a k-covering.
    Covering(CoveringArgs),
    /// Compute the deck transformation group of a covering.
    Deck(DeckArgs),
    /// Quotient a geometry by a group acting freely on chambers.
    Quotient(QuotientArgs),
    /// Word-length bound for a simplex stabilizer over panel stabilizers.
    BoundedGen(BoundedGenArgs),
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    pub name: String,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Which of the two Fano-structure orbits supplies the Neumaier planes.
    #[arg(long, default_value_t = 0)]
    pub orbit: usize,
    /// Geometry document with the group bundled; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub group_out: Option<PathBuf>,
    /// Stabilizers of the faces of the first chamber, as a subgroup complex.
    #[arg(long)]
    pub stabilizers_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub geometry: PathBuf,
    #[arg(long)]
    pub diagram: bool,
    #[arg(long)]
    pub building: bool,
    #[arg(long)]
    pub flat: bool,
    #[arg(long)]
    pub local_recognition: bool,
    /// C3 roles as comma separated type labels: point,line,plane.
    #[arg(long)]
    pub roles: Option<String>,
}

#[derive(Debug, Args)]
pub struct CosetArgs {
    #[arg(long)]
    pub group: PathBuf,
    #[arg(long)]
    pub complex: PathBuf,
    /// Geometry to compare the result with.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BasicCosetArgs {
    #[arg(long)]
    pub group: PathBuf,
    #[arg(long)]
    pub complex: PathBuf,
    #[arg(long)]
    pub psi: PathBuf,
    /// Covering document for the projection of the lifted geometry.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoveringArgs {
    pub map: PathBuf,
    #[arg(long)]
    pub k: usize,
}

#[derive(Debug, Args)]
pub struct DeckArgs {
    pub map: PathBuf,
}

#[derive(Debug, Args)]
pub struct QuotientArgs {
    #[arg(long)]
    pub geometry: PathBuf,
    #[arg(long)]
    pub group: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Covering document for the orbit map.
    #[arg(long)]
    pub map_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundedGenArgs {
    /// Geometry document with a bundled group.
    pub bundle: PathBuf,
    /// Vertex ids of beta as a JSON array.
    #[arg(long)]
    pub beta: String,
    /// Chamber containing beta; the first such chamber by default.
    #[arg(long)]
    pub chamber: Option<String>,
    /// Word bound; the longest word of the residue by default.
    #[arg(long)]
    pub s: Option<usize>,
}

/// A finished command: its report and whether every checked claim held.
pub struct Outcome {
    pub report: Report,
    pub ok: bool,
    /// The report goes to stderr because stdout carries a document.
    pub report_to_stderr: bool,
}

impl Outcome {
    fn pass(report: Report) -> Self {
        Outcome { report, ok: true, report_to_stderr: false }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Catalog(a) => catalog(a, out),
        Command::Verify(a) => verify(a),
        Command::Coset(a) => coset(a, cli.cap, err),
        Command::BasicCoset(a) => basic_coset(a, cli.cap),
        Command::Covering(a) => covering(a),
        Command::Deck(a) => deck(a),
        Command::Quotient(a) => quotient(a),
        Command::BoundedGen(a) => bounded_gen(a, cli.cap),
    }
}

fn simplex_json(s: &Simplex) -> Value {
    json!(s.vertices())
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn build_catalog(a: &CatalogArgs) -> Result<CatalogGeometry, CliError> {
    Ok(match a.name.as_str() {
        "neumaier" => neumaier_with_orbit(a.orbit)?,
        "pg" => projective_space(a.n.unwrap_or(2), a.q.unwrap_or(2))?,
        "symplectic" => symplectic_polar_space(a.dim.unwrap_or(6), a.q.unwrap_or(2))?,
        "digon" => complete_bipartite_digon(a.m.unwrap_or(3), a.n.unwrap_or(3))?,
        other => return Err(CliError::UnknownCatalogName(other.to_string())),
    })
}

fn catalog(a: &CatalogArgs, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let cat = build_catalog(a)?;
    let doc = GeometryDocument::from_typed(&cat.geometry, Some(cat.provenance.clone()))
        .with_action(cat.action.as_ref(), None);
    let mut r = Report::new("catalog");
    r.set("provenance", cat.provenance.clone());
    r.set("types", json!(cat.geometry.types()));
    r.set("type_counts", json!(cat.geometry.type_counts()));
    r.set("vertices", cat.geometry.complex().vertex_count());
    r.set("chambers", cat.geometry.complex().chambers().len());
    if a.name == "neumaier" {
        let orbits = fano_structure_orbits();
        r.set("fano_structures", orbits.iter().map(Vec::len).sum::<usize>());
        r.set("fano_orbit_sizes", json!(orbits.iter().map(Vec::len).collect::<Vec<_>>()));
    }
    if let Some(action) = &cat.action {
        r.set("group_order", action.group().order().to_string());
    }
    match &a.out {
        Some(path) => {
            write_document(path, &doc)?;
            r.set("out", path.display().to_string());
        }
        None => {
            out.write_all(crate::docs::to_canonical_string(&doc)?.as_bytes())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;
        }
    }
    if let Some(path) = &a.group_out {
        let action = cat.action.as_ref().ok_or_else(|| CliError::Parse("catalog object has no group".into()))?;
        write_document(path, &GroupDocument::from_group(action.group(), Some(cat.provenance.clone())))?;
    }
    if let Some(path) = &a.stabilizers_out {
        let action = cat.action.as_ref().ok_or_else(|| CliError::Parse("catalog object has no group".into()))?;
        let gamma = cat.geometry.complex().chambers()[0].clone();
        let sc = stabilizer_complex(action, &gamma)?;
        write_document(path, &SubgroupComplexDocument::from_complex(&sc))?;
        r.set("stabilizer_chamber", simplex_json(&gamma));
    }
    Ok(Outcome { report: r, ok: true, report_to_stderr: a.out.is_none() })
}

fn parse_roles(tc: &TypedComplex, roles: Option<&str>) -> Result<[usize; 3], CliError> {
    let Some(spec) = roles else {
        return Ok([0, 1, 2]);
    };
    let idx = spec
        .split(',')
        .map(|l| tc.type_index(l.trim()).map_err(|e| CliError::Parse(format!("--roles: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    idx.try_into().map_err(|_| CliError::Parse("--roles needs three type labels".into()))
}

fn verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let doc: GeometryDocument = read_document(&a.geometry)?;
    let tc = doc.to_typed()?;
    let c = tc.complex();
    let mut r = Report::new("verify");
    let mut ok = true;
    r.set("types", json!(tc.types()));
    r.set("type_counts", json!(tc.type_counts()));
    r.set("chambers", c.chambers().len());
    let any_flag = a.diagram || a.building || a.flat || a.local_recognition;
    if !any_flag {
        let g = is_geometry(&tc);
        r.set("geometry", g.is_geometry());
        for (key, w) in [
            ("impure_simplex", &g.impure_simplex),
            ("missing_clique", &g.missing_clique),
            ("thin_panel", &g.thin_panel),
            ("disconnected_link", &g.disconnected_link),
        ] {
            if let Some(s) = w {
                r.set(key, simplex_json(s));
            }
        }
        ok &= g.is_geometry();
    }
    if a.diagram {
        match diagram_of(&tc) {
            Ok(m) => {
                r.set("diagram", m.name().unwrap_or_else(|| "unnamed".into()));
                r.set("diagram_entries", json!(m.entries()));
                if let Some(declared) = &doc.diagram {
                    let matches = declared.entries.as_slice() == m.entries();
                    r.set("diagram_matches_declared", matches);
                    ok &= matches;
                }
            }
            Err(e) => {
                r.set("diagram", format!("failed: {e}"));
                ok = false;
            }
        }
    }
    if a.local_recognition {
        let local = geometry_by_local_recognition(&tc);
        r.set("local_recognition", local);
        ok &= local;
    }
    if a.building || a.flat {
        let roles = parse_roles(&tc, a.roles.as_deref())?;
        r.set("roles", json!(roles.map(|i| tc.types()[i].clone())));
        if a.flat {
            let witness = non_incident_point_plane(&tc, roles[0], roles[2])?;
            r.set("flat", witness.is_none());
            if let Some((p, q)) = witness {
                r.set("flat_witness", json!({ "point": p, "plane": q }));
            }
            ok &= witness.is_none();
        }
        if a.building {
            let verdict = c3_building_test(&tc, roles)?;
            r.set("building", verdict.is_building);
            if let Some(w) = verdict.witness {
                r.set("building_witness", json!({ "lines": w.lines, "points": w.points }));
            }
            ok &= verdict.is_building;
        }
    }
    if doc.group.is_some() {
        let action = doc.to_action()?;
        let report = action.verify();
        r.set("group_order", action.group().order().to_string());
        r.set("action_valid", report.is_valid());
        r.set("chamber_transitive", report.chamber_transitive);
        if let Some(gamma) = c.chambers().first() {
            r.set("chamber_stabilizer_order", action.stabilizer(gamma).order().to_string());
        }
        ok &= report.is_valid();
    }
    Ok(Outcome { report: r, ok, report_to_stderr: false })
}

fn coset(a: &CosetArgs, cap: usize, err: &mut dyn Write) -> Result<Outcome, CliError> {
    let group = read_document::<GroupDocument>(&a.group)?.to_group()?;
    let sc = read_document::<SubgroupComplexDocument>(&a.complex)?.to_complex(group, cap)?;
    let res = coset_geometry(&sc)?;
    let tc = &res.geometry;
    let mut r = Report::new("coset");
    r.set("vertices", tc.complex().vertex_count());
    r.set("type_counts", json!(tc.type_counts()));
    r.set("chambers", tc.complex().chambers().len());
    r.set("thick", res.is_thick);
    if !res.is_thick {
        let _ = writeln!(err, "warning: coset geometry is not thick");
    }
    let cosets: Vec<Value> = res
        .vertex_cosets
        .iter()
        .enumerate()
        .map(|(v, (t, rep))| json!({ "vertex": v, "type": tc.types()[*t], "representative": rep.images() }))
        .collect();
    r.set("cosets", cosets);
    let mut ok = true;
    if let Some(path) = &a.reference {
        let reference = read_document::<GeometryDocument>(path)?.to_typed()?;
        let iso = find_isomorphism(tc, &reference);
        r.set("isomorphic", iso.is_some());
        if let Some(map) = iso {
            r.set("isomorphism", json!(map));
        }
        ok = r.get("isomorphic") == Some(&Value::Bool(true));
    }
    if let Some(path) = &a.out {
        let doc = GeometryDocument::from_typed(tc, Some("coset geometry".into())).with_action(Some(&res.action), None);
        write_document(path, &doc)?;
    }
    Ok(Outcome { report: r, ok, report_to_stderr: false })
}

fn basic_coset(a: &BasicCosetArgs, cap: usize) -> Result<Outcome, CliError> {
    let group = read_document::<GroupDocument>(&a.group)?.to_group()?;
    let sc = read_document::<SubgroupComplexDocument>(&a.complex)?.to_complex(group, cap)?;
    let psi = read_document::<HomomorphismDocument>(&a.psi)?.to_homomorphism(&sc)?;
    let bc = basic_coset_construction(&sc, &psi)?;
    let post = bc.postconditions(&psi)?;
    let mut r = Report::new("basic-coset");
    r.set("g_prime_order", bc.g_prime.order().to_string());
    r.set("f_order", post.f_order.to_string());
    r.set("lifted_chambers", bc.lifted.geometry.complex().chambers().len());
    r.set("base_chambers", bc.base.geometry.complex().chambers().len());
    r.set("covering_k", post.covering_k);
    r.set("f_meets_stabilizers_trivially", post.f_meets_stabilizers_trivially);
    r.set("stabilizers_split", post.stabilizers_split);
    r.set("first_projection_matches", post.first_projection_matches);
    r.set("f_acts_freely", post.f_acts_freely);
    r.set("quotient_isomorphic_to_base", post.quotient_isomorphic_to_base);
    r.set("postconditions_hold", post.all_hold());
    if let Some(path) = &a.out {
        let source = GeometryDocument::from_typed(&bc.lifted.geometry, Some("basic coset construction".into()))
            .with_action(Some(&bc.lifted.action), None);
        let target = GeometryDocument::from_typed(&bc.base.geometry, Some("coset geometry".into()))
            .with_action(Some(&bc.base.action), None);
        let doc = CoveringDocument {
            schema_version: SCHEMA_VERSION,
            source: GeometryRef::Inline(Box::new(source)),
            target: GeometryRef::Inline(Box::new(target)),
            vertex_map: bc.covering.vertex_map().to_vec(),
        };
        write_document(path, &doc)?;
    }
    Ok(Outcome { ok: post.all_hold(), report: r, report_to_stderr: false })
}

fn load_map(path: &Path) -> Result<SimplicialMap, CliError> {
    let doc: CoveringDocument = read_document(path)?;
    let base = base_dir(path);
    let source = doc.source.resolve(&base)?.to_typed()?;
    let target = doc.target.resolve(&base)?.to_typed()?;
    SimplicialMap::new(source, target, doc.vertex_map).map_err(|e| CliError::Parse(format!("covering map: {e}")))
}

fn covering(a: &CoveringArgs) -> Result<Outcome, CliError> {
    let map = load_map(&a.map)?;
    let report = map.verify()?;
    let mut r = Report::new("covering");
    r.set("simplicial", report.simplicial);
    r.set("regular", report.regular);
    r.set("type_preserving", report.type_preserving);
    r.set("vertex_surjective", report.vertex_surjective);
    r.set("simplex_surjective", report.simplex_surjective);
    if let Some(f) = &report.failure {
        r.set("failure", f.clone());
    }
    r.set("max_k", json!(report.max_k));
    if let Some(s) = &report.failing_simplex {
        r.set("failing_simplex", simplex_json(s));
    }
    r.set("requested_k", a.k);
    let ok = report.is_k_covering(a.k);
    r.set("k_covering", ok);
    Ok(Outcome { report: r, ok, report_to_stderr: false })
}

fn deck(a: &DeckArgs) -> Result<Outcome, CliError> {
    let map = CoveringMap::verify(load_map(&a.map)?)?;
    let deck = map.deck_transformations()?;
    let mut r = Report::new("deck");
    r.set("deck_order", deck.order().to_string());
    r.set("generators", json!(deck.generators().iter().map(|g| g.images().to_vec()).collect::<Vec<_>>()));
    Ok(Outcome::pass(r))
}

fn quotient(a: &QuotientArgs) -> Result<Outcome, CliError> {
    let doc: GeometryDocument = read_document(&a.geometry)?;
    let tc = doc.to_typed()?;
    let group = read_document::<GroupDocument>(&a.group)?.to_group()?;
    let (q, map) = quotient_by_free_action(&tc, &group)?;
    let mut r = Report::new("quotient");
    r.set("group_order", group.order().to_string());
    r.set("vertices", q.complex().vertex_count());
    r.set("type_counts", json!(q.type_counts()));
    r.set("chambers", q.complex().chambers().len());
    let quotient_doc = GeometryDocument::from_typed(&q, Some("quotient by free action".into()));
    if let Some(path) = &a.out {
        write_document(path, &quotient_doc)?;
    }
    if let Some(path) = &a.map_out {
        let doc = CoveringDocument {
            schema_version: SCHEMA_VERSION,
            source: GeometryRef::Inline(Box::new(GeometryDocument { group: None, ..doc })),
            target: GeometryRef::Inline(Box::new(quotient_doc)),
            vertex_map: map.vertex_map().to_vec(),
        };
        write_document(path, &doc)?;
    }
    Ok(Outcome::pass(r))
}

fn parse_simplex(text: &str, what: &str, n: usize) -> Result<Simplex, CliError> {
    let ids: Vec<usize> =
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("{what}: expected a JSON array of vertex ids: {e}")))?;
    if let Some(&v) = ids.iter().find(|&&v| v >= n) {
        return Err(CliError::Parse(format!("{what}: vertex {v} out of range")));
    }
    Simplex::try_new(ids).map_err(|e| CliError::Parse(format!("{what}: {e}")))
}

fn bounded_gen(a: &BoundedGenArgs, cap: usize) -> Result<Outcome, CliError> {
    let doc: GeometryDocument = read_document(&a.bundle)?;
    let action: GeometryAction = doc.to_action()?;
    let tc = action.target();
    let c = tc.complex();
    let beta = parse_simplex(&a.beta, "--beta", c.vertex_count())?;
    if !c.contains(&beta) {
        return Err(CliError::Parse(format!("--beta: {beta} is not a simplex")));
    }
    let gamma = match &a.chamber {
        Some(text) => parse_simplex(text, "--chamber", c.vertex_count())?,
        None => c.chambers().iter().find(|ch| beta.is_subset(ch)).cloned().expect("every simplex lies in a chamber"),
    };
    let s = match a.s {
        Some(s) => s,
        None => residue_longest_word(tc, &beta, cap)?,
    };
    let bg = bounded_generation_check(&action, &gamma, &beta, s, cap)?;
    let mut r = Report::new("bounded-gen");
    r.set("beta", simplex_json(&beta));
    r.set("chamber", simplex_json(&gamma));
    r.set("s", bg.s);
    r.set("t", bg.t);
    r.set("bound", bg.s * bg.t);
    r.set("stabilizer_order", bg.stabilizer_order);
    r.set("measured_diameter", bg.measured_diameter);
    r.set("holds", bg.holds);
    Ok(Outcome { ok: bg.holds, report: r, report_to_stderr: false })
}

