use thiserror::Error;

use crate::complex::Simplex;

pub type Result<T, E = GeomError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    // complexes
    #[error("complex has no simplices")]
    EmptyComplex,
    #[error("vertex {vertex} repeated in simplex")]
    DuplicateVertexInSimplex { vertex: usize },
    #[error("vertex {vertex} out of range (vertex count {count})")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("vertex {0} lies in no simplex")]
    UncoveredVertex(usize),
    #[error("maximal simplex {inner} is contained in {outer}")]
    ContainedMaximalSimplex { inner: Simplex, outer: Simplex },
    #[error("{0} is not a simplex of the complex")]
    SimplexNotInComplex(Simplex),
    #[error("k = {k} is smaller than the corank {corank}")]
    KTooSmall { k: usize, corank: usize },
    #[error("complex is not a chamber complex")]
    NotAChamberComplex,
    #[error("{0} is not a chamber")]
    NotAChamber(Simplex),
    #[error("gallery stammers at position {0}")]
    StammeringGallery(usize),
    #[error("consecutive chambers at position {0} do not share a panel")]
    NotAGallery(usize),

    // types
    #[error("unknown type label {0:?}")]
    UnknownTypeLabel(String),
    #[error("type function is not injective on {0}")]
    TypeNotInjective(Simplex),
    #[error("type sets differ")]
    TypeSetMismatch,
    #[error("duplicate type label {0:?}")]
    DuplicateTypeLabel(String),

    // coxeter
    #[error("invalid coxeter matrix: {0}")]
    InvalidCoxeterMatrix(String),
    #[error("enumeration exceeded the cap of {0}")]
    CapExceeded(usize),
    #[error("letter {letter} out of range for {rank} generators")]
    LetterOutOfRange { letter: usize, rank: usize },

    // verification
    #[error("expected rank {expected}, found {found}")]
    WrongRank { expected: usize, found: usize },
    #[error("links of cotype {{{0}, {1}}} disagree on gonality ({2} vs {3})")]
    InconsistentGonality(usize, usize, usize, usize),
    #[error("link of {0} is not a generalized polygon")]
    NotAPolygon(Simplex),
    #[error("diagram is not of type C3")]
    WrongDiagram,
    #[error("declared roles {declared:?} disagree with the diagram ({detected:?})")]
    RoleMismatch { declared: [usize; 3], detected: [usize; 3] },
    #[error("input is not a geometry")]
    NotAGeometry,
    #[error("factors do not rejoin to the input")]
    NotAJoin,

    // groups
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("coxeter group of the residue is not spherical")]
    NonSphericalResidue,

    // coset geometry
    #[error("invalid subgroup complex: {0}")]
    InvalidSubgroupComplex(String),
    #[error("coset nerve is not gallery connected")]
    NotGalleryConnected,
    #[error("simple homomorphism is incompatible: {0}")]
    IncompatibleSimpleHomomorphism(String),
    #[error("identification of family member {0} is inconsistent")]
    InconsistentIdentification(usize),
    #[error("homomorphism does not factor through the universal group")]
    NoFactoring,

    // coverings
    #[error("g(rho(gamma1)) differs from rho(gamma2)")]
    ChamberMismatch,
    #[error("a nonidentity element fixes chamber {0}")]
    NotFreeOnChambers(Simplex),
    #[error("group element does not preserve types")]
    TypeBroken,
    #[error("map is not simplicial: {0}")]
    NotSimplicial(String),
    #[error("catalog parameters unsupported: {0}")]
    UnsupportedParameters(String),
    #[error("digon sides must have at least 3 vertices")]
    TooThin,
}
