//! Fixtures shared by the benchmarks.

use geomkit::action::GeometryAction;
use geomkit::catalog::{neumaier, projective_space, symplectic_polar_space};
use geomkit::coset::{stabilizer_complex, SubgroupComplex};

/// Catalog actions by name: `fano`, `pg32`, `neumaier`, `w52`.
pub fn action(name: &str) -> GeometryAction {
    let cat = match name {
        "fano" => projective_space(2, 2),
        "pg32" => projective_space(3, 2),
        "neumaier" => Ok(neumaier()),
        "w52" => symplectic_polar_space(6, 2),
        other => panic!("no fixture {other}"),
    };
    cat.expect("catalog fixture").action.expect("catalog fixtures carry their group")
}

/// Stabilizers of the faces of the first chamber.
pub fn chamber_complex(action: &GeometryAction) -> SubgroupComplex {
    let gamma = action.target().complex().chambers()[0].clone();
    stabilizer_complex(action, &gamma).expect("stabilizer complex of a catalog action")
}
