//! The worked examples, built directly from primitives.

use crate::dsl::{parse_dsl, Workspace};
use crate::matrix::{Primitive, SymbolicMatrix};

/// Source of the corpus workspace.
pub const WORKSPACE: &str = include_str!("../data/corpus.imx");

pub fn workspace() -> Workspace {
    parse_dsl(WORKSPACE).expect("corpus workspace parses")
}

fn mat(terms: impl IntoIterator<Item = Primitive>) -> SymbolicMatrix {
    SymbolicMatrix::new(terms).expect("corpus primitives are valid")
}

/// Upper triangular ones.
pub fn elim_v() -> SymbolicMatrix {
    mat([Primitive::upper_cone(0, 1, 1)])
}

/// Ones on the diagonal, minus ones just above it.
pub fn elim_u() -> SymbolicMatrix {
    mat([Primitive::diag(0, 1, 1), Primitive::diag(1, 1, -1)])
}

/// Minus ones strictly below the diagonal.
pub fn elim_a() -> SymbolicMatrix {
    mat([Primitive::lower_cone(1, 1, -1)])
}

/// Column vector of ones.
pub fn elim_b() -> SymbolicMatrix {
    ones_col()
}

pub fn ones_row() -> SymbolicMatrix {
    mat([Primitive::row_prog(1, 1, 1, 1)])
}

pub fn ones_col() -> SymbolicMatrix {
    mat([Primitive::col_prog(1, 1, 1, 1)])
}

/// Ones above the diagonal, minus ones below it.
pub fn skew_tridiag() -> SymbolicMatrix {
    mat([Primitive::diag(1, 1, 1), Primitive::diag(-1, 2, -1)])
}

/// Ones just above and just below the diagonal.
pub fn tridiag() -> SymbolicMatrix {
    mat([Primitive::diag(1, 1, 1), Primitive::diag(-1, 2, 1)])
}

/// Ones in row 1 from column 2 on.
pub fn shifted_row() -> SymbolicMatrix {
    mat([Primitive::row_prog(1, 2, 1, 1)])
}

/// Ones in the first row and column plus a one at (2, 2).
pub fn connector() -> SymbolicMatrix {
    mat([
        Primitive::row_prog(1, 1, 1, 1),
        Primitive::col_prog(1, 1, 1, 1),
        Primitive::cell(2, 2, 1),
        Primitive::cell(1, 1, -1),
    ])
}

/// Ones in column 1 from row 2 on.
pub fn shifted_col() -> SymbolicMatrix {
    mat([Primitive::col_prog(1, 2, 1, 1)])
}

/// Lower triangular ones, including the diagonal.
pub fn lower_ones() -> SymbolicMatrix {
    mat([Primitive::lower_cone(0, 1, 1)])
}

/// Ones on the diagonal, minus ones just below it. Inverse of [`lower_ones`].
pub fn bidiag() -> SymbolicMatrix {
    mat([Primitive::diag(0, 1, 1), Primitive::diag(-1, 2, -1)])
}

/// Named triples of the corpus, as workspace names.
pub const TRIPLES: [[&str; 3]; 9] = [
    ["V", "U", "A"],
    ["ones_row", "ones_col", "skew_tridiag"],
    ["ones_row", "skew_tridiag", "ones_col"],
    ["ones_row", "tridiag", "ones_col"],
    ["shifted_row", "connector", "shifted_col"],
    ["U", "A", "b"],
    ["ones_row", "E11", "ones_col"],
    ["lower_ones", "bidiag", "V"],
    ["V", "I", "U"],
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workspace_matches_constructors() {
        let ws = workspace();
        let pairs = [
            ("V", elim_v()),
            ("U", elim_u()),
            ("A", elim_a()),
            ("b", elim_b()),
            ("ones_row", ones_row()),
            ("ones_col", ones_col()),
            ("skew_tridiag", skew_tridiag()),
            ("tridiag", tridiag()),
            ("shifted_row", shifted_row()),
            ("connector", connector()),
            ("shifted_col", shifted_col()),
            ("E11", SymbolicMatrix::unit(1, 1)),
            ("I", SymbolicMatrix::identity()),
            ("lower_ones", lower_ones()),
            ("bidiag", bidiag()),
        ];
        assert_eq!(ws.len(), pairs.len());
        for (name, m) in pairs {
            assert_eq!(ws.get(name).unwrap(), &m, "{name}");
        }
    }
}
