use std::fmt;

use serde::{Deserialize, Serialize};

/// A polynomial variable.
///
/// `X` are the entries of the `n x d` matrix, `G` the entries of a generic
/// `d x d` group element and `T` formal one-parameter coordinates. The derived
/// ordering is the fixed variable order: all of `X` before `G` before `T`,
/// and within a matrix family column-major (column compared first).
///
/// Indices are 1-based, as in the text grammar.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    X { col: u16, row: u16 },
    G { col: u16, row: u16 },
    T(u32),
}

/// Variable family, used for multidegree queries and splitting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    X,
    G,
    T,
}

impl Var {
    pub fn x(row: usize, col: usize) -> Var {
        Var::X { col: col as u16, row: row as u16 }
    }

    pub fn g(row: usize, col: usize) -> Var {
        Var::G { col: col as u16, row: row as u16 }
    }

    pub fn t(k: usize) -> Var {
        Var::T(k as u32)
    }

    pub fn family(&self) -> Family {
        match self {
            Var::X { .. } => Family::X,
            Var::G { .. } => Family::G,
            Var::T(_) => Family::T,
        }
    }

    /// `(row, col)` for matrix families.
    pub fn matrix_index(&self) -> Option<(usize, usize)> {
        match *self {
            Var::X { row, col } | Var::G { row, col } => Some((row as usize, col as usize)),
            Var::T(_) => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X { row, col } => write!(f, "x({row},{col})"),
            Var::G { row, col } => write!(f, "g({row},{col})"),
            Var::T(k) => write!(f, "t({k})"),
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_then_column_major() {
        assert!(Var::x(5, 5) < Var::g(1, 1));
        assert!(Var::g(9, 9) < Var::t(1));
        assert!(Var::x(2, 1) < Var::x(1, 2));
        assert!(Var::x(1, 1) < Var::x(2, 1));
    }
}
