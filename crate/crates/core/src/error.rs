use thiserror::Error;

use crate::field::FieldSpec;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown field `{0}` (expected one of GF(2), GF(3), GF(4), GF(5), GF(7), Q)")]
    UnknownField(String),

    #[error("field {0} is not enumerable")]
    NotEnumerable(FieldSpec),

    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: FieldSpec, right: FieldSpec },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("<c*, f> = -1, so the map x -> x + <c*, x> f is not invertible")]
    NotInvertible,

    #[error("direction vector must be non-zero")]
    ZeroDirection,

    #[error("Q(r) = 0, no reflection in this direction")]
    NotReflectable,

    #[error("polar form is degenerate; radical basis {radical:?}")]
    DegeneratePolarForm { radical: Vec<String> },

    #[error(
        "form cannot be dropped:{}{}",
        if *.vertex_nonzero { " value at (1,o*) is non-zero;" } else { "" },
        if *.radical_mismatch { " radical of the polar form is not F(1,o*)" } else { "" }
    )]
    NotDroppable { vertex_nonzero: bool, radical_mismatch: bool },

    #[error("enumeration needs {required} candidates, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("no table for dim {dim} over {field}")]
    UnsupportedTable { dim: usize, field: FieldSpec },

    #[error("parse error: {0}")]
    Parse(String),
}
