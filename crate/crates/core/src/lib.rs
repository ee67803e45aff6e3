//! Exact affine-metric geometry over small fields.

pub mod classify;
pub mod error;
pub mod field;
pub mod formfile;
pub mod groups;
pub mod homog;
pub mod matrix;
pub(crate) mod packed;
pub mod quadform;
pub mod report;
pub mod transvect;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use groups::{Budget, GroupSet};
pub use matrix::{Mat, Vector};
pub use quadform::{PolarData, QForm, Vars};
pub use report::Report;
