//! Exact linear algebra over the local rings Z/p^e.
//!
//! Row spans are the central objects: Howell form gives a canonical basis of a
//! span, and the local Smith form turns subquotients of free modules into
//! invariant factors with chain-level representatives.

mod howell;
mod matrix;
mod module;
mod smith;

pub use howell::{howell_form, is_howell, kernel, HowellForm, Pivot};
pub use matrix::{Modulus, ZModMatrix};
pub use module::{complex_cohomology, embed, rows_length, subquotient, ModuleSummary, PresentedModule};
pub use smith::{cokernel_exponents, smith_form, span_length, SmithForm};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("modulus {p}^{e} is not supported (need p >= 2, e >= 1, p^e <= 2^62)")]
    BadModulus { p: u64, e: u32 },
    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("operands live over different moduli")]
    ModulusMismatch,
    #[error("the two maps do not compose to zero")]
    CompositionNonzero,
    #[error("vector is not in the given submodule")]
    NotInSubmodule,
}
