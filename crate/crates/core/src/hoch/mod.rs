//! Hochschild cohomology of the Weyl algebra over `Z/p^n`.
//!
//! Cochains live in the Koszul complex of `x, y`, which splits by a shifted
//! bidegree into finite pieces. On top of that: reduction `r̄`, multiplication
//! `v̄`, the Bockstein `d_n`, the cup product and the map `φ*` from de
//! Rham–Witt symbols.

mod checks;
mod koszul;
mod ops;
mod testalg;

pub use checks::{
    delta_exponent_check, hkr_check, les_check, matched_bidegree, sv_identity_check, theorem1_check, BlockComparison,
    DeltaCase, DeltaExponentReport, HkrPiece, HkrReport, LesNode, LesReport, SquareCheck, SvCase, SvReport,
    Theorem1Report, WeightComparison,
};
pub use koszul::{delta_matrix, hh, piece_cohomology, slots, Bidegree, HhModule, HhSummary, KoszulCochain, WORKING_DEGREE};
pub use ops::{
    bockstein, bockstein_with_lift, connecting_delta, cup, cup_on_chain, derivation_apply, perturb_chain, rbar,
    relation_chain, vbar, BarChain2, PhiEngine,
};
pub use testalg::{lemma_identities_check, IdentityCheck, LemmaReport, TaCochain, TestAlgebra};

use thiserror::Error;

use crate::drwitt::DrwError;
use crate::weyl::WeylError;
use crate::zmod::LinalgError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HochError {
    #[error("cochain degrees or levels do not match")]
    DegreeMismatch,
    #[error("cochain is not a cocycle")]
    NotCocycle,
    #[error("cochain is not divisible by p^{k}")]
    DivisionFailure { k: u32 },
    #[error("level {0} is out of range")]
    LevelBounds(u32),
    #[error("degree {degree} exceeds the window {max}")]
    WindowOverflow { degree: u32, max: u32 },
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Drw(#[from] DrwError),
}

#[cfg(test)]
mod tests;
