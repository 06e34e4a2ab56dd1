//! Exact algebra for Hochschild cohomology of Weyl algebras over Z/p^n and
//! the de Rham–Witt complex of their Poisson centers.

pub mod zmod;
pub mod poly;
pub mod ring;
pub mod witt;
pub mod polydiff;
pub mod weyl;
pub mod drwitt;
pub mod hoch;
pub mod harness;
