//! Weight pieces of the de Rham–Witt complex of `F_p[t_1, …, t_m]`.
//!
//! Everything is computed inside the integral forms
//! `E = {ω : ω and dω have Z_p coefficients}` on `Z_p[t^{1/p^∞}]`, with
//! `W_nΩ = E / (V^n E + dV^n E)`. Symbols `x · dy_1 ⋯ dy_q` in `V`-shifted
//! Teichmüller monomials map into this model, and the usual defining
//! relations are generated as explicit instances that must vanish there.

mod illusie;
mod model;
mod symbol;
mod weight;

use serde::Serialize;
use thiserror::Error;

use crate::polydiff::multidegree_basis;
use crate::zmod::{rows_length, LinalgError};

pub use illusie::{illusie_exactness, illusie_window, IllusieNode, IllusieReport, NodeKind};
pub use model::{DrwContext, DrwElement, DrwWeightModule};
pub use symbol::{
    combination_to_element, monomial_product, monomials_below, relation_schema, spanning_symbols, DrwSymbol,
    Relation, RelationKind, WittMonomial,
};
pub use weight::WittWeight;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DrwError {
    #[error("unsupported parameters: {0}")]
    BadParams(String),
    #[error("weight {0} does not fit the configured window")]
    WeightOverflow(String),
    #[error("level dropped below 1")]
    LevelUnderflow,
    #[error("level {level} exceeds the configured maximum {max}")]
    LevelOverflow { level: u32, max: u32 },
    #[error("form degree {q} exceeds the number of variables {m}")]
    DegreeOverflow { q: usize, m: usize },
    #[error("operands have different levels")]
    MixedLevel,
    #[error("coefficients are not integral")]
    NotIntegral,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Debug, Serialize)]
pub struct KahlerReport {
    pub weights_checked: usize,
    pub mismatches: Vec<(WittWeight, usize)>,
}

impl KahlerReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// At level 1 the integral weight pieces are the classical Kähler pieces:
/// the forms `[t^{k-e_I}] d[t_{i_1}] ⋯ d[t_{i_q}]` give an `F_p`-basis.
pub fn kahler_comparison(ctx: &DrwContext, bound: u64) -> Result<KahlerReport, DrwError> {
    let m = ctx.rank();
    let md = ctx.modulus();
    let mut mismatches = Vec::new();
    let weights = WittWeight::enumerate(ctx.p(), m, 0, bound);
    for k in &weights {
        let exps: Vec<u32> = k.numerators().iter().map(|x| *x as u32).collect();
        for q in 0..=m {
            let module = ctx.weight_module(1, q, k)?;
            let basis = multidegree_basis(&exps, q);
            let mut ok = module.invariant_factors() == vec![1; basis.len()];
            let mut images = Vec::new();
            for set in &basis {
                let mut rest = exps.clone();
                for &i in set {
                    rest[i] -= 1;
                }
                let diffs = set
                    .iter()
                    .map(|&i| WittMonomial::teichmuller((0..m).map(|j| u32::from(i == j)).collect()))
                    .collect();
                let s = DrwSymbol::new(1, vec![WittMonomial::teichmuller(rest)], diffs);
                let e = s.to_element(ctx, 1)?;
                let coords = ctx.normal_form(&e)?.remove(k).unwrap_or_else(|| vec![0; basis.len()]);
                images.push(coords.iter().map(|c| md.mul(*c, md.p_pow(md.e - 1))).collect::<Vec<u64>>());
            }
            if !basis.is_empty() && rows_length(md, basis.len(), &images)? != basis.len() as u32 {
                ok = false;
            }
            if !ok {
                mismatches.push((k.clone(), q));
            }
        }
    }
    Ok(KahlerReport { weights_checked: weights.len(), mismatches })
}

#[cfg(test)]
mod tests;
