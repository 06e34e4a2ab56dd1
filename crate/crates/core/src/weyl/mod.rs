//! The first Weyl algebra over Z/p^N: normal-ordered arithmetic, divided
//! brackets, centers of the truncations, the map φ_n from Witt vectors of the
//! center mod p, and the underline lift.

mod ncpoly;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{monomials_of_degree, MPoly};
use crate::witt::WittVector;
use crate::zmod::{howell_form, kernel, subquotient, LinalgError, Modulus, PresentedModule, ZModMatrix};

pub use ncpoly::{binom_mod, falling_mod, NcPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeylError {
    #[error("product exceeds the degree bound {bound}")]
    TruncationOverflow { bound: u32 },
    #[error("operands live over different moduli")]
    ModulusMismatch,
    #[error("coefficients are not divisible by p^{k}")]
    NotDivisible { k: u32 },
    #[error("element is not central")]
    NotCentral,
    #[error("unsupported parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub fn modulus(p: u64, e: u32) -> Result<Modulus, WeylError> {
    Modulus::new(p, e).map_err(|_| WeylError::BadParams(format!("p={p}, e={e}")))
}

/// `[a, b] / p^k`, computed at the modulus of the inputs and returned at `p^{N-k}`.
pub fn divided_bracket(a: &NcPoly, b: &NcPoly, k: u32) -> Result<NcPoly, WeylError> {
    a.commutator(b)?.div_p_pow(k)
}

/// The canonical lift of `z ∈ F_p[u, v]` to the Weyl algebra over `Z/p^e`,
/// with `u ↦ x^p`, `v ↦ y^p`.
pub fn central_lift(z: &MPoly, e: u32, max_degree: u32) -> Result<NcPoly, WeylError> {
    let p = z.modulus().p;
    let m = modulus(p, e)?;
    let pp = p as u32;
    Ok(NcPoly::from_terms(m, max_degree, z.terms().iter().map(|(ex, c)| ((pp * ex[0], pp * ex[1]), *c))))
}

/// Reads a central element of `A_1` as a polynomial in `u = x^p`, `v = y^p`.
pub fn center_to_uv(z: &NcPoly) -> Result<MPoly, WeylError> {
    let m = z.modulus();
    if m.e != 1 || !z.is_central() {
        return Err(WeylError::NotCentral);
    }
    let p = m.p as u32;
    let mut out = MPoly::zero(m, 2);
    for (&(a, b), &c) in z.terms() {
        if a % p != 0 || b % p != 0 {
            return Err(WeylError::NotCentral);
        }
        out.add_term(vec![a / p, b / p], c);
    }
    Ok(out)
}

/// `{ā, b̄} = (1/p)[a, b] mod p` for `ā, b̄` central in `A_1`.
pub fn deformation_bracket(a: &NcPoly, b: &NcPoly) -> Result<MPoly, WeylError> {
    if a.modulus().e != 1 || !a.is_central() || !b.is_central() {
        return Err(WeylError::NotCentral);
    }
    let d = a.max_degree().min(b.max_degree());
    let la = a.lift_to(2)?.with_max_degree(2 * d);
    let lb = b.lift_to(2)?.with_max_degree(2 * d);
    center_to_uv(&divided_bracket(&la, &lb, 1)?)
}

/// Coordinates of the Weyl algebra window of Bernstein degree `≤ D`.
pub fn window_monomials(max_degree: u32) -> Vec<(u32, u32)> {
    (0..=max_degree).flat_map(|d| (0..=d).rev().map(move |a| (a, d - a))).collect()
}

pub fn window_coordinates(f: &NcPoly, monomials: &[(u32, u32)]) -> Vec<u64> {
    monomials.iter().map(|&(a, b)| f.coeff(a, b)).collect()
}

/// `Z_n` in Bernstein degrees `≤ D`, one presented module per degree.
#[derive(Clone, Debug)]
pub struct CenterBasis {
    pub p: u64,
    pub n: u32,
    pub max_degree: u32,
    /// Degree `d` lives on the coordinates `x^a y^{d-a}`, `a = d, …, 0`.
    pub per_degree: Vec<PresentedModule>,
}

impl CenterBasis {
    pub fn length(&self) -> u32 {
        self.per_degree.iter().map(|m| m.length()).sum()
    }

    /// Generators as elements of the algebra.
    pub fn generators(&self) -> Result<Vec<NcPoly>, WeylError> {
        let m = modulus(self.p, self.n)?;
        let mut out = Vec::new();
        for (d, module) in self.per_degree.iter().enumerate() {
            let d = d as u32;
            for g in module.generators() {
                let f = NcPoly::from_terms(m, self.max_degree, (0..=d).rev().zip(g).map(|(a, &c)| ((a, d - a), c)));
                out.push(f);
            }
        }
        Ok(out)
    }
}

/// Kernel of `z ↦ ([z, x], [z, y])` over `Z/p^n`, degree by degree. Both
/// brackets lower the Bernstein degree by one, so the window is exact.
pub fn center_basis(p: u64, n: u32, max_degree: u32) -> Result<CenterBasis, WeylError> {
    let m = modulus(p, n)?;
    let mut per_degree = Vec::new();
    for d in 0..=max_degree {
        let basis: Vec<(u32, u32)> = (0..=d).rev().map(|a| (a, d - a)).collect();
        if d == 0 {
            per_degree.push(subquotient(m, 1, &[vec![1]], &[])?);
            continue;
        }
        let lower: Vec<(u32, u32)> = (0..d).rev().map(|a| (a, d - 1 - a)).collect();
        let x = NcPoly::x(m, max_degree + 1);
        let y = NcPoly::y(m, max_degree + 1);
        let mut rows = Vec::new();
        for &(a, b) in &basis {
            let z = NcPoly::monomial(m, max_degree + 1, a, b, 1);
            let cx = z.commutator(&x)?;
            let cy = z.commutator(&y)?;
            let mut row = window_coordinates(&cx, &lower);
            row.extend(window_coordinates(&cy, &lower));
            rows.push(row);
        }
        let mat = ZModMatrix::from_rows(m, 2 * lower.len(), &rows)?;
        let ker = kernel(&mat);
        per_degree.push(subquotient(m, basis.len(), &ker, &[])?);
    }
    Ok(CenterBasis { p, n, max_degree, per_degree })
}

/// `φ_n(z̃) = Σ_i p^{i-1} z̃_i^{p^{n-i}}` from explicit lifts in `A_n`.
pub fn phi_with_lifts(lifts: &[NcPoly]) -> Result<NcPoly, WeylError> {
    let Some(first) = lifts.first() else {
        return Err(WeylError::BadParams("empty Witt vector".into()));
    };
    let m = first.modulus();
    let n = lifts.len() as u32;
    if m.e != n {
        return Err(WeylError::ModulusMismatch);
    }
    let mut acc = NcPoly::zero(m, first.max_degree());
    for (i, z) in lifts.iter().enumerate() {
        if !z.reduce_to(1)?.is_central() {
            return Err(WeylError::NotCentral);
        }
        let t = z.pow(m.p.pow(n - 1 - i as u32))?.scale(m.p_pow(i as u32));
        acc = acc.add(&t)?;
    }
    Ok(acc)
}

/// `φ_n: W_n(Z_1) → Z_n`, with `Z_1 = F_p[u, v]` and canonical lifts.
pub fn phi_n(w: &WittVector<MPoly>, max_degree: u32) -> Result<NcPoly, WeylError> {
    let n = w.len() as u32;
    let lifts = w.comps.iter().map(|z| central_lift(z, n, max_degree)).collect::<Result<Vec<_>, _>>()?;
    phi_with_lifts(&lifts)
}

/// `z̲ = z̃^p mod p^{n+1}` for `z` central in `A_n`.
pub fn underline_lift(z: &NcPoly) -> Result<NcPoly, WeylError> {
    if !z.is_central() {
        return Err(WeylError::NotCentral);
    }
    let e = z.modulus().e;
    let d = z.max_degree().max(z.degree() * z.modulus().p as u32);
    z.lift_to(e + 1)?.with_max_degree(d).pow(z.modulus().p)
}

/// Largest admissible `u,v`-degree of the `j`-th Witt component (0-based) so
/// that `φ_n` stays in Bernstein degree `≤ D`.
pub fn witt_window_degree(p: u64, n: u32, j: u32, max_degree: u32) -> u32 {
    max_degree / (p.pow(n - j) as u32)
}

/// Length of the subgroup of `W_n(F_p[u,v])` cut out by the window bounds.
pub fn witt_window_length(p: u64, n: u32, max_degree: u32) -> u32 {
    (0..n)
        .map(|j| {
            let d = witt_window_degree(p, n, j, max_degree);
            (0..=d).map(|k| k + 1).sum::<u32>()
        })
        .sum()
}

/// `φ_n(V^j[m])` for every monomial `m` allowed in component `j`; these
/// generate the image of the window subgroup.
pub fn phi_window_generators(p: u64, n: u32, max_degree: u32) -> Result<Vec<NcPoly>, WeylError> {
    let f = modulus(p, 1)?;
    let mut out = Vec::new();
    for j in 0..n {
        for d in 0..=witt_window_degree(p, n, j, max_degree) {
            for e in monomials_of_degree(2, d) {
                let mut comps = vec![MPoly::zero(f, 2); n as usize];
                comps[j as usize] = MPoly::monomial(f, &e, 1);
                out.push(phi_n(&WittVector { p, comps }, max_degree)?);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterIsoReport {
    pub p: u64,
    pub n: u32,
    pub max_degree: u32,
    pub center_invariant_factors: Vec<u32>,
    pub image_invariant_factors: Vec<u32>,
    pub same_span: bool,
    pub witt_window_length: u32,
    pub image_length: u32,
    pub image_central: bool,
}

impl CenterIsoReport {
    pub fn surjective(&self) -> bool {
        self.same_span && self.center_invariant_factors == self.image_invariant_factors
    }

    pub fn injective(&self) -> bool {
        self.image_length == self.witt_window_length
    }

    pub fn passed(&self) -> bool {
        self.surjective() && self.injective() && self.image_central
    }
}

/// Compares `Z_n` with `φ_n(W_n(Z_1))` in Bernstein degrees `≤ D`.
pub fn center_iso_check(p: u64, n: u32, max_degree: u32) -> Result<CenterIsoReport, WeylError> {
    let m = modulus(p, n)?;
    let mons = window_monomials(max_degree);
    let center = center_basis(p, n, max_degree)?;
    let center_rows: Vec<Vec<u64>> = center.generators()?.iter().map(|g| window_coordinates(g, &mons)).collect();
    let gens = phi_window_generators(p, n, max_degree)?;
    let image_central = gens.iter().all(NcPoly::is_central);
    let image_rows: Vec<Vec<u64>> = gens.iter().map(|g| window_coordinates(g, &mons)).collect();
    let dim = mons.len();
    let hc = howell_form(&ZModMatrix::from_rows(m, dim, &center_rows)?);
    let hi = howell_form(&ZModMatrix::from_rows(m, dim, &image_rows)?);
    let same_span = hc.basis() == hi.basis();
    let cm = subquotient(m, dim, &center_rows, &[])?;
    let im = subquotient(m, dim, &image_rows, &[])?;
    Ok(CenterIsoReport {
        p,
        n,
        max_degree,
        center_invariant_factors: cm.invariant_factors(),
        image_invariant_factors: im.invariant_factors(),
        same_span,
        witt_window_length: witt_window_length(p, n, max_degree),
        image_length: im.length(),
        image_central,
    })
}

/// `A_1` is free over `Z_1` on `x^i y^j` (`0 ≤ i, j < p`): the products of
/// central monomials with this basis give a unimodular change of coordinates
/// on the degree-`≤ D` window.
pub fn azumaya_basis_check(p: u64, max_degree: u32) -> Result<bool, WeylError> {
    let f = modulus(p, 1)?;
    let mons = window_monomials(max_degree);
    let pp = p as u32;
    let mut rows = Vec::new();
    for &(a, b) in &mons {
        let (i, j) = (a % pp, b % pp);
        let c = NcPoly::monomial(f, max_degree, a - i, b - j, 1);
        let e = NcPoly::monomial(f, max_degree, i, j, 1);
        rows.push(window_coordinates(&c.mul(&e)?, &mons));
    }
    let h = howell_form(&ZModMatrix::from_rows(f, mons.len(), &rows)?);
    Ok(h.rank() == mons.len() && h.pivots.iter().all(|pv| pv.valuation == 0))
}
