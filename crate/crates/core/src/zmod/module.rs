use serde::Serialize;

use super::howell::{howell_form, kernel, HowellForm};
use super::smith::{smith_form, span_length};
use super::{LinalgError, Modulus, ZModMatrix};

/// A finite module `⊕ Z/p^{e_i}` realized as a subquotient of `(Z/p^e)^dim`,
/// with representatives for each summand and a coordinate map.
#[derive(Clone, Debug)]
pub struct PresentedModule {
    modulus: Modulus,
    ambient_dim: usize,
    exponents: Vec<u32>,
    generators: Vec<Vec<u64>>,
    numerator: Option<HowellForm>,
    coords: Option<ZModMatrix>,
    kept: Vec<usize>,
}

/// Summary used in reports and caches.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct ModuleSummary {
    pub p: u64,
    pub exponents: Vec<u32>,
}

impl PresentedModule {
    pub fn zero(modulus: Modulus, ambient_dim: usize) -> Self {
        Self {
            modulus,
            ambient_dim,
            exponents: Vec::new(),
            generators: Vec::new(),
            numerator: None,
            coords: None,
            kept: Vec::new(),
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Exponents `e_i` of the summands `Z/p^{e_i}`, in generator order.
    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Invariant factors as sorted exponents.
    pub fn invariant_factors(&self) -> Vec<u32> {
        let mut v = self.exponents.clone();
        v.sort_unstable();
        v
    }

    pub fn generators(&self) -> &[Vec<u64>] {
        &self.generators
    }

    pub fn length(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn summary(&self) -> ModuleSummary {
        ModuleSummary { p: self.modulus.p, exponents: self.invariant_factors() }
    }

    /// Coordinates of an element of the numerator, each reduced mod `p^{e_i}`.
    pub fn coordinates(&self, x: &[u64]) -> Result<Vec<u64>, LinalgError> {
        if x.len() != self.ambient_dim {
            return Err(LinalgError::Shape { expected: self.ambient_dim, found: x.len() });
        }
        let Some(num) = &self.numerator else {
            if x.iter().all(|v| self.modulus.reduce(*v) == 0) {
                return Ok(Vec::new());
            }
            return Err(LinalgError::NotInSubmodule);
        };
        let a = num.solve_in_basis(x).ok_or(LinalgError::NotInSubmodule)?;
        let coords = self.coords.as_ref().expect("set with numerator");
        let y = coords.apply(&a)?;
        Ok(self
            .kept
            .iter()
            .zip(&self.exponents)
            .map(|(&i, &ex)| y[i] % self.modulus.p.pow(ex))
            .collect())
    }

    /// Coordinates scaled into `(Z/p^E)^k` via `x_i ↦ p^{E-e_i} x_i`, which is an
    /// injective module map for every `E` at least the largest exponent.
    pub fn embedded_coordinates(&self, x: &[u64], target: Modulus) -> Result<Vec<u64>, LinalgError> {
        let c = self.coordinates(x)?;
        Ok(embed(&c, &self.exponents, target))
    }

    pub fn is_zero_class(&self, x: &[u64]) -> Result<bool, LinalgError> {
        Ok(self.coordinates(x)?.iter().all(|c| *c == 0))
    }

    /// The element `Σ c_i g_i` of the ambient space.
    pub fn element(&self, coords: &[u64]) -> Vec<u64> {
        let m = self.modulus;
        let mut out = vec![0u64; self.ambient_dim];
        for (g, &c) in self.generators.iter().zip(coords) {
            for (o, x) in out.iter_mut().zip(g) {
                *o = m.add(*o, m.mul(c, *x));
            }
        }
        out
    }
}

pub fn embed(coords: &[u64], exponents: &[u32], target: Modulus) -> Vec<u64> {
    coords
        .iter()
        .zip(exponents)
        .map(|(&c, &ex)| {
            assert!(ex <= target.e, "summand exponent exceeds target ring");
            target.mul(target.reduce(c), target.p_pow(target.e - ex))
        })
        .collect()
}

/// `span(numerator) / span(denominator)` inside `(Z/p^e)^dim`.
pub fn subquotient(
    modulus: Modulus,
    dim: usize,
    numerator: &[Vec<u64>],
    denominator: &[Vec<u64>],
) -> Result<PresentedModule, LinalgError> {
    let num_m = ZModMatrix::from_rows(modulus, dim, numerator)?;
    let hf = howell_form(&num_m);
    if hf.rank() == 0 {
        if denominator.iter().any(|r| r.iter().any(|x| modulus.reduce(*x) != 0)) {
            return Err(LinalgError::NotInSubmodule);
        }
        return Ok(PresentedModule::zero(modulus, dim));
    }
    let basis = hf.basis_matrix();
    let s = basis.rows();
    let mut relations = kernel(&basis);
    for d in denominator {
        relations.push(hf.solve_in_basis(d).ok_or(LinalgError::NotInSubmodule)?);
    }
    let rel = ZModMatrix::from_rows(modulus, s, &relations)?;
    let snf = smith_form(&rel);
    let mut exponents = Vec::new();
    let mut generators = Vec::new();
    let mut kept = Vec::new();
    for (i, &v) in snf.valuations.iter().enumerate() {
        if v == 0 {
            continue;
        }
        kept.push(i);
        exponents.push(v);
        generators.push(basis.apply(snf.basis.row(i))?);
    }
    Ok(PresentedModule {
        modulus,
        ambient_dim: dim,
        exponents,
        generators,
        numerator: Some(hf),
        coords: Some(snf.coords),
        kept,
    })
}

/// Cohomology `ker(d_out) / im(d_in)` of `C_0 → C_1 → C_2`, maps acting on row vectors.
pub fn complex_cohomology(d_in: &ZModMatrix, d_out: &ZModMatrix) -> Result<PresentedModule, LinalgError> {
    if d_in.cols() != d_out.rows() {
        return Err(LinalgError::Shape { expected: d_out.rows(), found: d_in.cols() });
    }
    if !d_in.mul(d_out)?.is_zero() {
        return Err(LinalgError::CompositionNonzero);
    }
    let cycles = kernel(d_out);
    subquotient(d_in.modulus(), d_in.cols(), &cycles, &d_in.to_rows())
}

/// Length of the span of the given rows.
pub fn rows_length(modulus: Modulus, dim: usize, rows: &[Vec<u64>]) -> Result<u32, LinalgError> {
    if rows.is_empty() || dim == 0 {
        return Ok(0);
    }
    Ok(span_length(&ZModMatrix::from_rows(modulus, dim, rows)?))
}
