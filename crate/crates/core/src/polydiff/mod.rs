//! Kähler forms on polynomial rings, the inverse Cartier operator, the
//! symplectic Poisson bracket and the τ map on Witt vectors of the center.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{monomials_of_degree, Exponents, MPoly};
use crate::zmod::{howell_form, LinalgError, Modulus, ZModMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolydiffError {
    #[error("form degree {q} exceeds the number of variables {m}")]
    DegreeTooLarge { q: usize, m: usize },
    #[error("operands have different ambient rings")]
    Mismatch,
    #[error("the Poisson bracket needs an even number of variables, got {0}")]
    OddDimension(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A q-form `Σ_I f_I dt_I` with strictly increasing index tuples `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffForm {
    modulus: Modulus,
    nvars: usize,
    degree: usize,
    terms: BTreeMap<Vec<usize>, MPoly>,
}

/// Sorts `idx` in place; returns the sign of the permutation, or `None` on a repeat.
fn normalize(idx: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

impl DiffForm {
    pub fn zero(modulus: Modulus, nvars: usize, degree: usize) -> Self {
        Self { modulus, nvars, degree, terms: BTreeMap::new() }
    }

    pub fn function(f: MPoly) -> Self {
        let mut out = Self::zero(f.modulus(), f.nvars(), 0);
        out.add_term(vec![], &f);
        out
    }

    /// `dt_i`.
    pub fn dt(modulus: Modulus, nvars: usize, i: usize) -> Self {
        let mut out = Self::zero(modulus, nvars, 1);
        out.add_term(vec![i], &MPoly::constant(modulus, nvars, 1));
        out
    }

    /// `f dt_{i_1} ∧ … ∧ dt_{i_q}` for an arbitrary index order.
    pub fn monomial_form(f: MPoly, idx: &[usize]) -> Self {
        let mut out = Self::zero(f.modulus(), f.nvars(), idx.len());
        out.add_term(idx.to_vec(), &f);
        out
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, MPoly> {
        &self.terms
    }

    pub fn coeff(&self, idx: &[usize]) -> MPoly {
        self.terms.get(idx).cloned().unwrap_or_else(|| MPoly::zero(self.modulus, self.nvars))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, mut idx: Vec<usize>, f: &MPoly) {
        debug_assert_eq!(idx.len(), self.degree);
        let Some(sign) = normalize(&mut idx) else { return };
        let f = if sign < 0 { f.neg() } else { f.clone() };
        let cur = self.coeff(&idx).add(&f);
        if cur.is_zero() {
            self.terms.remove(&idx);
        } else {
            self.terms.insert(idx, cur);
        }
    }

    fn same_space(&self, o: &DiffForm) -> Result<(), PolydiffError> {
        if self.modulus != o.modulus || self.nvars != o.nvars {
            return Err(PolydiffError::Mismatch);
        }
        Ok(())
    }

    pub fn add(&self, o: &DiffForm) -> Result<DiffForm, PolydiffError> {
        self.same_space(o)?;
        if self.degree != o.degree {
            return Err(PolydiffError::Mismatch);
        }
        let mut out = self.clone();
        for (idx, f) in &o.terms {
            out.add_term(idx.clone(), f);
        }
        Ok(out)
    }

    pub fn neg(&self) -> DiffForm {
        let mut out = self.clone();
        for f in out.terms.values_mut() {
            *f = f.neg();
        }
        out
    }

    pub fn sub(&self, o: &DiffForm) -> Result<DiffForm, PolydiffError> {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: u64) -> DiffForm {
        let mut out = DiffForm::zero(self.modulus, self.nvars, self.degree);
        for (idx, f) in &self.terms {
            out.add_term(idx.clone(), &f.scale(c));
        }
        out
    }

    pub fn mul_function(&self, g: &MPoly) -> DiffForm {
        let mut out = DiffForm::zero(self.modulus, self.nvars, self.degree);
        for (idx, f) in &self.terms {
            out.add_term(idx.clone(), &f.mul(g));
        }
        out
    }

    pub fn wedge(&self, o: &DiffForm) -> Result<DiffForm, PolydiffError> {
        self.same_space(o)?;
        let q = self.degree + o.degree;
        if q > self.nvars {
            return Err(PolydiffError::DegreeTooLarge { q, m: self.nvars });
        }
        let mut out = DiffForm::zero(self.modulus, self.nvars, q);
        for (ia, fa) in &self.terms {
            for (ib, fb) in &o.terms {
                let idx: Vec<usize> = ia.iter().chain(ib).copied().collect();
                out.add_term(idx, &fa.mul(fb));
            }
        }
        Ok(out)
    }

    /// `d(f dt_I) = Σ_j ∂_j f dt_j ∧ dt_I`.
    pub fn de_rham_d(&self) -> Result<DiffForm, PolydiffError> {
        let q = self.degree + 1;
        if q > self.nvars {
            return Err(PolydiffError::DegreeTooLarge { q, m: self.nvars });
        }
        let mut out = DiffForm::zero(self.modulus, self.nvars, q);
        for (idx, f) in &self.terms {
            for j in 0..self.nvars {
                let df = f.derivative(j);
                if df.is_zero() {
                    continue;
                }
                let mut i2 = vec![j];
                i2.extend(idx);
                out.add_term(i2, &df);
            }
        }
        Ok(out)
    }

    pub fn is_closed(&self) -> bool {
        self.degree == self.nvars || self.de_rham_d().map(|d| d.is_zero()).unwrap_or(true)
    }

    /// Multidegrees (exponent of `f` plus the indices of `dt_I`) occurring in the form.
    pub fn multidegrees(&self) -> Vec<Exponents> {
        let mut out: Vec<Exponents> = Vec::new();
        for (idx, f) in &self.terms {
            for e in f.terms().keys() {
                let mut w = e.clone();
                for &i in idx {
                    w[i] += 1;
                }
                if !out.contains(&w) {
                    out.push(w);
                }
            }
        }
        out.sort();
        out
    }
}

/// `d` of a function.
pub fn d_function(f: &MPoly) -> DiffForm {
    DiffForm::function(f.clone()).de_rham_d().expect("at least one variable")
}

/// Frobenius `f ↦ f^p` on a polynomial over F_p.
fn frobenius_poly(f: &MPoly) -> MPoly {
    f.pow(f.modulus().p)
}

/// `C^{-1}(f dg) = f^p g^{p-1} dg`, a representative modulo exact forms.
pub fn cartier_inverse_fdg(f: &MPoly, g: &MPoly) -> DiffForm {
    let p = f.modulus().p;
    d_function(g).mul_function(&frobenius_poly(f).mul(&g.pow(p - 1)))
}

/// `C^{-1}` on a 1-form `Σ f_i dt_i`, applied term by term.
pub fn cartier_inverse(omega: &DiffForm) -> Result<DiffForm, PolydiffError> {
    if omega.degree != 1 {
        return Err(PolydiffError::Mismatch);
    }
    let mut out = DiffForm::zero(omega.modulus, omega.nvars, 1);
    for (idx, f) in &omega.terms {
        let t = MPoly::var(omega.modulus, omega.nvars, idx[0]);
        out = out.add(&cartier_inverse_fdg(f, &t))?;
    }
    Ok(out)
}

/// Basis of the q-forms of a fixed multidegree `a`: the tuples `I` with
/// `a_i ≥ 1` for `i ∈ I`, standing for `t^{a - e_I} dt_I`.
pub fn multidegree_basis(a: &[u32], q: usize) -> Vec<Vec<usize>> {
    let support: Vec<usize> = (0..a.len()).filter(|&i| a[i] >= 1).collect();
    subsets(&support, q)
}

pub(crate) fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = Vec::new();
    for (pos, &first) in items.iter().enumerate() {
        for mut rest in subsets(&items[pos + 1..], k - 1) {
            let mut v = vec![first];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

/// Coordinates of the multidegree-`a` part of a q-form in [`multidegree_basis`].
pub fn form_coordinates(form: &DiffForm, a: &[u32]) -> Vec<u64> {
    multidegree_basis(a, form.degree)
        .iter()
        .map(|idx| {
            let mut e = a.to_vec();
            for &i in idx {
                e[i] -= 1;
            }
            form.coeff(idx).coeff(&e)
        })
        .collect()
}

/// Every exponent vector in `nvars` variables with total degree at most `d`.
pub fn multidegrees_up_to(nvars: usize, d: u32) -> Vec<Exponents> {
    (0..=d).flat_map(|k| monomials_of_degree(nvars, k)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartierReport {
    pub p: u64,
    pub nvars: usize,
    pub max_coeff_degree: u32,
    pub forms_checked: usize,
    pub kernel_dimension: usize,
    pub all_closed: bool,
    pub additive: bool,
    pub onto_cohomology: bool,
}

impl CartierReport {
    pub fn passed(&self) -> bool {
        self.kernel_dimension == 0 && self.all_closed && self.additive && self.onto_cohomology
    }
}

/// Dimension over F_p of `H^q` of the de Rham complex in multidegree `b`.
pub fn de_rham_cohomology_dim(p: u64, b: &[u32], q: usize) -> Result<usize, PolydiffError> {
    let m = Modulus::new(p, 1)?;
    let rank_of = |rows: Vec<Vec<u64>>, cols: usize| -> Result<usize, PolydiffError> {
        if rows.is_empty() || cols == 0 {
            return Ok(0);
        }
        Ok(howell_form(&ZModMatrix::from_rows(m, cols, &rows)?).rank())
    };
    let differential = |q: usize| -> Vec<Vec<u64>> {
        let target = multidegree_basis(b, q + 1);
        multidegree_basis(b, q)
            .iter()
            .map(|idx| {
                let mut e = b.to_vec();
                for &i in idx {
                    e[i] -= 1;
                }
                let f = MPoly::monomial(m, &e, 1);
                let d = DiffForm::monomial_form(f, idx).de_rham_d().unwrap_or_else(|_| DiffForm::zero(m, b.len(), q + 1));
                let c = form_coordinates(&d, b);
                debug_assert_eq!(c.len(), target.len());
                c
            })
            .collect()
    };
    let dim_q = multidegree_basis(b, q).len();
    let rank_out = if q < b.len() { rank_of(differential(q), multidegree_basis(b, q + 1).len())? } else { 0 };
    let rank_in = if q > 0 { rank_of(differential(q - 1), dim_q)? } else { 0 };
    Ok(dim_q - rank_out - rank_in)
}

/// Checks that `C^{-1}: Ω^1 → Ω^1/dS` is additive and injective with closed
/// image on 1-forms whose coefficients have degree at most `max_coeff_degree`,
/// and that in each multidegree its image fills the first de Rham cohomology.
pub fn cartier_injectivity_check(p: u64, nvars: usize, max_coeff_degree: u32) -> Result<CartierReport, PolydiffError> {
    let m = Modulus::new(p, 1)?;
    let mut forms_checked = 0;
    let mut kernel_dimension = 0;
    let mut all_closed = true;
    let mut additive = true;
    let mut onto = true;
    // C^{-1} sends multidegree a to p·a, so the check splits by multidegree
    for a in multidegrees_up_to(nvars, max_coeff_degree + 1) {
        let basis = multidegree_basis(&a, 1);
        if basis.is_empty() {
            continue;
        }
        let pa: Vec<u32> = a.iter().map(|x| x * p as u32).collect();
        let target_dim = multidegree_basis(&pa, 1).len();
        let mut images = Vec::new();
        let mut sum_form = DiffForm::zero(m, nvars, 1);
        let mut sum_images = DiffForm::zero(m, nvars, 1);
        for idx in &basis {
            let mut e = a.clone();
            e[idx[0]] -= 1;
            let w = DiffForm::monomial_form(MPoly::monomial(m, &e, 1), idx);
            let img = cartier_inverse(&w)?;
            all_closed &= img.is_closed();
            if img.multidegrees().iter().any(|d| *d != pa) {
                all_closed = false;
            }
            sum_form = sum_form.add(&w)?;
            sum_images = sum_images.add(&img)?;
            images.push(form_coordinates(&img, &pa));
            forms_checked += 1;
        }
        additive &= cartier_inverse(&sum_form)? == sum_images;
        // exact forms of multidegree p·a: the span of d(t^{pa})
        let exact = form_coordinates(&d_function(&MPoly::monomial(m, &pa, 1)), &pa);
        let exact_rank = usize::from(exact.iter().any(|x| *x != 0));
        let mut stacked = images.clone();
        stacked.push(exact);
        let rank = howell_form(&ZModMatrix::from_rows(m, target_dim, &stacked)?).rank();
        kernel_dimension += basis.len() + exact_rank - rank;
        onto &= rank - exact_rank == de_rham_cohomology_dim(p, &pa, 1)?;
    }
    Ok(CartierReport {
        p,
        nvars,
        max_coeff_degree,
        forms_checked,
        kernel_dimension,
        all_closed,
        additive,
        onto_cohomology: onto,
    })
}

/// Symplectic bracket on `F[u_1, v_1, …, u_k, v_k]` (variables interleaved),
/// normalized by `{u_i, v_j} = δ_ij`.
pub fn poisson_bracket(f: &MPoly, g: &MPoly) -> Result<MPoly, PolydiffError> {
    let m = f.nvars();
    if m % 2 != 0 {
        return Err(PolydiffError::OddDimension(m));
    }
    if g.nvars() != m || g.modulus() != f.modulus() {
        return Err(PolydiffError::Mismatch);
    }
    let mut out = MPoly::zero(f.modulus(), m);
    for i in 0..m / 2 {
        let (u, v) = (2 * i, 2 * i + 1);
        out = out.add(&f.derivative(u).mul(&g.derivative(v))).sub(&f.derivative(v).mul(&g.derivative(u)));
    }
    Ok(out)
}

/// `τ(z) = Σ_i z_i^{p^{m-i}-1}{z_i, −}` (1-based `i`), returned as its values
/// on the coordinate functions. `sign = -1` uses the opposite bracket.
pub fn tau_with_sign(z: &[MPoly], sign: i64) -> Result<Vec<MPoly>, PolydiffError> {
    let Some(first) = z.first() else { return Ok(Vec::new()) };
    let md = first.modulus();
    let nv = first.nvars();
    let p = md.p;
    let len = z.len();
    let mut out = vec![MPoly::zero(md, nv); nv];
    for (i, zi) in z.iter().enumerate() {
        let e = p.pow((len - 1 - i) as u32) - 1;
        let factor = zi.pow(e);
        for (j, slot) in out.iter_mut().enumerate() {
            let mut b = poisson_bracket(zi, &MPoly::var(md, nv, j))?;
            if sign < 0 {
                b = b.neg();
            }
            *slot = slot.add(&factor.mul(&b));
        }
    }
    Ok(out)
}

pub fn tau(z: &[MPoly]) -> Result<Vec<MPoly>, PolydiffError> {
    tau_with_sign(z, 1)
}

pub fn tau_is_zero(z: &[MPoly]) -> Result<bool, PolydiffError> {
    Ok(tau(z)?.iter().all(MPoly::is_zero) && tau_with_sign(z, -1)?.iter().all(MPoly::is_zero))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauReport {
    pub p: u64,
    pub max_degree: u32,
    pub forward_checked: usize,
    pub reverse_checked: usize,
    pub counterexamples: Vec<String>,
}

impl TauReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

fn random_poly(rng: &mut ChaCha8Rng, m: Modulus, nvars: usize, max_degree: u32) -> MPoly {
    let mut f = MPoly::zero(m, nvars);
    for e in multidegrees_up_to(nvars, max_degree) {
        if rng.gen_bool(0.4) {
            f.add_term(e, rng.gen_range(1..m.p));
        }
    }
    f
}

fn describe(z: &[MPoly]) -> String {
    serde_json::to_string(z).unwrap_or_default()
}

/// Both directions of the τ-kernel statement on `F_p[u, v]`.
///
/// Forward: τ vanishes on every tuple (length ≤ `max_len`) of p-th powers of
/// monomials of degree ≤ `max_degree / p`, and on random F_p-combinations of them.
/// Reverse: τ is nonzero on `samples` random tuples with some entry not a p-th power.
pub fn tau_kernel_check(p: u64, max_degree: u32, max_len: usize, samples: usize, seed: u64) -> Result<TauReport, PolydiffError> {
    let m = Modulus::new(p, 1)?;
    let nv = 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let root_degree = max_degree / p as u32;
    let mut powers: Vec<MPoly> = vec![MPoly::zero(m, nv)];
    for e in multidegrees_up_to(nv, root_degree) {
        for c in 1..p {
            powers.push(MPoly::monomial(m, &e, c).pow(p));
        }
    }
    let mut report = TauReport { p, max_degree, forward_checked: 0, reverse_checked: 0, counterexamples: Vec::new() };
    for len in 1..=max_len {
        let mut idx = vec![0usize; len];
        loop {
            let z: Vec<MPoly> = idx.iter().map(|&i| powers[i].clone()).collect();
            if !tau_is_zero(&z)? {
                report.counterexamples.push(format!("forward {}", describe(&z)));
            }
            report.forward_checked += 1;
            let mut k = 0;
            while k < len {
                idx[k] += 1;
                if idx[k] < powers.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == len {
                break;
            }
        }
        for _ in 0..samples / 4 {
            let z: Vec<MPoly> = (0..len).map(|_| random_poly(&mut rng, m, nv, root_degree).pow(p)).collect();
            if !tau_is_zero(&z)? {
                report.counterexamples.push(format!("forward {}", describe(&z)));
            }
            report.forward_checked += 1;
        }
    }
    while report.reverse_checked < samples {
        let len = rng.gen_range(1..=max_len);
        let z: Vec<MPoly> = (0..len).map(|_| random_poly(&mut rng, m, nv, max_degree)).collect();
        if z.iter().all(MPoly::is_pth_power) {
            continue;
        }
        if tau(&z)?.iter().all(MPoly::is_zero) {
            report.counterexamples.push(format!("reverse {}", describe(&z)));
        }
        report.reverse_checked += 1;
    }
    Ok(report)
}

#[derive(Serialize, Deserialize)]
struct FormJson {
    degree: String,
    terms: BTreeMap<String, MPoly>,
}

impl Serialize for DiffForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FormJson {
            degree: self.degree.to_string(),
            terms: self
                .terms
                .iter()
                .map(|(idx, f)| (idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","), f.clone()))
                .collect(),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests;
