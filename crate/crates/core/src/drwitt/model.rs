use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use super::{DrwError, WittWeight};
use crate::polydiff::subsets;
use crate::zmod::{howell_form, kernel, subquotient, Modulus, PresentedModule, ZModMatrix};

/// Sign of `ω_j ∧ ω_I` relative to the sorted `ω_{I ∪ j}`.
fn insert_sign(j: usize, set: &[usize]) -> bool {
    set.iter().filter(|&&i| i < j).count() % 2 == 1
}

/// Sorted union of two disjoint index sets and the sign of `ω_I ∧ ω_J`.
pub(crate) fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut inv = 0usize;
    for &x in a {
        for &y in b {
            if x == y {
                return None;
            }
            if x > y {
                inv += 1;
            }
        }
    }
    let mut out: Vec<usize> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    Some((out, inv % 2 == 1))
}

/// Span of rows, padded so an empty list is still a valid matrix.
pub(crate) fn span(modulus: Modulus, dim: usize, rows: &[Vec<u64>]) -> ZModMatrix {
    let mut all = rows.to_vec();
    if all.is_empty() {
        all.push(vec![0; dim]);
    }
    ZModMatrix::from_rows(modulus, dim, &all).expect("row width")
}

/// Weight piece `W_nΩ^q_k` realized inside the integral forms
/// `⊕_I Z_p · T^k dlog T_I` (over `I ⊂ supp k`), computed mod `p^N`.
#[derive(Clone, Debug)]
pub struct DrwWeightModule {
    pub n: u32,
    pub q: usize,
    pub weight: WittWeight,
    /// Index sets `I` labelling the ambient coordinates.
    pub index_sets: Vec<Vec<usize>>,
    /// Integral forms of this weight.
    pub lattice: Vec<Vec<u64>>,
    /// `V^n E + dV^n E` in this weight.
    pub filtration: Vec<Vec<u64>>,
    pub module: PresentedModule,
}

impl DrwWeightModule {
    pub fn length(&self) -> u32 {
        self.module.length()
    }

    pub fn invariant_factors(&self) -> Vec<u32> {
        self.module.invariant_factors()
    }

    pub fn dim(&self) -> usize {
        self.index_sets.len()
    }

    /// Normal form: coordinates in `⊕ Z/p^{e_i}`.
    pub fn coordinates(&self, x: &[u64]) -> Result<Vec<u64>, DrwError> {
        if self.index_sets.is_empty() {
            return Ok(Vec::new());
        }
        Ok(self.module.coordinates(x)?)
    }

    pub fn is_zero_class(&self, x: &[u64]) -> Result<bool, DrwError> {
        Ok(self.coordinates(x)?.iter().all(|c| *c == 0))
    }
}

type ModuleKey = (u32, usize, WittWeight);

/// Shared parameters of the integral model: `p`, the number of variables and
/// the largest level used, which fixes the working modulus `p^{3L}`.
#[derive(Debug)]
pub struct DrwContext {
    p: u64,
    m: usize,
    max_level: u32,
    modulus: Modulus,
    cache: Mutex<HashMap<ModuleKey, Arc<DrwWeightModule>>>,
}

impl DrwContext {
    pub fn new(p: u64, m: usize, max_level: u32) -> Result<Self, DrwError> {
        if !crate::witt::is_prime(p) || p < 3 {
            return Err(DrwError::BadParams(format!("p={p} must be an odd prime")));
        }
        if m == 0 || m > 4 || max_level == 0 {
            return Err(DrwError::BadParams(format!("m={m}, max_level={max_level}")));
        }
        let modulus =
            Modulus::new(p, 3 * max_level).map_err(|_| DrwError::BadParams(format!("p^{} too large", 3 * max_level)))?;
        Ok(Self { p, m, max_level, modulus, cache: Mutex::new(HashMap::new()) })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn weight(&self, num: Vec<u64>, den: u32) -> WittWeight {
        WittWeight::new(self.p, num, den)
    }

    pub fn index_sets(&self, k: &WittWeight, q: usize) -> Vec<Vec<usize>> {
        subsets(&k.support(), q)
    }

    fn check_weight(&self, k: &WittWeight) -> Result<(), DrwError> {
        if k.rank() != self.m || k.p() != self.p {
            return Err(DrwError::WeightOverflow(k.to_string()));
        }
        Ok(())
    }

    fn check_level(&self, n: u32) -> Result<(), DrwError> {
        if n == 0 {
            return Err(DrwError::LevelUnderflow);
        }
        if n > self.max_level {
            return Err(DrwError::LevelOverflow { level: n, max: self.max_level });
        }
        Ok(())
    }

    /// Numerator matrix of `d` on weight `k` from degree `q` to `q + 1`;
    /// the true map is this divided by `p^{den(k)}`.
    fn d_numerators(&self, k: &WittWeight, q: usize) -> ZModMatrix {
        let src = self.index_sets(k, q);
        let dst = self.index_sets(k, q + 1);
        let md = self.modulus;
        let mut out = ZModMatrix::zeros(md, src.len(), dst.len());
        let num = k.numerators();
        for (r, set) in src.iter().enumerate() {
            for j in k.support() {
                if set.contains(&j) {
                    continue;
                }
                let mut t = set.clone();
                t.push(j);
                t.sort_unstable();
                let c = dst.binary_search(&t).expect("target index set");
                let v = md.reduce(num[j]);
                let v = if insert_sign(j, set) { md.neg(v) } else { v };
                out.set(r, c, md.add(out.get(r, c), v));
            }
        }
        out
    }

    /// `d` on a coefficient vector of weight `k`; fails if the result is not integral.
    pub fn d_vector(&self, k: &WittWeight, q: usize, a: &[u64]) -> Result<Vec<u64>, DrwError> {
        let dn = self.d_numerators(k, q);
        if dn.cols() == 0 {
            return Ok(Vec::new());
        }
        let t = dn.apply(a)?;
        let c = k.den_exp();
        t.into_iter().map(|x| self.modulus.div_p_pow(x, c).ok_or(DrwError::NotIntegral)).collect()
    }

    /// Integral `q`-forms of weight `k`: coefficients in `Z_p` whose `d` is integral.
    pub fn lattice(&self, k: &WittWeight, q: usize) -> Vec<Vec<u64>> {
        let dim = self.index_sets(k, q).len();
        let identity: Vec<Vec<u64>> =
            (0..dim).map(|i| (0..dim).map(|j| u64::from(i == j)).collect()).collect();
        let c = k.den_exp();
        if dim == 0 || c == 0 {
            return identity;
        }
        let dn = self.d_numerators(k, q);
        if dn.cols() == 0 {
            return identity;
        }
        let md = self.modulus;
        let f = md.p_pow(md.e - c);
        let mut scaled = dn.clone();
        for r in 0..scaled.rows() {
            for col in 0..scaled.cols() {
                scaled.set(r, col, md.mul(dn.get(r, col), f));
            }
        }
        kernel(&scaled)
    }

    /// `V^n E_{p^n k} + dV^n E_{p^n k}` inside the weight-`k` coordinates.
    pub fn filtration(&self, n: u32, k: &WittWeight, q: usize) -> Result<Vec<Vec<u64>>, DrwError> {
        let md = self.modulus;
        let big = k.times_p_pow(n);
        let pn = md.p_pow(n);
        let mut rows: Vec<Vec<u64>> =
            self.lattice(&big, q).into_iter().map(|r| r.into_iter().map(|x| md.mul(x, pn)).collect()).collect();
        if q > 0 {
            for b in self.lattice(&big, q - 1) {
                rows.push(self.d_vector(&big, q - 1, &b)?);
            }
        }
        Ok(rows)
    }

    /// The weight piece `W_nΩ^q_k`.
    pub fn weight_module(&self, n: u32, q: usize, k: &WittWeight) -> Result<Arc<DrwWeightModule>, DrwError> {
        self.check_level(n)?;
        self.check_weight(k)?;
        if q > self.m {
            return Err(DrwError::DegreeOverflow { q, m: self.m });
        }
        let key = (n, q, k.clone());
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let index_sets = self.index_sets(k, q);
        let dim = index_sets.len();
        let (lattice, filtration, module) = if dim == 0 {
            (Vec::new(), Vec::new(), PresentedModule::zero(self.modulus, 0))
        } else if k.den_exp() >= n {
            // denominators beyond p^{n-1} never occur in W_n
            let id: Vec<Vec<u64>> = (0..dim).map(|i| (0..dim).map(|j| u64::from(i == j)).collect()).collect();
            (id.clone(), id, PresentedModule::zero(self.modulus, dim))
        } else {
            let lattice = self.lattice(k, q);
            let filtration = self.filtration(n, k, q)?;
            let module = subquotient(self.modulus, dim, &lattice, &filtration)?;
            (lattice, filtration, module)
        };
        let out = Arc::new(DrwWeightModule { n, q, weight: k.clone(), index_sets, lattice, filtration, module });
        self.cache.lock().expect("cache lock").insert(key, out.clone());
        Ok(out)
    }

    pub fn zero(&self, n: u32, q: usize) -> DrwElement {
        DrwElement { modulus: self.modulus, n, q, parts: BTreeMap::new() }
    }

    /// The unit `1 = [1]` of `W_n(F_p[t])`.
    pub fn one(&self, n: u32) -> DrwElement {
        let mut out = self.zero(n, 0);
        out.parts.insert(WittWeight::zero(self.p, self.m), vec![1]);
        out
    }

    /// `c · T^k dlog T_I` as an element of level `n`.
    pub fn basis_element(&self, n: u32, k: &WittWeight, set: &[usize], c: u64) -> Result<DrwElement, DrwError> {
        let sets = self.index_sets(k, set.len());
        let pos = sets.binary_search(&set.to_vec()).map_err(|_| DrwError::NotIntegral)?;
        let mut v = vec![0; sets.len()];
        v[pos] = self.modulus.reduce(c);
        let mut out = self.zero(n, set.len());
        out.add_part(k.clone(), &v);
        Ok(out)
    }

    pub fn d(&self, x: &DrwElement) -> Result<DrwElement, DrwError> {
        if x.q >= self.m {
            return Ok(self.zero(x.n, x.q + 1));
        }
        let mut out = self.zero(x.n, x.q + 1);
        for (k, a) in &x.parts {
            let v = self.d_vector(k, x.q, a)?;
            out.add_part(k.clone(), &v);
        }
        Ok(out)
    }

    /// `F: W_nΩ^q → W_{n-1}Ω^q`, sending `T^k ω_I` to `T^{pk} ω_I`.
    pub fn frobenius(&self, x: &DrwElement) -> Result<DrwElement, DrwError> {
        if x.n <= 1 {
            return Err(DrwError::LevelUnderflow);
        }
        let mut out = self.zero(x.n - 1, x.q);
        for (k, a) in &x.parts {
            out.add_part(k.times_p_pow(1), a);
        }
        Ok(out)
    }

    /// `V: W_nΩ^q → W_{n+1}Ω^q`, sending `T^k ω_I` to `p T^{k/p} ω_I`.
    pub fn verschiebung(&self, x: &DrwElement) -> Result<DrwElement, DrwError> {
        self.check_level(x.n + 1)?;
        let md = self.modulus;
        let mut out = self.zero(x.n + 1, x.q);
        for (k, a) in &x.parts {
            let v: Vec<u64> = a.iter().map(|c| md.mul(*c, self.p)).collect();
            out.add_part(k.div_p_pow(1), &v);
        }
        Ok(out)
    }

    pub fn restrict(&self, x: &DrwElement) -> Result<DrwElement, DrwError> {
        if x.n <= 1 {
            return Err(DrwError::LevelUnderflow);
        }
        Ok(DrwElement { n: x.n - 1, ..x.clone() })
    }

    pub fn mul(&self, x: &DrwElement, y: &DrwElement) -> Result<DrwElement, DrwError> {
        if x.n != y.n {
            return Err(DrwError::MixedLevel);
        }
        if x.q + y.q > self.m {
            return Err(DrwError::DegreeOverflow { q: x.q + y.q, m: self.m });
        }
        let md = self.modulus;
        let mut out = self.zero(x.n, x.q + y.q);
        for (k, a) in &x.parts {
            let sa = self.index_sets(k, x.q);
            for (l, b) in &y.parts {
                let sb = self.index_sets(l, y.q);
                let kl = k.add(l);
                let st = self.index_sets(&kl, x.q + y.q);
                let mut v = vec![0u64; st.len()];
                for (i, ai) in sa.iter().zip(a) {
                    if *ai == 0 {
                        continue;
                    }
                    for (j, bj) in sb.iter().zip(b) {
                        if *bj == 0 {
                            continue;
                        }
                        let Some((set, neg)) = merge_sign(i, j) else { continue };
                        let pos = st.binary_search(&set).expect("support of a sum");
                        let c = md.mul(*ai, *bj);
                        v[pos] = if neg { md.sub(v[pos], c) } else { md.add(v[pos], c) };
                    }
                }
                out.add_part(kl, &v);
            }
        }
        Ok(out)
    }

    /// Normal form per weight, dropping zero classes.
    pub fn normal_form(&self, x: &DrwElement) -> Result<BTreeMap<WittWeight, Vec<u64>>, DrwError> {
        let mut out = BTreeMap::new();
        for (k, a) in &x.parts {
            let module = self.weight_module(x.n, x.q, k)?;
            if module.module.is_zero() {
                continue;
            }
            let c = module.coordinates(a)?;
            if c.iter().any(|v| *v != 0) {
                out.insert(k.clone(), c);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self, x: &DrwElement) -> Result<bool, DrwError> {
        Ok(self.normal_form(x)?.is_empty())
    }

    pub fn equal(&self, x: &DrwElement, y: &DrwElement) -> Result<bool, DrwError> {
        if x.n != y.n || x.q != y.q {
            return Ok(false);
        }
        self.is_zero(&x.sub(y))
    }

    /// Whether the rows span the same submodule.
    pub(crate) fn same_span(&self, dim: usize, a: &[Vec<u64>], b: &[Vec<u64>]) -> bool {
        if dim == 0 {
            return true;
        }
        howell_form(&span(self.modulus, dim, a)).same_span(&howell_form(&span(self.modulus, dim, b)))
    }
}

/// An element of `W_nΩ^q` given by integral coefficient vectors per weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrwElement {
    modulus: Modulus,
    pub n: u32,
    pub q: usize,
    pub parts: BTreeMap<WittWeight, Vec<u64>>,
}

impl DrwElement {
    pub fn add_part(&mut self, k: WittWeight, v: &[u64]) {
        let md = self.modulus;
        if v.iter().all(|x| md.reduce(*x) == 0) {
            return;
        }
        let slot = self.parts.entry(k.clone()).or_insert_with(|| vec![0; v.len()]);
        for (s, x) in slot.iter_mut().zip(v) {
            *s = md.add(*s, md.reduce(*x));
        }
        if slot.iter().all(|x| *x == 0) {
            self.parts.remove(&k);
        }
    }

    pub fn add(&self, o: &DrwElement) -> DrwElement {
        let mut out = self.clone();
        for (k, v) in &o.parts {
            out.add_part(k.clone(), v);
        }
        out
    }

    pub fn neg(&self) -> DrwElement {
        self.scale(self.modulus.value - 1)
    }

    pub fn sub(&self, o: &DrwElement) -> DrwElement {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: u64) -> DrwElement {
        let md = self.modulus;
        let mut out = DrwElement { parts: BTreeMap::new(), ..self.clone() };
        for (k, v) in &self.parts {
            let w: Vec<u64> = v.iter().map(|x| md.mul(*x, md.reduce(c))).collect();
            out.add_part(k.clone(), &w);
        }
        out
    }

    pub fn scale_i64(&self, c: i64) -> DrwElement {
        let r = self.modulus.reduce_i128(c as i128);
        self.scale(r)
    }
}
