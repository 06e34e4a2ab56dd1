use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::WeylError;
use crate::zmod::Modulus;

thread_local! {
    static PASCAL: RefCell<HashMap<u64, Vec<Vec<u64>>>> = RefCell::new(HashMap::new());
}

/// `C(n, k) mod m`, from a Pascal triangle grown on demand.
pub fn binom_mod(n: u32, k: u32, m: Modulus) -> u64 {
    if k > n {
        return 0;
    }
    PASCAL.with(|cell| {
        let mut map = cell.borrow_mut();
        let rows = map.entry(m.value).or_insert_with(|| vec![vec![1 % m.value]]);
        while rows.len() <= n as usize {
            let prev = rows.last().unwrap();
            let mut next = vec![1 % m.value; prev.len() + 1];
            for i in 1..prev.len() {
                next[i] = m.add(prev[i - 1], prev[i]);
            }
            rows.push(next);
        }
        rows[n as usize][k as usize]
    })
}

/// `a (a-1) ⋯ (a-k+1) mod m`.
pub fn falling_mod(a: u32, k: u32, m: Modulus) -> u64 {
    let mut acc = 1 % m.value;
    for i in 0..k {
        acc = m.mul(acc, (a - i) as u64 % m.value);
    }
    acc
}

/// Element `Σ c_{ab} x^a y^b` of the Weyl algebra over Z/p^N, normal ordered
/// (x left of y), with the relation `yx = xy + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NcPoly {
    modulus: Modulus,
    max_degree: u32,
    terms: BTreeMap<(u32, u32), u64>,
}

impl NcPoly {
    pub fn zero(modulus: Modulus, max_degree: u32) -> Self {
        Self { modulus, max_degree, terms: BTreeMap::new() }
    }

    pub fn monomial(modulus: Modulus, max_degree: u32, a: u32, b: u32, c: u64) -> Self {
        let mut out = Self::zero(modulus, max_degree);
        out.add_term(a, b, c);
        out
    }

    pub fn constant(modulus: Modulus, max_degree: u32, c: u64) -> Self {
        Self::monomial(modulus, max_degree, 0, 0, c)
    }

    pub fn one(modulus: Modulus, max_degree: u32) -> Self {
        Self::constant(modulus, max_degree, 1)
    }

    pub fn x(modulus: Modulus, max_degree: u32) -> Self {
        Self::monomial(modulus, max_degree, 1, 0, 1)
    }

    pub fn y(modulus: Modulus, max_degree: u32) -> Self {
        Self::monomial(modulus, max_degree, 0, 1, 1)
    }

    pub fn from_terms(modulus: Modulus, max_degree: u32, terms: impl IntoIterator<Item = ((u32, u32), u64)>) -> Self {
        let mut out = Self::zero(modulus, max_degree);
        for ((a, b), c) in terms {
            out.add_term(a, b, c);
        }
        out
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn with_max_degree(mut self, d: u32) -> Self {
        self.max_degree = d;
        self
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), u64> {
        &self.terms
    }

    pub fn coeff(&self, a: u32, b: u32) -> u64 {
        self.terms.get(&(a, b)).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, a: u32, b: u32, c: u64) {
        let c = self.modulus.reduce(c);
        if c == 0 {
            return;
        }
        let s = self.modulus.add(self.coeff(a, b), c);
        if s == 0 {
            self.terms.remove(&(a, b));
        } else {
            self.terms.insert((a, b), s);
        }
    }

    /// Bernstein degree.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(a, b)| a + b).max().unwrap_or(0)
    }

    fn check(&self, o: &NcPoly) -> Result<(), WeylError> {
        if self.modulus != o.modulus {
            return Err(WeylError::ModulusMismatch);
        }
        Ok(())
    }

    pub fn add(&self, o: &NcPoly) -> Result<NcPoly, WeylError> {
        self.check(o)?;
        let mut out = self.clone();
        out.max_degree = self.max_degree.min(o.max_degree);
        for (&(a, b), &c) in &o.terms {
            out.add_term(a, b, c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> NcPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.modulus.neg(*c);
        }
        out
    }

    pub fn sub(&self, o: &NcPoly) -> Result<NcPoly, WeylError> {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: u64) -> NcPoly {
        let mut out = NcPoly::zero(self.modulus, self.max_degree);
        for (&(a, b), &x) in &self.terms {
            out.add_term(a, b, self.modulus.mul(x, c));
        }
        out
    }

    /// Normal-ordered product using `y^b x^a = Σ_k k!·C(a,k)·C(b,k)·x^{a-k} y^{b-k}`.
    pub fn mul(&self, o: &NcPoly) -> Result<NcPoly, WeylError> {
        self.check(o)?;
        let bound = self.max_degree.min(o.max_degree);
        let m = self.modulus;
        let mut acc: HashMap<(u32, u32), u64> = HashMap::new();
        for (&(a1, b1), &c1) in &self.terms {
            for (&(a2, b2), &c2) in &o.terms {
                let c = m.mul(c1, c2);
                for k in 0..=a2.min(b1) {
                    let r = m.mul(falling_mod(a2, k, m), binom_mod(b1, k, m));
                    if r == 0 {
                        continue;
                    }
                    let slot = acc.entry((a1 + a2 - k, b1 + b2 - k)).or_insert(0);
                    *slot = m.add(*slot, m.mul(c, r));
                }
            }
        }
        let out = NcPoly { modulus: m, max_degree: bound, terms: acc.into_iter().filter(|(_, c)| *c != 0).collect() };
        // leading terms may cancel mod p^N, so the bound is checked on the exact result
        if out.degree() > bound {
            return Err(WeylError::TruncationOverflow { bound });
        }
        Ok(out)
    }

    pub fn pow(&self, mut k: u64) -> Result<NcPoly, WeylError> {
        let mut acc = NcPoly::one(self.modulus, self.max_degree);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn commutator(&self, o: &NcPoly) -> Result<NcPoly, WeylError> {
        self.mul(o)?.sub(&o.mul(self)?)
    }

    /// `∂_x` on normal-ordered monomials; equals `-[f, y]`.
    pub fn d_x(&self) -> NcPoly {
        let mut out = NcPoly::zero(self.modulus, self.max_degree);
        for (&(a, b), &c) in &self.terms {
            if a > 0 {
                out.add_term(a - 1, b, self.modulus.mul(c, a as u64 % self.modulus.value));
            }
        }
        out
    }

    /// `∂_y` on normal-ordered monomials; equals `[f, x]`.
    pub fn d_y(&self) -> NcPoly {
        let mut out = NcPoly::zero(self.modulus, self.max_degree);
        for (&(a, b), &c) in &self.terms {
            if b > 0 {
                out.add_term(a, b - 1, self.modulus.mul(c, b as u64 % self.modulus.value));
            }
        }
        out
    }

    pub fn is_central(&self) -> bool {
        self.d_x().is_zero() && self.d_y().is_zero()
    }

    /// Reduction to `Z/p^e` for `e` at most the current exponent.
    pub fn reduce_to(&self, e: u32) -> Result<NcPoly, WeylError> {
        if e > self.modulus.e {
            return Err(WeylError::ModulusMismatch);
        }
        let m = Modulus::new(self.modulus.p, e).map_err(|_| WeylError::ModulusMismatch)?;
        Ok(NcPoly::from_terms(m, self.max_degree, self.terms.iter().map(|(k, c)| (*k, *c))))
    }

    /// Canonical lift to `Z/p^e` (residues read as integers in `[0, p^N)`).
    pub fn lift_to(&self, e: u32) -> Result<NcPoly, WeylError> {
        let m = Modulus::new(self.modulus.p, e).map_err(|_| WeylError::ModulusMismatch)?;
        if e < self.modulus.e {
            return self.reduce_to(e);
        }
        Ok(NcPoly::from_terms(m, self.max_degree, self.terms.iter().map(|(k, c)| (*k, *c))))
    }

    /// `p^k · z̃` in `Z/p^{N+k}`; well defined on classes mod `p^N`.
    pub fn times_p_pow(&self, k: u32) -> Result<NcPoly, WeylError> {
        let up = self.lift_to(self.modulus.e + k)?;
        let f = up.modulus.p_pow(k);
        Ok(up.scale(f))
    }

    /// Exact division by `p^k`, landing in `Z/p^{N-k}`.
    pub fn div_p_pow(&self, k: u32) -> Result<NcPoly, WeylError> {
        if k >= self.modulus.e {
            return Err(WeylError::NotDivisible { k });
        }
        let f = self.modulus.p_pow(k);
        let m = Modulus::new(self.modulus.p, self.modulus.e - k).map_err(|_| WeylError::ModulusMismatch)?;
        let mut out = NcPoly::zero(m, self.max_degree);
        for (&(a, b), &c) in &self.terms {
            if c % f != 0 {
                return Err(WeylError::NotDivisible { k });
            }
            out.add_term(a, b, c / f);
        }
        Ok(out)
    }

    /// Terms of Bernstein degree exactly `d`.
    pub fn degree_part(&self, d: u32) -> NcPoly {
        NcPoly::from_terms(
            self.modulus,
            self.max_degree,
            self.terms.iter().filter(|((a, b), _)| a + b == d).map(|(k, c)| (*k, *c)),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct NcJson {
    p: String,
    e: String,
    max_degree: String,
    terms: BTreeMap<String, String>,
}

impl Serialize for NcPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        NcJson {
            p: self.modulus.p.to_string(),
            e: self.modulus.e.to_string(),
            max_degree: self.max_degree.to_string(),
            terms: self.terms.iter().map(|((a, b), c)| (format!("{a},{b}"), c.to_string())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NcPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = NcJson::deserialize(d)?;
        let p: u64 = j.p.parse().map_err(D::Error::custom)?;
        let e: u32 = j.e.parse().map_err(D::Error::custom)?;
        let m = Modulus::new(p, e).map_err(D::Error::custom)?;
        let mut out = NcPoly::zero(m, j.max_degree.parse().map_err(D::Error::custom)?);
        for (k, c) in j.terms {
            let (a, b) = k.split_once(',').ok_or_else(|| D::Error::custom("bad monomial key"))?;
            out.add_term(
                a.parse().map_err(D::Error::custom)?,
                b.parse().map_err(D::Error::custom)?,
                c.parse().map_err(D::Error::custom)?,
            );
        }
        Ok(out)
    }
}
