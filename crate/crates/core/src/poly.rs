//! Commutative multivariate polynomials over Z/p^e.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::zmod::Modulus;

/// Exponent vector of a monomial.
pub type Exponents = Vec<u32>;

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    modulus: Modulus,
    nvars: usize,
    terms: BTreeMap<Exponents, u64>,
}

impl MPoly {
    pub fn zero(modulus: Modulus, nvars: usize) -> Self {
        Self { modulus, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(modulus: Modulus, nvars: usize, c: u64) -> Self {
        let mut p = Self::zero(modulus, nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn monomial(modulus: Modulus, exps: &[u32], c: u64) -> Self {
        let mut p = Self::zero(modulus, exps.len());
        p.add_term(exps.to_vec(), c);
        p
    }

    pub fn var(modulus: Modulus, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(modulus, &e, 1)
    }

    pub fn from_terms(modulus: Modulus, nvars: usize, terms: impl IntoIterator<Item = (Exponents, u64)>) -> Self {
        let mut p = Self::zero(modulus, nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, u64> {
        &self.terms
    }

    pub fn coeff(&self, e: &[u32]) -> u64 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Exponents, c: u64) {
        debug_assert_eq!(e.len(), self.nvars);
        let c = self.modulus.reduce(c);
        if c == 0 {
            return;
        }
        let m = self.modulus;
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = m.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            modulus: self.modulus,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), self.modulus.neg(*c))).collect(),
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u64) -> MPoly {
        let mut out = MPoly::zero(self.modulus, self.nvars);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), self.modulus.mul(*x, c));
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.modulus, self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, self.modulus.mul(*ca, *cb));
            }
        }
        out
    }

    pub fn pow(&self, mut k: u64) -> MPoly {
        let mut acc = MPoly::constant(self.modulus, self.nvars, 1);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> MPoly {
        let mut out = MPoly::zero(self.modulus, self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            out.add_term(f, self.modulus.mul(*c, e[i] as u64 % self.modulus.value));
        }
        out
    }

    /// Whether this is a p-th power over F_p: all exponents divisible by p
    /// (coefficients are automatically p-th powers in a prime field).
    pub fn is_pth_power(&self) -> bool {
        let p = self.modulus.p as u32;
        self.terms.keys().all(|e| e.iter().all(|x| x % p == 0))
    }

    /// Same coefficients read in Z/p^f.
    pub fn reduce_to(&self, modulus: Modulus) -> MPoly {
        MPoly::from_terms(modulus, self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), *c)))
    }

    /// Homogeneous component of the given multidegree.
    pub fn homogeneous_part(&self, total: u32) -> MPoly {
        MPoly::from_terms(
            self.modulus,
            self.nvars,
            self.terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == total)
                .map(|(e, c)| (e.clone(), *c)),
        )
    }
}

/// All exponent vectors in `nvars` variables with total degree exactly `d`.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Exponents> {
    if nvars == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials_of_degree(nvars - 1, d - first) {
            let mut e = vec![first];
            e.append(&mut rest);
            out.push(e);
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    p: String,
    e: u32,
    nvars: usize,
    terms: BTreeMap<String, String>,
}

fn exps_key(e: &[u32]) -> String {
    e.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl Serialize for MPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyJson {
            p: self.modulus.p.to_string(),
            e: self.modulus.e,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (exps_key(e), c.to_string())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = PolyJson::deserialize(d)?;
        let modulus = Modulus::new(j.p.parse().map_err(D::Error::custom)?, j.e).map_err(D::Error::custom)?;
        let mut p = MPoly::zero(modulus, j.nvars);
        for (k, v) in j.terms {
            let e: Result<Vec<u32>, _> = if k.is_empty() { Ok(vec![]) } else { k.split(',').map(str::parse).collect() };
            let e = e.map_err(D::Error::custom)?;
            if e.len() != j.nvars {
                return Err(D::Error::custom("exponent arity"));
            }
            p.add_term(e, v.parse().map_err(D::Error::custom)?);
        }
        Ok(p)
    }
}
