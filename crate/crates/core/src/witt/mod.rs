//! p-typical Witt vectors over a pluggable coefficient ring.

mod axioms;
mod universal;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::ring::{CoeffRing, Integers, RingError, ZMod};
use crate::zmod::Modulus;

pub use axioms::{witt_axioms_check, AxiomCheck, WittAxiomsReport};
pub use universal::{
    cache_key, ghost_poly, install_universal_polynomials, witt_universal_polynomials, IntPoly, WittPolys,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WittError {
    #[error("Witt vectors of lengths {left} and {right} cannot be combined")]
    MixedLength { left: usize, right: usize },
    #[error("Frobenius needs length at least 2")]
    LengthUnderflow,
    #[error("ghost vector is not in the image")]
    NotInImage,
    #[error("unsupported parameters p={p}, n={n}")]
    BadParams { p: u64, n: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("cache entry unreadable: {0}")]
    Cache(String),
}

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

pub(crate) fn check_params(p: u64, n: usize) -> Result<(), WittError> {
    if p < 3 || !is_prime(p) || n == 0 || n > 8 {
        return Err(WittError::BadParams { p, n });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittVector<E> {
    pub p: u64,
    pub comps: Vec<E>,
}

impl<E> WittVector<E> {
    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }
}

/// `W_n(R)` for a fixed prime, length and coefficient ring.
#[derive(Clone, Debug)]
pub struct WittRing<R: CoeffRing> {
    ring: R,
    p: u64,
    n: usize,
    compiled: Arc<Compiled<R::Elem>>,
}

/// A universal polynomial with coefficients mapped into the coefficient ring;
/// terms whose coefficient vanishes there are dropped.
#[derive(Debug)]
struct RingPoly<E> {
    terms: Vec<(Vec<(usize, u32)>, E)>,
}

#[derive(Debug)]
struct Compiled<E> {
    sum: Vec<RingPoly<E>>,
    prod: Vec<RingPoly<E>>,
    neg: Vec<RingPoly<E>>,
    frobenius: Vec<RingPoly<E>>,
}

fn compile<R: CoeffRing>(ring: &R, polys: &[IntPoly]) -> Vec<RingPoly<R::Elem>> {
    let period = ring.exponent_period();
    let reduce = |e: u32| match period {
        Some(k) if e > k => (e - 1) % k + 1,
        _ => e,
    };
    polys
        .iter()
        .map(|q| {
            let mut merged: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
            for (exps, c) in &q.terms {
                *merged.entry(exps.iter().map(|&e| reduce(e)).collect()).or_default() += c;
            }
            RingPoly {
                terms: merged
                    .into_iter()
                    .filter_map(|(exps, c)| {
                        let c = ring.from_bigint(&c);
                        let vars = exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(v, &e)| (v, e)).collect();
                        (!ring.is_zero(&c)).then_some((vars, c))
                    })
                    .collect(),
            }
        })
        .collect()
}

/// Evaluates an integral polynomial at ring elements.
struct Evaluator<'a, R: CoeffRing> {
    ring: &'a R,
    args: &'a [R::Elem],
    powers: HashMap<(usize, u32), R::Elem>,
}

impl<'a, R: CoeffRing> Evaluator<'a, R> {
    fn new(ring: &'a R, args: &'a [R::Elem]) -> Self {
        Self { ring, args, powers: HashMap::new() }
    }

    fn power(&mut self, var: usize, e: u32) -> Result<R::Elem, RingError> {
        if let Some(v) = self.powers.get(&(var, e)) {
            return Ok(v.clone());
        }
        let v = self.ring.pow(&self.args[var], e as u64)?;
        self.powers.insert((var, e), v.clone());
        Ok(v)
    }

    fn eval(&mut self, poly: &RingPoly<R::Elem>) -> Result<R::Elem, RingError> {
        let mut acc = self.ring.zero();
        'terms: for (vars, c) in &poly.terms {
            let mut term = c.clone();
            for &(var, e) in vars {
                if self.ring.is_zero(&self.args[var]) {
                    continue 'terms;
                }
                let pw = self.power(var, e)?;
                term = self.ring.mul(&term, &pw)?;
            }
            acc = self.ring.add(&acc, &term);
        }
        Ok(acc)
    }
}

impl<R: CoeffRing> WittRing<R> {
    pub fn new(ring: R, p: u64, n: usize) -> Result<Self, WittError> {
        let polys = witt_universal_polynomials(p, n)?;
        let compiled = Arc::new(Compiled {
            sum: compile(&ring, &polys.sum),
            prod: compile(&ring, &polys.prod),
            neg: compile(&ring, &polys.neg),
            frobenius: compile(&ring, &polys.frobenius),
        });
        Ok(Self { ring, p, n, compiled })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The same coefficient ring at another length.
    pub fn with_len(&self, n: usize) -> Result<Self, WittError> {
        Self::new(self.ring.clone(), self.p, n)
    }

    fn check(&self, a: &WittVector<R::Elem>) -> Result<(), WittError> {
        if a.len() != self.n || a.p != self.p {
            return Err(WittError::MixedLength { left: self.n, right: a.len() });
        }
        Ok(())
    }

    pub fn from_components(&self, comps: Vec<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        let v = WittVector { p: self.p, comps };
        self.check(&v)?;
        Ok(v)
    }

    pub fn zero(&self) -> WittVector<R::Elem> {
        WittVector { p: self.p, comps: vec![self.ring.zero(); self.n] }
    }

    pub fn one(&self) -> WittVector<R::Elem> {
        self.teichmuller(self.ring.one())
    }

    pub fn teichmuller(&self, a: R::Elem) -> WittVector<R::Elem> {
        let mut comps = vec![self.ring.zero(); self.n];
        comps[0] = a;
        WittVector { p: self.p, comps }
    }

    fn binary(&self, polys: &[RingPoly<R::Elem>], a: &WittVector<R::Elem>, b: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        self.check(a)?;
        if b.len() != self.n {
            return Err(WittError::MixedLength { left: a.len(), right: b.len() });
        }
        let args: Vec<R::Elem> = a.comps.iter().chain(&b.comps).cloned().collect();
        let mut ev = Evaluator::new(&self.ring, &args);
        let comps = polys.iter().map(|q| ev.eval(q)).collect::<Result<Vec<_>, _>>()?;
        Ok(WittVector { p: self.p, comps })
    }

    pub fn add(&self, a: &WittVector<R::Elem>, b: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        self.binary(&self.compiled.sum, a, b)
    }

    pub fn mul(&self, a: &WittVector<R::Elem>, b: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        self.binary(&self.compiled.prod, a, b)
    }

    pub fn neg(&self, a: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        self.check(a)?;
        // for odd p the negation polynomials are -x_i
        let comps = a.comps.iter().map(|x| self.ring.neg(x)).collect();
        Ok(WittVector { p: self.p, comps })
    }

    /// Negation through the universal polynomials; agrees with [`Self::neg`].
    pub fn neg_universal(&self, a: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        self.check(a)?;
        let mut ev = Evaluator::new(&self.ring, &a.comps);
        let comps = self.compiled.neg.iter().map(|q| ev.eval(q)).collect::<Result<Vec<_>, _>>()?;
        Ok(WittVector { p: self.p, comps })
    }

    pub fn sub(&self, a: &WittVector<R::Elem>, b: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        self.add(a, &self.neg(b)?)
    }

    /// The image of an integer, i.e. the vector with all ghost components `k`.
    pub fn from_int(&self, k: &BigInt) -> Result<WittVector<R::Elem>, WittError> {
        let zr = WittRing::new(Integers, self.p, self.n)?;
        let w = zr.from_ghost(&vec![k.clone(); self.n])?;
        Ok(WittVector { p: self.p, comps: w.comps.iter().map(|c| self.ring.from_bigint(c)).collect() })
    }

    pub fn scale_int(&self, k: &BigInt, a: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        self.mul(&self.from_int(k)?, a)
    }

    /// `V(a_0,…,a_{n-1}) = (0,a_0,…,a_{n-1})`, of length `n+1`.
    pub fn verschiebung(&self, a: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        self.check(a)?;
        let mut comps = Vec::with_capacity(self.n + 1);
        comps.push(self.ring.zero());
        comps.extend(a.comps.iter().cloned());
        Ok(WittVector { p: self.p, comps })
    }

    /// Frobenius `W_n → W_{n-1}`; componentwise p-th powers in characteristic p.
    pub fn frobenius(&self, a: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        self.check(a)?;
        if self.n < 2 {
            return Err(WittError::LengthUnderflow);
        }
        if self.ring.prime_characteristic() == Some(self.p) {
            let comps = a.comps[..self.n - 1]
                .iter()
                .map(|x| self.ring.pow(x, self.p))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(WittVector { p: self.p, comps });
        }
        self.frobenius_universal(a)
    }

    pub fn frobenius_universal(&self, a: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        self.check(a)?;
        if self.n < 2 {
            return Err(WittError::LengthUnderflow);
        }
        let mut ev = Evaluator::new(&self.ring, &a.comps);
        let comps = self.compiled.frobenius.iter().map(|q| ev.eval(q)).collect::<Result<Vec<_>, _>>()?;
        Ok(WittVector { p: self.p, comps })
    }

    /// Restriction `W_n → W_{n-1}`, dropping the last component.
    pub fn restrict(&self, a: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>, WittError> {
        self.check(a)?;
        if self.n < 2 {
            return Err(WittError::LengthUnderflow);
        }
        Ok(WittVector { p: self.p, comps: a.comps[..self.n - 1].to_vec() })
    }

    /// `ghost_i = Σ_{j≤i} p^j a_j^{p^{i-j}}`.
    pub fn ghost(&self, a: &WittVector<R::Elem>) -> Result<Vec<R::Elem>, WittError> {
        self.check(a)?;
        let mut out = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut acc = self.ring.zero();
            for j in 0..=i {
                let pw = self.ring.pow(&a.comps[j], self.p.pow((i - j) as u32))?;
                let t = self.ring.scale_int(&pw, &BigInt::from(self.p).pow(j as u32))?;
                acc = self.ring.add(&acc, &t);
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Inverse of [`Self::ghost`] over torsion-free rings.
    pub fn from_ghost(&self, g: &[R::Elem]) -> Result<WittVector<R::Elem>, WittError> {
        if g.len() != self.n {
            return Err(WittError::MixedLength { left: self.n, right: g.len() });
        }
        let mut comps: Vec<R::Elem> = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut rest = g[i].clone();
            for (j, a) in comps.iter().enumerate() {
                let pw = self.ring.pow(a, self.p.pow((i - j) as u32))?;
                let t = self.ring.scale_int(&pw, &BigInt::from(self.p).pow(j as u32))?;
                rest = self.ring.sub(&rest, &t);
            }
            let a = self
                .ring
                .div_exact(&rest, &BigInt::from(self.p).pow(i as u32))
                .ok_or(WittError::NotInImage)?;
            comps.push(a);
        }
        Ok(WittVector { p: self.p, comps })
    }
}

/// Invariant factors (as exponents of p) of the additive group of `W_n(F_p)`,
/// read off from the sizes of its p^k-torsion subgroups by enumeration.
pub fn witt_fp_invariant_factors(p: u64, n: usize) -> Result<Vec<u32>, WittError> {
    let fp = ZMod::new(Modulus::new(p, 1).map_err(|_| WittError::BadParams { p, n })?);
    let w = WittRing::new(fp, p, n)?;
    let total = (p as usize).pow(n as u32);
    let mut all = Vec::with_capacity(total);
    for mut idx in 0..total {
        let mut comps = Vec::with_capacity(n);
        for _ in 0..n {
            comps.push((idx % p as usize) as u64);
            idx /= p as usize;
        }
        all.push(WittVector { p, comps });
    }
    let index = |a: &WittVector<u64>| a.comps.iter().rev().fold(0usize, |acc, &c| acc * p as usize + c as usize);
    // p·a by double-and-add
    let times_p = |a: &WittVector<u64>| -> Result<WittVector<u64>, WittError> {
        let mut acc = w.zero();
        for bit in (0..u64::BITS - p.leading_zeros()).rev() {
            acc = w.add(&acc, &acc)?;
            if (p >> bit) & 1 == 1 {
                acc = w.add(&acc, a)?;
            }
        }
        Ok(acc)
    };
    let mult: Vec<usize> = all.iter().map(|a| times_p(a).map(|x| index(&x))).collect::<Result<_, _>>()?;
    // orders[k] = #{a : p^k a = 0}
    let mut counts = vec![0usize; n + 1];
    for start in 0..total {
        let (mut x, mut k) = (start, 0);
        while x != 0 {
            x = mult[x];
            k += 1;
            if k > n {
                return Err(WittError::NotInImage);
            }
        }
        for c in counts.iter_mut().skip(k) {
            *c += 1;
        }
    }
    // |G[p^k]| = p^{Σ min(k, e_i)}, so the number of summands with e_i ≥ k is
    // log_p(|G[p^k]| / |G[p^{k-1}]|)
    let logp = |m: usize| -> u32 {
        let mut m = m;
        let mut l = 0;
        while m > 1 {
            m /= p as usize;
            l += 1;
        }
        l
    };
    let at_least: Vec<u32> = (1..=n).map(|k| logp(counts[k]) - logp(counts[k - 1])).collect();
    let mut out = Vec::new();
    for k in 1..=n {
        let next = if k < n { at_least[k] } else { 0 };
        for _ in 0..(at_least[k - 1] - next) {
            out.push(k as u32);
        }
    }
    out.sort_unstable();
    Ok(out)
}

impl<R: CoeffRing> WittRing<R> {
    pub fn is_zero(&self, a: &WittVector<R::Elem>) -> bool {
        a.comps.iter().all(|c| self.ring.is_zero(c))
    }
}

#[cfg(test)]
mod tests;
