//! Coefficient rings for Witt vectors.
//!
//! A ring is a small descriptor value; its elements are plain data. Keeping
//! the context out of the elements lets the same element type (for example
//! `u64` residues) serve several moduli.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::poly::MPoly;
use crate::zmod::Modulus;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("product exceeds the degree bound {bound}")]
    TruncationOverflow { bound: u32 },
}

pub trait CoeffRing: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, RingError>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// `Some(p)` when the ring is an F_p-algebra, enabling the
    /// componentwise-Frobenius fast path.
    fn prime_characteristic(&self) -> Option<u64> {
        None
    }

    /// `Some(k)` when every element satisfies `a^(e + k) = a^e` for `e >= 1`,
    /// so exponents can be reduced before evaluating polynomial functions.
    fn exponent_period(&self) -> Option<u32> {
        None
    }

    /// Exact division by an integer, for torsion-free rings only.
    fn div_exact(&self, _a: &Self::Elem, _d: &BigInt) -> Option<Self::Elem> {
        None
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(n))
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Result<Self::Elem, RingError> {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    fn scale_int(&self, a: &Self::Elem, n: &BigInt) -> Result<Self::Elem, RingError> {
        self.mul(&self.from_bigint(n), a)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl CoeffRing for Integers {
    type Elem = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_bigint(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> Result<BigInt, RingError> {
        Ok(a * b)
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn div_exact(&self, a: &BigInt, d: &BigInt) -> Option<BigInt> {
        let (q, r) = a.div_rem(d);
        r.is_zero().then_some(q)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl CoeffRing for Rationals {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> Result<BigRational, RingError> {
        Ok(a * b)
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn div_exact(&self, a: &BigRational, d: &BigInt) -> Option<BigRational> {
        (!d.is_zero()).then(|| a / BigRational::from_integer(d.clone()))
    }
}

/// Z/p^e with residues in `[0, p^e)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZMod {
    pub modulus: Modulus,
}

impl ZMod {
    pub fn new(modulus: Modulus) -> Self {
        Self { modulus }
    }
}

pub(crate) fn bigint_mod(n: &BigInt, m: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(m));
    r.to_u64().expect("residue fits")
}

impl CoeffRing for ZMod {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.modulus.value
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        if let Some(v) = n.to_i128() {
            self.modulus.reduce_i128(v)
        } else {
            bigint_mod(n, self.modulus.value)
        }
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        self.modulus.add(*a, *b)
    }
    fn neg(&self, a: &u64) -> u64 {
        self.modulus.neg(*a)
    }
    fn mul(&self, a: &u64, b: &u64) -> Result<u64, RingError> {
        Ok(self.modulus.mul(*a, *b))
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn prime_characteristic(&self) -> Option<u64> {
        (self.modulus.e == 1).then_some(self.modulus.p)
    }
    fn exponent_period(&self) -> Option<u32> {
        (self.modulus.e == 1).then_some(self.modulus.p as u32 - 1)
    }
}

/// Multivariate polynomials over Z/p^e in `nvars` variables with a hard
/// total-degree bound: products that would exceed it are errors, never
/// silently truncated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolyRing {
    pub modulus: Modulus,
    pub nvars: usize,
    pub max_degree: u32,
}

impl PolyRing {
    pub fn new(modulus: Modulus, nvars: usize, max_degree: u32) -> Self {
        Self { modulus, nvars, max_degree }
    }

    pub fn var(&self, i: usize) -> MPoly {
        MPoly::var(self.modulus, self.nvars, i)
    }

    pub fn monomial(&self, exps: &[u32], c: u64) -> MPoly {
        MPoly::monomial(self.modulus, exps, c)
    }
}

impl CoeffRing for PolyRing {
    type Elem = MPoly;
    fn zero(&self) -> MPoly {
        MPoly::zero(self.modulus, self.nvars)
    }
    fn one(&self) -> MPoly {
        MPoly::constant(self.modulus, self.nvars, 1)
    }
    fn from_bigint(&self, n: &BigInt) -> MPoly {
        let c = if n.is_negative() || n.bits() > 63 {
            bigint_mod(n, self.modulus.value)
        } else {
            n.to_u64().unwrap() % self.modulus.value
        };
        MPoly::constant(self.modulus, self.nvars, c)
    }
    fn add(&self, a: &MPoly, b: &MPoly) -> MPoly {
        a.add(b)
    }
    fn neg(&self, a: &MPoly) -> MPoly {
        a.neg()
    }
    fn mul(&self, a: &MPoly, b: &MPoly) -> Result<MPoly, RingError> {
        if a.is_zero() || b.is_zero() {
            return Ok(self.zero());
        }
        if a.total_degree() + b.total_degree() > self.max_degree {
            // the leading terms may still cancel mod p^e; decide exactly
            let prod = a.mul(b);
            if prod.total_degree() > self.max_degree {
                return Err(RingError::TruncationOverflow { bound: self.max_degree });
            }
            return Ok(prod);
        }
        Ok(a.mul(b))
    }
    fn is_zero(&self, a: &MPoly) -> bool {
        a.is_zero()
    }
    fn prime_characteristic(&self) -> Option<u64> {
        (self.modulus.e == 1).then_some(self.modulus.p)
    }
}
