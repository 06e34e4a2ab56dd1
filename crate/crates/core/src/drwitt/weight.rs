use std::fmt;

use serde::{Deserialize, Serialize};

/// A weight `num / p^den` in `Z[1/p]^m_{≥0}`, kept normalized: when `den > 0`
/// some component of `num` is prime to `p`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WittWeight {
    p: u64,
    num: Vec<u64>,
    den: u32,
}

impl WittWeight {
    pub fn new(p: u64, num: Vec<u64>, den: u32) -> Self {
        let mut w = Self { p, num, den };
        w.normalize();
        w
    }

    pub fn integral(p: u64, num: Vec<u64>) -> Self {
        Self::new(p, num, 0)
    }

    pub fn zero(p: u64, m: usize) -> Self {
        Self::new(p, vec![0; m], 0)
    }

    fn normalize(&mut self) {
        while self.den > 0 && self.num.iter().all(|x| x % self.p == 0) {
            for x in &mut self.num {
                *x /= self.p;
            }
            self.den -= 1;
        }
        if self.num.iter().all(|x| *x == 0) {
            self.den = 0;
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.num.len()
    }

    pub fn numerators(&self) -> &[u64] {
        &self.num
    }

    /// Exponent `c` of the denominator `p^c`.
    pub fn den_exp(&self) -> u32 {
        self.den
    }

    pub fn is_integral(&self) -> bool {
        self.den == 0
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|x| *x == 0)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.num.len()).filter(|&i| self.num[i] > 0).collect()
    }

    /// Numerators over the common denominator `p^c` for `c ≥ den_exp`.
    pub fn numerators_over(&self, c: u32) -> Vec<u64> {
        assert!(c >= self.den);
        let f = self.p.pow(c - self.den);
        self.num.iter().map(|x| x * f).collect()
    }

    /// Total weight as `(numerator, p^den)`.
    pub fn total(&self) -> (u64, u64) {
        (self.num.iter().sum(), self.p.pow(self.den))
    }

    pub fn times_p_pow(&self, k: u32) -> Self {
        let shift = k.min(self.den);
        let f = self.p.pow(k - shift);
        Self::new(self.p, self.num.iter().map(|x| x * f).collect(), self.den - shift)
    }

    pub fn div_p_pow(&self, k: u32) -> Self {
        Self::new(self.p, self.num.clone(), self.den + k)
    }

    pub fn add(&self, o: &WittWeight) -> Self {
        let c = self.den.max(o.den);
        let a = self.numerators_over(c);
        let b = o.numerators_over(c);
        Self::new(self.p, a.iter().zip(&b).map(|(x, y)| x + y).collect(), c)
    }

    /// `self - o` when it stays nonnegative.
    pub fn checked_sub(&self, o: &WittWeight) -> Option<Self> {
        let c = self.den.max(o.den);
        let a = self.numerators_over(c);
        let b = o.numerators_over(c);
        let mut out = Vec::with_capacity(a.len());
        for (x, y) in a.iter().zip(&b) {
            out.push(x.checked_sub(*y)?);
        }
        Some(Self::new(self.p, out, c))
    }

    /// Exponent vector `p^s · w` when it is integral.
    pub fn scaled_exponents(&self, s: u32) -> Option<Vec<u32>> {
        if s < self.den {
            return None;
        }
        Some(self.numerators_over(s).iter().map(|x| *x as u32).collect())
    }

    /// All weights with denominator dividing `p^c` and total weight at most `bound`.
    pub fn enumerate(p: u64, m: usize, c: u32, bound: u64) -> Vec<WittWeight> {
        let scale = p.pow(c);
        let mut out = Vec::new();
        let mut cur = vec![0u64; m];
        fn rec(p: u64, c: u32, i: usize, left: u64, cur: &mut Vec<u64>, out: &mut Vec<WittWeight>) {
            if i == cur.len() {
                out.push(WittWeight::new(p, cur.clone(), c));
                return;
            }
            for x in 0..=left {
                cur[i] = x;
                rec(p, c, i + 1, left - x, cur, out);
            }
            cur[i] = 0;
        }
        rec(p, c, 0, bound * scale, &mut cur, &mut out);
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for WittWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .num
            .iter()
            .map(|x| if self.den == 0 { x.to_string() } else { format!("{x}/{}", self.p.pow(self.den)) })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}
