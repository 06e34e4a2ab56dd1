use serde::{Deserialize, Serialize};

use super::model::{DrwContext, DrwElement};
use super::{DrwError, WittWeight};

/// `V^level [t^exp]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WittMonomial {
    pub level: u32,
    pub exp: Vec<u32>,
}

impl WittMonomial {
    pub fn new(level: u32, exp: Vec<u32>) -> Self {
        Self { level, exp }
    }

    pub fn teichmuller(exp: Vec<u32>) -> Self {
        Self::new(0, exp)
    }

    pub fn one(m: usize) -> Self {
        Self::new(0, vec![0; m])
    }

    pub fn weight(&self, p: u64) -> WittWeight {
        WittWeight::new(p, self.exp.iter().map(|x| *x as u64).collect(), self.level)
    }

    pub fn is_constant(&self) -> bool {
        self.exp.iter().all(|x| *x == 0)
    }
}

/// `V^s[t^a] · V^t[t^b] = p^s V^t[t^{p^{t-s} a + b}]` for `s ≤ t`.
pub fn monomial_product(p: u64, x: &WittMonomial, y: &WittMonomial) -> (i64, WittMonomial) {
    let (lo, hi) = if x.level <= y.level { (x, y) } else { (y, x) };
    let shift = (p as u32).pow(hi.level - lo.level);
    let exp = lo.exp.iter().zip(&hi.exp).map(|(a, b)| shift * a + b).collect();
    ((p as i64).pow(lo.level), WittMonomial::new(hi.level, exp))
}

/// `coeff · x_1 ⋯ x_r · dy_1 ∧ ⋯ ∧ dy_q` with `V`-shifted Teichmüller monomials.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DrwSymbol {
    pub coeff: i64,
    pub factors: Vec<WittMonomial>,
    pub diffs: Vec<WittMonomial>,
}

impl DrwSymbol {
    pub fn new(coeff: i64, factors: Vec<WittMonomial>, diffs: Vec<WittMonomial>) -> Self {
        Self { coeff, factors, diffs }
    }

    pub fn function(x: WittMonomial) -> Self {
        Self::new(1, vec![x], Vec::new())
    }

    pub fn exact(y: WittMonomial) -> Self {
        Self::new(1, Vec::new(), vec![y])
    }

    pub fn degree(&self) -> usize {
        self.diffs.len()
    }

    pub fn max_level(&self) -> u32 {
        self.factors.iter().chain(&self.diffs).map(|x| x.level).max().unwrap_or(0)
    }

    pub fn weight(&self, p: u64, m: usize) -> WittWeight {
        self.factors.iter().chain(&self.diffs).fold(WittWeight::zero(p, m), |acc, x| acc.add(&x.weight(p)))
    }

    pub fn scaled(&self, c: i64) -> Self {
        Self { coeff: self.coeff * c, ..self.clone() }
    }

    /// Multiplies the factors out into at most one monomial.
    pub fn reduce_factors(&self, p: u64) -> Self {
        let mut coeff = self.coeff;
        let mut acc: Option<WittMonomial> = None;
        for x in &self.factors {
            acc = Some(match acc {
                None => x.clone(),
                Some(a) => {
                    let (c, r) = monomial_product(p, &a, x);
                    coeff *= c;
                    r
                }
            });
        }
        Self::new(coeff, acc.into_iter().collect(), self.diffs.clone())
    }

    /// Leibniz expansion of `d` over the factors.
    pub fn d(&self) -> Vec<DrwSymbol> {
        let mut out = Vec::new();
        for i in 0..self.factors.len() {
            if self.factors[i].is_constant() {
                continue;
            }
            let mut factors = self.factors.clone();
            let x = factors.remove(i);
            let mut diffs = vec![x];
            diffs.extend(self.diffs.iter().cloned());
            out.push(DrwSymbol::new(self.coeff, factors, diffs));
        }
        out
    }

    /// `F` on each factor: `F V^s = p V^{s-1}`, `F[t^a] = [t^{pa}]`,
    /// `F dV^s = dV^{s-1}`, `F d[t^a] = [t^{(p-1)a}] d[t^a]`.
    pub fn frobenius(&self, p: u64) -> DrwSymbol {
        let mut coeff = self.coeff;
        let mut factors = Vec::new();
        for x in &self.factors {
            if x.level > 0 {
                coeff *= p as i64;
                factors.push(WittMonomial::new(x.level - 1, x.exp.clone()));
            } else {
                factors.push(WittMonomial::teichmuller(x.exp.iter().map(|a| a * p as u32).collect()));
            }
        }
        let mut diffs = Vec::new();
        for y in &self.diffs {
            if y.level > 0 {
                diffs.push(WittMonomial::new(y.level - 1, y.exp.clone()));
            } else {
                factors.push(WittMonomial::teichmuller(y.exp.iter().map(|a| a * (p as u32 - 1)).collect()));
                diffs.push(y.clone());
            }
        }
        DrwSymbol::new(coeff, factors, diffs)
    }

    /// `V(x dy_1 ⋯ dy_q) = V(x) dV(y_1) ⋯ dV(y_q)`.
    pub fn verschiebung(&self, p: u64, m: usize) -> DrwSymbol {
        let r = self.reduce_factors(p);
        let x = r.factors.into_iter().next().unwrap_or_else(|| WittMonomial::one(m));
        let bump = |y: &WittMonomial| WittMonomial::new(y.level + 1, y.exp.clone());
        DrwSymbol::new(r.coeff, vec![bump(&x)], r.diffs.iter().map(bump).collect())
    }

    pub fn mul(&self, o: &DrwSymbol) -> DrwSymbol {
        let mut factors = self.factors.clone();
        factors.extend(o.factors.iter().cloned());
        let mut diffs = self.diffs.clone();
        diffs.extend(o.diffs.iter().cloned());
        DrwSymbol::new(self.coeff * o.coeff, factors, diffs)
    }

    /// Image in the integral model at level `n`.
    pub fn to_element(&self, ctx: &DrwContext, n: u32) -> Result<DrwElement, DrwError> {
        let q = self.degree();
        if q > ctx.rank() {
            return Ok(ctx.zero(n, q));
        }
        let p = ctx.p();
        let md = ctx.modulus();
        let mut acc = ctx.one(n);
        for x in &self.factors {
            let e = ctx.basis_element(n, &x.weight(p), &[], md.p_pow(x.level))?;
            acc = ctx.mul(&acc, &e)?;
        }
        for y in &self.diffs {
            let w = y.weight(p);
            let mut e = ctx.zero(n, 1);
            for i in w.support() {
                e = e.add(&ctx.basis_element(n, &w, &[i], y.exp[i] as u64)?);
            }
            acc = ctx.mul(&acc, &e)?;
        }
        Ok(acc.scale_i64(self.coeff))
    }
}

/// Sum of symbol images; all symbols must share a degree.
pub fn combination_to_element(ctx: &DrwContext, n: u32, terms: &[DrwSymbol]) -> Result<DrwElement, DrwError> {
    let q = terms.first().map(|s| s.degree()).unwrap_or(0);
    let mut acc = ctx.zero(n, q);
    for s in terms {
        if s.degree() != q {
            return Err(DrwError::DegreeOverflow { q: s.degree(), m: q });
        }
        acc = acc.add(&s.to_element(ctx, n)?);
    }
    Ok(acc)
}

/// Monomials `V^s[t^a]` with `s < n` and `a/p^s ≤ k` componentwise, skipping
/// those with `p | a` at positive level (they are `p` times a lower one).
pub fn monomials_below(p: u64, n: u32, k: &WittWeight) -> Vec<WittMonomial> {
    let mut out = Vec::new();
    for s in 0..n {
        let bound: Vec<u64> = if s >= k.den_exp() {
            k.numerators_over(s)
        } else {
            let f = p.pow(k.den_exp() - s);
            k.numerators().iter().map(|x| x / f).collect()
        };
        let mut cur = vec![0u32; bound.len()];
        loop {
            let divisible = cur.iter().all(|a| *a as u64 % p == 0);
            if !(s > 0 && divisible) {
                out.push(WittMonomial::new(s, cur.clone()));
            }
            let mut i = 0;
            while i < cur.len() {
                if (cur[i] as u64) < bound[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
            if i == cur.len() {
                break;
            }
        }
    }
    out
}

/// Symbols `x · dy_1 ⋯ dy_q` of weight exactly `k` at level `n`; their images
/// generate `W_nΩ^q_k`.
pub fn spanning_symbols(p: u64, n: u32, q: usize, k: &WittWeight) -> Vec<DrwSymbol> {
    let m = k.rank();
    let pool: Vec<WittMonomial> = monomials_below(p, n, k).into_iter().filter(|x| !x.is_constant()).collect();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn rec(
        p: u64,
        n: u32,
        m: usize,
        q: usize,
        k: &WittWeight,
        pool: &[WittMonomial],
        start: usize,
        chosen: &mut Vec<usize>,
        used: WittWeight,
        out: &mut Vec<DrwSymbol>,
    ) {
        if chosen.len() == q {
            let Some(rest) = k.checked_sub(&used) else { return };
            let diffs: Vec<WittMonomial> = chosen.iter().map(|&i| pool[i].clone()).collect();
            if rest.is_zero() {
                out.push(DrwSymbol::new(1, Vec::new(), diffs));
                return;
            }
            for s in rest.den_exp()..n {
                let exp = rest.scaled_exponents(s).expect("denominator fits");
                if s > 0 && exp.iter().all(|a| *a as u64 % p == 0) {
                    continue;
                }
                out.push(DrwSymbol::new(1, vec![WittMonomial::new(s, exp)], diffs.clone()));
            }
            return;
        }
        for i in start..pool.len() {
            let next = used.add(&pool[i].weight(p));
            if k.checked_sub(&next).is_none() {
                continue;
            }
            chosen.push(i);
            rec(p, n, m, q, k, pool, i + 1, chosen, next, out);
            chosen.pop();
        }
    }
    rec(p, n, m, q, k, &pool, 0, &mut chosen, WittWeight::zero(p, m), &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RelationKind {
    TeichmullerProduct,
    Leibniz,
    SquareZero,
    WittAddition,
    VTimesDV,
    VdEqualsPdV,
    GradedCommutativity,
}

/// A combination of symbols that vanishes in `W_nΩ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub kind: RelationKind,
    pub terms: Vec<DrwSymbol>,
}

/// Instances of the defining relations among monomial symbols of level below
/// `n` and total weight at most `bound`.
pub fn relation_schema(p: u64, m: usize, n: u32, bound: u64) -> Vec<Relation> {
    let top = WittWeight::integral(p, vec![bound; m]);
    let fits = |s: &DrwSymbol| {
        let (num, den) = s.weight(p, m).total();
        num <= bound * den
    };
    let pool: Vec<WittMonomial> = monomials_below(p, n, &top)
        .into_iter()
        .filter(|x| {
            let (num, den) = x.weight(p).total();
            num <= bound * den
        })
        .collect();
    let mut out = Vec::new();
    let mut push = |kind: RelationKind, terms: Vec<DrwSymbol>| {
        if terms.iter().all(&fits) {
            out.push(Relation { kind, terms });
        }
    };
    for x in &pool {
        if x.level + 1 < n {
            let up = WittMonomial::new(x.level + 1, x.exp.iter().map(|a| a * p as u32).collect());
            push(RelationKind::WittAddition, vec![DrwSymbol::function(x.clone()).scaled(p as i64), DrwSymbol::function(up).scaled(-1)]);
            if !x.is_constant() {
                let vy = WittMonomial::new(x.level + 1, x.exp.clone());
                let v1 = WittMonomial::new(1, vec![0; m]);
                push(
                    RelationKind::VdEqualsPdV,
                    vec![DrwSymbol::new(1, vec![v1], vec![vy.clone()]), DrwSymbol::new(-(p as i64), Vec::new(), vec![vy])],
                );
            }
        }
        if m >= 2 && !x.is_constant() {
            push(RelationKind::SquareZero, vec![DrwSymbol::new(1, Vec::new(), vec![x.clone(), x.clone()])]);
        }
    }
    for (i, x) in pool.iter().enumerate() {
        for y in &pool[i..] {
            let (c, r) = monomial_product(p, x, y);
            push(
                RelationKind::TeichmullerProduct,
                vec![DrwSymbol::new(1, vec![x.clone(), y.clone()], Vec::new()), DrwSymbol::new(-c, vec![r.clone()], Vec::new())],
            );
            if !r.is_constant() {
                let mut terms = vec![DrwSymbol::new(c, Vec::new(), vec![r])];
                if !y.is_constant() {
                    terms.push(DrwSymbol::new(-1, vec![x.clone()], vec![y.clone()]));
                }
                if !x.is_constant() {
                    terms.push(DrwSymbol::new(-1, vec![y.clone()], vec![x.clone()]));
                }
                push(RelationKind::Leibniz, terms);
            }
            if m >= 2 && !x.is_constant() && !y.is_constant() && x != y {
                push(
                    RelationKind::GradedCommutativity,
                    vec![
                        DrwSymbol::new(1, Vec::new(), vec![x.clone(), y.clone()]),
                        DrwSymbol::new(1, Vec::new(), vec![y.clone(), x.clone()]),
                    ],
                );
            }
        }
    }
    for x in &pool {
        for y in &pool {
            if x.level > y.level && !y.is_constant() {
                let shift = (p as u32).pow(x.level - y.level) - 1;
                let exp = x.exp.iter().zip(&y.exp).map(|(a, b)| a + shift * b).collect();
                push(
                    RelationKind::VTimesDV,
                    vec![
                        DrwSymbol::new(1, vec![x.clone()], vec![y.clone()]),
                        DrwSymbol::new(-1, vec![WittMonomial::new(x.level, exp)], vec![WittMonomial::new(x.level, y.exp.clone())]),
                    ],
                );
            }
        }
    }
    out
}
