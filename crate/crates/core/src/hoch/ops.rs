use std::collections::HashMap;
use std::sync::Mutex;

use super::koszul::{KoszulCochain, WORKING_DEGREE};
use super::HochError;
use crate::drwitt::{DrwSymbol, WittMonomial};
use crate::weyl::NcPoly;
use crate::zmod::Modulus;

/// `v̄^l`: lift and multiply by `p^l`, from level `n` to `n + l`.
pub fn vbar(l: u32, c: &KoszulCochain) -> Result<KoszulCochain, HochError> {
    c.times_p_pow(l)
}

/// `r̄^l`: reduction from level `n` to `n - l`.
pub fn rbar(l: u32, c: &KoszulCochain) -> Result<KoszulCochain, HochError> {
    let n = c.level();
    if l >= n {
        return Err(HochError::LevelBounds(n.saturating_sub(l)));
    }
    c.reduce_to(n - l)
}

/// Connecting map of `0 → S_n → S_{2n} → S_n → 0`: lift to level `2n`,
/// apply `δ`, divide by `p^n`.
pub fn bockstein(c: &KoszulCochain) -> Result<KoszulCochain, HochError> {
    bockstein_with_lift(c, &KoszulCochain::zero(c.lift_to(2 * c.level())?.modulus(), c.q))
}

/// Same, with the lift perturbed by `p^n · e` for an arbitrary cochain `e` at level `2n`.
pub fn bockstein_with_lift(c: &KoszulCochain, e: &KoszulCochain) -> Result<KoszulCochain, HochError> {
    if !c.is_cocycle() {
        return Err(HochError::NotCocycle);
    }
    let n = c.level();
    let pn = e.modulus().p_pow(n);
    let lift = c.lift_to(2 * n)?.add(&e.scale(pn))?;
    lift.delta().div_p_pow(n)
}

/// Connecting map of `0 → A_1 →v^n→ A_{n+1} → A_n → 0`, landing at level 1.
pub fn connecting_delta(c: &KoszulCochain) -> Result<KoszulCochain, HochError> {
    if !c.is_cocycle() {
        return Err(HochError::NotCocycle);
    }
    let n = c.level();
    let lift = c.lift_to(n + 1)?;
    lift.delta().div_p_pow(n)
}

/// Cup product on the Koszul model. Degree 0 acts by multiplication; on
/// `HH¹ × HH¹` the classes are read as derivations `D, E` through the bar
/// comparison and evaluated on the relation chain `[y|x] - [x|y]`.
pub fn cup(a: &KoszulCochain, b: &KoszulCochain) -> Result<KoszulCochain, HochError> {
    if a.modulus() != b.modulus() {
        return Err(HochError::DegreeMismatch);
    }
    match (a.q, b.q) {
        (0, _) => b.times_central(&a.comps[0]),
        (_, 0) => a.times_central(&b.comps[0]),
        (1, 1) => {
            let (ux, vx) = (&a.comps[0], &a.comps[1]);
            let (uy, vy) = (&b.comps[0], &b.comps[1]);
            let w = vx.mul(uy)?.sub(&ux.mul(vy)?)?;
            Ok(KoszulCochain::two_cochain(w))
        }
        _ => Err(HochError::DegreeMismatch),
    }
}

/// A 1-cochain read as a derivation of `A_n`, extended to a normal-ordered
/// polynomial by the Leibniz rule.
pub fn derivation_apply(c: &KoszulCochain, f: &NcPoly) -> Result<NcPoly, HochError> {
    if c.q != 1 {
        return Err(HochError::DegreeMismatch);
    }
    let md = c.modulus();
    let (u, v) = (&c.comps[0], &c.comps[1]);
    let mut out = NcPoly::zero(md, WORKING_DEGREE);
    let x = |k: u32| NcPoly::monomial(md, WORKING_DEGREE, k, 0, 1);
    let y = |k: u32| NcPoly::monomial(md, WORKING_DEGREE, 0, k, 1);
    for (&(a, b), &coef) in f.terms() {
        for i in 0..a {
            let t = x(i).mul(u)?.mul(&x(a - 1 - i))?.mul(&y(b))?;
            out = out.add(&t.scale(coef))?;
        }
        for j in 0..b {
            let t = x(a).mul(&y(j))?.mul(v)?.mul(&y(b - 1 - j))?;
            out = out.add(&t.scale(coef))?;
        }
    }
    Ok(out)
}

/// A 2-chain `Σ c · a_0 ⊗ a_1 ⊗ a_2 ⊗ a_3` of the bar resolution.
pub type BarChain2 = Vec<[NcPoly; 4]>;

/// `(D ⌣ E)` evaluated on a bar 2-chain, giving a Koszul 2-cochain once the
/// chain is a lift of the relation generator.
pub fn cup_on_chain(d: &KoszulCochain, e: &KoszulCochain, chain: &BarChain2) -> Result<KoszulCochain, HochError> {
    let md = d.modulus();
    let mut w = NcPoly::zero(md, WORKING_DEGREE);
    for [a0, a1, a2, a3] in chain {
        let t = a0.mul(&derivation_apply(d, a1)?)?.mul(&derivation_apply(e, a2)?)?.mul(a3)?;
        w = w.add(&t)?;
    }
    Ok(KoszulCochain::two_cochain(w))
}

/// The comparison lift `[y|x] - [x|y]` of the Koszul relation generator.
pub fn relation_chain(md: Modulus) -> BarChain2 {
    let one = NcPoly::one(md, WORKING_DEGREE);
    let x = NcPoly::x(md, WORKING_DEGREE);
    let y = NcPoly::y(md, WORKING_DEGREE);
    vec![[one.clone(), y.clone(), x.clone(), one.clone()], [one.neg(), x, y, one]]
}

/// Adds `b'(h)` for `h = a_0 ⊗ a_1 ⊗ a_2 ⊗ a_3 ⊗ a_4` to a 2-chain, giving
/// another lift of the same generator.
pub fn perturb_chain(chain: &BarChain2, h: &[NcPoly; 5]) -> Result<BarChain2, HochError> {
    let [a0, a1, a2, a3, a4] = h;
    let mut out = chain.clone();
    out.push([a0.mul(a1)?, a2.clone(), a3.clone(), a4.clone()]);
    out.push([a0.neg(), a1.mul(a2)?, a3.clone(), a4.clone()]);
    out.push([a0.clone(), a1.clone(), a2.mul(a3)?, a4.clone()]);
    out.push([a0.neg(), a1.clone(), a2.clone(), a3.mul(a4)?]);
    Ok(out)
}

/// Evaluates `φ*_n` on symbols, with caches for `φ_n` of monomials and their
/// Bocksteins.
#[derive(Debug, Default)]
pub struct PhiEngine {
    phi: Mutex<HashMap<(u32, WittMonomial), NcPoly>>,
    dphi: Mutex<HashMap<(u32, WittMonomial), KoszulCochain>>,
}

impl PhiEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// `φ_n(V^s[u^a v^b]) = p^s (x^{pa} y^{pb})^{p^{n-1-s}}` in `A_n`.
    pub fn phi_monomial(&self, p: u64, n: u32, x: &WittMonomial) -> Result<NcPoly, HochError> {
        let key = (n, x.clone());
        if let Some(hit) = self.phi.lock().expect("cache").get(&key) {
            return Ok(hit.clone());
        }
        let md = Modulus::new(p, n).map_err(|_| HochError::LevelBounds(n))?;
        let out = if x.level >= n {
            NcPoly::zero(md, WORKING_DEGREE)
        } else {
            let pp = p as u32;
            let m = NcPoly::monomial(md, WORKING_DEGREE, pp * x.exp[0], pp * x.exp[1], 1);
            m.pow(p.pow(n - 1 - x.level))?.scale(md.p_pow(x.level))
        };
        self.phi.lock().expect("cache").insert(key, out.clone());
        Ok(out)
    }

    /// `d_n φ_n(x)`.
    pub fn dphi_monomial(&self, p: u64, n: u32, x: &WittMonomial) -> Result<KoszulCochain, HochError> {
        let key = (n, x.clone());
        if let Some(hit) = self.dphi.lock().expect("cache").get(&key) {
            return Ok(hit.clone());
        }
        let z = KoszulCochain::scalar(self.phi_monomial(p, n, x)?);
        let out = bockstein(&z)?;
        self.dphi.lock().expect("cache").insert(key, out.clone());
        Ok(out)
    }

    /// `φ*_n(c · x_1 ⋯ x_r dy_1 ⋯ dy_q) = c φ_n(x_1) ⋯ φ_n(x_r) · d_nφ_n(y_1) ⌣ ⋯ ⌣ d_nφ_n(y_q)`.
    pub fn phi_star(&self, p: u64, n: u32, s: &DrwSymbol) -> Result<KoszulCochain, HochError> {
        if s.factors.iter().chain(&s.diffs).any(|x| x.exp.len() != 2) {
            return Err(HochError::BadParams("symbols must be in two variables".into()));
        }
        let md = Modulus::new(p, n).map_err(|_| HochError::LevelBounds(n))?;
        let mut x0 = NcPoly::constant(md, WORKING_DEGREE, md.reduce_i128(s.coeff as i128));
        for x in &s.factors {
            x0 = x0.mul(&self.phi_monomial(p, n, x)?)?;
        }
        let mut acc = KoszulCochain::scalar(x0);
        for y in &s.diffs {
            if acc.q >= 2 {
                return Ok(KoszulCochain::zero(md, acc.q + 1));
            }
            acc = cup(&acc, &self.dphi_monomial(p, n, y)?)?;
        }
        Ok(acc)
    }

    pub fn phi_star_sum(&self, p: u64, n: u32, q: usize, terms: &[DrwSymbol]) -> Result<KoszulCochain, HochError> {
        let md = Modulus::new(p, n).map_err(|_| HochError::LevelBounds(n))?;
        let mut acc = KoszulCochain::zero(md, q);
        for s in terms {
            if s.degree() != q {
                return Err(HochError::DegreeMismatch);
            }
            if q > 2 {
                continue;
            }
            acc = acc.add(&self.phi_star(p, n, s)?)?;
        }
        Ok(acc)
    }
}
