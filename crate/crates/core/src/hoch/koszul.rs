use std::collections::BTreeMap;

use serde::Serialize;

use super::HochError;
use crate::weyl::NcPoly;
use crate::zmod::{kernel, subquotient, Modulus, PresentedModule, ZModMatrix};

/// Degree bound handed to every cochain component; products are checked
/// against it exactly.
pub const WORKING_DEGREE: u32 = 1024;

pub type Bidegree = (u32, u32);

/// A cochain of the Koszul model `A → A² → A` at level `n`:
/// one component in degrees 0 and 2, the pair `(c_x, c_y)` in degree 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulCochain {
    pub q: usize,
    pub comps: Vec<NcPoly>,
}

impl KoszulCochain {
    pub fn zero(modulus: Modulus, q: usize) -> Self {
        let k = match q {
            1 => 2,
            0 | 2 => 1,
            _ => 0,
        };
        Self { q, comps: vec![NcPoly::zero(modulus, WORKING_DEGREE); k] }
    }

    pub fn scalar(z: NcPoly) -> Self {
        Self { q: 0, comps: vec![z.with_max_degree(WORKING_DEGREE)] }
    }

    pub fn one_cochain(u: NcPoly, v: NcPoly) -> Self {
        Self { q: 1, comps: vec![u.with_max_degree(WORKING_DEGREE), v.with_max_degree(WORKING_DEGREE)] }
    }

    pub fn two_cochain(w: NcPoly) -> Self {
        Self { q: 2, comps: vec![w.with_max_degree(WORKING_DEGREE)] }
    }

    pub fn modulus(&self) -> Modulus {
        self.comps.first().map(|c| c.modulus()).expect("cochain of degree at most 2")
    }

    pub fn level(&self) -> u32 {
        self.modulus().e
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    fn map(&self, f: impl Fn(&NcPoly) -> Result<NcPoly, HochError>) -> Result<Self, HochError> {
        Ok(Self { q: self.q, comps: self.comps.iter().map(f).collect::<Result<_, _>>()? })
    }

    pub fn add(&self, o: &Self) -> Result<Self, HochError> {
        if self.q != o.q {
            return Err(HochError::DegreeMismatch);
        }
        let comps = self.comps.iter().zip(&o.comps).map(|(a, b)| a.add(b)).collect::<Result<_, _>>()?;
        Ok(Self { q: self.q, comps })
    }

    pub fn neg(&self) -> Self {
        Self { q: self.q, comps: self.comps.iter().map(|c| c.neg()).collect() }
    }

    pub fn sub(&self, o: &Self) -> Result<Self, HochError> {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: u64) -> Self {
        Self { q: self.q, comps: self.comps.iter().map(|x| x.scale(c)).collect() }
    }

    pub fn scale_i64(&self, c: i64) -> Self {
        let r = self.modulus().reduce_i128(c as i128);
        self.scale(r)
    }

    /// Left multiplication of every component by a central element.
    pub fn times_central(&self, z: &NcPoly) -> Result<Self, HochError> {
        self.map(|c| Ok(z.clone().with_max_degree(WORKING_DEGREE).mul(c)?))
    }

    pub fn reduce_to(&self, e: u32) -> Result<Self, HochError> {
        self.map(|c| Ok(c.reduce_to(e)?))
    }

    pub fn lift_to(&self, e: u32) -> Result<Self, HochError> {
        self.map(|c| Ok(c.lift_to(e)?))
    }

    pub fn times_p_pow(&self, k: u32) -> Result<Self, HochError> {
        self.map(|c| Ok(c.times_p_pow(k)?))
    }

    pub fn div_p_pow(&self, k: u32) -> Result<Self, HochError> {
        self.map(|c| c.div_p_pow(k).map_err(|_| HochError::DivisionFailure { k }))
    }

    /// Koszul differential: `δ⁰a = ([a,x], [a,y])`, `δ¹(u,v) = [x,v] - [y,u]`,
    /// evaluated through `[f,x] = ∂_y f` and `[f,y] = -∂_x f`.
    pub fn delta(&self) -> Self {
        match self.q {
            0 => {
                let a = &self.comps[0];
                Self { q: 1, comps: vec![a.d_y(), a.d_x().neg()] }
            }
            1 => {
                let (u, v) = (&self.comps[0], &self.comps[1]);
                let w = v.d_y().add(&u.d_x()).expect("same modulus").neg();
                Self { q: 2, comps: vec![w] }
            }
            _ => Self { q: self.q + 1, comps: Vec::new() },
        }
    }

    pub fn is_cocycle(&self) -> bool {
        self.delta().is_zero()
    }

    /// Coefficient vectors per shifted bidegree, in the slot order of [`slots`].
    pub fn pieces(&self) -> BTreeMap<Bidegree, Vec<u64>> {
        let mut out: BTreeMap<Bidegree, Vec<u64>> = BTreeMap::new();
        for (ci, comp) in self.comps.iter().enumerate() {
            for (&(a, b), &c) in comp.terms() {
                let bideg = match (self.q, ci) {
                    (0, _) => (a, b),
                    (1, 0) => (a, b + 1),
                    (1, _) => (a + 1, b),
                    _ => (a + 1, b + 1),
                };
                let s = slots(self.q, bideg);
                let pos = s.iter().position(|x| *x == ci).expect("slot exists");
                out.entry(bideg).or_insert_with(|| vec![0; s.len()])[pos] = c;
            }
        }
        out
    }

    /// Rebuilds a cochain from a piece vector.
    pub fn from_piece(modulus: Modulus, q: usize, bideg: Bidegree, v: &[u64]) -> Self {
        let mut out = Self::zero(modulus, q);
        let (a, b) = bideg;
        for (&slot, &c) in slots(q, bideg).iter().zip(v) {
            let (ea, eb) = match (q, slot) {
                (0, _) => (a, b),
                (1, 0) => (a, b - 1),
                (1, _) => (a - 1, b),
                _ => (a - 1, b - 1),
            };
            out.comps[slot].add_term(ea, eb, c);
        }
        out
    }
}

/// Components of `C^q` present in a shifted bidegree.
pub fn slots(q: usize, (a, b): Bidegree) -> Vec<usize> {
    match q {
        0 => vec![0],
        1 => {
            let mut s = Vec::new();
            if b >= 1 {
                s.push(0);
            }
            if a >= 1 {
                s.push(1);
            }
            s
        }
        2 if a >= 1 && b >= 1 => vec![0],
        _ => Vec::new(),
    }
}

/// Matrix of `δ^q` restricted to one shifted bidegree (rows act on the left).
pub fn delta_matrix(modulus: Modulus, q: usize, bideg: Bidegree) -> ZModMatrix {
    let (a, b) = bideg;
    let src = slots(q, bideg);
    let dst = slots(q + 1, bideg);
    let mut m = ZModMatrix::zeros(modulus, src.len(), dst.len());
    let (ra, rb) = (modulus.reduce(a as u64), modulus.reduce(b as u64));
    match q {
        0 => {
            for (j, &s) in dst.iter().enumerate() {
                m.set(0, j, if s == 0 { rb } else { modulus.neg(ra) });
            }
        }
        1 if !dst.is_empty() => {
            for (i, &s) in src.iter().enumerate() {
                m.set(i, 0, if s == 0 { modulus.neg(ra) } else { modulus.neg(rb) });
            }
        }
        _ => {}
    }
    m
}

/// `HH^q` of one shifted bidegree at the given modulus.
pub fn piece_cohomology(modulus: Modulus, q: usize, bideg: Bidegree) -> Result<PresentedModule, HochError> {
    let dim = slots(q, bideg).len();
    if dim == 0 {
        return Ok(PresentedModule::zero(modulus, 0));
    }
    let identity: Vec<Vec<u64>> = (0..dim).map(|i| (0..dim).map(|j| u64::from(i == j)).collect()).collect();
    let cycles = if slots(q + 1, bideg).is_empty() { identity } else { kernel(&delta_matrix(modulus, q, bideg)) };
    let boundaries =
        if q == 0 || slots(q - 1, bideg).is_empty() { Vec::new() } else { delta_matrix(modulus, q - 1, bideg).to_rows() };
    Ok(subquotient(modulus, dim, &cycles, &boundaries)?)
}

/// `HH^q(A_n)` over all shifted bidegrees of total degree at most `max_degree`.
#[derive(Clone, Debug)]
pub struct HhModule {
    pub p: u64,
    pub n: u32,
    pub q: usize,
    pub max_degree: u32,
    pieces: BTreeMap<Bidegree, PresentedModule>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HhSummary {
    pub n: u32,
    pub q: usize,
    pub max_degree: u32,
    pub length: u32,
    pub length_by_degree: Vec<u32>,
}

/// Computes `HH^q(A_n)` on a degree window.
pub fn hh(p: u64, n: u32, q: usize, max_degree: u32) -> Result<HhModule, HochError> {
    if q > 2 {
        return Err(HochError::DegreeMismatch);
    }
    let modulus = Modulus::new(p, n).map_err(|_| HochError::LevelBounds(n))?;
    let mut pieces = BTreeMap::new();
    for d in 0..=max_degree {
        for a in 0..=d {
            let bideg = (a, d - a);
            let m = piece_cohomology(modulus, q, bideg)?;
            if !m.is_zero() {
                pieces.insert(bideg, m);
            }
        }
    }
    Ok(HhModule { p, n, q, max_degree, pieces })
}

impl HhModule {
    pub fn modulus(&self) -> Modulus {
        Modulus::new(self.p, self.n).expect("validated")
    }

    pub fn pieces(&self) -> &BTreeMap<Bidegree, PresentedModule> {
        &self.pieces
    }

    pub fn piece_length(&self, bideg: Bidegree) -> u32 {
        self.pieces.get(&bideg).map(|m| m.length()).unwrap_or(0)
    }

    pub fn length(&self) -> u32 {
        self.pieces.values().map(|m| m.length()).sum()
    }

    /// Lengths per total shifted degree `0..=max_degree`.
    pub fn length_by_degree(&self) -> Vec<u32> {
        let mut out = vec![0; self.max_degree as usize + 1];
        for (&(a, b), m) in &self.pieces {
            out[(a + b) as usize] += m.length();
        }
        out
    }

    pub fn summary(&self) -> HhSummary {
        HhSummary {
            n: self.n,
            q: self.q,
            max_degree: self.max_degree,
            length: self.length(),
            length_by_degree: self.length_by_degree(),
        }
    }

    /// Class coordinates of a cocycle, per bidegree, zero pieces dropped.
    pub fn coordinates(&self, c: &KoszulCochain) -> Result<BTreeMap<Bidegree, Vec<u64>>, HochError> {
        if c.q != self.q || c.level() != self.n {
            return Err(HochError::DegreeMismatch);
        }
        if !c.is_cocycle() {
            return Err(HochError::NotCocycle);
        }
        let mut out = BTreeMap::new();
        for (bideg, v) in c.pieces() {
            let Some(m) = self.pieces.get(&bideg) else {
                if bideg.0 + bideg.1 > self.max_degree {
                    return Err(HochError::WindowOverflow { degree: bideg.0 + bideg.1, max: self.max_degree });
                }
                continue;
            };
            let coords = m.coordinates(&v)?;
            if coords.iter().any(|x| *x != 0) {
                out.insert(bideg, coords);
            }
        }
        Ok(out)
    }

    pub fn is_zero_class(&self, c: &KoszulCochain) -> Result<bool, HochError> {
        Ok(self.coordinates(c)?.is_empty())
    }

    pub fn same_class(&self, a: &KoszulCochain, b: &KoszulCochain) -> Result<bool, HochError> {
        self.is_zero_class(&a.sub(b)?)
    }

    /// Summand layout `(bidegree, index)` restricted by a filter on bidegrees.
    pub fn layout(&self, keep: impl Fn(Bidegree) -> bool) -> Vec<(Bidegree, usize)> {
        let mut out = Vec::new();
        for (&b, m) in &self.pieces {
            if keep(b) {
                for i in 0..m.exponents().len() {
                    out.push((b, i));
                }
            }
        }
        out
    }

    /// Class coordinates embedded into `(Z/p^n)^layout`.
    pub fn embedded(&self, c: &KoszulCochain, layout: &[(Bidegree, usize)]) -> Result<Vec<u64>, HochError> {
        let coords = self.coordinates(c)?;
        let md = self.modulus();
        let mut out = vec![0; layout.len()];
        for (slot, (b, i)) in out.iter_mut().zip(layout) {
            if let Some(v) = coords.get(b) {
                let ex = self.pieces[b].exponents()[*i];
                *slot = md.mul(v[*i], md.p_pow(self.n - ex));
            }
        }
        for b in coords.keys() {
            if !layout.iter().any(|(x, _)| x == b) {
                return Err(HochError::WindowOverflow { degree: b.0 + b.1, max: self.max_degree });
            }
        }
        Ok(out)
    }

    /// Representative cocycles of all summands.
    pub fn generators(&self) -> Vec<(Bidegree, KoszulCochain)> {
        let md = self.modulus();
        let mut out = Vec::new();
        for (&b, m) in &self.pieces {
            for g in m.generators() {
                out.push((b, KoszulCochain::from_piece(md, self.q, b, g)));
            }
        }
        out
    }
}
