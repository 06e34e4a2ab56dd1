use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::WittError;

/// Polynomial with integer coefficients; monomials are dense exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, BigInt>,
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, BigInt::one());
        p
    }

    pub fn coeff(&self, e: &[u32]) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        let mut out = IntPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_default() += ca * cb;
            }
        }
        IntPoly { nvars: self.nvars, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn pow(&self, mut k: u64) -> IntPoly {
        let mut one = IntPoly::zero(self.nvars);
        one.terms.insert(vec![0; self.nvars], BigInt::one());
        let mut acc = one;
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

    fn div_exact(&self, d: &BigInt) -> Option<IntPoly> {
        let mut out = IntPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            out.terms.insert(e.clone(), q);
        }
        Some(out)
    }

    /// Rename variables: variable `i` of `self` becomes variable `map[i]` of a
    /// polynomial in `nvars` variables.
    pub fn relabel(&self, nvars: usize, map: &[usize]) -> IntPoly {
        let mut out = IntPoly::zero(nvars);
        for (e, c) in &self.terms {
            let mut f = vec![0; nvars];
            for (i, &x) in e.iter().enumerate() {
                f[map[i]] += x;
            }
            out.add_term(f, c.clone());
        }
        out
    }
}

/// Ghost polynomial `w_i = Σ_{j≤i} p^j x_j^{p^{i-j}}` in variables `offset..offset+i`.
pub fn ghost_poly(p: u64, i: usize, nvars: usize, offset: usize) -> IntPoly {
    let mut out = IntPoly::zero(nvars);
    for j in 0..=i {
        let mut e = vec![0; nvars];
        e[offset + j] = (p as u32).pow((i - j) as u32);
        out.add_term(e, BigInt::from(p).pow(j as u32));
    }
    out
}

/// Solve `Σ_{j≤i} p^j Q_j^{p^{i-j}} = target_i` for integral `Q_i`.
fn ghost_solve(p: u64, targets: &[IntPoly]) -> Result<Vec<IntPoly>, WittError> {
    let pb = BigInt::from(p);
    let mut out: Vec<IntPoly> = Vec::with_capacity(targets.len());
    // powers[j] = Q_j^{p^{i-1-j}} while processing i
    let mut powers: Vec<IntPoly> = Vec::new();
    for (i, t) in targets.iter().enumerate() {
        for pw in powers.iter_mut() {
            *pw = pw.pow(p);
        }
        let mut rest = t.clone();
        for (j, pw) in powers.iter().enumerate() {
            rest = rest.add(&pw.scale(&-pb.pow(j as u32)));
        }
        let q = rest.div_exact(&pb.pow(i as u32)).ok_or(WittError::NotInImage)?;
        powers.push(q.clone());
        out.push(q);
    }
    Ok(out)
}

/// Universal integral polynomials for p-typical Witt vectors of length `n`.
/// Sum/product polynomials use variables `x_0..x_{n-1}, y_0..y_{n-1}`;
/// negation and Frobenius use `x_0..x_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittPolys {
    pub p: u64,
    pub n: usize,
    pub sum: Vec<IntPoly>,
    pub prod: Vec<IntPoly>,
    pub neg: Vec<IntPoly>,
    pub frobenius: Vec<IntPoly>,
}

impl WittPolys {
    pub fn compute(p: u64, n: usize) -> Result<Self, WittError> {
        let two = 2 * n;
        let wx: Vec<IntPoly> = (0..n).map(|i| ghost_poly(p, i, two, 0)).collect();
        let wy: Vec<IntPoly> = (0..n).map(|i| ghost_poly(p, i, two, n)).collect();
        let sum = ghost_solve(p, &wx.iter().zip(&wy).map(|(a, b)| a.add(b)).collect::<Vec<_>>())?;
        let prod = ghost_solve(p, &wx.iter().zip(&wy).map(|(a, b)| a.mul(b)).collect::<Vec<_>>())?;
        let neg_t: Vec<IntPoly> = (0..n).map(|i| ghost_poly(p, i, n, 0).scale(&BigInt::from(-1))).collect();
        let neg = ghost_solve(p, &neg_t)?;
        // F_i is determined by w_i(F) = w_{i+1}
        let frob_t: Vec<IntPoly> = (1..n).map(|i| ghost_poly(p, i, n, 0)).collect();
        let frobenius = ghost_solve(p, &frob_t)?;
        Ok(Self { p, n, sum, prod, neg, frobenius })
    }

    pub fn cache_key(&self) -> String {
        cache_key(self.p, self.n)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let enc = |v: &[IntPoly]| -> Vec<PolyJson> { v.iter().map(PolyJson::from).collect() };
        serde_json::to_value(WittPolysJson {
            schema: "witt-polys/v1".into(),
            p: self.p.to_string(),
            n: self.n.to_string(),
            sum: enc(&self.sum),
            prod: enc(&self.prod),
            neg: enc(&self.neg),
            frobenius: enc(&self.frobenius),
        })
        .expect("plain data serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, WittError> {
        let j: WittPolysJson = serde_json::from_value(v.clone()).map_err(|e| WittError::Cache(e.to_string()))?;
        if j.schema != "witt-polys/v1" {
            return Err(WittError::Cache(format!("unknown schema {}", j.schema)));
        }
        let dec = |v: Vec<PolyJson>| -> Result<Vec<IntPoly>, WittError> { v.into_iter().map(IntPoly::try_from).collect() };
        let bad = |e: std::num::ParseIntError| WittError::Cache(e.to_string());
        Ok(Self {
            p: j.p.parse().map_err(bad)?,
            n: j.n.parse().map_err(bad)?,
            sum: dec(j.sum)?,
            prod: dec(j.prod)?,
            neg: dec(j.neg)?,
            frobenius: dec(j.frobenius)?,
        })
    }
}

pub fn cache_key(p: u64, n: usize) -> String {
    format!("witt-polys/p{p}-n{n}-v1")
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    nvars: String,
    terms: Vec<(Vec<String>, String)>,
}

impl From<&IntPoly> for PolyJson {
    fn from(p: &IntPoly) -> Self {
        PolyJson {
            nvars: p.nvars.to_string(),
            terms: p
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|x| x.to_string()).collect(), c.to_string()))
                .collect(),
        }
    }
}

impl TryFrom<PolyJson> for IntPoly {
    type Error = WittError;
    fn try_from(j: PolyJson) -> Result<Self, WittError> {
        let bad = |s: String| WittError::Cache(s);
        let nvars: usize = j.nvars.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?;
        let mut out = IntPoly::zero(nvars);
        for (e, c) in j.terms {
            let e: Vec<u32> = e
                .iter()
                .map(|x| x.parse())
                .collect::<Result<_, _>>()
                .map_err(|e: std::num::ParseIntError| bad(e.to_string()))?;
            if e.len() != nvars {
                return Err(bad("exponent arity".into()));
            }
            let c: BigInt = c.parse().map_err(|_| bad(format!("bad coefficient {c}")))?;
            out.add_term(e, c);
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct WittPolysJson {
    schema: String,
    p: String,
    n: String,
    sum: Vec<PolyJson>,
    prod: Vec<PolyJson>,
    neg: Vec<PolyJson>,
    frobenius: Vec<PolyJson>,
}

type PolyCache = Mutex<HashMap<(u64, usize), Arc<OnceLock<Arc<WittPolys>>>>>;

fn cache() -> &'static PolyCache {
    static CACHE: OnceLock<PolyCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Universal polynomials for `(p, n)`, computed once per process.
pub fn witt_universal_polynomials(p: u64, n: usize) -> Result<Arc<WittPolys>, WittError> {
    super::check_params(p, n)?;
    let cell = {
        let mut map = cache().lock().expect("cache lock");
        map.entry((p, n)).or_default().clone()
    };
    if let Some(v) = cell.get() {
        return Ok(v.clone());
    }
    let computed = Arc::new(WittPolys::compute(p, n)?);
    Ok(cell.get_or_init(|| computed).clone())
}

/// Seed the in-process cache, e.g. from a persisted entry.
pub fn install_universal_polynomials(polys: WittPolys) -> Arc<WittPolys> {
    let cell = {
        let mut map = cache().lock().expect("cache lock");
        map.entry((polys.p, polys.n)).or_default().clone()
    };
    cell.get_or_init(|| Arc::new(polys)).clone()
}
