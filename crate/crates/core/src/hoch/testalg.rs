use serde::Serialize;

use super::HochError;
use crate::zmod::{complex_cohomology, Modulus, PresentedModule, ZModMatrix};

/// The truncated polynomial algebra `Z/p^l[s]/(s^k)` with its full
/// (unnormalized) Hochschild cochain complex in degrees `0..=3`.
#[derive(Clone, Debug)]
pub struct TestAlgebra {
    pub p: u64,
    pub k: usize,
    /// Integer matrices of `δ^q : C^q → C^{q+1}`, `q = 0..=3`, rows act on the left.
    delta: Vec<Vec<Vec<i64>>>,
}

/// A Hochschild cochain of the test algebra at level `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaCochain {
    pub q: usize,
    pub modulus: Modulus,
    pub vals: Vec<u64>,
}

fn idx(k: usize, inputs: &[usize], out: usize) -> usize {
    inputs.iter().fold(0, |acc, &i| acc * k + i) * k + out
}

fn tuples(k: usize, q: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..q {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..k).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

impl TestAlgebra {
    pub fn new(p: u64, k: usize) -> Self {
        let mut delta = Vec::new();
        for q in 0..=3 {
            delta.push(Self::delta_integer(k, q));
        }
        Self { p, k, delta }
    }

    fn prod(k: usize, i: usize, j: usize) -> Option<usize> {
        (i + j < k).then_some(i + j)
    }

    pub fn dim(&self, q: usize) -> usize {
        self.k.pow(q as u32 + 1)
    }

    /// `(δf)(a_1..a_{q+1}) = a_1 f(a_2..) + Σ (-1)^i f(.., a_i a_{i+1}, ..) + (-1)^{q+1} f(a_1..a_q) a_{q+1}`
    fn delta_integer(k: usize, q: usize) -> Vec<Vec<i64>> {
        let src = k.pow(q as u32 + 1);
        let dst = k.pow(q as u32 + 2);
        let mut m = vec![vec![0i64; dst]; src];
        let ins = tuples(k, q + 1);
        for (row, f_in) in tuples(k, q).iter().enumerate().flat_map(|(r, t)| (0..k).map(move |j| (r * k + j, (t.clone(), j)))) {
            let (f_args, f_out) = f_in;
            for a in &ins {
                // a_1 f(a_2..)
                if a[1..] == f_args[..] {
                    if let Some(o) = Self::prod(k, a[0], f_out) {
                        m[row][idx(k, a, o)] += 1;
                    }
                }
                for i in 0..q {
                    if let Some(ab) = Self::prod(k, a[i], a[i + 1]) {
                        let mut merged = a[..i].to_vec();
                        merged.push(ab);
                        merged.extend_from_slice(&a[i + 2..]);
                        if merged == f_args {
                            let sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
                            m[row][idx(k, a, f_out)] += sign;
                        }
                    }
                }
                if a[..q] == f_args[..] {
                    if let Some(o) = Self::prod(k, f_out, a[q]) {
                        let sign = if (q + 1) % 2 == 0 { 1 } else { -1 };
                        m[row][idx(k, a, o)] += sign;
                    }
                }
            }
        }
        let _ = dst;
        m
    }

    pub fn modulus(&self, l: u32) -> Result<Modulus, HochError> {
        Modulus::new(self.p, l).map_err(|_| HochError::LevelBounds(l))
    }

    pub fn delta_matrix(&self, q: usize, l: u32) -> Result<ZModMatrix, HochError> {
        let md = self.modulus(l)?;
        Ok(ZModMatrix::from_i64_rows(md, self.dim(q + 1), &self.delta[q])?)
    }

    pub fn delta(&self, c: &TaCochain) -> Result<TaCochain, HochError> {
        if c.q > 3 {
            return Err(HochError::DegreeMismatch);
        }
        let vals = self.delta_matrix(c.q, c.modulus.e)?.apply(&c.vals)?;
        Ok(TaCochain { q: c.q + 1, modulus: c.modulus, vals })
    }

    /// `HH^q` at level `l`, for `q ≤ 3`.
    pub fn hh(&self, q: usize, l: u32) -> Result<PresentedModule, HochError> {
        let md = self.modulus(l)?;
        let d_in = if q == 0 { ZModMatrix::zeros(md, 1, self.dim(0)) } else { self.delta_matrix(q - 1, l)? };
        Ok(complex_cohomology(&d_in, &self.delta_matrix(q, l)?)?)
    }

    /// `(f ⌣ g)(a_1..a_{i+j}) = f(a_1..a_i) g(a_{i+1}..a_{i+j})`.
    pub fn cup(&self, f: &TaCochain, g: &TaCochain) -> Result<TaCochain, HochError> {
        if f.modulus != g.modulus {
            return Err(HochError::DegreeMismatch);
        }
        let k = self.k;
        let md = f.modulus;
        let q = f.q + g.q;
        let mut vals = vec![0u64; self.dim(q)];
        for a in tuples(k, f.q) {
            for b in tuples(k, g.q) {
                let mut ab = a.clone();
                ab.extend_from_slice(&b);
                for i in 0..k {
                    let x = f.vals[idx(k, &a, i)];
                    if x == 0 {
                        continue;
                    }
                    for j in 0..k {
                        let y = g.vals[idx(k, &b, j)];
                        if let Some(o) = Self::prod(k, i, j) {
                            let t = idx(k, &ab, o);
                            vals[t] = md.add(vals[t], md.mul(x, y));
                        }
                    }
                }
            }
        }
        Ok(TaCochain { q, modulus: md, vals })
    }
}

impl TaCochain {
    pub fn level(&self) -> u32 {
        self.modulus.e
    }

    fn remod(&self, e: u32) -> Result<TaCochain, HochError> {
        let md = Modulus::new(self.modulus.p, e).map_err(|_| HochError::LevelBounds(e))?;
        Ok(TaCochain { q: self.q, modulus: md, vals: self.vals.iter().map(|v| md.reduce(*v)).collect() })
    }

    pub fn vbar(&self, l: u32) -> Result<TaCochain, HochError> {
        let up = self.remod(self.level() + l)?;
        Ok(up.scale(up.modulus.p_pow(l)))
    }

    pub fn rbar(&self, l: u32) -> Result<TaCochain, HochError> {
        if l >= self.level() {
            return Err(HochError::LevelBounds(0));
        }
        self.remod(self.level() - l)
    }

    pub fn scale(&self, c: u64) -> TaCochain {
        let md = self.modulus;
        TaCochain { vals: self.vals.iter().map(|v| md.mul(*v, md.reduce(c))).collect(), ..self.clone() }
    }

    pub fn sub(&self, o: &TaCochain) -> TaCochain {
        let md = self.modulus;
        TaCochain { vals: self.vals.iter().zip(&o.vals).map(|(a, b)| md.sub(*a, *b)).collect(), ..self.clone() }
    }

    pub fn add(&self, o: &TaCochain) -> TaCochain {
        let md = self.modulus;
        TaCochain { vals: self.vals.iter().zip(&o.vals).map(|(a, b)| md.add(*a, *b)).collect(), ..self.clone() }
    }
}

impl TestAlgebra {
    /// Connecting map of `0 → S_l → S_{2l} → S_l → 0`.
    pub fn bockstein(&self, c: &TaCochain) -> Result<TaCochain, HochError> {
        let l = c.level();
        let lift = c.remod(2 * l)?;
        let d = self.delta(&lift)?;
        let md = c.modulus;
        let vals = d
            .vals
            .iter()
            .map(|v| d.modulus.div_p_pow(*v, l).map(|x| md.reduce(x)).ok_or(HochError::DivisionFailure { k: l }))
            .collect::<Result<_, _>>()?;
        Ok(TaCochain { q: c.q + 1, modulus: md, vals })
    }

    pub fn is_cocycle(&self, c: &TaCochain) -> Result<bool, HochError> {
        Ok(self.delta(c)?.vals.iter().all(|v| *v == 0))
    }

    pub fn generators(&self, q: usize, l: u32) -> Result<Vec<TaCochain>, HochError> {
        let md = self.modulus(l)?;
        Ok(self.hh(q, l)?.generators().iter().map(|g| TaCochain { q, modulus: md, vals: g.clone() }).collect())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub instances: usize,
    pub failures: usize,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub p: u64,
    pub n: u32,
    pub truncation: usize,
    pub hh_lengths: Vec<(u32, usize, u32)>,
    pub checks: Vec<IdentityCheck>,
    /// How indices of the identities were read so that both sides typecheck.
    pub readings: Vec<String>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0 && c.instances > 0)
    }
}

struct Checker<'a> {
    alg: &'a TestAlgebra,
    modules: std::collections::HashMap<(usize, u32), PresentedModule>,
}

impl Checker<'_> {
    fn same(&mut self, a: &TaCochain, b: &TaCochain) -> Result<bool, HochError> {
        if a.q != b.q || a.modulus != b.modulus {
            return Ok(false);
        }
        let key = (a.q, a.level());
        if !self.modules.contains_key(&key) {
            self.modules.insert(key, self.alg.hh(a.q, a.level())?);
        }
        let diff = a.sub(b);
        if !self.alg.is_cocycle(&diff)? {
            return Ok(false);
        }
        Ok(self.modules[&key].is_zero_class(&diff.vals)?)
    }
}

fn record(checks: &mut Vec<IdentityCheck>, name: &str, results: Vec<(bool, String)>) {
    let failures: Vec<String> = results.iter().filter(|r| !r.0).map(|r| r.1.clone()).collect();
    checks.push(IdentityCheck {
        identity: name.to_string(),
        instances: results.len(),
        failures: failures.len(),
        witnesses: failures.into_iter().take(5).collect(),
    });
}

/// Verifies the Bockstein identities on `HH^{≤2}` of `Z/p^l[s]/(s^k)` at levels
/// `n` and `n + 1` (Bocksteins use levels up to `2n + 2`).
pub fn lemma_identities_check(p: u64, k: usize, n: u32) -> Result<LemmaReport, HochError> {
    if n == 0 {
        return Err(HochError::LevelBounds(0));
    }
    let alg = TestAlgebra::new(p, k);
    let mut ck = Checker { alg: &alg, modules: Default::default() };
    let mut hh_lengths = Vec::new();
    let mut gens = std::collections::HashMap::new();
    for l in [n, n + 1] {
        for q in 0..=2 {
            let g = alg.generators(q, l)?;
            hh_lengths.push((l, q, alg.hh(q, l)?.length()));
            gens.insert((q, l), g);
        }
    }
    let gl = |q: usize, l: u32| -> &Vec<TaCochain> { &gens[&(q, l)] };
    let tag = |s: &str, q: usize, i: usize| format!("{s}: degree {q}, generator {i}");
    let mut checks = Vec::new();

    let mut res = Vec::new();
    for q in 0..=2 {
        for (i, x) in gl(q, n).iter().enumerate() {
            res.push((ck.same(&x.vbar(1)?.rbar(1)?, &x.scale(p))?, tag("r̄v̄x", q, i)));
        }
        for (i, y) in gl(q, n + 1).iter().enumerate() {
            res.push((ck.same(&y.rbar(1)?.vbar(1)?, &y.scale(p))?, tag("v̄r̄y", q, i)));
        }
    }
    record(&mut checks, "r̄v̄ = v̄r̄ = p", res);

    let mut res = Vec::new();
    for q in 0..=2 {
        for (i, y) in gl(q, n + 1).iter().enumerate() {
            let lhs = alg.bockstein(&y.rbar(1)?)?;
            let rhs = alg.bockstein(y)?.rbar(1)?.scale(p);
            res.push((ck.same(&lhs, &rhs)?, tag("y", q, i)));
        }
    }
    record(&mut checks, "d_n r̄ = p r̄ d_{n+1}", res);

    let mut res = Vec::new();
    for q in 0..=2 {
        for (i, x) in gl(q, n).iter().enumerate() {
            let lhs = alg.bockstein(&x.vbar(1)?)?.rbar(1)?;
            res.push((ck.same(&lhs, &alg.bockstein(x)?)?, tag("x", q, i)));
        }
    }
    record(&mut checks, "r̄ d_{n+1} v̄ = d_n", res);

    let mut res = Vec::new();
    for q in 0..=2 {
        for (i, x) in gl(q, n).iter().enumerate() {
            let lhs = alg.bockstein(x)?.vbar(1)?;
            let rhs = alg.bockstein(&x.vbar(1)?)?.scale(p);
            res.push((ck.same(&lhs, &rhs)?, tag("x", q, i)));
        }
    }
    record(&mut checks, "v̄ d_n = p d_{n+1} v̄", res);

    let mut res = Vec::new();
    for a in 0..=2 {
        for b in 0..=(2 - a) {
            for (i, x) in gl(a, n + 1).iter().enumerate() {
                for (j, y) in gl(b, n).iter().enumerate() {
                    let lhs = alg.cup(x, &y.vbar(1)?)?;
                    let rhs = alg.cup(&x.rbar(1)?, y)?.vbar(1)?;
                    res.push((ck.same(&lhs, &rhs)?, format!("x: degree {a} #{i}, y: degree {b} #{j}")));
                }
            }
        }
    }
    record(&mut checks, "x v̄(y) = v̄(r̄(x) y)", res);

    let mut res = Vec::new();
    for a in 0..=2 {
        for b in 0..=(2 - a) {
            for (i, x) in gl(a, n).iter().enumerate() {
                for (j, y) in gl(b, n).iter().enumerate() {
                    let lhs = alg.cup(x, &alg.bockstein(y)?)?.vbar(1)?;
                    let rhs = alg.cup(&x.vbar(1)?, &alg.bockstein(&y.vbar(1)?)?)?;
                    res.push((ck.same(&lhs, &rhs)?, format!("x: degree {a} #{i}, y: degree {b} #{j}")));
                }
            }
        }
    }
    record(&mut checks, "v̄(x d_n y) = v̄(x) d_{n+1}(v̄ y)", res);

    let mut res = Vec::new();
    for a in 0..=2 {
        for (i, x) in gl(a, n).iter().enumerate() {
            let dx = alg.bockstein(x)?;
            let zero = TaCochain { q: a + 2, modulus: x.modulus, vals: vec![0; alg.dim(a + 2)] };
            if a + 2 <= 3 {
                res.push((ck.same(&alg.bockstein(&dx)?, &zero)?, tag("d²x", a, i)));
            }
            for b in 0..=(2 - a) {
                for (j, y) in gl(b, n).iter().enumerate() {
                    let lhs = alg.bockstein(&alg.cup(x, y)?)?;
                    let sign = if a % 2 == 1 { x.modulus.value - 1 } else { 1 };
                    let rhs = alg.cup(&dx, y)?.add(&alg.cup(x, &alg.bockstein(y)?)?.scale(sign));
                    res.push((ck.same(&lhs, &rhs)?, format!("Leibniz x: degree {a} #{i}, y: degree {b} #{j}")));
                }
            }
        }
    }
    record(&mut checks, "d_n is a derivation with d_n² = 0", res);

    let readings = vec![
        "d_n r̄ = p r̄ d_m is read with m = n + 1, the only index making r̄: level m → level n typecheck".into(),
        "r̄ d_n v̄ = d_n and v̄ d_n = p d_n v̄ are read with the inner Bockstein at level n + 1".into(),
    ];
    Ok(LemmaReport { p, n, truncation: k, hh_lengths, checks, readings })
}
