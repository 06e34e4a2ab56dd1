use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{check_params, WittError, WittRing, WittVector};
use crate::poly::MPoly;
use crate::ring::{Integers, PolyRing};
use crate::zmod::Modulus;

#[derive(Clone, Debug, Serialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub instances: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct WittAxiomsReport {
    pub p: u64,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub checks: Vec<AxiomCheck>,
}

impl WittAxiomsReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0 && c.instances > 0)
    }
}

struct Tally(Vec<AxiomCheck>);

impl Tally {
    fn record(&mut self, axiom: &str, ok: bool) {
        let i = match self.0.iter().position(|c| c.axiom == axiom) {
            Some(i) => i,
            None => {
                self.0.push(AxiomCheck { axiom: axiom.to_string(), instances: 0, failures: 0 });
                self.0.len() - 1
            }
        };
        self.0[i].instances += 1;
        self.0[i].failures += usize::from(!ok);
    }
}

/// Random-sample verification of the Witt vector structure at `(p, n)`:
/// ghost-equivariance over `Z` of `+`, `·`, `-`, `F` and `V`, and over
/// `F_p[t]` the identities `FV = p`, `V(a) b = V(a F b)` and multiplicativity
/// of Teichmüller lifts.
pub fn witt_axioms_check(p: u64, n: usize, samples: usize, seed: u64) -> Result<WittAxiomsReport, WittError> {
    check_params(p, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally(Vec::new());

    let wz = WittRing::new(Integers, p, n)?;
    let wz_short = if n >= 2 { Some(WittRing::new(Integers, p, n - 1)?) } else { None };
    let wz_long = WittRing::new(Integers, p, n + 1)?;
    let int_vec = |rng: &mut ChaCha8Rng| WittVector { p, comps: (0..n).map(|_| BigInt::from(rng.gen_range(-50i64..=50))).collect() };
    for _ in 0..samples {
        let a = int_vec(&mut rng);
        let b = int_vec(&mut rng);
        let (ga, gb) = (wz.ghost(&a)?, wz.ghost(&b)?);
        let gs = wz.ghost(&wz.add(&a, &b)?)?;
        tally.record("ghost(a + b) = ghost(a) + ghost(b)", (0..n).all(|i| gs[i] == &ga[i] + &gb[i]));
        let gp = wz.ghost(&wz.mul(&a, &b)?)?;
        tally.record("ghost(a b) = ghost(a) ghost(b)", (0..n).all(|i| gp[i] == &ga[i] * &gb[i]));
        let gn = wz.ghost(&wz.neg(&a)?)?;
        let gn_universal = wz.ghost(&wz.neg_universal(&a)?)?;
        tally.record("ghost(-a) = -ghost(a)", (0..n).all(|i| gn[i] == -&ga[i] && gn_universal[i] == gn[i]));
        if let Some(ws) = &wz_short {
            let gf = ws.ghost(&wz.frobenius(&a)?)?;
            tally.record("ghost(F a)_i = ghost(a)_{i+1}", gf[..] == ga[1..]);
        }
        let gv = wz_long.ghost(&wz.verschiebung(&a)?)?;
        tally.record("ghost(V a) = (0, p ghost(a))", gv[0] == BigInt::from(0) && (0..n).all(|i| gv[i + 1] == &ga[i] * p));
    }

    let fp = Modulus::new(p, 1).map_err(|_| WittError::BadParams { p, n })?;
    let bound = 4 * (p as u32).pow(n as u32 + 1);
    let ring = PolyRing::new(fp, 1, bound);
    let wn = WittRing::new(ring, p, n)?;
    let poly = |rng: &mut ChaCha8Rng| MPoly::from_terms(fp, 1, (0..=2u32).map(|i| (vec![i], rng.gen_range(0..p))));
    let witt = |rng: &mut ChaCha8Rng, len: usize| WittVector { p, comps: (0..len).map(|_| poly(rng)).collect() };
    let p_big = BigInt::from(p);
    for _ in 0..samples {
        let f = poly(&mut rng);
        let g = poly(&mut rng);
        let tf = wn.teichmuller(f.clone());
        let tg = wn.teichmuller(g.clone());
        tally.record("[f][g] = [fg] over F_p[t]", wn.mul(&tf, &tg)? == wn.teichmuller(f.mul(&g)));
        if n >= 2 {
            let ws = wn.with_len(n - 1)?;
            let a = witt(&mut rng, n - 1);
            let b = witt(&mut rng, n);
            let fva = wn.frobenius(&ws.verschiebung(&a)?)?;
            tally.record("FV = p over F_p[t]", fva == ws.scale_int(&p_big, &a)?);
            let lhs = wn.mul(&ws.verschiebung(&a)?, &b)?;
            let rhs = ws.verschiebung(&ws.mul(&a, &wn.frobenius(&b)?)?)?;
            tally.record("V(a) b = V(a F b) over F_p[t]", lhs == rhs);
        }
    }
    Ok(WittAxiomsReport { p, n, samples, seed, checks: tally.0 })
}
