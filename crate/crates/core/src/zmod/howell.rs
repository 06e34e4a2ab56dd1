use super::{Modulus, ZModMatrix};

/// Pivot of a Howell-form row: the row index in `h`, its leading column and
/// the valuation `v` of the leading entry (which is exactly `p^v`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pivot {
    pub row: usize,
    pub col: usize,
    pub valuation: u32,
}

/// Reduced Howell form of a matrix over Z/p^e.
///
/// The input is padded with `cols` zero rows so that saturation rows always
/// have a slot, hence `u` is square of size `rows + cols` and
/// `u · [M; 0] = h`. The nonzero rows of `h` are its first `rank` rows.
#[derive(Clone, Debug)]
pub struct HowellForm {
    pub h: ZModMatrix,
    pub u: ZModMatrix,
    pub pivots: Vec<Pivot>,
    input_rows: usize,
}

impl HowellForm {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn modulus(&self) -> Modulus {
        self.h.modulus()
    }

    /// The nonzero rows, i.e. a canonical generating set of the row span.
    pub fn basis(&self) -> Vec<Vec<u64>> {
        (0..self.rank()).map(|r| self.h.row_vec(r)).collect()
    }

    pub fn basis_matrix(&self) -> ZModMatrix {
        let rows = self.basis();
        ZModMatrix::from_rows(self.h.modulus(), self.h.cols(), &rows).expect("shape is fixed")
    }

    /// Coefficients `c` (one per Howell row) with `c · H = v`, or `None` when
    /// `v` is outside the row span.
    pub fn solve_in_basis(&self, v: &[u64]) -> Option<Vec<u64>> {
        let m = self.modulus();
        if v.len() != self.h.cols() {
            return None;
        }
        let mut rest: Vec<u64> = v.iter().map(|x| m.reduce(*x)).collect();
        let mut coeffs = vec![0u64; self.rank()];
        for piv in &self.pivots {
            let x = rest[piv.col];
            if x == 0 {
                continue;
            }
            let c = m.div_p_pow(x, piv.valuation)?;
            coeffs[piv.row] = c;
            let neg = m.neg(c);
            for (j, r) in rest.iter_mut().enumerate() {
                let hv = self.h.get(piv.row, j);
                if hv != 0 {
                    *r = m.add(*r, m.mul(neg, hv));
                }
            }
        }
        if rest.iter().all(|x| *x == 0) {
            Some(coeffs)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.solve_in_basis(v).is_some()
    }

    /// Coefficients on the rows of the original input matrix.
    pub fn solve(&self, v: &[u64]) -> Option<Vec<u64>> {
        let c = self.solve_in_basis(v)?;
        let m = self.modulus();
        let mut out = vec![0u64; self.input_rows];
        for (r, &cr) in c.iter().enumerate() {
            if cr == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let x = self.u.get(r, j);
                if x != 0 {
                    *o = m.add(*o, m.mul(cr, x));
                }
            }
        }
        Some(out)
    }

    /// Double inclusion of row spans reduces to comparing canonical forms.
    pub fn same_span(&self, other: &HowellForm) -> bool {
        self.modulus() == other.modulus() && self.basis() == other.basis()
    }
}

pub fn howell_form(m: &ZModMatrix) -> HowellForm {
    let modulus = m.modulus();
    let (rows, cols) = (m.rows(), m.cols());
    let total = rows + cols;
    let mut h = ZModMatrix::zeros(modulus, total, cols);
    for i in 0..rows {
        for j in 0..cols {
            h.set(i, j, m.get(i, j));
        }
    }
    let mut u = ZModMatrix::identity(modulus, total);
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..cols {
        if top >= total {
            break;
        }
        let best = (top..total)
            .map(|r| (modulus.valuation(h.get(r, col)), r))
            .filter(|(v, _)| *v < modulus.e)
            .min();
        let Some((_, best)) = best else { continue };
        h.swap_rows(top, best);
        u.swap_rows(top, best);
        let (v, unit) = modulus.split(h.get(top, col));
        let inv = modulus.inv(unit).expect("unit part is invertible");
        h.scale_row(top, inv);
        u.scale_row(top, inv);
        for r in top + 1..total {
            let x = h.get(r, col);
            if x == 0 {
                continue;
            }
            let c = modulus.div_p_pow(x, v).expect("pivot has minimal valuation");
            let neg = modulus.neg(c);
            h.add_row_multiple(r, top, neg);
            u.add_row_multiple(r, top, neg);
        }
        if v > 0 {
            let factor = modulus.p_pow(modulus.e - v);
            let saturated_nonzero = h.row(top).iter().any(|x| modulus.mul(*x, factor) != 0);
            if saturated_nonzero {
                let slot = (top + 1..total)
                    .find(|&r| h.row(r).iter().all(|x| *x == 0))
                    .expect("padding guarantees a free row");
                h.add_row_multiple(slot, top, factor);
                u.add_row_multiple(slot, top, factor);
            }
        }
        pivots.push(Pivot { row: top, col, valuation: v });
        top += 1;
    }
    // Reduce entries above each pivot into [0, p^v).
    for piv in pivots.iter() {
        let pv = modulus.p_pow(piv.valuation);
        for i in 0..piv.row {
            let x = h.get(i, piv.col);
            let c = if piv.valuation == 0 { x } else { x / pv };
            if c != 0 {
                let neg = modulus.neg(c);
                h.add_row_multiple(i, piv.row, neg);
                u.add_row_multiple(i, piv.row, neg);
            }
        }
    }
    HowellForm { h, u, pivots, input_rows: rows }
}

/// Generators of the left kernel `{v : v · M = 0}`.
pub fn kernel(m: &ZModMatrix) -> Vec<Vec<u64>> {
    let modulus = m.modulus();
    let aug = m
        .hcat(&ZModMatrix::identity(modulus, m.rows()))
        .expect("row counts agree");
    let hf = howell_form(&aug);
    let c = m.cols();
    hf.basis()
        .into_iter()
        .filter(|row| row[..c].iter().all(|x| *x == 0))
        .map(|row| row[c..].to_vec())
        .collect()
}

/// Checks that `h` satisfies the Howell property: for every pivot row with
/// valuation v, `p^{e-v}` times that row lies in the span of the rows below it.
pub fn is_howell(hf: &HowellForm) -> bool {
    let modulus = hf.modulus();
    for (k, piv) in hf.pivots.iter().enumerate() {
        if piv.valuation == 0 {
            continue;
        }
        let factor = modulus.p_pow(modulus.e - piv.valuation);
        let target: Vec<u64> = hf.h.row(piv.row).iter().map(|x| modulus.mul(*x, factor)).collect();
        let below: Vec<Vec<u64>> = hf.pivots[k + 1..].iter().map(|q| hf.h.row_vec(q.row)).collect();
        // Reduce greedily against the lower rows only.
        let mut rest = target;
        for (q, row) in hf.pivots[k + 1..].iter().zip(&below) {
            let x = rest[q.col];
            if x == 0 {
                continue;
            }
            let Some(c) = modulus.div_p_pow(x, q.valuation) else {
                return false;
            };
            let neg = modulus.neg(c);
            for (r, hv) in rest.iter_mut().zip(row) {
                *r = modulus.add(*r, modulus.mul(neg, *hv));
            }
        }
        if rest.iter().any(|x| *x != 0) {
            return false;
        }
    }
    true
}
