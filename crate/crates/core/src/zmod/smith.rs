use super::ZModMatrix;

/// Smith form over the local ring Z/p^e, keeping only the column transform.
///
/// With `C = coords` and `B = basis = C^{-1}`, the row span of the input
/// equals the row span of `diag(p^{v_i}) · B`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// One valuation per column; `e` marks a zero diagonal entry.
    pub valuations: Vec<u32>,
    pub basis: ZModMatrix,
    pub coords: ZModMatrix,
}

pub fn smith_form(m: &ZModMatrix) -> SmithForm {
    let modulus = m.modulus();
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut coords = ZModMatrix::identity(modulus, cols);
    let mut basis = ZModMatrix::identity(modulus, cols);
    let mut valuations = vec![modulus.e; cols];
    for k in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let v = modulus.valuation(d.get(i, j));
                if v < modulus.e && best.is_none_or(|b| v < b.0) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        d.swap_rows(k, pi);
        if pj != k {
            d.swap_cols(k, pj);
            coords.swap_cols(k, pj);
            basis.swap_rows(k, pj);
        }
        let (_, unit) = modulus.split(d.get(k, k));
        let inv = modulus.inv(unit).expect("unit");
        d.scale_col(k, inv);
        coords.scale_col(k, inv);
        basis.scale_row(k, unit);
        for i in k + 1..rows {
            let x = d.get(i, k);
            if x != 0 {
                let c = modulus.div_p_pow(x, v).expect("minimal valuation pivot");
                d.add_row_multiple(i, k, modulus.neg(c));
            }
        }
        for j in k + 1..cols {
            let x = d.get(k, j);
            if x != 0 {
                let c = modulus.div_p_pow(x, v).expect("minimal valuation pivot");
                let neg = modulus.neg(c);
                d.add_col_multiple(j, k, neg);
                coords.add_col_multiple(j, k, neg);
                // inverse of the column operation acts on rows of the basis
                basis.add_row_multiple(k, j, c);
            }
        }
        valuations[k] = v;
    }
    SmithForm { valuations, basis, coords }
}

/// Length (as a Z_p-module) of the row span of `m`.
pub fn span_length(m: &ZModMatrix) -> u32 {
    let e = m.modulus().e;
    smith_form(m).valuations.iter().map(|v| e - v).sum()
}

/// Invariant factor exponents of `(Z/p^e)^cols / rowspan(m)`, trivial ones dropped.
pub fn cokernel_exponents(m: &ZModMatrix) -> Vec<u32> {
    let mut ex: Vec<u32> = smith_form(m).valuations.into_iter().filter(|v| *v > 0).collect();
    ex.sort_unstable();
    ex
}
