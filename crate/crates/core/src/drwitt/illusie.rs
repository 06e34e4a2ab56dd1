use serde::Serialize;

use super::model::{span, DrwContext};
use super::{DrwError, WittWeight};
use crate::zmod::{kernel, rows_length, ZModMatrix};

/// Position in `W_1Ω^q →V^n→ W_{n+1}Ω^q →F→ W_nΩ^q →F^{n-1}d→ W_1Ω^{q+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NodeKind {
    /// `W_1Ω^q` in weight `p^n k`.
    Source,
    /// `W_{n+1}Ω^q` in weight `k`.
    Middle,
    /// `W_nΩ^q` in weight `p k`.
    Target,
}

#[derive(Clone, Debug, Serialize)]
pub struct IllusieNode {
    pub weight: WittWeight,
    pub q: usize,
    pub node: NodeKind,
    pub length: u32,
    pub image_length: u32,
    pub kernel_length: u32,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IllusieReport {
    pub p: u64,
    pub m: usize,
    pub n: u32,
    pub nodes: Vec<IllusieNode>,
}

impl IllusieReport {
    pub fn passed(&self) -> bool {
        self.nodes.iter().all(|x| x.exact)
    }

    pub fn failures(&self) -> Vec<&IllusieNode> {
        self.nodes.iter().filter(|x| !x.exact).collect()
    }
}

/// A module in the sequence: level, degree, weight.
type Spot = (u32, usize, WittWeight);

fn apply_map(ctx: &DrwContext, from: &Spot, to: &Spot, v: &[u64]) -> Result<Vec<u64>, DrwError> {
    let md = ctx.modulus();
    if to.1 == from.1 {
        if to.2 == from.2.times_p_pow(1) && to.0 + 1 == from.0 {
            // F keeps coordinates
            return Ok(v.to_vec());
        }
        // V^n multiplies by p^n
        let k = from.0.abs_diff(to.0);
        let f = md.p_pow(k);
        return Ok(v.iter().map(|x| md.mul(*x, f)).collect());
    }
    // F^{n-1} d: d then relabel
    ctx.d_vector(&from.2, from.1, v)
}

/// Checks `im(prev) = ker(next)` at `here`.
fn check_node(
    ctx: &DrwContext,
    prev: Option<&Spot>,
    here: &Spot,
    next: Option<&Spot>,
) -> Result<(u32, u32, u32, bool), DrwError> {
    let md = ctx.modulus();
    let y = ctx.weight_module(here.0, here.1, &here.2)?;
    let dim = y.dim();
    if dim == 0 || y.module.is_zero() {
        return Ok((0, 0, 0, true));
    }
    let fil_len = rows_length(md, dim, &y.filtration)?;
    let mut image = y.filtration.clone();
    if let Some(prev) = prev {
        let x = ctx.weight_module(prev.0, prev.1, &prev.2)?;
        if !x.module.is_zero() {
            for e in &x.lattice {
                image.push(apply_map(ctx, prev, here, e)?);
            }
        }
    }
    let mut kern = Vec::new();
    match next {
        Some(next) => {
            let z = ctx.weight_module(next.0, next.1, &next.2)?;
            if z.module.is_zero() {
                kern = y.lattice.clone();
            } else {
                let mut g = ZModMatrix::zeros(md, y.lattice.len(), z.module.exponents().len());
                for (r, e) in y.lattice.iter().enumerate() {
                    let img = apply_map(ctx, here, next, e)?;
                    let c = z.module.embedded_coordinates(&img, md)?;
                    for (col, v) in c.into_iter().enumerate() {
                        g.set(r, col, v);
                    }
                }
                let lat = span(md, dim, &y.lattice);
                for lam in kernel(&g) {
                    kern.push(lat.apply(&lam)?);
                }
            }
        }
        None => kern = y.lattice.clone(),
    }
    let im_len = rows_length(md, dim, &image)? - fil_len;
    let ker_len = rows_length(md, dim, &kern)? - fil_len;
    Ok((y.length(), im_len, ker_len, ctx.same_span(dim, &image, &kern)))
}

/// Exactness of the sequence at every node for every weight `k` of the list.
pub fn illusie_exactness(ctx: &DrwContext, n: u32, weights: &[WittWeight]) -> Result<IllusieReport, DrwError> {
    let m = ctx.rank();
    let mut nodes = Vec::new();
    for k in weights {
        let mut chain: Vec<(Spot, NodeKind)> = Vec::new();
        for q in 0..=m {
            chain.push(((1, q, k.times_p_pow(n)), NodeKind::Source));
            chain.push(((n + 1, q, k.clone()), NodeKind::Middle));
            chain.push(((n, q, k.times_p_pow(1)), NodeKind::Target));
        }
        for i in 0..chain.len() {
            let prev = if i == 0 { None } else { Some(&chain[i - 1].0) };
            let next = chain.get(i + 1).map(|c| &c.0);
            let (length, image_length, kernel_length, exact) = check_node(ctx, prev, &chain[i].0, next)?;
            nodes.push(IllusieNode {
                weight: k.clone(),
                q: chain[i].0 .1,
                node: chain[i].1,
                length,
                image_length,
                kernel_length,
                exact,
            });
        }
    }
    Ok(IllusieReport { p: ctx.p(), m, n, nodes })
}

/// All weights with denominators dividing `p^n` and total weight at most `bound`.
pub fn illusie_window(p: u64, m: usize, n: u32, bound: u64) -> Vec<WittWeight> {
    WittWeight::enumerate(p, m, n, bound)
}
