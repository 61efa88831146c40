//! Reductions to few non-constant components: merging low-spread components
//! into constants, and padding small covers with constant shifts.

use crate::dist::{KIrv, KSiirv};
use crate::error::{Error, Result};

/// Most likely value (lowest on ties) and the mass off it.
fn mode_and_spread(irv: &KIrv) -> (usize, f64) {
    let p = irv.probs();
    let mode = (0..p.len()).fold(0, |best, j| if p[j] > p[best] { j } else { best });
    (mode, 1.0 - p[mode])
}

/// Repeatedly replaces two non-constant components with the same mode and
/// spread below `delta` by one component carrying both spreads plus a
/// constant. Each merge moves TV by at most `2 d(A) d(B)`; at the end at most
/// `k + 2V/delta` components are non-constant.
pub fn sparsify(model: &KSiirv, delta: f64) -> Result<KSiirv> {
    if !(delta > 0.0 && delta < 0.25) {
        return Err(Error::InvalidArgument(format!(
            "delta must lie in (0, 1/4), got {delta}"
        )));
    }
    let k = model.k();
    let mut comps: Vec<KIrv> = model.components().to_vec();
    for mode in 0..k {
        let mut pool: Vec<usize> = (0..comps.len())
            .filter(|&i| {
                let (m, d) = mode_and_spread(&comps[i]);
                m == mode && d > 0.0 && d < delta
            })
            .collect();
        while pool.len() >= 2 {
            let b = pool.pop().unwrap();
            let a = pool.pop().unwrap();
            let mut p: Vec<f64> = comps[a]
                .probs()
                .iter()
                .zip(comps[b].probs())
                .map(|(x, y)| x + y)
                .collect();
            let d = (1.0 - comps[a].probs()[mode]) + (1.0 - comps[b].probs()[mode]);
            p[mode] = 1.0 - d;
            comps[a] = KIrv::new(p)?;
            comps[b] = KIrv::constant(k, mode);
            if d < delta {
                pool.push(a);
            }
        }
    }
    KSiirv::new(comps)
}

/// Pads each order-`n'` model with `n_total − n'` constants, one copy per
/// total shift in `0..=(n_total − n')(k−1)`.
pub fn cover_with_translations(base: &[KSiirv], n_total: usize) -> Result<Vec<KSiirv>> {
    let mut out = Vec::new();
    for m in base {
        let (k, n) = (m.k(), m.n());
        if n > n_total {
            return Err(Error::InvalidArgument(format!(
                "model of order {n} exceeds {n_total}"
            )));
        }
        let pad = n_total - n;
        for shift in 0..=pad * (k - 1) {
            let mut left = shift;
            let mut comps = m.components().to_vec();
            for _ in 0..pad {
                let v = left.min(k - 1);
                left -= v;
                comps.push(KIrv::constant(k, v));
            }
            out.push(KSiirv::new(comps)?);
        }
    }
    Ok(out)
}
