//! Checks shared by the integration suites.
#![allow(dead_code)]

use laxgray::dac::{tensor, Chain, DAComplex};
use laxgray::nu::{NuCell, NuCells};
use laxgray::Result;

/// `d∘d = 0` and `e∘d = 0` on every generator.
pub fn is_chain_complex(k: &DAComplex) -> Result<bool> {
    for deg in 1..=k.top_degree() {
        for g in 0..k.rank(deg) as u32 {
            let dg = k.d(deg, g);
            if deg == 1 && k.augment(dg)? != 0 {
                return Ok(false);
            }
            if deg >= 2 && !k.apply_d(deg - 1, dg)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `(a⊗b)⊗c ↦ a⊗(b⊗c)` is a bijection on bases commuting with `d` and `e`,
/// with no extra signs.
pub fn associator_is_iso(a: &DAComplex, b: &DAComplex, c: &DAComplex) -> Result<bool> {
    let ab = tensor(a, b);
    let bc = tensor(b, c);
    let left = tensor(&ab, c);
    let right = tensor(a, &bc);
    if left.ranks() != right.ranks() {
        return Ok(false);
    }
    let phi = |n: usize, g: u32| {
        let (p, x, r, z) = left.unpair(n, g);
        let (i, u, j, v) = ab.unpair(p, x);
        right.pair(i, u, j + r, bc.pair(j, v, r, z))
    };
    for n in 0..=left.top_degree() {
        let mut seen = vec![false; right.rank(n)];
        for g in 0..left.rank(n) as u32 {
            let h = phi(n, g) as usize;
            if std::mem::replace(&mut seen[h], true) {
                return Ok(false);
            }
            if n == 0 {
                if left.e(g) != right.e(h as u32) {
                    return Ok(false);
                }
                continue;
            }
            let image = Chain::from_terms(
                left.d(n, g)
                    .terms()
                    .iter()
                    .map(|&(x, k)| (phi(n - 1, x), k)),
            )?;
            if &image != right.d(n, h as u32) {
                return Ok(false);
            }
        }
        if seen.iter().any(|s| !s) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every instance of `(a ⋆_k b) ⋆_j (c ⋆_k e) = (a ⋆_j c) ⋆_k (b ⋆_j e)` with
/// `j < k`. Returns (instances, failures).
pub fn exchange_law(cells: &NuCells) -> (usize, usize) {
    let mut instances = 0;
    let mut failures = 0;
    for d in 2..=cells.max_dim() {
        let cs = cells.cells(d);
        for k in 1..d {
            let pairs: Vec<(&NuCell, &NuCell, NuCell)> = cs
                .iter()
                .flat_map(|a| cs.iter().map(move |b| (a, b)))
                .filter_map(|(a, b)| NuCell::compose(k, a, b).ok().map(|ab| (a, b, ab)))
                .collect();
            for j in 0..k {
                for (a, b, ab) in &pairs {
                    for (c, e, ce) in &pairs {
                        let (Ok(ac), Ok(be)) = (NuCell::compose(j, a, c), NuCell::compose(j, b, e))
                        else {
                            continue;
                        };
                        instances += 1;
                        let lhs = NuCell::compose(j, ab, ce);
                        let rhs = NuCell::compose(k, &ac, &be);
                        match (lhs, rhs) {
                            (Ok(l), Ok(r)) if l == r && cells.contains(&l) => {}
                            _ => failures += 1,
                        }
                    }
                }
            }
        }
    }
    (instances, failures)
}
