//! Executable verification suites: every identity the engine promises is a
//! named suite producing a structured outcome with witnesses on failure.

pub mod chart_level;
pub mod epg_level;
pub mod orb_level;

use crate::chart::ChartComplex;
use crate::forms::PPForm;
use crate::poly::Poly;
use crate::rat::Rat;

/// Monomial-coefficient test forms of a given degree with coefficient total
/// degree at most `deg_bound`, on every chart simultaneously.
pub fn monomial_test_forms(
    base: &ChartComplex,
    form_degree: usize,
    deg_bound: u32,
) -> Vec<PPForm> {
    let mut out = Vec::new();
    if form_degree > base.dim {
        return out;
    }
    for idx in crate::forms::multi_indices(base.dim, form_degree) {
        for exps in exponents_up_to(base.dim, deg_bound) {
            let p = Poly::monomial(exps, Rat::one());
            if let Ok(f) = PPForm::monomial_form(base, &idx, p) {
                out.push(f);
            }
        }
    }
    out
}

/// All exponent vectors with total degree <= bound, lexicographic.
pub fn exponents_up_to(dim: usize, bound: u32) -> Vec<Vec<u32>> {
    fn rec(dim: usize, bound: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if acc.len() == dim {
            out.push(acc.clone());
            return;
        }
        for k in 0..=bound {
            acc.push(k);
            rec(dim, bound - k, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, bound, &mut Vec::new(), &mut out);
    out
}
