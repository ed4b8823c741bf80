//! Fixed inputs shared by the criterion benches.

use msrs::exact_core::{rat, IntPoly, MPoly, UPoly, Var};
use msrs::model::MsrsModel;

pub fn sd(n: u32, c: i64) -> MsrsModel {
    MsrsModel::simultaneous_decision(n, rat(c)).expect("builtin model")
}

/// A pair of dense degree-6 polynomials in z with small integer coefficients.
pub fn resultant_pair() -> (MPoly, MPoly) {
    let f = UPoly::from_ints(&[3, -1, 4, -1, 5, -9, 2]);
    let g = UPoly::from_ints(&[-6, 5, 3, -5, 8, 9, -7]);
    (MPoly::from_upoly(&f, Var::Z), MPoly::from_upoly(&g, Var::Z))
}

/// Wilkinson-style product (σ − 1)(σ − 2)…(σ − k).
pub fn clustered_roots(k: i64) -> IntPoly {
    (1..=k).fold(IntPoly::one(), |p, r| p.mul(&IntPoly::from_i64(&[-r, 1])))
}
