//! Slow, independent reference implementations of the exact kernels. They
//! share no code with the fast routes beyond polynomial arithmetic.

use num_traits::{One, Signed, Zero};

use crate::exact_core::{sylvester_matrix, IntPoly, MPoly, Rat, Var};

/// Determinant over ℚ by Gaussian elimination with row pivoting.
pub fn det_rat(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rat::zero();
        };
        if piv != c {
            m.swap(piv, c);
            d = -d;
        }
        d *= &m[c][c];
        for r in c + 1..n {
            let f = &m[r][c] / &m[c][c];
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] -= t;
            }
        }
    }
    d
}

/// Resultant of two univariate polynomials in `v` with rational coefficients,
/// as the determinant of their Sylvester matrix.
pub fn sylvester_resultant(f: &MPoly, g: &MPoly, v: Var) -> Rat {
    let m = sylvester_matrix(f, g, v);
    det_rat(
        m.into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|c| c.constant_value().expect("univariate input"))
                    .collect()
            })
            .collect(),
    )
}

/// Number of distinct positive real roots, from Sturm sign variations at 0 and +∞.
pub fn sturm_positive(f: &IntPoly) -> usize {
    let (f, _) = f.strip_x();
    if f.deg() == 0 {
        return 0;
    }
    let f = f.squarefree().to_upoly();
    let mut chain = vec![f.clone(), f.derivative()];
    loop {
        let n = chain.len();
        let r = chain[n - 2].divrem(&chain[n - 1]).1;
        if r.is_zero() {
            break;
        }
        chain.push(r.scale(&-Rat::one()));
    }
    let variations = |vals: Vec<i32>| -> usize {
        let nz: Vec<i32> = vals.into_iter().filter(|s| *s != 0).collect();
        nz.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let sgn = |r: Rat| {
        if r.is_positive() {
            1
        } else if r.is_negative() {
            -1
        } else {
            0
        }
    };
    let at0 = variations(chain.iter().map(|p| sgn(p.coeff(0))).collect());
    let atinf = variations(chain.iter().map(|p| sgn(p.lc())).collect());
    at0 - atinf
}
