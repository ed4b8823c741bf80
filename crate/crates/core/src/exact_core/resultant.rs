use super::{IntPoly, MPoly, UPoly, Var};

fn trim(a: &mut Vec<MPoly>) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

fn deg(a: &[MPoly]) -> usize {
    a.len().saturating_sub(1)
}

/// Pseudo-remainder of dense coefficient lists: `lc(b)^(da-db+1)·a = q·b + r`.
fn prem_dense(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let db = deg(b);
    let lb = b.last().unwrap();
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return r;
    }
    let mut e = deg(&r) - db + 1;
    while !r.is_empty() && deg(&r) >= db {
        let lr = r.last().unwrap().clone();
        let shift = deg(&r) - db;
        let mut next: Vec<MPoly> = r.iter().map(|c| c * lb).collect();
        for (j, bj) in b.iter().enumerate() {
            next[j + shift] = &next[j + shift] - &(&lr * bj);
        }
        trim(&mut next);
        r = next;
        e -= 1;
    }
    if e > 0 {
        let f = lb.pow(e as u32);
        r = r.iter().map(|c| c * &f).collect();
    }
    r
}

/// Pseudo-remainder of `a` by `b` with respect to `v`.
pub fn prem(a: &MPoly, b: &MPoly, v: Var) -> MPoly {
    MPoly::from_coeffs(v, &prem_dense(&a.coeffs(v), &b.coeffs(v)))
}

/// Sylvester resultant with respect to `v` (rows of `f` first), by the
/// subresultant polynomial remainder sequence.
pub fn resultant(f: &MPoly, g: &MPoly, v: Var) -> MPoly {
    if f.is_zero() || g.is_zero() {
        return MPoly::zero();
    }
    let (mut a, mut b) = (f.coeffs(v), g.coeffs(v));
    let (m, n) = (deg(&a), deg(&b));
    if m == 0 {
        return a[0].pow(n as u32);
    }
    if n == 0 {
        return b[0].pow(m as u32);
    }
    let mut s = MPoly::one();
    if m < n {
        std::mem::swap(&mut a, &mut b);
        if (m * n) % 2 == 1 {
            s = -s;
        }
    }
    let mut g_ = MPoly::one();
    let mut h = MPoly::one();
    loop {
        let (da, db) = (deg(&a), deg(&b));
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = prem_dense(&a, &b);
        a = b;
        if r.is_empty() {
            return MPoly::zero();
        }
        let divisor = &g_ * &h.pow(delta as u32);
        b = r
            .iter()
            .map(|c| c.exact_div(&divisor).expect("subresultant division is exact"))
            .collect();
        g_ = a.last().unwrap().clone();
        h = match delta {
            0 => h,
            1 => g_.clone(),
            d => g_
                .pow(d as u32)
                .exact_div(&h.pow(d as u32 - 1))
                .expect("subresultant division is exact"),
        };
        if deg(&b) == 0 {
            let da = deg(&a) as u32;
            let res = b[0]
                .pow(da)
                .exact_div(&h.pow(da - 1))
                .expect("subresultant division is exact");
            return &s * &res;
        }
    }
}

/// Sylvester matrix of `f` (degree m) and `g` (degree n) in `v`: n rows of
/// `f` coefficients then m rows of `g`, columns by descending power.
pub fn sylvester_matrix(f: &MPoly, g: &MPoly, v: Var) -> Vec<Vec<MPoly>> {
    let (a, b) = (f.coeffs(v), g.coeffs(v));
    let (m, n) = (deg(&a), deg(&b));
    let size = m + n;
    let mut rows = vec![];
    for (poly, d, count) in [(&a, m, n), (&b, n, m)] {
        for s in (0..count).rev() {
            let mut row = vec![MPoly::zero(); size];
            for (j, c) in poly.iter().enumerate().take(d + 1) {
                row[size - 1 - (j + s)] = c.clone();
            }
            rows.push(row);
        }
    }
    rows
}

fn to_int(f: &MPoly, v: Var) -> IntPoly {
    f.to_upoly(v)
        .expect("polynomial must be univariate in the given variable")
        .to_intpoly()
}

/// Monic gcd of two univariate polynomials; `gcd(f, 0)` is monic `f`.
pub fn univariate_gcd(f: &MPoly, g: &MPoly, v: Var) -> MPoly {
    let g = to_int(f, v).gcd(&to_int(g, v));
    if g.is_zero() {
        return MPoly::zero();
    }
    let u: UPoly = g.to_upoly();
    MPoly::from_upoly(&u.monic(), v)
}

/// Product of the distinct irreducible factors: primitive over ℤ with positive
/// leading coefficient.
pub fn squarefree_part(f: &MPoly, v: Var) -> MPoly {
    let sf = to_int(f, v).squarefree();
    MPoly::from_upoly(&sf.to_upoly(), v)
}

/// gcd of the coefficients of `f` viewed as a polynomial in `v`.
fn content_in(f: &MPoly, v: Var) -> MPoly {
    f.coeffs(v)
        .iter()
        .filter(|c| !c.is_zero())
        .fold(MPoly::zero(), |g, c| mpoly_gcd(&g, c))
}

/// Multivariate gcd over ℚ by recursive content and primitive PRS; the result is
/// an integer primitive polynomial (1 when coprime, 0 only for `gcd(0, 0)`).
pub fn mpoly_gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    let mut vars = a.vars();
    for v in b.vars() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    vars.sort();
    let Some(&v) = vars.first() else {
        return MPoly::one();
    };
    if vars.len() == 1 {
        let g = to_int(a, v).gcd(&to_int(b, v));
        return MPoly::from_upoly(&g.to_upoly(), v);
    }
    let (ca, cb) = (content_in(a, v), content_in(b, v));
    let c = mpoly_gcd(&ca, &cb);
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");
    if pa.degree(v) == 0 || pb.degree(v) == 0 {
        return c;
    }
    let (mut r0, mut r1) = if pa.degree(v) >= pb.degree(v) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    loop {
        let r = prem(&r0, &r1, v);
        if r.is_zero() {
            break;
        }
        if r.degree(v) == 0 {
            return c;
        }
        let cr = content_in(&r, v);
        r0 = r1;
        r1 = r.exact_div(&cr).expect("content divides");
    }
    let g = r1.exact_div(&content_in(&r1, v)).expect("content divides");
    (&c * &g).primitive()
}

#[cfg(test)]
mod tests {
    use super::super::{rat, Rat};
    use super::*;
    use proptest::prelude::*;

    fn x() -> MPoly {
        MPoly::var(Var::Z)
    }

    fn sylvester_det(f: &MPoly, g: &MPoly) -> Rat {
        crate::oracle::kernels::sylvester_resultant(f, g, Var::Z)
    }

    #[test]
    fn resultant_examples() {
        let a = MPoly::var(Var::P);
        let b = MPoly::var(Var::Q);
        assert_eq!(resultant(&(x() - &a), &(x() - &b), Var::Z), &a - &b);
        let f = x().pow(2) - MPoly::int(2);
        let g = x() - MPoly::one();
        assert_eq!(resultant(&f, &g, Var::Z), MPoly::int(-1));
        let h = &g * &f;
        assert!(resultant(&f, &h, Var::Z).is_zero());
    }

    #[test]
    fn gcd_and_squarefree_examples() {
        let f = x().pow(2) - MPoly::one();
        let g = x().pow(2) - MPoly::int(2) * x() + MPoly::one();
        assert_eq!(univariate_gcd(&f, &g, Var::Z), x() - MPoly::one());
        let h = x().pow(2) - MPoly::int(2);
        assert_eq!(univariate_gcd(&h, &(x() - MPoly::one()), Var::Z), MPoly::one());
        let k = MPoly::int(3) * &h;
        assert_eq!(univariate_gcd(&k, &k, Var::Z), h);
        let s = MPoly::var(Var::Sigma);
        let a = &s - &MPoly::int(4);
        let b = &s - &MPoly::one();
        assert_eq!(squarefree_part(&(&a * &a * &b), Var::Sigma), &a * &b);
        assert_eq!(squarefree_part(&s.pow(3), Var::Sigma), s);
    }

    #[test]
    fn prem_identity() {
        let a = MPoly::var(Var::P);
        let f = MPoly::int(3) * x().pow(4) + &a * x() - MPoly::one();
        let g = &a * x().pow(2) + MPoly::int(2);
        let r = prem(&f, &g, Var::Z);
        assert!(r.degree(Var::Z) < 2);
        // lc(g)^3 f - r is divisible by g
        let lhs = &a.pow(3) * &f - &r;
        assert!(lhs.exact_div(&g).is_ok());
    }

    fn arb_upoly() -> impl Strategy<Value = MPoly> {
        (1usize..7)
            .prop_flat_map(|d| proptest::collection::vec(-9i64..10, d + 1))
            .prop_map(|cs| {
                let mut cs = cs;
                if *cs.last().unwrap() == 0 {
                    *cs.last_mut().unwrap() = 1;
                }
                MPoly::from_upoly(&UPoly::from_ints(&cs), Var::Z)
            })
    }

    proptest! {
        #[test]
        fn prs_matches_sylvester(f in arb_upoly(), g in arb_upoly()) {
            let r = resultant(&f, &g, Var::Z).constant_value().unwrap();
            prop_assert_eq!(r, sylvester_det(&f, &g));
        }

        #[test]
        fn antisymmetry(f in arb_upoly(), g in arb_upoly()) {
            let (m, n) = (f.degree(Var::Z), g.degree(Var::Z));
            let sign = if (m * n) % 2 == 1 { -rat(1) } else { rat(1) };
            let a = resultant(&f, &g, Var::Z);
            let b = resultant(&g, &f, Var::Z).scale(&sign);
            prop_assert_eq!(a, b);
        }

        #[test]
        fn zero_iff_common_factor(f in arb_upoly(), g in arb_upoly()) {
            let r = resultant(&f, &g, Var::Z);
            let d = univariate_gcd(&f, &g, Var::Z);
            prop_assert_eq!(r.is_zero(), d.degree(Var::Z) > 0);
        }

        #[test]
        fn squarefree_has_trivial_gcd(f in arb_upoly(), g in arb_upoly()) {
            let h = &(&f * &f) * &g;
            let s = squarefree_part(&h, Var::Z);
            let d = univariate_gcd(&s, &s.derivative(Var::Z), Var::Z);
            prop_assert_eq!(d.degree(Var::Z), 0);
        }
    }

    #[test]
    fn multivariate_gcd() {
        let s = MPoly::var(Var::Sigma);
        let q = MPoly::var(Var::Q);
        let common = &(&s * &q) - &MPoly::int(2);
        let a = &common * &(&q + &MPoly::int(1));
        let b = &common * &(&s - &q);
        assert_eq!(mpoly_gcd(&a, &b), common.primitive());
        assert_eq!(mpoly_gcd(&(&q + &MPoly::int(1)), &(&s - &q)), MPoly::one());
        let k = a.scale(&rat(6));
        assert_eq!(mpoly_gcd(&k, &a.scale(&rat(4))), a.primitive());
    }
}
