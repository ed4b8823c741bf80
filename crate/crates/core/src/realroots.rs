//! Exact isolation of positive real roots, refinement, and sample points between roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{MsrsError, Result};
use crate::exact_core::{rat_to_f64, simplest_between, IntPoly, MPoly, Rat};
use crate::modular;

/// Closed interval `[lo, hi]` with `0 < lo ≤ hi` holding exactly one root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatingInterval {
    pub lo: Rat,
    pub hi: Rat,
    pub exact: bool,
}

impl IsolatingInterval {
    pub fn point(r: Rat) -> Self {
        Self {
            lo: r.clone(),
            hi: r,
            exact: true,
        }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn approx(&self) -> f64 {
        rat_to_f64(&((&self.lo + &self.hi) / Rat::from_integer(2.into())))
    }
}

/// Squarefree primitive integer polynomial of a univariate `MPoly` (any variable).
pub fn int_squarefree(f: &MPoly) -> IntPoly {
    let v = f.vars().first().copied().unwrap_or(crate::exact_core::Var::Sigma);
    let u = f.to_upoly(v).expect("univariate polynomial");
    u.to_intpoly().squarefree()
}

pub fn isolate_positive_roots(f: &MPoly) -> Vec<IsolatingInterval> {
    isolate_positive_int(&int_squarefree(f))
}

pub fn refine_root(f: &MPoly, i: &IsolatingInterval, width: &Rat) -> IsolatingInterval {
    refine_root_int(&int_squarefree(f), i, width)
}

fn shift_right(c: &mut [BigInt]) {
    let tz = c
        .iter()
        .filter(|a| !a.is_zero())
        .map(|a| a.trailing_zeros().unwrap_or(0))
        .min()
        .unwrap_or(0);
    if tz > 0 {
        for a in c.iter_mut() {
            *a >>= tz as usize;
        }
    }
}

/// In place `g(x) ↦ g(x + 1)`.
fn taylor_shift_one(c: &mut [BigInt]) {
    let d = c.len();
    for i in 0..d {
        for j in (i..d - 1).rev() {
            let t = c[j + 1].clone();
            c[j] += t;
        }
    }
}

/// Descartes bound for roots of `g` in (0, 1).
fn variations_01(g: &[BigInt]) -> usize {
    let mut r: Vec<BigInt> = g.iter().rev().cloned().collect();
    taylor_shift_one(&mut r);
    IntPoly::new(r).sign_variations()
}

/// Positive roots of a squarefree integer polynomial, ordered, pairwise disjoint.
pub fn isolate_positive_int(f: &IntPoly) -> Vec<IsolatingInterval> {
    let (f, _) = f.primitive().strip_x();
    let Some(d) = f.degree() else { return vec![] };
    if d == 0 {
        return vec![];
    }
    let f = f.squarefree();
    let d = f.deg();
    // 2^k bounds every root: 1 + max|a_i|/|a_d| < 2^k.
    let bm = f.coeffs().iter().map(|a| a.bits()).max().unwrap() as i64;
    let ba = f.lc().bits() as i64;
    let k = bm - ba + 2;
    let mut g: Vec<BigInt> = f.coeffs().to_vec();
    for (i, a) in g.iter_mut().enumerate() {
        let s = if k >= 0 { k * i as i64 } else { -k * (d - i) as i64 };
        *a <<= s as usize;
    }
    let two = Rat::from_integer(2.into());
    let upper = if k >= 0 {
        Rat::from_integer(BigInt::one() << k as usize)
    } else {
        Rat::new(BigInt::one(), BigInt::one() << (-k) as usize)
    };
    let mut out = vec![];
    let mut stack = vec![(g, Rat::zero(), upper)];
    while let Some((g, a, w)) = stack.pop() {
        if g.len() <= 1 {
            continue;
        }
        let v = variations_01(&g);
        if v == 0 {
            continue;
        }
        if v == 1 {
            out.push(IsolatingInterval {
                lo: a.clone(),
                hi: &a + &w,
                exact: false,
            });
            continue;
        }
        let dg = g.len() - 1;
        let half = &w / &two;
        let mid = &a + &half;
        let mut gl: Vec<BigInt> = g.iter().enumerate().map(|(i, c)| c << (dg - i)).collect();
        let at_one: BigInt = gl.iter().sum();
        if at_one.is_zero() {
            out.push(IsolatingInterval::point(mid.clone()));
            gl = IntPoly::new(gl)
                .div_exact(&IntPoly::from_i64(&[-1, 1]))
                .expect("linear factor")
                .coeffs()
                .to_vec();
        }
        shift_right(&mut gl);
        let mut gr = gl.clone();
        taylor_shift_one(&mut gr);
        stack.push((gr, mid, half.clone()));
        stack.push((gl, a, half));
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    mark_rational_roots(&f, &mut out);
    separate(&f, &mut out);
    out
}

fn small_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// All positive rational roots of `f`: roots modulo a small prime are lifted
/// p-adically and rationally reconstructed, so every candidate denominator
/// dividing lc(f) is covered.
pub fn positive_rational_roots(f: &IntPoly) -> Vec<Rat> {
    let (f, _) = f.primitive().strip_x();
    if f.deg() == 0 {
        return vec![];
    }
    let f = f.squarefree();
    let lc = f.lc();
    let mut p = 10007u64;
    let fp = loop {
        if small_prime(p) && modular::big_mod(&lc, p) != 0 {
            let fp = modular::reduce(&f, p);
            if modular::gcd(&fp, &modular::derivative(&fp, p), p).len() == 1 {
                break fp;
            }
        }
        p += 2;
    };
    let top = lc.abs().max(f.coeffs()[0].abs());
    let bound: BigInt = &top * &top * 2 + 1;
    let df = f.derivative();
    let eval_mod = |g: &IntPoly, x: &BigInt, m: &BigInt| -> BigInt {
        g.coeffs()
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
    };
    let mut out = vec![];
    for r0 in (0..p).filter(|&r| modular::eval(&fp, r, p) == 0) {
        let mut m = BigInt::from(p);
        let mut r = BigInt::from(r0);
        while m < bound {
            m = &m * &m;
            let d = eval_mod(&df, &r, &m);
            let e = d.extended_gcd(&m);
            debug_assert!(e.gcd.is_one());
            let fr = eval_mod(&f, &r, &m);
            r = (&r - fr * e.x).mod_floor(&m);
        }
        if let Some((a, b)) = modular::rational_reconstruct(&r, &m) {
            let x = Rat::new(a, b);
            if x.is_positive() && f.sign_at(&x) == 0 {
                out.push(x);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn mark_rational_roots(f: &IntPoly, ivs: &mut [IsolatingInterval]) {
    if ivs.iter().all(|i| i.exact) {
        return;
    }
    for r in positive_rational_roots(f) {
        if ivs.iter().any(|i| i.exact && i.lo == r) {
            continue;
        }
        if let Some(iv) = ivs.iter_mut().find(|i| !i.exact && i.contains(&r)) {
            *iv = IsolatingInterval::point(r);
        }
    }
}

fn bisect(f: &IntPoly, iv: &IsolatingInterval) -> IsolatingInterval {
    let two = Rat::from_integer(2.into());
    let m = (&iv.lo + &iv.hi) / &two;
    let sm = f.sign_at(&m);
    if sm == 0 {
        return IsolatingInterval::point(m);
    }
    // sign just right of lo; a root sitting on lo (a neighbour's exact point
    // before separation) falls back to the derivative
    let mut sl = f.sign_at(&iv.lo);
    if sl == 0 {
        sl = f.derivative().sign_at(&iv.lo);
    }
    if sm == sl {
        IsolatingInterval {
            lo: m,
            hi: iv.hi.clone(),
            exact: false,
        }
    } else {
        IsolatingInterval {
            lo: iv.lo.clone(),
            hi: m,
            exact: false,
        }
    }
}

/// Shrinks intervals that share an endpoint until all are pairwise disjoint, and
/// moves a zero left endpoint off the origin.
fn separate(f: &IntPoly, ivs: &mut [IsolatingInterval]) {
    if let Some(first) = ivs.first_mut() {
        while first.lo.is_zero() {
            *first = bisect(f, first);
        }
    }
    for j in 1..ivs.len() {
        while ivs[j - 1].hi >= ivs[j].lo {
            if !ivs[j - 1].exact {
                ivs[j - 1] = bisect(f, &ivs[j - 1]);
            }
            if ivs[j - 1].hi >= ivs[j].lo && !ivs[j].exact {
                ivs[j] = bisect(f, &ivs[j]);
            }
        }
    }
}

pub fn refine_root_int(f: &IntPoly, i: &IsolatingInterval, width: &Rat) -> IsolatingInterval {
    let mut iv = i.clone();
    while !iv.exact && &iv.width() > width {
        iv = bisect(f, &iv);
    }
    iv
}

/// One simplest rational per gap of (0, ∞) minus the intervals; the last is ⌈hi⌉ + 1.
pub fn sample_between(intervals: &[IsolatingInterval]) -> Result<Vec<Rat>> {
    let mut out = vec![];
    let mut left = Rat::zero();
    for iv in intervals {
        if iv.lo <= left {
            return Err(MsrsError::EmptyGap);
        }
        out.push(simplest_between(&left, &iv.lo));
        left = iv.hi.clone();
    }
    out.push(Rat::from_integer(left.ceil().to_integer() + 1));
    Ok(out)
}

/// Samples that depend only on the roots, not on the isolating intervals: the
/// simplest rational strictly between consecutive roots, and ⌈σ_m⌉ + 1 last.
/// Intervals are refined in place as needed.
pub fn canonical_samples(f: &IntPoly, ivs: &mut [IsolatingInterval]) -> Vec<Rat> {
    canonical_samples_with(ivs, |_, iv| bisect(f, iv))
}

/// [`canonical_samples`] for sorted disjoint intervals whose roots may belong to
/// different polynomials; `halve(j, iv)` bisects interval j.
pub fn canonical_samples_with(
    ivs: &mut [IsolatingInterval],
    mut halve: impl FnMut(usize, &IsolatingInterval) -> IsolatingInterval,
) -> Vec<Rat> {
    let mut out = vec![];
    for j in 0..=ivs.len() {
        if j == ivs.len() {
            let s = match ivs.last_mut() {
                None => Rat::one(),
                Some(last) => {
                    while !last.exact && last.lo.ceil() != last.hi.ceil() {
                        *last = halve(j - 1, last);
                    }
                    Rat::from_integer(last.hi.ceil().to_integer() + 1)
                }
            };
            out.push(s);
            break;
        }
        loop {
            let (olo, ilo) = if j == 0 {
                (Rat::zero(), Rat::zero())
            } else {
                let p = &ivs[j - 1];
                (if p.exact { p.hi.clone() } else { p.lo.clone() }, p.hi.clone())
            };
            let (ohi, ihi) = {
                let n = &ivs[j];
                (if n.exact { n.lo.clone() } else { n.hi.clone() }, n.lo.clone())
            };
            let s = simplest_between(&olo, &ohi);
            if s > ilo && s < ihi {
                out.push(s);
                break;
            }
            if j > 0 && s <= ilo {
                ivs[j - 1] = halve(j - 1, &ivs[j - 1]);
            } else {
                ivs[j] = halve(j, &ivs[j]);
            }
        }
    }
    out
}

/// One bisection step of an isolating interval of a root of the squarefree `f`.
pub fn bisect_root(f: &IntPoly, iv: &IsolatingInterval) -> IsolatingInterval {
    if iv.exact {
        iv.clone()
    } else {
        bisect(f, iv)
    }
}

/// Number of positive roots, without isolating them.
pub fn count_positive_int(f: &IntPoly) -> usize {
    isolate_positive_int(f).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_core::{rat, ratio, UPoly, Var};
    use proptest::prelude::*;

    #[test]
    fn bisect_with_root_on_lower_endpoint() {
        // roots 1 and 3/2; the interval [1, 2] has a root on lo and one inside
        let f = IntPoly::from_i64(&[-1, 1]).mul(&IntPoly::from_i64(&[-3, 2]));
        let mut iv = IsolatingInterval {
            lo: rat(1),
            hi: rat(2),
            exact: false,
        };
        for _ in 0..6 {
            iv = bisect(&f, &iv);
        }
        assert!(iv.exact || iv.contains(&ratio(3, 2)));
    }

    #[test]
    fn rational_roots_by_lifting() {
        let f = IntPoly::from_i64(&[-2, 3])
            .mul(&IntPoly::from_i64(&[7, 5]))
            .mul(&IntPoly::from_i64(&[-4, 1]))
            .mul(&IntPoly::from_i64(&[-2, 0, 1]))
            .mul(&IntPoly::from_i64(&[-1000003, 999983]));
        assert_eq!(
            positive_rational_roots(&f),
            vec![ratio(2, 3), ratio(1000003, 999983), rat(4)]
        );
        assert!(positive_rational_roots(&IntPoly::from_i64(&[-2, 0, 1])).is_empty());
    }

    use crate::oracle::kernels::sturm_positive;

    fn poly(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn sturm_oracle_sanity() {
        // (x-1)(x-3)(x+2)
        assert_eq!(sturm_positive(&poly(&[6, -5, -2, 1])), 2);
        assert_eq!(sturm_positive(&poly(&[-2, 0, 1])), 1);
        assert_eq!(sturm_positive(&poly(&[1, 0, 1])), 0);
    }

    #[test]
    fn negative_root_excluded() {
        let iv = isolate_positive_int(&poly(&[6, -5, -2, 1]));
        assert_eq!(
            iv,
            vec![IsolatingInterval::point(rat(1)), IsolatingInterval::point(rat(3))]
        );
    }

    #[test]
    fn rational_and_irrational_mixed() {
        // (3x-2)(x^2-2)(x-5)
        let f = poly(&[-2, 3]).mul(&poly(&[-2, 0, 1])).mul(&poly(&[-5, 1]));
        let iv = isolate_positive_int(&f);
        assert_eq!(iv.len(), 3);
        assert_eq!(iv[0], IsolatingInterval::point(ratio(2, 3)));
        assert!(!iv[1].exact);
        assert!((iv[1].approx() - 2f64.sqrt()).abs() < 1.0);
        assert_eq!(iv[2], IsolatingInterval::point(rat(5)));
        let r = refine_root_int(&f, &iv[1], &ratio(1, 1_000_000));
        assert!(r.lo <= ratio(1414214, 1000000) && r.hi >= ratio(1414213, 1000000));
    }

    #[test]
    fn refine_sqrt2_and_exact_is_idempotent() {
        let f = MPoly::from_upoly(&UPoly::from_ints(&[-2, 0, 1]), Var::Sigma);
        let i = IsolatingInterval {
            lo: rat(1),
            hi: rat(2),
            exact: false,
        };
        let r = refine_root(&f, &i, &ratio(1, 1_000_000));
        assert!(r.width() <= ratio(1, 1_000_000));
        assert!(r.lo <= ratio(14142136, 10_000_000) && r.hi >= ratio(14142135, 10_000_000));
        let e = IsolatingInterval::point(rat(4));
        assert_eq!(refine_root(&f, &e, &ratio(1, 10)), e);
    }

    #[test]
    fn sample_examples() {
        let ivs = [
            IsolatingInterval {
                lo: ratio(5, 4),
                hi: ratio(21, 16),
                exact: false,
            },
            IsolatingInterval::point(rat(4)),
        ];
        assert_eq!(sample_between(&ivs).unwrap(), vec![rat(1), rat(2), rat(5)]);
        assert_eq!(sample_between(&[]).unwrap(), vec![rat(1)]);
        let pts = [IsolatingInterval::point(rat(1)), IsolatingInterval::point(rat(2))];
        assert_eq!(sample_between(&pts).unwrap(), vec![ratio(1, 2), ratio(3, 2), rat(3)]);
        let touching = [
            IsolatingInterval {
                lo: rat(1),
                hi: rat(2),
                exact: false,
            },
            IsolatingInterval {
                lo: rat(2),
                hi: rat(3),
                exact: false,
            },
        ];
        assert_eq!(sample_between(&touching), Err(MsrsError::EmptyGap));
    }

    #[test]
    fn canonical_samples_ignore_interval_shape() {
        // roots √1.7 and 4
        let f = poly(&[-17, 0, 10]).mul(&poly(&[-4, 1]));
        let mut iv = isolate_positive_int(&f);
        let s = canonical_samples(&f, &mut iv);
        assert_eq!(s, vec![rat(1), rat(2), rat(5)]);
        assert_eq!(canonical_samples(&poly(&[1, 1]), &mut []), vec![rat(1)]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn matches_sturm(c in prop::collection::vec(-30i64..30, 2..=13)) {
            let f = poly(&c);
            prop_assume!(f.deg() >= 1);
            let iv = isolate_positive_int(&f);
            prop_assert_eq!(iv.len(), sturm_positive(&f));
            let sf = f.squarefree();
            for w in iv.windows(2) {
                prop_assert!(w[0].hi < w[1].lo);
            }
            for i in &iv {
                prop_assert!(i.lo.is_positive());
                if i.exact {
                    prop_assert_eq!(sf.sign_at(&i.lo), 0);
                } else {
                    prop_assert_eq!(sf.sign_at(&i.lo) * sf.sign_at(&i.hi), -1);
                }
            }
            for v in sample_between(&iv).unwrap() {
                prop_assert!(sf.sign_at(&v) != 0);
            }
        }

        #[test]
        fn rational_roots_found(a in 1i64..40, b in 1i64..12, c in prop::collection::vec(-9i64..9, 1..5)) {
            let f = poly(&[-a, b]).mul(&poly(&c));
            prop_assume!(!poly(&c).is_zero());
            let iv = isolate_positive_int(&f);
            prop_assert!(iv.contains(&IsolatingInterval::point(ratio(a, b))));
        }
    }
}
