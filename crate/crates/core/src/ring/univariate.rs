//! Euclidean structure of `F_p[x^±]`, with the absolute degree (max minus min exponent) as size.

use super::poly::LaurentPoly;

/// Absolute degree; `None` for zero.
pub fn span(f: &LaurentPoly) -> Option<i32> {
    if f.is_zero() {
        return None;
    }
    Some(f.max_exponents()[0] - f.min_exponents()[0])
}

/// `a = q·b + r` with `span(r) < span(b)` or `r = 0`.
pub fn divrem(a: &LaurentPoly, b: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
    let ring = a.ring();
    assert_eq!(ring.nvars(), 1, "univariate division needs D = 1");
    assert!(!b.is_zero(), "division by zero");
    if a.is_zero() {
        return (ring.zero(), ring.zero());
    }
    let alpha = a.min_exponents()[0];
    let beta = b.min_exponents()[0];
    let mut r = a.clear_denominators();
    let bp = b.clear_denominators();
    let (db, cb) = {
        let (e, c) = bp.leading().unwrap();
        (e[0], *c)
    };
    let inv = ring.inv_c(cb);
    let mut q = ring.zero();
    while let Some((e, c)) = r.leading().cloned() {
        if e[0] < db {
            break;
        }
        let qe = smallvec::smallvec![e[0] - db];
        let qc = ring.mul_c(c, inv);
        r = r.add_scaled(&bp.mul_term(&qe, 1), ring.neg_c(qc));
        q = q.add_scaled(&ring.monomial(qe, qc), 1);
    }
    let q = q.mul_term(&[alpha - beta], 1);
    let r = r.mul_term(&[alpha], 1);
    (q, r)
}

/// Extended gcd: `(g, s, t)` with `s·a + t·b = g`, `g` unit-normalized.
pub fn xgcd(a: &LaurentPoly, b: &LaurentPoly) -> (LaurentPoly, LaurentPoly, LaurentPoly) {
    let ring = a.ring();
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (ring.one(), ring.zero());
    let (mut t0, mut t1) = (ring.zero(), ring.one());
    while !r1.is_zero() {
        let (q, r) = divrem(&r0, &r1);
        let s2 = &s0 - &(&q * &s1);
        let t2 = &t0 - &(&q * &t1);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    if r0.is_zero() {
        return (r0, s0, t0);
    }
    let g = r0.normalize_unit();
    // g = u·r0 for the unit u = g / r0.
    let u = g.div_exact(&r0).expect("associate");
    (g, &s0 * &u, &t0 * &u)
}
