use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Exponent vector of a Laurent monomial.
pub type Exponent = SmallVec<[i32; 4]>;

/// Coefficient field F_p together with the number of Laurent variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    p: u32,
    nvars: usize,
}

pub const MAX_PRIME: u32 = 1 << 15;

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring {
    pub fn new(p: u32, nvars: usize) -> Result<Ring> {
        if !is_prime(p) || p >= MAX_PRIME {
            return Err(Error::Context(format!("p = {p} must be a prime below 2^15")));
        }
        Ok(Ring { p, nvars })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn zero(&self) -> LaurentPoly {
        LaurentPoly { ring: *self, terms: Vec::new() }
    }

    pub fn one(&self) -> LaurentPoly {
        self.constant(1)
    }

    /// The constant `c mod p`; negative values are reduced into `[0, p)`.
    pub fn constant(&self, c: i64) -> LaurentPoly {
        self.monomial(self.zero_exp(), self.reduce(c))
    }

    pub fn zero_exp(&self) -> Exponent {
        SmallVec::from_elem(0, self.nvars)
    }

    /// The variable `x_i` (0-based).
    pub fn var(&self, i: usize) -> LaurentPoly {
        let mut e = self.zero_exp();
        e[i] = 1;
        self.monomial(e, 1)
    }

    pub fn monomial(&self, exp: Exponent, c: u32) -> LaurentPoly {
        debug_assert_eq!(exp.len(), self.nvars);
        let c = c % self.p;
        if c == 0 {
            return self.zero();
        }
        LaurentPoly { ring: *self, terms: vec![(exp, c)] }
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, i64)>>(&self, terms: I) -> LaurentPoly {
        let raw: Vec<(Exponent, u32)> = terms.into_iter().map(|(e, c)| (e, self.reduce(c))).collect();
        LaurentPoly::from_raw(*self, raw)
    }

    pub fn reduce(&self, c: i64) -> u32 {
        c.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add_c(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn neg_c(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul_c(&self, a: u32, b: u32) -> u32 {
        (a * b) % self.p
    }

    pub fn inv_c(&self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_p");
        self.pow_c(a, self.p - 2)
    }

    pub fn pow_c(&self, mut a: u32, mut e: u32) -> u32 {
        let mut r = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_c(r, a);
            }
            a = self.mul_c(a, a);
            e >>= 1;
        }
        r
    }

    /// Variable names used by the text format: x, y, z for up to three variables, else x1..xD.
    pub fn var_names(&self) -> Vec<String> {
        if self.nvars <= 3 {
            ["x", "y", "z"][..self.nvars].iter().map(|s| s.to_string()).collect()
        } else {
            (1..=self.nvars).map(|i| format!("x{i}")).collect()
        }
    }

    pub fn check(&self, other: &Ring) -> Result<()> {
        if self != other {
            return Err(Error::Context(format!(
                "(p={}, D={}) vs (p={}, D={})",
                self.p, self.nvars, other.p, other.nvars
            )));
        }
        Ok(())
    }
}

/// Graded lexicographic comparison: total degree first, then lexicographic.
pub fn cmp_exp(a: &[i32], b: &[i32]) -> Ordering {
    let da: i64 = a.iter().map(|&v| v as i64).sum();
    let db: i64 = b.iter().map(|&v| v as i64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// Sparse Laurent polynomial over F_p.
///
/// Terms are kept sorted ascending in graded-lex order with no zero coefficients,
/// so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    ring: Ring,
    terms: Vec<(Exponent, u32)>,
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl LaurentPoly {
    /// Builds from unsorted terms that may repeat exponents or carry zero coefficients.
    pub fn from_raw(ring: Ring, mut raw: Vec<(Exponent, u32)>) -> LaurentPoly {
        raw.sort_unstable_by(|a, b| cmp_exp(&a.0, &b.0));
        let mut terms: Vec<(Exponent, u32)> = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            match terms.last_mut() {
                Some(last) if last.0 == e => last.1 = ring.add_c(last.1, c),
                _ => {
                    if let Some(last) = terms.last() {
                        if last.1 == 0 {
                            terms.pop();
                        }
                    }
                    terms.push((e, c % ring.p));
                }
            }
        }
        if let Some(last) = terms.last() {
            if last.1 == 0 {
                terms.pop();
            }
        }
        LaurentPoly { ring, terms }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn terms(&self) -> &[(Exponent, u32)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1 == 1 && self.terms[0].0.iter().all(|&e| e == 0)
    }

    /// True for `c·x^a` with `c ≠ 0`, i.e. the units of the Laurent ring.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.iter().all(|&v| v == 0))
    }

    pub fn coeff(&self, exp: &[i32]) -> u32 {
        match self.terms.binary_search_by(|t| cmp_exp(&t.0, exp)) {
            Ok(i) => self.terms[i].1,
            Err(_) => 0,
        }
    }

    pub fn constant_coeff(&self) -> u32 {
        self.coeff(&self.ring.zero_exp())
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<&(Exponent, u32)> {
        self.terms.last()
    }

    pub fn try_add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.ring.check(&other.ring)?;
        Ok(self.add_scaled(other, 1))
    }

    pub fn try_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.ring.check(&other.ring)?;
        Ok(self.add_scaled(other, self.ring.p - 1))
    }

    pub fn try_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.ring.check(&other.ring)?;
        Ok(self.mul_impl(other))
    }

    /// `self + c·other` by a sorted merge.
    pub fn add_scaled(&self, other: &LaurentPoly, c: u32) -> LaurentPoly {
        debug_assert_eq!(self.ring, other.ring);
        let r = self.ring;
        let c = c % r.p;
        if c == 0 || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match cmp_exp(&self.terms[i].0, &other.terms[j].0) {
                Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((other.terms[j].0.clone(), r.mul_c(c, other.terms[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = r.add_c(self.terms[i].1, r.mul_c(c, other.terms[j].1));
                    if v != 0 {
                        out.push((self.terms[i].0.clone(), v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(e, v)| (e.clone(), r.mul_c(c, *v))));
        LaurentPoly { ring: r, terms: out }
    }

    fn mul_impl(&self, other: &LaurentPoly) -> LaurentPoly {
        let r = self.ring;
        if self.is_zero() || other.is_zero() {
            return r.zero();
        }
        if other.terms.len() == 1 {
            let (e, c) = &other.terms[0];
            return self.mul_term(e, *c);
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return other.mul_term(e, *c);
        }
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb.iter()).map(|(a, b)| a + b).collect();
                raw.push((e, r.mul_c(*ca, *cb)));
            }
        }
        LaurentPoly::from_raw(r, raw)
    }

    /// Multiplication by the monomial `c·x^e`; shifting preserves graded-lex order.
    pub fn mul_term(&self, e: &[i32], c: u32) -> LaurentPoly {
        let r = self.ring;
        let c = c % r.p;
        if c == 0 {
            return r.zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(ea, ca)| (ea.iter().zip(e.iter()).map(|(a, b)| a + b).collect(), r.mul_c(*ca, c)))
            .collect();
        LaurentPoly { ring: r, terms }
    }

    pub fn scale(&self, c: u32) -> LaurentPoly {
        self.mul_term(&self.ring.zero_exp(), c)
    }

    pub fn neg(&self) -> LaurentPoly {
        self.scale(self.ring.p - 1)
    }

    pub fn pow(&self, mut n: u32) -> LaurentPoly {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    /// The bar involution `x ↦ x⁻¹`.
    pub fn involute(&self) -> LaurentPoly {
        let raw = self.terms.iter().map(|(e, c)| (e.iter().map(|v| -v).collect(), *c)).collect();
        LaurentPoly::from_raw(self.ring, raw)
    }

    /// Inverse of a unit `c·x^a`.
    pub fn monomial_inverse(&self) -> Option<LaurentPoly> {
        if !self.is_monomial() {
            return None;
        }
        let (e, c) = &self.terms[0];
        Some(self.ring.monomial(e.iter().map(|v| -v).collect(), self.ring.inv_c(*c)))
    }

    /// Reduces exponents into `[0, L_i)`, i.e. passes to `R / (x_i^{L_i} − 1)`.
    pub fn reduce_mod_torus(&self, l: &[usize]) -> LaurentPoly {
        assert_eq!(l.len(), self.ring.nvars, "torus size must match number of variables");
        let raw = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(l).map(|(&v, &li)| v.rem_euclid(li as i32)).collect(), *c))
            .collect();
        LaurentPoly::from_raw(self.ring, raw)
    }

    /// Componentwise minimum exponent; zero vector for the zero polynomial.
    pub fn min_exponents(&self) -> Exponent {
        let mut m = self.ring.zero_exp();
        for (k, (e, _)) in self.terms.iter().enumerate() {
            for i in 0..e.len() {
                if k == 0 || e[i] < m[i] {
                    m[i] = e[i];
                }
            }
        }
        m
    }

    pub fn max_exponents(&self) -> Exponent {
        let mut m = self.ring.zero_exp();
        for (k, (e, _)) in self.terms.iter().enumerate() {
            for i in 0..e.len() {
                if k == 0 || e[i] > m[i] {
                    m[i] = e[i];
                }
            }
        }
        m
    }

    /// Multiplies by the monomial that makes every variable's minimum exponent 0.
    pub fn clear_denominators(&self) -> LaurentPoly {
        let m = self.min_exponents();
        let shift: Exponent = m.iter().map(|v| -v).collect();
        self.mul_term(&shift, 1)
    }

    /// Unit-normalized associate: minimum exponents 0 and leading coefficient 1.
    pub fn normalize_unit(&self) -> LaurentPoly {
        if self.is_zero() {
            return self.clone();
        }
        let p = self.clear_denominators();
        let lc = p.terms.last().unwrap().1;
        p.scale(self.ring.inv_c(lc))
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(self.ring.zero());
        }
        let r = self.ring;
        let ma = self.min_exponents();
        let md = d.min_exponents();
        let a = self.clear_denominators();
        let b = d.clear_denominators();
        let (lb_e, lb_c) = b.terms.last().unwrap().clone();
        let inv = r.inv_c(lb_c);
        let mut rem = a;
        let mut quot: Vec<(Exponent, u32)> = Vec::new();
        while let Some((le, lc)) = rem.terms.last().cloned() {
            if le.iter().zip(lb_e.iter()).any(|(x, y)| x < y) {
                return None;
            }
            let qe: Exponent = le.iter().zip(lb_e.iter()).map(|(x, y)| x - y).collect();
            let qc = r.mul_c(lc, inv);
            rem = rem.add_scaled(&b.mul_term(&qe, 1), r.neg_c(qc));
            quot.push((qe, qc));
        }
        let shift: Exponent = ma.iter().zip(md.iter()).map(|(x, y)| x - y).collect();
        Some(LaurentPoly::from_raw(r, quot).mul_term(&shift, 1))
    }

    /// Substitutes each variable by a Laurent polynomial (all in a common target ring).
    pub fn substitute(&self, images: &[LaurentPoly], target: Ring) -> LaurentPoly {
        assert_eq!(images.len(), self.ring.nvars);
        let mut acc = target.zero();
        for (e, c) in &self.terms {
            let mut t = target.constant(*c as i64);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let base = if k > 0 {
                    images[i].clone()
                } else {
                    images[i].monomial_inverse().expect("negative power needs a unit image")
                };
                t = &t * &base.pow(k.unsigned_abs());
            }
            acc = &acc + &t;
        }
        acc
    }

    /// The positive half `r` of an anti-hermitian `d`: terms with lexicographically positive exponent.
    pub fn positive_half(&self) -> LaurentPoly {
        let raw = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0))
            .cloned()
            .collect();
        LaurentPoly::from_raw(self.ring, raw)
    }

    /// Evaluation at `x = 1` for every variable.
    pub fn eval_at_one(&self) -> u32 {
        self.terms.iter().fold(0, |acc, (_, c)| self.ring.add_c(acc, *c))
    }
}

impl<'a> std::ops::Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_add(rhs).expect("ring mismatch")
    }
}

impl<'a> std::ops::Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_sub(rhs).expect("ring mismatch")
    }
}

impl<'a> std::ops::Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_mul(rhs).expect("ring mismatch")
    }
}

impl std::ops::Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::neg(self)
    }
}
