//! Text grammar for Laurent polynomials.
//!
//! Canonical output: terms ascending in graded-lex order joined by `" + "`, each
//! term `[coeff*]var[^int]{*var[^int]}` with exponent 1 written bare, zero as `0`.
//! The parser also accepts `-`, arbitrary whitespace and explicit `^1`.

use std::fmt;

use super::poly::{Exponent, LaurentPoly, Ring};
use crate::error::{Error, Result};

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = self.ring().var_names();
        for (k, (e, c)) in self.terms().iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            let constant = e.iter().all(|&v| v == 0);
            if *c != 1 || constant {
                factors.push(c.to_string());
            }
            for (i, &v) in e.iter().enumerate() {
                match v {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{}", names[i], v)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl Ring {
    /// Parses a polynomial in this ring's variable names.
    pub fn parse(&self, s: &str) -> Result<LaurentPoly> {
        let names = self.var_names();
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut raw: Vec<(Exponent, u32)> = Vec::new();
        let chars: Vec<char> = compact.chars().collect();
        let mut pos = 0;
        while pos < chars.len() {
            let mut sign = 1i64;
            while pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
                if chars[pos] == '-' {
                    sign = -sign;
                }
                pos += 1;
            }
            let start = pos;
            while pos < chars.len() && !(chars[pos] == '+' || (chars[pos] == '-' && chars[pos - 1] != '^')) {
                pos += 1;
            }
            let term: String = chars[start..pos].iter().collect();
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in '{s}'")));
            }
            let (e, c) = self.parse_term(&term, &names)?;
            raw.push((e, self.reduce(sign * c)));
        }
        Ok(LaurentPoly::from_raw(*self, raw))
    }

    fn parse_term(&self, term: &str, names: &[String]) -> Result<(Exponent, i64)> {
        let mut e = self.zero_exp();
        let mut c: i64 = 1;
        for factor in term.split('*') {
            if factor.is_empty() {
                return Err(Error::Parse(format!("empty factor in '{term}'")));
            }
            if factor.chars().all(|ch| ch.is_ascii_digit()) {
                let v: i64 = factor.parse().map_err(|_| Error::Parse(format!("bad integer '{factor}'")))?;
                c = (c * (v % self.p() as i64)) % self.p() as i64;
                continue;
            }
            let (name, pow) = match factor.split_once('^') {
                Some((n, p)) => {
                    let p: i32 = p.parse().map_err(|_| Error::Parse(format!("bad exponent in '{factor}'")))?;
                    (n, p)
                }
                None => (factor, 1),
            };
            let idx = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::Parse(format!("unknown variable '{name}' (expected one of {names:?})")))?;
            e[idx] += pow;
        }
        Ok((e, c))
    }
}

impl std::str::FromStr for Ring {
    type Err = Error;
    /// Parses `p=<int> D=<int>`.
    fn from_str(s: &str) -> Result<Ring> {
        let mut p = None;
        let mut d = None;
        for tok in s.split_whitespace() {
            if let Some(v) = tok.strip_prefix("p=") {
                p = v.parse::<u32>().ok();
            } else if let Some(v) = tok.strip_prefix("D=") {
                d = v.parse::<usize>().ok();
            }
        }
        match (p, d) {
            (Some(p), Some(d)) => Ring::new(p, d),
            _ => Err(Error::Parse(format!("expected 'p=<int> D=<int>', got '{s}'"))),
        }
    }
}
