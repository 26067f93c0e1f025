//! Smith normal form over the Euclidean domain `F_p[x^±]`.

use super::PolyMatrix;
use crate::error::{Error, Result};
use crate::ring::univariate::{divrem, span};
use crate::ring::LaurentPoly;

/// `U·M·V = S` with `U`, `V` invertible and `S` diagonal with `S_00 | S_11 | …`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: PolyMatrix,
    pub s: PolyMatrix,
    pub v: PolyMatrix,
    /// Nonzero diagonal entries, each unit-normalized.
    pub divisors: Vec<LaurentPoly>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }
}

fn smallest_entry(s: &PolyMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, i32)> = None;
    for i in k..s.rows() {
        for j in k..s.cols() {
            if let Some(d) = span(&s[(i, j)]) {
                if best.is_none_or(|(_, _, b)| d < b) {
                    best = Some((i, j, d));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Smith normal form; requires `D = 1`.
pub fn smith_normal_form(m: &PolyMatrix) -> Result<Smith> {
    let ring = m.ring();
    if ring.nvars() != 1 {
        return Err(Error::Unsupported(format!("Smith normal form needs D = 1, got D = {}", ring.nvars())));
    }
    let (rows, cols) = m.shape();
    let mut s = m.clone();
    let mut u = PolyMatrix::identity(ring, rows);
    let mut v = PolyMatrix::identity(ring, cols);
    let mut divisors = Vec::new();

    for k in 0..rows.min(cols) {
        let Some((pi, pj)) = smallest_entry(&s, k) else {
            break;
        };
        s.swap_rows(pi, k);
        u.swap_rows(pi, k);
        s.swap_cols(pj, k);
        v.swap_cols(pj, k);
        loop {
            // Clear column k and row k; a nonzero remainder becomes the new, smaller pivot.
            let mut dirty = false;
            for i in k + 1..rows {
                if s[(i, k)].is_zero() {
                    continue;
                }
                let (q, r) = divrem(&s[(i, k)], &s[(k, k)]);
                let nq = q.neg();
                s.add_row_multiple(i, k, &nq);
                u.add_row_multiple(i, k, &nq);
                if !r.is_zero() {
                    s.swap_rows(i, k);
                    u.swap_rows(i, k);
                    dirty = true;
                }
            }
            for j in k + 1..cols {
                if s[(k, j)].is_zero() {
                    continue;
                }
                let (q, r) = divrem(&s[(k, j)], &s[(k, k)]);
                let nq = q.neg();
                s.add_col_multiple(j, k, &nq);
                v.add_col_multiple(j, k, &nq);
                if !r.is_zero() {
                    s.swap_cols(j, k);
                    v.swap_cols(j, k);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // The pivot must divide the remaining block; otherwise fold the offending row in.
            let offender = (k + 1..rows)
                .flat_map(|i| (k + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !divrem(&s[(i, j)], &s[(k, k)]).1.is_zero());
            match offender {
                Some((i, _)) => {
                    let one = ring.one();
                    s.add_row_multiple(k, i, &one);
                    u.add_row_multiple(k, i, &one);
                }
                None => break,
            }
        }
        let d = s[(k, k)].normalize_unit();
        let unit = d.div_exact(&s[(k, k)]).expect("associate");
        s.scale_row(k, &unit);
        u.scale_row(k, &unit);
        divisors.push(d);
    }
    Ok(Smith { u, s, v, divisors })
}
