//! Determinants, rank and determinantal ideals by fraction-free elimination.

use std::collections::HashSet;

use rayon::prelude::*;

use super::PolyMatrix;
use crate::error::{Error, Result};
use crate::ring::groebner::{default_budget, Gb, MVec, MonoOrder};
use crate::ring::{engine_for, saturation_term, to_terms, Ideal, LaurentPoly};

/// Minors are streamed into the ideal in batches of this size, with a unit test after each.
const MINOR_BATCH: usize = 64;

/// Index of the nonzero entry with the fewest terms among rows `k..` of the given columns.
fn sparsest_pivot(a: &PolyMatrix, k: usize, cols: std::ops::Range<usize>) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for i in k..a.rows() {
        for j in cols.clone() {
            let n = a[(i, j)].len();
            if n > 0 && best.is_none_or(|(_, _, b)| n < b) {
                best = Some((i, j, n));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// One Bareiss step at pivot `(k, k)`; `prev` is the previous pivot (1 initially).
fn bareiss_step(a: &mut PolyMatrix, k: usize, prev: &LaurentPoly) {
    let pivot = a[(k, k)].clone();
    for i in k + 1..a.rows() {
        let aik = a[(i, k)].clone();
        for j in k + 1..a.cols() {
            let num = &(&pivot * &a[(i, j)]) - &(&aik * &a[(k, j)]);
            a[(i, j)] = if prev.is_one() { num } else { num.div_exact(prev).expect("Bareiss division is exact") };
        }
        a[(i, k)] = a.ring().zero();
    }
}

/// Exact determinant of a square matrix.
pub fn determinant(m: &PolyMatrix) -> Result<LaurentPoly> {
    if !m.is_square() {
        return Err(Error::Shape(format!("determinant of a {:?} matrix", m.shape())));
    }
    let n = m.rows();
    let ring = m.ring();
    if n == 0 {
        return Ok(ring.one());
    }
    let mut a = m.clone();
    let mut prev = ring.one();
    let mut negate = false;
    for k in 0..n {
        let Some((i, _)) = sparsest_pivot(&a, k, k..k + 1) else {
            return Ok(ring.zero());
        };
        if i != k {
            a.swap_rows(i, k);
            negate = !negate;
        }
        bareiss_step(&mut a, k, &prev);
        prev = a[(k, k)].clone();
    }
    Ok(if negate { prev.neg() } else { prev })
}

/// Largest `t` with a nonzero `t`-minor, by fraction-free elimination with full pivoting.
pub fn matrix_rank(m: &PolyMatrix) -> usize {
    let mut a = m.clone();
    let mut prev = m.ring().one();
    let mut k = 0;
    while k < a.rows().min(a.cols()) {
        let Some((i, j)) = sparsest_pivot(&a, k, k..a.cols()) else {
            break;
        };
        a.swap_rows(i, k);
        a.swap_cols(j, k);
        bareiss_step(&mut a, k, &prev);
        prev = a[(k, k)].clone();
        k += 1;
    }
    k
}

/// Advances `c` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The ideal of all `t`-minors.
///
/// Minors are evaluated in parallel batches and fed into one incremental Groebner basis;
/// enumeration stops as soon as the basis contains 1. The returned ideal carries the
/// minors seen so far (all of them unless the ideal is the unit ideal).
pub fn determinantal_ideal(m: &PolyMatrix, t: usize) -> Result<Ideal> {
    let ring = m.ring();
    if t == 0 {
        return Ok(Ideal::unit(ring));
    }
    if t > m.rows().min(m.cols()) {
        return Ok(Ideal::zero(ring));
    }
    let eng = engine_for(ring, MonoOrder::Grevlex)?;
    let mut gb = Gb::new(eng, 1, default_budget());
    gb.add(vec![saturation_term(ring, 0, &eng)])?;
    let zero = ring.zero_exp();

    let mut seen: HashSet<LaurentPoly> = HashSet::new();
    let mut gens: Vec<LaurentPoly> = Vec::new();
    let mut rows: Vec<usize> = (0..t).collect();
    let mut cols: Vec<usize> = (0..t).collect();
    let mut exhausted = false;
    while !exhausted {
        let mut batch: Vec<(Vec<usize>, Vec<usize>)> = Vec::with_capacity(MINOR_BATCH);
        while batch.len() < MINOR_BATCH {
            batch.push((rows.clone(), cols.clone()));
            if !next_combination(&mut cols, m.cols()) {
                cols = (0..t).collect();
                if !next_combination(&mut rows, m.rows()) {
                    exhausted = true;
                    break;
                }
            }
        }
        let minors: Vec<LaurentPoly> = batch
            .par_iter()
            .map(|(r, c)| determinant(&m.select(r, c)).map(|d| d.normalize_unit()))
            .collect::<Result<_>>()?;
        let mut fresh: Vec<LaurentPoly> = Vec::new();
        for d in minors {
            if !d.is_zero() && seen.insert(d.clone()) {
                fresh.push(d);
            }
        }
        if fresh.iter().any(|d| d.is_monomial()) {
            return Ok(Ideal::unit(ring));
        }
        fresh.sort_by_key(|d| d.len());
        let terms: Vec<MVec> = fresh.iter().map(|d| to_terms(d, &zero, 0, &eng)).collect();
        gens.extend(fresh);
        gb.add(terms)?;
        if gb.contains_one() {
            break;
        }
    }
    Ok(Ideal::from_parts(ring, gens, gb))
}

/// Inverse of a square matrix whose determinant is a monomial, via the adjugate; `None`
/// when the determinant is not a unit.
pub fn inverse(m: &PolyMatrix) -> Result<Option<PolyMatrix>> {
    let d = determinant(m)?;
    let Some(dinv) = d.monomial_inverse() else {
        return Ok(None);
    };
    let n = m.rows();
    let ring = m.ring();
    let mut out = PolyMatrix::zeros(ring, n, n);
    for i in 0..n {
        for j in 0..n {
            let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
            let minor = determinant(&m.select(&rows, &cols))?;
            let cof = if (i + j) % 2 == 0 { minor } else { minor.neg() };
            out[(i, j)] = &cof * &dinv;
        }
    }
    Ok(Some(out))
}
