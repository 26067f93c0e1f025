//! Column modules via Groebner bases with a tracking block.
//!
//! For `M` with `m` rows and `n` columns, column `j` is shifted by a monomial `x^{s_j}` into
//! the polynomial ring and paired with the unit vector `e_{m+j}`. Together with
//! `(t·x_1⋯x_D − 1)·ε_i` for `i < m`, these generate a submodule of `F_p[x, t]^{m+n}` whose
//! elements all satisfy `first block = Σ_j c_j x^{s_j} col_j` modulo the saturation
//! relation, where `c` is the tracking block. Position-over-term order with the first
//! block on top makes the elements with empty first block a basis of the syzygies.

use super::PolyMatrix;
use crate::error::{Error, Result};
use crate::ring::groebner::{default_budget, Engine, Gb, MVec, MonoOrder, Term};
use crate::ring::{engine_for, from_terms, saturation_term, to_terms, Exponent, LaurentPoly, Ring};

pub struct ColumnModule {
    ring: Ring,
    rows: usize,
    cols: usize,
    shifts: Vec<Exponent>,
    eng: Engine,
    gb: Gb,
}

/// Shift making every entry of `col` a polynomial.
fn column_shift(ring: Ring, col: &[LaurentPoly]) -> Exponent {
    let mut s = ring.zero_exp();
    for e in col.iter().filter(|e| !e.is_zero()) {
        for (v, m) in s.iter_mut().zip(e.min_exponents()) {
            *v = (*v).max(-m);
        }
    }
    s
}

fn column_terms(col: &[LaurentPoly], shift: &[i32], eng: &Engine) -> MVec {
    let mut out = MVec::new();
    for (i, e) in col.iter().enumerate() {
        out.extend(to_terms(e, shift, i as u32, eng));
    }
    eng.sort(&mut out);
    out
}

impl ColumnModule {
    pub fn new(m: &PolyMatrix) -> Result<ColumnModule> {
        ColumnModule::with_budget(m, default_budget())
    }

    pub fn with_budget(m: &PolyMatrix, budget: u64) -> Result<ColumnModule> {
        let ring = m.ring();
        let (rows, cols) = m.shape();
        let eng = engine_for(ring, MonoOrder::Grevlex)?;
        let mut gb = Gb::new(eng, rows + cols, budget);
        let mut gens: Vec<MVec> = Vec::new();
        let mut shifts = Vec::with_capacity(cols);
        for j in 0..cols {
            let col = m.column(j);
            let s = column_shift(ring, &col);
            let mut g = column_terms(&col, &s, &eng);
            g.push(Term { pos: (rows + j) as u32, deg: 0, m: [0; crate::ring::groebner::MAXV], c: 1 });
            eng.sort(&mut g);
            gens.push(g);
            shifts.push(s);
        }
        for i in 0..rows {
            gens.push(saturation_term(ring, i as u32, &eng));
        }
        gens.sort_by_key(|g| g.iter().take_while(|t| (t.pos as usize) < rows).count());
        gb.add(gens)?;
        Ok(ColumnModule { ring, rows, cols, shifts, eng, gb })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Coefficients `c` with `M·c = b`, or `None` when `b` is outside the column module.
    pub fn lift(&self, b: &[LaurentPoly]) -> Result<Option<Vec<LaurentPoly>>> {
        if b.len() != self.rows {
            return Err(Error::Shape(format!("vector of length {} against {} rows", b.len(), self.rows)));
        }
        for e in b {
            self.ring.check(&e.ring())?;
        }
        let sb = column_shift(self.ring, b);
        let r = self.gb.reduce(column_terms(b, &sb, &self.eng));
        if r.iter().any(|t| (t.pos as usize) < self.rows) {
            return Ok(None);
        }
        let unshift: Exponent = sb.iter().map(|v| -v).collect();
        let coeffs = (0..self.cols)
            .map(|j| {
                let c = from_terms(&r, (self.rows + j) as u32, self.ring).neg();
                c.mul_term(&self.shifts[j], 1).mul_term(&unshift, 1)
            })
            .collect();
        Ok(Some(coeffs))
    }

    pub fn contains(&self, b: &[LaurentPoly]) -> Result<bool> {
        if b.len() != self.rows {
            return Err(Error::Shape(format!("vector of length {} against {} rows", b.len(), self.rows)));
        }
        let sb = column_shift(self.ring, b);
        let r = self.gb.reduce(column_terms(b, &sb, &self.eng));
        Ok(r.iter().all(|t| (t.pos as usize) >= self.rows))
    }

    /// True when every column of `other` lies in this module.
    pub fn contains_columns(&self, other: &PolyMatrix) -> Result<bool> {
        for j in 0..other.cols() {
            if !self.contains(&other.column(j))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Generators of `{c : M·c = 0}` as the columns of a `cols × k` matrix.
    pub fn syzygies(&self) -> PolyMatrix {
        let mut out: Vec<Vec<LaurentPoly>> = Vec::new();
        for g in self.gb.reduced_basis() {
            if g.iter().any(|t| (t.pos as usize) < self.rows) {
                continue;
            }
            let v: Vec<LaurentPoly> = (0..self.cols)
                .map(|j| from_terms(&g, (self.rows + j) as u32, self.ring).mul_term(&self.shifts[j], 1))
                .collect();
            // Multiples of the saturation relation vanish in the Laurent ring.
            if v.iter().all(|e| e.is_zero()) || out.contains(&v) {
                continue;
            }
            out.push(v);
        }
        if out.is_empty() {
            return PolyMatrix::zeros(self.ring, self.cols, 0);
        }
        PolyMatrix::from_columns(self.ring, &out).expect("uniform columns")
    }
}

/// Generators of the kernel of `m` (columns of the result).
pub fn kernel_basis(m: &PolyMatrix) -> Result<PolyMatrix> {
    Ok(ColumnModule::new(m)?.syzygies())
}

/// A solution `v` of `m·v = b`, solved column by column, or `None` if some column of `b`
/// is outside the column module of `m`.
pub fn solve_linear(m: &PolyMatrix, b: &PolyMatrix) -> Result<Option<PolyMatrix>> {
    m.ring().check(&b.ring())?;
    if b.rows() != m.rows() {
        return Err(Error::Shape(format!("solve with {:?} against right side {:?}", m.shape(), b.shape())));
    }
    let module = ColumnModule::new(m)?;
    let mut cols = Vec::with_capacity(b.cols());
    for j in 0..b.cols() {
        match module.lift(&b.column(j))? {
            Some(c) => cols.push(c),
            None => return Ok(None),
        }
    }
    if cols.is_empty() {
        return Ok(Some(PolyMatrix::zeros(m.ring(), m.cols(), 0)));
    }
    Ok(Some(PolyMatrix::from_columns(m.ring(), &cols)?))
}
