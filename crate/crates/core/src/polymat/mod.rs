//! Matrices over the Laurent ring.
//!
//! Entries are stored row-major. Every entry shares the matrix's ring; constructors
//! enforce this so the arithmetic below can skip per-entry context checks.

mod det;
mod io;
mod smith;
mod syzygy;

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{LaurentPoly, Ring};

pub use det::{determinant, determinantal_ideal, inverse, matrix_rank};
pub use smith::{smith_normal_form, Smith};
pub use syzygy::{kernel_basis, solve_linear, ColumnModule};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{} over p={} D={}", self.rows, self.cols, self.ring.p(), self.ring.nvars())?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join("; "))?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for PolyMatrix {
    type Output = LaurentPoly;
    fn index(&self, (i, j): (usize, usize)) -> &LaurentPoly {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of {}x{}", self.rows, self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for PolyMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut LaurentPoly {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of {}x{}", self.rows, self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl PolyMatrix {
    pub fn new(ring: Ring, rows: usize, cols: usize, entries: Vec<LaurentPoly>) -> Result<PolyMatrix> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        for e in &entries {
            ring.check(&e.ring())?;
        }
        Ok(PolyMatrix { ring, rows, cols, entries })
    }

    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix { ring, rows, cols, entries: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: Ring, n: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(ring, n, n);
        for i in 0..n {
            m[(i, i)] = ring.one();
        }
        m
    }

    pub fn from_fn(ring: Ring, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> LaurentPoly) -> PolyMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                assert_eq!(e.ring(), ring, "entry ({i},{j}) in the wrong ring");
                entries.push(e);
            }
        }
        PolyMatrix { ring, rows, cols, entries }
    }

    /// Builds from rows of polynomial text in the ring's grammar.
    pub fn parse_rows(ring: Ring, rows: &[&[&str]]) -> Result<PolyMatrix> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Shape("ragged rows".into()));
            }
            for s in r.iter() {
                entries.push(ring.parse(s)?);
            }
        }
        PolyMatrix::new(ring, rows.len(), cols, entries)
    }

    /// Builds from columns, each a list of entries.
    pub fn from_columns(ring: Ring, cols: &[Vec<LaurentPoly>]) -> Result<PolyMatrix> {
        let rows = cols.first().map_or(0, |c| c.len());
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::Shape("columns of unequal length".into()));
        }
        let m = PolyMatrix::from_fn(ring, rows, cols.len(), |i, j| cols[j][i].clone());
        Ok(m)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[LaurentPoly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> Vec<LaurentPoly> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<LaurentPoly> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column_matrix(&self, j: usize) -> PolyMatrix {
        self.select(&(0..self.rows).collect::<Vec<_>>(), &[j])
    }

    /// Submatrix on the given row and column index lists (repeats allowed).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        PolyMatrix::from_fn(self.ring, rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn columns_range(&self, r: std::ops::Range<usize>) -> PolyMatrix {
        self.select(&(0..self.rows).collect::<Vec<_>>(), &r.collect::<Vec<_>>())
    }

    pub fn rows_range(&self, r: std::ops::Range<usize>) -> PolyMatrix {
        self.select(&r.collect::<Vec<_>>(), &(0..self.cols).collect::<Vec<_>>())
    }

    pub fn transpose(&self) -> PolyMatrix {
        PolyMatrix::from_fn(self.ring, self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Transpose followed by the entrywise involution.
    pub fn dagger(&self) -> PolyMatrix {
        PolyMatrix::from_fn(self.ring, self.cols, self.rows, |i, j| self[(j, i)].involute())
    }

    pub fn map(&self, mut f: impl FnMut(&LaurentPoly) -> LaurentPoly) -> PolyMatrix {
        PolyMatrix { ring: self.ring, rows: self.rows, cols: self.cols, entries: self.entries.iter().map(&mut f).collect() }
    }

    fn same_shape(&self, other: &PolyMatrix, what: &str) -> Result<()> {
        self.ring.check(&other.ring)?;
        if self.shape() != other.shape() {
            return Err(Error::Shape(format!("{what}: {:?} vs {:?}", self.shape(), other.shape())));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.same_shape(other, "add")?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(PolyMatrix { entries, ..self.clone_shape() })
    }

    pub fn try_sub(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.same_shape(other, "sub")?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(PolyMatrix { entries, ..self.clone_shape() })
    }

    fn clone_shape(&self) -> PolyMatrix {
        PolyMatrix { ring: self.ring, rows: self.rows, cols: self.cols, entries: Vec::new() }
    }

    pub fn try_mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.ring.check(&other.ring)?;
        if self.cols != other.rows {
            return Err(Error::Shape(format!("product of {:?} and {:?}", self.shape(), other.shape())));
        }
        let mut out = PolyMatrix::zeros(self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a * b;
                        out[(i, j)] = &out[(i, j)] + &prod;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &LaurentPoly) -> PolyMatrix {
        self.map(|e| e * c)
    }

    pub fn neg(&self) -> PolyMatrix {
        self.map(|e| e.neg())
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.ring.check(&other.ring)?;
        if self.rows != other.rows {
            return Err(Error::Shape(format!("hstack of {:?} and {:?}", self.shape(), other.shape())));
        }
        let c = self.cols;
        Ok(PolyMatrix::from_fn(self.ring, self.rows, c + other.cols, |i, j| {
            if j < c {
                self[(i, j)].clone()
            } else {
                other[(i, j - c)].clone()
            }
        }))
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.ring.check(&other.ring)?;
        if self.cols != other.cols {
            return Err(Error::Shape(format!("vstack of {:?} and {:?}", self.shape(), other.shape())));
        }
        let r = self.rows;
        Ok(PolyMatrix::from_fn(self.ring, r + other.rows, self.cols, |i, j| {
            if i < r {
                self[(i, j)].clone()
            } else {
                other[(i - r, j)].clone()
            }
        }))
    }

    /// Block diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.ring.check(&other.ring)?;
        let (r, c) = self.shape();
        Ok(PolyMatrix::from_fn(self.ring, r + other.rows, c + other.cols, |i, j| match (i < r, j < c) {
            (true, true) => self[(i, j)].clone(),
            (false, false) => other[(i - r, j - c)].clone(),
            _ => self.ring.zero(),
        }))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| if i == j { self[(i, j)].is_one() } else { self[(i, j)].is_zero() }))
    }

    /// Entrywise reduction of exponents modulo the torus periods.
    pub fn reduce_mod_torus(&self, l: &[usize]) -> PolyMatrix {
        self.map(|e| e.reduce_mod_torus(l))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row_dst += f · row_src`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, f: &LaurentPoly) {
        if f.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = &self[(src, j)] * f;
            self[(dst, j)] = &self[(dst, j)] + &t;
        }
    }

    /// `col_dst += col_src · f`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, f: &LaurentPoly) {
        if f.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = &self[(i, src)] * f;
            self[(i, dst)] = &self[(i, dst)] + &t;
        }
    }

    pub fn scale_row(&mut self, i: usize, f: &LaurentPoly) {
        for j in 0..self.cols {
            self[(i, j)] = &self[(i, j)] * f;
        }
    }

    pub fn scale_col(&mut self, j: usize, f: &LaurentPoly) {
        for i in 0..self.rows {
            self[(i, j)] = &self[(i, j)] * f;
        }
    }

    /// Total number of stored terms, a rough size measure.
    pub fn term_count(&self) -> usize {
        self.entries.iter().map(|e| e.len()).sum()
    }
}

impl std::ops::Mul for &PolyMatrix {
    type Output = PolyMatrix;
    fn mul(self, rhs: &PolyMatrix) -> PolyMatrix {
        self.try_mul(rhs).expect("matrix product")
    }
}

impl std::ops::Add for &PolyMatrix {
    type Output = PolyMatrix;
    fn add(self, rhs: &PolyMatrix) -> PolyMatrix {
        self.try_add(rhs).expect("matrix sum")
    }
}

impl std::ops::Sub for &PolyMatrix {
    type Output = PolyMatrix;
    fn sub(self, rhs: &PolyMatrix) -> PolyMatrix {
        self.try_sub(rhs).expect("matrix difference")
    }
}

impl std::ops::Neg for &PolyMatrix {
    type Output = PolyMatrix;
    fn neg(self) -> PolyMatrix {
        PolyMatrix::neg(self)
    }
}
