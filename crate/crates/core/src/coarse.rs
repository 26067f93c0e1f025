//! Passing to a smaller translation group: `x_i ↦` the companion action of `x_i` on the basis
//! `{1, x_i, …, x_i^{n_i − 1}}` over `F_p[y_i^±]` with `y_i = x_i^{n_i}`.
//!
//! Each polynomial becomes an `N × N` block (`N = ∏ n_i`) and matrices are expanded entry by
//! entry with the block index running fastest, so `λ_q` maps to `λ_{Nq}` and `†` commutes
//! with the map.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polymat::PolyMatrix;
use crate::ring::{Exponent, LaurentPoly, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoarseContext {
    n: Vec<usize>,
    source: Ring,
    target: Ring,
}

impl CoarseContext {
    pub fn new(source: Ring, n: Vec<usize>) -> Result<CoarseContext> {
        if n.len() != source.nvars() {
            return Err(Error::Shape(format!("{} block factors for {} variables", n.len(), source.nvars())));
        }
        if n.contains(&0) {
            return Err(Error::Malformed("block factors must be positive".into()));
        }
        Ok(CoarseContext { n, source, target: source })
    }

    /// The same factor `n` for every variable.
    pub fn uniform(source: Ring, n: usize) -> Result<CoarseContext> {
        CoarseContext::new(source, vec![n; source.nvars()])
    }

    pub fn factors(&self) -> &[usize] {
        &self.n
    }

    pub fn source(&self) -> Ring {
        self.source
    }

    pub fn target(&self) -> Ring {
        self.target
    }

    /// Size `N` of the block replacing one entry.
    pub fn block(&self) -> usize {
        self.n.iter().product()
    }

    /// Mixed-radix index of a residue vector; the last variable runs fastest.
    fn index(&self, r: &[usize]) -> usize {
        r.iter().zip(&self.n).fold(0, |acc, (&ri, &ni)| acc * ni + ri)
    }

    fn residues(&self, mut idx: usize) -> Vec<usize> {
        let mut r = vec![0; self.n.len()];
        for k in (0..self.n.len()).rev() {
            r[k] = idx % self.n[k];
            idx /= self.n[k];
        }
        r
    }

    /// `N × N` matrix of multiplication by `f`: the basis element `x^j` times `x^a` is
    /// `y^q x^r` where `a + j = n q + r` componentwise.
    pub fn coarse_poly(&self, f: &LaurentPoly) -> Result<PolyMatrix> {
        self.source.check(&f.ring())?;
        let nb = self.block();
        let mut out = PolyMatrix::zeros(self.target, nb, nb);
        for j in 0..nb {
            let js = self.residues(j);
            for (a, c) in f.terms() {
                let mut r = vec![0usize; js.len()];
                let mut q: Exponent = self.target.zero_exp();
                for k in 0..js.len() {
                    let total = a[k] as i64 + js[k] as i64;
                    let nk = self.n[k] as i64;
                    q[k] = total.div_euclid(nk) as i32;
                    r[k] = total.rem_euclid(nk) as usize;
                }
                let i = self.index(&r);
                out[(i, j)] = &out[(i, j)] + &self.target.monomial(q, *c);
            }
        }
        Ok(out)
    }

    /// Entrywise expansion into `N × N` blocks.
    pub fn coarse_matrix(&self, m: &PolyMatrix) -> Result<PolyMatrix> {
        self.source.check(&m.ring())?;
        let nb = self.block();
        let blocks: Vec<PolyMatrix> =
            m.entries().par_iter().map(|e| self.coarse_poly(e)).collect::<Result<_>>()?;
        let cols = m.cols();
        Ok(PolyMatrix::from_fn(self.target, m.rows() * nb, cols * nb, |i, j| {
            blocks[(i / nb) * cols + j / nb][(i % nb, j % nb)].clone()
        }))
    }
}
