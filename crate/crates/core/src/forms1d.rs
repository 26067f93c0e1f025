//! Anti-hermitian forms over `F_p[x^±]` and gappable one-dimensional boundaries.
//!
//! Every such form becomes, after passing to a coarser translation group, congruent to
//! `ξ^{⊕s} ⊕ λ₁^{⊕t} ⊕ 0` with `ξ = [[0, y − 1], [1 − ȳ, 0]]`. The classification below finds
//! an explicit congruence and always re-checks it.

use crate::coarse::CoarseContext;
use crate::error::{Error, Result};
use crate::pauli::{lambda_form, trim_redundant_generators};
use crate::polymat::{kernel_basis, smith_normal_form, PolyMatrix};
use crate::ring::univariate::{divrem, span};
use crate::ring::{gcd_univariate, LaurentPoly, Ring};

/// Evaluation budget of the bounded-degree isotropic search.
const SEARCH_BUDGET: usize = 200_000;

/// Default bound on the coarse-graining factor searched by [`standardize`].
pub const DEFAULT_B_MAX: usize = 64;

/// Default absolute degree bound for the isotropic-vector enumeration.
pub const DEFAULT_DEGREE_CAP: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntiHermitianForm {
    xi: PolyMatrix,
}

impl AntiHermitianForm {
    pub fn new(xi: PolyMatrix) -> Result<AntiHermitianForm> {
        if xi.ring().nvars() != 1 {
            return Err(Error::Unsupported(format!("forms over D = {} rings", xi.ring().nvars())));
        }
        if !xi.is_square() {
            return Err(Error::Shape(format!("form of shape {:?}", xi.shape())));
        }
        if xi.dagger() != xi.neg() {
            return Err(Error::Malformed("form is not anti-hermitian".into()));
        }
        if (0..xi.rows()).any(|i| xi[(i, i)].constant_coeff() != 0) {
            return Err(Error::Malformed("diagonal entry with nonzero constant term".into()));
        }
        Ok(AntiHermitianForm { xi })
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.xi
    }

    pub fn dim(&self) -> usize {
        self.xi.rows()
    }

    pub fn ring(&self) -> Ring {
        self.xi.ring()
    }
}

/// `Ξ = B†λ_qB` for a generator matrix with `2q` rows.
pub fn gram_form(b: &PolyMatrix, q: usize) -> Result<AntiHermitianForm> {
    if b.rows() != 2 * q {
        return Err(Error::Shape(format!("generator matrix has {} rows, expected {}", b.rows(), 2 * q)));
    }
    let xi = &(&b.dagger() * &lambda_form(b.ring(), q)) * b;
    AntiHermitianForm::new(xi)
}

/// `B = (I; U)` with `U` upper triangular, `U_jk = Ξ_jk` above the diagonal and `U_jj` the
/// positive half of `Ξ_jj`, so that `B†λB = U − U† = Ξ`.
pub fn realize_form(form: &AntiHermitianForm) -> PolyMatrix {
    let xi = form.matrix();
    let n = xi.rows();
    let ring = xi.ring();
    let upper = PolyMatrix::from_fn(ring, n, n, |j, k| match j.cmp(&k) {
        std::cmp::Ordering::Less => xi[(j, k)].clone(),
        std::cmp::Ordering::Equal => xi[(j, j)].positive_half(),
        std::cmp::Ordering::Greater => ring.zero(),
    });
    PolyMatrix::identity(ring, n).vstack(&upper).expect("same width")
}

/// `ξ = [[0, y − 1], [1 − ȳ, 0]]`.
pub fn xi_block(ring: Ring) -> PolyMatrix {
    let ym1 = &ring.var(0) - &ring.one();
    let m = ym1.involute().neg();
    PolyMatrix::from_fn(ring, 2, 2, |i, j| match (i, j) {
        (0, 1) => ym1.clone(),
        (1, 0) => m.clone(),
        _ => ring.zero(),
    })
}

/// `ξ^{⊕s} ⊕ λ₁^{⊕t} ⊕ 0_{rank0}`.
pub fn canonical_form(ring: Ring, s: usize, t: usize, rank0: usize) -> PolyMatrix {
    let xi = xi_block(ring);
    let l1 = lambda_form(ring, 1);
    let n = 2 * s + 2 * t + rank0;
    let mut out = PolyMatrix::zeros(ring, n, n);
    for k in 0..s + t {
        let block = if k < s { &xi } else { &l1 };
        for i in 0..2 {
            for j in 0..2 {
                out[(2 * k + i, 2 * k + j)] = block[(i, j)].clone();
            }
        }
    }
    out
}

/// Congruence `E` with `E†ΞE = Ξ′ ⊕ 0` and `det Ξ′ ≠ 0`, from the Smith form `UΞV = S`:
/// the trailing columns of `ΞV = U⁻¹S` vanish, hence so do the trailing rows of `V†ΞV`.
pub fn split_zero_block(form: &AntiHermitianForm) -> Result<(AntiHermitianForm, usize, PolyMatrix)> {
    let xi = form.matrix();
    let n = xi.rows();
    let ring = xi.ring();
    let (rank, e) = if xi.is_zero() {
        (0, PolyMatrix::identity(ring, n))
    } else {
        let smith = smith_normal_form(xi)?;
        let rank = smith.rank();
        let split = (rank..n).all(|i| (0..n).all(|j| xi[(i, j)].is_zero()));
        (rank, if split { PolyMatrix::identity(ring, n) } else { smith.v })
    };
    let reduced = &(&e.dagger() * xi) * &e;
    let idx: Vec<usize> = (0..rank).collect();
    let nondeg = reduced.select(&idx, &idx);
    let mut padded = nondeg.clone();
    if rank < n {
        padded = padded.direct_sum(&PolyMatrix::zeros(ring, n - rank, n - rank))?;
    }
    if padded != reduced {
        return Err(Error::Verification("zero-block split does not verify".into()));
    }
    Ok((AntiHermitianForm::new(nondeg)?, n - rank, e))
}

fn ym1(ring: Ring) -> LaurentPoly {
    &ring.var(0) - &ring.one()
}

/// Whether every elementary divisor of `m` is a unit or a unit multiple of `y − 1`.
pub fn is_standard(m: &PolyMatrix) -> Result<bool> {
    if m.rows() == 0 {
        return Ok(true);
    }
    let smith = smith_normal_form(m)?;
    if smith.rank() != m.rows() {
        return Ok(false);
    }
    let d = ym1(m.ring());
    Ok(smith.divisors.iter().all(|g| g.is_monomial() || g.div_exact(&d).is_some_and(|q| q.is_monomial())))
}

/// `dim_{F_p}` of the torsion of `coker m`: the total absolute degree of the elementary divisors.
pub fn cokernel_torsion_dimension(m: &PolyMatrix) -> Result<usize> {
    if m.rows() == 0 || m.is_zero() {
        return Ok(0);
    }
    let smith = smith_normal_form(m)?;
    Ok(smith.divisors.iter().map(|g| span(g).unwrap_or(0) as usize).sum())
}

/// Smallest `b ≤ b_max` for which `φ⁽ᵇ⁾(Ξ)` is standard, with that coarse-grained form.
pub fn standardize(form: &AntiHermitianForm, b_max: usize) -> Result<(usize, AntiHermitianForm)> {
    if form.dim() > 0 && form.matrix().is_zero() {
        return Err(Error::Precondition("standardization needs a nondegenerate form".into()));
    }
    for b in 1..=b_max {
        let ctx = CoarseContext::uniform(form.ring(), b)?;
        let m = ctx.coarse_matrix(form.matrix())?;
        if is_standard(&m)? {
            return Ok((b, AntiHermitianForm::new(m)?));
        }
    }
    Err(Error::NotFound(format!("no standard coarse-graining with b ≤ {b_max}")))
}

fn hform(m: &PolyMatrix, v: &[LaurentPoly]) -> LaurentPoly {
    let ring = m.ring();
    let mut acc = ring.zero();
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        let mut row = ring.zero();
        for (j, vj) in v.iter().enumerate() {
            if !vj.is_zero() && !m[(i, j)].is_zero() {
                row = &row + &(&m[(i, j)] * vj);
            }
        }
        acc = &acc + &(&vi.involute() * &row);
    }
    acc
}

fn primitive(v: Vec<LaurentPoly>) -> Vec<LaurentPoly> {
    let g = v.iter().filter(|e| !e.is_zero()).fold(None::<LaurentPoly>, |acc, e| {
        Some(match acc {
            None => e.normalize_unit(),
            Some(a) => gcd_univariate(&a, e),
        })
    });
    match g {
        Some(g) if !g.is_monomial() => v.iter().map(|e| e.div_exact(&g).expect("gcd divides")).collect(),
        _ => v,
    }
}

fn sqrt_mod(ring: Ring, c: u32) -> Option<u32> {
    (0..ring.p()).find(|&g| ring.mul_c(g, g) == c)
}

/// Some `γ` with `γγ̄ = h` for hermitian `h`: first `h = c·(y + ȳ − 2)^s` with `(−1)^s c` a
/// square, then a bounded search over polynomials of half the span of `h`.
fn norm_root(h: &LaurentPoly, degree_cap: usize, budget: &mut usize) -> Option<LaurentPoly> {
    let ring = h.ring();
    if h.is_zero() {
        return Some(ring.zero());
    }
    let y = ring.var(0);
    let t = &(&y + &y.involute()) - &ring.constant(2);
    let mut rest = h.clone();
    let mut s = 0u32;
    while let Some(q) = rest.div_exact(&t) {
        rest = q;
        s += 1;
    }
    if rest.is_constant() {
        let c = rest.constant_coeff();
        let target = if s % 2 == 1 { ring.neg_c(c) } else { c };
        if let Some(g) = sqrt_mod(ring, target) {
            return Some(ym1(ring).pow(s).scale(g));
        }
    }
    let sp = span(h)? as usize;
    if sp % 2 == 1 || sp / 2 > degree_cap {
        return None;
    }
    let half = sp / 2;
    let p = ring.p() as usize;
    let total = p.checked_pow(half as u32 + 1)?;
    if total > *budget {
        return None;
    }
    for code in 0..total {
        *budget = budget.saturating_sub(1);
        let mut c = code;
        let terms = (0..=half).map(|k| {
            let ck = (c % p) as i64;
            c /= p;
            (smallvec::smallvec![k as i32], ck)
        });
        let g = ring.from_terms(terms);
        if g.constant_coeff() == 0 || g.is_zero() {
            continue;
        }
        if &g * &g.involute() == *h {
            return Some(g);
        }
    }
    None
}

/// Polynomials with exponents in `-w..=w`, enumerated by coefficient vector.
fn window_polys(ring: Ring, w: i32) -> impl Iterator<Item = LaurentPoly> {
    let p = ring.p() as u64;
    let len = (2 * w + 1) as u32;
    let total = p.saturating_pow(len);
    (0..total).map(move |code| {
        let mut c = code;
        ring.from_terms((-w..=w).map(|e| {
            let ce = (c % p) as i64;
            c /= p;
            (smallvec::smallvec![e], ce)
        }))
    })
}

/// A primitive `v ≠ 0` with `v†Ξv = 0`: a zero diagonal entry, then the two-dimensional
/// construction `v = (γ − c, a)` on principal `2 × 2` blocks `[[a, c], [−c̄, e]]` with
/// `γγ̄ = ae + cc̄`, then a bounded-degree enumeration over vectors supported on three
/// coordinates.
pub fn find_isotropic_vector(form: &PolyMatrix, degree_cap: usize) -> Result<Vec<LaurentPoly>> {
    let n = form.rows();
    let ring = form.ring();
    let unit = |i: usize| (0..n).map(|k| if k == i { ring.one() } else { ring.zero() }).collect::<Vec<_>>();
    if let Some(i) = (0..n).find(|&i| form[(i, i)].is_zero()) {
        return Ok(unit(i));
    }
    let mut budget = SEARCH_BUDGET;
    for i in 0..n {
        for j in i + 1..n {
            let a = &form[(i, i)];
            let c = &form[(i, j)];
            let det = &(a * &form[(j, j)]) - &(c * &form[(j, i)]);
            if let Some(g) = norm_root(&det, degree_cap, &mut budget) {
                let mut v = vec![ring.zero(); n];
                v[i] = &g - c;
                v[j] = a.clone();
                let v = primitive(v);
                if hform(form, &v).is_zero() {
                    return Ok(v);
                }
            }
        }
    }
    for w in 0..=degree_cap as i32 {
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                for f in window_polys(ring, w) {
                    let thirds = std::iter::once(None).chain((j + 1..n).filter(|&k| k != i).map(Some));
                    for k in thirds {
                        let gs: Box<dyn Iterator<Item = LaurentPoly>> = match k {
                            None => Box::new(std::iter::once(ring.zero())),
                            Some(_) => Box::new(window_polys(ring, w).filter(|g| !g.is_zero())),
                        };
                        for g in gs {
                            if budget == 0 {
                                return Err(Error::NotFound(format!(
                                    "isotropic search budget exhausted (degree cap {degree_cap})"
                                )));
                            }
                            budget -= 1;
                            let mut v = unit(i);
                            v[j] = f.clone();
                            if let Some(k) = k {
                                v[k] = g;
                            }
                            if hform(form, &v).is_zero() {
                                return Ok(primitive(v));
                            }
                        }
                    }
                }
            }
        }
    }
    Err(Error::NotFound(format!("no isotropic vector with entries of absolute degree ≤ {degree_cap}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Block {
    Xi,
    Lambda,
}

/// A form together with the accumulated congruence: `x = e†·x₀·e` throughout.
struct Congruence {
    x: PolyMatrix,
    e: PolyMatrix,
}

impl Congruence {
    /// Basis change `e_dst ← e_dst + f·e_src`.
    fn add(&mut self, dst: usize, src: usize, f: &LaurentPoly) {
        if f.is_zero() {
            return;
        }
        self.x.add_col_multiple(dst, src, f);
        self.x.add_row_multiple(dst, src, &f.involute());
        self.e.add_col_multiple(dst, src, f);
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.x.swap_cols(a, b);
        self.x.swap_rows(a, b);
        self.e.swap_cols(a, b);
    }

    /// `e_i ← u·e_i` for a unit `u`.
    fn scale(&mut self, i: usize, u: &LaurentPoly) {
        self.x.scale_col(i, u);
        self.x.scale_row(i, &u.involute());
        self.e.scale_col(i, u);
    }

    /// Makes the basis vector at `k` equal to `v` (coordinates on `k..`) up to a unit, by
    /// running Euclid on the coordinates: `v_j −= f·v_i` is the basis change `e_i += f·e_j`.
    fn move_vector(&mut self, k: usize, mut v: Vec<LaurentPoly>) {
        loop {
            let nz: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
            let piv = *nz.iter().min_by_key(|&&i| span(&v[i])).expect("nonzero vector");
            if nz.len() == 1 {
                self.swap(k, k + piv);
                return;
            }
            for &j in &nz {
                if j != piv {
                    let (q, r) = divrem(&v[j], &v[piv]);
                    v[j] = r;
                    self.add(k + piv, k + j, &q);
                }
            }
        }
    }

    /// Euclid on row `k` to the right of `k`, leaving its only nonzero entry at `k + 1`.
    fn reduce_row(&mut self, k: usize) -> Result<()> {
        let n = self.x.rows();
        loop {
            let nz: Vec<usize> = (k + 1..n).filter(|&j| !self.x[(k, j)].is_zero()).collect();
            let Some(&piv) = nz.iter().min_by_key(|&&j| span(&self.x[(k, j)])) else {
                return Err(Error::Precondition("degenerate form in extraction".into()));
            };
            if nz.len() == 1 {
                self.swap(k + 1, piv);
                return Ok(());
            }
            let pv = self.x[(k, piv)].clone();
            for &j in &nz {
                if j != piv {
                    let (q, _) = divrem(&self.x[(k, j)], &pv);
                    self.add(j, piv, &q.neg());
                }
            }
        }
    }
}

/// Congruence taking a nondegenerate standard form to a direct sum of `ξ` and `λ₁` blocks (in
/// extraction order), or `None` when no isotropic vector is found in some remaining block.
fn extract(x0: &PolyMatrix, degree_cap: usize) -> Result<Option<(PolyMatrix, Vec<Block>)>> {
    let n = x0.rows();
    let ring = x0.ring();
    let d = ym1(ring);
    let mut c = Congruence { x: x0.clone(), e: PolyMatrix::identity(ring, n) };
    let mut blocks = Vec::new();
    let mut k = 0;
    let mut forced = false;
    while k < n {
        if n - k == 1 {
            return Ok(None);
        }
        if !forced {
            let idx: Vec<usize> = (k..n).collect();
            let v = match find_isotropic_vector(&c.x.select(&idx, &idx), degree_cap) {
                Ok(v) => v,
                Err(Error::NotFound(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            c.move_vector(k, v);
        }
        forced = false;
        debug_assert!(c.x[(k, k)].is_zero());
        c.reduce_row(k)?;
        let beta = c.x[(k, k + 1)].clone();
        let unit = beta.is_monomial();
        if !unit && !beta.div_exact(&d).is_some_and(|q| q.is_monomial()) {
            return Err(Error::Precondition(format!("pairing {beta} of a form that is not standard")));
        }
        // Kill the partner's self-pairing: δ = r − r̄ with (y − 1) | r.
        let delta = c.x[(k + 1, k + 1)].clone();
        let half = delta.positive_half();
        let r = &half - &ring.constant(half.eval_at_one() as i64);
        let fbar = r.neg().div_exact(&beta).expect("pairing divides the self-pairing");
        c.add(k + 1, k, &fbar.involute());
        debug_assert!(c.x[(k + 1, k + 1)].is_zero());

        let bbar = beta.involute();
        if unit {
            for j in k + 2..n {
                let a = c.x[(k + 1, j)].div_exact(&bbar).expect("unit divides");
                c.add(j, k, &a);
            }
            c.scale(k, &beta.monomial_inverse().expect("unit").involute());
            blocks.push(Block::Lambda);
            k += 2;
            continue;
        }
        let mut escape = None;
        for j in k + 2..n {
            let e = c.x[(k + 1, j)].clone();
            let c0 = e.eval_at_one();
            let a = (&e - &ring.constant(c0 as i64)).div_exact(&bbar).expect("y − 1 divides");
            c.add(j, k, &a);
            if c0 != 0 && escape.is_none() {
                escape = Some(j);
            }
        }
        if escape.is_some() {
            // The partner is isotropic with a unit pairing: extract λ₁ from it instead.
            c.swap(k, k + 1);
            forced = true;
            continue;
        }
        let u = beta.div_exact(&d).expect("checked");
        c.scale(k, &u.monomial_inverse().expect("unit").involute());
        blocks.push(Block::Xi);
        k += 2;
    }
    Ok(Some((c.e, blocks)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormClassification {
    /// Coarse factor: the witness lives over `F_p[y^±]` with `y = x^b`.
    pub b: usize,
    pub s: usize,
    pub t: usize,
    pub rank0: usize,
    /// `E†·φ⁽ᵇ⁾(Ξ)·E = ξ^{⊕s} ⊕ λ₁^{⊕t} ⊕ 0`.
    pub witness: PolyMatrix,
}

impl FormClassification {
    pub fn canonical(&self) -> PolyMatrix {
        canonical_form(self.witness.ring(), self.s, self.t, self.rank0)
    }

    /// Re-checks the witness against `φ⁽ᵇ⁾(Ξ)`.
    pub fn verify(&self, form: &AntiHermitianForm) -> Result<bool> {
        let coarse = CoarseContext::uniform(form.ring(), self.b)?.coarse_matrix(form.matrix())?;
        Ok(&(&self.witness.dagger() * &coarse) * &self.witness == self.canonical())
    }
}

/// Full classification with a verified congruence witness.
pub fn classify_form(form: &AntiHermitianForm, b_max: usize, degree_cap: usize) -> Result<FormClassification> {
    let ring = form.ring();
    let (nondeg, zeros, e0) = split_zero_block(form)?;
    if nondeg.dim() == 0 {
        return Ok(FormClassification { b: 1, s: 0, t: 0, rank0: zeros, witness: e0 });
    }
    let (b0, _) = standardize(&nondeg, b_max)?;
    let mut b = b0;
    while b <= b_max {
        let ctx = CoarseContext::uniform(ring, b)?;
        let x = ctx.coarse_matrix(nondeg.matrix())?;
        if is_standard(&x)? {
            if let Some((ext, blocks)) = extract(&x, degree_cap)? {
                let result = assemble(&ctx, form, &e0, ext, &blocks, zeros * b)?;
                return Ok(result);
            }
        }
        b += b0;
    }
    Err(Error::NotFound(format!("no complete extraction with b ≤ {b_max}")))
}

fn assemble(
    ctx: &CoarseContext,
    form: &AntiHermitianForm,
    e0: &PolyMatrix,
    ext: PolyMatrix,
    blocks: &[Block],
    rank0: usize,
) -> Result<FormClassification> {
    let ring = ctx.target();
    let mut order = Vec::new();
    for want in [Block::Xi, Block::Lambda] {
        for (k, blk) in blocks.iter().enumerate() {
            if *blk == want {
                order.extend([2 * k, 2 * k + 1]);
            }
        }
    }
    let m = ext.rows();
    let perm = PolyMatrix::from_fn(ring, m, m, |i, j| if order[j] == i { ring.one() } else { ring.zero() });
    let mut inner = &ext * &perm;
    if rank0 > 0 {
        inner = inner.direct_sum(&PolyMatrix::identity(ring, rank0))?;
    }
    let witness = &ctx.coarse_matrix(e0)? * &inner;
    let s = blocks.iter().filter(|b| **b == Block::Xi).count();
    let out = FormClassification { b: ctx.block(), s, t: blocks.len() - s, rank0, witness };
    if !out.verify(form)? {
        return Err(Error::Verification("classification witness does not verify".into()));
    }
    Ok(out)
}

/// A maximal isotropic submodule of the commutant of `G`, over the coarse ring.
#[derive(Clone, Debug)]
pub struct CommutativeSubmodule {
    /// Coarse factor of the ring the generators live over.
    pub b: usize,
    /// Columns generating the submodule; rows are `2qb` coarse-grained Pauli coordinates.
    pub generators: PolyMatrix,
    pub classification: FormClassification,
}

/// Commutant basis of `G` (`2q` rows), its gram form classified, and one isotropic vector kept
/// from each `ξ` or `λ₁` pair together with the whole zero block.
pub fn maximal_commutative_submodule(
    g: &PolyMatrix,
    q: usize,
    b_max: usize,
    degree_cap: usize,
) -> Result<CommutativeSubmodule> {
    let ring = g.ring();
    if ring.nvars() != 1 {
        return Err(Error::Unsupported(format!("boundary extraction over D = {}", ring.nvars())));
    }
    if g.rows() != 2 * q {
        return Err(Error::Shape(format!("generator matrix has {} rows, expected {}", g.rows(), 2 * q)));
    }
    let commutant = if g.cols() == 0 {
        PolyMatrix::identity(ring, 2 * q)
    } else {
        let k = kernel_basis(&(&g.dagger() * &lambda_form(ring, q)))?;
        if k.cols() == 0 || k.is_zero() {
            PolyMatrix::zeros(ring, 2 * q, 0)
        } else {
            trim_redundant_generators(&k)?
        }
    };
    let form = gram_form(&commutant, q)?;
    let cls = classify_form(&form, b_max, degree_cap)?;
    let ctx = CoarseContext::uniform(ring, cls.b)?;
    let basis = &ctx.coarse_matrix(&commutant)? * &cls.witness;
    let pairs = cls.s + cls.t;
    let keep: Vec<usize> = (0..pairs).map(|k| 2 * k + 1).chain(2 * pairs..2 * pairs + cls.rank0).collect();
    let rows: Vec<usize> = (0..basis.rows()).collect();
    let generators = basis.select(&rows, &keep);
    if !gram_form(&generators, q * cls.b)?.matrix().is_zero() {
        return Err(Error::Verification("boundary generators do not commute".into()));
    }
    Ok(CommutativeSubmodule { b: cls.b, generators, classification: cls })
}
