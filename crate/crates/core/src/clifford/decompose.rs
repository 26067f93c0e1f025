//! Factorization of Clifford QCAs into elementary gates and shifts.

use super::{Gate, GateList, SymplecticQCA};
use crate::error::{Error, Result};
use crate::polymat::PolyMatrix;
use crate::ring::univariate::{divrem, span};
use crate::ring::LaurentPoly;

/// Per-qudit description of a shift: qudit `i` is sent to qudit `perm[i]` and translated
/// by `monomials[i]` (which may carry a scalar when `p > 2`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftDescription {
    pub perm: Vec<usize>,
    pub monomials: Vec<LaurentPoly>,
}

impl ShiftDescription {
    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &j)| i == j) && self.monomials.iter().all(|m| m.is_one())
    }
}

/// Recognizes monomial-permutation symplectic matrices: every `X_i` maps to a unit multiple
/// of one `X_j`, and `Z_i` to the matching unit multiple of `Z_j`, with the same translation.
pub fn is_shift(q: &SymplecticQCA) -> Option<ShiftDescription> {
    let n = q.q();
    let m = q.matrix();
    let single = |j: usize| -> Option<(usize, LaurentPoly)> {
        let mut hit = None;
        for i in 0..2 * n {
            if !m[(i, j)].is_zero() {
                if hit.is_some() || !m[(i, j)].is_monomial() {
                    return None;
                }
                hit = Some((i, m[(i, j)].clone()));
            }
        }
        hit
    };
    let mut perm = Vec::with_capacity(n);
    let mut monomials = Vec::with_capacity(n);
    let mut used = vec![false; n];
    for i in 0..n {
        let (rx, mx) = single(i)?;
        let (rz, mz) = single(i + n)?;
        if rx >= n || rz != rx + n || used[rx] || mx.terms()[0].0 != mz.terms()[0].0 {
            return None;
        }
        used[rx] = true;
        perm.push(rx);
        monomials.push(mx);
    }
    Some(ShiftDescription { perm, monomials })
}

fn hadamard_inverse(p: u32, i: usize) -> Vec<Gate> {
    Gate::Hadamard(i).inverse_word(p)
}

/// Gate word with product `[[I, S], [0, I]]` for hermitian `S`. Such matrices commute,
/// so the word is a product of one piece per diagonal entry and per hermitian pair.
fn upper_word(s: &PolyMatrix) -> Vec<Gate> {
    let p = s.ring().p();
    let n = s.rows();
    let mut out = Vec::new();
    for i in 0..n {
        let f = &s[(i, i)];
        if !f.is_zero() {
            out.push(Gate::Hadamard(i));
            out.push(Gate::Cphase(i, f.neg()));
            out.extend(hadamard_inverse(p, i));
        }
        for j in i + 1..n {
            let a = &s[(i, j)];
            if !a.is_zero() {
                out.push(Gate::Hadamard(j));
                out.push(Gate::Cnot(i, j, a.clone()));
                out.extend(hadamard_inverse(p, j));
            }
        }
    }
    out
}

/// Gate word with product `[[I, 0], [S, I]]` for hermitian `S`.
fn lower_word(s: &PolyMatrix) -> Vec<Gate> {
    let p = s.ring().p();
    let n = s.rows();
    let mut out = Vec::new();
    for i in 0..n {
        let f = &s[(i, i)];
        if !f.is_zero() {
            out.push(Gate::Cphase(i, f.clone()));
        }
        for j in i + 1..n {
            let a = &s[(i, j)];
            if !a.is_zero() {
                out.extend(hadamard_inverse(p, i));
                out.push(Gate::Cnot(i, j, a.neg()));
                out.push(Gate::Hadamard(i));
            }
        }
    }
    out
}

fn is_hermitian(s: &PolyMatrix) -> bool {
    s.dagger() == *s
}

/// Splits `[[A, B], [C, D]]` into its four `q × q` blocks.
fn blocks(m: &PolyMatrix) -> [PolyMatrix; 4] {
    let n = m.rows() / 2;
    let lo: Vec<usize> = (0..n).collect();
    let hi: Vec<usize> = (n..2 * n).collect();
    [m.select(&lo, &lo), m.select(&lo, &hi), m.select(&hi, &lo), m.select(&hi, &hi)]
}

fn checked(list: GateList, target: &SymplecticQCA) -> Result<GateList> {
    if list.product().matrix() != target.matrix() {
        return Err(Error::Verification("gate list does not replay to the target matrix".into()));
    }
    Ok(list)
}

/// Factors `[[I, B], [0, I]]` with `B = B†`. Every diagonal entry becomes a control-phase
/// conjugated by a Hadamard and every off-diagonal pair a CNOT conjugated by a Hadamard.
pub fn decompose_upper_block(q: &SymplecticQCA) -> Result<GateList> {
    let [a, b, c, d] = blocks(q.matrix());
    if !a.is_identity() || !d.is_identity() || !c.is_zero() {
        return Err(Error::Precondition("matrix is not of the form [[I, B], [0, I]]".into()));
    }
    if !is_hermitian(&b) {
        return Err(Error::Precondition("upper block is not hermitian".into()));
    }
    checked(GateList::new(q.ring(), q.q(), upper_word(&b))?, q)
}

/// Factors `[[I, 0], [C, I]]` with `C = C†`.
pub fn decompose_lower_block(q: &SymplecticQCA) -> Result<GateList> {
    let [a, b, c, d] = blocks(q.matrix());
    if !a.is_identity() || !d.is_identity() || !b.is_zero() {
        return Err(Error::Precondition("matrix is not of the form [[I, 0], [C, I]]".into()));
    }
    if !is_hermitian(&c) {
        return Err(Error::Precondition("lower block is not hermitian".into()));
    }
    checked(GateList::new(q.ring(), q.q(), lower_word(&c))?, q)
}

/// `E_{i,j}(a)` as `(i, j, a)`.
type Elementary = (usize, usize, LaurentPoly);

/// Writes an invertible `n × n` matrix over `F_p[x^±]` as `E_1 ⋯ E_w · Δ` with elementary
/// `E_k = E_{i,j}(a)` (`i ≠ j`) and diagonal `Δ` of units, by Euclidean row reduction.
fn gl_factor(m: &PolyMatrix) -> Result<(Vec<Elementary>, Vec<LaurentPoly>)> {
    let n = m.rows();
    let mut a = m.clone();
    // Row operations applied so far; row_i += f·row_j is left multiplication by E_{i,j}(f).
    let mut ops: Vec<Elementary> = Vec::new();
    let mut apply = |a: &mut PolyMatrix, i: usize, j: usize, f: LaurentPoly| {
        if !f.is_zero() {
            a.add_row_multiple(i, j, &f);
            ops.push((i, j, f));
        }
    };
    let ring = m.ring();
    let singular = || Error::Precondition("matrix is not invertible over the Laurent ring".into());
    for k in 0..n {
        loop {
            let best = (k..n).filter(|&i| !a[(i, k)].is_zero()).min_by_key(|&i| span(&a[(i, k)]).unwrap());
            let Some(i) = best else {
                return Err(singular());
            };
            if i != k {
                if a[(k, k)].is_zero() {
                    apply(&mut a, k, i, ring.one());
                } else {
                    let (qt, r) = divrem(&a[(k, k)], &a[(i, k)]);
                    apply(&mut a, k, i, qt.neg());
                    if r.is_zero() {
                        apply(&mut a, k, i, ring.one());
                    }
                    continue;
                }
            }
            let mut clean = true;
            for r in k + 1..n {
                if a[(r, k)].is_zero() {
                    continue;
                }
                let (qt, rem) = divrem(&a[(r, k)], &a[(k, k)]);
                apply(&mut a, r, k, qt.neg());
                clean &= rem.is_zero();
            }
            if clean {
                break;
            }
        }
        if !a[(k, k)].is_monomial() {
            return Err(singular());
        }
    }
    for k in (0..n).rev() {
        let inv = a[(k, k)].monomial_inverse().expect("unit pivot");
        for i in 0..k {
            let f = &a[(i, k)] * &inv;
            apply(&mut a, i, k, f.neg());
        }
    }
    let diag = (0..n).map(|k| a[(k, k)].clone()).collect();
    // ops_w ⋯ ops_1 · m = Δ, so m = ops_1⁻¹ ⋯ ops_w⁻¹ · Δ.
    let factors = ops.into_iter().map(|(i, j, f)| (i, j, f.neg())).collect();
    Ok((factors, diag))
}

/// Gate word for `diag(N, N^{-†})` given an invertible `N` (D = 1): elementary factors
/// become CNOTs and the diagonal of units becomes one shift and one scale per qudit.
fn block_diagonal_word(n: &PolyMatrix) -> Result<Vec<Gate>> {
    let ring = n.ring();
    let (factors, diag) = gl_factor(n)?;
    let mut out: Vec<Gate> = factors.into_iter().map(|(i, j, a)| Gate::Cnot(i, j, a)).collect();
    for (k, u) in diag.iter().enumerate() {
        let (e, c) = u.terms()[0].clone();
        let mono = ring.monomial(e, 1);
        if !mono.is_one() {
            out.push(Gate::Shift(k, mono));
        }
        if c != 1 {
            out.push(Gate::Scale(k, c));
        }
    }
    Ok(out)
}

fn shift_word(s: &ShiftDescription) -> Vec<Gate> {
    let mut out = Vec::new();
    for (k, u) in s.monomials.iter().enumerate() {
        let (e, c) = u.terms()[0].clone();
        let mono = u.ring().monomial(e, 1);
        if !mono.is_one() {
            out.push(Gate::Shift(k, mono));
        }
        if c != 1 {
            out.push(Gate::Scale(k, c));
        }
    }
    out
}

/// Gate list for `Q ⊕ Q` (qudit-wise direct sum, layout `[X_a, X_b, Z_a, Z_b]`) of a
/// one-dimensional qubit QCA.
///
/// The diagonal `{(v, v)}` is a Lagrangian submodule preserved by `Q ⊕ Q` (this is where
/// characteristic 2 enters). The circuit `T₀ = H_b · ∏ CNOT(a_k ← b_k)` carries it onto the
/// `Z` coordinates, so `T₀ (Q ⊕ Q) T₀⁻¹ = [[N, 0], [N^{-†} S, N^{-†}]]` with `S` hermitian.
/// `N` is factored by Euclidean reduction and `S` by control-phase and CNOT pieces.
pub fn stack_square_decompose(q: &SymplecticQCA) -> Result<GateList> {
    let ring = q.ring();
    if ring.nvars() != 1 {
        return Err(Error::Unsupported(format!(
            "gate factorization is implemented for D = 1 only (got D = {})",
            ring.nvars()
        )));
    }
    if ring.p() != 2 {
        return Err(Error::Unsupported("stacked factorization is implemented for qubits (p = 2)".into()));
    }
    let nq = q.q();
    let doubled = q.direct_sum(q)?;
    let n = 2 * nq;
    if let Some(s) = is_shift(&doubled).filter(|s| s.perm.iter().enumerate().all(|(i, &j)| i == j)) {
        return checked(GateList::new(ring, n, shift_word(&s))?, &doubled);
    }

    let mut t0 = GateList::empty(ring, n);
    for k in 0..nq {
        t0.push(Gate::Hadamard(nq + k));
    }
    for k in 0..nq {
        t0.push(Gate::Cnot(k, nq + k, ring.one()));
    }
    let t0m = t0.product();
    let m = t0m.compose(&doubled)?.compose(&t0m.inverse())?;
    let [m11, m12, m21, _] = blocks(m.matrix());
    if !m12.is_zero() {
        return Err(Error::Verification("conjugated stack is not block lower-triangular".into()));
    }
    let s = m11.dagger().try_mul(&m21)?;

    let mut word = t0.inverse();
    word.extend(GateList::new(ring, n, block_diagonal_word(&m11)?)?);
    word.extend(GateList::new(ring, n, lower_word(&s))?);
    word.extend(t0);
    checked(word, &doubled)
}
