//! Translation-invariant Clifford QCAs as symplectic matrices over the Laurent ring.
//!
//! A QCA on `q` qudits per site is a `2q × 2q` matrix `Q` with `Q†λ_qQ = λ_q`; its inverse is
//! `−λ_q Q† λ_q`. Gates are the elementary symplectic transformations (Hadamard, CNOT,
//! control-phase, the `p > 2` scaling gate) and shifts. A gate list multiplies left to right.

mod decompose;

use std::fmt;

use crate::error::{Error, Result};
use crate::pauli::lambda_form;
use crate::polymat::{determinant, PolyMatrix};
use crate::ring::{LaurentPoly, Ring};

pub use decompose::{decompose_lower_block, decompose_upper_block, is_shift, stack_square_decompose, ShiftDescription};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticQCA {
    q: usize,
    m: PolyMatrix,
}

impl SymplecticQCA {
    /// Validates `Q†λQ = λ`.
    pub fn new(m: PolyMatrix) -> Result<SymplecticQCA> {
        if !m.is_square() || !m.rows().is_multiple_of(2) {
            return Err(Error::Shape(format!("a QCA needs an even square matrix, got {:?}", m.shape())));
        }
        let q = m.rows() / 2;
        let l = lambda_form(m.ring(), q);
        if &(&m.dagger() * &l) * &m != l {
            return Err(Error::Verification("matrix is not symplectic".into()));
        }
        Ok(SymplecticQCA { q, m })
    }

    pub(crate) fn new_unchecked(m: PolyMatrix) -> SymplecticQCA {
        debug_assert!(m.is_square() && m.rows().is_multiple_of(2));
        SymplecticQCA { q: m.rows() / 2, m }
    }

    pub fn identity(ring: Ring, q: usize) -> SymplecticQCA {
        SymplecticQCA { q, m: PolyMatrix::identity(ring, 2 * q) }
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> PolyMatrix {
        self.m
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn ring(&self) -> Ring {
        self.m.ring()
    }

    pub fn is_identity(&self) -> bool {
        self.m.is_identity()
    }

    /// `self · other`.
    pub fn compose(&self, other: &SymplecticQCA) -> Result<SymplecticQCA> {
        Ok(SymplecticQCA { q: self.q, m: self.m.try_mul(&other.m)? })
    }

    /// `−λ Q† λ`.
    pub fn inverse(&self) -> SymplecticQCA {
        let l = lambda_form(self.ring(), self.q);
        SymplecticQCA { q: self.q, m: (&(&l * &self.m.dagger()) * &l).neg() }
    }

    pub fn determinant(&self) -> LaurentPoly {
        determinant(&self.m).expect("square")
    }

    /// Qudit-wise direct sum: the result acts on `q₁ + q₂` qudits laid out as
    /// `[X₁, X₂, Z₁, Z₂]`, so its form is again `λ_{q₁+q₂}`.
    pub fn direct_sum(&self, other: &SymplecticQCA) -> Result<SymplecticQCA> {
        self.ring().check(&other.ring())?;
        let (q1, q2) = (self.q, other.q);
        let n = q1 + q2;
        // Global coordinate of local index `k` in a block with `qb` qudits and offset `off`.
        let place = |k: usize, qb: usize, off: usize| if k < qb { off + k } else { n + off + k - qb };
        let mut m = PolyMatrix::zeros(self.ring(), 2 * n, 2 * n);
        for i in 0..2 * q1 {
            for j in 0..2 * q1 {
                m[(place(i, q1, 0), place(j, q1, 0))] = self.m[(i, j)].clone();
            }
        }
        for i in 0..2 * q2 {
            for j in 0..2 * q2 {
                m[(place(i, q2, q1), place(j, q2, q1))] = other.m[(i, j)].clone();
            }
        }
        Ok(SymplecticQCA { q: n, m })
    }
}

/// An elementary symplectic generator or a shift. Qudit indices are 0-based here and
/// 1-based in the text format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gate {
    Hadamard(usize),
    /// `E_{i,j}(a) E_{j+q,i+q}(−ā)`.
    Cnot(usize, usize, LaurentPoly),
    /// `E_{i+q,i}(f)` with `f` hermitian.
    Cphase(usize, LaurentPoly),
    /// `Z ↦ Z^a` type gate: `diag(a)` on `X_i`, `diag(a⁻¹)` on `Z_i`.
    Scale(usize, u32),
    /// Translation of qudit `i` by a monomial with coefficient 1.
    Shift(usize, LaurentPoly),
}

fn elementary(ring: Ring, n: usize, i: usize, j: usize, a: &LaurentPoly) -> PolyMatrix {
    let mut m = PolyMatrix::identity(ring, n);
    m[(i, j)] = &m[(i, j)] + a;
    m
}

impl Gate {
    fn check(&self, ring: Ring, q: usize) -> Result<()> {
        let idx_ok = |i: &usize| *i < q;
        match self {
            Gate::Hadamard(i) if idx_ok(i) => Ok(()),
            Gate::Cnot(i, j, a) if idx_ok(i) && idx_ok(j) => {
                ring.check(&a.ring())?;
                if i == j {
                    Err(Error::Malformed(format!("CNOT needs distinct qudits, got {i} twice")))
                } else {
                    Ok(())
                }
            }
            Gate::Cphase(i, f) if idx_ok(i) => {
                ring.check(&f.ring())?;
                if f.involute() != *f {
                    Err(Error::Malformed(format!("control-phase parameter {f} is not hermitian")))
                } else {
                    Ok(())
                }
            }
            Gate::Scale(i, a) if idx_ok(i) => {
                if *a % ring.p() == 0 {
                    Err(Error::Malformed("scale factor must be nonzero".into()))
                } else {
                    Ok(())
                }
            }
            Gate::Shift(i, m) if idx_ok(i) => {
                ring.check(&m.ring())?;
                if m.is_monomial() && m.terms()[0].1 == 1 {
                    Ok(())
                } else {
                    Err(Error::Malformed(format!("shift parameter {m} is not a monic monomial")))
                }
            }
            _ => Err(Error::Malformed(format!("gate {self} addresses a qudit beyond q = {q}"))),
        }
    }

    /// The `2q × 2q` symplectic matrix of this gate.
    pub fn matrix(&self, ring: Ring, q: usize) -> Result<SymplecticQCA> {
        self.check(ring, q)?;
        let n = 2 * q;
        let one = ring.one();
        let m = match self {
            Gate::Hadamard(i) => {
                let e1 = elementary(ring, n, *i, i + q, &one.neg());
                let e2 = elementary(ring, n, i + q, *i, &one);
                &(&e1 * &e2) * &e1
            }
            Gate::Cnot(i, j, a) => &elementary(ring, n, *i, *j, a) * &elementary(ring, n, j + q, i + q, &a.involute().neg()),
            Gate::Cphase(i, f) => elementary(ring, n, i + q, *i, f),
            Gate::Scale(i, a) => {
                let mut m = PolyMatrix::identity(ring, n);
                m[(*i, *i)] = ring.constant(*a as i64);
                m[(i + q, i + q)] = ring.constant(ring.inv_c(ring.reduce(*a as i64)) as i64);
                m
            }
            Gate::Shift(i, mono) => {
                let mut m = PolyMatrix::identity(ring, n);
                m[(*i, *i)] = mono.clone();
                m[(i + q, i + q)] = mono.clone();
                m
            }
        };
        Ok(SymplecticQCA::new_unchecked(m))
    }

    /// A gate word for the inverse of this gate.
    pub fn inverse_word(&self, p: u32) -> Vec<Gate> {
        match self {
            Gate::Hadamard(i) if p == 2 => vec![Gate::Hadamard(*i)],
            Gate::Hadamard(i) => vec![Gate::Hadamard(*i); 3],
            Gate::Cnot(i, j, a) => vec![Gate::Cnot(*i, *j, a.neg())],
            Gate::Cphase(i, f) => vec![Gate::Cphase(*i, f.neg())],
            Gate::Scale(i, a) => {
                let inv = (1..p).find(|c| (c * (a % p)) % p == 1).expect("nonzero scale");
                vec![Gate::Scale(*i, inv)]
            }
            Gate::Shift(i, m) => vec![Gate::Shift(*i, m.monomial_inverse().expect("monomial"))],
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Hadamard(i) => write!(f, "H {}", i + 1),
            Gate::Cnot(i, j, a) => write!(f, "CNOT {} {} {}", i + 1, j + 1, a),
            Gate::Cphase(i, g) => write!(f, "CPHASE {} {}", i + 1, g),
            Gate::Scale(i, a) => write!(f, "SCALE {} {}", i + 1, a),
            Gate::Shift(i, m) => write!(f, "SHIFT {} {}", i + 1, m),
        }
    }
}

/// Ordered gate word; its value is the left-to-right product of the gate matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateList {
    ring: Ring,
    q: usize,
    gates: Vec<Gate>,
}

impl GateList {
    pub fn new(ring: Ring, q: usize, gates: Vec<Gate>) -> Result<GateList> {
        for g in &gates {
            g.check(ring, q)?;
        }
        Ok(GateList { ring, q, gates })
    }

    pub fn empty(ring: Ring, q: usize) -> GateList {
        GateList { ring, q, gates: Vec::new() }
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn shift_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Shift(..))).count()
    }

    pub fn push(&mut self, g: Gate) {
        self.gates.push(g);
    }

    pub fn extend(&mut self, other: GateList) {
        self.gates.extend(other.gates);
    }

    /// Left-to-right product of the gate matrices.
    pub fn product(&self) -> SymplecticQCA {
        let mut acc = PolyMatrix::identity(self.ring, 2 * self.q);
        for g in &self.gates {
            acc = &acc * g.matrix(self.ring, self.q).expect("gates validated on construction").matrix();
        }
        SymplecticQCA::new_unchecked(acc)
    }

    /// Gate word of the inverse product.
    pub fn inverse(&self) -> GateList {
        let gates = self.gates.iter().rev().flat_map(|g| g.inverse_word(self.ring.p())).collect();
        GateList { ring: self.ring, q: self.q, gates }
    }

    /// Parses one gate per line, in the `Display` format; blank lines and `#` comments are skipped.
    pub fn parse(ring: Ring, q: usize, text: &str) -> Result<GateList> {
        let mut gates = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |what: &str| Error::Parse(format!("line {}: {what}: '{line}'", lineno + 1));
            let mut parts = line.splitn(2, char::is_whitespace);
            let name = parts.next().unwrap_or_default();
            let rest = parts.next().unwrap_or_default().trim();
            let index = |s: &str| -> Result<usize> {
                let v: usize = s.parse().map_err(|_| bad("bad qudit index"))?;
                v.checked_sub(1).ok_or_else(|| bad("qudit indices start at 1"))
            };
            let mut toks = rest.splitn(2, char::is_whitespace);
            let first = toks.next().unwrap_or_default();
            let tail = toks.next().unwrap_or_default().trim();
            let gate = match name {
                "H" => Gate::Hadamard(index(rest)?),
                "CNOT" => {
                    let mut t = tail.splitn(2, char::is_whitespace);
                    let j = index(t.next().unwrap_or_default())?;
                    let a = ring.parse(t.next().unwrap_or_default())?;
                    Gate::Cnot(index(first)?, j, a)
                }
                "CPHASE" => Gate::Cphase(index(first)?, ring.parse(tail)?),
                "SCALE" => Gate::Scale(index(first)?, tail.parse().map_err(|_| bad("bad scale factor"))?),
                "SHIFT" => Gate::Shift(index(first)?, ring.parse(tail)?),
                _ => return Err(bad("unknown gate")),
            };
            gates.push(gate);
        }
        GateList::new(ring, q, gates)
    }
}

impl fmt::Display for GateList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}
