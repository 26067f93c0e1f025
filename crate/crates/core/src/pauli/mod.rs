//! Stabilizer maps on the Pauli module `R^{2q}`: commutativity and exactness certificates,
//! separators, flippers and the disentangling QCA built from them.
//!
//! Rows `0..q` of a stabilizer map carry X exponents and rows `q..2q` Z exponents. Two Pauli
//! operators `a, b` commute on every translate iff `a†λb = 0`, with `λ = [[0, I], [−I, 0]]`.

mod separator;

use std::fmt;
use std::str::FromStr;

use crate::clifford::SymplecticQCA;
use crate::error::{Error, Result};
use crate::polymat::{determinantal_ideal, kernel_basis, matrix_rank, solve_linear, ColumnModule, PolyMatrix};
use crate::ring::{Height, LaurentPoly, Ring};

pub use separator::{build_separator, candidate_checks, trim_redundant_generators, SeparatorCertificate};

/// The form `[[0, I_q], [−I_q, 0]]`.
pub fn lambda_form(ring: Ring, q: usize) -> PolyMatrix {
    PolyMatrix::from_fn(ring, 2 * q, 2 * q, |i, j| {
        if j == i + q {
            ring.one()
        } else if i == j + q {
            ring.one().neg()
        } else {
            ring.zero()
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exactness {
    /// `rank σ = q` and `I_q(σ) = R`, which suffice for `ker σ†λ = im σ`.
    Certified,
    /// `rank σ ≠ q` or `height I_q(σ) < 2`; exactness is impossible.
    NecessaryFailed,
    /// Necessary conditions hold but the sufficient ones do not.
    Unknown,
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Exactness::Certified => "certified",
            Exactness::NecessaryFailed => "necessary-failed",
            Exactness::Unknown => "unknown",
        })
    }
}

/// A `2q × t` stabilizer map with the results of the checks run on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerMap {
    sigma: PolyMatrix,
    commuting_verified: bool,
    exactness: Option<Exactness>,
}

impl StabilizerMap {
    pub fn new(sigma: PolyMatrix) -> Result<StabilizerMap> {
        if sigma.rows() == 0 || !sigma.rows().is_multiple_of(2) {
            return Err(Error::Shape(format!("a stabilizer map needs 2q rows, got {}", sigma.rows())));
        }
        Ok(StabilizerMap { sigma, commuting_verified: false, exactness: None })
    }

    pub fn sigma(&self) -> &PolyMatrix {
        &self.sigma
    }

    pub fn ring(&self) -> Ring {
        self.sigma.ring()
    }

    pub fn q(&self) -> usize {
        self.sigma.rows() / 2
    }

    pub fn t(&self) -> usize {
        self.sigma.cols()
    }

    pub fn lambda(&self) -> PolyMatrix {
        lambda_form(self.ring(), self.q())
    }

    pub fn commuting_verified(&self) -> bool {
        self.commuting_verified
    }

    pub fn exactness(&self) -> Option<Exactness> {
        self.exactness
    }

    /// `σ†λσ`, whose vanishing is commutativity of all terms.
    pub fn commutation_matrix(&self) -> PolyMatrix {
        &(&self.sigma.dagger() * &self.lambda()) * &self.sigma
    }

    /// True iff `σ†λσ = 0`; records the result.
    pub fn check_commuting(&mut self) -> bool {
        self.commuting_verified = self.commutation_matrix().is_zero();
        self.commuting_verified
    }

    /// Classifies exactness of `R^t → R^{2q} → R^t` by the rank and `I_q` criteria.
    pub fn check_exactness(&mut self) -> Result<Exactness> {
        if !self.commuting_verified && !self.check_commuting() {
            return Err(Error::Precondition("exactness needs a commuting stabilizer map".into()));
        }
        let q = self.q();
        let status = if matrix_rank(&self.sigma) != q {
            Exactness::NecessaryFailed
        } else {
            let iq = determinantal_ideal(&self.sigma, q)?;
            if iq.is_unit()? {
                Exactness::Certified
            } else if matches!(iq.height()?, Height::Finite(h) if h < 2) {
                Exactness::NecessaryFailed
            } else {
                Exactness::Unknown
            }
        };
        self.exactness = Some(status);
        Ok(status)
    }

    /// Decides `ker σ†λ = im σ` directly by mutual module membership.
    pub fn exact_by_membership(&self) -> Result<bool> {
        let dual = &self.sigma.dagger() * &self.lambda();
        if !(&dual * &self.sigma).is_zero() {
            return Ok(false);
        }
        let kernel = kernel_basis(&dual)?;
        ColumnModule::new(&self.sigma)?.contains_columns(&kernel)
    }
}

impl fmt::Display for StabilizerMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "q={} t={}", self.q(), self.t())?;
        write!(f, "{}", self.sigma)
    }
}

/// The matrix text format preceded by a `q=<int> t=<int>` line.
impl FromStr for StabilizerMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<StabilizerMap> {
        let mut lines = s.lines().skip_while(|l| l.trim().is_empty() || l.trim_start().starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Malformed("empty stabilizer map file".into()))?;
        let field = |key: &str| -> Result<usize> {
            header
                .split_whitespace()
                .find_map(|t| t.strip_prefix(key).and_then(|v| v.strip_prefix('=')))
                .ok_or_else(|| Error::Malformed(format!("stabilizer header lacks '{key}='")))?
                .parse()
                .map_err(|_| Error::Malformed(format!("stabilizer header field '{key}' is not an integer")))
        };
        let (q, t) = (field("q")?, field("t")?);
        let rest: Vec<&str> = lines.collect();
        let sigma: PolyMatrix = rest.join("\n").parse()?;
        if sigma.shape() != (2 * q, t) {
            return Err(Error::Malformed(format!("header says 2q × t = {} × {t}, matrix is {:?}", 2 * q, sigma.shape())));
        }
        StabilizerMap::new(sigma)
    }
}

/// Flippers `F` with `F†λσ = I`: column `a` anticommutes with term `a` and commutes with
/// every other term and translate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipperSet {
    pub f: PolyMatrix,
}

/// Solves `(σ†λ)F = −I`, i.e. `F†λσ = I`, column by column.
pub fn solve_flipper(sep: &SeparatorCertificate) -> Result<FlipperSet> {
    let s = &sep.sigma_sep;
    let dual = &s.sigma().dagger() * &s.lambda();
    let rhs = PolyMatrix::identity(s.ring(), s.t()).neg();
    match solve_linear(&dual, &rhs)? {
        Some(f) => Ok(FlipperSet { f }),
        None => Err(Error::NotFound("σ†λ is not surjective; the separator certificate is inconsistent".into())),
    }
}

/// `Coe(Σ_k conj(v_{X,k}) v_{Z,k})` for each column; zero means an even number of `Y` factors.
fn y_parities(m: &PolyMatrix) -> Vec<u32> {
    let q = m.rows() / 2;
    (0..m.cols())
        .map(|j| {
            let mut acc = m.ring().zero();
            for k in 0..q {
                acc = &acc + &(&m[(k, j)].involute() * &m[(k + q, j)]);
            }
            acc.constant_coeff()
        })
        .collect()
}

/// True iff every column, read as a qubit Pauli operator, has an even number of `Y` factors.
pub fn reality_check(m: &PolyMatrix) -> Result<bool> {
    if m.ring().p() != 2 {
        return Err(Error::Unsupported("reality is defined for qubits (p = 2)".into()));
    }
    if !m.rows().is_multiple_of(2) {
        return Err(Error::Shape(format!("Pauli columns need an even row count, got {}", m.rows())));
    }
    Ok(y_parities(m).iter().all(|&c| c == 0))
}

/// `E` with `E − E† = M` for anti-hermitian `M`: the strict upper triangle of `M` and, on the
/// diagonal, the terms of `M_ii` with lexicographically positive exponent.
pub fn hermitian_split(m: &PolyMatrix) -> Result<PolyMatrix> {
    if !m.is_square() {
        return Err(Error::Shape(format!("splitting needs a square matrix, got {:?}", m.shape())));
    }
    let ring = m.ring();
    let e = PolyMatrix::from_fn(ring, m.rows(), m.cols(), |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => m[(i, j)].clone(),
        std::cmp::Ordering::Equal => m[(i, i)].positive_half(),
        std::cmp::Ordering::Greater => ring.zero(),
    });
    if e.try_sub(&e.dagger())? != *m {
        return Err(Error::Precondition("matrix is not anti-hermitian with a splittable diagonal".into()));
    }
    Ok(e)
}

/// `E` with `E − E† = F†λF`. The strict upper triangle is copied and each diagonal entry
/// keeps the terms with lexicographically positive exponent. In real mode (qubits only)
/// constants are added to the diagonal so that `T = F − σE` has an even number of `Y`s
/// per column, which needs a real `σ`.
pub fn build_e(flip: &FlipperSet, sep: &SeparatorCertificate, real_mode: bool) -> Result<PolyMatrix> {
    let s = &sep.sigma_sep;
    let ring = s.ring();
    if real_mode && ring.p() != 2 {
        return Err(Error::Unsupported("real mode needs p = 2".into()));
    }
    let f = &flip.f;
    let m = &(&f.dagger() * &s.lambda()) * f;
    let mut e = hermitian_split(&m)?;
    if real_mode {
        if !reality_check(s.sigma())? {
            return Err(Error::Precondition("real mode needs a real separator".into()));
        }
        let tm = f.try_sub(&s.sigma().try_mul(&e)?)?;
        // Adding 1 to E_ii changes T's column i by σ_i, which toggles its Y-parity
        // because Coe(T_i†λσ_i) = 1 and σ_i is real.
        for (i, c) in y_parities(&tm).into_iter().enumerate() {
            if c != 0 {
                e[(i, i)] = &e[(i, i)] + &ring.one();
            }
        }
    }
    Ok(e)
}

/// Assembles `Q = (T | σ_sep)` with `T = F − σ_sep E` and verifies `Q†λQ = λ` and
/// `Q⁻¹σ_sep = (0; I)`; in real mode also the reality of `Q` and `Q⁻¹`.
pub fn build_disentangler(sep: &SeparatorCertificate, flip: &FlipperSet, real_mode: bool) -> Result<SymplecticQCA> {
    let s = &sep.sigma_sep;
    let e = build_e(flip, sep, real_mode)?;
    let t = flip.f.try_sub(&s.sigma().try_mul(&e)?)?;
    let q = SymplecticQCA::new(t.hstack(s.sigma())?)?;
    let trivial = PolyMatrix::zeros(s.ring(), s.q(), s.q()).vstack(&PolyMatrix::identity(s.ring(), s.q()))?;
    if q.inverse().matrix().try_mul(s.sigma())? != trivial {
        return Err(Error::Verification("Q⁻¹ does not send the separator to the trivial one".into()));
    }
    if real_mode && !(reality_check(q.matrix())? && reality_check(q.inverse().matrix())?) {
        return Err(Error::Verification("real-mode disentangler is not real".into()));
    }
    Ok(q)
}

/// Whether every single term can be flipped alone: `σ†λ` maps onto `R^t`.
pub fn no_charge_flippability(s: &StabilizerMap) -> Result<bool> {
    if kernel_basis(s.sigma())?.cols() != 0 {
        return Err(Error::Precondition("no-charge flippability needs a locally nonredundant map".into()));
    }
    let dual = &s.sigma().dagger() * &s.lambda();
    let rhs = PolyMatrix::identity(s.ring(), s.t()).neg();
    Ok(solve_linear(&dual, &rhs)?.is_some())
}

/// `Σ_k conj(a_k) b_k` for two Pauli columns; handy for scalar commutation checks.
pub fn pairing(a: &[LaurentPoly], b: &[LaurentPoly]) -> LaurentPoly {
    let q = a.len() / 2;
    let ring = a[0].ring();
    let mut acc = ring.zero();
    for k in 0..q {
        acc = &acc + &(&a[k].involute() * &b[k + q]);
        acc = &acc - &(&a[k + q].involute() * &b[k]);
    }
    acc
}
