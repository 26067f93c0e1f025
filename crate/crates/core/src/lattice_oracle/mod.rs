//! Brute-force checks on finite periodic lattices with exact phase tracking.
//!
//! A stabilizer map is instantiated on the torus `Z_{L_1} × … × Z_{L_D}`: column `j` anchored
//! at cell `v` puts `X_k^c` (resp. `Z_k^c`) on qubit `k` of cell `v + e` for every term
//! `c·x^e` of row `k` (resp. `q + k`). With this convention the commutation phase of two
//! instances equals the coefficient of `a†λb` at the difference of their anchors.

mod fp;
mod majorana;
mod matching;
mod strings;

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polymat::PolyMatrix;

pub use majorana::{majorana_image, majorana_rep_check, MajoranaOp, MajoranaSystem};
pub use matching::{hall_matching, HallOutcome};
pub use strings::{
    charge_types, crossing_strings, derive_string_operator, mutual_braiding, t_junction, topological_spin, ChargeType,
};

/// Largest number of qudits an instance may have.
pub const MAX_SITES: usize = 20_000;

/// A periodic lattice with `q` qudits of dimension `p` per cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusInstance {
    l: Vec<usize>,
    p: u32,
    q: usize,
}

impl TorusInstance {
    pub fn new(p: u32, q: usize, l: Vec<usize>) -> Result<TorusInstance> {
        if l.iter().any(|&li| li < 2) {
            return Err(Error::Malformed(format!("torus sizes must be at least 2, got {l:?}")));
        }
        let cells = l.iter().try_fold(1usize, |acc, &li| acc.checked_mul(li));
        match cells.and_then(|c| c.checked_mul(q)) {
            Some(n) if n <= MAX_SITES => Ok(TorusInstance { l, p, q }),
            _ => Err(Error::Unsupported(format!("torus {l:?} with {q} qudits per cell exceeds {MAX_SITES} qudits"))),
        }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.l
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn cells(&self) -> usize {
        self.l.iter().product()
    }

    /// Number of qudits `n = q·∏L_i`.
    pub fn n(&self) -> usize {
        self.q * self.cells()
    }

    /// Index of a cell given by arbitrary integer coordinates; the last coordinate runs fastest.
    pub fn cell(&self, v: &[i64]) -> usize {
        v.iter().zip(&self.l).fold(0, |acc, (&vi, &li)| acc * li + vi.rem_euclid(li as i64) as usize)
    }

    pub fn coords(&self, mut cell: usize) -> Vec<i64> {
        let mut v = vec![0; self.l.len()];
        for k in (0..self.l.len()).rev() {
            v[k] = (cell % self.l[k]) as i64;
            cell /= self.l[k];
        }
        v
    }

    pub fn site(&self, cell: usize, k: usize) -> usize {
        cell * self.q + k
    }

    /// Cell holding a qudit.
    pub fn cell_of(&self, site: usize) -> usize {
        site / self.q
    }

    /// `cell + offset`.
    pub fn shift(&self, cell: usize, offset: &[i64]) -> usize {
        let v: Vec<i64> = self.coords(cell).iter().zip(offset).map(|(a, b)| a + b).collect();
        self.cell(&v)
    }

    /// Chebyshev distance on the torus.
    pub fn distance(&self, a: usize, b: usize) -> usize {
        let (va, vb) = (self.coords(a), self.coords(b));
        va.iter()
            .zip(&vb)
            .zip(&self.l)
            .map(|((x, y), &li)| {
                let d = (x - y).rem_euclid(li as i64) as usize;
                d.min(li - d)
            })
            .max()
            .unwrap_or(0)
    }

    /// Cells within Chebyshev distance `r` of `cell`, without repetition.
    pub fn ball(&self, cell: usize, r: usize) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.cells()).filter(|&c| self.distance(c, cell) <= r).collect();
        out.sort_unstable();
        out
    }
}

/// `i^phase · X^x Z^z` for `p = 2`, `ω^phase · X^x Z^z` with `ω = e^{2πi/p}` for odd `p`, in
/// X-before-Z normal form. Phases are reduced mod 4 and mod `p` respectively.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusPauli {
    p: u32,
    x: Vec<u32>,
    z: Vec<u32>,
    phase: u32,
}

fn dot(a: &[u32], b: &[u32], p: u32) -> u32 {
    let mut acc = 0u64;
    for (&u, &v) in a.iter().zip(b) {
        if u != 0 && v != 0 {
            acc += u as u64 * v as u64;
        }
    }
    (acc % p as u64) as u32
}

impl TorusPauli {
    pub fn identity(p: u32, n: usize) -> TorusPauli {
        TorusPauli { p, x: vec![0; n], z: vec![0; n], phase: 0 }
    }

    /// Raw constructor; exponents are reduced mod `p` and the phase mod its modulus.
    pub fn from_parts(p: u32, x: Vec<u32>, z: Vec<u32>, phase: u32) -> Result<TorusPauli> {
        if x.len() != z.len() {
            return Err(Error::Shape(format!("X part has {} qudits, Z part {}", x.len(), z.len())));
        }
        let m = if p == 2 { 4 } else { p };
        Ok(TorusPauli { p, x: x.into_iter().map(|c| c % p).collect(), z: z.into_iter().map(|c| c % p).collect(), phase: phase % m })
    }

    /// The Hermitian representative for qubits: one factor of `i` per site carrying both `X`
    /// and `Z`, so every site holds `I, X, Y` or `Z`. For odd `p` the Weyl operator
    /// `ω^{−x·z/2} X^x Z^z`, which has order `p` and `1` in its spectrum.
    pub fn hermitian(p: u32, x: Vec<u32>, z: Vec<u32>) -> Result<TorusPauli> {
        let mut t = TorusPauli::from_parts(p, x, z, 0)?;
        if p == 2 {
            t.phase = (t.x.iter().zip(&t.z).filter(|(&a, &b)| a == 1 && b == 1).count() % 4) as u32;
        } else {
            let half = p.div_ceil(2);
            t.phase = (p - (dot(&t.x, &t.z, p) as u64 * half as u64 % p as u64) as u32) % p;
        }
        Ok(t)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[u32] {
        &self.x
    }

    pub fn z(&self) -> &[u32] {
        &self.z
    }

    pub fn phase(&self) -> u32 {
        self.phase
    }

    fn modulus(&self) -> u32 {
        if self.p == 2 {
            4
        } else {
            self.p
        }
    }

    /// Phase units per power of `ω`: 2 for qubits (`ω = −1 = i²`), else 1.
    fn omega(&self) -> u32 {
        if self.p == 2 {
            2
        } else {
            1
        }
    }

    /// Same operator times `ω^k` (`k = 1` negates a qubit operator).
    pub fn times_omega(&self, k: u32) -> TorusPauli {
        let mut t = self.clone();
        t.phase = (t.phase + k * self.omega()) % self.modulus();
        t
    }

    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.is_scalar()
    }

    /// True when the operator is a multiple of the identity.
    pub fn is_scalar(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&c| c == 0)
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).filter(|(&a, &b)| a != 0 || b != 0).count()
    }

    /// Sites acted on nontrivially.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&s| self.x[s] != 0 || self.z[s] != 0).collect()
    }

    fn check(&self, other: &TorusPauli) -> Result<()> {
        if self.p != other.p || self.n() != other.n() {
            return Err(Error::Context(format!(
                "Pauli operators on {} qudits of dimension {} and {} of dimension {}",
                self.n(),
                self.p,
                other.n(),
                other.p
            )));
        }
        Ok(())
    }

    /// `self · other` with its phase: moving `Z^z` past `X^{x'}` costs `ω^{−z·x'}`.
    pub fn try_mul(&self, other: &TorusPauli) -> Result<TorusPauli> {
        self.check(other)?;
        let p = self.p;
        let swap = (p - dot(&self.z, &other.x, p)) % p;
        let phase = (self.phase + other.phase + swap * self.omega()) % self.modulus();
        let add = |a: &[u32], b: &[u32]| a.iter().zip(b).map(|(&u, &v)| (u + v) % p).collect();
        Ok(TorusPauli { p, x: add(&self.x, &other.x), z: add(&self.z, &other.z), phase })
    }

    pub fn pow(&self, k: u32) -> TorusPauli {
        let mut acc = TorusPauli::identity(self.p, self.n());
        for _ in 0..k {
            acc = acc.try_mul(self).expect("same shape");
        }
        acc
    }

    /// `(c X^x Z^z)† = c̄ Z^{−z} X^{−x} = c̄ ω^{−x·z} X^{−x} Z^{−z}`.
    pub fn dagger(&self) -> TorusPauli {
        let p = self.p;
        let m = self.modulus();
        let reorder = (p - dot(&self.x, &self.z, p)) % p;
        let phase = (m - self.phase + reorder * self.omega()) % m;
        let neg = |a: &[u32]| a.iter().map(|&u| (p - u) % p).collect();
        TorusPauli { p, x: neg(&self.x), z: neg(&self.z), phase }
    }

    /// `k` with `self · other = ω^k · other · self`, i.e. `x·z' − z·x' mod p`.
    pub fn commutation(&self, other: &TorusPauli) -> u32 {
        let p = self.p;
        (dot(&self.x, &other.z, p) + p - dot(&self.z, &other.x, p)) % p
    }

    pub fn commutes(&self, other: &TorusPauli) -> bool {
        self.commutation(other) == 0
    }

    /// Symplectic vector `(x | z)`.
    pub fn symplectic(&self) -> Vec<u32> {
        let mut v = self.x.clone();
        v.extend_from_slice(&self.z);
        v
    }
}

impl fmt::Display for TorusPauli {
    /// Qubits print as `i^k` followed by the sparse list `X3 Y5 Z7`; qudits as `ω^k` and
    /// `X3^a Z3^b` factors.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = if self.p == 2 { "i" } else { "ω" };
        write!(f, "{unit}^{}", self.phase)?;
        for s in self.support() {
            let (a, b) = (self.x[s], self.z[s]);
            if self.p == 2 {
                let c = match (a, b) {
                    (1, 0) => 'X',
                    (0, 1) => 'Z',
                    _ => 'Y',
                };
                write!(f, " {c}{s}")?;
            } else {
                if a != 0 {
                    write!(f, " X{s}^{a}")?;
                }
                if b != 0 {
                    write!(f, " Z{s}^{b}")?;
                }
            }
        }
        Ok(())
    }
}

/// Instances of every column of a stabilizer map, column-major: index `col·cells + cell`.
#[derive(Clone, Debug)]
pub struct Instantiated {
    pub torus: TorusInstance,
    pub columns: usize,
    pub ops: Vec<TorusPauli>,
}

impl Instantiated {
    pub fn get(&self, col: usize, cell: usize) -> &TorusPauli {
        &self.ops[col * self.torus.cells() + cell]
    }

    /// `(column, anchor cell)` of an index into `ops`.
    pub fn anchor(&self, idx: usize) -> (usize, usize) {
        (idx / self.torus.cells(), idx % self.torus.cells())
    }

    fn label(&self, idx: usize) -> String {
        let (c, v) = self.anchor(idx);
        format!("column {} at cell {:?}", c + 1, self.torus.coords(v))
    }
}

/// How the phase of an instantiated column is fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseConvention {
    /// [`TorusPauli::hermitian`]: a qubit site with both factors holds `Y`.
    Hermitian,
    /// Phase 0 in normal form: the product of the X part and then the Z part.
    XThenZ,
}

/// One Hermitian operator per column per translate.
pub fn instantiate(m: &PolyMatrix, l: &[usize]) -> Result<Instantiated> {
    instantiate_with(m, l, PhaseConvention::Hermitian)
}

pub fn instantiate_with(m: &PolyMatrix, l: &[usize], convention: PhaseConvention) -> Result<Instantiated> {
    let ring = m.ring();
    if !m.rows().is_multiple_of(2) {
        return Err(Error::Shape(format!("Pauli columns need an even row count, got {}", m.rows())));
    }
    if l.len() != ring.nvars() {
        return Err(Error::Shape(format!("{} torus sizes for {} variables", l.len(), ring.nvars())));
    }
    let q = m.rows() / 2;
    let torus = TorusInstance::new(ring.p(), q, l.to_vec())?;
    let (cells, n, p) = (torus.cells(), torus.n(), ring.p());
    let ops = (0..m.cols() * cells)
        .into_par_iter()
        .map(|idx| {
            let (col, cell) = (idx / cells, idx % cells);
            let base = torus.coords(cell);
            let (mut x, mut z) = (vec![0u32; n], vec![0u32; n]);
            for row in 0..2 * q {
                let target = if row < q { &mut x } else { &mut z };
                for (e, c) in m[(row, col)].terms() {
                    let v: Vec<i64> = base.iter().zip(e.iter()).map(|(&b, &ei)| b + ei as i64).collect();
                    let s = torus.site(torus.cell(&v), row % q);
                    target[s] = (target[s] + c) % p;
                }
            }
            match convention {
                PhaseConvention::Hermitian => TorusPauli::hermitian(p, x, z),
                PhaseConvention::XThenZ => TorusPauli::from_parts(p, x, z, 0),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Instantiated { torus, columns: m.cols(), ops })
}

/// First non-commuting pair `(i, j)` with `i < j`, scanning rows in parallel.
pub fn first_noncommuting_pair(ops: &[TorusPauli]) -> Option<(usize, usize)> {
    (0..ops.len()).into_par_iter().find_map_first(|i| (i + 1..ops.len()).find(|&j| !ops[i].commutes(&ops[j])).map(|j| (i, j)))
}

/// Rank of a commuting generator set and the resulting ground-space dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Degeneracy {
    pub p: u32,
    pub qudits: usize,
    pub rank: usize,
}

impl Degeneracy {
    /// `log_p` of the degeneracy, `n − rank`.
    pub fn log_p(&self) -> usize {
        self.qudits - self.rank
    }

    /// `p^{n − rank}` when it fits.
    pub fn value(&self) -> Option<u128> {
        (self.p as u128).checked_pow(self.log_p() as u32)
    }
}

fn check_same_space(gens: &[TorusPauli]) -> Result<()> {
    if let Some(g) = gens.first() {
        for h in gens {
            g.check(h)?;
        }
    }
    Ok(())
}

/// Rank of the symplectic vectors over `F_p` and `p^{n − rank}`. The count is the ground-space
/// dimension only if no nontrivial scalar lies in the group (see [`scalar_in_group`]).
pub fn f2_rank_and_degeneracy(gens: &[TorusPauli]) -> Result<Degeneracy> {
    let Some(first) = gens.first() else {
        return Err(Error::Precondition("no generators".into()));
    };
    check_same_space(gens)?;
    if let Some((i, j)) = first_noncommuting_pair(gens) {
        return Err(Error::Precondition(format!("generators {i} and {j} do not commute")));
    }
    let rows: Vec<Vec<u32>> = gens.iter().map(TorusPauli::symplectic).collect();
    Ok(Degeneracy { p: first.p, qudits: first.n(), rank: fp::rank(&rows, first.p) })
}

/// `Π g_i^{c_i}` in index order.
pub fn product(gens: &[TorusPauli], coeffs: &[u32]) -> Result<TorusPauli> {
    let Some(first) = gens.first() else {
        return Err(Error::Precondition("no generators".into()));
    };
    let mut acc = TorusPauli::identity(first.p, first.n());
    for (g, &c) in gens.iter().zip(coeffs) {
        if c != 0 {
            acc = acc.try_mul(&g.pow(c))?;
        }
    }
    Ok(acc)
}

/// A relation among commuting generators whose product is a nontrivial scalar (for qubits,
/// `−I`), as its coefficient vector. Every relation is tested, not only a chosen basis: the
/// phase of a product of commuting Hermitian generators is a character on the relation space,
/// so testing a basis suffices.
pub fn scalar_in_group(gens: &[TorusPauli]) -> Result<Option<Vec<u32>>> {
    let Some(first) = gens.first() else { return Ok(None) };
    check_same_space(gens)?;
    if let Some((i, j)) = first_noncommuting_pair(gens) {
        return Err(Error::Precondition(format!("generators {i} and {j} do not commute")));
    }
    let rows: Vec<Vec<u32>> = gens.iter().map(TorusPauli::symplectic).collect();
    for rel in fp::left_kernel(&rows, first.p) {
        let prod = product(gens, &rel)?;
        debug_assert!(prod.is_scalar());
        if !prod.is_identity() {
            return Ok(Some(rel));
        }
    }
    Ok(None)
}

/// For every column of `k` and every translate, the phase-tracked product of the instantiated
/// terms of `s` named by that relation is `+I`.
pub fn verify_relation_signs(s: &PolyMatrix, k: &PolyMatrix, l: &[usize]) -> crate::certificate::Outcome {
    if k.rows() != s.cols() {
        return Err(Error::Shape(format!("relations have {} rows for {} terms", k.rows(), s.cols())));
    }
    let inst = instantiate(s, l)?;
    verify_relation_signs_on(&inst, k)
}

/// [`verify_relation_signs`] on already instantiated (possibly modified) terms.
pub fn verify_relation_signs_on(inst: &Instantiated, k: &PolyMatrix) -> crate::certificate::Outcome {
    let torus = &inst.torus;
    let cells = torus.cells();
    let jobs: Vec<(usize, usize)> = (0..k.cols()).flat_map(|c| (0..cells).map(move |v| (c, v))).collect();
    let bad = jobs.par_iter().find_map_first(|&(c, v)| {
        let base = torus.coords(v);
        let mut acc = TorusPauli::identity(torus.p(), torus.n());
        for j in 0..k.rows() {
            for (e, coef) in k[(j, c)].terms() {
                let w: Vec<i64> = base.iter().zip(e.iter()).map(|(&b, &ei)| b + ei as i64).collect();
                acc = acc.try_mul(&inst.get(j, torus.cell(&w)).pow(*coef)).expect("same torus");
            }
        }
        (!acc.is_identity()).then_some((c, v, acc))
    });
    Ok(match bad {
        None => (true, format!("{} relation instances multiply to +I", jobs.len())),
        Some((c, v, acc)) if acc.is_scalar() => {
            (false, format!("relation {} at cell {:?} multiplies to phase {}", c + 1, torus.coords(v), acc))
        }
        Some((c, v, acc)) => (
            false,
            format!("relation {} at cell {:?} is not a relation: product acts on {} qudits", c + 1, torus.coords(v), acc.weight()),
        ),
    })
}

/// A separator instance has one-dimensional joint eigenspaces: its `t·cells` generators
/// commute, are independent over `F_p`, and number exactly `n`.
pub fn separator_onedim_check(sep: &PolyMatrix, l: &[usize]) -> crate::certificate::Outcome {
    let inst = instantiate(sep, l)?;
    if let Some((i, j)) = first_noncommuting_pair(&inst.ops) {
        return Ok((false, format!("{} and {} do not commute", inst.label(i), inst.label(j))));
    }
    let rows: Vec<Vec<u32>> = inst.ops.iter().map(TorusPauli::symplectic).collect();
    let rank = fp::rank(&rows, inst.torus.p());
    let (m, n) = (inst.ops.len(), inst.torus.n());
    Ok((rank == m && m == n, format!("{m} generators of rank {rank} on {n} qudits")))
}

/// Each instantiated flipper has a nonzero commutation phase with its own separator element
/// and commutes with every other one.
pub fn flipper_action_check(f: &PolyMatrix, sep: &PolyMatrix, l: &[usize]) -> crate::certificate::Outcome {
    if f.shape() != sep.shape() {
        return Err(Error::Shape(format!("flippers {:?} and separator {:?}", f.shape(), sep.shape())));
    }
    let fi = instantiate(f, l)?;
    let si = instantiate(sep, l)?;
    let bad = (0..fi.ops.len()).into_par_iter().find_map_first(|a| {
        (0..si.ops.len()).find_map(|b| {
            let c = fi.ops[a].commutation(&si.ops[b]);
            ((c != 0) != (a == b)).then_some((a, b, c))
        })
    });
    Ok(match bad {
        None => (true, format!("{} flippers each move exactly their own term", fi.ops.len())),
        Some((a, b, c)) => {
            (false, format!("flipper {} has phase {c} with term {}", fi.label(a), si.label(b)))
        }
    })
}
