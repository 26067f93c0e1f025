//! A Majorana representation of the commutant of the star-times-plaquette loops of one qubit
//! layer on a square-lattice torus, with two Majorana modes `γ_v, γ′_v` per vertex.
//!
//! The layer holds one qubit on the x-edge `v → v + x̂` and one on the y-edge `v → v + ŷ` of
//! every vertex `v`. The commutant is generated by
//!   `P(v) = Z` around the plaquette with lower-left corner `v`  ↦ `iγ′_v γ_v`,
//!   `U_x(v) = X(x-edge v) Z(y-edge v − ŷ)`                       ↦ `iγ′_v γ_{v−ŷ}`,
//!   `U_y(v) = X(y-edge v) Z(x-edge v − x̂)`                       ↦ `iγ_v γ′_{v−x̂}`.

use super::{fp, Instantiated, TorusInstance, TorusPauli};
use crate::certificate::Outcome;
use crate::error::{Error, Result};

/// `i^phase` times a product of distinct Majorana modes in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MajoranaOp {
    pub phase: u32,
    pub modes: Vec<usize>,
}

impl MajoranaOp {
    pub fn identity() -> MajoranaOp {
        MajoranaOp { phase: 0, modes: Vec::new() }
    }

    /// `i^phase · m_1 m_2 …` with the modes given in any order; repeated modes square to 1.
    pub fn new(phase: u32, modes: &[usize]) -> MajoranaOp {
        modes.iter().fold(MajoranaOp { phase: phase % 4, modes: Vec::new() }, |acc, &m| {
            acc.mul(&MajoranaOp { phase: 0, modes: vec![m] })
        })
    }

    /// Moving each mode of `other` left past the larger modes of `self` costs a sign.
    pub fn mul(&self, other: &MajoranaOp) -> MajoranaOp {
        let crossings: usize = other.modes.iter().map(|&b| self.modes.iter().filter(|&&a| a > b).count()).sum();
        let mut modes = Vec::with_capacity(self.modes.len() + other.modes.len());
        let (mut i, mut j) = (0, 0);
        while i < self.modes.len() || j < other.modes.len() {
            match (self.modes.get(i), other.modes.get(j)) {
                (Some(&a), Some(&b)) if a == b => {
                    i += 1;
                    j += 1;
                }
                (Some(&a), Some(&b)) if a < b => {
                    modes.push(a);
                    i += 1;
                }
                (Some(&a), None) => {
                    modes.push(a);
                    i += 1;
                }
                (_, Some(&b)) => {
                    modes.push(b);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        MajoranaOp { phase: (self.phase + other.phase + 2 * (crossings as u32 % 2)) % 4, modes }
    }

    /// True when `AB = BA`: the sign is `(−1)^{|A||B| + |A ∩ B|}`.
    pub fn commutes(&self, other: &MajoranaOp) -> bool {
        let shared = self.modes.iter().filter(|m| other.modes.binary_search(m).is_ok()).count();
        (self.modes.len() * other.modes.len() + shared).is_multiple_of(2)
    }

    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.modes.is_empty()
    }
}

/// Generators of the commutant on one layer of a planar qubit torus with their images.
#[derive(Clone, Debug)]
pub struct MajoranaSystem {
    pub torus: TorusInstance,
    /// Qubit indices within a cell of the layer's x-edge and y-edge qubits.
    pub layer: (usize, usize),
    pub generators: Vec<TorusPauli>,
    pub images: Vec<MajoranaOp>,
    /// `"P"`, `"U_x"` or `"U_y"` and the vertex of each generator.
    pub labels: Vec<(&'static str, usize)>,
}

impl MajoranaSystem {
    pub fn new(torus: TorusInstance, layer: (usize, usize)) -> Result<MajoranaSystem> {
        if torus.p() != 2 || torus.sizes().len() != 2 {
            return Err(Error::Unsupported("the Majorana representation needs a planar qubit torus".into()));
        }
        if layer.0 >= torus.q() || layer.1 >= torus.q() || layer.0 == layer.1 {
            return Err(Error::Malformed(format!("layer qubits {layer:?} with {} qubits per cell", torus.q())));
        }
        // Smaller tori make the radius-1 neighbourhoods wrap, where global relations leak in.
        if torus.sizes().iter().any(|&l| l < 4) {
            return Err(Error::Unsupported("the Majorana representation needs sizes of at least 4".into()));
        }
        let n = torus.n();
        let (xe, ye) = layer;
        let g = |v: usize| 2 * v;
        let gp = |v: usize| 2 * v + 1;
        let mut generators = Vec::new();
        let mut images = Vec::new();
        let mut labels = Vec::new();
        let pauli = |xs: &[usize], zs: &[usize]| {
            let (mut x, mut z) = (vec![0u32; n], vec![0u32; n]);
            for &s in xs {
                x[s] ^= 1;
            }
            for &s in zs {
                z[s] ^= 1;
            }
            TorusPauli::hermitian(2, x, z).expect("matching lengths")
        };
        for v in 0..torus.cells() {
            let right = torus.shift(v, &[1, 0]);
            let up = torus.shift(v, &[0, 1]);
            let left = torus.shift(v, &[-1, 0]);
            let down = torus.shift(v, &[0, -1]);
            generators.push(pauli(&[], &[torus.site(v, xe), torus.site(up, xe), torus.site(v, ye), torus.site(right, ye)]));
            images.push(MajoranaOp::new(1, &[gp(v), g(v)]));
            labels.push(("P", v));
            generators.push(pauli(&[torus.site(v, xe)], &[torus.site(down, ye)]));
            images.push(MajoranaOp::new(1, &[gp(v), g(down)]));
            labels.push(("U_x", v));
            generators.push(pauli(&[torus.site(v, ye)], &[torus.site(left, xe)]));
            images.push(MajoranaOp::new(1, &[g(v), gp(left)]));
            labels.push(("U_y", v));
        }
        Ok(MajoranaSystem { torus, layer, generators, images, labels })
    }

    fn label(&self, i: usize) -> String {
        let (kind, v) = self.labels[i];
        format!("{kind}{:?}", self.torus.coords(v))
    }

    /// Generators anchored within distance `r` of some cell of `cells`.
    fn near(&self, cells: &[usize], r: usize) -> Vec<usize> {
        (0..self.generators.len())
            .filter(|&i| cells.iter().any(|&c| self.torus.distance(self.labels[i].1, c) <= r))
            .collect()
    }

    /// Expresses `op` as a product of the generators in `pool` and maps it. Errors if `op` is
    /// not such a product.
    fn image_over(&self, op: &TorusPauli, pool: &[usize]) -> Result<MajoranaOp> {
        let width = 2 * self.torus.n();
        let cols: Vec<Vec<u32>> = pool.iter().map(|&i| self.generators[i].symplectic()).collect();
        let a: Vec<Vec<u32>> = (0..width).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        let coeffs = fp::solve(&a, &op.symplectic(), pool.len(), 2)
            .ok_or_else(|| Error::NotFound("operator is not generated by the nearby commutant generators".into()))?;
        let mut prod = TorusPauli::identity(2, self.torus.n());
        let mut img = MajoranaOp::identity();
        for (&i, &c) in pool.iter().zip(&coeffs) {
            if c == 1 {
                prod = prod.try_mul(&self.generators[i])?;
                img = img.mul(&self.images[i]);
            }
        }
        // prod = i^d · op, so op maps to i^{−d} · img.
        let d = (prod.phase() + 4 - op.phase()) % 4;
        Ok(MajoranaOp { phase: (img.phase + 4 - d) % 4, modes: img.modes })
    }
}

/// The image of a layer operator in the commutant of `loops`, via a decomposition into
/// generators near its support. Operators failing to commute with some loop are rejected.
pub fn majorana_image(sys: &MajoranaSystem, loops: &Instantiated, op: &TorusPauli) -> Result<MajoranaOp> {
    if let Some(i) = loops.ops.iter().position(|l| !l.commutes(op)) {
        return Err(Error::Precondition(format!("operator is not in the commutant: it fails to commute with {}", loops.label(i))));
    }
    let layer = [sys.layer.0, sys.layer.1];
    if op.support().iter().any(|&s| !layer.contains(&(s % sys.torus.q()))) {
        return Err(Error::Precondition("operator acts outside the layer".into()));
    }
    let mut cells: Vec<usize> = op.support().iter().map(|&s| sys.torus.cell_of(s)).collect();
    cells.dedup();
    sys.image_over(op, &sys.near(&cells, 1))
}

/// Checks that the generator map preserves every pairwise commutation relation, that every
/// generator commutes with the loops, that each loop maps to `+1`, and that every relation
/// among the generators near one cell maps to the same scalar.
pub fn majorana_rep_check(sys: &MajoranaSystem, loops: &Instantiated) -> Outcome {
    if loops.torus != sys.torus {
        return Err(Error::Context("loops live on a different torus".into()));
    }
    let gens = &sys.generators;
    for (i, g) in gens.iter().enumerate() {
        if let Some(j) = loops.ops.iter().position(|l| !l.commutes(g)) {
            return Ok((false, format!("generator {} fails to commute with {}", sys.label(i), loops.label(j))));
        }
    }
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if gens[i].commutes(&gens[j]) != sys.images[i].commutes(&sys.images[j]) {
                return Ok((false, format!("relation of {} and {} is not preserved", sys.label(i), sys.label(j))));
            }
        }
    }
    for (i, l) in loops.ops.iter().enumerate() {
        let (_, v) = loops.anchor(i);
        let img = sys.image_over(l, &sys.near(&[v], 1))?;
        if !img.is_identity() {
            return Ok((false, format!("{} maps to {img:?}", loops.label(i))));
        }
    }
    // Relations inside a ball that does not wrap; the global parity relation is excluded.
    let r = sys.torus.sizes().iter().map(|&l| (l - 2) / 2).min().unwrap_or(0).min(2);
    let pool = sys.near(&[0], r);
    let rows: Vec<Vec<u32>> = pool.iter().map(|&i| gens[i].symplectic()).collect();
    let relations = fp::left_kernel(&rows, 2);
    for rel in &relations {
        let mut prod = TorusPauli::identity(2, sys.torus.n());
        let mut img = MajoranaOp::identity();
        for (&i, &c) in pool.iter().zip(rel) {
            if c == 1 {
                prod = prod.try_mul(&gens[i])?;
                img = img.mul(&sys.images[i]);
            }
        }
        if !img.modes.is_empty() || img.phase != prod.phase() {
            return Ok((false, format!("a local relation of {} generators maps to {img:?}", rel.iter().sum::<u32>())));
        }
    }
    Ok((
        true,
        format!(
            "{} generators, {} loops, {} local relations",
            gens.len(),
            loops.ops.len(),
            relations.len()
        ),
    ))
}
