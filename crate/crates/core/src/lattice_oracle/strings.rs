//! String operators found by linear solving on strips, and the spin and braiding phases read
//! off from their commutation.
//!
//! A charge is named by the terms it violates near one anchor cell. A string along a path
//! carries exactly that syndrome at its start, may fail to commute with terms anchored within
//! distance 1 of its far end (so supported within distance 2), and commutes with every other
//! instantiated term. It is supported on the cells within distance 1 of the path.

use super::{fp, Instantiated, TorusPauli};
use crate::error::{Error, Result};

/// Terms violated near an anchor: `(term column, cell offset from the anchor)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChargeType {
    pub violated: Vec<(usize, Vec<i64>)>,
}

impl ChargeType {
    fn at(&self, terms: &Instantiated, anchor: usize) -> Vec<usize> {
        let mut v: Vec<usize> =
            self.violated.iter().map(|(c, off)| term_index(terms, *c, terms.torus.shift(anchor, off))).collect();
        v.sort_unstable();
        v
    }
}

fn require_qubits(terms: &Instantiated) -> Result<()> {
    if terms.torus.p() != 2 {
        return Err(Error::Unsupported("string operators are implemented for qubits".into()));
    }
    Ok(())
}

fn require_planar(terms: &Instantiated) -> Result<()> {
    if terms.torus.sizes().len() != 2 {
        return Err(Error::Unsupported("string geometry needs a two-dimensional torus".into()));
    }
    Ok(())
}

/// Unknowns are the X and Z exponents on the qubits of `cells`; one equation per term that
/// touches them or is listed in `forced`, except the terms in `free`.
struct System {
    sites: Vec<usize>,
    eq_terms: Vec<usize>,
    rows: Vec<Vec<u32>>,
}

impl System {
    fn new(terms: &Instantiated, cells: &[usize], forced: &[usize], free: &[usize]) -> System {
        let torus = &terms.torus;
        let mut sites: Vec<usize> = cells.iter().flat_map(|&c| (0..torus.q()).map(move |k| torus.site(c, k))).collect();
        sites.sort_unstable();
        sites.dedup();
        let m = sites.len();
        let mut eq_terms = Vec::new();
        let mut rows = Vec::new();
        for (idx, g) in terms.ops.iter().enumerate() {
            if free.binary_search(&idx).is_ok() {
                continue;
            }
            let touches = sites.iter().any(|&s| g.x()[s] != 0 || g.z()[s] != 0);
            if !touches && !forced.contains(&idx) {
                continue;
            }
            // ⟨P, g⟩ = x_P·z_g − z_P·x_g, and signs vanish mod 2.
            let mut row = vec![0u32; 2 * m];
            for (i, &s) in sites.iter().enumerate() {
                row[i] = g.z()[s];
                row[m + i] = g.x()[s];
            }
            eq_terms.push(idx);
            rows.push(row);
        }
        System { sites, eq_terms, rows }
    }

    fn unknowns(&self) -> usize {
        2 * self.sites.len()
    }

    fn operator(&self, n: usize, v: &[u32]) -> TorusPauli {
        let m = self.sites.len();
        let (mut x, mut z) = (vec![0u32; n], vec![0u32; n]);
        for (i, &s) in self.sites.iter().enumerate() {
            x[s] = v[i];
            z[s] = v[m + i];
        }
        TorusPauli::hermitian(2, x, z).expect("matching lengths")
    }

    /// One right-hand side per entry of `window`: the indicator of that term.
    fn family(&self, window: &[usize]) -> Vec<Vec<u32>> {
        self.eq_terms.iter().map(|idx| window.iter().map(|w| u32::from(w == idx)).collect()).collect()
    }
}

fn term_index(terms: &Instantiated, col: usize, cell: usize) -> usize {
    col * terms.torus.cells() + cell
}

/// All terms anchored within distance `r` of `cell`, sorted.
fn anchored_near(terms: &Instantiated, cell: usize, r: usize) -> Vec<usize> {
    let ball = terms.torus.ball(cell, r);
    let mut v: Vec<usize> = (0..terms.columns).flat_map(|c| ball.iter().map(move |&b| term_index(terms, c, b))).collect();
    v.sort_unstable();
    v
}

fn strip(terms: &Instantiated, path: &[usize]) -> Vec<usize> {
    let mut cells: Vec<usize> = path.iter().flat_map(|&c| terms.torus.ball(c, 1)).collect();
    cells.sort_unstable();
    cells.dedup();
    cells
}

fn check_path(terms: &Instantiated, path: &[usize]) -> Result<bool> {
    let torus = &terms.torus;
    if path.len() < 2 {
        return Err(Error::Malformed("a path needs at least two cells".into()));
    }
    if let Some(&c) = path.iter().find(|&&c| c >= torus.cells()) {
        return Err(Error::Malformed(format!("cell {c} is outside the torus")));
    }
    if let Some(w) = path.windows(2).find(|w| torus.distance(w[0], w[1]) != 1) {
        return Err(Error::Malformed(format!(
            "path steps from {:?} to {:?}, which are not adjacent",
            torus.coords(w[0]),
            torus.coords(w[1])
        )));
    }
    let closed = path.first() == path.last();
    let body = if closed { &path[..path.len() - 1] } else { path };
    let mut seen = body.to_vec();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != body.len() || (closed && body.len() < 3) {
        return Err(Error::Malformed("path must be simple".into()));
    }
    if !closed {
        // The strip around an open path must leave a gap on every cycle of the torus, or the
        // solver may reach the far end the short way round.
        let (mut pos, mut lo, mut hi) = (vec![0i64; torus.sizes().len()], vec![0i64; torus.sizes().len()], vec![0i64; torus.sizes().len()]);
        for w in path.windows(2) {
            let (a, b) = (torus.coords(w[0]), torus.coords(w[1]));
            for (k, &l) in torus.sizes().iter().enumerate() {
                let d = (b[k] - a[k]).rem_euclid(l as i64);
                pos[k] += if d > l as i64 / 2 { d - l as i64 } else { d };
                lo[k] = lo[k].min(pos[k]);
                hi[k] = hi[k].max(pos[k]);
            }
        }
        if let Some(k) = (0..pos.len()).find(|&k| hi[k] - lo[k] + 3 >= torus.sizes()[k] as i64) {
            return Err(Error::Unsupported(format!(
                "the strip around this path wraps around axis {k} of a torus of sizes {:?}",
                torus.sizes()
            )));
        }
    }
    Ok(closed)
}

/// A qubit Pauli operator on the strip around `path` with the syndrome of `charge` at the
/// first cell, free near the last cell, and commuting with every other term. A closed path
/// (first cell repeated at the end) yields a nonzero operator commuting with every term, if one
/// exists on the strip. `None` means the path cannot carry the charge.
pub fn derive_string_operator(terms: &Instantiated, path: &[usize], charge: &ChargeType) -> Result<Option<TorusPauli>> {
    require_qubits(terms)?;
    let closed = check_path(terms, path)?;
    if let Some((c, _)) = charge.violated.iter().find(|(c, _)| *c >= terms.columns) {
        return Err(Error::Malformed(format!("charge names term column {c} of {}", terms.columns)));
    }
    let n = terms.torus.n();
    let cells = strip(terms, path);
    if closed {
        let sys = System::new(terms, &cells, &[], &[]);
        let kernel = fp::kernel(&sys.rows, sys.unknowns(), 2);
        return Ok(kernel.first().map(|v| sys.operator(n, v)));
    }
    let forced = charge.at(terms, path[0]);
    let free = anchored_near(terms, path[path.len() - 1], 1);
    if forced.iter().any(|f| free.binary_search(f).is_ok()) {
        return Err(Error::Malformed("path is too short to separate its endpoints".into()));
    }
    let sys = System::new(terms, &cells, &forced, &free);
    let rhs: Vec<u32> = sys.eq_terms.iter().map(|idx| u32::from(forced.binary_search(idx).is_ok())).collect();
    Ok(fp::solve(&sys.rows, &rhs, sys.unknowns(), 2).map(|v| sys.operator(n, &v)))
}

/// Representatives of the nontrivial charges: syndromes on the terms anchored within distance
/// 1 of a cell that a string of length `probe` carries away along every axis and diagonal,
/// modulo those created by operators within distance 2. Each representative is reduced
/// against the locally creatable syndromes, which pushes it onto the anchor cell when
/// possible; the list enumerates every nonzero class of the quotient.
pub fn charge_types(terms: &Instantiated, probe: usize) -> Result<Vec<ChargeType>> {
    require_qubits(terms)?;
    let torus = &terms.torus;
    let dims = torus.sizes().len();
    if torus.sizes().iter().any(|&li| li < 2 * probe.max(3)) {
        return Err(Error::Unsupported(format!("torus {:?} is too small for probes of length {probe}", torus.sizes())));
    }
    let origin = 0;
    // Anchor-cell terms go last so that reduction leaves the representative on them.
    let mut window = anchored_near(terms, origin, 1);
    window.sort_by_key(|&idx| (terms.anchor(idx).1 == origin, idx));
    let w = window.len();
    let local = System::new(terms, &torus.ball(origin, 2), &window, &[]);
    let local_obs = fp::rhs_obstructions(&local.rows, &local.family(&window), local.unknowns(), 2);
    let mut directions: Vec<Vec<i64>> = (0..dims).map(|a| (0..dims).map(|b| i64::from(a == b)).collect()).collect();
    directions.push(vec![-1; dims]);
    let mut move_obs = Vec::new();
    for d in &directions {
        let path: Vec<usize> =
            (0..=probe).map(|k| torus.shift(origin, &d.iter().map(|&di| di * k as i64).collect::<Vec<_>>())).collect();
        let free = anchored_near(terms, path[probe], 1);
        let sys = System::new(terms, &strip(terms, &path), &window, &free);
        move_obs.extend(fp::rhs_obstructions(&sys.rows, &sys.family(&window), sys.unknowns(), 2));
    }
    let movable = fp::kernel(&move_obs, w, 2);
    // Syndromes that are both local and movable, in reduced echelon form.
    let mut stacked = local_obs;
    stacked.extend(move_obs);
    let mut both = fp::kernel(&stacked, w, 2);
    let pivots = fp::row_reduce(&mut both, w, 2);
    both.truncate(pivots.len());
    let reduce = |v: &[u32]| -> Vec<u32> {
        let mut v = v.to_vec();
        for (row, &c) in both.iter().zip(&pivots) {
            if v[c] == 1 {
                for (a, b) in v.iter_mut().zip(row) {
                    *a ^= b;
                }
            }
        }
        v
    };
    // A basis of movable modulo local.
    let mut basis: Vec<Vec<u32>> = Vec::new();
    let mut span = both.clone();
    for v in movable {
        let mut trial = span.clone();
        trial.push(v.clone());
        if fp::rank(&trial, 2) > span.len() {
            span.push(v.clone());
            span.truncate(fp::rank(&span, 2));
            basis.push(v);
        }
    }
    if basis.len() > 12 {
        return Err(Error::Unsupported(format!("{} independent charges", basis.len())));
    }
    let mut reps: Vec<Vec<u32>> = (1u32..1 << basis.len())
        .map(|mask| {
            let mut v = vec![0u32; w];
            for (k, b) in basis.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    for (a, c) in v.iter_mut().zip(b) {
                        *a ^= c;
                    }
                }
            }
            reduce(&v)
        })
        .collect();
    reps.sort_by_key(|v| (v.iter().sum::<u32>(), v.iter().rev().map(|&b| 1 - b).collect::<Vec<_>>()));
    let base = torus.coords(origin);
    Ok(reps
        .into_iter()
        .map(|v| ChargeType {
            violated: window
                .iter()
                .zip(&v)
                .filter(|(_, &b)| b == 1)
                .map(|(&idx, _)| {
                    let (col, cell) = terms.anchor(idx);
                    let off = torus
                        .coords(cell)
                        .iter()
                        .zip(&base)
                        .zip(torus.sizes())
                        .map(|((a, b), &l)| if a - b > 1 { a - b - l as i64 } else { a - b })
                        .collect();
                    (col, off)
                })
                .collect(),
        })
        .collect())
}

fn straight(terms: &Instantiated, from: usize, step: [i64; 2], len: usize) -> Vec<usize> {
    (0..=len).map(|k| terms.torus.shift(from, &[step[0] * k as i64, step[1] * k as i64])).collect()
}

fn string_on(terms: &Instantiated, path: &[usize], charge: &ChargeType) -> Result<TorusPauli> {
    derive_string_operator(terms, path, charge)?.ok_or_else(|| {
        Error::NotFound(format!(
            "no string for charge {:?} from {:?} to {:?}",
            charge.violated,
            terms.torus.coords(path[0]),
            terms.torus.coords(path[path.len() - 1])
        ))
    })
}

/// Three strings from `center` heading east, north and south-west (counterclockwise), each
/// `len` cells long and carrying `charge` at both ends.
pub fn t_junction(terms: &Instantiated, center: usize, charge: &ChargeType, len: usize) -> Result<[TorusPauli; 3]> {
    require_planar(terms)?;
    let legs = [[1, 0], [0, 1], [-1, -1]];
    let [a, b, c] = legs.map(|d| string_on(terms, &straight(terms, center, d, len), charge));
    Ok([a?, b?, c?])
}

/// A horizontal string for `a` and a vertical one for `b` crossing once, with every endpoint
/// at distance at least 2 from the other string's path.
pub fn crossing_strings(terms: &Instantiated, a: &ChargeType, b: &ChargeType) -> Result<(TorusPauli, TorusPauli)> {
    require_planar(terms)?;
    let l = terms.torus.sizes();
    if l.iter().any(|&li| li < 8) {
        return Err(Error::Unsupported(format!("crossing strings need sizes of at least 8, got {l:?}")));
    }
    let (cx, cy) = (l[0] as i64 / 2 - 1, l[1] as i64 / 2 - 1);
    let torus = &terms.torus;
    // Paths of five cells meeting at their midpoints `(cx, cy)`.
    let sa = string_on(terms, &straight(terms, torus.cell(&[cx - 2, cy]), [1, 0], 4), a)?;
    let sb = string_on(terms, &straight(terms, torus.cell(&[cx, cy - 2]), [0, 1], 4), b)?;
    Ok((sa, sb))
}

fn sign(phase: u32) -> Result<i8> {
    match phase % 4 {
        0 => Ok(1),
        2 => Ok(-1),
        _ => Err(Error::Verification("phase is not ±1".into())),
    }
}

/// `θ` from `t₁ t₂† t₃ = θ t₃ t₂† t₁`.
pub fn topological_spin(t1: &TorusPauli, t2: &TorusPauli, t3: &TorusPauli) -> Result<i8> {
    if t1.p() != 2 {
        return Err(Error::Unsupported("spins are computed for qubits".into()));
    }
    let d2 = t2.dagger();
    let lhs = t1.try_mul(&d2)?.try_mul(t3)?;
    let rhs = t3.try_mul(&d2)?.try_mul(t1)?;
    if lhs.x() != rhs.x() || lhs.z() != rhs.z() {
        return Err(Error::Verification("the two orderings differ by more than a phase; not a charge".into()));
    }
    sign(4 + lhs.phase() - rhs.phase())
}

/// Commutation sign of two crossing strings: `sa sb = M sb sa`.
pub fn mutual_braiding(sa: &TorusPauli, sb: &TorusPauli) -> Result<i8> {
    if sa.p() != 2 {
        return Err(Error::Unsupported("braiding phases are computed for qubits".into()));
    }
    let ab = sa.try_mul(sb)?;
    let ba = sb.try_mul(sa)?;
    sign(4 + ab.phase() - ba.phase())
}
