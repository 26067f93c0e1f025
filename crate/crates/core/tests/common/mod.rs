#![allow(dead_code)]

use qca_forge::ring::Exponent;
use qca_forge::{Gate, GateList, LaurentPoly, PolyMatrix, Ring};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random Laurent polynomial with at most `terms` terms and exponents in `-span..=span`.
pub fn poly(rng: &mut ChaCha8Rng, ring: Ring, terms: usize, span: i32) -> LaurentPoly {
    let n = rng.gen_range(0..=terms);
    let raw = (0..n).map(|_| {
        let e: Exponent = (0..ring.nvars()).map(|_| rng.gen_range(-span..=span)).collect();
        (e, rng.gen_range(0..ring.p() as i64))
    });
    ring.from_terms(raw)
}

/// Same as [`poly`] but with nonnegative exponents up to `deg`.
pub fn poly_nonneg(rng: &mut ChaCha8Rng, ring: Ring, terms: usize, deg: i32) -> LaurentPoly {
    let n = rng.gen_range(0..=terms);
    let raw = (0..n).map(|_| {
        let e: Exponent = (0..ring.nvars()).map(|_| rng.gen_range(0..=deg)).collect();
        (e, rng.gen_range(0..ring.p() as i64))
    });
    ring.from_terms(raw)
}

pub fn matrix(rng: &mut ChaCha8Rng, ring: Ring, rows: usize, cols: usize, terms: usize, span: i32) -> PolyMatrix {
    PolyMatrix::from_fn(ring, rows, cols, |_, _| poly(rng, ring, terms, span))
}

pub fn lambda(ring: Ring, q: usize) -> PolyMatrix {
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

/// Random hermitian polynomial `g + ḡ`, plus a random constant (which is hermitian too).
pub fn hermitian(rng: &mut ChaCha8Rng, ring: Ring, terms: usize, span: i32) -> LaurentPoly {
    let g = poly(rng, ring, terms, span);
    let c = ring.constant(rng.gen_range(0..ring.p() as i64));
    &(&g + &g.involute()) + &c
}

/// Random element of the gate set on `q` qudits (CNOT only when `q ≥ 2`, SCALE only for `p > 2`).
pub fn gate(rng: &mut ChaCha8Rng, ring: Ring, q: usize) -> Gate {
    loop {
        let i = rng.gen_range(0..q);
        match rng.gen_range(0..5) {
            0 => return Gate::Hadamard(i),
            1 if q >= 2 => {
                let mut j = rng.gen_range(0..q - 1);
                if j >= i {
                    j += 1;
                }
                return Gate::Cnot(i, j, poly(rng, ring, 2, 1));
            }
            2 => return Gate::Cphase(i, hermitian(rng, ring, 2, 1)),
            3 if ring.p() > 2 => return Gate::Scale(i, rng.gen_range(1..ring.p())),
            4 => {
                let e: Exponent = (0..ring.nvars()).map(|_| rng.gen_range(-1..=1)).collect();
                return Gate::Shift(i, ring.monomial(e, 1));
            }
            _ => continue,
        }
    }
}

pub fn gate_word(rng: &mut ChaCha8Rng, ring: Ring, q: usize, len: usize) -> GateList {
    GateList::new(ring, q, (0..len).map(|_| gate(rng, ring, q)).collect()).expect("valid gates")
}

/// Rank over `F_p` by plain Gaussian elimination.
pub fn rank_mod_p(rows: &[Vec<u32>], p: u32) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&v| v as u64).collect()).collect();
    let p = p as u64;
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&i| !m[i][c].is_multiple_of(p)) else { continue };
        m.swap(rank, piv);
        let inv = (1..p).find(|v| v * m[rank][c] % p == 1).unwrap();
        for v in m[rank].iter_mut() {
            *v = *v * inv % p;
        }
        for i in 0..m.len() {
            if i != rank && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + (p - f) * m[rank][j]) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// All translates of the columns of `m` (univariate, `2q` rows) on a periodic chain of `len`
/// cells, as `F_p` vectors with coordinates `(row, cell)`.
pub fn chain_vectors(m: &PolyMatrix, len: usize) -> Vec<Vec<u32>> {
    let p = m.ring().p();
    let mut out = Vec::new();
    for j in 0..m.cols() {
        for shift in 0..len {
            let mut v = vec![0u32; m.rows() * len];
            for i in 0..m.rows() {
                for (e, c) in m[(i, j)].terms() {
                    let cell = (e[0] as i64 + shift as i64).rem_euclid(len as i64) as usize;
                    let k = i * len + cell;
                    v[k] = (v[k] + c) % p;
                }
            }
            out.push(v);
        }
    }
    out
}

/// Symplectic pairing of two chain vectors with `q` qudits per cell.
pub fn chain_pairing(u: &[u32], w: &[u32], q: usize, len: usize, p: u32) -> u32 {
    let half = q * len;
    let mut acc = 0u64;
    for k in 0..half {
        acc += u[k] as u64 * w[k + half] as u64;
        acc += (p - u[k + half] % p) as u64 * w[k] as u64;
    }
    (acc % p as u64) as u32
}

/// Gate matrices written entry by entry from the Pauli conjugation rules.
pub fn oracle_gate(ring: Ring, q: usize, g: &Gate) -> PolyMatrix {
    let mut m = PolyMatrix::identity(ring, 2 * q);
    match g {
        Gate::Hadamard(i) => {
            m[(*i, *i)] = ring.zero();
            m[(i + q, i + q)] = ring.zero();
            m[(*i, i + q)] = ring.constant(-1);
            m[(i + q, *i)] = ring.one();
        }
        Gate::Cnot(i, j, a) => {
            m[(*i, *j)] = a.clone();
            m[(j + q, i + q)] = a.involute().neg();
        }
        Gate::Cphase(i, f) => m[(i + q, *i)] = f.clone(),
        Gate::Scale(i, a) => {
            let inv = (1..ring.p()).find(|c| c * a % ring.p() == 1).unwrap();
            m[(*i, *i)] = ring.constant(*a as i64);
            m[(i + q, i + q)] = ring.constant(inv as i64);
        }
        Gate::Shift(i, mono) => {
            m[(*i, *i)] = mono.clone();
            m[(i + q, i + q)] = mono.clone();
        }
    }
    m
}

pub fn oracle_product(list: &GateList) -> PolyMatrix {
    let mut acc = PolyMatrix::identity(list.ring(), 2 * list.q());
    for g in list.gates() {
        acc = &acc * &oracle_gate(list.ring(), list.q(), g);
    }
    acc
}
