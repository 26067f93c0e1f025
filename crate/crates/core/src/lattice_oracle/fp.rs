//! Dense linear algebra over `F_p` for the finite-torus checks.

fn inv(a: u32, p: u32) -> u32 {
    let (mut base, mut e, mut acc) = (a as u64 % p as u64, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// `dst -= f · src` from column `from` on.
fn eliminate(dst: &mut [u32], src: &[u32], f: u32, from: usize, p: u32) {
    if f == 0 {
        return;
    }
    let neg = (p - f) as u64;
    for (d, &s) in dst[from..].iter_mut().zip(&src[from..]) {
        if s != 0 {
            *d = ((*d as u64 + neg * s as u64) % p as u64) as u32;
        }
    }
}

/// Reduced row echelon form in place, pivoting only in columns `0..pivot_cols`. Returns the
/// pivot column of each leading row; rows past the pivots have zero entries in those columns.
pub(crate) fn row_reduce(rows: &mut [Vec<u32>], pivot_cols: usize, p: u32) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows.len() {
            break;
        }
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else { continue };
        rows.swap(r, k);
        let s = inv(rows[r][c], p);
        if s != 1 {
            for v in rows[r][c..].iter_mut() {
                *v = (*v as u64 * s as u64 % p as u64) as u32;
            }
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot, rest) = tail.split_first_mut().expect("row r exists");
        for other in head.iter_mut().chain(rest.iter_mut()) {
            let f = other[c];
            eliminate(other, pivot, f, c, p);
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub(crate) fn rank(rows: &[Vec<u32>], p: u32) -> usize {
    let Some(width) = rows.first().map(Vec::len) else { return 0 };
    let mut m = rows.to_vec();
    row_reduce(&mut m, width, p).len()
}

/// Basis of `{c : Σ c_i rows_i = 0}`.
pub(crate) fn left_kernel(rows: &[Vec<u32>], p: u32) -> Vec<Vec<u32>> {
    let m = rows.len();
    let Some(width) = rows.first().map(Vec::len) else { return Vec::new() };
    let mut aug: Vec<Vec<u32>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend((0..m).map(|j| u32::from(i == j)));
            v
        })
        .collect();
    let r = row_reduce(&mut aug, width, p).len();
    aug[r..].iter().map(|v| v[width..].to_vec()).collect()
}

/// Basis of `{v : a v = 0}` for `a` with `n` columns.
pub(crate) fn kernel(a: &[Vec<u32>], n: usize, p: u32) -> Vec<Vec<u32>> {
    let mut m = a.to_vec();
    let pivots = row_reduce(&mut m, n, p);
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![0u32; n];
            v[f] = 1;
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = (p - m[row][f]) % p;
            }
            v
        })
        .collect()
}

/// A solution of `a v = b` with every free variable zero, or `None`.
pub(crate) fn solve(a: &[Vec<u32>], b: &[u32], n: usize, p: u32) -> Option<Vec<u32>> {
    let mut aug: Vec<Vec<u32>> = a
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut v = r.clone();
            v.push(bi);
            v
        })
        .collect();
    let pivots = row_reduce(&mut aug, n, p);
    if aug[pivots.len()..].iter().any(|r| r[n] != 0) {
        return None;
    }
    let mut v = vec![0u32; n];
    for (row, &c) in pivots.iter().enumerate() {
        v[c] = aug[row][n];
    }
    Some(v)
}

/// For a family of right-hand sides `b_1, …, b_k` (columns of `rhs`, one row per equation),
/// rows `r` such that `a v = Σ s_j b_j` is solvable iff `r · s = 0` for every returned `r`.
pub(crate) fn rhs_obstructions(a: &[Vec<u32>], rhs: &[Vec<u32>], n: usize, p: u32) -> Vec<Vec<u32>> {
    let mut aug: Vec<Vec<u32>> = a
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut v = r.clone();
            v.extend_from_slice(b);
            v
        })
        .collect();
    let r = row_reduce(&mut aug, n, p).len();
    let mut out: Vec<Vec<u32>> = aug[r..].iter().map(|v| v[n..].to_vec()).filter(|v| v.iter().any(|&c| c != 0)).collect();
    if let Some(k) = out.first().map(Vec::len) {
        let rr = row_reduce(&mut out, k, p).len();
        out.truncate(rr);
    }
    out
}
