//! Buchberger's algorithm for submodules of `F_p[x_0..x_{n-1}]^m`.
//!
//! Ideals are the case `m = 1`. Terms are ordered position-over-term with position 0
//! largest, so the leading positions form an elimination block for lifts and syzygies.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use crate::error::{Error, Result};

pub const MAXV: usize = 8;
pub type Mono = [u32; MAXV];

pub const DEFAULT_SPAIR_BUDGET: u64 = 2_000_000;
static SPAIR_BUDGET: AtomicU64 = AtomicU64::new(DEFAULT_SPAIR_BUDGET);

/// Process-wide default S-pair budget used when no explicit budget is given.
pub fn set_default_budget(n: u64) {
    SPAIR_BUDGET.store(n, AtomicOrdering::Relaxed);
}

pub fn default_budget() -> u64 {
    SPAIR_BUDGET.load(AtomicOrdering::Relaxed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonoOrder {
    /// Graded reverse lexicographic.
    Grevlex,
    /// Degree in the last variable first, ties broken by grevlex.
    ElimLast,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub pos: u32,
    pub deg: u32,
    pub m: Mono,
    pub c: u32,
}

/// A module element: terms sorted strictly descending.
pub type MVec = Vec<Term>;

#[derive(Clone, Copy, Debug)]
pub struct Engine {
    pub nv: usize,
    pub p: u32,
    pub order: MonoOrder,
}

impl Engine {
    pub fn new(nv: usize, p: u32, order: MonoOrder) -> Result<Engine> {
        if nv > MAXV {
            return Err(Error::Unsupported(format!(
                "Groebner engine handles at most {} variables including the saturation variable",
                MAXV
            )));
        }
        Ok(Engine { nv, p, order })
    }

    #[inline]
    pub fn cmp_mono(&self, a: &Mono, da: u32, b: &Mono, db: u32) -> Ordering {
        if self.order == MonoOrder::ElimLast {
            let l = self.nv - 1;
            match a[l].cmp(&b[l]) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        match da.cmp(&db) {
            Ordering::Equal => {}
            o => return o,
        }
        for i in (0..self.nv).rev() {
            if a[i] != b[i] {
                return b[i].cmp(&a[i]);
            }
        }
        Ordering::Equal
    }

    #[inline]
    pub fn cmp_term(&self, a: &Term, b: &Term) -> Ordering {
        if a.pos != b.pos {
            return b.pos.cmp(&a.pos);
        }
        self.cmp_mono(&a.m, a.deg, &b.m, b.deg)
    }

    pub fn sort(&self, v: &mut MVec) {
        v.sort_by(|a, b| self.cmp_term(b, a));
        let mut out: MVec = Vec::with_capacity(v.len());
        for t in v.drain(..) {
            match out.last_mut() {
                Some(last) if last.pos == t.pos && last.m == t.m => {
                    last.c = (last.c + t.c) % self.p;
                }
                _ => {
                    if out.last().is_some_and(|l| l.c == 0) {
                        out.pop();
                    }
                    out.push(t);
                }
            }
        }
        if out.last().is_some_and(|l| l.c == 0) {
            out.pop();
        }
        *v = out;
    }

    #[inline]
    fn mul_c(&self, a: u32, b: u32) -> u32 {
        (a * b) % self.p
    }

    pub fn inv_c(&self, a: u32) -> u32 {
        let mut r = 1u32;
        let mut b = a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_c(r, b);
            }
            b = self.mul_c(b, b);
            e >>= 1;
        }
        r
    }

    pub fn monic(&self, f: &mut MVec) {
        if let Some(l) = f.first() {
            let inv = self.inv_c(l.c);
            if inv != 1 {
                for t in f.iter_mut() {
                    t.c = self.mul_c(t.c, inv);
                }
            }
        }
    }

    #[inline]
    fn divides(&self, a: &Mono, b: &Mono) -> bool {
        (0..self.nv).all(|i| a[i] <= b[i])
    }

    fn lcm(&self, a: &Mono, b: &Mono) -> (Mono, u32) {
        let mut m = [0u32; MAXV];
        let mut d = 0;
        for i in 0..self.nv {
            m[i] = a[i].max(b[i]);
            d += m[i];
        }
        (m, d)
    }

    /// `f − c·x^s·g` where `s` has total degree `ds`.
    pub fn sub_mul(&self, f: &[Term], c: u32, s: &Mono, ds: u32, g: &[Term]) -> MVec {
        let negc = (self.p - c % self.p) % self.p;
        let mut out = Vec::with_capacity(f.len() + g.len());
        let shifted = |t: &Term| {
            let mut m = t.m;
            for i in 0..self.nv {
                m[i] += s[i];
            }
            Term { pos: t.pos, deg: t.deg + ds, m, c: self.mul_c(t.c, negc) }
        };
        let (mut i, mut j) = (0, 0);
        while i < f.len() && j < g.len() {
            let gt = shifted(&g[j]);
            match self.cmp_term(&f[i], &gt) {
                Ordering::Greater => {
                    out.push(f[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(gt);
                    j += 1;
                }
                Ordering::Equal => {
                    let v = (f[i].c + gt.c) % self.p;
                    if v != 0 {
                        out.push(Term { c: v, ..gt });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&f[i..]);
        while j < g.len() {
            out.push(shifted(&g[j]));
            j += 1;
        }
        out
    }

    pub fn is_constant_unit(&self, f: &[Term]) -> bool {
        f.len() == 1 && f[0].deg == 0
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
    lcm_deg: u32,
    pos: u32,
    sugar: u32,
}

/// Incremental Buchberger state.
pub struct Gb {
    pub eng: Engine,
    npos: usize,
    polys: Vec<MVec>,
    sugar: Vec<u32>,
    active: Vec<bool>,
    by_pos: Vec<Vec<usize>>,
    pairs: Vec<Pair>,
    alive: Vec<bool>,
    heap: BinaryHeap<Reverse<(u32, u32, usize)>>,
    spairs: u64,
    budget: u64,
    unit: bool,
}

impl Gb {
    pub fn new(eng: Engine, npos: usize, budget: u64) -> Gb {
        Gb {
            eng,
            npos,
            polys: Vec::new(),
            sugar: Vec::new(),
            active: Vec::new(),
            by_pos: vec![Vec::new(); npos],
            pairs: Vec::new(),
            alive: Vec::new(),
            heap: BinaryHeap::new(),
            spairs: 0,
            budget,
            unit: false,
        }
    }

    /// True once the module contains a constant unit (only meaningful for ideals).
    pub fn contains_one(&self) -> bool {
        self.unit
    }

    pub fn spairs_processed(&self) -> u64 {
        self.spairs
    }

    fn find_reducer(&self, t: &Term) -> Option<usize> {
        self.by_pos[t.pos as usize]
            .iter()
            .copied()
            .find(|&k| self.active[k] && self.eng.divides(&self.polys[k][0].m, &t.m))
    }

    /// Full normal form with respect to the current active basis.
    pub fn reduce(&self, mut f: MVec) -> MVec {
        let eng = &self.eng;
        let mut out: MVec = Vec::new();
        let mut i = 0;
        while i < f.len() {
            let lead = &f[i];
            match self.find_reducer(lead) {
                Some(k) => {
                    let g = &self.polys[k];
                    let mut s = [0u32; MAXV];
                    for v in 0..eng.nv {
                        s[v] = lead.m[v] - g[0].m[v];
                    }
                    let c = eng.mul_c(lead.c, eng.inv_c(g[0].c));
                    f = eng.sub_mul(&f[i..], c, &s, lead.deg - g[0].deg, g);
                    i = 0;
                }
                None => {
                    out.push(lead.clone());
                    i += 1;
                }
            }
        }
        out
    }

    fn top_reduce(&self, mut f: MVec) -> MVec {
        let eng = &self.eng;
        while !f.is_empty() {
            let lead = &f[0];
            match self.find_reducer(lead) {
                Some(k) => {
                    let g = &self.polys[k];
                    let mut s = [0u32; MAXV];
                    for i in 0..eng.nv {
                        s[i] = lead.m[i] - g[0].m[i];
                    }
                    let c = eng.mul_c(lead.c, eng.inv_c(g[0].c));
                    let ds = lead.deg - g[0].deg;
                    f = eng.sub_mul(&f, c, &s, ds, g);
                }
                None => break,
            }
        }
        f
    }

    fn coprime(&self, a: &Mono, b: &Mono) -> bool {
        (0..self.eng.nv).all(|i| a[i] == 0 || b[i] == 0)
    }

    fn insert(&mut self, h: MVec, sugar: u32) {
        let eng = self.eng;
        let hidx = self.polys.len();
        let hl = h[0].clone();
        if hl.deg == 0 && self.npos == 1 {
            self.unit = true;
        }
        let is_ideal = self.npos == 1;
        // Candidate pairs with the new element.
        let mut cand: Vec<(usize, Mono, u32)> = Vec::new();
        for &g in &self.by_pos[hl.pos as usize] {
            if !self.active[g] {
                continue;
            }
            let (l, d) = eng.lcm(&self.polys[g][0].m, &hl.m);
            cand.push((g, l, d));
        }
        let mut kept: Vec<(usize, Mono, u32)> = Vec::new();
        while let Some((g, l, d)) = cand.pop() {
            let cop = is_ideal && self.coprime(&self.polys[g][0].m, &hl.m);
            let dominated = cand.iter().any(|(_, l2, _)| eng.divides(l2, &l))
                || kept.iter().any(|(_, l2, _)| eng.divides(l2, &l));
            if cop || !dominated {
                kept.push((g, l, d));
            }
        }
        // Chain criterion on existing pairs.
        for k in 0..self.pairs.len() {
            if !self.alive[k] {
                continue;
            }
            let pr = &self.pairs[k];
            if pr.pos != hl.pos || !eng.divides(&hl.m, &pr.lcm) {
                continue;
            }
            let (li, _) = eng.lcm(&self.polys[pr.i][0].m, &hl.m);
            let (lj, _) = eng.lcm(&self.polys[pr.j][0].m, &hl.m);
            if li != pr.lcm && lj != pr.lcm {
                self.alive[k] = false;
            }
        }
        self.polys.push(h);
        self.sugar.push(sugar);
        self.active.push(true);
        self.by_pos[hl.pos as usize].push(hidx);
        for (g, l, d) in kept {
            if is_ideal && self.coprime(&self.polys[g][0].m, &hl.m) {
                continue;
            }
            let gl = &self.polys[g][0];
            let s = (self.sugar[g] + d - gl.deg).max(sugar + d - hl.deg);
            let idx = self.pairs.len();
            self.pairs.push(Pair { i: g, j: hidx, lcm: l, lcm_deg: d, pos: hl.pos, sugar: s });
            self.alive.push(true);
            self.heap.push(Reverse((s, d, idx)));
        }
        for g in 0..hidx {
            if self.active[g] && self.polys[g][0].pos == hl.pos && eng.divides(&hl.m, &self.polys[g][0].m) {
                self.active[g] = false;
            }
        }
    }

    /// Adds generators and completes the basis.
    pub fn add(&mut self, gens: Vec<MVec>) -> Result<()> {
        for g in gens {
            if self.unit {
                return Ok(());
            }
            let sugar = g.iter().map(|t| t.deg).max().unwrap_or(0);
            let mut h = self.reduce(g);
            if h.is_empty() {
                continue;
            }
            self.eng.monic(&mut h);
            self.insert(h, sugar);
        }
        self.complete()
    }

    fn complete(&mut self) -> Result<()> {
        let eng = self.eng;
        while let Some(Reverse((_, _, idx))) = self.heap.pop() {
            if self.unit {
                self.heap.clear();
                return Ok(());
            }
            if !self.alive[idx] {
                continue;
            }
            self.alive[idx] = false;
            self.spairs += 1;
            if self.spairs > self.budget {
                return Err(Error::Budget(self.budget));
            }
            let pr = self.pairs[idx].clone();
            let (fi, fj) = (&self.polys[pr.i], &self.polys[pr.j]);
            let mut si = [0u32; MAXV];
            let mut sj = [0u32; MAXV];
            for k in 0..eng.nv {
                si[k] = pr.lcm[k] - fi[0].m[k];
                sj[k] = pr.lcm[k] - fj[0].m[k];
            }
            let a = eng.sub_mul(&[], eng.p - 1, &si, pr.lcm_deg - fi[0].deg, fi);
            let s = eng.sub_mul(&a, fi[0].c, &sj, pr.lcm_deg - fj[0].deg, fj);
            let h = self.top_reduce(s);
            if h.is_empty() {
                continue;
            }
            let mut h = self.reduce(h);
            eng.monic(&mut h);
            self.insert(h, pr.sugar);
        }
        Ok(())
    }

    /// The reduced basis (monic, minimal, tail-reduced), sorted by leading term descending.
    pub fn reduced_basis(&self) -> Vec<MVec> {
        if self.unit {
            return vec![vec![Term { pos: 0, deg: 0, m: [0u32; MAXV], c: 1 }]];
        }
        let idx: Vec<usize> = (0..self.polys.len()).filter(|&k| self.active[k]).collect();
        let mut out = Vec::new();
        for &k in &idx {
            let f = &self.polys[k];
            let mut tail_red = vec![f[0].clone()];
            let rest: MVec = f[1..].to_vec();
            tail_red.extend(self.reduce(rest));
            out.push(tail_red);
        }
        let eng = self.eng;
        out.sort_by(|a, b| eng.cmp_term(&b[0], &a[0]));
        out
    }

    /// Leading monomials of the active basis at position `pos`.
    pub fn leading_monomials(&self, pos: u32) -> Vec<Mono> {
        (0..self.polys.len())
            .filter(|&k| self.active[k] && self.polys[k][0].pos == pos)
            .map(|k| self.polys[k][0].m)
            .collect()
    }

    pub fn npos(&self) -> usize {
        self.npos
    }
}
