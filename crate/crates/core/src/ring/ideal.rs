use std::sync::OnceLock;

use super::groebner::{default_budget, Engine, Gb, MVec, Mono, MonoOrder, Term, MAXV};
use super::poly::{Exponent, LaurentPoly, Ring};
use crate::error::{Error, Result};

/// Height of an ideal; the unit ideal has infinite height.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Height {
    Finite(usize),
    Infinite,
}

impl std::fmt::Display for Height {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Height::Finite(h) => write!(f, "{h}"),
            Height::Infinite => write!(f, "inf"),
        }
    }
}

/// Converts `x^shift · f` (which must be a polynomial) into engine terms at `pos`.
pub(crate) fn to_terms(f: &LaurentPoly, shift: &[i32], pos: u32, eng: &Engine) -> MVec {
    let mut out: MVec = f
        .terms()
        .iter()
        .map(|(e, c)| {
            let mut m = [0u32; MAXV];
            let mut deg = 0;
            for i in 0..e.len() {
                let v = e[i] + shift[i];
                debug_assert!(v >= 0, "to_terms on a non-polynomial");
                m[i] = v as u32;
                deg += v as u32;
            }
            Term { pos, deg, m, c: *c }
        })
        .collect();
    eng.sort(&mut out);
    out
}

/// Maps terms at `pos` back to the Laurent ring, substituting `t = (x_0⋯x_{D-1})^{-1}`
/// for the saturation variable in slot `D`.
pub(crate) fn from_terms(ts: &[Term], pos: u32, ring: Ring) -> LaurentPoly {
    let d = ring.nvars();
    let raw: Vec<(Exponent, u32)> = ts
        .iter()
        .filter(|t| t.pos == pos)
        .map(|t| {
            let k = t.m[d] as i32;
            let e: Exponent = (0..d).map(|i| t.m[i] as i32 - k).collect();
            (e, t.c)
        })
        .collect();
    LaurentPoly::from_raw(ring, raw)
}

/// The saturation generator `t·x_0⋯x_{D-1} − 1` at position `pos`.
pub(crate) fn saturation_term(ring: Ring, pos: u32, eng: &Engine) -> MVec {
    let d = ring.nvars();
    let mut m = [0u32; MAXV];
    for v in m.iter_mut().take(d + 1) {
        *v = 1;
    }
    let mut f = vec![
        Term { pos, deg: d as u32 + 1, m, c: 1 },
        Term { pos, deg: 0, m: [0; MAXV], c: ring.p() - 1 },
    ];
    eng.sort(&mut f);
    f
}

pub(crate) fn engine_for(ring: Ring, order: MonoOrder) -> Result<Engine> {
    Engine::new(ring.nvars() + 1, ring.p(), order)
}

/// Ideal of the Laurent ring, represented through its saturated polynomial image.
pub struct Ideal {
    ring: Ring,
    gens: Vec<LaurentPoly>,
    budget: u64,
    gb: OnceLock<std::result::Result<Gb, Error>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Ideal {
        Ideal { ring: self.ring, gens: self.gens.clone(), budget: self.budget, gb: OnceLock::new() }
    }
}

impl std::fmt::Debug for Ideal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

impl Ideal {
    /// Generators are normalized to unit-normal associates; zeros are dropped.
    pub fn new(ring: Ring, gens: Vec<LaurentPoly>) -> Ideal {
        let mut g: Vec<LaurentPoly> = gens.into_iter().filter(|f| !f.is_zero()).map(|f| f.normalize_unit()).collect();
        g.sort_by_key(|a| a.to_string());
        g.dedup();
        Ideal { ring, gens: g, budget: default_budget(), gb: OnceLock::new() }
    }

    pub fn unit(ring: Ring) -> Ideal {
        Ideal::new(ring, vec![ring.one()])
    }

    pub fn zero(ring: Ring) -> Ideal {
        Ideal::new(ring, vec![])
    }

    pub fn with_budget(mut self, budget: u64) -> Ideal {
        self.budget = budget;
        self.gb = OnceLock::new();
        self
    }

    pub(crate) fn from_parts(ring: Ring, gens: Vec<LaurentPoly>, gb: Gb) -> Ideal {
        let ideal = Ideal::new(ring, gens);
        let _ = ideal.gb.set(Ok(gb));
        ideal
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn gens(&self) -> &[LaurentPoly] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    fn gb(&self) -> Result<&Gb> {
        let r = self.gb.get_or_init(|| {
            let eng = engine_for(self.ring, MonoOrder::Grevlex)?;
            let mut gb = Gb::new(eng, 1, self.budget);
            let mut gens: Vec<MVec> = vec![saturation_term(self.ring, 0, &eng)];
            let zero = self.ring.zero_exp();
            for g in &self.gens {
                gens.push(to_terms(g, &zero, 0, &eng));
            }
            gens.sort_by_key(|g| g.len());
            gb.add(gens)?;
            Ok(gb)
        });
        r.as_ref().map_err(|e| e.clone())
    }

    pub fn is_unit(&self) -> Result<bool> {
        if self.gens.iter().any(|g| g.is_monomial()) {
            return Ok(true);
        }
        if self.gens.is_empty() {
            return Ok(false);
        }
        Ok(self.gb()?.contains_one())
    }

    pub fn contains(&self, f: &LaurentPoly) -> Result<bool> {
        self.ring.check(&f.ring())?;
        if f.is_zero() {
            return Ok(true);
        }
        if self.is_unit()? {
            return Ok(true);
        }
        if self.gens.is_empty() {
            return Ok(false);
        }
        let gb = self.gb()?;
        let g = f.clear_denominators();
        let t = to_terms(&g, &self.ring.zero_exp(), 0, &gb.eng);
        Ok(gb.reduce(t).is_empty())
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Ideal) -> Result<bool> {
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    /// `D − dim R/I`, from maximal independent variable sets of the leading monomials.
    pub fn height(&self) -> Result<Height> {
        if self.is_unit()? {
            return Ok(Height::Infinite);
        }
        let d = self.ring.nvars();
        if self.gens.is_empty() {
            return Ok(Height::Finite(0));
        }
        let leads = self.gb()?.leading_monomials(0);
        let dim = max_independent_set(&leads, d + 1);
        Ok(Height::Finite(d.saturating_sub(dim)))
    }

    /// Reduced Groebner basis of the saturated polynomial image under grevlex.
    pub fn groebner_basis(&self) -> Result<Vec<LaurentPoly>> {
        if self.is_unit()? {
            return Ok(vec![self.ring.one()]);
        }
        if self.gens.is_empty() {
            return Ok(vec![]);
        }
        let eng = engine_for(self.ring, MonoOrder::ElimLast)?;
        let mut gb = Gb::new(eng, 1, self.budget);
        let mut gens: Vec<MVec> = vec![saturation_term(self.ring, 0, &eng)];
        let zero = self.ring.zero_exp();
        for g in &self.gens {
            gens.push(to_terms(g, &zero, 0, &eng));
        }
        gb.add(gens)?;
        let d = self.ring.nvars();
        Ok(gb
            .reduced_basis()
            .into_iter()
            .filter(|f| f.iter().all(|t| t.m[d] == 0))
            .map(|f| from_terms(&f, 0, self.ring))
            .collect())
    }
}

fn max_independent_set(leads: &[Mono], nv: usize) -> usize {
    let mut best = 0;
    for mask in 0u32..(1u32 << nv) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let independent = leads.iter().all(|m| (0..nv).any(|i| m[i] > 0 && mask & (1 << i) == 0));
        if independent {
            best = size;
        }
    }
    best
}

/// Monic gcd of univariate Laurent polynomials, normalized to a polynomial with nonzero constant term.
pub fn gcd_univariate(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    assert!(a.ring().nvars() == 1);
    let mut x = a.clear_denominators();
    let mut y = b.clear_denominators();
    while !y.is_zero() {
        let (_, r) = super::univariate::divrem(&x, &y);
        x = y;
        y = r.clear_denominators();
    }
    x.normalize_unit()
}
