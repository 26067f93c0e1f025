//! Free generating sets of `im σ` and their certificates.

use super::StabilizerMap;
use crate::certificate::{Certificate, Status};
use crate::error::{Error, Result};
use crate::polymat::{determinantal_ideal, kernel_basis, matrix_rank, smith_normal_form, ColumnModule, PolyMatrix};

/// A separator `σ_sep` (`2q × q`, no relations, `I_q = R`) with the same image as the source
/// map, plus lift witnesses `σ·to_sep = σ_sep` and `σ_sep·from_sep = σ`.
#[derive(Clone, Debug)]
pub struct SeparatorCertificate {
    pub sigma_sep: StabilizerMap,
    pub to_sep: PolyMatrix,
    pub from_sep: PolyMatrix,
    pub checks: Certificate,
    /// Reality of the separator columns; `None` unless `p = 2`.
    pub real: Option<bool>,
}

/// Coefficient matrix `W` with `target = m·W`, or `None` if some column is outside `im m`.
fn lift_columns(m: &PolyMatrix, target: &PolyMatrix) -> Result<Option<PolyMatrix>> {
    let module = ColumnModule::new(m)?;
    let mut cols = Vec::with_capacity(target.cols());
    for j in 0..target.cols() {
        match module.lift(&target.column(j))? {
            Some(c) => cols.push(c),
            None => return Ok(None),
        }
    }
    if cols.is_empty() {
        return Ok(Some(PolyMatrix::zeros(m.ring(), m.cols(), 0)));
    }
    PolyMatrix::from_columns(m.ring(), &cols).map(Some)
}

struct Lifts {
    to_sep: Option<PolyMatrix>,
    from_sep: Option<PolyMatrix>,
}

fn run_checks(sigma: &PolyMatrix, cand: &PolyMatrix) -> (Certificate, Lifts) {
    let mut cert = Certificate::new("separator candidate");
    let q = sigma.rows() / 2;
    let cmap = StabilizerMap::new(cand.clone());
    cert.record("candidate commuting", || {
        let c = cmap.clone()?.commutation_matrix();
        Ok((c.is_zero(), if c.is_zero() { String::new() } else { first_nonzero(&c) }))
    });
    cert.record("candidate kernel-free", || {
        if cand.cols() != q {
            return Ok((false, format!("{} columns, expected q = {q}", cand.cols())));
        }
        let r = matrix_rank(cand);
        Ok((r == cand.cols(), format!("rank {r} with {} columns", cand.cols())))
    });
    let mut cand_unit = None;
    cert.record("candidate I_q unit", || {
        let unit = determinantal_ideal(cand, q)?.is_unit()?;
        cand_unit = Some(unit);
        Ok((unit, if unit { String::new() } else { format!("I_{q} is a proper ideal") }))
    });
    let mut lifts = Lifts { to_sep: None, from_sep: None };
    cert.record("module equality with im σ", || {
        // Generating matrices of one rank-q module have equal I_q, so a proper I_q(candidate)
        // against a unit I_q(σ) refutes equality without lifting.
        if cand_unit == Some(false) && determinantal_ideal(sigma, q)?.is_unit()? {
            return Ok((false, format!("I_{q}(σ) = R but I_{q}(candidate) is proper")));
        }
        lifts.to_sep = lift_columns(sigma, cand)?;
        lifts.from_sep = lift_columns(cand, sigma)?;
        let detail = match (&lifts.to_sep, &lifts.from_sep) {
            (Some(_), Some(_)) => "lift witnesses in both directions".to_string(),
            (None, _) => "a candidate column is outside im σ".to_string(),
            (_, None) => "a column of σ is outside the candidate's image".to_string(),
        };
        Ok((lifts.to_sep.is_some() && lifts.from_sep.is_some(), detail))
    });
    (cert, lifts)
}

fn first_nonzero(m: &PolyMatrix) -> String {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if !m[(i, j)].is_zero() {
                return format!("entry ({i}, {j}) = {}", m[(i, j)]);
            }
        }
    }
    String::new()
}

/// Itemized checks for a candidate separator of `s`: commuting, kernel-free, `I_q` unit and
/// module equality with `im σ`.
pub fn candidate_checks(s: &StabilizerMap, candidate: &PolyMatrix) -> Result<Certificate> {
    s.ring().check(&candidate.ring())?;
    if candidate.rows() != s.sigma().rows() {
        return Err(Error::Shape(format!("candidate has {} rows, σ has {}", candidate.rows(), s.sigma().rows())));
    }
    Ok(run_checks(s.sigma(), candidate).0)
}

/// Drops zero columns and exact duplicates.
fn dedupe_columns(g: &PolyMatrix) -> PolyMatrix {
    let mut cols: Vec<Vec<_>> = Vec::new();
    for j in 0..g.cols() {
        let c = g.column(j);
        if c.iter().all(|e| e.is_zero()) || cols.contains(&c) {
            continue;
        }
        cols.push(c);
    }
    if cols.is_empty() {
        return PolyMatrix::zeros(g.ring(), g.rows(), 0);
    }
    PolyMatrix::from_columns(g.ring(), &cols).expect("uniform columns")
}

/// Removes columns that a relation expresses through the others, i.e. where some kernel
/// vector has a unit entry, until no relation is left.
fn drop_unit_relations(g: &PolyMatrix) -> Result<PolyMatrix> {
    let mut g = g.clone();
    loop {
        let k = kernel_basis(&g)?;
        if k.cols() == 0 {
            return Ok(g);
        }
        let hit = (0..k.cols()).find_map(|c| (0..k.rows()).find(|&j| k[(j, c)].is_monomial()));
        let Some(j) = hit else {
            return Err(Error::ReductionFailed(format!(
                "{} relations remain and none has a unit coefficient",
                k.cols()
            )));
        };
        let keep: Vec<usize> = (0..g.cols()).filter(|&c| c != j).collect();
        g = g.select(&(0..g.rows()).collect::<Vec<_>>(), &keep);
    }
}

/// Columns of `g·V` spanning the image, from the Smith form `U g V = S` (D = 1).
fn smith_basis(g: &PolyMatrix) -> Result<PolyMatrix> {
    let s = smith_normal_form(g)?;
    let r = s.rank();
    Ok(g.try_mul(&s.v)?.columns_range(0..r))
}

/// A separator for a commuting map with certified exactness.
///
/// With a candidate, the candidate is checked item by item and returned if every item
/// passes. Without one, `σ` itself is used when it has no relations; otherwise relations are
/// removed through the Smith form (D = 1) or by dropping columns that a relation expresses
/// through the others (D ≥ 2). The result is always verified before it is returned.
pub fn build_separator(s: &StabilizerMap, candidate: Option<&PolyMatrix>) -> Result<SeparatorCertificate> {
    let mut s = s.clone();
    if !s.commuting_verified() && !s.check_commuting() {
        return Err(Error::Precondition("stabilizer map is not commuting".into()));
    }
    let status = match s.exactness() {
        Some(e) => e,
        None => s.check_exactness()?,
    };
    if status != super::Exactness::Certified {
        return Err(Error::Precondition(format!("exactness is {status}, a separator needs it certified")));
    }
    let sigma = s.sigma();
    let cand = match candidate {
        Some(c) => {
            s.ring().check(&c.ring())?;
            c.clone()
        }
        None => {
            if kernel_basis(sigma)?.cols() == 0 {
                sigma.clone()
            } else if s.ring().nvars() == 1 {
                smith_basis(sigma)?
            } else {
                drop_unit_relations(&dedupe_columns(sigma))?
            }
        }
    };
    let (checks, lifts) = run_checks(sigma, &cand);
    if !checks.passed() {
        let failed: Vec<&str> = checks.checks.iter().filter(|c| c.status != Status::Pass).map(|c| c.name.as_str()).collect();
        return Err(Error::Verification(format!("separator checks failed: {}", failed.join(", "))));
    }
    let mut sep = StabilizerMap::new(cand)?;
    sep.check_commuting();
    sep.exactness = Some(super::Exactness::Certified);
    let real = if s.ring().p() == 2 { Some(super::reality_check(sep.sigma())?) } else { None };
    Ok(SeparatorCertificate {
        sigma_sep: sep,
        to_sep: lifts.to_sep.expect("checked"),
        from_sep: lifts.from_sep.expect("checked"),
        checks,
        real,
    })
}

/// A relation-free generating matrix for the column module of `g` (D ∈ {1, 2}), verified
/// by mutual membership.
pub fn trim_redundant_generators(g: &PolyMatrix) -> Result<PolyMatrix> {
    let d = g.ring().nvars();
    let g0 = dedupe_columns(g);
    let trimmed = match d {
        1 => smith_basis(&g0)?,
        2 => drop_unit_relations(&g0)?,
        _ => return Err(Error::Unsupported(format!("redundancy trimming supports D ∈ {{1, 2}}, got D = {d}"))),
    };
    if kernel_basis(&trimmed)?.cols() != 0 {
        return Err(Error::Verification("trimmed generators still have relations".into()));
    }
    let same = ColumnModule::new(&trimmed)?.contains_columns(g)? && ColumnModule::new(g)?.contains_columns(&trimmed)?;
    if !same {
        return Err(Error::Verification("trimmed generators span a different module".into()));
    }
    Ok(trimmed)
}
