//! The three-fermion Walker–Wang model on the cubic lattice (two qubits per edge) and its
//! scripted verification: bulk stabilizer identities, the surface ideals, and a real
//! disentangling Clifford QCA built from a relation-free separator.

use crate::certificate::Certificate;
use crate::clifford::SymplecticQCA;
use crate::error::{Error, Result};
use crate::lattice_oracle::{
    charge_types, crossing_strings, f2_rank_and_degeneracy, flipper_action_check, instantiate, mutual_braiding,
    scalar_in_group, separator_onedim_check, t_junction, topological_spin, verify_relation_signs, ChargeType,
    Instantiated,
};
use crate::pauli::{
    build_e, build_separator, candidate_checks, lambda_form, reality_check, solve_flipper, Exactness, StabilizerMap,
};
use crate::polymat::{determinantal_ideal, kernel_basis, ColumnModule, PolyMatrix};
use crate::ring::{Height, Ideal, Ring};

const SIGMA: &str = include_str!("../data/walker_wang/sigma.mat");
const K: &str = include_str!("../data/walker_wang/k.mat");
const SIGMA_SURF: &str = include_str!("../data/walker_wang/sigma_surf.mat");
const SIGMA_SFL: &str = include_str!("../data/walker_wang/sigma_sfl.mat");
const B_PRIME: &str = include_str!("../data/walker_wang/b_prime.mat");

/// Bulk and surface matrices. Rows list the six qubits of a unit cell as the "1"-qubits on
/// the x-, y-, z-edges and then the "2"-qubits, X part above Z part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelBundle {
    /// `12 × 8`: two vertex terms, three `B_{P,1}` and three `B_{P,2}` plaquettes.
    pub sigma: PolyMatrix,
    /// `8 × 2` relations among the bulk terms.
    pub k: PolyMatrix,
    pub sigma_surf: PolyMatrix,
    pub sigma_sfl: PolyMatrix,
    /// `12 × 3` modified plaquettes `B′_{P,2}`.
    pub b_prime: PolyMatrix,
}

impl ModelBundle {
    pub fn load() -> Result<ModelBundle> {
        Ok(ModelBundle {
            sigma: SIGMA.parse()?,
            k: K.parse()?,
            sigma_surf: SIGMA_SURF.parse()?,
            sigma_sfl: SIGMA_SFL.parse()?,
            b_prime: B_PRIME.parse()?,
        })
    }

    pub fn bulk_ring(&self) -> Ring {
        self.sigma.ring()
    }

    pub fn surface_ring(&self) -> Ring {
        self.sigma_surf.ring()
    }

    /// `12 × 6` separator candidate: the three `B_{P,1}` columns of `σ` and `B′_{P,2}`.
    pub fn separator_candidate(&self) -> Result<PolyMatrix> {
        self.sigma.columns_range(2..5).hstack(&self.b_prime)
    }

    /// The same with one `B′` column swapped back for the original `B_{P,2}` column.
    pub fn unmodified_candidate(&self) -> Result<PolyMatrix> {
        self.sigma.columns_range(2..5).hstack(&self.sigma.columns_range(5..6))?.hstack(&self.b_prime.columns_range(1..3))
    }

    /// Texts of the shipped data files, for export.
    pub fn files() -> [(&'static str, &'static str); 5] {
        [
            ("sigma.mat", SIGMA),
            ("k.mat", K),
            ("sigma_surf.mat", SIGMA_SURF),
            ("sigma_sfl.mat", SIGMA_SFL),
            ("b_prime.mat", B_PRIME),
        ]
    }
}

fn nonzero_entry(m: &PolyMatrix) -> String {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if !m[(i, j)].is_zero() {
                return format!("entry ({}, {}) = {}", i + 1, j + 1, m[(i, j)]);
            }
        }
    }
    "zero".into()
}

fn zero_check(m: &PolyMatrix) -> (bool, String) {
    (m.is_zero(), nonzero_entry(m))
}

/// Bulk identities: commuting terms, the relations `K`, unit determinantal ideals, exactness,
/// and that `K` generates `ker σ`.
pub fn verify_bulk(b: &ModelBundle) -> Certificate {
    let mut cert = Certificate::new("walker-wang bulk");
    let ring = b.bulk_ring();
    let q = b.sigma.rows() / 2;
    cert.record("σ†λ₃σ = 0", || Ok(zero_check(&(&(&b.sigma.dagger() * &lambda_form(ring, q)) * &b.sigma))));
    cert.record("σK = 0", || Ok(zero_check(&b.sigma.try_mul(&b.k)?)));
    cert.record("I₂(K) = R", || {
        let unit = determinantal_ideal(&b.k, 2)?.is_unit()?;
        Ok((unit, String::new()))
    });
    cert.record("I₆(σ) = R", || {
        let unit = determinantal_ideal(&b.sigma, q)?.is_unit()?;
        Ok((unit, String::new()))
    });
    cert.record("exactness certified", || {
        let mut s = StabilizerMap::new(b.sigma.clone())?;
        let e = s.check_exactness()?;
        Ok((e == Exactness::Certified, e.to_string()))
    });
    cert.record("K generates ker σ", || {
        let kernel = kernel_basis(&b.sigma)?;
        let inside = ColumnModule::new(&b.k)?.contains_columns(&kernel)?;
        Ok((inside, format!("{} kernel generators checked against im K", kernel.cols())))
    });
    cert
}

/// The ideal `((1 + x)², (1 + x)(1 + y), (1 + y)²)`.
pub fn surface_ideal(ring: Ring) -> Result<Ideal> {
    let gens = ["1 + x^2", "1 + x + y + x*y", "1 + y^2"].iter().map(|s| ring.parse(s)).collect::<Result<_>>()?;
    Ok(Ideal::new(ring, gens))
}

fn height_two(i: &Ideal) -> Result<(bool, String)> {
    let h = i.height()?;
    Ok((h == Height::Finite(2), format!("height {h:?}")))
}

/// Surface identities: commuting surface and loop terms and both determinantal ideals equal
/// to the square of the augmentation ideal, of height 2.
pub fn verify_surface(b: &ModelBundle) -> Certificate {
    let mut cert = Certificate::new("walker-wang surface");
    let ring = b.surface_ring();
    let q = b.sigma_surf.rows() / 2;
    let dual = &b.sigma_surf.dagger() * &lambda_form(ring, q);
    cert.record("σ_surf†λ₄σ_SFL = 0", || Ok(zero_check(&dual.try_mul(&b.sigma_sfl)?)));
    let i6 = determinantal_ideal(&dual, 6);
    let i2 = determinantal_ideal(&b.sigma_sfl, 2);
    cert.record("I₆(σ_surf†λ₄) = ((1+x)², (1+x)(1+y), (1+y)²)", || {
        let j = surface_ideal(ring)?;
        Ok((i6.clone()?.equals(&j)?, String::new()))
    });
    cert.record("I₂(σ_SFL) = ((1+x)², (1+x)(1+y), (1+y)²)", || {
        let j = surface_ideal(ring)?;
        Ok((i2.clone()?.equals(&j)?, String::new()))
    });
    cert.record("height I₆(σ_surf†λ₄) = 2", || height_two(&i6.clone()?));
    cert.record("height I₂(σ_SFL) = 2", || height_two(&i2.clone()?));
    cert
}

/// Separator and disentangler checks for a given candidate. Returns the certificate and, when
/// every step succeeds, the disentangler `Q` with `Q⁻¹σ_sep = (0; I)`.
pub fn verify_separator_with(
    b: &ModelBundle,
    candidate: &PolyMatrix,
    real_mode: bool,
) -> Result<(Certificate, Option<SymplecticQCA>)> {
    let mut cert = Certificate::new("walker-wang separator and disentangler");
    let ring = b.bulk_ring();
    let s = StabilizerMap::new(b.sigma.clone())?;
    let sep = match build_separator(&s, Some(candidate)) {
        Ok(sep) => {
            cert.extend(sep.checks.clone());
            sep
        }
        Err(e) => {
            match candidate_checks(&s, candidate) {
                Ok(c) => cert.extend(c),
                Err(_) => {
                    cert.record("separator candidate", || Err(e.clone()));
                }
            }
            return Ok((cert, None));
        }
    };
    let mut flip = None;
    cert.record("flipper solved", || {
        flip = Some(solve_flipper(&sep)?);
        Ok((true, String::new()))
    });
    let Some(flip) = flip else { return Ok((cert, None)) };
    let mut e = None;
    cert.record(if real_mode { "E built (real mode)" } else { "E built" }, || {
        e = Some(build_e(&flip, &sep, real_mode)?);
        Ok((true, String::new()))
    });
    let Some(e) = e else { return Ok((cert, None)) };
    let sigma_sep = sep.sigma_sep.sigma();
    let q = sep.sigma_sep.q();
    let t = flip.f.try_sub(&sigma_sep.try_mul(&e)?)?;
    let qm = t.hstack(sigma_sep)?;
    let l = lambda_form(ring, q);
    let symplectic = cert.record("Q symplectic", || {
        let g = &(&qm.dagger() * &l) * &qm;
        Ok((g == l, nonzero_entry(&g.try_sub(&l)?)))
    });
    if !symplectic {
        return Ok((cert, None));
    }
    let qca = SymplecticQCA::new(qm)?;
    let qinv = qca.inverse();
    cert.record("Q⁻¹σ_sep = (0; I₆)", || {
        let trivial = PolyMatrix::zeros(ring, q, q).vstack(&PolyMatrix::identity(ring, q))?;
        let img = qinv.matrix().try_mul(sigma_sep)?;
        Ok((img == trivial, nonzero_entry(&img.try_sub(&trivial)?)))
    });
    if real_mode {
        cert.record("Q real", || Ok((reality_check(qca.matrix())?, String::new())));
        cert.record("Q⁻¹ real", || Ok((reality_check(qinv.matrix())?, String::new())));
    } else {
        cert.skip("Q real", "real mode off");
        cert.skip("Q⁻¹ real", "real mode off");
    }
    let ok = cert.passed();
    Ok((cert, ok.then_some(qca)))
}

/// The pipeline on the shipped candidate.
pub fn verify_separator_and_disentangler(
    b: &ModelBundle,
    real_mode: bool,
) -> Result<(Certificate, Option<SymplecticQCA>)> {
    verify_separator_with(b, &b.separator_candidate()?, real_mode)
}

/// Finite-torus checks on `L × L × L`: nondegenerate ground state, `+I` relation products, and,
/// given the disentangler, one-dimensional separator eigenspaces and flippers that move
/// exactly their own term. The flippers are the first `q` columns of `Q`, the separator the
/// last `q`.
pub fn oracle_concordance(b: &ModelBundle, l: usize, disentangler: Option<&SymplecticQCA>) -> Certificate {
    let mut cert = Certificate::new(format!("walker-wang oracle at L = {l}"));
    let sizes = [l, l, l];
    cert.record(format!("degeneracy 1 at L = ({l},{l},{l})"), || {
        let inst = instantiate(&b.sigma, &sizes)?;
        let d = f2_rank_and_degeneracy(&inst.ops)?;
        let scalar = scalar_in_group(&inst.ops)?;
        Ok((
            d.log_p() == 0 && scalar.is_none(),
            format!("{} terms of rank {} on {} qubits", inst.ops.len(), d.rank, d.qudits),
        ))
    });
    cert.record(format!("relation products +I at L = ({l},{l},{l})"), || verify_relation_signs(&b.sigma, &b.k, &sizes));
    match disentangler {
        Some(qca) => {
            let q = qca.q();
            let flippers = qca.matrix().columns_range(0..q);
            let sep = qca.matrix().columns_range(q..2 * q);
            cert.record(format!("separator one-dimensional at L = ({l},{l},{l})"), || separator_onedim_check(&sep, &sizes));
            cert.record(format!("flippers move one term each at L = ({l},{l},{l})"), || {
                flipper_action_check(&flippers, &sep, &sizes)
            });
        }
        None => {
            cert.skip(format!("separator one-dimensional at L = ({l},{l},{l})"), "no disentangler");
            cert.skip(format!("flippers move one term each at L = ({l},{l},{l})"), "no disentangler");
        }
    }
    cert
}

/// Surface terms followed by the two loop columns.
pub fn surface_terms(b: &ModelBundle) -> Result<PolyMatrix> {
    b.sigma_surf.hstack(&b.sigma_sfl)
}

/// Names the nontrivial surface charges by the loops they violate. Loop column 0 of
/// `σ_SFL` is the `f₂` loop and column 1 the `f₁` loop; `f_a` braids trivially with its own
/// loop, so `f₁` violates only the `f₂` loop, `f₂` only the `f₁` loop and `f₃` both.
pub fn fermion_label(charge: &ChargeType, surf_columns: usize) -> Option<&'static str> {
    let hits = |c: usize| charge.violated.iter().any(|(col, _)| *col == c);
    match (hits(surf_columns), hits(surf_columns + 1)) {
        (true, false) => Some("f₁"),
        (false, true) => Some("f₂"),
        (true, true) => Some("f₃"),
        (false, false) => None,
    }
}

fn spins(terms: &Instantiated, charges: &[ChargeType]) -> Result<Vec<i8>> {
    let l = terms.torus.sizes();
    let center = terms.torus.cell(&[l[0] as i64 / 2, l[1] as i64 / 2]);
    charges
        .iter()
        .map(|c| {
            let [t1, t2, t3] = t_junction(terms, center, c, 3)?;
            topological_spin(&t1, &t2, &t3)
        })
        .collect()
}

/// `M[i][j]` for every ordered pair of charges.
fn braiding_matrix(terms: &Instantiated, charges: &[ChargeType]) -> Result<Vec<Vec<i8>>> {
    charges
        .iter()
        .map(|a| {
            charges
                .iter()
                .map(|c| {
                    let (sa, sc) = crossing_strings(terms, a, c)?;
                    mutual_braiding(&sa, &sc)
                })
                .collect()
        })
        .collect()
}

/// Anyons of the surface on an `l × l` torus from solver-derived strings: exactly three
/// nontrivial charges, all fermions, braiding pairwise with `−1`. A toric-code control on the
/// same torus must give two bosons.
pub fn surface_anyons(b: &ModelBundle, l: usize) -> Certificate {
    let mut cert = Certificate::new(format!("walker-wang surface anyons at L = ({l},{l})"));
    let cols = b.sigma_surf.cols();
    let mut found: Option<(Instantiated, Vec<(&'static str, ChargeType)>)> = None;
    cert.record("three surface charges f₁, f₂, f₃", || {
        let terms = instantiate(&surface_terms(b)?, &[l, l])?;
        let charges = charge_types(&terms, 3)?;
        let mut named = Vec::new();
        for c in charges {
            let label = fermion_label(&c, cols)
                .ok_or_else(|| Error::Verification(format!("charge {:?} violates no loop", c.violated)))?;
            named.push((label, c));
        }
        named.sort_by_key(|(label, _)| *label);
        let labels: Vec<&str> = named.iter().map(|(n, _)| *n).collect();
        let ok = labels == ["f₁", "f₂", "f₃"];
        found = Some((terms, named));
        Ok((ok, labels.join(", ")))
    });
    let Some((terms, named)) = found.filter(|(_, n)| n.len() == 3) else {
        for a in ["f₁", "f₂", "f₃"] {
            cert.skip(format!("θ({a}) = −1"), "no charges");
        }
        cert.skip("pairwise braiding −1", "no charges");
        return toric_control(cert, l);
    };
    let charges: Vec<ChargeType> = named.iter().map(|(_, c)| c.clone()).collect();
    let theta = spins(&terms, &charges);
    for (i, (label, _)) in named.iter().enumerate() {
        cert.record(format!("θ({label}) = −1"), || {
            let t = theta.clone()?[i];
            Ok((t == -1, format!("θ = {t}")))
        });
    }
    cert.record("pairwise braiding −1", || {
        let m = braiding_matrix(&terms, &charges)?;
        let ok = (0..3).all(|i| (0..3).all(|j| m[i][j] == if i == j { 1 } else { -1 }));
        Ok((ok, format!("{m:?}")))
    });
    toric_control(cert, l)
}

fn toric_control(mut cert: Certificate, l: usize) -> Certificate {
    cert.record("toric control: θ(e) = θ(m) = +1, θ(ε) = −1", || {
        let ring = Ring::new(2, 2)?;
        let toric = PolyMatrix::parse_rows(ring, &[&["1 + x", "0"], &["1 + y", "0"], &["0", "1 + y^-1"], &["0", "1 + x^-1"]])?;
        let terms = instantiate(&toric, &[l, l])?;
        let charges = charge_types(&terms, 3)?;
        let mut theta = spins(&terms, &charges)?;
        theta.sort_unstable();
        let m = braiding_matrix(&terms, &charges)?;
        let braids = (0..charges.len()).all(|i| (0..charges.len()).all(|j| m[i][j] == if i == j { 1 } else { -1 }));
        Ok((theta == [-1, 1, 1] && braids, format!("spins {theta:?}, braiding {m:?}")))
    });
    cert
}

/// Everything at once: bulk, surface, separator and disentangler, the finite-torus oracle at
/// `L = 2` and `3`, and the surface anyons at `8 × 8`.
pub fn demo(b: &ModelBundle, real_mode: bool) -> Result<Certificate> {
    let mut cert = Certificate::new("walker-wang demo");
    cert.extend(verify_bulk(b));
    cert.extend(verify_surface(b));
    let (sep, qca) = verify_separator_and_disentangler(b, real_mode)?;
    cert.extend(sep);
    for l in [2, 3] {
        cert.extend(oracle_concordance(b, l, qca.as_ref()));
    }
    cert.extend(surface_anyons(b, 8));
    Ok(cert)
}
