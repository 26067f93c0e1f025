//! One function per subcommand. Each returns a certificate and, for commands that compute a
//! matrix or gate list, its text.

use std::fs;
use std::path::Path;

use qca_forge::clifford::SymplecticQCA;
use qca_forge::forms1d::classify_form;
use qca_forge::lattice_oracle::{
    charge_types, crossing_strings, f2_rank_and_degeneracy, flipper_action_check, hall_matching, instantiate,
    mutual_braiding, scalar_in_group, separator_onedim_check, t_junction, topological_spin, verify_relation_signs,
    ChargeType, HallOutcome, Instantiated,
};
use qca_forge::pauli::{build_disentangler, build_separator, candidate_checks, lambda_form, reality_check, solve_flipper};
use qca_forge::walker_wang::{demo, ModelBundle};
use qca_forge::{
    AntiHermitianForm, Certificate, CoarseContext, Error, Exactness, GateList, PolyMatrix, Result, Ring,
    SeparatorCertificate, StabilizerMap,
};

use crate::report::Input;

/// Reads inputs and records their digests; optionally pins the ring of every matrix and
/// coarse-grains it.
pub struct Loader {
    pub inputs: Vec<Input>,
    pub prime: Option<u32>,
    pub dims: Option<usize>,
    pub coarse: Option<Vec<usize>>,
}

impl Loader {
    pub fn text(&mut self, path: &Path) -> Result<String> {
        let bytes = fs::read(path).map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))?;
        self.inputs.push(Input::new(path, &bytes));
        String::from_utf8(bytes).map_err(|_| Error::Malformed(format!("{} is not UTF-8 text", path.display())))
    }

    /// The matrix after `--coarse`, if given.
    pub fn matrix(&mut self, path: &Path) -> Result<PolyMatrix> {
        let m = self.raw_matrix(path)?;
        match self.coarse.as_deref() {
            None => Ok(m),
            Some(factors) => coarse_context(m.ring(), factors)?.coarse_matrix(&m),
        }
    }

    pub fn raw_matrix(&mut self, path: &Path) -> Result<PolyMatrix> {
        let m: PolyMatrix = self.text(path)?.parse()?;
        let ring = m.ring();
        if self.prime.is_some_and(|p| p != ring.p()) || self.dims.is_some_and(|d| d != ring.nvars()) {
            return Err(Error::Context(format!(
                "{} has p={} D={}, but --prime/--dims ask for p={} D={}",
                path.display(),
                ring.p(),
                ring.nvars(),
                self.prime.map_or("any".into(), |p| p.to_string()),
                self.dims.map_or("any".into(), |d| d.to_string()),
            )));
        }
        Ok(m)
    }
}

pub struct Output {
    pub cert: Certificate,
    /// Matrix or gate list text for `--out`.
    pub artifact: Option<String>,
}

impl Output {
    fn bare(cert: Certificate) -> Output {
        Output { cert, artifact: None }
    }
}

/// `(is_zero, "entry (i, j) = …")` with 1-based indices of the first nonzero entry.
fn zero_or_witness(m: &PolyMatrix) -> (bool, String) {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if !m[(i, j)].is_zero() {
                return (false, format!("entry ({}, {}) = {}", i + 1, j + 1, m[(i, j)]));
            }
        }
    }
    (true, "zero".into())
}

fn first_difference(a: &PolyMatrix, b: &PolyMatrix) -> String {
    if a.shape() != b.shape() {
        return format!("shapes {:?} and {:?}", a.shape(), b.shape());
    }
    match a.try_sub(b) {
        Ok(d) => zero_or_witness(&d).1,
        Err(e) => e.to_string(),
    }
}

pub fn verify_commuting(sigma: PolyMatrix) -> Result<Output> {
    let s = StabilizerMap::new(sigma)?;
    let mut cert = Certificate::new("verify-commuting");
    cert.record("σ†λσ = 0", || Ok(zero_or_witness(&s.commutation_matrix())));
    Ok(Output::bare(cert))
}

/// `unknown` is inconclusive, not a failure, so it is recorded as SKIP.
pub fn exactness(sigma: PolyMatrix) -> Result<Output> {
    let mut s = StabilizerMap::new(sigma)?;
    let mut cert = Certificate::new("exactness");
    if !cert.record("σ†λσ = 0", || Ok(zero_or_witness(&s.commutation_matrix()))) {
        cert.skip("ker σ†λ = im σ", "map is not commuting");
        return Ok(Output::bare(cert));
    }
    s.check_commuting();
    match s.check_exactness() {
        Ok(Exactness::Unknown) => {
            cert.skip("ker σ†λ = im σ", "unknown: the necessary conditions hold but I_q(σ) ≠ R (inconclusive)")
        }
        Ok(e) => {
            cert.record("ker σ†λ = im σ", || Ok((e == Exactness::Certified, e.to_string())));
        }
        Err(err) => {
            cert.record("ker σ†λ = im σ", || Err(err));
        }
    }
    Ok(Output::bare(cert))
}

/// Separator checks in the certificate; `None` when the separator could not be built.
fn separator_into(cert: &mut Certificate, sigma: PolyMatrix, candidate: Option<&PolyMatrix>) -> Result<Option<SeparatorCertificate>> {
    let s = StabilizerMap::new(sigma)?;
    match build_separator(&s, candidate) {
        Ok(sep) => {
            cert.extend(sep.checks.clone());
            Ok(Some(sep))
        }
        Err(e) => {
            match candidate.map(|c| candidate_checks(&s, c)) {
                Some(Ok(checks)) => cert.extend(checks),
                _ => {
                    cert.record("separator built", || Err(e));
                }
            }
            Ok(None)
        }
    }
}

pub fn separator(sigma: PolyMatrix, candidate: Option<&PolyMatrix>) -> Result<Output> {
    let mut cert = Certificate::new("separator");
    let sep = separator_into(&mut cert, sigma, candidate)?;
    Ok(Output { cert, artifact: sep.map(|s| s.sigma_sep.sigma().to_string()) })
}

pub fn flipper(sigma: PolyMatrix, candidate: Option<&PolyMatrix>) -> Result<Output> {
    let mut cert = Certificate::new("flipper");
    let Some(sep) = separator_into(&mut cert, sigma, candidate)? else { return Ok(Output::bare(cert)) };
    let mut flip = None;
    cert.record("flipper solved", || {
        flip = Some(solve_flipper(&sep)?);
        Ok((true, String::new()))
    });
    let Some(flip) = flip else { return Ok(Output::bare(cert)) };
    let s = &sep.sigma_sep;
    cert.record("F†λσ_sep = I", || {
        let g = &(&flip.f.dagger() * &s.lambda()) * s.sigma();
        let id = PolyMatrix::identity(s.ring(), s.t());
        Ok((g == id, first_difference(&g, &id)))
    });
    Ok(Output { cert, artifact: Some(flip.f.to_string()) })
}

pub fn disentangle(sigma: PolyMatrix, candidate: Option<&PolyMatrix>, real_mode: bool) -> Result<Output> {
    let mut cert = Certificate::new("disentangle");
    let Some(sep) = separator_into(&mut cert, sigma, candidate)? else { return Ok(Output::bare(cert)) };
    let mut qca: Option<SymplecticQCA> = None;
    cert.record(if real_mode { "disentangler built (real mode)" } else { "disentangler built" }, || {
        let flip = solve_flipper(&sep)?;
        qca = Some(build_disentangler(&sep, &flip, real_mode)?);
        Ok((true, String::new()))
    });
    let Some(q) = qca else { return Ok(Output::bare(cert)) };
    let s = &sep.sigma_sep;
    let ring = s.ring();
    cert.record("Q†λQ = λ", || {
        let l = lambda_form(ring, s.q());
        let g = &(&q.matrix().dagger() * &l) * q.matrix();
        Ok((g == l, first_difference(&g, &l)))
    });
    cert.record("Q⁻¹σ_sep = (0; I)", || {
        let trivial = PolyMatrix::zeros(ring, s.q(), s.q()).vstack(&PolyMatrix::identity(ring, s.q()))?;
        let img = q.inverse().matrix().try_mul(s.sigma())?;
        Ok((img == trivial, first_difference(&img, &trivial)))
    });
    if real_mode {
        cert.record("Q real", || Ok((reality_check(q.matrix())?, String::new())));
        cert.record("Q⁻¹ real", || Ok((reality_check(q.inverse().matrix())?, String::new())));
    }
    Ok(Output { cert, artifact: Some(q.matrix().to_string()) })
}

pub fn classify(xi: PolyMatrix, b_max: usize, degree_cap: usize) -> Result<Output> {
    let form = AntiHermitianForm::new(xi)?;
    let mut cert = Certificate::new("classify-form");
    let mut found = None;
    cert.record("classified", || {
        let c = classify_form(&form, b_max, degree_cap)?;
        let detail = format!("b={} s={} t={} zero={}", c.b, c.s, c.t, c.rank0);
        found = Some(c);
        Ok((true, detail))
    });
    let Some(c) = found else { return Ok(Output::bare(cert)) };
    cert.record("E†φ⁽ᵇ⁾(Ξ)E = ξ^⊕s ⊕ λ₁^⊕t ⊕ 0", || Ok((c.verify(&form)?, String::new())));
    Ok(Output { cert, artifact: Some(c.witness.to_string()) })
}

/// One factor means every axis.
fn coarse_context(ring: Ring, factors: &[usize]) -> Result<CoarseContext> {
    match factors {
        [n] => CoarseContext::uniform(ring, *n),
        ns => CoarseContext::new(ring, ns.to_vec()),
    }
}

pub fn coarse_grain(m: PolyMatrix, factors: &[usize]) -> Result<Output> {
    let ctx = coarse_context(m.ring(), factors)?;
    let mut cert = Certificate::new("coarse-grain");
    let mut out = None;
    cert.record("φ computed", || {
        let c = ctx.coarse_matrix(&m)?;
        let detail = format!("{:?} → {:?} with block {}", m.shape(), c.shape(), ctx.block());
        out = Some(c);
        Ok((true, detail))
    });
    let Some(c) = out else { return Ok(Output::bare(cert)) };
    if SymplecticQCA::new(m.clone()).is_ok() {
        cert.record("φ(Q) symplectic", || Ok((SymplecticQCA::new(c.clone()).is_ok(), String::new())));
    }
    Ok(Output { cert, artifact: Some(c.to_string()) })
}

pub fn replay(gates: &str, ring: Ring, q: usize, target: Option<&PolyMatrix>) -> Result<Output> {
    let list = GateList::parse(ring, q, gates)?;
    let product = list.product();
    let mut cert = Certificate::new("replay");
    cert.record("gate list parsed", || Ok((true, format!("{} gates on {q} qudits, {} shifts", list.len(), list.shift_count()))));
    if let Some(t) = target {
        cert.record("product equals target", || Ok((product.matrix() == t, first_difference(product.matrix(), t))));
    }
    Ok(Output { cert, artifact: Some(product.matrix().to_string()) })
}

/// `--size 4` means 4 along every axis.
pub fn sizes(given: &[usize], d: usize) -> Result<Vec<usize>> {
    match given {
        [l] => Ok(vec![*l; d]),
        ls if ls.len() == d => Ok(ls.to_vec()),
        ls => Err(Error::Shape(format!("{} torus sizes for {d} variables", ls.len()))),
    }
}

fn label(l: &[usize]) -> String {
    let parts: Vec<String> = l.iter().map(usize::to_string).collect();
    format!("L = ({})", parts.join(","))
}

pub fn oracle_degeneracy(sigma: &PolyMatrix, l: &[usize]) -> Result<Output> {
    let inst = instantiate(sigma, l)?;
    let mut cert = Certificate::new(format!("oracle degeneracy at {}", label(l)));
    cert.record("ground-space degeneracy", || {
        let d = f2_rank_and_degeneracy(&inst.ops)?;
        let value = d.value().map_or_else(|| format!("{}^{}", d.p, d.log_p()), |v| v.to_string());
        Ok((true, format!("{value} ({} generators of rank {} on {} qudits)", inst.ops.len(), d.rank, d.qudits)))
    });
    cert.record("no nontrivial scalar in the stabilizer group", || {
        Ok(match scalar_in_group(&inst.ops)? {
            None => (true, String::new()),
            Some(rel) => {
                let used: Vec<usize> = rel.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| i).collect();
                (false, format!("product of generators {used:?} is a nontrivial scalar"))
            }
        })
    });
    Ok(Output::bare(cert))
}

pub fn oracle_signs(sigma: &PolyMatrix, k: &PolyMatrix, l: &[usize]) -> Result<Output> {
    let mut cert = Certificate::new(format!("oracle relation signs at {}", label(l)));
    cert.record("relation products are +I", || verify_relation_signs(sigma, k, l));
    Ok(Output::bare(cert))
}

pub fn oracle_separator(sep: &PolyMatrix, l: &[usize]) -> Result<Output> {
    let mut cert = Certificate::new(format!("oracle separator at {}", label(l)));
    cert.record("joint eigenspaces are one-dimensional", || separator_onedim_check(sep, l));
    Ok(Output::bare(cert))
}

pub fn oracle_flipper(f: &PolyMatrix, sep: &PolyMatrix, l: &[usize]) -> Result<Output> {
    let mut cert = Certificate::new(format!("oracle flipper at {}", label(l)));
    cert.record("each flipper moves exactly its own term", || flipper_action_check(f, sep, l));
    Ok(Output::bare(cert))
}

/// String geometry is planar; reporting zero charges for other dimensions would pass vacuously.
fn charges(terms: &PolyMatrix, l: &[usize]) -> Result<(Instantiated, Vec<ChargeType>)> {
    if l.len() != 2 {
        return Err(Error::Unsupported(format!("string operators need D = 2, got D = {}", l.len())));
    }
    let inst = instantiate(terms, l)?;
    let ch = charge_types(&inst, 3)?;
    Ok((inst, ch))
}

fn describe(c: &ChargeType) -> String {
    let parts: Vec<String> = c.violated.iter().map(|(col, off)| format!("{}@{off:?}", col + 1)).collect();
    parts.join(" ")
}

pub fn oracle_spin(terms: &PolyMatrix, l: &[usize]) -> Result<Output> {
    let mut cert = Certificate::new(format!("oracle topological spin at {}", label(l)));
    let mut found = None;
    cert.record("charges found", || {
        let (inst, ch) = charges(terms, l)?;
        let n = ch.len();
        found = Some((inst, ch));
        Ok((true, format!("{n} nontrivial charge classes")))
    });
    let Some((inst, ch)) = found else { return Ok(Output::bare(cert)) };
    let center = inst.torus.cell(&inst.torus.sizes().iter().map(|&s| s as i64 / 2).collect::<Vec<_>>());
    for (i, c) in ch.iter().enumerate() {
        cert.record(format!("θ of charge {}", i + 1), || {
            let [t1, t2, t3] = t_junction(&inst, center, c, 3)?;
            let theta = topological_spin(&t1, &t2, &t3)?;
            Ok((true, format!("θ = {theta:+} for violations {}", describe(c))))
        });
    }
    Ok(Output::bare(cert))
}

pub fn oracle_braid(terms: &PolyMatrix, l: &[usize]) -> Result<Output> {
    let mut cert = Certificate::new(format!("oracle mutual braiding at {}", label(l)));
    let mut found = None;
    cert.record("charges found", || {
        let (inst, ch) = charges(terms, l)?;
        let n = ch.len();
        found = Some((inst, ch));
        Ok((true, format!("{n} nontrivial charge classes")))
    });
    let Some((inst, ch)) = found else { return Ok(Output::bare(cert)) };
    for (i, a) in ch.iter().enumerate() {
        for (j, b) in ch.iter().enumerate().skip(i) {
            cert.record(format!("braiding of charges {} and {}", i + 1, j + 1), || {
                let (sa, sb) = crossing_strings(&inst, a, b)?;
                Ok((true, format!("{:+}", mutual_braiding(&sa, &sb)?)))
            });
        }
    }
    Ok(Output::bare(cert))
}

/// Every instance of every separator column is an element located at its anchor cell;
/// every qudit is a degree of freedom located at its cell. All have dimension `p`.
pub fn oracle_match(sep: &PolyMatrix, l: &[usize], radius: usize) -> Result<Output> {
    let inst = instantiate(sep, l)?;
    let t = &inst.torus;
    let elements: Vec<(usize, u32)> = (0..inst.ops.len()).map(|i| (inst.anchor(i).1, t.p())).collect();
    let dofs: Vec<(usize, u32)> = (0..t.n()).map(|s| (t.cell_of(s), t.p())).collect();
    let mut cert = Certificate::new(format!("oracle Hall matching at {}", label(l)));
    cert.record(format!("perfect matching within radius {radius}"), || {
        Ok(match hall_matching(&elements, &dofs, radius, |a, b| t.distance(a, b)) {
            HallOutcome::Perfect(m) => (true, format!("{} elements matched", m.len())),
            HallOutcome::ElementDeficit(w) => {
                (false, format!("elements {:?} have fewer acceptable qudits than members", &w[..w.len().min(16)]))
            }
            HallOutcome::DofDeficit(w) => {
                (false, format!("qudits {:?} have fewer acceptable elements than members", &w[..w.len().min(16)]))
            }
        })
    });
    Ok(Output::bare(cert))
}

pub fn demo_walker_wang(real_mode: bool, export: Option<&Path>) -> Result<Output> {
    let b = ModelBundle::load()?;
    if let Some(dir) = export {
        fs::create_dir_all(dir).map_err(|e| Error::Malformed(format!("cannot create {}: {e}", dir.display())))?;
        let candidate = b.separator_candidate()?.to_string();
        let files = ModelBundle::files().into_iter().chain([("separator_candidate.mat", candidate.as_str())]);
        for (name, text) in files {
            let path = dir.join(name);
            fs::write(&path, text).map_err(|e| Error::Malformed(format!("cannot write {}: {e}", path.display())))?;
        }
    }
    Ok(Output::bare(demo(&b, real_mode)?))
}
