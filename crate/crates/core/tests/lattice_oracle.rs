mod common;

use std::sync::OnceLock;

use common::*;
use proptest::prelude::*;
use qca_forge::lattice_oracle::{
    charge_types, crossing_strings, derive_string_operator, f2_rank_and_degeneracy, first_noncommuting_pair,
    flipper_action_check, hall_matching, instantiate, instantiate_with, majorana_image, majorana_rep_check,
    mutual_braiding, scalar_in_group, separator_onedim_check, t_junction, topological_spin, verify_relation_signs,
    verify_relation_signs_on, ChargeType, HallOutcome, Instantiated, MajoranaOp, MajoranaSystem, PhaseConvention,
    TorusInstance, TorusPauli,
};
use qca_forge::pauli::{build_separator, solve_flipper};
use qca_forge::walker_wang::ModelBundle;
use qca_forge::{Error, PolyMatrix, Ring, StabilizerMap};
use rand::Rng;

fn r(p: u32, d: usize) -> Ring {
    Ring::new(p, d).unwrap()
}

fn m(ring: Ring, rows: &[&[&str]]) -> PolyMatrix {
    PolyMatrix::parse_rows(ring, rows).unwrap()
}

fn cluster() -> PolyMatrix {
    m(r(2, 1), &[&["1"], &["x + x^-1"]])
}

fn toric() -> PolyMatrix {
    m(r(2, 2), &[&["1 + x", "0"], &["1 + y", "0"], &["0", "1 + y^-1"], &["0", "1 + x^-1"]])
}

fn bundle() -> &'static ModelBundle {
    static B: OnceLock<ModelBundle> = OnceLock::new();
    B.get_or_init(|| ModelBundle::load().unwrap())
}

fn ww_separator() -> &'static (PolyMatrix, PolyMatrix) {
    static S: OnceLock<(PolyMatrix, PolyMatrix)> = OnceLock::new();
    S.get_or_init(|| {
        let b = bundle();
        let s = StabilizerMap::new(b.sigma.clone()).unwrap();
        let sep = build_separator(&s, Some(&b.separator_candidate().unwrap())).unwrap();
        let f = solve_flipper(&sep).unwrap();
        (sep.sigma_sep.sigma().clone(), f.f)
    })
}

struct Surface {
    terms: Instantiated,
    charges: Vec<ChargeType>,
}

/// Surface terms followed by the two loop columns, on an 8×8 torus.
fn surface() -> &'static Surface {
    static S: OnceLock<Surface> = OnceLock::new();
    S.get_or_init(|| {
        let b = bundle();
        let terms = instantiate(&b.sigma_surf.hstack(&b.sigma_sfl).unwrap(), &[8, 8]).unwrap();
        let charges = charge_types(&terms, 3).unwrap();
        Surface { terms, charges }
    })
}

/// Which of the two loop columns (8 and 9 of the surface terms) a charge violates.
fn loop_signature(c: &ChargeType) -> (bool, bool) {
    (c.violated.iter().any(|(col, _)| *col == 8), c.violated.iter().any(|(col, _)| *col == 9))
}

fn qubit(n: usize, xs: &[usize], zs: &[usize]) -> TorusPauli {
    let (mut x, mut z) = (vec![0; n], vec![0; n]);
    for &s in xs {
        x[s] ^= 1;
    }
    for &s in zs {
        z[s] ^= 1;
    }
    TorusPauli::hermitian(2, x, z).unwrap()
}

/// Commutation phase of two instances read off the symbolic product: the coefficients of
/// `(σ†λσ)_{ij}` at every exponent congruent to `u − w` modulo the torus.
fn symbolic_phase(form: &PolyMatrix, i: usize, j: usize, u: &[i64], w: &[i64], l: &[usize]) -> u32 {
    let p = form.ring().p();
    form[(i, j)]
        .terms()
        .iter()
        .filter(|(e, _)| (0..l.len()).all(|k| (e[k] as i64 - (u[k] - w[k])).rem_euclid(l[k] as i64) == 0))
        .fold(0, |acc, (_, c)| (acc + c) % p)
}

#[test]
fn torus_geometry() {
    let t = TorusInstance::new(2, 3, vec![4, 5]).unwrap();
    assert_eq!((t.cells(), t.n()), (20, 60));
    assert_eq!(t.coords(t.cell(&[-1, 7])), vec![3, 2]);
    assert_eq!(t.distance(t.cell(&[0, 0]), t.cell(&[3, 4])), 1);
    assert_eq!(t.ball(t.cell(&[0, 0]), 1).len(), 9);
    assert!(matches!(TorusInstance::new(2, 1, vec![1, 4]), Err(Error::Malformed(_))));
    assert!(matches!(TorusInstance::new(2, 1, vec![200, 200]), Err(Error::Unsupported(_))));
}

#[test]
fn instantiation_examples() {
    let c = instantiate(&cluster(), &[4]).unwrap();
    assert_eq!(c.ops.len(), 4);
    assert_eq!(c.ops[1], qubit(4, &[1], &[0, 2]));
    assert_eq!(f2_rank_and_degeneracy(&c.ops).unwrap().value(), Some(1));

    let trivial = m(r(2, 2), &[&["0", "0"], &["0", "0"], &["1", "0"], &["0", "1"]]);
    let t = instantiate(&trivial, &[2, 2]).unwrap();
    assert_eq!(t.ops.len(), 8);
    assert!(t.ops.iter().all(|o| o.weight() == 1 && o.x().iter().all(|&v| v == 0)));
    assert_eq!(f2_rank_and_degeneracy(&t.ops).unwrap().value(), Some(1));

    let ww = instantiate(&bundle().sigma, &[2, 2, 2]).unwrap();
    assert_eq!(ww.ops.len(), 64);
    let d = f2_rank_and_degeneracy(&ww.ops).unwrap();
    assert_eq!((d.qudits, d.rank, d.value()), (48, 48, Some(1)));
    assert_eq!(scalar_in_group(&ww.ops).unwrap(), None);

    let tc = instantiate(&toric(), &[2, 2]).unwrap();
    assert_eq!(f2_rank_and_degeneracy(&tc.ops).unwrap().value(), Some(4));
    let tc = instantiate(&toric(), &[3, 4]).unwrap();
    assert_eq!(f2_rank_and_degeneracy(&tc.ops).unwrap().value(), Some(4));

    assert!(matches!(instantiate(&toric(), &[4]), Err(Error::Shape(_))));
}

#[test]
fn degeneracy_needs_commuting_generators() {
    let ops = [qubit(1, &[0], &[]), qubit(1, &[], &[0])];
    assert!(matches!(f2_rank_and_degeneracy(&ops), Err(Error::Precondition(_))));
    assert_eq!(first_noncommuting_pair(&ops), Some((0, 1)));
}

#[test]
fn scalar_in_group_finds_minus_identity() {
    let x = qubit(2, &[0], &[]);
    let xx = qubit(2, &[0, 1], &[]);
    let x1 = qubit(2, &[1], &[]);
    assert_eq!(scalar_in_group(&[x.clone(), xx.clone(), x1.clone()]).unwrap(), None);
    let rel = scalar_in_group(&[x, xx, x1.times_omega(1)]).unwrap();
    assert_eq!(rel, Some(vec![1, 1, 1]));
}

#[test]
fn relation_signs() {
    let b = bundle();
    let (ok, detail) = verify_relation_signs(&b.sigma, &b.k, &[2, 2, 2]).unwrap();
    assert!(ok, "{detail}");
    let mut inst = instantiate(&b.sigma, &[2, 2, 2]).unwrap();
    inst.ops[0] = inst.ops[0].times_omega(1);
    let (ok, detail) = verify_relation_signs_on(&inst, &b.k).unwrap();
    assert!(!ok);
    assert!(detail.contains("phase"), "{detail}");

    // On a finite torus the product of every star is a relation: K = (Σ_v x^v; 0).
    let ring = r(2, 2);
    let all: Vec<String> = (0..3).flat_map(|i| (0..4).map(move |j| format!("x^{i}*y^{j}"))).collect();
    let f = ring.parse(&all.join(" + ")).unwrap();
    let k = PolyMatrix::from_columns(ring, &[vec![f, ring.zero()]]).unwrap();
    let (ok, detail) = verify_relation_signs(&toric(), &k, &[3, 4]).unwrap();
    assert!(ok, "{detail}");

    // A relation column that is not a relation at all.
    let not_rel = PolyMatrix::from_fn(b.bulk_ring(), 8, 1, |i, _| if i == 0 { b.bulk_ring().one() } else { b.bulk_ring().zero() });
    let (ok, detail) = verify_relation_signs(&b.sigma, &not_rel, &[2, 2, 2]).unwrap();
    assert!(!ok);
    assert!(detail.contains("not a relation"), "{detail}");
}

#[test]
fn separator_one_dimensionality() {
    let (sep, _) = ww_separator();
    let (ok, detail) = separator_onedim_check(sep, &[2, 2, 2]).unwrap();
    assert!(ok, "{detail}");
    assert!(separator_onedim_check(&cluster(), &[5]).unwrap().0);
    let (ok, _) = separator_onedim_check(&toric(), &[3, 3]).unwrap();
    assert!(!ok);
}

#[test]
fn flipper_action() {
    let z = m(r(2, 1), &[&["0"], &["1"]]);
    assert!(flipper_action_check(&z, &cluster(), &[6]).unwrap().0);
    let x = m(r(2, 1), &[&["1"], &["0"]]);
    assert!(!flipper_action_check(&x, &cluster(), &[6]).unwrap().0);

    let (sep, f) = ww_separator();
    let (ok, detail) = flipper_action_check(f, sep, &[3, 3, 3]).unwrap();
    assert!(ok, "{detail}");
    let mut broken = f.clone();
    for i in 0..broken.rows() {
        broken[(i, 0)] = broken.ring().zero();
    }
    assert!(!flipper_action_check(&broken, sep, &[2, 2, 2]).unwrap().0);
}

#[test]
fn toric_charges_spins_and_braiding() {
    let terms = instantiate(&toric(), &[8, 8]).unwrap();
    let charges = charge_types(&terms, 3).unwrap();
    assert_eq!(charges.len(), 3);
    let center = terms.torus.cell(&[4, 4]);
    let spins: Vec<i8> = charges
        .iter()
        .map(|c| {
            let [a, b, d] = t_junction(&terms, center, c, 3).unwrap();
            topological_spin(&a, &b, &d).unwrap()
        })
        .collect();
    // e and m are bosons and their composite is a fermion.
    let id = TorusPauli::identity(2, terms.torus.n());
    assert_eq!(topological_spin(&id, &id, &id).unwrap(), 1);
    let mut sorted = spins.clone();
    sorted.sort();
    assert_eq!(sorted, vec![-1, 1, 1]);
    for (i, a) in charges.iter().enumerate() {
        for (j, b) in charges.iter().enumerate() {
            let (sa, sb) = crossing_strings(&terms, a, b).unwrap();
            assert_eq!(mutual_braiding(&sa, &sb).unwrap(), if i == j { 1 } else { -1 }, "{a:?} {b:?}");
        }
    }
}

#[test]
fn surface_is_three_fermions() {
    let s = surface();
    let cells = s.terms.torus.cells();
    // The loops commute with every surface term; the surface terms alone do not commute.
    assert!(s.terms.ops[8 * cells..].iter().all(|l| s.terms.ops.iter().all(|g| g.commutes(l))));
    assert!(first_noncommuting_pair(&s.terms.ops[..8 * cells]).is_some());
    assert_eq!(s.charges.len(), 3);
    let mut sigs: Vec<(bool, bool)> = s.charges.iter().map(loop_signature).collect();
    sigs.sort();
    assert_eq!(sigs, vec![(false, true), (true, false), (true, true)]);
    let center = s.terms.torus.cell(&[4, 4]);
    for c in &s.charges {
        let [a, b, d] = t_junction(&s.terms, center, c, 3).unwrap();
        assert_eq!(topological_spin(&a, &b, &d).unwrap(), -1, "{c:?}");
    }
    for (i, a) in s.charges.iter().enumerate() {
        for (j, b) in s.charges.iter().enumerate() {
            let (sa, sb) = crossing_strings(&s.terms, a, b).unwrap();
            assert_eq!(mutual_braiding(&sa, &sb).unwrap(), if i == j { 1 } else { -1 });
        }
    }
}

#[test]
fn closed_strings_are_generated_by_terms() {
    let s = surface();
    let t = &s.terms.torus;
    let path: Vec<usize> =
        [[2, 2], [3, 2], [4, 2], [4, 3], [4, 4], [3, 4], [2, 4], [2, 3], [2, 2]].iter().map(|c| t.cell(c)).collect();
    let op = derive_string_operator(&s.terms, &path, &s.charges[0]).unwrap().unwrap();
    assert!(!op.is_identity());
    assert!(s.terms.ops.iter().all(|g| g.commutes(&op)));
    // It is a product of small loops.
    let cells = t.cells();
    let mut rows: Vec<Vec<u32>> = s.terms.ops[8 * cells..].iter().map(TorusPauli::symplectic).collect();
    let before = rank_mod_p(&rows, 2);
    rows.push(op.symplectic());
    assert_eq!(rank_mod_p(&rows, 2), before);
}

#[test]
fn string_paths_are_validated() {
    let s = surface();
    let t = &s.terms.torus;
    let gap = [t.cell(&[0, 0]), t.cell(&[2, 0])];
    assert!(matches!(derive_string_operator(&s.terms, &gap, &s.charges[0]), Err(Error::Malformed(_))));
    let short = [t.cell(&[0, 0]), t.cell(&[1, 0])];
    assert!(matches!(derive_string_operator(&s.terms, &short, &s.charges[0]), Err(Error::Malformed(_))));
    let long: Vec<usize> = (1..7).map(|x| t.cell(&[x, 3])).collect();
    assert!(matches!(derive_string_operator(&s.terms, &long, &s.charges[0]), Err(Error::Unsupported(_))));
    let p3 = instantiate(&m(r(3, 1), &[&["1"], &["x + x^-1"]]), &[6]).unwrap();
    assert!(matches!(charge_types(&p3, 3), Err(Error::Unsupported(_))));
}

#[test]
fn hall_matching_examples() {
    let line = |a: usize, b: usize| a.abs_diff(b);
    let elems = [(0, 2), (1, 2), (2, 2)];
    assert_eq!(hall_matching(&elems, &elems, 0, line), HallOutcome::Perfect(vec![0, 1, 2]));
    // Two elements competing for one qudit of their dimension.
    let out = hall_matching(&[(0, 2), (0, 2)], &[(0, 2), (0, 3)], 1, line);
    assert_eq!(out, HallOutcome::ElementDeficit(vec![0, 1]));
    let out = hall_matching(&[(0, 2)], &[(0, 2), (5, 2)], 1, line);
    assert!(matches!(out, HallOutcome::DofDeficit(ref w) if w.len() == 1));
    let out = hall_matching(&[(0, 2), (9, 2)], &[(0, 2), (1, 2)], 2, line);
    assert!(matches!(out, HallOutcome::ElementDeficit(ref w) if w == &vec![1]));

    let (sep, _) = ww_separator();
    let t = TorusInstance::new(2, sep.rows() / 2, vec![3, 3, 3]).unwrap();
    let elems: Vec<(usize, u32)> = (0..sep.cols()).flat_map(|_| (0..t.cells()).map(|v| (v, 2))).collect();
    let dofs: Vec<(usize, u32)> = (0..t.n()).map(|s| (t.cell_of(s), 2)).collect();
    for radius in [0, 5] {
        match hall_matching(&elems, &dofs, radius, |a, b| t.distance(a, b)) {
            HallOutcome::Perfect(assign) => {
                let mut seen = assign.clone();
                seen.sort();
                seen.dedup();
                assert_eq!(seen.len(), dofs.len());
                assert!(assign.iter().zip(&elems).all(|(&j, &(v, _))| t.distance(v, dofs[j].0) <= radius));
            }
            other => panic!("{other:?}"),
        }
    }
}

fn loops(l: usize, convention: PhaseConvention) -> Instantiated {
    instantiate_with(&bundle().sigma_sfl.columns_range(0..1), &[l, l], convention).unwrap()
}

#[test]
fn majorana_representation() {
    for l in [4, 6] {
        let lp = loops(l, PhaseConvention::XThenZ);
        let sys = MajoranaSystem::new(lp.torus.clone(), (2, 3)).unwrap();
        let (ok, detail) = majorana_rep_check(&sys, &lp).unwrap();
        assert!(ok, "{detail}");
    }
    // With Y on the doubly occupied edges the same loop is −1 times the star-plaquette product.
    let lh = loops(4, PhaseConvention::Hermitian);
    let sys = MajoranaSystem::new(lh.torus.clone(), (2, 3)).unwrap();
    assert!(!majorana_rep_check(&sys, &lh).unwrap().0);

    let lp = loops(4, PhaseConvention::XThenZ);
    let n = lp.torus.n();
    assert_eq!(majorana_image(&sys, &lp, &sys.generators[0]).unwrap(), MajoranaOp::new(1, &[1, 0]));
    let two = sys.generators[1].try_mul(&sys.generators[4]).unwrap();
    assert_eq!(majorana_image(&sys, &lp, &two).unwrap(), sys.images[1].mul(&sys.images[4]));
    // An edge operator violating a loop is outside the commutant.
    let violator = qubit(n, &[], &[lp.torus.site(0, 2)]);
    assert!(matches!(majorana_image(&sys, &lp, &violator), Err(Error::Precondition(_))));
    let elsewhere = qubit(n, &[], &[lp.torus.site(0, 0)]);
    assert!(matches!(majorana_image(&sys, &lp, &elsewhere), Err(Error::Precondition(_))));
    assert!(matches!(MajoranaSystem::new(loops(3, PhaseConvention::XThenZ).torus, (2, 3)), Err(Error::Unsupported(_))));
}

#[test]
fn majorana_algebra() {
    let a = MajoranaOp::new(0, &[3, 1]);
    assert_eq!(a, MajoranaOp { phase: 2, modes: vec![1, 3] });
    assert!(a.mul(&a).phase == 2 && a.mul(&a).modes.is_empty());
    assert!(!MajoranaOp::new(0, &[1]).commutes(&MajoranaOp::new(0, &[2])));
    assert!(MajoranaOp::new(0, &[1, 2]).commutes(&MajoranaOp::new(0, &[3, 4])));
    assert!(!MajoranaOp::new(0, &[1, 2]).commutes(&MajoranaOp::new(0, &[2, 3])));
}

fn arb_pauli(p: u32, n: usize) -> impl Strategy<Value = TorusPauli> {
    let units = if p == 2 { 4 } else { p };
    (proptest::collection::vec(0..p, n), proptest::collection::vec(0..p, n), 0..units)
        .prop_map(move |(x, z, ph)| TorusPauli::from_parts(p, x, z, ph).unwrap())
}

fn arb_triple() -> impl Strategy<Value = (TorusPauli, TorusPauli, TorusPauli)> {
    prop_oneof![Just(2u32), Just(3u32), Just(5u32)]
        .prop_flat_map(|p| (arb_pauli(p, 3), arb_pauli(p, 3), arb_pauli(p, 3)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn phase_tracking_is_associative((a, b, c) in arb_triple()) {
        let left = a.try_mul(&b).unwrap().try_mul(&c).unwrap();
        let right = a.try_mul(&b.try_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(a.try_mul(&b).unwrap().dagger(), b.dagger().try_mul(&a.dagger()).unwrap());
        prop_assert!(a.try_mul(&a.dagger()).unwrap().is_identity());
        // Group commutator phase against the symplectic form.
        let ab = a.try_mul(&b).unwrap();
        let ba = b.try_mul(&a).unwrap();
        let units = if a.p() == 2 { 2 } else { 1 };
        let modulus = if a.p() == 2 { 4 } else { a.p() };
        prop_assert_eq!((ba.phase() + units * a.commutation(&b)) % modulus, ab.phase());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn instantiated_phases_match_symbolic_form(seed in any::<u64>(), p in prop_oneof![Just(2u32), Just(3u32)], d in 1usize..=3, l in 2usize..=3) {
        let mut g = rng(seed);
        let ring = r(p, d);
        let q = g.gen_range(1..=2);
        let sigma = matrix(&mut g, ring, 2 * q, 2, 3, 1);
        let form = sigma.dagger().try_mul(&lambda(ring, q)).unwrap().try_mul(&sigma).unwrap();
        let sizes = vec![l; d];
        let inst = instantiate(&sigma, &sizes).unwrap();
        for a in 0..inst.ops.len() {
            for b in 0..inst.ops.len() {
                let ((i, u), (j, w)) = (inst.anchor(a), inst.anchor(b));
                let expect = symbolic_phase(&form, i, j, &inst.torus.coords(u), &inst.torus.coords(w), &sizes);
                prop_assert_eq!(inst.ops[a].commutation(&inst.ops[b]), expect);
            }
        }
    }

    #[test]
    fn commuting_maps_instantiate_to_commuting_sets(seed in any::<u64>(), p in prop_oneof![Just(2u32), Just(3u32)], d in 1usize..=3, l in 2usize..=3) {
        let mut g = rng(seed);
        let ring = r(p, d);
        let q = 2;
        let word = gate_word(&mut g, ring, q, 6);
        let zs = PolyMatrix::from_fn(ring, 2 * q, q, |i, j| if i == q + j { ring.one() } else { ring.zero() });
        let sigma = word.product().matrix().try_mul(&zs).unwrap();
        let form = sigma.dagger().try_mul(&lambda(ring, q)).unwrap().try_mul(&sigma).unwrap();
        prop_assert!(form.is_zero());
        let sizes = vec![l; d];
        let inst = instantiate(&sigma, &sizes).unwrap();
        prop_assert_eq!(first_noncommuting_pair(&inst.ops), None);
        prop_assert_eq!(f2_rank_and_degeneracy(&inst.ops).unwrap().value(), Some(1));
        let (ok, detail) = separator_onedim_check(&sigma, &sizes).unwrap();
        prop_assert!(ok, "{}", detail);
        // The Z columns moved by the same circuit flip exactly their partners.
        let xs = PolyMatrix::from_fn(ring, 2 * q, q, |i, j| if i == j { ring.one() } else { ring.zero() });
        let flip = word.product().matrix().try_mul(&xs).unwrap();
        let (ok, detail) = flipper_action_check(&flip, &sigma, &sizes).unwrap();
        prop_assert!(ok, "{}", detail);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn spin_is_stable_under_distant_loops(which in 0usize..3, picks in proptest::collection::vec(any::<prop::sample::Index>(), 1..6)) {
        let s = surface();
        let t = &s.terms.torus;
        let center = t.cell(&[4, 4]);
        let c = &s.charges[which];
        let [a, b, d] = t_junction(&s.terms, center, c, 3).unwrap();
        let theta = topological_spin(&a, &b, &d).unwrap();
        // Loop terms are central among the surface terms; those anchored at distance at least 2
        // from every endpoint also commute with all three legs.
        let ends = [center, t.cell(&[7, 4]), t.cell(&[4, 7]), t.cell(&[1, 1])];
        let far: Vec<usize> = (0..s.terms.ops.len())
            .filter(|&i| s.terms.anchor(i).0 >= 8 && ends.iter().all(|&e| t.distance(s.terms.anchor(i).1, e) >= 2))
            .collect();
        let mut legs = [a, b, d];
        for (k, idx) in picks.iter().enumerate() {
            let term = &s.terms.ops[far[idx.index(far.len())]];
            legs[k % 3] = legs[k % 3].try_mul(term).unwrap();
        }
        prop_assert_eq!(topological_spin(&legs[0], &legs[1], &legs[2]).unwrap(), theta);
    }
}
