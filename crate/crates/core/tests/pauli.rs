mod common;

use common::*;
use proptest::prelude::*;
use qca_forge::pauli::{
    build_disentangler, build_e, build_separator, hermitian_split, lambda_form, no_charge_flippability, reality_check,
    solve_flipper, trim_redundant_generators,
};
use qca_forge::polymat::{kernel_basis, ColumnModule};
use qca_forge::{Error, Exactness, PolyMatrix, Ring, StabilizerMap};

fn r(p: u32, d: usize) -> Ring {
    Ring::new(p, d).unwrap()
}

fn map(ring: Ring, rows: &[&[&str]]) -> StabilizerMap {
    StabilizerMap::new(PolyMatrix::parse_rows(ring, rows).unwrap()).unwrap()
}

fn cluster() -> StabilizerMap {
    map(r(2, 1), &[&["1"], &["x + x^-1"]])
}

fn toric() -> StabilizerMap {
    map(r(2, 2), &[&["1 + x", "0"], &["1 + y", "0"], &["0", "1 + y^-1"], &["0", "1 + x^-1"]])
}

#[test]
fn lambda_examples() {
    let l2 = lambda_form(r(2, 1), 1);
    assert_eq!(l2, PolyMatrix::parse_rows(r(2, 1), &[&["0", "1"], &["1", "0"]]).unwrap());
    let l3 = lambda_form(r(3, 1), 1);
    assert_eq!(l3, PolyMatrix::parse_rows(r(3, 1), &[&["0", "1"], &["2", "0"]]).unwrap());
    let l = lambda_form(r(5, 2), 3);
    assert_eq!(l.dagger(), l.neg());
}

#[test]
fn commuting_examples() {
    let ring = r(3, 1);
    let mut single = map(ring, &[&["1"], &["x"]]);
    assert!(!single.check_commuting());
    assert_eq!(single.commutation_matrix()[(0, 0)], ring.parse("x - x^-1").unwrap());
    assert!(cluster().check_commuting());
    assert!(toric().check_commuting());
}

#[test]
fn exactness_examples() {
    let mut t = toric();
    assert_eq!(t.check_exactness().unwrap(), Exactness::Unknown);

    let mut c = cluster();
    assert_eq!(c.check_exactness().unwrap(), Exactness::Certified);

    // Rank deficiency: a single toric plaquette column cannot be exact with q = 2.
    let mut half = map(r(2, 2), &[&["0"], &["0"], &["1 + y^-1"], &["1 + x^-1"]]);
    assert_eq!(half.check_exactness().unwrap(), Exactness::NecessaryFailed);

    let mut noncommuting = map(r(3, 1), &[&["1"], &["x"]]);
    assert!(matches!(noncommuting.check_exactness(), Err(Error::Precondition(_))));
}

/// σ₁ = [[xy, x²], [y², xy]] on the X rows and λ₁σ̄₁ on the Z rows. Over the Laurent ring the
/// `I_2` minors include a unit, so the certificate holds, and direct kernel computation agrees.
#[test]
fn block_counterexample_is_exact_over_laurent_ring() {
    for p in [2, 3] {
        let ring = r(p, 2);
        let s1 = PolyMatrix::parse_rows(ring, &[&["x*y", "x^2"], &["y^2", "x*y"]]).unwrap();
        let l1 = lambda_form(ring, 1);
        let sigma = s1.direct_sum(&(&l1 * &s1.map(|e| e.involute()))).unwrap();
        let mut s = StabilizerMap::new(sigma).unwrap();
        assert!(s.check_commuting());
        assert_eq!(s.check_exactness().unwrap(), Exactness::Certified);
        assert!(s.exact_by_membership().unwrap());
    }
}

#[test]
fn separator_examples() {
    let sep = build_separator(&cluster(), None).unwrap();
    assert_eq!(sep.sigma_sep.sigma(), cluster().sigma());
    assert!(sep.checks.passed());
    assert_eq!(sep.real, Some(true));

    assert!(matches!(build_separator(&toric(), None), Err(Error::Precondition(_))));

    // Duplicated column: the D = 1 Smith route removes the relation.
    let ring = r(3, 1);
    let dup = map(ring, &[&["1", "1"], &["x + x^-1", "x + x^-1"]]);
    let sep = build_separator(&dup, None).unwrap();
    assert_eq!(sep.sigma_sep.t(), 1);
    assert_eq!(&dup.sigma().try_mul(&sep.to_sep).unwrap(), sep.sigma_sep.sigma());
    assert_eq!(&sep.sigma_sep.sigma().try_mul(&sep.from_sep).unwrap(), dup.sigma());
}

#[test]
fn flipper_examples() {
    let sep = build_separator(&cluster(), None).unwrap();
    let f = solve_flipper(&sep).unwrap();
    assert_eq!(f.f, PolyMatrix::parse_rows(r(2, 1), &[&["0"], &["1"]]).unwrap());

    for p in [2, 3] {
        let ring = r(p, 1);
        let trivial = map(ring, &[&["0"], &["1"]]);
        let sep = build_separator(&trivial, None).unwrap();
        let f = solve_flipper(&sep).unwrap();
        let l = lambda_form(ring, 1);
        assert!((&(&f.f.dagger() * &l) * trivial.sigma()).is_identity());
        assert_eq!(f.f, PolyMatrix::parse_rows(ring, &[&["1"], &["0"]]).unwrap());
    }
}

#[test]
fn e_matrix_examples() {
    let ring = r(3, 1);
    let m = PolyMatrix::parse_rows(ring, &[&["x - x^-1"]]).unwrap();
    assert_eq!(hermitian_split(&m).unwrap(), PolyMatrix::parse_rows(ring, &[&["x"]]).unwrap());
    let zero = PolyMatrix::zeros(ring, 2, 2);
    assert!(hermitian_split(&zero).unwrap().is_zero());
    assert!(hermitian_split(&PolyMatrix::parse_rows(ring, &[&["x"]]).unwrap()).is_err());

    let sep = build_separator(&cluster(), None).unwrap();
    let f = solve_flipper(&sep).unwrap();
    assert!(build_e(&f, &sep, false).unwrap().is_zero());
}

#[test]
fn disentangler_examples() {
    let ring = r(2, 1);
    let sep = build_separator(&cluster(), None).unwrap();
    let f = solve_flipper(&sep).unwrap();
    let q = build_disentangler(&sep, &f, true).unwrap();
    assert_eq!(*q.matrix(), PolyMatrix::parse_rows(ring, &[&["0", "1"], &["1", "x + x^-1"]]).unwrap());

    let trivial = map(ring, &[&["0"], &["1"]]);
    let sep = build_separator(&trivial, None).unwrap();
    let f = solve_flipper(&sep).unwrap();
    assert!(build_disentangler(&sep, &f, false).unwrap().is_identity());
}

#[test]
fn reality_examples() {
    let ring = r(2, 1);
    assert!(!reality_check(&PolyMatrix::parse_rows(ring, &[&["1"], &["1"]]).unwrap()).unwrap());
    assert!(reality_check(&PolyMatrix::parse_rows(ring, &[&["1"], &["x"]]).unwrap()).unwrap());
    assert!(matches!(reality_check(&PolyMatrix::zeros(r(3, 1), 2, 1)), Err(Error::Unsupported(_))));
}

#[test]
fn trim_examples() {
    let ring = r(2, 2);
    let plaquette = PolyMatrix::parse_rows(ring, &[&["0", "0"], &["0", "0"], &["1 + y^-1", "1 + y^-1"], &["1 + x^-1", "1 + x^-1"]])
        .unwrap();
    let t = trim_redundant_generators(&plaquette).unwrap();
    assert_eq!(t.cols(), 1);

    let r1 = r(3, 1);
    let g = PolyMatrix::parse_rows(r1, &[&["1 + x", "x + x^2", "1"], &["x", "x^2", "0"]]).unwrap();
    let t = trim_redundant_generators(&g).unwrap();
    assert_eq!(kernel_basis(&t).unwrap().cols(), 0);
    assert!(ColumnModule::new(&t).unwrap().contains_columns(&g).unwrap());

    assert!(matches!(trim_redundant_generators(&PolyMatrix::zeros(r(2, 3), 2, 1)), Err(Error::Unsupported(_))));
}

#[test]
fn no_charge_examples() {
    assert!(no_charge_flippability(&cluster()).unwrap());
    assert!(no_charge_flippability(&map(r(2, 1), &[&["0"], &["1"]])).unwrap());
    let plaquette = map(r(2, 2), &[&["0"], &["0"], &["1 + y^-1"], &["1 + x^-1"]]);
    assert!(!no_charge_flippability(&plaquette).unwrap());
}

#[test]
fn stabilizer_file_round_trip() {
    let t = toric();
    let text = t.to_string();
    assert!(text.starts_with("q=2 t=2\n"));
    let back: StabilizerMap = text.parse().unwrap();
    assert_eq!(back.sigma(), t.sigma());
    assert!(matches!("q=3 t=2\n".to_string().parse::<StabilizerMap>(), Err(Error::Malformed(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// A separator taken from a random Clifford QCA (its right half) runs the whole pipeline.
    #[test]
    fn pipeline_on_random_separators(
        seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3]), d in 1usize..=2, q in 1usize..=2, len in 1usize..6,
    ) {
        let ring = r(p, d);
        let mut g = rng(seed);
        let u = gate_word(&mut g, ring, q, len).product();
        let sigma = u.matrix().columns_range(q..2 * q);
        let s = StabilizerMap::new(sigma).unwrap();
        let sep = build_separator(&s, None).unwrap();
        let f = solve_flipper(&sep).unwrap();
        let l = lambda(ring, q);
        prop_assert!((&(&f.f.dagger() * &l) * sep.sigma_sep.sigma()).is_identity());

        let e = build_e(&f, &sep, false).unwrap();
        let t = f.f.try_sub(&sep.sigma_sep.sigma().try_mul(&e).unwrap()).unwrap();
        prop_assert!((&(&t.dagger() * &l) * &t).is_zero());

        let qm = build_disentangler(&sep, &f, false).unwrap();
        let qinv = &(&l * &qm.matrix().dagger()) * &l;
        prop_assert!((&qinv.neg() * qm.matrix()).is_identity());

        if p == 2 && reality_check(sep.sigma_sep.sigma()).unwrap() {
            let qr = build_disentangler(&sep, &f, true).unwrap();
            prop_assert!(reality_check(qr.matrix()).unwrap());
            prop_assert!(reality_check(qr.inverse().matrix()).unwrap());
        }
    }
}
