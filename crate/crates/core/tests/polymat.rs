mod common;

use common::*;
use proptest::prelude::*;
use qca_forge::polymat::{determinant, determinantal_ideal, kernel_basis, matrix_rank, smith_normal_form, solve_linear, ColumnModule};
use qca_forge::{Ideal, LaurentPoly, PolyMatrix, Ring};

fn r(p: u32, d: usize) -> Ring {
    Ring::new(p, d).unwrap()
}

fn m(ring: Ring, rows: &[&[&str]]) -> PolyMatrix {
    PolyMatrix::parse_rows(ring, rows).unwrap()
}

/// Laplace expansion along the first row; independent of the elimination code.
fn det_laplace(a: &PolyMatrix) -> LaurentPoly {
    let n = a.rows();
    let ring = a.ring();
    if n == 0 {
        return ring.one();
    }
    let mut acc = ring.zero();
    for j in 0..n {
        let rows: Vec<usize> = (1..n).collect();
        let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let term = &a[(0, j)] * &det_laplace(&a.select(&rows, &cols));
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

fn same_column_module(a: &PolyMatrix, b: &PolyMatrix) -> bool {
    ColumnModule::new(a).unwrap().contains_columns(b).unwrap() && ColumnModule::new(b).unwrap().contains_columns(a).unwrap()
}

#[test]
fn dagger_examples() {
    let ring = r(3, 1);
    assert_eq!(m(ring, &[&["x"]]).dagger(), m(ring, &[&["x^-1"]]));
    let l1 = lambda(ring, 1);
    assert_eq!(l1.dagger(), l1.neg());
    assert_eq!(l1.dagger().dagger(), l1);
}

#[test]
fn matmul_examples() {
    let ring = r(3, 2);
    let mut g = rng(1);
    let a = matrix(&mut g, ring, 3, 3, 3, 2);
    assert_eq!(&PolyMatrix::identity(ring, 3) * &a, a);
    for q in 1..4 {
        let l = lambda(ring, q);
        assert_eq!(&l * &l, PolyMatrix::identity(ring, 2 * q).neg());
    }
    assert!(a.try_mul(&PolyMatrix::zeros(ring, 2, 2)).is_err());
}

#[test]
fn determinantal_ideal_examples() {
    let ring = r(2, 2);
    let row = m(ring, &[&["x - 1", "y - 1"]]);
    let i1 = determinantal_ideal(&row, 1).unwrap();
    let expected = Ideal::new(ring, vec![ring.parse("x - 1").unwrap(), ring.parse("y - 1").unwrap()]);
    assert!(i1.equals(&expected).unwrap());
    assert!(determinantal_ideal(&row, 0).unwrap().is_unit().unwrap());
    assert!(determinantal_ideal(&row, 2).unwrap().is_zero());
}

#[test]
fn rank_examples() {
    let ring = r(2, 2);
    assert_eq!(matrix_rank(&PolyMatrix::zeros(ring, 3, 4)), 0);
    let toric = m(ring, &[&["x - 1", "0"], &["y - 1", "0"], &["0", "-y^-1 + 1"], &["0", "x^-1 - 1"]]);
    // Both 2-minors pairing an X row with a Z row are nonzero.
    assert!(!determinant(&toric.select(&[0, 2], &[0, 1])).unwrap().is_zero());
    assert_eq!(matrix_rank(&toric), 2);
}

#[test]
fn smith_examples() {
    let ring = r(3, 1);
    let s = smith_normal_form(&m(ring, &[&["x - 1", "0"], &["0", "1"]])).unwrap();
    assert_eq!(s.divisors, vec![ring.one(), ring.parse("x - 1").unwrap()]);

    let s = smith_normal_form(&m(ring, &[&["x", "x^2"], &["1", "x"]])).unwrap();
    assert_eq!(s.divisors, vec![ring.one()]);

    let f2 = r(2, 1);
    let s = smith_normal_form(&m(f2, &[&["x - x^-1"]])).unwrap();
    assert_eq!(s.divisors, vec![f2.parse("x^2 + 1").unwrap()]);

    assert!(smith_normal_form(&PolyMatrix::identity(r(2, 2), 2)).is_err());
}

#[test]
fn kernel_examples() {
    let ring = r(2, 2);
    let row = m(ring, &[&["x - 1", "y - 1"]]);
    let k = kernel_basis(&row).unwrap();
    assert!((&row * &k).is_zero());
    let koszul = m(ring, &[&["y - 1"], &["1 - x"]]);
    assert!(same_column_module(&k, &koszul));

    let ring3 = r(3, 2);
    let inv = m(ring3, &[&["1", "x"], &["0", "y"]]);
    assert_eq!(kernel_basis(&inv).unwrap().cols(), 0);
}

#[test]
fn solve_examples() {
    let ring = r(3, 1);
    let b = m(ring, &[&["x + 2*x^-3"], &["1"]]);
    assert_eq!(solve_linear(&PolyMatrix::identity(ring, 2), &b).unwrap(), Some(b));
    let a = m(ring, &[&["x - 1"]]);
    assert_eq!(solve_linear(&a, &m(ring, &[&["x^2 - 1"]])).unwrap(), Some(m(ring, &[&["x + 1"]])));
    assert_eq!(solve_linear(&a, &m(ring, &[&["1"]])).unwrap(), None);
}

#[test]
fn text_format_round_trip() {
    let ring = r(5, 2);
    let mut g = rng(7);
    let a = matrix(&mut g, ring, 3, 2, 4, 3);
    let back: PolyMatrix = a.to_string().parse().unwrap();
    assert_eq!(back, a);
    assert!("p=2 D=1 rows=1 cols=2\nx; 1; 0".parse::<PolyMatrix>().is_err());
    assert!("p=2 D=1 rows=2 cols=1\nx".parse::<PolyMatrix>().is_err());
}

fn is_monomial_unit(f: &LaurentPoly) -> bool {
    f.is_monomial()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dagger_is_contravariant(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3, 5])) {
        let ring = r(p, 2);
        let mut g = rng(seed);
        let a = matrix(&mut g, ring, 2, 3, 3, 2);
        let b = matrix(&mut g, ring, 3, 2, 3, 2);
        prop_assert_eq!((&a * &b).dagger(), &b.dagger() * &a.dagger());
        prop_assert_eq!(a.dagger().dagger(), a);
    }

    #[test]
    fn bareiss_matches_laplace(seed in any::<u64>(), n in 1usize..5, p in prop::sample::select(vec![2u32, 3])) {
        let ring = r(p, 2);
        let mut g = rng(seed);
        let a = matrix(&mut g, ring, n, n, 3, 1);
        prop_assert_eq!(determinant(&a).unwrap(), det_laplace(&a));
    }

    #[test]
    fn smith_form_is_exact(seed in any::<u64>(), rows in 1usize..4, cols in 1usize..4, p in prop::sample::select(vec![2u32, 3, 5])) {
        let ring = r(p, 1);
        let mut g = rng(seed);
        let a = matrix(&mut g, ring, rows, cols, 3, 2);
        let s = smith_normal_form(&a).unwrap();
        prop_assert_eq!(&(&s.u * &a) * &s.v, s.s.clone());
        prop_assert!(is_monomial_unit(&determinant(&s.u).unwrap()));
        prop_assert!(is_monomial_unit(&determinant(&s.v).unwrap()));
        for i in 0..rows {
            for j in 0..cols {
                let want = if i == j && i < s.divisors.len() { s.divisors[i].clone() } else { ring.zero() };
                prop_assert_eq!(&s.s[(i, j)], &want);
            }
        }
        for w in s.divisors.windows(2) {
            prop_assert!(w[1].div_exact(&w[0]).is_some());
        }
        prop_assert_eq!(s.rank(), matrix_rank(&a));
    }

    #[test]
    fn kernel_is_sound(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3])) {
        let ring = r(p, 2);
        let mut g = rng(seed);
        let a = matrix(&mut g, ring, 2, 3, 2, 1);
        let k = kernel_basis(&a).unwrap();
        prop_assert!((&a * &k).is_zero());
    }

    #[test]
    fn kernel_is_complete_in_one_variable(seed in any::<u64>(), rows in 1usize..4, cols in 1usize..4, p in prop::sample::select(vec![2u32, 3, 5])) {
        let ring = r(p, 1);
        let mut g = rng(seed);
        let a = matrix(&mut g, ring, rows, cols, 3, 2);
        let k = kernel_basis(&a).unwrap();
        prop_assert!((&a * &k).is_zero());
        let s = smith_normal_form(&a).unwrap();
        let free_kernel = s.v.columns_range(s.rank()..cols);
        if k.cols() == 0 {
            prop_assert_eq!(free_kernel.cols(), 0);
        } else {
            prop_assert!(ColumnModule::new(&k).unwrap().contains_columns(&free_kernel).unwrap());
        }
    }

    #[test]
    fn determinantal_chain(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3])) {
        let ring = r(p, 2);
        let mut g = rng(seed);
        let a = matrix(&mut g, ring, 3, 3, 2, 1);
        for t in 0..3 {
            let big = determinantal_ideal(&a, t).unwrap();
            let small = determinantal_ideal(&a, t + 1).unwrap();
            prop_assert!(big.contains_ideal(&small).unwrap());
        }
    }

    #[test]
    fn solve_recovers_a_preimage(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3, 5]), d in 1usize..3) {
        let ring = r(p, d);
        let mut g = rng(seed);
        let a = matrix(&mut g, ring, 2, 3, 2, 1);
        let v = matrix(&mut g, ring, 3, 1, 2, 1);
        let b = &a * &v;
        let w = solve_linear(&a, &b).unwrap().expect("b is in the image");
        prop_assert_eq!(&a * &w, b);
    }
}
