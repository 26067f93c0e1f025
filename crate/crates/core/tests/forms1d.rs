mod common;

use common::*;
use proptest::prelude::*;
use qca_forge::forms1d::{
    canonical_form, classify_form, cokernel_torsion_dimension, find_isotropic_vector, gram_form,
    maximal_commutative_submodule, realize_form, split_zero_block, standardize, xi_block,
};
use qca_forge::polymat::determinant;
use qca_forge::ring::univariate::span;
use qca_forge::{AntiHermitianForm, CoarseContext, Error, LaurentPoly, PolyMatrix, Ring};

const B_MAX: usize = 64;
const CAP: usize = 8;

fn r(p: u32) -> Ring {
    Ring::new(p, 1).unwrap()
}

fn form(ring: Ring, rows: &[&[&str]]) -> AntiHermitianForm {
    AntiHermitianForm::new(PolyMatrix::parse_rows(ring, rows).unwrap()).unwrap()
}

/// `Σ_k conj(B_ki)·B_{k+q,j} − conj(B_{k+q,i})·B_kj`, entry by entry.
fn oracle_gram(b: &PolyMatrix, q: usize) -> PolyMatrix {
    let ring = b.ring();
    PolyMatrix::from_fn(ring, b.cols(), b.cols(), |i, j| {
        let mut acc = ring.zero();
        for k in 0..q {
            acc = &acc + &(&b[(k, i)].involute() * &b[(k + q, j)]);
            acc = &acc - &(&b[(k + q, i)].involute() * &b[(k, j)]);
        }
        acc
    })
}

fn hform(m: &PolyMatrix, v: &[LaurentPoly]) -> LaurentPoly {
    let col = PolyMatrix::from_columns(m.ring(), &[v.to_vec()]).unwrap();
    (&(&col.dagger() * m) * &col)[(0, 0)].clone()
}

/// `span(det φ⁽ᵇ⁾(Ξ′)) = dim coker = 2s` on the nondegenerate part, by Bareiss rather than Smith.
fn s_from_determinant(form: &AntiHermitianForm, b: usize) -> usize {
    let (nondeg, _, _) = split_zero_block(form).unwrap();
    if nondeg.dim() == 0 {
        return 0;
    }
    let ctx = CoarseContext::uniform(form.ring(), b).unwrap();
    let det = determinant(&ctx.coarse_matrix(nondeg.matrix()).unwrap()).unwrap();
    span(&det).unwrap() as usize / 2
}

fn random_generators(g: &mut rand_chacha::ChaCha8Rng, ring: Ring, q: usize, m: usize) -> PolyMatrix {
    matrix(g, ring, 2 * q, m, 2, 1)
}

#[test]
fn gram_examples() {
    let ring = r(3);
    let trivial = PolyMatrix::parse_rows(ring, &[&["0"], &["1"]]).unwrap();
    assert!(gram_form(&trivial, 1).unwrap().matrix().is_zero());
    let b = PolyMatrix::parse_rows(ring, &[&["1"], &["x"]]).unwrap();
    assert_eq!(*gram_form(&b, 1).unwrap().matrix(), PolyMatrix::parse_rows(ring, &[&["x - x^-1"]]).unwrap());
    let full = PolyMatrix::identity(ring, 2);
    assert_eq!(*gram_form(&full, 1).unwrap().matrix(), lambda(ring, 1));
    assert!(matches!(gram_form(&full, 2), Err(Error::Shape(_))));
    assert!(matches!(
        AntiHermitianForm::new(PolyMatrix::parse_rows(ring, &[&["x"]]).unwrap()),
        Err(Error::Malformed(_))
    ));
}

#[test]
fn realize_examples() {
    let ring = r(2);
    let zero = form(ring, &[&["0", "0"], &["0", "0"]]);
    let b = realize_form(&zero);
    assert_eq!(b, PolyMatrix::identity(ring, 2).vstack(&PolyMatrix::zeros(ring, 2, 2)).unwrap());
    let one = form(ring, &[&["x - x^-1"]]);
    assert_eq!(realize_form(&one), PolyMatrix::parse_rows(ring, &[&["1"], &["x"]]).unwrap());
    let l1 = AntiHermitianForm::new(lambda(ring, 1)).unwrap();
    let b = realize_form(&l1);
    assert_eq!(b.shape(), (4, 2));
    assert_eq!(oracle_gram(&b, 2), lambda(ring, 1));
}

#[test]
fn standardize_examples() {
    for p in [2, 3] {
        let ring = r(p);
        let (b, std) = standardize(&form(ring, &[&["x - x^-1"]]), B_MAX).unwrap();
        assert_eq!(b, 2);
        assert_eq!(std.dim(), 2);
    }
    let ring = r(2);
    // φ⁽²⁾(x + x⁻¹) over F₂ is [[0, y + 1], [ȳ + 1, 0]], which is ξ itself in characteristic 2.
    let (_, std) = standardize(&form(ring, &[&["x + x^-1"]]), B_MAX).unwrap();
    assert_eq!(*std.matrix(), xi_block(ring));
    assert_eq!(standardize(&AntiHermitianForm::new(lambda(ring, 1)).unwrap(), B_MAX).unwrap().0, 1);
    let xi = AntiHermitianForm::new(xi_block(r(5))).unwrap();
    assert_eq!(standardize(&xi, B_MAX).unwrap().0, 1);
    assert!(matches!(standardize(&form(ring, &[&["x - x^-1"]]), 1), Err(Error::NotFound(_))));
}

#[test]
fn split_examples() {
    let ring = r(3);
    let zero = form(ring, &[&["0", "0", "0"], &["0", "0", "0"], &["0", "0", "0"]]);
    assert_eq!(split_zero_block(&zero).unwrap().1, 3);

    let split = AntiHermitianForm::new(lambda(ring, 1).direct_sum(&PolyMatrix::zeros(ring, 1, 1)).unwrap()).unwrap();
    let (nondeg, rank0, e) = split_zero_block(&split).unwrap();
    assert_eq!((nondeg.dim(), rank0), (2, 1));
    assert!(e.is_identity());

    let b = PolyMatrix::parse_rows(ring, &[&["1", "1", "0"], &["x", "x", "1"]]).unwrap();
    let (_, rank0, e) = split_zero_block(&gram_form(&b, 1).unwrap()).unwrap();
    assert!(rank0 >= 1);
    assert!(determinant(&e).unwrap().is_monomial());
}

#[test]
fn isotropic_vector_examples() {
    let ring = r(3);
    let e1 = vec![ring.one(), ring.zero()];
    assert_eq!(find_isotropic_vector(&lambda(ring, 1), CAP).unwrap(), e1);
    assert_eq!(find_isotropic_vector(&xi_block(ring), CAP).unwrap(), e1);

    // A congruent copy of λ₁ with both diagonal entries nonzero exercises the 2 × 2 construction.
    for p in [2, 3, 5] {
        let ring = r(p);
        let c = PolyMatrix::parse_rows(ring, &[&["1", "x"], &["1 + x^2", "1 + x + x^3"]]).unwrap();
        for base in [lambda(ring, 1), xi_block(ring)] {
            let m = &(&c.dagger() * &base) * &c;
            assert!(!m[(0, 0)].is_zero() && !m[(1, 1)].is_zero());
            let v = find_isotropic_vector(&m, CAP).unwrap();
            assert!(v.iter().any(|e| !e.is_zero()));
            assert!(hform(&m, &v).is_zero());
        }
    }
}

#[test]
fn classification_examples() {
    for p in [2, 3, 5] {
        let ring = r(p);
        let f = form(ring, &[&["x - x^-1"]]);
        let c = classify_form(&f, B_MAX, CAP).unwrap();
        assert_eq!((c.b, c.s, c.t, c.rank0), (2, 1, 0, 0));
        assert!(c.verify(&f).unwrap());
        let coarse = CoarseContext::uniform(ring, 2).unwrap().coarse_matrix(f.matrix()).unwrap();
        assert_eq!(cokernel_torsion_dimension(&coarse).unwrap(), 2);
        assert_eq!(s_from_determinant(&f, 2), 1);

        let l1 = AntiHermitianForm::new(lambda(ring, 1)).unwrap();
        let c = classify_form(&l1, B_MAX, CAP).unwrap();
        assert_eq!((c.b, c.s, c.t, c.rank0), (1, 0, 1, 0));

        let zero = AntiHermitianForm::new(PolyMatrix::zeros(ring, 3, 3)).unwrap();
        let c = classify_form(&zero, B_MAX, CAP).unwrap();
        assert_eq!((c.b, c.s, c.t, c.rank0), (1, 0, 0, 3));
        assert_eq!(c.canonical(), PolyMatrix::zeros(ring, 3, 3));
    }
    let ring = r(3);
    assert_eq!(canonical_form(ring, 1, 1, 1).rows(), 5);
}

/// Chain check of maximality: `S ⊆ A^⊥` is isotropic, and the excess
/// `dim(S^⊥ ∩ A^⊥) − dim S` is the same on chains of `len` and `2·len` cells.
fn chain_excess(s: &PolyMatrix, g: &PolyMatrix, q: usize, len: usize) -> usize {
    let p = s.ring().p();
    let sv = chain_vectors(s, len);
    let gv = chain_vectors(g, len);
    for u in &sv {
        for w in sv.iter().chain(&gv) {
            assert_eq!(chain_pairing(u, w, q, len, p), 0, "boundary vector fails to commute");
        }
    }
    let total = 2 * q * len;
    let all: Vec<Vec<u32>> = sv.iter().chain(&gv).cloned().collect();
    let complement = total - rank_mod_p(&all, p);
    complement - rank_mod_p(&sv, p)
}

#[test]
fn maximal_submodule_examples() {
    for p in [2, 3] {
        let ring = r(p);
        // The commutant of (1; x) is generated by (1; x⁻¹), whose gram form is x⁻¹ − x.
        let g = PolyMatrix::parse_rows(ring, &[&["1"], &["x"]]).unwrap();
        let out = maximal_commutative_submodule(&g, 1, B_MAX, CAP).unwrap();
        assert_eq!(out.b, 2);
        assert_eq!(out.generators.shape(), (4, 1));
        let gc = CoarseContext::uniform(ring, 2).unwrap().coarse_matrix(&g).unwrap();
        let len = 4 * out.b;
        assert_eq!(chain_excess(&out.generators, &gc, 2, len), chain_excess(&out.generators, &gc, 2, 2 * len));

        let full = PolyMatrix::identity(ring, 2);
        let out = maximal_commutative_submodule(&full, 1, B_MAX, CAP).unwrap();
        assert_eq!(out.generators.cols(), 0);

        let empty = PolyMatrix::zeros(ring, 4, 0);
        let out = maximal_commutative_submodule(&empty, 2, B_MAX, CAP).unwrap();
        assert_eq!(out.b, 1);
        let expect = PolyMatrix::zeros(ring, 2, 2).vstack(&PolyMatrix::identity(ring, 2)).unwrap();
        assert_eq!(out.generators, expect);
        assert_eq!(chain_excess(&out.generators, &empty, 2, 4), 0);
    }
}

#[test]
fn maximal_submodule_of_random_generators() {
    for seed in 0..12u64 {
        let p = if seed % 2 == 0 { 2 } else { 3 };
        let ring = r(p);
        let mut g = rng(seed);
        let q = 1 + (seed as usize % 2);
        let gens = random_generators(&mut g, ring, q, 1);
        let out = match maximal_commutative_submodule(&gens, q, B_MAX, CAP) {
            Ok(out) => out,
            Err(Error::NotFound(_)) => continue,
            Err(e) => panic!("{e}"),
        };
        let big = q * out.b;
        let gc = CoarseContext::uniform(ring, out.b).unwrap().coarse_matrix(&gens).unwrap();
        assert!(gram_form(&out.generators, big).unwrap().matrix().is_zero());
        let len = 4;
        assert_eq!(
            chain_excess(&out.generators, &gc, big, len),
            chain_excess(&out.generators, &gc, big, 2 * len),
            "seed {seed}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gram_matches_oracle_and_realization_round_trips(
        seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3, 5]), q in 1usize..=3, m in 1usize..=3,
    ) {
        let ring = r(p);
        let mut g = rng(seed);
        let b = random_generators(&mut g, ring, q, m);
        let f = gram_form(&b, q).unwrap();
        prop_assert_eq!(f.matrix(), &oracle_gram(&b, q));
        let back = realize_form(&f);
        prop_assert_eq!(&oracle_gram(&back, m), f.matrix());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// The witness verifies, `s` matches the determinant oracle, and `s` is unchanged by a
    /// further coarse-graining by 2.
    #[test]
    fn classification_is_verified_and_s_is_invariant(
        seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3]), q in 1usize..=2, m in 1usize..=2,
    ) {
        let ring = r(p);
        let mut g = rng(seed);
        let b = random_generators(&mut g, ring, q, m);
        let f = gram_form(&b, q).unwrap();
        let c = classify_form(&f, B_MAX, CAP).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(c.verify(&f).unwrap());
        prop_assert_eq!(c.s, s_from_determinant(&f, c.b));
        let coarse = CoarseContext::uniform(ring, c.b).unwrap().coarse_matrix(f.matrix()).unwrap();
        prop_assert_eq!(cokernel_torsion_dimension(&coarse).unwrap(), 2 * c.s);
        prop_assert_eq!(2 * (c.s + c.t) + c.rank0, m * c.b);

        let f2 = AntiHermitianForm::new(CoarseContext::uniform(ring, 2).unwrap().coarse_matrix(f.matrix()).unwrap()).unwrap();
        let c2 = classify_form(&f2, B_MAX, CAP).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(c2.verify(&f2).unwrap());
        prop_assert_eq!(c2.s, c.s);
    }
}
