mod common;

use common::*;
use proptest::prelude::*;
use qca_forge::{CoarseContext, PolyMatrix, Ring};

fn r(p: u32, d: usize) -> Ring {
    Ring::new(p, d).unwrap()
}

/// Multiplication by `f` on `F_p[x]/(x^L − 1)` with `L = n·m`, read in the blocked basis
/// `x^{n k + j}` and compared with the coarse block of `f` reduced mod `y^m − 1`.
fn oracle_block_on_chain(ring: Ring, f: &qca_forge::LaurentPoly, n: usize, m: usize) -> Vec<Vec<u32>> {
    let len = n * m;
    let p = ring.p();
    let mut out = vec![vec![0u32; len]; len];
    for col in 0..len {
        for (e, c) in f.terms() {
            let row = (e[0] as i64 + col as i64).rem_euclid(len as i64) as usize;
            out[row][col] = (out[row][col] + c) % p;
        }
    }
    out
}

#[test]
fn single_variable_examples() {
    let ring = r(2, 1);
    let ctx = CoarseContext::uniform(ring, 2).unwrap();
    let x = ctx.coarse_poly(&ring.parse("x").unwrap()).unwrap();
    assert_eq!(x, PolyMatrix::parse_rows(ring, &[&["0", "x"], &["1", "0"]]).unwrap());
    let h = ctx.coarse_poly(&ring.parse("x + x^-1").unwrap()).unwrap();
    assert_eq!(h, PolyMatrix::parse_rows(ring, &[&["0", "1 + x"], &["1 + x^-1", "0"]]).unwrap());
    assert!(ctx.coarse_poly(&ring.one()).unwrap().is_identity());
    assert_eq!(ctx.block(), 2);
}

#[test]
fn lambda_maps_to_lambda() {
    for (p, d, n) in [(2, 1, 3), (3, 2, 2), (5, 1, 4)] {
        let ring = r(p, d);
        let ctx = CoarseContext::uniform(ring, n).unwrap();
        let big = ctx.block();
        assert_eq!(ctx.coarse_matrix(&lambda(ring, 2)).unwrap(), lambda(ring, 2 * big));
    }
}

#[test]
fn mixed_factors_and_errors() {
    let ring = r(3, 2);
    let ctx = CoarseContext::new(ring, vec![2, 3]).unwrap();
    assert_eq!(ctx.block(), 6);
    let y = ctx.coarse_poly(&ring.parse("y").unwrap()).unwrap();
    assert_eq!(y.shape(), (6, 6));
    // y^3 is a translation by one coarse cell along the second axis.
    let y3 = ctx.coarse_poly(&ring.parse("y^3").unwrap()).unwrap();
    assert_eq!(y3, PolyMatrix::identity(ring, 6).scale(&ring.parse("y").unwrap()));
    assert!(CoarseContext::new(ring, vec![2]).is_err());
    assert!(CoarseContext::new(ring, vec![2, 0]).is_err());
}

#[test]
fn agrees_with_chain_multiplication() {
    let ring = r(3, 1);
    let mut g = rng(7);
    for _ in 0..20 {
        let f = poly(&mut g, ring, 4, 5);
        let (n, m) = (3usize, 4usize);
        let block = CoarseContext::uniform(ring, n).unwrap().coarse_poly(&f).unwrap();
        let expect = oracle_block_on_chain(ring, &f, n, m);
        for bi in 0..m {
            for bj in 0..m {
                for i in 0..n {
                    for j in 0..n {
                        let shift = (bi as i64 - bj as i64).rem_euclid(m as i64) as usize;
                        let reduced = block[(i, j)].reduce_mod_torus(&[m]);
                        let got = reduced.coeff(&[shift as i32]);
                        assert_eq!(got, expect[bi * n + i][bj * n + j]);
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn coarse_graining_is_a_star_homomorphism(
        seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3, 5]), d in 1usize..=2, n in 1usize..=3,
    ) {
        let ring = r(p, d);
        let mut g = rng(seed);
        let a = matrix(&mut g, ring, 2, 3, 3, 3);
        let b = matrix(&mut g, ring, 3, 2, 3, 3);
        let ctx = CoarseContext::uniform(ring, n).unwrap();
        let fa = ctx.coarse_matrix(&a).unwrap();
        let fb = ctx.coarse_matrix(&b).unwrap();
        prop_assert_eq!(ctx.coarse_matrix(&(&a * &b)).unwrap(), &fa * &fb);
        prop_assert_eq!(ctx.coarse_matrix(&a.dagger()).unwrap(), fa.dagger());
        prop_assert_eq!(ctx.coarse_matrix(&a.try_add(&b.dagger()).unwrap()).unwrap(), fa.try_add(&fb.dagger()).unwrap());
    }
}
