//! Shared oracles and generators for the integration suites. The oracles
//! are deliberately independent of the library's ROABP evaluation and
//! expansion paths: elementary symmetric polynomials come from subset
//! enumeration, powers of linear forms from multinomial counting.

// each test binary uses its own subset of these helpers
#![allow(dead_code)]

use num_bigint::BigInt;
use roabp_core::matring::QMatrix;
use roabp_core::poly::{Monomial, Poly};
use roabp_core::roabp::CommRoabp;
use roabp_core::scalar::{factorial, rat_int, Rational, Scalar};
use roabp_core::Matrix;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Sum over size-d subsets of products of the chosen variables.
pub fn brute_esym(n: usize, d: u32) -> Poly<Rational> {
    let mut out = Poly::zero(n);
    let mut subset = Vec::new();
    fn rec(start: usize, left: u32, n: usize, subset: &mut Vec<usize>, out: &mut Poly<Rational>) {
        if left == 0 {
            let mut e = vec![0u32; n];
            for &i in subset.iter() {
                e[i] = 1;
            }
            out.add_term(Monomial(e), rat_int(1));
            return;
        }
        for i in start..n {
            subset.push(i);
            rec(i + 1, left - 1, n, subset, out);
            subset.pop();
        }
    }
    rec(0, d, n, &mut subset, &mut out);
    out
}

/// Multinomial expansion of (x_1 + ... + x_n)^d.
pub fn brute_power(n: usize, d: u32) -> Poly<Rational> {
    let mut out = Poly::zero(n);
    if n == 0 {
        return out;
    }
    let mut expo = vec![0u32; n];
    fn rec(i: usize, left: u32, expo: &mut Vec<u32>, out: &mut Poly<Rational>, d: u32) {
        let n = expo.len();
        if i == n - 1 {
            expo[i] = left;
            let denom: BigInt = expo.iter().map(|&e| factorial(e)).product();
            out.add_term(
                Monomial(expo.clone()),
                Rational::from_bigint(&factorial(d)) / Rational::from_bigint(&denom),
            );
            expo[i] = 0;
            return;
        }
        for e in 0..=left {
            expo[i] = e;
            rec(i + 1, left - e, expo, out, d);
        }
        expo[i] = 0;
    }
    rec(0, d, &mut expo, &mut out, d);
    out
}

/// Monomials of degree <= cap in `vars` variables.
pub fn monomials_up_to(vars: usize, cap: u32) -> Vec<Monomial> {
    roabp_core::dualspace::monomials_up_to(vars, cap)
}

/// Random sparse rational polynomial.
pub fn random_qpoly(rng: &mut StdRng, vars: usize, max_deg: u32, density: f64) -> Poly<Rational> {
    let monos = monomials_up_to(vars, max_deg);
    let mut out = Poly::zero(vars);
    for m in monos {
        if rng.gen_bool(density) {
            out.add_term(m, rat_int(rng.gen_range(-9i64..=9)));
        }
    }
    out
}

/// A family of commuting generator sets exercising diagonal, triangular
/// (defective), and polynomial-in-one-matrix structure, with w <= 4 and
/// at most 3 generators.
pub fn random_commuting_generators(seed: u64) -> Vec<QMatrix> {
    let mut rng = StdRng::seed_from_u64(seed);
    let w = rng.gen_range(2usize..=4);
    match seed % 3 {
        0 => {
            // diagonal generators: distinct simple spectra
            let r = rng.gen_range(1usize..=3);
            (0..r)
                .map(|_| {
                    Matrix::from_fn(w, w, |i, j| {
                        if i == j {
                            rat_int(rng.gen_range(-4i64..=4))
                        } else {
                            rat_int(0)
                        }
                    })
                })
                .collect()
        }
        1 => {
            // polynomials in an upper-triangular matrix with repeats on
            // the diagonal: nontrivial multiplicity structure
            let lambda = rat_int(rng.gen_range(-2i64..=2));
            let base: QMatrix = Matrix::from_fn(w, w, |i, j| {
                if i == j {
                    if i < w / 2 {
                        lambda.clone()
                    } else {
                        rat_int(rng.gen_range(3i64..=5))
                    }
                } else if j == i + 1 {
                    rat_int(rng.gen_range(0i64..=2))
                } else {
                    rat_int(0)
                }
            });
            let second = base.mul(&base).add(&Matrix::identity(w).scale(&rat_int(2)));
            vec![base, second]
        }
        _ => {
            // polynomials in a dense random matrix
            let base: QMatrix = Matrix::from_fn(w, w, |_, _| rat_int(rng.gen_range(-3i64..=3)));
            let sq = base.mul(&base);
            let r = rng.gen_range(1usize..=3);
            let mut gens = vec![base.clone()];
            if r >= 2 {
                gens.push(sq.sub(&base.scale(&rat_int(2))));
            }
            if r >= 3 {
                gens.push(base.scale(&rat_int(3)).add(&Matrix::identity(w)));
            }
            gens
        }
    }
}

/// Random commutative ROABPs for the round-trip corpus.
pub fn random_comm_roabp(n: usize, d: u32, w: usize, seed: u64) -> CommRoabp<Rational> {
    roabp_core::convert::random_comm_roabp(n, d, w, seed)
}
