//! Band arithmetic against plain matrices built straight from the generator
//! formulas, with no use of the band machinery on the oracle side.

use std::collections::BTreeMap;

use berezin_core::berezin::{gen_d, gen_f};
use berezin_core::conformal::gen_l;
use berezin_core::{BandOperator, GaussianRational as Q, Weight};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const N: usize = 64;

#[derive(Clone, Copy, Debug)]
enum Letter {
    D,
    F,
    L(i64),
    P0,
    I,
}

/// Sparse truncated matrix, one map `row ↦ value` per column.
type Sparse = Vec<BTreeMap<usize, Q>>;

fn rat(h: &BigRational) -> Q {
    Q::real(h.clone())
}

fn int(n: usize) -> Q {
    Q::from_int(n as i64)
}

fn oracle_matrix(letter: Letter, h: &BigRational) -> Sparse {
    let two_h = rat(&(h * BigRational::from_integer(2.into())));
    (0..N)
        .map(|n| {
            let mut col = BTreeMap::new();
            let mut put = |row: i64, v: Q| {
                if row >= 0 && (row as usize) < N && !v.is_zero() {
                    col.insert(row as usize, v);
                }
            };
            let n_i = n as i64;
            match letter {
                Letter::D => put(n_i - 1, int(n)),
                Letter::F => put(n_i + 1, (&int(n) + &two_h).inv().unwrap()),
                Letter::I => put(n_i, Q::one()),
                Letter::P0 => put(n_i, if n == 0 { Q::one() } else { Q::zero() }),
                Letter::L(k) if k >= 0 => {
                    let k_u = k as usize;
                    if n >= k_u {
                        // (n − k + (k+1)h) · n!/(n−k)!
                        let mut v = &(&int(n) - &int(k_u)) + &rat(&(h * BigRational::from_integer((k + 1).into())));
                        for i in 0..k_u {
                            v = &v * &int(n - i);
                        }
                        put(n_i - k, v);
                    }
                }
                Letter::L(k) => {
                    let j = (-k) as usize;
                    // (n + (j+1)h) / ((n+2h)(n+2h+1)…(n+2h+j−1))
                    let mut v = &int(n) + &rat(&(h * BigRational::from_integer((j as i64 + 1).into())));
                    for i in 0..j {
                        v = &v / &(&(&int(n) + &two_h) + &int(i));
                    }
                    put(n_i + j as i64, v);
                }
            }
            col
        })
        .collect()
}

fn sparse_mul(a: &Sparse, b: &Sparse) -> Sparse {
    b.iter()
        .map(|bcol| {
            let mut out: BTreeMap<usize, Q> = BTreeMap::new();
            for (k, bv) in bcol {
                for (r, av) in &a[*k] {
                    let e = out.entry(*r).or_insert_with(Q::zero);
                    *e += &(av * bv);
                }
            }
            out.retain(|_, v| !v.is_zero());
            out
        })
        .collect()
}

fn band_op(letter: Letter, w: &Weight) -> BandOperator {
    match letter {
        Letter::D => gen_d(w),
        Letter::F => gen_f(w),
        Letter::L(k) => gen_l(k, w).unwrap(),
        Letter::P0 => BandOperator::projector(w, 0),
        Letter::I => BandOperator::identity(w),
    }
}

fn width(letter: Letter) -> usize {
    match letter {
        Letter::D | Letter::F => 1,
        Letter::L(k) => k.unsigned_abs() as usize,
        Letter::P0 | Letter::I => 0,
    }
}

fn random_letter(rng: &mut ChaCha8Rng) -> Letter {
    match rng.gen_range(0..5) {
        0 => Letter::D,
        1 => Letter::F,
        2 => Letter::L(rng.gen_range(-3..=3)),
        3 => Letter::P0,
        _ => Letter::I,
    }
}

fn w2(n: usize, h: &BigRational) -> BigRational {
    // n!·(2h)(2h+1)…(2h+n−1)
    let two_h = h * BigRational::from_integer(2.into());
    (0..n).fold(BigRational::one(), |acc, i| {
        let i = BigRational::from_integer(BigInt::from(i));
        acc * (&i + BigRational::one()) * (&two_h + &i)
    })
}

#[test]
#[allow(clippy::needless_range_loop)]
fn random_words_match_matrix_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let weights = [Weight::from_frac(3, 4).unwrap(), Weight::from_frac(1, 1).unwrap()];
    for trial in 0..100 {
        let w = &weights[trial % 2];
        let len = rng.gen_range(1..=4);
        let word: Vec<Letter> = (0..len).map(|_| random_letter(&mut rng)).collect();
        let op = word.iter().map(|&l| band_op(l, w)).reduce(|a, b| a.mul(&b).unwrap()).unwrap();
        let mat = word.iter().map(|&l| oracle_matrix(l, w.h())).reduce(|a, b| sparse_mul(&a, &b)).unwrap();
        let margin: usize = word.iter().map(|&l| width(l)).sum();
        let trunc = op.truncate_monomial(N);
        for c in 0..N - margin {
            for r in 0..N {
                let expect = mat[c].get(&r).cloned().unwrap_or_else(Q::zero);
                assert_eq!(trunc[r][c], expect, "word {word:?} at h = {w}, entry ({r},{c})");
            }
        }
    }
}

#[test]
fn gram_adjointness() {
    const M: usize = 32;
    for (p, q) in [(1, 2), (3, 4), (1, 1), (7, 3)] {
        let w = Weight::from_frac(p, q).unwrap();
        let ops = [gen_d(&w), gen_f(&w), gen_l(2, &w).unwrap(), gen_l(-2, &w).unwrap(), BandOperator::projector(&w, 0)];
        for a in &ops {
            let adj = a.adjoint();
            for n in 0..=M {
                for m in 0..=M {
                    // ⟨A e_m, e_n⟩ = ⟨e_m, A* e_n⟩
                    let lhs = a.entry(n, m).scale(&w2(n, w.h()));
                    let rhs = adj.entry(m, n).conj().scale(&w2(m, w.h()));
                    assert_eq!(lhs, rhs, "h = {w}, ({n},{m}), op {a:?}");
                }
            }
        }
    }
}

#[test]
fn adjoint_is_an_antihomomorphic_involution() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..40 {
        let w = if trial % 2 == 0 { Weight::from_frac(3, 4).unwrap() } else { Weight::half() };
        let a = band_op(random_letter(&mut rng), &w).scale(&Q::new(
            BigRational::from_integer(rng.gen_range(-3..=3).into()),
            BigRational::from_integer(rng.gen_range(-3..=3).into()),
        ));
        let b = band_op(random_letter(&mut rng), &w).mul(&band_op(random_letter(&mut rng), &w)).unwrap();
        assert_eq!(a.adjoint().adjoint(), a);
        assert_eq!(a.mul(&b).unwrap().adjoint(), b.adjoint().mul(&a.adjoint()).unwrap());
    }
}

#[test]
fn apply_is_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..30 {
        let w = if trial % 2 == 0 { Weight::from_frac(1, 1).unwrap() } else { Weight::from_frac(5, 8).unwrap() };
        let a = band_op(random_letter(&mut rng), &w);
        let b = band_op(random_letter(&mut rng), &w);
        let ab = a.mul(&b).unwrap();
        for n in 0..=32 {
            assert_eq!(ab.column(n), a.apply_vec(&b.column(n)), "{a:?} * {b:?}, e_{n}");
        }
    }
}
