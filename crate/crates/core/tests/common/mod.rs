//! Seeded matrix generators shared by the integration suites.
//!
//! Fuzz matrices are block upper-triangular up to a random permutation. Each
//! diagonal block is irreducible with constant row sums, so every class radius
//! is an exact integer and rational-mode analysis never meets an irrational
//! eigenvalue.
#![allow(dead_code)]

use pfcone::matrix::{ConeVector, NonnegMatrix};
use pfcone::scalar::{Rational, Tolerance};
use pfcone::spectral::Analysis;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// An irreducible `k × k` 0/1 block padded on the diagonal to a constant
/// row sum.
fn block(rng: &mut impl Rng, k: usize) -> Vec<Vec<i64>> {
    if k == 1 {
        return vec![vec![rng.gen_range(0..=3)]];
    }
    let mut b = vec![vec![0i64; k]; k];
    for (i, row) in b.iter_mut().enumerate() {
        row[(i + 1) % k] = 1;
        for (j, e) in row.iter_mut().enumerate() {
            if i != j && rng.gen_bool(0.3) {
                *e = 1;
            }
        }
    }
    let widest = b.iter().map(|r| r.iter().sum::<i64>()).max().unwrap();
    let target = widest + rng.gen_range(0..=1);
    for (i, row) in b.iter_mut().enumerate() {
        let s: i64 = row.iter().sum();
        row[i] += target - s;
    }
    b
}

/// A fuzz matrix with `n` rows, built from blocks of size 1–3.
pub fn fuzz_rows(rng: &mut impl Rng, n: usize) -> Vec<Vec<i64>> {
    let mut sizes = Vec::new();
    let mut left = n;
    while left > 0 {
        let k = rng.gen_range(1..=left.min(3));
        sizes.push(k);
        left -= k;
    }
    let mut m = vec![vec![0i64; n]; n];
    let mut start = 0;
    let mut starts = Vec::new();
    for &k in &sizes {
        let b = block(rng, k);
        for (i, row) in b.iter().enumerate() {
            m[start + i][start..start + k].copy_from_slice(row);
        }
        starts.push(start);
        start += k;
    }
    for (bi, &si) in starts.iter().enumerate() {
        for bj in bi + 1..starts.len() {
            if rng.gen_bool(0.45) {
                let i = si + rng.gen_range(0..sizes[bi]);
                let j = starts[bj] + rng.gen_range(0..sizes[bj]);
                m[i][j] = rng.gen_range(1..=2);
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    (0..n).map(|i| (0..n).map(|j| m[perm[i]][perm[j]]).collect()).collect()
}

pub fn fuzz_matrix(rng: &mut impl Rng, n: usize) -> NonnegMatrix<Rational> {
    let rows = fuzz_rows(rng, n);
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    NonnegMatrix::from_ints(&refs).unwrap()
}

pub fn fuzz_analysis(rng: &mut impl Rng, lo: usize, hi: usize) -> Analysis<Rational> {
    let n = rng.gen_range(lo..=hi);
    Analysis::new(&fuzz_matrix(rng, n), &Tolerance::default()).unwrap()
}

/// An irreducible matrix with small integer entries: a Hamiltonian cycle
/// plus random extra arcs. Its spectral radius is generally irrational.
pub fn irreducible_rows(rng: &mut impl Rng, n: usize) -> Vec<Vec<i64>> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut m = vec![vec![0i64; n]; n];
    for k in 0..n {
        m[perm[k]][perm[(k + 1) % n]] = rng.gen_range(1..=3);
    }
    for row in m.iter_mut() {
        for e in row.iter_mut() {
            if *e == 0 && rng.gen_bool(0.35) {
                *e = rng.gen_range(1..=3);
            }
        }
    }
    m
}

pub fn irreducible_matrix(rng: &mut impl Rng, n: usize) -> NonnegMatrix<Rational> {
    let rows = irreducible_rows(rng, n);
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    NonnegMatrix::from_ints(&refs).unwrap()
}

/// A nonzero nonnegative vector with entries in `0..=3`, often sparse.
pub fn fuzz_vector(rng: &mut impl Rng, n: usize) -> ConeVector<Rational> {
    loop {
        let v: Vec<i64> = (0..n)
            .map(|_| if rng.gen_bool(0.5) { rng.gen_range(1..=3) } else { 0 })
            .collect();
        if v.iter().any(|&e| e != 0) {
            return ConeVector::from_ints(&v).unwrap();
        }
    }
}

pub fn shifts(an: &Analysis<Rational>) -> Vec<Rational> {
    pfcone::checks::lambda_sweep(an)
}
