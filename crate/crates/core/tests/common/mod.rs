#![allow(dead_code)]

use proptest::prelude::*;
use vilab_core::matrix::Matrix;
use vilab_core::{Field, Monomial, Poly, Var};

/// Polynomials in `x(i,j)`, `i <= n`, `j <= d`, with small coefficients and degrees.
pub fn poly<F: Field>(n: usize, d: usize, max_terms: usize, max_exp: u32) -> impl Strategy<Value = Poly<F>> {
    let term = (-4i64..=4, prop::collection::vec(0..=max_exp, n * d));
    prop::collection::vec(term, 0..=max_terms).prop_map(move |terms| {
        Poly::from_terms(terms.into_iter().map(|(c, exps)| {
            let pairs = exps.iter().enumerate().map(|(k, &e)| (Var::x(k / d + 1, k % d + 1), e));
            (Monomial::from_pairs(pairs), F::from_i64(c))
        }))
    })
}

/// Homogeneous polynomials of degree `deg` in `x(i,j)`.
pub fn homogeneous<F: Field>(n: usize, d: usize, deg: u32, max_terms: usize) -> impl Strategy<Value = Poly<F>> {
    let term = (-4i64..=4, prop::collection::vec(0..n * d, deg as usize));
    prop::collection::vec(term, 1..=max_terms).prop_map(move |terms| {
        Poly::from_terms(terms.into_iter().map(|(c, vars)| {
            let pairs = vars.iter().map(|&k| (Var::x(k / d + 1, k % d + 1), 1));
            (Monomial::from_pairs(pairs), F::from_i64(c))
        }))
    })
}

pub fn matrix<F: Field>(rows: usize, cols: usize) -> impl Strategy<Value = Matrix<F>> {
    prop::collection::vec(-3i64..=3, rows * cols).prop_map(move |v| {
        Matrix::from_rows(v.chunks(cols).map(|r| r.iter().map(|&c| F::from_i64(c)).collect()).collect())
    })
}
