//! Independent c_mn derivation shared by the integration tests: differentiate
//! `f = −log(((1+z)^{1/2} + (1+w)^{1/2}) / 2)` in `z`, so that
//! `∂_z f = −¼ (1+z)^{−1/2} / g` with `g` the argument of the log, and divide
//! series directly instead of taking a logarithm.

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Grid = Vec<Vec<BigRational>>;

pub fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}

/// Coefficients of `(1+x)^{e}` up to `x^n`, by the ratio of consecutive terms.
fn power_series(e: &BigRational, n: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::one()];
    for k in 1..=n {
        let prev = out[k - 1].clone();
        let kk = q(k as i64, 1);
        out.push(prev * (e - &kk + BigRational::one()) / kk);
    }
    out
}

fn zero_grid(n: usize) -> Grid {
    vec![vec![BigRational::zero(); n + 1]; n + 1]
}

/// `a / b` in the box `m, n ≤ order`, with `b[0][0] = 1`.
fn divide(a: &Grid, b: &Grid, order: usize) -> Grid {
    let mut out = zero_grid(order);
    for m in 0..=order {
        for n in 0..=order {
            let mut acc = a[m][n].clone();
            for i in 0..=m {
                for j in 0..=n {
                    if (i, j) != (0, 0) {
                        acc -= &b[i][j] * &out[m - i][n - j];
                    }
                }
            }
            out[m][n] = acc;
        }
    }
    out
}

pub fn oracle(order: usize) -> Grid {
    let n = order + 1;
    let half = q(1, 2);
    let sqrt = power_series(&half, n);
    let inv_sqrt = power_series(&q(-1, 2), n);
    let mut g = zero_grid(n);
    for k in 0..=n {
        g[k][0] += &sqrt[k] * &half;
        g[0][k] += &sqrt[k] * &half;
    }
    let mut numer = zero_grid(n);
    for k in 0..=n {
        numer[k][0] = &inv_sqrt[k] * q(-1, 4);
    }
    let dz = divide(&numer, &g, n);
    let mut c = zero_grid(order);
    for m in 1..=order {
        for k in 0..=order {
            c[m][k] = &dz[m - 1][k] / q(m as i64, 1);
        }
    }
    // f is symmetric in z and w, and f(0,0) = −log 1 = 0
    for k in 1..=order {
        c[0][k] = c[k][0].clone();
    }
    c
}

