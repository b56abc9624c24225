//! Truncated bivariate power series over the rationals.
//!
//! Coefficients are kept for `z^m w^n` with `m, n ≤ order` (box truncation),
//! which is closed under multiplication.

use std::ops::{Add, Mul};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::binomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries {
    order: usize,
    coeffs: Vec<Vec<BigRational>>,
}

impl BiSeries {
    pub fn zero(order: usize) -> Self {
        BiSeries { order, coeffs: vec![vec![BigRational::zero(); order + 1]; order + 1] }
    }

    pub fn constant(order: usize, c: BigRational) -> Self {
        let mut s = BiSeries::zero(order);
        s.coeffs[0][0] = c;
        s
    }

    /// `(1 + z)^e` (or `(1 + w)^e` when `in_w`) by the binomial series.
    pub fn binomial_power(order: usize, e: &BigRational, in_w: bool) -> Self {
        let mut s = BiSeries::zero(order);
        for k in 0..=order {
            let c = binomial(e, k as u32);
            if in_w {
                s.coeffs[0][k] = c;
            } else {
                s.coeffs[k][0] = c;
            }
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, m: usize, n: usize) -> &BigRational {
        &self.coeffs[m][n]
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        BiSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(|row| row.iter().map(|a| a * c).collect()).collect(),
        }
    }

    /// `log(s)` for a series with constant term 1.
    pub fn log(&self) -> Self {
        assert!(self.coeffs[0][0].is_one(), "log needs constant term 1");
        let mut x = self.clone();
        x.coeffs[0][0] = BigRational::zero();
        // x^k has total degree ≥ k, so terms beyond 2·order vanish in the box.
        let mut out = BiSeries::zero(self.order);
        let mut power = x.clone();
        for k in 1..=2 * self.order {
            let sign = if k % 2 == 1 { BigRational::one() } else { -BigRational::one() };
            let c = sign / BigRational::from_integer(k.into());
            out = &out + &power.scale(&c);
            power = &power * &x;
        }
        out
    }
}

impl<'a> Add<&'a BiSeries> for &'a BiSeries {
    type Output = BiSeries;
    fn add(self, rhs: &BiSeries) -> BiSeries {
        assert_eq!(self.order, rhs.order);
        let mut out = self.clone();
        for (row, r) in out.coeffs.iter_mut().zip(&rhs.coeffs) {
            for (a, b) in row.iter_mut().zip(r) {
                *a += b;
            }
        }
        out
    }
}

impl<'a> Mul<&'a BiSeries> for &'a BiSeries {
    type Output = BiSeries;
    fn mul(self, rhs: &BiSeries) -> BiSeries {
        assert_eq!(self.order, rhs.order);
        let n = self.order;
        let mut out = BiSeries::zero(n);
        for a in 0..=n {
            for b in 0..=n {
                let x = &self.coeffs[a][b];
                if x.is_zero() {
                    continue;
                }
                for c in 0..=n - a {
                    for d in 0..=n - b {
                        let y = &rhs.coeffs[c][d];
                        if !y.is_zero() {
                            out.coeffs[a + c][b + d] += x * y;
                        }
                    }
                }
            }
        }
        out
    }
}
