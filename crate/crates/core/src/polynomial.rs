//! Univariate polynomials with exact rational coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Coefficients in ascending order, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, k: i64) -> BigRational {
        self.eval(&BigRational::from_integer(BigInt::from(k)))
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// All coefficients are integers.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// The unique polynomial of degree below `points.len()` through `points`,
    /// by Newton divided differences.
    pub fn interpolate(points: &[(BigRational, BigRational)]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InsufficientData("no interpolation points".into()));
        }
        let xs: Vec<&BigRational> = points.iter().map(|(x, _)| x).collect();
        for i in 0..xs.len() {
            if xs[i + 1..].contains(&xs[i]) {
                return Err(Error::InvalidArgument(format!("repeated node {}", xs[i])));
            }
        }
        let m = points.len();
        let mut dd: Vec<BigRational> = points.iter().map(|(_, y)| y.clone()).collect();
        for level in 1..m {
            for i in (level..m).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (xs[i] - xs[i - level]);
            }
        }
        // Horner on the Newton form: p = dd[m-1]; p = p (x - x_i) + dd[i]
        let mut acc: Vec<BigRational> = vec![dd[m - 1].clone()];
        for i in (0..m - 1).rev() {
            let mut next = vec![BigRational::zero(); acc.len() + 1];
            for (j, a) in acc.iter().enumerate() {
                next[j + 1] += a;
                next[j] -= a * xs[i];
            }
            next[0] += &dd[i];
            acc = next;
        }
        Ok(Self::new(acc))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let show_coeff = j == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match j {
                0 => {}
                1 => f.write_str("k")?,
                _ => write!(f, "k^{j}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    #[test]
    fn recovers_cubic_difference() {
        let pts: Vec<_> = (2..6).map(|k| (r(k), r((k + 1).pow(3) - k.pow(3)))).collect();
        let p = Polynomial::interpolate(&pts).unwrap();
        assert_eq!(p, Polynomial::from_ints(&[1, 3, 3]));
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.to_string(), "3k^2 + 3k + 1");
    }

    #[test]
    fn rational_coefficients() {
        // k(k+1)/2
        let pts: Vec<_> = (0..5).map(|k| (r(k), r(k * (k + 1) / 2))).collect();
        let p = Polynomial::interpolate(&pts).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(p.coeffs(), &[r(0), half.clone(), half]);
        assert!(!p.is_integral());
        assert_eq!(p.eval_int(10), r(55));
    }

    #[test]
    fn degenerate_inputs() {
        assert!(Polynomial::interpolate(&[]).is_err());
        assert!(Polynomial::interpolate(&[(r(1), r(2)), (r(1), r(3))]).is_err());
        let zero = Polynomial::interpolate(&[(r(1), r(0)), (r(2), r(0))]).unwrap();
        assert!(zero.is_zero() && zero.degree().is_none());
        assert_eq!(Polynomial::from_ints(&[0, -1, 0, 2]).to_string(), "2k^3 - k");
    }
}
