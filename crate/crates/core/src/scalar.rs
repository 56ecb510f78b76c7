//! Numeric types the enumeration routines run over: `f64` for speed and
//! `BigRational` when a value has to be exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub trait Scalar: Signed + Clone + PartialOrd + Send + Sync + std::fmt::Debug + ToPrimitive {
    fn from_i64(x: i64) -> Self;

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn from_i64(x: i64) -> Self {
        x as f64
    }
}

impl Scalar for BigRational {
    fn from_i64(x: i64) -> Self {
        BigRational::from_integer(BigInt::from(x))
    }
}

/// Exact rational value of a finite float.
pub fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

/// Renders a rational as `p/q` (or `p` when integral).
pub fn ratio_string(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Clamps negatives to zero and rescales to sum one, exactly.
pub fn normalize_exact(w: &[f64]) -> Vec<BigRational> {
    let q: Vec<BigRational> = w.iter().map(|&x| if x > 0.0 { exact(x) } else { BigRational::zero() }).collect();
    let total: BigRational = q.iter().fold(BigRational::zero(), |a, b| a + b);
    if total.is_zero() {
        return q;
    }
    q.into_iter().map(|x| x / &total).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_normalization_sums_to_one() {
        let q = normalize_exact(&[0.1, 0.2, -1e-17, 0.7]);
        let total = q.iter().fold(BigRational::zero(), |a, b| a + b);
        assert_eq!(total, BigRational::from_i64(1));
        assert!(q[2].is_zero());
        assert_eq!(ratio_string(&BigRational::new(3.into(), 6.into())), "1/2");
        assert_eq!(ratio_string(&BigRational::from_i64(-2)), "-2");
    }
}
