use serde::{Deserialize, Serialize};

use crate::digitseq::check_base;
use crate::error::{domain, Result};
use crate::measures::Scalar;

/// Tolerance on `sum p_d = 1` for floating-point vectors.
pub const PROB_SUM_TOL: f64 = 1e-12;

/// A digit distribution; the base is the vector length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbVector<T = f64> {
    p: Vec<T>,
}

impl<T: Scalar> ProbVector<T> {
    pub fn new(p: Vec<T>) -> Result<Self> {
        check_base(p.len() as u32)?;
        if p.iter().any(|x| x.is_negative()) {
            return Err(domain("probabilities must be nonnegative"));
        }
        let sum = p.iter().fold(T::zero(), |a, x| a + x.clone());
        if !sum.near(&T::one(), PROB_SUM_TOL) {
            return Err(domain(format!("probabilities sum to {}, not 1", sum.to_f())));
        }
        Ok(Self { p })
    }

    pub fn uniform(base: u32) -> Result<Self> {
        check_base(base)?;
        Self::new(vec![T::from_usize_ratio(1, base as usize); base as usize])
    }

    pub fn base(&self) -> u32 {
        self.p.len() as u32
    }

    pub fn probs(&self) -> &[T] {
        &self.p
    }

    pub fn to_f64(&self) -> ProbVector<f64> {
        ProbVector {
            p: self.p.iter().map(Scalar::to_f).collect(),
        }
    }

    /// Largest probability.
    pub fn max(&self) -> T {
        self.p.iter().cloned().fold(T::zero(), |a, x| if x > a { x } else { a })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn validation() {
        assert!(ProbVector::new(vec![0.5, 0.5]).is_ok());
        assert!(ProbVector::new(vec![0.5, 0.4]).is_err());
        assert!(ProbVector::new(vec![1.5, -0.5]).is_err());
        assert!(ProbVector::new(vec![1.0]).is_err());
        let u = ProbVector::<BigRational>::uniform(3).unwrap();
        assert_eq!(u.probs()[0], BigRational::new(1.into(), 3.into()));
        assert_eq!(u.to_f64().max(), 1.0 / 3.0);
    }
}
