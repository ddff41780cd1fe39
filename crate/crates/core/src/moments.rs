use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{self, TruncatedSeries};

/// Moments `m_1..=m_N` of a probability law (`m_0 = 1` is implicit).
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence<S> {
    moments: Vec<S>,
    symmetric: bool,
}

impl<S: Scalar> MomentSequence<S> {
    /// Wraps `m_1..=m_N`; the symmetric flag is set when every odd moment is
    /// exactly zero.
    pub fn new(moments: Vec<S>) -> Self {
        let symmetric = moments.iter().step_by(2).all(Scalar::is_zero);
        Self { moments, symmetric }
    }

    /// Moments of the Dirac mass at `a`.
    pub fn dirac(a: &S, order: usize) -> Self {
        Self::new((1..=order).map(|n| a.powi(n as u32)).collect())
    }

    pub fn order(&self) -> usize {
        self.moments.len()
    }

    /// `m_n`, one-based. `m_0 = 1`.
    pub fn get(&self, n: usize) -> S {
        if n == 0 {
            S::one()
        } else {
            self.moments[n - 1].clone()
        }
    }

    pub fn as_slice(&self) -> &[S] {
        &self.moments
    }

    pub fn into_vec(self) -> Vec<S> {
        self.moments
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// All moments vanish: the Dirac mass at 0.
    pub fn is_delta_zero(&self) -> bool {
        self.moments.iter().all(Scalar::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::InsufficientOrder {
                need: order,
                have: self.order(),
            });
        }
        Ok(Self::new(self.moments[..order].to_vec()))
    }

    pub(crate) fn require_order(&self, order: usize) -> Result<()> {
        if self.order() < order {
            return Err(Error::InsufficientOrder {
                need: order,
                have: self.order(),
            });
        }
        Ok(())
    }

    /// `M(z) = sum_{n>=1} m_n z^n` as a series of order `N`.
    pub fn to_series(&self) -> TruncatedSeries<S> {
        TruncatedSeries::from_fn(self.order(), |n| {
            if n == 0 {
                S::zero()
            } else {
                self.moments[n - 1].clone()
            }
        })
    }

    /// Reads `m_1..=m_N` off a moment generating series, ignoring `c_0`.
    pub fn from_series(m: &TruncatedSeries<S>) -> Self {
        Self::new(m.coeffs()[1..].to_vec())
    }

    /// Moments of the push-forward by `x -> a x`.
    pub fn dilate(&self, a: &S) -> Self {
        let mut pow = S::one();
        Self::new(
            self.moments
                .iter()
                .map(|m| {
                    pow = pow.clone() * a.clone();
                    m.clone() * pow.clone()
                })
                .collect(),
        )
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<S> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(series::max_abs_diff(&self.moments, &other.moments))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> MomentSequence<T> {
        MomentSequence::new(self.moments.iter().map(f).collect())
    }
}
