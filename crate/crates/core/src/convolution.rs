//! Free additive, free multiplicative and rectangular free convolutions on
//! moment sequences, and the square/rectangular identity checks built on them.

use crate::error::{Error, Result};
use crate::measure::{moments_of, mu_lambda_moments, MeasureSpec};
use crate::moments::MomentSequence;
use crate::scalar::Scalar;
use crate::series;
use crate::transform::{
    cumulant_series, moments_from_c, moments_from_r, moments_from_s, r_transform,
    rect_c_transform, s_transform, RatioParam,
};

fn check_orders<S: Scalar>(a: &MomentSequence<S>, b: &MomentSequence<S>) -> Result<()> {
    if a.order() != b.order() {
        return Err(Error::OrderMismatch {
            left: a.order(),
            right: b.order(),
        });
    }
    Ok(())
}

/// `a ⊞ b`: free cumulants add.
///
/// Cumulants are read through [`cumulant_series`], which agrees with
/// [`r_transform`] on laws supported on `[0, ∞)` and also accepts centred
/// and symmetric laws.
pub fn boxplus<S: Scalar>(a: &MomentSequence<S>, b: &MomentSequence<S>) -> Result<MomentSequence<S>> {
    check_orders(a, b)?;
    moments_from_r(&cumulant_series(a)?.add(&cumulant_series(b)?)?)
}

/// `a ⊠ b` for laws on `[0, ∞)`: S-transforms multiply. The Dirac mass at 0
/// is absorbing.
pub fn boxtimes<S: Scalar>(a: &MomentSequence<S>, b: &MomentSequence<S>) -> Result<MomentSequence<S>> {
    check_orders(a, b)?;
    if a.is_delta_zero() || b.is_delta_zero() {
        return Ok(MomentSequence::new(vec![S::zero(); a.order()]));
    }
    moments_from_s(&s_transform(a)?.mul(&s_transform(b)?)?)
}

/// `ν₁ ⊞_λ ν₂` given the moments of `ν₁²` and `ν₂²`; returns the moments of
/// `(ν₁ ⊞_λ ν₂)²`.
pub fn rect_boxplus<S: Scalar>(
    a2: &MomentSequence<S>,
    b2: &MomentSequence<S>,
    lambda: &RatioParam,
) -> Result<MomentSequence<S>> {
    check_orders(a2, b2)?;
    if a2.is_delta_zero() {
        return Ok(b2.clone());
    }
    if b2.is_delta_zero() {
        return Ok(a2.clone());
    }
    let c = rect_c_transform(a2, lambda)?.add(&rect_c_transform(b2, lambda)?)?;
    moments_from_c(&c, lambda)
}

/// Side-by-side comparison of two sequences that should coincide.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvolutionReport<S> {
    pub lhs: Vec<S>,
    pub rhs: Vec<S>,
    /// `max_n |lhs_n - rhs_n|`.
    pub max_discrepancy: S,
    /// `max_n |lhs_n - rhs_n| / max(1, |lhs_n|, |rhs_n|)`.
    pub max_relative_discrepancy: f64,
    /// The discrepancy is exactly zero.
    pub exact: bool,
}

impl<S: Scalar> ConvolutionReport<S> {
    pub fn new(lhs: Vec<S>, rhs: Vec<S>) -> Result<Self> {
        if lhs.len() != rhs.len() {
            return Err(Error::OrderMismatch {
                left: lhs.len(),
                right: rhs.len(),
            });
        }
        let max_discrepancy = series::max_abs_diff(&lhs, &rhs);
        let max_relative_discrepancy = lhs
            .iter()
            .zip(&rhs)
            .map(|(l, r)| {
                let (l, r) = (l.to_f64(), r.to_f64());
                (l - r).abs() / 1f64.max(l.abs()).max(r.abs())
            })
            .fold(0.0, f64::max);
        let exact = max_discrepancy.is_zero();
        Ok(Self {
            lhs,
            rhs,
            max_discrepancy,
            max_relative_discrepancy,
            exact,
        })
    }

    /// Exact backends demand a zero discrepancy; floats compare the relative
    /// discrepancy against `tol`.
    pub fn passes(&self, tol: f64) -> bool {
        if S::EXACT {
            self.exact
        } else {
            self.max_relative_discrepancy <= tol
        }
    }
}

/// Compares `R_μ` with `C_{√(μ ⊠ μ_λ)}` coefficient by coefficient.
pub fn verify_rc_identity<S: Scalar>(
    mu: &MeasureSpec,
    lambda: &RatioParam,
    order: usize,
) -> Result<ConvolutionReport<S>> {
    let m: MomentSequence<S> = moments_of(mu, order)?;
    let product = boxtimes(&m, &mu_lambda_moments(&lambda.value(), order)?)?;
    let r = r_transform(&m)?;
    let c = rect_c_transform(&product, lambda)?;
    ConvolutionReport::new(r.coeffs()[1..].to_vec(), c.coeffs()[1..].to_vec())
}

/// Compares `√(μ ⊠ μ_λ) ⊞_λ √(μ' ⊠ μ_λ)` with `√((μ ⊞ μ') ⊠ μ_λ)` through
/// the moments of their squares.
pub fn verify_main_identity<S: Scalar>(
    mu: &MeasureSpec,
    mu2: &MeasureSpec,
    lambda: &RatioParam,
    order: usize,
) -> Result<ConvolutionReport<S>> {
    let a: MomentSequence<S> = moments_of(mu, order)?;
    let b: MomentSequence<S> = moments_of(mu2, order)?;
    let ml = mu_lambda_moments(&lambda.value(), order)?;
    let lhs = rect_boxplus(&boxtimes(&a, &ml)?, &boxtimes(&b, &ml)?, lambda)?;
    let rhs = boxtimes(&boxplus(&a, &b)?, &ml)?;
    ConvolutionReport::new(lhs.into_vec(), rhs.into_vec())
}

/// The `λ = 1` specialisation with `⊞` acting directly on the symmetric laws:
/// `√(μ ⊠ μ_1) ⊞ √(μ' ⊠ μ_1) = √((μ ⊞ μ') ⊠ μ_1)`. The symmetric laws are
/// carried to order `2N`; the report compares the even moments.
pub fn verify_square_corollary<S: Scalar>(
    mu: &MeasureSpec,
    mu2: &MeasureSpec,
    order: usize,
) -> Result<ConvolutionReport<S>> {
    let a: MomentSequence<S> = moments_of(mu, order)?;
    let b: MomentSequence<S> = moments_of(mu2, order)?;
    let ml = mu_lambda_moments(&S::one(), order)?;
    let root = |m: &MomentSequence<S>| {
        MomentSequence::new(
            (1..=2 * order)
                .map(|n| if n % 2 == 0 { m.get(n / 2) } else { S::zero() })
                .collect(),
        )
    };
    let sum = boxplus(&root(&boxtimes(&a, &ml)?), &root(&boxtimes(&b, &ml)?))?;
    let lhs: Vec<S> = (1..=order).map(|j| sum.get(2 * j)).collect();
    let rhs = boxtimes(&boxplus(&a, &b)?, &ml)?;
    ConvolutionReport::new(lhs, rhs.into_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio as q, Rational};

    type Q = Rational;

    fn m(spec: &str, n: usize) -> MomentSequence<Q> {
        moments_of(&MeasureSpec::parse(spec).unwrap(), n).unwrap()
    }

    fn lam(s: &str) -> RatioParam {
        RatioParam::parse(s).unwrap()
    }

    #[test]
    fn boxplus_examples() {
        assert_eq!(boxplus(&m("atomic:1=1", 5), &m("atomic:1=1", 5)).unwrap(), m("atomic:2=1", 5));
        let b = m("atomic:0=1/2,1=1/2", 3);
        assert_eq!(boxplus(&b, &b).unwrap().into_vec(), vec![q(1, 1), q(3, 2), q(5, 2)]);
        assert_eq!(boxplus(&m("mp:1.3", 8), &m("mp:0.7", 8)).unwrap(), m("mp:2", 8));
        assert!(matches!(
            boxplus(&m("mp:1", 3), &m("mp:1", 4)),
            Err(Error::OrderMismatch { .. })
        ));
    }

    #[test]
    fn boxtimes_examples() {
        let mu = m("mp:1.3", 6);
        assert_eq!(boxtimes(&m("atomic:3=1", 6), &mu).unwrap(), mu.dilate(&q(3, 1)));
        assert_eq!(boxtimes(&m("atomic:1=1", 4), &m("mulambda:1", 4)).unwrap(), m("mulambda:1", 4));
        let zero = m("atomic:0=1", 4);
        assert_eq!(boxtimes(&zero, &m("mp:2", 4)).unwrap(), zero);
    }

    #[test]
    fn boxtimes_matches_inverse_route() {
        // M_{μ ⊠ μ_λ} = (M_μ^{-1}(z) / (1 + λz))^{-1}
        let lambda = q(3, 5);
        let mu = m("atomic:1=1/2,3=1/2", 8);
        let direct = boxtimes(&mu, &m("mulambda:3/5", 8)).unwrap();
        let m_inv = mu.to_series().reverse().unwrap();
        let denom = crate::series::TruncatedSeries::identity(8).scale(&lambda).add_constant(&q(1, 1));
        let other = MomentSequence::from_series(&m_inv.div(&denom).unwrap().reverse().unwrap());
        assert_eq!(direct, other);
    }

    #[test]
    fn rect_boxplus_examples() {
        for l in ["1/4", "1/2", "1"] {
            let ml = m(&format!("mulambda:{l}"), 6);
            let sum = rect_boxplus(&ml, &ml, &lam(l)).unwrap();
            assert_eq!(sum, ml.dilate(&q(2, 1)), "lambda = {l}");
        }
        let one = m("squarepush(symbernoulli)", 6);
        assert_eq!(rect_boxplus(&one, &one, &lam("0")).unwrap(), m("atomic:2=1", 6));

        let zero = m("atomic:0=1", 6);
        let x = m("mp:2", 6);
        assert_eq!(rect_boxplus(&zero, &x, &lam("1/3")).unwrap(), x);
        assert_eq!(rect_boxplus(&x, &zero, &lam("1/3")).unwrap(), x);
    }

    #[test]
    fn identity_examples() {
        let d1 = MeasureSpec::parse("atomic:1=1").unwrap();
        let r = verify_rc_identity::<Q>(&d1, &lam("1/2"), 8).unwrap();
        assert!(r.exact && r.passes(0.0));

        let two = MeasureSpec::parse("atomic:1=1/2,3=1/2").unwrap();
        assert!(verify_rc_identity::<Q>(&two, &lam("1"), 10).unwrap().exact);

        let mp = MeasureSpec::parse("mp:1.3").unwrap();
        assert!(verify_rc_identity::<Q>(&mp, &lam("3/5"), 8).unwrap().exact);

        let r = verify_main_identity::<Q>(&d1, &d1, &lam("1/2"), 8).unwrap();
        assert!(r.exact);
        assert_eq!(MomentSequence::new(r.lhs), m("mulambda:1/2", 8).dilate(&q(2, 1)));

        assert!(verify_main_identity::<Q>(&d1, &d1, &lam("1"), 8).unwrap().exact);
        let bern = MeasureSpec::parse("atomic:0=1/2,1=1/2").unwrap();
        let mp2 = MeasureSpec::parse("mp:2").unwrap();
        assert!(verify_main_identity::<Q>(&bern, &mp2, &lam("3/10"), 10).unwrap().exact);
    }

    #[test]
    fn square_corollary_holds() {
        let a = MeasureSpec::parse("atomic:1=1/2,3=1/2").unwrap();
        let b = MeasureSpec::parse("mp:1.3").unwrap();
        let r = verify_square_corollary::<Q>(&a, &b, 6).unwrap();
        assert!(r.exact, "{r:?}");
    }

    #[test]
    fn report_flags() {
        let r = ConvolutionReport::new(vec![1.0, 2.0], vec![1.0, 2.0 + 1e-12]).unwrap();
        assert!(!r.exact);
        assert!(r.passes(1e-10));
        assert!(!r.passes(1e-14));
        assert!(ConvolutionReport::new(vec![1.0], vec![]).is_err());
    }
}
