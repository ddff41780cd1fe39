//! R-, S- and rectangular R-transforms at the level of truncated series.
//!
//! Conventions: `M(z) = sum m_n z^n` with no constant term, `R(z) = sum k_n z^n`
//! (free cumulants, combinatorial normalisation), and the rectangular
//! transform `C(z) = sum c_{2n} z^n`. An order-`N` moment sequence yields
//! `R` and `C` of order `N` and `S` of order `N - 1`.

use crate::error::{Error, Result};
use crate::moments::MomentSequence;
use crate::scalar::{parse_rational, Rational, Scalar};
use crate::series::TruncatedSeries;

/// Ratio `λ ∈ [0, 1]` of a rectangular free convolution.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatioParam(Rational);

impl RatioParam {
    pub fn new(lambda: Rational) -> Result<Self> {
        let zero = <Rational as Scalar>::zero();
        let one = <Rational as Scalar>::one();
        if lambda < zero || lambda > one {
            return Err(Error::RatioOutOfRange(lambda.to_string()));
        }
        Ok(Self(lambda))
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(parse_rational(s)?)
    }

    pub fn rational(&self) -> &Rational {
        &self.0
    }

    pub fn value<S: Scalar>(&self) -> S {
        S::from_rational(&self.0)
    }

    pub fn is_zero(&self) -> bool {
        Scalar::is_zero(&self.0)
    }
}

/// `T(x) = (λx + 1)(x + 1)` applied to a series.
pub fn t_apply<S: Scalar>(x: &TruncatedSeries<S>, lambda: &S) -> Result<TruncatedSeries<S>> {
    let left = x.scale(lambda).add_constant(&S::one());
    let right = x.add_constant(&S::one());
    left.mul(&right)
}

/// `U(y) = (-λ - 1 + sqrt((λ+1)^2 + 4λy)) / (2λ)` applied to a series with
/// zero constant term; `U` is the identity at `λ = 0`. `U` inverts `T` in the
/// sense `T(U(y)) = 1 + y`.
pub fn u_apply<S: Scalar>(y: &TruncatedSeries<S>, lambda: &S) -> Result<TruncatedSeries<S>> {
    if !y.constant_term().is_zero() {
        return Err(Error::InnerConstantTermNonzero);
    }
    if lambda.is_zero() {
        return Ok(y.clone());
    }
    let lp1 = lambda.clone() + S::one();
    let four_lambda = S::from_i64(4) * lambda.clone();
    let root = y
        .scale(&four_lambda)
        .add_constant(&(lp1.clone() * lp1.clone()))
        .sqrt()?;
    let two_lambda = lambda.clone() + lambda.clone();
    Ok(root.add_constant(&-lp1).scale(&(S::one() / two_lambda)))
}

/// The R-transform `R = [(1 + z) M^{-1}(z)]^{-1}` of a law on `[0, ∞)`.
///
/// The Dirac mass at 0 maps to the zero series. Any other input must have a
/// non-zero first moment, otherwise `M` is not invertible.
pub fn r_transform<S: Scalar>(m: &MomentSequence<S>) -> Result<TruncatedSeries<S>> {
    let order = m.order();
    if m.is_delta_zero() {
        return Ok(TruncatedSeries::zero(order));
    }
    if m.get(1).is_zero() {
        return Err(Error::ZeroFirstMoment);
    }
    let m_inv = m.to_series().reverse()?;
    let one_plus_z = one_plus_z(order);
    one_plus_z.mul(&m_inv)?.reverse()
}

/// Free cumulant series of an arbitrary compactly supported law, including
/// centred and symmetric ones.
///
/// Uses `R(z (1 + M(z))) = M(z)`: the inner series `w = z (1 + M)` always has
/// unit linear coefficient, so `R = M ∘ w^{-1}`.
pub fn cumulant_series<S: Scalar>(m: &MomentSequence<S>) -> Result<TruncatedSeries<S>> {
    let mm = m.to_series();
    let w = mm.add_constant(&S::one()).mul_z().truncate(m.order())?;
    mm.compose(&w.reverse()?)
}

/// Moments from an R-transform by fixed-point iteration on
/// `M = R ∘ (z (1 + M))`; each pass fixes one more coefficient.
pub fn moments_from_r<S: Scalar>(r: &TruncatedSeries<S>) -> Result<MomentSequence<S>> {
    if !r.constant_term().is_zero() {
        return Err(Error::NotInvertible);
    }
    let order = r.order();
    let mut m = TruncatedSeries::zero(order);
    for _ in 0..order {
        let w = m.add_constant(&S::one()).mul_z().truncate(order)?;
        m = r.compose(&w)?;
    }
    Ok(MomentSequence::from_series(&m))
}

/// The S-transform `S(z) = ((1 + z) / z) M^{-1}(z)`, of order `N - 1`.
pub fn s_transform<S: Scalar>(m: &MomentSequence<S>) -> Result<TruncatedSeries<S>> {
    let order = m.order();
    if order == 0 {
        return Err(Error::InsufficientOrder { need: 1, have: 0 });
    }
    if m.is_delta_zero() {
        return Ok(TruncatedSeries::zero(order - 1));
    }
    if m.get(1).is_zero() {
        return Err(Error::ZeroFirstMoment);
    }
    let m_inv = m.to_series().reverse()?;
    one_plus_z(order).mul(&m_inv)?.div_z()
}

/// Second route to the S-transform: `S(z) = R^{-1}(z) / z`.
pub fn s_transform_via_r<S: Scalar>(m: &MomentSequence<S>) -> Result<TruncatedSeries<S>> {
    let r = r_transform(m)?;
    if r.is_zero() {
        return Ok(TruncatedSeries::zero(m.order() - 1));
    }
    r.reverse()?.div_z()
}

/// Inverse of [`s_transform`]: `M = (z S(z) / (1 + z))^{-1}`.
pub fn moments_from_s<S: Scalar>(s: &TruncatedSeries<S>) -> Result<MomentSequence<S>> {
    if s.constant_term().is_zero() {
        return Err(Error::NotInvertible);
    }
    let zs = s.mul_z();
    let m_inv = zs.div(&one_plus_z(zs.order()))?;
    Ok(MomentSequence::from_series(&m_inv.reverse()?))
}

/// Formal moments whose S-transform is `1 + λz`. For `λ > 0` no law on
/// `[0, ∞)` has these moments.
pub fn moments_from_linear_s<S: Scalar>(lambda: &S, order: usize) -> Result<MomentSequence<S>> {
    if order == 0 {
        return Ok(MomentSequence::new(Vec::new()));
    }
    let s = TruncatedSeries::identity(order - 1).scale(lambda).add_constant(&S::one());
    moments_from_s(&s)
}

/// Rectangular R-transform with ratio `λ` of a symmetric law `ν`, given the
/// moments of `ν²`: `C(z) = U(z / H^{-1}(z) - 1)` with
/// `H(z) = z (λ M(z) + 1)(M(z) + 1)`.
pub fn rect_c_transform<S: Scalar>(
    m2: &MomentSequence<S>,
    lambda: &RatioParam,
) -> Result<TruncatedSeries<S>> {
    let lam: S = lambda.value();
    // H = z T(M) is known through z^{N+1}.
    let h = t_apply(&m2.to_series(), &lam)?.mul_z();
    let q = h.reverse()?.div_z()?;
    let y = q.recip()?.add_constant(&-S::one());
    u_apply(&y, &lam)
}

/// Inverse of [`rect_c_transform`]: from `T(C(z)) = z / H^{-1}(z)` recover
/// `H`, then `M = U(H(z)/z - 1)`. Returns the moments of `ν²`.
pub fn moments_from_c<S: Scalar>(
    c: &TruncatedSeries<S>,
    lambda: &RatioParam,
) -> Result<MomentSequence<S>> {
    if !c.constant_term().is_zero() {
        return Err(Error::NotInvertible);
    }
    let lam: S = lambda.value();
    let h_inv = t_apply(c, &lam)?.recip()?.mul_z();
    let h = h_inv.reverse()?;
    let y = h.div_z()?.add_constant(&-S::one());
    Ok(MomentSequence::from_series(&u_apply(&y, &lam)?))
}

fn one_plus_z<S: Scalar>(order: usize) -> TruncatedSeries<S> {
    TruncatedSeries::identity(order).add_constant(&S::one())
}
