//! Truncated formal power series.
//!
//! A [`TruncatedSeries`] of order `N` holds `c_0..=c_N` and stands for the
//! class of a power series modulo `z^{N+1}`. Every operation returns a result
//! that is correct modulo the truncation; orders only change through
//! [`TruncatedSeries::mul_z`] and [`TruncatedSeries::div_z`], which shift the
//! known coefficients by one position.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default truncation order for the exact backend.
pub const DEFAULT_EXACT_ORDER: usize = 12;
/// Default truncation order for the float backend.
pub const DEFAULT_FLOAT_ORDER: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> TruncatedSeries<S> {
    /// Builds a series from `c_0..=c_N`. Panics on an empty coefficient list.
    pub fn new(coeffs: Vec<S>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least c_0");
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::from_fn(order, |_| S::zero())
    }

    pub fn constant(c: S, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `z`.
    pub fn identity(order: usize) -> Self {
        Self::monomial(S::one(), 1, order)
    }

    pub fn monomial(c: S, degree: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if degree <= order {
            s.coeffs[degree] = c;
        }
        s
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize) -> S) -> Self {
        Self {
            coeffs: (0..=order).map(&mut f).collect(),
        }
    }

    /// `1 + r z + r^2 z^2 + ...`, i.e. `1 / (1 - r z)`.
    pub fn geometric(r: &S, order: usize) -> Self {
        let mut acc = S::one();
        Self::from_fn(order, |_| {
            let c = acc.clone();
            acc = acc.clone() * r.clone();
            c
        })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &S {
        &self.coeffs[n]
    }

    pub fn constant_term(&self) -> &S {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Drops coefficients above `order`. Asking for a higher order than is
    /// known is an error.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::InsufficientOrder {
                need: order,
                have: self.order(),
            });
        }
        Ok(Self {
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }

    fn check_orders(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn arith(&self, op: SeriesOp, other: &Self) -> Result<Self> {
        match op {
            SeriesOp::Add => self.add(other),
            SeriesOp::Sub => self.sub(other),
            SeriesOp::Mul => self.mul(other),
            SeriesOp::Div => self.div(other),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_orders(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() + b.clone()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_orders(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() - b.clone()))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_orders(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// Cauchy product truncated at the smaller of the two orders.
    fn mul_unchecked(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self::from_fn(order, |n| {
            let mut acc = S::zero();
            for k in 0..=n {
                let (a, b) = (&self.coeffs[k], &other.coeffs[n - k]);
                if !a.is_zero() && !b.is_zero() {
                    acc = acc + a.clone() * b.clone();
                }
            }
            acc
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_orders(other)?;
        let b0 = other.coeffs[0].clone();
        if b0.is_zero() {
            return Err(Error::DivisionByZeroConstantTerm);
        }
        let mut q: Vec<S> = Vec::with_capacity(self.coeffs.len());
        for n in 0..=self.order() {
            let mut acc = self.coeffs[n].clone();
            for k in 1..=n {
                acc = acc - other.coeffs[k].clone() * q[n - k].clone();
            }
            q.push(acc / b0.clone());
        }
        Ok(Self { coeffs: q })
    }

    /// `1 / self`.
    pub fn recip(&self) -> Result<Self> {
        Self::constant(S::one(), self.order()).div(self)
    }

    pub fn scale(&self, c: &S) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn add_constant(&self, c: &S) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0].clone() + c.clone();
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| -a.clone()).collect(),
        }
    }

    /// Multiplication by `z`. The result is known to one more order.
    pub fn mul_z(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(S::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Division by `z`, requiring `c_0 = 0`. The result is known to one less
    /// order, so the input must have order at least 1.
    pub fn div_z(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::DivisionByZeroConstantTerm);
        }
        if self.order() == 0 {
            return Err(Error::InsufficientOrder { need: 1, have: 0 });
        }
        Ok(Self {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// `self ∘ inner`, truncated at the smaller of the two orders.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::InnerConstantTermNonzero);
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order)?;
        // Horner's rule; inner has zero constant term so degrees above
        // `order` of self never contribute.
        let mut acc = Self::constant(self.coeffs[order].clone(), order);
        for k in (0..order).rev() {
            acc = acc.mul_unchecked(&inner).add_constant(&self.coeffs[k]);
        }
        Ok(acc)
    }

    /// Compositional inverse `g` with `f ∘ g = g ∘ f = z`.
    ///
    /// Coefficients are fixed one degree at a time: with `g` known through
    /// degree `n - 1`, the degree-`n` coefficient of `f ∘ g` is
    /// `e_n + c_1 g_n`, which must vanish.
    pub fn reverse(&self) -> Result<Self> {
        let order = self.order();
        if order == 0 {
            return Err(Error::InsufficientOrder { need: 1, have: 0 });
        }
        if !self.coeffs[0].is_zero() || self.coeffs[1].is_zero() {
            return Err(Error::NotInvertible);
        }
        let c1 = self.coeffs[1].clone();
        let mut g = Self::monomial(S::one() / c1.clone(), 1, order);
        for n in 2..=order {
            let partial = g.truncate(n)?;
            let composed = self.truncate(n)?.compose(&partial)?;
            g.coeffs[n] = -composed.coeffs[n].clone() / c1.clone();
        }
        Ok(g)
    }

    /// Square root with positive constant term, by the coefficient
    /// recursion `2 g_0 g_n = c_n - sum_{k=1}^{n-1} g_k g_{n-k}`.
    pub fn sqrt(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if !c0.is_positive() {
            return Err(Error::NonpositiveConstantTerm);
        }
        let g0 = c0
            .sqrt()
            .ok_or_else(|| Error::IrrationalSquareRoot(c0.to_string()))?;
        let two_g0 = g0.clone() + g0.clone();
        let mut g = vec![g0];
        for n in 1..=self.order() {
            let mut acc = self.coeffs[n].clone();
            for k in 1..n {
                acc = acc - g[k].clone() * g[n - k].clone();
            }
            g.push(acc / two_g0.clone());
        }
        Ok(Self { coeffs: g })
    }

    /// Largest absolute coefficient difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<S> {
        self.check_orders(other)?;
        Ok(max_abs_diff(&self.coeffs, &other.coeffs))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> TruncatedSeries<T> {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

/// Free-function form of [`TruncatedSeries::arith`].
pub fn series_arith<S: Scalar>(
    a: &TruncatedSeries<S>,
    b: &TruncatedSeries<S>,
    op: SeriesOp,
) -> Result<TruncatedSeries<S>> {
    a.arith(op, b)
}

pub(crate) fn max_abs_diff<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x.clone() - y.clone()).abs())
        .fold(S::zero(), |m, d| if d > m { d } else { m })
}

impl<S: Scalar> fmt::Debug for TruncatedSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "] + O(z^{})", self.coeffs.len())
    }
}

impl<S: Scalar> fmt::Display for TruncatedSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.coeffs.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rational};

    fn q(coeffs: &[(i64, i64)]) -> TruncatedSeries<Rational> {
        TruncatedSeries::new(coeffs.iter().map(|&(n, d)| ratio(n, d)).collect())
    }

    fn ints(coeffs: &[i64]) -> TruncatedSeries<Rational> {
        TruncatedSeries::new(coeffs.iter().map(|&n| ratio(n, 1)).collect())
    }

    #[test]
    fn product_of_conjugates() {
        let a = ints(&[1, 1, 0, 0]);
        let b = ints(&[1, -1, 0, 0]);
        assert_eq!(a.mul(&b).unwrap(), ints(&[1, 0, -1, 0]));
    }

    #[test]
    fn reciprocal_of_linear_is_geometric() {
        let lambda = ratio(3, 5);
        let one_plus = TruncatedSeries::new(vec![ratio(1, 1), lambda.clone(), ratio(0, 1), ratio(0, 1)]);
        let inv = one_plus.recip().unwrap();
        assert_eq!(inv, q(&[(1, 1), (-3, 5), (9, 25), (-27, 125)]));

        let float = TruncatedSeries::new(vec![1.0f64, 0.6, 0.0]).recip().unwrap();
        assert!((float.coeff(1) + 0.6).abs() < 1e-15);
        assert!((float.coeff(2) - 0.36).abs() < 1e-15);
    }

    #[test]
    fn z_over_one_minus_z() {
        let z = TruncatedSeries::<Rational>::identity(5);
        let one_minus = ints(&[1, -1, 0, 0, 0, 0]);
        assert_eq!(z.div(&one_minus).unwrap(), ints(&[0, 1, 1, 1, 1, 1]));
    }

    #[test]
    fn arithmetic_errors() {
        let a = ints(&[1, 2, 3]);
        let b = ints(&[0, 1, 0]);
        assert_eq!(a.div(&b), Err(Error::DivisionByZeroConstantTerm));
        assert!(matches!(a.add(&ints(&[1, 2])), Err(Error::OrderMismatch { .. })));
        assert_eq!(
            series_arith(&a, &ints(&[1, 1, 1]), SeriesOp::Sub).unwrap(),
            ints(&[0, 1, 2])
        );
    }

    #[test]
    fn compose_substitution() {
        let geo = ints(&[0, 1, 1, 1, 1, 1, 1]);
        let z2 = ints(&[0, 0, 1, 0, 0, 0, 0]);
        assert_eq!(geo.compose(&z2).unwrap(), ints(&[0, 0, 1, 0, 1, 0, 1]));

        let f = ints(&[7, 2, 3]);
        assert_eq!(f.compose(&ints(&[0, 0, 0])).unwrap(), ints(&[7, 0, 0]));
        assert_eq!(f.compose(&ints(&[1, 0, 0])), Err(Error::InnerConstantTermNonzero));
    }

    #[test]
    fn reverse_examples() {
        let z = TruncatedSeries::<Rational>::identity(6);
        assert_eq!(z.reverse().unwrap(), z);

        let f = ints(&[0, 1, 1, 0, 0]);
        assert_eq!(f.reverse().unwrap(), ints(&[0, 1, -1, 2, -5]));

        let a = q(&[(0, 1), (-7, 3), (0, 1), (0, 1)]);
        assert_eq!(a.reverse().unwrap(), q(&[(0, 1), (-3, 7), (0, 1), (0, 1)]));

        assert_eq!(ints(&[1, 1, 0]).reverse(), Err(Error::NotInvertible));
        assert_eq!(ints(&[0, 0, 1]).reverse(), Err(Error::NotInvertible));
    }

    #[test]
    fn sqrt_examples() {
        let s = ints(&[1, 1, 0, 0]).sqrt().unwrap();
        assert_eq!(s, q(&[(1, 1), (1, 2), (-1, 8), (1, 16)]));

        assert_eq!(ints(&[4]).sqrt().unwrap(), ints(&[2]));

        // (1 - z)^2 + 4z = (1 + z)^2
        let lambda = ratio(1, 1);
        let arg = ints(&[1, -2, 1, 0, 0])
            .add(&ints(&[0, 1, 0, 0, 0]).scale(&(ratio(4, 1) * lambda)))
            .unwrap();
        assert_eq!(arg.sqrt().unwrap(), ints(&[1, 1, 0, 0, 0]));

        assert_eq!(ints(&[0, 1]).sqrt(), Err(Error::NonpositiveConstantTerm));
        assert_eq!(ints(&[-1, 1]).sqrt(), Err(Error::NonpositiveConstantTerm));
        assert!(matches!(ints(&[2, 1]).sqrt(), Err(Error::IrrationalSquareRoot(_))));
        assert!(TruncatedSeries::new(vec![2.0f64, 1.0]).sqrt().is_ok());
    }

    #[test]
    fn shifts_change_order() {
        let s = ints(&[0, 1, 2]);
        assert_eq!(s.div_z().unwrap(), ints(&[1, 2]));
        assert_eq!(s.mul_z(), ints(&[0, 0, 1, 2]));
        assert!(ints(&[1, 1]).div_z().is_err());
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(q(&[(0, 1), (1, 2), (-1, 3)]).to_string(), "(1/2)z + (-1/3)z^2 + O(z^3)");
        assert_eq!(ints(&[0, 0]).to_string(), "0 + O(z^2)");
    }
}
