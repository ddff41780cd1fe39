//! Symbolic descriptions of probability laws and their moments.

use std::fmt;

use crate::error::{Error, Result};
use crate::moments::MomentSequence;
use crate::scalar::{binomial, parse_rational, Rational, Scalar};
use crate::series::TruncatedSeries;
use crate::transform::moments_from_r;

/// A compactly supported law, described symbolically.
///
/// Parameters are exact rationals so the same description can be lowered to
/// either scalar backend.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSpec {
    /// Finitely many `(atom, weight)` pairs with positive weights summing to 1.
    Atomic(Vec<(Rational, Rational)>),
    /// Marchenko-Pastur law with mean `t > 0` (all free cumulants equal `t`).
    MarchenkoPastur(Rational),
    /// `λ` times a Marchenko-Pastur variable of mean `1/λ`; the Dirac mass at
    /// 1 when `λ = 0`.
    MuLambda(Rational),
    /// `(δ_{-1} + δ_1) / 2`.
    SymmetricBernoulli,
    /// Push-forward by `x -> a x`, `a != 0`.
    Dilation(Box<MeasureSpec>, Rational),
    /// Push-forward by `x -> x + s`.
    Shift(Box<MeasureSpec>, Rational),
    /// Push-forward by `x -> sqrt(x)` of a law on `[0, ∞)`.
    SqrtPush(Box<MeasureSpec>),
    /// Push-forward by `x -> x²`.
    SquarePush(Box<MeasureSpec>),
    /// `(μ(A) + μ(-A)) / 2`.
    Symmetrization(Box<MeasureSpec>),
}

fn r(n: i64, d: i64) -> Rational {
    crate::scalar::ratio(n, d)
}

impl MeasureSpec {
    pub fn dirac(a: Rational) -> Self {
        Self::Atomic(vec![(a, r(1, 1))])
    }

    pub fn dilate(self, a: Rational) -> Self {
        Self::Dilation(Box::new(self), a)
    }

    pub fn shift(self, s: Rational) -> Self {
        Self::Shift(Box::new(self), s)
    }

    pub fn sqrt_push(self) -> Self {
        Self::SqrtPush(Box::new(self))
    }

    pub fn square_push(self) -> Self {
        Self::SquarePush(Box::new(self))
    }

    pub fn symmetrize(self) -> Self {
        Self::Symmetrization(Box::new(self))
    }

    /// The symmetric law `√ρ`: symmetrization of the square-root push-forward.
    pub fn symmetric_root(self) -> Self {
        self.sqrt_push().symmetrize()
    }

    pub fn validate(&self) -> Result<()> {
        let zero = r(0, 1);
        match self {
            Self::Atomic(atoms) => {
                if atoms.is_empty() {
                    return Err(Error::InvalidMeasure("atomic law without atoms".into()));
                }
                if let Some((_, w)) = atoms.iter().find(|(_, w)| *w <= zero) {
                    return Err(Error::InvalidMeasure(format!("non-positive weight {w}")));
                }
                let total: Rational = atoms.iter().map(|(_, w)| w.clone()).sum();
                if total != r(1, 1) {
                    return Err(Error::InvalidMeasure(format!("weights sum to {total}, not 1")));
                }
                Ok(())
            }
            Self::MarchenkoPastur(t) if *t <= zero => {
                Err(Error::InvalidMeasure(format!("Marchenko-Pastur mean must be positive, got {t}")))
            }
            Self::MuLambda(l) if *l < zero || *l > r(1, 1) => Err(Error::RatioOutOfRange(l.to_string())),
            Self::MarchenkoPastur(_) | Self::MuLambda(_) | Self::SymmetricBernoulli => Ok(()),
            Self::Dilation(_, a) if *a == zero => {
                Err(Error::InvalidMeasure("dilation by zero".into()))
            }
            Self::Dilation(inner, _)
            | Self::Shift(inner, _)
            | Self::SqrtPush(inner)
            | Self::SquarePush(inner)
            | Self::Symmetrization(inner) => inner.validate(),
        }
    }

    /// Finite atom list when the law is atomic with rational atoms.
    pub fn atoms(&self) -> Option<Vec<(Rational, Rational)>> {
        let atoms = match self {
            Self::Atomic(atoms) => atoms.clone(),
            Self::SymmetricBernoulli => vec![(r(-1, 1), r(1, 2)), (r(1, 1), r(1, 2))],
            Self::MuLambda(l) if Scalar::is_zero(l) => vec![(r(1, 1), r(1, 1))],
            Self::MarchenkoPastur(_) | Self::MuLambda(_) | Self::SqrtPush(_) => return None,
            Self::Dilation(inner, a) => inner.atoms()?.into_iter().map(|(x, w)| (x * a, w)).collect(),
            Self::Shift(inner, s) => inner.atoms()?.into_iter().map(|(x, w)| (x + s, w)).collect(),
            Self::SquarePush(inner) => inner.atoms()?.into_iter().map(|(x, w)| (&x * &x, w)).collect(),
            Self::Symmetrization(inner) => inner
                .atoms()?
                .into_iter()
                .flat_map(|(x, w)| {
                    let half = w / r(2, 1);
                    [(-x.clone(), half.clone()), (x, half)]
                })
                .collect(),
        };
        Some(atoms)
    }

    /// Smallest interval `[lo, hi]` containing the support.
    pub fn support_bounds(&self) -> (f64, f64) {
        let f = |q: &Rational| q.to_f64();
        match self {
            Self::Atomic(atoms) => atoms.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (x, _)| {
                (lo.min(f(x)), hi.max(f(x)))
            }),
            Self::MarchenkoPastur(t) => {
                let t = f(t);
                let root = t.sqrt();
                // below mean 1 there is an atom at 0
                let lo = if t > 1.0 { (root - 1.0).powi(2) } else { 0.0 };
                (lo, (1.0 + root).powi(2))
            }
            Self::MuLambda(l) => {
                let root = f(l).sqrt();
                ((1.0 - root).powi(2), (1.0 + root).powi(2))
            }
            Self::SymmetricBernoulli => (-1.0, 1.0),
            Self::Dilation(inner, a) => {
                let (lo, hi) = inner.support_bounds();
                let a = f(a);
                if a > 0.0 {
                    (a * lo, a * hi)
                } else {
                    (a * hi, a * lo)
                }
            }
            Self::Shift(inner, s) => {
                let (lo, hi) = inner.support_bounds();
                (lo + f(s), hi + f(s))
            }
            Self::SqrtPush(inner) => {
                let (lo, hi) = inner.support_bounds();
                (lo.max(0.0).sqrt(), hi.max(0.0).sqrt())
            }
            Self::SquarePush(inner) => {
                let (lo, hi) = inner.support_bounds();
                let top = (lo * lo).max(hi * hi);
                if lo <= 0.0 && hi >= 0.0 {
                    (0.0, top)
                } else {
                    ((lo * lo).min(hi * hi), top)
                }
            }
            Self::Symmetrization(inner) => {
                let (lo, hi) = inner.support_bounds();
                let m = lo.abs().max(hi.abs());
                (-m, m)
            }
        }
    }

    /// Whether the support lies in `[0, ∞)`, up to rounding of the bounds.
    pub fn is_nonnegative(&self) -> bool {
        if let Some(atoms) = self.atoms() {
            return atoms.iter().all(|(x, _)| !x.is_negative());
        }
        self.support_bounds().0 >= -1e-12
    }

    pub fn parse(s: &str) -> Result<Self> {
        let spec = parse_spec(s.trim())?;
        spec.validate()?;
        Ok(spec)
    }
}

fn parse_spec(s: &str) -> Result<MeasureSpec> {
    let bad = |msg: &str| Error::Parse(format!("{msg}: {s:?}"));
    if s == "symbernoulli" {
        return Ok(MeasureSpec::SymmetricBernoulli);
    }
    if let Some((head, rest)) = s.split_once('(') {
        let body = rest.strip_suffix(')').ok_or_else(|| bad("missing closing parenthesis"))?;
        let param_and_inner = |body: &str| -> Result<(Rational, Box<MeasureSpec>)> {
            let (p, inner) = body.split_once(',').ok_or_else(|| bad("expected <number>,<spec>"))?;
            Ok((parse_rational(p)?, Box::new(parse_spec(inner.trim())?)))
        };
        return match head.trim() {
            "dilate" => param_and_inner(body).map(|(a, m)| MeasureSpec::Dilation(m, a)),
            "shift" => param_and_inner(body).map(|(s, m)| MeasureSpec::Shift(m, s)),
            "sqrtpush" => Ok(MeasureSpec::SqrtPush(Box::new(parse_spec(body.trim())?))),
            "squarepush" => Ok(MeasureSpec::SquarePush(Box::new(parse_spec(body.trim())?))),
            "symmetrize" => Ok(MeasureSpec::Symmetrization(Box::new(parse_spec(body.trim())?))),
            _ => Err(bad("unknown measure transformation")),
        };
    }
    let (kind, arg) = s.split_once(':').ok_or_else(|| bad("unknown measure"))?;
    match kind.trim() {
        "atomic" => {
            let atoms = arg
                .split(',')
                .map(|pair| {
                    let (x, w) = pair.split_once('=').ok_or_else(|| bad("expected atom=weight"))?;
                    Ok((parse_rational(x)?, parse_rational(w)?))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(MeasureSpec::Atomic(atoms))
        }
        "dirac" => Ok(MeasureSpec::dirac(parse_rational(arg)?)),
        "mp" => Ok(MeasureSpec::MarchenkoPastur(parse_rational(arg)?)),
        "mulambda" => Ok(MeasureSpec::MuLambda(parse_rational(arg)?)),
        _ => Err(bad("unknown measure")),
    }
}

impl std::str::FromStr for MeasureSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Atomic(atoms) => {
                write!(f, "atomic:")?;
                for (i, (x, w)) in atoms.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}={w}")?;
                }
                Ok(())
            }
            Self::MarchenkoPastur(t) => write!(f, "mp:{t}"),
            Self::MuLambda(l) => write!(f, "mulambda:{l}"),
            Self::SymmetricBernoulli => write!(f, "symbernoulli"),
            Self::Dilation(inner, a) => write!(f, "dilate({a},{inner})"),
            Self::Shift(inner, s) => write!(f, "shift({s},{inner})"),
            Self::SqrtPush(inner) => write!(f, "sqrtpush({inner})"),
            Self::SquarePush(inner) => write!(f, "squarepush({inner})"),
            Self::Symmetrization(inner) => write!(f, "symmetrize({inner})"),
        }
    }
}

/// Moments of the law with all free cumulants equal to `t`.
pub fn marchenko_pastur_moments<S: Scalar>(t: &S, order: usize) -> Result<MomentSequence<S>> {
    let r = TruncatedSeries::geometric(&S::one(), order - 1).mul_z().scale(t);
    moments_from_r(&r)
}

/// Moments of `μ_λ`, whose free cumulants are `λ^{n-1}`.
pub fn mu_lambda_moments<S: Scalar>(lambda: &S, order: usize) -> Result<MomentSequence<S>> {
    moments_from_r(&TruncatedSeries::geometric(lambda, order - 1).mul_z())
}

/// Moments `m_1..=m_N` of the described law.
///
/// Push-forwards request deeper truncations of their inner law as needed.
pub fn moments_of<S: Scalar>(spec: &MeasureSpec, order: usize) -> Result<MomentSequence<S>> {
    if order == 0 {
        return Err(Error::InsufficientOrder { need: 1, have: 0 });
    }
    spec.validate()?;
    lower(spec, order)
}

fn lower<S: Scalar>(spec: &MeasureSpec, order: usize) -> Result<MomentSequence<S>> {
    match spec {
        MeasureSpec::Atomic(atoms) => Ok(atomic_moments(
            &atoms
                .iter()
                .map(|(x, w)| (S::from_rational(x), S::from_rational(w)))
                .collect::<Vec<_>>(),
            order,
        )),
        MeasureSpec::MarchenkoPastur(t) => marchenko_pastur_moments(&S::from_rational(t), order),
        MeasureSpec::MuLambda(l) => mu_lambda_moments(&S::from_rational(l), order),
        MeasureSpec::SymmetricBernoulli => Ok(MomentSequence::new(
            (1..=order)
                .map(|n| if n % 2 == 0 { S::one() } else { S::zero() })
                .collect(),
        )),
        MeasureSpec::Dilation(inner, a) => Ok(lower::<S>(inner, order)?.dilate(&S::from_rational(a))),
        MeasureSpec::Shift(inner, s) => {
            let m = lower::<S>(inner, order)?;
            let s = S::from_rational(s);
            Ok(MomentSequence::new(
                (1..=order)
                    .map(|n| {
                        (0..=n).fold(S::zero(), |acc, k| {
                            acc + binomial::<S>(n, k) * s.powi((n - k) as u32) * m.get(k)
                        })
                    })
                    .collect(),
            ))
        }
        MeasureSpec::SquarePush(inner) => {
            let m = lower::<S>(inner, 2 * order)?;
            Ok(MomentSequence::new((1..=order).map(|n| m.get(2 * n)).collect()))
        }
        MeasureSpec::SqrtPush(inner) => {
            require_nonnegative(inner)?;
            if let MeasureSpec::SquarePush(base) = inner.as_ref() {
                if base.is_nonnegative() {
                    return lower(base, order);
                }
            }
            let atoms = inner
                .atoms()
                .ok_or_else(|| Error::OddMomentsUndetermined(inner.to_string()))?;
            let roots = atoms
                .iter()
                .map(|(x, w)| {
                    let root = S::from_rational(x)
                        .sqrt()
                        .ok_or_else(|| Error::IrrationalSquareRoot(x.to_string()))?;
                    Ok((root, S::from_rational(w)))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(atomic_moments(&roots, order))
        }
        MeasureSpec::Symmetrization(inner) => {
            let even: Vec<S> = if let MeasureSpec::SqrtPush(base) = inner.as_ref() {
                // even moment 2j of √ρ is the j-th moment of ρ
                require_nonnegative(base)?;
                let m = lower::<S>(base, (order / 2).max(1))?;
                (1..=order / 2).map(|j| m.get(j)).collect()
            } else {
                let m = lower::<S>(inner, order)?;
                (1..=order / 2).map(|j| m.get(2 * j)).collect()
            };
            Ok(MomentSequence::new(
                (1..=order)
                    .map(|n| if n % 2 == 0 { even[n / 2 - 1].clone() } else { S::zero() })
                    .collect(),
            ))
        }
    }
}

fn require_nonnegative(spec: &MeasureSpec) -> Result<()> {
    if spec.is_nonnegative() {
        Ok(())
    } else {
        Err(Error::NegativeSupport(spec.to_string()))
    }
}

pub(crate) fn atomic_moments<S: Scalar>(atoms: &[(S, S)], order: usize) -> MomentSequence<S> {
    let mut powers: Vec<S> = atoms.iter().map(|_| S::one()).collect();
    MomentSequence::new(
        (1..=order)
            .map(|_| {
                let mut acc = S::zero();
                for ((x, w), p) in atoms.iter().zip(powers.iter_mut()) {
                    *p = p.clone() * x.clone();
                    acc = acc + w.clone() * p.clone();
                }
                acc
            })
            .collect(),
    )
}

/// Density of `μ_λ` at `x`, zero outside `[(1-√λ)², (1+√λ)²]`.
pub fn mu_lambda_density(lambda: f64, x: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(if lambda == 0.0 {
            Error::LambdaZero
        } else {
            Error::RatioOutOfRange(lambda.to_string())
        });
    }
    let root = lambda.sqrt();
    let (lo, hi) = ((1.0 - root).powi(2), (1.0 + root).powi(2));
    if x <= 0.0 || x < lo || x > hi {
        return Ok(0.0);
    }
    let d = x - 1.0 - lambda;
    let radicand = (4.0 * lambda - d * d).max(0.0);
    Ok(radicand.sqrt() / (2.0 * std::f64::consts::PI * lambda * x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HankelKind {
    /// `[m_{i+j}]`
    Plain,
    /// `[m_{i+j+1}]`
    Shifted,
}

/// Outcome of the Stieltjes positivity test.
#[derive(Debug, Clone, PartialEq)]
pub enum Positivity<S> {
    Valid,
    /// The leading `order × order` block of the given Hankel matrix is not
    /// positive semidefinite; `determinant` is that block's determinant.
    Invalid {
        order: usize,
        kind: HankelKind,
        determinant: S,
    },
}

impl<S> Positivity<S> {
    pub fn is_valid(&self) -> bool {
        matches!(self, Self::Valid)
    }
}

/// Checks the necessary conditions for `m` to be the moment sequence of a law
/// on `[0, ∞)`: the Hankel matrices `[m_{i+j}]_{0<=i,j<=k}` and
/// `[m_{i+j+1}]_{0<=i,j<k}` must be positive semidefinite.
///
/// Leading blocks are tested by increasing size, plain before shifted; the
/// first failure is reported.
pub fn stieltjes_positivity<S: Scalar>(
    m: &MomentSequence<S>,
    k: usize,
    tol: f64,
) -> Result<Positivity<S>> {
    m.require_order(2 * k)?;
    for size in 1..=k + 1 {
        let plain = hankel(m, size, 0);
        if !is_psd(&plain, tol) {
            return Ok(Positivity::Invalid {
                order: size,
                kind: HankelKind::Plain,
                determinant: determinant(plain),
            });
        }
        if size <= k {
            let shifted = hankel(m, size, 1);
            if !is_psd(&shifted, tol) {
                return Ok(Positivity::Invalid {
                    order: size,
                    kind: HankelKind::Shifted,
                    determinant: determinant(shifted),
                });
            }
        }
    }
    Ok(Positivity::Valid)
}

fn hankel<S: Scalar>(m: &MomentSequence<S>, size: usize, shift: usize) -> Vec<Vec<S>> {
    (0..size)
        .map(|i| (0..size).map(|j| m.get(i + j + shift)).collect())
        .collect()
}

/// Symmetric elimination; a zero pivot is only admissible with a zero row.
fn is_psd<S: Scalar>(a: &[Vec<S>], tol: f64) -> bool {
    let n = a.len();
    let mut a = a.to_vec();
    let scale = a
        .iter()
        .flatten()
        .map(|x| x.abs().to_f64())
        .fold(1.0, f64::max);
    let tol = tol * scale;
    for i in 0..n {
        let pivot = a[i][i].clone();
        if pivot.is_negligible(tol) {
            if a[i][i + 1..].iter().any(|x| !x.is_negligible(tol)) {
                return false;
            }
            continue;
        }
        if pivot.is_negative() {
            return false;
        }
        for r in i + 1..n {
            let factor = a[r][i].clone() / pivot.clone();
            for c in i + 1..n {
                a[r][c] = a[r][c].clone() - factor.clone() * a[i][c].clone();
            }
        }
    }
    true
}

/// Determinant by Gaussian elimination with pivoting on the largest entry.
pub fn determinant<S: Scalar>(mut a: Vec<Vec<S>>) -> S {
    let n = a.len();
    let mut det = S::one();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&x, &y| {
                a[x][col]
                    .abs()
                    .partial_cmp(&a[y][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty range");
        if a[pivot_row][col].is_zero() {
            return S::zero();
        }
        if pivot_row != col {
            a.swap(pivot_row, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det = det * pivot.clone();
        for r in col + 1..n {
            let factor = a[r][col].clone() / pivot.clone();
            for c in col..n {
                a[r][c] = a[r][c].clone() - factor.clone() * a[col][c].clone();
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio as q, DEFAULT_TOLERANCE};

    fn spec(s: &str) -> MeasureSpec {
        MeasureSpec::parse(s).unwrap()
    }

    fn exact(s: &str, n: usize) -> Vec<Rational> {
        moments_of::<Rational>(&spec(s), n).unwrap().into_vec()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x, 1)).collect()
    }

    #[test]
    fn catalan_and_mp_moments() {
        assert_eq!(exact("mulambda:1", 4), ints(&[1, 2, 5, 14]));
        assert_eq!(exact("mp:2", 3), ints(&[2, 6, 22]));
        assert_eq!(exact("mulambda:0", 5), ints(&[1; 5]));
        assert_eq!(exact("atomic:0=0.5,1=0.5", 4), vec![q(1, 2); 4]);
    }

    #[test]
    fn mp_moments_match_narayana_polynomials() {
        // m_n = sum_k N(n,k) t^k, N(n,k) = C(n,k) C(n,k-1) / n
        let t = q(13, 10);
        let m = exact("mp:1.3", 8);
        for n in 1..=8usize {
            let mut expected = q(0, 1);
            for k in 1..=n {
                let nar: Rational = binomial::<Rational>(n, k) * binomial::<Rational>(n, k - 1) / q(n as i64, 1);
                expected += nar * t.powi(k as u32);
            }
            assert_eq!(m[n - 1], expected, "n = {n}");
        }
    }

    #[test]
    fn pushforwards() {
        assert_eq!(exact("dilate(3,mulambda:1)", 3), ints(&[3, 18, 135]));
        assert_eq!(exact("shift(2,atomic:1=1)", 3), ints(&[3, 9, 27]));
        assert_eq!(exact("squarepush(symbernoulli)", 3), ints(&[1, 1, 1]));
        assert_eq!(exact("squarepush(mulambda:1)", 2), ints(&[2, 14]));
        assert_eq!(exact("sqrtpush(atomic:4=1/2,9=1/2)", 2), vec![q(5, 2), q(13, 2)]);
        assert_eq!(exact("sqrtpush(squarepush(mp:2))", 3), exact("mp:2", 3));
        assert_eq!(exact("symmetrize(atomic:2=1)", 4), ints(&[0, 4, 0, 16]));
        assert_eq!(exact("symbernoulli", 4), ints(&[0, 1, 0, 1]));
    }

    #[test]
    fn symmetric_root_has_inner_moments_as_even_moments() {
        for s in ["mp:1.3", "mulambda:3/5", "atomic:1=1/2,3=1/2", "atomic:0=1/2,1=1/2"] {
            let inner = exact(s, 5);
            let root = moments_of::<Rational>(&spec(s).symmetric_root(), 10).unwrap();
            assert!(root.is_symmetric());
            for j in 1..=5 {
                assert_eq!(root.get(2 * j), inner[j - 1]);
                assert_eq!(root.get(2 * j - 1), q(0, 1));
            }
        }
    }

    #[test]
    fn pushforward_errors() {
        assert!(matches!(
            moments_of::<Rational>(&spec("sqrtpush(symbernoulli)"), 3),
            Err(Error::NegativeSupport(_))
        ));
        assert!(matches!(
            moments_of::<Rational>(&spec("sqrtpush(mp:2)"), 3),
            Err(Error::OddMomentsUndetermined(_))
        ));
        assert!(matches!(
            moments_of::<Rational>(&spec("sqrtpush(atomic:2=1)"), 3),
            Err(Error::IrrationalSquareRoot(_))
        ));
        assert!(moments_of::<f64>(&spec("sqrtpush(atomic:2=1)"), 3).is_ok());
        assert!(moments_of::<Rational>(&spec("mp:1"), 0).is_err());
    }

    #[test]
    fn parser_rejects_malformed() {
        for s in ["atomic:0=0.4,1=0.5", "atomic:1=0", "mp:0", "mulambda:2", "dilate(0,mp:1)", "foo:1", "dilate(2,mp:1", "gauss"] {
            assert!(MeasureSpec::parse(s).is_err(), "{s}");
        }
    }

    #[test]
    fn display_roundtrips_through_parser() {
        for s in ["atomic:0=1/2,1=1/2", "mp:13/10", "mulambda:3/5", "symbernoulli", "dilate(2,shift(-1/4,mp:1))", "symmetrize(sqrtpush(squarepush(mulambda:1)))"] {
            let parsed = spec(s);
            assert_eq!(parsed.to_string(), s);
            assert_eq!(spec(&parsed.to_string()), parsed);
        }
    }

    #[test]
    fn support_bounds_follow_pushforwards() {
        let (lo, hi) = spec("shift(-1,mp:4)").support_bounds();
        assert!(lo.abs() < 1e-12 && (hi - 8.0).abs() < 1e-12);
        assert!(spec("shift(-1,mp:4)").is_nonnegative());
        assert!(!spec("shift(-1/4,mp:1)").is_nonnegative());
        assert_eq!(spec("mp:1/2").support_bounds().0, 0.0);
        assert!(!spec("symbernoulli").is_nonnegative());
    }

    #[test]
    fn density_values() {
        let v = mu_lambda_density(1.0, 1.0).unwrap();
        assert!((v - 3f64.sqrt() / (2.0 * std::f64::consts::PI)).abs() < 1e-14);
        let v = mu_lambda_density(1.0, 2.0).unwrap();
        assert!((v - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-14);
        let hi = (1.0 + 0.6f64.sqrt()).powi(2);
        assert_eq!(mu_lambda_density(0.6, hi + 0.01).unwrap(), 0.0);
        assert_eq!(mu_lambda_density(0.6, 0.01).unwrap(), 0.0);
        assert_eq!(mu_lambda_density(0.0, 1.0), Err(Error::LambdaZero));
        assert!(mu_lambda_density(1.5, 1.0).is_err());
    }

    #[test]
    fn density_integrates_to_one() {
        // x = c + r cos θ removes the square-root endpoint behaviour, so the
        // midpoint rule converges spectrally.
        let lambda = 0.6f64;
        let root = lambda.sqrt();
        let (lo, hi) = ((1.0 - root).powi(2), (1.0 + root).powi(2));
        let (c, rad) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
        let steps = 2000;
        let h = std::f64::consts::PI / steps as f64;
        let total: f64 = (0..steps)
            .map(|i| {
                let theta = (i as f64 + 0.5) * h;
                mu_lambda_density(lambda, c + rad * theta.cos()).unwrap() * rad * theta.sin() * h
            })
            .sum();
        assert!((total - 1.0).abs() < 1e-6, "{total}");
    }

    #[test]
    fn positivity_examples() {
        let catalan = moments_of::<Rational>(&spec("mulambda:1"), 4).unwrap();
        assert!(stieltjes_positivity(&catalan, 2, DEFAULT_TOLERANCE).unwrap().is_valid());

        let delta = moments_of::<Rational>(&spec("atomic:1=1"), 6).unwrap();
        assert!(stieltjes_positivity(&delta, 3, DEFAULT_TOLERANCE).unwrap().is_valid());

        // m_1 = 1, m_2 = 1/2: det [[1,1],[1,1/2]] = -1/2
        let bad = MomentSequence::new(vec![q(1, 1), q(1, 2)]);
        assert_eq!(
            stieltjes_positivity(&bad, 1, DEFAULT_TOLERANCE).unwrap(),
            Positivity::Invalid {
                order: 2,
                kind: HankelKind::Plain,
                determinant: q(-1, 2)
            }
        );

        // symmetric Bernoulli lives on [-1, 1]: the shifted block fails
        let sym = moments_of::<Rational>(&spec("symbernoulli"), 4).unwrap();
        assert!(matches!(
            stieltjes_positivity(&sym, 2, DEFAULT_TOLERANCE).unwrap(),
            Positivity::Invalid { kind: HankelKind::Shifted, .. }
        ));

        assert!(stieltjes_positivity(&catalan, 3, DEFAULT_TOLERANCE).is_err());
    }

    #[test]
    fn determinant_small_cases() {
        let a = vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(3, 1)]];
        assert_eq!(determinant(a), q(5, 1));
        let b = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        assert_eq!(determinant(b), -1.0);
    }
}
