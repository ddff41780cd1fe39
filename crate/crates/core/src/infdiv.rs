//! Lévy parameterisations of `⊞`- and `⊞_λ`-infinitely divisible laws with
//! finite atomic Lévy measures, and the correspondence between them.

use std::fmt;

use crate::convolution::{boxtimes, ConvolutionReport};
use crate::error::{Error, Result};
use crate::measure::{marchenko_pastur_moments, mu_lambda_moments};
use crate::moments::MomentSequence;
use crate::scalar::{parse_rational, Rational, Scalar, DEFAULT_TOLERANCE};
use crate::series::TruncatedSeries;
use crate::transform::{moments_from_c, moments_from_r, RatioParam};

/// Drift `γ` and finite atomic measure `σ` with
/// `R(z) = γz + z ∫ (z + t) / (1 - tz) dσ(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevyPair<S> {
    pub gamma: S,
    /// `(atom, weight)`, weights non-negative.
    pub sigma: Vec<(S, S)>,
}

/// Symmetric finite atomic measure `G`, stored through its push-forward `G²`
/// by `t -> t²`. An atom `x > 0` of mass `w` in `G²` stands for `w/2` at each
/// of `±√x`; an atom at 0 is a single atom of `G`.
#[derive(Debug, Clone, PartialEq)]
pub struct RectLevyMeasure<S> {
    squared: Vec<(S, S)>,
}

impl<S: Scalar> LevyPair<S> {
    pub fn new(gamma: S, sigma: Vec<(S, S)>) -> Result<Self> {
        if sigma.iter().any(|(_, w)| w.is_negative()) {
            return Err(Error::InvalidMeasure("Levy measure with negative weight".into()));
        }
        Ok(Self { gamma, sigma }.canonical())
    }

    /// Atoms sorted, duplicates merged, zero weights dropped.
    pub fn canonical(&self) -> Self {
        Self {
            gamma: self.gamma.clone(),
            sigma: canonical_atoms(&self.sigma),
        }
    }

    /// Lévy pair of `μ^{⊞t}`.
    pub fn scaled(&self, t: &S) -> Self {
        Self {
            gamma: self.gamma.clone() * t.clone(),
            sigma: self
                .sigma
                .iter()
                .map(|(x, w)| (x.clone(), w.clone() * t.clone()))
                .collect(),
        }
    }

    /// Pair of the `⊞`-convolution of the two laws.
    pub fn combine(&self, other: &Self) -> Self {
        let mut sigma = self.sigma.clone();
        sigma.extend(other.sigma.iter().cloned());
        Self {
            gamma: self.gamma.clone() + other.gamma.clone(),
            sigma: canonical_atoms(&sigma),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LevyPair<T> {
        LevyPair {
            gamma: f(&self.gamma),
            sigma: self.sigma.iter().map(|(x, w)| (f(x), f(w))).collect(),
        }
    }
}

impl LevyPair<Rational> {
    /// Parses `levy:gamma=0.65,sigma=1=0.65[,sigma=t=w...]`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("{msg}: {s:?}"));
        let body = s.trim().strip_prefix("levy:").ok_or_else(|| bad("expected levy:..."))?;
        let mut gamma = None;
        let mut sigma = Vec::new();
        for item in body.split(',').filter(|x| !x.trim().is_empty()) {
            let (key, value) = item.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            match key.trim() {
                "gamma" => gamma = Some(parse_rational(value)?),
                "sigma" => {
                    let (t, w) = value.split_once('=').ok_or_else(|| bad("expected sigma=atom=weight"))?;
                    sigma.push((parse_rational(t)?, parse_rational(w)?));
                }
                _ => return Err(bad("unknown key")),
            }
        }
        Self::new(gamma.ok_or_else(|| bad("missing gamma"))?, sigma)
    }
}

impl<S: Scalar> fmt::Display for LevyPair<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "levy:gamma={}", self.gamma)?;
        for (t, w) in &self.sigma {
            write!(f, ",sigma={t}={w}")?;
        }
        Ok(())
    }
}

impl<S: Scalar> RectLevyMeasure<S> {
    /// From the atoms of `G²`: `(x >= 0, mass >= 0)`.
    pub fn from_squared(squared: Vec<(S, S)>) -> Result<Self> {
        if squared.iter().any(|(x, w)| x.is_negative() || w.is_negative()) {
            return Err(Error::InvalidMeasure(
                "G² needs non-negative atoms and weights".into(),
            ));
        }
        Ok(Self {
            squared: canonical_atoms(&squared),
        })
    }

    /// From one side of the symmetric measure: `(t, w)` puts `w` at `t` and
    /// at `-t` (a single `w` when `t = 0`).
    pub fn from_symmetric(atoms: Vec<(S, S)>) -> Result<Self> {
        let squared = atoms
            .into_iter()
            .map(|(t, w)| {
                let mass = if t.is_zero() { w } else { w.clone() + w };
                (t.clone() * t, mass)
            })
            .collect();
        Self::from_squared(squared)
    }

    pub fn squared(&self) -> &[(S, S)] {
        &self.squared
    }

    /// One side of `G` as `(t >= 0, weight at t)`; needs square roots of the
    /// atoms of `G²`.
    pub fn symmetric_atoms(&self) -> Result<Vec<(S, S)>> {
        self.squared
            .iter()
            .map(|(x, w)| {
                let t = x
                    .sqrt()
                    .ok_or_else(|| Error::IrrationalSquareRoot(x.to_string()))?;
                let side = if x.is_zero() {
                    w.clone()
                } else {
                    w.clone() / S::from_i64(2)
                };
                Ok((t, side))
            })
            .collect()
    }

    pub fn total_mass(&self) -> S {
        self.squared.iter().fold(S::zero(), |acc, (_, w)| acc + w.clone())
    }
}

impl RectLevyMeasure<Rational> {
    /// Parses `g:1=0.325[,t=w...]`, listing one side of the symmetric measure.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("{msg}: {s:?}"));
        let body = s.trim().strip_prefix("g:").ok_or_else(|| bad("expected g:..."))?;
        let atoms = body
            .split(',')
            .filter(|x| !x.trim().is_empty())
            .map(|item| {
                let (t, w) = item.split_once('=').ok_or_else(|| bad("expected atom=weight"))?;
                Ok((parse_rational(t)?, parse_rational(w)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_symmetric(atoms)
    }
}

impl<S: Scalar> RectLevyMeasure<S> {
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> RectLevyMeasure<T> {
        RectLevyMeasure {
            squared: self.squared.iter().map(|(x, w)| (f(x), f(w))).collect(),
        }
    }
}

fn canonical_atoms<S: Scalar>(atoms: &[(S, S)]) -> Vec<(S, S)> {
    let mut sorted: Vec<(S, S)> = atoms.iter().filter(|(_, w)| !w.is_zero()).cloned().collect();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut out: Vec<(S, S)> = Vec::with_capacity(sorted.len());
    for (x, w) in sorted {
        match out.last_mut() {
            Some((y, v)) if *y == x => *v = v.clone() + w,
            _ => out.push((x, w)),
        }
    }
    out
}

/// Series expansion of the Lévy-Khintchine form of the R-transform:
/// `k_1 = γ + Σ w t`, `k_n = Σ w (t^n + t^{n-2})` for `n >= 2`.
pub fn r_from_levy_pair<S: Scalar>(p: &LevyPair<S>, order: usize) -> TruncatedSeries<S> {
    TruncatedSeries::from_fn(order, |n| match n {
        0 => S::zero(),
        1 => p
            .sigma
            .iter()
            .fold(p.gamma.clone(), |acc, (t, w)| acc + w.clone() * t.clone()),
        _ => p.sigma.iter().fold(S::zero(), |acc, (t, w)| {
            acc + w.clone() * (t.powi(n as u32) + t.powi(n as u32 - 2))
        }),
    })
}

/// `C(z) = z ∫ (1 + t²) / (1 - z t²) dG(t)`: the coefficient of `z^n` is
/// `Σ mass (1 + x) x^{n-1}` over the atoms of `G²`.
pub fn c_from_levy_g<S: Scalar>(g: &RectLevyMeasure<S>, order: usize) -> TruncatedSeries<S> {
    TruncatedSeries::from_fn(order, |n| {
        if n == 0 {
            return S::zero();
        }
        g.squared.iter().fold(S::zero(), |acc, (x, w)| {
            acc + w.clone() * (S::one() + x.clone()) * x.powi(n as u32 - 1)
        })
    })
}

/// `γ = ∫ (1 + x)/(1 + x²) dG²(x)`, `σ = x(1 + x)/(1 + x²) dG²(x)`.
pub fn g_to_levy_pair<S: Scalar>(g: &RectLevyMeasure<S>) -> LevyPair<S> {
    let mut gamma = S::zero();
    let mut sigma = Vec::with_capacity(g.squared.len());
    for (x, w) in &g.squared {
        let denom = S::one() + x.clone() * x.clone();
        gamma = gamma + w.clone() * (S::one() + x.clone()) / denom.clone();
        if !x.is_zero() {
            sigma.push((x.clone(), w.clone() * x.clone() * (S::one() + x.clone()) / denom));
        }
    }
    LevyPair {
        gamma,
        sigma: canonical_atoms(&sigma),
    }
}

/// `σ` charges only `(0, ∞)` and `∫ dσ(x)/x <= γ`: every `μ^{⊞t}` is then
/// supported on `[0, ∞)`.
pub fn check_nonneg_support<S: Scalar>(p: &LevyPair<S>) -> bool {
    positivity_slack(p).is_some_and(|slack| !slack.is_negative() || slack.is_negligible(DEFAULT_TOLERANCE))
}

/// `γ - ∫ dσ/x`, or `None` when `σ` charges `(-∞, 0]`.
fn positivity_slack<S: Scalar>(p: &LevyPair<S>) -> Option<S> {
    let mut slack = p.gamma.clone();
    for (t, w) in &p.sigma {
        if w.is_zero() {
            continue;
        }
        if !t.is_positive() {
            return None;
        }
        slack = slack - w.clone() / t.clone();
    }
    Some(slack)
}

/// `G² = (γ - ∫ dσ/x) δ_0 + (1 + x²)/(x(1 + x)) dσ(x)`.
pub fn levy_pair_to_g<S: Scalar>(p: &LevyPair<S>) -> Result<RectLevyMeasure<S>> {
    if !check_nonneg_support(p) {
        return Err(Error::PositivityViolation(p.to_string()));
    }
    let slack = positivity_slack(p).expect("checked above");
    let mut squared = vec![(S::zero(), if slack.is_negative() { S::zero() } else { slack })];
    for (x, w) in &p.sigma {
        let mass = w.clone() * (S::one() + x.clone() * x.clone()) / (x.clone() * (S::one() + x.clone()));
        squared.push((x.clone(), mass));
    }
    RectLevyMeasure::from_squared(squared)
}

/// Moments of the `⊞`-infinitely divisible law with pair `p`.
pub fn levy_law_moments<S: Scalar>(p: &LevyPair<S>, order: usize) -> Result<MomentSequence<S>> {
    moments_from_r(&r_from_levy_pair(p, order))
}

/// Moments of `MP_c ⊠ MP_a` for `c > 0`, `a > 1`, computed by the direct
/// product and, independently, as the push-forward by `x -> a x²` of the
/// `⊞_{1/a}`-infinitely divisible law with Lévy measure
/// `(c/4)(δ_1 + δ_{-1})`. Fails when the two routes disagree.
pub fn mp_product_law<S: Scalar>(c: &S, a: &S, order: usize) -> Result<MomentSequence<S>> {
    let (direct, via_g) = mp_product_routes(c, a, order)?;
    let report = ConvolutionReport::new(direct.as_slice().to_vec(), via_g.into_vec())?;
    if !report.passes(DEFAULT_TOLERANCE) {
        return Err(Error::RouteMismatch(report.max_discrepancy.to_string()));
    }
    Ok(direct)
}

/// Both routes of [`mp_product_law`], for callers that want to compare them.
pub fn mp_product_routes<S: Scalar>(
    c: &S,
    a: &S,
    order: usize,
) -> Result<(MomentSequence<S>, MomentSequence<S>)> {
    if !c.is_positive() {
        return Err(Error::InvalidParameter(format!("c must be positive, got {c}")));
    }
    if *a <= S::one() {
        return Err(Error::InvalidParameter(format!("a must exceed 1, got {a}")));
    }
    let direct = boxtimes(
        &marchenko_pastur_moments(c, order)?,
        &marchenko_pastur_moments(a, order)?,
    )?;

    let lambda_value = S::one() / a.clone();
    let quarter = c.clone() / S::from_i64(4);
    let g = RectLevyMeasure::from_symmetric(vec![(S::one(), quarter)])?;
    let lambda = ratio_param_of(&lambda_value)?;
    let nu_squared = moments_from_c(&c_from_levy_g(&g, order), &lambda)?;
    Ok((direct, nu_squared.dilate(a)))
}

/// Moments of the squared `⊞_λ` law with Lévy measure `(c/4)(δ_1 + δ_{-1})`,
/// i.e. `MP_c ⊠ μ_λ`; this is the limit spectrum of both matrix models of the
/// Marchenko-Pastur product experiment.
pub fn mp_product_squared_law<S: Scalar>(c: &S, lambda: &S, order: usize) -> Result<MomentSequence<S>> {
    boxtimes(&marchenko_pastur_moments(c, order)?, &mu_lambda_moments(lambda, order)?)
}

fn ratio_param_of<S: Scalar>(lambda: &S) -> Result<RatioParam> {
    // RatioParam is rational; float inputs go through the nearest rational.
    let r = if S::EXACT {
        parse_rational(&lambda.to_string())?
    } else {
        Rational::from_float(lambda.to_f64())
            .ok_or_else(|| Error::InvalidParameter(format!("lambda = {lambda}")))?
    };
    RatioParam::new(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convolution::boxplus;
    use crate::measure::{moments_of, MeasureSpec};
    use crate::scalar::ratio as q;
    use crate::transform::rect_c_transform;

    type Q = Rational;

    fn pair(gamma: Q, sigma: &[(Q, Q)]) -> LevyPair<Q> {
        LevyPair::new(gamma, sigma.to_vec()).unwrap()
    }

    #[test]
    fn mp_pair_gives_constant_cumulants() {
        let c = q(13, 10);
        let p = pair(&c / q(2, 1), &[(q(1, 1), &c / q(2, 1))]);
        let r = r_from_levy_pair(&p, 6);
        assert_eq!(r, TruncatedSeries::geometric(&q(1, 1), 5).mul_z().scale(&c));
        assert_eq!(
            levy_law_moments(&p, 6).unwrap(),
            moments_of(&MeasureSpec::MarchenkoPastur(c), 6).unwrap()
        );
    }

    #[test]
    fn drift_only_pair_is_dirac() {
        let p = pair(q(3, 2), &[]);
        assert_eq!(r_from_levy_pair(&p, 4), TruncatedSeries::monomial(q(3, 2), 1, 4));
    }

    #[test]
    fn atom_at_zero_feeds_second_cumulant_only() {
        // (z + 0) / (1 - 0) = z, so the atom contributes w z² to R.
        let p = pair(q(0, 1), &[(q(0, 1), q(2, 3))]);
        assert_eq!(r_from_levy_pair(&p, 5), TruncatedSeries::monomial(q(2, 3), 2, 5));
    }

    #[test]
    fn scaling_scales_series() {
        let p = pair(q(1, 2), &[(q(2, 1), q(1, 3)), (q(-1, 1), q(1, 5))]);
        let t = q(7, 4);
        assert_eq!(r_from_levy_pair(&p.scaled(&t), 6), r_from_levy_pair(&p, 6).scale(&t));
    }

    #[test]
    fn c_from_g_examples() {
        let c = q(2, 1);
        let g = RectLevyMeasure::from_symmetric(vec![(q(1, 1), &c / q(4, 1))]).unwrap();
        assert_eq!(c_from_levy_g(&g, 5), TruncatedSeries::geometric(&q(1, 1), 4).mul_z().scale(&c));
        let g0 = RectLevyMeasure::from_symmetric(vec![(q(0, 1), q(3, 1))]).unwrap();
        assert_eq!(c_from_levy_g(&g0, 4), TruncatedSeries::monomial(q(3, 1), 1, 4));
        let empty = RectLevyMeasure::<Q>::from_squared(vec![]).unwrap();
        assert!(c_from_levy_g(&empty, 4).is_zero());
    }

    #[test]
    fn g_to_pair_examples() {
        let g = RectLevyMeasure::from_symmetric(vec![(q(1, 1), q(1, 2))]).unwrap();
        assert_eq!(g_to_levy_pair(&g), pair(q(1, 1), &[(q(1, 1), q(1, 1))]));
        let g0 = RectLevyMeasure::from_symmetric(vec![(q(0, 1), q(2, 5))]).unwrap();
        assert_eq!(g_to_levy_pair(&g0), pair(q(2, 5), &[]));
    }

    #[test]
    fn pair_to_g_examples() {
        let g = levy_pair_to_g(&pair(q(1, 1), &[(q(1, 1), q(1, 1))])).unwrap();
        assert_eq!(g.symmetric_atoms().unwrap(), vec![(q(1, 1), q(1, 2))]);
        let g = levy_pair_to_g(&pair(q(5, 2), &[])).unwrap();
        assert_eq!(g.symmetric_atoms().unwrap(), vec![(q(0, 1), q(5, 2))]);
        assert!(matches!(
            levy_pair_to_g(&pair(q(1, 2), &[(q(1, 1), q(1, 1))])),
            Err(Error::PositivityViolation(_))
        ));
    }

    #[test]
    fn nonneg_support_examples() {
        let c = q(13, 10);
        assert!(check_nonneg_support(&pair(&c / q(2, 1), &[(q(1, 1), &c / q(2, 1))])));
        assert!(!check_nonneg_support(&pair(q(1, 1), &[(q(-1, 1), q(1, 1))])));
        assert!(!check_nonneg_support(&pair(q(1, 2), &[(q(1, 1), q(1, 1))])));
        assert!(!check_nonneg_support(&pair(q(1, 1), &[(q(0, 1), q(1, 1))])));
    }

    #[test]
    fn shifted_marchenko_pastur_semigroup() {
        // MP_t shifted by -t/4 is a ⊞-semigroup whose members leave [0, ∞)
        // for small t although the one at t = 4 does not.
        let member = |t: i64| MeasureSpec::parse(&format!("shift(-{t}/4,mp:{t})")).unwrap();
        let sum = boxplus::<Q>(&moments_of(&member(1), 8).unwrap(), &moments_of(&member(3), 8).unwrap()).unwrap();
        assert_eq!(sum, moments_of(&member(4), 8).unwrap());
        assert!(member(4).is_nonnegative());
        assert!(!member(1).is_nonnegative());

        // Its Lévy pair at time t is (t/2 - t/4, (t/2) δ_1), which fails the
        // positivity condition at every t > 0.
        let p = pair(q(1, 4), &[(q(1, 1), q(1, 2))]);
        assert_eq!(levy_law_moments(&p, 8).unwrap(), moments_of(&member(1), 8).unwrap());
        assert!(!check_nonneg_support(&p.scaled(&q(4, 1))));
    }

    #[test]
    fn theorem_identity_on_a_valid_pair() {
        let p = pair(q(2, 1), &[(q(1, 2), q(1, 3)), (q(3, 1), q(1, 4))]);
        assert!(check_nonneg_support(&p));
        let g = levy_pair_to_g(&p).unwrap();
        assert_eq!(r_from_levy_pair(&p, 8), c_from_levy_g(&g, 8));
        for l in ["0", "1/3", "1"] {
            let lambda = RatioParam::parse(l).unwrap();
            let law = levy_law_moments(&p, 8).unwrap();
            let prod = boxtimes(&law, &mu_lambda_moments(lambda.rational(), 8).unwrap()).unwrap();
            assert_eq!(rect_c_transform(&prod, &lambda).unwrap(), c_from_levy_g(&g, 8));
        }
    }

    #[test]
    fn mp_product_examples() {
        let m = mp_product_law(&q(13, 10), &q(5, 3), 8).unwrap();
        assert_eq!(m.get(1), q(13, 10) * q(5, 3));
        assert_eq!(mp_product_law(&q(2, 1), &q(2, 1), 4).unwrap().get(1), q(4, 1));
        assert!(matches!(mp_product_law(&q(1, 1), &q(1, 1), 4), Err(Error::InvalidParameter(_))));
        assert!(matches!(mp_product_law(&q(0, 1), &q(2, 1), 4), Err(Error::InvalidParameter(_))));
        let f = mp_product_law(&1.3f64, &(1.0 / 0.6), 8).unwrap();
        assert!((f.get(1) - 1.3 / 0.6).abs() < 1e-12);
    }

    #[test]
    fn parse_cli_syntax() {
        let p = LevyPair::parse("levy:gamma=0.65,sigma=1=0.65").unwrap();
        assert_eq!(p, pair(q(13, 20), &[(q(1, 1), q(13, 20))]));
        assert_eq!(LevyPair::parse(&p.to_string()).unwrap(), p);
        let g = RectLevyMeasure::parse("g:1=0.325").unwrap();
        assert_eq!(g.squared(), &[(q(1, 1), q(13, 20))]);
        assert!(LevyPair::parse("levy:sigma=1=1").is_err());
        assert!(RectLevyMeasure::parse("g:1").is_err());
        assert!(RectLevyMeasure::parse("g:1=-1").is_err());
    }
}
