use std::fmt;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::linalg::{
    complex_gaussian, haar_unitary, hermitian_eigenvalues, real_gaussian, symmetric_eigenvalues,
    unit_sphere_columns, C64,
};

pub const DEFAULT_MAX_DIM: usize = 4096;

/// Eigenvalues below this are treated as round-off of a PSD matrix.
pub const CLAMP_TOLERANCE: f64 = 1e-10;

/// Square factor of a bi-unitarily invariant sum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Factor {
    Identity,
    Zero,
    /// `U diag(s) V` with `U`, `V` independent Haar unitaries; the listed
    /// singular values are repeated cyclically to the matrix size.
    HaarRotated(Vec<f64>),
}

impl Factor {
    /// `identity`, `zero` or `haar:s1,s2,...`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "identity" => Ok(Self::Identity),
            "zero" => Ok(Self::Zero),
            _ => {
                let body = s
                    .strip_prefix("haar:")
                    .ok_or_else(|| LabError::InvalidParameter(format!("unknown factor {s:?}")))?;
                let values = body
                    .split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<f64>()
                            .map_err(|_| LabError::InvalidParameter(format!("bad singular value {x:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if values.is_empty() || values.iter().any(|v| !v.is_finite() || *v < 0.0) {
                    return Err(LabError::InvalidParameter(format!("bad singular values {s:?}")));
                }
                Ok(Self::HaarRotated(values))
            }
        }
    }

    /// Squared singular values of the `n × n` factor, as `n` atoms.
    pub fn squared_singular_values(&self, n: usize) -> Vec<f64> {
        match self {
            Self::Identity => vec![1.0; n],
            Self::Zero => vec![0.0; n],
            Self::HaarRotated(s) => (0..n).map(|i| s[i % s.len()].powi(2)).collect(),
        }
    }

    fn sample(&self, n: usize, rng: &mut ChaCha8Rng) -> DMatrix<C64> {
        match self {
            Self::Identity => DMatrix::identity(n, n),
            Self::Zero => DMatrix::zeros(n, n),
            Self::HaarRotated(s) => {
                let u = haar_unitary(n, rng);
                let v = haar_unitary(n, rng);
                let d = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |i, _| C64::new(s[i % s.len()], 0.0)));
                u * d * v
            }
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Identity => write!(f, "identity"),
            Self::Zero => write!(f, "zero"),
            Self::HaarRotated(s) => {
                let parts: Vec<String> = s.iter().map(|x| x.to_string()).collect();
                write!(f, "haar:{}", parts.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum MatrixModel {
    /// `(1/(nq)) T Tᵀ Q Qᵀ`, `T` is `n × p`, `Q` is `n × q`, real Gaussian.
    WishartProduct { n: usize, p: usize, q: usize },
    /// `M M*` with `M = Σ_{k<=p} u_k v_k*`, `u_k` and `v_k` uniform on the unit
    /// spheres of `C^n` and `C^q`.
    RankOneSum { n: usize, p: usize, q: usize },
    /// `(1/p)(AM + BM')(AM + BM')*` against `(1/p)(AM(AM)* + BM'(BM')*)`,
    /// `M`, `M'` complex Gaussian `n × p`.
    BiInvariantSum { n: usize, p: usize, a: Factor, b: Factor },
    /// `(1/p)(X + Y)(X + Y)ᵀ` against `(1/p)(XXᵀ + YYᵀ)`, `X`, `Y` real
    /// Gaussian `n × p`.
    FlatSum { n: usize, p: usize },
}

impl MatrixModel {
    pub fn name(&self) -> &'static str {
        match self {
            Self::WishartProduct { .. } => "wishart-product",
            Self::RankOneSum { .. } => "rank-one-sum",
            Self::BiInvariantSum { .. } => "bi-invariant-sum",
            Self::FlatSum { .. } => "flat-sum",
        }
    }

    /// Side length of the sampled spectrum.
    pub fn n(&self) -> usize {
        match *self {
            Self::WishartProduct { n, .. }
            | Self::RankOneSum { n, .. }
            | Self::BiInvariantSum { n, .. }
            | Self::FlatSum { n, .. } => n,
        }
    }

    fn dims(&self) -> Vec<usize> {
        match *self {
            Self::WishartProduct { n, p, q } | Self::RankOneSum { n, p, q } => vec![n, p, q],
            Self::BiInvariantSum { n, p, .. } | Self::FlatSum { n, p } => vec![n, p],
        }
    }

    pub fn validate(&self, max_dim: usize) -> Result<()> {
        for d in self.dims() {
            if d == 0 {
                return Err(LabError::InvalidParameter(format!("{} needs positive dimensions", self.name())));
            }
            if d > max_dim {
                return Err(LabError::DimensionTooLarge { dim: d, max: max_dim });
            }
        }
        Ok(())
    }

    /// Whether the model compares a combined matrix with a sum of parts.
    pub fn is_additive(&self) -> bool {
        matches!(self, Self::BiInvariantSum { .. } | Self::FlatSum { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSample {
    /// Ascending, non-negative, length `n`.
    pub eigenvalues: Vec<f64>,
    pub model: MatrixModel,
    pub seed: u64,
    /// Total magnitude of negative eigenvalues set to zero.
    pub clamped: f64,
}

impl SpectrumSample {
    fn new(raw: Vec<f64>, model: &MatrixModel, seed: u64) -> Self {
        let mut clamped = 0.0;
        let eigenvalues = raw
            .into_iter()
            .map(|x| {
                if x < 0.0 {
                    clamped += -x;
                    0.0
                } else {
                    x
                }
            })
            .collect();
        Self {
            eigenvalues,
            model: model.clone(),
            seed,
            clamped,
        }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// Spectrum of the model's matrix; for the additive models, the combined
/// side `(·+·)(·+·)*`.
pub fn sample_spectrum(model: &MatrixModel, seed: u64) -> Result<SpectrumSample> {
    sample_spectrum_capped(model, seed, DEFAULT_MAX_DIM)
}

pub fn sample_spectrum_capped(model: &MatrixModel, seed: u64, max_dim: usize) -> Result<SpectrumSample> {
    model.validate(max_dim)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw = match *model {
        MatrixModel::WishartProduct { n, p, q } => wishart_product(n, p, q, &mut rng)?,
        MatrixModel::RankOneSum { n, p, q } => {
            let u = unit_sphere_columns(n, p, &mut rng);
            let v = unit_sphere_columns(q, p, &mut rng);
            let m = u * v.adjoint();
            hermitian_eigenvalues(&m * m.adjoint())?
        }
        MatrixModel::BiInvariantSum { .. } | MatrixModel::FlatSum { .. } => {
            return Ok(sample_sides_capped(model, seed, max_dim)?.0);
        }
    };
    Ok(SpectrumSample::new(raw, model, seed))
}

/// Both sides of an additive model from one draw: the combined matrix and
/// the sum of the separate Gram matrices.
pub fn sample_sides(model: &MatrixModel, seed: u64) -> Result<(SpectrumSample, SpectrumSample)> {
    sample_sides_capped(model, seed, DEFAULT_MAX_DIM)
}

pub fn sample_sides_capped(
    model: &MatrixModel,
    seed: u64,
    max_dim: usize,
) -> Result<(SpectrumSample, SpectrumSample)> {
    model.validate(max_dim)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (combined, separate) = match model {
        MatrixModel::FlatSum { n, p } => {
            let x = real_gaussian(*n, *p, &mut rng);
            let y = real_gaussian(*n, *p, &mut rng);
            let scale = 1.0 / *p as f64;
            let s = &x + &y;
            let combined = (&s * s.transpose()) * scale;
            let separate = (&x * x.transpose() + &y * y.transpose()) * scale;
            (symmetric_eigenvalues(combined)?, symmetric_eigenvalues(separate)?)
        }
        MatrixModel::BiInvariantSum { n, p, a, b } => {
            let am = a.sample(*n, &mut rng) * complex_gaussian(*n, *p, &mut rng);
            let bm = b.sample(*n, &mut rng) * complex_gaussian(*n, *p, &mut rng);
            let scale = C64::new(1.0 / *p as f64, 0.0);
            let s = &am + &bm;
            let combined = (&s * s.adjoint()) * scale;
            let separate = (&am * am.adjoint() + &bm * bm.adjoint()) * scale;
            (hermitian_eigenvalues(combined)?, hermitian_eigenvalues(separate)?)
        }
        _ => {
            return Err(LabError::InvalidParameter(format!(
                "{} has a single side",
                model.name()
            )))
        }
    };
    Ok((
        SpectrumSample::new(combined, model, seed),
        SpectrumSample::new(separate, model, seed),
    ))
}

/// The non-zero spectrum of `TTᵀQQᵀ` is that of `KKᵀ` with `K = TᵀQ`
/// (`p × p`), whose rank is at most `min(n, p, q)`.
fn wishart_product(n: usize, p: usize, q: usize, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    let t = real_gaussian(n, p, rng);
    let qm = real_gaussian(n, q, rng);
    let k = t.transpose() * qm;
    let gram = (&k * k.transpose()) / (n as f64 * q as f64);
    let mut values = symmetric_eigenvalues(gram)?;
    let keep = n.min(p);
    let mut out = vec![0.0; n - keep];
    out.extend(values.drain(p - keep..));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_parsing() {
        assert_eq!(Factor::parse("identity").unwrap(), Factor::Identity);
        assert_eq!(Factor::parse("haar:1,2").unwrap(), Factor::HaarRotated(vec![1.0, 2.0]));
        assert_eq!(Factor::parse(&Factor::HaarRotated(vec![0.5]).to_string()).unwrap(), Factor::HaarRotated(vec![0.5]));
        assert!(Factor::parse("haar:").is_err());
        assert!(Factor::parse("haar:-1").is_err());
        assert!(Factor::parse("other").is_err());
        assert_eq!(Factor::HaarRotated(vec![1.0, 2.0]).squared_singular_values(3), vec![1.0, 4.0, 1.0]);
    }

    #[test]
    fn scalar_rank_one_sum_is_one() {
        let s = sample_spectrum(&MatrixModel::RankOneSum { n: 1, p: 1, q: 1 }, 11).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn wishart_product_shape() {
        let model = MatrixModel::WishartProduct { n: 200, p: 260, q: 334 };
        let s = sample_spectrum(&model, 1).unwrap();
        assert_eq!(s.len(), 200);
        assert!(s.eigenvalues.iter().all(|x| *x >= 0.0));
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn wishart_product_pads_when_rank_deficient() {
        let model = MatrixModel::WishartProduct { n: 30, p: 10, q: 40 };
        let s = sample_spectrum(&model, 2).unwrap();
        assert_eq!(s.len(), 30);
        assert_eq!(s.eigenvalues.iter().filter(|x| **x == 0.0).count(), 20);
    }

    #[test]
    fn validation() {
        let m = MatrixModel::FlatSum { n: 0, p: 3 };
        assert!(matches!(sample_spectrum(&m, 0), Err(LabError::InvalidParameter(_))));
        let m = MatrixModel::RankOneSum { n: 10, p: 10, q: 50 };
        assert_eq!(
            sample_spectrum_capped(&m, 0, 20),
            Err(LabError::DimensionTooLarge { dim: 50, max: 20 })
        );
        assert!(sample_sides(&MatrixModel::RankOneSum { n: 2, p: 2, q: 2 }, 0).is_err());
    }

    #[test]
    fn identity_with_zero_partner_has_equal_sides() {
        let m = MatrixModel::BiInvariantSum { n: 20, p: 30, a: Factor::Identity, b: Factor::Zero };
        let (l, r) = sample_sides(&m, 4).unwrap();
        for (x, y) in l.eigenvalues.iter().zip(&r.eigenvalues) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
