//! Dense eigenvalue routines and Gaussian/Haar samplers.
//!
//! Eigenvalues come from nalgebra's symmetric eigensolver (Householder
//! tridiagonalisation followed by implicit symmetric QR steps), which also
//! handles complex Hermitian input.

use nalgebra::{Complex, ComplexField, DMatrix, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{LabError, Result};

pub type C64 = Complex<f64>;

const MAX_SWEEPS_PER_DIM: usize = 1000;

fn eigen<T: ComplexField<RealField = f64>>(a: DMatrix<T>) -> Result<SymmetricEigen<T, nalgebra::Dyn>> {
    let n = a.nrows();
    SymmetricEigen::try_new(a, f64::EPSILON, MAX_SWEEPS_PER_DIM * n.max(1)).ok_or(LabError::EigenFailure(n))
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues(a: DMatrix<f64>) -> Result<Vec<f64>> {
    Ok(sorted(eigen(a)?.eigenvalues.iter().copied().collect()))
}

/// Eigenvalues of a complex Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(a: DMatrix<C64>) -> Result<Vec<f64>> {
    Ok(sorted(eigen(a)?.eigenvalues.iter().copied().collect()))
}

/// Full decomposition, for residual checks.
pub fn hermitian_eigen(a: DMatrix<C64>) -> Result<(Vec<f64>, DMatrix<C64>)> {
    let e = eigen(a)?;
    Ok((e.eigenvalues.iter().copied().collect(), e.eigenvectors))
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// `rows × cols` matrix of independent standard real Gaussians.
pub fn real_gaussian<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// `rows × cols` matrix of independent standard complex Gaussians,
/// `E|z|² = 1`.
pub fn complex_gaussian<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * s, im * s)
    })
}

/// `cols` independent vectors uniform on the unit sphere of `C^rows`, as
/// the columns of a matrix.
pub fn unit_sphere_columns<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<C64> {
    let mut g = complex_gaussian(rows, cols, rng);
    for mut col in g.column_iter_mut() {
        let norm = col.norm();
        col /= C64::new(norm, 0.0);
    }
    g
}

/// Haar-distributed `n × n` unitary: QR of a complex Ginibre matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng>(n: usize, rng: &mut R) -> DMatrix<C64> {
    let qr = complex_gaussian(n, n, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for (j, mut col) in q.column_iter_mut().enumerate() {
        let d = r[(j, j)];
        let modulus = d.norm();
        if modulus > 0.0 {
            col *= d / C64::new(modulus, 0.0);
        }
    }
    q
}
