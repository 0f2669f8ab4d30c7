//! Dense complex linear algebra for the tiny (8x8 / 10x10) mode
//! generators: eigendecomposition via complex Schur, and the Pade
//! scaling-and-squaring exponential as the ill-conditioned fallback.

use crate::error::{BresseError, Result};
use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Eigenvector condition number above which the propagator falls back
/// to the matrix exponential.
pub const EIG_COND_LIMIT: f64 = 1e8;

/// A = V diag(values) V^-1.
#[derive(Debug, Clone)]
pub struct Eigendecomposition {
    pub values: Vec<C64>,
    pub vectors: CMatrix,
    pub inverse: CMatrix,
    /// One-norm condition estimate of the eigenvector matrix.
    pub condition: f64,
    /// Relative residual max_k |A v_k - lambda_k v_k| / ||A||.
    pub residual: f64,
}

fn one_norm(a: &CMatrix) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Eigenvalues only (diagonal of the complex Schur form).
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<C64>> {
    let n = a.nrows();
    let schur = a
        .clone()
        .try_schur(f64::EPSILON, 100_000)
        .ok_or(BresseError::EigenFailure(n))?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Full eigendecomposition: complex Schur, then eigenvectors by
/// back-substitution on the triangular factor.
pub fn decompose(a: &CMatrix) -> Result<Eigendecomposition> {
    let n = a.nrows();
    let schur = a
        .clone()
        .try_schur(f64::EPSILON, 100_000)
        .ok_or(BresseError::EigenFailure(n))?;
    let (q, t) = schur.unpack();
    let norm_a = one_norm(a).max(f64::MIN_POSITIVE);

    let mut vectors = CMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        values.push(lambda);
        // (T - lambda I) y = 0 with y[k] = 1, solved upwards.
        let mut y = vec![C64::new(0.0, 0.0); n];
        y[k] = C64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut sum = C64::new(0.0, 0.0);
            for j in (i + 1)..=k {
                sum += t[(i, j)] * y[j];
            }
            let mut d = t[(i, i)] - lambda;
            if d.norm() < f64::EPSILON * norm_a {
                // perturb a (near-)defective pivot; the condition
                // estimate below reports the resulting inaccuracy
                d = C64::new(f64::EPSILON * norm_a, 0.0);
            }
            y[i] = -sum / d;
        }
        let mut col = CVector::from_vec(y);
        col = &q * col;
        let nrm = col.norm();
        if !(nrm > 0.0) {
            return Err(BresseError::EigenFailure(n));
        }
        col /= C64::new(nrm, 0.0);
        vectors.set_column(k, &col);
    }

    let inverse = vectors
        .clone()
        .try_inverse()
        .ok_or(BresseError::EigenFailure(n))?;
    let condition = one_norm(&vectors) * one_norm(&inverse);

    let mut residual = 0.0f64;
    for (k, lambda) in values.iter().enumerate() {
        let v = vectors.column(k).clone_owned();
        let r = a * &v - &v * *lambda;
        residual = residual.max(r.norm() / norm_a);
    }

    Ok(Eigendecomposition {
        values,
        vectors,
        inverse,
        condition,
        residual,
    })
}

impl Eigendecomposition {
    /// exp(tA) u via the spectral factorization.
    pub fn propagate(&self, u: &CVector, t: f64) -> CVector {
        let mut w = &self.inverse * u;
        for (k, lambda) in self.values.iter().enumerate() {
            w[k] *= (lambda * C64::new(t, 0.0)).exp();
        }
        &self.vectors * w
    }

    pub fn abscissa(&self) -> f64 {
        self.values
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Dense matrix exponential (nalgebra's Pade scaling-and-squaring).
pub fn expm(a: &CMatrix) -> CMatrix {
    a.clone().exp()
}
