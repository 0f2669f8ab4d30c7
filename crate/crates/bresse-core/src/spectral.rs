//! Exact first-order mode ODE dU/dt = A(xi) U for both system kinds,
//! and its propagation in time.
//!
//! State ordering is fixed so indexing stays deterministic across the
//! functional evaluators and the file outputs:
//!
//! - Type I:   (phi, phi_t, psi, psi_t, omega, omega_t, theta1, theta2)
//! - Type III: (phi, phi_t, psi, psi_t, omega, omega_t, theta1,
//!   theta1_t, theta2, theta2_t)

use crate::error::{BresseError, Result};
use crate::linalg::{self, CMatrix, CVector, Eigendecomposition, C64, EIG_COND_LIMIT};
use crate::model::{Parameters, SystemKind};

pub const PHI: usize = 0;
pub const PHI_T: usize = 1;
pub const PSI: usize = 2;
pub const PSI_T: usize = 3;
pub const OMEGA: usize = 4;
pub const OMEGA_T: usize = 5;
pub const THETA1: usize = 6;

/// Index of theta2 (kind dependent).
pub fn theta2(kind: SystemKind) -> usize {
    match kind {
        SystemKind::TypeI => 7,
        SystemKind::TypeIII => 8,
    }
}

/// Index of theta1_t; Type III only.
pub fn theta1_t(kind: SystemKind) -> Option<usize> {
    match kind {
        SystemKind::TypeI => None,
        SystemKind::TypeIII => Some(7),
    }
}

/// Index of theta2_t; Type III only.
pub fn theta2_t(kind: SystemKind) -> Option<usize> {
    match kind {
        SystemKind::TypeI => None,
        SystemKind::TypeIII => Some(9),
    }
}

/// The two thermal components that carry the dissipation: (theta1,
/// theta2) for Type I, (theta1_t, theta2_t) for Type III.
pub fn thermal_flux_indices(kind: SystemKind) -> (usize, usize) {
    match kind {
        SystemKind::TypeI => (6, 7),
        SystemKind::TypeIII => (7, 9),
    }
}

/// One Fourier mode: frequency, kind, and the complex state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeState {
    pub kind: SystemKind,
    pub xi: f64,
    pub u: CVector,
}

impl ModeState {
    pub fn zero(kind: SystemKind, xi: f64) -> Self {
        ModeState {
            kind,
            xi,
            u: CVector::zeros(kind.dim()),
        }
    }

    pub fn from_vec(kind: SystemKind, xi: f64, u: Vec<C64>) -> Result<Self> {
        if u.len() != kind.dim() {
            return Err(BresseError::InvalidInput(format!(
                "state has {} components; {kind} needs {}",
                u.len(),
                kind.dim()
            )));
        }
        let state = ModeState {
            kind,
            xi,
            u: CVector::from_vec(u),
        };
        if !state.is_finite() {
            return Err(BresseError::NonFiniteResult { xi, t: 0.0 });
        }
        Ok(state)
    }

    /// Basis state e_j.
    pub fn unit(kind: SystemKind, xi: f64, j: usize) -> Self {
        let mut s = Self::zero(kind, xi);
        s.u[j] = C64::new(1.0, 0.0);
        s
    }

    pub fn is_finite(&self) -> bool {
        self.u.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// The generator matrix A(xi) of one mode.
#[derive(Debug, Clone)]
pub struct Generator {
    pub xi: f64,
    pub kind: SystemKind,
    pub matrix: CMatrix,
}

/// Assemble A(xi) by reading the coefficients off the five governing
/// equations. Every entry is a polynomial in xi of degree <= 2.
///
/// For Type I the theta1 row substitutes
/// (i xi omega - l phi)_t = i xi omega_t - l phi_t
/// so the system stays first order in the chosen state.
pub fn build_generator(p: &Parameters, kind: SystemKind, xi: f64) -> Generator {
    let n = kind.dim();
    let mut a = CMatrix::zeros(n, n);
    let re = |x: f64| C64::new(x, 0.0);
    let im = |x: f64| C64::new(0.0, x);
    let xi2 = xi * xi;

    let th1_force = match kind {
        SystemKind::TypeI => THETA1,
        SystemKind::TypeIII => theta1_t(kind).unwrap(),
    };
    let th2_force = match kind {
        SystemKind::TypeI => theta2(kind),
        SystemKind::TypeIII => theta2_t(kind).unwrap(),
    };

    // d phi / dt = phi_t
    a[(PHI, PHI_T)] = re(1.0);
    // rho1 phi_tt = i k xi (i xi phi - psi - l omega)
    //             + k0 l (i xi omega - l phi) - l gamma theta1[_t]
    a[(PHI_T, PHI)] = re(-(p.k * xi2 + p.k0 * p.l * p.l) / p.rho1);
    a[(PHI_T, PSI)] = im(-p.k * xi / p.rho1);
    a[(PHI_T, OMEGA)] = im(p.l * xi * (p.k0 - p.k) / p.rho1);
    a[(PHI_T, th1_force)] = re(-p.l * p.gamma / p.rho1);

    // d psi / dt = psi_t
    a[(PSI, PSI_T)] = re(1.0);
    // rho2 psi_tt = -b xi^2 psi + k (i xi phi - psi - l omega)
    //             - i gamma xi theta2[_t]
    a[(PSI_T, PHI)] = im(p.k * xi / p.rho2);
    a[(PSI_T, PSI)] = re(-(p.b * xi2 + p.k) / p.rho2);
    a[(PSI_T, OMEGA)] = re(-p.k * p.l / p.rho2);
    a[(PSI_T, th2_force)] = im(-p.gamma * xi / p.rho2);

    // d omega / dt = omega_t
    a[(OMEGA, OMEGA_T)] = re(1.0);
    // rho1 omega_tt = i k0 xi (i xi omega - l phi)
    //               + k l (i xi phi - psi - l omega) - i gamma xi theta1[_t]
    a[(OMEGA_T, PHI)] = im(p.l * xi * (p.k - p.k0) / p.rho1);
    a[(OMEGA_T, PSI)] = re(-p.k * p.l / p.rho1);
    a[(OMEGA_T, OMEGA)] = re(-(p.k0 * xi2 + p.k * p.l * p.l) / p.rho1);
    a[(OMEGA_T, th1_force)] = im(-p.gamma * xi / p.rho1);

    match kind {
        SystemKind::TypeI => {
            let th2 = theta2(kind);
            // theta1_t = -k1 xi^2 theta1 - m1 (i xi omega_t - l phi_t)
            a[(THETA1, PHI_T)] = re(p.m1 * p.l);
            a[(THETA1, OMEGA_T)] = im(-p.m1 * xi);
            a[(THETA1, THETA1)] = re(-p.k1 * xi2);
            // theta2_t = -k2 xi^2 theta2 - i m2 xi psi_t
            a[(th2, PSI_T)] = im(-p.m2 * xi);
            a[(th2, th2)] = re(-p.k2 * xi2);
        }
        SystemKind::TypeIII => {
            let th1t = theta1_t(kind).unwrap();
            let th2 = theta2(kind);
            let th2t = theta2_t(kind).unwrap();
            a[(THETA1, th1t)] = re(1.0);
            // theta1_tt = -k1 xi^2 theta1 - alpha1 xi^2 theta1_t
            //           - m1 (i xi omega_t - l phi_t)
            a[(th1t, PHI_T)] = re(p.m1 * p.l);
            a[(th1t, OMEGA_T)] = im(-p.m1 * xi);
            a[(th1t, THETA1)] = re(-p.k1 * xi2);
            a[(th1t, th1t)] = re(-p.alpha1 * xi2);
            a[(th2, th2t)] = re(1.0);
            // theta2_tt = -k2 xi^2 theta2 - alpha2 xi^2 theta2_t
            //           - i m2 xi psi_t
            a[(th2t, PSI_T)] = im(-p.m2 * xi);
            a[(th2t, th2)] = re(-p.k2 * xi2);
            a[(th2t, th2t)] = re(-p.alpha2 * xi2);
        }
    }

    Generator {
        xi,
        kind,
        matrix: a,
    }
}

impl Generator {
    /// A(xi) u: the exact time derivative of the state.
    pub fn apply(&self, state: &ModeState) -> CVector {
        &self.matrix * &state.u
    }
}

/// Propagator for one generator, reused across times.
///
/// The eigendecomposition route is preferred; if the eigenvector basis
/// is too ill conditioned the scaling-and-squaring exponential takes
/// over (one dense exp per requested time).
pub struct Propagator {
    pub generator: Generator,
    route: Route,
}

enum Route {
    Eigen(Eigendecomposition),
    Pade,
}

impl Propagator {
    pub fn new(generator: Generator) -> Result<Self> {
        let route = match linalg::decompose(&generator.matrix) {
            Ok(eig) if eig.condition < EIG_COND_LIMIT && eig.residual < 1e-10 => Route::Eigen(eig),
            _ => Route::Pade,
        };
        Ok(Propagator { generator, route })
    }

    pub fn uses_eigen_route(&self) -> bool {
        matches!(self.route, Route::Eigen(_))
    }

    /// exp(tA) u0.
    pub fn apply(&self, u0: &ModeState, t: f64) -> Result<ModeState> {
        debug_assert_eq!(u0.kind, self.generator.kind);
        if t < 0.0 {
            return Err(BresseError::InvalidInput(format!(
                "propagation time must be nonnegative, got {t}"
            )));
        }
        if t == 0.0 {
            return Ok(u0.clone());
        }
        let u = match &self.route {
            Route::Eigen(eig) => eig.propagate(&u0.u, t),
            Route::Pade => {
                let e = linalg::expm(&(self.generator.matrix.clone() * C64::new(t, 0.0)));
                e * &u0.u
            }
        };
        let out = ModeState {
            kind: u0.kind,
            xi: u0.xi,
            u,
        };
        if !out.is_finite() {
            return Err(BresseError::NonFiniteResult {
                xi: self.generator.xi,
                t,
            });
        }
        Ok(out)
    }
}

/// One-shot exp(tA) u0 (builds and drops a propagator).
pub fn propagate(g: &Generator, u0: &ModeState, t: f64) -> Result<ModeState> {
    Propagator::new(g.clone())?.apply(u0, t)
}

/// Largest real part over the generator spectrum: the true exponential
/// rate of the mode.
pub fn spectral_abscissa(g: &Generator) -> Result<f64> {
    let values = linalg::eigenvalues(&g.matrix)?;
    Ok(values
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Time-stamped mode states plus the derived scalar energy series
/// (filled by the functionals module).
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub xi: f64,
    pub kind: SystemKind,
    pub times: Vec<f64>,
    pub states: Vec<ModeState>,
    pub energies: Vec<f64>,
}

/// Propagate `u0` to every listed time with a single decomposition.
///
/// `times` must start at 0 and increase strictly.
pub fn evolve_trajectory(
    p: &Parameters,
    kind: SystemKind,
    xi: f64,
    u0: &ModeState,
    times: &[f64],
) -> Result<Trajectory> {
    if times.is_empty() || times[0] != 0.0 {
        return Err(BresseError::InvalidInput(
            "trajectory times must start at 0".into(),
        ));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(BresseError::InvalidInput(
            "trajectory times must increase strictly".into(),
        ));
    }
    let prop = Propagator::new(build_generator(p, kind, xi))?;
    let mut states = Vec::with_capacity(times.len());
    for &t in times {
        states.push(prop.apply(u0, t)?);
    }
    Ok(Trajectory {
        xi,
        kind,
        times: times.to_vec(),
        states,
        energies: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::StateSampler;
    use approx::assert_relative_eq;

    fn unit_params() -> Parameters {
        Parameters::default()
    }

    #[test]
    fn phi_row_at_zero_frequency() {
        // xi = 0, unit coefficients: phi_tt = -l^2 phi - l theta1
        let g = build_generator(&unit_params(), SystemKind::TypeI, 0.0);
        let a = &g.matrix;
        assert_eq!(a[(PHI_T, PHI)], C64::new(-1.0, 0.0));
        assert_eq!(a[(PHI_T, THETA1)], C64::new(-1.0, 0.0));
        assert_eq!(a[(PHI_T, PSI)], C64::new(0.0, 0.0));
        assert_eq!(a[(PHI_T, OMEGA)], C64::new(0.0, 0.0));
    }

    #[test]
    fn dissipation_rows_vanish_at_zero_frequency() {
        for kind in [SystemKind::TypeI, SystemKind::TypeIII] {
            let g = build_generator(&unit_params(), kind, 0.0);
            let (f1, f2) = thermal_flux_indices(kind);
            assert_eq!(g.matrix[(f1, THETA1)], C64::new(0.0, 0.0));
            assert_eq!(g.matrix[(f2, theta2(kind))], C64::new(0.0, 0.0));
            if kind == SystemKind::TypeIII {
                assert_eq!(g.matrix[(f1, f1)], C64::new(0.0, 0.0));
                assert_eq!(g.matrix[(f2, f2)], C64::new(0.0, 0.0));
            }
        }
    }

    /// Central-difference oracle: the generator must be the derivative
    /// of the propagated flow.
    #[test]
    fn generator_matches_finite_difference_of_flow() {
        let mut sampler = StateSampler::new(90210);
        for kind in [SystemKind::TypeI, SystemKind::TypeIII] {
            for _ in 0..10 {
                let p = sampler.random_parameters(0.5, 2.0);
                let xi = sampler.log_uniform(0.05, 5.0);
                let g = build_generator(&p, kind, xi);
                let u0 = sampler.random_state(kind, xi);
                let prop = Propagator::new(g.clone()).unwrap();
                let t = 0.4;
                let h = 1e-6;
                let plus = prop.apply(&u0, t + h).unwrap();
                let minus = prop.apply(&u0, t - h).unwrap();
                let fd = (&plus.u - &minus.u) / C64::new(2.0 * h, 0.0);
                let at_t = prop.apply(&u0, t).unwrap();
                let exact = g.apply(&at_t);
                let err = (&fd - &exact).norm() / exact.norm().max(1e-12);
                assert!(err < 1e-6, "kind {kind}: fd mismatch {err}");
            }
        }
    }

    #[test]
    fn propagate_at_zero_time_is_identity() {
        let g = build_generator(&unit_params(), SystemKind::TypeI, 1.3);
        let u0 = ModeState::unit(SystemKind::TypeI, 1.3, 2);
        let out = propagate(&g, &u0, 0.0).unwrap();
        assert_eq!(out, u0);
    }

    #[test]
    fn semigroup_property() {
        let mut sampler = StateSampler::new(777);
        for kind in [SystemKind::TypeI, SystemKind::TypeIII] {
            let p = unit_params();
            let xi = 1.7;
            let prop = Propagator::new(build_generator(&p, kind, xi)).unwrap();
            for _ in 0..8 {
                let u0 = sampler.random_state(kind, xi);
                let s = sampler.log_uniform(0.01, 10.0);
                let t = sampler.log_uniform(0.01, 10.0);
                let two_step = prop.apply(&prop.apply(&u0, s).unwrap(), t).unwrap();
                let one_step = prop.apply(&u0, s + t).unwrap();
                let err = (&two_step.u - &one_step.u).norm() / one_step.u.norm().max(1e-300);
                assert!(err < 1e-9, "semigroup violation {err}");
            }
        }
    }

    #[test]
    fn conjugation_symmetry_of_generator() {
        let mut sampler = StateSampler::new(4242);
        for kind in [SystemKind::TypeI, SystemKind::TypeIII] {
            for _ in 0..10 {
                let p = sampler.random_parameters(0.5, 2.0);
                let xi = sampler.log_uniform(0.01, 50.0);
                let plus = build_generator(&p, kind, xi);
                let minus = build_generator(&p, kind, -xi);
                let n = kind.dim();
                for i in 0..n {
                    for j in 0..n {
                        assert_eq!(minus.matrix[(i, j)], plus.matrix[(i, j)].conj());
                    }
                }
            }
        }
    }

    #[test]
    fn trajectory_matches_pointwise_propagation() {
        let p = unit_params();
        let kind = SystemKind::TypeI;
        let xi = 0.8;
        let u0 = ModeState::unit(kind, xi, PHI_T);
        let times = [0.0, 1.0, 2.0];
        let tr = evolve_trajectory(&p, kind, xi, &u0, &times).unwrap();
        let g = build_generator(&p, kind, xi);
        for (i, &t) in times.iter().enumerate() {
            let direct = propagate(&g, &u0, t).unwrap();
            let err = (&tr.states[i].u - &direct.u).norm();
            assert!(err < 1e-12, "t = {t}: {err}");
        }
        assert_eq!(tr.states.len(), 3);
    }

    #[test]
    fn trajectory_of_single_time_is_initial_state() {
        let p = unit_params();
        let u0 = ModeState::unit(SystemKind::TypeIII, 2.0, PSI);
        let tr = evolve_trajectory(&p, SystemKind::TypeIII, 2.0, &u0, &[0.0]).unwrap();
        assert_eq!(tr.states.len(), 1);
        assert_eq!(tr.states[0], u0);
    }

    #[test]
    fn abscissa_is_zero_at_zero_frequency() {
        // the zero eigenvalue at xi = 0 sits in a 2x2 Jordan block
        // (psi - omega is a double integrator), so backward-stable
        // eigensolvers can only place it within ~sqrt(eps)
        for kind in [SystemKind::TypeI, SystemKind::TypeIII] {
            let g = build_generator(&unit_params(), kind, 0.0);
            let a = spectral_abscissa(&g).unwrap();
            assert_relative_eq!(a, 0.0, epsilon = 1e-7);
        }
    }

    #[test]
    fn abscissa_is_zero_for_degenerate_coupling() {
        let mut p = unit_params();
        p.gamma = 0.0;
        for kind in [SystemKind::TypeI, SystemKind::TypeIII] {
            let g = build_generator(&p, kind, 1.0);
            let a = spectral_abscissa(&g).unwrap();
            // the elastic block is skew-adjoint in the energy inner
            // product; only rounding keeps it off the imaginary axis
            assert!(a.abs() < 1e-10, "kind {kind}: abscissa {a}");
        }
    }

    #[test]
    fn abscissa_negative_for_unit_parameters() {
        let g = build_generator(&unit_params(), SystemKind::TypeI, 1.0);
        let a = spectral_abscissa(&g).unwrap();
        assert!(a < 0.0, "abscissa {a}");
    }

    #[test]
    fn stiff_mode_propagates_without_overflow() {
        let g = build_generator(&unit_params(), SystemKind::TypeIII, 100.0);
        let u0 = ModeState::unit(SystemKind::TypeIII, 100.0, PHI);
        let out = propagate(&g, &u0, 1e6).unwrap();
        assert!(out.is_finite());
    }
}
