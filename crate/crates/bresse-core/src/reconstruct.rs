//! Physical initial data, the weighted vector solution whose squared
//! modulus is the mode energy, and Sobolev norms via Plancherel
//! quadrature over the frequency grid.
//!
//! Fourier convention: f^(xi) = int f(x) e^{-i xi x} dx, Plancherel
//! with the 1/(2pi) weight. All initial transforms are closed form;
//! no discrete FFT enters anywhere, so slow decay fits are free of
//! aliasing and periodization artifacts.

use crate::error::{BresseError, Result};
use crate::functionals::EnergyForm;
use crate::grid::FrequencyGrid;
use crate::linalg::{CVector, C64};
use crate::model::{Parameters, SystemKind};
use crate::spectral::{
    self, build_generator, ModeState, Propagator, OMEGA, OMEGA_T, PHI, PHI_T, PSI, PSI_T, THETA1,
};
use rayon::prelude::*;

/// Closed-form initial profiles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileShape {
    /// exp(-x^2 / (2 sigma^2)); transform sigma sqrt(2 pi) exp(-sigma^2 xi^2/2).
    Gaussian { sigma: f64 },
    /// Indicator of [-a, a]; transform 2 sin(a xi)/xi.
    Box { halfwidth: f64 },
    /// Unit spectrum on xi_lo <= |xi| <= xi_hi (L^2 only, not L^1).
    Band { xi_lo: f64, xi_hi: f64 },
    /// d^n/dx^n of the Gaussian; transform (i xi)^n times the Gaussian's.
    DerivGaussian { order: u32, sigma: f64 },
}

impl ProfileShape {
    /// The exact Fourier transform at xi.
    pub fn transform(&self, xi: f64) -> C64 {
        match *self {
            ProfileShape::Gaussian { sigma } => C64::new(
                sigma * (std::f64::consts::TAU).sqrt() * (-0.5 * sigma * sigma * xi * xi).exp(),
                0.0,
            ),
            ProfileShape::Box { halfwidth } => {
                if xi == 0.0 {
                    C64::new(2.0 * halfwidth, 0.0)
                } else {
                    C64::new(2.0 * (halfwidth * xi).sin() / xi, 0.0)
                }
            }
            ProfileShape::Band { xi_lo, xi_hi } => {
                let a = xi.abs();
                if a >= xi_lo && a <= xi_hi {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }
            ProfileShape::DerivGaussian { order, sigma } => {
                let base = ProfileShape::Gaussian { sigma }.transform(xi);
                C64::new(0.0, xi).powu(order) * base
            }
        }
    }

    /// L^1 norm of the profile in physical space when closed form.
    pub fn l1_norm(&self) -> Option<f64> {
        match *self {
            ProfileShape::Gaussian { sigma } => Some(sigma * (std::f64::consts::TAU).sqrt()),
            ProfileShape::Box { halfwidth } => Some(2.0 * halfwidth),
            ProfileShape::DerivGaussian { order: 1, .. } => Some(2.0),
            _ => None,
        }
    }

    /// L^1 norm of the spatial derivative when closed form.
    fn l1_norm_of_derivative(&self) -> Option<f64> {
        match *self {
            ProfileShape::Gaussian { .. } => Some(2.0),
            _ => None,
        }
    }

    /// Spectrum support is contained in [0, hi] (used for tail checks).
    fn supported_below(&self, hi: f64) -> bool {
        matches!(*self, ProfileShape::Band { xi_hi, .. } if xi_hi <= hi)
    }

    /// Whether the physical-space profile is integrable (so the
    /// algebraic L^1 decay term applies to data carrying it).
    pub fn in_l1(&self) -> bool {
        !matches!(*self, ProfileShape::Band { .. })
    }
}

/// Which initial-data slot carries the profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateSlot {
    Phi0,
    Phi1,
    Psi0,
    Psi1,
    Omega0,
    Omega1,
    Theta10,
    Theta20,
    /// Type III only.
    Theta11,
    /// Type III only.
    Theta21,
}

impl StateSlot {
    pub fn label(self) -> &'static str {
        match self {
            StateSlot::Phi0 => "phi0",
            StateSlot::Phi1 => "phi1",
            StateSlot::Psi0 => "psi0",
            StateSlot::Psi1 => "psi1",
            StateSlot::Omega0 => "omega0",
            StateSlot::Omega1 => "omega1",
            StateSlot::Theta10 => "theta10",
            StateSlot::Theta20 => "theta20",
            StateSlot::Theta11 => "theta11",
            StateSlot::Theta21 => "theta21",
        }
    }

    pub fn index(self, kind: SystemKind) -> Result<usize> {
        let bad = || BresseError::BadAssignment {
            slot: self.label(),
            kind: kind.label(),
        };
        Ok(match self {
            StateSlot::Phi0 => PHI,
            StateSlot::Phi1 => PHI_T,
            StateSlot::Psi0 => PSI,
            StateSlot::Psi1 => PSI_T,
            StateSlot::Omega0 => OMEGA,
            StateSlot::Omega1 => OMEGA_T,
            StateSlot::Theta10 => THETA1,
            StateSlot::Theta20 => spectral::theta2(kind),
            StateSlot::Theta11 => spectral::theta1_t(kind).ok_or_else(bad)?,
            StateSlot::Theta21 => spectral::theta2_t(kind).ok_or_else(bad)?,
        })
    }
}

impl std::str::FromStr for StateSlot {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "phi0" => StateSlot::Phi0,
            "phi1" => StateSlot::Phi1,
            "psi0" => StateSlot::Psi0,
            "psi1" => StateSlot::Psi1,
            "omega0" => StateSlot::Omega0,
            "omega1" => StateSlot::Omega1,
            "theta10" => StateSlot::Theta10,
            "theta20" => StateSlot::Theta20,
            "theta11" => StateSlot::Theta11,
            "theta21" => StateSlot::Theta21,
            other => return Err(format!("unknown state slot `{other}`")),
        })
    }
}

/// A profile assigned to one slot of the initial data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialProfile {
    pub shape: ProfileShape,
    pub slot: StateSlot,
}

impl InitialProfile {
    pub fn new(shape: ProfileShape, slot: StateSlot) -> Self {
        InitialProfile { shape, slot }
    }

    /// ||V0||_1 in closed form where available.
    ///
    /// Velocity and temperature slots put the profile into exactly one
    /// component of the vector solution (the Type III temperature
    /// slots through one spatial derivative); displacement slots mix
    /// derivatives with zero-order terms and have no closed form.
    pub fn l1_init(&self, p: &Parameters, kind: SystemKind) -> Option<f64> {
        let direct = |w: f64| self.shape.l1_norm().map(|n| w.sqrt() * n);
        match (self.slot, kind) {
            (StateSlot::Phi1, _) | (StateSlot::Omega1, _) => direct(p.rho1),
            (StateSlot::Psi1, _) => direct(p.rho2),
            (StateSlot::Theta10, SystemKind::TypeI) => direct(p.gamma / p.m1),
            (StateSlot::Theta20, SystemKind::TypeI) => direct(p.gamma / p.m2),
            (StateSlot::Theta11, SystemKind::TypeIII) => direct(p.gamma / p.m1),
            (StateSlot::Theta21, SystemKind::TypeIII) => direct(p.gamma / p.m2),
            (StateSlot::Theta10, SystemKind::TypeIII) => self
                .shape
                .l1_norm_of_derivative()
                .map(|n| (p.k1 * p.gamma / p.m1).sqrt() * n),
            (StateSlot::Theta20, SystemKind::TypeIII) => self
                .shape
                .l1_norm_of_derivative()
                .map(|n| (p.k2 * p.gamma / p.m2).sqrt() * n),
            _ => None,
        }
    }
}

/// Place the closed-form transform into the assigned component.
pub fn initial_mode_state(
    profile: &InitialProfile,
    _p: &Parameters,
    kind: SystemKind,
    xi: f64,
) -> Result<ModeState> {
    let idx = profile.slot.index(kind)?;
    let mut s = ModeState::zero(kind, xi);
    s.u[idx] = profile.shape.transform(xi);
    Ok(s)
}

/// Assemble the weighted vector solution V^ whose squared Euclidean
/// norm is the mode energy exactly. Spatial derivatives appear as
/// i xi multiplications.
pub fn vector_solution_components(s: &ModeState, p: &Parameters) -> CVector {
    let u = &s.u;
    let xi = s.xi;
    let i = C64::new(0.0, 1.0);
    let shear = i * xi * u[PHI] - u[PSI] - p.l * u[OMEGA];
    let axial = i * xi * u[OMEGA] - p.l * u[PHI];
    let rt = |x: f64| C64::new(x.sqrt(), 0.0);
    match s.kind {
        SystemKind::TypeI => CVector::from_vec(vec![
            rt(p.rho1) * u[PHI_T],
            rt(p.rho2) * u[PSI_T],
            rt(p.rho1) * u[OMEGA_T],
            rt(p.gamma / p.m1) * u[THETA1],
            rt(p.gamma / p.m2) * u[spectral::theta2(s.kind)],
            rt(p.b) * i * xi * u[PSI],
            rt(p.k) * shear,
            rt(p.k0) * axial,
        ]),
        SystemKind::TypeIII => CVector::from_vec(vec![
            rt(p.rho1) * u[PHI_T],
            rt(p.rho2) * u[PSI_T],
            rt(p.rho1) * u[OMEGA_T],
            rt(p.gamma / p.m1) * u[spectral::theta1_t(s.kind).unwrap()],
            rt(p.k1 * p.gamma / p.m1) * i * xi * u[THETA1],
            rt(p.gamma / p.m2) * u[spectral::theta2_t(s.kind).unwrap()],
            rt(p.k2 * p.gamma / p.m2) * i * xi * u[spectral::theta2(s.kind)],
            rt(p.b) * i * xi * u[PSI],
            rt(p.k) * shear,
            rt(p.k0) * axial,
        ]),
    }
}

/// Relative tail budget of the norm quadrature.
pub const TAIL_LIMIT: f64 = 1e-6;

/// One propagated mode of a spectral solution.
struct Mode {
    xi: f64,
    weight: f64,
    propagator: Option<Propagator>,
    u0: ModeState,
    energy: EnergyForm,
}

/// The full spectral solution of one experiment: per-mode propagators
/// built once and reused across all evaluation times.
pub struct SpectralSolution {
    modes: Vec<Mode>,
    /// (1/pi) int_(hi..) xi^{2k} E(xi, 0) dxi estimated per order k.
    tail_density: Option<TailModel>,
}

struct TailModel {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    densities: Vec<f64>,
}

impl SpectralSolution {
    pub fn new(
        p: &Parameters,
        kind: SystemKind,
        profile: &InitialProfile,
        grid: &FrequencyGrid,
    ) -> Result<Self> {
        let modes: Result<Vec<Mode>> = grid
            .nodes()
            .par_iter()
            .zip(grid.weights().par_iter())
            .map(|(&xi, &w)| {
                let u0 = initial_mode_state(profile, p, kind, xi)?;
                let zero = u0.u.iter().all(|z| z.norm_sqr() == 0.0);
                let propagator = if zero {
                    None
                } else {
                    Some(Propagator::new(build_generator(p, kind, xi))?)
                };
                Ok(Mode {
                    xi,
                    weight: w,
                    propagator,
                    u0,
                    energy: EnergyForm::new(p, kind, xi),
                })
            })
            .collect();
        let modes = modes?;

        // tail of the initial (hence dominating) energy density past
        // the grid: three octaves of geometric extension
        let (_, hi) = (grid.nodes()[0], *grid.nodes().last().unwrap());
        let tail_density = if profile.shape.supported_below(hi) {
            None
        } else {
            let ext =
                FrequencyGrid::geometric(hi, 8.0 * hi, 97).expect("tail extension grid is valid");
            let densities: Vec<f64> = ext
                .nodes()
                .iter()
                .map(|&xi| {
                    let u0 = initial_mode_state(profile, p, kind, xi).unwrap();
                    EnergyForm::new(p, kind, xi).eval(&u0.u)
                })
                .collect();
            Some(TailModel {
                nodes: ext.nodes().to_vec(),
                weights: ext.weights().to_vec(),
                densities,
            })
        };
        Ok(SpectralSolution {
            modes,
            tail_density,
        })
    }

    /// Mode energies at time t (zero-data modes stay zero).
    fn energies_at(&self, t: f64) -> Result<Vec<f64>> {
        self.modes
            .par_iter()
            .map(|m| match &m.propagator {
                None => Ok(0.0),
                Some(prop) => {
                    let s = prop.apply(&m.u0, t)?;
                    Ok(m.energy.eval(&s.u))
                }
            })
            .collect()
    }

    fn tail_integral(&self, k: u32) -> f64 {
        match &self.tail_density {
            None => 0.0,
            Some(tm) => {
                let mut tail = 0.0;
                for ((&xi, &w), &d) in tm.nodes.iter().zip(&tm.weights).zip(&tm.densities) {
                    tail += w * xi.powi(2 * k as i32) * d;
                }
                // geometric remainder past the extension span
                let last = *tm.nodes.last().unwrap();
                let last_density = *tm.densities.last().unwrap() * last.powi(2 * k as i32);
                (tail + last_density * last) / std::f64::consts::PI
            }
        }
    }

    /// || d^k V(t) ||_2 by Plancherel quadrature, doubled for xi < 0
    /// by evenness; errors out if the high-frequency tail estimate
    /// exceeds [`TAIL_LIMIT`] of the integral.
    pub fn norm(&self, k: u32, t: f64) -> Result<f64> {
        let energies = self.energies_at(t)?;
        let mut integral = 0.0;
        for (m, e) in self.modes.iter().zip(&energies) {
            integral += m.weight * m.xi.powi(2 * k as i32) * e;
        }
        integral /= std::f64::consts::PI;
        let tail = self.tail_integral(k);
        if tail > TAIL_LIMIT * integral.max(f64::MIN_POSITIVE) {
            return Err(BresseError::TailTooFat {
                tail,
                limit: TAIL_LIMIT * integral,
            });
        }
        Ok(integral.sqrt())
    }

    /// Norm series over many times (one propagator pass per time).
    pub fn norms(&self, k: u32, times: &[f64]) -> Result<Vec<f64>> {
        times.iter().map(|&t| self.norm(k, t)).collect()
    }
}

/// One-shot Sobolev norm (builds the solution, evaluates one time).
pub fn sobolev_norm(
    p: &Parameters,
    kind: SystemKind,
    profile: &InitialProfile,
    k: u32,
    t: f64,
    grid: &FrequencyGrid,
) -> Result<f64> {
    SpectralSolution::new(p, kind, profile, grid)?.norm(k, t)
}

/// Norm time series plus the initial-data norms entering the decay
/// estimates.
#[derive(Debug, Clone)]
pub struct NormReport {
    pub k: u32,
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
    pub l1_init: Option<f64>,
    /// (order, || d^order V0 ||_2) pairs.
    pub hs_init: Vec<(u32, f64)>,
}

/// Compute the norm series and initial-data norms for one experiment.
pub fn norm_report(
    p: &Parameters,
    kind: SystemKind,
    profile: &InitialProfile,
    k: u32,
    extra_orders: &[u32],
    times: &[f64],
    grid: &FrequencyGrid,
) -> Result<NormReport> {
    let solution = SpectralSolution::new(p, kind, profile, grid)?;
    let norms = solution.norms(k, times)?;
    let mut hs_init = Vec::new();
    for &l in extra_orders {
        hs_init.push((k + l, solution.norm(k + l, 0.0)?));
    }
    Ok(NormReport {
        k,
        times: times.to_vec(),
        norms,
        l1_init: profile.l1_init(p, kind),
        hs_init,
    })
}
