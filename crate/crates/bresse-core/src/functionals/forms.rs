//! Sesquilinear building blocks for the energy and the Lyapunov
//! functional ladder.
//!
//! Every functional in the ladder has the shape
//! `F(u) = Re( sum_k c_k (a_k . u) conj(b_k . u) )`
//! for complex linear forms `a_k`, `b_k`. Storing the terms in that
//! shape gives an exact analytic time derivative along dU/dt = A U:
//! no finite differences enter any identity or inequality check.

use crate::linalg::{CVector, C64};
use crate::model::{Parameters, SystemKind};
use crate::spectral::{self, OMEGA, OMEGA_T, PHI, PHI_T, PSI, PSI_T, THETA1};

/// A complex linear form `u -> a . u`.
#[derive(Debug, Clone)]
pub struct LinearForm(pub CVector);

impl LinearForm {
    pub fn zero(dim: usize) -> Self {
        LinearForm(CVector::zeros(dim))
    }

    pub fn unit(dim: usize, j: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[j] = C64::new(1.0, 0.0);
        LinearForm(v)
    }

    pub fn eval(&self, u: &CVector) -> C64 {
        self.0.iter().zip(u.iter()).map(|(a, x)| a * x).sum()
    }
}

/// Shear strain i xi phi - psi - l omega as a linear form.
pub fn shear_form(kind: SystemKind, xi: f64, l: f64) -> LinearForm {
    let mut v = CVector::zeros(kind.dim());
    v[PHI] = C64::new(0.0, xi);
    v[PSI] = C64::new(-1.0, 0.0);
    v[OMEGA] = C64::new(-l, 0.0);
    LinearForm(v)
}

/// Axial strain i xi omega - l phi as a linear form.
pub fn axial_form(kind: SystemKind, xi: f64, l: f64) -> LinearForm {
    let mut v = CVector::zeros(kind.dim());
    v[OMEGA] = C64::new(0.0, xi);
    v[PHI] = C64::new(-l, 0.0);
    LinearForm(v)
}

/// `F(u) = Re( sum_k c_k (a_k . u) conj(b_k . u) )`.
#[derive(Debug, Clone, Default)]
pub struct QuadFunctional {
    terms: Vec<(C64, LinearForm, LinearForm)>,
}

impl QuadFunctional {
    pub fn new() -> Self {
        QuadFunctional { terms: Vec::new() }
    }

    pub fn term(mut self, c: C64, a: LinearForm, b: LinearForm) -> Self {
        self.terms.push((c, a, b));
        self
    }

    pub fn push(&mut self, c: C64, a: LinearForm, b: LinearForm) {
        self.terms.push((c, a, b));
    }

    /// self + scale * other.
    pub fn add_scaled(&mut self, scale: f64, other: &QuadFunctional) {
        for (c, a, b) in &other.terms {
            self.terms
                .push((c * C64::new(scale, 0.0), a.clone(), b.clone()));
        }
    }

    pub fn eval(&self, u: &CVector) -> f64 {
        self.terms
            .iter()
            .map(|(c, a, b)| (c * a.eval(u) * b.eval(u).conj()).re)
            .sum()
    }

    /// Exact d/dt along the flow, with `v = A u`.
    pub fn derivative(&self, u: &CVector, v: &CVector) -> f64 {
        self.terms
            .iter()
            .map(|(c, a, b)| (c * (a.eval(v) * b.eval(u).conj() + a.eval(u) * b.eval(v).conj())).re)
            .sum()
    }
}

/// The mode energy as a weighted sum of squared linear forms,
/// `E(u) = sum_j w_j |a_j . u|^2` with every `w_j > 0`.
#[derive(Debug, Clone)]
pub struct EnergyForm {
    parts: Vec<(f64, LinearForm)>,
}

impl EnergyForm {
    /// The energy quadratic form of the given kind at frequency xi.
    pub fn new(p: &Parameters, kind: SystemKind, xi: f64) -> Self {
        let dim = kind.dim();
        let unit = |j: usize| LinearForm::unit(dim, j);
        let mut parts = vec![
            (p.rho1, unit(PHI_T)),
            (p.rho2, unit(PSI_T)),
            (p.rho1, unit(OMEGA_T)),
        ];
        match kind {
            SystemKind::TypeI => {
                parts.push((p.gamma / p.m1, unit(THETA1)));
                parts.push((p.gamma / p.m2, unit(spectral::theta2(kind))));
            }
            SystemKind::TypeIII => {
                parts.push((p.gamma / p.m1, unit(spectral::theta1_t(kind).unwrap())));
                parts.push((p.k1 * p.gamma / p.m1 * xi * xi, unit(THETA1)));
                parts.push((p.gamma / p.m2, unit(spectral::theta2_t(kind).unwrap())));
                parts.push((
                    p.k2 * p.gamma / p.m2 * xi * xi,
                    unit(spectral::theta2(kind)),
                ));
            }
        }
        parts.push((p.b * xi * xi, unit(PSI)));
        parts.push((p.k, shear_form(kind, xi, p.l)));
        parts.push((p.k0, axial_form(kind, xi, p.l)));
        EnergyForm { parts }
    }

    pub fn eval(&self, u: &CVector) -> f64 {
        self.parts
            .iter()
            .map(|(w, a)| w * a.eval(u).norm_sqr())
            .sum()
    }

    /// Exact dE/dt along the flow, with `v = A u`.
    pub fn derivative(&self, u: &CVector, v: &CVector) -> f64 {
        self.parts
            .iter()
            .map(|(w, a)| 2.0 * w * (a.eval(u).conj() * a.eval(v)).re)
            .sum()
    }

    /// The weighted parts (used by the vector-solution assembly).
    pub fn parts(&self) -> &[(f64, LinearForm)] {
        &self.parts
    }
}

/// Identifiers for the Lyapunov ladder.
///
/// The same names cover both kinds; the Type III variants substitute
/// the thermal velocities and carry the extra correction terms. `S`
/// exists only for Type III.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionalId {
    J1,
    T1,
    T2,
    J2,
    J3,
    J4,
    K,
    H,
    S,
    L1,
    L,
}

impl FunctionalId {
    pub fn label(self) -> &'static str {
        match self {
            FunctionalId::J1 => "J1",
            FunctionalId::T1 => "T1",
            FunctionalId::T2 => "T2",
            FunctionalId::J2 => "J2",
            FunctionalId::J3 => "J3",
            FunctionalId::J4 => "J4",
            FunctionalId::K => "K",
            FunctionalId::H => "H",
            FunctionalId::S => "S",
            FunctionalId::L1 => "L1",
            FunctionalId::L => "L",
        }
    }

    /// Everything a `verify` run checks lemma-wise for the kind.
    pub fn lemma_set(kind: SystemKind) -> &'static [FunctionalId] {
        match kind {
            SystemKind::TypeI => &[
                FunctionalId::J1,
                FunctionalId::T1,
                FunctionalId::T2,
                FunctionalId::J2,
                FunctionalId::J3,
                FunctionalId::J4,
                FunctionalId::K,
                FunctionalId::H,
            ],
            SystemKind::TypeIII => &[
                FunctionalId::J1,
                FunctionalId::T1,
                FunctionalId::T2,
                FunctionalId::J2,
                FunctionalId::J3,
                FunctionalId::J4,
                FunctionalId::K,
                FunctionalId::H,
                FunctionalId::S,
            ],
        }
    }
}

impl std::fmt::Display for FunctionalId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn im(x: f64) -> C64 {
    C64::new(0.0, x)
}

/// J1 = Re(i rho2 xi psi_t conj(theta2))          (Type I)
///    + Re(i k2 rho2 xi^3 psi conj(theta2))       (extra term, Type III,
///      with theta2_t in the first slot)
pub fn build_j1(p: &Parameters, kind: SystemKind, xi: f64) -> QuadFunctional {
    let dim = kind.dim();
    let unit = |j: usize| LinearForm::unit(dim, j);
    match kind {
        SystemKind::TypeI => {
            QuadFunctional::new().term(im(p.rho2 * xi), unit(PSI_T), unit(spectral::theta2(kind)))
        }
        SystemKind::TypeIII => QuadFunctional::new()
            .term(
                im(p.rho2 * xi),
                unit(PSI_T),
                unit(spectral::theta2_t(kind).unwrap()),
            )
            .term(
                im(p.k2 * p.rho2 * xi * xi * xi),
                unit(PSI),
                unit(spectral::theta2(kind)),
            ),
    }
}

/// T1 = Re(-rho1 phi_t conj(axial) - rho1/m1 phi_t conj(theta1 or theta1_t)).
pub fn build_t1(p: &Parameters, kind: SystemKind, xi: f64) -> QuadFunctional {
    let dim = kind.dim();
    let th = match kind {
        SystemKind::TypeI => THETA1,
        SystemKind::TypeIII => spectral::theta1_t(kind).unwrap(),
    };
    QuadFunctional::new()
        .term(
            re(-p.rho1),
            LinearForm::unit(dim, PHI_T),
            axial_form(kind, xi, p.l),
        )
        .term(
            re(-p.rho1 / p.m1),
            LinearForm::unit(dim, PHI_T),
            LinearForm::unit(dim, th),
        )
}

/// T2 = Re(i rho1 xi omega_t conj(axial) + i rho1/m1 xi omega_t conj(theta1 or theta1_t)).
pub fn build_t2(p: &Parameters, kind: SystemKind, xi: f64) -> QuadFunctional {
    let dim = kind.dim();
    let th = match kind {
        SystemKind::TypeI => THETA1,
        SystemKind::TypeIII => spectral::theta1_t(kind).unwrap(),
    };
    QuadFunctional::new()
        .term(
            im(p.rho1 * xi),
            LinearForm::unit(dim, OMEGA_T),
            axial_form(kind, xi, p.l),
        )
        .term(
            im(p.rho1 / p.m1 * xi),
            LinearForm::unit(dim, OMEGA_T),
            LinearForm::unit(dim, th),
        )
}

/// J2 = l T1 + T2, plus for Type III the correction term
/// (rho1 k1 / m1) Re(xi^2 conj(theta1) axial).
pub fn build_j2(p: &Parameters, kind: SystemKind, xi: f64) -> QuadFunctional {
    let mut f = QuadFunctional::new();
    f.add_scaled(p.l, &build_t1(p, kind, xi));
    f.add_scaled(1.0, &build_t2(p, kind, xi));
    if kind == SystemKind::TypeIII {
        f.push(
            re(p.rho1 * p.k1 / p.m1 * xi * xi),
            axial_form(kind, xi, p.l),
            LinearForm::unit(kind.dim(), THETA1),
        );
    }
    f
}

/// J3 = Re(-rho2 psi_t conj(shear) - i rho1 b / k xi psi conj(phi_t)).
pub fn build_j3(p: &Parameters, kind: SystemKind, xi: f64) -> QuadFunctional {
    let dim = kind.dim();
    QuadFunctional::new()
        .term(
            re(-p.rho2),
            LinearForm::unit(dim, PSI_T),
            shear_form(kind, xi, p.l),
        )
        .term(
            im(-p.rho1 * p.b / p.k * xi),
            LinearForm::unit(dim, PSI),
            LinearForm::unit(dim, PHI_T),
        )
}

/// J4 = Re(rho2^2 l^2 / rho1 psi_t conj(psi) - rho2 l omega_t conj(psi)).
pub fn build_j4(p: &Parameters, kind: SystemKind, _xi: f64) -> QuadFunctional {
    let dim = kind.dim();
    QuadFunctional::new()
        .term(
            re(p.rho2 * p.rho2 * p.l * p.l / p.rho1),
            LinearForm::unit(dim, PSI_T),
            LinearForm::unit(dim, PSI),
        )
        .term(
            re(-p.rho2 * p.l),
            LinearForm::unit(dim, OMEGA_T),
            LinearForm::unit(dim, PSI),
        )
}

/// K = J3 + J4.
pub fn build_k(p: &Parameters, kind: SystemKind, xi: f64) -> QuadFunctional {
    let mut f = build_j3(p, kind, xi);
    f.add_scaled(1.0, &build_j4(p, kind, xi));
    f
}

/// H = rho1 Re(shear conj(omega_t)) + rho1 Re(axial conj(phi_t)).
pub fn build_h(p: &Parameters, kind: SystemKind, xi: f64) -> QuadFunctional {
    let dim = kind.dim();
    QuadFunctional::new()
        .term(
            re(p.rho1),
            shear_form(kind, xi, p.l),
            LinearForm::unit(dim, OMEGA_T),
        )
        .term(
            re(p.rho1),
            axial_form(kind, xi, p.l),
            LinearForm::unit(dim, PHI_T),
        )
}

/// S (Type III only):
///   gamma/m1 xi^2 Re(theta1_t conj(theta1))
/// + gamma/m2 xi^2 Re(theta2_t conj(theta2))
/// + gamma/2 xi^4 (alpha1/m1 |theta1|^2 + alpha2/m2 |theta2|^2)
/// + gamma Re(i xi^3 psi conj(theta2))
/// + gamma xi^2 Re(axial conj(theta1))
///
/// The xi^4 block uses |theta_i|^2, not |theta_{it}|^2: only that
/// choice makes the time derivative cancel against the governing
/// equations, and the dissipation inequality below it is then exact.
pub fn build_s(p: &Parameters, kind: SystemKind, xi: f64) -> QuadFunctional {
    debug_assert_eq!(kind, SystemKind::TypeIII);
    let dim = kind.dim();
    let unit = |j: usize| LinearForm::unit(dim, j);
    let th1 = THETA1;
    let th1t = spectral::theta1_t(kind).unwrap();
    let th2 = spectral::theta2(kind);
    let th2t = spectral::theta2_t(kind).unwrap();
    let xi2 = xi * xi;
    let xi3 = xi2 * xi;
    let xi4 = xi2 * xi2;
    QuadFunctional::new()
        .term(re(p.gamma / p.m1 * xi2), unit(th1t), unit(th1))
        .term(re(p.gamma / p.m2 * xi2), unit(th2t), unit(th2))
        .term(
            re(0.5 * p.gamma * p.alpha1 / p.m1 * xi4),
            unit(th1),
            unit(th1),
        )
        .term(
            re(0.5 * p.gamma * p.alpha2 / p.m2 * xi4),
            unit(th2),
            unit(th2),
        )
        .term(im(p.gamma * xi3), unit(PSI), unit(th2))
        .term(re(p.gamma * xi2), axial_form(kind, xi, p.l), unit(th1))
}
