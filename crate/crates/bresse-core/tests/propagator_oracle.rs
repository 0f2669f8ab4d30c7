//! Independent oracles for the matrix-exponential propagator: an
//! adaptive Dormand-Prince integrator (test-code only, sharing no
//! path with the propagator), conservation in the degenerate limit,
//! and frozen eigenvalue baselines.

use bresse_core::functionals::mode_energy;
use bresse_core::linalg::{CMatrix, CVector, C64};
use bresse_core::model::{Parameters, SystemKind};
use bresse_core::spectral::{build_generator, propagate, spectral_abscissa, ModeState, Propagator};

/// Adaptive Dormand-Prince 5(4) for du/dt = A u.
fn dopri5(a: &CMatrix, u0: &CVector, t_end: f64, tol: f64) -> CVector {
    // Butcher tableau of DOPRI5
    const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const A_TAB: [[f64; 6]; 7] = [
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
            0.0,
            0.0,
        ],
        [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
            0.0,
        ],
        [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    ];
    const B5: [f64; 7] = [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
        0.0,
    ];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let _ = C;

    let mut t = 0.0;
    let mut u = u0.clone();
    let mut h: f64 = 1e-4;
    let n = u.len();
    while t < t_end {
        h = h.min(t_end - t);
        let mut k: Vec<CVector> = Vec::with_capacity(7);
        for row in &A_TAB {
            let mut arg = u.clone();
            for (j, kj) in k.iter().enumerate() {
                if j < 6 && row[j] != 0.0 {
                    arg += kj * C64::new(h * row[j], 0.0);
                }
            }
            k.push(a * arg);
        }
        let mut u5 = u.clone();
        let mut u4 = u.clone();
        for j in 0..7 {
            if B5[j] != 0.0 {
                u5 += &k[j] * C64::new(h * B5[j], 0.0);
            }
            if B4[j] != 0.0 {
                u4 += &k[j] * C64::new(h * B4[j], 0.0);
            }
        }
        let mut err: f64 = 0.0;
        for i in 0..n {
            let scale = tol + tol * u5[i].norm().max(u[i].norm());
            err = err.max((u5[i] - u4[i]).norm() / scale);
        }
        if err <= 1.0 {
            t += h;
            u = u5;
        }
        let factor = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        h = (h * factor).max(1e-12);
    }
    u
}

#[test]
fn propagator_matches_adaptive_integrator() {
    let p = Parameters::default();
    for kind in [SystemKind::TypeI, SystemKind::TypeIII] {
        let g = build_generator(&p, kind, 1.0);
        let u0 = ModeState::unit(kind, 1.0, 0);
        let ours = propagate(&g, &u0, 10.0).unwrap();
        let oracle = dopri5(&g.matrix, &u0.u, 10.0, 1e-12);
        let err = (&ours.u - &oracle).norm();
        assert!(err < 1e-8, "{kind}: disagreement {err}");
    }
}

#[test]
fn eigen_and_pade_routes_agree() {
    let p = Parameters::distinct_unit();
    for kind in [SystemKind::TypeI, SystemKind::TypeIII] {
        for xi in [0.3, 2.0, 30.0] {
            let g = build_generator(&p, kind, xi);
            let prop = Propagator::new(g.clone()).unwrap();
            assert!(prop.uses_eigen_route(), "{kind} xi={xi}");
            let u0 = ModeState::unit(kind, xi, 1);
            for t in [0.5, 7.0] {
                let via_eigen = prop.apply(&u0, t).unwrap();
                let e = bresse_core::linalg::expm(&(g.matrix.clone() * C64::new(t, 0.0)));
                let via_pade = &e * &u0.u;
                let err = (&via_eigen.u - &via_pade).norm() / via_pade.norm();
                assert!(err < 1e-9, "{kind} xi={xi} t={t}: {err}");
            }
        }
    }
}

#[test]
fn degenerate_coupling_conserves_energy() {
    let p = Parameters {
        gamma: 0.0,
        ..Parameters::default()
    };
    for kind in [SystemKind::TypeI, SystemKind::TypeIII] {
        let g = build_generator(&p, kind, 1.0);
        let prop = Propagator::new(g).unwrap();
        let mut u0 = ModeState::unit(kind, 1.0, 1);
        u0.u[2] = C64::new(0.4, -0.3);
        u0.u[5] = C64::new(-0.2, 0.9);
        let e0 = mode_energy(&u0, &p);
        assert!(e0 > 0.0);
        let mut t = 0.0;
        while t <= 100.0 {
            let s = prop.apply(&u0, t).unwrap();
            let e = mode_energy(&s, &p);
            assert!(
                (e - e0).abs() <= 1e-8 * e0,
                "{kind} t={t}: energy drifted {} -> {}",
                e0,
                e
            );
            t += 12.5;
        }
    }
}

#[test]
fn zero_frequency_energy_is_constant() {
    let p = Parameters::default();
    for kind in [SystemKind::TypeI, SystemKind::TypeIII] {
        let g = build_generator(&p, kind, 0.0);
        let prop = Propagator::new(g).unwrap();
        let mut u0 = ModeState::unit(kind, 0.0, 0);
        u0.u[3] = C64::new(0.7, 0.1);
        let e0 = mode_energy(&u0, &p);
        let mut t = 0.0;
        while t <= 100.0 {
            let s = prop.apply(&u0, t).unwrap();
            let e = mode_energy(&s, &p);
            assert!((e - e0).abs() <= 1e-10 * e0, "{kind} t={t}: {e0} -> {e}");
            t += 10.0;
        }
    }
}

#[test]
fn abscissa_regression_baselines() {
    // frozen dense-eigenvalue baselines at unit parameters, xi = 1
    let p = Parameters::default();
    let g1 = build_generator(&p, SystemKind::TypeI, 1.0);
    let a1 = spectral_abscissa(&g1).unwrap();
    assert!(
        (a1 - (-6.739084240194515e-2)).abs() < 1e-9,
        "type1 abscissa moved: {a1:.15e}"
    );
    let g3 = build_generator(&p, SystemKind::TypeIII, 1.0);
    let a3 = spectral_abscissa(&g3).unwrap();
    assert!(
        (a3 - (-9.311677192440757e-2)).abs() < 1e-9,
        "type3 abscissa moved: {a3:.15e}"
    );
}

#[test]
fn every_damped_mode_is_strictly_stable() {
    for p in [Parameters::default(), Parameters::distinct_unit()] {
        for kind in [SystemKind::TypeI, SystemKind::TypeIII] {
            let mut xi = 0.01f64;
            while xi <= 100.0 {
                let g = build_generator(&p, kind, xi);
                let a = spectral_abscissa(&g).unwrap();
                assert!(a < 0.0, "{kind} xi={xi}: abscissa {a}");
                xi *= 2.3;
            }
        }
    }
}
