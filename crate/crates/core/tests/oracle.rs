use gwsql::closedform::{self, PhotonAverage, SignalInputs, ThermalSpec};
use gwsql::oracle::{
    self, adjudicate, build_thermal_state, evolve_sector, expectation, expectation_with, AdjudicationOptions,
    DeskProfile, EvolveOptions, OracleConfig, OracleError,
};
use gwsql::Dynamics;
use nalgebra::SymmetricEigen;

fn desk() -> (DeskProfile, Dynamics, f64) {
    let p = DeskProfile::default();
    let d = p.dynamics().unwrap();
    (p, d, p.time())
}

#[test]
fn desk_adjudication_passes() {
    let (profile, _, _) = desk();
    let report = adjudicate(&profile, &[0.0, 1.0], &OracleConfig::default(), AdjudicationOptions::default()).unwrap();
    for c in &report.checks {
        println!("{:45} exp {:+.15e} act {:+.15e} err {:.2e} tol {:.1e} {}", c.check, c.expected, c.actual, c.abs_err, c.tol, c.pass);
    }
    assert!(report.all_pass());
}

#[test]
fn printed_forms_fail_adjudication() {
    let (profile, _, _) = desk();
    let cfg = OracleConfig::default();
    let ground = adjudicate(&profile, &[0.0], &cfg, AdjudicationOptions { printed_ground: true, printed_thermal: false }).unwrap();
    let failed: Vec<_> = ground.failures().map(|c| c.check.as_str()).collect();
    assert_eq!(failed, vec!["mean[nbar=0]"]);
    let mean = ground.checks.iter().find(|c| c.check == "mean[nbar=0]").unwrap();
    assert!(mean.abs_err >= 10.0 * cfg.tol_match);

    let thermal = adjudicate(&profile, &[1.0], &cfg, AdjudicationOptions { printed_ground: false, printed_thermal: true }).unwrap();
    assert!(!thermal.all_pass());
}

#[test]
fn oracle_matches_closed_form_across_desk_range() {
    let cfg = OracleConfig::default();
    for &(g, photons, nbar) in &[(0.1, 2.0, 0.0), (0.3, 3.0, 0.5), (0.15, 4.0, 2.0), (0.25, 2.0, 1.0)] {
        let profile = DeskProfile { g, photons, theta_g: 0.2, theta_l: 0.04, intensity: 2.0 };
        let d = profile.dynamics().unwrap();
        let t = profile.time();
        // hotter states need a longer ladder to keep the thermal tail below tol_trunc
        let cfg = OracleConfig { n_osc: if nbar > 1.0 { 90 } else { cfg.n_osc }, ..cfg };
        let oracle = expectation(t, &d, photons, profile.intensity, nbar, &cfg).unwrap();
        let inputs = SignalInputs::from_phase(g, &d.phase_state(t), photons, profile.intensity);
        let closed = closedform::signal_stats(&inputs, &ThermalSpec::from_nbar(g, nbar), PhotonAverage::Poissonian);
        assert!((oracle.stats.mean - closed.mean).abs() <= 1e-10 * 2.0, "g={g} nbar={nbar}");
        assert!((oracle.stats.dispersion - closed.dispersion).abs() <= 1e-10 * 4.0, "g={g} nbar={nbar}");
    }
}

#[test]
fn no_coupling_no_signal() {
    let (_, d, t) = desk();
    let off = Dynamics { g: 0.0, ..d };
    let r = expectation(t, &off, 5.0, 1.0, 1.0, &OracleConfig::default()).unwrap();
    assert!(r.stats.mean.abs() < 1e-15);
    assert!(r.stats.dispersion.abs() < 1e-15);
}

#[test]
fn no_laser_single_sector() {
    let (_, d, t) = desk();
    for nbar in [0.0, 1.0] {
        let r = expectation(t, &d, 0.0, 1.0, nbar, &OracleConfig::default()).unwrap();
        assert_eq!(r.sectors, 1);
        let alpha = ThermalSpec::from_nbar(d.g, nbar).alpha;
        let expected = alpha * (-0.5 * d.g * d.g).exp() * d.theta_g(t).sin();
        assert!((r.stats.mean - expected).abs() < 1e-12, "nbar {nbar}");
    }
}

#[test]
fn sector_phase_drops_out() {
    let (p, d, t) = desk();
    let cfg = OracleConfig::default();
    let with = expectation_with(t, &d, p.photons, 1.0, 1.0, &cfg, EvolveOptions { sector_phase: true }).unwrap();
    let without = expectation_with(t, &d, p.photons, 1.0, 1.0, &cfg, EvolveOptions { sector_phase: false }).unwrap();
    assert!((with.stats.mean - without.stats.mean).abs() < 1e-14);
    assert!((with.stats.second_moment - without.stats.second_moment).abs() < 1e-14);
}

#[test]
fn sector_evolution_is_unitary_and_physical() {
    let (_, d, t) = desk();
    let cfg = OracleConfig::default();
    let phase = d.phase_state(t);

    // vacuum, no gravitational drive, one photon: a coherent state
    let no_drive = Dynamics { drive_amplitude: 0.0, ..d };
    let vac = build_thermal_state(cfg.n_osc, 0.0, cfg.tol_trunc).unwrap();
    let s = evolve_sector(1, 1.0, &no_drive.phase_state(t), &vac, &cfg, EvolveOptions::default()).unwrap();
    let rho = &s.osc_state;
    assert!(((rho * rho).trace().re - 1.0).abs() < 1e-10);
    let amp = no_drive.phase_state(t).coherent_amplitude(1);
    let b = oracle::annihilation(cfg.n_osc);
    let mean_b = (&b * rho).trace();
    assert!((mean_b - amp).norm() < 1e-12);

    let hot = build_thermal_state(cfg.n_osc, 1.0, cfg.tol_trunc).unwrap();
    for n in [0u32, 3, 12] {
        let s = evolve_sector(n, 1.0, &phase, &hot, &cfg, EvolveOptions::default()).unwrap();
        let r = &s.osc_state;
        assert!((r.trace().re - hot.trace().re).abs() < 1e-12);
        assert!((r - r.adjoint()).norm() < 1e-12);
        let eig = SymmetricEigen::new(r.clone());
        assert!(eig.eigenvalues.iter().all(|&l| l >= -1e-12));
    }
}

#[test]
fn truncation_convergence() {
    let (p, d, t) = desk();
    let small = OracleConfig::default();
    let large = OracleConfig { n_osc: 2 * small.n_osc, ..small };
    for nbar in [0.0, 1.0] {
        let a = expectation(t, &d, p.photons, 1.0, nbar, &small).unwrap();
        let b = expectation(t, &d, p.photons, 1.0, nbar, &large).unwrap();
        assert!((a.stats.mean - b.stats.mean).abs() < 1e-10);
    }
}

#[test]
fn enlarging_photon_cutoff_changes_nothing() {
    let (p, d, t) = desk();
    let cfg = OracleConfig::default();
    let wider = OracleConfig { n_field: 50, ..cfg };
    let a = expectation(t, &d, p.photons, 1.0, 1.0, &cfg).unwrap();
    let b = expectation(t, &d, p.photons, 1.0, 1.0, &wider).unwrap();
    assert!((a.stats.mean - b.stats.mean).abs() < cfg.tol_trunc);
}

#[test]
fn guards_trip() {
    let (p, d, t) = desk();
    let tiny = OracleConfig { n_osc: 8, ..Default::default() };
    assert!(matches!(expectation(t, &d, p.photons, 1.0, 0.0, &tiny), Err(OracleError::TruncationTooSmall { .. })));
    let strong = DeskProfile { photons: 40.0, ..p };
    let cfg = OracleConfig { n_field: 120, ..Default::default() };
    let err = expectation(t, &strong.dynamics().unwrap(), strong.photons, 1.0, 0.0, &cfg).unwrap_err();
    assert!(err.is_truncation(), "{err}");
}
