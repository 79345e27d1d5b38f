use qscissors::beam_splitter::{apply_unitary, bs_unitary, BeamSplitterSpec};
use qscissors::fock::{DensityMatrix, FockSpace};
use qscissors::observables::{self, mean_photon};
use qscissors::scissors::{HeraldOutcome, ScissorsCircuit};
use qscissors::states::{fock, make_thermal, ThermalSpec};
use qscissors::{closed_form, run_qsd, Error, QsdParams};

#[test]
fn thermal_times_single_photon_mean() {
    for nbar in [0.0, 0.3, 1.0, 2.5] {
        let thermal = make_thermal(&ThermalSpec::new(nbar, 1e-14).unwrap());
        let joint = thermal.rho.tensor(&fock(3, 1).unwrap());
        let expected = nbar + 1.0;
        // the truncated thermal mean falls short by about tail·d
        assert!(
            (mean_photon(&joint) - expected).abs() < 1e-11,
            "nbar {nbar}"
        );
    }
}

#[test]
fn beam_splitter_conserves_total_photons() {
    let thermal = make_thermal(&ThermalSpec::new(0.8, 1e-10).unwrap());
    let d = thermal.cutoff;
    let joint = thermal.rho.tensor(&fock(d + 1, 1).unwrap());
    let u = bs_unitary(
        joint.space(),
        &BeamSplitterSpec::from_transmissivity(0, 1, 0.3).unwrap(),
    )
    .unwrap();
    let out = apply_unitary(&joint, &u).unwrap();
    assert!((mean_photon(&out) - mean_photon(&joint)).abs() < 1e-12);
}

#[test]
fn limiting_transmissivities() {
    for nbar in [0.2, 0.5, 1.0, 1.2] {
        let zero = run_qsd(&QsdParams::with_default_tail(nbar, 0.0).unwrap()).unwrap();
        assert!((zero.rho_out.data()[(0, 0)].re - 1.0).abs() < 1e-12);
        let one = run_qsd(&QsdParams::with_default_tail(nbar, 1.0).unwrap()).unwrap();
        assert!((one.rho_out.data()[(1, 1)].re - 1.0).abs() < 1e-12);
        assert!(one.rho_out.max_off_diagonal() < 1e-12);
    }
}

#[test]
fn degenerate_corner_reports_error() {
    let err = run_qsd(&QsdParams::with_default_tail(0.0, 1.0).unwrap()).unwrap_err();
    assert!(matches!(err, Error::HeraldNeverFires { .. }));
    assert!(matches!(
        closed_form::populations(0.0, 1.0),
        Err(Error::Degenerate { .. })
    ));
}

#[test]
fn mixed_input_routes_agree() {
    // a non-diagonal, non-thermal input
    let a = qscissors::fock::C64::new(0.6, 0.0);
    let b = qscissors::fock::C64::new(0.0, 0.48);
    let c = qscissors::fock::C64::new(-0.64, 0.0);
    let pure = DensityMatrix::pure(FockSpace::single(3).unwrap(), &[a, b, c]).unwrap();
    let thermal = make_thermal(&ThermalSpec::new(0.4, 1e-3).unwrap());
    let thermal3 = DensityMatrix::diagonal(
        FockSpace::single(3).unwrap(),
        &thermal.rho.populations()[..3],
    )
    .unwrap();
    let mixed = DensityMatrix::new(
        FockSpace::single(3).unwrap(),
        (pure.data() + thermal3.data()) * qscissors::fock::C64::new(0.5, 0.0),
    )
    .unwrap();
    for t in [0.1, 0.5, 0.95] {
        let circuit = ScissorsCircuit::new(t).unwrap();
        let fast = circuit.run(&mixed).unwrap();
        let dense = circuit.run_dense(&mixed).unwrap();
        let diff = (fast.rho_out.data() - dense.rho_out.data())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-13);
        assert!((fast.p_d - dense.p_d).abs() < 1e-14);
    }
}

#[test]
fn complementary_herald_flips_the_phase() {
    let amps = [
        qscissors::fock::C64::new(0.8, 0.0),
        qscissors::fock::C64::new(0.6, 0.0),
    ];
    let rho = DensityMatrix::pure(FockSpace::single(2).unwrap(), &amps).unwrap();
    let circuit = ScissorsCircuit::new(0.5).unwrap();
    let usual = circuit.run(&rho).unwrap();
    let other = circuit
        .with_herald(HeraldOutcome {
            mode_b_count: 0,
            mode_c_count: 1,
        })
        .run(&rho)
        .unwrap();
    assert!((usual.p_d - other.p_d).abs() < 1e-15);
    let (x, y) = (usual.rho_out.data()[(0, 1)], other.rho_out.data()[(0, 1)]);
    assert!((x + y).norm() < 1e-14);
    assert!(x.norm() > 0.1);
}

#[test]
fn three_level_output_stays_in_qubit_span() {
    let thermal = make_thermal(&ThermalSpec::new(1.2, 1e-12).unwrap());
    let res = ScissorsCircuit::new(0.7)
        .unwrap()
        .with_ancilla_dim(3)
        .unwrap()
        .run(&thermal.rho)
        .unwrap();
    assert_eq!(res.rho_out.dim(), 3);
    assert!(res.population_above_one() <= 1e-12);
}

#[test]
fn output_wigner_matches_closed_form() {
    let grid = observables::WignerGridSpec::square(2.0, 41);
    for (nbar, t) in [(0.5, 0.4), (0.5, 0.9), (1.2, 0.3)] {
        let res = run_qsd(&QsdParams::with_default_tail(nbar, t).unwrap()).unwrap();
        let w = observables::wigner(&res.rho_out, &grid).unwrap();
        for (i, &q) in w.q_axis.iter().enumerate() {
            for (j, &p) in w.p_axis.iter().enumerate() {
                let b2 = observables::beta_of(q, p).norm_sqr();
                let cf = closed_form::wigner_out(nbar, t, b2).unwrap();
                assert!((w.values[(i, j)] - cf).abs() < 1e-12);
            }
        }
    }
}
