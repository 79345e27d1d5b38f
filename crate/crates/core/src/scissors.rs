//! The heralded scissors circuit on three modes a (mode 0), b (mode 1) and
//! c (mode 2):
//!
//! 1. ancillas |1⟩ in a and |0⟩ in c pass the asymmetric splitter
//!    B₁ = exp[θ(a†c − ac†)], T = cos²θ;
//! 2. the input state enters b and meets c on the balanced splitter
//!    B₂ = exp[π/4 (b†c − bc†)];
//! 3. the run is kept only when b holds one photon and c none; the
//!    unnormalized remainder on a has trace p_d.
//!
//! Two evaluation routes are provided. [`ScissorsCircuit::herald_branch`]
//! uses the fact that B₂ conserves n_b + n_c: the herald lives in a single
//! photon-number sector, so only that sector's rows of B₂ are contracted with
//! ancilla ⊗ input. [`ScissorsCircuit::herald_branch_dense`] builds every
//! operator on the full three-mode space and applies tensor, permutation,
//! conjugation and projection literally; it is cubic in the full dimension
//! and meant for cross-checks at small cutoffs.

use crate::beam_splitter::{apply_unitary, bs_unitary, sector_block, BeamSplitterSpec};
use crate::error::{Error, Result};
use crate::fock::{CMatrix, DensityMatrix, FockSpace, C64};
use crate::states::{make_thermal, ThermalSpec, DEFAULT_TAIL_TOL};

/// Success probabilities at or below this are reported as a failed herald.
pub const MIN_SUCCESS_PROBABILITY: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QsdParams {
    pub nbar: f64,
    pub transmissivity: f64,
    pub tail_tol: f64,
}

impl QsdParams {
    pub fn new(nbar: f64, transmissivity: f64, tail_tol: f64) -> Result<Self> {
        ThermalSpec::new(nbar, tail_tol)?;
        check_transmissivity(transmissivity)?;
        Ok(Self {
            nbar,
            transmissivity,
            tail_tol,
        })
    }

    pub fn with_default_tail(nbar: f64, transmissivity: f64) -> Result<Self> {
        Self::new(nbar, transmissivity, DEFAULT_TAIL_TOL)
    }

    pub fn thermal_spec(&self) -> ThermalSpec {
        ThermalSpec::new(self.nbar, self.tail_tol).expect("validated in QsdParams::new")
    }
}

fn check_transmissivity(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!(
            "transmissivity must lie in [0, 1], got {t}"
        )));
    }
    Ok(())
}

/// Photon counts that must be detected in b and c for the run to be kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeraldOutcome {
    pub mode_b_count: usize,
    pub mode_c_count: usize,
}

impl HeraldOutcome {
    /// One photon in b, none in c.
    pub const SCISSORS: HeraldOutcome = HeraldOutcome {
        mode_b_count: 1,
        mode_c_count: 0,
    };

    fn total(&self) -> usize {
        self.mode_b_count + self.mode_c_count
    }
}

impl Default for HeraldOutcome {
    fn default() -> Self {
        Self::SCISSORS
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QsdResult {
    /// Normalized output state of mode a.
    pub rho_out: DensityMatrix,
    pub p_d: f64,
    pub p0: f64,
    pub p1: f64,
    /// Bound on output error caused by probability mass missing from the
    /// input (2δ/p_d for a dropped input mass δ).
    pub truncation_bound: f64,
}

impl QsdResult {
    /// Output population above the single-photon level; zero when mode a
    /// is kept at two levels.
    pub fn population_above_one(&self) -> f64 {
        self.rho_out.populations().iter().skip(2).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScissorsCircuit {
    transmissivity: f64,
    ancilla_dim: usize,
    herald: HeraldOutcome,
}

impl ScissorsCircuit {
    pub fn new(transmissivity: f64) -> Result<Self> {
        check_transmissivity(transmissivity)?;
        Ok(Self {
            transmissivity,
            ancilla_dim: 2,
            herald: HeraldOutcome::SCISSORS,
        })
    }

    /// Dimension kept for output mode a. Two levels are enough because the
    /// a–c pair only ever carries the single ancilla photon.
    pub fn with_ancilla_dim(mut self, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Dimension(format!(
                "mode a needs at least 2 levels for the ancilla photon, got {dim}"
            )));
        }
        self.ancilla_dim = dim;
        Ok(self)
    }

    pub fn with_herald(mut self, herald: HeraldOutcome) -> Self {
        self.herald = herald;
        self
    }

    pub fn transmissivity(&self) -> f64 {
        self.transmissivity
    }

    pub fn herald(&self) -> HeraldOutcome {
        self.herald
    }

    fn asymmetric_splitter(&self) -> BeamSplitterSpec {
        BeamSplitterSpec::from_transmissivity(0, 1, self.transmissivity)
            .expect("transmissivity validated")
    }

    /// Mode c must hold everything b can pass it plus the ancilla photon.
    fn dim_c(dim_b: usize) -> usize {
        dim_b + 1
    }

    fn check_input(&self, rho_in: &DensityMatrix) -> Result<usize> {
        if rho_in.space().num_modes() != 1 {
            return Err(Error::Dimension(format!(
                "input must be single-mode, got {} modes",
                rho_in.space().num_modes()
            )));
        }
        let dim_b = rho_in.dim();
        if self.herald.mode_b_count >= dim_b {
            return Err(Error::Dimension(format!(
                "input dimension {dim_b} cannot hold the heralded count {}",
                self.herald.mode_b_count
            )));
        }
        if self.herald.mode_c_count >= Self::dim_c(dim_b) {
            return Err(Error::Dimension(format!(
                "heralded count {} in mode c exceeds the photons available",
                self.herald.mode_c_count
            )));
        }
        Ok(dim_b)
    }

    /// B₁ (|1⟩⟨1| ⊗ |0⟩⟨0|) B₁† on modes (a, c).
    pub fn ancilla(&self, dim_c: usize) -> Result<DensityMatrix> {
        let space = FockSpace::new(vec![self.ancilla_dim, dim_c])?;
        let prepared = DensityMatrix::fock_state(space.clone(), &[1, 0])?;
        apply_unitary(&prepared, &bs_unitary(&space, &self.asymmetric_splitter())?)
    }

    /// Unnormalized heralded operator on mode a; its trace is p_d.
    pub fn herald_branch(&self, rho_in: &DensityMatrix) -> Result<DensityMatrix> {
        let dim_b = self.check_input(rho_in)?;
        let dim_c = Self::dim_c(dim_b);
        let ancilla = self.ancilla(dim_c)?;
        let anc = ancilla.data();
        let input = rho_in.data();

        // ⟨h_b, h_c| B₂ |n_b, N−n_b⟩ for the herald sector N = h_b + h_c
        let total = self.herald.total();
        let sector = sector_block(std::f64::consts::FRAC_PI_4, total, dim_b, dim_c);
        let row: Vec<(usize, usize, f64)> = (sector.k_min..sector.k_min + sector.len())
            .map(|nb| {
                (
                    nb,
                    total - nb,
                    sector.amplitude(self.herald.mode_b_count, nb),
                )
            })
            .filter(|&(_, _, amp)| amp != 0.0)
            .collect();

        let da = self.ancilla_dim;
        let mut out = CMatrix::zeros(da, da);
        for x in 0..da {
            for y in 0..da {
                let mut acc = C64::new(0.0, 0.0);
                for &(nb, nc, h) in &row {
                    for &(mb, mc, g) in &row {
                        acc += anc[(x * dim_c + nc, y * dim_c + mc)] * input[(nb, mb)] * (h * g);
                    }
                }
                out[(x, y)] = acc;
            }
        }
        Ok(DensityMatrix::from_parts(FockSpace::single(da)?, out))
    }

    /// Same operator as [`ScissorsCircuit::herald_branch`], evaluated with
    /// full three-mode density matrices.
    pub fn herald_branch_dense(&self, rho_in: &DensityMatrix) -> Result<DensityMatrix> {
        let dim_b = self.check_input(rho_in)?;
        let ancilla = self.ancilla(Self::dim_c(dim_b))?;
        // ancilla is (a, c); inserting the input gives (a, c, b) → reorder to (a, b, c)
        let joint = ancilla.tensor(rho_in).permute_modes(&[0, 2, 1])?;
        let b2 = bs_unitary(joint.space(), &BeamSplitterSpec::balanced(1, 2)?)?;
        let mixed = apply_unitary(&joint, &b2)?;
        mixed
            .partial_project(2, self.herald.mode_c_count)?
            .partial_project(1, self.herald.mode_b_count)
    }

    pub fn run(&self, rho_in: &DensityMatrix) -> Result<QsdResult> {
        let branch = self.herald_branch(rho_in)?;
        finish(branch, rho_in)
    }

    pub fn run_dense(&self, rho_in: &DensityMatrix) -> Result<QsdResult> {
        let branch = self.herald_branch_dense(rho_in)?;
        finish(branch, rho_in)
    }
}

fn finish(branch: DensityMatrix, rho_in: &DensityMatrix) -> Result<QsdResult> {
    let p_d = branch.trace();
    if p_d <= MIN_SUCCESS_PROBABILITY {
        return Err(Error::HeraldNeverFires { p_d });
    }
    let rho_out = branch.scaled(1.0 / p_d);
    let pops = rho_out.populations();
    let missing = (1.0 - rho_in.trace()).max(0.0);
    Ok(QsdResult {
        p0: pops[0],
        p1: pops[1],
        p_d,
        truncation_bound: 2.0 * missing / p_d,
        rho_out,
    })
}

/// Truncation of a thermal input with the given parameters.
pub fn run_qsd(params: &QsdParams) -> Result<QsdResult> {
    let thermal = make_thermal(&params.thermal_spec());
    ScissorsCircuit::new(params.transmissivity)?.run(&thermal.rho)
}

/// Truncation of an arbitrary single-mode input.
pub fn run_qsd_generic(rho_in: &DensityMatrix, transmissivity: f64) -> Result<QsdResult> {
    ScissorsCircuit::new(transmissivity)?.run(rho_in)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::fock;

    fn max_abs(m: &CMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn vacuum_thermal_input() {
        for &t in &[0.0, 0.3, 0.8] {
            let res = run_qsd(&QsdParams::with_default_tail(0.0, t).unwrap()).unwrap();
            assert!((res.p_d - (1.0 - t) / 2.0).abs() < 1e-15);
            assert!((res.p0 - 1.0).abs() < 1e-15 && res.p1.abs() < 1e-15);
        }
    }

    #[test]
    fn unit_transmissivity_gives_single_photon() {
        let res = run_qsd(&QsdParams::with_default_tail(0.5, 1.0).unwrap()).unwrap();
        assert!(res.p0.abs() < 1e-15 && (res.p1 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reference_point() {
        let res = run_qsd(&QsdParams::with_default_tail(0.5, 0.9).unwrap()).unwrap();
        assert!((res.p0 - 0.25).abs() < 1e-12);
        assert!((res.p1 - 0.75).abs() < 1e-12);
        assert!((res.p_d - 0.6 / 4.5).abs() < 1e-12);
        assert!(res.rho_out.max_off_diagonal() <= 1e-12);
        assert!((res.rho_out.trace() - 1.0).abs() <= 1e-12);
        res.rho_out.validate().unwrap();
    }

    #[test]
    fn degenerate_corner_reports_failed_herald() {
        let err = run_qsd(&QsdParams::with_default_tail(0.0, 1.0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::HeraldNeverFires { .. }));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(QsdParams::with_default_tail(0.5, 1.1).is_err());
        assert!(QsdParams::with_default_tail(-1.0, 0.5).is_err());
        assert!(ScissorsCircuit::new(0.5)
            .unwrap()
            .with_ancilla_dim(1)
            .is_err());
        let two_mode =
            DensityMatrix::fock_state(FockSpace::new(vec![2, 2]).unwrap(), &[0, 0]).unwrap();
        assert!(run_qsd_generic(&two_mode, 0.5).is_err());
        let one_level = fock(1, 0).unwrap();
        assert!(run_qsd_generic(&one_level, 0.5).is_err());
    }

    #[test]
    fn vacuum_input_passes_vacuum() {
        for &t in &[0.0, 0.5, 0.99] {
            let res = run_qsd_generic(&fock(4, 0).unwrap(), t).unwrap();
            assert!((res.p0 - 1.0).abs() < 1e-14);
            assert!((res.p_d - (1.0 - t) / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn coherent_superposition_keeps_coherence() {
        // input (|0⟩ + |1⟩)/√2 at T = 1/2: the heralded amplitude is
        // (−r γ₀ |0⟩ + t γ₁ |1⟩)/√2, i.e. (−|0⟩ + |1⟩)/(2√2) unnormalized
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let amps = [C64::new(s, 0.0), C64::new(s, 0.0), C64::new(0.0, 0.0)];
        let rho = DensityMatrix::pure(FockSpace::single(3).unwrap(), &amps).unwrap();
        let res = run_qsd_generic(&rho, 0.5).unwrap();
        assert!((res.p_d - 0.25).abs() < 1e-14);
        let out = res.rho_out.data();
        assert!((out[(0, 1)].re + 0.5).abs() < 1e-14);
        assert!((out[(1, 0)].re + 0.5).abs() < 1e-14);
        assert!((out[(0, 0)].re - 0.5).abs() < 1e-14);
    }

    #[test]
    fn dense_route_agrees() {
        let spec = ThermalSpec::new(0.7, 1e-4).unwrap();
        let th = make_thermal(&spec);
        for &t in &[0.0, 0.35, 0.8, 1.0] {
            let circuit = ScissorsCircuit::new(t).unwrap();
            let fast = circuit.herald_branch(&th.rho).unwrap();
            let dense = circuit.herald_branch_dense(&th.rho).unwrap();
            assert!(max_abs(&(fast.data() - dense.data())) < 1e-14, "T = {t}");
        }
    }

    #[test]
    fn complementary_herald_is_supported() {
        let herald = HeraldOutcome {
            mode_b_count: 0,
            mode_c_count: 1,
        };
        let th = make_thermal(&ThermalSpec::new(0.5, 1e-5).unwrap());
        let circuit = ScissorsCircuit::new(0.6).unwrap().with_herald(herald);
        let fast = circuit.herald_branch(&th.rho).unwrap();
        let dense = circuit.herald_branch_dense(&th.rho).unwrap();
        assert!(max_abs(&(fast.data() - dense.data())) < 1e-14);
        assert!(fast.trace() > 0.0);
    }
}
