//! Input states: truncated thermal light and Fock ancillas.

use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, FockSpace};

pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// A thermal state request: mean photon number plus the largest photon-number
/// probability mass that truncation is allowed to drop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalSpec {
    nbar: f64,
    tail_tol: f64,
}

impl ThermalSpec {
    pub fn new(nbar: f64, tail_tol: f64) -> Result<Self> {
        if !(nbar.is_finite() && nbar >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "nbar must be >= 0, got {nbar}"
            )));
        }
        if !(tail_tol > 0.0 && tail_tol < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "tail tolerance must lie in (0, 1), got {tail_tol}"
            )));
        }
        Ok(Self { nbar, tail_tol })
    }

    pub fn with_default_tail(nbar: f64) -> Result<Self> {
        Self::new(nbar, DEFAULT_TAIL_TOL)
    }

    pub fn nbar(&self) -> f64 {
        self.nbar
    }

    pub fn tail_tol(&self) -> f64 {
        self.tail_tol
    }

    /// Ratio of consecutive photon-number probabilities, n̄/(n̄+1).
    fn ratio(&self) -> f64 {
        self.nbar / (self.nbar + 1.0)
    }

    /// Probability of exactly `n` photons: n̄ⁿ/(n̄+1)ⁿ⁺¹.
    pub fn probability(&self, n: usize) -> f64 {
        self.ratio().powi(n as i32) / (self.nbar + 1.0)
    }

    /// Mass of all photon numbers ≥ `dim`, (n̄/(n̄+1))^dim.
    pub fn tail_mass(&self, dim: usize) -> f64 {
        if self.nbar == 0.0 {
            return 0.0;
        }
        self.ratio().powi(dim as i32)
    }
}

/// Smallest dimension whose dropped tail is within `spec.tail_tol`, never
/// below 2 so that |1⟩ is always representable.
pub fn thermal_cutoff(spec: &ThermalSpec) -> usize {
    if spec.nbar == 0.0 {
        return 2;
    }
    let q = spec.ratio();
    let estimate = (spec.tail_tol.ln() / q.ln()).ceil().max(2.0) as usize;
    // walk off any rounding in the log estimate
    let mut d = estimate.saturating_sub(2).max(2);
    while spec.tail_mass(d) > spec.tail_tol {
        d += 1;
    }
    d
}

/// A thermal density matrix truncated at `cutoff` levels, not renormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedThermal {
    pub rho: DensityMatrix,
    pub cutoff: usize,
    /// Probability mass dropped by truncation; equals 1 − trace.
    pub tail: f64,
}

pub fn make_thermal(spec: &ThermalSpec) -> TruncatedThermal {
    let cutoff = thermal_cutoff(spec);
    let pops: Vec<f64> = (0..cutoff).map(|n| spec.probability(n)).collect();
    let rho = DensityMatrix::diagonal(FockSpace::single(cutoff).expect("cutoff >= 2"), &pops)
        .expect("geometric populations form a valid state");
    TruncatedThermal {
        rho,
        cutoff,
        tail: spec.tail_mass(cutoff),
    }
}

/// Single-mode Fock projector |n⟩⟨n| on `dim` levels.
pub fn fock(dim: usize, n: usize) -> Result<DensityMatrix> {
    DensityMatrix::fock_state(FockSpace::single(dim)?, &[n])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalMoments {
    pub mean: f64,
    pub second_moment: f64,
    pub snr: f64,
}

/// Untruncated thermal moments: ⟨n̂⟩ = n̄, ⟨n̂²⟩ = n̄ + 2n̄², SNR = n̄/√(n̄+n̄²).
/// The SNR is taken as 0 at n̄ = 0.
pub fn thermal_moments(nbar: f64) -> ThermalMoments {
    let snr = if nbar == 0.0 {
        0.0
    } else {
        nbar / (nbar + nbar * nbar).sqrt()
    };
    ThermalMoments {
        mean: nbar,
        second_moment: nbar + 2.0 * nbar * nbar,
        snr,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_examples() {
        for tol in [1e-3, 1e-12, 0.5] {
            assert_eq!(thermal_cutoff(&ThermalSpec::new(0.0, tol).unwrap()), 2);
        }
        assert_eq!(thermal_cutoff(&ThermalSpec::new(1.0, 1e-12).unwrap()), 40);
        assert_eq!(thermal_cutoff(&ThermalSpec::new(0.5, 1e-12).unwrap()), 26);
    }

    #[test]
    fn cutoff_is_smallest() {
        for &nbar in &[0.01, 0.2, 0.5, 1.0, 1.2, 3.0, 10.0] {
            for &tol in &[1e-3, 1e-6, 1e-12, 1e-15] {
                let spec = ThermalSpec::new(nbar, tol).unwrap();
                let d = thermal_cutoff(&spec);
                assert!(spec.tail_mass(d) <= tol);
                if d > 2 {
                    assert!(spec.tail_mass(d - 1) > tol, "nbar {nbar} tol {tol}");
                }
            }
        }
    }

    #[test]
    fn spec_validation() {
        assert!(ThermalSpec::new(-0.1, 1e-12).is_err());
        assert!(ThermalSpec::new(f64::NAN, 1e-12).is_err());
        assert!(ThermalSpec::new(1.0, 0.0).is_err());
        assert!(ThermalSpec::new(1.0, 1.0).is_err());
    }

    #[test]
    fn thermal_populations() {
        let vac = make_thermal(&ThermalSpec::with_default_tail(0.0).unwrap());
        assert_eq!(vac.rho.populations(), vec![1.0, 0.0]);
        assert_eq!(vac.rho.trace(), 1.0);

        let one = make_thermal(&ThermalSpec::with_default_tail(1.0).unwrap());
        let p = one.rho.populations();
        assert_eq!(&p[..3], &[0.5, 0.25, 0.125]);

        let half = make_thermal(&ThermalSpec::with_default_tail(0.5).unwrap());
        let p = half.rho.populations();
        assert!((p[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((p[1] - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn thermal_trace_and_tail() {
        for &nbar in &[0.2, 0.5, 1.0, 1.2] {
            let th = make_thermal(&ThermalSpec::with_default_tail(nbar).unwrap());
            let q: f64 = nbar / (nbar + 1.0);
            let closed = 1.0 - q.powi(th.cutoff as i32);
            assert!((th.rho.trace() - closed).abs() < 1e-14);
            assert!((th.rho.trace() + th.tail - 1.0).abs() < 1e-14);
            let p = th.rho.populations();
            assert!(p.windows(2).all(|w| w[1] < w[0]));
        }
    }

    #[test]
    fn moments_examples() {
        let m = thermal_moments(1.0);
        assert_eq!((m.mean, m.second_moment), (1.0, 3.0));
        assert!((m.snr - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);

        assert_eq!(
            thermal_moments(0.0),
            ThermalMoments {
                mean: 0.0,
                second_moment: 0.0,
                snr: 0.0
            }
        );

        let m = thermal_moments(0.5);
        assert_eq!((m.mean, m.second_moment), (0.5, 1.0));
        assert!((m.snr - 0.5 / 0.75_f64.sqrt()).abs() < 1e-15);
        assert!((m.snr - 0.5774).abs() < 1e-4);
    }
}
