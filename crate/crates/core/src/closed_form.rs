//! Closed-form figures of merit for a thermal input of mean photon number n̄
//! truncated by the scissors with asymmetric-splitter transmissivity T.
//!
//! These are evaluated directly from the known expressions and serve as the
//! reference that the matrix simulation is checked against.

use std::f64::consts::PI;

use crate::error::{Error, Result};

fn check(nbar: f64, t: f64) -> Result<()> {
    if !(nbar.is_finite() && nbar >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "nbar must be >= 0, got {nbar}"
        )));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!(
            "T must lie in [0, 1], got {t}"
        )));
    }
    Ok(())
}

fn check_nondegenerate(nbar: f64, t: f64) -> Result<()> {
    check(nbar, t)?;
    if nbar == 0.0 && t == 1.0 {
        return Err(Error::Degenerate {
            nbar,
            transmissivity: t,
        });
    }
    Ok(())
}

/// Output populations (p₀, p₁) = ((1−T)(n̄+1), n̄T) / (n̄+1−T).
pub fn populations(nbar: f64, t: f64) -> Result<(f64, f64)> {
    check_nondegenerate(nbar, t)?;
    let den = nbar + (1.0 - t);
    Ok(((1.0 - t) * (nbar + 1.0) / den, nbar * t / den))
}

/// Herald probability (n̄+1−T) / (2(n̄+1)²).
pub fn success_probability(nbar: f64, t: f64) -> Result<f64> {
    check(nbar, t)?;
    Ok((nbar + (1.0 - t)) / (2.0 * (nbar + 1.0).powi(2)))
}

/// ⟨n̂⟩ of the output, n̄T/(n̄+1−T).
pub fn mean_photon(nbar: f64, t: f64) -> Result<f64> {
    check_nondegenerate(nbar, t)?;
    Ok(nbar * t / (nbar + (1.0 - t)))
}

/// Intensity gain T/(n̄+1−T); only meaningful for n̄ > 0.
pub fn gain(nbar: f64, t: f64) -> Result<f64> {
    check(nbar, t)?;
    if nbar == 0.0 {
        return Err(Error::UndefinedGain);
    }
    Ok(t / (nbar + (1.0 - t)))
}

/// Output SNR √(n̄T / ((1−T)(n̄+1))), finite only for T < 1.
pub fn snr(nbar: f64, t: f64) -> Result<f64> {
    check(nbar, t)?;
    if t == 1.0 {
        return Err(Error::Domain(
            "output SNR diverges at T = 1 (zero photon-number variance)".into(),
        ));
    }
    Ok((nbar * t / ((1.0 - t) * (nbar + 1.0))).sqrt())
}

/// ⟨(−1)^n̂⟩ of the output, (n̄+1−T−2Tn̄)/(n̄+1−T).
pub fn parity(nbar: f64, t: f64) -> Result<f64> {
    check_nondegenerate(nbar, t)?;
    let den = nbar + (1.0 - t);
    Ok((den - 2.0 * t * nbar) / den)
}

/// Critical transmissivities above which, respectively, the gain exceeds 1,
/// the output SNR exceeds 1, and the output Wigner function turns negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// (n̄+1)/2; at or above 1 amplification is unreachable.
    pub gain: f64,
    /// (n̄+1)/(2n̄+1).
    pub snr: f64,
    /// (n̄+1)/(1+2n̄).
    pub wigner: f64,
}

impl Thresholds {
    pub fn amplification_possible(&self) -> bool {
        self.gain < 1.0
    }
}

pub fn thresholds(nbar: f64) -> Result<Thresholds> {
    if !(nbar.is_finite() && nbar > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "thresholds need nbar > 0, got {nbar}"
        )));
    }
    Ok(Thresholds {
        gain: (nbar + 1.0) / 2.0,
        snr: (nbar + 1.0) / (2.0 * nbar + 1.0),
        wigner: (nbar + 1.0) / (1.0 + 2.0 * nbar),
    })
}

/// W(β) = (2/π) e^{−2|β|²} [p₀ + p₁(4|β|² − 1)], with |β|² given as `beta_sq`.
pub fn wigner_out(nbar: f64, t: f64, beta_sq: f64) -> Result<f64> {
    let (p0, p1) = populations(nbar, t)?;
    Ok(2.0 / PI * (-2.0 * beta_sq).exp() * (p0 + p1 * (4.0 * beta_sq - 1.0)))
}

/// Thermal Wigner function 2/(π(2n̄+1)) e^{−2|β|²/(2n̄+1)}.
pub fn wigner_thermal(nbar: f64, beta_sq: f64) -> f64 {
    let s = 2.0 * nbar + 1.0;
    2.0 / (PI * s) * (-2.0 * beta_sq / s).exp()
}

/// Thermal parity 1/(2n̄+1).
pub fn thermal_parity(nbar: f64) -> f64 {
    1.0 / (2.0 * nbar + 1.0)
}

/// |β|² bound of the negative Wigner region, [2Tn̄ − (n̄+1−T)]/(4n̄T);
/// negative or zero means there is no such region.
pub fn negativity_bound(nbar: f64, t: f64) -> Result<f64> {
    check(nbar, t)?;
    if nbar == 0.0 || t == 0.0 {
        return Err(Error::Domain(
            "negativity bound needs nbar > 0 and T > 0".into(),
        ));
    }
    Ok((2.0 * t * nbar - (nbar + (1.0 - t))) / (4.0 * nbar * t))
}

#[cfg(test)]
mod tests {
    use super::*;

    const NBARS: [f64; 5] = [0.0, 0.2, 0.5, 1.0, 1.2];

    fn grid() -> impl Iterator<Item = (f64, f64)> {
        NBARS.into_iter().flat_map(|n| {
            (0..=10)
                .map(move |k| (n, k as f64 / 10.0))
                .filter(|&(n, t)| !(n == 0.0 && t == 1.0))
        })
    }

    #[test]
    fn populations_examples() {
        assert_eq!(populations(0.0, 0.4).unwrap(), (1.0, 0.0));
        assert_eq!(populations(0.7, 1.0).unwrap(), (0.0, 1.0));
        let (p0, p1) = populations(0.5, 0.9).unwrap();
        assert!((p0 - 0.25).abs() < 1e-15 && (p1 - 0.75).abs() < 1e-15);
        assert!(matches!(
            populations(0.0, 1.0),
            Err(Error::Degenerate { .. })
        ));
    }

    #[test]
    fn populations_sum_to_one() {
        for (n, t) in grid() {
            let (p0, p1) = populations(n, t).unwrap();
            assert!((p0 + p1 - 1.0).abs() <= 1e-15);
        }
    }

    #[test]
    fn success_probability_lines() {
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            assert!((success_probability(1.0, t).unwrap() - (0.25 - 0.125 * t)).abs() < 1e-15);
            assert!((success_probability(0.0, t).unwrap() - (0.5 - 0.5 * t)).abs() < 1e-15);
        }
        assert!((success_probability(0.5, 0.9).unwrap() - 0.6 / 4.5).abs() < 1e-15);
        for (n, t) in grid() {
            let p = success_probability(n, t).unwrap();
            assert!(p > 0.0 && p <= 0.5);
        }
    }

    #[test]
    fn mean_gain_parity_examples() {
        assert_eq!(mean_photon(0.8, 1.0).unwrap(), 1.0);
        assert!((gain(0.5, 0.75).unwrap() - 1.0).abs() < 1e-15);
        assert!((gain(0.5, 0.9).unwrap() - 1.5).abs() < 1e-15);
        assert!(matches!(gain(0.0, 0.5), Err(Error::UndefinedGain)));
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            let expected = (2.0 - 3.0 * t) / (2.0 - t);
            assert!((parity(1.0, t).unwrap() - expected).abs() < 1e-15);
        }
        assert!(parity(1.0, 2.0 / 3.0).unwrap().abs() < 1e-15);
        assert!((parity(0.5, 0.9).unwrap() + 0.5).abs() < 1e-15);
        for (n, t) in grid() {
            let m = mean_photon(n, t).unwrap();
            assert!((0.0..=1.0).contains(&m));
        }
    }

    #[test]
    fn snr_identity_and_domain() {
        assert!((snr(0.5, 0.9).unwrap() - 3.0_f64.sqrt()).abs() < 1e-14);
        assert!(snr(0.5, 1.0).is_err());
        for (n, t) in grid().filter(|&(_, t)| t < 1.0) {
            let s = snr(n, t).unwrap();
            assert!((s * s * (1.0 - t) * (n + 1.0) - n * t).abs() <= 1e-14);
        }
    }

    #[test]
    fn thresholds_examples() {
        let th = thresholds(1.0).unwrap();
        assert_eq!(th.gain, 1.0);
        assert!((th.snr - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(th.snr, th.wigner);
        assert!(!th.amplification_possible());

        let th = thresholds(0.5).unwrap();
        assert_eq!((th.gain, th.snr, th.wigner), (0.75, 0.75, 0.75));

        let th = thresholds(1.2).unwrap();
        assert!((th.gain - 1.1).abs() < 1e-15);
        assert!(!th.amplification_possible());
        assert!(thresholds(0.0).is_err());
    }

    #[test]
    fn wigner_examples() {
        for (n, t) in grid() {
            let w0 = wigner_out(n, t, 0.0).unwrap();
            assert!((w0 - 2.0 / PI * parity(n, t).unwrap()).abs() < 1e-15);
        }
        assert!((wigner_out(0.5, 0.9, 0.0).unwrap() + 1.0 / PI).abs() < 1e-15);
        for k in 0..200 {
            let b2 = k as f64 * 0.05;
            assert!(wigner_out(0.5, 0.4, b2).unwrap() >= 0.0);
        }
        assert!((wigner_thermal(0.5, 0.0) - 1.0 / PI).abs() < 1e-15);
        assert!((thermal_parity(1.0) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn negativity_bound_examples() {
        assert!(negativity_bound(0.5, 0.4).unwrap() < 0.0);
        assert!((negativity_bound(0.5, 0.9).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        let th = thresholds(0.7).unwrap().wigner;
        assert!(negativity_bound(0.7, th).unwrap().abs() < 1e-15);
    }
}
