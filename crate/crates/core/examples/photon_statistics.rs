//! Gain and SNR of the truncated output next to the thermal input, with the
//! thresholds where each crosses its reference.

use qscissors::closed_form::thresholds;
use qscissors::observables::{intensity_gain, mean_photon, snr};
use qscissors::states::thermal_moments;
use qscissors::{run_qsd, QsdParams};

fn main() -> qscissors::Result<()> {
    for nbar in [0.2, 0.5, 1.0, 1.2] {
        let th = thresholds(nbar)?;
        let input = thermal_moments(nbar);
        println!(
            "nbar {nbar}: gain > 1 above T = {:.3}{}, SNR > 1 above T = {:.3}, input SNR {:.3}",
            th.gain,
            if th.amplification_possible() {
                ""
            } else {
                " (unreachable)"
            },
            th.snr,
            input.snr
        );
        for t in [0.3, 0.6, 0.9] {
            let out = run_qsd(&QsdParams::with_default_tail(nbar, t)?)?.rho_out;
            let mean = mean_photon(&out);
            println!(
                "  T {t}: <n> = {mean:.4}, gain = {:.4}, SNR = {:.4}",
                intensity_gain(mean, nbar)?,
                snr(&out)
            );
        }
    }
    Ok(())
}
