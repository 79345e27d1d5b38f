//! Sample the output Wigner function below and above the negativity
//! threshold and report the minimum.

use qscissors::closed_form::thresholds;
use qscissors::observables::{negativity_region_radius, wigner, WignerGridSpec};
use qscissors::{run_qsd, QsdParams};

fn main() -> qscissors::Result<()> {
    let nbar = 0.5;
    println!(
        "negative region appears above T = {:.3}",
        thresholds(nbar)?.wigner
    );
    let grid = WignerGridSpec::default();
    for t in [0.4, 0.9] {
        let out = run_qsd(&QsdParams::with_default_tail(nbar, t)?)?.rho_out;
        let w = wigner(&out, &grid)?;
        let (min, q, p) = w.min();
        println!(
            "T {t}: min W = {min:+.5} at ({q:.2}, {p:.2}), integral {:.5}, negative radius {:?}",
            w.integral(),
            negativity_region_radius(nbar, t)
        );
    }
    Ok(())
}
