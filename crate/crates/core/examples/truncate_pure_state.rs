//! The scissors keep only the vacuum and one-photon amplitudes of any input.

use qscissors::fock::{DensityMatrix, FockSpace, C64};
use qscissors::run_qsd_generic;

fn main() -> qscissors::Result<()> {
    // a coherent state with alpha = 0.6, cut at 12 levels
    let alpha: f64 = 0.6;
    let mut amps = vec![C64::new((-alpha * alpha / 2.0).exp(), 0.0)];
    for n in 1..12 {
        let prev = amps[n - 1];
        amps.push(prev * alpha / (n as f64).sqrt());
    }
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let amps: Vec<C64> = amps.iter().map(|z| z / norm).collect();
    let rho = DensityMatrix::pure(FockSpace::single(amps.len())?, &amps)?;

    let res = run_qsd_generic(&rho, 0.5)?;
    println!("p_d = {:.6}", res.p_d);
    println!("output{:.6}", res.rho_out.data());
    Ok(())
}
