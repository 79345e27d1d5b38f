//! Multi-mode bookkeeping: tensor products, projections and partial traces.

use qscissors::fock::{DensityMatrix, FockSpace, ModeOperator};
use qscissors::states::{fock, make_thermal, ThermalSpec};

fn main() -> qscissors::Result<()> {
    let thermal = make_thermal(&ThermalSpec::new(0.8, 1e-8)?);
    println!(
        "thermal cutoff {} levels, dropped mass {:.1e}",
        thermal.cutoff, thermal.tail
    );

    let joint = thermal.rho.tensor(&fock(2, 1)?);
    let n_total = ModeOperator::number(joint.space(), 0)?.matrix()
        + ModeOperator::number(joint.space(), 1)?.matrix();
    println!("<n_a + n_b> = {:.6}", joint.expectation(&n_total)?.re);

    let back = joint.partial_trace(1)?;
    println!(
        "trace over b restores the thermal state: {}",
        back == thermal.rho
    );

    let vac = DensityMatrix::fock_state(FockSpace::new(vec![2, 3])?, &[0, 2])?;
    let projected = vac.partial_project(1, 2)?;
    println!(
        "projecting |0,2> on n_b = 2 leaves trace {}",
        projected.trace()
    );
    Ok(())
}
