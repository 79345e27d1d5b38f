//! A beam splitter acts block-diagonally in total photon number. Print the
//! blocks for a few photons and check the matrix on a small space.

use qscissors::beam_splitter::{bs_unitary, heisenberg_check, sector_block, BeamSplitterSpec};
use qscissors::fock::{CMatrix, FockSpace};

fn main() -> qscissors::Result<()> {
    let spec = BeamSplitterSpec::from_transmissivity(0, 1, 0.3)?;
    for total in 0..=3 {
        let s = sector_block(spec.theta(), total, 4, 4);
        println!("N = {total}{:.4}", s.block);
    }

    let space = FockSpace::new(vec![5, 5])?;
    let u = bs_unitary(&space, &spec)?;
    let n = space.total_dim();
    let err = (u.adjoint() * &u - CMatrix::identity(n, n))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    println!("unitarity error {err:.1e}");
    println!(
        "mode relation error {:.1e}",
        heisenberg_check(&spec, [5, 5])
    );
    Ok(())
}
