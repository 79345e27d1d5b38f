//! Truncate a thermal state and compare with the closed forms.
//!
//! cargo run --example truncate_thermal -- 0.5 0.9

use qscissors::{closed_form, run_qsd, QsdParams};

fn main() -> qscissors::Result<()> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let nbar = args.first().copied().unwrap_or(0.5);
    let t = args.get(1).copied().unwrap_or(0.9);

    let res = run_qsd(&QsdParams::with_default_tail(nbar, t)?)?;
    let (p0, p1) = closed_form::populations(nbar, t)?;
    println!("nbar = {nbar}, T = {t}");
    println!(
        "p_d  {:.15}  (closed form {:.15})",
        res.p_d,
        closed_form::success_probability(nbar, t)?
    );
    println!("p0   {:.15}  (closed form {p0:.15})", res.p0);
    println!("p1   {:.15}  (closed form {p1:.15})", res.p1);
    println!(
        "largest off-diagonal {:.1e}",
        res.rho_out.max_off_diagonal()
    );
    Ok(())
}
