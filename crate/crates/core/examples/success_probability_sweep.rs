//! Herald probability against transmissivity for several thermal means,
//! written as CSV on stdout.

use qscissors::report::{sweep, write_csv};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let nbars = [0.0, 0.2, 0.5, 1.0, 1.2];
    let ts: Vec<f64> = (0..=20).map(|k| k as f64 / 20.0).collect();
    let rows = sweep(&nbars, &ts, 1e-12)?;

    for nbar in nbars {
        let line: Vec<String> = rows
            .iter()
            .filter(|r| r.nbar() == nbar)
            .map(|r| {
                r.report()
                    .map_or("-".into(), |m| format!("{:.3}", m.numeric.p_d))
            })
            .collect();
        eprintln!("nbar {nbar:>3}: {}", line.join(" "));
    }
    write_csv(&rows, std::io::stdout().lock())?;
    Ok(())
}
