//! Figures of merit per (n̄, T) point, from both the simulation and the
//! closed forms, plus deterministic CSV/JSON encodings.

use std::io::Write;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::closed_form;
use crate::error::{Error, Result};
use crate::observables::{self, negativity_region_radius};
use crate::scissors::{run_qsd, QsdParams};

/// The scalar figures of merit of one output state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merit {
    pub p_d: f64,
    pub p0: f64,
    pub p1: f64,
    pub mean: f64,
    /// `None` when the input carries no photons.
    pub gain: Option<f64>,
    /// `f64::INFINITY` for a zero-variance output.
    pub snr: f64,
    pub parity: f64,
    /// `None` when the Wigner function has no negative region.
    pub negativity_radius: Option<f64>,
}

/// Radius of the negative Wigner region of p₀|0⟩⟨0| + p₁|1⟩⟨1|.
fn radius_from_populations(p0: f64, p1: f64) -> Option<f64> {
    if p1 <= 0.0 {
        return None;
    }
    let bound = (p1 - p0) / (4.0 * p1);
    if bound.abs() <= 1e-14 {
        Some(0.0)
    } else if bound < 0.0 {
        None
    } else {
        Some(bound.sqrt())
    }
}

/// (name, numeric, closed form, |difference|).
pub type Column = (&'static str, Option<f64>, Option<f64>, Option<f64>);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeritReport {
    pub nbar: f64,
    pub transmissivity: f64,
    pub numeric: Merit,
    pub closed: Merit,
}

fn diff(a: f64, b: f64) -> f64 {
    if a.is_infinite() && b.is_infinite() && a.signum() == b.signum() {
        0.0
    } else {
        (a - b).abs()
    }
}

fn opt_diff(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(diff(x, y)),
        (None, None) => None,
        _ => Some(f64::INFINITY),
    }
}

impl MeritReport {
    pub fn compute(params: &QsdParams) -> Result<Self> {
        let (nbar, t) = (params.nbar, params.transmissivity);
        let res = run_qsd(params)?;
        let mean = observables::mean_photon(&res.rho_out);
        let numeric = Merit {
            p_d: res.p_d,
            p0: res.p0,
            p1: res.p1,
            mean,
            // relative to the nominal input mean n̄
            gain: observables::intensity_gain(mean, nbar).ok(),
            snr: observables::snr(&res.rho_out),
            parity: observables::parity(&res.rho_out),
            negativity_radius: radius_from_populations(res.p0, res.p1),
        };

        let (p0, p1) = closed_form::populations(nbar, t)?;
        let closed = Merit {
            p_d: closed_form::success_probability(nbar, t)?,
            p0,
            p1,
            mean: closed_form::mean_photon(nbar, t)?,
            gain: closed_form::gain(nbar, t).ok(),
            snr: match closed_form::snr(nbar, t) {
                Ok(s) => s,
                Err(Error::Domain(_)) => f64::INFINITY,
                Err(e) => return Err(e),
            },
            parity: closed_form::parity(nbar, t)?,
            negativity_radius: negativity_region_radius(nbar, t),
        };
        Ok(Self {
            nbar,
            transmissivity: t,
            numeric,
            closed,
        })
    }

    pub fn columns(&self) -> Vec<Column> {
        let (n, c) = (&self.numeric, &self.closed);
        let plain = |a: f64, b: f64| (Some(a), Some(b), Some(diff(a, b)));
        let rows = [
            ("pd", plain(n.p_d, c.p_d)),
            ("p0", plain(n.p0, c.p0)),
            ("p1", plain(n.p1, c.p1)),
            ("mean", plain(n.mean, c.mean)),
            ("gain", (n.gain, c.gain, opt_diff(n.gain, c.gain))),
            ("snr", plain(n.snr, c.snr)),
            ("parity", plain(n.parity, c.parity)),
            (
                "neg_radius",
                (
                    n.negativity_radius,
                    c.negativity_radius,
                    opt_diff(n.negativity_radius, c.negativity_radius),
                ),
            ),
        ];
        rows.into_iter()
            .map(|(k, (a, b, d))| (k, a, b, d))
            .collect()
    }

    /// Largest numeric-vs-closed-form difference over all columns.
    pub fn max_deviation(&self) -> f64 {
        self.columns()
            .iter()
            .filter_map(|c| c.3)
            .fold(0.0, f64::max)
    }
}

/// One sweep row; points where the closed forms are 0/0 or the herald never
/// fires are kept and flagged.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepRow {
    Point(MeritReport),
    Degenerate {
        nbar: f64,
        transmissivity: f64,
        reason: String,
    },
}

impl SweepRow {
    pub fn nbar(&self) -> f64 {
        match self {
            SweepRow::Point(r) => r.nbar,
            SweepRow::Degenerate { nbar, .. } => *nbar,
        }
    }

    pub fn transmissivity(&self) -> f64 {
        match self {
            SweepRow::Point(r) => r.transmissivity,
            SweepRow::Degenerate { transmissivity, .. } => *transmissivity,
        }
    }

    pub fn report(&self) -> Option<&MeritReport> {
        match self {
            SweepRow::Point(r) => Some(r),
            SweepRow::Degenerate { .. } => None,
        }
    }
}

/// Evaluates every (n̄, T) pair, n̄ outer and T inner. Points run in
/// parallel; the output order does not depend on scheduling.
pub fn sweep(nbars: &[f64], ts: &[f64], tail_tol: f64) -> Result<Vec<SweepRow>> {
    let points: Vec<(f64, f64)> = nbars
        .iter()
        .flat_map(|&n| ts.iter().map(move |&t| (n, t)))
        .collect();
    points
        .par_iter()
        .map(|&(nbar, t)| {
            let params = QsdParams::new(nbar, t, tail_tol)?;
            match MeritReport::compute(&params) {
                Ok(r) => Ok(SweepRow::Point(r)),
                Err(e @ (Error::Degenerate { .. } | Error::HeraldNeverFires { .. })) => {
                    Ok(SweepRow::Degenerate {
                        nbar,
                        transmissivity: t,
                        reason: e.to_string(),
                    })
                }
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// 17 significant digits, so that every double survives a text round trip.
pub fn format_float(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

fn opt_field(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

pub const QUANTITIES: [&str; 8] = [
    "pd",
    "p0",
    "p1",
    "mean",
    "gain",
    "snr",
    "parity",
    "neg_radius",
];

pub fn csv_header() -> Vec<String> {
    let mut h = vec!["nbar".to_string(), "T".to_string()];
    for q in QUANTITIES {
        h.push(format!("{q}_num"));
        h.push(format!("{q}_cf"));
        h.push(format!("{q}_err"));
    }
    h.push("max_err".to_string());
    h.push("degenerate".to_string());
    h
}

fn csv_record(row: &SweepRow) -> Vec<String> {
    let mut rec = vec![format_float(row.nbar()), format_float(row.transmissivity())];
    match row {
        SweepRow::Point(r) => {
            for (_, a, b, d) in r.columns() {
                rec.extend([opt_field(a), opt_field(b), opt_field(d)]);
            }
            rec.push(format_float(r.max_deviation()));
            rec.push("0".into());
        }
        SweepRow::Degenerate { .. } => {
            rec.extend(std::iter::repeat_n(String::new(), 3 * QUANTITIES.len() + 1));
            rec.push("1".into());
        }
    }
    rec
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(csv_header())?;
    for row in rows {
        w.write_record(csv_record(row))?;
    }
    w.flush()
}

fn json_number(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(format_float(x))
    }
}

fn json_opt(x: Option<f64>) -> Value {
    x.map(json_number).unwrap_or(Value::Null)
}

pub fn row_json(row: &SweepRow) -> Value {
    let mut obj = Map::new();
    obj.insert("nbar".into(), json_number(row.nbar()));
    obj.insert("T".into(), json_number(row.transmissivity()));
    match row {
        SweepRow::Point(r) => {
            for (name, a, b, d) in r.columns() {
                obj.insert(format!("{name}_num"), json_opt(a));
                obj.insert(format!("{name}_cf"), json_opt(b));
                obj.insert(format!("{name}_err"), json_opt(d));
            }
            obj.insert("max_err".into(), json_number(r.max_deviation()));
            obj.insert("degenerate".into(), json!(false));
        }
        SweepRow::Degenerate { reason, .. } => {
            obj.insert("degenerate".into(), json!(true));
            obj.insert("reason".into(), json!(reason));
        }
    }
    Value::Object(obj)
}

pub fn write_json<W: Write>(config: Value, rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    let doc = json!({
        "config": config,
        "rows": rows.iter().map(row_json).collect::<Vec<_>>(),
    });
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)
}
