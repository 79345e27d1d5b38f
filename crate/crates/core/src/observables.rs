//! Photon statistics, parity and Wigner functions of density matrices.
//!
//! Phase-space points are β = (q + ip)/√2, so that the vacuum has
//! W = (2/π) e^{−2|β|²} and ∫ W d²β = 1 (equivalently ∫∫ W dq dp = 2).

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, C64, TAU_HERM};

/// Variances at or below this make the SNR infinite.
pub const ZERO_VARIANCE: f64 = 1e-14;

/// Total photon number of each flat basis index.
fn photon_numbers(rho: &DensityMatrix) -> impl Iterator<Item = f64> + '_ {
    let space = rho.space();
    (0..rho.dim()).map(move |i| space.counts_of(i).iter().sum::<usize>() as f64)
}

/// Tr(ρ n̂), with n̂ the total photon number over all modes.
pub fn mean_photon(rho: &DensityMatrix) -> f64 {
    photon_numbers(rho)
        .zip(rho.populations())
        .map(|(n, p)| n * p)
        .sum()
}

/// Tr(ρ n̂²).
pub fn second_moment(rho: &DensityMatrix) -> f64 {
    photon_numbers(rho)
        .zip(rho.populations())
        .map(|(n, p)| n * n * p)
        .sum()
}

pub fn photon_variance(rho: &DensityMatrix) -> f64 {
    let m = mean_photon(rho);
    second_moment(rho) - m * m
}

/// Ratio of output to input mean photon number.
pub fn intensity_gain(mean_out: f64, mean_in: f64) -> Result<f64> {
    if mean_in <= 0.0 {
        return Err(Error::UndefinedGain);
    }
    Ok(mean_out / mean_in)
}

/// ⟨n̂⟩/√Var(n̂). A Fock state with n > 0 gives `f64::INFINITY`; the vacuum
/// gives 0, the limit of the thermal and scissors SNR as the mean vanishes.
pub fn snr(rho: &DensityMatrix) -> f64 {
    let var = photon_variance(rho);
    let mean = mean_photon(rho);
    if var <= ZERO_VARIANCE {
        return if mean <= ZERO_VARIANCE {
            0.0
        } else {
            f64::INFINITY
        };
    }
    mean / var.sqrt()
}

/// ⟨(−1)^n̂⟩.
pub fn parity(rho: &DensityMatrix) -> f64 {
    photon_numbers(rho)
        .zip(rho.populations())
        .map(|(n, p)| if (n as u64).is_multiple_of(2) { p } else { -p })
        .sum()
}

/// Radius |β| inside which the output Wigner function of the thermal
/// scissors is negative. `None` below the threshold T = (n̄+1)/(1+2n̄),
/// `Some(0.0)` on it.
pub fn negativity_region_radius(nbar: f64, t: f64) -> Option<f64> {
    if nbar <= 0.0 || t <= 0.0 {
        return None;
    }
    let bracket = (2.0 * t * nbar - (nbar + 1.0 - t)) / (4.0 * nbar * t);
    if bracket.abs() <= 1e-14 {
        Some(0.0)
    } else if bracket < 0.0 {
        None
    } else {
        Some(bracket.sqrt())
    }
}

/// L₀ … L_{n_max} at x by the three-term recurrence.
pub fn laguerre_all(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    if n_max == 0 {
        return out;
    }
    out.push(1.0 - x);
    for n in 1..n_max {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0 - x) * out[n] - nf * out[n - 1]) / (nf + 1.0);
        out.push(next);
    }
    out
}

fn require_single_mode(rho: &DensityMatrix) -> Result<()> {
    if rho.space().num_modes() != 1 {
        return Err(Error::Dimension(format!(
            "Wigner function needs a single-mode state, got {} modes",
            rho.space().num_modes()
        )));
    }
    Ok(())
}

/// Wigner function from the diagonal only:
/// W(β) = (2/π) e^{−2|β|²} Σₙ ρₙₙ (−1)ⁿ Lₙ(4|β|²).
pub fn wigner_laguerre(rho: &DensityMatrix, beta: C64) -> Result<f64> {
    require_single_mode(rho)?;
    Ok(laguerre_sum(&rho.populations(), beta.norm_sqr()))
}

fn laguerre_sum(pops: &[f64], beta_sq: f64) -> f64 {
    let lag = laguerre_all(pops.len().saturating_sub(1), 4.0 * beta_sq);
    let series: f64 = pops
        .iter()
        .zip(&lag)
        .enumerate()
        .map(|(n, (p, l))| if n % 2 == 0 { p * l } else { -p * l })
        .sum();
    2.0 / PI * (-2.0 * beta_sq).exp() * series
}

/// Extra working levels beyond the state's own, before adaptive growth.
pub const DISPLACEMENT_MARGIN: usize = 20;
/// Largest norm a displaced basis state may lose to the working cutoff.
pub const DISPLACEMENT_NORM_TOL: f64 = 1e-13;

/// Columns D(γ)|n⟩, n < `columns`, on `levels` Fock levels.
///
/// Starts from the coherent state D(γ)|0⟩ and uses
/// D(γ)|n⟩ = (a† − γ*) D(γ)|n−1⟩ / √n. Every retained entry is exact since
/// a† only moves amplitude upward; the cutoff only drops tail mass.
fn displaced_basis(gamma: C64, columns: usize, levels: usize) -> Vec<Vec<C64>> {
    let mut coherent = Vec::with_capacity(levels);
    let mut c = C64::new((-0.5 * gamma.norm_sqr()).exp(), 0.0);
    for k in 0..levels {
        if k > 0 {
            c = c * gamma / (k as f64).sqrt();
        }
        coherent.push(c);
    }
    let mut out = Vec::with_capacity(columns);
    out.push(coherent);
    let gc = gamma.conj();
    for n in 1..columns {
        let prev = &out[n - 1];
        let inv = 1.0 / (n as f64).sqrt();
        let next: Vec<C64> = (0..levels)
            .map(|k| {
                let raised = if k > 0 {
                    prev[k - 1] * (k as f64).sqrt()
                } else {
                    C64::new(0.0, 0.0)
                };
                (raised - gc * prev[k]) * inv
            })
            .collect();
        out.push(next);
    }
    out
}

/// Wigner function via the displaced parity, (2/π) Tr[ρ D(β) Π D(β)†].
///
/// Works for states with coherences. D(−β)|n⟩ is generated on a working
/// cutoff of the state dimension plus [`DISPLACEMENT_MARGIN`], grown until
/// every column keeps its norm to [`DISPLACEMENT_NORM_TOL`].
pub fn wigner_displaced_parity(rho: &DensityMatrix, beta: C64) -> Result<f64> {
    require_single_mode(rho)?;
    let d = rho.dim();
    let mut levels = d + DISPLACEMENT_MARGIN;
    let cols = loop {
        let cols = displaced_basis(-beta, d, levels);
        let worst = cols
            .iter()
            .map(|v| 1.0 - v.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .fold(0.0, f64::max);
        if worst <= DISPLACEMENT_NORM_TOL {
            break cols;
        }
        levels += DISPLACEMENT_MARGIN;
    };

    let data = rho.data();
    let mut acc = C64::new(0.0, 0.0);
    for n in 0..d {
        for m in 0..d {
            let r = data[(m, n)];
            if r == C64::new(0.0, 0.0) {
                continue;
            }
            let overlap: C64 = cols[n]
                .iter()
                .zip(&cols[m])
                .enumerate()
                .map(|(k, (vn, vm))| {
                    let z = vn.conj() * vm;
                    if k % 2 == 0 {
                        z
                    } else {
                        -z
                    }
                })
                .sum();
            acc += r * overlap;
        }
    }
    Ok(2.0 / PI * acc.re)
}

/// Picks the Laguerre route for diagonal states and the displaced-parity
/// route otherwise.
pub fn wigner_at(rho: &DensityMatrix, beta: C64) -> Result<f64> {
    if rho.max_off_diagonal() <= TAU_HERM {
        wigner_laguerre(rho, beta)
    } else {
        wigner_displaced_parity(rho, beta)
    }
}

pub const DEFAULT_MAX_GRID_POINTS: usize = 4_000_000;

/// Uniform (q, p) grid, both ends included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerGridSpec {
    pub q_min: f64,
    pub q_max: f64,
    pub q_points: usize,
    pub p_min: f64,
    pub p_max: f64,
    pub p_points: usize,
    pub max_points: usize,
}

impl Default for WignerGridSpec {
    fn default() -> Self {
        Self {
            q_min: -3.0,
            q_max: 3.0,
            q_points: 121,
            p_min: -3.0,
            p_max: 3.0,
            p_points: 121,
            max_points: DEFAULT_MAX_GRID_POINTS,
        }
    }
}

impl WignerGridSpec {
    pub fn square(half_width: f64, points: usize) -> Self {
        Self {
            q_min: -half_width,
            q_max: half_width,
            q_points: points,
            p_min: -half_width,
            p_max: half_width,
            p_points: points,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, lo, hi, n) in [
            ("q", self.q_min, self.q_max, self.q_points),
            ("p", self.p_min, self.p_max, self.p_points),
        ] {
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return Err(Error::InvalidParameter(format!(
                    "{name} axis needs min < max, got {lo}..{hi}"
                )));
            }
            if n < 2 {
                return Err(Error::InvalidParameter(format!(
                    "{name} axis needs at least 2 points, got {n}"
                )));
            }
        }
        let points = self.q_points.saturating_mul(self.p_points);
        if points > self.max_points {
            return Err(Error::GridTooLarge {
                points,
                cap: self.max_points,
            });
        }
        Ok(())
    }

    pub fn q_axis(&self) -> Vec<f64> {
        axis(self.q_min, self.q_max, self.q_points)
    }

    pub fn p_axis(&self) -> Vec<f64> {
        axis(self.p_min, self.p_max, self.p_points)
    }
}

fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + step * i as f64).collect()
}

/// Sampled Wigner function; `values[(i, j)]` is W at (q_axis[i], p_axis[j]).
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub q_axis: Vec<f64>,
    pub p_axis: Vec<f64>,
    pub values: DMatrix<f64>,
}

impl WignerGrid {
    /// Smallest value and its (q, p).
    pub fn min(&self) -> (f64, f64, f64) {
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for (i, &q) in self.q_axis.iter().enumerate() {
            for (j, &p) in self.p_axis.iter().enumerate() {
                let w = self.values[(i, j)];
                if w < best.0 {
                    best = (w, q, p);
                }
            }
        }
        best
    }

    pub fn max(&self) -> f64 {
        self.values.max()
    }

    /// ∫ W d²β by the 2-D trapezoid rule (d²β = dq dp / 2).
    pub fn integral(&self) -> f64 {
        let weights = |axis: &[f64]| -> Vec<f64> {
            let h = axis[1] - axis[0];
            let n = axis.len();
            (0..n)
                .map(|i| if i == 0 || i == n - 1 { h / 2.0 } else { h })
                .collect()
        };
        let (wq, wp) = (weights(&self.q_axis), weights(&self.p_axis));
        let mut acc = 0.0;
        for (i, a) in wq.iter().enumerate() {
            for (j, b) in wp.iter().enumerate() {
                acc += a * b * self.values[(i, j)];
            }
        }
        acc / 2.0
    }
}

pub fn beta_of(q: f64, p: f64) -> C64 {
    C64::new(q, p) * FRAC_1_SQRT_2
}

/// Evaluates the Wigner function of a single-mode state on `grid`.
pub fn wigner(rho: &DensityMatrix, grid: &WignerGridSpec) -> Result<WignerGrid> {
    require_single_mode(rho)?;
    grid.validate()?;
    let q_axis = grid.q_axis();
    let p_axis = grid.p_axis();
    let diagonal = rho.max_off_diagonal() <= TAU_HERM;
    let pops = rho.populations();

    let rows: Vec<Vec<f64>> = q_axis
        .par_iter()
        .map(|&q| {
            p_axis
                .iter()
                .map(|&p| {
                    let beta = beta_of(q, p);
                    if diagonal {
                        Ok(laguerre_sum(&pops, beta.norm_sqr()))
                    } else {
                        wigner_displaced_parity(rho, beta)
                    }
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;

    let values = DMatrix::from_fn(q_axis.len(), p_axis.len(), |i, j| rows[i][j]);
    Ok(WignerGrid {
        q_axis,
        p_axis,
        values,
    })
}
