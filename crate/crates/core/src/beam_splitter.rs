//! Two-mode beam splitters on truncated Fock spaces.
//!
//! A splitter with mixing angle θ on the ordered pair (i, j) is
//! B = exp[θ(a_i† a_j − a_i a_j†)], so a single photon stays in mode i with
//! probability T = cos²θ. In the one-photon sector
//!
//! ```text
//! |1,0⟩ → t|1,0⟩ − r|0,1⟩        |0,1⟩ → r|1,0⟩ + t|0,1⟩
//! ```
//!
//! with t = cos θ, r = sin θ, which gives B a_i B† = t a_i − r a_j and
//! B a_j B† = r a_i + t a_j.
//!
//! The generator conserves n_i + n_j, so B is assembled sector by sector.
//! Sector N in basis k = n_i (n_j = N − k) has the real antisymmetric
//! tridiagonal generator G[k+1, k] = √((k+1)(N−k)) = −G[k, k+1]. With
//! S = diag(iᵏ) one gets S⁻¹ G S = −iJ for the real symmetric J carrying the
//! same off-diagonal entries, hence exp(θG) = S exp(−iθJ) S⁻¹, which only
//! needs a symmetric eigendecomposition of J. On a truncated space the sector
//! is clipped to the representable states; this is the exact exponential of
//! the truncated generator, and equals the physical splitter whenever both
//! mode dimensions exceed the largest total photon number present.

use std::f64::consts::FRAC_PI_4;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::fock::{CMatrix, DensityMatrix, FockSpace, ModeOperator, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitterSpec {
    mode_i: usize,
    mode_j: usize,
    theta: f64,
}

impl BeamSplitterSpec {
    pub fn new(mode_i: usize, mode_j: usize, theta: f64) -> Result<Self> {
        if mode_i == mode_j {
            return Err(Error::InvalidParameter(format!(
                "beam splitter needs two distinct modes, got {mode_i} twice"
            )));
        }
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidParameter(format!(
                "mixing angle {theta} outside [0, pi/2]"
            )));
        }
        Ok(Self {
            mode_i,
            mode_j,
            theta,
        })
    }

    /// θ = arccos √T.
    pub fn from_transmissivity(mode_i: usize, mode_j: usize, transmissivity: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&transmissivity) {
            return Err(Error::InvalidParameter(format!(
                "transmissivity {transmissivity} outside [0, 1]"
            )));
        }
        Self::new(mode_i, mode_j, transmissivity.sqrt().acos())
    }

    /// The 50:50 splitter, θ = π/4.
    pub fn balanced(mode_i: usize, mode_j: usize) -> Result<Self> {
        Self::new(mode_i, mode_j, FRAC_PI_4)
    }

    pub fn modes(&self) -> (usize, usize) {
        (self.mode_i, self.mode_j)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn t(&self) -> f64 {
        self.theta.cos()
    }

    pub fn r(&self) -> f64 {
        self.theta.sin()
    }

    pub fn transmissivity(&self) -> f64 {
        self.t() * self.t()
    }
}

/// The real orthogonal block of a splitter inside one photon-number sector.
#[derive(Debug, Clone, PartialEq)]
pub struct Sector {
    pub total: usize,
    /// Smallest representable photon count in mode i for this sector.
    pub k_min: usize,
    pub block: DMatrix<f64>,
}

impl Sector {
    pub fn len(&self) -> usize {
        self.block.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, k: usize) -> bool {
        k >= self.k_min && k < self.k_min + self.len()
    }

    /// ⟨k_out, N−k_out| B |k_in, N−k_in⟩, where k counts photons in mode i.
    pub fn amplitude(&self, k_out: usize, k_in: usize) -> f64 {
        if !self.contains(k_out) || !self.contains(k_in) {
            return 0.0;
        }
        self.block[(k_out - self.k_min, k_in - self.k_min)]
    }
}

/// Splitter block for total photon number `total` with mode dimensions
/// `dim_i`, `dim_j`.
pub fn sector_block(theta: f64, total: usize, dim_i: usize, dim_j: usize) -> Sector {
    let k_min = total.saturating_sub(dim_j.saturating_sub(1));
    let k_max = total.min(dim_i.saturating_sub(1));
    if dim_i == 0 || dim_j == 0 || k_min > k_max {
        return Sector {
            total,
            k_min,
            block: DMatrix::zeros(0, 0),
        };
    }
    let m = k_max - k_min + 1;
    if m == 1 || theta == 0.0 {
        return Sector {
            total,
            k_min,
            block: DMatrix::identity(m, m),
        };
    }

    let mut sym = DMatrix::<f64>::zeros(m, m);
    for s in 0..m - 1 {
        let k = (k_min + s) as f64;
        let w = ((k + 1.0) * (total as f64 - k)).sqrt();
        sym[(s, s + 1)] = w;
        sym[(s + 1, s)] = w;
    }
    let eig = SymmetricEigen::new(sym);
    let phases: Vec<C64> = eig
        .eigenvalues
        .iter()
        .map(|&lambda| C64::from_polar(1.0, -theta * lambda))
        .collect();
    let q = &eig.eigenvectors;
    let block = DMatrix::from_fn(m, m, |s, u| {
        let mut acc = C64::new(0.0, 0.0);
        for (l, phase) in phases.iter().enumerate() {
            acc += phase * (q[(s, l)] * q[(u, l)]);
        }
        // multiply by i^(s-u); the product is real up to rounding
        match (s + 4 * m - u) % 4 {
            0 => acc.re,
            1 => -acc.im,
            2 => -acc.re,
            _ => acc.im,
        }
    });
    Sector {
        total,
        k_min,
        block,
    }
}

/// The splitter as a unitary on the whole composite `space`, identity on the
/// modes it does not touch.
///
/// The result is exact for the physical splitter only if both involved mode
/// dimensions exceed the largest total photon number the caller will feed
/// into the pair; this is not checked here.
pub fn bs_unitary(space: &FockSpace, spec: &BeamSplitterSpec) -> Result<CMatrix> {
    let (i, j) = spec.modes();
    let dim_i = space.mode_dim(i)?;
    let dim_j = space.mode_dim(j)?;
    let sectors: Vec<Sector> = (0..dim_i + dim_j - 1)
        .map(|total| sector_block(spec.theta(), total, dim_i, dim_j))
        .collect();

    let n = space.total_dim();
    let mut u = CMatrix::zeros(n, n);
    for col in 0..n {
        let mut counts = space.counts_of(col);
        let (k_in, total) = (counts[i], counts[i] + counts[j]);
        let sector = &sectors[total];
        for s in 0..sector.len() {
            let k_out = sector.k_min + s;
            counts[i] = k_out;
            counts[j] = total - k_out;
            let row = space.index_of(&counts)?;
            u[(row, col)] = C64::new(sector.amplitude(k_out, k_in), 0.0);
        }
    }
    Ok(u)
}

/// U ρ U†.
pub fn apply_unitary(rho: &DensityMatrix, u: &CMatrix) -> Result<DensityMatrix> {
    let n = rho.dim();
    if u.nrows() != n || u.ncols() != n {
        return Err(Error::Dimension(format!(
            "unitary is {}x{}, state has dimension {n}",
            u.nrows(),
            u.ncols()
        )));
    }
    let data = u * rho.data() * u.adjoint();
    Ok(DensityMatrix::from_parts(rho.space().clone(), data))
}

/// Largest entry of B a_i B† − (t a_i − r a_j) and B a_j B† − (r a_i + t a_j)
/// on two-mode states with n_i < window[0] − 1 and n_j < window[1] − 1, i.e.
/// excluding the top Fock level of each mode.
///
/// The splitter is built on a space large enough that every retained state's
/// photon-number sector is complete, so any deviation is a construction
/// error rather than a truncation artifact.
pub fn heisenberg_check(spec: &BeamSplitterSpec, window: [usize; 2]) -> f64 {
    let keep = [window[0].saturating_sub(1), window[1].saturating_sub(1)];
    if keep[0] == 0 || keep[1] == 0 {
        return 0.0;
    }
    let max_total = keep[0] + keep[1] - 2;
    let d = max_total + 1;
    let space = FockSpace::new(vec![d, d]).expect("nonzero dims");
    let local = BeamSplitterSpec::new(0, 1, spec.theta()).expect("validated angle");
    let b = bs_unitary(&space, &local).expect("two-mode space");
    let bd = b.adjoint();
    let a_i = ModeOperator::annihilate(&space, 0).unwrap().matrix();
    let a_j = ModeOperator::annihilate(&space, 1).unwrap().matrix();
    let (t, r) = (C64::new(spec.t(), 0.0), C64::new(spec.r(), 0.0));

    let lhs_i = &b * &a_i * &bd;
    let rhs_i = &a_i * t - &a_j * r;
    let lhs_j = &b * &a_j * &bd;
    let rhs_j = &a_i * r + &a_j * t;

    let mut worst = 0.0_f64;
    for col in 0..space.total_dim() {
        let c = space.counts_of(col);
        if c[0] >= keep[0] || c[1] >= keep[1] {
            continue;
        }
        for row in 0..space.total_dim() {
            worst = worst
                .max((lhs_i[(row, col)] - rhs_i[(row, col)]).norm())
                .max((lhs_j[(row, col)] - rhs_j[(row, col)]).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;

    fn max_abs(m: &CMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// exp(θG) by scaling and squaring of a Taylor series. Independent of the
    /// sector construction; only fit for small matrices.
    fn expm_oracle(g: &CMatrix, theta: f64) -> CMatrix {
        let n = g.nrows();
        let squarings = 8;
        let scaled = g * C64::new(theta / f64::from(1 << squarings), 0.0);
        let mut term = CMatrix::identity(n, n);
        let mut sum = CMatrix::identity(n, n);
        for k in 1..30 {
            term = &term * &scaled * C64::new(1.0 / k as f64, 0.0);
            sum += &term;
        }
        for _ in 0..squarings {
            sum = &sum * &sum;
        }
        sum
    }

    #[test]
    fn spec_validation() {
        assert!(BeamSplitterSpec::new(1, 1, 0.3).is_err());
        assert!(BeamSplitterSpec::new(0, 1, -0.1).is_err());
        assert!(BeamSplitterSpec::new(0, 1, 1.6).is_err());
        assert!(BeamSplitterSpec::from_transmissivity(0, 1, 1.5).is_err());
        let s = BeamSplitterSpec::from_transmissivity(0, 1, 0.3).unwrap();
        assert!((s.transmissivity() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn zero_angle_is_identity() {
        let space = FockSpace::new(vec![3, 4]).unwrap();
        let u = bs_unitary(&space, &BeamSplitterSpec::new(0, 1, 0.0).unwrap()).unwrap();
        assert_eq!(u, CMatrix::identity(12, 12));
    }

    #[test]
    fn quarter_turn_swaps_single_photon() {
        let space = FockSpace::new(vec![2, 2]).unwrap();
        let u = bs_unitary(&space, &BeamSplitterSpec::new(0, 1, FRAC_PI_2).unwrap()).unwrap();
        let (i10, i01) = (2, 1);
        // |1,0⟩ → −|0,1⟩, |0,1⟩ → |1,0⟩
        assert!((u[(i01, i10)].re + 1.0).abs() < 1e-15);
        assert!((u[(i10, i01)].re - 1.0).abs() < 1e-15);
        assert!(u[(i10, i10)].norm() < 1e-15);
    }

    #[test]
    fn single_photon_sector_orientation() {
        for &theta in &[0.1, 0.4, FRAC_PI_4, 1.2] {
            let sector = sector_block(theta, 1, 5, 5);
            let (t, r) = (theta.cos(), theta.sin());
            // rows/cols ordered (|1,0⟩, |0,1⟩) i.e. k = 1, 0
            let m = [
                [sector.amplitude(1, 1), sector.amplitude(1, 0)],
                [sector.amplitude(0, 1), sector.amplitude(0, 0)],
            ];
            let expected = [[t, r], [-r, t]];
            for a in 0..2 {
                for b in 0..2 {
                    assert!((m[a][b] - expected[a][b]).abs() < 1e-15, "theta {theta}");
                }
            }
        }
    }

    #[test]
    fn transmission_probability_is_cos_squared() {
        for &tr in &[0.0, 0.2, 0.5, 0.77, 1.0] {
            let spec = BeamSplitterSpec::from_transmissivity(0, 1, tr).unwrap();
            let space = FockSpace::new(vec![3, 3]).unwrap();
            let rho = DensityMatrix::fock_state(space.clone(), &[1, 0]).unwrap();
            let out = apply_unitary(&rho, &bs_unitary(&space, &spec).unwrap()).unwrap();
            let stay = out.populations()[space.index_of(&[1, 0]).unwrap()];
            assert!((stay - tr).abs() < 1e-14);
        }
    }

    #[test]
    fn balanced_splitter_populations() {
        let spec = BeamSplitterSpec::from_transmissivity(0, 1, 0.5).unwrap();
        let space = FockSpace::new(vec![2, 2]).unwrap();
        let rho = DensityMatrix::fock_state(space.clone(), &[1, 0]).unwrap();
        let out = apply_unitary(&rho, &bs_unitary(&space, &spec).unwrap()).unwrap();
        let p = out.populations();
        assert!((p[1] - 0.5).abs() < 1e-15 && (p[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn vacuum_invariant() {
        for &theta in &[0.0, 0.3, FRAC_PI_4, FRAC_PI_2] {
            let space = FockSpace::new(vec![3, 3]).unwrap();
            let u = bs_unitary(&space, &BeamSplitterSpec::new(0, 1, theta).unwrap()).unwrap();
            assert_eq!(u[(0, 0)], C64::new(1.0, 0.0));
            assert!((1..9).all(|r| u[(r, 0)].norm() == 0.0));
        }
    }

    #[test]
    fn matches_global_exponential_of_truncated_generator() {
        for dims in [vec![3, 3], vec![2, 5], vec![4, 3, 2]] {
            let space = FockSpace::new(dims).unwrap();
            let (i, j) = (0, space.num_modes() - 1);
            let ai = ModeOperator::annihilate(&space, i).unwrap().matrix();
            let aj = ModeOperator::annihilate(&space, j).unwrap().matrix();
            let g = ai.adjoint() * &aj - &ai * aj.adjoint();
            for &theta in &[0.2, 0.9, 1.4] {
                let spec = BeamSplitterSpec::new(i, j, theta).unwrap();
                let u = bs_unitary(&space, &spec).unwrap();
                assert!(max_abs(&(u - expm_oracle(&g, theta))) < 1e-12);
            }
        }
    }

    #[test]
    fn unitary_and_conserving() {
        let space = FockSpace::new(vec![6, 2, 7]).unwrap();
        let spec = BeamSplitterSpec::new(2, 0, 0.83).unwrap();
        let u = bs_unitary(&space, &spec).unwrap();
        let n = space.total_dim();
        assert!(max_abs(&(u.adjoint() * &u - CMatrix::identity(n, n))) < 1e-12);
        // block structure: nonzero entries only between equal pair totals and
        // equal spectator counts
        for r in 0..n {
            for c in 0..n {
                if u[(r, c)].norm() == 0.0 {
                    continue;
                }
                let (a, b) = (space.counts_of(r), space.counts_of(c));
                assert_eq!(a[0] + a[2], b[0] + b[2]);
                assert_eq!(a[1], b[1]);
            }
        }
    }

    #[test]
    fn heisenberg_examples() {
        assert_eq!(
            heisenberg_check(&BeamSplitterSpec::new(0, 1, 0.0).unwrap(), [4, 4]),
            0.0
        );
        assert!(heisenberg_check(&BeamSplitterSpec::balanced(0, 1).unwrap(), [4, 4]) <= 1e-10);
        for &theta in &[0.1, 0.7, 1.3, FRAC_PI_2] {
            let spec = BeamSplitterSpec::new(0, 1, theta).unwrap();
            assert!(heisenberg_check(&spec, [6, 5]) <= 1e-10);
        }
    }

    #[test]
    fn apply_unitary_identity_and_mismatch() {
        let space = FockSpace::new(vec![2, 2]).unwrap();
        let rho = DensityMatrix::diagonal(space, &[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(apply_unitary(&rho, &CMatrix::identity(4, 4)).unwrap(), rho);
        assert!(apply_unitary(&rho, &CMatrix::identity(3, 3)).is_err());
    }
}
