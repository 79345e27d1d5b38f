//! Finite bosonic Hilbert spaces and dense density matrices over them.
//!
//! Composite spaces are ordered tensor products. Mode 0 is the leftmost
//! factor and therefore the slowest-varying digit of a flat basis index:
//! on dims `[2, 3]` the basis runs `|0,0⟩, |0,1⟩, |0,2⟩, |1,0⟩, …`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Hermiticity tolerance (max entrywise |ρ − ρ†|).
pub const TAU_HERM: f64 = 1e-12;
/// Smallest eigenvalue accepted as non-negative.
pub const TAU_PSD: f64 = 1e-10;
/// Allowed excess of the trace over one.
pub const TAU_TRACE: f64 = 1e-12;

/// Ordered list of per-mode truncation dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FockSpace {
    dims: Vec<usize>,
}

impl FockSpace {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if let Some(m) = dims.iter().position(|&d| d == 0) {
            return Err(Error::Dimension(format!("mode {m} has dimension 0")));
        }
        Ok(Self { dims })
    }

    pub fn single(dim: usize) -> Result<Self> {
        Self::new(vec![dim])
    }

    /// The zero-mode space; its only state is the 1×1 scalar.
    pub fn scalar() -> Self {
        Self { dims: Vec::new() }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_modes(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn mode_dim(&self, mode: usize) -> Result<usize> {
        self.dims.get(mode).copied().ok_or(Error::ModeOutOfRange {
            mode,
            modes: self.dims.len(),
        })
    }

    /// Number of flat indices between consecutive values of `mode`.
    fn stride(&self, mode: usize) -> usize {
        self.dims[mode + 1..].iter().product()
    }

    pub fn index_of(&self, counts: &[usize]) -> Result<usize> {
        if counts.len() != self.dims.len() {
            return Err(Error::Dimension(format!(
                "{} photon counts given for a {}-mode space",
                counts.len(),
                self.dims.len()
            )));
        }
        let mut index = 0;
        for (mode, (&n, &d)) in counts.iter().zip(&self.dims).enumerate() {
            if n >= d {
                return Err(Error::Dimension(format!(
                    "count {n} in mode {mode} does not fit dimension {d}"
                )));
            }
            index = index * d + n;
        }
        Ok(index)
    }

    pub fn counts_of(&self, mut index: usize) -> Vec<usize> {
        let mut counts = vec![0; self.dims.len()];
        for (slot, &d) in counts.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        counts
    }

    pub fn product(&self, other: &FockSpace) -> FockSpace {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        FockSpace { dims }
    }

    pub fn without_mode(&self, mode: usize) -> Result<FockSpace> {
        self.mode_dim(mode)?;
        let mut dims = self.dims.clone();
        dims.remove(mode);
        Ok(FockSpace { dims })
    }

    /// Flat index of the reduced-space state `reduced` with `count` photons
    /// re-inserted in `mode`.
    fn insert_index(&self, mode: usize, reduced: usize, count: usize) -> usize {
        let stride = self.stride(mode);
        (reduced / stride) * self.dims[mode] * stride + count * stride + reduced % stride
    }
}

/// A dense density operator on a [`FockSpace`].
///
/// Heralded branches are stored unnormalized, so the trace may be below one.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    space: FockSpace,
    data: CMatrix,
}

impl DensityMatrix {
    /// Checks shape, Hermiticity and the trace window. Positivity is only
    /// checked by [`DensityMatrix::validate`].
    pub fn new(space: FockSpace, data: CMatrix) -> Result<Self> {
        let n = space.total_dim();
        if data.nrows() != n || data.ncols() != n {
            return Err(Error::Dimension(format!(
                "matrix is {}x{}, space has dimension {n}",
                data.nrows(),
                data.ncols()
            )));
        }
        let rho = Self { space, data };
        let herm = rho.hermiticity_error();
        if herm > TAU_HERM {
            return Err(Error::InvalidState(format!("hermiticity error {herm:e}")));
        }
        let tr = rho.trace();
        if !(-TAU_TRACE..=1.0 + TAU_TRACE).contains(&tr) {
            return Err(Error::InvalidState(format!("trace {tr} outside [0, 1]")));
        }
        Ok(rho)
    }

    pub(crate) fn from_parts(space: FockSpace, data: CMatrix) -> Self {
        debug_assert_eq!(data.nrows(), space.total_dim());
        Self { space, data }
    }

    /// Diagonal state with the given Fock-basis populations.
    pub fn diagonal(space: FockSpace, populations: &[f64]) -> Result<Self> {
        if populations.len() != space.total_dim() {
            return Err(Error::Dimension(format!(
                "{} populations for dimension {}",
                populations.len(),
                space.total_dim()
            )));
        }
        let diag = nalgebra::DVector::from_iterator(
            populations.len(),
            populations.iter().map(|&p| C64::new(p, 0.0)),
        );
        Self::new(space, CMatrix::from_diagonal(&diag))
    }

    /// Projector onto the pure state with amplitudes `amps` (not normalized here).
    pub fn pure(space: FockSpace, amps: &[C64]) -> Result<Self> {
        if amps.len() != space.total_dim() {
            return Err(Error::Dimension(format!(
                "{} amplitudes for dimension {}",
                amps.len(),
                space.total_dim()
            )));
        }
        let v = nalgebra::DVector::from_column_slice(amps);
        Self::new(space, &v * v.adjoint())
    }

    /// The projector |n₁,…,n_k⟩⟨n₁,…,n_k|.
    pub fn fock_state(space: FockSpace, counts: &[usize]) -> Result<Self> {
        let idx = space.index_of(counts)?;
        let n = space.total_dim();
        let mut data = CMatrix::zeros(n, n);
        data[(idx, idx)] = C64::new(1.0, 0.0);
        Ok(Self { space, data })
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn data(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_data(self) -> CMatrix {
        self.data
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.data.trace().re
    }

    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        self.data
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Full check, including the O(d³) eigenvalue test for positivity.
    pub fn validate(&self) -> Result<()> {
        Self::new(self.space.clone(), self.data.clone())?;
        let min = self.min_eigenvalue();
        if min < -TAU_PSD {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// Real parts of the diagonal.
    pub fn populations(&self) -> Vec<f64> {
        self.data.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn max_off_diagonal(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    worst = worst.max(self.data[(i, j)].norm());
                }
            }
        }
        worst
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            space: self.space.clone(),
            data: self.data.scale(factor),
        }
    }

    /// Kronecker product; the modes of `self` come first.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        Self {
            space: self.space.product(&other.space),
            data: self.data.kronecker(&other.data),
        }
    }

    /// The unnormalized operator ⟨count|ρ|count⟩ on the remaining modes.
    /// Its trace is the probability of finding `count` photons in `mode`.
    pub fn partial_project(&self, mode: usize, count: usize) -> Result<DensityMatrix> {
        let d = self.space.mode_dim(mode)?;
        if count >= d {
            return Err(Error::Dimension(format!(
                "cannot project mode {mode} (dimension {d}) onto {count} photons"
            )));
        }
        let reduced = self.space.without_mode(mode)?;
        let n = reduced.total_dim();
        let rows: Vec<usize> = (0..n)
            .map(|r| self.space.insert_index(mode, r, count))
            .collect();
        let data = CMatrix::from_fn(n, n, |r, c| self.data[(rows[r], rows[c])]);
        Ok(Self {
            space: reduced,
            data,
        })
    }

    pub fn partial_trace(&self, mode: usize) -> Result<DensityMatrix> {
        let d = self.space.mode_dim(mode)?;
        let mut acc = self.partial_project(mode, 0)?;
        for k in 1..d {
            acc.data += self.partial_project(mode, k)?.data;
        }
        Ok(acc)
    }

    /// Reorders the tensor factors: new mode `p` is old mode `order[p]`.
    pub fn permute_modes(&self, order: &[usize]) -> Result<DensityMatrix> {
        let modes = self.space.num_modes();
        let mut seen = vec![false; modes];
        if order.len() != modes {
            return Err(Error::Dimension(format!(
                "permutation of length {} for {modes} modes",
                order.len()
            )));
        }
        for &m in order {
            if m >= modes || seen[m] {
                return Err(Error::InvalidParameter(format!(
                    "{order:?} is not a permutation of the modes"
                )));
            }
            seen[m] = true;
        }
        let new_space = FockSpace {
            dims: order.iter().map(|&m| self.space.dims[m]).collect(),
        };
        let n = self.dim();
        let map: Vec<usize> = (0..n)
            .map(|old| {
                let counts = self.space.counts_of(old);
                let permuted: Vec<usize> = order.iter().map(|&m| counts[m]).collect();
                new_space
                    .index_of(&permuted)
                    .expect("permuted counts fit permuted dims")
            })
            .collect();
        let mut data = CMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                data[(map[r], map[c])] = self.data[(r, c)];
            }
        }
        Ok(Self {
            space: new_space,
            data,
        })
    }

    /// Tr(ρ O).
    pub fn expectation(&self, op: &CMatrix) -> Result<C64> {
        let n = self.dim();
        if op.nrows() != n || op.ncols() != n {
            return Err(Error::Dimension(format!(
                "operator is {}x{}, state has dimension {n}",
                op.nrows(),
                op.ncols()
            )));
        }
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self.data[(i, k)] * op[(k, i)];
            }
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Annihilate,
    Create,
    Number,
}

/// A ladder or number operator for one mode of a composite space, acting as
/// the identity on every other mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeOperator {
    space: FockSpace,
    mode: usize,
    kind: OperatorKind,
}

impl ModeOperator {
    pub fn new(space: FockSpace, mode: usize, kind: OperatorKind) -> Result<Self> {
        space.mode_dim(mode)?;
        Ok(Self { space, mode, kind })
    }

    pub fn annihilate(space: &FockSpace, mode: usize) -> Result<Self> {
        Self::new(space.clone(), mode, OperatorKind::Annihilate)
    }

    pub fn create(space: &FockSpace, mode: usize) -> Result<Self> {
        Self::new(space.clone(), mode, OperatorKind::Create)
    }

    pub fn number(space: &FockSpace, mode: usize) -> Result<Self> {
        Self::new(space.clone(), mode, OperatorKind::Number)
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn matrix(&self) -> CMatrix {
        let n = self.space.total_dim();
        let stride = self.space.stride(self.mode);
        let d = self.space.dims[self.mode];
        let mut m = CMatrix::zeros(n, n);
        for col in 0..n {
            let k = (col / stride) % d;
            match self.kind {
                OperatorKind::Number => m[(col, col)] = C64::new(k as f64, 0.0),
                OperatorKind::Annihilate if k > 0 => {
                    m[(col - stride, col)] = C64::new((k as f64).sqrt(), 0.0)
                }
                OperatorKind::Create if k + 1 < d => {
                    m[(col + stride, col)] = C64::new(((k + 1) as f64).sqrt(), 0.0)
                }
                _ => {}
            }
        }
        m
    }
}
