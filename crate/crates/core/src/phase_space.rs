//! Quaternion fields over the phase space `ℝ^{2d} × ℝ^{2d}`.
//!
//! A field is a sequence of slabs: one slab per `x` node holding the values over every `w`
//! node. Fields are either materialized ([`PhaseSpaceField`]) or computed slab by slab on
//! demand ([`Lazy`]); reductions go through [`PhaseSpace::map_slabs`] and are summed in slab
//! order, so results do not depend on thread scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{unravel, FrequencyGrid, GridSpec, Lattice};
use crate::qft::QftPlan;
use crate::quaternion::Quaternion;

/// Which time–frequency distribution a field holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distribution {
    Qwft,
    Ambiguity,
    Wigner,
}

impl Distribution {
    pub fn tag(self) -> &'static str {
        match self {
            Self::Qwft => "qwft",
            Self::Ambiguity => "qaf",
            Self::Wigner => "qwvt",
        }
    }
}

/// Scratch space for one thread of slab computations.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub plan: QftPlan,
    pub input: Vec<Quaternion>,
    pub spectrum: Vec<Quaternion>,
    pub index: Vec<usize>,
}

impl Workspace {
    pub fn new(grid: &GridSpec) -> Result<Self> {
        Ok(Self {
            plan: QftPlan::new(grid)?,
            input: vec![Quaternion::ZERO; grid.len()],
            spectrum: vec![Quaternion::ZERO; grid.len()],
            index: vec![0; grid.rank()],
        })
    }
}

/// A transform that produces one `x` slab at a time.
pub trait SlabKernel: Sync {
    fn x_grid(&self) -> GridSpec;
    fn w_grid(&self) -> FrequencyGrid;
    fn workspace(&self) -> Workspace;
    /// Writes the values at `x` node `m` into `out` (length `w_grid().len()`).
    fn slab(&self, m: usize, ws: &mut Workspace, out: &mut [Quaternion]);
}

/// Read access to a phase-space field.
pub trait PhaseSpace: Sync {
    fn x_grid(&self) -> GridSpec;
    fn w_grid(&self) -> FrequencyGrid;

    /// Applies `visit(m, slab)` to every `x` node `m` and returns the results in node order.
    fn map_slabs<T, F>(&self, visit: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize, &[Quaternion]) -> T + Sync;

    fn x_len(&self) -> usize {
        self.x_grid().len()
    }

    fn w_len(&self) -> usize {
        self.w_grid().len()
    }

    /// Discrete `dμ_{4d}` of one cell.
    fn cell_weight(&self) -> f64 {
        self.x_grid().weight() * self.w_grid().weight()
    }

    /// `Σ φ(m, k, F[m, k])` over all nodes, times the cell weight.
    fn integrate<F>(&self, phi: F) -> f64
    where
        F: Fn(usize, usize, Quaternion) -> f64 + Sync,
    {
        let parts = self.map_slabs(|m, slab| slab.iter().enumerate().map(|(k, q)| phi(m, k, *q)).sum::<f64>());
        parts.iter().sum::<f64>() * self.cell_weight()
    }

    fn norm_sqr(&self) -> f64 {
        self.integrate(|_, _, q| q.norm_sqr())
    }

    fn max_abs(&self) -> f64 {
        self.map_slabs(|_, slab| slab.iter().map(|q| q.norm()).fold(0.0, f64::max)).into_iter().fold(0.0, f64::max)
    }

    /// `(Σ |F|^p w)^{1/p}`; `p = ∞` gives the max modulus.
    fn lp_norm(&self, p: f64) -> Result<f64> {
        if p.is_infinite() && p > 0.0 {
            return Ok(self.max_abs());
        }
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidParameter(format!("p = {p} must be at least 1")));
        }
        Ok(self.integrate(|_, _, q| q.norm().powf(p)).powf(1.0 / p))
    }
}

/// A field whose slabs are recomputed on every pass; memory stays at one slab per thread.
#[derive(Clone, Debug)]
pub struct Lazy<K> {
    pub kernel: K,
}

impl<K: SlabKernel> Lazy<K> {
    pub fn new(kernel: K) -> Self {
        Self { kernel }
    }
}

impl<K: SlabKernel> PhaseSpace for Lazy<K> {
    fn x_grid(&self) -> GridSpec {
        self.kernel.x_grid()
    }

    fn w_grid(&self) -> FrequencyGrid {
        self.kernel.w_grid()
    }

    fn map_slabs<T, F>(&self, visit: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize, &[Quaternion]) -> T + Sync,
    {
        let nw = self.w_len();
        (0..self.x_len())
            .into_par_iter()
            .map_init(
                || (self.kernel.workspace(), vec![Quaternion::ZERO; nw]),
                |(ws, out), m| {
                    self.kernel.slab(m, ws, out);
                    visit(m, out)
                },
            )
            .collect()
    }
}

/// Materialized field, `x`-major and `w`-minor.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSpaceField {
    pub x_grid: GridSpec,
    pub w_grid: FrequencyGrid,
    pub values: Vec<Quaternion>,
}

impl PhaseSpaceField {
    pub fn new(x_grid: GridSpec, w_grid: FrequencyGrid, values: Vec<Quaternion>) -> Result<Self> {
        if x_grid.d != w_grid.d {
            return Err(Error::GridMismatch(format!("x has d = {}, w has d = {}", x_grid.d, w_grid.d)));
        }
        let expected = x_grid.len() * w_grid.len();
        if values.len() != expected {
            return Err(Error::GridMismatch(format!("{} values for {expected} phase-space nodes", values.len())));
        }
        if let Some(i) = values.iter().position(|q| !q.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { x_grid, w_grid, values })
    }

    /// Computes every slab of `kernel` in parallel.
    pub fn compute<K: SlabKernel>(kernel: &K) -> Self {
        let (x_grid, w_grid) = (kernel.x_grid(), kernel.w_grid());
        let nw = w_grid.len();
        let mut values = vec![Quaternion::ZERO; x_grid.len() * nw];
        values
            .par_chunks_mut(nw)
            .enumerate()
            .for_each_init(|| kernel.workspace(), |ws, (m, out)| kernel.slab(m, ws, out));
        Self { x_grid, w_grid, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn slab(&self, m: usize) -> &[Quaternion] {
        let nw = self.w_grid.len();
        &self.values[m * nw..(m + 1) * nw]
    }

    pub fn get(&self, m: usize, k: usize) -> Quaternion {
        self.values[m * self.w_grid.len() + k]
    }
}

impl PhaseSpace for PhaseSpaceField {
    fn x_grid(&self) -> GridSpec {
        self.x_grid
    }

    fn w_grid(&self) -> FrequencyGrid {
        self.w_grid
    }

    fn map_slabs<T, F>(&self, visit: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize, &[Quaternion]) -> T + Sync,
    {
        let nw = self.w_grid.len();
        self.values.par_chunks(nw).enumerate().map(|(m, s)| visit(m, s)).collect()
    }
}

/// A subset of the phase-space nodes with its discrete `μ_{4d}` measure.
#[derive(Clone, Debug, PartialEq)]
pub struct ConcentrationSet {
    pub x_grid: GridSpec,
    pub w_grid: FrequencyGrid,
    pub mask: Vec<bool>,
    pub measure: f64,
}

impl ConcentrationSet {
    pub fn from_mask(x_grid: GridSpec, w_grid: FrequencyGrid, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != x_grid.len() * w_grid.len() {
            return Err(Error::GridMismatch(format!("mask of {} nodes", mask.len())));
        }
        let count = mask.iter().filter(|&&b| b).count();
        let measure = count as f64 * x_grid.weight() * w_grid.weight();
        Ok(Self { x_grid, w_grid, mask, measure })
    }

    pub fn full<P: PhaseSpace>(field: &P) -> Self {
        let n = field.x_len() * field.w_len();
        Self::from_mask(field.x_grid(), field.w_grid(), vec![true; n]).expect("sized to the field")
    }

    pub fn empty<P: PhaseSpace>(field: &P) -> Self {
        let n = field.x_len() * field.w_len();
        Self::from_mask(field.x_grid(), field.w_grid(), vec![false; n]).expect("sized to the field")
    }

    /// `{|F| ≥ τ·max|F|}`.
    pub fn super_level<P: PhaseSpace>(field: &P, tau: f64) -> Result<Self> {
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(Error::InvalidParameter(format!("threshold {tau} must be nonnegative")));
        }
        let cut = tau * field.max_abs();
        let mask = field.map_slabs(|_, slab| slab.iter().map(|q| q.norm() >= cut).collect::<Vec<_>>()).concat();
        Self::from_mask(field.x_grid(), field.w_grid(), mask)
    }

    /// Nodes with every `x` coordinate in `[−hx, hx)` and every `w` coordinate in `[−hw, hw)`.
    pub fn centered_box(x_grid: GridSpec, w_grid: FrequencyGrid, hx: f64, hw: f64) -> Result<Self> {
        for h in [hx, hw] {
            if !(h.is_finite() && h >= 0.0) {
                return Err(Error::InvalidParameter(format!("half-width {h} must be nonnegative")));
            }
        }
        let x_in = axis_mask(&x_grid, |c| (-hx..hx).contains(&c));
        let w_in = axis_mask(&w_grid, |c| (-hw..hw).contains(&c));
        let mask = x_in.iter().flat_map(|&a| w_in.iter().map(move |&b| a && b)).collect();
        Self::from_mask(x_grid, w_grid, mask)
    }

    pub fn contains(&self, m: usize, k: usize) -> bool {
        self.mask[m * self.w_grid.len() + k]
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn matches<P: PhaseSpace>(&self, field: &P) -> Result<()> {
        if self.x_grid != field.x_grid() || self.w_grid != field.w_grid() {
            return Err(Error::GridMismatch("concentration set and field use different grids".into()));
        }
        Ok(())
    }
}

/// Nodes whose every coordinate satisfies `keep`.
fn axis_mask<L: Lattice>(lattice: &L, keep: impl Fn(f64) -> bool) -> Vec<bool> {
    let per_axis: Vec<bool> = lattice.coords().into_iter().map(keep).collect();
    let mut idx = vec![0; lattice.rank()];
    (0..lattice.len())
        .map(|flat| {
            unravel(flat, lattice.n_per_axis(), &mut idx);
            idx.iter().all(|&i| per_axis[i])
        })
        .collect()
}
