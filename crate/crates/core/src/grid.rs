//! Uniform grids on ℝ^{2d} and their DFT duals.
//!
//! Samples are stored row-major over a `2d`-dimensional multi-index; axis 0 varies slowest.
//! Axes `0..d` carry the first block of coordinates (the `i`-kernel side of the transform),
//! axes `d..2d` the second block (the `j`-kernel side).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest sample count per signal accepted by [`GridSpec::new`].
pub const MAX_SAMPLES: usize = 1 << 24;

/// Common geometry of spatial and frequency lattices.
pub trait Lattice: Copy + std::fmt::Debug + PartialEq + Send + Sync {
    /// Half-dimension `d`; the lattice lives in ℝ^{2d}.
    fn d(&self) -> usize;
    fn n_per_axis(&self) -> usize;
    fn spacing(&self) -> f64;
    /// Coordinate of index 0 on every axis.
    fn origin(&self) -> f64;

    fn rank(&self) -> usize {
        2 * self.d()
    }

    fn len(&self) -> usize {
        self.n_per_axis().pow(self.rank() as u32)
    }

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn coord(&self, index: usize) -> f64 {
        self.origin() + index as f64 * self.spacing()
    }

    fn coords(&self) -> Vec<f64> {
        (0..self.n_per_axis()).map(|i| self.coord(i)).collect()
    }

    /// Quadrature weight of one cell for the normalized measure `dx/(2π)^d` on ℝ^{2d}.
    fn weight(&self) -> f64 {
        self.spacing().powi(self.rank() as i32) / (2.0 * PI).powi(self.d() as i32)
    }

    /// Per-node `|x|²`.
    fn norm_sqr_table(&self) -> Vec<f64> {
        let c = self.coords();
        let mut idx = vec![0; self.rank()];
        (0..self.len())
            .map(|flat| {
                unravel(flat, self.n_per_axis(), &mut idx);
                idx.iter().map(|&i| c[i] * c[i]).sum()
            })
            .collect()
    }
}

/// Spatial grid: nodes `x_k = −L + kΔ`, `Δ = 2L/N`, on every one of the `2d` axes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub d: usize,
    pub n_per_axis: usize,
    pub half_extent: f64,
}

impl GridSpec {
    pub fn new(d: usize, n_per_axis: usize, half_extent: f64) -> Result<Self> {
        let g = Self { d, n_per_axis, half_extent };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::InvalidGrid("d must be at least 1".into()));
        }
        if self.n_per_axis < 2 || !self.n_per_axis.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("N = {} must be a power of two and at least 2", self.n_per_axis)));
        }
        if !(self.half_extent.is_finite() && self.half_extent > 0.0) {
            return Err(Error::InvalidGrid(format!("L = {} must be positive", self.half_extent)));
        }
        let samples = (self.n_per_axis as u128).checked_pow(2 * self.d as u32);
        if samples.map_or(true, |s| s > MAX_SAMPLES as u128) {
            return Err(Error::InvalidGrid(format!("N^(2d) exceeds {MAX_SAMPLES} samples")));
        }
        Ok(())
    }

    /// The default desk configuration `d = 1, N = 32, L = 8`.
    pub fn desk() -> Self {
        Self { d: 1, n_per_axis: 32, half_extent: 8.0 }
    }

    /// Index of the node at the origin on each axis.
    pub fn origin_index(&self) -> usize {
        self.n_per_axis / 2
    }

    pub fn dual(&self) -> FrequencyGrid {
        FrequencyGrid::dual(self)
    }

    /// The grid with the same `N` and `L` scaled by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::new(self.d, self.n_per_axis, self.half_extent * lambda)
    }
}

impl Lattice for GridSpec {
    fn d(&self) -> usize {
        self.d
    }
    fn n_per_axis(&self) -> usize {
        self.n_per_axis
    }
    fn spacing(&self) -> f64 {
        2.0 * self.half_extent / self.n_per_axis as f64
    }
    fn origin(&self) -> f64 {
        -self.half_extent
    }
}

/// Frequency grid: nodes `w_k = kΔw` for `k = −N/2..N/2−1`, stored in increasing order.
///
/// The dual of a spatial grid has `N·Δ·Δw = 2π`, which makes the quadrature QFT a DFT
/// up to the phase `e^{iLw} = (−1)^k` contributed by the offset `−L`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    pub d: usize,
    pub n_per_axis: usize,
    pub spacing: f64,
}

impl FrequencyGrid {
    pub fn dual(grid: &GridSpec) -> Self {
        Self { d: grid.d, n_per_axis: grid.n_per_axis, spacing: 2.0 * PI / (grid.n_per_axis as f64 * grid.spacing()) }
    }

    /// Centered index `k` of storage position `pos`.
    pub fn centered(&self, pos: usize) -> i64 {
        pos as i64 - (self.n_per_axis / 2) as i64
    }

    pub fn zero_index(&self) -> usize {
        self.n_per_axis / 2
    }
}

impl Lattice for FrequencyGrid {
    fn d(&self) -> usize {
        self.d
    }
    fn n_per_axis(&self) -> usize {
        self.n_per_axis
    }
    fn spacing(&self) -> f64 {
        self.spacing
    }
    fn origin(&self) -> f64 {
        -((self.n_per_axis / 2) as f64) * self.spacing
    }
}

/// Splits a row-major flat index into per-axis indices (`out.len()` axes of size `n`).
#[inline]
pub fn unravel(mut flat: usize, n: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = flat % n;
        flat /= n;
    }
}

#[inline]
pub fn ravel(idx: &[usize], n: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * n + i)
}

/// Coordinates of a flat index.
pub fn point<L: Lattice>(lattice: &L, flat: usize) -> Vec<f64> {
    let mut idx = vec![0; lattice.rank()];
    unravel(flat, lattice.n_per_axis(), &mut idx);
    idx.iter().map(|&i| lattice.coord(i)).collect()
}
