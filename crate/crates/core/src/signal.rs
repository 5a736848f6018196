//! Quaternion samples on a lattice, with norms, inner products and the shift operators.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{ravel, unravel, FrequencyGrid, GridSpec, Lattice};
use crate::quaternion::Quaternion;

/// Dense quaternion samples over every node of a lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct Sampled<G: Lattice> {
    pub grid: G,
    pub values: Vec<Quaternion>,
}

/// Samples on a spatial grid.
pub type SampledSignal = Sampled<GridSpec>;
/// Samples on a frequency grid, e.g. a QFT.
pub type Spectrum = Sampled<FrequencyGrid>;

impl<G: Lattice> Sampled<G> {
    pub fn new(grid: G, values: Vec<Quaternion>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!("{} values for a lattice of {} nodes", values.len(), grid.len())));
        }
        if let Some(i) = values.iter().position(|q| !q.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: G) -> Self {
        Self { grid, values: vec![Quaternion::ZERO; grid.len()] }
    }

    /// Evaluates `f` at every node; `f` receives the node coordinates.
    pub fn from_fn(grid: G, f: impl Fn(&[f64]) -> Quaternion + Sync) -> Result<Self> {
        let n = grid.n_per_axis();
        let coords = grid.coords();
        let values: Vec<Quaternion> = (0..grid.len())
            .into_par_iter()
            .map_init(
                || (vec![0usize; grid.rank()], vec![0.0; grid.rank()]),
                |(idx, x), flat| {
                    unravel(flat, n, idx);
                    for (xi, &i) in x.iter_mut().zip(idx.iter()) {
                        *xi = coords[i];
                    }
                    f(x)
                },
            )
            .collect();
        Self::new(grid, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)));
        }
        Ok(())
    }

    /// `(Σ |f|^p w)^{1/p}`, or `max |f|` for `p = ∞`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidParameter(format!("p = {p} must be at least 1")));
        }
        if p.is_infinite() {
            return Ok(self.values.iter().map(|q| q.norm()).fold(0.0, f64::max));
        }
        let s: f64 = if p == 2.0 {
            self.values.iter().map(|q| q.norm_sqr()).sum()
        } else {
            self.values.iter().map(|q| q.norm().powf(p)).sum()
        };
        Ok((s * self.grid.weight()).powf(1.0 / p))
    }

    pub fn norm2(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|q| q.norm_sqr()).sum::<f64>() * self.grid.weight()
    }

    /// `(f, g) = Σ f·conj(g)·w`.
    pub fn qinner(&self, other: &Self) -> Result<Quaternion> {
        self.same_grid(other)?;
        let s: Quaternion = self.values.iter().zip(&other.values).map(|(f, g)| *f * g.conj()).sum();
        Ok(s * self.grid.weight())
    }

    /// `⟨f, g⟩ = Sc(f, g)`, symmetric in its arguments.
    pub fn sc_inner(&self, other: &Self) -> Result<f64> {
        Ok(self.qinner(other)?.scalar())
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|q| q.is_real())
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|q| *q * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| *a + *b).collect();
        Ok(Self { grid: self.grid, values })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| *a - *b).collect();
        Ok(Self { grid: self.grid, values })
    }

    /// Pointwise product `f·g`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| *a * *b).collect();
        Ok(Self { grid: self.grid, values })
    }

    pub fn conj(&self) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|q| q.conj()).collect() }
    }

    /// Cyclic shift by whole cells: `out[n] = f[n − shift]` on each axis.
    pub fn shift_cells(&self, shift: &[i64]) -> Result<Self> {
        let rank = self.grid.rank();
        if shift.len() != rank {
            return Err(Error::InvalidParameter(format!("shift has {} axes, expected {rank}", shift.len())));
        }
        let n = self.grid.n_per_axis();
        let mut idx = vec![0; rank];
        let values = (0..self.len())
            .map(|flat| {
                unravel(flat, n, &mut idx);
                for (i, s) in idx.iter_mut().zip(shift) {
                    *i = (*i as i64 - s).rem_euclid(n as i64) as usize;
                }
                self.values[ravel(&idx, n)]
            })
            .collect();
        Ok(Self { grid: self.grid, values })
    }

    /// Cyclic reflection `ǧ(x) = g(−x)`; node `n` maps to `(N − n) mod N`.
    pub fn reflect(&self) -> Self {
        let n = self.grid.n_per_axis();
        let mut idx = vec![0; self.grid.rank()];
        let values = (0..self.len())
            .map(|flat| {
                unravel(flat, n, &mut idx);
                for i in idx.iter_mut() {
                    *i = (n - *i) % n;
                }
                self.values[ravel(&idx, n)]
            })
            .collect();
        Self { grid: self.grid, values }
    }
}

impl SampledSignal {
    /// `T_{x0} f(t) = f(t − x0)` under cyclic wrap; `x0` must be a whole number of cells.
    ///
    /// Comparisons with continuous formulas assume `f` is negligible near the boundary.
    pub fn translate(&self, x0: &[f64]) -> Result<Self> {
        let h = self.grid.spacing();
        let shift = x0
            .iter()
            .map(|&x| {
                let c = x / h;
                let r = c.round();
                if (c - r).abs() > 1e-9 * c.abs().max(1.0) {
                    Err(Error::NotGridAligned(format!("{x} is not a multiple of {h}")))
                } else {
                    Ok(r as i64)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        self.shift_cells(&shift)
    }

    /// `f_λ(x) = f(λx)` by nearest-node lookup, zero outside the box.
    ///
    /// Prefer [`SignalExpr::dilate`](crate::expr::SignalExpr::dilate) when a closed form exists.
    pub fn dilate_nearest(&self, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("dilation factor {lambda} must be positive")));
        }
        let g = self.grid;
        let (n, h, l) = (g.n_per_axis as i64, g.spacing(), g.half_extent);
        let mut idx = vec![0; g.rank()];
        let values = (0..self.len())
            .map(|flat| {
                unravel(flat, g.n_per_axis, &mut idx);
                for i in idx.iter_mut() {
                    let x = lambda * g.coord(*i);
                    let j = ((x + l) / h).round() as i64;
                    if j < 0 || j >= n {
                        return Quaternion::ZERO;
                    }
                    *i = j as usize;
                }
                self.values[ravel(&idx, g.n_per_axis)]
            })
            .collect();
        Ok(Self { grid: g, values })
    }

    /// `(f * g)(x) = Σ_y f(y) g(x − y) w`, with `g` taken as zero outside the box.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        let g = self.grid;
        let (n, rank, half) = (g.n_per_axis, g.rank(), g.origin_index() as i64);
        let w = g.weight();
        let values = (0..self.len())
            .into_par_iter()
            .map_init(
                || (vec![0usize; rank], vec![0usize; rank], vec![0usize; rank]),
                |(xi, yi, di), x| {
                    unravel(x, n, xi);
                    let mut acc = Quaternion::ZERO;
                    'y: for y in 0..self.len() {
                        let fy = self.values[y];
                        if fy == Quaternion::ZERO {
                            continue;
                        }
                        unravel(y, n, yi);
                        for a in 0..rank {
                            let k = xi[a] as i64 - yi[a] as i64 + half;
                            if k < 0 || k >= n as i64 {
                                continue 'y;
                            }
                            di[a] = k as usize;
                        }
                        acc += fy * other.values[ravel(di, n)];
                    }
                    acc * w
                },
            )
            .collect();
        Ok(Self { grid: g, values })
    }
}
