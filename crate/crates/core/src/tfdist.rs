//! Ambiguity function and Wigner transform.
//!
//! `A(f, g)(x, w) = ∫ e^{−i t₁·w₁} f(t + x/2) conj(g(t − x/2)) e^{−j t₂·w₂} dμ(t)`
//! `W(f, g)(x, w) = ∫ e^{−i w₁·t₁} f(x + t/2) conj(g(x − t/2)) e^{−j w₂·t₂} dμ(t)`
//!
//! Half-shifts stay on nodes by restricting the shift variable to even indices:
//!
//! * `A` is sampled at `x` on the even nodes of the signal grid, i.e. the grid with `N/2`
//!   nodes, the same `L` and spacing `2Δ`; `w` runs over the full dual grid.
//! * `W` is computed as `2^{2d} e^{2i w₁·x₁} F_Q(f·conj(g(2x − ·)))(2w) e^{2j w₂·x₂}`. The
//!   discrete `W` is periodic with period `L` in `x` and `π/Δ` in `w`, so it is stored on one
//!   period: `x ∈ [−L/2, L/2)` with spacing `Δ` and `w` on the central half of the dual grid.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{ravel, unravel, FrequencyGrid, GridSpec, Lattice};
use crate::phase_space::{ConcentrationSet, PhaseSpace, PhaseSpaceField, SlabKernel, Workspace};
use crate::qft::qft_fast;
use crate::quaternion::Quaternion;
use crate::qwft::{check_pair, QwftKernel};
use crate::report::InequalityReport;
use crate::signal::SampledSignal;

fn check_even(grid: &GridSpec) -> Result<()> {
    if grid.n_per_axis < 4 {
        return Err(Error::InvalidGrid(format!("N = {} is too small for half-shifts; need N ≥ 4", grid.n_per_axis)));
    }
    Ok(())
}

/// `x` grid of the ambiguity function on signal grid `grid`.
pub fn ambiguity_x_grid(grid: &GridSpec) -> Result<GridSpec> {
    check_even(grid)?;
    GridSpec::new(grid.d, grid.n_per_axis / 2, grid.half_extent)
}

/// `(x, w)` grids of the stored Wigner period on signal grid `grid`.
pub fn wigner_grids(grid: &GridSpec) -> Result<(GridSpec, FrequencyGrid)> {
    check_even(grid)?;
    let x = GridSpec::new(grid.d, grid.n_per_axis / 2, grid.half_extent / 2.0)?;
    let w = GridSpec::new(grid.d, grid.n_per_axis / 2, grid.half_extent)?.dual();
    Ok((x, w))
}

/// Slab producer for `A(f, g)`.
#[derive(Clone, Debug)]
pub struct AmbiguityKernel {
    f: SampledSignal,
    g_conj: Vec<Quaternion>,
    x_grid: GridSpec,
}

impl AmbiguityKernel {
    pub fn new(f: &SampledSignal, g: &SampledSignal) -> Result<Self> {
        check_pair(f, g)?;
        let x_grid = ambiguity_x_grid(&f.grid)?;
        Ok(Self { f: f.clone(), g_conj: g.values.iter().map(|q| q.conj()).collect(), x_grid })
    }
}

impl SlabKernel for AmbiguityKernel {
    fn x_grid(&self) -> GridSpec {
        self.x_grid
    }

    fn w_grid(&self) -> FrequencyGrid {
        self.f.grid.dual()
    }

    fn workspace(&self) -> Workspace {
        Workspace::new(&self.f.grid).expect("validated grid")
    }

    fn slab(&self, m: usize, ws: &mut Workspace, out: &mut [Quaternion]) {
        let n = self.f.grid.n_per_axis;
        let rank = self.f.grid.rank();
        let mut mi = vec![0; rank];
        unravel(m, n / 2, &mut mi);
        // x/2 is r = m − N/4 cells on every axis.
        let r: Vec<i64> = mi.iter().map(|&k| k as i64 - (n / 4) as i64).collect();
        let nn = n as i64;
        let mut fi = vec![0; rank];
        for (flat, h) in ws.input.iter_mut().enumerate() {
            unravel(flat, n, &mut ws.index);
            for a in 0..rank {
                let t = ws.index[a] as i64;
                fi[a] = (t + r[a]).rem_euclid(nn) as usize;
                ws.index[a] = (t - r[a]).rem_euclid(nn) as usize;
            }
            *h = self.f.values[ravel(&fi, n)] * self.g_conj[ravel(&ws.index, n)];
        }
        ws.plan.forward(&ws.input, out);
    }
}

/// Slab producer for `W(f, g)` on its stored period.
#[derive(Clone, Debug)]
pub struct WignerKernel {
    f: SampledSignal,
    g_conj: Vec<Quaternion>,
    x_grid: GridSpec,
    w_grid: FrequencyGrid,
}

impl WignerKernel {
    pub fn new(f: &SampledSignal, g: &SampledSignal) -> Result<Self> {
        check_pair(f, g)?;
        let (x_grid, w_grid) = wigner_grids(&f.grid)?;
        Ok(Self { f: f.clone(), g_conj: g.values.iter().map(|q| q.conj()).collect(), x_grid, w_grid })
    }
}

impl SlabKernel for WignerKernel {
    fn x_grid(&self) -> GridSpec {
        self.x_grid
    }

    fn w_grid(&self) -> FrequencyGrid {
        self.w_grid
    }

    fn workspace(&self) -> Workspace {
        Workspace::new(&self.f.grid).expect("validated grid")
    }

    fn slab(&self, m: usize, ws: &mut Workspace, out: &mut [Quaternion]) {
        let grid = self.f.grid;
        let (n, d, rank) = (grid.n_per_axis, grid.d, grid.rank());
        let (nh, quarter) = (n / 2, n / 4);
        let mut mi = vec![0; rank];
        unravel(m, nh, &mut mi);
        // Signal-grid node of x, and x itself.
        let full: Vec<usize> = mi.iter().map(|&k| k + quarter).collect();
        let x: Vec<f64> = mi.iter().map(|&k| self.x_grid.coord(k)).collect();
        for (flat, h) in ws.input.iter_mut().enumerate() {
            unravel(flat, n, &mut ws.index);
            for (i, &c) in ws.index.iter_mut().zip(&full) {
                *i = (2 * c + n - *i) % n;
            }
            *h = self.f.values[flat] * self.g_conj[ravel(&ws.index, n)];
        }
        ws.plan.forward(&ws.input, &mut ws.spectrum);
        let scale = (1u64 << (2 * d)) as f64;
        let mut ki = vec![0; rank];
        for (pos, o) in out.iter_mut().enumerate() {
            unravel(pos, nh, &mut ki);
            let mut su = 0.0;
            let mut tv = 0.0;
            for a in 0..d {
                su += self.w_grid.coord(ki[a]) * x[a];
                tv += self.w_grid.coord(ki[d + a]) * x[d + a];
            }
            // Dual node 2k sits at storage position 2k' on the signal grid's dual.
            for k in ki.iter_mut() {
                *k *= 2;
            }
            let v = ws.spectrum[ravel(&ki, n)];
            *o = Quaternion::exp_i(2.0 * su) * v * Quaternion::exp_j(2.0 * tv) * scale;
        }
    }
}

pub fn ambiguity(f: &SampledSignal, g: &SampledSignal) -> Result<PhaseSpaceField> {
    Ok(PhaseSpaceField::compute(&AmbiguityKernel::new(f, g)?))
}

pub fn wigner(f: &SampledSignal, g: &SampledSignal) -> Result<PhaseSpaceField> {
    Ok(PhaseSpaceField::compute(&WignerKernel::new(f, g)?))
}

fn cells(grid: &GridSpec, x: &[f64], step: f64) -> Result<Vec<i64>> {
    if x.len() != grid.rank() {
        return Err(Error::InvalidParameter(format!("point must lie in R^{}", grid.rank())));
    }
    x.iter()
        .map(|&v| {
            let c = v / step;
            let r = c.round();
            if (c - r).abs() > 1e-9 * c.abs().max(1.0) {
                Err(Error::NotGridAligned(format!("{v} is not a multiple of {step}")))
            } else {
                Ok(r as i64)
            }
        })
        .collect()
}

fn kernel_sum(
    grid: &GridSpec,
    w: &[f64],
    t_of: impl Fn(usize) -> f64,
    mut term: impl FnMut(usize) -> Quaternion,
) -> Quaternion {
    let (d, rank, n) = (grid.d, grid.rank(), grid.n_per_axis);
    let mut idx = vec![0; rank];
    let mut acc = Quaternion::ZERO;
    for flat in 0..grid.len() {
        unravel(flat, n, &mut idx);
        let su: f64 = (0..d).map(|a| t_of(idx[a]) * w[a]).sum();
        let tv: f64 = (d..rank).map(|a| t_of(idx[a]) * w[a]).sum();
        acc += Quaternion::exp_i(-su) * term(flat) * Quaternion::exp_j(-tv);
    }
    acc
}

/// Direct quadrature of `A(f, g)(x, w)`; `x/2` must be a whole number of cells.
pub fn ambiguity_point(f: &SampledSignal, g: &SampledSignal, x: &[f64], w: &[f64]) -> Result<Quaternion> {
    check_pair(f, g)?;
    let grid = f.grid;
    let r = cells(&grid, x, 2.0 * grid.spacing())?;
    if w.len() != grid.rank() {
        return Err(Error::InvalidParameter(format!("w must lie in R^{}", grid.rank())));
    }
    let neg: Vec<i64> = r.iter().map(|v| -v).collect();
    let fs = f.shift_cells(&neg)?;
    let gs = g.shift_cells(&r)?;
    let coords = grid.coords();
    let acc = kernel_sum(&grid, w, |i| coords[i], |flat| fs.values[flat] * gs.values[flat].conj());
    Ok(acc * grid.weight())
}

/// Direct quadrature of `W(f, g)(x, w)` with `t = 2rΔ` over one period of `r`; `x` must be a node.
pub fn wigner_point(f: &SampledSignal, g: &SampledSignal, x: &[f64], w: &[f64]) -> Result<Quaternion> {
    check_pair(f, g)?;
    let grid = f.grid;
    let h = grid.spacing();
    let xc = cells(&grid, x, h)?;
    if w.len() != grid.rank() {
        return Err(Error::InvalidParameter(format!("w must lie in R^{}", grid.rank())));
    }
    let (n, rank) = (grid.n_per_axis as i64, grid.rank());
    let half = n / 2;
    let m: Vec<i64> = xc.iter().map(|c| c + half).collect();
    let mut idx = vec![0; rank];
    let (mut fi, mut gi) = (vec![0; rank], vec![0; rank]);
    let t_of = |i: usize| 2.0 * (i as i64 - half) as f64 * h;
    let acc = kernel_sum(&grid, w, t_of, |flat| {
        unravel(flat, grid.n_per_axis, &mut idx);
        for a in 0..rank {
            let r = idx[a] as i64 - half;
            fi[a] = (m[a] + r).rem_euclid(n) as usize;
            gi[a] = (m[a] - r).rem_euclid(n) as usize;
        }
        f.values[ravel(&fi, grid.n_per_axis)] * g.values[ravel(&gi, grid.n_per_axis)].conj()
    });
    let weight = (2.0 * h).powi(rank as i32) / (2.0 * std::f64::consts::PI).powi(grid.d as i32);
    Ok(acc * weight)
}

/// Maximum deviations of `A` from `e^{i w₁·x₁/2} G_g f e^{j w₂·x₂/2}` and of `|A|` from
/// `|G_g f|` over every node of `A`, relative to `max|G_g f|`.
pub fn ambiguity_relation_check(f: &SampledSignal, g: &SampledSignal, tol: f64) -> Result<[InequalityReport; 2]> {
    let ak = AmbiguityKernel::new(f, g)?;
    let gk = QwftKernel::new(f, g)?;
    let grid = f.grid;
    let (n, d, rank) = (grid.n_per_axis, grid.d, grid.rank());
    let (xa, wg) = (ak.x_grid(), ak.w_grid());
    let nw = wg.len();
    let parts: Vec<(f64, f64, f64)> = (0..xa.len())
        .into_par_iter()
        .map_init(
            || (ak.workspace(), vec![Quaternion::ZERO; nw], vec![Quaternion::ZERO; nw], vec![0; rank], vec![0; rank]),
            |(ws, a, gv, mi, ki), m| {
                ak.slab(m, ws, a);
                unravel(m, n / 2, mi);
                let x: Vec<f64> = mi.iter().map(|&i| xa.coord(i)).collect();
                for i in mi.iter_mut() {
                    *i *= 2;
                }
                gk.slab(ravel(mi, n), ws, gv);
                let (mut phase, mut modulus, mut peak) = (0.0f64, 0.0f64, 0.0f64);
                for k in 0..nw {
                    unravel(k, n, ki);
                    let su: f64 = (0..d).map(|i| wg.coord(ki[i]) * x[i]).sum();
                    let tv: f64 = (d..rank).map(|i| wg.coord(ki[i]) * x[i]).sum();
                    let want = Quaternion::exp_i(0.5 * su) * gv[k] * Quaternion::exp_j(0.5 * tv);
                    phase = phase.max((a[k] - want).norm());
                    modulus = modulus.max((a[k].norm() - gv[k].norm()).abs());
                    peak = peak.max(gv[k].norm());
                }
                (phase, modulus, peak)
            },
        )
        .collect();
    let peak = parts.iter().map(|p| p.2).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let phase = parts.iter().map(|p| p.0).fold(0.0, f64::max) / peak;
    let modulus = parts.iter().map(|p| p.1).fold(0.0, f64::max) / peak;
    Ok([
        InequalityReport::equality("qaf-qwft-modulus-relation", modulus, tol).grid(&grid),
        InequalityReport::equality("qaf-qwft-phase-relation", phase, tol).grid(&grid),
    ])
}

/// Maximum deviations of `W` from `2^{2d} e^{2i w₁·x₁} G_ǧ f(2x, 2w) e^{2j w₂·x₂}` and of `|W|`
/// from `2^{2d}|G_ǧ f(2x, 2w)|`, relative to `max|W|`.
///
/// Every stored node has `(2x, 2w)` on the signal grid and its dual, so no node is excluded;
/// the excluded count is still reported.
pub fn wigner_relation_check(f: &SampledSignal, g: &SampledSignal, tol: f64) -> Result<[InequalityReport; 2]> {
    let wk = WignerKernel::new(f, g)?;
    let gk = QwftKernel::new(f, &g.reflect())?;
    let grid = f.grid;
    let (n, d, rank) = (grid.n_per_axis, grid.d, grid.rank());
    let (xw, ww) = (wk.x_grid(), wk.w_grid());
    let (nh, nw, nfull) = (n / 2, ww.len(), grid.len());
    let scale = (1u64 << (2 * d)) as f64;
    let parts: Vec<(f64, f64, f64, usize)> = (0..xw.len())
        .into_par_iter()
        .map_init(
            || {
                (
                    wk.workspace(),
                    vec![Quaternion::ZERO; nw],
                    vec![Quaternion::ZERO; nfull],
                    vec![0; rank],
                    vec![0; rank],
                )
            },
            |(ws, wv, gv, mi, ki), m| {
                wk.slab(m, ws, wv);
                unravel(m, nh, mi);
                let x: Vec<f64> = mi.iter().map(|&i| xw.coord(i)).collect();
                // 2x is signal-grid node 2(m + N/4) − N/2 = 2m.
                let doubled: Vec<usize> = mi.iter().map(|&i| 2 * i).collect();
                if doubled.iter().any(|&i| i >= n) {
                    return (0.0, 0.0, 0.0, nw);
                }
                gk.slab(ravel(&doubled, n), ws, gv);
                let (mut phase, mut modulus, mut peak) = (0.0f64, 0.0f64, 0.0f64);
                for (k, v) in wv.iter().enumerate() {
                    unravel(k, nh, ki);
                    let su: f64 = (0..d).map(|i| ww.coord(ki[i]) * x[i]).sum();
                    let tv: f64 = (d..rank).map(|i| ww.coord(ki[i]) * x[i]).sum();
                    for i in ki.iter_mut() {
                        *i *= 2;
                    }
                    let gval = gv[ravel(ki, n)] * scale;
                    let want = Quaternion::exp_i(2.0 * su) * gval * Quaternion::exp_j(2.0 * tv);
                    phase = phase.max((*v - want).norm());
                    modulus = modulus.max((v.norm() - gval.norm()).abs());
                    peak = peak.max(v.norm());
                }
                (phase, modulus, peak, 0)
            },
        )
        .collect();
    let peak = parts.iter().map(|p| p.2).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let phase = parts.iter().map(|p| p.0).fold(0.0, f64::max) / peak;
    let modulus = parts.iter().map(|p| p.1).fold(0.0, f64::max) / peak;
    let excluded = parts.iter().map(|p| p.3).sum::<usize>() as f64;
    Ok([
        InequalityReport::equality("qwvt-qwft-modulus-relation", modulus, tol)
            .param("excluded_nodes", excluded)
            .grid(&grid),
        InequalityReport::equality("qwvt-qwft-phase-relation", phase, tol)
            .param("excluded_nodes", excluded)
            .grid(&grid),
    ])
}

/// `A(f, g)(0, ·) = F_Q(f·ḡ)`, relative to `max|F_Q(f·ḡ)|`.
pub fn ambiguity_origin_check(f: &SampledSignal, g: &SampledSignal, tol: f64) -> Result<InequalityReport> {
    let ak = AmbiguityKernel::new(f, g)?;
    let grid = f.grid;
    let origin = ravel(&vec![grid.n_per_axis / 4; grid.rank()], grid.n_per_axis / 2);
    let mut ws = ak.workspace();
    let mut slab = vec![Quaternion::ZERO; ak.w_grid().len()];
    ak.slab(origin, &mut ws, &mut slab);
    let want = qft_fast(&f.mul(&g.conj())?)?;
    let peak = want.lp_norm(f64::INFINITY)?.max(f64::MIN_POSITIVE);
    let dev = slab.iter().zip(&want.values).map(|(a, b)| (*a - *b).norm()).fold(0.0, f64::max) / peak;
    Ok(InequalityReport::equality("qaf-origin-slab", dev, tol).grid(&grid))
}

/// `μ(2U) = 2^{4d} μ(U)` for the box `U = [−hx, hx)^{2d} × [−hw, hw)^{2d}`, counted on the grids.
///
/// Exact when `hx` and `hw` are whole multiples of the spacings and `2U` fits on the grids.
pub fn measure_scaling_check(x_grid: GridSpec, w_grid: FrequencyGrid, hx: f64, hw: f64) -> Result<InequalityReport> {
    let u = ConcentrationSet::centered_box(x_grid, w_grid, hx, hw)?;
    let v = ConcentrationSet::centered_box(x_grid, w_grid, 2.0 * hx, 2.0 * hw)?;
    if u.measure == 0.0 {
        return Err(Error::InvalidParameter("box contains no nodes".into()));
    }
    let want = (1u64 << (4 * x_grid.d)) as f64;
    let ratio = v.measure / u.measure;
    Ok(InequalityReport::equality("measure-scaling", (ratio - want).abs() / want, 1e-12)
        .constant("ratio", ratio)
        .param("hx", hx)
        .param("hw", hw)
        .grid(&x_grid))
}

/// `‖F‖² / (‖f‖²‖g‖²)` for a field built from `f` and `g`.
pub fn energy_ratio<P: PhaseSpace>(field: &P, f: &SampledSignal, g: &SampledSignal) -> f64 {
    field.norm_sqr() / (f.norm_sqr() * g.norm_sqr())
}
