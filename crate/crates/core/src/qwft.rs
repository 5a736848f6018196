//! Windowed quaternion Fourier transform
//! `G_g f(x, w) = ∫ e^{−i t₁·w₁} f(t) conj(g(t − x)) e^{−j t₂·w₂} dμ(t)`, computed as
//! `F_Q(f·conj(T_x g))(w)` with one fast QFT per shift.
//!
//! `x` runs over the signal grid and `w` over its dual; `T_x` is the cyclic shift, so the
//! discrete Plancherel identity `‖G_g f‖ = ‖f‖‖g‖` is exact.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::SignalExpr;
use crate::grid::{ravel, unravel, FrequencyGrid, GridSpec, Lattice};
use crate::phase_space::{Lazy, PhaseSpace, PhaseSpaceField, SlabKernel, Workspace};
use crate::qft::QftPlan;
use crate::quaternion::Quaternion;
use crate::report::InequalityReport;
use crate::signal::SampledSignal;

/// Rejects mismatched grids and a zero window.
pub(crate) fn check_pair(f: &SampledSignal, g: &SampledSignal) -> Result<()> {
    if f.grid != g.grid {
        return Err(Error::GridMismatch(format!("signal on {:?}, window on {:?}", f.grid, g.grid)));
    }
    if g.values.iter().all(|q| *q == Quaternion::ZERO) {
        return Err(Error::ZeroInput("window"));
    }
    Ok(())
}

/// Slab producer for `G_g f`.
#[derive(Clone, Debug)]
pub struct QwftKernel {
    f: SampledSignal,
    g_conj: Vec<Quaternion>,
}

impl QwftKernel {
    pub fn new(f: &SampledSignal, g: &SampledSignal) -> Result<Self> {
        check_pair(f, g)?;
        Ok(Self { f: f.clone(), g_conj: g.values.iter().map(|q| q.conj()).collect() })
    }
}

impl SlabKernel for QwftKernel {
    fn x_grid(&self) -> GridSpec {
        self.f.grid
    }

    fn w_grid(&self) -> FrequencyGrid {
        self.f.grid.dual()
    }

    fn workspace(&self) -> Workspace {
        Workspace::new(&self.f.grid).expect("validated grid")
    }

    fn slab(&self, m: usize, ws: &mut Workspace, out: &mut [Quaternion]) {
        let n = self.f.grid.n_per_axis;
        let half = n / 2;
        let rank = self.f.grid.rank();
        let mut mi = vec![0; rank];
        unravel(m, n, &mut mi);
        // t_n − x_m is node n − m + N/2.
        for (flat, h) in ws.input.iter_mut().enumerate() {
            unravel(flat, n, &mut ws.index);
            for (i, &mm) in ws.index.iter_mut().zip(&mi) {
                *i = (*i + n + half - mm) % n;
            }
            *h = self.f.values[flat] * self.g_conj[ravel(&ws.index, n)];
        }
        ws.plan.forward(&ws.input, out);
    }
}

/// The full field `G_g f`.
pub fn qwft(f: &SampledSignal, g: &SampledSignal) -> Result<PhaseSpaceField> {
    Ok(PhaseSpaceField::compute(&QwftKernel::new(f, g)?))
}

/// `G_g f` evaluated slab by slab on each pass, for grids too large to materialize.
pub fn qwft_lazy(f: &SampledSignal, g: &SampledSignal) -> Result<Lazy<QwftKernel>> {
    Ok(Lazy::new(QwftKernel::new(f, g)?))
}

/// Direct quadrature of `G_g f(x, w)` at one grid-aligned `x` and any `w`.
pub fn qwft_point(f: &SampledSignal, g: &SampledSignal, x: &[f64], w: &[f64]) -> Result<Quaternion> {
    check_pair(f, g)?;
    let grid = f.grid;
    let (d, rank, n) = (grid.d, grid.rank(), grid.n_per_axis);
    if x.len() != rank || w.len() != rank {
        return Err(Error::InvalidParameter(format!("x and w must lie in R^{rank}")));
    }
    let shifted = g.translate(x)?;
    let coords = grid.coords();
    let mut idx = vec![0; rank];
    let mut acc = Quaternion::ZERO;
    for flat in 0..f.len() {
        unravel(flat, n, &mut idx);
        let su: f64 = (0..d).map(|a| coords[idx[a]] * w[a]).sum();
        let tv: f64 = (d..rank).map(|a| coords[idx[a]] * w[a]).sum();
        acc += Quaternion::exp_i(-su) * (f.values[flat] * shifted.values[flat].conj()) * Quaternion::exp_j(-tv);
    }
    Ok(acc * grid.weight())
}

/// `Sc⟨G_{g1} f1, G_{g2} f2⟩ = Sc ∫ f1 (ḡ1, ḡ2) f̄2 dμ`, where `(ḡ1, ḡ2) = ∫ ḡ1 g2 dμ`.
///
/// Returns an equality report on the relative deviation.
pub fn parseval_qwft_check(
    f1: &SampledSignal,
    f2: &SampledSignal,
    g1: &SampledSignal,
    g2: &SampledSignal,
    tol: f64,
) -> Result<InequalityReport> {
    check_pair(f1, g1)?;
    check_pair(f2, g2)?;
    check_pair(f1, f2)?;
    let a = qwft_lazy(f1, g1)?;
    let b = qwft_lazy(f2, g2)?;
    let lhs = sc_inner_fields(&a, &b)?;
    let w = f1.grid.weight();
    let window: Quaternion = g1.values.iter().zip(&g2.values).map(|(p, q)| p.conj() * *q).sum::<Quaternion>() * w;
    let rhs = f1.values.iter().zip(&f2.values).map(|(p, q)| (*p * window * q.conj()).scalar()).sum::<f64>() * w;
    let scale = (f1.norm2() * f2.norm2() * g1.norm2() * g2.norm2()).max(f64::MIN_POSITIVE);
    let dev = (lhs - rhs).abs() / scale;
    Ok(InequalityReport::equality("qwft-parseval", dev, tol)
        .constant("lhs_inner", lhs)
        .constant("rhs_inner", rhs)
        .grid(&f1.grid))
}

/// `Σ Sc(F·conj(H)) w` over two fields on the same grids.
pub fn sc_inner_fields<A: PhaseSpace, B: PhaseSpace>(a: &A, b: &B) -> Result<f64> {
    if a.x_grid() != b.x_grid() || a.w_grid() != b.w_grid() {
        return Err(Error::GridMismatch("fields use different grids".into()));
    }
    // Holds all of `b` in memory.
    let nw = b.w_len();
    let bw = b.map_slabs(|_, s| s.to_vec());
    let parts = a.map_slabs(|m, s| {
        debug_assert_eq!(s.len(), nw);
        s.iter().zip(&bw[m]).map(|(p, q)| (*p * q.conj()).scalar()).sum::<f64>()
    });
    Ok(parts.iter().sum::<f64>() * a.cell_weight())
}

/// Inverts `G_g f` for a real window:
/// `f(t) = ‖g‖^{−2} Σ_x Σ_w e^{i t₁·w₁} G(x, w) g(t − x) e^{j t₂·w₂}` with the grid weights.
///
/// Each slab is inverse-transformed to `f·T_x g`, multiplied by `T_x g` and accumulated.
pub fn reconstruct(field: &PhaseSpaceField, g: &SampledSignal) -> Result<SampledSignal> {
    if !g.is_real() {
        return Err(Error::NonRealWindow);
    }
    let grid = g.grid;
    if field.x_grid != grid || field.w_grid != grid.dual() {
        return Err(Error::GridMismatch("field is not a windowed transform on the window's grid".into()));
    }
    let energy = g.norm_sqr();
    if energy == 0.0 {
        return Err(Error::ZeroInput("window"));
    }
    let (n, rank, len) = (grid.n_per_axis, grid.rank(), grid.len());
    let half = n / 2;
    let gr: Vec<f64> = g.values.iter().map(|q| q.q0).collect();
    const BLOCK: usize = 16;
    let blocks: Vec<Vec<Quaternion>> = (0..len)
        .collect::<Vec<_>>()
        .par_chunks(BLOCK)
        .map_init(
            || {
                (
                    QftPlan::new(&grid).expect("validated grid"),
                    vec![Quaternion::ZERO; len],
                    vec![0; rank],
                    vec![0; rank],
                )
            },
            |(plan, buf, mi, ti), ms| {
                let mut acc = vec![Quaternion::ZERO; len];
                for &m in ms {
                    plan.inverse(field.slab(m), buf);
                    unravel(m, n, mi);
                    for (t, a) in acc.iter_mut().enumerate() {
                        unravel(t, n, ti);
                        for (i, &mm) in ti.iter_mut().zip(mi.iter()) {
                            *i = (*i + n + half - mm) % n;
                        }
                        *a += buf[t] * gr[ravel(ti, n)];
                    }
                }
                acc
            },
        )
        .collect();
    let mut out = vec![Quaternion::ZERO; len];
    for b in &blocks {
        for (o, v) in out.iter_mut().zip(b) {
            *o += *v;
        }
    }
    let scale = grid.weight() / energy;
    SampledSignal::new(grid, out.into_iter().map(|q| q * scale).collect())
}

/// `G_g(f_λ)(x, w) = λ^{−2d} G_{g_{1/λ}}(f)(λx, w/λ)`.
///
/// The right side is computed on the grid with the same `N` and `L` scaled by `λ`, whose node
/// `m` is `λx_m` and whose dual node `k` is `w_k/λ`, so both sides compare index by index.
/// Reports the maximum deviation relative to `max|G_g(f_λ)|`.
pub fn dilation_covariance_check(
    f: &SignalExpr,
    g: &SignalExpr,
    grid: &GridSpec,
    lambda: f64,
    tol: f64,
) -> Result<InequalityReport> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("dilation factor {lambda} must be positive")));
    }
    let coarse = grid.scaled(lambda)?;
    let lhs = qwft(&f.clone().dilate(lambda)?.sample(grid)?, &g.sample(grid)?)?;
    let rhs = qwft(&f.sample(&coarse)?, &g.clone().dilate(1.0 / lambda)?.sample(&coarse)?)?;
    let factor = lambda.powi(-2 * grid.d as i32);
    let peak = lhs.max_abs().max(f64::MIN_POSITIVE);
    let dev = lhs.values.iter().zip(&rhs.values).map(|(a, b)| (*a - *b * factor).norm()).fold(0.0, f64::max) / peak;
    Ok(InequalityReport::equality("qwft-dilation-covariance", dev, tol).param("lambda", lambda).grid(grid))
}
