//! Two-sided quaternion Fourier transform
//! `F_Q f(u, v) = ∫ e^{−i s·u} f(s, t) e^{−j t·v} dμ(s, t)`.
//!
//! The fast path splits `f = f₊ + f₋`. Writing `f± = c±(1±k)/2` with complex `c±`, the
//! identities `(1+k)e^{−jθ} = e^{iθ}(1+k)` and `(1−k)e^{−jθ} = e^{−iθ}(1−k)` turn the
//! transform of `f₊` into a complex DFT with kernel `e^{−i(s·u − t·v)}` and that of `f₋`
//! into one with kernel `e^{−i(s·u + t·v)}`.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::SignalExpr;
use crate::fft::{transform_axis, Direction, Radix2};
use crate::grid::{unravel, FrequencyGrid, GridSpec, Lattice};
use crate::quaternion::Quaternion;
use crate::report::InequalityReport;
use crate::signal::{SampledSignal, Spectrum};

/// Reusable buffers for transforms on one grid. Cheap to clone; clones share the tables.
#[derive(Clone, Debug)]
pub struct QftPlan {
    grid: GridSpec,
    fft: Radix2,
    plus: Vec<Complex64>,
    minus: Vec<Complex64>,
    line: Vec<Complex64>,
    /// For each centered storage position: the DFT bin and whether `(−1)^{Σk}` is negative.
    perm: Arc<Vec<(usize, bool)>>,
}

impl QftPlan {
    pub fn new(grid: &GridSpec) -> Result<Self> {
        grid.validate()?;
        let (n, rank) = (grid.n_per_axis, grid.rank());
        let half = n / 2;
        let mut idx = vec![0; rank];
        let perm = (0..grid.len())
            .map(|pos| {
                unravel(pos, n, &mut idx);
                let mut bin = 0;
                let mut parity = 0;
                for &p in idx.iter() {
                    bin = bin * n + (p + half) % n;
                    parity += (p as i64 - half as i64).rem_euclid(2);
                }
                (bin, parity % 2 == 1)
            })
            .collect();
        Ok(Self {
            grid: *grid,
            fft: Radix2::new(n),
            plus: vec![Complex64::default(); grid.len()],
            minus: vec![Complex64::default(); grid.len()],
            line: Vec::with_capacity(n),
            perm: Arc::new(perm),
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn frequency_grid(&self) -> FrequencyGrid {
        self.grid.dual()
    }

    /// Forward transform of samples on `self.grid` into centered dual-grid order.
    pub fn forward(&mut self, input: &[Quaternion], out: &mut [Quaternion]) {
        for (i, q) in input.iter().enumerate() {
            let (p, m) = q.split_complex();
            self.plus[i] = p;
            self.minus[i] = m;
        }
        let (d, rank) = (self.grid.d, self.grid.rank());
        for axis in 0..rank {
            let dir = if axis < d { Direction::Forward } else { Direction::Backward };
            transform_axis(&self.fft, &mut self.plus, rank, axis, dir, &mut self.line);
            transform_axis(&self.fft, &mut self.minus, rank, axis, Direction::Forward, &mut self.line);
        }
        let w = self.grid.weight();
        for (o, &(bin, neg)) in out.iter_mut().zip(self.perm.iter()) {
            let s = if neg { -w } else { w };
            *o = Quaternion::from_split_complex(self.plus[bin] * s, self.minus[bin] * s);
        }
    }

    /// Inverse of [`forward`](Self::forward): quadrature of `∫ e^{i s·u} F e^{j t·v} dμ(u, v)`.
    pub fn inverse(&mut self, input: &[Quaternion], out: &mut [Quaternion]) {
        let ww = self.grid.dual().weight();
        for (q, &(bin, neg)) in input.iter().zip(self.perm.iter()) {
            let s = if neg { -ww } else { ww };
            let (p, m) = q.split_complex();
            self.plus[bin] = p * s;
            self.minus[bin] = m * s;
        }
        let (d, rank) = (self.grid.d, self.grid.rank());
        for axis in 0..rank {
            let dir = if axis < d { Direction::Backward } else { Direction::Forward };
            transform_axis(&self.fft, &mut self.plus, rank, axis, dir, &mut self.line);
            transform_axis(&self.fft, &mut self.minus, rank, axis, Direction::Backward, &mut self.line);
        }
        for (i, o) in out.iter_mut().enumerate() {
            *o = Quaternion::from_split_complex(self.plus[i], self.minus[i]);
        }
    }
}

/// Spatial grid whose dual is `w`.
pub fn spatial_of(w: &FrequencyGrid) -> Result<GridSpec> {
    GridSpec::new(w.d, w.n_per_axis, std::f64::consts::PI / w.spacing)
}

/// Fast QFT on the DFT-dual grid.
pub fn qft_fast(f: &SampledSignal) -> Result<Spectrum> {
    let mut plan = QftPlan::new(&f.grid)?;
    let mut out = vec![Quaternion::ZERO; f.len()];
    plan.forward(&f.values, &mut out);
    Spectrum::new(f.grid.dual(), out)
}

/// Inverse QFT back onto the spatial grid that `spec` is dual to.
pub fn iqft(spec: &Spectrum) -> Result<SampledSignal> {
    let grid = spatial_of(&spec.grid)?;
    let mut plan = QftPlan::new(&grid)?;
    let mut out = vec![Quaternion::ZERO; spec.len()];
    plan.inverse(&spec.values, &mut out);
    SampledSignal::new(grid, out)
}

/// Quadrature `Σ e^{−i s·u} f(s, t) e^{−j t·v} w` at arbitrary frequencies `(u, v)`.
pub fn qft_direct(f: &SampledSignal, freqs: &[Vec<f64>]) -> Result<Vec<Quaternion>> {
    let g = f.grid;
    let (d, rank, n) = (g.d, g.rank(), g.n_per_axis);
    if let Some(bad) = freqs.iter().find(|w| w.len() != rank) {
        return Err(Error::InvalidParameter(format!("frequency {bad:?} is not in R^{rank}")));
    }
    let coords = g.coords();
    let w = g.weight();
    Ok(freqs
        .par_iter()
        .map_init(
            || vec![0usize; rank],
            |idx, uv| {
                let mut acc = Quaternion::ZERO;
                for (flat, val) in f.values.iter().enumerate() {
                    unravel(flat, n, idx);
                    let mut su = 0.0;
                    let mut tv = 0.0;
                    for a in 0..d {
                        su += coords[idx[a]] * uv[a];
                        tv += coords[idx[d + a]] * uv[d + a];
                    }
                    acc += Quaternion::exp_i(-su) * *val * Quaternion::exp_j(-tv);
                }
                acc * w
            },
        )
        .collect())
}

/// Derivative theorem on a closed-form signal.
///
/// For a first-block axis `F_Q(∂f/∂s_p) = i·u_p·F_Q f`; for a second-block axis
/// `F_Q(∂f/∂t_p) = F_Q f·j·v_p`. Also checks `∫|∂f|² dμ = ∫ w_p² |F_Q f|² dμ`.
/// Returns (pointwise, norm identity) with absolute and relative deviations respectively.
pub fn derivative_check(expr: &SignalExpr, grid: &GridSpec, axis: usize, tol: f64) -> Result<[InequalityReport; 2]> {
    let rank = grid.rank();
    if axis >= rank {
        return Err(Error::InvalidParameter(format!("axis {axis} out of range for {rank} axes")));
    }
    expr.partial(&vec![0.0; rank], axis)?;
    let f = expr.sample(grid)?;
    let df = SampledSignal::from_fn(*grid, |x| expr.partial(x, axis).unwrap_or(Quaternion::ZERO))?;
    let ff = qft_fast(&f)?;
    let fdf = qft_fast(&df)?;
    let wg = ff.grid;
    let n = wg.n_per_axis;
    let mut idx = vec![0; rank];
    let mut dev: f64 = 0.0;
    let mut moment = 0.0;
    for pos in 0..ff.len() {
        unravel(pos, n, &mut idx);
        let wp = wg.coord(idx[axis]);
        let predicted =
            if axis < grid.d { Quaternion::I * ff.values[pos] * wp } else { ff.values[pos] * Quaternion::J * wp };
        dev = dev.max((fdf.values[pos] - predicted).norm());
        moment += wp * wp * ff.values[pos].norm_sqr();
    }
    moment *= wg.weight();
    let energy = df.norm_sqr();
    let scale = energy.abs().max(moment.abs());
    let rel = if scale == 0.0 { 0.0 } else { (energy - moment).abs() / scale };
    let params = |r: InequalityReport| r.param("axis", axis as f64).grid(grid);
    Ok([
        params(InequalityReport::equality("qft-derivative-theorem", dev, tol)),
        params(InequalityReport::equality("qft-derivative-norm-identity", rel, tol)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{GaussianKind, GaussianSpec};
    use crate::grid::point;
    use crate::random::band_limited;

    fn max_dev(a: &[Quaternion], b: &[Quaternion]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (*x - *y).norm()).fold(0.0, f64::max)
    }

    fn max_abs(a: &[Quaternion]) -> f64 {
        a.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn fast_matches_direct_on_small_grids() {
        for grid in [GridSpec::new(1, 8, 2.0).unwrap(), GridSpec::new(2, 4, 1.5).unwrap()] {
            let f = SampledSignal::from_fn(grid, |x| {
                let s: f64 = x.iter().enumerate().map(|(i, v)| (i + 1) as f64 * v).sum();
                Quaternion::new(s.sin(), s.cos() * 0.3, x[0] - 0.2, (x[1] * x[0]).tanh())
            })
            .unwrap();
            let fast = qft_fast(&f).unwrap();
            let freqs: Vec<Vec<f64>> = (0..fast.len()).map(|k| point(&fast.grid, k)).collect();
            let direct = qft_direct(&f, &freqs).unwrap();
            assert!(max_dev(&fast.values, &direct) < 1e-12 * max_abs(&direct));
        }
    }

    #[test]
    fn zero_maps_to_zero() {
        let g = GridSpec::new(1, 8, 2.0).unwrap();
        let z = SampledSignal::zeros(g);
        assert!(qft_fast(&z).unwrap().values.iter().all(|q| *q == Quaternion::ZERO));
        assert!(qft_direct(&z, &[vec![0.3, 0.1]]).unwrap()[0] == Quaternion::ZERO);
        assert!(iqft(&Spectrum::zeros(g.dual())).unwrap().values.iter().all(|q| *q == Quaternion::ZERO));
    }

    #[test]
    fn real_even_signal_has_real_transform() {
        let g = GridSpec::desk();
        // Fast decay so the unpaired node at −L contributes below rounding.
        let f = SignalExpr::gaussian(2.0, 2.0, GaussianKind::SeparableAxes).sample(&g).unwrap();
        let freqs = vec![vec![0.7, -1.3], vec![-0.7, 1.3]];
        let v = qft_direct(&f, &freqs).unwrap();
        for q in &v {
            assert!(q.q1.abs() + q.q2.abs() + q.q3.abs() < 1e-13 * q.norm());
        }
        assert!((v[0] - v[1]).norm() < 1e-13 * v[0].norm());
    }

    #[test]
    fn mirrored_frequencies_of_real_odd_in_s() {
        // f real, odd in s and even in t: F_Q f is i-valued and odd under (u, v) → (−u, −v).
        let g = GridSpec::desk();
        let f =
            SampledSignal::from_fn(g, |x| Quaternion::real(x[0] * (-(x[0] * x[0] + x[1] * x[1]) / 2.0).exp())).unwrap();
        let v = qft_direct(&f, &[vec![0.9, 0.4], vec![-0.9, -0.4]]).unwrap();
        assert!((v[0].q1 + v[1].q1).abs() < 1e-14);
        assert!((v[0].q0 - v[1].q0).abs() < 1e-14);
        assert!(v[0].q1.abs() > 0.1);
    }

    #[test]
    fn roundtrip_and_plancherel() {
        let g = GridSpec::desk();
        let f = band_limited(&g, 5, 0).unwrap().sample(&g).unwrap();
        let ff = qft_fast(&f).unwrap();
        assert!((ff.norm2() - f.norm2()).abs() < 1e-12 * f.norm2());
        let back = iqft(&ff).unwrap();
        assert!(max_dev(&back.values, &f.values) < 1e-12 * max_abs(&f.values));
    }

    #[test]
    fn parseval_and_split_identity() {
        let g = GridSpec::desk();
        let f = band_limited(&g, 9, 0).unwrap().sample(&g).unwrap();
        let h = band_limited(&g, 9, 1).unwrap().sample(&g).unwrap();
        let (ff, fh) = (qft_fast(&f).unwrap(), qft_fast(&h).unwrap());
        let lhs = ff.sc_inner(&fh).unwrap();
        let rhs = f.sc_inner(&h).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
        let plus = SampledSignal::new(g, f.values.iter().map(|q| q.split().0).collect()).unwrap();
        let minus = SampledSignal::new(g, f.values.iter().map(|q| q.split().1).collect()).unwrap();
        let (fp, fm) = (qft_fast(&plus).unwrap(), qft_fast(&minus).unwrap());
        for i in 0..ff.len() {
            let lhs = ff.values[i].norm_sqr();
            let rhs = fp.values[i].norm_sqr() + fm.values[i].norm_sqr();
            assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs));
        }
    }

    #[test]
    fn linear_over_real_scalars_only() {
        let g = GridSpec::new(1, 8, 2.0).unwrap();
        let f = band_limited(&g, 1, 0).unwrap().sample(&g).unwrap();
        let h = band_limited(&g, 1, 1).unwrap().sample(&g).unwrap();
        let c = 0.37;
        let lhs = qft_fast(&f.add(&h.scale(c)).unwrap()).unwrap();
        let rhs = qft_fast(&f).unwrap().add(&qft_fast(&h).unwrap().scale(c)).unwrap();
        assert!(max_dev(&lhs.values, &rhs.values) < 1e-13);
        // A quaternion constant does not pass through the two-sided kernel.
        let fk = SampledSignal::new(g, f.values.iter().map(|q| *q * Quaternion::K).collect()).unwrap();
        let rk: Vec<Quaternion> = qft_fast(&f).unwrap().values.iter().map(|q| *q * Quaternion::K).collect();
        assert!(max_dev(&qft_fast(&fk).unwrap().values, &rk) > 1e-3);
    }

    #[test]
    fn gaussian_closed_form_on_desk_grid() {
        let g = GridSpec::desk();
        let spec = GaussianSpec::new(1.0, 0.5, GaussianKind::SeparableAxes).unwrap();
        let f = SignalExpr::Gaussian(spec).sample(&g).unwrap();
        let ff = qft_fast(&f).unwrap();
        let mut err: f64 = 0.0;
        for k in 0..ff.len() {
            err = err.max((ff.values[k].q0 - spec.qft_closed(&point(&ff.grid, k))).abs());
        }
        // The b = 1/2 axis is truncated at e^{−bL²/2} ≈ 1e−7.
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn derivative_theorem_both_blocks() {
        let g = GridSpec::desk();
        let e = SignalExpr::gaussian(0.5, 0.5, GaussianKind::Signal);
        for axis in 0..2 {
            let [point, norm] = derivative_check(&e, &g, axis, 1e-6).unwrap();
            assert!(point.pass, "{point:?}");
            assert!(norm.pass, "{norm:?}");
        }
        let [z, zn] = derivative_check(&SignalExpr::Zero, &g, 0, 1e-6).unwrap();
        assert_eq!(z.rhs, 0.0);
        assert_eq!(zn.rhs, 0.0);
        assert!(derivative_check(&e, &g, 2, 1e-6).is_err());
    }
}
