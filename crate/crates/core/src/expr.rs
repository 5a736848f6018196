//! Closed-form signals: the Gaussian family, seeded band-limited noise, and dilations of either.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::quaternion::Quaternion;
use crate::random::BandLimitedNoise;
use crate::signal::SampledSignal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GaussianKind {
    /// `(4a)^{d/2} e^{−a|x|²}`, unit norm.
    Signal,
    /// `(4b)^{d/2} e^{−b|x|²}`, unit norm.
    Window,
    /// `e^{−(a|x|² + b|y|²)/2}` with `x` the first `d` coordinates and `y` the last `d`.
    SeparableAxes,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianSpec {
    pub a: f64,
    pub b: f64,
    pub kind: GaussianKind,
}

impl GaussianSpec {
    pub fn new(a: f64, b: f64, kind: GaussianKind) -> Result<Self> {
        if !(a.is_finite() && a > 0.0 && b.is_finite() && b > 0.0) {
            return Err(Error::InvalidParameter(format!("Gaussian parameters a = {a}, b = {b} must be positive")));
        }
        Ok(Self { a, b, kind })
    }

    pub fn signal(a: f64) -> Self {
        Self { a, b: a, kind: GaussianKind::Signal }
    }

    pub fn window(b: f64) -> Self {
        Self { a: b, b, kind: GaussianKind::Window }
    }

    /// Decay rates `(α, β)` of `c·e^{−α|x|² − β|y|²}` and the amplitude `c`, for half-dimension `d`.
    pub fn exponents(&self, d: usize) -> (f64, f64, f64) {
        let d = d as f64;
        match self.kind {
            GaussianKind::Signal => (self.a, self.a, (4.0 * self.a).powf(0.5 * d)),
            GaussianKind::Window => (self.b, self.b, (4.0 * self.b).powf(0.5 * d)),
            GaussianKind::SeparableAxes => (0.5 * self.a, 0.5 * self.b, 1.0),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let d = x.len() / 2;
        let (al, be, c) = self.exponents(d);
        let (sx, sy) = split_sq(x);
        c * (-al * sx - be * sy).exp()
    }

    /// `∂f/∂x_axis`.
    pub fn partial(&self, x: &[f64], axis: usize) -> f64 {
        let d = x.len() / 2;
        let (al, be, _) = self.exponents(d);
        let rate = if axis < d { al } else { be };
        -2.0 * rate * x[axis] * self.eval(x)
    }

    /// Two-sided QFT at `w = (u, v)`; real because the Gaussian is real and even.
    pub fn qft_closed(&self, w: &[f64]) -> f64 {
        let d = w.len() / 2;
        let (al, be, c) = self.exponents(d);
        let (su, sv) = split_sq(w);
        // ∫ e^{−α s² − i s u} ds / √(2π) = (2α)^{−1/2} e^{−u²/(4α)} per axis.
        c * (2.0 * al).powf(-0.5 * d as f64)
            * (2.0 * be).powf(-0.5 * d as f64)
            * (-su / (4.0 * al) - sv / (4.0 * be)).exp()
    }

    /// `‖f‖²` in the normalized measure.
    pub fn norm_sqr_closed(&self, d: usize) -> f64 {
        let (al, be, c) = self.exponents(d);
        let dd = d as f64;
        c * c * (4.0 * al).powf(-0.5 * dd) * (4.0 * be).powf(-0.5 * dd)
    }
}

fn split_sq(x: &[f64]) -> (f64, f64) {
    let d = x.len() / 2;
    (x[..d].iter().map(|v| v * v).sum(), x[d..].iter().map(|v| v * v).sum())
}

/// `(1/(ab)^{d/2})·e^{−(|w|²/(2a) + |σ|²/(2b))}`, the QFT of `e^{−(a|x|² + b|y|²)/2}`.
pub fn gaussian_qft_closed(a: f64, b: f64, w: &[f64], sigma: &[f64]) -> Result<Quaternion> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidParameter(format!("a = {a}, b = {b} must be positive")));
    }
    if w.len() != sigma.len() {
        return Err(Error::InvalidParameter("w and σ must have the same dimension".into()));
    }
    let d = w.len() as f64;
    let sw: f64 = w.iter().map(|v| v * v).sum();
    let ss: f64 = sigma.iter().map(|v| v * v).sum();
    Ok(Quaternion::real((a * b).powf(-0.5 * d) * (-(sw / (2.0 * a) + ss / (2.0 * b))).exp()))
}

/// `|G_g f(x, w)|²` for `f = Signal(a)`, `g = Window(b)`.
pub fn gaussian_qwft_sq_closed(a: f64, b: f64, x: &[f64], w: &[f64]) -> f64 {
    let d = x.len() as f64 / 2.0;
    let sx: f64 = x.iter().map(|v| v * v).sum();
    let sw: f64 = w.iter().map(|v| v * v).sum();
    (4.0 * a * b).powf(d) / (a + b).powf(2.0 * d) * (-2.0 * a * b * sx / (a + b)).exp() * (-sw / (2.0 * (a + b))).exp()
}

/// A signal known in closed form, evaluable anywhere in ℝ^{2d}.
#[derive(Clone, Debug)]
pub enum SignalExpr {
    Zero,
    Gaussian(GaussianSpec),
    Noise(Arc<BandLimitedNoise>),
    /// `x ↦ inner(λx)`.
    Dilated {
        inner: Box<SignalExpr>,
        lambda: f64,
    },
}

impl SignalExpr {
    pub fn gaussian(a: f64, b: f64, kind: GaussianKind) -> Self {
        SignalExpr::Gaussian(GaussianSpec { a, b, kind })
    }

    pub fn eval(&self, x: &[f64]) -> Quaternion {
        match self {
            SignalExpr::Zero => Quaternion::ZERO,
            SignalExpr::Gaussian(g) => Quaternion::real(g.eval(x)),
            SignalExpr::Noise(n) => n.eval(x),
            SignalExpr::Dilated { inner, lambda } => {
                let y: Vec<f64> = x.iter().map(|v| v * lambda).collect();
                inner.eval(&y)
            }
        }
    }

    /// Analytic `∂f/∂x_axis`, available for Gaussians and their dilates.
    pub fn partial(&self, x: &[f64], axis: usize) -> Result<Quaternion> {
        if axis >= x.len() {
            return Err(Error::InvalidParameter(format!("axis {axis} out of range")));
        }
        match self {
            SignalExpr::Zero => Ok(Quaternion::ZERO),
            SignalExpr::Gaussian(g) => Ok(Quaternion::real(g.partial(x, axis))),
            SignalExpr::Noise(_) => Err(Error::InvalidParameter("no analytic derivative for noise signals".into())),
            SignalExpr::Dilated { inner, lambda } => {
                let y: Vec<f64> = x.iter().map(|v| v * lambda).collect();
                Ok(inner.partial(&y, axis)? * *lambda)
            }
        }
    }

    /// `f_λ(x) = f(λx)`.
    pub fn dilate(self, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("dilation factor {lambda} must be positive")));
        }
        Ok(match self {
            SignalExpr::Zero => SignalExpr::Zero,
            SignalExpr::Dilated { inner, lambda: l } => SignalExpr::Dilated { inner, lambda: l * lambda },
            other => SignalExpr::Dilated { inner: Box::new(other), lambda },
        })
    }

    pub fn sample(&self, grid: &GridSpec) -> Result<SampledSignal> {
        grid.validate()?;
        SampledSignal::from_fn(*grid, |x| self.eval(x))
    }
}

/// A signal spec document: `{d, n_per_axis, half_extent, kind, a, b}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalSpec {
    pub d: usize,
    pub n_per_axis: usize,
    pub half_extent: f64,
    pub kind: GaussianKind,
    pub a: f64,
    pub b: f64,
}

impl SignalSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text)?;
        spec.grid()?;
        spec.gaussian()?;
        Ok(spec)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.d, self.n_per_axis, self.half_extent)
    }

    pub fn gaussian(&self) -> Result<GaussianSpec> {
        GaussianSpec::new(self.a, self.b, self.kind)
    }

    pub fn expr(&self) -> Result<SignalExpr> {
        Ok(SignalExpr::Gaussian(self.gaussian()?))
    }

    pub fn sample(&self) -> Result<SampledSignal> {
        self.expr()?.sample(&self.grid()?)
    }
}
