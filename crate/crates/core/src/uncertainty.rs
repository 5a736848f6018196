//! Uncertainty-inequality constants and checks.
//!
//! Every check returns an [`InequalityReport`] with `lhs` the side that must be larger. Checks
//! on a phase-space field take a [`Subject`]: the field, which distribution it holds, and the
//! norms of the signal and window it was built from. Wigner fields carry the factor `2^{2d}`
//! in `|W| ≤ 2^{2d}‖f‖‖g‖`, which shifts several bounds; each check applies the stated variant.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::grid::{FrequencyGrid, GridSpec, Lattice};
use crate::phase_space::{ConcentrationSet, Distribution, PhaseSpace};
use crate::qft::qft_fast;
use crate::quaternion::Quaternion;
use crate::report::InequalityReport;
use crate::signal::SampledSignal;
use crate::special::{digamma, ln_gamma, origin_cell_log};

/// Relative threshold defining the discrete support `{|F| ≥ τ·max|F|}`.
pub const SUPPORT_THRESHOLD: f64 = 1e-12;

/// A phase-space field with the norms of the signal and window that produced it.
#[derive(Clone, Copy, Debug)]
pub struct Subject<'a, P> {
    pub field: &'a P,
    pub kind: Distribution,
    pub f_norm: f64,
    pub g_norm: f64,
}

impl<'a, P: PhaseSpace> Subject<'a, P> {
    pub fn new(field: &'a P, kind: Distribution, f: &SampledSignal, g: &SampledSignal) -> Result<Self> {
        let (f_norm, g_norm) = (f.norm2(), g.norm2());
        if f_norm == 0.0 {
            return Err(Error::ZeroInput("signal"));
        }
        if g_norm == 0.0 {
            return Err(Error::ZeroInput("window"));
        }
        Ok(Self { field, kind, f_norm, g_norm })
    }

    /// `‖f‖‖g‖`.
    pub fn norms(&self) -> f64 {
        self.f_norm * self.g_norm
    }

    fn d(&self) -> usize {
        self.field.x_grid().d
    }

    fn is_wigner(&self) -> bool {
        self.kind == Distribution::Wigner
    }

    /// `2^{−4d}` for Wigner fields, 1 otherwise.
    fn measure_factor(&self) -> f64 {
        if self.is_wigner() {
            0.5f64.powi(4 * self.d() as i32)
        } else {
            1.0
        }
    }

    fn name(&self, base: &str) -> String {
        format!("{base}-{}", self.kind.tag())
    }

    fn report(&self, base: &str, lhs: f64, rhs: f64) -> InequalityReport {
        InequalityReport::new(self.name(base), lhs, rhs)
            .param("d", self.d() as f64)
            .param("N", self.field.x_grid().n_per_axis as f64)
            .param("L", self.field.x_grid().half_extent)
            .param("f_norm", self.f_norm)
            .param("g_norm", self.g_norm)
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::InvalidParameter(format!("{name} = {v} must be positive")));
    }
    Ok(())
}

/// `C_{p,q} = (4/p)^{d/p} (1/q)^{d/q}` with `1/p + 1/q = 1`, for `p ≥ 2`.
pub fn lieb_constant(p: f64, d: usize) -> Result<f64> {
    if !(p.is_finite() && p >= 2.0) {
        return Err(Error::InvalidParameter(format!("Lieb exponent p = {p} must be at least 2")));
    }
    let q = p / (p - 1.0);
    let d = d as f64;
    Ok((4.0 / p).powf(d / p) * (1.0 / q).powf(d / q))
}

/// The form `(4/q)^{d/q} (1/p)^{d/p}` that appears inside the entropy argument.
pub fn lieb_constant_swapped(p: f64, d: usize) -> Result<f64> {
    lieb_constant(p, d)?;
    let q = p / (p - 1.0);
    let d = d as f64;
    Ok((4.0 / q).powf(d / q) * (1.0 / p).powf(d / p))
}

/// `D_{2d} = ψ(d/2) + ln 2`.
pub fn log_constant(d: usize) -> f64 {
    digamma(0.5 * d as f64) + LN_2
}

/// `B_{p,q} = 2^{2d} p q Γ(d)² / (Γ(d/p) Γ(d/q))`.
pub fn heisenberg_b(p: f64, q: f64, d: usize) -> Result<f64> {
    check_positive("p", p)?;
    check_positive("q", q)?;
    let dd = d as f64;
    let ln = 2.0 * dd * LN_2 + (p * q).ln() + 2.0 * ln_gamma(dd) - ln_gamma(dd / p) - ln_gamma(dd / q);
    Ok(ln.exp())
}

/// `E_{p,q} = [(p/q)^{q/(p+q)} + (q/p)^{p/(p+q)}]^{−1} exp(pq(2d ln 2 + ln B_{p,q})/(d(p+q)) − 1)`.
pub fn heisenberg_constant(p: f64, q: f64, d: usize) -> Result<f64> {
    let b = heisenberg_b(p, q, d)?;
    let dd = d as f64;
    let pre = (p / q).powf(q / (p + q)) + (q / p).powf(p / (p + q));
    let expo = p * q * (2.0 * dd * LN_2 + b.ln()) / (dd * (p + q)) - 1.0;
    Ok(expo.exp() / pre)
}

fn check_price_domain(eps: f64, p: f64, d: usize) -> Result<()> {
    let dd = 2.0 * d as f64;
    if !(eps > 0.0 && eps < dd) {
        return Err(Error::InvalidParameter(format!("ε = {eps} must lie in (0, {dd})")));
    }
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::InvalidParameter(format!("p = {p} must be at least 1")));
    }
    Ok(())
}

/// `M_{ε,p} = Δ^{p(p+1)}` with
/// `Δ = (2d+ε) / (2^{ε(2d+2p+2)/((2d+ε)(p+1))} ε^{2ε/(2d+ε)} Γ(2d)^{ε/((2d+ε)(p+1))}
///      (2d−ε)^{(2d−ε)/(2d+ε) + ε/((2d+ε)(p+1))})`.
pub fn local_price_constant(eps: f64, p: f64, d: usize) -> Result<f64> {
    check_price_domain(eps, p, d)?;
    let n = 2.0 * d as f64;
    let s = n + eps;
    let ln_den = eps * (n + 2.0 * p + 2.0) / (s * (p + 1.0)) * LN_2
        + 2.0 * eps / s * eps.ln()
        + eps / (s * (p + 1.0)) * ln_gamma(n)
        + ((n - eps) / s + eps / (s * (p + 1.0))) * (n - eps).ln();
    Ok((p * (p + 1.0) * (s.ln() - ln_den)).exp())
}

/// Exponent `k` in `N_{ε,p} = 2^k M_{ε,p}`: `2d(p−2)(p+1) + 4d + 4pdε/(2d+ε)`.
pub fn local_price_wigner_exponent(eps: f64, p: f64, d: usize) -> Result<f64> {
    check_price_domain(eps, p, d)?;
    let dd = d as f64;
    Ok(2.0 * dd * (p - 2.0) * (p + 1.0) + 4.0 * dd + 4.0 * p * dd * eps / (2.0 * dd + eps))
}

/// `N_{ε,p}`, the Wigner-field constant.
pub fn local_price_constant_wigner(eps: f64, p: f64, d: usize) -> Result<f64> {
    Ok(2f64.powf(local_price_wigner_exponent(eps, p, d)?) * local_price_constant(eps, p, d)?)
}

/// `ln|x|` per node, with the origin node replaced by the average of `ln|x|` over its cell.
pub fn log_norm_table<L: Lattice>(lattice: &L) -> Vec<f64> {
    let origin = origin_cell_log(lattice.spacing(), lattice.rank());
    lattice.norm_sqr_table().into_iter().map(|r2| if r2 == 0.0 { origin } else { 0.5 * r2.ln() }).collect()
}

/// `Σ φ(|x|², |w|², |F|²)` over all nodes, times the cell weight.
fn radial_integral<P: PhaseSpace>(field: &P, phi: impl Fn(f64, f64, f64) -> f64 + Sync) -> f64 {
    let x2 = field.x_grid().norm_sqr_table();
    let w2 = field.w_grid().norm_sqr_table();
    field.integrate(|m, k, q| phi(x2[m], w2[k], q.norm_sqr()))
}

/// `Σ_{U^c} |F|² / Σ |F|²`, square-rooted: the smallest `ε` with `‖χ_{U^c}F‖ ≤ ε‖F‖`.
pub fn epsilon_of<P: PhaseSpace>(field: &P, set: &ConcentrationSet) -> Result<f64> {
    set.matches(field)?;
    let nw = field.w_len();
    let parts = field.map_slabs(|m, slab| {
        let mask = &set.mask[m * nw..(m + 1) * nw];
        let mut inside = 0.0;
        let mut outside = 0.0;
        for (q, &keep) in slab.iter().zip(mask) {
            if keep {
                inside += q.norm_sqr();
            } else {
                outside += q.norm_sqr();
            }
        }
        (inside, outside)
    });
    let inside: f64 = parts.iter().map(|p| p.0).sum();
    let outside: f64 = parts.iter().map(|p| p.1).sum();
    let total = inside + outside;
    if total == 0.0 {
        return Err(Error::ZeroInput("field"));
    }
    Ok((outside / total).sqrt())
}

/// `μ(U) ≥ 1 − ε²`; Wigner fields use `2^{−4d}(1 − ε²)`.
pub fn donoho_stark_check<P: PhaseSpace>(s: &Subject<P>, set: &ConcentrationSet) -> Result<InequalityReport> {
    let eps = epsilon_of(s.field, set)?;
    let rhs = s.measure_factor() * (1.0 - eps * eps);
    Ok(s.report("donoho-stark", set.measure, rhs).param("epsilon", eps))
}

/// `‖G‖_p ≤ C_{p,q}‖f‖‖g‖`, with `lhs = C_{p,q}‖f‖‖g‖`, for windowed and ambiguity fields.
pub fn lieb_check<P: PhaseSpace>(s: &Subject<P>, p: f64) -> Result<InequalityReport> {
    if s.is_wigner() {
        return Err(Error::InvalidParameter("the Lieb bound is stated for windowed and ambiguity fields".into()));
    }
    let d = s.d();
    let c = lieb_constant(p, d)?;
    let alt = lieb_constant_swapped(p, d)?;
    let mut r = s
        .report("lieb", c * s.norms(), s.field.lp_norm(p)?)
        .constant("C_pq", c)
        .param("p", p)
        .param("q", p / (p - 1.0));
    if (alt - c).abs() > 1e-15 * c {
        r = r
            .constant("C_pq_swapped", alt)
            .note("the constant is also stated as (4/q)^{d/q}(1/p)^{d/p}; the checked form is (4/p)^{d/p}(1/q)^{d/q}");
    }
    Ok(r)
}

fn lieb_concentration_rhs(c: f64, eps: f64, p: f64) -> f64 {
    c.powf(2.0 * p / (2.0 - p)) * (1.0 - eps * eps).powf(p / (p - 2.0))
}

/// `μ(U) ≥ C_{p,q}^{2p/(2−p)} (1 − ε²)^{p/(p−2)}` for `p > 2`; Wigner fields add `2^{−4d}`.
pub fn lieb_concentration_check<P: PhaseSpace>(
    s: &Subject<P>,
    set: &ConcentrationSet,
    p: f64,
) -> Result<InequalityReport> {
    if p.is_nan() || p <= 2.0 {
        return Err(Error::InvalidParameter(format!("concentration exponent p = {p} must exceed 2")));
    }
    let c = lieb_constant(p, s.d())?;
    let eps = epsilon_of(s.field, set)?;
    let rhs = s.measure_factor() * lieb_concentration_rhs(c, eps, p);
    Ok(s.report("lieb-concentration", set.measure, rhs).constant("C_pq", c).param("p", p).param("epsilon", eps))
}

/// The support form: `μ(supp F) ≥ C_{p,q}^{2p/(2−p)}` with the support taken as
/// `{|F| ≥ 10^{−12} max|F|}` and `ε = 0`.
pub fn lieb_support_check<P: PhaseSpace>(s: &Subject<P>, p: f64) -> Result<InequalityReport> {
    if p.is_nan() || p <= 2.0 {
        return Err(Error::InvalidParameter(format!("concentration exponent p = {p} must exceed 2")));
    }
    let c = lieb_constant(p, s.d())?;
    let support = ConcentrationSet::super_level(s.field, SUPPORT_THRESHOLD)?;
    let rhs = s.measure_factor() * lieb_concentration_rhs(c, 0.0, p);
    Ok(s.report("lieb-support", support.measure, rhs).constant("C_pq", c).param("p", p).param("tau", SUPPORT_THRESHOLD))
}

/// `−Σ P ln P w` with `0 ln 0 = 0`.
pub fn entropy(density: &[f64], weight: f64) -> Result<f64> {
    if let Some(i) = density.iter().position(|&v| v.is_nan() || v < 0.0) {
        return Err(Error::NegativeDensity(i));
    }
    Ok(-density.iter().filter(|&&v| v > 0.0).map(|&v| v * v.ln()).sum::<f64>() * weight)
}

/// `E(|F|²)`.
pub fn field_entropy<P: PhaseSpace>(field: &P) -> f64 {
    field.integrate(|_, _, q| {
        let v = q.norm_sqr();
        if v > 0.0 {
            -v * v.ln()
        } else {
            0.0
        }
    })
}

/// `E(|F|²) ≥ ‖f‖²‖g‖²(2d ln 2 − ln(c‖f‖²‖g‖²))` with `c = 2^{4d}` for Wigner fields, else 1.
pub fn entropy_bound_check<P: PhaseSpace>(s: &Subject<P>) -> Result<InequalityReport> {
    let d = s.d() as f64;
    let n2 = s.norms().powi(2);
    let rhs = n2 * (2.0 * d * LN_2 - (n2 / s.measure_factor()).ln());
    Ok(s.report("entropy-bound", field_entropy(s.field), rhs))
}

fn log_moment<L: Lattice>(lattice: &L, values: &[Quaternion]) -> f64 {
    let table = log_norm_table(lattice);
    values.iter().zip(&table).map(|(q, l)| l * q.norm_sqr()).sum::<f64>() * lattice.weight()
}

/// `∫ ln|x| |f|² + ∫ ln|w| |F_Q f|² ≥ D_{2d}‖f‖²`.
pub fn log_uncertainty_qft_check(f: &SampledSignal) -> Result<InequalityReport> {
    let energy = f.norm_sqr();
    if energy == 0.0 {
        return Err(Error::ZeroInput("signal"));
    }
    let ff = qft_fast(f)?;
    let d = f.grid.d;
    let c = log_constant(d);
    let lhs = log_moment(&f.grid, &f.values) + log_moment(&ff.grid, &ff.values);
    Ok(InequalityReport::new("log-uncertainty-qft", lhs, c * energy).constant("D_2d", c).grid(&f.grid))
}

/// `∬ ln|w| |F|² + ‖g‖² ∫ ln|t| |f|² ≥ D ‖f‖²‖g‖²` with `D = D_{2d}`, or `D_{2d} − ln 2` for
/// Wigner fields. `f` must be the signal the field was built from.
pub fn log_uncertainty_check<P: PhaseSpace>(s: &Subject<P>, f: &SampledSignal) -> Result<InequalityReport> {
    let lw = log_norm_table(&s.field.w_grid());
    let freq = s.field.integrate(|_, k, q| lw[k] * q.norm_sqr());
    let lhs = freq + s.g_norm * s.g_norm * log_moment(&f.grid, &f.values);
    let mut c = log_constant(s.d());
    if s.is_wigner() {
        c -= LN_2;
    }
    Ok(s.report("log-uncertainty", lhs, c * s.norms().powi(2)).constant("D", c))
}

/// `(∫ x_p² |f|²)(∫ w_p² |F_Q f|²) ≥ ¼ (∫ |f|²)²` for one coordinate axis.
pub fn component_heisenberg_qft_check(f: &SampledSignal, axis: usize) -> Result<InequalityReport> {
    let rank = f.grid.rank();
    if axis >= rank {
        return Err(Error::InvalidParameter(format!("axis {axis} out of range for {rank} axes")));
    }
    let ff = qft_fast(f)?;
    let xm = axis_moment(&f.grid, &f.values, axis);
    let wm = axis_moment(&ff.grid, &ff.values, axis);
    let e = f.norm_sqr();
    Ok(InequalityReport::new("heisenberg-component-qft", xm * wm, 0.25 * e * e)
        .constant("x_moment", xm)
        .constant("w_moment", wm)
        .param("axis", axis as f64)
        .grid(&f.grid))
}

fn axis_moment<L: Lattice>(lattice: &L, values: &[Quaternion], axis: usize) -> f64 {
    let n = lattice.n_per_axis();
    let stride = n.pow((lattice.rank() - 1 - axis) as u32);
    values
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let c = lattice.coord((i / stride) % n);
            c * c * q.norm_sqr()
        })
        .sum::<f64>()
        * lattice.weight()
}

/// `(∫ |x|² |f|²)(∫ |w|² |F_Q f|²) ≥ ¼ (∫ |f|²)²`.
pub fn radial_heisenberg_qft_check(f: &SampledSignal) -> Result<InequalityReport> {
    let ff = qft_fast(f)?;
    let radial = |table: Vec<f64>, values: &[Quaternion], w: f64| -> f64 {
        values.iter().zip(&table).map(|(q, r)| r * q.norm_sqr()).sum::<f64>() * w
    };
    let xm = radial(f.grid.norm_sqr_table(), &f.values, f.grid.weight());
    let wm = radial(ff.grid.norm_sqr_table(), &ff.values, ff.grid.weight());
    let e = f.norm_sqr();
    Ok(InequalityReport::new("heisenberg-radial-qft", xm * wm, 0.25 * e * e)
        .constant("x_moment", xm)
        .constant("w_moment", wm)
        .grid(&f.grid))
}

/// `(∬ |x|^{2p}|F|²)^{q/(p+q)} (∬ |w|^{2q}|F|²)^{p/(p+q)} ≥ E_{p,q}‖f‖²‖g‖²`, for windowed
/// and ambiguity fields.
pub fn heisenberg_check<P: PhaseSpace>(s: &Subject<P>, p: f64, q: f64) -> Result<InequalityReport> {
    if s.is_wigner() {
        return Err(Error::InvalidParameter(
            "the separate-moment form applies to windowed and ambiguity fields; use the joint form".into(),
        ));
    }
    let e = heisenberg_constant(p, q, s.d())?;
    let xm = radial_integral(s.field, |x2, _, v| x2.powf(p) * v);
    let wm = radial_integral(s.field, |_, w2, v| w2.powf(q) * v);
    let lhs = xm.powf(q / (p + q)) * wm.powf(p / (p + q));
    Ok(s.report("heisenberg", lhs, e * s.norms().powi(2))
        .constant("E_pq", e)
        .constant("B_pq", heisenberg_b(p, q, s.d())?)
        .constant("x_moment", xm)
        .constant("w_moment", wm)
        .param("p", p)
        .param("q", q))
}

/// `‖|(x,w)|^p F‖^{q/(p+q)} ‖|(x,w)|^q F‖^{p/(p+q)} ≥ c √E_{p,q} ‖f‖‖g‖` with `c = 1`, or
/// `4^{−pq/(p+q)}` for Wigner fields.
///
/// `empirical_constant` is the largest `c√E` that would still pass.
pub fn heisenberg_joint_check<P: PhaseSpace>(s: &Subject<P>, p: f64, q: f64) -> Result<InequalityReport> {
    let e = heisenberg_constant(p, q, s.d())?;
    let np = radial_integral(s.field, |x2, w2, v| (x2 + w2).powf(p) * v).sqrt();
    let nq = radial_integral(s.field, |x2, w2, v| (x2 + w2).powf(q) * v).sqrt();
    let lhs = np.powf(q / (p + q)) * nq.powf(p / (p + q));
    let factor = if s.is_wigner() { 4f64.powf(-p * q / (p + q)) } else { 1.0 };
    Ok(s.report("heisenberg-joint", lhs, factor * e.sqrt() * s.norms())
        .constant("E_pq", e)
        .constant("factor", factor)
        .constant("empirical_constant", lhs / s.norms())
        .param("p", p)
        .param("q", q))
}

/// `M μ(Σ) ‖|(x,w)|^ε F‖^{4pd/(2d+ε)} (‖f‖‖g‖)^{p(p − (2d−ε)/(2d+ε))} ≥ ‖χ_Σ F‖_p^{p(p+1)}`,
/// with `M = M_{ε,p}`, or `N_{ε,p}` for Wigner fields.
pub fn local_price_check<P: PhaseSpace>(
    s: &Subject<P>,
    set: &ConcentrationSet,
    eps: f64,
    p: f64,
) -> Result<InequalityReport> {
    set.matches(s.field)?;
    let d = s.d();
    let dd = d as f64;
    let (key, k) = if s.is_wigner() {
        ("N_eps_p", local_price_constant_wigner(eps, p, d)?)
    } else {
        ("M_eps_p", local_price_constant(eps, p, d)?)
    };
    let weighted = radial_integral(s.field, |x2, w2, v| (x2 + w2).powf(eps) * v);
    let nw = s.field.w_len();
    let mass = s.field.integrate(|m, kk, q| if set.mask[m * nw + kk] { q.norm().powf(p) } else { 0.0 });
    let lhs = k
        * set.measure
        * weighted.powf(2.0 * p * dd / (2.0 * dd + eps))
        * s.norms().powf(p * (p - (2.0 * dd - eps) / (2.0 * dd + eps)));
    Ok(s.report("local-price", lhs, mass.powf(p + 1.0))
        .constant(key, k)
        .param("epsilon", eps)
        .param("p", p)
        .param("measure", set.measure)
        .note("the constant is transcribed from a derivation whose exponent contains visible typos"))
}

/// Measure of the whole grid: `(2L)^{2d}(NΔw)^{2d}/(2π)^{2d}`.
pub fn full_measure(x_grid: &GridSpec, w_grid: &FrequencyGrid) -> f64 {
    let d = x_grid.d as i32;
    let nw = w_grid.n_per_axis as f64 * w_grid.spacing;
    (2.0 * x_grid.half_extent).powi(2 * d) * nw.powi(2 * d) / (2.0 * std::f64::consts::PI).powi(2 * d)
}
