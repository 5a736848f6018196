//! Named verification suites.
//!
//! A suite enumerates its inputs (the Gaussian family and seeded random pairs), runs every
//! check as an independent job and returns the reports in a fixed order. Phase-space fields
//! are streamed slab by slab, so memory stays bounded on fine grids.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{GaussianKind, SignalExpr};
use crate::grid::{GridSpec, Lattice};
use crate::phase_space::{ConcentrationSet, Distribution, Lazy, PhaseSpace, PhaseSpaceField, SlabKernel};
use crate::qft::{derivative_check, qft_fast};
use crate::qwft::{dilation_covariance_check, parseval_qwft_check, qwft, reconstruct, QwftKernel};
use crate::random::{band_limited, band_limited_pair};
use crate::report::InequalityReport;
use crate::signal::SampledSignal;
use crate::tfdist::{
    ambiguity_origin_check, ambiguity_relation_check, measure_scaling_check, wigner_relation_check, AmbiguityKernel,
    WignerKernel,
};
use crate::uncertainty::{
    component_heisenberg_qft_check, donoho_stark_check, entropy_bound_check, heisenberg_check, heisenberg_joint_check,
    lieb_check, lieb_concentration_check, lieb_support_check, local_price_check, log_uncertainty_check,
    log_uncertainty_qft_check, radial_heisenberg_qft_check, Subject,
};

/// Gaussian parameters used for signals and windows.
pub const GAUSSIAN_FAMILY: [f64; 4] = [0.25, 0.5, 1.0, 2.0];
/// Number of seeded random (signal, window) pairs.
pub const RANDOM_PAIRS: u64 = 20;
/// Tolerance for identities that hold exactly on the grid.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Tolerance for the ambiguity modulus relation and its origin value.
pub const RELATION_TOL: f64 = 1e-12;
/// Tolerance for the QWFT round trip.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;
pub const LIEB_EXPONENTS: [f64; 4] = [2.0, 2.5, 3.0, 4.0];
pub const CONCENTRATION_THRESHOLDS: [f64; 3] = [0.1, 0.3, 0.5];
pub const CONCENTRATION_EXPONENT: f64 = 4.0;
pub const HEISENBERG_EXPONENTS: [(f64, f64); 3] = [(1.0, 1.0), (1.0, 2.0), (2.0, 1.0)];
pub const PRICE_PARAMETERS: [(f64, f64); 3] = [(0.5, 1.0), (1.0, 2.0), (1.5, 3.0)];
pub const DILATIONS: [f64; 3] = [0.5, 1.0, 2.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Plancherel,
    Lieb,
    DonohoStark,
    Entropy,
    Logarithmic,
    Heisenberg,
    Price,
    Relations,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Plancherel,
        Suite::Lieb,
        Suite::DonohoStark,
        Suite::Entropy,
        Suite::Logarithmic,
        Suite::Heisenberg,
        Suite::Price,
        Suite::Relations,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Plancherel => "plancherel",
            Suite::Lieb => "lieb",
            Suite::DonohoStark => "donoho-stark",
            Suite::Entropy => "entropy",
            Suite::Logarithmic => "logarithmic",
            Suite::Heisenberg => "heisenberg",
            Suite::Price => "price",
            Suite::Relations => "relations",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite {s:?}")))
    }
}

/// A sampled (signal, window) pair with the parameters that identify it in reports.
#[derive(Clone, Debug)]
pub struct Case {
    pub f_expr: SignalExpr,
    pub g_expr: SignalExpr,
    pub f: SampledSignal,
    pub g: SampledSignal,
    pub tags: Vec<(&'static str, f64)>,
}

impl Case {
    pub fn new(
        grid: &GridSpec,
        f_expr: SignalExpr,
        g_expr: SignalExpr,
        tags: Vec<(&'static str, f64)>,
    ) -> Result<Self> {
        let f = f_expr.sample(grid)?;
        let g = g_expr.sample(grid)?;
        Ok(Self { f_expr, g_expr, f, g, tags })
    }

    pub fn gaussian(grid: &GridSpec, a: f64, b: f64) -> Result<Self> {
        Self::new(
            grid,
            SignalExpr::gaussian(a, a, GaussianKind::Signal),
            SignalExpr::gaussian(b, b, GaussianKind::Window),
            vec![("a", a), ("b", b)],
        )
    }

    pub fn random(grid: &GridSpec, seed: u64, index: u64) -> Result<Self> {
        let (f, g) = band_limited_pair(grid, seed, index)?;
        Self::new(grid, f, g, vec![("seed", seed as f64), ("index", index as f64)])
    }

    fn tag(&self, mut r: InequalityReport) -> InequalityReport {
        for &(k, v) in &self.tags {
            r = r.param(k, v);
        }
        r
    }
}

/// Every `(a, b)` of the Gaussian family.
pub fn gaussian_cases(grid: &GridSpec) -> Result<Vec<Case>> {
    GAUSSIAN_FAMILY
        .iter()
        .flat_map(|&a| GAUSSIAN_FAMILY.iter().map(move |&b| (a, b)))
        .map(|(a, b)| Case::gaussian(grid, a, b))
        .collect()
}

/// The `a = b` members of the Gaussian family.
pub fn matched_gaussian_cases(grid: &GridSpec) -> Result<Vec<Case>> {
    GAUSSIAN_FAMILY.iter().map(|&a| Case::gaussian(grid, a, a)).collect()
}

pub fn random_cases(grid: &GridSpec, seed: u64) -> Result<Vec<Case>> {
    (0..RANDOM_PAIRS).map(|i| Case::random(grid, seed, i)).collect()
}

/// Checks run against one phase-space field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FieldChecks {
    Lieb,
    Concentration,
    Entropy,
    Logarithmic,
    Heisenberg,
    Price,
}

/// Centered box half-widths `(hx, hw)` for the local Price check, nested.
pub fn price_boxes<P: PhaseSpace>(field: &P) -> [(f64, f64); 3] {
    let lx = -field.x_grid().origin();
    let lw = -field.w_grid().origin();
    [(lx / 4.0, lw / 4.0), (lx / 2.0, lw / 2.0), (lx, lw)]
}

/// Fields with at most this many nodes are materialized; larger ones are streamed.
pub const MATERIALIZE_LIMIT: usize = 1 << 21;

/// Runs `checks` on the field of `kind` built from `case`.
pub fn field_checks(case: &Case, kind: Distribution, checks: FieldChecks) -> Result<Vec<InequalityReport>> {
    let (f, g) = (&case.f, &case.g);
    let reports = match kind {
        Distribution::Qwft => run_kernel(QwftKernel::new(f, g)?, kind, case, checks),
        Distribution::Ambiguity => run_kernel(AmbiguityKernel::new(f, g)?, kind, case, checks),
        Distribution::Wigner => run_kernel(WignerKernel::new(f, g)?, kind, case, checks),
    }?;
    Ok(reports.into_iter().map(|r| case.tag(r)).collect())
}

fn run_kernel<K: SlabKernel>(
    kernel: K,
    kind: Distribution,
    case: &Case,
    checks: FieldChecks,
) -> Result<Vec<InequalityReport>> {
    if kernel.x_grid().len() * kernel.w_grid().len() <= MATERIALIZE_LIMIT {
        run_checks(&PhaseSpaceField::compute(&kernel), kind, case, checks)
    } else {
        run_checks(&Lazy::new(kernel), kind, case, checks)
    }
}

fn run_checks<P: PhaseSpace>(
    field: &P,
    kind: Distribution,
    case: &Case,
    checks: FieldChecks,
) -> Result<Vec<InequalityReport>> {
    let s = Subject::new(field, kind, &case.f, &case.g)?;
    let mut out = Vec::new();
    match checks {
        FieldChecks::Lieb => {
            for p in LIEB_EXPONENTS {
                out.push(lieb_check(&s, p)?);
            }
        }
        FieldChecks::Concentration => {
            for tau in CONCENTRATION_THRESHOLDS {
                let u = ConcentrationSet::super_level(field, tau)?;
                out.push(donoho_stark_check(&s, &u)?.param("tau", tau));
                out.push(lieb_concentration_check(&s, &u, CONCENTRATION_EXPONENT)?.param("tau", tau));
            }
            out.push(lieb_support_check(&s, CONCENTRATION_EXPONENT)?);
        }
        FieldChecks::Entropy => out.push(entropy_bound_check(&s)?),
        FieldChecks::Logarithmic => out.push(log_uncertainty_check(&s, &case.f)?),
        FieldChecks::Heisenberg => {
            for (p, q) in HEISENBERG_EXPONENTS {
                if kind != Distribution::Wigner {
                    out.push(heisenberg_check(&s, p, q)?);
                }
                out.push(heisenberg_joint_check(&s, p, q)?);
            }
        }
        FieldChecks::Price => {
            for (hx, hw) in price_boxes(field) {
                let set = ConcentrationSet::centered_box(field.x_grid(), field.w_grid(), hx, hw)?;
                for (eps, p) in PRICE_PARAMETERS {
                    out.push(local_price_check(&s, &set, eps, p)?.param("hx", hx).param("hw", hw));
                }
            }
        }
    }
    Ok(out)
}

/// `‖F_Q f‖ = ‖f‖`, relative deviation.
pub fn qft_plancherel_check(f: &SampledSignal) -> Result<InequalityReport> {
    let e = f.norm_sqr();
    if e == 0.0 {
        return Err(Error::ZeroInput("signal"));
    }
    let dev = (qft_fast(f)?.norm_sqr() - e).abs() / e;
    Ok(InequalityReport::equality("qft-plancherel", dev, IDENTITY_TOL).grid(&f.grid))
}

/// `‖G_g f‖ = ‖f‖‖g‖` (relative deviation) and `max|G_g f| ≤ ‖f‖‖g‖`.
pub fn qwft_norm_checks(f: &SampledSignal, g: &SampledSignal) -> Result<[InequalityReport; 2]> {
    let field = Lazy::new(QwftKernel::new(f, g)?);
    let want = f.norm_sqr() * g.norm_sqr();
    let dev = (field.norm_sqr() - want).abs() / want;
    Ok([
        InequalityReport::equality("qwft-plancherel", dev, IDENTITY_TOL).grid(&f.grid),
        InequalityReport::new("qwft-sup-bound", want.sqrt(), field.max_abs()).grid(&f.grid),
    ])
}

/// `f = reconstruct(G_g f, g)` for a real window, relative to `max|f|`.
pub fn reconstruction_check(f: &SampledSignal, g: &SampledSignal, tol: f64) -> Result<InequalityReport> {
    let back = reconstruct(&qwft(f, g)?, g)?;
    let peak = f.lp_norm(f64::INFINITY)?.max(f64::MIN_POSITIVE);
    let dev = f.values.iter().zip(&back.values).map(|(a, b)| (*a - *b).norm()).fold(0.0, f64::max) / peak;
    Ok(InequalityReport::equality("qwft-reconstruction", dev, tol).grid(&f.grid))
}

type Job<'a> = Box<dyn Fn() -> Result<Vec<InequalityReport>> + Send + Sync + 'a>;

fn job<'a>(run: impl Fn() -> Result<Vec<InequalityReport>> + Send + Sync + 'a) -> Job<'a> {
    Box::new(run)
}

fn field_jobs<'a>(cases: &'a [Case], kinds: &'a [Distribution], checks: FieldChecks) -> Vec<Job<'a>> {
    cases.iter().flat_map(|c| kinds.iter().map(move |&k| job(move || field_checks(c, k, checks)))).collect()
}

const QWFT: &[Distribution] = &[Distribution::Qwft];
const ALL_KINDS: &[Distribution] = &[Distribution::Qwft, Distribution::Ambiguity, Distribution::Wigner];
const TF_KINDS: &[Distribution] = &[Distribution::Ambiguity, Distribution::Wigner];

/// Inputs shared by the suites.
struct Inputs {
    grid: GridSpec,
    seed: u64,
    gaussians: Vec<Case>,
    matched: Vec<Case>,
    random: Vec<Case>,
}

impl Inputs {
    fn new(grid: &GridSpec, seed: u64) -> Result<Self> {
        grid.validate()?;
        Ok(Self {
            grid: *grid,
            seed,
            gaussians: gaussian_cases(grid)?,
            matched: matched_gaussian_cases(grid)?,
            random: random_cases(grid, seed)?,
        })
    }

    fn jobs(&self, suite: Suite) -> Vec<Job<'_>> {
        let grid = self.grid;
        let mut jobs: Vec<Job<'_>> = Vec::new();
        match suite {
            Suite::All => {
                for s in Suite::EACH {
                    jobs.extend(self.jobs(s));
                }
            }
            Suite::Plancherel => {
                for c in self.matched.iter().chain(&self.random) {
                    jobs.push(job(move || Ok(vec![c.tag(qft_plancherel_check(&c.f)?)])));
                }
                for c in self.gaussians.iter().chain(&self.random) {
                    jobs.push(job(move || Ok(qwft_norm_checks(&c.f, &c.g)?.map(|r| c.tag(r)).to_vec())));
                }
                for i in 0..5 {
                    let (a, b) = (&self.random[2 * i], &self.random[2 * i + 1]);
                    jobs.push(job(move || {
                        let r = parseval_qwft_check(&a.f, &b.f, &a.g, &b.g, IDENTITY_TOL)?;
                        Ok(vec![r.param("seed", self.seed as f64).param("index", (2 * i) as f64)])
                    }));
                }
            }
            Suite::Lieb => {
                jobs.extend(field_jobs(&self.gaussians, QWFT, FieldChecks::Lieb));
                jobs.extend(field_jobs(&self.random, QWFT, FieldChecks::Lieb));
            }
            Suite::DonohoStark => {
                jobs.extend(field_jobs(&self.gaussians, QWFT, FieldChecks::Concentration));
                jobs.extend(field_jobs(&self.random, QWFT, FieldChecks::Concentration));
                jobs.extend(field_jobs(&self.matched, TF_KINDS, FieldChecks::Concentration));
            }
            Suite::Entropy => {
                jobs.extend(field_jobs(&self.gaussians, QWFT, FieldChecks::Entropy));
                jobs.extend(field_jobs(&self.random, QWFT, FieldChecks::Entropy));
                jobs.extend(field_jobs(&self.matched, TF_KINDS, FieldChecks::Entropy));
            }
            Suite::Logarithmic => {
                for c in &self.matched {
                    for lambda in DILATIONS {
                        jobs.push(job(move || {
                            let f = c.f_expr.clone().dilate(lambda)?.sample(&grid)?;
                            Ok(vec![c.tag(log_uncertainty_qft_check(&f)?.param("lambda", lambda))])
                        }));
                    }
                }
                for c in &self.random {
                    jobs.push(job(move || Ok(vec![c.tag(log_uncertainty_qft_check(&c.f)?)])));
                }
                jobs.extend(field_jobs(&self.matched, ALL_KINDS, FieldChecks::Logarithmic));
            }
            Suite::Heisenberg => {
                for c in self.matched.iter().chain(&self.random) {
                    jobs.push(job(move || {
                        let mut out: Vec<InequalityReport> = (0..grid.rank())
                            .map(|axis| component_heisenberg_qft_check(&c.f, axis).map(|r| c.tag(r)))
                            .collect::<Result<_>>()?;
                        out.push(c.tag(radial_heisenberg_qft_check(&c.f)?));
                        Ok(out)
                    }));
                }
                jobs.extend(field_jobs(&self.matched, ALL_KINDS, FieldChecks::Heisenberg));
            }
            Suite::Price => {
                jobs.extend(field_jobs(&self.matched, ALL_KINDS, FieldChecks::Price));
            }
            Suite::Relations => {
                for c in self.matched.iter().chain(&self.random[..4]) {
                    jobs.push(job(move || {
                        let mut out = ambiguity_relation_check(&c.f, &c.g, RELATION_TOL)?.to_vec();
                        out.extend(wigner_relation_check(&c.f, &c.g, IDENTITY_TOL)?);
                        out.push(ambiguity_origin_check(&c.f, &c.g, RELATION_TOL)?);
                        Ok(out.into_iter().map(|r| c.tag(r)).collect())
                    }));
                }
                for c in &self.matched {
                    for (i, noise) in self.random[..2].iter().enumerate() {
                        jobs.push(job(move || {
                            let r = reconstruction_check(&noise.f, &c.g, RECONSTRUCTION_TOL)?;
                            Ok(vec![r.param("b", c.tags[1].1).param("seed", self.seed as f64).param("index", i as f64)])
                        }));
                    }
                }
                for lambda in [0.5, 2.0] {
                    jobs.push(job(move || {
                        let f = band_limited(&grid, self.seed, 2 * RANDOM_PAIRS)?;
                        let g = SignalExpr::gaussian(0.5, 0.5, GaussianKind::Window);
                        Ok(vec![dilation_covariance_check(&f, &g, &grid, lambda, IDENTITY_TOL)?])
                    }));
                }
                for axis in 0..grid.rank() {
                    jobs.push(job(move || {
                        let f = SignalExpr::gaussian(0.5, 0.5, GaussianKind::Signal);
                        Ok(derivative_check(&f, &grid, axis, 1e-6)?.to_vec())
                    }));
                }
                jobs.push(job(move || {
                    let (hx, hw) = (grid.half_extent / 4.0, -grid.dual().origin() / 4.0);
                    Ok(vec![measure_scaling_check(grid, grid.dual(), hx, hw)?])
                }));
            }
        }
        jobs
    }
}

/// Runs `suite` on `grid` with random inputs drawn from `seed`.
///
/// Jobs run in parallel; the output order is fixed by the enumeration, and every reduction is
/// summed in a fixed order, so the reports are identical from run to run.
pub fn run_suite(suite: Suite, grid: &GridSpec, seed: u64) -> Result<Vec<InequalityReport>> {
    let inputs = Inputs::new(grid, seed)?;
    let jobs = inputs.jobs(suite);
    let parts: Vec<Vec<InequalityReport>> = jobs.par_iter().map(|j| j()).collect::<Result<_>>()?;
    Ok(parts.into_iter().flatten().collect())
}

/// Counts of passing and failing reports.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

impl Summary {
    pub fn of(reports: &[InequalityReport]) -> Self {
        let passed = reports.iter().filter(|r| r.pass).count();
        Self { total: reports.len(), passed, failed: reports.len() - passed }
    }

    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}
