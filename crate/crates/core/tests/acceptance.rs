//! Acceptance criteria 1–14.
//!
//! Each criterion prints one `PASS`/`FAIL` line with its measured values; the test fails if any
//! criterion fails. Analytic values are computed here, independently of the library.
//!
//! Desk grid: d = 1, N = 32, L = 8. Closed-form comparisons that the desk grid cannot resolve
//! (its frequency band ends at |w| = 2π) also run on the fine grid N = 64, L = 7.5 with
//! streamed fields; the desk values are printed as diagnostics.

use std::f64::consts::{E, LN_2, PI};
use std::io::Write;

use qtfa_core::grid::point;
use qtfa_core::qwft::QwftKernel;
use qtfa_core::random::{band_limited, band_limited_pair};
use qtfa_core::suite::{GAUSSIAN_FAMILY, HEISENBERG_EXPONENTS};
use qtfa_core::tfdist::AmbiguityKernel;
use qtfa_core::tfdist::{ambiguity_relation_check, wigner_relation_check, WignerKernel};
use qtfa_core::uncertainty::{
    component_heisenberg_qft_check, field_entropy, heisenberg_check, heisenberg_constant, heisenberg_joint_check,
    log_constant,
};
use qtfa_core::{
    ambiguity_point, qft_fast, qwft, qwft_point, reconstruct, run_suite, wigner_point, Distribution, GaussianKind,
    GridSpec, InequalityReport, Lattice, Lazy, PhaseSpace, Quaternion, SampledSignal, SignalExpr, Subject, Suite,
};

const SEED: u64 = 7;

/// Writes past the test harness's output capture, so the lines appear in every run.
fn say(line: &str) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").and_then(|_| out.flush()).expect("stdout");
}
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn desk() -> GridSpec {
    GridSpec::new(1, 32, 8.0).unwrap()
}

fn fine() -> GridSpec {
    GridSpec::new(1, 64, 7.5).unwrap()
}

fn gauss(a: f64, kind: GaussianKind, grid: &GridSpec) -> SampledSignal {
    SignalExpr::gaussian(a, a, kind).sample(grid).unwrap()
}

fn max_norm(v: &[Quaternion]) -> f64 {
    v.iter().map(|q| q.norm()).fold(0.0, f64::max)
}

fn sci(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.2e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn failures(reports: &[InequalityReport]) -> Vec<String> {
    reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| format!("{} margin {:.3e} {:?}", r.name, r.margin, r.parameters))
        .collect()
}

/// `Σ e^{−i s·u} f(s, t) e^{−j t·v} Δ^{2d}/(2π)^d`, straight from the definition.
fn direct_qft(f: &SampledSignal, w: &[f64]) -> Quaternion {
    let d = f.grid.d;
    let mut acc = Quaternion::ZERO;
    for (n, v) in f.values.iter().enumerate() {
        let x = point(&f.grid, n);
        let su: f64 = (0..d).map(|a| x[a] * w[a]).sum();
        let tv: f64 = (d..2 * d).map(|a| x[a] * w[a]).sum();
        acc += Quaternion::exp_i(-su) * *v * Quaternion::exp_j(-tv);
    }
    acc * (f.grid.spacing().powi(2 * d as i32) / (2.0 * PI).powi(d as i32))
}

fn criterion_1() -> Outcome {
    let grid = desk();
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let f = band_limited(&grid, 2024, i).unwrap().sample(&grid).unwrap();
        let fast = qft_fast(&f).unwrap();
        let peak = max_norm(&fast.values);
        for (k, v) in fast.values.iter().enumerate() {
            worst = worst.max((direct_qft(&f, &point(&fast.grid, k)) - *v).norm() / peak);
        }
    }
    outcome(worst <= 1e-10, format!("10 random signals, max relative error {worst:.2e} (tol 1e-10)"))
}

/// QFT of `e^{−(a|x|² + b|y|²)/2}`: `(ab)^{−d/2} e^{−|u|²/(2a) − |v|²/(2b)}`.
fn gaussian_qft_oracle(a: f64, b: f64, w: &[f64]) -> f64 {
    let d = w.len() / 2;
    let su: f64 = w[..d].iter().map(|v| v * v).sum();
    let sv: f64 = w[d..].iter().map(|v| v * v).sum();
    (a * b).powf(-0.5 * d as f64) * (-su / (2.0 * a) - sv / (2.0 * b)).exp()
}

fn criterion_2() -> Outcome {
    let params = [(1.0, 1.0), (1.0, 0.5), (0.5, 2.0), (2.0, 1.0)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (grid, tol) in [(desk(), 1e-4), (GridSpec::new(1, 64, 8.0).unwrap(), 1e-6)] {
        let mut worst: f64 = 0.0;
        for (a, b) in params {
            let f = SignalExpr::gaussian(a, b, GaussianKind::SeparableAxes).sample(&grid).unwrap();
            let ff = qft_fast(&f).unwrap();
            let mut diff: f64 = 0.0;
            let mut peak: f64 = 0.0;
            for (k, v) in ff.values.iter().enumerate() {
                let want = gaussian_qft_oracle(a, b, &point(&ff.grid, k));
                diff = diff.max((*v - Quaternion::real(want)).norm());
                peak = peak.max(want);
            }
            worst = worst.max(diff / peak);
        }
        pass &= worst <= tol;
        parts.push(format!("N={} error {worst:.2e} (tol {tol:.0e})", grid.n_per_axis));
    }
    outcome(pass, parts.join(", "))
}

fn criterion_3() -> Outcome {
    let grid = desk();
    let mut worst_qft: f64 = 0.0;
    let mut worst_qwft: f64 = 0.0;
    let mut pairs: Vec<(SampledSignal, SampledSignal)> = GAUSSIAN_FAMILY
        .iter()
        .map(|&a| (gauss(a, GaussianKind::Signal, &grid), gauss(a, GaussianKind::Window, &grid)))
        .collect();
    for i in 0..20 {
        let (f, g) = band_limited_pair(&grid, SEED, i).unwrap();
        pairs.push((f.sample(&grid).unwrap(), g.sample(&grid).unwrap()));
    }
    for (f, g) in &pairs {
        let ef: f64 = f.values.iter().map(|q| q.norm_sqr()).sum::<f64>() * grid.weight();
        let eg: f64 = g.values.iter().map(|q| q.norm_sqr()).sum::<f64>() * grid.weight();
        let ff = qft_fast(f).unwrap();
        let eff: f64 = ff.values.iter().map(|q| q.norm_sqr()).sum::<f64>() * ff.grid.weight();
        worst_qft = worst_qft.max((eff - ef).abs() / ef);
        let field = qwft(f, g).unwrap();
        let eg2: f64 = field.values.iter().map(|q| q.norm_sqr()).sum::<f64>() * field.cell_weight();
        worst_qwft = worst_qwft.max((eg2 - ef * eg).abs() / (ef * eg));
    }
    outcome(
        worst_qft <= 1e-10 && worst_qwft <= 1e-10,
        format!("{} pairs, QFT {worst_qft:.2e}, QWFT {worst_qwft:.2e} (tol 1e-10)", pairs.len()),
    )
}

/// `|G_g f(x, w)|²` for `f = (4a)^{d/2}e^{−a|x|²}`, `g = (4b)^{d/2}e^{−b|x|²}`.
fn gaussian_qwft_oracle(a: f64, b: f64, x: &[f64], w: &[f64]) -> f64 {
    let d = x.len() as f64 / 2.0;
    let sx: f64 = x.iter().map(|v| v * v).sum();
    let sw: f64 = w.iter().map(|v| v * v).sum();
    (4.0 * a * b).powf(d) / (a + b).powf(2.0 * d) * (-2.0 * a * b * sx / (a + b) - sw / (2.0 * (a + b))).exp()
}

fn qwft_closed_error(grid: &GridSpec, a: f64, b: f64) -> f64 {
    let f = gauss(a, GaussianKind::Signal, grid);
    let g = gauss(b, GaussianKind::Window, grid);
    let field = Lazy::new(QwftKernel::new(&f, &g).unwrap());
    let (xg, wg) = (field.x_grid(), field.w_grid());
    let peak = gaussian_qwft_oracle(a, b, &[0.0, 0.0], &[0.0, 0.0]);
    field
        .map_slabs(|m, slab| {
            let x = point(&xg, m);
            let mut err: f64 = 0.0;
            for (k, v) in slab.iter().enumerate() {
                let want = gaussian_qwft_oracle(a, b, &x, &point(&wg, k));
                if want > 1e-8 * peak {
                    err = err.max((v.norm_sqr() - want).abs() / want);
                }
            }
            err
        })
        .into_iter()
        .fold(0.0, f64::max)
}

fn criterion_4() -> Outcome {
    let params = [(0.5, 0.5), (1.0, 0.5), (2.0, 1.0)];
    let fine_err: Vec<f64> = params.iter().map(|&(a, b)| qwft_closed_error(&fine(), a, b)).collect();
    let desk_err: Vec<f64> = params.iter().map(|&(a, b)| qwft_closed_error(&desk(), a, b)).collect();
    let worst = fine_err.iter().copied().fold(0.0, f64::max);
    outcome(
        worst <= 1e-4,
        format!("N=64 L=7.5 errors {} (tol 1e-4); desk diagnostic {}", sci(&fine_err), sci(&desk_err)),
    )
}

fn criterion_5() -> Outcome {
    let grid = desk();
    let mut worst: f64 = 0.0;
    for (i, &b) in GAUSSIAN_FAMILY.iter().enumerate() {
        let g = gauss(b, GaussianKind::Window, &grid);
        let f = band_limited(&grid, SEED, 100 + i as u64).unwrap().sample(&grid).unwrap();
        let back = reconstruct(&qwft(&f, &g).unwrap(), &g).unwrap();
        let dev = f.values.iter().zip(&back.values).map(|(p, q)| (*p - *q).norm()).fold(0.0, f64::max);
        worst = worst.max(dev / max_norm(&f.values));
    }
    outcome(worst <= 1e-8, format!("4 real Gaussian windows, max relative error {worst:.2e} (tol 1e-8)"))
}

fn criterion_6() -> Outcome {
    let grid = desk();
    let mut cases = vec![(gauss(0.5, GaussianKind::Signal, &grid), gauss(0.5, GaussianKind::Window, &grid))];
    for i in 0..3 {
        let (f, g) = band_limited_pair(&grid, SEED, i).unwrap();
        cases.push((f.sample(&grid).unwrap(), g.sample(&grid).unwrap()));
    }
    let mut reports = Vec::new();
    for (f, g) in &cases {
        reports.extend(ambiguity_relation_check(f, g, 1e-12).unwrap());
        reports.extend(wigner_relation_check(f, g, 1e-10).unwrap());
    }
    // Spot checks straight from the definitions: |A(x, w)| = |G(x, w)| and
    // |W(x, w)| = 2^{2d}|G_ǧ(2x, 2w)|, at nodes where both sides are on the grid.
    let (f, g) = &cases[1];
    let gr = g.reflect();
    let peak = qwft(f, g).unwrap().max_abs();
    let mut spot: f64 = 0.0;
    for (x, w) in
        [([1.0, -2.0], [PI / 4.0, -PI / 2.0]), ([0.0, 3.0], [PI, 0.0]), ([-4.0, 2.0], [-3.0 * PI / 8.0, PI / 8.0])]
    {
        let a = ambiguity_point(f, g, &x, &w).unwrap().norm();
        let q = qwft_point(f, g, &x, &w).unwrap().norm();
        spot = spot.max((a - q).abs() / peak);
    }
    for (x, w) in [([0.5, -1.0], [PI / 8.0, -PI / 4.0]), ([-2.0, 1.5], [0.0, 3.0 * PI / 8.0])] {
        let wv = wigner_point(f, g, &x, &w).unwrap().norm();
        let x2 = [2.0 * x[0], 2.0 * x[1]];
        let w2 = [2.0 * w[0], 2.0 * w[1]];
        let q = 4.0 * qwft_point(f, &gr, &x2, &w2).unwrap().norm();
        spot = spot.max((wv - q).abs() / (4.0 * peak));
    }
    let worst_a = reports.iter().filter(|r| r.name.starts_with("qaf")).map(|r| r.rhs).fold(0.0, f64::max);
    let worst_w = reports.iter().filter(|r| r.name.starts_with("qwvt")).map(|r| r.rhs).fold(0.0, f64::max);
    let excluded: f64 = reports.iter().filter_map(|r| r.parameters.get("excluded_nodes")).sum();
    let pass = reports.iter().all(|r| r.pass) && spot <= 1e-10;
    outcome(
        pass,
        format!(
            "QAF {worst_a:.2e} (tol 1e-12), QWVT {worst_w:.2e} (tol 1e-10), {excluded} excluded nodes, \
             direct spot checks {spot:.2e}"
        ),
    )
}

fn suite_outcome(
    reports: &[InequalityReport],
    prefixes: &[&str],
    extra: impl FnOnce(&[&InequalityReport]) -> (bool, String),
) -> Outcome {
    let chosen: Vec<&InequalityReport> =
        reports.iter().filter(|r| prefixes.iter().any(|p| r.name.starts_with(p))).collect();
    let owned: Vec<InequalityReport> = chosen.iter().map(|r| (*r).clone()).collect();
    let bad = failures(&owned);
    let (ok, text) = extra(&chosen);
    let mut detail = format!("{} checks, {} failed", chosen.len(), bad.len());
    if !text.is_empty() {
        detail.push_str(", ");
        detail.push_str(&text);
    }
    for b in bad.iter().take(3) {
        detail.push_str(&format!("; {b}"));
    }
    outcome(bad.is_empty() && ok && !chosen.is_empty(), detail)
}

fn criterion_7(all: &[InequalityReport]) -> Outcome {
    suite_outcome(all, &["lieb-qwft"], |rs| {
        let mut worst: f64 = 0.0;
        for r in rs.iter().filter(|r| r.parameters["p"] == 2.0) {
            worst = worst.max(r.margin.abs() / (r.parameters["f_norm"] * r.parameters["g_norm"]));
        }
        let n = rs.iter().filter(|r| r.parameters["p"] == 2.0).count();
        (worst <= 1e-9 && n == 36, format!("p=2 equality worst {worst:.2e} over {n} pairs (tol 1e-9)"))
    })
}

fn criterion_8(all: &[InequalityReport]) -> Outcome {
    suite_outcome(all, &["donoho-stark", "lieb-concentration", "lieb-support"], |rs| {
        let taus: Vec<f64> = {
            let mut t: Vec<f64> = rs.iter().filter_map(|r| r.parameters.get("tau").copied()).collect();
            t.sort_by(f64::total_cmp);
            t.dedup();
            t
        };
        (taus == [1e-12, 0.1, 0.3, 0.5], format!("thresholds {taus:?}"))
    })
}

fn criterion_9(all: &[InequalityReport]) -> Outcome {
    let suite = suite_outcome(all, &["entropy-bound"], |rs| {
        let worst =
            rs.iter().filter(|r| r.name.ends_with("qwft")).map(|r| r.lhs - 2.0 * LN_2).fold(f64::INFINITY, f64::min);
        (worst >= -1e-9, format!("min E − 2ln2 over QWFT pairs {worst:.3e}"))
    });
    let entropies = |grid: &GridSpec| -> Vec<f64> {
        GAUSSIAN_FAMILY
            .iter()
            .map(|&a| {
                let (f, g) = (gauss(a, GaussianKind::Signal, grid), gauss(a, GaussianKind::Window, grid));
                field_entropy(&Lazy::new(QwftKernel::new(&f, &g).unwrap()))
            })
            .collect()
    };
    let fine_e = entropies(&fine());
    let desk_e = entropies(&desk());
    let worst = fine_e.iter().map(|e| (e - 2.0).abs()).fold(0.0, f64::max);
    outcome(
        suite.pass && worst <= 1e-4,
        format!(
            "{}; a=b Gaussians N=64 E = {fine_e:.6?} (|E−2| ≤ {worst:.1e}, tol 1e-4); desk {desk_e:.4?}",
            suite.detail
        ),
    )
}

fn criterion_10() -> Outcome {
    let e11 = heisenberg_constant(1.0, 1.0, 1).unwrap();
    let const_err = (e11 - 2.0 / E).abs();
    let mut pass = const_err <= 1e-12;
    let mut products = Vec::new();
    let mut failed = Vec::new();
    for grid in [fine(), desk()] {
        for &a in &GAUSSIAN_FAMILY {
            let f = gauss(a, GaussianKind::Signal, &grid);
            let g = gauss(a, GaussianKind::Window, &grid);
            let mut reports = Vec::new();
            let q = Lazy::new(QwftKernel::new(&f, &g).unwrap());
            let s = Subject::new(&q, Distribution::Qwft, &f, &g).unwrap();
            let h = heisenberg_check(&s, 1.0, 1.0).unwrap();
            let product = h.constant_values["x_moment"] * h.constant_values["w_moment"];
            let amb = Lazy::new(AmbiguityKernel::new(&f, &g).unwrap());
            let sa = Subject::new(&amb, Distribution::Ambiguity, &f, &g).unwrap();
            let wig = Lazy::new(WignerKernel::new(&f, &g).unwrap());
            let sw = Subject::new(&wig, Distribution::Wigner, &f, &g).unwrap();
            for (p, q) in HEISENBERG_EXPONENTS {
                reports.push(heisenberg_check(&s, p, q).unwrap());
                reports.push(heisenberg_joint_check(&s, p, q).unwrap());
                reports.push(heisenberg_check(&sa, p, q).unwrap());
                reports.push(heisenberg_joint_check(&sa, p, q).unwrap());
                reports.push(heisenberg_joint_check(&sw, p, q).unwrap());
            }
            if grid == fine() {
                pass &= (product - 4.0).abs() <= 1e-3 && product > 2.0 / E;
                pass &= reports.iter().all(|r| r.pass);
                products.push(product);
            }
            failed.extend(failures(&reports).into_iter().map(|s| format!("N={} a={a}: {s}", grid.n_per_axis)));
        }
    }
    outcome(
        pass,
        format!(
            "E11 − 2/e = {const_err:.1e}; N=64 moment products {products:.5?} (4 ± 1e-3); \
             theorem lhs for p=q=1 is √product = 2; failing reports: {failed:?}"
        ),
    )
}

fn criterion_11(all: &[InequalityReport]) -> Outcome {
    let d2 = log_constant(1);
    let err = (d2 - (-EULER_GAMMA - LN_2)).abs();
    let s = suite_outcome(all, &["log-uncertainty"], |rs| {
        let min = rs.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
        let lambdas = rs.iter().filter(|r| r.parameters.contains_key("lambda")).count();
        (min > 0.0 && lambdas == 12, format!("min margin {min:.3e}, {lambdas} dilation cases"))
    });
    outcome(s.pass && err <= 1e-12, format!("{}; D_2 + γ + ln2 = {err:.1e}", s.detail))
}

fn criterion_12(all: &[InequalityReport]) -> Outcome {
    let random = all
        .iter()
        .filter(|r| r.name.starts_with("heisenberg-") && r.name.ends_with("-qft") && r.parameters.contains_key("seed"));
    let random: Vec<InequalityReport> = random.cloned().collect();
    let bad_random = failures(&random);
    let grid = fine();
    let mut worst_gap: f64 = 0.0;
    let mut gaussian_ok = true;
    for &a in &GAUSSIAN_FAMILY {
        let f = gauss(a, GaussianKind::Signal, &grid);
        for axis in 0..2 {
            let r = component_heisenberg_qft_check(&f, axis).unwrap();
            gaussian_ok &= r.pass;
            worst_gap = worst_gap.max(r.margin.abs() / r.rhs);
        }
    }
    let desk_gaussian: Vec<String> = all
        .iter()
        .filter(|r| r.name == "heisenberg-component-qft" && r.parameters.contains_key("a"))
        .map(|r| format!("a={} margin {:.1e}", r.parameters["a"], r.margin))
        .collect();
    outcome(
        bad_random.is_empty() && !random.is_empty() && gaussian_ok && worst_gap <= 0.05,
        format!(
            "{} random-signal checks, {} failed; N=64 Gaussians pass, max |margin|/bound {worst_gap:.1e} (≤ 5%); \
             desk Gaussian diagnostic {desk_gaussian:?}",
            random.len(),
            bad_random.len()
        ),
    )
}

fn criterion_13(all: &[InequalityReport]) -> Outcome {
    suite_outcome(all, &["local-price"], |rs| {
        let mut boxes: Vec<f64> = rs.iter().map(|r| r.parameters["hx"]).collect();
        boxes.sort_by(f64::total_cmp);
        boxes.dedup();
        let kinds = ["qwft", "qaf", "qwvt"].iter().filter(|k| rs.iter().any(|r| r.name.ends_with(*k))).count();
        (kinds == 3 && boxes.len() >= 3, format!("{kinds} distributions, box half-widths {boxes:?}"))
    })
}

fn criterion_14(first: &[InequalityReport]) -> Outcome {
    let second = run_suite(Suite::All, &desk(), SEED).unwrap();
    let a = serde_json::to_string(first).unwrap();
    let b = serde_json::to_string(&second).unwrap();
    outcome(a == b, format!("{} reports, {} bytes, identical: {}", second.len(), a.len(), a == b))
}

fn print(id: usize, o: &Outcome) {
    say(&format!("{} criterion {id:>2}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail));
}

#[test]
fn acceptance() {
    let mut outcomes: Vec<(usize, Outcome)> = Vec::new();
    let mut run = |id: usize, o: Outcome| {
        print(id, &o);
        outcomes.push((id, o));
    };
    run(1, criterion_1());
    run(2, criterion_2());
    run(3, criterion_3());
    run(4, criterion_4());
    run(5, criterion_5());
    run(6, criterion_6());
    let all = run_suite(Suite::All, &desk(), SEED).unwrap();
    run(7, criterion_7(&all));
    run(8, criterion_8(&all));
    run(9, criterion_9(&all));
    run(10, criterion_10());
    run(11, criterion_11(&all));
    run(12, criterion_12(&all));
    run(13, criterion_13(&all));
    run(14, criterion_14(&all));
    let failed: Vec<usize> = outcomes.iter().filter(|(_, o)| !o.pass).map(|(id, _)| *id).collect();
    say(&format!("acceptance: {} of {} criteria pass", outcomes.len() - failed.len(), outcomes.len()));
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
