//! Digamma, log-gamma and the mean of `ln|u|` over a cube.

use std::f64::consts::PI;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// ψ(x) for x > 0, by upward recurrence to x ≥ 10 and the asymptotic series.
pub fn digamma(x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return f64::NAN;
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // ln x − 1/(2x) − Σ B_{2n}/(2n x^{2n})
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    acc + x.ln() - 0.5 * inv - series
}

/// ln Γ(x) for x > 0, by upward recurrence to x ≥ 10 and Stirling's series.
pub fn ln_gamma(x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return f64::NAN;
    }
    let mut x = x;
    let mut shift = 0.0;
    while x < 10.0 {
        shift += x.ln();
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            - inv2
                * (1.0 / 360.0
                    - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 * (1.0 / 1188.0 - inv2 * 691.0 / 360360.0)))));
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + series - shift
}

/// Γ(x) for x > 0.
pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// `E[ln|u|]` for `u` uniform on the cube `[−1, 1]^n`.
///
/// Uses `E ln|u| = ½ ∫₀^∞ (e^{−t} − φ(t)^n) dt/t` with `φ(t) = E e^{−t u₁²} = √π erf(√t)/(2√t)`,
/// integrated on `t = e^y` with the trapezoid rule (the integrand decays exponentially in `y`
/// at both ends).
pub fn mean_log_norm_unit_cube(n: usize) -> f64 {
    assert!(n >= 1);
    let phi = |t: f64| -> f64 {
        if t < 1e-8 {
            1.0 - t / 3.0
        } else {
            let r = t.sqrt();
            0.5 * PI.sqrt() * libm::erf(r) / r
        }
    };
    let (lo, hi, h) = (-40.0_f64, 60.0_f64, 1.0 / 128.0);
    let steps = ((hi - lo) / h) as usize;
    let mut sum = 0.0;
    for i in 0..=steps {
        let y = lo + i as f64 * h;
        let t = y.exp();
        let v = (-t).exp() - phi(t).powi(n as i32);
        let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
        sum += w * v;
    }
    0.5 * sum * h
}

/// Average of `ln|x|` over the cell `[−h/2, h/2]^n` around the origin, `h` the cell width.
pub fn origin_cell_log(cell_width: f64, n: usize) -> f64 {
    (0.5 * cell_width).ln() + mean_log_norm_unit_cube(n)
}
