//! Radix-2 complex FFT and axis-wise transforms of dense `n^rank` arrays.

use std::f64::consts::PI;

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Kernel `e^{−2πi nk/N}`.
    Forward,
    /// Kernel `e^{+2πi nk/N}`, unnormalized.
    Backward,
}

/// Precomputed twiddles and bit reversal for one power-of-two length.
#[derive(Clone, Debug)]
pub struct Radix2 {
    n: usize,
    twiddles: Vec<Complex64>,
    rev: Vec<usize>,
}

impl Radix2 {
    /// Panics unless `n` is a power of two.
    pub fn new(n: usize) -> Self {
        assert!(n.is_power_of_two(), "FFT length {n} is not a power of two");
        let bits = n.trailing_zeros();
        let rev = (0..n).map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (usize::BITS - bits) }).collect();
        let twiddles = (0..n / 2).map(|k| Complex64::from_polar(1.0, -2.0 * PI * k as f64 / n as f64)).collect();
        Self { n, twiddles, rev }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn process(&self, data: &mut [Complex64], dir: Direction) {
        let n = self.n;
        debug_assert_eq!(data.len(), n);
        for i in 0..n {
            let j = self.rev[i];
            if i < j {
                data.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let stride = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..half {
                    let mut w = self.twiddles[k * stride];
                    if dir == Direction::Backward {
                        w = w.conj();
                    }
                    let a = data[start + k];
                    let b = data[start + k + half] * w;
                    data[start + k] = a + b;
                    data[start + k + half] = a - b;
                }
            }
            len <<= 1;
        }
    }
}

/// Transforms a row-major `n^rank` array along one axis (axis 0 is the slowest).
pub fn transform_axis(
    plan: &Radix2,
    data: &mut [Complex64],
    rank: usize,
    axis: usize,
    dir: Direction,
    line: &mut Vec<Complex64>,
) {
    let n = plan.len();
    debug_assert_eq!(data.len(), n.pow(rank as u32));
    let stride = n.pow((rank - 1 - axis) as u32);
    let block = stride * n;
    line.resize(n, Complex64::default());
    for outer in (0..data.len()).step_by(block) {
        for inner in 0..stride {
            let base = outer + inner;
            for (k, v) in line.iter_mut().enumerate() {
                *v = data[base + k * stride];
            }
            plan.process(line, dir);
            for (k, v) in line.iter().enumerate() {
                data[base + k * stride] = *v;
            }
        }
    }
}
