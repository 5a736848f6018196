//! Quaternion time–frequency analysis on uniform grids.
//!
//! Two-sided quaternion Fourier transform, windowed Fourier transform, ambiguity function and
//! Wigner transform, plus numerical checks of the uncertainty inequalities they satisfy.

pub mod error;
pub mod expr;
pub mod fft;
pub mod grid;
pub mod io;
pub mod phase_space;
pub mod qft;
pub mod quaternion;
pub mod qwft;
pub mod random;
pub mod report;
pub mod signal;
pub mod special;
pub mod suite;
pub mod tfdist;
pub mod uncertainty;

pub use error::{Error, Result};
pub use expr::{GaussianKind, GaussianSpec, SignalExpr, SignalSpec};
pub use grid::{FrequencyGrid, GridSpec, Lattice};
pub use phase_space::{ConcentrationSet, Distribution, Lazy, PhaseSpace, PhaseSpaceField};
pub use qft::{iqft, qft_direct, qft_fast, QftPlan};
pub use quaternion::Quaternion;
pub use qwft::{qwft, qwft_lazy, qwft_point, reconstruct};
pub use report::InequalityReport;
pub use signal::{Sampled, SampledSignal, Spectrum};
pub use suite::{run_suite, Suite, Summary};
pub use tfdist::{ambiguity, ambiguity_point, wigner, wigner_point};
pub use uncertainty::{epsilon_of, Subject};
