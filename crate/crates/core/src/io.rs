//! Binary dumps of sampled signals and phase-space fields.
//!
//! Both formats are little-endian `f64` throughout: a fixed header followed by the quaternion
//! components `(q0, q1, q2, q3)` of every node in storage order.
//!
//! * Sample dump: 8-value header `[d, N, L, domain, 0, 0, 0, 0]` where `domain` is 0 for a
//!   spatial signal and 1 for a spectrum. A spectrum records the `L` of the spatial grid it
//!   is dual to, so its spacing is `π/L`.
//! * Field dump: 5-value header `[d, N_x, L_x, N_w, L_w]` with the `w` spacing `π/L_w`, then
//!   the slabs in `x` order.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{FrequencyGrid, GridSpec, Lattice};
use crate::phase_space::{PhaseSpace, PhaseSpaceField};
use crate::quaternion::Quaternion;
use crate::signal::{SampledSignal, Spectrum};

pub const SAMPLE_HEADER_LEN: usize = 8;
pub const FIELD_HEADER_LEN: usize = 5;

const SPATIAL: f64 = 0.0;
const FREQUENCY: f64 = 1.0;

/// A decoded sample dump.
#[derive(Clone, Debug, PartialEq)]
pub enum SampleDump {
    Signal(SampledSignal),
    Spectrum(Spectrum),
}

fn put(out: &mut Vec<u8>, v: f64) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_values(out: &mut Vec<u8>, values: &[Quaternion]) {
    out.reserve(32 * values.len());
    for q in values {
        for c in [q.q0, q.q1, q.q2, q.q3] {
            put(out, c);
        }
    }
}

fn decode(bytes: &[u8]) -> Result<Vec<f64>> {
    if bytes.len() % 8 != 0 {
        return Err(Error::Format(format!("{} bytes is not a whole number of f64 values", bytes.len())));
    }
    Ok(bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk"))).collect())
}

fn quaternions(data: &[f64]) -> Vec<Quaternion> {
    data.chunks_exact(4).map(|c| Quaternion::new(c[0], c[1], c[2], c[3])).collect()
}

fn whole(v: f64, what: &str) -> Result<usize> {
    if v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as usize)
    } else {
        Err(Error::Format(format!("{what} = {v} is not a whole number")))
    }
}

fn frequency_grid(d: usize, n: usize, half_extent: f64) -> Result<FrequencyGrid> {
    Ok(GridSpec::new(d, n, half_extent)?.dual())
}

pub fn encode_signal(s: &SampledSignal) -> Vec<u8> {
    let mut out = Vec::new();
    for v in [s.grid.d as f64, s.grid.n_per_axis as f64, s.grid.half_extent, SPATIAL, 0.0, 0.0, 0.0, 0.0] {
        put(&mut out, v);
    }
    put_values(&mut out, &s.values);
    out
}

pub fn encode_spectrum(s: &Spectrum) -> Vec<u8> {
    let mut out = Vec::new();
    for v in [s.grid.d as f64, s.grid.n_per_axis as f64, PI / s.grid.spacing, FREQUENCY, 0.0, 0.0, 0.0, 0.0] {
        put(&mut out, v);
    }
    put_values(&mut out, &s.values);
    out
}

pub fn decode_samples(bytes: &[u8]) -> Result<SampleDump> {
    let data = decode(bytes)?;
    if data.len() < SAMPLE_HEADER_LEN {
        return Err(Error::Format("sample dump shorter than its header".into()));
    }
    let (head, body) = data.split_at(SAMPLE_HEADER_LEN);
    let (d, n, l) = (whole(head[0], "d")?, whole(head[1], "N")?, head[2]);
    let grid = GridSpec::new(d, n, l)?;
    if body.len() != 4 * grid.len() {
        return Err(Error::Format(format!("{} values for {} nodes", body.len(), grid.len())));
    }
    let values = quaternions(body);
    match head[3] {
        SPATIAL => Ok(SampleDump::Signal(SampledSignal::new(grid, values)?)),
        FREQUENCY => Ok(SampleDump::Spectrum(Spectrum::new(frequency_grid(d, n, l)?, values)?)),
        other => Err(Error::Format(format!("unknown domain flag {other}"))),
    }
}

/// Encodes any field, computing lazy slabs in parallel and writing them in `x` order.
pub fn encode_field<P: PhaseSpace>(field: &P) -> Vec<u8> {
    let (x, w) = (field.x_grid(), field.w_grid());
    let mut out = Vec::with_capacity(8 * FIELD_HEADER_LEN + 32 * x.len() * w.len());
    for v in [x.d as f64, x.n_per_axis as f64, x.half_extent, w.n_per_axis as f64, PI / w.spacing] {
        put(&mut out, v);
    }
    for slab in field.map_slabs(|_, slab| {
        let mut bytes = Vec::new();
        put_values(&mut bytes, slab);
        bytes
    }) {
        out.extend_from_slice(&slab);
    }
    out
}

pub fn decode_field(bytes: &[u8]) -> Result<PhaseSpaceField> {
    let data = decode(bytes)?;
    if data.len() < FIELD_HEADER_LEN {
        return Err(Error::Format("field dump shorter than its header".into()));
    }
    let (head, body) = data.split_at(FIELD_HEADER_LEN);
    let d = whole(head[0], "d")?;
    let x_grid = GridSpec::new(d, whole(head[1], "N_x")?, head[2])?;
    let w_grid = frequency_grid(d, whole(head[3], "N_w")?, head[4])?;
    let nodes = x_grid.len() * w_grid.len();
    if body.len() != 4 * nodes {
        return Err(Error::Format(format!("{} values for {nodes} phase-space nodes", body.len())));
    }
    PhaseSpaceField::new(x_grid, w_grid, quaternions(body))
}

fn write_bytes(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(bytes)?;
    w.flush()?;
    Ok(())
}

fn read_bytes(path: impl AsRef<Path>) -> Result<Vec<u8>> {
    let mut bytes = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
    Ok(bytes)
}

pub fn write_signal(path: impl AsRef<Path>, s: &SampledSignal) -> Result<()> {
    write_bytes(path, &encode_signal(s))
}

pub fn write_spectrum(path: impl AsRef<Path>, s: &Spectrum) -> Result<()> {
    write_bytes(path, &encode_spectrum(s))
}

pub fn read_samples(path: impl AsRef<Path>) -> Result<SampleDump> {
    decode_samples(&read_bytes(path)?)
}

pub fn write_field<P: PhaseSpace>(path: impl AsRef<Path>, field: &P) -> Result<()> {
    write_bytes(path, &encode_field(field))
}

pub fn read_field(path: impl AsRef<Path>) -> Result<PhaseSpaceField> {
    decode_field(&read_bytes(path)?)
}
