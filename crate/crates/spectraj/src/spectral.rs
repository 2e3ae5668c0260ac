//! Discrete Fourier transforms between coordinate sequences and
//! (amplitude, phase) spectrums, keypoint extraction, and the
//! linear-interpolation baseline.
//!
//! Convention: unnormalized forward transform, 1/N inverse. Phase is kept in
//! (-pi, pi] and forced to 0 wherever the amplitude falls below
//! [`AMPLITUDE_PHASE_FLOOR`], so the (amplitude, phase) pair is a function of
//! the input sequence.

use crate::error::{Error, Result};
use ndarray::Array2;
use std::f64::consts::PI;

/// Amplitude below which the phase of a bin is fixed to zero.
pub const AMPLITUDE_PHASE_FLOOR: f64 = 1e-12;

/// Relative imaginary residue above which `idft` logs a warning.
const IMAG_RESIDUE_TOL: f64 = 1e-6;

/// Per-axis spectrum of a real sequence: amplitudes and phases per frequency bin.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    amplitude: Vec<f64>,
    phase: Vec<f64>,
}

impl Spectrum {
    /// Build from raw amplitude/phase vectors, checking the representation
    /// invariants (equal lengths, non-negative amplitudes, phases in (-pi, pi]).
    pub fn new(amplitude: Vec<f64>, phase: Vec<f64>) -> Result<Self> {
        if amplitude.len() != phase.len() {
            return Err(Error::Shape(format!(
                "amplitude length {} != phase length {}",
                amplitude.len(),
                phase.len()
            )));
        }
        if amplitude.is_empty() {
            return Err(Error::Shape("empty spectrum".into()));
        }
        for (k, &a) in amplitude.iter().enumerate() {
            if !a.is_finite() || a < 0.0 {
                return Err(Error::Numeric(format!("amplitude[{k}] = {a} invalid")));
            }
        }
        for (k, &p) in phase.iter().enumerate() {
            if !p.is_finite() || p <= -PI - 1e-12 || p > PI + 1e-12 {
                return Err(Error::Numeric(format!("phase[{k}] = {p} outside (-pi, pi]")));
            }
        }
        Ok(Self { amplitude, phase })
    }

    pub fn len(&self) -> usize {
        self.amplitude.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitude.is_empty()
    }

    pub fn amplitude(&self) -> &[f64] {
        &self.amplitude
    }

    pub fn phase(&self) -> &[f64] {
        &self.phase
    }
}

/// Per-axis spectrums of a two-dimensional trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySpectrum {
    pub x_axis: Spectrum,
    pub y_axis: Spectrum,
}

impl TrajectorySpectrum {
    /// Flattened 4-channel view, one row per frequency index, columns ordered
    /// `[a_x, a_y, phi_x, phi_y]`.
    pub fn to_channels(&self) -> Array2<f64> {
        let n = self.x_axis.len();
        let mut out = Array2::zeros((n, 4));
        for k in 0..n {
            out[[k, 0]] = self.x_axis.amplitude[k];
            out[[k, 1]] = self.y_axis.amplitude[k];
            out[[k, 2]] = self.x_axis.phase[k];
            out[[k, 3]] = self.y_axis.phase[k];
        }
        out
    }

    pub fn len(&self) -> usize {
        self.x_axis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_axis.is_empty()
    }
}

/// Designated future time steps receiving a keypoint, as 1-indexed offsets
/// from the end of the observation window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeypointSchedule {
    key_steps: Vec<usize>,
}

impl KeypointSchedule {
    /// Validate and build a schedule for a horizon of `t_f` steps. Steps must
    /// be strictly increasing, within the horizon, and end exactly at `t_f`.
    pub fn new(key_steps: Vec<usize>, t_f: usize) -> Result<Self> {
        if key_steps.is_empty() {
            return Err(Error::Config("keypoint schedule is empty".into()));
        }
        for w in key_steps.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Config(format!(
                    "keypoint steps not strictly increasing: {} then {}",
                    w[0], w[1]
                )));
            }
        }
        let first = key_steps[0];
        let last = *key_steps.last().unwrap();
        if first < 1 || last > t_f {
            return Err(Error::Config(format!(
                "keypoint steps {key_steps:?} outside horizon 1..={t_f}"
            )));
        }
        if last != t_f {
            return Err(Error::Config(format!(
                "last keypoint step {last} must equal the horizon t_f = {t_f}"
            )));
        }
        Ok(Self { key_steps })
    }

    /// Evenly spaced schedule covering the horizon; `{4, 8, 12}` for the
    /// default three keypoints over twelve future steps.
    pub fn uniform(n_key: usize, t_f: usize) -> Result<Self> {
        if n_key == 0 || n_key > t_f {
            return Err(Error::Config(format!(
                "cannot place {n_key} keypoints on a {t_f}-step horizon"
            )));
        }
        let steps: Vec<usize> = (1..=n_key)
            .map(|i| ((i * t_f) as f64 / n_key as f64).round() as usize)
            .collect();
        Self::new(steps, t_f)
    }

    pub fn key_steps(&self) -> &[usize] {
        &self.key_steps
    }

    pub fn n_key(&self) -> usize {
        self.key_steps.len()
    }
}

/// Forward unnormalized DFT: `X_k = sum_n x_n exp(-2 pi i k n / N)`, returned
/// as modulus and argument per bin.
pub fn dft(sequence: &[f64]) -> Result<Spectrum> {
    let n = sequence.len();
    if n == 0 {
        return Err(Error::Shape("dft of empty sequence".into()));
    }
    for (i, &v) in sequence.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::Numeric(format!("non-finite input at index {i}: {v}")));
        }
    }
    let mut amplitude = Vec::with_capacity(n);
    let mut phase = Vec::with_capacity(n);
    for k in 0..n {
        let mut re = 0.0;
        let mut im = 0.0;
        for (t, &x) in sequence.iter().enumerate() {
            let angle = -2.0 * PI * (k * t) as f64 / n as f64;
            re += x * angle.cos();
            im += x * angle.sin();
        }
        let a = (re * re + im * im).sqrt();
        let p = if a < AMPLITUDE_PHASE_FLOOR {
            0.0
        } else {
            canonical_phase(im.atan2(re))
        };
        amplitude.push(a);
        phase.push(p);
    }
    Spectrum::new(amplitude, phase)
}

/// Map a phase to (-pi, pi]; values at the -pi edge (within float noise) fold to +pi.
fn canonical_phase(p: f64) -> f64 {
    if p <= -PI + 1e-9 {
        PI
    } else {
        p
    }
}

/// Inverse transform `x_n = (1/N) sum_k a_k exp(i phi_k) exp(2 pi i k n / N)`,
/// real part. A residual imaginary part above 1e-6 of the real magnitude is
/// logged; it indicates a spectrum without conjugate symmetry.
pub fn idft(spectrum: &Spectrum) -> Vec<f64> {
    let n = spectrum.len();
    let out = idft_channels(spectrum.amplitude(), spectrum.phase());
    let mut max_re = 0.0f64;
    let mut max_im = 0.0f64;
    for t in 0..n {
        let mut im = 0.0;
        for k in 0..n {
            let angle = spectrum.phase[k] + 2.0 * PI * (k * t) as f64 / n as f64;
            im += spectrum.amplitude[k] * angle.sin();
        }
        max_im = max_im.max((im / n as f64).abs());
        max_re = max_re.max(out[t].abs());
    }
    if max_im > IMAG_RESIDUE_TOL * max_re.max(f64::MIN_POSITIVE) {
        log::warn!(
            "idft imaginary residue {max_im:.3e} exceeds {IMAG_RESIDUE_TOL:.0e} of max real {max_re:.3e}"
        );
    }
    out
}

/// Real part of the inverse transform for raw (amplitude, phase) channel pairs.
/// Unlike [`idft`] this accepts arbitrary reals (network outputs may emit
/// negative amplitudes, which act as a phase shift by pi).
pub fn idft_channels(amplitude: &[f64], phase: &[f64]) -> Vec<f64> {
    let n = amplitude.len();
    assert_eq!(n, phase.len(), "amplitude/phase length mismatch");
    let mut out = vec![0.0; n];
    for (t, slot) in out.iter_mut().enumerate() {
        let mut re = 0.0;
        for k in 0..n {
            let angle = phase[k] + 2.0 * PI * (k * t) as f64 / n as f64;
            re += amplitude[k] * angle.cos();
        }
        *slot = re / n as f64;
    }
    out
}

/// Per-axis DFT of a T x 2 coordinate sequence.
pub fn trajectory_to_spectrum(traj: &Array2<f64>) -> Result<TrajectorySpectrum> {
    if traj.ncols() != 2 {
        return Err(Error::Shape(format!(
            "trajectory must have 2 columns, got {}",
            traj.ncols()
        )));
    }
    let xs: Vec<f64> = traj.column(0).to_vec();
    let ys: Vec<f64> = traj.column(1).to_vec();
    Ok(TrajectorySpectrum {
        x_axis: dft(&xs)?,
        y_axis: dft(&ys)?,
    })
}

/// Per-axis inverse of [`trajectory_to_spectrum`].
pub fn spectrum_to_trajectory(spec: &TrajectorySpectrum) -> Array2<f64> {
    let xs = idft(&spec.x_axis);
    let ys = idft(&spec.y_axis);
    let n = xs.len();
    let mut out = Array2::zeros((n, 2));
    for t in 0..n {
        out[[t, 0]] = xs[t];
        out[[t, 1]] = ys[t];
    }
    out
}

/// Select the ground-truth keypoints (rows of the future trajectory at the
/// scheduled steps, 1-indexed within the horizon).
pub fn extract_keypoints(future: &Array2<f64>, schedule: &KeypointSchedule) -> Result<Array2<f64>> {
    let t_f = future.nrows();
    if let Some(&last) = schedule.key_steps().last() {
        if last > t_f {
            return Err(Error::Config(format!(
                "keypoint step {last} exceeds future horizon {t_f}"
            )));
        }
    }
    let mut out = Array2::zeros((schedule.n_key(), future.ncols()));
    for (i, &step) in schedule.key_steps().iter().enumerate() {
        out.row_mut(i).assign(&future.row(step - 1));
    }
    Ok(out)
}

/// Piecewise-linear path from the last observed point (step 0) through each
/// scheduled keypoint, sampled at steps 1..=t_f. Exact at every keypoint.
///
/// Each step t between knots (t0, p0) and (t1, p1) evaluates as
/// `p0 + (p1 - p0) * ((t - t0) / (t1 - t0))`, in that operation order.
pub fn linear_interpolate(
    last_observed: [f64; 2],
    keypoints: &Array2<f64>,
    schedule: &KeypointSchedule,
    t_f: usize,
) -> Result<Array2<f64>> {
    if keypoints.nrows() != schedule.n_key() {
        return Err(Error::Shape(format!(
            "{} keypoints for a {}-step schedule",
            keypoints.nrows(),
            schedule.n_key()
        )));
    }
    if schedule.key_steps().last() != Some(&t_f) {
        return Err(Error::Config(format!(
            "schedule {:?} does not cover horizon {t_f}",
            schedule.key_steps()
        )));
    }
    let mut knot_steps = vec![0usize];
    knot_steps.extend_from_slice(schedule.key_steps());
    let mut knot_pts: Vec<[f64; 2]> = vec![last_observed];
    for i in 0..keypoints.nrows() {
        knot_pts.push([keypoints[[i, 0]], keypoints[[i, 1]]]);
    }

    let mut out = Array2::zeros((t_f, 2));
    let mut seg = 0usize;
    for t in 1..=t_f {
        while knot_steps[seg + 1] < t {
            seg += 1;
        }
        let (t0, t1) = (knot_steps[seg], knot_steps[seg + 1]);
        let (p0, p1) = (knot_pts[seg], knot_pts[seg + 1]);
        let w = (t - t0) as f64 / (t1 - t0) as f64;
        out[[t - 1, 0]] = p0[0] + (p1[0] - p0[0]) * w;
        out[[t - 1, 1]] = p0[1] + (p1[1] - p0[1]) * w;
    }
    Ok(out)
}
