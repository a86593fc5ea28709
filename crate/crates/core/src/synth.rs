//! Deterministic synthetic vibration signals: tone mixtures (gear-mesh
//! style), white noise and decaying fault impulses.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::io::Signal;
use crate::rng::{SplitMix64, STREAM_NOISE};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tone {
    pub frequency_hz: f64,
    pub amplitude: f64,
    pub phase_rad: f64,
}

/// One-sided decaying exponential `amplitude · exp(-decay · (t - position))`
/// for `t >= position`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Impulse {
    pub position: usize,
    pub amplitude: f64,
    pub decay_per_sample: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub n: usize,
    pub sample_rate_hz: f64,
    pub tones: Vec<Tone>,
    /// White-noise power in dB relative to the strongest tone's power
    /// `a²/2` (relative to unit power when there are no tones).
    /// `f64::NEG_INFINITY` disables noise.
    pub noise_db: f64,
    pub impulses: Vec<Impulse>,
    pub seed: u64,
}

impl SynthSpec {
    pub fn new(n: usize, sample_rate_hz: f64) -> Self {
        Self {
            n,
            sample_rate_hz,
            tones: Vec::new(),
            noise_db: f64::NEG_INFINITY,
            impulses: Vec::new(),
            seed: 0,
        }
    }

    pub fn tone(mut self, frequency_hz: f64, amplitude: f64, phase_rad: f64) -> Self {
        self.tones.push(Tone {
            frequency_hz,
            amplitude,
            phase_rad,
        });
        self
    }

    pub fn noise_db(mut self, db: f64) -> Self {
        self.noise_db = db;
        self
    }

    pub fn impulse(mut self, position: usize, amplitude: f64, decay_per_sample: f64) -> Self {
        self.impulses.push(Impulse {
            position,
            amplitude,
            decay_per_sample,
        });
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::param(format!("signal length must be at least 2, got {}", self.n)));
        }
        if !(self.sample_rate_hz > 0.0 && self.sample_rate_hz.is_finite()) {
            return Err(Error::param("sample rate must be positive and finite"));
        }
        let nyquist = self.sample_rate_hz / 2.0;
        for tone in &self.tones {
            if !(tone.frequency_hz >= 0.0 && tone.frequency_hz < nyquist) {
                return Err(Error::param(format!(
                    "tone at {} Hz is outside [0, {nyquist}) Hz and would alias",
                    tone.frequency_hz
                )));
            }
            if !tone.amplitude.is_finite() || !tone.phase_rad.is_finite() {
                return Err(Error::param("tone amplitude and phase must be finite"));
            }
        }
        for imp in &self.impulses {
            if !imp.amplitude.is_finite() || imp.decay_per_sample.is_nan() || imp.decay_per_sample < 0.0 {
                return Err(Error::param("impulse amplitude must be finite and decay non-negative"));
            }
        }
        if self.noise_db.is_nan() || self.noise_db == f64::INFINITY {
            return Err(Error::param("noise level must be finite or -inf"));
        }
        Ok(())
    }

    /// Standard deviation of the white-noise component.
    pub fn noise_std(&self) -> f64 {
        if self.noise_db == f64::NEG_INFINITY {
            return 0.0;
        }
        let reference = self
            .tones
            .iter()
            .map(|t| t.amplitude * t.amplitude / 2.0)
            .fold(None, |acc: Option<f64>, p| Some(acc.map_or(p, |a| a.max(p))))
            .unwrap_or(1.0);
        (reference * 10f64.powf(self.noise_db / 10.0)).sqrt()
    }
}

pub fn generate(spec: &SynthSpec) -> Result<Signal> {
    spec.validate()?;
    let fs = spec.sample_rate_hz;
    let mut samples: Vec<f64> = (0..spec.n)
        .map(|t| {
            spec.tones
                .iter()
                .map(|tone| {
                    tone.amplitude
                        * (2.0 * PI * tone.frequency_hz * t as f64 / fs + tone.phase_rad).cos()
                })
                .sum()
        })
        .collect();

    let sd = spec.noise_std();
    if sd > 0.0 {
        let mut g = SplitMix64::with_stream(spec.seed, STREAM_NOISE);
        samples.iter_mut().for_each(|v| *v += sd * g.next_normal());
    }

    for imp in &spec.impulses {
        for (t, v) in samples.iter_mut().enumerate().skip(imp.position) {
            let envelope = (-imp.decay_per_sample * (t - imp.position) as f64).exp();
            if envelope < 1e-300 {
                break;
            }
            *v += imp.amplitude * envelope;
        }
    }

    Ok(Signal {
        samples,
        sample_rate_hz: fs,
        source: format!("synth:seed={}", spec.seed),
    })
}

/// A healthy/faulty pair sharing the same tones and noise; the faulty
/// signal adds `count` evenly spaced impulses of `amplitude_ratio` times
/// the strongest tone amplitude.
pub fn healthy_faulty_pair(
    healthy: &SynthSpec,
    count: usize,
    amplitude_ratio: f64,
    decay_per_sample: f64,
) -> Result<(Signal, Signal)> {
    let peak = healthy
        .tones
        .iter()
        .map(|t| t.amplitude.abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut faulty = healthy.clone();
    let spacing = healthy.n / count.max(1);
    for i in 0..count {
        faulty = faulty.impulse(spacing / 2 + i * spacing, amplitude_ratio * peak, decay_per_sample);
    }
    Ok((generate(healthy)?, generate(&faulty)?))
}
