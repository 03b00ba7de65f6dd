//! Fluorescence readout model.
//!
//! A shot projects onto a basis state `s` with the state's population and
//! then emits a Poisson photon count with mean `I_s`. Only the mean count over
//! many shots carries information; single shots cannot be discriminated.

use rand::Rng;
use rand_distr::{Binomial, Distribution, Poisson};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::graph::BitString;
use crate::noise::{noisy_populations, NoiseConfig};
use crate::seed::substream;

/// Tolerance on `sum(pops) == 1` and on negative populations.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-9;

pub const DEFAULT_CHECKPOINT_EVERY: u64 = 1000;

/// Mean photons per shot for each prepared basis state.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationTable {
    num_qubits: usize,
    intensities: Vec<f64>,
}

impl CalibrationTable {
    /// Builds a table from `2^n` nonnegative intensities in basis-index order.
    ///
    /// A table with all entries equal is accepted here; it is rejected at
    /// reconstruction time as degenerate.
    pub fn new(intensities: Vec<f64>) -> Result<Self> {
        let len = intensities.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Domain(format!("calibration needs 2^n >= 2 entries, got {len}")));
        }
        if let Some(v) = intensities.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::Domain(format!("invalid intensity {v}")));
        }
        Ok(Self {
            num_qubits: len.trailing_zeros() as usize,
            intensities,
        })
    }

    /// Two-qubit default `I = (5, 3, 2, 1)` photons per shot.
    pub fn default_two_qubit() -> Self {
        Self::new(vec![5.0, 3.0, 2.0, 1.0]).expect("static table")
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn intensities(&self) -> &[f64] {
        &self.intensities
    }

    pub fn len(&self) -> usize {
        self.intensities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intensities.is_empty()
    }

    /// True when every intensity is the same, which makes reconstruction impossible.
    pub fn is_flat(&self) -> bool {
        self.intensities.iter().all(|&v| v == self.intensities[0])
    }

    /// Parses `<bitstring> <intensity>` lines covering every basis state exactly once.
    pub fn parse(text: &str) -> Result<Self> {
        let entries = parse_labelled_values(text)?;
        Self::new(entries)
    }

    pub fn to_text(&self) -> String {
        labelled_lines(&self.intensities, self.num_qubits)
    }
}

/// Parses `<bitstring> <value>` lines keyed by basis label. All labels must
/// share one length `n`, and all `2^n` labels must appear exactly once.
pub fn parse_labelled_values(text: &str) -> Result<Vec<f64>> {
    let mut rows: Vec<(usize, BitString, f64)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::parse(line_no, "expected `<bitstring> <value>`"));
        }
        let label: BitString = fields[0]
            .parse()
            .map_err(|e: Error| Error::parse(line_no, e.to_string()))?;
        if label.is_empty() {
            return Err(Error::parse(line_no, "empty bit string"));
        }
        let value: f64 = fields[1]
            .parse()
            .map_err(|_| Error::parse(line_no, format!("invalid number {:?}", fields[1])))?;
        rows.push((line_no, label, value));
    }
    let n = match rows.first() {
        Some((_, label, _)) => label.len(),
        None => return Err(Error::parse(0, "no entries")),
    };
    if n > crate::statevector::MAX_QUBITS {
        return Err(Error::parse(rows[0].0, "bit string too long"));
    }
    let mut values: Vec<Option<f64>> = vec![None; 1 << n];
    for (line_no, label, value) in rows {
        if label.len() != n {
            return Err(Error::parse(line_no, format!("expected {n} bits")));
        }
        let slot = &mut values[label.to_index()];
        if slot.is_some() {
            return Err(Error::parse(line_no, format!("duplicate entry for {label}")));
        }
        *slot = Some(value);
    }
    values
        .into_iter()
        .enumerate()
        .map(|(k, v)| v.ok_or_else(|| Error::parse(0, format!("missing entry for {}", BitString::from_index(k, n)))))
        .collect()
}

pub(crate) fn labelled_lines(values: &[f64], n: usize) -> String {
    values
        .iter()
        .enumerate()
        .map(|(k, v)| format!("{} {v:?}\n", BitString::from_index(k, n)))
        .collect()
}

pub(crate) fn check_distribution(pops: &[f64], expected_len: usize) -> Result<()> {
    if pops.len() != expected_len {
        return Err(Error::Dimension {
            expected: expected_len,
            actual: pops.len(),
        });
    }
    if let Some(p) = pops.iter().find(|p| !p.is_finite() || **p < -DISTRIBUTION_TOLERANCE) {
        return Err(Error::Domain(format!("invalid population {p}")));
    }
    let total: f64 = pops.iter().sum();
    if (total - 1.0).abs() > DISTRIBUTION_TOLERANCE {
        return Err(Error::Domain(format!("populations sum to {total}, expected 1")));
    }
    Ok(())
}

/// `<O> = sum_s I_s p_s`.
pub fn observable_expectation(cal: &CalibrationTable, pops: &[f64]) -> Result<f64> {
    check_distribution(pops, cal.len())?;
    Ok(cal.intensities.iter().zip(pops).map(|(i, p)| i * p).sum())
}

/// Mean photon count after `shots` shots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Checkpoint {
    pub shots: u64,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShotRecord {
    /// Per-shot counts, present only when retention was requested.
    pub counts: Option<Vec<u64>>,
    pub num_shots: u64,
    pub total_photons: u64,
    pub running_mean: f64,
    /// Strictly increasing in `shots`, one entry every `checkpoint_every` shots.
    pub checkpoints: Vec<Checkpoint>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShotSettings {
    pub num_shots: u64,
    pub checkpoint_every: u64,
    /// Keep every per-shot count. Without retention, shots between checkpoints
    /// are drawn in aggregate (multinomial outcomes, then one Poisson draw per
    /// outcome), which has the same distribution for every checkpoint mean.
    pub retain_counts: bool,
}

impl ShotSettings {
    pub fn new(num_shots: u64) -> Self {
        Self {
            num_shots,
            checkpoint_every: DEFAULT_CHECKPOINT_EVERY,
            retain_counts: false,
        }
    }

    pub fn checkpoint_every(mut self, every: u64) -> Self {
        self.checkpoint_every = every;
        self
    }

    pub fn retain_counts(mut self, retain: bool) -> Self {
        self.retain_counts = retain;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.num_shots == 0 {
            return Err(Error::Domain("num_shots must be >= 1".into()));
        }
        if self.checkpoint_every == 0 {
            return Err(Error::Domain("checkpoint_every must be >= 1".into()));
        }
        Ok(())
    }
}

/// Incremental shot sampler for one prepared state. Several samplers may share
/// one RNG to interleave their shots.
#[derive(Debug, Clone)]
pub struct ShotSampler {
    intensities: Vec<f64>,
    weights: Vec<f64>,
    cumulative: Vec<f64>,
    checkpoint_every: u64,
    counts: Option<Vec<u64>>,
    shots: u64,
    photons: u64,
    checkpoints: Vec<Checkpoint>,
}

impl ShotSampler {
    pub fn new(cal: &CalibrationTable, pops: &[f64], checkpoint_every: u64, retain_counts: bool) -> Result<Self> {
        check_distribution(pops, cal.len())?;
        if checkpoint_every == 0 {
            return Err(Error::Domain("checkpoint_every must be >= 1".into()));
        }
        let clipped: Vec<f64> = pops.iter().map(|p| p.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        let weights: Vec<f64> = clipped.iter().map(|p| p / total).collect();
        let cumulative = weights
            .iter()
            .scan(0.0, |acc, w| {
                *acc += w;
                Some(*acc)
            })
            .collect();
        Ok(Self {
            intensities: cal.intensities.clone(),
            weights,
            cumulative,
            checkpoint_every,
            counts: retain_counts.then(Vec::new),
            shots: 0,
            photons: 0,
            checkpoints: Vec::new(),
        })
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn mean(&self) -> f64 {
        if self.shots == 0 {
            0.0
        } else {
            self.photons as f64 / self.shots as f64
        }
    }

    /// Draws `shots` more shots.
    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R, shots: u64) {
        let mut remaining = shots;
        while remaining > 0 {
            let to_boundary = self.checkpoint_every - self.shots % self.checkpoint_every;
            let segment = remaining.min(to_boundary);
            if self.counts.is_some() {
                for _ in 0..segment {
                    self.single_shot(rng);
                }
            } else {
                self.aggregate(rng, segment);
            }
            self.shots += segment;
            remaining -= segment;
            if self.shots.is_multiple_of(self.checkpoint_every) {
                self.checkpoints.push(Checkpoint {
                    shots: self.shots,
                    mean: self.mean(),
                });
            }
        }
    }

    fn single_shot<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let u: f64 = rng.random();
        let last = self.cumulative.len() - 1;
        let s = self.cumulative.partition_point(|&c| c <= u).min(last);
        let n = poisson(rng, self.intensities[s]);
        self.photons += n;
        if let Some(c) = self.counts.as_mut() {
            c.push(n);
        }
    }

    fn aggregate<R: Rng + ?Sized>(&mut self, rng: &mut R, shots: u64) {
        let mut left = shots;
        let mut mass = 1.0;
        for (s, &w) in self.weights.iter().enumerate() {
            if left == 0 {
                break;
            }
            let k = if s + 1 == self.weights.len() || mass <= 0.0 {
                left
            } else {
                let p = (w / mass).clamp(0.0, 1.0);
                Binomial::new(left, p).expect("p in [0, 1]").sample(rng)
            };
            mass -= w;
            left -= k;
            if k > 0 {
                self.photons += poisson(rng, k as f64 * self.intensities[s]);
            }
        }
    }

    pub fn finish(self) -> ShotRecord {
        let running_mean = self.mean();
        ShotRecord {
            counts: self.counts,
            num_shots: self.shots,
            total_photons: self.photons,
            running_mean,
            checkpoints: self.checkpoints,
        }
    }
}

fn poisson<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("finite positive mean").sample(rng) as u64
}

/// Simulates `settings.num_shots` shots of a state with populations `pops`.
pub fn sample_shots(cal: &CalibrationTable, pops: &[f64], settings: &ShotSettings, seed: u64) -> Result<ShotRecord> {
    settings.validate()?;
    let mut sampler = ShotSampler::new(cal, pops, settings.checkpoint_every, settings.retain_counts)?;
    let mut rng = substream(seed, &[]);
    sampler.sample(&mut rng, settings.num_shots);
    Ok(sampler.finish())
}

/// Runs `circuit` from `|0...0>`, optionally through the noise channels, and
/// samples its fluorescence.
pub fn measure_circuit(
    circuit: &Circuit,
    cal: &CalibrationTable,
    settings: &ShotSettings,
    seed: u64,
    noise: Option<&NoiseConfig>,
) -> Result<ShotRecord> {
    if circuit.num_qubits() != cal.num_qubits() {
        return Err(Error::Dimension {
            expected: cal.num_qubits(),
            actual: circuit.num_qubits(),
        });
    }
    let pops = match noise {
        Some(cfg) => {
            cfg.validate()?;
            noisy_populations(circuit, cfg, cfg.seed, cfg.trajectories)?
        }
        None => circuit.simulate()?.populations(),
    };
    sample_shots(cal, &pops, settings, seed)
}
