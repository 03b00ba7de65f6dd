//! Trajectory-based error channels.
//!
//! Each gate may be over-rotated by a fixed fraction, followed by a random
//! Pauli per touched qubit with the depolarizing probability, and after two-qubit
//! gates an untracked `RZ(phase_offset)` on qubit 0. Mixed-state populations
//! are estimated by averaging over independent trajectories.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::readout::CalibrationTable;
use crate::seed::{substream, StreamRng};
use crate::statevector::{Gate, Pauli, StateVector};

/// Qubit that accumulates the phase offset after two-qubit gates.
pub const PHASE_QUBIT: usize = 0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    /// Probability per touched qubit per gate of a uniformly random Pauli.
    pub depolarizing_prob: f64,
    /// Fractional angle error applied to RX, RY, RZ and RZZ.
    pub overrotation_frac: f64,
    /// RZ angle applied to qubit 0 after every two-qubit gate.
    pub phase_offset: f64,
    /// Relative Gaussian spread of the calibration intensities.
    pub calibration_sigma: f64,
    pub seed: u64,
    /// Trajectories averaged when the channel is stochastic.
    pub trajectories: usize,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            depolarizing_prob: 0.0,
            overrotation_frac: 0.0,
            phase_offset: 0.0,
            calibration_sigma: 0.0,
            seed: 0,
            trajectories: 1000,
        }
    }
}

impl NoiseConfig {
    pub fn noiseless() -> Self {
        Self::default()
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.depolarizing_prob) {
            return Err(Error::Config(format!(
                "depolarizing_prob {} outside [0, 1]",
                self.depolarizing_prob
            )));
        }
        if !(self.calibration_sigma >= 0.0 && self.calibration_sigma.is_finite()) {
            return Err(Error::Config(format!(
                "calibration_sigma {} must be a finite value >= 0",
                self.calibration_sigma
            )));
        }
        if !self.overrotation_frac.is_finite() || !self.phase_offset.is_finite() {
            return Err(Error::Config("noise angles must be finite".into()));
        }
        if self.trajectories == 0 {
            return Err(Error::Config("trajectories must be >= 1".into()));
        }
        Ok(())
    }

    /// True if a run draws random numbers, i.e. needs trajectory averaging.
    pub fn is_stochastic(&self) -> bool {
        self.depolarizing_prob > 0.0
    }

    /// True if the gate channel leaves every gate untouched.
    pub fn is_gate_noiseless(&self) -> bool {
        self.depolarizing_prob == 0.0 && self.overrotation_frac == 0.0 && self.phase_offset == 0.0
    }
}

pub fn apply_noisy_gate<R: Rng + ?Sized>(
    s: &StateVector,
    gate: &Gate,
    cfg: &NoiseConfig,
    rng: &mut R,
) -> Result<StateVector> {
    let mut out = s.clone();
    apply_noisy_gate_in_place(&mut out, gate, cfg, rng)?;
    Ok(out)
}

pub fn apply_noisy_gate_in_place<R: Rng + ?Sized>(
    s: &mut StateVector,
    gate: &Gate,
    cfg: &NoiseConfig,
    rng: &mut R,
) -> Result<()> {
    let gate = match gate.angle() {
        Some(t) if cfg.overrotation_frac != 0.0 => gate.with_angle(t * (1.0 + cfg.overrotation_frac)),
        _ => *gate,
    };
    s.apply_in_place(&gate)?;
    if cfg.depolarizing_prob > 0.0 {
        for q in gate.qubits() {
            if rng.random::<f64>() < cfg.depolarizing_prob {
                let p = match rng.random_range(0..3u8) {
                    0 => Pauli::X,
                    1 => Pauli::Y,
                    _ => Pauli::Z,
                };
                s.apply_pauli(q, p);
            }
        }
    }
    if gate.is_two_qubit() && cfg.phase_offset != 0.0 {
        s.apply_in_place(&Gate::Rz(PHASE_QUBIT, cfg.phase_offset))?;
    }
    Ok(())
}

/// One noisy run of `circuit` from `|0...0>`.
pub fn simulate_trajectory<R: Rng + ?Sized>(circuit: &Circuit, cfg: &NoiseConfig, rng: &mut R) -> Result<StateVector> {
    let mut s = StateVector::zero(circuit.num_qubits())?;
    for g in circuit.gates() {
        apply_noisy_gate_in_place(&mut s, g, cfg, rng)?;
    }
    Ok(s)
}

/// Basis populations of the noisy circuit.
///
/// Deterministic channels need a single run. Stochastic ones average
/// `trajectories` runs, trajectory `k` drawing from substream `(seed, k)`.
pub fn noisy_populations(circuit: &Circuit, cfg: &NoiseConfig, seed: u64, trajectories: usize) -> Result<Vec<f64>> {
    if cfg.is_gate_noiseless() {
        return Ok(circuit.simulate()?.populations());
    }
    if !cfg.is_stochastic() {
        let mut rng = substream(seed, &[0]);
        return Ok(simulate_trajectory(circuit, cfg, &mut rng)?.populations());
    }
    let trajectories = trajectories.max(1);
    let mut acc = vec![0.0; 1 << circuit.num_qubits()];
    for k in 0..trajectories {
        let mut rng: StreamRng = substream(seed, &[k as u64]);
        let pops = simulate_trajectory(circuit, cfg, &mut rng)?.populations();
        acc.iter_mut().zip(pops).for_each(|(a, p)| *a += p);
    }
    let scale = 1.0 / trajectories as f64;
    acc.iter_mut().for_each(|a| *a *= scale);
    Ok(acc)
}

/// Multiplies every intensity by an independent `1 + N(0, sigma)` factor, floored at zero.
pub fn perturb_calibration(cal: &CalibrationTable, sigma: f64, seed: u64) -> Result<CalibrationTable> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::Domain(format!("sigma {sigma} must be finite and >= 0")));
    }
    if sigma == 0.0 {
        return Ok(cal.clone());
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::Domain(e.to_string()))?;
    let mut rng = substream(seed, &[]);
    let perturbed = cal
        .intensities()
        .iter()
        .map(|&i| (i * (1.0 + normal.sample(&mut rng))).max(0.0))
        .collect();
    CalibrationTable::new(perturbed)
}
