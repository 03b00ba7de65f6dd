//! Population reconstruction from flip-pattern fluorescence means.
//!
//! Writing the readout observable as `O = sum_t c_t Z^t` with
//! `c_t = 2^-n sum_s I_s (-1)^{s.t}`, a trailing flip pattern `X^x` turns each
//! `Z^t` into `(-1)^{x.t} Z^t`. The `2^n` means therefore determine every
//! correlator `<Z^t>` whose coefficient `c_t` is nonzero, and the populations
//! follow from a second Walsh-Hadamard transform of the correlators.

use crate::error::{Error, Result};
use crate::graph::basis_label;
use crate::readout::{check_distribution, CalibrationTable};

/// Smallest `|c_t|` (in intensity units) accepted by [`reconstruct`].
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;

/// In-place unnormalized Walsh-Hadamard transform,
/// `v'_t = sum_s v_s (-1)^{popcount(s & t)}`. The length must be a power of two.
pub fn fwht(v: &mut [f64]) {
    let n = v.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for k in block..block + h {
                let (a, b) = (v[k], v[k + h]);
                v[k] = a + b;
                v[k + h] = a - b;
            }
        }
        h *= 2;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalshCoefficients {
    pub c: Vec<f64>,
}

impl WalshCoefficients {
    /// First `t` with `|c_t| <= tolerance`, if any.
    pub fn degenerate_index(&self, tolerance: f64) -> Option<usize> {
        self.c.iter().position(|c| c.abs() <= tolerance)
    }
}

/// `c_t = 2^-n sum_s I_s (-1)^{s.t}`.
pub fn walsh_coefficients(cal: &CalibrationTable) -> WalshCoefficients {
    let mut c = cal.intensities().to_vec();
    fwht(&mut c);
    let scale = 1.0 / c.len() as f64;
    c.iter_mut().for_each(|v| *v *= scale);
    WalshCoefficients { c }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationEstimate {
    /// Reconstructed populations, unclipped.
    pub pops: Vec<f64>,
    /// `<Z^t>` for every `t`; the `t = 0` entry is the norm.
    pub correlators: Vec<f64>,
    /// Sum of `pops`.
    pub norm: f64,
}

/// Exact flip-pattern means `m_x = sum_s I_{s xor x} p_s`.
pub fn forward_means(cal: &CalibrationTable, pops: &[f64]) -> Result<Vec<f64>> {
    check_distribution(pops, cal.len())?;
    let intensities = cal.intensities();
    Ok((0..cal.len())
        .map(|x| pops.iter().enumerate().map(|(s, p)| intensities[s ^ x] * p).sum())
        .collect())
}

/// Inverts flip-pattern means with the default degeneracy tolerance.
pub fn reconstruct(cal: &CalibrationTable, means: &[f64]) -> Result<PopulationEstimate> {
    reconstruct_with_tolerance(cal, means, DEGENERACY_TOLERANCE)
}

pub fn reconstruct_with_tolerance(cal: &CalibrationTable, means: &[f64], tolerance: f64) -> Result<PopulationEstimate> {
    let dim = cal.len();
    if means.len() != dim {
        return Err(Error::Dimension {
            expected: dim,
            actual: means.len(),
        });
    }
    let coeffs = walsh_coefficients(cal);
    if let Some(t) = coeffs.degenerate_index(tolerance) {
        return Err(Error::DegenerateCalibration {
            t,
            label: basis_label(t, cal.num_qubits()),
            value: coeffs.c[t],
            tolerance,
        });
    }
    let scale = 1.0 / dim as f64;

    let mut correlators = means.to_vec();
    fwht(&mut correlators);
    correlators.iter_mut().zip(&coeffs.c).for_each(|(z, c)| *z *= scale / c);

    let mut pops = correlators.clone();
    fwht(&mut pops);
    pops.iter_mut().for_each(|p| *p *= scale);

    let norm = pops.iter().sum();
    Ok(PopulationEstimate {
        pops,
        correlators,
        norm,
    })
}
