//! Desk-scale simulation of QAOA for MAX-CUT on a two-spin register with
//! non-projective fluorescence readout.
//!
//! The pipeline: build the ansatz for a graph ([`circuit`]), evolve it exactly
//! ([`statevector`]), optionally through error channels ([`noise`]), sample
//! Poisson photon counts ([`readout`]), recover basis populations by
//! Walsh-Hadamard inversion ([`reconstruction`]) and evaluate or scan the cost
//! landscape ([`experiment`]).

pub mod circuit;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod noise;
pub mod optimize;
pub mod readout;
pub mod reconstruction;
pub mod seed;
pub mod statevector;

pub use circuit::{
    append_flips, build_ansatz, build_ansatz_native, calibration_circuits, Circuit, FlipPattern, QaoaParams,
};
pub use error::{Error, Result};
pub use experiment::{
    closed_form_cost_k2, convergence, ideal_cost, landscape_error, measure_point, optimize, run_scan, AxisRange,
    CalibrationSource, LandscapeGrid, Mode, PointRecord, ScanConfig, Strategy,
};
pub use graph::{brute_force, cost, cost_spin, cut_value, diagonal_costs, BitString, CutReport, Graph};
pub use noise::{apply_noisy_gate, perturb_calibration, NoiseConfig};
pub use readout::{measure_circuit, observable_expectation, sample_shots, CalibrationTable, ShotRecord, ShotSettings};
pub use reconstruction::{forward_means, reconstruct, walsh_coefficients, PopulationEstimate, WalshCoefficients};
pub use statevector::{Gate, StateVector};
