//! QAOA ansatz construction and readout-variant circuits.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{BitString, Graph, MAX_VERTICES};
use crate::statevector::{Gate, StateVector, MAX_QUBITS};

/// Per-layer mixer angles `betas` and cost angles `gammas`.
#[derive(Debug, Clone, PartialEq)]
pub struct QaoaParams {
    betas: Vec<f64>,
    gammas: Vec<f64>,
}

impl QaoaParams {
    pub fn new(betas: Vec<f64>, gammas: Vec<f64>) -> Result<Self> {
        if betas.len() != gammas.len() {
            return Err(Error::Dimension {
                expected: betas.len(),
                actual: gammas.len(),
            });
        }
        if betas.is_empty() {
            return Err(Error::Domain("QAOA needs at least one layer".into()));
        }
        if betas.iter().chain(&gammas).any(|v| !v.is_finite()) {
            return Err(Error::Domain("QAOA angles must be finite".into()));
        }
        Ok(Self { betas, gammas })
    }

    /// Single layer `(beta, gamma)`.
    pub fn single(beta: f64, gamma: f64) -> Result<Self> {
        Self::new(vec![beta], vec![gamma])
    }

    /// `p` layers sharing the same `(beta, gamma)`.
    pub fn shared(p: usize, beta: f64, gamma: f64) -> Result<Self> {
        Self::new(vec![beta; p], vec![gamma; p])
    }

    pub fn depth(&self) -> usize {
        self.betas.len()
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    /// Flattened `[betas..., gammas...]`.
    pub fn to_vec(&self) -> Vec<f64> {
        self.betas.iter().chain(&self.gammas).copied().collect()
    }

    /// Inverse of [`QaoaParams::to_vec`].
    pub fn from_vec(v: &[f64]) -> Result<Self> {
        if !v.len().is_multiple_of(2) {
            return Err(Error::Domain("parameter vector length must be even".into()));
        }
        let p = v.len() / 2;
        Self::new(v[..p].to_vec(), v[p..].to_vec())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::Capacity {
                what: "num_qubits",
                value: num_qubits,
                limit: MAX_QUBITS,
            });
        }
        Ok(Self {
            num_qubits,
            gates: Vec::new(),
        })
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Runs the circuit on `|0...0>`.
    pub fn simulate(&self) -> Result<StateVector> {
        let mut s = StateVector::zero(self.num_qubits)?;
        for g in &self.gates {
            s.apply_in_place(g)?;
        }
        Ok(s)
    }

    /// One gate per line in the `GATE q[,q2][,angle]` form.
    pub fn to_text(&self) -> String {
        self.gates.iter().map(|g| format!("{g}\n")).collect()
    }

    pub fn from_text(num_qubits: usize, text: &str) -> Result<Self> {
        let mut c = Circuit::new(num_qubits)?;
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let gate = line.parse::<Gate>().map_err(|e| Error::parse(idx + 1, e.to_string()))?;
            c.push(gate).map_err(|e| Error::parse(idx + 1, e.to_string()))?;
        }
        Ok(c)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Pattern of trailing X gates; bit `q` set means qubit `q` is flipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipPattern(BitString);

impl FlipPattern {
    pub fn new(bits: BitString) -> Self {
        Self(bits)
    }

    /// Pattern for basis index `index` on `n` qubits, MSB first.
    pub fn from_index(index: usize, n: usize) -> Self {
        Self(BitString::from_index(index, n))
    }

    pub fn bits(&self) -> &BitString {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check_graph(g: &Graph) -> Result<()> {
    if g.num_vertices() > MAX_VERTICES {
        return Err(Error::Capacity {
            what: "num_vertices",
            value: g.num_vertices(),
            limit: MAX_VERTICES,
        });
    }
    Ok(())
}

fn ansatz(g: &Graph, params: &QaoaParams, native: bool) -> Result<Circuit> {
    check_graph(g)?;
    let n = g.num_vertices();
    let edges = g.edges();
    let mut c = Circuit::new(n)?;
    for q in 0..n {
        c.push(Gate::H(q))?;
    }
    for (&beta, &gamma) in params.betas().iter().zip(params.gammas()) {
        for &(i, j, w) in &edges {
            let theta = gamma * w;
            if native {
                c.push(Gate::Cnot { control: i, target: j })?;
                c.push(Gate::Rz(j, theta))?;
                c.push(Gate::Cnot { control: i, target: j })?;
            } else {
                c.push(Gate::Rzz(i, j, theta))?;
            }
        }
        for q in 0..n {
            c.push(Gate::Rx(q, 2.0 * beta))?;
        }
    }
    Ok(c)
}

/// Hadamard layer, then per layer one `RZZ(gamma * w)` per edge in ascending
/// `(i, j)` order followed by `RX(2 beta)` on every qubit.
pub fn build_ansatz(g: &Graph, params: &QaoaParams) -> Result<Circuit> {
    ansatz(g, params, false)
}

/// Same as [`build_ansatz`] with every RZZ expanded to CNOT, RZ on the
/// higher-index vertex, CNOT. The lower-index vertex is the control.
pub fn build_ansatz_native(g: &Graph, params: &QaoaParams) -> Result<Circuit> {
    ansatz(g, params, true)
}

/// Appends an X on every qubit whose pattern bit is 1.
pub fn append_flips(c: &Circuit, pattern: &FlipPattern) -> Result<Circuit> {
    if pattern.len() != c.num_qubits() {
        return Err(Error::Dimension {
            expected: c.num_qubits(),
            actual: pattern.len(),
        });
    }
    let mut out = c.clone();
    for (q, &b) in pattern.bits().bits().iter().enumerate() {
        if b == 1 {
            out.push(Gate::X(q))?;
        }
    }
    Ok(out)
}

/// One preparation circuit per basis state `s`, consisting of X on the set bits of `s`.
pub fn calibration_circuits(n: usize) -> Result<Vec<Circuit>> {
    let empty = Circuit::new(n)?;
    (0..1usize << n)
        .map(|s| append_flips(&empty, &FlipPattern::from_index(s, n)))
        .collect()
}
