//! Dense pure-state simulation.
//!
//! Qubit 0 is the most significant bit of the basis index. Rotation gates
//! follow `R_P(theta) = exp(-i theta P / 2)` and `RZZ(theta) = exp(-i theta Z⊗Z / 2)`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 24;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Rx(usize, f64),
    Ry(usize, f64),
    Rz(usize, f64),
    Cnot { control: usize, target: usize },
    Rzz(usize, usize, f64),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::X(q) | Gate::Rx(q, _) | Gate::Ry(q, _) | Gate::Rz(q, _) => vec![q],
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Rzz(a, b, _) => vec![a, b],
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rx(_, t) | Gate::Ry(_, t) | Gate::Rz(_, t) | Gate::Rzz(_, _, t) => Some(t),
            _ => None,
        }
    }

    /// Copy of the gate with its rotation angle replaced; fixed gates are returned unchanged.
    pub fn with_angle(&self, theta: f64) -> Gate {
        match *self {
            Gate::Rx(q, _) => Gate::Rx(q, theta),
            Gate::Ry(q, _) => Gate::Ry(q, theta),
            Gate::Rz(q, _) => Gate::Rz(q, theta),
            Gate::Rzz(a, b, _) => Gate::Rzz(a, b, theta),
            other => other,
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot { .. } | Gate::Rzz(..))
    }

    /// The inverse gate: negated angle for rotations, self for H, X and CNOT.
    pub fn inverse(&self) -> Gate {
        match self.angle() {
            Some(t) => self.with_angle(-t),
            None => *self,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::X(_) => "X",
            Gate::Rx(..) => "RX",
            Gate::Ry(..) => "RY",
            Gate::Rz(..) => "RZ",
            Gate::Cnot { .. } => "CNOT",
            Gate::Rzz(..) => "RZZ",
        }
    }

    pub(crate) fn validate(&self, num_qubits: usize) -> Result<()> {
        let qs = self.qubits();
        if let Some(&q) = qs.iter().find(|&&q| q >= num_qubits) {
            return Err(Error::Index { index: q, num_qubits });
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::Domain(format!(
                "{} needs two distinct qubits, got {} twice",
                self.name(),
                qs[0]
            )));
        }
        if let Some(t) = self.angle() {
            if !t.is_finite() {
                return Err(Error::Domain(format!("non-finite angle in {}", self.name())));
            }
        }
        Ok(())
    }
}

/// Text form `GATE q[,q2][,angle]` with angles at 17 significant digits.
impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let qs = self.qubits();
        write!(f, "{} {}", self.name(), qs[0])?;
        if let Some(q2) = qs.get(1) {
            write!(f, ",{q2}")?;
        }
        if let Some(t) = self.angle() {
            write!(f, ",{t:.16e}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Gate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Gate> {
        let bad = || Error::Domain(format!("malformed gate {s:?}"));
        let (name, rest) = s.trim().split_once(' ').ok_or_else(bad)?;
        let args: Vec<&str> = rest.split(',').map(str::trim).collect();
        let qubit = |i: usize| -> Result<usize> { args.get(i).ok_or_else(bad)?.parse().map_err(|_| bad()) };
        let angle = |i: usize| -> Result<f64> { args.get(i).ok_or_else(bad)?.parse().map_err(|_| bad()) };
        let expected_args = match name {
            "H" | "X" => 1,
            "RX" | "RY" | "RZ" | "CNOT" => 2,
            "RZZ" => 3,
            _ => return Err(bad()),
        };
        if args.len() != expected_args {
            return Err(bad());
        }
        let gate = match name {
            "H" => Gate::H(qubit(0)?),
            "X" => Gate::X(qubit(0)?),
            "RX" => Gate::Rx(qubit(0)?, angle(1)?),
            "RY" => Gate::Ry(qubit(0)?, angle(1)?),
            "RZ" => Gate::Rz(qubit(0)?, angle(1)?),
            "CNOT" => Gate::Cnot {
                control: qubit(0)?,
                target: qubit(1)?,
            },
            _ => Gate::Rzz(qubit(0)?, qubit(1)?, angle(2)?),
        };
        Ok(gate)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `n` qubits.
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Capacity {
                what: "num_qubits",
                value: n,
                limit: MAX_QUBITS,
            });
        }
        let mut amplitudes = vec![ZERO; 1 << n];
        amplitudes[0] = ONE;
        Ok(Self {
            num_qubits: n,
            amplitudes,
        })
    }

    /// Wraps raw amplitudes. The vector must have power-of-two length and unit norm.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Domain(format!(
                "amplitude vector length {len} is not a power of two >= 2"
            )));
        }
        let num_qubits = len.trailing_zeros() as usize;
        if num_qubits > MAX_QUBITS {
            return Err(Error::Capacity {
                what: "num_qubits",
                value: num_qubits,
                limit: MAX_QUBITS,
            });
        }
        let s = Self { num_qubits, amplitudes };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!("state norm^2 is {norm}, expected 1")));
        }
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `U|s>` as a fresh state.
    pub fn apply(&self, gate: &Gate) -> Result<StateVector> {
        let mut out = self.clone();
        out.apply_in_place(gate)?;
        Ok(out)
    }

    pub fn apply_in_place(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        match *gate {
            Gate::H(q) => {
                let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
                self.apply_1q(q, [[h, h], [h, -h]]);
            }
            Gate::X(q) => self.apply_pauli(q, Pauli::X),
            Gate::Rx(q, t) => {
                let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
                let c = Complex64::new(c, 0.0);
                let mis = Complex64::new(0.0, -s);
                self.apply_1q(q, [[c, mis], [mis, c]]);
            }
            Gate::Ry(q, t) => {
                let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
                let c = Complex64::new(c, 0.0);
                let s = Complex64::new(s, 0.0);
                self.apply_1q(q, [[c, -s], [s, c]]);
            }
            Gate::Rz(q, t) => {
                let m = self.mask(q);
                let lo = Complex64::from_polar(1.0, -t / 2.0);
                let hi = Complex64::from_polar(1.0, t / 2.0);
                for (k, a) in self.amplitudes.iter_mut().enumerate() {
                    *a *= if k & m == 0 { lo } else { hi };
                }
            }
            Gate::Cnot { control, target } => {
                let (mc, mt) = (self.mask(control), self.mask(target));
                for k in 0..self.amplitudes.len() {
                    if k & mc != 0 && k & mt == 0 {
                        self.amplitudes.swap(k, k | mt);
                    }
                }
            }
            Gate::Rzz(a, b, t) => {
                let (ma, mb) = (self.mask(a), self.mask(b));
                let even = Complex64::from_polar(1.0, -t / 2.0);
                let odd = Complex64::from_polar(1.0, t / 2.0);
                for (k, amp) in self.amplitudes.iter_mut().enumerate() {
                    let parity = ((k & ma != 0) as u8) ^ ((k & mb != 0) as u8);
                    *amp *= if parity == 0 { even } else { odd };
                }
            }
        }
        Ok(())
    }

    /// Applies a single-qubit Pauli. Used by the noise channels.
    pub fn apply_pauli(&mut self, q: usize, p: Pauli) {
        let m = self.mask(q);
        match p {
            Pauli::X => {
                for k in 0..self.amplitudes.len() {
                    if k & m == 0 {
                        self.amplitudes.swap(k, k | m);
                    }
                }
            }
            Pauli::Y => {
                let i = Complex64::i();
                for k in 0..self.amplitudes.len() {
                    if k & m == 0 {
                        let (a0, a1) = (self.amplitudes[k], self.amplitudes[k | m]);
                        self.amplitudes[k] = -i * a1;
                        self.amplitudes[k | m] = i * a0;
                    }
                }
            }
            Pauli::Z => {
                for (k, a) in self.amplitudes.iter_mut().enumerate() {
                    if k & m != 0 {
                        *a = -*a;
                    }
                }
            }
        }
    }

    fn mask(&self, q: usize) -> usize {
        1 << (self.num_qubits - 1 - q)
    }

    fn apply_1q(&mut self, q: usize, u: [[Complex64; 2]; 2]) {
        let m = self.mask(q);
        for k in 0..self.amplitudes.len() {
            if k & m == 0 {
                let (a0, a1) = (self.amplitudes[k], self.amplitudes[k | m]);
                self.amplitudes[k] = u[0][0] * a0 + u[0][1] * a1;
                self.amplitudes[k | m] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
    }

    /// Basis-state probabilities `|a_k|^2`.
    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `sum_k d_k |a_k|^2` for a diagonal observable `d`.
    pub fn expectation_diagonal(&self, diag: &[f64]) -> Result<f64> {
        if diag.len() != self.amplitudes.len() {
            return Err(Error::Dimension {
                expected: self.amplitudes.len(),
                actual: diag.len(),
            });
        }
        Ok(self.amplitudes.iter().zip(diag).map(|(a, d)| d * a.norm_sqr()).sum())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::Dimension {
                expected: self.num_qubits,
                actual: other.num_qubits,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|`, insensitive to global phase.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }
}
