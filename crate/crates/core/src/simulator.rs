//! Pure-state simulation of circuits.
//!
//! Qubit 0 is the most significant bit of the amplitude index: the label
//! `b₀b₁…b_{N−1}` sits at index `Σ b_j · 2^{N−1−j}`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gates::{gate_matrix, Circuit, Gate, GateError, GateMatrix};
use crate::matrix::{Matrix, C64, ONE, ZERO};

pub const NORM_TOL: f64 = 1e-10;

/// Widths above this are refused; the register is held densely.
pub const MAX_WIDTH: usize = 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("bitstring {bitstring:?} does not match width {width}")]
    LengthMismatch { width: usize, bitstring: String },
    #[error("invalid bitstring {0:?}: only '0' and '1' allowed")]
    InvalidBitstring(String),
    #[error("width mismatch: state has {state} qubits, expected {expected}")]
    WidthMismatch { state: usize, expected: usize },
    #[error("qubit {qubit} out of range for width {width}")]
    IndexOutOfRange { qubit: usize, width: usize },
    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("unsupported width {0}")]
    UnsupportedWidth(usize),
    #[error(transparent)]
    Gate(#[from] GateError),
}

pub type Result<T> = std::result::Result<T, SimError>;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    width: usize,
    amplitudes: Vec<C64>,
}

fn parse_label(width: usize, bitstring: &str) -> Result<usize> {
    if bitstring.len() != width {
        return Err(SimError::LengthMismatch {
            width,
            bitstring: bitstring.to_string(),
        });
    }
    bitstring.chars().try_fold(0usize, |acc, ch| match ch {
        '0' => Ok(acc << 1),
        '1' => Ok((acc << 1) | 1),
        _ => Err(SimError::InvalidBitstring(bitstring.to_string())),
    })
}

pub fn format_label(width: usize, index: usize) -> String {
    (0..width)
        .map(|j| {
            if (index >> (width - 1 - j)) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

fn check_width(width: usize) -> Result<()> {
    if width == 0 || width > MAX_WIDTH {
        return Err(SimError::UnsupportedWidth(width));
    }
    Ok(())
}

/// Computational basis state labelled by `bitstring`.
pub fn init_state(width: usize, bitstring: &str) -> Result<StateVector> {
    check_width(width)?;
    let index = parse_label(width, bitstring)?;
    let mut amplitudes = vec![ZERO; 1 << width];
    amplitudes[index] = ONE;
    Ok(StateVector { width, amplitudes })
}

impl StateVector {
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(SimError::UnsupportedWidth(0));
        }
        let width = len.trailing_zeros() as usize;
        check_width(width)?;
        let state = Self { width, amplitudes };
        let n2 = state.norm_sqr();
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(SimError::NotNormalized(n2));
        }
        Ok(state)
    }

    /// Equal superposition of all basis states.
    pub fn uniform(width: usize) -> Result<Self> {
        check_width(width)?;
        let dim = 1usize << width;
        let a = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self {
            width,
            amplitudes: vec![a; dim],
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, bitstring: &str) -> Result<C64> {
        Ok(self.amplitudes[parse_label(self.width, bitstring)?])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.width != other.width {
            return Err(SimError::WidthMismatch {
                state: other.width,
                expected: self.width,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|² / (‖self‖² ‖other‖²)`. Bit-identical states give
    /// exactly 1.0.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        let overlap = self.inner(other)?.norm_sqr();
        Ok((overlap / (self.norm_sqr() * other.norm_sqr())).min(1.0))
    }

    /// In-place gate application by stride iteration over the target
    /// amplitude pairs (or quadruples for two-qubit gates).
    pub fn apply_mut(&mut self, gate: &Gate) -> Result<()> {
        for qubit in gate.qubits() {
            if qubit >= self.width {
                return Err(SimError::IndexOutOfRange {
                    qubit,
                    width: self.width,
                });
            }
        }
        let n = self.width;
        let bit = |q: usize| 1usize << (n - 1 - q);
        match (gate_matrix(gate), *gate) {
            (GateMatrix::One(u), _) => {
                let t = bit(gate.qubits()[0]);
                for i in 0..self.amplitudes.len() {
                    if i & t == 0 {
                        let (a0, a1) = (self.amplitudes[i], self.amplitudes[i | t]);
                        self.amplitudes[i] = u.0[0][0] * a0 + u.0[0][1] * a1;
                        self.amplitudes[i | t] = u.0[1][0] * a0 + u.0[1][1] * a1;
                    }
                }
            }
            (GateMatrix::Two(u), Gate::ControlledPhase { first, second, .. }) => {
                let (b1, b2) = (bit(first), bit(second));
                for i in 0..self.amplitudes.len() {
                    if i & (b1 | b2) == 0 {
                        let idx = [i, i | b2, i | b1, i | b1 | b2];
                        let a = idx.map(|k| self.amplitudes[k]);
                        for (r, &k) in idx.iter().enumerate() {
                            self.amplitudes[k] = (0..4).map(|c| u.0[r][c] * a[c]).sum();
                        }
                    }
                }
            }
            (GateMatrix::Two(_), _) => unreachable!("only controlled phase is two-qubit"),
        }
        Ok(())
    }

    pub fn apply(&self, gate: &Gate) -> Result<StateVector> {
        let mut next = self.clone();
        next.apply_mut(gate)?;
        Ok(next)
    }

    pub fn run(&self, circuit: &Circuit) -> Result<StateVector> {
        run_circuit(self, circuit)
    }
}

pub fn apply(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    state.apply(gate)
}

/// Applies the gates of `circuit` left to right.
pub fn run_circuit(state: &StateVector, circuit: &Circuit) -> Result<StateVector> {
    if circuit.width() != state.width {
        return Err(SimError::WidthMismatch {
            state: state.width,
            expected: circuit.width(),
        });
    }
    let mut next = state.clone();
    for g in circuit.gates() {
        next.apply_mut(g)?;
    }
    Ok(next)
}

/// Born-rule probability of the labelled basis state.
pub fn probability(state: &StateVector, bitstring: &str) -> Result<f64> {
    Ok(state.amplitude(bitstring)?.norm_sqr())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    pub bitstring: String,
    pub collapsed: StateVector,
}

fn sample_index(state: &StateVector, rng: &mut impl Rng) -> usize {
    let total = state.norm_sqr();
    let r: f64 = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (i, a) in state.amplitudes.iter().enumerate() {
        let p = a.norm_sqr();
        if p > 0.0 {
            last_nonzero = i;
            acc += p;
            if r < acc {
                return i;
            }
        }
    }
    last_nonzero
}

/// Measures every qubit in the computational basis. Deterministic per seed.
pub fn measure_all(state: &StateVector, seed: u64) -> MeasurementOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let index = sample_index(state, &mut rng);
    let mut amplitudes = vec![ZERO; state.amplitudes.len()];
    amplitudes[index] = ONE;
    MeasurementOutcome {
        bitstring: format_label(state.width, index),
        collapsed: StateVector {
            width: state.width,
            amplitudes,
        },
    }
}

/// Outcome counts over `shots` independent measurements.
pub fn sample_counts(state: &StateVector, shots: usize, seed: u64) -> BTreeMap<String, usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        let label = format_label(state.width, sample_index(state, &mut rng));
        *counts.entry(label).or_insert(0) += 1;
    }
    counts
}

/// Pure-state concurrence `|⟨ψ|σ_y⊗σ_y|ψ*⟩|` of a two-qubit state.
pub fn concurrence(state: &StateVector) -> Result<f64> {
    if state.width != 2 {
        return Err(SimError::WidthMismatch {
            state: state.width,
            expected: 2,
        });
    }
    let sy = crate::gates::sigma_y().to_matrix();
    let yy = sy.kron(&sy);
    let conj: Vec<C64> = state.amplitudes.iter().map(|a| a.conj()).collect();
    let flipped = yy.mul_vec(&conj);
    let overlap: C64 = state
        .amplitudes
        .iter()
        .zip(&flipped)
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(overlap.norm())
}

/// Full `2^N × 2^N` unitary of a circuit, built column by column.
pub fn circuit_unitary(circuit: &Circuit) -> Result<Matrix> {
    let width = circuit.width();
    check_width(width)?;
    let dim = 1usize << width;
    let columns = (0..dim)
        .map(|k| {
            let mut amplitudes = vec![ZERO; dim];
            amplitudes[k] = ONE;
            let basis = StateVector { width, amplitudes };
            run_circuit(&basis, circuit).map(|s| s.amplitudes)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(&columns))
}
