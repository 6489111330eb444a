//! The logical gate set and its exact matrices.
//!
//! Single-qubit basis is `{|0⟩, |1⟩}` with `σ_z = |0⟩⟨0| − |1⟩⟨1|` and
//! `σ_y = −i|0⟩⟨1| + i|1⟩⟨0|`. Two-qubit matrices act on
//! `{|00⟩, |01⟩, |10⟩, |11⟩}` with the left symbol belonging to the first
//! listed qubit.

use num_complex::Complex64;
use thiserror::Error;

use crate::matrix::{Unitary2, Unitary4, C64, ONE, ZERO};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GateError {
    #[error("gate {index}: qubit {qubit} out of range for width {width}")]
    IndexOutOfRange {
        index: usize,
        qubit: usize,
        width: usize,
    },
    #[error("gate {index}: controlled phase needs two distinct qubits, got {qubit} twice")]
    RepeatedQubit { index: usize, qubit: usize },
    #[error("gate {index}: non-finite angle")]
    NonFiniteAngle { index: usize },
    #[error("circuit width must be at least 1")]
    ZeroWidth,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    /// `exp(−i γ/2 σ_z)` on one qubit.
    OneQubitPhase { target: usize, gamma: f64 },
    /// `exp(−i θ/2 σ_y)` on one qubit, realized by a beam splitter.
    PartialSwap { target: usize, theta: f64 },
    /// `diag(e^{iγ}, 1, 1, e^{iγ})` on the ordered pair `(first, second)`.
    ControlledPhase {
        first: usize,
        second: usize,
        gamma: f64,
    },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::OneQubitPhase { target, .. } | Gate::PartialSwap { target, .. } => vec![target],
            Gate::ControlledPhase { first, second, .. } => vec![first, second],
        }
    }

    pub fn angle(&self) -> f64 {
        match *self {
            Gate::OneQubitPhase { gamma, .. } | Gate::ControlledPhase { gamma, .. } => gamma,
            Gate::PartialSwap { theta, .. } => theta,
        }
    }

    fn validate(&self, index: usize, width: usize) -> Result<(), GateError> {
        for qubit in self.qubits() {
            if qubit >= width {
                return Err(GateError::IndexOutOfRange {
                    index,
                    qubit,
                    width,
                });
            }
        }
        if let Gate::ControlledPhase { first, second, .. } = *self {
            if first == second {
                return Err(GateError::RepeatedQubit {
                    index,
                    qubit: first,
                });
            }
        }
        if !self.angle().is_finite() {
            return Err(GateError::NonFiniteAngle { index });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(width: usize) -> Result<Self, GateError> {
        if width == 0 {
            return Err(GateError::ZeroWidth);
        }
        Ok(Self {
            width,
            gates: Vec::new(),
        })
    }

    pub fn with_gates(width: usize, gates: Vec<Gate>) -> Result<Self, GateError> {
        let mut c = Self::new(width)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), GateError> {
        gate.validate(self.gates.len(), self.width)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, other: &Circuit) -> Result<(), GateError> {
        for g in &other.gates {
            self.push(*g)?;
        }
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
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
}

fn phase(angle: f64) -> C64 {
    Complex64::from_polar(1.0, angle)
}

/// `exp(−i γ/2 σ_z) = diag(e^{−iγ/2}, e^{iγ/2})`.
pub fn u_phase_matrix(gamma: f64) -> Unitary2 {
    Unitary2::diagonal([phase(-gamma / 2.0), phase(gamma / 2.0)])
}

/// `exp(−i θ/2 σ_y) = [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]`.
pub fn u_swap_matrix(theta: f64) -> Unitary2 {
    let (s, c) = (theta / 2.0).sin_cos();
    Unitary2::new_real([[c, -s], [s, c]])
}

/// `diag(e^{iγ}, 1, 1, e^{iγ})`.
pub fn b_matrix(gamma: f64) -> Unitary4 {
    let p = phase(gamma);
    Unitary4::diagonal([p, ONE, ONE, p])
}

/// Beam-splitter transmission `T = cos(θ/2)` for a partial swap of angle θ.
///
/// `T` is the amplitude of the unswapped branch of `u_swap_matrix(θ)`. The
/// matching transmission probability is `T²`.
pub fn transmission(theta: f64) -> f64 {
    (theta / 2.0).cos()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateMatrix {
    One(Unitary2),
    Two(Unitary4),
}

pub fn gate_matrix(gate: &Gate) -> GateMatrix {
    match *gate {
        Gate::OneQubitPhase { gamma, .. } => GateMatrix::One(u_phase_matrix(gamma)),
        Gate::PartialSwap { theta, .. } => GateMatrix::One(u_swap_matrix(theta)),
        Gate::ControlledPhase { gamma, .. } => GateMatrix::Two(b_matrix(gamma)),
    }
}

impl Unitary2 {
    fn new_real(m: [[f64; 2]; 2]) -> Self {
        Self([
            [C64::new(m[0][0], 0.0), C64::new(m[0][1], 0.0)],
            [C64::new(m[1][0], 0.0), C64::new(m[1][1], 0.0)],
        ])
    }
}

/// `σ_z` under the convention in the module docs.
pub fn sigma_z() -> Unitary2 {
    Unitary2::diagonal([ONE, -ONE])
}

/// `σ_y = −i|0⟩⟨1| + i|1⟩⟨0|`.
pub fn sigma_y() -> Unitary2 {
    let i = C64::new(0.0, 1.0);
    crate::matrix::SquareMatrix([[ZERO, -i], [i, ZERO]])
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    use proptest::prelude::*;

    use super::*;
    use crate::matrix::SquareMatrix;

    const TOL: f64 = 1e-12;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn phase_gate_values() {
        assert!(u_phase_matrix(0.0).max_abs_diff(&Unitary2::identity()) < TOL);
        let expect = Unitary2::diagonal([c(0.0, -1.0), c(0.0, 1.0)]);
        assert!(u_phase_matrix(PI).max_abs_diff(&expect) < TOL);
        let expect = Unitary2::diagonal([phase(-FRAC_PI_4), phase(FRAC_PI_4)]);
        assert!(u_phase_matrix(FRAC_PI_2).max_abs_diff(&expect) < TOL);
    }

    #[test]
    fn swap_gate_values() {
        assert!(u_swap_matrix(0.0).max_abs_diff(&Unitary2::identity()) < TOL);
        let expect = Unitary2::new_real([[0.0, -1.0], [1.0, 0.0]]);
        assert!(u_swap_matrix(PI).max_abs_diff(&expect) < TOL);
        let r = FRAC_1_SQRT_2;
        let expect = Unitary2::new_real([[r, -r], [r, r]]);
        assert!(u_swap_matrix(FRAC_PI_2).max_abs_diff(&expect) < TOL);
    }

    #[test]
    fn b_gate_values() {
        assert!(b_matrix(0.0).max_abs_diff(&Unitary4::identity()) < TOL);
        let expect = Unitary4::diagonal([-ONE, ONE, ONE, -ONE]);
        assert!(b_matrix(PI).max_abs_diff(&expect) < TOL);
        let g = 0.3;
        let b = b_matrix(g);
        // column |01⟩ is untouched, column |11⟩ picks up e^{iγ}
        assert_eq!(b.0[1][1], ONE);
        assert!((b.0[3][3] - phase(g)).norm() < TOL);
    }

    #[test]
    fn matrices_are_exponentials_of_the_paulis() {
        // exp(−iaP/2) = cos(a/2) I − i sin(a/2) P for an involution P.
        let a: f64 = 0.731;
        let (s, co) = (a / 2.0).sin_cos();
        let z = Unitary2::identity().scale(c(co, 0.0));
        let ez = SquareMatrix([
            [z.0[0][0] + sigma_z().0[0][0] * c(0.0, -s), ZERO],
            [ZERO, z.0[1][1] + sigma_z().0[1][1] * c(0.0, -s)],
        ]);
        assert!(u_phase_matrix(a).max_abs_diff(&ez) < TOL);
        let y = sigma_y().scale(c(0.0, -s));
        let ey = SquareMatrix([
            [c(co, 0.0) + y.0[0][0], y.0[0][1]],
            [y.0[1][0], c(co, 0.0) + y.0[1][1]],
        ]);
        assert!(u_swap_matrix(a).max_abs_diff(&ey) < TOL);
    }

    #[test]
    fn transmission_values() {
        assert_eq!(transmission(0.0), 1.0);
        assert!(transmission(PI).abs() < TOL);
        assert!((transmission(FRAC_PI_2) - 2f64.sqrt() / 2.0).abs() < TOL);
    }

    #[test]
    fn dispatch() {
        let m = gate_matrix(&Gate::OneQubitPhase {
            target: 0,
            gamma: 0.0,
        });
        assert_eq!(m, GateMatrix::One(Unitary2::identity()));
        let GateMatrix::Two(b) = gate_matrix(&Gate::ControlledPhase {
            first: 0,
            second: 1,
            gamma: PI,
        }) else {
            panic!("expected two-qubit matrix")
        };
        assert!(b.max_abs_diff(&Unitary4::diagonal([-ONE, ONE, ONE, -ONE])) < TOL);
        let GateMatrix::One(s) = gate_matrix(&Gate::PartialSwap {
            target: 0,
            theta: FRAC_PI_2,
        }) else {
            panic!("expected one-qubit matrix")
        };
        let r = FRAC_1_SQRT_2;
        assert!(s.max_abs_diff(&Unitary2::new_real([[r, -r], [r, r]])) < TOL);
    }

    #[test]
    fn circuit_validation() {
        let mut c = Circuit::new(2).unwrap();
        assert!(c
            .push(Gate::OneQubitPhase {
                target: 1,
                gamma: 1.0
            })
            .is_ok());
        assert_eq!(
            c.push(Gate::PartialSwap {
                target: 2,
                theta: 1.0
            }),
            Err(GateError::IndexOutOfRange {
                index: 1,
                qubit: 2,
                width: 2
            })
        );
        assert_eq!(
            c.push(Gate::ControlledPhase {
                first: 1,
                second: 1,
                gamma: 1.0
            }),
            Err(GateError::RepeatedQubit { index: 1, qubit: 1 })
        );
        assert!(c
            .push(Gate::PartialSwap {
                target: 0,
                theta: f64::NAN
            })
            .is_err());
        assert_eq!(Circuit::new(0), Err(GateError::ZeroWidth));
        assert_eq!(c.len(), 1);
    }

    fn swap_conjugate(m: &Unitary4) -> Unitary4 {
        let mut swap = Unitary4::identity();
        swap.0[1][1] = ZERO;
        swap.0[2][2] = ZERO;
        swap.0[1][2] = ONE;
        swap.0[2][1] = ONE;
        swap * *m * swap
    }

    fn kron2(a: &Unitary2, b: &Unitary2) -> Unitary4 {
        SquareMatrix(std::array::from_fn(|i| {
            std::array::from_fn(|j| a.0[i / 2][j / 2] * b.0[i % 2][j % 2])
        }))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn unitarity(a in -20.0..20.0f64) {
            prop_assert!(u_phase_matrix(a).is_unitary(TOL));
            prop_assert!(u_swap_matrix(a).is_unitary(TOL));
            prop_assert!(b_matrix(a).is_unitary(TOL));
        }

        #[test]
        fn composition(a in -10.0..10.0f64, b in -10.0..10.0f64) {
            prop_assert!((u_phase_matrix(a) * u_phase_matrix(b)).max_abs_diff(&u_phase_matrix(a + b)) < TOL);
            prop_assert!((u_swap_matrix(a) * u_swap_matrix(b)).max_abs_diff(&u_swap_matrix(a + b)) < TOL);
        }

        #[test]
        fn periodicity(a in -10.0..10.0f64) {
            prop_assert!(u_phase_matrix(a + 4.0 * PI).max_abs_diff(&u_phase_matrix(a)) < TOL);
            prop_assert!(b_matrix(a + 2.0 * PI).max_abs_diff(&b_matrix(a)) < TOL);
        }

        #[test]
        fn b_symmetry_and_commutation(g in -10.0..10.0f64, a in -10.0..10.0f64) {
            let b = b_matrix(g);
            prop_assert!(swap_conjugate(&b).max_abs_diff(&b) < TOL);
            let u = u_phase_matrix(a);
            for local in [kron2(&u, &Unitary2::identity()), kron2(&Unitary2::identity(), &u)] {
                prop_assert!((b * local).max_abs_diff(&(local * b)) < TOL);
            }
        }
    }
}
