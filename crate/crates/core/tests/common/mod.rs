#![allow(dead_code)]

use acsim::gates::{b_matrix, gate_matrix, Gate, GateMatrix};
use acsim::geometry::{min_distance, Point2, Polyline};
use acsim::matrix::{Matrix, SquareMatrix, Unitary2, C64};
use acsim::simulator::StateVector;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn gaussian_c64(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

pub fn random_state(width: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let mut amps: Vec<C64> = (0..1usize << width).map(|_| gaussian_c64(rng)).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    StateVector::from_amplitudes(amps).expect("normalized")
}

/// Haar-distributed 2×2 unitary from Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng) -> Unitary2 {
    let c0 = [gaussian_c64(rng), gaussian_c64(rng)];
    let n0 = (c0[0].norm_sqr() + c0[1].norm_sqr()).sqrt();
    let e0 = [c0[0] / n0, c0[1] / n0];
    let c1 = [gaussian_c64(rng), gaussian_c64(rng)];
    let proj = e0[0].conj() * c1[0] + e0[1].conj() * c1[1];
    let r = [c1[0] - proj * e0[0], c1[1] - proj * e0[1]];
    let n1 = (r[0].norm_sqr() + r[1].norm_sqr()).sqrt();
    let e1 = [r[0] / n1, r[1] / n1];
    SquareMatrix([[e0[0], e1[0]], [e0[1], e1[1]]])
}

pub fn random_gate(width: usize, rng: &mut ChaCha8Rng) -> Gate {
    let angle = rng.random_range(-10.0..10.0);
    let kind = if width >= 2 {
        rng.random_range(0..3)
    } else {
        rng.random_range(0..2)
    };
    let target = rng.random_range(0..width);
    match kind {
        0 => Gate::OneQubitPhase {
            target,
            gamma: angle,
        },
        1 => Gate::PartialSwap {
            target,
            theta: angle,
        },
        _ => {
            let first = target;
            let mut second = rng.random_range(0..width - 1);
            if second >= first {
                second += 1;
            }
            Gate::ControlledPhase {
                first,
                second,
                gamma: angle,
            }
        }
    }
}

fn two_by_two(rows: [[C64; 2]; 2]) -> Matrix {
    Matrix::from_columns(&[vec![rows[0][0], rows[1][0]], vec![rows[0][1], rows[1][1]]])
}

/// Kronecker product over qubits 0..width (qubit 0 leftmost) with `factor(q)`
/// supplying the 2×2 factor on qubit `q`.
pub fn kron_chain(width: usize, factor: impl Fn(usize) -> Matrix) -> Matrix {
    (1..width).fold(factor(0), |acc, q| acc.kron(&factor(q)))
}

/// Full `2^width` matrix of a gate, assembled from Kronecker products only.
pub fn full_gate_matrix(gate: &Gate, width: usize) -> Matrix {
    let id = Matrix::identity(2);
    match (gate, gate_matrix(gate)) {
        (
            Gate::OneQubitPhase { target, .. } | Gate::PartialSwap { target, .. },
            GateMatrix::One(u),
        ) => {
            let u = two_by_two(u.0);
            kron_chain(width, |q| if q == *target { u.clone() } else { id.clone() })
        }
        (
            Gate::ControlledPhase {
                first,
                second,
                gamma,
            },
            _,
        ) => {
            let b = b_matrix(*gamma).0;
            let projector = |bit: usize| {
                let mut p = Matrix::zeros(2);
                p.set(bit, bit, C64::new(1.0, 0.0));
                p
            };
            let mut total = Matrix::zeros(1 << width);
            for a in 0..2 {
                for c in 0..2 {
                    let term = kron_chain(width, |q| {
                        if q == *first {
                            projector(a)
                        } else if q == *second {
                            projector(c)
                        } else {
                            id.clone()
                        }
                    })
                    .scale(b[2 * a + c][2 * a + c]);
                    for r in 0..total.dim() {
                        for k in 0..total.dim() {
                            total.set(r, k, total.get(r, k) + term.get(r, k));
                        }
                    }
                }
            }
            total
        }
        _ => unreachable!("gate_matrix arity matches the gate kind"),
    }
}

pub fn random_closed_polyline(rng: &mut ChaCha8Rng) -> Polyline {
    let count = rng.random_range(3..=100);
    let vertices = (0..count)
        .map(|_| Point2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    Polyline::closed(vertices).expect("finite vertices")
}

/// Star-shaped loop making `turns` signed revolutions with random radii.
pub fn random_multiturn_polyline(rng: &mut ChaCha8Rng) -> Polyline {
    let turns: i64 = rng.random_range(-4..=4);
    let count = rng
        .random_range(3..=100)
        .max(3 * turns.unsigned_abs() as usize + 3);
    let step = if turns == 0 {
        0.0
    } else {
        turns as f64 * std::f64::consts::TAU / count as f64
    };
    let wobble = if turns == 0 { 1.0 } else { 0.0 };
    let vertices = (0..count)
        .map(|k| {
            let t = step * k as f64 + wobble * rng.random_range(-3.0..3.0);
            let r = rng.random_range(0.2..1.0);
            Point2::new(r * t.cos(), r * t.sin())
        })
        .collect();
    Polyline::closed(vertices).expect("finite vertices")
}

/// Draws centers until one sits more than `clearance` from the path.
pub fn random_center(path: &Polyline, clearance: f64, rng: &mut ChaCha8Rng) -> Point2 {
    loop {
        let c = Point2::new(rng.random_range(-1.2..1.2), rng.random_range(-1.2..1.2));
        if min_distance(path, c).expect("non-empty path") > clearance {
            return c;
        }
    }
}
