//! Physical layer: qubits stored as charge/dipole site pairs, loop moves whose
//! phase is `n · γ₀` for winding number `n`, compilation of logical circuits
//! into move schedules, and noisy execution of schedules.
//!
//! Basis: `|0⟩` has the charge on site `a` and the dipole on site `b`, `|1⟩`
//! the reverse. Counter-clockwise winding yields `+n · γ₀`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::gates::{Circuit, Gate, GateError};
use crate::geometry::{
    circle_path, min_distance, perturb_path, winding_number, GeometryError, Point2, Polyline,
    EPS_CLEARANCE,
};
use crate::rng::derive_seed;

/// Angle tolerance for deciding that a requested phase is a multiple of `γ₀`.
pub const QUANTIZATION_TOL: f64 = 1e-9;

/// Vertices per revolution of compiled loops.
pub const CANONICAL_SAMPLES_PER_TURN: usize = 32;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AcError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error("winding {n} exceeds n_max = {n_max}")]
    WindingOutOfRange { n: i64, n_max: i64 },
    #[error("gate {gate_index}: phase is not a multiple of gamma0 (nearest n = {nearest}, residual {residual:e} rad)")]
    PhaseNotQuantized {
        gate_index: usize,
        nearest: i64,
        residual: f64,
    },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
}

pub type Result<T> = std::result::Result<T, AcError>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ACParameters {
    /// Phase per unit winding.
    pub gamma0: f64,
    /// Largest winding magnitude the compiler may emit.
    pub n_max: i64,
    /// Strength of the inverse-distance stray phase on bystander qubits.
    pub crosstalk_lambda: f64,
}

impl Default for ACParameters {
    fn default() -> Self {
        Self {
            gamma0: FRAC_PI_2,
            n_max: 64,
            crosstalk_lambda: 0.0,
        }
    }
}

impl ACParameters {
    pub fn with_gamma0(gamma0: f64) -> Result<Self> {
        let p = Self {
            gamma0,
            ..Self::default()
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.gamma0.is_finite() || self.gamma0 == 0.0 {
            return Err(AcError::InvalidParameters(format!(
                "gamma0 must be finite and nonzero, got {}",
                self.gamma0
            )));
        }
        if self.n_max < 1 {
            return Err(AcError::InvalidParameters(format!(
                "n_max must be at least 1, got {}",
                self.n_max
            )));
        }
        if !(self.crosstalk_lambda.is_finite() && self.crosstalk_lambda >= 0.0) {
            return Err(AcError::InvalidParameters(format!(
                "crosstalk_lambda must be finite and non-negative, got {}",
                self.crosstalk_lambda
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ACQubit {
    pub index: usize,
    pub site_a: Point2,
    pub site_b: Point2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    qubits: Vec<ACQubit>,
    d_min: f64,
}

impl Layout {
    pub fn new(qubits: Vec<ACQubit>, d_min: f64) -> Result<Self> {
        if !(d_min.is_finite() && d_min > 0.0) {
            return Err(AcError::InvalidParameters(format!(
                "d_min must be positive, got {d_min}"
            )));
        }
        if qubits.is_empty() {
            return Err(AcError::InvalidParameters("layout has no qubits".into()));
        }
        let mut sites = Vec::with_capacity(2 * qubits.len());
        for (k, q) in qubits.iter().enumerate() {
            if q.index != k {
                return Err(AcError::InvalidParameters(format!(
                    "qubit at position {k} has index {}",
                    q.index
                )));
            }
            if !(q.site_a.is_finite() && q.site_b.is_finite()) {
                return Err(AcError::InvalidParameters(format!(
                    "qubit {k} has a non-finite site"
                )));
            }
            sites.push(q.site_a);
            sites.push(q.site_b);
        }
        let slack = d_min * 1e-12;
        for i in 0..sites.len() {
            for j in i + 1..sites.len() {
                let d = sites[i].distance(sites[j]);
                if d < d_min - slack {
                    return Err(AcError::InvalidParameters(format!(
                        "sites of qubits {} and {} are {d} apart, below d_min = {d_min}",
                        i / 2,
                        j / 2
                    )));
                }
            }
        }
        Ok(Self { qubits, d_min })
    }

    /// Qubit `k` at `x = 10·k·d_min`, site `a` at `(x, 0)` and site `b` at
    /// `(x, d_min)`.
    pub fn line(width: usize, d_min: f64) -> Result<Self> {
        let qubits = (0..width)
            .map(|k| {
                let x = 10.0 * k as f64 * d_min;
                ACQubit {
                    index: k,
                    site_a: Point2::new(x, 0.0),
                    site_b: Point2::new(x, d_min),
                }
            })
            .collect();
        Self::new(qubits, d_min)
    }

    pub fn qubits(&self) -> &[ACQubit] {
        &self.qubits
    }

    pub fn width(&self) -> usize {
        self.qubits.len()
    }

    pub fn d_min(&self) -> f64 {
        self.d_min
    }

    fn qubit(&self, j: usize) -> Result<&ACQubit> {
        self.qubits.get(j).ok_or_else(|| {
            AcError::InvalidSchedule(format!(
                "qubit {j} not in layout of width {}",
                self.qubits.len()
            ))
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BraidMove {
    /// Carries the particle at site `b` of qubit `mover` around site `a` of
    /// qubit `encircled`.
    InterQubitLoop {
        encircled: usize,
        mover: usize,
        path: Polyline,
    },
    /// Takes the particle at site `a` of qubit `target` around site `b`, only
    /// when site `a` holds the charge.
    ConditionalSelfLoop {
        target: usize,
        path: Polyline,
    },
    BeamSplitter {
        target: usize,
        theta: f64,
    },
}

impl BraidMove {
    pub fn path(&self) -> Option<&Polyline> {
        match self {
            BraidMove::InterQubitLoop { path, .. }
            | BraidMove::ConditionalSelfLoop { path, .. } => Some(path),
            BraidMove::BeamSplitter { .. } => None,
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            BraidMove::InterQubitLoop {
                encircled, mover, ..
            } => vec![encircled, mover],
            BraidMove::ConditionalSelfLoop { target, .. }
            | BraidMove::BeamSplitter { target, .. } => {
                vec![target]
            }
        }
    }

    fn validate(&self, layout: &Layout) -> Result<()> {
        for j in self.qubits() {
            layout.qubit(j)?;
        }
        match self {
            BraidMove::InterQubitLoop {
                encircled,
                mover,
                path,
            } => {
                if encircled == mover {
                    return Err(AcError::InvalidSchedule(format!(
                        "inter-qubit loop needs two distinct qubits, got {encircled} twice"
                    )));
                }
                require_closed(path)
            }
            BraidMove::ConditionalSelfLoop { path, .. } => require_closed(path),
            BraidMove::BeamSplitter { theta, .. } => {
                if theta.is_finite() {
                    Ok(())
                } else {
                    Err(AcError::InvalidSchedule(
                        "non-finite beam-splitter angle".into(),
                    ))
                }
            }
        }
    }
}

fn require_closed(path: &Polyline) -> Result<()> {
    path.validate()?;
    if !path.is_closed() {
        return Err(AcError::InvalidSchedule("loop path must be closed".into()));
    }
    Ok(())
}

/// The site a loop move winds around, if the move is a loop.
pub fn encircled_site(mv: &BraidMove, layout: &Layout) -> Result<Option<Point2>> {
    Ok(match *mv {
        BraidMove::InterQubitLoop { encircled, .. } => Some(layout.qubit(encircled)?.site_a),
        BraidMove::ConditionalSelfLoop { target, .. } => Some(layout.qubit(target)?.site_b),
        BraidMove::BeamSplitter { .. } => None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BraidSchedule {
    layout: Layout,
    moves: Vec<BraidMove>,
}

impl BraidSchedule {
    pub fn new(layout: Layout, moves: Vec<BraidMove>) -> Result<Self> {
        for (i, m) in moves.iter().enumerate() {
            m.validate(&layout)
                .map_err(|e| AcError::InvalidSchedule(format!("move {i}: {e}")))?;
        }
        Ok(Self { layout, moves })
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn moves(&self) -> &[BraidMove] {
        &self.moves
    }
}

/// Phase for winding `n`: exactly `n · γ₀`.
pub fn ac_phase(n: i64, params: &ACParameters) -> Result<f64> {
    if n.abs() > params.n_max {
        return Err(AcError::WindingOutOfRange {
            n,
            n_max: params.n_max,
        });
    }
    Ok(n as f64 * params.gamma0)
}

/// A logical gate together with the global phase the move also applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoveGate {
    pub gate: Gate,
    pub global_phase: f64,
}

fn gate_for_winding(mv: &BraidMove, n: i64, params: &ACParameters) -> Result<MoveGate> {
    let phase = ac_phase(n, params)?;
    Ok(match *mv {
        BraidMove::InterQubitLoop {
            encircled, mover, ..
        } => MoveGate {
            gate: Gate::ControlledPhase {
                first: encircled,
                second: mover,
                gamma: phase,
            },
            global_phase: 0.0,
        },
        // diag(e^{iγ}, 1) = e^{iγ/2} · u_phase_matrix(−γ)
        BraidMove::ConditionalSelfLoop { target, .. } => MoveGate {
            gate: Gate::OneQubitPhase {
                target,
                gamma: -phase,
            },
            global_phase: phase / 2.0,
        },
        BraidMove::BeamSplitter { target, theta } => MoveGate {
            gate: Gate::PartialSwap { target, theta },
            global_phase: 0.0,
        },
    })
}

/// The logical gate a move realizes, with its winding read off the path.
pub fn gate_of_move(mv: &BraidMove, layout: &Layout, params: &ACParameters) -> Result<MoveGate> {
    mv.validate(layout)?;
    let n = match (mv.path(), encircled_site(mv, layout)?) {
        (Some(path), Some(site)) => winding_number(path, site)?.n,
        _ => 0,
    };
    gate_for_winding(mv, n, params)
}

/// Loop of winding `turns` around `site`; winding zero gives a circle beside
/// the site that does not enclose it. `away` points from `site` towards free
/// space.
fn canonical_loop(site: Point2, turns: i64, d_min: f64, away: f64) -> Result<Polyline> {
    let radius = d_min / 4.0;
    Ok(if turns == 0 {
        circle_path(
            site.translate(0.0, away * d_min / 2.0),
            radius,
            1,
            CANONICAL_SAMPLES_PER_TURN,
        )?
    } else {
        circle_path(site, radius, turns, CANONICAL_SAMPLES_PER_TURN)?
    })
}

pub fn canonical_inter_qubit_loop(
    layout: &Layout,
    encircled: usize,
    mover: usize,
    turns: i64,
) -> Result<BraidMove> {
    let site = layout.qubit(encircled)?.site_a;
    let mv = BraidMove::InterQubitLoop {
        encircled,
        mover,
        path: canonical_loop(site, turns, layout.d_min, -1.0)?,
    };
    mv.validate(layout)?;
    Ok(mv)
}

pub fn canonical_conditional_loop(layout: &Layout, target: usize, turns: i64) -> Result<BraidMove> {
    let site = layout.qubit(target)?.site_b;
    let mv = BraidMove::ConditionalSelfLoop {
        target,
        path: canonical_loop(site, turns, layout.d_min, 1.0)?,
    };
    mv.validate(layout)?;
    Ok(mv)
}

/// Integer `n` with `|n| ≤ n_max` and `n·γ₀ ≡ angle (mod period)`, or the
/// closest candidate with its residual.
fn quantize(
    angle: f64,
    period: f64,
    params: &ACParameters,
) -> std::result::Result<i64, (i64, f64)> {
    let residual_of = |n: i64| {
        let d = (angle - n as f64 * params.gamma0).rem_euclid(period);
        d.min(period - d)
    };
    let direct = (angle / params.gamma0).round();
    if direct.abs() <= params.n_max as f64 {
        let n = direct as i64;
        if (angle - n as f64 * params.gamma0).abs() <= QUANTIZATION_TOL {
            return Ok(n);
        }
    }
    let mut best = (0, residual_of(0));
    for m in 0..=params.n_max {
        for n in [m, -m] {
            let r = residual_of(n);
            if r <= QUANTIZATION_TOL {
                return Ok(n);
            }
            if r < best.1 {
                best = (n, r);
            }
        }
    }
    Err(best)
}

/// Winding needed to realize `gate`, or `None` for a beam-splitter gate.
pub fn required_winding(
    gate: &Gate,
    gate_index: usize,
    params: &ACParameters,
) -> Result<Option<i64>> {
    let not_quantized = |(nearest, residual)| AcError::PhaseNotQuantized {
        gate_index,
        nearest,
        residual,
    };
    match *gate {
        Gate::ControlledPhase { gamma, .. } => quantize(gamma, TAU, params)
            .map(Some)
            .map_err(not_quantized),
        Gate::OneQubitPhase { gamma, .. } => quantize(-gamma, 2.0 * TAU, params)
            .map(Some)
            .map_err(not_quantized),
        Gate::PartialSwap { .. } => Ok(None),
    }
}

/// Lowers a logical circuit to canonical moves on `layout`.
pub fn compile_circuit(
    circuit: &Circuit,
    layout: &Layout,
    params: &ACParameters,
) -> Result<BraidSchedule> {
    params.validate()?;
    if circuit.width() > layout.width() {
        return Err(AcError::InvalidSchedule(format!(
            "circuit width {} exceeds layout width {}",
            circuit.width(),
            layout.width()
        )));
    }
    let moves = circuit
        .gates()
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let n = required_winding(g, i, params)?;
            match (*g, n) {
                (Gate::ControlledPhase { first, second, .. }, Some(n)) => {
                    canonical_inter_qubit_loop(layout, first, second, n)
                }
                (Gate::OneQubitPhase { target, .. }, Some(n)) => {
                    canonical_conditional_loop(layout, target, n)
                }
                (Gate::PartialSwap { target, theta }, _) => {
                    Ok(BraidMove::BeamSplitter { target, theta })
                }
                _ => unreachable!("phase gates always carry a winding"),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    BraidSchedule::new(layout.clone(), moves)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    /// Gaussian vertex jitter per coordinate.
    pub sigma_path: f64,
    /// Gaussian jitter on beam-splitter angles, radians.
    pub sigma_theta: f64,
    /// Added to `ACParameters::crosstalk_lambda` during execution.
    pub crosstalk_lambda: f64,
}

impl NoiseSpec {
    pub const fn zero() -> Self {
        Self {
            sigma_path: 0.0,
            sigma_theta: 0.0,
            crosstalk_lambda: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("sigma_path", self.sigma_path),
            ("sigma_theta", self.sigma_theta),
            ("crosstalk_lambda", self.crosstalk_lambda),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(AcError::InvalidParameters(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        Ok(())
    }
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self::zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaultEntry {
    pub move_index: usize,
    pub expected: i64,
    /// `None` when no winding could be read off the path, even after the
    /// retry offset; the move was then skipped.
    pub realized: Option<i64>,
    pub clearance: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FaultLog {
    pub entries: Vec<FaultEntry>,
}

impl FaultLog {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
}

/// A loop after perturbation.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizedLoop {
    pub path: Polyline,
    pub winding: Option<i64>,
    pub clearance: f64,
    pub retried: bool,
}

fn push_away(path: &Polyline, site: Point2, offset: f64) -> Option<Polyline> {
    let moved: Vec<Point2> = path
        .vertices()
        .iter()
        .map(|p| {
            let (dx, dy) = (p.x - site.x, p.y - site.y);
            let r = dx.hypot(dy);
            if r == 0.0 {
                p.translate(offset, 0.0)
            } else {
                p.translate(offset * dx / r, offset * dy / r)
            }
        })
        .collect();
    Polyline::closed(moved).ok()
}

/// Perturbs a loop and reads its winding around `site`. A path landing
/// within the clearance tolerance is retried once with every vertex pushed
/// `2·EPS_CLEARANCE` radially away from the site.
pub fn realize_loop(path: &Polyline, site: Point2, sigma: f64, seed: u64) -> RealizedLoop {
    let perturbed = perturb_path(path, sigma, seed);
    let clearance = min_distance(&perturbed, site).unwrap_or(0.0);
    match winding_number(&perturbed, site) {
        Ok(w) => RealizedLoop {
            path: perturbed,
            winding: Some(w.n),
            clearance: w.clearance,
            retried: false,
        },
        Err(_) => {
            let retry = push_away(&perturbed, site, 2.0 * EPS_CLEARANCE);
            match retry.as_ref().map(|p| (p, winding_number(p, site))) {
                Some((p, Ok(w))) => RealizedLoop {
                    path: p.clone(),
                    winding: Some(w.n),
                    clearance: w.clearance,
                    retried: true,
                },
                _ => RealizedLoop {
                    path: perturbed,
                    winding: None,
                    clearance,
                    retried: true,
                },
            }
        }
    }
}

/// Stray phase `λ / max(d, ε)` induced on a site at distance `d` from a path.
pub fn crosstalk_phase(path: &Polyline, other_site: Point2, lambda: f64) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    let d = min_distance(path, other_site).unwrap_or(0.0);
    lambda / d.max(EPS_CLEARANCE)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Execution {
    pub circuit: Circuit,
    pub global_phase: f64,
    pub faults: FaultLog,
}

/// Runs a schedule under noise and returns the circuit it actually realized.
///
/// Move `i` draws its randomness from `derive_seed(seed, i)`. Each loop is
/// perturbed and its winding recomputed; a winding that differs from the
/// unperturbed one is logged. Loops that cannot be read even after the
/// retry, or whose winding exceeds `n_max`, are logged and replaced by a
/// zero-angle gate. With crosstalk enabled every loop also applies a stray
/// `OneQubitPhase` to each qubit it does not involve.
pub fn execute_schedule(
    schedule: &BraidSchedule,
    params: &ACParameters,
    noise: &NoiseSpec,
    seed: u64,
) -> Result<Execution> {
    params.validate()?;
    noise.validate()?;
    let layout = &schedule.layout;
    let lambda = params.crosstalk_lambda + noise.crosstalk_lambda;
    let mut circuit = Circuit::new(layout.width())?;
    let mut global_phase = 0.0;
    let mut faults = FaultLog::default();

    for (i, mv) in schedule.moves.iter().enumerate() {
        let move_seed = derive_seed(seed, i as u64);
        match mv {
            BraidMove::BeamSplitter { target, theta } => {
                let theta = if noise.sigma_theta > 0.0 {
                    let mut rng = ChaCha8Rng::seed_from_u64(move_seed);
                    let normal = Normal::new(0.0, noise.sigma_theta).expect("validated sigma");
                    theta + normal.sample(&mut rng)
                } else {
                    *theta
                };
                circuit.push(Gate::PartialSwap {
                    target: *target,
                    theta,
                })?;
            }
            BraidMove::InterQubitLoop { path, .. }
            | BraidMove::ConditionalSelfLoop { path, .. } => {
                let site = encircled_site(mv, layout)?.expect("loop moves encircle a site");
                let expected = winding_number(path, site)?.n;
                let realized = realize_loop(path, site, noise.sigma_path, move_seed);
                let usable = realized.winding.filter(|n| n.abs() <= params.n_max);
                if realized.winding != Some(expected) {
                    faults.entries.push(FaultEntry {
                        move_index: i,
                        expected,
                        realized: realized.winding,
                        clearance: realized.clearance,
                    });
                }
                let mg = gate_for_winding(mv, usable.unwrap_or(0), params)?;
                circuit.push(mg.gate)?;
                global_phase += mg.global_phase;

                if lambda > 0.0 {
                    let involved = mv.qubits();
                    for q in layout
                        .qubits()
                        .iter()
                        .filter(|q| !involved.contains(&q.index))
                    {
                        let stray = crosstalk_phase(&realized.path, q.site_a, lambda)
                            .max(crosstalk_phase(&realized.path, q.site_b, lambda));
                        circuit.push(Gate::OneQubitPhase {
                            target: q.index,
                            gamma: stray,
                        })?;
                    }
                }
            }
        }
    }
    Ok(Execution {
        circuit,
        global_phase: wrap_phase(global_phase),
        faults,
    })
}

/// Reduces an angle to `(−π, π]`.
pub fn wrap_phase(angle: f64) -> f64 {
    let w = angle.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}
