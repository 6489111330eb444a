//! Robustness experiments contrasting winding-number gates with an
//! area-dependent comparator, plus an end-to-end Deutsch-Jozsa run.
//!
//! Every trial draws from `derive_seed(derive_seed(seed, point), trial)`, so
//! results do not depend on how trials are scheduled across threads.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::ac_model::{
    compile_circuit, execute_schedule, realize_loop, ACParameters, AcError, Layout, NoiseSpec,
};
use crate::gates::{Circuit, Gate, GateError};
use crate::geometry::{
    circle_path, enclosed_area, winding_number, GeometryError, Point2, Polyline,
};
use crate::rng::derive_seed;
use crate::simulator::{init_state, measure_all, SimError, StateVector};
use crate::synthesis::{
    cnot_construction, hadamard, pauli_x, synthesize_one_qubit, SynthesisError,
};

/// Phase deviation above which a comparator trial counts as a fault.
pub const COMPARATOR_FAULT_TOL: f64 = 1e-9;

pub const CSV_HEADER: &str = "param,trials,fault_rate,mean_fidelity,std_error";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Ac(#[from] AcError),
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
}

pub type Result<T> = std::result::Result<T, ExperimentError>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub param: f64,
    pub trials: usize,
    pub fault_rate: f64,
    pub mean_fidelity: f64,
    /// Binomial standard error of `fault_rate`.
    pub std_error: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                format_g12(r.param),
                r.trials,
                format_g12(r.fault_rate),
                format_g12(r.mean_fidelity),
                format_g12(r.std_error)
            ));
        }
        out
    }
}

/// `%.12g`-style formatting: 12 significant digits, trailing zeros dropped,
/// scientific notation outside `1e-5 ≤ |x| < 1e12`.
pub fn format_g12(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..DIGITS).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn summarize(param: f64, outcomes: &[(bool, f64)]) -> SweepRow {
    let trials = outcomes.len();
    let faults = outcomes.iter().filter(|(f, _)| *f).count();
    let fault_rate = faults as f64 / trials as f64;
    let mean_fidelity = outcomes.iter().map(|(_, fid)| fid).sum::<f64>() / trials as f64;
    SweepRow {
        param,
        trials,
        fault_rate,
        mean_fidelity: mean_fidelity.clamp(0.0, 1.0),
        std_error: (fault_rate * (1.0 - fault_rate) / trials as f64).sqrt(),
    }
}

/// Phase of the area-based comparator gate: `lambda_area · enclosed_area`.
pub fn dynamical_comparator_phase(path: &Polyline, lambda_area: f64) -> Result<f64> {
    Ok(lambda_area * enclosed_area(path)?)
}

/// Fidelity between `B(ideal)` and `B(realized)` applied to the uniform
/// two-qubit state.
pub fn controlled_phase_fidelity(ideal: f64, realized: f64) -> Result<f64> {
    let psi = StateVector::uniform(2)?;
    let gate = |gamma| Gate::ControlledPhase {
        first: 0,
        second: 1,
        gamma,
    };
    let a = psi.apply(&gate(ideal))?;
    let b = psi.apply(&gate(realized))?;
    Ok(a.fidelity(&b)?)
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(ExperimentError::InvalidParameter(
            "trials must be at least 1".into(),
        ));
    }
    Ok(())
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(ExperimentError::InvalidParameter(format!(
            "sigma must be finite and non-negative, got {sigma}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationConfig {
    pub gamma0: f64,
    pub lambda_area: f64,
}

impl Default for DeformationConfig {
    fn default() -> Self {
        Self {
            gamma0: std::f64::consts::FRAC_PI_2,
            lambda_area: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeformationSweep {
    pub topological: SweepResult,
    pub dynamical: SweepResult,
}

/// Per-trial outcome of one deformation: `(fault, fidelity)` for the
/// winding gate and for the comparator, computed on the same perturbed path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationTrial {
    pub topological: (bool, f64),
    pub dynamical: (bool, f64),
    pub max_displacement: f64,
}

pub fn deformation_trial(
    base_path: &Polyline,
    center: Point2,
    sigma: f64,
    seed: u64,
    config: &DeformationConfig,
) -> Result<DeformationTrial> {
    let ideal_n = winding_number(base_path, center)?.n;
    let ideal_area_phase = dynamical_comparator_phase(base_path, config.lambda_area)?;
    let realized = realize_loop(base_path, center, sigma, seed);

    let topo_fault = realized.winding != Some(ideal_n);
    let realized_n = realized.winding.unwrap_or(0);
    let topo_fid = controlled_phase_fidelity(
        ideal_n as f64 * config.gamma0,
        realized_n as f64 * config.gamma0,
    )?;

    let area_phase = dynamical_comparator_phase(&realized.path, config.lambda_area)?;
    let dyn_fault = (area_phase - ideal_area_phase).abs() > COMPARATOR_FAULT_TOL;
    let dyn_fid = controlled_phase_fidelity(ideal_area_phase, area_phase)?;

    Ok(DeformationTrial {
        topological: (topo_fault, topo_fid),
        dynamical: (dyn_fault, dyn_fid),
        max_displacement: base_path.max_displacement(&realized.path),
    })
}

/// For each sigma, perturbs `base_path` `trials` times and scores both the
/// winding gate and the area comparator on the same perturbations.
pub fn sweep_deformation(
    base_path: &Polyline,
    center: Point2,
    sigmas: &[f64],
    trials: usize,
    seed: u64,
    config: &DeformationConfig,
) -> Result<DeformationSweep> {
    check_trials(trials)?;
    if !(config.gamma0.is_finite() && config.lambda_area.is_finite()) {
        return Err(ExperimentError::InvalidParameter(
            "non-finite gate constant".into(),
        ));
    }
    winding_number(base_path, center)?;
    let mut sweep = DeformationSweep {
        topological: SweepResult::default(),
        dynamical: SweepResult::default(),
    };
    for (k, &sigma) in sigmas.iter().enumerate() {
        check_sigma(sigma)?;
        let point_seed = derive_seed(seed, k as u64);
        let outcomes = (0..trials)
            .into_par_iter()
            .map(|t| {
                deformation_trial(
                    base_path,
                    center,
                    sigma,
                    derive_seed(point_seed, t as u64),
                    config,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let topo: Vec<_> = outcomes.iter().map(|o| o.topological).collect();
        let dynamical: Vec<_> = outcomes.iter().map(|o| o.dynamical).collect();
        sweep.topological.rows.push(summarize(sigma, &topo));
        sweep.dynamical.rows.push(summarize(sigma, &dynamical));
    }
    Ok(sweep)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingConfig {
    pub radius: f64,
    pub samples_per_turn: usize,
    pub gamma0: f64,
}

impl Default for WindingConfig {
    fn default() -> Self {
        Self {
            radius: 1.0,
            samples_per_turn: 32,
            gamma0: std::f64::consts::FRAC_PI_2,
        }
    }
}

/// Fault probability of an `n`-turn loop of fixed radius under vertex jitter
/// `sigma`, for each `n` in `n_values`.
pub fn sweep_winding(
    n_values: &[i64],
    sigma: f64,
    trials: usize,
    seed: u64,
    config: &WindingConfig,
) -> Result<SweepResult> {
    check_trials(trials)?;
    check_sigma(sigma)?;
    let center = Point2::new(0.0, 0.0);
    let mut result = SweepResult::default();
    for (k, &n) in n_values.iter().enumerate() {
        if n < 1 {
            return Err(ExperimentError::InvalidParameter(format!(
                "winding values must be at least 1, got {n}"
            )));
        }
        let path = circle_path(center, config.radius, n, config.samples_per_turn)?;
        let point_seed = derive_seed(seed, k as u64);
        let outcomes = (0..trials)
            .into_par_iter()
            .map(|t| {
                let r = realize_loop(&path, center, sigma, derive_seed(point_seed, t as u64));
                let realized = r.winding.unwrap_or(0);
                let fid = controlled_phase_fidelity(
                    n as f64 * config.gamma0,
                    realized as f64 * config.gamma0,
                )?;
                Ok((r.winding != Some(n), fid))
            })
            .collect::<Result<Vec<_>>>()?;
        result.rows.push(summarize(n as f64, &outcomes));
    }
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Oracle {
    Const0,
    Const1,
    BalancedId,
    BalancedNot,
}

impl Oracle {
    pub const ALL: [Oracle; 4] = [
        Oracle::Const0,
        Oracle::Const1,
        Oracle::BalancedId,
        Oracle::BalancedNot,
    ];

    pub fn is_constant(&self) -> bool {
        matches!(self, Oracle::Const0 | Oracle::Const1)
    }
}

impl FromStr for Oracle {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "const0" => Ok(Oracle::Const0),
            "const1" => Ok(Oracle::Const1),
            "balanced_id" => Ok(Oracle::BalancedId),
            "balanced_not" => Ok(Oracle::BalancedNot),
            _ => Err(ExperimentError::InvalidParameter(format!(
                "unknown oracle {s:?}"
            ))),
        }
    }
}

impl fmt::Display for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Oracle::Const0 => "const0",
            Oracle::Const1 => "const1",
            Oracle::BalancedId => "balanced_id",
            Oracle::BalancedNot => "balanced_not",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Constant,
    Balanced,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Constant => "constant",
            Verdict::Balanced => "balanced",
        })
    }
}

/// Two-qubit Deutsch-Jozsa circuit (qubit 0 = input, qubit 1 = ancilla),
/// to be run from `|01⟩`.
pub fn deutsch_jozsa_circuit(oracle: Oracle, params: &ACParameters) -> Result<Circuit> {
    let h0 = synthesize_one_qubit(&hadamard(), 0, 2)?.circuit;
    let h1 = synthesize_one_qubit(&hadamard(), 1, 2)?.circuit;
    let x1 = synthesize_one_qubit(&pauli_x(), 1, 2)?.circuit;
    let mut c = Circuit::new(2)?;
    c.extend(&h0)?;
    c.extend(&h1)?;
    match oracle {
        Oracle::Const0 => {}
        Oracle::Const1 => c.extend(&x1)?,
        Oracle::BalancedId => c.extend(&cnot_construction(params)?.circuit)?,
        Oracle::BalancedNot => {
            c.extend(&cnot_construction(params)?.circuit)?;
            c.extend(&x1)?;
        }
    }
    c.extend(&h0)?;
    Ok(c)
}

/// Compiles, executes noise-free, simulates from `|01⟩` and measures.
pub fn demo_deutsch_jozsa(oracle: Oracle, params: &ACParameters, seed: u64) -> Result<Verdict> {
    let circuit = deutsch_jozsa_circuit(oracle, params)?;
    let layout = Layout::line(2, 1.0)?;
    let schedule = compile_circuit(&circuit, &layout, params)?;
    let realized = execute_schedule(&schedule, params, &NoiseSpec::zero(), seed)?;
    let out = init_state(2, "01")?.run(&realized.circuit)?;
    let outcome = measure_all(&out, seed);
    Ok(if outcome.bitstring.starts_with('0') {
        Verdict::Constant
    } else {
        Verdict::Balanced
    })
}
