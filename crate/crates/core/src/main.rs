use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use acsim::ac_model::{
    compile_circuit, encircled_site, execute_schedule, ACParameters, Layout, NoiseSpec,
};
use acsim::experiments::{
    demo_deutsch_jozsa, sweep_deformation, sweep_winding, DeformationConfig, Oracle, WindingConfig,
};
use acsim::formats::{parse_circuit, parse_schedule, write_circuit, write_schedule};
use acsim::geometry::{circle_path, winding_number, Point2};
use acsim::simulator::{init_state, sample_counts};
use acsim::Error;

#[derive(Parser)]
#[command(
    name = "acsim",
    version,
    about = "Winding-number quantum gate simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a circuit file and print the outcome histogram
    Run {
        circuit: PathBuf,
        /// Initial basis state (defaults to all zeros)
        #[arg(long)]
        input: Option<String>,
        #[arg(long, default_value_t = 1024)]
        shots: usize,
        #[arg(long, env = "ACSIM_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Compile a circuit file into a move schedule
    Compile {
        circuit: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        gamma0: f64,
        #[arg(long, default_value_t = 1.0)]
        d_min: f64,
        #[arg(long, default_value_t = 64)]
        n_max: i64,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Execute a schedule under noise: realized circuit, fault log, histogram
    Execute {
        schedule: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        sigma_path: f64,
        #[arg(long, default_value_t = 0.0)]
        sigma_theta: f64,
        #[arg(long, default_value_t = 0.0)]
        lambda: f64,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2, allow_hyphen_values = true)]
        gamma0: f64,
        #[arg(long, default_value_t = 64)]
        n_max: i64,
        #[arg(long)]
        input: Option<String>,
        #[arg(long, default_value_t = 1024)]
        shots: usize,
        #[arg(long, env = "ACSIM_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Print winding number and clearance of one loop move
    Winding {
        schedule: PathBuf,
        #[arg(long = "move")]
        move_index: usize,
    },
    /// Robustness sweeps written as CSV
    Sweep {
        #[command(subcommand)]
        kind: SweepKind,
    },
    /// End-to-end demos
    Demo {
        #[command(subcommand)]
        demo: DemoKind,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GateKind {
    Topological,
    Dynamical,
}

#[derive(Subcommand)]
enum SweepKind {
    /// Vertex jitter sweep on a circular loop, winding gate vs area comparator
    Deformation {
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "0,0.001,0.01,0.05,0.1,0.2,0.4"
        )]
        sigmas: Vec<f64>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, env = "ACSIM_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 32)]
        samples: usize,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        turns: i64,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2, allow_hyphen_values = true)]
        gamma0: f64,
        #[arg(long, default_value_t = 10.0)]
        lambda_area: f64,
        /// Which gate's rows go into the CSV
        #[arg(long, value_enum, default_value = "topological")]
        gate: GateKind,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Fault probability against winding number at fixed jitter
    Winding {
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
        n_values: Vec<i64>,
        #[arg(long, default_value_t = 0.3)]
        sigma: f64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, env = "ACSIM_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 32)]
        samples: usize,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2, allow_hyphen_values = true)]
        gamma0: f64,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
}

#[derive(Subcommand)]
enum DemoKind {
    /// Two-qubit Deutsch-Jozsa through compile, execute, simulate, measure
    Dj {
        #[arg(long, value_parser = ["const0", "const1", "balanced_id", "balanced_not"])]
        oracle: String,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2, allow_hyphen_values = true)]
        gamma0: f64,
        #[arg(long, env = "ACSIM_SEED", default_value_t = 0)]
        seed: u64,
    },
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), Error> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn print_histogram(
    width: usize,
    input: Option<&str>,
    circuit: &acsim::gates::Circuit,
    shots: usize,
    seed: u64,
) -> Result<(), Error> {
    let zeros = "0".repeat(width);
    let start = init_state(width, input.unwrap_or(&zeros))?;
    let out = start.run(circuit)?;
    for (label, count) in sample_counts(&out, shots, seed) {
        println!("{label} {count}");
    }
    Ok(())
}

fn params(gamma0: f64, n_max: i64, lambda: f64) -> Result<ACParameters, Error> {
    let p = ACParameters {
        gamma0,
        n_max,
        crosstalk_lambda: lambda,
    };
    p.validate()?;
    Ok(p)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run {
            circuit,
            input,
            shots,
            seed,
        } => {
            let c = parse_circuit(&read(&circuit)?)?;
            print_histogram(c.width(), input.as_deref(), &c, shots, seed)
        }
        Command::Compile {
            circuit,
            gamma0,
            d_min,
            n_max,
            output,
        } => {
            let c = parse_circuit(&read(&circuit)?)?;
            let p = params(gamma0, n_max, 0.0)?;
            let layout = Layout::line(c.width(), d_min)?;
            let schedule = compile_circuit(&c, &layout, &p)?;
            write(&output, &write_schedule(&schedule)?)
        }
        Command::Execute {
            schedule,
            sigma_path,
            sigma_theta,
            lambda,
            gamma0,
            n_max,
            input,
            shots,
            seed,
        } => {
            let s = parse_schedule(&read(&schedule)?)?;
            let p = params(gamma0, n_max, 0.0)?;
            let noise = NoiseSpec {
                sigma_path,
                sigma_theta,
                crosstalk_lambda: lambda,
            };
            let e = execute_schedule(&s, &p, &noise, seed)?;
            print!("{}", write_circuit(&e.circuit));
            println!("# global_phase {}", e.global_phase);
            println!("# faults {}", e.faults.len());
            for f in &e.faults.entries {
                let realized = f.realized.map_or("none".to_string(), |n| n.to_string());
                println!(
                    "# fault move={} expected={} realized={} clearance={}",
                    f.move_index, f.expected, realized, f.clearance
                );
            }
            print_histogram(e.circuit.width(), input.as_deref(), &e.circuit, shots, seed)
        }
        Command::Winding {
            schedule,
            move_index,
        } => {
            let s = parse_schedule(&read(&schedule)?)?;
            let mv = s.moves().get(move_index).ok_or_else(|| {
                Error::Usage(format!(
                    "schedule has {} moves, no move {move_index}",
                    s.moves().len()
                ))
            })?;
            let (Some(path), Some(site)) = (mv.path(), encircled_site(mv, s.layout())?) else {
                return Err(Error::Usage(format!("move {move_index} is not a loop")));
            };
            let w = winding_number(path, site)?;
            println!("winding {} clearance {}", w.n, w.clearance);
            Ok(())
        }
        Command::Sweep { kind } => match kind {
            SweepKind::Deformation {
                sigmas,
                trials,
                seed,
                radius,
                samples,
                turns,
                gamma0,
                lambda_area,
                gate,
                output,
            } => {
                let center = Point2::new(0.0, 0.0);
                let path = circle_path(center, radius, turns, samples)?;
                let config = DeformationConfig {
                    gamma0,
                    lambda_area,
                };
                let sweep = sweep_deformation(&path, center, &sigmas, trials, seed, &config)?;
                let rows = match gate {
                    GateKind::Topological => sweep.topological,
                    GateKind::Dynamical => sweep.dynamical,
                };
                write(&output, &rows.to_csv())
            }
            SweepKind::Winding {
                n_values,
                sigma,
                trials,
                seed,
                radius,
                samples,
                gamma0,
                output,
            } => {
                let config = WindingConfig {
                    radius,
                    samples_per_turn: samples,
                    gamma0,
                };
                let result = sweep_winding(&n_values, sigma, trials, seed, &config)?;
                write(&output, &result.to_csv())
            }
        },
        Command::Demo {
            demo:
                DemoKind::Dj {
                    oracle,
                    gamma0,
                    seed,
                },
        } => {
            let oracle: Oracle = oracle.parse()?;
            let p = params(gamma0, 64, 0.0)?;
            println!("{}", demo_deutsch_jozsa(oracle, &p, seed)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
