//! Line-based text formats for circuits and move schedules.
//!
//! Circuit files:
//!
//! ```text
//! WIDTH <N>
//! UPHASE <j> <gamma>
//! USWAP <j> <theta>
//! B <j> <j'> <gamma>
//! ```
//!
//! Schedule files:
//!
//! ```text
//! LAYOUT <N> <d_min>
//! LOOP <j> <j'> <n_turns> [x1 y1 x2 y2 ...]
//! CONDLOOP <j> <n_turns>
//! BS <j> <theta>
//! ```
//!
//! Keywords are case-insensitive and `#` starts a comment. A `LOOP` without
//! vertices uses the canonical circle; with vertices the path is closed
//! implicitly and its winding must equal `n_turns`.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::ac_model::{
    canonical_conditional_loop, canonical_inter_qubit_loop, encircled_site, AcError, BraidMove,
    BraidSchedule, Layout,
};
use crate::gates::{Circuit, Gate};
use crate::geometry::{winding_number, Point2, Polyline};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: AcError },
}

pub type Result<T> = std::result::Result<T, FormatError>;

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

/// Non-empty, comment-stripped lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn field<T: FromStr>(tokens: &[&str], idx: usize, line: usize, what: &str) -> Result<T> {
    let tok = tokens
        .get(idx)
        .ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} {tok:?}")))
}

fn finite(v: f64, line: usize, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(parse_err(line, format!("{what} must be finite")))
    }
}

fn arity(tokens: &[&str], n: usize, line: usize) -> Result<()> {
    if tokens.len() != n {
        return Err(parse_err(
            line,
            format!(
                "{} expects {} arguments, got {}",
                tokens[0],
                n - 1,
                tokens.len() - 1
            ),
        ));
    }
    Ok(())
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (line, tokens) in content_lines(text) {
        let keyword = tokens[0].to_ascii_uppercase();
        if keyword == "WIDTH" {
            arity(&tokens, 2, line)?;
            if circuit.is_some() {
                return Err(parse_err(line, "duplicate WIDTH"));
            }
            let width: usize = field(&tokens, 1, line, "width")?;
            circuit = Some(Circuit::new(width).map_err(|e| parse_err(line, e.to_string()))?);
            continue;
        }
        let c = circuit
            .as_mut()
            .ok_or_else(|| parse_err(line, "WIDTH must come before any gate"))?;
        let gate = match keyword.as_str() {
            "UPHASE" => {
                arity(&tokens, 3, line)?;
                Gate::OneQubitPhase {
                    target: field(&tokens, 1, line, "qubit")?,
                    gamma: finite(field(&tokens, 2, line, "angle")?, line, "angle")?,
                }
            }
            "USWAP" => {
                arity(&tokens, 3, line)?;
                Gate::PartialSwap {
                    target: field(&tokens, 1, line, "qubit")?,
                    theta: finite(field(&tokens, 2, line, "angle")?, line, "angle")?,
                }
            }
            "B" => {
                arity(&tokens, 4, line)?;
                Gate::ControlledPhase {
                    first: field(&tokens, 1, line, "qubit")?,
                    second: field(&tokens, 2, line, "qubit")?,
                    gamma: finite(field(&tokens, 3, line, "angle")?, line, "angle")?,
                }
            }
            other => return Err(parse_err(line, format!("unknown keyword {other:?}"))),
        };
        c.push(gate).map_err(|e| parse_err(line, e.to_string()))?;
    }
    circuit.ok_or_else(|| parse_err(0, "missing WIDTH line"))
}

pub fn write_circuit(circuit: &Circuit) -> String {
    let mut out = format!("WIDTH {}\n", circuit.width());
    for g in circuit.gates() {
        let _ = match *g {
            Gate::OneQubitPhase { target, gamma } => writeln!(out, "UPHASE {target} {gamma}"),
            Gate::PartialSwap { target, theta } => writeln!(out, "USWAP {target} {theta}"),
            Gate::ControlledPhase {
                first,
                second,
                gamma,
            } => {
                writeln!(out, "B {first} {second} {gamma}")
            }
        };
    }
    out
}

pub fn parse_schedule(text: &str) -> Result<BraidSchedule> {
    let mut layout: Option<Layout> = None;
    let mut moves = Vec::new();
    for (line, tokens) in content_lines(text) {
        let keyword = tokens[0].to_ascii_uppercase();
        let invalid = |source: AcError| FormatError::Invalid { line, source };
        if keyword == "LAYOUT" {
            arity(&tokens, 3, line)?;
            if layout.is_some() {
                return Err(parse_err(line, "duplicate LAYOUT"));
            }
            let n: usize = field(&tokens, 1, line, "qubit count")?;
            let d_min: f64 = field(&tokens, 2, line, "d_min")?;
            layout = Some(Layout::line(n, d_min).map_err(invalid)?);
            continue;
        }
        let lay = layout
            .as_ref()
            .ok_or_else(|| parse_err(line, "LAYOUT must come before any move"))?;
        let mv = match keyword.as_str() {
            "LOOP" => {
                if tokens.len() < 4 {
                    return Err(parse_err(line, "LOOP expects <j> <j'> <n_turns> [x y ...]"));
                }
                let encircled: usize = field(&tokens, 1, line, "qubit")?;
                let mover: usize = field(&tokens, 2, line, "qubit")?;
                let turns: i64 = field(&tokens, 3, line, "winding")?;
                let coords = tokens[4..]
                    .iter()
                    .map(|t| {
                        t.parse::<f64>()
                            .map_err(|_| parse_err(line, format!("invalid coordinate {t:?}")))
                            .and_then(|v| finite(v, line, "coordinate"))
                    })
                    .collect::<Result<Vec<f64>>>()?;
                if coords.is_empty() {
                    canonical_inter_qubit_loop(lay, encircled, mover, turns).map_err(invalid)?
                } else {
                    if coords.len() % 2 != 0 {
                        return Err(parse_err(line, "odd number of path coordinates"));
                    }
                    let vertices = coords.chunks(2).map(|c| Point2::new(c[0], c[1])).collect();
                    let path = Polyline::closed(vertices).map_err(|e| invalid(e.into()))?;
                    let mv = BraidMove::InterQubitLoop {
                        encircled,
                        mover,
                        path,
                    };
                    let site = encircled_site(&mv, lay).map_err(invalid)?.expect("loop");
                    let found = winding_number(mv.path().expect("loop"), site)
                        .map_err(|e| invalid(e.into()))?
                        .n;
                    if found != turns {
                        return Err(invalid(AcError::InvalidSchedule(format!(
                            "declared winding {turns} but path winds {found} times"
                        ))));
                    }
                    mv
                }
            }
            "CONDLOOP" => {
                arity(&tokens, 3, line)?;
                let target: usize = field(&tokens, 1, line, "qubit")?;
                let turns: i64 = field(&tokens, 2, line, "winding")?;
                canonical_conditional_loop(lay, target, turns).map_err(invalid)?
            }
            "BS" => {
                arity(&tokens, 3, line)?;
                BraidMove::BeamSplitter {
                    target: field(&tokens, 1, line, "qubit")?,
                    theta: finite(field(&tokens, 2, line, "angle")?, line, "angle")?,
                }
            }
            other => return Err(parse_err(line, format!("unknown keyword {other:?}"))),
        };
        moves.push((line, mv));
    }
    let layout = layout.ok_or_else(|| parse_err(0, "missing LAYOUT line"))?;
    let last_line = moves.last().map_or(0, |(l, _)| *l);
    BraidSchedule::new(layout, moves.into_iter().map(|(_, m)| m).collect()).map_err(|source| {
        FormatError::Invalid {
            line: last_line,
            source,
        }
    })
}

/// Serializes a schedule whose layout is a canonical line layout. Loops that
/// match the canonical circle for their winding are written without vertices.
pub fn write_schedule(schedule: &BraidSchedule) -> std::result::Result<String, AcError> {
    let layout = schedule.layout();
    let mut out = format!("LAYOUT {} {}\n", layout.width(), layout.d_min());
    for mv in schedule.moves() {
        let turns = match (mv.path(), encircled_site(mv, layout)?) {
            (Some(path), Some(site)) => winding_number(path, site)?.n,
            _ => 0,
        };
        let _ = match mv {
            BraidMove::InterQubitLoop {
                encircled,
                mover,
                path,
            } => {
                let canonical = canonical_inter_qubit_loop(layout, *encircled, *mover, turns)?;
                write!(out, "LOOP {encircled} {mover} {turns}")
                    .and_then(|_| {
                        if canonical.path() == Some(path) {
                            Ok(())
                        } else {
                            path.distinct_vertices()
                                .iter()
                                .try_for_each(|p| write!(out, " {} {}", p.x, p.y))
                        }
                    })
                    .and_then(|_| writeln!(out))
            }
            BraidMove::ConditionalSelfLoop { target, path } => {
                let canonical = canonical_conditional_loop(layout, *target, turns)?;
                if canonical.path() != Some(path) {
                    return Err(AcError::InvalidSchedule(
                        "conditional loops must use the canonical path to be written".into(),
                    ));
                }
                writeln!(out, "CONDLOOP {target} {turns}")
            }
            BraidMove::BeamSplitter { target, theta } => writeln!(out, "BS {target} {theta}"),
        };
    }
    Ok(out)
}
