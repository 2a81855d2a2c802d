//! File formats shared by the command-line tool and the test suites.
//!
//! States and gates travel as JSON with a `kind` tag; complex entries are
//! two-element `[re, im]` arrays. Waveforms and trajectories are CSV with
//! floats printed to 17 significant digits so a written file reads back
//! bit-exactly.

use crate::fourier::{ComplexityRow, GateOp, QftCircuit};
use crate::lti::TrajectoryPoint;
use crate::signal::SampledSignal;
use crate::state::{
    ComplexAmplitudeState, OrthogonalGate, RealAmplitudeState, State, StateError, UnitaryGate,
};
use num_complex::Complex64;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    State(#[from] StateError),
    #[error("malformed CSV at line {line}: {reason}")]
    Csv { line: usize, reason: String },
}

fn schema(msg: impl Into<String>) -> FormatError {
    FormatError::Schema(msg.into())
}

/// Decimal text with 17 significant digits; round-trips f64 exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn complex_json(v: &Complex64) -> Value {
    json!([v.re, v.im])
}

fn f64_from(v: &Value, what: &str) -> Result<f64, FormatError> {
    v.as_f64().ok_or_else(|| schema(format!("{what} must be a number")))
}

fn complex_from(v: &Value, what: &str) -> Result<Complex64, FormatError> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| schema(format!("{what} must be a [re, im] pair")))?;
    Ok(Complex64::new(
        f64_from(&pair[0], what)?,
        f64_from(&pair[1], what)?,
    ))
}

pub fn state_to_json(state: &State) -> Value {
    match state {
        State::Real(s) => json!({ "kind": "real", "amplitudes": s.amplitudes() }),
        State::Complex(s) => json!({
            "kind": "complex",
            "amplitudes": s.amplitudes().iter().map(complex_json).collect::<Vec<_>>(),
        }),
    }
}

pub fn state_from_json(text: &str) -> Result<State, FormatError> {
    let v: Value = serde_json::from_str(text)?;
    let kind = v["kind"]
        .as_str()
        .ok_or_else(|| schema("state needs a \"kind\" of \"real\" or \"complex\""))?;
    let amps = v["amplitudes"]
        .as_array()
        .ok_or_else(|| schema("state needs an \"amplitudes\" array"))?;
    match kind {
        "real" => {
            let values = amps
                .iter()
                .map(|a| f64_from(a, "amplitude"))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(State::Real(RealAmplitudeState::new(values)?))
        }
        "complex" => {
            let values = amps
                .iter()
                .map(|a| complex_from(a, "amplitude"))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(State::Complex(ComplexAmplitudeState::new(values)?))
        }
        other => Err(schema(format!("unknown state kind {other:?}"))),
    }
}

pub fn gate_to_json(kind: &str, dim: usize, rows: impl Fn(usize, usize) -> Value) -> Value {
    let matrix: Vec<Vec<Value>> = (0..dim)
        .map(|i| (0..dim).map(|j| rows(i, j)).collect())
        .collect();
    json!({ "kind": kind, "matrix": matrix })
}

pub fn orthogonal_gate_to_json(g: &OrthogonalGate) -> Value {
    gate_to_json("orthogonal", g.dim(), |i, j| json!(g.entry(i, j)))
}

pub fn unitary_gate_to_json(g: &UnitaryGate) -> Value {
    gate_to_json("unitary", g.dim(), |i, j| complex_json(&g.entry(i, j)))
}

/// Either kind of gate, as read from a gate file.
pub enum Gate {
    Orthogonal(OrthogonalGate),
    Unitary(UnitaryGate),
}

pub fn gate_from_json(text: &str) -> Result<Gate, FormatError> {
    let v: Value = serde_json::from_str(text)?;
    let kind = v["kind"]
        .as_str()
        .ok_or_else(|| schema("gate needs a \"kind\" of \"orthogonal\" or \"unitary\""))?;
    let rows = v["matrix"]
        .as_array()
        .ok_or_else(|| schema("gate needs a \"matrix\" of nested row arrays"))?;
    let dim = rows.len();
    match kind {
        "orthogonal" => {
            let mut flat = Vec::with_capacity(dim * dim);
            for row in rows {
                let row = row
                    .as_array()
                    .filter(|r| r.len() == dim)
                    .ok_or_else(|| schema("gate matrix must be square"))?;
                for entry in row {
                    flat.push(f64_from(entry, "matrix entry")?);
                }
            }
            Ok(Gate::Orthogonal(OrthogonalGate::new(dim, flat)?))
        }
        "unitary" => {
            let mut flat = Vec::with_capacity(dim * dim);
            for row in rows {
                let row = row
                    .as_array()
                    .filter(|r| r.len() == dim)
                    .ok_or_else(|| schema("gate matrix must be square"))?;
                for entry in row {
                    flat.push(complex_from(entry, "matrix entry")?);
                }
            }
            Ok(Gate::Unitary(UnitaryGate::new(dim, flat)?))
        }
        other => Err(schema(format!("unknown gate kind {other:?}"))),
    }
}

/// Hermitian 2x2 matrix file: {"matrix": [[..],[..]]} with [re, im] entries.
pub fn hamiltonian_matrix_from_json(text: &str) -> Result<[[Complex64; 2]; 2], FormatError> {
    let v: Value = serde_json::from_str(text)?;
    let rows = v["matrix"]
        .as_array()
        .filter(|r| r.len() == 2)
        .ok_or_else(|| schema("Hamiltonian needs a 2x2 \"matrix\""))?;
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .filter(|r| r.len() == 2)
            .ok_or_else(|| schema("Hamiltonian rows must have two entries"))?;
        for (j, entry) in row.iter().enumerate() {
            m[i][j] = complex_from(entry, "Hamiltonian entry")?;
        }
    }
    Ok(m)
}

pub fn signal_to_csv(sig: &SampledSignal) -> String {
    let mut out = String::from("xi,value\n");
    for (k, v) in sig.samples().iter().enumerate() {
        out.push_str(&fmt_f64(sig.xi(k)));
        out.push(',');
        out.push_str(&fmt_f64(*v));
        out.push('\n');
    }
    out
}

pub fn signal_from_csv(text: &str) -> Result<SampledSignal, FormatError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "xi,value" => {}
        _ => {
            return Err(FormatError::Csv {
                line: 1,
                reason: "expected header \"xi,value\"".into(),
            })
        }
    }
    let mut samples = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let value = line.split(',').nth(1).ok_or(FormatError::Csv {
            line: idx + 1,
            reason: "expected two comma-separated columns".into(),
        })?;
        samples.push(value.trim().parse::<f64>().map_err(|e| FormatError::Csv {
            line: idx + 1,
            reason: e.to_string(),
        })?);
    }
    SampledSignal::new(samples).map_err(|e| FormatError::Csv {
        line: 0,
        reason: e.to_string(),
    })
}

pub fn trajectory_to_csv(points: &[TrajectoryPoint]) -> String {
    let mut out = String::from("t,re_c1,im_c1,re_c2,im_c2,norm\n");
    for p in points {
        let cols = [p.t, p.c1.re, p.c1.im, p.c2.re, p.c2.im, p.norm];
        let row: Vec<String> = cols.iter().map(|v| fmt_f64(*v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn circuit_to_json(circuit: &QftCircuit) -> Value {
    let gates: Vec<Value> = circuit
        .gates()
        .iter()
        .map(|g| match *g {
            GateOp::Hadamard { target } => {
                json!({ "gate": "H", "qubits": [target], "k": null })
            }
            GateOp::ControlledPhase { control, target, k } => {
                json!({ "gate": "CP", "qubits": [control, target], "k": k })
            }
            GateOp::Swap { a, b } => json!({ "gate": "SWAP", "qubits": [a, b], "k": null }),
        })
        .collect();
    Value::Array(gates)
}

pub fn complexity_to_csv(rows: &[ComplexityRow]) -> String {
    let mut out = String::from("n,N,dft_mults,fft_mults,fft_adds,qft_gates\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n, r.big_n, r.dft_mults, r.fft_mults, r.fft_adds, r.qft_gates
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{complexity_report, qft_build_circuit};
    use crate::signal::{basis_signal, EncodingConfig, QuadratureRule};
    use crate::state::new_obit;

    #[test]
    fn state_json_round_trip_real() {
        let s = State::Real(new_obit(0.6, 0.8).unwrap());
        let text = state_to_json(&s).to_string();
        assert_eq!(state_from_json(&text).unwrap(), s);
    }

    #[test]
    fn state_json_round_trip_complex() {
        let s = State::Complex(
            ComplexAmplitudeState::new(vec![
                Complex64::new(0.6, 0.0),
                Complex64::new(0.0, -0.8),
            ])
            .unwrap(),
        );
        let text = state_to_json(&s).to_string();
        assert_eq!(state_from_json(&text).unwrap(), s);
    }

    #[test]
    fn malformed_state_is_a_schema_error() {
        assert!(state_from_json("{\"kind\":\"real\"}").is_err());
        assert!(state_from_json("{\"kind\":\"octonion\",\"amplitudes\":[1.0]}").is_err());
        assert!(state_from_json("not json").is_err());
    }

    #[test]
    fn signal_csv_round_trip_is_bit_exact() {
        let cfg = EncodingConfig::new(64, QuadratureRule::Trapezoid).unwrap();
        let sig = basis_signal(0, &cfg);
        let text = signal_to_csv(&sig);
        let back = signal_from_csv(&text).unwrap();
        assert_eq!(back.samples(), sig.samples());
    }

    #[test]
    fn signal_csv_rejects_bad_header() {
        assert!(matches!(
            signal_from_csv("a,b\n1,2\n"),
            Err(FormatError::Csv { .. })
        ));
    }

    #[test]
    fn gate_json_round_trip() {
        let g = crate::state::givens_rotation(2, 0, 1, 0.3).unwrap();
        let text = orthogonal_gate_to_json(&g).to_string();
        match gate_from_json(&text).unwrap() {
            Gate::Orthogonal(back) => assert_eq!(back.matrix(), g.matrix()),
            Gate::Unitary(_) => panic!("kind flipped"),
        }
    }

    #[test]
    fn circuit_json_shape() {
        let c = qft_build_circuit(2).unwrap();
        let v = circuit_to_json(&c);
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), 4);
        assert_eq!(arr[0]["gate"], "H");
        assert_eq!(arr[1]["gate"], "CP");
        assert_eq!(arr[1]["k"], 2);
        assert_eq!(arr[3]["gate"], "SWAP");
    }

    #[test]
    fn complexity_csv_header_and_rows() {
        let rows = complexity_report(1, 3).unwrap();
        let text = complexity_to_csv(&rows);
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "n,N,dft_mults,fft_mults,fft_adds,qft_gates");
        assert_eq!(lines.next().unwrap(), "1,2,4,1,2,1");
    }
}
