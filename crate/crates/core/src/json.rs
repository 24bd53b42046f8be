//! Machine-readable interfaces: lattice / interval-set / window JSON
//! schemas, sampled-signal CSV, and report serialization.
//!
//! Exact quantities travel as decimal-free rational strings `"p/q"`; basis
//! entries may also be `"p/q + r/s*sym"` against the declared symbol. Window
//! pieces accept `"modulus"` (a rational) or `"modulus_sq"` (the squared
//! modulus, for exact constants like 1/√2 whose square is rational).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::gram::OnbCertificate;
use crate::lattice::{ExactMatrix, Lattice2D, LatticeError};
use crate::scalar::{
    format_rational, parse_rational, FieldScalar, IrrationalSymbol, Rational, ScalarError,
};
use crate::signal::{SampledSignal, SignalError};
use crate::tiling::{FoldProfile, IntervalSet, TilingError};
use crate::window::{PiecewiseWindow, QuadPhase, Window, WindowError, WindowPiece};
use crate::zak::ZakGrid;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Tiling(#[from] TilingError),
    #[error(transparent)]
    Window(#[from] WindowError),
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error("malformed CSV at line {line}: {reason}")]
    Csv { line: usize, reason: String },
}

#[derive(Debug, Serialize, Deserialize)]
struct SymbolJson {
    name: String,
    approx: f64,
    irrational: bool,
}

#[derive(Debug, Deserialize)]
struct LatticeJson {
    basis: [[String; 2]; 2],
    #[serde(default)]
    symbol: Option<SymbolJson>,
}

/// Parses the exact-lattice schema
/// `{"basis": [["p/q","p/q"],["p/q","p/q"]], "symbol": {...}}`.
pub fn lattice_from_json(text: &str) -> Result<Lattice2D, JsonError> {
    let raw: LatticeJson = serde_json::from_str(text)?;
    let symbol = raw
        .symbol
        .map(|s| IrrationalSymbol::new(s.name, s.approx, s.irrational));
    let parse = |s: &str| FieldScalar::parse(s, symbol.as_ref());
    let basis = ExactMatrix::new(
        parse(&raw.basis[0][0])?,
        parse(&raw.basis[0][1])?,
        parse(&raw.basis[1][0])?,
        parse(&raw.basis[1][1])?,
    );
    Ok(Lattice2D::exact(basis)?)
}

pub fn lattice_to_json(lattice: &Lattice2D) -> Value {
    match lattice {
        Lattice2D::Exact(m) => {
            let entries = [[&m.a, &m.b], [&m.c, &m.d]];
            let symbol = [&m.a, &m.b, &m.c, &m.d]
                .iter()
                .find_map(|e| e.symbol())
                .map(|s| {
                    json!({"name": s.name, "approx": s.approx, "irrational": s.irrational})
                });
            let mut out = json!({
                "basis": entries
                    .iter()
                    .map(|row| row.iter().map(|e| e.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            });
            if let Some(sym) = symbol {
                out["symbol"] = sym;
            }
            out
        }
        Lattice2D::Float(m) => json!({
            "basis_float": [[m.a, m.b], [m.c, m.d]],
        }),
    }
}

#[derive(Debug, Deserialize)]
struct IntervalSetJson {
    intervals: Vec<[String; 2]>,
}

/// `{"intervals": [["0","1/2"],["3/2","2"]]}` with half-open semantics.
pub fn interval_set_from_json(text: &str) -> Result<IntervalSet<Rational>, JsonError> {
    let raw: IntervalSetJson = serde_json::from_str(text)?;
    let mut intervals = Vec::with_capacity(raw.intervals.len());
    for [lo, hi] in &raw.intervals {
        intervals.push((parse_rational(lo)?, parse_rational(hi)?));
    }
    Ok(IntervalSet::new(intervals)?)
}

pub fn interval_set_to_json(set: &IntervalSet<Rational>) -> Value {
    json!({
        "intervals": set
            .intervals()
            .iter()
            .map(|(lo, hi)| vec![format_rational(lo), format_rational(hi)])
            .collect::<Vec<_>>(),
    })
}

#[derive(Debug, Deserialize)]
struct PhaseJson {
    #[serde(default)]
    quad: f64,
    #[serde(default)]
    lin: f64,
    #[serde(default, rename = "const")]
    constant: f64,
}

#[derive(Debug, Deserialize)]
struct PieceJson {
    interval: [String; 2],
    #[serde(default)]
    modulus: Option<String>,
    #[serde(default)]
    modulus_sq: Option<String>,
    #[serde(default)]
    phase: Option<PhaseJson>,
}

#[derive(Debug, Deserialize)]
struct SampledJson {
    t_min: f64,
    step: f64,
    values: Vec<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
struct WindowJson {
    #[serde(default)]
    piecewise: Option<Vec<PieceJson>>,
    #[serde(default)]
    sampled: Option<SampledJson>,
}

/// Window schema: `{"piecewise": [{"interval": ["0","1"], "modulus": "1",
/// "phase": {"quad":0,"lin":0,"const":0}}]}` or
/// `{"sampled": {"t_min": -8, "step": 0.015625, "values": [[re,im],...]}}`.
pub fn window_from_json(text: &str) -> Result<Window, JsonError> {
    let raw: WindowJson = serde_json::from_str(text)?;
    match (raw.piecewise, raw.sampled) {
        (Some(pieces), None) => {
            let mut out = Vec::with_capacity(pieces.len());
            for p in pieces {
                let lo = parse_rational(&p.interval[0])?;
                let hi = parse_rational(&p.interval[1])?;
                let modulus_sq = match (&p.modulus, &p.modulus_sq) {
                    (Some(m), None) => {
                        let m = parse_rational(m)?;
                        &m * &m
                    }
                    (None, Some(m2)) => parse_rational(m2)?,
                    (None, None) => Rational::from_integer(1.into()),
                    (Some(_), Some(_)) => {
                        return Err(JsonError::Schema(
                            "piece carries both modulus and modulus_sq".into(),
                        ))
                    }
                };
                let phase = p
                    .phase
                    .map(|ph| QuadPhase {
                        quad: ph.quad,
                        lin: ph.lin,
                        constant: ph.constant,
                    })
                    .unwrap_or(QuadPhase::ZERO);
                out.push(WindowPiece {
                    lo,
                    hi,
                    modulus_sq,
                    phase,
                });
            }
            Ok(Window::Piecewise(PiecewiseWindow::new(out)?))
        }
        (None, Some(s)) => {
            let values = s
                .values
                .iter()
                .map(|[re, im]| Complex64::new(*re, *im))
                .collect();
            Ok(Window::Sampled(SampledSignal::new(
                s.t_min, s.step, values,
            )?))
        }
        _ => Err(JsonError::Schema(
            "window must have exactly one of \"piecewise\" or \"sampled\"".into(),
        )),
    }
}

pub fn window_to_json(window: &Window) -> Value {
    match window {
        Window::Piecewise(w) => json!({
            "piecewise": w
                .pieces()
                .iter()
                .map(|p| {
                    json!({
                        "interval": [format_rational(&p.lo), format_rational(&p.hi)],
                        "modulus_sq": format_rational(&p.modulus_sq),
                        "phase": {"quad": p.phase.quad, "lin": p.phase.lin, "const": p.phase.constant},
                    })
                })
                .collect::<Vec<_>>(),
        }),
        Window::Sampled(s) => signal_to_json(s),
    }
}

pub fn signal_to_json(s: &SampledSignal<f64>) -> Value {
    json!({
        "sampled": {
            "t_min": s.t_min,
            "step": s.step,
            "values": s.values.iter().map(|v| vec![v.re, v.im]).collect::<Vec<_>>(),
        }
    })
}

/// Two- or three-column CSV `t,re[,im]`; the time column must advance with a
/// uniform step. A non-numeric first line is treated as a header.
pub fn signal_from_csv(text: &str) -> Result<SampledSignal<f64>, JsonError> {
    let mut rows: Vec<(f64, Complex64)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(JsonError::Csv {
                line: i + 1,
                reason: format!("expected 2 or 3 columns, found {}", fields.len()),
            });
        }
        let parsed: Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
        match parsed {
            Err(_) if i == 0 => continue, // header
            Err(e) => {
                return Err(JsonError::Csv {
                    line: i + 1,
                    reason: e.to_string(),
                })
            }
            Ok(nums) => {
                let im = if nums.len() == 3 { nums[2] } else { 0.0 };
                rows.push((nums[0], Complex64::new(nums[1], im)));
            }
        }
    }
    if rows.len() < 2 {
        return Err(JsonError::Csv {
            line: 0,
            reason: "need at least two data rows".into(),
        });
    }
    let step = rows[1].0 - rows[0].0;
    if step.is_nan() || step <= 0.0 {
        return Err(JsonError::Csv {
            line: 2,
            reason: "time column must be strictly increasing".into(),
        });
    }
    for (i, w) in rows.windows(2).enumerate() {
        let d = w[1].0 - w[0].0;
        if (d - step).abs() > 1e-9 * step.abs().max(1.0) {
            return Err(JsonError::Csv {
                line: i + 2,
                reason: "time column is not uniformly spaced".into(),
            });
        }
    }
    Ok(SampledSignal::new(
        rows[0].0,
        step,
        rows.into_iter().map(|(_, v)| v).collect(),
    )?)
}

pub fn signal_to_csv(s: &SampledSignal<f64>) -> String {
    let mut out = String::with_capacity(s.len() * 32);
    out.push_str("t,re,im\n");
    for (i, v) in s.values.iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", s.t(i), v.re, v.im));
    }
    out
}

/// Point lists as JSON arrays of [x, y] floats.
pub fn points_from_json(text: &str) -> Result<Vec<[f64; 2]>, JsonError> {
    let raw: Vec<[f64; 2]> = serde_json::from_str(text)?;
    Ok(raw)
}

pub fn gram_report_to_json(cert: &OnbCertificate) -> Value {
    let r = &cert.report;
    json!({
        "size": r.size,
        "max_offdiag": r.max_offdiag,
        "max_diag_dev": r.max_diag_dev,
        "worst_pair": [[r.worst_pair.0.t, r.worst_pair.0.s], [r.worst_pair.1.t, r.worst_pair.1.s]],
        "method": r.method.as_str(),
        "window_norm": r.window_norm,
        "tol": cert.tol,
        "verdict": if cert.passes { "orthonormal-on-truncation" } else { "fail" },
        "completeness": cert.completeness_note,
    })
}

pub fn fold_profile_to_json(profile: &FoldProfile<Rational>) -> Value {
    json!({
        "modulus": format_rational(&profile.modulus),
        "pieces": profile
            .pieces
            .iter()
            .map(|p| {
                json!({
                    "lo": format_rational(&p.lo),
                    "hi": format_rational(&p.hi),
                    "multiplicity": p.multiplicity,
                })
            })
            .collect::<Vec<_>>(),
    })
}

/// Row-major complex pairs per sheet; binary-free by construction.
pub fn zak_grid_to_json(zak: &ZakGrid) -> Value {
    let sheet = |s: &Vec<Vec<Complex64>>| -> Value {
        json!(s
            .iter()
            .map(|row| row.iter().map(|v| vec![v.re, v.im]).collect::<Vec<_>>())
            .collect::<Vec<_>>())
    };
    json!({
        "alpha": zak.alpha,
        "k": zak.k_trunc,
        "summation": match zak.summation {
            crate::zak::Summation::Raw => "raw",
            crate::zak::Summation::Cesaro => "cesaro",
        },
        "omega": zak.omega,
        "theta": zak.theta,
        "sheet0": sheet(&zak.sheets[0]),
        "sheet1": sheet(&zak.sheets[1]),
    })
}
