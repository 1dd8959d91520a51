//! CSV and JSON output.

use std::io::Write;

use serde::Serialize;

use crate::convex_support::BoundarySample;
use crate::correlation::ProbeRow;
use crate::maxent::{DualParameter, MaxEntSolution, ScanPoint};

/// A CSV cell. Reals are written with 17 significant digits.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Flag(bool),
    Label(String),
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Real(x) if x.is_finite() => format!("{x:.16e}"),
            Cell::Real(x) if x.is_nan() => "nan".into(),
            Cell::Real(x) => if *x > 0.0 { "inf" } else { "-inf" }.into(),
            Cell::Int(i) => i.to_string(),
            Cell::Flag(b) => u8::from(*b).to_string(),
            Cell::Label(s) => s.clone(),
        }
    }
}

pub fn write_csv<W: Write>(out: W, header: &[String], rows: &[Vec<Cell>]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(Cell::render))?;
    }
    w.flush()?;
    Ok(())
}

pub fn boundary_rows(trace: &[BoundarySample]) -> (Vec<String>, Vec<Vec<Cell>>) {
    let header = ["angle", "h", "face_dim", "x0", "y0", "x1", "y1"].map(String::from).to_vec();
    let rows = trace
        .iter()
        .map(|s| {
            vec![
                Cell::Real(s.angle),
                Cell::Real(s.support.value),
                Cell::Int(s.support.face_dim as i64),
                Cell::Real(s.x0[0]),
                Cell::Real(s.x0[1]),
                Cell::Real(s.x1[0]),
                Cell::Real(s.x1[1]),
            ]
        })
        .collect();
    (header, rows)
}

/// Entropies are divided by `log_unit` (1 for nats, `ln 2` for bits).
pub fn scan_rows(scan: &[ScanPoint], log_unit: f64) -> (Vec<String>, Vec<Vec<Cell>>) {
    let r = scan.first().map_or(0, |p| p.alpha.len());
    let mut header = vec!["t".to_string()];
    header.extend((1..=r).map(|i| format!("alpha{i}")));
    header.extend(["entropy".to_string(), "jump_flag".to_string()]);
    let rows = scan
        .iter()
        .map(|p| {
            let mut row = vec![Cell::Real(p.t)];
            row.extend(p.alpha.iter().map(|&a| Cell::Real(a)));
            row.push(Cell::Real(p.entropy / log_unit));
            row.push(Cell::Flag(p.jump));
            row
        })
        .collect();
    (header, rows)
}

pub fn probe_rows(probe: &[ProbeRow], log_unit: f64) -> (Vec<String>, Vec<Vec<Cell>>) {
    let levels = probe.first().map_or(0, |p| p.irreducible.len());
    let mut header = vec!["t".to_string()];
    header.extend((0..levels).map(|i| format!("C_{}", i + 2)));
    header.extend(["I", "residual", "jump_flag"].map(String::from));
    let rows = probe
        .iter()
        .map(|p| {
            let mut row = vec![Cell::Real(p.t)];
            row.extend(p.irreducible.iter().map(|&c| Cell::Real(c / log_unit)));
            row.push(Cell::Real(p.multi_information / log_unit));
            row.push(Cell::Real(p.residual / log_unit));
            row.push(Cell::Flag(p.jump));
            row
        })
        .collect();
    (header, rows)
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum DualReport {
    Parameter(Vec<f64>),
    Marker(&'static str),
}

/// JSON view of a MaxEnt solution; the state is row-major `[re, im]` pairs.
#[derive(Debug, Clone, Serialize)]
pub struct MaxEntReport {
    pub alpha: Vec<f64>,
    pub state: Vec<Vec<[f64; 2]>>,
    pub dual_parameter: DualReport,
    pub face_chain_ranks: Vec<usize>,
    pub iterations: usize,
    pub residual: f64,
    pub entropy: f64,
}

impl MaxEntReport {
    pub fn new(sol: &MaxEntSolution, log_unit: f64) -> Self {
        let m = sol.state.matrix();
        let state = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        Self {
            alpha: sol.alpha.coords().to_vec(),
            state,
            dual_parameter: match &sol.dual {
                DualParameter::Interior(l) => DualReport::Parameter(l.clone()),
                DualParameter::Boundary => DualReport::Marker("boundary"),
            },
            face_chain_ranks: sol.face_chain.ranks(),
            iterations: sol.iterations,
            residual: sol.residual,
            entropy: sol.entropy() / log_unit,
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    serde_json::to_string_pretty(value)
}
