//! Task execution and output files.

use std::f64::consts::{LN_2, PI};
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use qmaxent_core::convex_support::{boundary_trace, non_exposed_points};
use qmaxent_core::correlation::{c3_discontinuity_probe, ghz_approach_state};
use qmaxent_core::io::{boundary_rows, probe_rows, scan_rows, to_json, write_csv, Cell, MaxEntReport};
use qmaxent_core::random::{random_direction, random_state};
use qmaxent_core::{
    angle_pencil, correlation_decomposition, discontinuity_scan, eig, ground_state_scan, maxent_extension,
    verify_pythagorean, von_neumann_entropy, Error as CoreError, ExpectedValue, TensorSystem,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scenario::{Builtin, PathSpec, ScenarioSpec, Task};

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub task: Task,
    pub out_dir: PathBuf,
    pub angles: usize,
    /// Report entropies in bits instead of nats.
    pub bits: bool,
    pub seed: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Solver(#[from] CoreError),
    #[error("{0}")]
    Input(String),
    #[error("cannot write {path}: {message}")]
    Output { path: PathBuf, message: String },
}

type Table = (Vec<String>, Vec<Vec<Cell>>);

struct Writer<'a> {
    dir: &'a Path,
    written: Vec<PathBuf>,
}

impl Writer<'_> {
    fn out_err(path: &Path, e: impl std::fmt::Display) -> RunError {
        RunError::Output {
            path: path.to_path_buf(),
            message: e.to_string(),
        }
    }

    fn csv(&mut self, name: &str, (header, rows): Table) -> Result<(), RunError> {
        let path = self.dir.join(name);
        let file = File::create(&path).map_err(|e| Self::out_err(&path, e))?;
        write_csv(BufWriter::new(file), &header, &rows).map_err(|e| Self::out_err(&path, e))?;
        self.written.push(path);
        Ok(())
    }

    fn json(&mut self, name: &str, text: String) -> Result<(), RunError> {
        let path = self.dir.join(name);
        fs::write(&path, text + "\n").map_err(|e| Self::out_err(&path, e))?;
        self.written.push(path);
        Ok(())
    }
}

/// Runs one task and returns the files written.
pub fn run_scenario(spec: &ScenarioSpec, opts: &RunOptions) -> Result<Vec<PathBuf>, RunError> {
    fs::create_dir_all(&opts.out_dir).map_err(|e| Writer::out_err(&opts.out_dir, e))?;
    let mut w = Writer {
        dir: &opts.out_dir,
        written: Vec::new(),
    };
    let log_unit = if opts.bits { LN_2 } else { 1.0 };
    let cfg = &spec.tolerances;
    let fam = &spec.family;
    let grid: Vec<f64> = (0..opts.angles).map(|i| 2.0 * PI * i as f64 / opts.angles as f64).collect();
    match opts.task {
        Task::Eigencurves => {
            let d = fam.dim();
            let mut header = vec!["angle".to_string()];
            header.extend((1..=d).map(|i| format!("lambda{i}")));
            let rows = grid
                .iter()
                .map(|&a| {
                    let spec = eig(&angle_pencil(fam, a)?);
                    let mut row = vec![Cell::Real(a)];
                    row.extend(spec.eigenvalues.iter().map(|&x| Cell::Real(x)));
                    Ok(row)
                })
                .collect::<Result<Vec<_>, CoreError>>()?;
            w.csv("eigencurves.csv", (header, rows))?;
        }
        Task::Boundary => {
            let trace = boundary_trace(fam, opts.angles, cfg)?;
            w.csv("boundary.csv", boundary_rows(&trace))?;
            let points = non_exposed_points(fam, opts.angles, cfg)?;
            let rows = points
                .iter()
                .map(|p| p.coords().iter().map(|&x| Cell::Real(x)).collect())
                .collect();
            w.csv("non_exposed.csv", (vec!["x".into(), "y".into()], rows))?;
        }
        Task::GroundstateScan => {
            let scan = ground_state_scan(fam, &grid, cfg.tol_gap)?;
            let header = ["angle", "degeneracy", "alpha1", "alpha2", "entropy"].map(String::from).to_vec();
            let rows = scan
                .iter()
                .map(|p| {
                    let mut row = vec![Cell::Real(p.angle), Cell::Int(p.degeneracy as i64)];
                    row.extend(p.alpha.coords().iter().map(|&x| Cell::Real(x)));
                    row.push(Cell::Real(von_neumann_entropy(&p.state) / log_unit));
                    row
                })
                .collect();
            w.csv("groundstate.csv", (header, rows))?;
        }
        Task::Maxent => {
            let alpha = spec
                .alpha
                .clone()
                .ok_or_else(|| RunError::Input("the maxent task needs `alpha`".into()))?;
            let sol = maxent_extension(fam, &ExpectedValue::new(alpha)?, cfg)?;
            let json = to_json(&MaxEntReport::new(&sol, log_unit)).map_err(|e| RunError::Input(e.to_string()))?;
            w.json("maxent.json", json)?;
        }
        Task::Pythagorean => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let n = spec.samples.unwrap_or(50);
            let d = fam.dim();
            let header = ["sample", "D_rho_sigma", "D_rho_pi", "D_pi_sigma", "residual"].map(String::from).to_vec();
            let mut rows = Vec::with_capacity(n);
            for i in 0..n {
                let rank = rng.random_range(1..=d);
                let rho = random_state(&mut rng, d, rank);
                let scale = rng.random_range(0.1..3.0);
                let lambda: Vec<f64> = random_direction(&mut rng, fam.r()).into_iter().map(|x| x * scale).collect();
                let sigma = fam.state(&lambda)?;
                let c = verify_pythagorean(fam, &rho, &sigma, cfg)?;
                rows.push(vec![
                    Cell::Int(i as i64),
                    Cell::Real(c.rho_sigma / log_unit),
                    Cell::Real(c.rho_pi / log_unit),
                    Cell::Real(c.pi_sigma / log_unit),
                    Cell::Real(c.residual / log_unit),
                ]);
            }
            w.csv("pythagorean.csv", (header, rows))?;
        }
        Task::Correlation => {
            let system = system_of(spec)?;
            let rho = spec
                .state
                .as_ref()
                .ok_or_else(|| RunError::Input("the correlation task needs `state` or `density`".into()))?;
            let dec = correlation_decomposition(rho, &system, cfg)?;
            let mut rows: Vec<Vec<Cell>> = Vec::new();
            let mut names: Vec<String> = Vec::new();
            for (i, c) in dec.irreducible.iter().enumerate() {
                names.push(format!("C_{}", i + 2));
                rows.push(vec![Cell::Real(c / log_unit)]);
            }
            names.push("I".into());
            rows.push(vec![Cell::Real(dec.multi_information / log_unit)]);
            names.push("residual".into());
            rows.push(vec![Cell::Real(dec.residual / log_unit)]);
            let header = vec!["quantity".to_string(), "value".to_string()];
            let rows = names
                .into_iter()
                .zip(rows)
                .map(|(name, v)| {
                    let mut row = vec![Cell::Label(name)];
                    row.extend(v);
                    row
                })
                .collect();
            w.csv("correlation.csv", (header, rows))?;
        }
        Task::Discontinuity => {
            if spec.builtin == Some(Builtin::Ghz3) {
                let system = system_of(spec)?;
                let n = spec.samples.unwrap_or(41);
                let probe = c3_discontinuity_probe(&system, ghz_approach_state, n, cfg)?;
                w.csv("discontinuity.csv", probe_rows(&probe, log_unit))?;
            } else {
                let default_path = if fam.r() == 2 { Some(PathSpec::Boundary) } else { None };
                let path = spec
                    .path
                    .clone()
                    .or(default_path)
                    .ok_or_else(|| RunError::Input("the discontinuity task needs a `path`".into()))?;
                let scan = match path {
                    PathSpec::Boundary => {
                        let points = boundary_points(fam, opts.angles, cfg)?;
                        let n = points.len();
                        discontinuity_scan(fam, |t| points[((t * n as f64).round() as usize) % n].clone(), n, true, cfg)?
                    }
                    PathSpec::Segment { from, to } => {
                        let n = spec.samples.unwrap_or(opts.angles);
                        discontinuity_scan(
                            fam,
                            |t| from.iter().zip(&to).map(|(a, b)| (1.0 - t) * a + t * b).collect(),
                            n,
                            false,
                            cfg,
                        )?
                    }
                    PathSpec::Circle { center, radius } => {
                        if fam.r() != 2 {
                            return Err(CoreError::UnsupportedRank(fam.r()).into());
                        }
                        let n = spec.samples.unwrap_or(opts.angles);
                        discontinuity_scan(
                            fam,
                            |t| {
                                let a = 2.0 * PI * t;
                                vec![center[0] + radius * a.cos(), center[1] + radius * a.sin()]
                            },
                            n,
                            true,
                            cfg,
                        )?
                    }
                };
                w.csv("discontinuity.csv", scan_rows(&scan, log_unit))?;
            }
        }
    }
    Ok(w.written)
}

fn system_of(spec: &ScenarioSpec) -> Result<TensorSystem, RunError> {
    if let Some(s) = &spec.system {
        return Ok(s.clone());
    }
    let d = spec.family.root_dim();
    let n = d.trailing_zeros() as usize;
    if d.is_power_of_two() && n >= 2 {
        Ok(TensorSystem::qubits(n)?)
    } else {
        Err(RunError::Input("give `system` (unit dimensions) for a non-qubit register".into()))
    }
}

/// The points of a planar boundary trace in angular order: both endpoints
/// of every edge, each exposed point once.
fn boundary_points(
    fam: &qmaxent_core::GibbsFamily,
    n_angles: usize,
    cfg: &qmaxent_core::ToleranceConfig,
) -> Result<Vec<Vec<f64>>, CoreError> {
    let trace = boundary_trace(fam, n_angles, cfg)?;
    let mut points: Vec<Vec<f64>> = Vec::new();
    let close = |p: &[f64], q: &[f64; 2]| (p[0] - q[0]).hypot(p[1] - q[1]) < 1e-9;
    for s in &trace {
        for x in [s.x0, s.x1] {
            if points.last().is_none_or(|p| !close(p, &x)) {
                points.push(x.to_vec());
            }
        }
    }
    if points.len() > 1 && close(&points[0], &[points[points.len() - 1][0], points[points.len() - 1][1]]) {
        points.pop();
    }
    Ok(points)
}
