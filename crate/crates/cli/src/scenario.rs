//! Scenario documents (TOML).
//!
//! ```toml
//! task = "maxent"
//! hamiltonians = ["Z ++ [[1]]", "Z ++ [[-1]]"]
//! alpha = [0.0, -1.0]
//!
//! [tolerances]
//! tol_solve = 1e-10
//! ```

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use qmaxent_core::correlation::{ghz_state, k_local_basis};
use qmaxent_core::families::{example1, example2, example3};
use qmaxent_core::{DensityMatrix, GibbsFamily, HermitianOperator, TensorSystem, ToleranceConfig};
use serde::Deserialize;
use toml::Spanned;

use crate::expr::parse_operator;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Eigencurves,
    Boundary,
    GroundstateScan,
    Maxent,
    Pythagorean,
    Correlation,
    Discontinuity,
}

impl Task {
    pub const ALL: [Task; 7] = [
        Task::Eigencurves,
        Task::Boundary,
        Task::GroundstateScan,
        Task::Maxent,
        Task::Pythagorean,
        Task::Correlation,
        Task::Discontinuity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::Eigencurves => "eigencurves",
            Task::Boundary => "boundary",
            Task::GroundstateScan => "groundstate-scan",
            Task::Maxent => "maxent",
            Task::Pythagorean => "pythagorean",
            Task::Correlation => "correlation",
            Task::Discontinuity => "discontinuity",
        }
    }
}

impl FromStr for Task {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Task::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown task `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Example1,
    Example2,
    Example3,
    Ghz3,
}

impl Builtin {
    pub fn family(self) -> GibbsFamily {
        match self {
            Builtin::Example1 => example1(),
            Builtin::Example2 => example2(),
            Builtin::Example3 => example3(),
            Builtin::Ghz3 => k_local_basis(&TensorSystem::qubits(3).expect("three qubits"), 2)
                .and_then(|s| s.family())
                .expect("2-local qubit family"),
        }
    }
}

impl FromStr for Builtin {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "example1" => Ok(Builtin::Example1),
            "example2" => Ok(Builtin::Example2),
            "example3" => Ok(Builtin::Example3),
            "ghz3" => Ok(Builtin::Ghz3),
            _ => Err(format!("unknown builtin `{s}`")),
        }
    }
}

/// Curve along which the discontinuity task evaluates the MaxEnt map.
#[derive(Debug, Clone, PartialEq)]
pub enum PathSpec {
    /// The exposed points of a planar convex support, in angular order.
    Boundary,
    Segment { from: Vec<f64>, to: Vec<f64> },
    Circle { center: Vec<f64>, radius: f64 },
}

#[derive(Debug, Clone)]
pub struct ScenarioSpec {
    pub builtin: Option<Builtin>,
    pub family: GibbsFamily,
    pub task: Option<Task>,
    pub tolerances: ToleranceConfig,
    pub alpha: Option<Vec<f64>>,
    pub samples: Option<usize>,
    pub path: Option<PathSpec>,
    pub system: Option<TensorSystem>,
    pub state: Option<DensityMatrix>,
}

impl ScenarioSpec {
    pub fn from_builtin(b: Builtin) -> Self {
        let (system, state) = match b {
            Builtin::Ghz3 => (Some(TensorSystem::qubits(3).expect("three qubits")), Some(ghz_state(3))),
            _ => (None, None),
        };
        Self {
            builtin: Some(b),
            family: b.family(),
            task: None,
            tolerances: ToleranceConfig::default(),
            alpha: None,
            samples: None,
            path: None,
            system,
            state,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseError {
    Syntax { line: usize, column: usize, message: String },
    NonHermitian { index: usize, max_dev: f64 },
    Invalid(String),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { line, column, message } => write!(f, "{line}:{column}: {message}"),
            ParseError::NonHermitian { index, max_dev } => {
                write!(f, "hamiltonian {index} is not Hermitian (max deviation {max_dev:.3e})")
            }
            ParseError::Invalid(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    task: Option<Spanned<String>>,
    builtin: Option<Spanned<String>>,
    dimension: Option<usize>,
    hamiltonians: Option<Vec<Spanned<String>>>,
    tolerances: Option<RawTolerances>,
    alpha: Option<Vec<f64>>,
    samples: Option<usize>,
    path: Option<RawPath>,
    system: Option<Vec<usize>>,
    state: Option<Spanned<String>>,
    density: Option<Spanned<String>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTolerances {
    tol_herm: Option<f64>,
    tol_state: Option<f64>,
    tol_proj: Option<f64>,
    tol_gap: Option<f64>,
    tol_ker: Option<f64>,
    tol_face: Option<f64>,
    tol_solve: Option<f64>,
    lambda_cap: Option<f64>,
    max_newton_iter: Option<usize>,
    jump_threshold: Option<f64>,
    jump_ratio: Option<f64>,
    probe_directions: Option<usize>,
}

impl RawTolerances {
    fn apply(self, c: &mut ToleranceConfig) {
        macro_rules! set {
            ($($f:ident),*) => {$(if let Some(v) = self.$f { c.$f = v; })*};
        }
        set!(
            tol_herm,
            tol_state,
            tol_proj,
            tol_gap,
            tol_ker,
            tol_face,
            tol_solve,
            lambda_cap,
            max_newton_iter,
            jump_threshold,
            jump_ratio,
            probe_directions
        );
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPath {
    kind: String,
    from: Option<Vec<f64>>,
    to: Option<Vec<f64>>,
    center: Option<Vec<f64>>,
    radius: Option<f64>,
}

/// 1-based line and column of a byte offset.
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(offset, |nl| offset - nl - 1) + 1;
    (line, column)
}

fn syntax_at(text: &str, offset: usize, message: impl Into<String>) -> ParseError {
    let (line, column) = line_col(text, offset);
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Offset of the first character inside a spanned string literal.
fn content_start<T>(s: &Spanned<T>) -> usize {
    s.span().start + 1
}

pub fn parse_scenario(text: &str) -> Result<ScenarioSpec, ParseError> {
    let raw: RawScenario = toml::from_str(text).map_err(|e| {
        let offset = e.span().map_or(0, |s| s.start);
        syntax_at(text, offset, e.message().to_string())
    })?;

    let task = raw
        .task
        .as_ref()
        .map(|t| t.get_ref().parse::<Task>().map_err(|m| syntax_at(text, content_start(t), m)))
        .transpose()?;

    let mut spec = match (&raw.builtin, &raw.hamiltonians) {
        (Some(b), None) => {
            let builtin = b.get_ref().parse::<Builtin>().map_err(|m| syntax_at(text, content_start(b), m))?;
            ScenarioSpec::from_builtin(builtin)
        }
        (None, Some(hs)) => {
            let tol_herm = raw
                .tolerances
                .as_ref()
                .and_then(|t| t.tol_herm)
                .unwrap_or(ToleranceConfig::default().tol_herm);
            let family = parse_family(text, hs, raw.dimension, tol_herm)?;
            ScenarioSpec {
                builtin: None,
                family,
                task: None,
                tolerances: ToleranceConfig::default(),
                alpha: None,
                samples: None,
                path: None,
                system: None,
                state: None,
            }
        }
        _ => {
            return Err(ParseError::Invalid(
                "exactly one of `builtin` and `hamiltonians` must be given".into(),
            ))
        }
    };
    if let (Some(d), Some(_)) = (raw.dimension, &raw.builtin) {
        if d != spec.family.dim() {
            return Err(ParseError::Invalid(format!(
                "dimension {d} does not match builtin of dimension {}",
                spec.family.dim()
            )));
        }
    }

    spec.task = task;
    if let Some(t) = raw.tolerances {
        t.apply(&mut spec.tolerances);
    }
    if let Some(alpha) = raw.alpha {
        if alpha.len() != spec.family.r() {
            return Err(ParseError::Invalid(format!(
                "alpha has {} entries, the family has {} observables",
                alpha.len(),
                spec.family.r()
            )));
        }
        spec.alpha = Some(alpha);
    }
    spec.samples = raw.samples.or(spec.samples);
    if let Some(p) = raw.path {
        spec.path = Some(parse_path(p, spec.family.r())?);
    }
    if let Some(dims) = raw.system {
        let sys = TensorSystem::new(dims).map_err(|e| ParseError::Invalid(e.to_string()))?;
        if sys.total_dim() != spec.family.dim() {
            return Err(ParseError::Invalid(format!(
                "system dimension {} does not match operator dimension {}",
                sys.total_dim(),
                spec.family.dim()
            )));
        }
        spec.system = Some(sys);
    }
    match (raw.state, raw.density) {
        (Some(_), Some(_)) => return Err(ParseError::Invalid("give at most one of `state` and `density`".into())),
        (Some(s), None) => spec.state = Some(parse_state(text, &s, spec.family.root_dim())?),
        (None, Some(s)) => spec.state = Some(parse_density(text, &s, spec.family.root_dim(), &spec.tolerances)?),
        (None, None) => {}
    }
    Ok(spec)
}

fn parse_family(
    text: &str,
    hs: &[Spanned<String>],
    dimension: Option<usize>,
    tol_herm: f64,
) -> Result<GibbsFamily, ParseError> {
    if hs.is_empty() {
        return Err(ParseError::Invalid("`hamiltonians` is empty".into()));
    }
    let mut ops = Vec::with_capacity(hs.len());
    for (index, h) in hs.iter().enumerate() {
        let m = parse_operator(h.get_ref()).map_err(|e| syntax_at(text, content_start(h) + e.offset, e.message))?;
        if let Some(d) = dimension {
            if m.nrows() != d {
                return Err(syntax_at(
                    text,
                    content_start(h),
                    format!("hamiltonian {index} has dimension {}, expected {d}", m.nrows()),
                ));
            }
        }
        let dev = (&m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let op = HermitianOperator::new(m, tol_herm).map_err(|_| ParseError::NonHermitian { index, max_dev: dev })?;
        ops.push(op);
    }
    GibbsFamily::new(ops, "scenario").map_err(|e| ParseError::Invalid(e.to_string()))
}

fn parse_path(p: RawPath, r: usize) -> Result<PathSpec, ParseError> {
    let need = |v: Option<Vec<f64>>, name: &str| -> Result<Vec<f64>, ParseError> {
        let v = v.ok_or_else(|| ParseError::Invalid(format!("path needs `{name}`")))?;
        if v.len() != r {
            return Err(ParseError::Invalid(format!("path `{name}` must have {r} entries")));
        }
        Ok(v)
    };
    match p.kind.as_str() {
        "boundary" => Ok(PathSpec::Boundary),
        "segment" => Ok(PathSpec::Segment {
            from: need(p.from, "from")?,
            to: need(p.to, "to")?,
        }),
        "circle" => Ok(PathSpec::Circle {
            center: need(p.center, "center")?,
            radius: p.radius.ok_or_else(|| ParseError::Invalid("path needs `radius`".into()))?,
        }),
        other => Err(ParseError::Invalid(format!("unknown path kind `{other}`"))),
    }
}

/// `"ghz"` or a state-vector literal `[a0, a1, ...]` whose entries are
/// reals or `[re, im]` pairs.
fn parse_state(text: &str, s: &Spanned<String>, dim: usize) -> Result<DensityMatrix, ParseError> {
    let body = s.get_ref().trim();
    let at = content_start(s);
    if body == "ghz" {
        let n = dim.trailing_zeros() as usize;
        if 1usize << n != dim || n < 2 {
            return Err(syntax_at(text, at, "`ghz` needs a register of at least two qubits"));
        }
        return Ok(ghz_state(n));
    }
    let value: serde_json::Value =
        serde_json::from_str(body).map_err(|e| syntax_at(text, at, format!("bad state literal: {e}")))?;
    let items = value.as_array().ok_or_else(|| syntax_at(text, at, "state literal must be an array"))?;
    if items.len() != dim {
        return Err(syntax_at(text, at, format!("state vector has {} entries, expected {dim}", items.len())));
    }
    let amps = items
        .iter()
        .map(|v| match (v.as_f64(), v.as_array().map(Vec::as_slice)) {
            (Some(x), _) => Some(Complex64::new(x, 0.0)),
            (None, Some([re, im])) => Some(Complex64::new(re.as_f64()?, im.as_f64()?)),
            _ => None,
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| syntax_at(text, at, "state vector entries must be reals or [re, im] pairs"))?;
    let v = nalgebra::DVector::from_vec(amps);
    let n = v.norm();
    if n == 0.0 {
        return Err(syntax_at(text, at, "state vector is zero"));
    }
    DensityMatrix::pure(&(v / Complex64::new(n, 0.0))).map_err(|e| syntax_at(text, at, e.to_string()))
}

/// A density-matrix literal, with the same syntax as operator expressions.
fn parse_density(
    text: &str,
    s: &Spanned<String>,
    dim: usize,
    cfg: &ToleranceConfig,
) -> Result<DensityMatrix, ParseError> {
    let at = content_start(s);
    let m = parse_operator(s.get_ref()).map_err(|e| syntax_at(text, at + e.offset, e.message))?;
    if m.nrows() != dim {
        return Err(syntax_at(text, at, format!("density matrix has dimension {}, expected {dim}", m.nrows())));
    }
    DensityMatrix::from_matrix(m, cfg).map_err(|e| syntax_at(text, at, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_example1_has_the_triangle_hamiltonians() {
        let spec = parse_scenario("builtin = \"example1\"\ntask = \"boundary\"\n").unwrap();
        assert_eq!(spec.task, Some(Task::Boundary));
        let h = spec.family.hamiltonians();
        let d1: Vec<f64> = (0..3).map(|i| h[0].matrix()[(i, i)].re).collect();
        let d2: Vec<f64> = (0..3).map(|i| h[1].matrix()[(i, i)].re).collect();
        assert_eq!(d1, vec![1.0, -1.0, 1.0]);
        assert_eq!(d2, vec![1.0, -1.0, -1.0]);
    }

    #[test]
    fn hamiltonian_list_and_tolerances() {
        let text = "hamiltonians = [\"Z ++ [[1]]\", \"Z ++ [[-1]]\"]\nalpha = [0.0, -1.0]\n[tolerances]\ntol_solve = 1e-11\n";
        let spec = parse_scenario(text).unwrap();
        assert_eq!(spec.family.dim(), 3);
        assert_eq!(spec.tolerances.tol_solve, 1e-11);
        assert_eq!(spec.alpha, Some(vec![0.0, -1.0]));
    }

    #[test]
    fn expression_errors_carry_file_position() {
        let text = "task = \"maxent\"\nhamiltonians = [\"1.0*XQ\"]\n";
        match parse_scenario(text).unwrap_err() {
            ParseError::Syntax { line, column, .. } => {
                assert_eq!(line, 2);
                // `Q` sits at column 23 of `hamiltonians = ["1.0*XQ"]`
                assert_eq!(column, 23);
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn non_hermitian_matrix_is_reported_by_index() {
        let text = "hamiltonians = [\"Z\", \"[[0, 1], [0, 0]]\"]\n";
        assert!(matches!(parse_scenario(text), Err(ParseError::NonHermitian { index: 1, .. })));
    }

    #[test]
    fn exactly_one_source() {
        assert!(matches!(parse_scenario("task = \"boundary\"\n"), Err(ParseError::Invalid(_))));
        assert!(parse_scenario("builtin = \"example2\"\nhamiltonians = [\"Z\"]\n").is_err());
        assert!(parse_scenario("builtin = \"example9\"\n").is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(parse_scenario("builtin = \"example2\"\nfoo = 1\n").is_err());
    }

    #[test]
    fn state_literals() {
        let spec = parse_scenario("hamiltonians = [\"ZI\", \"IZ\"]\nstate = \"[1, 0, 0, 1]\"\n").unwrap();
        let rho = spec.state.unwrap();
        assert!((rho.matrix()[(0, 3)].re - 0.5).abs() < 1e-15);
        let spec = parse_scenario("hamiltonians = [\"ZI\", \"IZ\"]\nstate = \"ghz\"\n").unwrap();
        assert!((spec.state.unwrap().matrix()[(3, 0)].re - 0.5).abs() < 1e-15);
        let spec = parse_scenario("hamiltonians = [\"Z\"]\ndensity = \"[[0.25, [0, 0.1]], [[0, -0.1], 0.75]]\"\n").unwrap();
        assert!((spec.state.unwrap().matrix()[(0, 1)].im - 0.1).abs() < 1e-15);
        assert!(parse_scenario("hamiltonians = [\"Z\"]\ndensity = \"[[2, 0], [0, -1]]\"\n").is_err());
    }
}
