//! Error-versus-`n` sweeps and their CSV form.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chebgrid::{diff_dct, ChebGrid};
use crate::ddprec::{disc_error, disc_error_asym, DoubleDouble, TestFunction};
use crate::errmodel::{asym_ur, asym_ur_factor, bound_ur, bound_ur_prime};
use crate::error::{Error, Result};
use crate::kte_map::{mapped_diff, solve_alpha, DiffBackend, MapParams, MappedGrid, UNIT_ROUNDOFF};
use crate::symfun::{dot_forward, fd_apply, Grid, Stencil};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FunctionKind {
    /// `sin(2 pi x)`.
    Sin2Pi,
    /// `sin(n pi x / eta)`, `eta` points per wavelength.
    SinScaled { eta: f64 },
}

impl FunctionKind {
    pub fn test_function(self, n: usize) -> TestFunction {
        match self {
            FunctionKind::Sin2Pi => TestFunction::sin_fixed(),
            FunctionKind::SinScaled { eta } => TestFunction::sin_scaled(n, eta),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FunctionKind::Sin2Pi => "sin2pi",
            FunctionKind::SinScaled { .. } => "sinscaled",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub function: FunctionKind,
    pub m: usize,
    pub nmin: usize,
    pub nmax: usize,
    pub nstride: usize,
    pub method: DiffBackend,
    pub mapped: bool,
    pub betas: Vec<f64>,
    pub u: f64,
    pub seed: u64,
    /// Measure only at `x_0 = 1` instead of the maximum over all nodes.
    pub edge_only: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            function: FunctionKind::Sin2Pi,
            m: 1,
            nmin: 8,
            nmax: 64,
            nstride: 1,
            method: DiffBackend::Weights,
            mapped: false,
            betas: vec![0.0],
            u: UNIT_ROUNDOFF,
            seed: 0,
            edge_only: true,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=4).contains(&self.m) {
            return Err(Error::Config(format!("m = {} not in 1..=4", self.m)));
        }
        if self.nstride == 0 {
            return Err(Error::Config("n stride must be positive".into()));
        }
        if self.nmin < 2 || self.nmin < self.m {
            return Err(Error::Config(format!(
                "nmin = {} must be at least 2 and at least m = {}",
                self.nmin, self.m
            )));
        }
        if !(self.u > 0.0 && self.u < 1.0) {
            return Err(Error::Config(format!("u = {} not in (0, 1)", self.u)));
        }
        if self.mapped && self.betas.is_empty() {
            return Err(Error::Config("mapped runs need at least one beta".into()));
        }
        if self.betas.iter().any(|b| !b.is_finite()) {
            return Err(Error::Config("beta values must be finite".into()));
        }
        if let FunctionKind::SinScaled { eta } = self.function {
            if !(eta > 0.0 && eta.is_finite()) {
                return Err(Error::Config(format!("eta = {eta} must be positive")));
            }
        }
        Ok(())
    }

    /// `nmin, nmin + stride, ..` up to `nmax`; empty when `nmax < nmin`.
    pub fn n_values(&self) -> Vec<usize> {
        (self.nmin..=self.nmax)
            .step_by(self.nstride.max(1))
            .collect()
    }

    fn echo(&self) -> Vec<String> {
        let mut lines = vec![
            format!("function={}", self.function.name()),
            format!("m={}", self.m),
            format!("n={}..{} step {}", self.nmin, self.nmax, self.nstride),
            format!("method={}", self.method.name()),
            format!("mapped={}", self.mapped),
            format!("u={:.16e}", self.u),
            format!("edge_only={}", self.edge_only),
        ];
        if let FunctionKind::SinScaled { eta } = self.function {
            lines.push(format!("eta={eta}"));
        }
        if self.mapped {
            let betas: Vec<String> = self.betas.iter().map(|b| b.to_string()).collect();
            lines.push(format!("beta={}", betas.join(",")));
        }
        lines
    }
}

/// One record of a sweep. Columns that do not apply are `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub n: usize,
    pub actual: Option<f64>,
    pub ur: Option<f64>,
    pub ur_prime: Option<f64>,
    pub ur_asym: Option<f64>,
    pub ud: Option<f64>,
    pub ud_asym: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub method: String,
    /// Asymptotic `U_R` with `gamma` replaced by `n u`.
    pub ur_asym_nu: Option<f64>,
    /// Asymptotic `U_R` with `gamma` replaced by `u`.
    pub ur_asym_u: Option<f64>,
    /// Empty when every value is trustworthy.
    pub flag: String,
}

impl Row {
    fn new(n: usize, method: DiffBackend) -> Self {
        Self {
            n,
            actual: None,
            ur: None,
            ur_prime: None,
            ur_asym: None,
            ud: None,
            ud_asym: None,
            alpha: None,
            beta: None,
            method: method.name().to_string(),
            ur_asym_nu: None,
            ur_asym_u: None,
            flag: String::new(),
        }
    }

    fn add_flag(&mut self, flag: &str) {
        if !self.flag.is_empty() {
            self.flag.push(';');
        }
        self.flag.push_str(flag);
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ErrorReport {
    /// Config echo, one entry per comment line.
    pub comments: Vec<String>,
    pub rows: Vec<Row>,
}

impl ErrorReport {
    /// Rows for a given `beta` (mapped runs).
    pub fn curve(&self, beta: f64) -> Vec<&Row> {
        self.rows.iter().filter(|r| r.beta == Some(beta)).collect()
    }

    /// Smallest measured error among `rows`.
    pub fn floor(rows: &[&Row]) -> Option<f64> {
        rows.iter()
            .filter_map(|r| r.actual)
            .filter(|v| v.is_finite())
            .min_by(f64::total_cmp)
    }

    /// First `n` whose measured error exceeds `factor |U_D|`.
    pub fn transition_index(&self, factor: f64) -> Option<usize> {
        self.rows
            .iter()
            .find(|r| match (r.actual, r.ud) {
                (Some(a), Some(d)) => a > factor * d.abs(),
                _ => false,
            })
            .map(|r| r.n)
    }

    /// True when the measured error is missing or any reported value is not
    /// finite. Rows without a valid mapping parameter are exempt.
    pub fn has_numeric_failure(&self) -> bool {
        self.rows
            .iter()
            .filter(|r| !r.flag.contains("no_alpha"))
            .any(|r| {
                let values = [
                    r.actual, r.ur, r.ur_prime, r.ur_asym, r.ud, r.ud_asym, r.alpha,
                ];
                r.actual.is_none() || values.iter().flatten().any(|v| !v.is_finite())
            })
    }
}

fn max_abs(v: &[f64]) -> f64 {
    if v.iter().any(|x| x.is_nan()) {
        return f64::NAN;
    }
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

/// `|approx - exact|`, maximised over the requested nodes.
fn measured(approx: &[f64], f: &TestFunction, x: &[f64], m: usize, edge_only: bool) -> Result<f64> {
    let count = if edge_only { 1 } else { x.len() };
    let mut err = 0.0f64;
    for j in 0..count {
        let exact = f.derivative_dd(DoubleDouble::new(x[j]), m)?;
        let e = (DoubleDouble::new(approx[j]) - exact).abs().to_f64();
        if e.is_nan() {
            return Ok(f64::NAN);
        }
        err = err.max(e);
    }
    Ok(err)
}

/// Unmapped sweep on Chebyshev points with the error models alongside.
pub fn run_transition(cfg: &ExperimentConfig) -> Result<ErrorReport> {
    cfg.validate()?;
    if cfg.mapped {
        return Err(Error::Config("transition runs are unmapped".into()));
    }
    let m = cfg.m;
    let mut rows = Vec::new();
    for n in cfg.n_values() {
        let grid = ChebGrid::new(n)?;
        let f = cfg.function.test_function(n);
        let x = grid.nodes();
        let samples = f.samples(x);
        let fabs = max_abs(&samples);
        let mut row = Row::new(n, cfg.method);

        let stencil = Stencil::<f64>::new(grid.as_grid());
        let edge = stencil.weight_set(m, 1.0);
        let approx = match cfg.method {
            DiffBackend::Weights => {
                if cfg.edge_only {
                    let ws = edge.as_ref().map_err(|e| Error::Numeric(e.to_string()))?;
                    vec![fd_apply(ws, &samples)?]
                } else {
                    x.iter()
                        .map(|&z| Ok(dot_forward(&stencil.weights(m, z)?, &samples)))
                        .collect::<Result<Vec<_>>>()?
                }
            }
            DiffBackend::Dct => diff_dct(&samples, m)?,
        };
        row.actual = Some(measured(&approx, &f, x, m, cfg.edge_only)?);

        match bound_ur(grid.as_grid(), m, 1.0, fabs, cfg.u) {
            Ok(v) => row.ur = Some(v),
            Err(_) => row.add_flag("ur_failed"),
        }
        if let Ok(ws) = edge {
            row.ur_prime = bound_ur_prime(&ws, fabs, cfg.u).ok();
        }
        row.ur_asym = asym_ur(m, n, fabs, cfg.u).ok();
        let factor = asym_ur_factor(m, n, fabs)?;
        row.ur_asym_nu = Some(n as f64 * cfg.u * factor);
        row.ur_asym_u = Some(cfg.u * factor);

        let disc = disc_error(&f, &grid, m)?;
        row.ud = Some(disc.value);
        row.ud_asym = Some(disc_error_asym(m, n, &disc.divided)?);
        if !disc.reliable {
            row.add_flag("ud_unresolved");
        }
        rows.push(row);
    }
    Ok(ErrorReport {
        comments: cfg.echo(),
        rows,
    })
}

/// Mapped sweep: one curve per `beta`, `alpha` from the balance condition.
pub fn run_mapped(cfg: &ExperimentConfig) -> Result<ErrorReport> {
    cfg.validate()?;
    if !cfg.mapped {
        return Err(Error::Config("mapped runs need mapped = true".into()));
    }
    let m = cfg.m;
    let mut rows = Vec::new();
    for &beta in &cfg.betas {
        for n in cfg.n_values() {
            let mut row = Row::new(n, cfg.method);
            row.beta = Some(beta);
            let alpha = match solve_alpha(n, beta, cfg.u) {
                Ok(a) => a,
                Err(Error::NoValidAlpha { .. }) => {
                    row.add_flag("no_alpha");
                    rows.push(row);
                    continue;
                }
                Err(e) => return Err(e),
            };
            row.alpha = Some(alpha);
            let mg = MappedGrid::new(MapParams::new(alpha, beta, n, cfg.u)?)?;
            let f = cfg.function.test_function(n);
            let x = mg.x_nodes();
            let d = mapped_diff(&f.samples(x), m, &mg, cfg.method)?;
            row.actual = Some(measured(&d, &f, x, m, cfg.edge_only)?);
            rows.push(row);
        }
    }
    Ok(ErrorReport {
        comments: cfg.echo(),
        rows,
    })
}

/// Random smooth function: Chebyshev series of degree `n / 2` with
/// coefficients uniform in `(-2^-k, 2^-k)`.
pub fn random_chebyshev_function<R: Rng>(n: usize, rng: &mut R) -> TestFunction {
    let coeffs = (0..=n / 2)
        .map(|k| rng.gen_range(-1.0..1.0) * 2f64.powi(-(k as i32)))
        .collect();
    TestFunction::Chebyshev(coeffs)
}

/// `count` seeded random functions for grids of size `n`.
pub fn random_test_functions(count: usize, n: usize, seed: u64) -> Vec<TestFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_chebyshev_function(n, &mut rng))
        .collect()
}

/// Rounding error of the working-precision `m`-th derivative at `zeta`
/// (weights and samples rounded, left-to-right sum), against the same
/// formula carried out in double-double on the exact samples.
pub fn rounding_error(grid: &Grid, m: usize, zeta: f64, f: &TestFunction) -> Result<f64> {
    let x = grid.nodes();
    let ws = Stencil::<f64>::new(grid).weight_set(m, zeta)?;
    let working = fd_apply(&ws, &f.samples(x))?;
    let wdd = Stencil::<DoubleDouble>::new(grid).weights(m, zeta)?;
    let shadow = dot_forward(&wdd, &f.samples_dd(x));
    Ok((DoubleDouble::new(working) - shadow).abs().to_f64())
}

pub const COLUMNS: [&str; 13] = [
    "n",
    "actual",
    "UR",
    "URprime",
    "UR_asym",
    "UD",
    "UD_asym",
    "alpha",
    "beta",
    "method",
    "UR_asym_nu",
    "UR_asym_u",
    "flag",
];

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

/// Writes the report as CSV: `#` comment lines, a header, one line per row.
pub fn write_csv<W: Write>(report: &ErrorReport, mut out: W) -> Result<()> {
    let mut text = String::new();
    for c in &report.comments {
        let _ = writeln!(text, "# {c}");
    }
    out.write_all(text.as_bytes())
        .map_err(|e| Error::Numeric(format!("write failed: {e}")))?;
    let mut w = csv::WriterBuilder::new().from_writer(out);
    w.write_record(COLUMNS)?;
    for r in &report.rows {
        w.write_record([
            r.n.to_string(),
            fmt_opt(r.actual),
            fmt_opt(r.ur),
            fmt_opt(r.ur_prime),
            fmt_opt(r.ur_asym),
            fmt_opt(r.ud),
            fmt_opt(r.ud_asym),
            fmt_opt(r.alpha),
            fmt_opt(r.beta),
            r.method.clone(),
            fmt_opt(r.ur_asym_nu),
            fmt_opt(r.ur_asym_u),
            r.flag.clone(),
        ])?;
    }
    w.flush()
        .map_err(|e| Error::Numeric(format!("write failed: {e}")))?;
    Ok(())
}

pub fn emit_csv(report: &ErrorReport, path: &Path) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = std::fs::File::create(path).map_err(io)?;
    let mut buf = std::io::BufWriter::new(file);
    write_csv(report, &mut buf)?;
    buf.flush().map_err(io)
}

fn parse_opt(s: &str) -> Result<Option<f64>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse()
        .map(Some)
        .map_err(|_| Error::Config(format!("bad number '{s}'")))
}

pub fn read_csv<R: Read>(mut input: R) -> Result<ErrorReport> {
    let mut text = String::new();
    input
        .read_to_string(&mut text)
        .map_err(|e| Error::Config(format!("read failed: {e}")))?;
    let comments = text
        .lines()
        .filter_map(|l| l.strip_prefix('#'))
        .map(|l| l.strip_prefix(' ').unwrap_or(l).to_string())
        .collect();
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = rdr.headers()?.clone();
    if header.iter().ne(COLUMNS) {
        return Err(Error::Config(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let n = rec[0]
            .parse()
            .map_err(|_| Error::Config(format!("bad n '{}'", &rec[0])))?;
        rows.push(Row {
            n,
            actual: parse_opt(&rec[1])?,
            ur: parse_opt(&rec[2])?,
            ur_prime: parse_opt(&rec[3])?,
            ur_asym: parse_opt(&rec[4])?,
            ud: parse_opt(&rec[5])?,
            ud_asym: parse_opt(&rec[6])?,
            alpha: parse_opt(&rec[7])?,
            beta: parse_opt(&rec[8])?,
            method: rec[9].to_string(),
            ur_asym_nu: parse_opt(&rec[10])?,
            ur_asym_u: parse_opt(&rec[11])?,
            flag: rec[12].to_string(),
        });
    }
    Ok(ErrorReport { comments, rows })
}

pub fn parse_csv(path: &Path) -> Result<ErrorReport> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_csv(file)
}
