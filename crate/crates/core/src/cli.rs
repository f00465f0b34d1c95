//! Command-line surface: one subcommand per pipeline, flat `key = value`
//! config files, and CSV / JSON emission of homogeneous record tables.
//!
//! Exit status is 0 on success, 1 when a computation fails and 2 for usage
//! errors (unknown flags or keys, unparsable values).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analytic::{
    cell_entropy, classical_sphere_entropy, classical_sphere_entropy_for, fermi_gas_entropy,
    CellGasSpec, CellStatistics, FermiGasSpec,
};
use crate::cluster::{
    cluster_densities_with, cluster_entropy_scan, ClusterOptions, WoodsSaxonSpec, SHELL_CLOSURES,
};
use crate::entropy::{entropy_momentum, entropy_position, entropy_sum, EntropyResult};
use crate::error::Error;
use crate::gp::{gp_entropy, gp_entropy_scan, gp_ground_state, GpSpec};
use crate::numerics::RadialGrid;
use crate::scaling::{
    calibrate_gravity, cell_gas_force, classical_limit_force, entropic_force_general, fit_log,
    fit_power, LogFit, PowerFit, DEFAULT_AREA_STEP,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Command {
    FermiGas,
    Classical,
    Cluster,
    ClusterScan,
    Gp,
    GpScan,
    Fit,
    Force,
    BoseCell,
    FermiCell,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::FermiGas => "fermi-gas",
            Command::Classical => "classical",
            Command::Cluster => "cluster",
            Command::ClusterScan => "cluster-scan",
            Command::Gp => "gp",
            Command::GpScan => "gp-scan",
            Command::Fit => "fit",
            Command::Force => "force",
            Command::BoseCell => "bose-cell",
            Command::FermiCell => "fermi-cell",
        }
    }

    /// Parameter keys the command understands (flag names without `--`).
    pub fn keys(self) -> &'static [&'static str] {
        const CLUSTER: &[&str] = &[
            "n",
            "v0",
            "r0",
            "a",
            "hbar2-2m",
            "l-max",
            "spacing",
            "k-spacing",
        ];
        const CLUSTER_SCAN: &[&str] = &[
            "n",
            "v0",
            "r0",
            "a",
            "hbar2-2m",
            "l-max",
            "spacing",
            "k-spacing",
            "fit",
            "jobs",
        ];
        const GP: &[&str] = &[
            "n",
            "scattering-length",
            "trap-length",
            "tol",
            "r-max",
            "points",
        ];
        const GP_SCAN: &[&str] = &[
            "n",
            "scattering-length",
            "trap-length",
            "tol",
            "r-max",
            "points",
            "fit",
            "jobs",
        ];
        const CELL: &[&str] = &["occupancy", "n-particles", "kb", "lambda", "r", "step"];
        match self {
            Command::FermiGas => &["nu", "r0", "n"],
            Command::Classical => &["r0", "n", "r"],
            Command::Cluster => CLUSTER,
            Command::ClusterScan => CLUSTER_SCAN,
            Command::Gp => GP,
            Command::GpScan => GP_SCAN,
            Command::Fit => &["n", "y", "kind"],
            Command::Force => &["b", "lambda", "r", "alpha", "g", "mass-big", "mass-small"],
            Command::BoseCell | Command::FermiCell => CELL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// A fully specified invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub parameters: BTreeMap<String, String>,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(
        command: Command,
        parameters: BTreeMap<String, String>,
        output_format: OutputFormat,
        output_path: Option<PathBuf>,
    ) -> Result<Self, CliError> {
        if let Some(key) = parameters
            .keys()
            .find(|k| !command.keys().contains(&k.as_str()))
        {
            return Err(CliError::Usage(format!(
                "unknown key `{key}` for `{}` (accepted: {})",
                command.name(),
                command.keys().join(", ")
            )));
        }
        Ok(Self {
            command,
            parameters,
            output_format,
            output_path,
        })
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Run(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Run(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Run(e) => write!(f, "error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

/// Flat `key = value` lines; `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected key = value", lineno + 1))
        })?;
        map.insert(
            k.trim().trim_start_matches("--").to_string(),
            v.trim().to_string(),
        );
    }
    Ok(map)
}

// ---------------------------------------------------------------- clap layer

#[derive(Debug, Parser)]
#[command(
    name = "entropy-scaling",
    version,
    about = "Position/momentum information entropies, S = a + b ln N fits and entropic forces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Write records to this file instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Flat key = value file; command-line flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct WellArgs {
    /// Well depth V0, eV [default: 6]
    #[arg(long)]
    pub v0: Option<String>,
    /// Radius parameter r0 in R = r0 N^(1/3), angstrom [default: 2.25]
    #[arg(long)]
    pub r0: Option<String>,
    /// Surface diffuseness a, angstrom [default: 0.74]
    #[arg(long)]
    pub a: Option<String>,
    /// hbar^2/2m, eV angstrom^2 [default: 3.81]
    #[arg(long = "hbar2-2m")]
    pub hbar2_2m: Option<String>,
    /// Highest orbital angular momentum [default: 12]
    #[arg(long = "l-max")]
    pub l_max: Option<String>,
    /// Radial mesh spacing, angstrom [default: 0.02]
    #[arg(long)]
    pub spacing: Option<String>,
    /// Momentum mesh spacing, 1/angstrom [default: 0.01]
    #[arg(long = "k-spacing")]
    pub k_spacing: Option<String>,
}

#[derive(Debug, Args, Clone)]
pub struct TrapArgs {
    /// Scattering length, angstrom [default: 52.9]
    #[arg(long = "scattering-length")]
    pub scattering_length: Option<String>,
    /// Oscillator length b, angstrom [default: 12180]
    #[arg(long = "trap-length")]
    pub trap_length: Option<String>,
    /// Relative chemical-potential change per step at convergence [default: 1e-9]
    #[arg(long)]
    pub tol: Option<String>,
    /// Radial box in units of b [default: 16]
    #[arg(long = "r-max")]
    pub r_max: Option<String>,
    /// Radial mesh points [default: 8193]
    #[arg(long)]
    pub points: Option<String>,
}

#[derive(Debug, Args, Clone)]
pub struct CellArgs {
    /// Occupancies N/n, comma separated [default: 1e-2,1e-3,1e-4,1e-5]
    #[arg(long)]
    pub occupancy: Option<String>,
    /// Particle number N [default: 1]
    #[arg(long = "n-particles")]
    pub n_particles: Option<String>,
    /// Boltzmann constant [default: 1]
    #[arg(long)]
    pub kb: Option<String>,
    /// Entropy-to-force constant lambda [default: 1]
    #[arg(long)]
    pub lambda: Option<String>,
    /// Radius of the container [default: 1]
    #[arg(long)]
    pub r: Option<String>,
    /// Finite-difference step as a fraction of the area [default: 1e-5]
    #[arg(long)]
    pub step: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Ideal infinite Fermi gas, closed form
    #[command(allow_negative_numbers = true)]
    FermiGas {
        /// Level degeneracy, 2 or 4 [default: 2]
        #[arg(long)]
        nu: Option<String>,
        /// Radius per particle r0 [default: 1]
        #[arg(long)]
        r0: Option<String>,
        /// Particle numbers, comma separated [default: 1]
        #[arg(long)]
        n: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Classical uniform sphere, closed form and quadrature
    #[command(allow_negative_numbers = true)]
    Classical {
        /// Radius per particle r0 [default: 1]
        #[arg(long)]
        r0: Option<String>,
        /// Particle numbers, comma separated [default: 1]
        #[arg(long)]
        n: Option<String>,
        /// Sphere radii, comma separated (replaces --n)
        #[arg(long)]
        r: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Woods-Saxon cluster at one electron number
    #[command(allow_negative_numbers = true)]
    Cluster {
        /// Valence electrons [default: 20]
        #[arg(long)]
        n: Option<String>,
        #[command(flatten)]
        well: WellArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Woods-Saxon clusters over several electron numbers
    #[command(allow_negative_numbers = true)]
    ClusterScan {
        /// Electron numbers, comma separated [default: 2,8,20,40,58,92]
        #[arg(long)]
        n: Option<String>,
        #[command(flatten)]
        well: WellArgs,
        /// Append the S = a + b ln N fit
        #[arg(long)]
        fit: bool,
        /// Worker threads
        #[arg(long)]
        jobs: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Trapped condensate at one atom number
    #[command(allow_negative_numbers = true)]
    Gp {
        /// Atoms [default: 10000]
        #[arg(long)]
        n: Option<String>,
        #[command(flatten)]
        trap: TrapArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Trapped condensates over several atom numbers
    #[command(allow_negative_numbers = true)]
    GpScan {
        /// Atom numbers, comma separated [default: 1e3,1e4,1e5,1e6]
        #[arg(long)]
        n: Option<String>,
        #[command(flatten)]
        trap: TrapArgs,
        /// Append the entropy and rms-radius fits
        #[arg(long)]
        fit: bool,
        /// Worker threads
        #[arg(long)]
        jobs: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Fit S = a + b ln N (log) or R = r0 N^alpha (power)
    #[command(allow_negative_numbers = true)]
    Fit {
        /// Particle numbers, comma separated
        #[arg(long)]
        n: Option<String>,
        /// Entropies or radii, comma separated
        #[arg(long)]
        y: Option<String>,
        /// log or power [default: log]
        #[arg(long)]
        kind: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Entropic force -lambda dS/dA of the logarithmic law
    #[command(allow_negative_numbers = true)]
    Force {
        /// Slope b of S = a + b ln N
        #[arg(long)]
        b: Option<String>,
        /// Entropy-to-force constant [default: 1]
        #[arg(long)]
        lambda: Option<String>,
        /// Radii, comma separated [default: 1]
        #[arg(long)]
        r: Option<String>,
        /// Radius exponent alpha in R = r0 N^alpha [default: 1/3]
        #[arg(long)]
        alpha: Option<String>,
        /// Gravitational constant; with --mass-big and --mass-small sets lambda
        #[arg(long)]
        g: Option<String>,
        /// Central mass M
        #[arg(long = "mass-big")]
        mass_big: Option<String>,
        /// Test mass m
        #[arg(long = "mass-small")]
        mass_small: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Bose cell-gas entropy and its entropic force
    #[command(allow_negative_numbers = true)]
    BoseCell {
        #[command(flatten)]
        cell: CellArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Fermi cell-gas entropy and its entropic force
    #[command(allow_negative_numbers = true)]
    FermiCell {
        #[command(flatten)]
        cell: CellArgs,
        #[command(flatten)]
        common: Common,
    },
}

fn put(map: &mut BTreeMap<String, String>, key: &str, value: &Option<String>) {
    if let Some(v) = value {
        map.insert(key.to_string(), v.clone());
    }
}

fn put_well(map: &mut BTreeMap<String, String>, w: &WellArgs) {
    put(map, "v0", &w.v0);
    put(map, "r0", &w.r0);
    put(map, "a", &w.a);
    put(map, "hbar2-2m", &w.hbar2_2m);
    put(map, "l-max", &w.l_max);
    put(map, "spacing", &w.spacing);
    put(map, "k-spacing", &w.k_spacing);
}

fn put_trap(map: &mut BTreeMap<String, String>, t: &TrapArgs) {
    put(map, "scattering-length", &t.scattering_length);
    put(map, "trap-length", &t.trap_length);
    put(map, "tol", &t.tol);
    put(map, "r-max", &t.r_max);
    put(map, "points", &t.points);
}

fn put_cell(map: &mut BTreeMap<String, String>, c: &CellArgs) {
    put(map, "occupancy", &c.occupancy);
    put(map, "n-particles", &c.n_particles);
    put(map, "kb", &c.kb);
    put(map, "lambda", &c.lambda);
    put(map, "r", &c.r);
    put(map, "step", &c.step);
}

impl Cli {
    /// Merge flags over the optional config file into a [`RunConfig`].
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let mut flags = BTreeMap::new();
        let (command, common) = match &self.command {
            CliCommand::FermiGas { nu, r0, n, common } => {
                put(&mut flags, "nu", nu);
                put(&mut flags, "r0", r0);
                put(&mut flags, "n", n);
                (Command::FermiGas, common)
            }
            CliCommand::Classical { r0, n, r, common } => {
                put(&mut flags, "r0", r0);
                put(&mut flags, "n", n);
                put(&mut flags, "r", r);
                (Command::Classical, common)
            }
            CliCommand::Cluster { n, well, common } => {
                put(&mut flags, "n", n);
                put_well(&mut flags, well);
                (Command::Cluster, common)
            }
            CliCommand::ClusterScan {
                n,
                well,
                fit,
                jobs,
                common,
            } => {
                put(&mut flags, "n", n);
                put_well(&mut flags, well);
                if *fit {
                    flags.insert("fit".into(), "true".into());
                }
                put(&mut flags, "jobs", jobs);
                (Command::ClusterScan, common)
            }
            CliCommand::Gp { n, trap, common } => {
                put(&mut flags, "n", n);
                put_trap(&mut flags, trap);
                (Command::Gp, common)
            }
            CliCommand::GpScan {
                n,
                trap,
                fit,
                jobs,
                common,
            } => {
                put(&mut flags, "n", n);
                put_trap(&mut flags, trap);
                if *fit {
                    flags.insert("fit".into(), "true".into());
                }
                put(&mut flags, "jobs", jobs);
                (Command::GpScan, common)
            }
            CliCommand::Fit { n, y, kind, common } => {
                put(&mut flags, "n", n);
                put(&mut flags, "y", y);
                put(&mut flags, "kind", kind);
                (Command::Fit, common)
            }
            CliCommand::Force {
                b,
                lambda,
                r,
                alpha,
                g,
                mass_big,
                mass_small,
                common,
            } => {
                put(&mut flags, "b", b);
                put(&mut flags, "lambda", lambda);
                put(&mut flags, "r", r);
                put(&mut flags, "alpha", alpha);
                put(&mut flags, "g", g);
                put(&mut flags, "mass-big", mass_big);
                put(&mut flags, "mass-small", mass_small);
                (Command::Force, common)
            }
            CliCommand::BoseCell { cell, common } => {
                put_cell(&mut flags, cell);
                (Command::BoseCell, common)
            }
            CliCommand::FermiCell { cell, common } => {
                put_cell(&mut flags, cell);
                (Command::FermiCell, common)
            }
        };
        let mut parameters = match &common.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Usage(format!("cannot read config {}: {e}", path.display()))
                })?;
                parse_config_file(&text)?
            }
            None => BTreeMap::new(),
        };
        parameters.extend(flags);
        RunConfig::new(command, parameters, common.format, common.output.clone())
    }
}

/// Parse arguments, run, and return the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    let result = cli
        .into_config()
        .and_then(|config| execute(&config, &mut stdout.lock()));
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

/// Run `config` and write its records to the configured path or to `out`.
pub fn execute(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let table = run(config)?;
    match &config.output_path {
        Some(path) => emit(&table, config.output_format, Some(path), out),
        None => emit(&table, config.output_format, None, out),
    }
    .map_err(CliError::Run)
}

// ---------------------------------------------------------------- parameters

struct Params<'a> {
    map: &'a BTreeMap<String, String>,
}

impl<'a> Params<'a> {
    fn raw(&self, key: &str) -> Option<&'a str> {
        self.map.get(key).map(String::as_str)
    }

    fn real(&self, key: &str, default: f64) -> Result<f64, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some(s) => parse_real(key, s),
        }
    }

    fn required_real(&self, key: &str) -> Result<f64, CliError> {
        let s = self
            .raw(key)
            .ok_or_else(|| CliError::Usage(format!("missing required --{key}")))?;
        parse_real(key, s)
    }

    fn opt_real(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.raw(key).map(|s| parse_real(key, s)).transpose()
    }

    fn count(&self, key: &str, default: usize) -> Result<usize, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some(s) => parse_count(key, s),
        }
    }

    fn counts(&self, key: &str, default: &[usize]) -> Result<Vec<usize>, CliError> {
        match self.raw(key) {
            None => Ok(default.to_vec()),
            Some(s) => split_list(s).map(|t| parse_count(key, t)).collect(),
        }
    }

    fn reals(&self, key: &str, default: &[f64]) -> Result<Vec<f64>, CliError> {
        match self.raw(key) {
            None => Ok(default.to_vec()),
            Some(s) => split_list(s).map(|t| parse_real(key, t)).collect(),
        }
    }

    fn flag(&self, key: &str) -> Result<bool, CliError> {
        match self.raw(key) {
            None => Ok(false),
            Some("true") | Some("1") | Some("yes") => Ok(true),
            Some("false") | Some("0") | Some("no") => Ok(false),
            Some(other) => Err(CliError::Usage(format!(
                "--{key}: expected a boolean, got `{other}`"
            ))),
        }
    }
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty())
}

fn parse_real(key: &str, s: &str) -> Result<f64, CliError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("--{key}: `{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(CliError::Usage(format!("--{key}: `{s}` is not finite")));
    }
    Ok(v)
}

/// Integral counts; scientific notation such as `1e4` is accepted.
pub fn parse_count(key: &str, s: &str) -> Result<usize, CliError> {
    let v = parse_real(key, s)?;
    if v < 0.0 || v.fract() != 0.0 || v > 9.007_199_254_740_992e15 {
        return Err(CliError::Usage(format!(
            "--{key}: `{s}` is not a non-negative integer"
        )));
    }
    Ok(v as usize)
}

// ---------------------------------------------------------------- records

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(u64),
    Real(f64),
    Text(String),
    Empty,
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as u64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<Option<f64>> for Value {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Value::Empty, Value::Real)
    }
}

/// Homogeneous records: every row has one value per column.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    pub fn real(&self, row: usize, name: &str) -> Option<f64> {
        match self.rows.get(row)?.get(self.column(name)?)? {
            Value::Real(v) => Some(*v),
            Value::Int(v) => Some(*v as f64),
            _ => None,
        }
    }
}

/// Nine significant digits, `%g` style: fixed notation for moderate
/// magnitudes, otherwise exponent notation; trailing zeros dropped.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        let fixed = format!("{x:.decimals$}");
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::Int(i) => i.to_string(),
        Value::Real(x) => format_real(*x),
        Value::Text(s) => s.clone(),
        Value::Empty => String::new(),
    }
}

fn json_value(v: &Value) -> serde_json::Value {
    match v {
        Value::Int(i) => serde_json::Value::from(*i),
        Value::Real(x) => {
            // the same nine digits as the CSV form
            let rounded: f64 = format_real(*x).parse().unwrap_or(*x);
            serde_json::Number::from_f64(rounded)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null)
        }
        Value::Text(s) => serde_json::Value::String(s.clone()),
        Value::Empty => serde_json::Value::Null,
    }
}

/// Render a table as CSV (header row, RFC 4180 quoting) or as a JSON array of
/// flat objects with the same field names.
pub fn render(table: &Table, format: OutputFormat) -> Result<Vec<u8>, Error> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Io(e.to_string());
            w.write_record(&table.columns).map_err(io)?;
            for row in &table.rows {
                w.write_record(row.iter().map(cell_text)).map_err(io)?;
            }
            w.into_inner().map_err(|e| Error::Io(e.to_string()))
        }
        OutputFormat::Json => {
            let array: Vec<serde_json::Value> = table
                .rows
                .iter()
                .map(|row| {
                    let obj: serde_json::Map<String, serde_json::Value> = table
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), json_value(v)))
                        .collect();
                    serde_json::Value::Object(obj)
                })
                .collect();
            let mut bytes =
                serde_json::to_vec_pretty(&array).map_err(|e| Error::Io(e.to_string()))?;
            bytes.push(b'\n');
            Ok(bytes)
        }
    }
}

/// Write the rendered table to `path`, or to `out` when no path is given.
pub fn emit(
    table: &Table,
    format: OutputFormat,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), Error> {
    let bytes = render(table, format)?;
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => out.write_all(&bytes).map_err(Error::from),
    }
}

// ---------------------------------------------------------------- dispatch

const ENTROPY_COLUMNS: [&str; 5] = ["n", "s_r", "s_k", "s_total", "eur_margin"];

fn entropy_cells(e: &EntropyResult) -> Vec<Value> {
    vec![
        e.n_particles.into(),
        e.s_r.into(),
        e.s_k.into(),
        e.s_total.into(),
        e.eur_margin.into(),
    ]
}

fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    if jobs == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Run(Error::invalid(e.to_string())))?;
    Ok(pool.install(f))
}

fn well_from(p: &Params, n: usize) -> Result<(WoodsSaxonSpec, ClusterOptions), CliError> {
    let defaults = WoodsSaxonSpec::sodium(n);
    let spec = WoodsSaxonSpec {
        v0: p.real("v0", defaults.v0)?,
        r0: p.real("r0", defaults.r0)?,
        diffuseness_a: p.real("a", defaults.diffuseness_a)?,
        n_electrons: n,
        hbar2_over_2m: p.real("hbar2-2m", defaults.hbar2_over_2m)?,
    };
    spec.validate()?;
    let d = ClusterOptions::default();
    let options = ClusterOptions {
        l_max: p.count("l-max", d.l_max)?,
        spacing: p.real("spacing", d.spacing)?,
        k_spacing: p.real("k-spacing", d.k_spacing)?,
        ..d
    };
    if !(options.spacing > 0.0 && options.k_spacing > 0.0) {
        return Err(Error::invalid("mesh spacings must be positive").into());
    }
    Ok((spec, options))
}

fn trap_from(p: &Params, n: usize) -> Result<GpSpec, CliError> {
    let d = GpSpec::rubidium(n);
    let grid = RadialGrid::new(
        p.real("r-max", d.grid.r_max())?,
        p.count("points", d.grid.n_points())?,
    )?;
    let spec = GpSpec {
        scattering_length: p.real("scattering-length", d.scattering_length)?,
        trap_length_b: p.real("trap-length", d.trap_length_b)?,
        convergence_tol: p.real("tol", d.convergence_tol)?,
        grid,
        ..d
    };
    spec.validate()?;
    Ok(spec)
}

fn log_fit_row(fit: &LogFit, width: usize, label: &str) -> Vec<Value> {
    let mut row = vec![Value::Text(label.to_string())];
    row.resize(width - 3, Value::Empty);
    row.extend([
        fit.intercept_a.into(),
        fit.slope_b.into(),
        fit.r_squared.into(),
    ]);
    row
}

/// Compute the records for `config` without writing them.
pub fn run(config: &RunConfig) -> Result<Table, CliError> {
    let p = Params {
        map: &config.parameters,
    };
    match config.command {
        Command::FermiGas => {
            let nu = p.count("nu", 2)? as u32;
            let r0 = p.real("r0", 1.0)?;
            let ns = p.counts("n", &[1])?;
            let specs: Vec<FermiGasSpec> = ns
                .iter()
                .map(|&n| FermiGasSpec::new(nu, r0, n))
                .collect::<Result<_, _>>()?;
            let mut cols = vec!["nu", "r0"];
            cols.extend(ENTROPY_COLUMNS);
            let mut t = Table::new(&cols);
            for spec in &specs {
                let e = fermi_gas_entropy(spec)?;
                let mut row = vec![(nu as usize).into(), r0.into()];
                row.extend(entropy_cells(&e));
                t.push(row);
            }
            Ok(t)
        }
        Command::Classical => {
            let mut t = Table::new(&["r0", "n", "radius", "s_closed_form", "s_quadrature"]);
            let r0 = p.real("r0", 1.0)?;
            let rows: Vec<(Option<usize>, f64)> = if p.raw("r").is_some() {
                p.reals("r", &[])?.into_iter().map(|r| (None, r)).collect()
            } else {
                p.counts("n", &[1])?
                    .into_iter()
                    .map(|n| (Some(n), r0 * (n as f64).cbrt()))
                    .collect()
            };
            for (n, radius) in rows {
                let closed = match n {
                    Some(n) => classical_sphere_entropy_for(r0, n)?,
                    None => classical_sphere_entropy(radius)?,
                };
                let grid = RadialGrid::new(radius, 401)?;
                let rho0 = 3.0 / (4.0 * std::f64::consts::PI * radius.powi(3));
                let quad = entropy_position(&grid.sample(|_| rho0)?)?;
                t.push(vec![
                    r0.into(),
                    n.map_or(Value::Empty, Value::from),
                    radius.into(),
                    closed.into(),
                    quad.into(),
                ]);
            }
            Ok(t)
        }
        Command::Cluster => {
            let n = p.count("n", 20)?;
            let (spec, options) = well_from(&p, n)?;
            let d = cluster_densities_with(&spec, &options)?;
            let e = entropy_sum(entropy_position(&d.rho)?, entropy_momentum(&d.n_k)?, n);
            let config: Vec<String> = d
                .orbitals
                .iter()
                .map(|o| format!("{}{}", o.label(), format_real(o.occupancy)))
                .collect();
            let mut cols = ENTROPY_COLUMNS.to_vec();
            cols.extend(["well_radius", "fermi_energy", "configuration"]);
            let mut t = Table::new(&cols);
            let mut row = entropy_cells(&e);
            row.push(spec.well_radius().into());
            row.push(d.orbitals.last().map(|o| o.energy).into());
            row.push(Value::Text(config.join(" ")));
            t.push(row);
            Ok(t)
        }
        Command::ClusterScan => {
            let ns = p.counts("n", &SHELL_CLOSURES)?;
            let fit = p.flag("fit")?;
            let jobs = p.count("jobs", 0)?;
            let (base, options) = well_from(&p, 1)?;
            let results = with_jobs(jobs, || cluster_entropy_scan(&ns, &base, &options))??;
            scan_table(
                &results.iter().map(|e| (*e, None)).collect::<Vec<_>>(),
                fit,
                false,
            )
        }
        Command::Gp => {
            let n = p.count("n", 10_000)?;
            let spec = trap_from(&p, n)?;
            let state = gp_ground_state(&spec)?;
            let e = gp_entropy(&state, n)?;
            let mut cols = ENTROPY_COLUMNS.to_vec();
            cols.extend([
                "coupling_g",
                "mu",
                "energy_per_particle",
                "rms_radius_b",
                "rms_radius_angstrom",
            ]);
            let mut t = Table::new(&cols);
            let mut row = entropy_cells(&e);
            row.extend([
                spec.coupling().into(),
                state.chemical_potential_mu.into(),
                state.energy_per_particle.into(),
                state.rms_radius.into(),
                state.rms_radius_angstrom().into(),
            ]);
            t.push(row);
            Ok(t)
        }
        Command::GpScan => {
            let ns = p.counts("n", &[1_000, 10_000, 100_000, 1_000_000])?;
            let fit = p.flag("fit")?;
            let jobs = p.count("jobs", 0)?;
            let base = trap_from(&p, 1)?;
            let points = with_jobs(jobs, || gp_entropy_scan(&ns, &base))??;
            let rows: Vec<(EntropyResult, Option<(f64, f64)>)> = points
                .iter()
                .map(|pt| (pt.entropy, Some((pt.rms_radius, pt.rms_radius_angstrom))))
                .collect();
            scan_table(&rows, fit, true)
        }
        Command::Fit => {
            let ns = p.reals("n", &[])?;
            let ys = p.reals("y", &[])?;
            if ns.len() != ys.len() {
                return Err(CliError::Usage(format!(
                    "--n has {} values but --y has {}",
                    ns.len(),
                    ys.len()
                )));
            }
            let pts: Vec<(f64, f64)> = ns.into_iter().zip(ys).collect();
            let mut t = Table::new(&[
                "kind",
                "intercept_or_prefactor",
                "slope_or_exponent",
                "r_squared",
            ]);
            match p.raw("kind").unwrap_or("log") {
                "log" => {
                    let f = fit_log(&pts)?;
                    t.push(vec![
                        "log".into(),
                        f.intercept_a.into(),
                        f.slope_b.into(),
                        f.r_squared.into(),
                    ]);
                }
                "power" => {
                    let f = fit_power(&pts)?;
                    t.push(vec![
                        "power".into(),
                        f.prefactor_r0.into(),
                        f.exponent_alpha.into(),
                        Value::Empty,
                    ]);
                }
                other => {
                    return Err(CliError::Usage(format!(
                        "--kind: expected log or power, got `{other}`"
                    )))
                }
            }
            Ok(t)
        }
        Command::Force => {
            let b = p.required_real("b")?;
            let alpha = p.real("alpha", 1.0 / 3.0)?;
            let radii = p.reals("r", &[1.0])?;
            let gravity = (
                p.opt_real("g")?,
                p.opt_real("mass-big")?,
                p.opt_real("mass-small")?,
            );
            let (lambda, newton) = match gravity {
                (None, None, None) => (p.real("lambda", 1.0)?, None),
                (Some(g), Some(mm), Some(m)) => {
                    if p.raw("lambda").is_some() {
                        return Err(CliError::Usage(
                            "--lambda conflicts with --g/--mass-big/--mass-small".into(),
                        ));
                    }
                    (calibrate_gravity(g, mm, m, b)?, Some(g * mm * m))
                }
                _ => {
                    return Err(CliError::Usage(
                        "--g, --mass-big and --mass-small go together".into(),
                    ))
                }
            };
            let mut t = Table::new(&[
                "r",
                "b",
                "alpha",
                "lambda",
                "force",
                "r2_force",
                "newton_force",
            ]);
            for r in radii {
                let f = entropic_force_general(b, alpha, lambda, r)?;
                t.push(vec![
                    r.into(),
                    b.into(),
                    alpha.into(),
                    lambda.into(),
                    f.into(),
                    (f * r * r).into(),
                    newton.map(|gmm| -gmm / (r * r)).into(),
                ]);
            }
            Ok(t)
        }
        Command::BoseCell | Command::FermiCell => {
            let stats = if config.command == Command::BoseCell {
                CellStatistics::Bose
            } else {
                CellStatistics::Fermi
            };
            let occupancies = p.reals("occupancy", &[1e-2, 1e-3, 1e-4, 1e-5])?;
            let n = p.real("n-particles", 1.0)?;
            let k_b = p.real("kb", 1.0)?;
            let lambda = p.real("lambda", 1.0)?;
            let r = p.real("r", 1.0)?;
            let step = p.real("step", DEFAULT_AREA_STEP)?;
            let target = classical_limit_force(n, k_b, lambda, r)?;
            let mut t = Table::new(&[
                "occupancy",
                "n_particles",
                "entropy",
                "force",
                "classical_force",
                "ratio",
            ]);
            for x in occupancies {
                let s = cell_entropy(stats, &CellGasSpec::new(x, n).with_kb(k_b))?;
                let f = cell_gas_force(stats, x, n, k_b, lambda, r, step)?;
                t.push(vec![
                    x.into(),
                    n.into(),
                    s.into(),
                    f.into(),
                    target.into(),
                    (f / target).into(),
                ]);
            }
            Ok(t)
        }
    }
}

fn scan_table(
    rows: &[(EntropyResult, Option<(f64, f64)>)],
    fit: bool,
    with_radius: bool,
) -> Result<Table, CliError> {
    let mut cols = vec!["record"];
    cols.extend(ENTROPY_COLUMNS);
    cols.extend(["ln_n", "s_fit"]);
    if with_radius {
        cols.extend(["rms_radius_b", "rms_radius_angstrom"]);
    }
    cols.extend(["fit_a", "fit_b", "fit_r2"]);
    let width = cols.len();
    let log_fit = if fit {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .map(|(e, _)| (e.n_particles as f64, e.s_total))
            .collect();
        Some(fit_log(&pts)?)
    } else {
        None
    };
    let mut t = Table::new(&cols);
    for (e, radius) in rows {
        let n = e.n_particles as f64;
        let mut row = vec![Value::from("point")];
        row.extend(entropy_cells(e));
        row.push(n.ln().into());
        row.push(log_fit.as_ref().map(|f| f.entropy(n)).into());
        if with_radius {
            row.push(radius.map(|r| r.0).into());
            row.push(radius.map(|r| r.1).into());
        }
        row.extend([Value::Empty, Value::Empty, Value::Empty]);
        t.push(row);
    }
    if let Some(f) = &log_fit {
        t.push(log_fit_row(f, width, "entropy_fit"));
        if with_radius {
            let pts: Vec<(f64, f64)> = rows
                .iter()
                .filter_map(|(e, r)| r.map(|r| (e.n_particles as f64, r.0)))
                .collect();
            let pf: PowerFit = fit_power(&pts)?;
            let mut row = vec![Value::from("radius_fit_b")];
            row.resize(width - 3, Value::Empty);
            row.extend([
                pf.prefactor_r0.into(),
                pf.exponent_alpha.into(),
                Value::Empty,
            ]);
            t.push(row);
        }
    }
    Ok(t)
}
