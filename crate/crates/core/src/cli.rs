//! The `ptcal` command line: level tables, crossing lists, wavefunction
//! samples, figure data and oracle runs.
//!
//! Exit status is 0 on success, 2 for flag or validation errors and 1 when a
//! `verify` run misses its tolerance gate.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::warn;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::model::{ContourDomain, ContourSpec, CouplingParameters, ModelId, QuantumNumbers, Sector};
use crate::spectra::{self, TableRow, TABLE_HEADER};
use crate::verify::{self, OracleReport};
use crate::wavefun;

#[derive(Debug, Parser)]
#[command(
    name = "ptcal",
    version,
    about = "Complexified Calogero models on PT-symmetric contours"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form levels below an energy cutoff.
    Spectrum(SpectrumArgs),
    /// Couplings where two-body levels of opposite sectors cross.
    Crossings(CrossingsArgs),
    /// Eigenfunction samples along a contour.
    Wavefunction(WavefunctionArgs),
    /// Lowest levels over a coupling sweep, in the figure normalization.
    Figure(FigureArgs),
    /// Numerical oracle run compared against the closed forms.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    A2,
    Toy,
    A3,
    /// Two-particle centre of mass.
    Cm,
    /// Three-particle centre of mass.
    Cm3,
}

impl ModelArg {
    pub fn model(self) -> ModelId {
        match self {
            ModelArg::A2 => ModelId::A2Radial,
            ModelArg::Toy => ModelId::Toy3,
            ModelArg::A3 => ModelId::Full3,
            ModelArg::Cm => ModelId::CentreOfMass { particles: 2 },
            ModelArg::Cm3 => ModelId::CentreOfMass { particles: 3 },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SectorArg {
    Plus,
    Minus,
}

impl From<SectorArg> for Sector {
    fn from(s: SectorArg) -> Self {
        match s {
            SectorArg::Plus => Sector::Plus,
            SectorArg::Minus => Sector::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    #[arg(long)]
    pub g: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Energy cutoff.
    #[arg(long, required_unless_present = "level_budget")]
    pub e_max: Option<f64>,
    /// Number of lowest levels instead of a cutoff.
    #[arg(long)]
    pub level_budget: Option<usize>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct CrossingsArgs {
    #[arg(long, default_value_t = 4)]
    pub kmax: u32,
    #[arg(long, default_value_t = 2.0)]
    pub omega: f64,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ContourArg {
    Shift,
    Bump,
}

#[derive(Debug, Args)]
pub struct WavefunctionArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    #[arg(long)]
    pub g: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    #[arg(long, value_enum, default_value_t = SectorArg::Plus)]
    pub sector: SectorArg,
    #[arg(long, value_enum, default_value_t = ContourArg::Shift)]
    pub contour: ContourArg,
    #[arg(long, default_value_t = 0.5)]
    pub eps0: f64,
    /// Bump width on a line contour.
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
    /// Number of sample points.
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    #[arg(long, default_value_t = 0.0)]
    pub g_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub g_max: f64,
    /// Number of grid couplings.
    #[arg(long, default_value_t = 41)]
    pub steps: usize,
    #[arg(long, default_value_t = 10)]
    pub level_budget: usize,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    #[arg(long)]
    pub g: f64,
    #[arg(long, default_value_t = 2.0)]
    pub omega: f64,
    #[arg(long, default_value_t = 0.5)]
    pub eps0: f64,
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
    /// Upper end of the energy window (two-body shooting).
    #[arg(long, default_value_t = 12.0)]
    pub e_max: f64,
    /// Highest angular index covered by the beta window.
    #[arg(long, default_value_t = 3)]
    pub kmax: u32,
    /// Restrict an angular run to one sector.
    #[arg(long, value_enum)]
    pub sector: Option<SectorArg>,
    /// Integration steps per path.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Header of the wavefunction sample table.
pub const SAMPLE_HEADER: [&str; 5] = ["parameter", "re_point", "im_point", "re_value", "im_value"];
/// Header of the crossing table.
pub const CROSSING_HEADER: [&str; 4] = ["k", "g", "ell", "E"];

#[derive(Debug, Serialize)]
struct SampleRow {
    parameter: f64,
    re_point: f64,
    im_point: f64,
    re_value: f64,
    im_value: f64,
}

#[derive(Debug, Serialize)]
struct CrossingRow {
    k: u32,
    g: f64,
    ell: f64,
    #[serde(rename = "E")]
    energy: f64,
}

/// Which CSV layout a table follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsvSchema {
    Levels,
    Samples,
    Crossings,
}

impl CsvSchema {
    pub fn header(self) -> &'static [&'static str] {
        match self {
            CsvSchema::Levels => &TABLE_HEADER,
            CsvSchema::Samples => &SAMPLE_HEADER,
            CsvSchema::Crossings => &CROSSING_HEADER,
        }
    }

    /// Columns that may be left empty.
    fn optional(self, column: &str) -> bool {
        self == CsvSchema::Levels && matches!(column, "sector" | "k")
    }

    fn textual(self, column: &str) -> bool {
        self == CsvSchema::Levels && matches!(column, "model" | "sector")
    }
}

/// Parses `text` as a CSV table of the given schema and returns its row count.
pub fn check_csv_schema(text: &str, schema: CsvSchema) -> Result<usize> {
    let bad = |msg: String| domain(format!("csv schema: {msg}"));
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| bad(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if header != schema.header() {
        return Err(bad(format!("header {header:?} differs from {:?}", schema.header())));
    }
    let mut rows = 0;
    for record in reader.records() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        rows += 1;
        for (column, field) in header.iter().zip(record.iter()) {
            if field.is_empty() {
                if schema.optional(column) {
                    continue;
                }
                return Err(bad(format!("row {rows}: empty {column}")));
            }
            if schema.textual(column) {
                continue;
            }
            let v: f64 = field
                .parse()
                .map_err(|_| bad(format!("row {rows}: {column} = {field:?} is not a number")))?;
            if !v.is_finite() {
                return Err(bad(format!("row {rows}: {column} is not finite")));
            }
        }
    }
    Ok(rows)
}

enum Failure {
    Usage(String),
    Gate,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("io error: {e}"))
    }
}

fn csv_text<T: Serialize>(header: &[&str], rows: &[T]) -> std::result::Result<String, Failure> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header).map_err(|e| Failure::Usage(e.to_string()))?;
    for r in rows {
        w.serialize(r).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Usage(e.to_string()))
}

fn json_text<T: Serialize + ?Sized>(value: &T) -> std::result::Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn table<T: Serialize>(
    header: &[&str],
    schema: CsvSchema,
    rows: &[T],
    format: Format,
) -> std::result::Result<String, Failure> {
    match format {
        Format::Csv => {
            let text = csv_text(header, rows)?;
            check_csv_schema(&text, schema)?;
            Ok(text)
        }
        Format::Json => json_text(rows),
    }
}

fn emit(path: &Option<PathBuf>, text: &str) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => File::create(p)?.write_all(text.as_bytes())?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn spectrum(a: &SpectrumArgs) -> std::result::Result<(), Failure> {
    let cp = CouplingParameters::new(a.g, a.omega)?;
    let model = a.model.model();
    let levels = match (a.level_budget, a.e_max) {
        (Some(budget), _) => spectra::lowest_levels(model, &cp, budget),
        (None, Some(e_max)) => spectra::enumerate_levels(model, &cp, e_max),
        (None, None) => return Err(Failure::Usage("spectrum needs --e-max or --level-budget".into())),
    };
    let rows: Vec<TableRow> = levels.iter().map(|l| TableRow::new(l, &cp)).collect();
    emit(
        &a.out.output,
        &table(&TABLE_HEADER, CsvSchema::Levels, &rows, a.out.format)?,
    )
}

fn crossings(a: &CrossingsArgs) -> std::result::Result<(), Failure> {
    let list = spectra::find_crossings(a.kmax, a.omega)?;
    let rows: Vec<CrossingRow> = list
        .iter()
        .map(|c| CrossingRow {
            k: c.k,
            g: c.g,
            ell: c.ell,
            energy: c.plus.energy,
        })
        .collect();
    emit(
        &a.out.output,
        &table(&CROSSING_HEADER, CsvSchema::Crossings, &rows, a.out.format)?,
    )
}

fn wavefunction(a: &WavefunctionArgs) -> std::result::Result<(), Failure> {
    let cp = CouplingParameters::new(a.g, a.omega)?;
    let model = a.model.model();
    let qn = QuantumNumbers::three_body(a.n, a.k, a.sector.into());
    spectra::level(model, qn, &cp)?;
    let domain_kind = if model.is_angular() {
        ContourDomain::Periodic
    } else {
        ContourDomain::Line
    };
    let contour = match a.contour {
        ContourArg::Shift => ContourSpec::constant_shift(domain_kind, a.eps0)?,
        ContourArg::Bump => ContourSpec::bump(domain_kind, a.eps0, a.width)?,
    };
    if a.steps < 2 {
        return Err(Failure::Usage("wavefunction needs --steps of at least 2".into()));
    }
    let params = match domain_kind {
        ContourDomain::Line => {
            let l = 6.0 / cp.omega.sqrt();
            spectra::linear_grid(-l, l, a.steps)
        }
        // half-open period (-pi, pi]
        ContourDomain::Periodic => (1..=a.steps)
            .map(|j| -PI + 2.0 * PI * j as f64 / a.steps as f64)
            .collect(),
    };
    let samples = wavefun::sample_contour(model, qn, &cp, &contour, &params)?;
    let rows: Vec<SampleRow> = samples
        .iter()
        .map(|s| SampleRow {
            parameter: s.parameter,
            re_point: s.point.re,
            im_point: s.point.im,
            re_value: s.value.re,
            im_value: s.value.im,
        })
        .collect();
    emit(
        &a.out.output,
        &table(&SAMPLE_HEADER, CsvSchema::Samples, &rows, a.out.format)?,
    )
}

/// Figure rows for a model over a coupling grid, as CSV or JSON text.
pub fn figure_text(
    model: ModelId,
    g_min: f64,
    g_max: f64,
    steps: usize,
    budget: usize,
    format: Format,
) -> Result<String> {
    if !(g_min <= g_max) || steps == 0 {
        return Err(domain("figure needs g-min <= g-max and at least one step"));
    }
    let data = spectra::figure_data(model, &spectra::linear_grid(g_min, g_max, steps), budget)?;
    for (g, e) in &data.flagged {
        warn!("figure point g = {g} skipped: {e}");
    }
    table(&TABLE_HEADER, CsvSchema::Levels, &data.rows, format).map_err(|f| match f {
        Failure::Usage(m) => domain(m),
        Failure::Gate => domain("unexpected gate failure"),
    })
}

fn figure(a: &FigureArgs) -> std::result::Result<(), Failure> {
    let text = figure_text(a.model.model(), a.g_min, a.g_max, a.steps, a.level_budget, a.out.format)?;
    emit(&a.out.output, &text)
}

fn verify_run(a: &VerifyArgs) -> std::result::Result<(), Failure> {
    let cp = CouplingParameters::new(a.g, a.omega)?;
    let model = a.model.model();
    let reports: Vec<OracleReport> = match model {
        ModelId::A2Radial => {
            let contour = ContourSpec::constant_shift(ContourDomain::Line, a.eps0)?;
            let window = verify::default_energy_window(&cp, a.e_max);
            let length = verify::default_length(cp.omega, a.e_max);
            let steps = a.steps.unwrap_or(verify::DEFAULT_SHOOT_STEPS);
            vec![verify::shoot_a2_with_steps(
                &cp, &contour, window, length, a.tol, steps,
            )?]
        }
        ModelId::Toy3 | ModelId::Full3 => {
            let contour = ContourSpec::constant_shift(ContourDomain::Periodic, a.eps0)?;
            let steps = a.steps.unwrap_or(verify::DEFAULT_MONODROMY_STEPS);
            let sectors: Vec<Sector> = match a.sector {
                Some(s) => vec![s.into()],
                None => Sector::BOTH.to_vec(),
            };
            sectors
                .into_iter()
                .map(|s| {
                    let window = verify::default_beta_window(model, s, &cp, a.kmax)?;
                    verify::monodromy_angular_with_steps(model, s, &cp, &contour, window, a.tol, steps)
                })
                .collect::<Result<_>>()?
        }
        other => return Err(Failure::Usage(format!("no numerical oracle for model {other}"))),
    };
    let pass = reports.iter().all(|r| r.pass);
    let text = if reports.len() == 1 {
        json_text(&reports[0])?
    } else {
        json_text(&reports)?
    };
    emit(&a.output, &text)?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Gate)
    }
}

fn configure_threads() -> std::result::Result<(), Failure> {
    if let Ok(v) = std::env::var("PTCAL_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("PTCAL_THREADS = {v:?} is not a thread count")))?;
        // a pool built earlier in the same process keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> std::result::Result<(), Failure> {
    configure_threads()?;
    match &cli.command {
        Command::Spectrum(a) => spectrum(a),
        Command::Crossings(a) => crossings(a),
        Command::Wavefunction(a) => wavefunction(a),
        Command::Figure(a) => figure(a),
        Command::Verify(a) => verify_run(a),
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("{first}");
            return 2;
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(Failure::Gate) => {
            eprintln!("verify: tolerance gate failed");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_check_accepts_and_rejects() {
        let ok = "model,g,ell,alpha,sector,n,k,E\na2,0.0,0.0,0.5,plus,0,,3.0\n";
        assert_eq!(check_csv_schema(ok, CsvSchema::Levels).unwrap(), 1);
        let bad = "model,g,ell,alpha,sector,n,k,E\na2,x,0.0,0.5,plus,0,,3.0\n";
        assert!(check_csv_schema(bad, CsvSchema::Levels).is_err());
        assert!(check_csv_schema("a,b\n1,2\n", CsvSchema::Samples).is_err());
    }

    #[test]
    fn parse_errors_exit_with_two() {
        assert_eq!(run(["ptcal", "spectrum", "--model", "nope", "--g", "0"]), 2);
        assert_eq!(
            run(["ptcal", "spectrum", "--model", "a2", "--g", "-3", "--e-max", "5"]),
            2
        );
        assert_eq!(run(["ptcal"]), 2);
    }

    #[test]
    fn figure_text_is_deterministic_and_well_formed() {
        let a = figure_text(ModelId::Toy3, 0.0, 10.0, 41, 10, Format::Csv).unwrap();
        let b = figure_text(ModelId::Toy3, 0.0, 10.0, 41, 10, Format::Csv).unwrap();
        assert_eq!(a, b);
        assert_eq!(check_csv_schema(&a, CsvSchema::Levels).unwrap(), 410);
        assert!(a.ends_with('\n') && !a.contains('\r'));
    }
}
