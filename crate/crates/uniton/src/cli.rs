//! The `uniton` command line.
//!
//! Every subcommand writes one JSON document (to stdout or `--out`). Exit
//! status: 0 when everything checked passes, 1 on a verification failure
//! or a numerical method that did not converge, 2 on bad input.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{Map, Value};

use uniton_core::factor::{
    big_cell_check, bruhat_cell, cstar_flow, flow_limit, harmonic_map_at, projector_form_defect, unitarize,
    uniton_factorize, FactorError, UnitarizeOptions,
};
use uniton_core::loops::{ExactLoop, LoopError};
use uniton_core::matrix::CMat;
use uniton_core::scalar::{RatFun, Scalar};
use uniton_core::roots::{
    classical_spaces, group_max_uniton, heights_by_type, max_height_for, symmetric_space_survey, RootError, RootSystem,
    RootType,
};
use uniton_core::verify::{
    check_extended, check_superhorizontal, check_t_invariant, harmonicity_residual, square_grid, uniton_number_report,
    Evidence, VerificationReport, VerifyError,
};
use uniton_core::weierstrass::{
    build_from_free_functions, even_grassmannian_build, free_slots, validate_exponents, veronese_solution, BuildError,
    ExtendedSolutionSpec,
};

use crate::json::{self, AnyLoop, SchemaError};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Loop(#[from] LoopError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Factor(FactorError::NoConvergence { .. }) => 1,
            CliError::Verify(VerifyError::Factor(FactorError::NoConvergence { .. })) => 1,
            _ => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "uniton", version, about = "Build, unitarize and verify harmonic maps from the sphere into U(n)")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Maximal uniton numbers from root data.
    #[command(subcommand)]
    Tables(TablesCommand),
    /// Build an extended solution from free functions.
    Build(BuildArgs),
    /// Built-in solutions.
    #[command(subcommand)]
    Demo(DemoCommand),
    /// Check a solution: exact extended-solution conditions, uniton numbers,
    /// big-cell form, twist invariance, and harmonicity on a grid.
    Verify(VerifyArgs),
    /// Evaluate the harmonic map at one point.
    Map(PointArgs),
    /// Follow the C*-flow of a solution at one point.
    Flow(FlowArgs),
    /// Factor a full-flag solution into projection loops at one point.
    Factor(PointArgs),
    /// Identify the Bruhat cell of an exact loop or solution.
    Cell(InputArgs),
    /// Compute the Weierstrass data V with Φ⁻¹Φ_z = V/λ.
    BigCell(InputArgs),
}

#[derive(Subcommand, Debug)]
enum TablesCommand {
    /// r(G) for the compact simple groups.
    Groups {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// r(N) for the inner symmetric spaces of one group.
    Symmetric {
        /// Type letter A–G.
        #[arg(long = "type")]
        kind: String,
        #[arg(long)]
        rank: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum DemoCommand {
    /// The rational normal curve frame in U(n).
    Veronese {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args, Debug)]
struct BuildArgs {
    /// Non-increasing exponents ending in 0, e.g. 3,2,1,0.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    exponents: Vec<i32>,
    /// Matrix size; must match the number of exponents.
    #[arg(long)]
    n: Option<usize>,
    /// JSON object mapping free slot names to rational functions.
    #[arg(long)]
    free: Option<PathBuf>,
    /// Grassmannian build: free data at even powers of λ only.
    #[arg(long)]
    even: bool,
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Input file, or - for stdin.
    input: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Solution file, or - for stdin.
    input: PathBuf,
    /// Grid points per side.
    #[arg(long, default_value_t = 5)]
    grid: usize,
    /// Half-width of the square grid centred at 0.
    #[arg(long, default_value_t = 0.7)]
    half: f64,
    /// Finite-difference step.
    #[arg(long, default_value_t = 1e-3)]
    h: f64,
    /// Largest accepted harmonicity residual.
    #[arg(long, default_value_t = 1e-5)]
    tol: f64,
}

#[derive(Args, Debug)]
struct PointArgs {
    /// Solution or exact loop file, or - for stdin.
    input: PathBuf,
    /// The point z as RE,IM.
    #[arg(long, value_parser = parse_z, allow_hyphen_values = true)]
    z: Complex64,
}

#[derive(Args, Debug)]
struct FlowArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Flow times, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    t: Vec<f64>,
}

fn parse_z(s: &str) -> Result<Complex64, String> {
    let parse = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("\"{p}\": {e}"));
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(parse(re)?, parse(im)?)),
        None => Ok(Complex64::new(parse(s)?, 0.0)),
    }
}

/// Result of one subcommand.
pub struct Output {
    pub value: Value,
    /// Human-readable rendering, when one was requested.
    pub text: Option<String>,
    pub pass: bool,
}

impl Output {
    fn data(value: Value) -> Self {
        Output { value, text: None, pass: true }
    }
}

fn read_input(path: &Path) -> Result<Value, CliError> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|source| CliError::Io { path: "<stdin>".into(), source })?;
        s
    } else {
        fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?
    };
    Ok(json::from_text(&text)?)
}

enum Input {
    Spec(ExtendedSolutionSpec),
    Loop(AnyLoop),
}

/// Loops are recognized by their `coeffs` key, anything else is a spec.
fn read_any(path: &Path) -> Result<Input, CliError> {
    let v = read_input(path)?;
    if v.get("coeffs").is_some() {
        Ok(Input::Loop(json::parse_loop(&v, "$")?))
    } else {
        Ok(Input::Spec(json::parse_spec(&v, "$")?))
    }
}

fn read_spec(path: &Path) -> Result<ExtendedSolutionSpec, CliError> {
    json::parse_spec(&read_input(path)?, "$").map_err(CliError::from)
}

fn exact_loop_of(input: Input) -> Result<ExactLoop, CliError> {
    match input {
        Input::Spec(s) => Ok(s.assemble_loop()),
        Input::Loop(AnyLoop::Exact(l)) => Ok(l),
        Input::Loop(AnyLoop::Numeric(_)) => Err(CliError::Usage("this command needs an exact loop".into())),
    }
}

fn object(entries: impl IntoIterator<Item = (&'static str, Value)>) -> Value {
    Value::Object(entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}

const GROUP_ROWS: [(&str, RootType, &[usize], &str); 9] = [
    ("SU(n)", RootType::A, &[1, 2, 3, 4, 5, 6, 7], "n-1"),
    ("SO(2n+1)", RootType::B, &[2, 3, 4, 5, 6, 7, 8], "2n-1"),
    ("Sp(n)", RootType::C, &[2, 3, 4, 5, 6, 7, 8], "2n-1"),
    ("SO(2n)", RootType::D, &[4, 5, 6, 7, 8], "2n-3"),
    ("G2", RootType::G, &[2], "5"),
    ("F4", RootType::F, &[4], "11"),
    ("E6", RootType::E, &[6], "11"),
    ("E7", RootType::E, &[7], "17"),
    ("E8", RootType::E, &[8], "29"),
];

/// The closed form for `r(G)` in terms of the family parameter `n`.
fn group_formula(kind: RootType, rank: usize) -> u32 {
    let r = rank as u32;
    match kind {
        RootType::A => r,
        RootType::B | RootType::C => 2 * r - 1,
        RootType::D => 2 * r - 3,
        RootType::G => 5,
        RootType::F => 11,
        RootType::E => [11, 17, 29][rank - 6],
    }
}

fn family_parameter(kind: RootType, rank: usize) -> usize {
    if kind == RootType::A {
        rank + 1
    } else {
        rank
    }
}

fn tables_groups(format: Format) -> Result<Output, CliError> {
    let mut rows = Vec::new();
    let mut text = format!("{:<10} {:<8} {}\n", "group", "formula", "r(G) at n = …");
    let mut pass = true;
    for (name, kind, ranks, formula) in GROUP_ROWS {
        let mut values = Vec::new();
        let mut cells = Vec::new();
        for &rank in ranks {
            let r = group_max_uniton(&RootSystem::new(kind, rank)?);
            let expected = group_formula(kind, rank);
            pass &= r == expected;
            let n = family_parameter(kind, rank);
            values.push(object([("n", Value::from(n)), ("r", Value::from(r)), ("expected", Value::from(expected))]));
            cells.push(if ranks.len() > 1 { format!("{n}:{r}") } else { r.to_string() });
        }
        text.push_str(&format!("{:<10} {:<8} {}\n", name, formula, cells.join(" ")));
        rows.push(object([("group", Value::from(name)), ("formula", Value::from(formula)), ("values", Value::Array(values))]));
    }
    let value = object([("pass", Value::from(pass)), ("rows", Value::Array(rows))]);
    Ok(Output { value, text: (format == Format::Text).then_some(text), pass })
}

fn tables_symmetric(kind: &str, rank: usize, format: Format) -> Result<Output, CliError> {
    let kind: RootType = kind.parse()?;
    let rs = RootSystem::new(kind, rank)?;
    let survey = symmetric_space_survey(&rs)?;
    let mut pass = true;
    let mut spaces = Vec::new();
    let mut text = format!("{}\n{:<24} {:<14} {:>8} {:>8}\n", rs.name(), "space", "K", "expected", "observed");
    for space in classical_spaces(kind, rank) {
        let observed = max_height_for(&survey, &space.k_type);
        let ok = observed == Some(space.expected);
        pass &= ok;
        let shown = observed.map_or_else(|| "-".to_string(), |r| r.to_string());
        text.push_str(&format!("{:<24} {:<14} {:>8} {:>8}\n", space.name, space.k_type.to_string(), space.expected, shown));
        spaces.push(object([
            ("name", Value::from(space.name)),
            ("k_type", Value::from(space.k_type.to_string())),
            ("expected", Value::from(space.expected)),
            ("observed", observed.map_or(Value::Null, Value::from)),
            ("pass", Value::from(ok)),
        ]));
    }
    let by_type = heights_by_type(&survey)
        .into_iter()
        .map(|(k, r)| object([("k_type", Value::from(k.to_string())), ("r", Value::from(r))]))
        .collect();
    let entries = survey
        .iter()
        .map(|e| {
            object([
                ("marks", Value::from(e.xi.marks.clone())),
                ("k_type", Value::from(e.k_type.to_string())),
                ("height", Value::from(e.height)),
            ])
        })
        .collect();
    let value = object([
        ("group", Value::from(rs.name())),
        ("pass", Value::from(pass)),
        ("spaces", Value::Array(spaces)),
        ("heights_by_type", Value::Array(by_type)),
        ("survey", Value::Array(entries)),
    ]);
    Ok(Output { value, text: (format == Format::Text).then_some(text), pass })
}

fn build(args: &BuildArgs) -> Result<Output, CliError> {
    if let Some(n) = args.n {
        if n != args.exponents.len() {
            return Err(CliError::Usage(format!("--n {n} but {} exponents given", args.exponents.len())));
        }
    }
    let free = match &args.free {
        Some(path) => json::parse_slot_map(&read_input(path)?, &args.exponents, "$")?,
        None => {
            validate_exponents(&args.exponents)?;
            free_slots(&args.exponents, args.even).into_iter().map(|s| (s, RatFun::zero())).collect()
        }
    };
    let spec = if args.even {
        even_grassmannian_build(&args.exponents, &free)?
    } else {
        build_from_free_functions(&args.exponents, &free)?
    };
    Ok(Output::data(json::spec(&spec)))
}

/// Grid points where the map and its stencil neighbours evaluate.
fn map_sampler(l: &ExactLoop, opts: UnitarizeOptions) -> impl FnMut(Complex64) -> Result<CMat, FactorError> + '_ {
    move |z| harmonic_map_at(l, z, &opts)
}

fn verify(args: &VerifyArgs) -> Result<Output, CliError> {
    if args.grid == 0 || !(args.h > 0.0) || !(args.tol > 0.0) {
        return Err(CliError::Usage("--grid, --h and --tol must be positive".into()));
    }
    let spec = read_spec(&args.input)?;
    let mut report = VerificationReport::new(format!("verify, exponents {:?}", spec.exponents()));
    report.extend(check_extended(&spec));
    report.extend(uniton_number_report(&spec)?.report());
    match big_cell_check(&spec) {
        Ok(_) => report.push("Weierstrass data at λ^-1 only", true, Evidence::ExactZero),
        Err(FactorError::NotInBigCellForm { power }) => {
            report.push("Weierstrass data at λ^-1 only", false, Evidence::Witness(format!("term at λ^{power}")))
        }
        Err(e) => return Err(e.into()),
    }
    if spec.is_s1_invariant() {
        report.extend(check_superhorizontal(&spec)?);
    }
    if spec.even_only() {
        report.extend(check_t_invariant(&spec.based_loop()));
    }

    let l = spec.assemble_loop();
    let opts = UnitarizeOptions::precise();
    let mut worst_harmonic = 0.0f64;
    let mut worst_unitary = 0.0f64;
    let mut worst_square = 0.0f64;
    let mut skipped = 0usize;
    for z in square_grid(args.grid, args.half) {
        let mut sampler = map_sampler(&l, opts);
        let phi = match sampler(z) {
            Ok(phi) => phi,
            Err(FactorError::Loop(LoopError::PoleAtZ)) | Err(FactorError::SingularOnCircle) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        match harmonicity_residual(&mut sampler, &[z], args.h) {
            Ok(r) => worst_harmonic = worst_harmonic.max(r),
            Err(FactorError::Loop(LoopError::PoleAtZ)) | Err(FactorError::SingularOnCircle) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e.into()),
        }
        worst_unitary = worst_unitary.max(phi.unitarity_defect());
        if spec.even_only() {
            worst_square = worst_square.max((&(&phi * &phi) - &CMat::identity(spec.n())).frobenius());
        }
    }
    let points = args.grid * args.grid - skipped;
    if points == 0 {
        return Err(CliError::Usage("no grid point could be evaluated".into()));
    }
    report.push(format!("phi unitary on {points} grid points"), worst_unitary <= 1e-8, Evidence::Residual(worst_unitary));
    report.push(
        format!("harmonicity residual <= {:e} at h = {:e} on {points} grid points", args.tol, args.h),
        worst_harmonic <= args.tol,
        Evidence::Residual(worst_harmonic),
    );
    if spec.even_only() {
        report.push("phi^2 = I on the grid", worst_square <= 1e-8, Evidence::Residual(worst_square));
    }
    let pass = report.passed();
    Ok(Output { value: json::report(&report), text: None, pass })
}

fn map(args: &PointArgs) -> Result<Output, CliError> {
    let l = exact_loop_of(read_any(&args.input)?)?;
    let psi = l.eval_z(Some(args.z))?;
    let split = unitarize(&psi, &UnitarizeOptions::precise())?;
    let phi = split.unitary_part.eval_at(&Complex64::new(-1.0, 0.0))?;
    Ok(Output::data(object([
        ("z", json::complex(args.z)),
        ("phi", json::cmat(&phi)),
        ("phi_unitarity", json::float(phi.unitarity_defect())),
        ("residual_unitarity", json::float(split.residual_unitarity)),
        ("residual_split", json::float(split.residual_split)),
        ("order", Value::from(split.order)),
    ])))
}

fn flow(args: &FlowArgs) -> Result<Output, CliError> {
    let input = read_any(&args.point.input)?;
    let z = args.point.z;
    let opts = UnitarizeOptions::default();
    let (l, limit) = match input {
        Input::Spec(spec) => {
            let limit_spec = flow_limit(&spec);
            let limit = unitarize(&limit_spec.assemble_loop().eval_z(Some(z))?, &opts)?.unitary_part;
            (spec.assemble_loop(), Some((limit_spec, limit)))
        }
        other => (exact_loop_of(other)?, None),
    };
    let mut steps = Vec::new();
    for &t in &args.t {
        if !(t >= 0.0) {
            return Err(CliError::Usage(format!("flow time {t} must be non-negative")));
        }
        let phi = cstar_flow(&l, t, z, &opts)?;
        let mut entry = vec![("t", json::float(t)), ("energy", json::float(phi.energy()))];
        if let Some((_, lim)) = &limit {
            entry.push(("distance_to_limit", json::float(phi.dist(lim))));
        }
        steps.push(object(entry));
    }
    let mut out = vec![("z", json::complex(z)), ("steps", Value::Array(steps))];
    let mut pass = true;
    if let Some((spec, lim)) = limit {
        let report = check_superhorizontal(&spec)?;
        pass = report.passed();
        out.push(("limit", json::spec(&spec)));
        out.push(("limit_energy", json::float(lim.energy())));
        out.push(("limit_report", json::report(&report)));
    }
    Ok(Output { value: object(out), text: None, pass })
}

fn factor(args: &PointArgs) -> Result<Output, CliError> {
    let spec = read_spec(&args.input)?;
    let opts = UnitarizeOptions::default();
    let factors = uniton_factorize(&spec, args.z, &opts)?;
    let direct = unitarize(&spec.assemble_loop().eval_z(Some(args.z))?, &opts)?.unitary_part;
    let mut product = uniton_core::loops::LoopMat::identity(spec.n());
    let mut worst = 0.0f64;
    let mut listed = Vec::new();
    for f in &factors {
        product = product.multiply(f)?;
        let defect = projector_form_defect(f);
        worst = worst.max(defect);
        listed.push(object([("loop", json::numeric_loop(f)), ("projector_defect", json::float(defect))]));
    }
    let reassembly = product.dist(&direct);
    let pass = worst <= 1e-8 && reassembly <= 1e-8;
    Ok(Output {
        value: object([
            ("z", json::complex(args.z)),
            ("factors", Value::Array(listed)),
            ("reassembly_residual", json::float(reassembly)),
            ("pass", Value::from(pass)),
        ]),
        text: None,
        pass,
    })
}

fn cell(args: &InputArgs) -> Result<Output, CliError> {
    let l = exact_loop_of(read_any(&args.input)?)?;
    let cell = bruhat_cell(&l)?;
    Ok(Output::data(object([("exponents", Value::from(cell.exponents))])))
}

fn big_cell(args: &InputArgs) -> Result<Output, CliError> {
    let spec = read_spec(&args.input)?;
    match big_cell_check(&spec) {
        Ok(data) => Ok(Output::data(object([("pass", Value::from(true)), ("v", json::exact_matrix(&data.v))]))),
        Err(FactorError::NotInBigCellForm { power }) => Ok(Output {
            value: object([("pass", Value::from(false)), ("power", Value::from(power))]),
            text: None,
            pass: false,
        }),
        Err(e) => Err(e.into()),
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Tables(TablesCommand::Groups { format }) => tables_groups(*format),
        Command::Tables(TablesCommand::Symmetric { kind, rank, format }) => tables_symmetric(kind, *rank, *format),
        Command::Build(args) => build(args),
        Command::Demo(DemoCommand::Veronese { n }) => {
            if *n < 2 {
                return Err(CliError::Usage("--n must be at least 2".into()));
            }
            Ok(Output::data(json::spec(&veronese_solution(*n)?)))
        }
        Command::Verify(args) => verify(args),
        Command::Map(args) => map(args),
        Command::Flow(args) => flow(args),
        Command::Factor(args) => factor(args),
        Command::Cell(args) => cell(args),
        Command::BigCell(args) => big_cell(args),
    }
}

fn emit(cli: &Cli, output: &Output) -> Result<(), CliError> {
    let body = output.text.clone().unwrap_or_else(|| json::to_text(&output.value));
    match &cli.out {
        Some(path) => fs::write(path, body).map_err(|source| CliError::Io { path: path.display().to_string(), source }),
        None => io::stdout().write_all(body.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

/// Parses `args`, runs the command and returns the exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = run(&cli).and_then(|output| emit(&cli, &output).map(|()| output.pass));
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<Output, CliError> {
        let cli = Cli::try_parse_from(std::iter::once("uniton").chain(args.iter().copied())).unwrap();
        run(&cli)
    }

    #[test]
    fn parses_points() {
        assert_eq!(parse_z("0.5,-1").unwrap(), Complex64::new(0.5, -1.0));
        assert_eq!(parse_z("2").unwrap(), Complex64::new(2.0, 0.0));
        assert!(parse_z("a,b").is_err());
    }

    #[test]
    fn group_table_passes() {
        let out = run_args(&["tables", "groups"]).unwrap();
        assert!(out.pass);
        assert_eq!(out.value["rows"].as_array().unwrap().len(), 9);
        let text = run_args(&["tables", "groups", "--format", "text"]).unwrap().text.unwrap();
        assert!(text.contains("E8") && text.contains("29"));
    }

    #[test]
    fn symmetric_table_for_su4() {
        let out = run_args(&["tables", "symmetric", "--type", "A", "--rank", "3"]).unwrap();
        assert!(out.pass);
        assert_eq!(out.value["survey"].as_array().unwrap().len(), 8);
        assert!(matches!(run_args(&["tables", "symmetric", "--type", "Q", "--rank", "3"]), Err(CliError::Root(_))));
    }

    #[test]
    fn demo_and_bad_sizes() {
        assert!(run_args(&["demo", "veronese", "--n", "3"]).unwrap().pass);
        let err = run_args(&["build", "--exponents", "1,0", "--n", "3"]).err().unwrap();
        assert_eq!(err.exit_code(), 2);
        let err = run_args(&["build", "--exponents", "0,1"]).err().unwrap();
        assert!(matches!(err, CliError::Build(BuildError::InvalidExponents(_))));
    }
}
