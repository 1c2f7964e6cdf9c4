use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use lagsheaf::flathomology::{BarRecord, ComplexSpec, Persistence};
use lagsheaf::harness::{
    run_property_suites, verify_appendix_a, verify_clean, AppendixExample, FunctionSpec,
    HarnessError, Report, Scenario, ScenarioFile, SuiteOptions, SuiteSizes, WindowSpec,
    EXIT_INPUT, EXIT_PASS, FORMAT_VERSION,
};
use lagsheaf::maslov::{maslov_index, path_index, PathLift};
use lagsheaf::matrix::QMatrix;
use lagsheaf::rational::{Ext, HalfInt, Q};
use lagsheaf::symplinalg::{
    fiber, inertia_index, intersection_dim, LagrangianFrame, SymplecticSpace,
};

#[derive(Parser)]
#[command(name = "lagsheaf", version, about = "Exact checks of Lagrangian intersection inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Evaluate on the window [A, B) instead of the scenario's windows.
    #[arg(long, num_args = 2, value_names = ["A", "B"], global = true, allow_hyphen_values = true)]
    window: Option<Vec<String>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Check the windowed inequality for a scenario file.
    Verify { scenario: PathBuf },
    /// The degenerate plateau examples.
    AppendixA { example: String },
    /// Inertia index of three Lagrangian frames.
    Tau { frames: PathBuf },
    /// Maslov index of two path lifts.
    Maslov { path: PathBuf },
    /// Sublevel barcode of a PL function.
    Barcode { complex: PathBuf, function: PathBuf },
    /// Randomized property suites.
    Suite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run a handful of cases per suite.
        #[arg(long)]
        tiny: bool,
        /// Flip the sign of the inertia index (the suites must then fail).
        #[arg(long)]
        negate_tau: bool,
    },
}

fn read(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path)
        .map_err(|e| HarnessError::Input(format!("{}: {e}", path.display())))
}

fn parse_toml<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, HarnessError> {
    let text = read(path)?;
    let value: toml::Value =
        toml::from_str(&text).map_err(|e| HarnessError::Input(format!("{}: {e}", path.display())))?;
    match value.get("format_version").and_then(toml::Value::as_integer) {
        Some(v) if v == i64::from(FORMAT_VERSION) => {}
        other => {
            return Err(HarnessError::Input(format!(
                "{}: format_version {other:?}, expected {FORMAT_VERSION}",
                path.display()
            )))
        }
    }
    toml::from_str(&text).map_err(|e| HarnessError::Input(format!("{}: {e}", path.display())))
}

fn parse_window(w: &[String]) -> Result<WindowSpec, HarnessError> {
    let parse = |s: &str| {
        s.parse::<Ext>()
            .map_err(|e| HarnessError::Input(format!("window endpoint {s:?}: {e}")))
    };
    Ok(WindowSpec {
        a: parse(&w[0])?,
        b: parse(&w[1])?,
    })
}

fn frame(space: SymplecticSpace, rows: &[Vec<Q>]) -> Result<LagrangianFrame, HarnessError> {
    Ok(LagrangianFrame::new(space, QMatrix::from_rows(rows))?)
}

#[derive(Deserialize)]
struct FramesFile {
    n: usize,
    #[serde(with = "matrices")]
    frames: Vec<Vec<Vec<Q>>>,
}

mod matrices {
    use lagsheaf::rational::Q;
    use serde::{Deserialize, Deserializer};

    #[derive(Deserialize)]
    struct M(#[serde(with = "lagsheaf::rational::serde_q_matrix")] Vec<Vec<Q>>);

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Vec<Q>>>, D::Error> {
        Ok(Vec::<M>::deserialize(d)?.into_iter().map(|m| m.0).collect())
    }
}

#[derive(Serialize)]
struct TauOutput {
    format_version: u32,
    tau: i64,
    intersection_dims: [usize; 3],
}

fn run_tau(path: &Path) -> Result<(String, String), HarnessError> {
    let file: FramesFile = parse_toml(path)?;
    if file.frames.len() != 3 {
        return Err(HarnessError::Input("expected exactly three frames".into()));
    }
    let space = SymplecticSpace::new(file.n)?;
    let l: Vec<LagrangianFrame> = file
        .frames
        .iter()
        .map(|f| frame(space, f))
        .collect::<Result<_, _>>()?;
    let out = TauOutput {
        format_version: FORMAT_VERSION,
        tau: inertia_index(&l[0], &l[1], &l[2])?,
        intersection_dims: [
            intersection_dim(&l[0], &l[1])?,
            intersection_dim(&l[1], &l[2])?,
            intersection_dim(&l[2], &l[0])?,
        ],
    };
    let table = format!(
        "tau = {}\ndim(l1∩l2), dim(l2∩l3), dim(l3∩l1) = {:?}\n",
        out.tau, out.intersection_dims
    );
    Ok((table, serde_json::to_string_pretty(&out).expect("serializes")))
}

#[derive(Deserialize)]
struct SegmentSpec {
    #[serde(with = "lagsheaf::rational::serde_q_matrix")]
    theta: Vec<Vec<Q>>,
    #[serde(with = "lagsheaf::rational::serde_q_matrix")]
    end: Vec<Vec<Q>>,
}

#[derive(Deserialize)]
struct LiftSpec {
    #[serde(default)]
    segments: Vec<SegmentSpec>,
    #[serde(default)]
    deck: i64,
}

#[derive(Deserialize)]
struct PathFile {
    n: usize,
    lifts: Vec<LiftSpec>,
}

#[derive(Serialize)]
struct MaslovOutput {
    format_version: u32,
    mu: HalfInt,
    index_against_fiber: Vec<HalfInt>,
}

fn run_maslov(path: &Path) -> Result<(String, String), HarnessError> {
    let file: PathFile = parse_toml(path)?;
    if file.lifts.len() != 2 {
        return Err(HarnessError::Input("expected exactly two lifts".into()));
    }
    let space = SymplecticSpace::new(file.n)?;
    let lifts: Vec<PathLift> = file
        .lifts
        .iter()
        .map(|l| {
            let mut lift = PathLift::constant(space);
            for s in &l.segments {
                lift = lift.then(frame(space, &s.theta)?, frame(space, &s.end)?)?;
            }
            Ok(lift.deck(l.deck))
        })
        .collect::<Result<_, HarnessError>>()?;
    let out = MaslovOutput {
        format_version: FORMAT_VERSION,
        mu: maslov_index(&lifts[0], &lifts[1])?,
        index_against_fiber: lifts
            .iter()
            .map(|l| path_index(l, &fiber(space)))
            .collect::<Result<_, _>>()?,
    };
    let table = format!(
        "mu = {}\npath index against the fiber: {}, {}\n",
        out.mu, out.index_against_fiber[0], out.index_against_fiber[1]
    );
    Ok((table, serde_json::to_string_pretty(&out).expect("serializes")))
}

#[derive(Deserialize)]
struct ComplexFile {
    complex: ComplexSpec,
}

#[derive(Deserialize)]
struct FunctionFile {
    function: FunctionSpec,
}

#[derive(Serialize)]
struct BarcodeOutput {
    format_version: u32,
    bars: Vec<BarRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    window: Option<WindowDims>,
}

#[derive(Serialize)]
struct WindowDims {
    a: Ext,
    b: Ext,
    dims: Vec<usize>,
}

fn run_barcode(
    complex: &Path,
    function: &Path,
    window: Option<WindowSpec>,
) -> Result<(String, String), HarnessError> {
    let cf: ComplexFile = parse_toml(complex)?;
    let ff: FunctionFile = parse_toml(function)?;
    let cx = cf.complex.build()?;
    let f = ff.function.build(&cx, &cf.complex)?;
    let p = Persistence::compute(&cx, &f);
    let window = match window {
        Some(w) => Some(WindowDims {
            dims: (0..=cx.dimension().unwrap_or(0))
                .map(|k| p.window(&w.a, &w.b, k))
                .collect::<Result<_, _>>()?,
            a: w.a,
            b: w.b,
        }),
        None => None,
    };
    let out = BarcodeOutput {
        format_version: FORMAT_VERSION,
        bars: p.barcode().to_records(),
        window,
    };
    let mut table = String::new();
    for b in &out.bars {
        table.push_str(&format!("H{}  [{}, {})\n", b.degree, b.birth, b.death));
    }
    if let Some(w) = &out.window {
        table.push_str(&format!("window [{}, {}): dims {:?}\n", w.a, w.b, w.dims));
    }
    Ok((table, serde_json::to_string_pretty(&out).expect("serializes")))
}

fn report_output(report: &Report) -> (String, String) {
    (report.render_table(), report.to_json())
}

fn run(cli: &Cli) -> Result<(String, String, i32), HarnessError> {
    let window = cli.window.as_deref().map(parse_window).transpose()?;
    let with_report = |r: Report| {
        let code = r.exit_code();
        let (t, m) = report_output(&r);
        (t, m, code)
    };
    Ok(match &cli.command {
        Command::Verify { scenario } => {
            let mut file = ScenarioFile::from_toml(&read(scenario)?)?;
            if let Some(w) = window {
                file.windows = vec![w];
            }
            with_report(verify_clean(&Scenario::from_file(&file)?)?)
        }
        Command::AppendixA { example } => {
            with_report(verify_appendix_a(example.parse::<AppendixExample>()?)?)
        }
        Command::Tau { frames } => {
            let (t, m) = run_tau(frames)?;
            (t, m, EXIT_PASS)
        }
        Command::Maslov { path } => {
            let (t, m) = run_maslov(path)?;
            (t, m, EXIT_PASS)
        }
        Command::Barcode { complex, function } => {
            let (t, m) = run_barcode(complex, function, window)?;
            (t, m, EXIT_PASS)
        }
        Command::Suite {
            seed,
            tiny,
            negate_tau,
        } => with_report(run_property_suites(&SuiteOptions {
            seed: *seed,
            sizes: if *tiny {
                SuiteSizes::tiny()
            } else {
                SuiteSizes::default()
            },
            negate_tau: *negate_tau,
        })),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (table, machine, code) = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let mut text = match cli.format {
        Format::Table => table,
        Format::Machine => machine,
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(EXIT_INPUT as u8);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code as u8)
}
