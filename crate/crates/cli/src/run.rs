//! Command definitions, dispatch and the exit-code contract.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use floer_core::complex::{build_pearly_with, BuildOptions, ChainComplex, ComplexError, GeneratorKind, Names};
use floer_core::continuation::{continuation_track_with, ContinuationError};
use floer_core::curve::CurveError;
use floer_core::geometry::{reach_estimate, self_intersections};
use floer_core::morse::critical_points;
use floer_core::oracle::DEFAULT_MAX_W;
use floer_core::pipeline::{compare_at, hamiltonian_at, oracle_check, PipelineError};
use floer_core::point::{fmt_rational, int, parse_rational};
use floer_core::pushoff::{c2_scaling, transversality_window, PushoffConfig, PushoffError};
use floer_core::{parse_curve_file, CurveFile, MorseFunction, Rational};
use thiserror::Error;

use crate::report::{comparison_dot, complex_dot, ComplexReport, Report, WindowReport};
use crate::svg::{render_svg, Scene};

pub const OUT_DIR_ENV: &str = "FLOER_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "floer", version, about = "Pearly and Hamiltonian Floer complexes of immersed plane curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write here instead of stdout (or the directory named by FLOER_OUT_DIR).
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for the per-pair disc search.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
    Svg,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Text => "txt",
            Format::Json => "json",
            Format::Dot => "dot",
            Format::Svg => "svg",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MorseMode {
    /// The file's `morse` line, or neg-height if it has none.
    File,
    Height,
    NegHeight,
}

#[derive(Debug, Args)]
pub struct Input {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = MorseMode::File)]
    pub morse: MorseMode,
}

#[derive(Debug, Args)]
pub struct Epsilon {
    /// Pushoff size, e.g. `1/64`.
    #[arg(long, conflicts_with = "auto_epsilon")]
    pub epsilon: Option<String>,
    /// Use half the transversality window (the default when no epsilon is given).
    #[arg(long)]
    pub auto_epsilon: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pearly complex from critical points and double points.
    Pearly(Input),
    /// Complex of the curve and its pushoff.
    Hamiltonian {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        eps: Epsilon,
    },
    /// Build both complexes and compare them under the canonical bijection.
    Compare {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        eps: Epsilon,
    },
    /// Transversality window, reach estimate and C2 scale.
    Window {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "1")]
        eps1: String,
    },
    /// Track crossings and disc counts along a family of pushoffs.
    Continuation {
        #[command(flatten)]
        input: Input,
        /// Number of samples.
        #[arg(long = "continuation", visible_alias = "steps", default_value_t = 8)]
        steps: usize,
        /// Largest epsilon; defaults to the window.
        #[arg(long)]
        eps_hi: Option<String>,
        /// Smallest epsilon; defaults to an eighth of the window.
        #[arg(long)]
        eps_lo: Option<String>,
    },
    /// Check every disc count against the brute-force oracle.
    OracleCheck {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        eps: Epsilon,
        #[arg(long, default_value_t = DEFAULT_MAX_W)]
        max_w: i64,
    },
    /// Picture of the curve, its pushoff, the generators and the discs.
    Render {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        eps: Epsilon,
        /// Shade only discs between these generators, as `from:to`.
        #[arg(long)]
        highlight: Vec<String>,
        /// Draw the curves alone.
        #[arg(long)]
        curves_only: bool,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Genericity(String),
    #[error("{0}")]
    Window(String),
    #[error("{0}")]
    Mismatch(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Other(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Genericity(_) => 3,
            CliError::Window(_) => 4,
            CliError::Mismatch(_) => 5,
            CliError::Usage(_) => 64,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io",
            CliError::Other(_) => "internal",
            CliError::Parse(_) => "parse",
            CliError::Genericity(_) => "genericity",
            CliError::Window(_) => "window",
            CliError::Mismatch(_) => "mismatch",
            CliError::Usage(_) => "usage",
        }
    }

    /// One line for stderr: `floer: error[tag]: message`.
    pub fn line(&self) -> String {
        format!("floer: error[{}]: {}", self.tag(), self.to_string().replace('\n', " "))
    }
}

impl From<CurveError> for CliError {
    fn from(e: CurveError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<ComplexError> for CliError {
    fn from(e: ComplexError) -> Self {
        match e {
            ComplexError::Disc(_) => CliError::Other(e.to_string()),
            _ => CliError::Genericity(e.to_string()),
        }
    }
}

impl From<PushoffError> for CliError {
    fn from(e: PushoffError) -> Self {
        match e {
            PushoffError::Morse(_) | PushoffError::Geometry(_) => CliError::Genericity(e.to_string()),
            PushoffError::Curve(_) => CliError::Parse(e.to_string()),
            _ => CliError::Window(e.to_string()),
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Complex(e) => e.into(),
            PipelineError::Pushoff(e) => e.into(),
            PipelineError::Geometry(e) => CliError::Genericity(e.to_string()),
        }
    }
}

impl From<ContinuationError> for CliError {
    fn from(e: ContinuationError) -> Self {
        match e {
            ContinuationError::TooFewSteps(_) | ContinuationError::BadRange => CliError::Usage(e.to_string()),
            ContinuationError::Complex(e) => e.into(),
            ContinuationError::Pipeline(e) => e.into(),
            _ => CliError::Window(e.to_string()),
        }
    }
}

/// What a command produced: the rendered document, and a failure to report after
/// writing it (a mismatch still emits its report).
#[derive(Debug)]
pub struct Outcome {
    pub body: String,
    pub failure: Option<CliError>,
}

struct Loaded {
    file: CurveFile,
    f: MorseFunction,
    names: Names,
    name: String,
}

fn load(input: &Input) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(&input.input)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", input.input.display())))?;
    let file = parse_curve_file(&text)?;
    let f = match input.morse {
        MorseMode::File => file.morse_or_default(),
        MorseMode::Height => MorseFunction::Height,
        MorseMode::NegHeight => MorseFunction::NegHeight,
    };
    f.check(&file.curve).map_err(|e| CliError::Genericity(e.to_string()))?;
    let names = Names::from_file(&file);
    let name = file.curve.name.clone().unwrap_or_else(|| stem(&input.input));
    Ok(Loaded { file, f, names, name })
}

fn stem(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "curve".into())
}

fn parse_eps(text: &str) -> Result<Rational, CliError> {
    parse_rational(text).ok_or_else(|| CliError::Usage(format!("not a rational number: {text}")))
}

fn choose_epsilon(l: &Loaded, eps: &Epsilon) -> Result<Rational, CliError> {
    match &eps.epsilon {
        Some(text) => parse_eps(text),
        None => Ok(transversality_window(&l.file.curve, &l.f)? / int(2)),
    }
}

fn opts(cli: &Cli) -> BuildOptions {
    BuildOptions { jobs: cli.jobs.max(1) }
}

fn unsupported(cli: &Cli, command: &str) -> CliError {
    CliError::Usage(format!("format {:?} is not available for {command}", cli.format).to_lowercase())
}

fn emit(
    cli: &Cli,
    report: &Report,
    dot: impl FnOnce() -> Option<String>,
    svg: impl FnOnce() -> Option<String>,
) -> Result<String, CliError> {
    match cli.format {
        Format::Text => Ok(report.to_text()),
        Format::Json => Ok(report.to_json()),
        Format::Dot => dot().ok_or_else(|| unsupported(cli, &report.command)),
        Format::Svg => svg().ok_or_else(|| unsupported(cli, &report.command)),
    }
}

/// Discs to shade: every recorded bigon, or those between the highlighted generators.
fn bigon_regions(cx: &ChainComplex, highlight: &[String]) -> Result<Vec<Vec<floer_core::Point>>, CliError> {
    let mut wanted = Vec::new();
    for h in highlight {
        let (a, b) = h.split_once(':').ok_or_else(|| CliError::Usage(format!("highlight must be from:to, got {h}")))?;
        let x = cx.index_of(a).ok_or_else(|| CliError::Usage(format!("no generator named {a}")))?;
        let y = cx.index_of(b).ok_or_else(|| CliError::Usage(format!("no generator named {b}")))?;
        wanted.push((x, y));
    }
    Ok(cx
        .disc_log
        .iter()
        .filter(|(k, _)| wanted.is_empty() || wanted.contains(k))
        .flat_map(|(_, certs)| certs.iter())
        .filter_map(|c| match c {
            floer_core::complex::Certificate::Bigon(b) => {
                Some(b.arc_top.iter().chain(b.arc_bottom.iter()).cloned().collect())
            }
            _ => None,
        })
        .collect())
}

fn dots(cx: &ChainComplex) -> Vec<(floer_core::Point, String)> {
    let mut out: Vec<(floer_core::Point, String)> = Vec::new();
    for g in &cx.generators {
        let label = match &g.kind {
            GeneratorKind::Pair { .. } => g.label.trim_start_matches('(').trim_end_matches(')').to_string(),
            _ => g.label.clone(),
        };
        // both ordered pairs sit at one double point; draw it once
        if !out.iter().any(|(p, _)| p == g.location()) {
            out.push((g.location().clone(), label));
        }
    }
    out
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let jobs = opts(cli);
    match &cli.command {
        Command::Pearly(input) => {
            let l = load(input)?;
            let cx = build_pearly_with(&l.file.curve, &l.f, &l.names, jobs)?;
            let mut report = Report::new("pearly", &l.name);
            let cr = ComplexReport::new(&cx);
            report.pearly = Some(cr.clone());
            let body = emit(
                cli,
                &report,
                || Some(complex_dot(&cr)),
                || {
                    Some(render_svg(&Scene {
                        curves: vec![(l.file.curve.clone(), "black")],
                        dots: dots(&cx),
                        shaded: vec![],
                    }))
                },
            )?;
            Ok(Outcome { body, failure: None })
        }
        Command::Hamiltonian { input, eps } => {
            let l = load(input)?;
            let epsilon = choose_epsilon(&l, eps)?;
            let cmp = compare_at(&l.file.curve, &l.f, &PushoffConfig::new(epsilon.clone()), &l.names, jobs);
            // labels come from the pearly side when the identification goes through
            let (push, ham) = match cmp {
                Ok(c) if c.identify_error.is_none() => (c.pushoff, c.hamiltonian),
                _ => hamiltonian_at(&l.file.curve, &l.f, &PushoffConfig::new(epsilon.clone()), jobs)?,
            };
            let mut report = Report::new("hamiltonian", &l.name);
            report.epsilon = Some(fmt_rational(&epsilon));
            let cr = ComplexReport::new(&ham);
            report.hamiltonian = Some(cr.clone());
            let body = emit(
                cli,
                &report,
                || Some(complex_dot(&cr)),
                || {
                    Some(render_svg(&Scene {
                        curves: vec![(l.file.curve.clone(), "black"), (push.curve.clone(), "red")],
                        dots: dots(&ham),
                        shaded: bigon_regions(&ham, &[]).unwrap_or_default(),
                    }))
                },
            )?;
            Ok(Outcome { body, failure: None })
        }
        Command::Compare { input, eps } => {
            let l = load(input)?;
            let epsilon = choose_epsilon(&l, eps)?;
            let cmp = compare_at(&l.file.curve, &l.f, &PushoffConfig::new(epsilon.clone()), &l.names, jobs)?;
            let mut report = Report::new("compare", &l.name);
            report.epsilon = Some(fmt_rational(&epsilon));
            let (pr, hr) = (ComplexReport::new(&cmp.pearly), ComplexReport::new(&cmp.hamiltonian));
            report.pearly = Some(pr.clone());
            report.hamiltonian = Some(hr.clone());
            report.identification = Some(cmp.report.clone());
            report.identify_error = cmp.identify_error.as_ref().map(|e| e.to_string());
            let body = emit(
                cli,
                &report,
                || Some(comparison_dot(&pr, &hr, &cmp.report)),
                || {
                    Some(render_svg(&Scene {
                        curves: vec![(l.file.curve.clone(), "black"), (cmp.pushoff.curve.clone(), "red")],
                        dots: dots(&cmp.hamiltonian),
                        shaded: bigon_regions(&cmp.hamiltonian, &[]).unwrap_or_default(),
                    }))
                },
            )?;
            let failure = if let Some(e) = &cmp.identify_error {
                Some(CliError::Mismatch(format!("generators do not match: {e}")))
            } else if !cmp.report.is_identical() {
                Some(CliError::Mismatch(format!("{} boundary entries differ", cmp.report.mismatches.len())))
            } else {
                None
            };
            Ok(Outcome { body, failure })
        }
        Command::Window { input, eps1 } => {
            let l = load(input)?;
            let c = &l.file.curve;
            let delta = transversality_window(c, &l.f)?;
            let eps1 = parse_eps(eps1)?;
            let crit = critical_points(c, &l.f).map_err(|e| CliError::Genericity(e.to_string()))?;
            let sis = self_intersections(c).map_err(|e| CliError::Genericity(e.to_string()))?;
            let mut report = Report::new("window", &l.name);
            report.window = Some(WindowReport {
                delta: fmt_rational(&delta),
                reach: fmt_rational(&reach_estimate(c)),
                expected_generators: crit.len() + 2 * sis.len(),
                c2_eps1: fmt_rational(&eps1),
                c2_scale: fmt_rational(&c2_scaling(&l.f, c, &eps1)),
            });
            Ok(Outcome { body: emit(cli, &report, || None, || None)?, failure: None })
        }
        Command::Continuation { input, steps, eps_hi, eps_lo } => {
            let l = load(input)?;
            let c = &l.file.curve;
            let hi = match eps_hi {
                Some(t) => parse_eps(t)?,
                None => transversality_window(c, &l.f)?,
            };
            let lo = match eps_lo {
                Some(t) => parse_eps(t)?,
                None => &hi / int(8),
            };
            let track = continuation_track_with(c, &l.f, &hi, &lo, *steps, &l.names, jobs)?;
            let stable = track.is_stable();
            let mut report = Report::new("continuation", &l.name);
            report.continuation = Some(track);
            let body = emit(cli, &report, || None, || None)?;
            let failure = (!stable).then(|| CliError::Window("disc counts change inside the window".into()));
            Ok(Outcome { body, failure })
        }
        Command::OracleCheck { input, eps, max_w } => {
            let l = load(input)?;
            let epsilon = choose_epsilon(&l, eps)?;
            let diff = oracle_check(&l.file.curve, &l.f, &PushoffConfig::new(epsilon.clone()), *max_w, jobs)?;
            let clean = diff.is_clean();
            let mut report = Report::new("oracle-check", &l.name);
            report.epsilon = Some(fmt_rational(&epsilon));
            report.oracle = Some(diff);
            let body = emit(cli, &report, || None, || None)?;
            let failure = (!clean).then(|| CliError::Mismatch("disc engine and oracle disagree".into()));
            Ok(Outcome { body, failure })
        }
        Command::Render { input, eps, highlight, curves_only } => {
            if !matches!(cli.format, Format::Svg | Format::Text) {
                return Err(unsupported(cli, "render"));
            }
            let l = load(input)?;
            let epsilon = choose_epsilon(&l, eps)?;
            let cmp = compare_at(&l.file.curve, &l.f, &PushoffConfig::new(epsilon), &l.names, jobs)?;
            let mut scene = Scene {
                curves: vec![(l.file.curve.clone(), "black"), (cmp.pushoff.curve.clone(), "red")],
                ..Scene::default()
            };
            if !curves_only {
                scene.dots = dots(&cmp.hamiltonian);
                scene.shaded = bigon_regions(&cmp.hamiltonian, highlight)?;
            }
            Ok(Outcome { body: render_svg(&scene), failure: None })
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Pearly(_) => "pearly",
        Command::Hamiltonian { .. } => "hamiltonian",
        Command::Compare { .. } => "compare",
        Command::Window { .. } => "window",
        Command::Continuation { .. } => "continuation",
        Command::OracleCheck { .. } => "oracle-check",
        Command::Render { .. } => "render",
    }
}

fn input_of(c: &Command) -> &Path {
    match c {
        Command::Pearly(i)
        | Command::Hamiltonian { input: i, .. }
        | Command::Compare { input: i, .. }
        | Command::Window { input: i, .. }
        | Command::Continuation { input: i, .. }
        | Command::OracleCheck { input: i, .. }
        | Command::Render { input: i, .. } => &i.input,
    }
}

/// `--output`, else `$FLOER_OUT_DIR/<stem>.<command>.<ext>`, else stdout (`None`).
pub fn destination(cli: &Cli, out_dir: Option<&Path>) -> Option<PathBuf> {
    if let Some(p) = &cli.output {
        return Some(p.clone());
    }
    let ext = match cli.command {
        Command::Render { .. } => "svg",
        _ => cli.format.extension(),
    };
    out_dir.map(|d| d.join(format!("{}.{}.{ext}", stem(input_of(&cli.command)), command_name(&cli.command))))
}

/// Runs the command and writes its output; returns the process exit code.
pub fn main_with(
    args: Vec<String>,
    out_dir: Option<PathBuf>,
    stdout: &mut dyn std::io::Write,
    stderr: &mut dyn std::io::Write,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let first = e.to_string().lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            let _ = writeln!(stderr, "{}", CliError::Usage(first).line());
            return 64;
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.line());
            return e.exit_code();
        }
    };
    match destination(&cli, out_dir.as_deref()) {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                let _ = std::fs::create_dir_all(dir);
            }
            if let Err(e) = std::fs::write(&path, &outcome.body) {
                let err = CliError::Io(format!("cannot write {}: {e}", path.display()));
                let _ = writeln!(stderr, "{}", err.line());
                return err.exit_code();
            }
        }
        None => {
            let _ = stdout.write_all(outcome.body.as_bytes());
        }
    }
    match outcome.failure {
        Some(e) => {
            let _ = writeln!(stderr, "{}", e.line());
            e.exit_code()
        }
        None => 0,
    }
}
