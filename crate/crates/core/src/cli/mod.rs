//! The `eca` command-line front end.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage or domain error,
//! 3 runtime or I/O error.

mod output;
pub mod reproduce;

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::continuum::{self, Boundary, PdeGrid};
use crate::error::EcaError;
use crate::evolution::{self, View};
use crate::rule22;
use crate::rule_algebra::{self, RuleSpec};
use crate::statistics::{self, CountView, Sampling};
use crate::VERSION;

use output::{fmt_f64, Format, Sink};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_260_322;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "eca",
    version,
    about = "Elementary cellular automata: algebra, closed forms, statistics, continuum numerics"
)]
pub struct Cli {
    /// Emit JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Emit CSV.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Write output to this file (a directory for `reproduce`).
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Master seed for stochastic runs.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads for the statistics commands.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rule classification.
    #[command(subcommand)]
    Rule(RuleCommand),
    /// Single-seed evolution.
    Evolve {
        code: i64,
        #[arg(long)]
        steps: usize,
        /// Also write a P4 bitmap.
        #[arg(long, value_name = "FILE")]
        pbm: Option<PathBuf>,
    },
    /// Support sets per generation.
    Support {
        code: i64,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value = "right")]
        view: View,
    },
    /// Rule 22 cardinality formula.
    Card22 {
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        /// Print the right-half count as well.
        #[arg(long)]
        both: bool,
    },
    /// Rule 22 right-half support by recursion.
    Support22 {
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
    },
    /// Rule 22 generating polynomial.
    Poly22(Poly22Args),
    /// Cross-check rule 22 closed forms against simulation.
    Verify {
        #[arg(long, default_value_t = 64)]
        max_m: u64,
    },
    /// Rule 30 minus rule 22 active-cell counts.
    Deviate {
        #[arg(long, default_value_t = 128)]
        max_m: u64,
        /// Fit a power law to the positive deviations.
        #[arg(long)]
        fit: bool,
        #[arg(long, value_enum, default_value = "total")]
        view: CountView,
    },
    /// Boolean sensitivity profile of eta_t(0).
    Sensitivity(StatArgs),
    /// Frequency of eta_t(0) = 1 from random windows.
    Equidist(StatArgs),
    /// Mutual information between eta_t(-1) and (eta_t(0), eta_t(1)).
    Mi(StatArgs),
    /// Block entropy and complexity of the centre column.
    Entropy {
        code: i64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 8)]
        max_n: usize,
    },
    /// RK4 integration of u' = 2u + u^3.
    Ode {
        #[arg(long)]
        u0: f64,
        #[arg(long)]
        m_end: f64,
        #[arg(long)]
        dt: f64,
        /// Add a column with the exact solution.
        #[arg(long)]
        closed_form: bool,
        /// Print every k-th step.
        #[arg(long, default_value_t = 1)]
        every: usize,
    },
    /// RK4 integration of u'' + 2u + u^3 = 0.
    Duffing {
        #[arg(long, allow_negative_numbers = true)]
        u0: f64,
        #[arg(long, allow_negative_numbers = true)]
        v0: f64,
        #[arg(long)]
        m_end: f64,
        #[arg(long)]
        dt: f64,
        #[arg(long, default_value_t = 1)]
        every: usize,
    },
    /// Explicit solver for u_m = u_xx + 2u + u^3.
    Pde(PdeArgs),
    /// Centre column against diagonal support membership.
    DiagIdentity {
        #[arg(long, default_value_t = 64)]
        max_t: u64,
        /// Rules to scan.
        #[arg(long = "rule", default_values_t = [22i64, 30])]
        rules: Vec<i64>,
    },
    /// Regenerate every figure and table data file into `--out DIR`.
    Reproduce,
}

#[derive(Debug, Subcommand)]
pub enum RuleCommand {
    /// Classification of one rule.
    Info { code: i64 },
    /// All 256 rules with summary counts.
    Census,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Poly22Args {
    #[arg(long, allow_negative_numbers = true)]
    m: Option<i64>,
    /// Product form for generation 2^N - 1.
    #[arg(long, value_name = "N")]
    mersenne: Option<u32>,
}

#[derive(Debug, Args)]
pub struct StatArgs {
    code: i64,
    #[arg(long)]
    t: usize,
    /// Number of random windows [default: 5000 for sensitivity, 100000 otherwise].
    #[arg(long)]
    trials: Option<u64>,
    /// Enumerate every initial window instead of sampling.
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Debug, Args)]
pub struct PdeArgs {
    #[arg(long)]
    dx: f64,
    #[arg(long)]
    dt: f64,
    #[arg(long)]
    m_end: f64,
    /// `const:U` or `bump:A,W`.
    #[arg(long)]
    init: InitSpec,
    #[arg(long, default_value_t = 101)]
    points: usize,
    #[arg(long, value_enum, default_value = "periodic")]
    boundary: Boundary,
    /// Add the rule-30 transport term -3(u+1) u_x.
    #[arg(long)]
    advect: bool,
    /// Skip the dt <= dx^2/2 check.
    #[arg(long)]
    allow_unstable: bool,
    /// Number of output rows after the initial one.
    #[arg(long, default_value_t = 10)]
    snapshots: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitSpec {
    Const(f64),
    Bump { amplitude: f64, width: f64 },
}

impl FromStr for InitSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("expected const:U or bump:A,W, got {s:?}");
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "const" => rest.parse().map(InitSpec::Const).map_err(|_| bad()),
            "bump" => {
                let (a, w) = rest.split_once(',').ok_or_else(bad)?;
                let amplitude = a.parse().map_err(|_| bad())?;
                let width: f64 = w.parse().map_err(|_| bad())?;
                if !(width > 0.0) {
                    return Err(bad());
                }
                Ok(InitSpec::Bump { amplitude, width })
            }
            _ => Err(bad()),
        }
    }
}

/// Failure of a subcommand, mapped onto an exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Mismatch(String),
    Runtime(String),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Mismatch(_) => EXIT_MISMATCH,
            Failure::Runtime(_) => EXIT_RUNTIME,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Mismatch(m) | Failure::Runtime(m) => m,
        }
    }
}

impl From<EcaError> for Failure {
    fn from(e: EcaError) -> Self {
        match e {
            EcaError::Domain(_) | EcaError::Parameter(_) | EcaError::InsufficientData(_) => {
                Failure::Usage(e.to_string())
            }
            EcaError::BlowUp { .. } => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(format!("I/O error: {e}"))
    }
}

type CmdResult = Result<(), Failure>;

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = stdout.write_all(rendered.as_bytes());
            } else {
                let _ = stderr.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let result = match cli.threads {
        Some(0) => Err(Failure::Usage("--threads must be >= 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => {
                // Writers need not be Send, so the pool writes into buffers.
                let (mut o, mut e) = (Vec::new(), Vec::new());
                let r = pool.install(|| execute(&cli, &mut o, &mut e));
                let _ = stdout.write_all(&o);
                let _ = stderr.write_all(&e);
                r
            }
            Err(e) => Err(Failure::Runtime(format!("cannot start thread pool: {e}"))),
        },
        None => execute(&cli, stdout, stderr),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "eca: {}", f.message());
            f.exit_code()
        }
    }
}

fn rule_arg(code: i64) -> Result<RuleSpec, Failure> {
    Ok(rule_algebra::classify(code)?)
}

fn generation_arg(m: i64) -> Result<u64, Failure> {
    u64::try_from(m)
        .ok()
        .filter(|&m| m >= 1)
        .ok_or_else(|| Failure::Usage(format!("domain error: generation m = {m} must be >= 1")))
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let format = Format::select(cli.json, cli.csv)?;
    if let Command::Reproduce = cli.command {
        let dir = cli
            .out
            .clone()
            .ok_or_else(|| Failure::Usage("reproduce needs --out DIR".into()))?;
        format.require(&[Format::Human], "reproduce")?;
        let manifest = reproduce::reproduce(&dir, cli.seed)?;
        writeln!(
            stdout,
            "wrote {} files to {}",
            manifest.files.len(),
            dir.display()
        )?;
        return if manifest.verification_passed {
            Ok(())
        } else {
            Err(Failure::Mismatch(
                "closed-form verification reported mismatches".into(),
            ))
        };
    }
    let mut sink = Sink::new(cli.out.as_deref(), stdout)?;
    dispatch(cli, format, &mut sink, stderr)?;
    sink.finish()?;
    Ok(())
}

fn dispatch(cli: &Cli, format: Format, out: &mut Sink<'_>, stderr: &mut dyn Write) -> CmdResult {
    let seed = cli.seed;
    match &cli.command {
        Command::Rule(RuleCommand::Info { code }) => {
            format.require(&[Format::Human, Format::Json], "rule info")?;
            let r = rule_arg(*code)?;
            if format == Format::Json {
                let mut v = rule_json(&r);
                v["version"] = Value::String(VERSION.into());
                out.json(&v)
            } else {
                let f = r.flags;
                out.line(format!("code: {}", r.code))?;
                out.line(format!("binary: {}", r.binary()))?;
                out.line("truth table (abc -> g):")?;
                for k in (0..8u8).rev() {
                    out.line(format!("  {:03b} -> {}", k, (r.truth_table >> k) & 1))?;
                }
                out.line(format!("anf: {}", r.anf))?;
                out.line(format!("s3_symmetric: {}", f.s3_symmetric))?;
                out.line(format!("left_permutive: {}", f.left_permutive))?;
                out.line(format!("right_permutive: {}", f.right_permutive))?;
                out.line(format!("center_permutive: {}", f.center_permutive))?;
                out.line(format!("linear: {}", f.linear))
            }
        }
        Command::Rule(RuleCommand::Census) => {
            let census = rule_algebra::census();
            match format {
                Format::Json => out.json(&json!({
                    "version": VERSION,
                    "rules": census.rules.iter().map(rule_json).collect::<Vec<_>>(),
                    "summary": census.summary,
                })),
                Format::Csv => {
                    out.line("code,anf,s3_symmetric,left_permutive,right_permutive,center_permutive,linear")?;
                    for r in &census.rules {
                        let f = r.flags;
                        out.line(format!(
                            "{},{},{},{},{},{},{}",
                            r.code,
                            r.anf,
                            f.s3_symmetric,
                            f.left_permutive,
                            f.right_permutive,
                            f.center_permutive,
                            f.linear
                        ))?;
                    }
                    Ok(())
                }
                Format::Human => {
                    out.line(format!(
                        "{:>4}  {:<38} {:>4} {:>4} {:>4} {:>4} {:>4}",
                        "code", "anf", "sym", "L", "R", "C", "lin"
                    ))?;
                    let mark = |b: bool| if b { "x" } else { "." };
                    for r in &census.rules {
                        let f = r.flags;
                        out.line(format!(
                            "{:>4}  {:<38} {:>4} {:>4} {:>4} {:>4} {:>4}",
                            r.code,
                            r.anf.to_string(),
                            mark(f.s3_symmetric),
                            mark(f.left_permutive),
                            mark(f.right_permutive),
                            mark(f.center_permutive),
                            mark(f.linear)
                        ))?;
                    }
                    let s = census.summary;
                    out.line(format!(
                        "total {}  s3_symmetric {}  s3_symmetric_nonlinear {}  linear {}  left_permutive {}  right_permutive {}  center_permutive {}",
                        s.total, s.s3_symmetric, s.s3_symmetric_nonlinear, s.linear, s.left_permutive, s.right_permutive, s.center_permutive
                    ))
                }
            }
        }
        Command::Evolve { code, steps, pbm } => {
            format.require(&[Format::Human, Format::Csv], "evolve")?;
            let rule = rule_arg(*code)?;
            let rows = evolution::evolve_single_seed(&rule, *steps);
            if let Some(path) = pbm {
                evolution::render_pbm(&rows, path)?;
            }
            if format == Format::Csv {
                out.line("m,position")?;
                for row in &rows {
                    for p in row.active_positions() {
                        out.line(format!("{},{}", row.generation(), p))?;
                    }
                }
                Ok(())
            } else {
                out.text(&evolution::render_ascii(&rows))
            }
        }
        Command::Support { code, steps, view } => {
            format.require(&[Format::Human, Format::Json], "support")?;
            let rule = rule_arg(*code)?;
            let rows: Vec<Value> = evolution::SeedEvolution::new(rule)
                .take(steps + 1)
                .map(|row| {
                    let s = evolution::support(&row, *view);
                    json!({ "m": row.generation(), "cardinality": s.len(), "positions": s.positions })
                })
                .collect();
            if format == Format::Json {
                out.json(&json!({ "version": VERSION, "rule": rule.code, "view": view, "generations": rows }))
            } else {
                for r in &rows {
                    out.line(format!(
                        "m={} |S|={} {}",
                        r["m"], r["cardinality"], r["positions"]
                    ))?;
                }
                Ok(())
            }
        }
        Command::Card22 { m, both } => {
            format.require(&[Format::Human, Format::Json], "card22")?;
            let m = generation_arg(*m)?;
            let total = rule22::cardinality22(m)?;
            let right = rule22::right_half_count22(m)?;
            if format == Format::Json {
                let mut v = json!({ "version": VERSION, "m": m, "total": total.to_string() });
                if *both {
                    v["right_half"] = Value::String(right.to_string());
                }
                out.json(&v)
            } else if *both {
                out.line(format!("total {total}"))?;
                out.line(format!("right_half {right}"))
            } else {
                out.line(total.to_string())
            }
        }
        Command::Support22 { m } => {
            format.require(&[Format::Human, Format::Json], "support22")?;
            let m = generation_arg(*m)?;
            let s = rule22::support22(m)?;
            if format == Format::Json {
                out.json(&json!({ "version": VERSION, "m": m, "cardinality": s.len(), "positions": s.positions }))
            } else {
                let list: Vec<String> = s.positions.iter().map(i64::to_string).collect();
                out.line(format!("{{{}}}", list.join(", ")))
            }
        }
        Command::Poly22(args) => {
            format.require(&[Format::Human, Format::Json], "poly22")?;
            let (label, poly) = match (args.m, args.mersenne) {
                (Some(m), _) => {
                    let m = generation_arg(m)?;
                    (json!({ "m": m }), rule22::poly22(m)?)
                }
                (None, Some(n)) => (json!({ "mersenne": n }), rule22::mersenne_poly(n)?),
                (None, None) => {
                    return Err(Failure::Usage("poly22 needs --m or --mersenne".into()))
                }
            };
            if format == Format::Json {
                let mut v = json!({
                    "version": VERSION,
                    "exponents": poly.exponents(),
                    "degree": poly.degree(),
                    "terms": poly.term_count(),
                });
                for (k, val) in label.as_object().into_iter().flatten() {
                    v[k] = val.clone();
                }
                out.json(&v)
            } else {
                out.line(poly.to_string())
            }
        }
        Command::Verify { max_m } => {
            format.require(&[Format::Human, Format::Json], "verify")?;
            let report = rule22::verify_closed_forms(*max_m);
            if format == Format::Json {
                out.json(
                    &json!({ "version": VERSION, "passed": report.passed(), "report": report }),
                )?;
            } else {
                for mm in &report.mismatches {
                    out.line(format!("mismatch m={} {:?}: {}", mm.m, mm.check, mm.detail))?;
                }
                out.line(format!(
                    "checked m = 1..={}: {} mismatches",
                    report.max_m,
                    report.mismatches.len()
                ))?;
            }
            if report.passed() {
                Ok(())
            } else {
                out.flush()?;
                Err(Failure::Mismatch(format!(
                    "{} mismatches",
                    report.mismatches.len()
                )))
            }
        }
        Command::Deviate { max_m, fit, view } => {
            if *max_m == 0 {
                return Err(Failure::Usage("domain error: --max-m must be >= 1".into()));
            }
            let points = statistics::deviation(*max_m, *view);
            let fitted = if *fit {
                Some(statistics::fit_deviation(&points)?)
            } else {
                None
            };
            match format {
                Format::Json => out.json(&json!({
                    "version": VERSION,
                    "max_m": max_m,
                    "view": view,
                    "points": points,
                    "fit": fitted,
                })),
                Format::Csv => {
                    out.line("m,rule30,rule22,epsilon")?;
                    for p in &points {
                        out.line(format!("{},{},{},{}", p.m, p.rule30, p.rule22, p.epsilon))?;
                    }
                    if let Some(f) = &fitted {
                        writeln!(stderr, "fit: b = {} ({})", fmt_f64(f.slope), f.filter_note)?;
                    }
                    Ok(())
                }
                Format::Human => {
                    for p in &points {
                        out.line(format!(
                            "m={:<5} rule30={:<6} rule22={:<6} eps={}",
                            p.m, p.rule30, p.rule22, p.epsilon
                        ))?;
                    }
                    if let Some(f) = &fitted {
                        out.line(format!(
                            "power-law fit: b = {:.4}, intercept = {:.4}, r^2 = {:.4}, points = {}; {}",
                            f.slope, f.intercept, f.r_squared, f.n_points, f.filter_note
                        ))?;
                    }
                    Ok(())
                }
            }
        }
        Command::Sensitivity(a) => {
            let rule = rule_arg(a.code)?;
            let p = statistics::sensitivity_with(&rule, a.t, a.sampling(5000, seed))?;
            match format {
                Format::Json => out.json(&with_version(&p)),
                Format::Csv => {
                    provenance(stderr, rule.code, p.t, p.trials, p.seed)?;
                    out.line("offset,estimate")?;
                    for (j, e) in p.offsets.iter().zip(&p.estimates) {
                        out.line(format!("{},{}", j, fmt_f64(*e)))?;
                    }
                    Ok(())
                }
                Format::Human => {
                    out.line(provenance_line(rule.code, p.t, p.trials, p.seed))?;
                    for (j, e) in p.offsets.iter().zip(&p.estimates) {
                        out.line(format!(
                            "{:>4} {:.4} {}",
                            j,
                            e,
                            "#".repeat((e * 40.0).round() as usize)
                        ))?;
                    }
                    out.line(format!(
                        "sigma_left = {:.4}  sigma_right = {:.4}  ratio = {:.4}",
                        p.sigma_left,
                        p.sigma_right,
                        p.asymmetry_ratio()
                    ))
                }
            }
        }
        Command::Equidist(a) => {
            format.require(&[Format::Human, Format::Json], "equidist")?;
            let rule = rule_arg(a.code)?;
            let e = statistics::equidistribution_with(&rule, a.t, a.sampling(100_000, seed))?;
            if let Some(w) = &e.warning {
                writeln!(stderr, "warning: {w}")?;
            }
            if format == Format::Json {
                out.json(&with_version(&e))
            } else {
                out.line(provenance_line(rule.code, e.t, e.trials, e.seed))?;
                out.line(format!(
                    "p_hat = {}  z = {}",
                    fmt_f64(e.p_hat),
                    fmt_f64(e.z_score)
                ))
            }
        }
        Command::Mi(a) => {
            format.require(&[Format::Human, Format::Json], "mi")?;
            let rule = rule_arg(a.code)?;
            let mi = statistics::mutual_information_with(&rule, a.t, a.sampling(100_000, seed))?;
            if format == Format::Json {
                out.json(&with_version(&mi))
            } else {
                out.line(provenance_line(rule.code, mi.t, mi.trials, mi.seed))?;
                out.line(format!("I = {} bits", fmt_f64(mi.bits)))
            }
        }
        Command::Entropy { code, steps, max_n } => {
            let rule = rule_arg(*code)?;
            let column = evolution::center_column(&rule, *steps);
            let report = statistics::block_entropy(&column, *max_n)?;
            match format {
                Format::Json => out.json(&json!({ "version": VERSION, "rule": rule.code, "steps": steps, "report": report })),
                Format::Csv => {
                    out.line("n,H_n,H_n_over_n,p_n,p_n_over_2n")?;
                    for b in &report.blocks {
                        out.line(format!(
                            "{},{},{},{},{}",
                            b.n,
                            fmt_f64(b.entropy),
                            fmt_f64(b.normalized_entropy),
                            b.distinct,
                            fmt_f64(b.complexity_ratio)
                        ))?;
                    }
                    Ok(())
                }
                Format::Human => {
                    out.line(format!("rule {} centre column, N = {}", rule.code, report.sequence_length))?;
                    for b in &report.blocks {
                        out.line(format!(
                            "n={:<3} H_n={:.6} H_n/n={:.6} p_n={} p_n/2^n={:.6}",
                            b.n, b.entropy, b.normalized_entropy, b.distinct, b.complexity_ratio
                        ))?;
                    }
                    Ok(())
                }
            }
        }
        Command::Ode {
            u0,
            m_end,
            dt,
            closed_form,
            every,
        } => {
            format.require(&[Format::Human, Format::Csv], "ode")?;
            if *closed_form && !(*u0 > 0.0) {
                return Err(Failure::Usage("--closed-form needs u0 > 0".into()));
            }
            let traj = continuum::ode_integrate(*u0, *m_end, *dt)?;
            out.line(if *closed_form {
                "m,value,closed_form"
            } else {
                "m,value"
            })?;
            let last = traj.states.len() - 1;
            for (i, s) in traj.states.iter().enumerate() {
                if i % every.max(&1) != 0 && i != last {
                    continue;
                }
                if *closed_form {
                    let exact = continuum::ode_closed_form(*u0, s.m)
                        .map(fmt_f64)
                        .unwrap_or_else(|_| "inf".into());
                    out.line(format!("{},{},{}", fmt_f64(s.m), fmt_f64(s.u), exact))?;
                } else {
                    out.line(format!("{},{}", fmt_f64(s.m), fmt_f64(s.u)))?;
                }
            }
            if let Some(at) = traj.blown_up_at {
                writeln!(stderr, "blow-up detected at m = {}", fmt_f64(at))?;
            }
            Ok(())
        }
        Command::Duffing {
            u0,
            v0,
            m_end,
            dt,
            every,
        } => {
            format.require(&[Format::Human, Format::Csv], "duffing")?;
            let traj = continuum::duffing_integrate(*u0, *v0, *m_end, *dt)?;
            out.line("m,u,v,energy")?;
            let last = traj.states.len() - 1;
            for (i, s) in traj.states.iter().enumerate() {
                if i % every.max(&1) == 0 || i == last {
                    out.line(format!(
                        "{},{},{},{}",
                        fmt_f64(s.m),
                        fmt_f64(s.u),
                        fmt_f64(s.v),
                        fmt_f64(s.energy)
                    ))?;
                }
            }
            writeln!(
                stderr,
                "relative energy drift {}",
                fmt_f64(traj.energy_drift())
            )?;
            Ok(())
        }
        Command::Pde(a) => {
            format.require(&[Format::Human, Format::Csv], "pde")?;
            if a.points == 0 {
                return Err(Failure::Usage("--points must be >= 1".into()));
            }
            let grid = match a.init {
                InitSpec::Const(u) => PdeGrid::constant(a.points, u, a.dx, a.dt),
                InitSpec::Bump { amplitude, width } => {
                    PdeGrid::bump(a.points, amplitude, width, a.dx, a.dt)
                }
            }
            .with_boundary(a.boundary)
            .with_advection(a.advect)
            .allowing_unstable(a.allow_unstable);
            let header: Vec<String> = (0..a.points).map(|i| format!("u_{i}")).collect();
            out.line(format!("m,{}", header.join(",")))?;
            let emit = |out: &mut Sink<'_>, g: &PdeGrid| {
                let vals: Vec<String> = g.values.iter().map(|v| fmt_f64(*v)).collect();
                out.line(format!("{},{}", fmt_f64(g.m), vals.join(",")))
            };
            emit(out, &grid)?;
            let snapshots = a.snapshots.max(1);
            let mut g = grid;
            for k in 1..=snapshots {
                g = continuum::pde_integrate(g, a.m_end * k as f64 / snapshots as f64)?;
                emit(out, &g)?;
                if let Some(at) = g.blown_up_at {
                    writeln!(stderr, "blow-up detected at m = {}", fmt_f64(at))?;
                    break;
                }
            }
            Ok(())
        }
        Command::DiagIdentity { max_t, rules } => {
            format.require(&[Format::Human, Format::Json], "diag-identity")?;
            let reports = rules
                .iter()
                .map(|&c| Ok(evolution::diagonal_identity_scan(&rule_arg(c)?, *max_t)))
                .collect::<Result<Vec<_>, Failure>>()?;
            if format == Format::Json {
                out.json(&json!({ "version": VERSION, "reports": reports }))
            } else {
                for r in &reports {
                    for c in &r.conventions {
                        out.line(format!(
                            "rule {:<3} side {:<13} offset {:>2}: {}/{} match ({:.4}) first mismatch {}",
                            r.rule,
                            format!("{:?}", c.side),
                            c.index_offset,
                            c.matches,
                            c.total,
                            c.fraction,
                            c.first_mismatch.map_or("-".into(), |t| t.to_string())
                        ))?;
                    }
                }
                Ok(())
            }
        }
        Command::Reproduce => unreachable!("handled before dispatch"),
    }
}

impl StatArgs {
    fn sampling(&self, default_trials: u64, seed: u64) -> Sampling {
        if self.exhaustive {
            Sampling::Exhaustive
        } else {
            Sampling::Random {
                trials: self.trials.unwrap_or(default_trials),
                seed,
            }
        }
    }
}

fn provenance_line(rule: u8, t: usize, trials: u64, seed: Option<u64>) -> String {
    let seed = seed.map_or("exhaustive".to_string(), |s| s.to_string());
    format!("rule {rule}  t {t}  trials {trials}  seed {seed}  version {VERSION}")
}

fn provenance(
    stderr: &mut dyn Write,
    rule: u8,
    t: usize,
    trials: u64,
    seed: Option<u64>,
) -> std::io::Result<()> {
    writeln!(stderr, "{}", provenance_line(rule, t, trials, seed))
}

fn with_version<T: serde::Serialize>(value: &T) -> Value {
    let mut v = serde_json::to_value(value).expect("report types serialize");
    v["version"] = Value::String(VERSION.into());
    v
}

pub(crate) fn rule_json(r: &RuleSpec) -> Value {
    let f = r.flags;
    json!({
        "code": r.code,
        "anf": r.anf.monomials().collect::<Vec<_>>(),
        "s3_symmetric": f.s3_symmetric,
        "left_permutive": f.left_permutive,
        "right_permutive": f.right_permutive,
        "center_permutive": f.center_permutive,
        "linear": f.linear,
    })
}
