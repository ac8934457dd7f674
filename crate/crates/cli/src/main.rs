//! `htverify`: runs the certification suites and prints or writes reports.
//!
//! Exit status is 0 when every check passes, 1 on a failed check and 2 when
//! the arguments or JSON inputs do not parse.

mod json;

use std::path::PathBuf;
use std::process::ExitCode;
use std::thread;

use clap::{Parser, Subcommand, ValueEnum};
use hyperscale::fueter::MultiIndex;
use hyperscale::verify::{self, FueterRow, Report, Settings, Suite, SCALE_SWEEP};
use hyperscale::{HElem, Scale};

#[derive(Parser, Debug)]
#[command(name = "htverify", version, about = "Certification suites for the scaled hypercomplex numbers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Scale parameter; omitted means the default sweep -2, -1, -0.5, 0.5, 1, 2.
    #[arg(long, global = true, allow_negative_numbers = true)]
    t: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Series truncation order.
    #[arg(long, global = true)]
    trunc: Option<usize>,
    /// Multiplies every upper tolerance.
    #[arg(long = "tol-scale", global = true, default_value_t = 1.0)]
    tol_scale: f64,
    /// Write the report as JSON to this path.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Sample count per check, overriding each suite's default.
    #[arg(long, global = true)]
    samples: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every suite.
    Verify,
    /// Print the unit product and adjoint tables and check them.
    Table,
    /// Norms of one element given as {"t": .., "a": [re, im], "b": [re, im]}.
    Norm { element: String },
    /// Blaschke factor checks at one point.
    Blaschke {
        #[arg(long, value_enum, default_value_t = AdjointArg::Circled)]
        adjoint: AdjointArg,
        #[arg(long)]
        alpha: String,
    },
    /// Interpolating factor for a JSON array of points.
    Interp {
        #[arg(long)]
        points: String,
    },
    /// Kernel residual sweep for one multi-index.
    Fueter {
        /// Comma separated, e.g. 2,1,1.
        #[arg(long, value_parser = parse_index)]
        alpha: MultiIndex,
    },
    /// Rational function round trips.
    Realize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AdjointArg {
    Circled,
    Bracket,
}

fn parse_index(s: &str) -> Result<MultiIndex, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma separated integers, got {s:?}"));
    }
    let mut out = [0usize; 3];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.parse().map_err(|e| format!("{p:?}: {e}"))?;
    }
    Ok(out)
}

struct UsageError(String);

impl Cli {
    fn scales(&self) -> Result<Vec<Scale>, UsageError> {
        match self.t {
            Some(t) => Ok(vec![Scale::new(t).map_err(|e| UsageError(format!("--t: {e}")))?]),
            None => Ok(SCALE_SWEEP.iter().map(|&t| Scale::new(t).unwrap()).collect()),
        }
    }

    fn settings(&self) -> Settings {
        Settings {
            seed: self.seed,
            samples: self.samples,
            trunc: self.trunc.unwrap_or(Settings::default().trunc),
            tol_scale: self.tol_scale,
        }
    }

    /// Elements carry their own scale; `--t`, when given, must agree with it.
    fn check_scale(&self, q: &HElem) -> Result<(), UsageError> {
        match self.t {
            Some(t) if t != q.t() => Err(UsageError(format!("element has t = {} but --t is {t}", q.t()))),
            _ => Ok(()),
        }
    }
}

fn parse_elem(text: &str) -> Result<HElem, UsageError> {
    serde_json::from_str(text).map_err(|e| UsageError(format!("bad element {text:?}: {e}")))
}

fn run_parallel(jobs: Vec<(Suite, Scale)>, settings: &Settings) -> Vec<Report> {
    thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .into_iter()
            .map(|(suite, t)| scope.spawn(move || verify::run_suite(suite, t, settings)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    })
}

fn print_report(r: &Report, detailed: bool) {
    println!(
        "{} {:<14} t = {:<5} ({:.2} s)",
        if r.pass() { "PASS" } else { "FAIL" },
        r.suite,
        r.t,
        r.wall_time
    );
    for e in &r.entries {
        if detailed || !e.pass {
            println!(
                "    {:<4} {:<38} observed {:.3e}  tolerance {:.1e}",
                if e.pass { "ok" } else { "FAIL" },
                e.name,
                e.observed,
                e.tolerance
            );
        }
    }
}

fn print_tables(s: Scale) {
    let names = ["1", "i", "j", "k"];
    let table = verify::cayley_table(s);
    println!("unit products at t = {}", s.t());
    for (u, row) in table.iter().enumerate() {
        for (v, p) in row.iter().enumerate() {
            println!("  {} * {} = {}", names[u], names[v], p);
        }
    }
    let basis = HElem::basis(s);
    println!("adjoints");
    for (u, e) in basis.iter().enumerate() {
        println!("  {}: circled {}  bracket {}", names[u], e.circled(), e.bracket());
    }
}

fn print_rows(rows: &[FueterRow]) {
    println!("{:<4} {:<18} {:>5} {:>8} {:>12}", "", "test", "t", "index", "max residual");
    for r in rows {
        println!(
            "{:<4} {:<18} {:>5} {:>8} {:>12.3e}",
            if r.pass { "ok" } else { "FAIL" },
            r.test,
            r.t,
            r.alpha_or_n,
            r.max_residual
        );
    }
}

fn write_json(path: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => Ok(()),
    }
}

enum Outcome {
    Reports(Vec<Report>),
    Rows(Vec<FueterRow>),
}

fn run(cli: &Cli) -> Result<Outcome, UsageError> {
    let settings = cli.settings();
    Ok(match &cli.command {
        Command::Verify => {
            let jobs = cli
                .scales()?
                .into_iter()
                .flat_map(|t| Suite::ALL.into_iter().map(move |s| (s, t)))
                .collect();
            let reports = run_parallel(jobs, &settings);
            for r in &reports {
                print_report(r, false);
            }
            Outcome::Reports(reports)
        }
        Command::Table => {
            let mut reports = Vec::new();
            for s in cli.scales()? {
                print_tables(s);
                let r = verify::table_report(s, cli.tol_scale);
                print_report(&r, true);
                reports.push(r);
            }
            Outcome::Reports(reports)
        }
        Command::Norm { element } => {
            let q = parse_elem(element)?;
            cli.check_scale(&q)?;
            for kind in [hyperscale::NormKind::Hs, hyperscale::NormKind::Op, hyperscale::NormKind::Euclid] {
                println!("{:<6} {:.17e}", format!("{kind:?}").to_lowercase(), q.norm(kind));
            }
            let r = verify::norm_report(&q, cli.tol_scale);
            print_report(&r, true);
            Outcome::Reports(vec![r])
        }
        Command::Blaschke { adjoint, alpha } => {
            let a = parse_elem(alpha)?;
            cli.check_scale(&a)?;
            if a.op_norm() >= 1.0 {
                return Err(UsageError(format!("alpha must have operator norm below 1, got {}", a.op_norm())));
            }
            let r = match adjoint {
                AdjointArg::Circled => verify::blaschke_checks_report(&a, cli.seed, cli.tol_scale),
                AdjointArg::Bracket => verify::bracket_checks_report(&a, cli.seed, cli.tol_scale),
            };
            print_report(&r, true);
            Outcome::Reports(vec![r])
        }
        Command::Interp { points } => {
            let pts: Vec<HElem> =
                serde_json::from_str(points).map_err(|e| UsageError(format!("bad point list: {e}")))?;
            if pts.is_empty() {
                return Err(UsageError("point list is empty".into()));
            }
            for p in &pts {
                cli.check_scale(p)?;
            }
            let r = verify::interpolation_report(&pts, cli.trunc.unwrap_or(256), cli.tol_scale);
            print_report(&r, true);
            Outcome::Reports(vec![r])
        }
        Command::Fueter { alpha } => {
            let samples = cli.samples.unwrap_or(Suite::Fueter.default_samples());
            let scales = cli.scales()?;
            let rows: Vec<FueterRow> = thread::scope(|scope| {
                let handles: Vec<_> = scales
                    .iter()
                    .map(|&t| scope.spawn(move || verify::fueter_rows(*alpha, t, samples, cli.seed, cli.tol_scale)))
                    .collect();
                handles.into_iter().flat_map(|h| h.join().expect("sweep thread panicked")).collect()
            });
            print_rows(&rows);
            let worst = rows.iter().map(|r| r.max_residual).fold(0.0, f64::max);
            println!("max residual {worst:.3e}");
            Outcome::Rows(rows)
        }
        Command::Realize => {
            let jobs = cli.scales()?.into_iter().map(|t| (Suite::Rational, t)).collect();
            let reports = run_parallel(jobs, &settings);
            for r in &reports {
                print_report(r, true);
            }
            Outcome::Reports(reports)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let (text, pass) = match &outcome {
        Outcome::Reports(rs) => (json::reports(rs), rs.iter().all(Report::pass)),
        Outcome::Rows(rows) => (json::fueter_rows(rows), rows.iter().all(|r| r.pass)),
    };
    if let Err(msg) = write_json(&cli.json, &text) {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    println!("{}", if pass { "all checks passed" } else { "some checks failed" });
    ExitCode::from(if pass { 0 } else { 1 })
}
