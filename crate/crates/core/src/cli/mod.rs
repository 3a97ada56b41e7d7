//! The `qh` command line.
//!
//! Every command prints a JSON [`RunReport`] on standard output (except
//! `gen` and `export` writing to standard output, which print the data
//! instead) and the elapsed time on standard error.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 I/O error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::algebra::matrix_identity_checks;
use crate::curve::check_arc_isometry;
use crate::error::{Error, Result};
use crate::extremal::{conjecture_scan, hoelder_constants, lemma_one, lemma_two, window_min, LEMMA_TWO_A};
use crate::genfun::{functional_equation_check, norm_identity};
use crate::report::RunReport;
use crate::sequence::{
    block_doubling_prefix, compare_generators, fixed_point_prefix, letter_signs, prefix, Generator,
    SubstitutionRule,
};
use crate::spherical::{direction_density, double_point, double_point_shifted, export_samples, ExportFormat, ExportKind};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "qh", version, about = "Partial sums of a base-4 sign sequence and the curve they trace in R^4")]
pub struct Cli {
    /// Worker threads for the searches; output does not depend on it.
    #[arg(long, global = true, env = "QH_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the first terms of the sequence.
    Gen {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        len: u64,
        #[arg(long, value_enum, default_value = "signs")]
        form: Form,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the generators against each other and the algebraic identities.
    Selfcheck {
        #[arg(long, default_value_t = 4096, value_parser = clap::value_parser!(u64).range(1..))]
        len: u64,
        /// Flip one term of the recurrence generator.
        #[arg(long, hide = true)]
        inject_fault: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Window minimum and ratio extremes of ||S(n) - S(m)||^2.
    Bounds {
        #[arg(long, default_value_t = 256)]
        nmax: u64,
        /// `LO:HI` selects gaps LO < n - m <= HI.
        #[arg(long, default_value = "16:64", value_parser = parse_window)]
        window: (u64, u64),
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The two lemmas behind the Hoelder bounds and the derived constants.
    Lemmas {
        #[arg(long, default_value_t = 4096)]
        scan_max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The double points S(1/3) ~ S(4/3) and S(2/3) ~ S(8/3) on the sphere.
    DoublePoint {
        #[arg(long, default_value_t = 20)]
        depth: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coverage of the sphere by the directions of S(n) - S(m).
    Density {
        #[arg(long, default_value_t = 256)]
        nmax: u64,
        #[arg(long, default_value_t = 8)]
        grid: usize,
        #[arg(long, default_value_t = 4)]
        probe_grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write sampled points as CSV or JSON.
    Export {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Start of the parameter range (curve: 0, sphere and central: 1).
        #[arg(long)]
        from: Option<f64>,
        /// End of the parameter range (16); the sphere always ends at 16 * from.
        #[arg(long)]
        to: Option<f64>,
        #[arg(long, default_value_t = 4096)]
        samples: usize,
        /// Steps of the projective sequence.
        #[arg(long, default_value_t = 4096)]
        steps: usize,
        /// Largest index for direction samples.
        #[arg(long, default_value_t = 64)]
        nmax: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Form {
    Signs,
    Letters,
    Digits,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Curve,
    Sphere,
    Central,
    Projective,
    Directions,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn parse_window(text: &str) -> std::result::Result<(u64, u64), String> {
    let (lo, hi) = text.split_once(':').ok_or_else(|| format!("expected LO:HI, got {text:?}"))?;
    let lo: u64 = lo.trim().parse().map_err(|e| format!("bad LO: {e}"))?;
    let hi: u64 = hi.trim().parse().map_err(|e| format!("bad HI: {e}"))?;
    if lo >= hi {
        return Err(format!("window {lo}:{hi} is empty"));
    }
    Ok((lo, hi))
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let started = Instant::now();
    let code = match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qh: {e}");
            exit_code_for(&e)
        }
    };
    eprintln!("elapsed: {:.3} s", started.elapsed().as_secs_f64());
    code
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) => EXIT_USAGE,
        Error::Singular { .. } => EXIT_FAIL,
        Error::Io(_) | Error::Json(_) => EXIT_IO,
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    let threads = match cli.threads {
        Some(0) => return Err(Error::InvalidInput("--threads must be at least 1".into())),
        Some(k) => k,
        None => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot start thread pool: {e}")))?;
    pool.install(|| dispatch(&cli.command))
}

fn dispatch(command: &Command) -> Result<i32> {
    match command {
        Command::Gen { len, form, out } => cmd_gen(*len as usize, *form, out.as_deref()),
        Command::Selfcheck { len, inject_fault, out } => {
            finish(cmd_selfcheck(*len as usize, *inject_fault)?, out.as_deref())
        }
        Command::Bounds { nmax, window, out } => finish(cmd_bounds(*nmax, *window)?, out.as_deref()),
        Command::Lemmas { scan_max, out } => finish(cmd_lemmas(*scan_max)?, out.as_deref()),
        Command::DoublePoint { depth, out } => finish(cmd_double_point(*depth)?, out.as_deref()),
        Command::Density { nmax, grid, probe_grid, out } => {
            let report = direction_density(*nmax, *grid, *probe_grid)?;
            let run = RunReport::new("density", json!({"nmax": nmax, "grid": grid, "probe_grid": probe_grid}))
                .with_data(serde_json::to_value(report)?);
            finish(run, out.as_deref())
        }
        Command::Export { kind, format, out, from, to, samples, steps, nmax } => {
            let kind = match kind {
                Kind::Curve => ExportKind::Curve { from: from.unwrap_or(0.0), to: to.unwrap_or(16.0), samples: *samples },
                Kind::Sphere => ExportKind::Sphere { from: from.unwrap_or(1.0), samples: *samples },
                Kind::Central => ExportKind::Central { from: from.unwrap_or(1.0), to: to.unwrap_or(16.0), samples: *samples },
                Kind::Projective => ExportKind::Projective { steps: *steps },
                Kind::Directions => ExportKind::Directions { n_max: *nmax },
            };
            let format = match format {
                Format::Csv => ExportFormat::Csv,
                Format::Json => ExportFormat::Json,
            };
            cmd_export(&kind, format, out.as_deref())
        }
    }
}

fn open_sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Prints the report, optionally also writes it to `out`, and maps the outcome to an exit code.
fn finish(report: RunReport, out: Option<&Path>) -> Result<i32> {
    let text = report.to_json()?;
    if let Some(path) = out {
        std::fs::write(path, &text)?;
    }
    let mut stdout = io::stdout().lock();
    stdout.write_all(text.as_bytes())?;
    stdout.flush()?;
    Ok(if report.passed() { EXIT_PASS } else { EXIT_FAIL })
}

pub fn format_terms(len: usize, form: Form) -> String {
    let items: Vec<String> = match form {
        Form::Signs => prefix(len).iter().map(ToString::to_string).collect(),
        Form::Digits => prefix(len).iter().map(|s| s.to_i64().to_string()).collect(),
        Form::Letters => fixed_point_prefix(&SubstitutionRule::s0(), len).iter().map(ToString::to_string).collect(),
    };
    items.join(" ")
}

fn cmd_gen(len: usize, form: Form, out: Option<&Path>) -> Result<i32> {
    let mut sink = open_sink(out)?;
    sink.write_all(format_terms(len, form).as_bytes())?;
    sink.write_all(b"\n")?;
    sink.flush()?;
    Ok(EXIT_PASS)
}

fn cmd_selfcheck(len: usize, inject_fault: Option<u64>) -> Result<RunReport> {
    let mut report = RunReport::new("selfcheck", json!({ "len": len, "inject_fault": inject_fault }));

    let mut recurrence = prefix(len);
    if let Some(i) = inject_fault {
        if let Some(term) = recurrence.get_mut(i as usize) {
            *term = -*term;
        }
    }
    let candidates = vec![
        (Generator::Recurrence, recurrence),
        (Generator::BlockDoubling, block_doubling_prefix(len)),
        (Generator::S0FixedPoint, letter_signs(&fixed_point_prefix(&SubstitutionRule::s0(), len))),
        (Generator::S1FixedPoint, letter_signs(&fixed_point_prefix(&SubstitutionRule::s1(), len))),
    ];
    let equivalence = compare_generators(len, &candidates);
    report.check(
        "generators agree",
        equivalence.all_agree(),
        serde_json::to_value(&equivalence.first_discrepancy)?,
    );

    for (name, ok) in matrix_identity_checks() {
        report.check(name, ok, json!({ "identity": name }));
    }

    let functional = functional_equation_check(len)?;
    report.check(
        "F(z) = M(z) F(z^4)",
        functional.passed(),
        serde_json::to_value(functional.mismatches.first())?,
    );

    for level in 1..=4 {
        let r = norm_identity(level, 64)?;
        report.check(format!("norm identity, level {level}"), r.max_rel_error <= 1e-6, serde_json::to_value(&r)?);
    }

    for j in 0..16 {
        let r = check_arc_isometry(j, 32, 0x5eed)?;
        report.check(format!("arc isometry, j = {j}"), r.passed(), serde_json::to_value(r.failures.first())?);
    }
    Ok(report)
}

fn cmd_bounds(nmax: u64, (lo, hi): (u64, u64)) -> Result<RunReport> {
    let window = window_min(lo, hi, nmax)?;
    let scan = conjecture_scan(nmax)?;
    let bounds = crate::extremal::ratio_bounds(nmax)?;
    let mut report = RunReport::new("bounds", json!({ "nmax": nmax, "window": [lo, hi] }));
    report.check(
        "squared ratio <= 12 + 8 sqrt2",
        bounds.above_b_upper_sq.is_empty(),
        serde_json::to_value(bounds.above_b_upper_sq.first())?,
    );
    Ok(report.with_data(json!({
        "window_min": window,
        "ratio_bounds": { "min": bounds.min, "max": bounds.max },
        "conjecture": {
            "beats_one_fifth": scan.beats_one_fifth,
            "first_below_one_fifth": scan.first_below_one_fifth,
            "beats_25_over_17": scan.beats_25_over_17,
        },
    })))
}

fn cmd_lemmas(scan_max: u64) -> Result<RunReport> {
    let one = lemma_one(64);
    let two = lemma_two(LEMMA_TWO_A, scan_max)?;
    let constants = hoelder_constants();
    let mut report = RunReport::new("lemmas", json!({ "scan_max": scan_max }));
    report.check("lemma 1 bounds (8 odd n, 9 even n)", one.bounds_hold(), serde_json::to_value(&one.violations)?);
    report.check(
        "lemma 2: ||S(n) - S(m)||^2 >= 4 for n - m >= 16",
        two.passed(),
        serde_json::to_value(&two.violations)?,
    );
    Ok(report.with_data(json!({
        "lemma_one": one,
        "lemma_two": {
            "a": two.a,
            "min_sq_dist": two.min_sq_dist,
            "argmin_count": two.argmin.len(),
            "argmin_first": two.argmin.iter().take(16).collect::<Vec<_>>(),
        },
        "constants": constants,
    })))
}

fn cmd_double_point(depth: u32) -> Result<RunReport> {
    let base = double_point(depth)?;
    let shifted = double_point_shifted(depth)?;
    let mut report = RunReport::new("double-point", json!({ "depth": depth }));
    let data = json!({
        "repunit_points": base.repunit_points,
        "direction_t": base.direction_t,
        "direction_t_prime": base.direction_t_prime,
        "angle": base.angle,
        "angle_to_expected": base.angle_to_expected,
        "q_component": base.q_component,
        "shifted": shifted,
    });
    if depth >= 20 {
        report.check("mutual angle < 1e-5", base.angle < 1e-5, json!({ "angle": base.angle }));
        report.check("shifted angle < 1e-5", shifted.angle < 1e-5, json!({ "angle": shifted.angle }));
    }
    Ok(report.with_data(data))
}

fn cmd_export(kind: &ExportKind, format: ExportFormat, out: Option<&Path>) -> Result<i32> {
    let mut sink = open_sink(out)?;
    let count = export_samples(kind, format, &mut *sink)?;
    sink.flush()?;
    drop(sink);
    if let Some(path) = out {
        let report = RunReport::new(
            format!("export {}", kind.name()),
            json!({ "kind": kind, "format": format, "out": path.display().to_string() }),
        )
        .with_data(json!({ "records": count }));
        let mut stdout = io::stdout().lock();
        stdout.write_all(report.to_json()?.as_bytes())?;
    }
    Ok(EXIT_PASS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_forms() {
        assert_eq!(format_terms(16, Form::Signs), "+ + + + + - + - + + - - + - - +");
        assert_eq!(format_terms(4, Form::Letters), "+a +b +c +d");
        assert_eq!(format_terms(1, Form::Signs), "+");
        assert_eq!(format_terms(6, Form::Digits), "1 1 1 1 1 -1");
    }

    #[test]
    fn window_parsing() {
        assert_eq!(parse_window("16:64"), Ok((16, 64)));
        assert!(parse_window("64:16").is_err());
        assert!(parse_window("16").is_err());
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(["qh", "gen", "--len", "0"]), EXIT_USAGE);
        assert_eq!(run(["qh", "gen", "--len", "4", "--form", "words"]), EXIT_USAGE);
        assert_eq!(run(["qh", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["qh", "--threads", "0", "selfcheck", "--len", "4"]), EXIT_USAGE);
    }

    #[test]
    fn selfcheck_paths() {
        assert!(cmd_selfcheck(16, None).unwrap().passed());
        let faulty = cmd_selfcheck(64, Some(37)).unwrap();
        assert!(!faulty.passed());
        assert_eq!(faulty.witnesses[0]["witness"]["index"], 37);
    }

    #[test]
    fn io_errors() {
        assert_eq!(run(["qh", "gen", "--len", "4", "--out", "/nonexistent-dir/x.txt"]), EXIT_IO);
    }
}
