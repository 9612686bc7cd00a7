//! Command-line front end.
//!
//! Exit status is 0 on success, 1 for invalid arguments, specifications or
//! domain errors, and 2 for I/O failures. Floats are printed in fixed-width
//! scientific notation with 12 significant digits so outputs diff cleanly.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::binary::{reconcile, BinaryParams, TermBreakdown};
use crate::degraded::{degradedness_report, DEFAULT_TOL};
use crate::error::{IsacError, Result};
use crate::estimation::minimal_distortions;
use crate::regions::{grid_axis, sweep_region, LawFamily, RegionSweep, SweepConfig, Theorem};
use crate::simulate::simulate;
use crate::spec_file::{load_spec, LoadedSpec};

/// Environment variable capping the worker threads of sweeps and sampling
/// (0 or unset: one per core).
pub const THREADS_ENV: &str = "ISAC_REGION_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "secure-isac",
    version,
    about = "Secrecy-distortion bounds for ISAC channels with transmitter actions"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Key-value lines or CSV.
    Text,
    /// Pretty-printed JSON with the same fields.
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check physical, reverse physical and stochastic degradedness of the
    /// eavesdropper pair (Y2, S2) relative to the legitimate pair (Y1, S1).
    ///
    /// The physical check tests the factorization
    /// P(a,x) P(s1|a) P(y1|s1,x) P(y2,s2|y1,s1); the reverse check swaps the
    /// two pairs; the stochastic check searches a kernel T(y2,s2|y1,s1) with a
    /// phase-one linear program.
    CheckDegraded {
        spec: PathBuf,
        /// Check every (a, x) instead of the support of the file's law.
        #[arg(long)]
        strict: bool,
        /// Absolute tolerance on probabilities.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Print the optimal per-letter estimators of S1 and S2 from
    /// (a, x, y1, y2), minimizing the posterior expected distortion, and the
    /// distortions they reach.
    Estimators { spec: PathBuf },
    /// Sweep input laws and evaluate a secrecy-rate and distortion bound.
    ///
    /// Mode 1: partial secrecy, physically degraded,
    /// R1 <= I(V;Y1,S1), R2 <= min{H(Y1,S1|Y2,S2) - H(S1|Y1,Y2,S2,V), I(V;Y1,S1) - R1}.
    /// Mode 2: partial secrecy, reversely degraded, as mode 1 with the first
    /// term H(Y1|Y2,S2).
    /// Mode 3: full secrecy, physically degraded,
    /// R <= min{H(Y1,S1|Y2,S2) - H(S1|Y1,Y2,S2,X,A), I(X,A;Y1,S1)}.
    /// Mode 4: full secrecy, reversely degraded, R <= min{H(Y1|Y2,S2), I(X,A;Y1,S1)}.
    /// Distortions are those of the optimal per-letter estimators. The CSV
    /// has the law parameters, r1_max, r2_prime_or_rsec, rate, d1_min,
    /// d2_min, degraded and pareto columns; rate is the largest secure rate
    /// at R1 = 0.
    Region {
        spec: PathBuf,
        /// Bound to evaluate (1-4).
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        theorem: u8,
        #[command(flatten)]
        sweep: SweepArgs,
        /// Law family; `auto` uses the binary (p, q) square when the spec is
        /// a `[binary_example]`.
        #[arg(long, value_enum, default_value_t = FamilyArg::Auto)]
        family: FamilyArg,
        /// Output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the closed-form rate and distortions of the binary
    /// multiplicative-Bernoulli example with a generic entropy computation.
    ///
    /// Rate: min{H(S1|Y2,S2) + H(Y1|S1,Y2,S2) - H(S1|Y1,Y2,S2,X,A),
    /// H(X,A) - H(X,A|Y1,S1)} with X ~ Bern(p), A = X xor Bern(q).
    Lemma1 {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long, requires = "q", conflicts_with = "grid")]
        p: Option<f64>,
        #[arg(long, requires = "p", conflicts_with = "grid")]
        q: Option<f64>,
        /// Points per axis of a (p, q) grid over [0, 1].
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the single-letter channel and compare the empirical
    /// distortions of the optimal estimators and the empirical joint law with
    /// their analytic values.
    Simulate {
        spec: PathBuf,
        /// Number of draws.
        #[arg(short = 'n', long = "samples", default_value_t = 1_000_000)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug, Clone, Copy)]
pub struct SweepArgs {
    /// Points per axis (binary family) or simplex lattice resolution.
    #[arg(long, default_value_t = 11)]
    pub grid: usize,
    /// Additional random laws.
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Auto,
    Binary,
    Generic,
}

/// Fixed-width scientific notation with 12 significant digits.
pub fn fmt_f(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.11e}")
}

fn io_err(path: &Path, source: std::io::Error) -> IsacError {
    IsacError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_err(path, e))?;
    tmp.write_all(bytes).map_err(|e| io_err(path, e))?;
    tmp.persist(path).map_err(|e| io_err(path, e.error))?;
    Ok(())
}

fn emit(out: &mut dyn Write, path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, bytes),
        None => out
            .write_all(bytes)
            .map_err(|e| io_err(Path::new("<stdout>"), e)),
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(v)
        .map_err(|e| IsacError::InvalidArgument(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn csv_bytes(header: &[String], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| IsacError::InvalidArgument(format!("csv encoding failed: {e}"));
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.write_record(r).map_err(fail)?;
    }
    w.into_inner()
        .map_err(|e| IsacError::InvalidArgument(format!("csv encoding failed: {e}")))
}

fn with_threads<T: Send>(f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| {
            IsacError::InvalidArgument(format!("{THREADS_ENV} must be a non-negative integer, got `{v}`"))
        })?,
        Err(_) => 0,
    };
    if threads == 0 {
        return f();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| IsacError::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(f)
}

fn check_degraded(spec: &LoadedSpec, strict: bool, tol: f64, format: Format) -> Result<Vec<u8>> {
    let report = degradedness_report(&spec.channel, &spec.law, tol, strict)?;
    if format == Format::Json {
        return to_json(&report);
    }
    let mut s = String::new();
    s += &format!("strict {}\ntol {}\n", strict, fmt_f(tol));
    for (name, v) in [
        ("physically_degraded", report.physically_degraded),
        ("reversely_degraded", report.reversely_degraded),
    ] {
        s += &format!("{name} {} residual {}\n", v.holds, fmt_f(v.residual));
    }
    let st = &report.stochastically_degraded;
    s += &format!(
        "stochastically_degraded {} residual {}\n",
        st.holds,
        fmt_f(st.residual)
    );
    if let Some(w) = &st.witness {
        let al = spec.channel.alphabets();
        for (i, row) in w.rows.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|&v| fmt_f(v)).collect();
            s += &format!(
                "witness y1={} s1={} {}\n",
                i / al.s1,
                i % al.s1,
                cells.join(" ")
            );
        }
    }
    Ok(s.into_bytes())
}

#[derive(Serialize)]
struct EstimatorOutput {
    d1_min: f64,
    d2_min: f64,
    /// Rows `(a, x, y1, y2, ŝ1, ŝ2)`.
    table: Vec<[usize; 6]>,
}

fn estimators(spec: &LoadedSpec, format: Format) -> Result<Vec<u8>> {
    let (e1, e2, d1, d2) = minimal_distortions(&spec.channel, &spec.law)?;
    let [na, nx, ny1, ny2] = e1.dims();
    let mut table = Vec::new();
    for a in 0..na {
        for x in 0..nx {
            for y1 in 0..ny1 {
                for y2 in 0..ny2 {
                    table.push([a, x, y1, y2, e1.get(a, x, y1, y2), e2.get(a, x, y1, y2)]);
                }
            }
        }
    }
    let output = EstimatorOutput {
        d1_min: d1,
        d2_min: d2,
        table,
    };
    if format == Format::Json {
        return to_json(&output);
    }
    let mut s = format!("d1_min {}\nd2_min {}\n", fmt_f(d1), fmt_f(d2));
    let header: Vec<String> = ["a", "x", "y1", "y2", "s1_hat", "s2_hat"]
        .iter()
        .map(|h| h.to_string())
        .collect();
    let rows: Vec<Vec<String>> = output
        .table
        .iter()
        .map(|r| r.iter().map(usize::to_string).collect())
        .collect();
    s += &String::from_utf8(csv_bytes(&header, &rows)?).expect("csv output is utf-8");
    Ok(s.into_bytes())
}

fn region_csv(sweep: &RegionSweep) -> Result<Vec<u8>> {
    let mut header = sweep.param_names.clone();
    header.extend(
        ["r1_max", "r2_prime_or_rsec", "rate", "d1_min", "d2_min", "degraded", "pareto"]
            .iter()
            .map(|h| h.to_string()),
    );
    let rows: Vec<Vec<String>> = sweep
        .points
        .iter()
        .map(|p| {
            let b = &p.bounds;
            let mut r: Vec<String> = p.params.iter().map(|&v| fmt_f(v)).collect();
            r.push(b.r1_max.map(fmt_f).unwrap_or_default());
            r.extend([b.r2_prime, b.rate, b.d1_min, b.d2_min].map(fmt_f));
            r.push(u8::from(b.degraded.holds).to_string());
            r.push(u8::from(p.pareto).to_string());
            r
        })
        .collect();
    csv_bytes(&header, &rows)
}

fn region(
    spec: &LoadedSpec,
    theorem: u8,
    sweep: SweepArgs,
    family: FamilyArg,
    format: Format,
) -> Result<Vec<u8>> {
    let theorem = Theorem::from_number(theorem)?;
    let family = match family {
        FamilyArg::Binary => LawFamily::BinaryExample,
        FamilyArg::Generic => LawFamily::Generic,
        FamilyArg::Auto if spec.binary.is_some() => LawFamily::BinaryExample,
        FamilyArg::Auto => LawFamily::Generic,
    };
    let cfg = SweepConfig {
        grid: sweep.grid,
        samples: sweep.samples,
        seed: sweep.seed,
    };
    let result = with_threads(|| sweep_region(&spec.channel, theorem, family, &cfg))?;
    match format {
        Format::Json => to_json(&result),
        Format::Text => region_csv(&result),
    }
}

fn lemma1(lambda: f64, alpha: f64, pq: Option<(f64, f64)>, grid: Option<usize>, format: Format) -> Result<Vec<u8>> {
    let points: Vec<(f64, f64)> = match (pq, grid) {
        (Some(pq), None) => vec![pq],
        (None, Some(n)) => {
            let axis = grid_axis(n);
            axis.iter()
                .flat_map(|&p| axis.iter().map(move |&q| (p, q)))
                .collect()
        }
        _ => {
            return Err(IsacError::InvalidArgument(
                "give either --p and --q, or --grid".into(),
            ))
        }
    };
    let reports = points
        .iter()
        .map(|&(p, q)| reconcile(&BinaryParams::new(lambda, alpha, p, q)?))
        .collect::<Result<Vec<_>>>()?;
    if format == Format::Json {
        return to_json(&reports);
    }
    let mut header: Vec<String> = ["lambda", "alpha", "p", "q", "r_closed", "r_oracle"]
        .iter()
        .map(|h| h.to_string())
        .collect();
    header.extend(TermBreakdown::NAMES.iter().map(|n| format!("{n}_closed")));
    header.extend(
        ["d1_closed", "d1_oracle", "d2_closed", "d2_oracle", "max_term_gap", "flagged"]
            .iter()
            .map(|h| h.to_string()),
    );
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            let bp = r.params;
            let mut row: Vec<String> = [bp.lambda, bp.alpha, bp.p, bp.q, r.closed.r_max, r.oracle.r_max]
                .map(fmt_f)
                .to_vec();
            row.extend(r.closed.terms.as_array().map(fmt_f));
            row.extend(
                [
                    r.closed.d1_min,
                    r.oracle.d1_min,
                    r.closed.d2_min,
                    r.oracle.d2_min,
                    r.max_term_gap(),
                ]
                .map(fmt_f),
            );
            row.push(r.flagged.join(";"));
            row
        })
        .collect();
    csv_bytes(&header, &rows)
}

fn simulate_cmd(spec: &LoadedSpec, n: u64, seed: u64, format: Format) -> Result<Vec<u8>> {
    let report = with_threads(|| simulate(&spec.channel, &spec.law, n, seed))?;
    if format == Format::Json {
        return to_json(&report);
    }
    let s = format!(
        "n {}\nseed {}\nd1_analytic {}\nd1_empirical {}\nd2_analytic {}\nd2_empirical {}\nl1_gap {}\n",
        report.n,
        report.seed,
        fmt_f(report.d1_analytic),
        fmt_f(report.d1_empirical),
        fmt_f(report.d2_analytic),
        fmt_f(report.d2_empirical),
        fmt_f(report.l1_gap),
    );
    Ok(s.into_bytes())
}

/// Executes a parsed command, writing results to `out` or the `--out` file.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let format = cli.format;
    match cli.command {
        Command::CheckDegraded { spec, strict, tol } => {
            let bytes = check_degraded(&load_spec(&spec)?, strict, tol, format)?;
            emit(out, None, &bytes)
        }
        Command::Estimators { spec } => {
            let bytes = estimators(&load_spec(&spec)?, format)?;
            emit(out, None, &bytes)
        }
        Command::Region {
            spec,
            theorem,
            sweep,
            family,
            out: path,
        } => {
            let bytes = region(&load_spec(&spec)?, theorem, sweep, family, format)?;
            emit(out, path.as_deref(), &bytes)
        }
        Command::Lemma1 {
            lambda,
            alpha,
            p,
            q,
            grid,
            out: path,
        } => {
            let bytes = lemma1(lambda, alpha, p.zip(q), grid, format)?;
            emit(out, path.as_deref(), &bytes)
        }
        Command::Simulate { spec, n, seed } => {
            let bytes = simulate_cmd(&load_spec(&spec)?, n, seed, format)?;
            emit(out, None, &bytes)
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return 1;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
