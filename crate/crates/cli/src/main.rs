//! `hypertree`: batch front end for the hypertree library.
//!
//! Exit codes: 0 success, 1 invalid input, 2 resource budget exhausted,
//! 3 acceptance failure.
// `!(x > a)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use hypertree::asymptotics::{
    ln_asymptotic_ey, sample_w_batch, second_moment_ratio, select_jmax, WSampleRecord,
};
use hypertree::config::{sample_configuration, sample_simple_counted};
use hypertree::cycles::census_cycles;
use hypertree::exact::{
    brute_moments, exact_expected_y, exact_second_moment, num_partitions, BruteStatistic,
};
use hypertree::exact::{ln_expected_y, MomentMode};
use hypertree::laplace::{
    laplace_prefactors, laplace_record, ridge, ridge_equation_residual, ridge_roots, ridge_slack,
};
use hypertree::laplace::{LaplaceRecord, Prefactors};
use hypertree::mc::{run_mc, McOptions, McSummary};
use hypertree::params::admissible_ladder;
use hypertree::threshold::{classify_with_rho, l, rho, round_half_up, table1, Table1Row};
use hypertree::verify::{run_suite, suite_names, CriterionOutcome};
use hypertree::{Configuration, Error, Execution, ModelParams, DEFAULT_BUDGET, DEFAULT_SEED};

use output::{emit, emit_one, emit_rows, sink, write_json, Format};

/// Number of admissible `n` used when `--n` is omitted.
const LADDER: usize = 6;
const TABLE_DECIMALS: i32 = 3;

#[derive(Parser)]
#[command(
    name = "hypertree",
    version,
    about = "Spanning trees in random regular uniform hypergraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Run data-parallel loops on one thread. Results are identical either way.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Args, Clone, Copy)]
struct Rs {
    #[arg(long)]
    r: usize,
    #[arg(long)]
    s: usize,
}

#[derive(Args, Clone, Copy)]
struct Rsn {
    #[arg(long)]
    r: usize,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    n: usize,
}

impl Rsn {
    fn params(self) -> hypertree::Result<ModelParams> {
        hypertree::params::validate_params(self.r, self.s, self.n)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Divisibility report for (r, s, n).
    Params { r: usize, s: usize, n: usize },
    /// Draw one configuration (or, with --simple, a simple hypergraph).
    Sample {
        #[command(flatten)]
        p: Rsn,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Project to a hypergraph instead of printing the configuration.
        #[arg(long)]
        project: bool,
        /// Reject until simple; the value caps the number of rejections.
        #[arg(long, value_name = "MAX_REJECTS")]
        simple: Option<u64>,
    },
    /// Cycle census of a sampled configuration, or of one read from --input.
    Census {
        #[arg(long, required_unless_present = "input")]
        r: Option<usize>,
        #[arg(long, required_unless_present = "input")]
        s: Option<usize>,
        #[arg(long, required_unless_present = "input")]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        jmax: usize,
        /// Configuration JSON as written by `sample`.
        #[arg(long, conflicts_with_all = ["r", "s", "n"])]
        input: Option<PathBuf>,
    },
    /// Exact moments from the closed forms, checked against exhaustive enumeration.
    Exact {
        #[command(flatten)]
        p: Rsn,
        /// Cap on the number of configurations enumerated.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// First and second moments along admissible n (the first six when --n is omitted).
    Moments {
        #[command(flatten)]
        rs: Rs,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Threshold ρ(s) with its bounds, and the phase of r when given.
    Threshold {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        r: Option<usize>,
    },
    /// Rows (s, ρ⁻, ρ, ρ⁺) rounded half-up to three decimals.
    Table1 {
        #[arg(long, default_value_t = 5)]
        s_lo: usize,
        #[arg(long, default_value_t = 12)]
        s_hi: usize,
    },
    /// Stationary point, Hessian and ridge roots of the second-moment exponent.
    Laplace {
        #[command(flatten)]
        rs: Rs,
        /// Also report the finite-n prefactors.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Ridge equation samples for plotting, with the detected roots.
    Ridge {
        #[command(flatten)]
        rs: Rs,
        #[arg(long, default_value_t = 50.0)]
        x_max: f64,
        #[arg(long, default_value_t = 2000)]
        steps: usize,
    },
    /// Samples of the limiting variable W.
    Wdist {
        #[command(flatten)]
        rs: Rs,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        jstart: usize,
        /// Defaults to the smallest j_max whose tail bound is below 1e-12.
        #[arg(long)]
        jmax: Option<usize>,
    },
    /// Monte Carlo cycle counts and simplicity, connectivity and spanning-tree rates.
    Mc {
        #[command(flatten)]
        rs: Rs,
        /// Defaults to the first six admissible n.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 4)]
        jmax: usize,
        /// Step budget for each spanning-tree search; exhausted searches are censored.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Skip the spanning-tree search.
        #[arg(long)]
        no_trees: bool,
    },
    /// Run an acceptance suite.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(suite_names()))]
        suite: String,
    },
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(std::io::Error),
    Json(serde_json::Error),
    Acceptance(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Json(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(Error::BudgetExceeded { .. } | Error::RejectionLimit(_)) => 2,
            Failure::Acceptance(_) => 3,
            _ => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(e) => e.to_string(),
            Failure::Json(e) => format!("invalid input: {e}"),
            Failure::Acceptance(n) => format!("{n} criteria failed"),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let Common {
        format,
        out,
        sequential,
    } = cli.common;
    let out = out.as_deref();
    let exec = if sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    match cli.command {
        Command::Params { r, s, n } => cmd_params(r, s, n, out, format),
        Command::Sample {
            p,
            seed,
            project,
            simple,
        } => cmd_sample(p, seed, project, simple, out, format),
        Command::Census {
            r,
            s,
            n,
            seed,
            jmax,
            input,
        } => {
            let config = match input {
                Some(path) => read_configuration(&path)?,
                // clap guarantees all three are present without --input
                None => sample_configuration(
                    hypertree::params::validate_params(r.unwrap(), s.unwrap(), n.unwrap())?,
                    seed,
                )?,
            };
            cmd_census(&config, jmax, out, format)
        }
        Command::Exact { p, budget } => cmd_exact(p, budget, exec, out, format),
        Command::Moments { rs, n } => cmd_moments(rs, n, out, format),
        Command::Threshold { s, r } => cmd_threshold(s, r, out, format),
        Command::Table1 { s_lo, s_hi } => {
            emit_rows(out, format, &table1_rounded(s_lo, s_hi, exec)?)?;
            Ok(())
        }
        Command::Laplace { rs, n } => cmd_laplace(rs, n, out, format),
        Command::Ridge { rs, x_max, steps } => cmd_ridge(rs, x_max, steps, out, format),
        Command::Wdist {
            rs,
            seed,
            trials,
            jstart,
            jmax,
        } => cmd_wdist(rs, seed, trials, jstart, jmax, exec, out, format),
        Command::Mc {
            rs,
            n,
            seed,
            trials,
            jmax,
            budget,
            no_trees,
        } => {
            if trials == 0 {
                return Err(Error::InvalidParams("--trials must be at least 1".into()).into());
            }
            let opts = McOptions {
                trees: !no_trees,
                budget,
                ..McOptions::new(trials, seed, jmax)
            };
            cmd_mc(rs, n, opts, exec, out, format)
        }
        Command::Verify { suite } => cmd_verify(&suite, exec, out, format),
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct ParamsRow {
    r: usize,
    s: usize,
    n: usize,
    d1: bool,
    d2: bool,
    admissible: bool,
    two_two: bool,
}

fn cmd_params(r: usize, s: usize, n: usize, out: Option<&Path>, format: Format) -> Outcome {
    // Range errors (r, s < 2, n < 1) come from here.
    let p = ModelParams::new(r, s, n)?;
    let report = p.report();
    let row = ParamsRow {
        r,
        s,
        n,
        d1: report.d1,
        d2: report.d2,
        admissible: report.admissible(),
        two_two: p.is_two_two(),
    };
    emit_one(out, format, &row)?;
    p.require_admissible()?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct PointRow {
    part: usize,
    cell: usize,
    slot: usize,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct EdgeRow {
    edge: usize,
    /// Space-separated vertex labels.
    vertices: String,
}

fn cmd_sample(
    p: Rsn,
    seed: u64,
    project: bool,
    simple: Option<u64>,
    out: Option<&Path>,
    format: Format,
) -> Outcome {
    let params = p.params()?;
    if let Some(max_rejects) = simple {
        let (h, rejects) = sample_simple_counted(params, seed, max_rejects)?;
        eprintln!("accepted after {rejects} rejections");
        emit(out, format, &h, &edge_rows(&h.edges))?;
        return Ok(());
    }
    let config = sample_configuration(params, seed)?;
    if project {
        let h = config.project();
        emit(out, format, &h, &edge_rows(&h.edges))?;
    } else {
        let rows: Vec<PointRow> = config
            .parts()
            .iter()
            .enumerate()
            .flat_map(|(part, pts)| {
                pts.iter().map(move |pt| PointRow {
                    part,
                    cell: pt.cell,
                    slot: pt.slot,
                })
            })
            .collect();
        emit(out, format, &config, &rows)?;
    }
    Ok(())
}

fn edge_rows(edges: &[Vec<usize>]) -> Vec<EdgeRow> {
    edges
        .iter()
        .enumerate()
        .map(|(edge, e)| EdgeRow {
            edge,
            vertices: e
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        })
        .collect()
}

fn read_configuration(path: &Path) -> Result<Configuration, Failure> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct CensusRow {
    j: usize,
    count: u64,
    /// Pairs of parts sharing three or more cells (j = 2 only).
    overlaps: u64,
}

fn cmd_census(config: &Configuration, jmax: usize, out: Option<&Path>, format: Format) -> Outcome {
    let census = census_cycles(config, jmax);
    let overlaps: u64 = census.overlaps.values().sum();
    let rows: Vec<CensusRow> = (1..=jmax)
        .map(|j| CensusRow {
            j,
            count: census.get(j),
            overlaps: if j == 2 { overlaps } else { 0 },
        })
        .collect();
    emit(out, format, &census, &rows)?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct ExactRow {
    r: usize,
    s: usize,
    n: usize,
    configurations: String,
    ey_formula: String,
    ey_enumeration: String,
    ey2_formula: String,
    ey2_enumeration: String,
    agree: bool,
}

fn cmd_exact(p: Rsn, budget: u64, exec: Execution, out: Option<&Path>, format: Format) -> Outcome {
    let params = p.params()?;
    let configurations = num_partitions(params.points(), params.s)?.to_string();
    let ey = exact_expected_y(params)?;
    let ey_brute = brute_moments(params, &[], BruteStatistic::Y, budget, exec)?;
    let ey2 = exact_second_moment(params, MomentMode::Exact)?
        .exact()
        .cloned()
        .expect("exact mode");
    let ey2_brute = brute_moments(params, &[], BruteStatistic::YSquared, budget, exec)?;
    let row = ExactRow {
        r: p.r,
        s: p.s,
        n: p.n,
        configurations,
        agree: ey == ey_brute && ey2 == ey2_brute,
        ey_formula: ey.to_string(),
        ey_enumeration: ey_brute.to_string(),
        ey2_formula: ey2.to_string(),
        ey2_enumeration: ey2_brute.to_string(),
    };
    emit_one(out, format, &row)?;
    Ok(())
}

fn ladder(r: usize, s: usize, n: Option<usize>) -> Vec<usize> {
    n.map_or_else(|| admissible_ladder(r, s, LADDER), |n| vec![n])
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct MomentRow {
    r: usize,
    s: usize,
    n: usize,
    ey: String,
    ln_ey: f64,
    ln_ey_asymptotic: f64,
    ln_ey2: f64,
    /// `E Y² / (E Y)²`.
    ratio: f64,
    /// The n → ∞ value of `ratio`, where it exists.
    ratio_limit: Option<f64>,
}

fn cmd_moments(rs: Rs, n: Option<usize>, out: Option<&Path>, format: Format) -> Outcome {
    let limit = second_moment_ratio(rs.r, rs.s).ok();
    let rows = ladder(rs.r, rs.s, n)
        .into_iter()
        .map(|n| {
            let p = hypertree::params::validate_params(rs.r, rs.s, n)?;
            let ln_ey = ln_expected_y(p)?;
            let ln_ey2 = exact_second_moment(p, MomentMode::LogFloat)?.ln();
            Ok(MomentRow {
                r: rs.r,
                s: rs.s,
                n,
                ey: exact_expected_y(p)?.to_string(),
                ln_ey,
                ln_ey_asymptotic: ln_asymptotic_ey(p)?,
                ln_ey2,
                ratio: (ln_ey2 - 2.0 * ln_ey).exp(),
                ratio_limit: limit,
            })
        })
        .collect::<hypertree::Result<Vec<_>>>()?;
    emit_rows(out, format, &rows)?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct ThresholdRow {
    s: usize,
    rho_minus: f64,
    rho: f64,
    rho_plus: f64,
    expansion: f64,
    l_at_rho_minus: f64,
    l_at_rho_plus: f64,
    residual: f64,
    rho_def_mismatch: f64,
    r: Option<usize>,
    phase: Option<String>,
}

fn cmd_threshold(s: usize, r: Option<usize>, out: Option<&Path>, format: Format) -> Outcome {
    let rep = rho(s)?;
    let row = ThresholdRow {
        s,
        rho_minus: rep.rho_minus,
        rho: rep.rho,
        rho_plus: rep.rho_plus,
        expansion: rep.expansion,
        l_at_rho_minus: l(rep.rho_minus, s)?,
        l_at_rho_plus: l(rep.rho_plus, s)?,
        residual: rep.residual,
        rho_def_mismatch: rep.rho_def_mismatch,
        r,
        phase: r.map(|r| format!("{:?}", classify_with_rho(r, s, rep.rho)).to_lowercase()),
    };
    emit_one(out, format, &row)?;
    Ok(())
}

fn table1_rounded(s_lo: usize, s_hi: usize, exec: Execution) -> hypertree::Result<Vec<Table1Row>> {
    let round = |x| round_half_up(x, TABLE_DECIMALS);
    Ok(table1(s_lo, s_hi, exec)?
        .into_iter()
        .map(|row| Table1Row {
            s: row.s,
            rho_minus: round(row.rho_minus),
            rho: round(row.rho),
            rho_plus: round(row.rho_plus),
        })
        .collect())
}

#[derive(Serialize)]
struct LaplaceOutput {
    #[serde(flatten)]
    record: LaplaceRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    prefactors: Option<Prefactors>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct LaplaceRow {
    r: usize,
    s: usize,
    alpha0: f64,
    beta0: f64,
    phi0: f64,
    det_h0_closed: f64,
    det_h0_numeric: f64,
    /// Space-separated.
    ridge_roots: String,
}

fn cmd_laplace(rs: Rs, n: Option<usize>, out: Option<&Path>, format: Format) -> Outcome {
    let record = laplace_record(rs.r, rs.s)?;
    let prefactors = n.map(|n| laplace_prefactors(rs.r, rs.s, n)).transpose()?;
    let row = LaplaceRow {
        r: record.r,
        s: record.s,
        alpha0: record.alpha0,
        beta0: record.beta0,
        phi0: record.phi0,
        det_h0_closed: record.det_h0_closed,
        det_h0_numeric: record.det_h0_numeric,
        ridge_roots: record
            .ridge_roots
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" "),
    };
    emit(out, format, &LaplaceOutput { record, prefactors }, &[row])?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct RidgeRow {
    x: f64,
    alpha: f64,
    beta: f64,
    slack: f64,
    residual: f64,
}

#[derive(Serialize)]
struct RidgeOutput {
    r: usize,
    s: usize,
    roots: Vec<f64>,
    samples: Vec<RidgeRow>,
}

fn cmd_ridge(rs: Rs, x_max: f64, steps: usize, out: Option<&Path>, format: Format) -> Outcome {
    if !(x_max > 0.0) || steps == 0 {
        return Err(Error::InvalidParams("need --x-max > 0 and --steps >= 1".into()).into());
    }
    let roots = ridge_roots(rs.r, rs.s, x_max, steps)?;
    let width = (x_max + 1.0) / steps as f64;
    // Points where the ridge leaves the domain are skipped.
    let samples: Vec<RidgeRow> = (1..=steps)
        .filter_map(|i| {
            let x = -1.0 + width * i as f64;
            let p = ridge(x, rs.r, rs.s).ok()?;
            Some(RidgeRow {
                x,
                alpha: p.alpha,
                beta: p.beta,
                slack: ridge_slack(x, rs.r, rs.s).ok()?,
                residual: ridge_equation_residual(x, rs.r, rs.s).ok()?,
            })
        })
        .collect();
    let json = RidgeOutput {
        r: rs.r,
        s: rs.s,
        roots,
        samples,
    };
    emit(out, format, &json, &json.samples)?;
    Ok(())
}

#[derive(Serialize)]
struct WOutput {
    r: usize,
    s: usize,
    j_start: usize,
    j_max: usize,
    tail_bound: Option<f64>,
    mean: f64,
    second_moment: f64,
    samples: Vec<WSampleRecord>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_wdist(
    rs: Rs,
    seed: u64,
    trials: usize,
    j_start: usize,
    jmax: Option<usize>,
    exec: Execution,
    out: Option<&Path>,
    format: Format,
) -> Outcome {
    if trials == 0 {
        return Err(Error::InvalidParams("--trials must be at least 1".into()).into());
    }
    let (j_max, tail_bound) = match jmax {
        Some(j) => (j, None),
        None => {
            let c = select_jmax(rs.r, rs.s, j_start)?;
            (c.j_max, Some(c.tail_bound))
        }
    };
    let ws = sample_w_batch(rs.r, rs.s, j_start, j_max, seed, trials, exec)?;
    let mean = ws.iter().sum::<f64>() / trials as f64;
    let second_moment = ws.iter().map(|w| w * w).sum::<f64>() / trials as f64;
    let samples: Vec<WSampleRecord> = ws
        .into_iter()
        .enumerate()
        .map(|(i, sample)| WSampleRecord {
            seed,
            index: i as u64,
            j_start,
            j_max,
            sample,
        })
        .collect();
    let json = WOutput {
        r: rs.r,
        s: rs.s,
        j_start,
        j_max,
        tail_bound,
        mean,
        second_moment,
        samples,
    };
    emit(out, format, &json, &json.samples)?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct McRow {
    r: usize,
    s: usize,
    n: usize,
    trials: usize,
    seed: u64,
    simple_rate: f64,
    simple_se: f64,
    connected_rate: Option<f64>,
    tree_rate: Option<f64>,
    tree_se: Option<f64>,
    censored: usize,
    /// Space-separated `mean±se` for X_1, X_2, ...
    cycle_means: String,
}

fn mc_row(m: &McSummary) -> McRow {
    McRow {
        r: m.params.r,
        s: m.params.s,
        n: m.params.n,
        trials: m.options.trials,
        seed: m.options.seed,
        simple_rate: m.simple_rate.mean,
        simple_se: m.simple_rate.se,
        connected_rate: m.connected_rate.map(|e| e.mean),
        tree_rate: m.tree_rate.map(|e| e.mean),
        tree_se: m.tree_rate.map(|e| e.se),
        censored: m.censored,
        cycle_means: m
            .cycle_means
            .iter()
            .map(|e| format!("{}±{}", e.mean, e.se))
            .collect::<Vec<_>>()
            .join(" "),
    }
}

fn cmd_mc(
    rs: Rs,
    n: Option<usize>,
    opts: McOptions,
    exec: Execution,
    out: Option<&Path>,
    format: Format,
) -> Outcome {
    let summaries = ladder(rs.r, rs.s, n)
        .into_iter()
        .map(|n| {
            run_mc(
                hypertree::params::validate_params(rs.r, rs.s, n)?,
                opts,
                exec,
            )
        })
        .collect::<hypertree::Result<Vec<_>>>()?;
    let rows: Vec<McRow> = summaries.iter().map(mc_row).collect();
    emit(out, format, &summaries, &rows)?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct VerifyRow {
    name: String,
    passed: bool,
    seconds: f64,
    failures: String,
}

fn cmd_verify(suite: &str, exec: Execution, out: Option<&Path>, format: Format) -> Outcome {
    let outcomes: Vec<CriterionOutcome> = run_suite(suite, exec)?;
    for o in &outcomes {
        eprintln!("{}", o.line());
    }
    match format {
        Format::Json => write_json(&mut *sink(out)?, &outcomes)?,
        Format::Csv => {
            let rows: Vec<VerifyRow> = outcomes
                .iter()
                .map(|o| VerifyRow {
                    name: o.name.clone(),
                    passed: o.passed,
                    seconds: o.seconds,
                    failures: o.failures.join("; "),
                })
                .collect();
            emit_rows(out, format, &rows)?;
        }
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if failed > 0 {
        return Err(Failure::Acceptance(failed));
    }
    Ok(())
}
