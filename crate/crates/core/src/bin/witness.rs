use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use witness_core::error::VerifyError;
use witness_core::io::{self, render_svg, stats_table, StatsRow, SvgOptions};
use witness_core::verify::{
    approx_gap_check, check_non_collapse, check_trace, enumerate_placements_with, equilateral_search, falsify_with,
    EnumerateOptions, FalsifyOptions, Outcome, VerifyReport,
};
use witness_core::witness::{approx_set, build_rational, figure5_config, Figure5Options};
use witness_core::{tol, Norm2, Rational, Vec2, WitnessSet};

/// Finite witness sets forcing distances under rho-preserving maps between
/// normed planes.
#[derive(Parser, Debug)]
#[command(name = "witness", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Build the witness set for a rational ratio or an approximation bound.
    Build(BuildArgs),
    /// Search for rho-preserving placements into a target plane.
    Verify(VerifyArgs),
    /// Build the eleven-point configuration.
    Figure5(Figure5Args),
    /// Size table of witness sets for q = m/n.
    Stats(StatsArgs),
    /// Look for four points pairwise at the same distance.
    Equilateral4(EquilateralArgs),
}

fn parse_vec2(s: &str) -> Result<Vec2, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected x,y, got {s:?}"))?;
    let p = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    let v = Vec2::new(p(a)?, p(b)?);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("non-finite point {s:?}"))
    }
}

fn parse_norm(s: &str) -> Result<Norm2, String> {
    Norm2::from_flag(s).map_err(|e| e.to_string())
}

#[derive(Args, Debug)]
struct BuildArgs {
    /// Distance ratio m/n: the anchors end up q*rho apart.
    #[arg(long, conflicts_with = "eps", required_unless_present = "eps")]
    q: Option<Rational>,
    /// Approximation bound for an arbitrary anchor distance.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    #[arg(long, default_value = "p:2", value_parser = parse_norm)]
    source_norm: Norm2,
    #[arg(long, default_value = "0,0", value_parser = parse_vec2)]
    x: Vec2,
    /// Second anchor. Defaults to q*rho along the first axis (required with --eps).
    #[arg(long, value_parser = parse_vec2)]
    y: Option<Vec2>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Enumerate,
    Falsify,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value = "p:2", value_parser = parse_norm)]
    target_norm: Norm2,
    #[arg(long, value_enum, default_value_t = ModeArg::Enumerate)]
    mode: ModeArg,
    #[arg(long, default_value_t = 1000)]
    restarts: u64,
    #[arg(long, env = "WITNESS_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = tol::VERIFY)]
    tol: f64,
    /// Directions tried for the first free edge (non-Euclidean targets).
    #[arg(long, default_value_t = 720)]
    grid: usize,
    /// Also steer the enumeration by the sub-segment distances of the trace,
    /// after checking every construction step locally.
    #[arg(long)]
    inductive: bool,
    /// Count non-injective placements as violations too.
    #[arg(long)]
    allow_non_injective: bool,
    #[arg(long, default_value_t = 1 << 24)]
    leaf_cap: u64,
    /// Placements kept per list in the report file.
    #[arg(long, default_value_t = 64)]
    max_stored: usize,
    /// Write a placement (the first violation, else the first placement) as SVG.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Figure5Args {
    #[arg(long, default_value = "p:2", value_parser = parse_norm)]
    source_norm: Norm2,
    /// Edge length; the anchors end up 2d apart.
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    /// Direction of y from x, in radians.
    #[arg(long, default_value_t = 0.0)]
    angle: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct StatsArgs {
    #[arg(long, default_value_t = 4)]
    max_m: u64,
    #[arg(long, default_value_t = 4)]
    max_n: u64,
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    #[arg(long, default_value = "p:2", value_parser = parse_norm)]
    source_norm: Norm2,
    #[arg(long)]
    csv: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EquilateralArgs {
    #[arg(long, default_value = "p:2", value_parser = parse_norm)]
    target_norm: Norm2,
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    restarts: u64,
    #[arg(long, env = "WITNESS_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

type Fallible<T> = Result<T, Box<dyn std::error::Error>>;

fn emit(out: &Option<PathBuf>, text: &str) -> Fallible<()> {
    match out {
        Some(p) => io::write_file(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_json<T: Serialize>(out: &Option<PathBuf>, v: &T) -> Fallible<()> {
    emit(out, &io::to_json(v))
}

fn write_svg(path: &Option<PathBuf>, w: &WitnessSet, images: Option<&[Vec2]>) -> Fallible<()> {
    if let Some(p) = path {
        io::write_file(p, &render_svg(w, images, &SvgOptions::default()))?;
    }
    Ok(())
}

fn build(a: BuildArgs) -> Fallible<ExitCode> {
    let w = match (a.q, a.eps) {
        (Some(q), _) => {
            let y = a.y.unwrap_or_else(|| a.x + a.source_norm.sphere_point(q.to_f64() * a.rho, 0.0));
            build_rational(a.x, y, q, a.rho, &a.source_norm)?
        }
        (None, Some(eps)) => {
            let y = a.y.ok_or("--eps needs --y")?;
            approx_set(a.x, y, eps, a.rho, &a.source_norm)?
        }
        (None, None) => unreachable!("clap enforces one of --q, --eps"),
    };
    eprintln!("{} points, {} edges, depth {}", w.len(), w.edges.len(), w.trace.depth());
    emit_json(&a.out, &w)?;
    write_svg(&a.svg, &w, None)?;
    Ok(ExitCode::SUCCESS)
}

fn verify(a: VerifyArgs) -> Fallible<ExitCode> {
    let w = io::read_witness(&a.input)?;
    let target = &a.target_norm;
    let require_injective = !a.allow_non_injective;
    let mut verdict_extra = Vec::new();
    let report: VerifyReport = match a.mode {
        ModeArg::Falsify => {
            let opts = FalsifyOptions {
                restarts: a.restarts.max(1),
                seed: a.seed,
                tol: a.tol,
                require_injective,
                store_cap: a.max_stored,
                ..Default::default()
            };
            falsify_with(&w, target, &opts)
        }
        ModeArg::Enumerate => {
            let opts = EnumerateOptions {
                direction_grid: a.grid.max(1),
                tol: a.tol,
                require_injective,
                prune_collisions: a.inductive && require_injective,
                leaf_cap: a.leaf_cap,
                store_cap: a.max_stored,
                inductive: a.inductive,
                ..Default::default()
            };
            if a.inductive {
                let c = check_trace(&w, target, &opts);
                eprintln!("trace: {} steps, {} distinct, {} leaves", c.nodes, c.distinct, c.leaves);
                if !c.holds() {
                    for f in &c.failures {
                        eprintln!("  step {:?} {:?} {:?}: {}", f.rule, f.ends, f.ratio.map(|r| r.to_string()), f.reason);
                    }
                    emit_json(&a.out, &c)?;
                    return Ok(ExitCode::from(2));
                }
            }
            match enumerate_placements_with(&w, target, &opts) {
                Ok(r) => r,
                Err(e @ VerifyError::Ordering(_)) => {
                    return Err(format!("{e}; rerun with --inductive").into());
                }
                Err(e) => return Err(e.into()),
            }
        }
    };
    let mut outcome = report.outcome();
    if w.approximate && outcome == Outcome::Holds {
        let ok = approx_gap_check(&w, target, &report)?;
        verdict_extra.push(format!("gap within eps: {ok}"));
    }
    if w.config_graph.is_some() {
        let ok = check_non_collapse(&w, target, &report)?;
        verdict_extra.push(format!("non-collapse: {ok}"));
        if !ok && outcome == Outcome::Holds {
            outcome = Outcome::Violated;
        }
    }
    eprintln!(
        "{:?}: {} consistent, {} injective, {} violations, budget {}{}{}",
        outcome,
        report.placements_found,
        report.injective_found,
        report.violations.len(),
        report.search_budget_used,
        if report.exhausted { " (exhausted)" } else { "" },
        verdict_extra.iter().map(|s| format!(", {s}")).collect::<String>()
    );
    let shown = report.violations.first().or(report.placements.first());
    write_svg(&a.svg, &w, shown.map(|p| p.images.as_slice()))?;
    emit_json(&a.out, &report)?;
    Ok(ExitCode::from(outcome.exit_code() as u8))
}

fn figure5(a: Figure5Args) -> Fallible<ExitCode> {
    if !(a.d > 0.0 && a.d.is_finite()) {
        return Err(format!("--d must be positive, got {}", a.d).into());
    }
    let y = a.source_norm.sphere_point(2.0 * a.d, a.angle);
    let w = figure5_config(Vec2::ZERO, y, &a.source_norm, &Figure5Options::default())?;
    if let Some(note) = &w.trace.note {
        eprintln!("{note}");
    }
    eprintln!("{} points, {} edges, max residual {:e}", w.len(), w.edges.len(), w.max_edge_residual());
    emit_json(&a.out, &w)?;
    write_svg(&a.svg, &w, None)?;
    Ok(ExitCode::SUCCESS)
}

fn stats(a: StatsArgs) -> Fallible<ExitCode> {
    if a.max_m == 0 || a.max_n == 0 {
        return Err("--max-m and --max-n must be at least 1".into());
    }
    let rows = stats_table(a.max_m, a.max_n, a.rho, &a.source_norm)?;
    let text = if a.csv { StatsRow::csv(&rows) } else { StatsRow::text(&rows) };
    emit(&a.out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn equilateral4(a: EquilateralArgs) -> Fallible<ExitCode> {
    let r = equilateral_search(&a.target_norm, a.d, a.n, a.restarts, a.seed)?;
    eprintln!("best residual {:e} over {} restarts", r.best_residual, a.restarts.max(1));
    emit_json(&a.out, &r)?;
    // a strictly convex plane admits no four equidistant points
    let found = r.best_residual <= tol::CONSTRUCTION;
    let claimed_impossible = a.n >= 4 && a.target_norm.claims_strictly_convex();
    Ok(if found && claimed_impossible { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = match cli.cmd {
        Cmd::Build(a) => build(a),
        Cmd::Verify(a) => verify(a),
        Cmd::Figure5(a) => figure5(a),
        Cmd::Stats(a) => stats(a),
        Cmd::Equilateral4(a) => equilateral4(a),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
