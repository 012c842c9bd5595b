//! Command-line front end. Reports go to stdout as JSON, a one-line summary
//! goes to stderr. Exit codes: 0 success, 1 verification failure, 2 usage or
//! input errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use crate::bundled;
use crate::construct::{
    build_theorem1, build_theorem2, gadget_order, subset_mask, SimplexWitnessFile,
    Theorem1Instance, Theorem2Instance, TheoremReport, UnionWitnessFile, VerifyMode,
};
use crate::gadget::{self, BoxGadget, SearchOutcome};
use crate::report::RunReport;
use crate::setsys::{indices_of, SetSystem, SetSystemFile};

/// Environment variable selecting the worker thread count.
pub const THREADS_ENV: &str = "VCFOLD_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "vcfold",
    version,
    about = "Exact VC-dimension constructions and set-system tools"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for or verify box-gadget certificates.
    #[command(subcommand)]
    Gadget(GadgetCmd),
    /// Build union or simplex instances.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Produce the witness for one subset.
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// Check that an instance is shattered.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Finite set-system operations.
    #[command(subcommand)]
    Sys(SysCmd),
}

#[derive(Debug, Subcommand)]
pub enum GadgetCmd {
    /// Seeded hill-climb for a certificate.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        /// Family size; defaults to ⌊dim/2⌋(n+3)2^(n-2).
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Re-verify a certificate from scratch.
    Verify {
        file: PathBuf,
        /// Write the certificate back with its witnesses.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Where an instance comes from: a file, or built from `--d`/`--k` with a
/// gadget (bundled unless `--gadget` is given).
#[derive(Debug, Args, Clone)]
pub struct InstanceArgs {
    /// Instance JSON written by `construct`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Ambient dimension, at least 4; odd values are lowered by one.
    #[arg(long)]
    pub d: Option<usize>,
    /// Number of ranges per union (at least 2).
    #[arg(long)]
    pub k: Option<usize>,
    /// Gadget certificate to use instead of the bundled one.
    #[arg(long)]
    pub gadget: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ConstructCmd {
    /// Point set shattered by k-fold unions of half-spaces.
    Theorem1 {
        #[command(flatten)]
        src: InstanceArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Dual hyperplane set shattered by open k-simplices.
    Theorem2 {
        #[command(flatten)]
        src: InstanceArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum WitnessCmd {
    /// At most k half-spaces cutting out the subset.
    Union {
        #[command(flatten)]
        src: InstanceArgs,
        /// Comma-separated point indices; empty for the empty subset.
        #[arg(long, allow_hyphen_values = true)]
        subset: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// An open simplex meeting exactly the subset's hyperplanes.
    Simplex {
        #[command(flatten)]
        src: InstanceArgs,
        #[arg(long, allow_hyphen_values = true)]
        subset: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Sample,
}

#[derive(Debug, Args, Clone)]
pub struct ModeArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 256)]
    pub count: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also compute the VC-dimension of the induced witness system.
    #[arg(long)]
    pub vc_dim: bool,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// Check every selected subset of the union instance.
    Theorem1 {
        #[command(flatten)]
        src: InstanceArgs,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Check every selected subset of the simplex instance.
    Theorem2 {
        #[command(flatten)]
        src: InstanceArgs,
        #[command(flatten)]
        mode: ModeArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FoldOp {
    Union,
    Intersection,
}

#[derive(Debug, Subcommand)]
pub enum SysCmd {
    /// VC-dimension and a shattered witness set.
    Vcdim {
        #[arg(long)]
        input: PathBuf,
    },
    /// k-fold unions or intersections.
    Kfold {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = FoldOp::Union)]
        op: FoldOp,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Complement of every member set.
    Complement {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Traces on a subset of the ground set.
    Project {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        subset: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Largest number of traces on an m-element subset.
    Growth {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        m: usize,
    },
}

/// A command that could not run at all (exit code 2).
#[derive(Debug)]
pub struct UsageError(pub String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = std::result::Result<RunReport, UsageError>;

fn read_json<T: DeserializeOwned>(path: &Path) -> std::result::Result<T, UsageError> {
    let raw = fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&raw).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> std::result::Result<(), UsageError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| UsageError(format!("cannot write {}: {e}", path.display())))
}

fn parse_subset(raw: &str) -> std::result::Result<Vec<usize>, UsageError> {
    let raw = raw.trim();
    if raw.is_empty() {
        return Ok(Vec::new());
    }
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| UsageError(format!("subset: {s:?} is not an index")))
        })
        .collect()
}

fn read_system(path: &Path, report: &mut RunReport) -> std::result::Result<SetSystem, UsageError> {
    let file: SetSystemFile = read_json(path)?;
    let (sys, dropped) = file.into_system()?;
    if dropped > 0 {
        report
            .notes
            .push(format!("{dropped} duplicate sets dropped from input"));
    }
    report.param("duplicate_sets_dropped", dropped);
    Ok(sys)
}

/// Resolves a union instance, recording how it was obtained.
fn resolve_theorem1(
    src: &InstanceArgs,
    report: &mut RunReport,
) -> std::result::Result<Theorem1Instance, UsageError> {
    if let Some(path) = &src.input {
        report.param("input", path.display().to_string());
        return read_json(path);
    }
    let (Some(mut d), Some(k)) = (src.d, src.k) else {
        return Err(UsageError(
            "either --input or both --d and --k are required".into(),
        ));
    };
    if d % 2 == 1 {
        report.notes.push(format!(
            "odd d = {d}: building in R^{} (a shattered set there lifts to R^{d})",
            d - 1
        ));
        d -= 1;
    }
    report.param("d", d).param("k", k);
    let inst = match &src.gadget {
        Some(path) => {
            report.param("gadget", path.display().to_string());
            build_theorem1(d, k, read_json::<BoxGadget>(path)?)?
        }
        None => {
            report.param(
                "gadget",
                format!("bundled n={} dim={}", gadget_order(k), d / 2),
            );
            bundled::theorem1(d, k)?
        }
    };
    Ok(inst)
}

fn resolve_theorem2(
    src: &InstanceArgs,
    report: &mut RunReport,
) -> std::result::Result<Theorem2Instance, UsageError> {
    if let Some(path) = &src.input {
        report.param("input", path.display().to_string());
        let raw = fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
        // a dual bundle, or a union instance to dualize
        if let Ok(inst) = serde_json::from_str::<Theorem2Instance>(&raw) {
            return Ok(inst);
        }
        let base: Theorem1Instance = serde_json::from_str(&raw)
            .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
        let k = base.k;
        return Ok(build_theorem2(base, k)?);
    }
    let base = resolve_theorem1(src, report)?;
    let k = base.k;
    Ok(build_theorem2(base, k)?)
}

fn resolve_mode(
    m: &ModeArgs,
    report: &mut RunReport,
) -> std::result::Result<VerifyMode, UsageError> {
    match m.mode {
        ModeArg::Exhaustive => {
            report.param("mode", "exhaustive");
            Ok(VerifyMode::Exhaustive)
        }
        ModeArg::Sample => {
            let seed = m
                .seed
                .ok_or_else(|| UsageError("--seed is required with --mode sample".into()))?;
            report.param("mode", "sample").param("count", m.count);
            report.seed = Some(seed);
            Ok(VerifyMode::Sample {
                count: m.count,
                seed,
            })
        }
    }
}

fn theorem_result(report: &mut RunReport, r: TheoremReport) {
    report.ok = r.shattered;
    report.failing = r
        .failing_subsets
        .iter()
        .map(|s| json!({ "subset": s }))
        .collect();
    report.result = serde_json::to_value(&r).unwrap_or_default();
}

fn gadget_cmd(cmd: GadgetCmd) -> CmdResult {
    match cmd {
        GadgetCmd::Search {
            n,
            dim,
            seed,
            budget,
            size,
            output,
        } => {
            let mut report = RunReport::new("gadget search");
            let size = size.unwrap_or_else(|| gadget::nominal_size(n.max(2), dim));
            report
                .param("n", n)
                .param("dim", dim)
                .param("budget", budget)
                .param("size", size);
            report.seed = Some(seed);
            match gadget::search_sized(n, dim, size, seed, budget)? {
                SearchOutcome::Found {
                    gadget,
                    evaluations,
                } => {
                    report.result = json!({
                        "found": true,
                        "boxes": gadget.boxes().len(),
                        "evaluations": evaluations,
                    });
                    if let Some(path) = output {
                        write_json(&path, &gadget)?;
                    }
                }
                SearchOutcome::Exhausted {
                    evaluations,
                    best_score,
                    total,
                } => {
                    report.ok = false;
                    report.result = json!({
                        "found": false,
                        "evaluations": evaluations,
                        "best_satisfiable_subsets": best_score,
                        "subsets": total,
                    });
                }
            }
            Ok(report)
        }
        GadgetCmd::Verify { file, output } => {
            let mut report = RunReport::new("gadget verify");
            report.param("file", file.display().to_string());
            let mut g: BoxGadget = read_json(&file)?;
            g.clear_witnesses();
            let r = g.verify_and_cache()?;
            report.ok = r.ok;
            report.failing = r
                .failing_subsets
                .iter()
                .map(|&s| json!({ "excluded": indices_of(s), "mask": s }))
                .collect();
            report.result = json!({
                "ok": r.ok,
                "n": g.n(),
                "dim": g.dim(),
                "boxes": r.boxes,
                "nominal_boxes": gadget::nominal_size(g.n(), g.dim()),
                "subsets_checked": r.subsets_checked,
                "failing_subsets": r.failing_subsets.len(),
                "max_witness_size": r.max_witness_size,
            });
            if let (true, Some(path)) = (r.ok, output) {
                write_json(&path, &g)?;
            }
            Ok(report)
        }
    }
}

fn construct_cmd(cmd: ConstructCmd) -> CmdResult {
    match cmd {
        ConstructCmd::Theorem1 { src, output } => {
            let mut report = RunReport::new("construct theorem1");
            let inst = resolve_theorem1(&src, &mut report)?;
            report.result = json!({
                "d": inst.d,
                "k": inst.k,
                "points": inst.len(),
                "gadget_boxes": inst.gadget.boxes().len(),
            });
            if let Some(path) = output {
                write_json(&path, &inst)?;
            }
            Ok(report)
        }
        ConstructCmd::Theorem2 { src, output } => {
            let mut report = RunReport::new("construct theorem2");
            let inst = resolve_theorem2(&src, &mut report)?;
            report.result = json!({
                "d": inst.base.d,
                "k": inst.k,
                "hyperplanes": inst.len(),
            });
            if let Some(path) = output {
                write_json(&path, &inst)?;
            }
            Ok(report)
        }
    }
}

fn witness_cmd(cmd: WitnessCmd) -> CmdResult {
    match cmd {
        WitnessCmd::Union {
            src,
            subset,
            output,
        } => {
            let mut report = RunReport::new("witness union");
            let inst = resolve_theorem1(&src, &mut report)?;
            let subset = parse_subset(&subset)?;
            report.param("subset", &subset);
            let mask = subset_mask(&subset, inst.len())?;
            let halfspaces = inst.union_witness(mask)?;
            let file = UnionWitnessFile { subset, halfspaces };
            report.result = serde_json::to_value(&file)?;
            if let Some(path) = output {
                write_json(&path, &file)?;
            }
            Ok(report)
        }
        WitnessCmd::Simplex {
            src,
            subset,
            output,
        } => {
            let mut report = RunReport::new("witness simplex");
            let inst = resolve_theorem2(&src, &mut report)?;
            let subset = parse_subset(&subset)?;
            report.param("subset", &subset);
            let mask = subset_mask(&subset, inst.len())?;
            let simplex = inst.simplex_witness(mask)?;
            let file = SimplexWitnessFile { subset, simplex };
            report.result = serde_json::to_value(&file)?;
            if let Some(path) = output {
                write_json(&path, &file)?;
            }
            Ok(report)
        }
    }
}

fn verify_cmd(cmd: VerifyCmd) -> CmdResult {
    match cmd {
        VerifyCmd::Theorem1 { src, mode } => {
            let mut report = RunReport::new("verify theorem1");
            let inst = resolve_theorem1(&src, &mut report)?;
            let m = resolve_mode(&mode, &mut report)?;
            let r = inst.verify_with(m, mode.vc_dim)?;
            theorem_result(&mut report, r);
            Ok(report)
        }
        VerifyCmd::Theorem2 { src, mode } => {
            let mut report = RunReport::new("verify theorem2");
            let inst = resolve_theorem2(&src, &mut report)?;
            let m = resolve_mode(&mode, &mut report)?;
            let r = inst.verify_with(m, &Default::default(), mode.vc_dim)?;
            theorem_result(&mut report, r);
            Ok(report)
        }
    }
}

fn sys_cmd(cmd: SysCmd) -> CmdResult {
    match cmd {
        SysCmd::Vcdim { input } => {
            let mut report = RunReport::new("sys vcdim");
            report.param("input", input.display().to_string());
            let sys = read_system(&input, &mut report)?;
            let vc = sys.vc_dim()?;
            report.result = json!({
                "ground_size": sys.ground_size(),
                "sets": sys.len(),
                "vc_dim": vc.dim,
                "witness": vc.witness,
            });
            Ok(report)
        }
        SysCmd::Kfold {
            input,
            k,
            op,
            output,
        } => {
            let mut report = RunReport::new("sys kfold");
            report
                .param("input", input.display().to_string())
                .param("k", k);
            let sys = read_system(&input, &mut report)?;
            let out = match op {
                FoldOp::Union => {
                    report.param("op", "union");
                    sys.k_fold_union(k)?
                }
                FoldOp::Intersection => {
                    report.param("op", "intersection");
                    sys.k_fold_intersection(k)?
                }
            };
            system_result(&mut report, &out, output)
        }
        SysCmd::Complement { input, output } => {
            let mut report = RunReport::new("sys complement");
            report.param("input", input.display().to_string());
            let sys = read_system(&input, &mut report)?;
            system_result(&mut report, &sys.complement(), output)
        }
        SysCmd::Project {
            input,
            subset,
            output,
        } => {
            let mut report = RunReport::new("sys project");
            report.param("input", input.display().to_string());
            let sys = read_system(&input, &mut report)?;
            let subset = parse_subset(&subset)?;
            report.param("subset", &subset);
            let mask = subset_mask(&subset, sys.ground_size())?;
            system_result(&mut report, &sys.project(mask)?, output)
        }
        SysCmd::Growth { input, m } => {
            let mut report = RunReport::new("sys growth");
            report
                .param("input", input.display().to_string())
                .param("m", m);
            let sys = read_system(&input, &mut report)?;
            report.result = json!({ "m": m, "growth": sys.growth_function(m)? });
            Ok(report)
        }
    }
}

fn system_result(report: &mut RunReport, sys: &SetSystem, output: Option<PathBuf>) -> CmdResult {
    let file = SetSystemFile::from(sys);
    report.result = json!({
        "ground_size": sys.ground_size(),
        "sets": sys.len(),
        "system": file,
    });
    if let Some(path) = output {
        write_json(&path, &file)?;
    }
    Ok(report.clone())
}

fn dispatch(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Gadget(c) => gadget_cmd(c),
        Command::Construct(c) => construct_cmd(c),
        Command::Witness(c) => witness_cmd(c),
        Command::Verify(c) => verify_cmd(c),
        Command::Sys(c) => sys_cmd(c),
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

/// Runs one command, writing the report to `out` and the summary to `err`.
/// Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    configure_threads();
    let started = Instant::now();
    match dispatch(cli) {
        Ok(mut report) => {
            report.finish(started);
            let _ = writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&report).unwrap_or_default()
            );
            let status = if report.ok { "ok" } else { "FAILED" };
            let _ = writeln!(
                err,
                "{}: {status} ({} failing, {} ms)",
                report.command,
                report.failing.len(),
                report.wall_time_ms
            );
            for note in &report.notes {
                let _ = writeln!(err, "note: {note}");
            }
            if report.ok {
                0
            } else {
                1
            }
        }
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}
