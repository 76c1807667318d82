//! The `nare` command line: `gen`, `solve`, `verify`, `bench`.
//!
//! Exit codes: 0 converged or all checks passed, 2 not converged or a check failed,
//! 3 invalid input, 4 numerical failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use faer::{c64, Mat};
use log::{info, warn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::mm::{mm_write_dense, read_dense};
use crate::linalg::spectral_norm_product;
use crate::nradi::{
    nradi_solve, Algorithm, Case, ConvergenceRecord, InterpolationData, LowRankSolution, ShiftOrigin, ShiftPlan,
    ShiftSequence, SolverConfig,
};
use crate::oracle::{dense_nare_solve, verify_report, verify_report_with_oracle, Check, VerificationReport};
use crate::problem::{gen_heat, NareProblem};
use crate::unradi::{unradi_solve, LyapunovFactors};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNCONVERGED: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

/// Tolerance of the stored-versus-recomputed final residual check run by `verify`.
pub const MANIFEST_RESIDUAL_TOL: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(name = "nare", version, about = "Low-rank ADI solvers for nonsymmetric algebraic Riccati equations")]
pub struct Cli {
    /// Raise log verbosity (-v info, -vv debug). `RUST_LOG` overrides.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a test problem directory.
    Gen(GenArgs),
    /// Run a solver and write the factored solution.
    Solve(SolveArgs),
    /// Check a stored solution and print the JSON report.
    Verify(VerifyArgs),
    /// Time repeated solves and print a CSV table.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProblemFamily {
    /// Finite-difference heat operators with random low-rank coupling.
    Heat,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum, default_value = "heat")]
    pub kind: ProblemFamily,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub nh: usize,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 2)]
    pub p: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Maximum number of shift slots.
    #[arg(long, default_value_t = 100)]
    pub max_iters: usize,
    /// Projection width that restarts shift generation.
    #[arg(long, default_value_t = 14)]
    pub rank_max: usize,
    #[arg(long, default_value_t = -0.001, allow_negative_numbers = true)]
    pub init_shift_re: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub init_shift_im: f64,
    /// CSV rows `alpha_re,alpha_im,beta_re,beta_im`; disables automatic shifts.
    #[arg(long)]
    pub shifts: Option<PathBuf>,
}

impl SolverArgs {
    pub fn config(&self, algorithm: Algorithm) -> SolverConfig {
        SolverConfig {
            tol: self.tol,
            kmax: self.max_iters,
            rank_max: self.rank_max,
            initial_shift: c64::new(self.init_shift_re, self.init_shift_im),
            emit_interp: false,
            algorithm,
        }
    }

    pub fn plan(&self) -> Result<ShiftPlan> {
        match &self.shifts {
            Some(path) => Ok(ShiftPlan::User(read_shift_file(path)?)),
            None => Ok(ShiftPlan::Auto),
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub problem: PathBuf,
    #[arg(long, default_value = "nradi")]
    pub algo: Algorithm,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: PathBuf,
    /// Write the convergence record as CSV.
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// Also write `Sv.mtx, Lv.mtx, Sw.mtx, Lw.mtx`.
    #[arg(long)]
    pub emit_interp: bool,
    /// Also write `Vlyap.mtx, Whlyap.mtx, Tv.mtx, Tw.mtx` (unradi only).
    #[arg(long)]
    pub emit_lyap: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub problem: PathBuf,
    #[arg(long)]
    pub solution: PathBuf,
    /// Add the dense-oracle checks (small problems only).
    #[arg(long)]
    pub dense: bool,
    /// Also write the report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub problem: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "nradi,unradi")]
    pub algos: Vec<Algorithm>,
    #[arg(long, default_value_t = 3)]
    pub repeat: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Write the table here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftEntry {
    pub alpha_re: f64,
    pub alpha_im: f64,
    pub beta_re: f64,
    pub beta_im: f64,
    pub origin: ShiftOrigin,
}

/// `meta.json` of a solution directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub algorithm: Algorithm,
    pub tol: f64,
    pub max_iters: usize,
    pub rank_max: usize,
    pub initial_shift: [f64; 2],
    pub shift_file: Option<PathBuf>,
    pub problem: PathBuf,
    /// Shift slots consumed.
    pub iterations: usize,
    pub converged: bool,
    pub final_residual: f64,
    pub elapsed_s: f64,
    pub m: usize,
    pub rank: usize,
    pub shifts_used: Vec<ShiftEntry>,
    pub cases: Vec<Case>,
}

impl RunManifest {
    pub fn new(args: &SolveArgs, cfg: &SolverConfig, sol: &LowRankSolution, m: usize, elapsed_s: f64) -> Self {
        let s = &sol.shifts_used;
        let shifts_used = (0..s.len())
            .map(|k| ShiftEntry {
                alpha_re: s.alpha[k].re,
                alpha_im: s.alpha[k].im,
                beta_re: s.beta[k].re,
                beta_im: s.beta[k].im,
                origin: s.origin[k],
            })
            .collect();
        Self {
            algorithm: cfg.algorithm,
            tol: cfg.tol,
            max_iters: cfg.kmax,
            rank_max: cfg.rank_max,
            initial_shift: [cfg.initial_shift.re, cfg.initial_shift.im],
            shift_file: args.solver.shifts.clone(),
            problem: args.problem.clone(),
            iterations: sol.slots(),
            converged: sol.converged,
            final_residual: sol.final_residual,
            elapsed_s,
            m,
            rank: sol.rank(),
            shifts_used,
            cases: sol.cases.iter().map(|c| c.case()).collect(),
        }
    }

    pub fn shift_sequence(&self) -> ShiftSequence {
        let mut s = ShiftSequence::new();
        for e in &self.shifts_used {
            s.push(c64::new(e.alpha_re, e.alpha_im), c64::new(e.beta_re, e.beta_im), e.origin);
        }
        s
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join("meta.json");
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Json { path, source: e })
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        let path = dir.join("meta.json");
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::Json { path: path.clone(), source: e })?;
        fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))
    }
}

/// Parse a shift file. A first row with no numeric field is taken as a header; `#` starts a comment.
pub fn read_shift_file(path: &Path) -> Result<ShiftSequence> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut seq = ShiftSequence::new();
    for (idx, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse { path: path.into(), line: idx + 1, msg: e.to_string() })?;
        let line = rec.position().map_or(idx + 1, |p| p.line() as usize);
        let fields: Vec<&str> = rec.iter().collect();
        if fields.iter().all(|f| f.is_empty()) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
        let vals = match parsed {
            Ok(v) => v,
            Err(_) if idx == 0 && fields.iter().all(|f| f.parse::<f64>().is_err()) => continue,
            Err(e) => return Err(Error::Parse { path: path.into(), line, msg: format!("not a number: {e}") }),
        };
        if vals.len() != 4 {
            return Err(Error::Parse {
                path: path.into(),
                line,
                msg: format!("expected 4 fields alpha_re,alpha_im,beta_re,beta_im, found {}", vals.len()),
            });
        }
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parse { path: path.into(), line, msg: "non-finite shift".into() });
        }
        seq.push(c64::new(vals[0], vals[1]), c64::new(vals[2], vals[3]), ShiftOrigin::User);
    }
    if seq.is_empty() {
        return Err(Error::InvalidInput(format!("shift file {} holds no shifts", path.display())));
    }
    Ok(seq)
}

/// Write the factor files of a solution directory.
pub fn write_solution(dir: &Path, sol: &LowRankSolution, lyap: Option<&LyapunovFactors>) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files: Vec<(&str, &Mat<f64>)> = vec![
        ("V", &sol.v),
        ("Xbar", &sol.xbar),
        ("W", &sol.w),
        ("K", &sol.k_gain),
        ("Kh", &sol.kh_gain),
        ("Bperp", &sol.b_perp),
        ("Chperp", &sol.c_perp),
    ];
    if let Some(d) = &sol.interp {
        files.extend([("Sv", &d.s_v), ("Lv", &d.l_v), ("Sw", &d.s_w), ("Lw", &d.l_w)]);
    }
    if let Some(l) = lyap {
        files.extend([("Vlyap", &l.v_lyap), ("Whlyap", &l.w_lyap), ("Tv", &l.t_v), ("Tw", &l.t_w)]);
    }
    for (name, m) in files {
        mm_write_dense(&dir.join(format!("{name}.mtx")), m.as_ref())?;
    }
    Ok(())
}

/// A solution directory read back: the factors, the interpolation data and the manifest.
#[derive(Clone, Debug)]
pub struct StoredSolution {
    pub solution: LowRankSolution,
    pub interp: InterpolationData,
    pub manifest: RunManifest,
}

fn expect_shape(name: &str, m: &Mat<f64>, rows: usize, cols: usize) -> Result<()> {
    if m.nrows() != rows || m.ncols() != cols {
        return Err(Error::Dimension(format!("{name} is {}x{}, expected {rows}x{cols}", m.nrows(), m.ncols())));
    }
    Ok(())
}

/// Load a solution directory written by `solve`. Interpolation data is read when present and
/// rebuilt from the factors and the case list otherwise.
pub fn load_solution(p: &NareProblem, dir: &Path) -> Result<StoredSolution> {
    if !dir.is_dir() {
        return Err(Error::InvalidInput(format!("solution directory {} does not exist", dir.display())));
    }
    let manifest = RunManifest::load(dir)?;
    let shifts_used = manifest.shift_sequence();
    let cases = shifts_used.cases()?;
    let read = |name: &str| read_dense(&dir.join(format!("{name}.mtx")));
    let (v, xbar, w) = (read("V")?, read("Xbar")?, read("W")?);
    let r = shifts_used.len() * p.m();
    expect_shape("V", &v, p.n(), r)?;
    expect_shape("Xbar", &xbar, r, r)?;
    expect_shape("W", &w, p.nh(), r)?;
    let (k_gain, kh_gain, b_perp, c_perp) = (read("K")?, read("Kh")?, read("Bperp")?, read("Chperp")?);
    expect_shape("K", &k_gain, p.n(), p.p())?;
    expect_shape("Kh", &kh_gain, p.p(), p.nh())?;
    expect_shape("Bperp", &b_perp, p.n(), p.m())?;
    expect_shape("Chperp", &c_perp, p.m(), p.nh())?;

    let interp = if ["Sv", "Lv", "Sw", "Lw"].iter().all(|n| dir.join(format!("{n}.mtx")).exists()) {
        let d = InterpolationData { s_v: read("Sv")?, l_v: read("Lv")?, s_w: read("Sw")?, l_w: read("Lw")? };
        expect_shape("Sv", &d.s_v, r, r)?;
        expect_shape("Lv", &d.l_v, p.m(), r)?;
        expect_shape("Sw", &d.s_w, r, r)?;
        expect_shape("Lw", &d.l_w, p.m(), r)?;
        d
    } else {
        InterpolationData::rebuild(p, v.as_ref(), w.as_ref(), xbar.as_ref(), &cases)
    };
    let solution = LowRankSolution {
        bh_r: w.transpose() * &p.bh,
        c_r: &p.c * &v,
        v,
        xbar,
        w,
        k_gain,
        kh_gain,
        b_perp,
        c_perp,
        shifts_used,
        cases,
        converged: manifest.converged,
        final_residual: manifest.final_residual,
        interp: None,
    };
    Ok(StoredSolution { solution, interp, manifest })
}

/// Relative mismatch between the stored final residual and `‖B⊥Ĉ⊥‖₂ / ‖BĈ‖₂` recomputed from the files.
pub fn manifest_residual_check(p: &NareProblem, s: &StoredSolution) -> Check {
    let value = (|| {
        let denom = spectral_norm_product(p.b.as_ref(), p.ch.as_ref())?;
        let num = spectral_norm_product(s.solution.b_perp.as_ref(), s.solution.c_perp.as_ref())?;
        let recomputed = if denom == 0.0 { 0.0 } else { num / denom };
        let stored = s.manifest.final_residual;
        let diff = (recomputed - stored).abs();
        Ok(if stored > 0.0 { diff / stored } else { diff })
    })();
    Check::measured("manifest-residual", value, MANIFEST_RESIDUAL_TOL)
}

/// Build the report for a stored solution, optionally with the dense-oracle checks.
pub fn verify_stored(p: &NareProblem, s: &StoredSolution, dense: bool) -> Result<VerificationReport> {
    let mut report = if dense {
        let oracle = dense_nare_solve(p)?;
        verify_report_with_oracle(p, &s.solution, Some(&s.interp), &oracle)
    } else {
        verify_report(p, &s.solution, Some(&s.interp))
    };
    report.push(manifest_residual_check(p, s));
    Ok(report)
}

type SolveOutput = (LowRankSolution, ConvergenceRecord, Option<LyapunovFactors>);

fn run_solver(p: &NareProblem, cfg: &SolverConfig, plan: &ShiftPlan) -> Result<SolveOutput> {
    match cfg.algorithm {
        Algorithm::Nradi => nradi_solve(p, cfg, plan).map(|(s, r)| (s, r, None)),
        Algorithm::Unradi => unradi_solve(p, cfg, plan).map(|(s, r, l)| (s, r, Some(l))),
    }
}

fn gen(args: &GenArgs) -> Result<i32> {
    let p = match args.kind {
        ProblemFamily::Heat => gen_heat(args.n, args.nh, args.m, args.p, args.seed)?,
    };
    p.save(&args.out)?;
    info!("wrote {}x{} problem (m = {}, p = {}) to {}", p.n(), p.nh(), p.m(), p.p(), args.out.display());
    Ok(EXIT_OK)
}

fn solve(args: &SolveArgs) -> Result<i32> {
    if args.emit_lyap && args.algo != Algorithm::Unradi {
        return Err(Error::InvalidInput("--emit-lyap requires --algo unradi".into()));
    }
    let p = NareProblem::load(&args.problem)?;
    let mut cfg = args.solver.config(args.algo);
    cfg.emit_interp = args.emit_interp;
    let plan = args.solver.plan()?;
    let start = Instant::now();
    let (sol, record, lyap) = run_solver(&p, &cfg, &plan)?;
    let elapsed = start.elapsed().as_secs_f64();

    write_solution(&args.out, &sol, if args.emit_lyap { lyap.as_ref() } else { None })?;
    RunManifest::new(args, &cfg, &sol, p.m(), elapsed).save(&args.out)?;
    if let Some(path) = &args.log {
        let f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        record.write_csv(std::io::BufWriter::new(f))?;
    }
    let status = if sol.converged { "converged" } else { "did not converge" };
    println!(
        "{} {status} after {} shift slots (rank {}), relative residual {:.3e}, {:.3} s",
        cfg.algorithm,
        sol.slots(),
        sol.rank(),
        sol.final_residual,
        elapsed
    );
    Ok(if sol.converged { EXIT_OK } else { EXIT_UNCONVERGED })
}

fn verify(args: &VerifyArgs) -> Result<i32> {
    let p = NareProblem::load(&args.problem)?;
    let stored = load_solution(&p, &args.solution)?;
    let report = verify_stored(&p, &stored, args.dense)?;
    let json = report.to_json();
    println!("{json}");
    if let Some(path) = &args.out {
        fs::write(path, json + "\n").map_err(|e| Error::io(path, e))?;
    }
    for c in report.checks.iter().filter(|c| !c.pass) {
        warn!("check {} failed: value {:?}, threshold {:e}", c.name, c.value, c.threshold);
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_UNCONVERGED })
}

fn bench(args: &BenchArgs) -> Result<i32> {
    if args.repeat == 0 {
        return Err(Error::InvalidInput("--repeat must be at least 1".into()));
    }
    let p = NareProblem::load(&args.problem)?;
    let plan = args.solver.plan()?;
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        let wrap = |e: csv::Error| Error::InvalidInput(format!("writing bench table: {e}"));
        w.write_record(["algo", "repeat", "iterations", "converged", "residual", "elapsed_s"]).map_err(wrap)?;
        for &algo in &args.algos {
            let cfg = args.solver.config(algo);
            for rep in 0..args.repeat {
                let start = Instant::now();
                let (sol, _, _) = run_solver(&p, &cfg, &plan)?;
                let elapsed = start.elapsed().as_secs_f64();
                w.write_record([
                    algo.to_string(),
                    rep.to_string(),
                    sol.slots().to_string(),
                    sol.converged.to_string(),
                    format!("{:e}", sol.final_residual),
                    format!("{elapsed:e}"),
                ])
                .map_err(wrap)?;
            }
        }
        w.flush().map_err(|e| Error::InvalidInput(format!("writing bench table: {e}")))?;
    }
    match &args.out {
        Some(path) => fs::write(path, &buf).map_err(|e| Error::io(path, e))?,
        None => std::io::stdout().write_all(&buf).map_err(|e| Error::io("<stdout>", e))?,
    }
    Ok(EXIT_OK)
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let env = env_logger::Env::default().default_filter_or(level);
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

pub fn execute(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => solve(a),
        Command::Verify(a) => verify(a),
        Command::Bench(a) => bench(a),
    }
}

/// Parse `args` (including the program name), run the subcommand and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
        }
    };
    init_logging(cli.verbose);
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
