//! Command-line front end: classification tables, branched-cover
//! realizability, one-form construction, metric verification, and batch
//! sweeps, with JSON/CSV persistence.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use hcmu::classify::{classify_one, classify_two, AngleSpec, ExtremalProfile, Role};
use hcmu::curvature::{Chart, MetricModel, CHART_RADIUS};
use hcmu::hurwitz::{
    boccara_realizable, oracle_realizable_capped, song_xu_realizable, source_genus, BranchData,
    HurwitzError, Partition, DEFAULT_DEGREE_CAP,
};
use hcmu::oneform::{construct, GaugeSpec, OneFormError, OneFormModel, SpherePoint};
use hcmu::validate::{verify_metric_with_tol, ValidateError, VerificationReport, QUAD_TOL};
use hcmu::Complex64;
use serde::Serialize;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

/// Exit code for a verification run with at least one failed check.
const EXIT_VERIFICATION: i32 = 1;
/// Exit code for invalid flags, inputs, or files.
const EXIT_USAGE: i32 = 2;
/// Exit code for solver or quadrature non-convergence.
const EXIT_SOLVER: i32 = 3;

#[derive(Parser)]
#[command(
    name = "hcmu",
    version,
    about = "Workbench for extremal metrics with one or two singularities on the sphere: \
             classification, branched-cover realizability, one-form construction, and \
             numerical verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the admissible singularity profiles for one or two prescribed angles
    Classify(ClassifyArgs),
    /// Decide branched-cover realizability by criterion and permutation search
    Hurwitz(HurwitzArgs),
    /// Construct the character one-form for a selected profile
    Construct(ConstructArgs),
    /// Run every numerical check against a constructed model file
    Verify(VerifyArgs),
    /// Tabulate classifications over angle ranges as CSV
    Sweep(SweepArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    /// Cone angle at the first singularity, divided by 2*pi (0 encodes a cusp)
    #[arg(long)]
    alpha: f64,
    /// Cone angle at the second singularity, divided by 2*pi (0 encodes a cusp)
    #[arg(long)]
    beta: Option<f64>,
    /// Write the JSON artifact here (atomically) instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HurwitzArgs {
    /// Degree of the cover; every partition must sum to it
    #[arg(long)]
    degree: u32,
    /// `|`-separated partitions of comma-separated parts, e.g. "2,2,2|3,3|4,1,1"
    #[arg(long)]
    partitions: String,
    /// Cap on the permutation-search degree (default 7, hard ceiling 12)
    #[arg(long)]
    max_degree: Option<u32>,
    /// Write the JSON artifact here (atomically) instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConstructArgs {
    /// Cone angle at the first singularity, divided by 2*pi (0 encodes a cusp)
    #[arg(long)]
    alpha: f64,
    /// Cone angle at the second singularity, divided by 2*pi (0 encodes a cusp)
    #[arg(long)]
    beta: Option<f64>,
    /// Select the profile with this many smooth maximum points
    #[arg(long)]
    i1: Option<u32>,
    /// Select the profile with this many smooth minimum points
    #[arg(long)]
    i2: Option<u32>,
    /// Select the profile whose first singularity plays this role
    #[arg(long, value_enum)]
    role1: Option<RoleArg>,
    /// Select the profile whose second singularity plays this role
    #[arg(long, value_enum)]
    role2: Option<RoleArg>,
    /// Gauge as "q_pin,p_product" (two reals), e.g. "-1,2"; default "-1,2"
    #[arg(long)]
    gauge: Option<String>,
    /// Seed for the solver's restart sequence
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON artifact here (atomically) instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also report the residue scale in both published normalization
    /// conventions (they differ by a factor of 3)
    #[arg(long)]
    paper_constants: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Model JSON file produced by `construct` (envelope or bare model)
    input: PathBuf,
    /// Sample curvature and density on an N x N grid per chart; written as
    /// CSV (columns x,y,chart,K,rho) to --out, which is then required
    #[arg(long)]
    grid: Option<usize>,
    /// Quadrature tolerance for the moment integrals
    #[arg(long)]
    tol: Option<f64>,
    /// Write the JSON report (or the CSV grid when --grid is given) here
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also report the residue scale in both published normalization
    /// conventions and the fitted energy constant against the tabulated 6
    #[arg(long)]
    paper_constants: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// First-angle values: comma-separated numbers and inclusive integer
    /// ranges, e.g. "2..8" or "2,2.5,3..5"
    #[arg(long)]
    alpha: String,
    /// Second-angle values in the same syntax; omitted = one singularity
    #[arg(long)]
    beta: Option<String>,
    /// Write the CSV table here (atomically) instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RoleArg {
    Saddle,
    Max,
    Min,
    Cusp,
    Absent,
}

impl From<RoleArg> for Role {
    fn from(r: RoleArg) -> Role {
        match r {
            RoleArg::Saddle => Role::Saddle,
            RoleArg::Max => Role::Max,
            RoleArg::Min => Role::Min,
            RoleArg::Cusp => Role::Cusp,
            RoleArg::Absent => Role::Absent,
        }
    }
}

/// A failure carrying its exit code and a one-line diagnostic.
struct Failure {
    code: i32,
    kind: &'static str,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, kind: "usage", msg: msg.into() }
    }

    fn io(msg: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, kind: "io", msg: msg.into() }
    }

    fn solver(msg: impl Into<String>) -> Self {
        Failure { code: EXIT_SOLVER, kind: "solver", msg: msg.into() }
    }

    fn verification(msg: impl Into<String>) -> Self {
        Failure { code: EXIT_VERIFICATION, kind: "verification", msg: msg.into() }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                let _ = e.print();
                std::process::exit(0);
            }
            _ => {
                emit(&Failure::usage(first_line(&e.to_string())));
                std::process::exit(EXIT_USAGE);
            }
        },
    };
    let result = match cli.command {
        Cmd::Classify(a) => run_classify(a),
        Cmd::Hurwitz(a) => run_hurwitz(a),
        Cmd::Construct(a) => run_construct(a),
        Cmd::Verify(a) => run_verify(a),
        Cmd::Sweep(a) => run_sweep(a),
    };
    if let Err(f) = result {
        emit(&f);
        std::process::exit(f.code);
    }
}

/// One-line machine-parsable diagnostic on the error stream.
fn emit(f: &Failure) {
    eprintln!("error: code={} kind={} msg=\"{}\"", f.code, f.kind, sanitize(&f.msg));
}

fn sanitize(msg: &str) -> String {
    msg.replace('"', "'").replace(['\n', '\r'], "; ")
}

fn first_line(rendered: &str) -> String {
    let line = rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
    line.trim().trim_start_matches("error: ").to_string()
}

fn now_secs() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

// ---------------------------------------------------------------------------
// JSON artifacts.
// ---------------------------------------------------------------------------

/// Common artifact wrapper; the timestamp is the only field allowed to vary
/// between identical invocations.
#[derive(Serialize)]
struct Envelope<T: Serialize> {
    timestamp: u64,
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    constants: Option<ConstantsBlock>,
    data: T,
}

/// Side-by-side normalization conventions for the reported constants.
#[derive(Serialize)]
struct ConstantsBlock {
    /// Residue scale in the normalization the construction uses.
    residue_scale: f64,
    /// The same scale in the other published convention (one third).
    residue_scale_alternative: f64,
    /// Fitted energy constant, when a conical-range fit is available.
    #[serde(skip_serializing_if = "Option::is_none")]
    energy_constant: Option<f64>,
    /// Tabulated counterpart of the fitted constant.
    energy_constant_tabulated: f64,
    /// Fitted constant divided by the tabulated one.
    #[serde(skip_serializing_if = "Option::is_none")]
    energy_constant_ratio: Option<f64>,
}

impl ConstantsBlock {
    fn for_form(sigma: f64, energy_constant: Option<f64>) -> Self {
        ConstantsBlock {
            residue_scale: sigma,
            residue_scale_alternative: sigma / 3.0,
            energy_constant,
            energy_constant_tabulated: 6.0,
            energy_constant_ratio: energy_constant.map(|c| c / 6.0),
        }
    }
}

fn to_pretty_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::io(format!("serialize: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Prints to stdout, or writes the file via a same-directory temp + rename.
fn write_text(out: Option<&Path>, contents: &str) -> Result<(), Failure> {
    match out {
        None => {
            print!("{contents}");
            Ok(())
        }
        Some(path) => atomic_write(path, contents),
    }
}

fn atomic_write(path: &Path, contents: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("artifact");
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    fs::write(&tmp, contents).map_err(|e| Failure::io(format!("write {}: {e}", tmp.display())))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Failure::io(format!("rename to {}: {e}", path.display()))
    })
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

fn run_classify(a: ClassifyArgs) -> Result<(), Failure> {
    let profiles = match a.beta {
        None => classify_one(a.alpha),
        Some(beta) => classify_two(a.alpha, beta),
    }
    .map_err(|e| Failure::usage(e.to_string()))?;
    let artifact =
        Envelope { timestamp: now_secs(), kind: "profiles", constants: None, data: &profiles };
    write_text(a.out.as_deref(), &to_pretty_json(&artifact)?)
}

// ---------------------------------------------------------------------------
// hurwitz
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct RealizabilityVerdict {
    degree: u32,
    partitions: Vec<Vec<u32>>,
    /// Criterion family the data matches: "one-extra-cycle",
    /// "many-extra-cycles", or "generic" (no criterion applies).
    shape: String,
    /// Genus forced by the total branching; absent when no cover exists.
    genus: Option<u32>,
    /// Arithmetic criterion verdict, when the shape admits one.
    criterion: Option<bool>,
    /// Exhaustive permutation-search verdict; absent above the degree cap.
    oracle: Option<bool>,
    /// Whether criterion and oracle verdicts coincide (both present).
    agree: Option<bool>,
    realizable: bool,
}

fn run_hurwitz(a: HurwitzArgs) -> Result<(), Failure> {
    let raw = parse_partition_list(&a.partitions)?;
    let mut partitions = Vec::with_capacity(raw.len());
    for parts in &raw {
        partitions.push(Partition::new(parts).map_err(|e| Failure::usage(e.to_string()))?);
    }
    let data = BranchData::new(a.degree, partitions)
        .map_err(|e| Failure::usage(e.to_string()))?;
    let cap = a.max_degree.unwrap_or(DEFAULT_DEGREE_CAP);
    if cap > DEFAULT_DEGREE_CAP {
        eprintln!(
            "warning: kind=degree-cap msg=\"search degree cap {cap} above the default {}; \
             the class enumeration grows factorially\"",
            DEFAULT_DEGREE_CAP
        );
    }

    let (shape, criterion, genus_req) = detect_criterion(&data)?;
    let oracle = match oracle_realizable_capped(&data, genus_req, cap) {
        Ok(v) => Some(v),
        Err(HurwitzError::DegreeCap { .. }) => None,
        Err(e) => return Err(Failure::usage(e.to_string())),
    };
    let realizable = oracle.or(criterion).ok_or_else(|| {
        Failure::usage(format!(
            "degree {} is above the search cap {cap} and the data matches no criterion shape",
            a.degree
        ))
    })?;
    let verdict = RealizabilityVerdict {
        degree: a.degree,
        partitions: raw,
        shape,
        genus: source_genus(&data),
        criterion,
        oracle,
        agree: criterion.zip(oracle).map(|(c, o)| c == o),
        realizable,
    };
    let artifact =
        Envelope { timestamp: now_secs(), kind: "realizability", constants: None, data: &verdict };
    write_text(a.out.as_deref(), &to_pretty_json(&artifact)?)
}

/// Matches the branch data against the two criterion shapes. The first two
/// partitions are taken as the ramification pair; the rest must each be a
/// single nontrivial cycle. One extra cycle selects the any-genus criterion
/// (oracle unrestricted); several select the rational-map criterion (oracle
/// restricted to genus 0).
fn detect_criterion(data: &BranchData) -> Result<(String, Option<bool>, Option<u32>), Failure> {
    let ps = data.partitions();
    if ps.len() < 2 {
        return Ok(("generic".to_string(), None, None));
    }
    let (a, b) = (&ps[0], &ps[1]);
    let extras = &ps[2..];
    let single_cycle =
        |p: &Partition| p.parts()[0] >= 2 && p.parts()[1..].iter().all(|&x| x == 1);
    if extras.len() == 1 && (single_cycle(&extras[0]) || extras[0].is_trivial()) {
        let m = extras[0].parts()[0] - 1;
        let verdict =
            boccara_realizable(a, b, m).map_err(|e| Failure::usage(e.to_string()))?;
        return Ok(("one-extra-cycle".to_string(), Some(verdict), None));
    }
    if !extras.is_empty() && extras.iter().all(single_cycle) {
        let ms: Vec<u32> = extras.iter().map(|p| p.parts()[0] - 1).collect();
        match song_xu_realizable(a, b, &ms) {
            Ok(verdict) => return Ok(("many-extra-cycles".to_string(), Some(verdict), Some(0))),
            Err(HurwitzError::InvalidBranchShape(_)) => {}
            Err(e) => return Err(Failure::usage(e.to_string())),
        }
    }
    Ok(("generic".to_string(), None, None))
}

fn parse_partition_list(text: &str) -> Result<Vec<Vec<u32>>, Failure> {
    let mut out = Vec::new();
    for chunk in text.split('|') {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            return Err(Failure::usage("empty partition in --partitions"));
        }
        let mut parts = Vec::new();
        for tok in chunk.split(',') {
            let tok = tok.trim();
            parts.push(tok.parse::<u32>().map_err(|_| {
                Failure::usage(format!("partition part '{tok}' is not a positive integer"))
            })?);
        }
        out.push(parts);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// construct
// ---------------------------------------------------------------------------

fn run_construct(a: ConstructArgs) -> Result<(), Failure> {
    let (angles, profiles) = match a.beta {
        None => (AngleSpec::one(a.alpha), classify_one(a.alpha)),
        Some(beta) => (AngleSpec::two(a.alpha, beta), classify_two(a.alpha, beta)),
    };
    let profiles = profiles.map_err(|e| Failure::usage(e.to_string()))?;
    let want1: Option<Role> = a.role1.map(Role::from);
    let want2: Option<Role> = a.role2.map(Role::from);
    let selected: Vec<&ExtremalProfile> = profiles
        .iter()
        .filter(|p| {
            a.i1.map_or(true, |v| p.i1 == v)
                && a.i2.map_or(true, |v| p.i2 == v)
                && want1.map_or(true, |r| p.role1 == r)
                && want2.map_or(true, |r| p.role2 == r)
        })
        .collect();
    let profile = match selected.as_slice() {
        [one] => (*one).clone(),
        [] => {
            return Err(Failure::usage(format!(
                "no admissible profile matches the selection; candidates: {}",
                profile_summaries(&profiles)
            )))
        }
        many => {
            return Err(Failure::usage(format!(
                "selection matches {} profiles; narrow with --i1/--i2/--role1/--role2: {}",
                many.len(),
                profile_summaries(&profiles)
            )))
        }
    };
    let gauge = parse_gauge(a.gauge.as_deref())?;
    let model = construct(&profile, &angles, &gauge, a.seed).map_err(|e| match e {
        OneFormError::NoConvergence { .. } | OneFormError::DegenerateSolution { .. } => {
            Failure::solver(e.to_string())
        }
        other => Failure::usage(other.to_string()),
    })?;
    let constants = a.paper_constants.then(|| ConstantsBlock::for_form(model.sigma, None));
    let artifact = Envelope { timestamp: now_secs(), kind: "model", constants, data: &model };
    write_text(a.out.as_deref(), &to_pretty_json(&artifact)?)
}

fn profile_summaries(profiles: &[ExtremalProfile]) -> String {
    let mut s = String::new();
    for (k, p) in profiles.iter().enumerate() {
        if k > 0 {
            s.push(' ');
        }
        let _ = write!(s, "(i1={},i2={},role1={},role2={})", p.i1, p.i2, p.role1, p.role2);
    }
    s
}

fn parse_gauge(text: Option<&str>) -> Result<GaugeSpec, Failure> {
    let Some(text) = text else {
        return Ok(GaugeSpec::default());
    };
    let fields: Vec<&str> = text.split(',').map(str::trim).collect();
    let [q, p] = fields.as_slice() else {
        return Err(Failure::usage(format!(
            "gauge '{text}' must be two comma-separated reals \"q_pin,p_product\""
        )));
    };
    let parse = |tok: &str| {
        tok.parse::<f64>()
            .map_err(|_| Failure::usage(format!("gauge component '{tok}' is not a number")))
    };
    Ok(GaugeSpec {
        q_pin: Complex64::new(parse(q)?, 0.0),
        p_product: Complex64::new(parse(p)?, 0.0),
    })
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn run_verify(a: VerifyArgs) -> Result<(), Failure> {
    let text = fs::read_to_string(&a.input)
        .map_err(|e| Failure::io(format!("read {}: {e}", a.input.display())))?;
    let form = parse_model(&text)
        .map_err(|e| Failure::usage(format!("{}: not a model artifact: {e}", a.input.display())))?;
    let sigma = form.sigma;
    let model = MetricModel::new(form).map_err(|e| Failure::usage(e.to_string()))?;
    let tol = a.tol.unwrap_or(QUAD_TOL);
    if !(tol > 0.0) {
        return Err(Failure::usage(format!("tolerance {tol} must be positive")));
    }
    let report = verify_metric_with_tol(&model, tol).map_err(|e| match e {
        ValidateError::QuadratureBudget { .. } => Failure::solver(e.to_string()),
        other => Failure::usage(other.to_string()),
    })?;
    let constants = a
        .paper_constants
        .then(|| ConstantsBlock::for_form(sigma, report.calibration_constant));

    print_table(&report, constants.as_ref());

    match a.grid {
        Some(n) => {
            if n < 2 {
                return Err(Failure::usage(format!("grid size {n} must be at least 2")));
            }
            let Some(out) = a.out.as_deref() else {
                return Err(Failure::usage("--grid requires --out for the CSV file"));
            };
            atomic_write(out, &grid_csv(&model, n))?;
        }
        None => {
            if let Some(out) = a.out.as_deref() {
                let artifact =
                    Envelope { timestamp: now_secs(), kind: "report", constants, data: &report };
                atomic_write(out, &to_pretty_json(&artifact)?)?;
            }
        }
    }

    if report.pass() {
        Ok(())
    } else {
        let failed: Vec<&str> = [
            ("residues", report.passed.residues),
            ("gauss-bonnet", report.passed.gauss_bonnet),
            ("energy-ratios", report.passed.energy_ratios),
            ("angles", report.passed.angles),
            ("curvature", report.passed.curvature),
        ]
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(name, _)| *name)
        .collect();
        Err(Failure::verification(format!("checks failed: {}", failed.join(", "))))
    }
}

/// Accepts either a wrapped artifact (model under `data`) or a bare model.
fn parse_model(text: &str) -> Result<OneFormModel, serde_json::Error> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    match value.get("data") {
        Some(data) => serde_json::from_value(data.clone()),
        None => serde_json::from_value(value),
    }
}

fn print_table(report: &VerificationReport, constants: Option<&ConstantsBlock>) {
    let row = |name: &str, ok: bool, detail: String| {
        println!("{name:<14} {:<6} {detail}", if ok { "pass" } else { "FAIL" });
    };
    println!("{:<14} {:<6} detail", "check", "status");
    row(
        "residues",
        report.passed.residues,
        format!("relative residue sum {:.2e}", report.residue_sum),
    );
    row(
        "gauss-bonnet",
        report.passed.gauss_bonnet,
        format!(
            "integral {:.8} vs angle formula {:.8}",
            report.gauss_bonnet_lhs, report.gauss_bonnet_rhs
        ),
    );
    let worst_ratio = report
        .energy_ratios
        .iter()
        .map(|&(_, got, want)| (got - want).abs() / want.abs().max(1.0))
        .fold(0.0f64, f64::max);
    row(
        "energy-ratios",
        report.passed.energy_ratios,
        format!("worst relative deviation {worst_ratio:.2e}"),
    );
    let worst_angle = report
        .angle_estimates
        .iter()
        .map(|e| (e.estimated - e.expected).abs() / e.expected.max(1.0))
        .fold(0.0f64, f64::max);
    row(
        "angles",
        report.passed.angles,
        format!(
            "{} estimates, worst relative error {worst_angle:.2e}",
            report.angle_estimates.len()
        ),
    );
    row(
        "curvature",
        report.passed.curvature,
        format!("max relative error {:.2e}", report.curvature_max_rel_err),
    );
    for (name, why) in &report.skipped {
        println!("{name:<14} {:<6} {why}", "skip");
    }
    println!("{:<14} {}", "overall", if report.pass() { "pass" } else { "FAIL" });
    if let Some(c) = constants {
        println!("constants:");
        println!("  residue scale (construction)  {:.9e}", c.residue_scale);
        println!("  residue scale (alternative)   {:.9e}", c.residue_scale_alternative);
        if let Some(fit) = c.energy_constant {
            println!("  energy constant (fitted)      {fit:.9e}");
            println!("  energy constant (tabulated)   {}", c.energy_constant_tabulated);
            if let Some(ratio) = c.energy_constant_ratio {
                println!("  fitted / tabulated            {ratio:.9e}");
            }
        }
    }
}

/// Curvature and density sampled at cell centers of an `n x n` grid over each
/// chart disk; nodes colliding with a pole are omitted.
fn grid_csv(model: &MetricModel, n: usize) -> String {
    let mut s = String::from("x,y,chart,K,rho\n");
    for (chart, label) in [(Chart::Plane, "plane"), (Chart::Reciprocal, "reciprocal")] {
        let pole_coords: Vec<Complex64> = model
            .form
            .poles
            .iter()
            .filter_map(|p| chart_coord(p.location, chart))
            .collect();
        for iy in 0..n {
            for ix in 0..n {
                let x = -CHART_RADIUS + 2.0 * CHART_RADIUS * (ix as f64 + 0.5) / n as f64;
                let y = -CHART_RADIUS + 2.0 * CHART_RADIUS * (iy as f64 + 0.5) / n as f64;
                let z = Complex64::new(x, y);
                if pole_coords.iter().any(|&p| (z - p).norm() < 1e-9) {
                    continue;
                }
                let k = model.curvature_at(z, chart);
                let rho = model.density_at(z, chart);
                if !k.is_finite() || !rho.is_finite() {
                    continue;
                }
                let _ = writeln!(s, "{x:.6},{y:.6},{label},{k:.12e},{rho:.12e}");
            }
        }
    }
    s
}

fn chart_coord(p: SpherePoint, chart: Chart) -> Option<Complex64> {
    match (p, chart) {
        (SpherePoint::Finite(z), Chart::Plane) => Some(z),
        (SpherePoint::Finite(z), Chart::Reciprocal) => {
            (z.norm() > 1e-12).then(|| Complex64::new(1.0, 0.0) / z)
        }
        (SpherePoint::Infinity, Chart::Plane) => None,
        (SpherePoint::Infinity, Chart::Reciprocal) => Some(Complex64::new(0.0, 0.0)),
    }
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

fn run_sweep(a: SweepArgs) -> Result<(), Failure> {
    let alphas = parse_range(&a.alpha)?;
    let betas = a.beta.as_deref().map(parse_range).transpose()?;
    let mut csv = String::from("alpha,beta,case_label,i1,i2,role1,role2,lambda\n");
    let mut tuples = 0usize;
    let mut rows = 0usize;
    let mut rejected = 0usize;
    let mut push_rows = |csv: &mut String,
                         alpha: f64,
                         beta: Option<f64>,
                         profiles: Result<Vec<ExtremalProfile>, _>| {
        tuples += 1;
        match profiles {
            Err(_) => rejected += 1,
            Ok(list) => {
                for p in list {
                    rows += 1;
                    let beta_s = beta.map(|b| b.to_string()).unwrap_or_default();
                    let lambda_s = p.lambda.map(|l| l.to_string()).unwrap_or_default();
                    let _ = writeln!(
                        csv,
                        "{alpha},{beta_s},{},{},{},{},{},{lambda_s}",
                        p.case_label, p.i1, p.i2, p.role1, p.role2
                    );
                }
            }
        }
    };
    match &betas {
        None => {
            for &alpha in &alphas {
                push_rows(&mut csv, alpha, None, classify_one(alpha));
            }
        }
        Some(bs) => {
            for &alpha in &alphas {
                for &beta in bs {
                    push_rows(&mut csv, alpha, Some(beta), classify_two(alpha, beta));
                }
            }
        }
    }
    write_text(a.out.as_deref(), &csv)?;
    if let Some(out) = &a.out {
        println!(
            "sweep: {tuples} angle tuples ({rejected} inadmissible), {rows} profiles, wrote {}",
            out.display()
        );
    }
    Ok(())
}

/// Comma-separated values; each token is a number or an inclusive integer
/// range "lo..hi".
fn parse_range(text: &str) -> Result<Vec<f64>, Failure> {
    let mut out = Vec::new();
    for tok in text.split(',') {
        let tok = tok.trim();
        if let Some((lo, hi)) = tok.split_once("..") {
            let lo: i64 = lo
                .trim()
                .parse()
                .map_err(|_| Failure::usage(format!("range start '{lo}' is not an integer")))?;
            let hi: i64 = hi
                .trim()
                .parse()
                .map_err(|_| Failure::usage(format!("range end '{hi}' is not an integer")))?;
            if hi < lo {
                return Err(Failure::usage(format!("range {tok} is empty")));
            }
            for v in lo..=hi {
                out.push(v as f64);
            }
        } else {
            out.push(
                tok.parse::<f64>()
                    .map_err(|_| Failure::usage(format!("'{tok}' is not a number")))?,
            );
        }
    }
    if out.is_empty() {
        return Err(Failure::usage("empty value list"));
    }
    Ok(out)
}
