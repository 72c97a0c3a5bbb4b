//! Command-line front end: reproducible JSON/CSV reports for spectral
//! analysis, strip scanning, lemma verification and φ tables.

use std::f64::consts::FRAC_PI_2;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::ConeError;
use crate::green_model::KernelBoundModel;
use crate::harness::{
    critical_exponent, dyadic_band_accounting, maximal_report, near_zone_singular_datum, random_suite, verify_lemma,
    Components, ConeBoundary, DataGenerator, HarnessConfig, LemmaId, LemmaVerdict, Outcome,
};
use crate::pencil::{phi_eval, phi_excess, strip_report, strip_scan_with, MaterialParams, PhiContext, ScanOptions};
use crate::sphere_spectra::{dirichlet_eigenvalue_cap, theta_omega, CapDomain, DiscretizationConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Version of the report envelope described by report.schema.json.
pub const SCHEMA_VERSION: &str = "1";
/// Lattice size per axis of the pencil strip scan.
pub const SCAN_GRID: usize = 21;
/// Step of the φ table in t.
pub const PHI_STEP: f64 = 0.01;

#[derive(Debug, Parser)]
#[command(
    name = "conepencil",
    version,
    about = "Spectral exponents, strip certificates and maximal-function checks for conical points"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandKind,
    /// Space dimension n.
    #[arg(long, global = true, default_value_t = 3)]
    pub dim: usize,
    /// Half-opening angle θ0 of the cap, in radians.
    #[arg(long = "cap-angle", global = true, default_value_t = FRAC_PI_2)]
    pub cap_angle: f64,
    /// Poisson ratio ν ≤ 1/2 (1/2 is the Stokes limit).
    #[arg(long, global = true, default_value_t = 0.5, allow_negative_numbers = true)]
    pub nu: f64,
    /// Integrability exponent for kernel-verify.
    #[arg(long, global = true)]
    pub p: Option<f64>,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Grid points of the finest spectral / pencil mesh.
    #[arg(long, global = true, default_value_t = 128)]
    pub mesh: usize,
    /// Refinement levels (Richardson levels for analyze, mesh levels for kernel-verify).
    #[arg(long, global = true, default_value_t = 3)]
    pub levels: usize,
    /// Highest azimuthal mode scanned by pencil-scan.
    #[arg(long, global = true, default_value_t = 4)]
    pub modes: usize,
    /// Number of seeded random data in the kernel-verify suite.
    #[arg(long = "suite-size", global = true, default_value_t = 10)]
    pub suite_size: usize,
    /// Exponent M for phi-table; computed from the cap when absent.
    #[arg(long = "M", global = true)]
    pub m: Option<f64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    /// Eigenvalue, exponent M, Θ(Ω), strip and p_min for the cap.
    Analyze,
    /// Certify the eigenvalue-free strip by a σ_min scan.
    PencilScan,
    /// Verify the maximal-function lemmas on the truncated cone.
    KernelVerify,
    /// Tabulate φ(t).
    PhiTable,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Analyze => "analyze",
            CommandKind::PencilScan => "pencil-scan",
            CommandKind::KernelVerify => "kernel-verify",
            CommandKind::PhiTable => "phi-table",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Fully resolved and validated invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub dim: usize,
    pub cap_angle: f64,
    pub nu: f64,
    pub p: Option<f64>,
    pub seed: u64,
    pub mesh: usize,
    pub levels: usize,
    pub modes: usize,
    pub suite_size: usize,
    #[serde(rename = "M")]
    pub m: Option<f64>,
    pub out_path: Option<PathBuf>,
    pub format: Format,
}

/// Errors of a CLI run, mapped to exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("error [{module}]: {source}", module = .source.provenance())]
    Compute {
        #[from]
        source: ConeError,
    },
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization: {0}")]
    Serialize(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_INTERNAL,
        }
    }
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let default_format = match cli.command {
            CommandKind::PhiTable => Format::Csv,
            _ => Format::Json,
        };
        let cfg = RunConfig {
            command: cli.command,
            dim: cli.dim,
            cap_angle: cli.cap_angle,
            nu: cli.nu,
            p: cli.p,
            seed: cli.seed,
            mesh: cli.mesh,
            levels: cli.levels,
            modes: cli.modes,
            suite_size: cli.suite_size,
            m: cli.m,
            out_path: cli.out.clone(),
            format: cli.format.unwrap_or(default_format),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let usage = |e: ConeError| CliError::Usage(e.to_string());
        CapDomain::new(self.dim, self.cap_angle).map_err(usage)?;
        MaterialParams::new(self.nu).map_err(usage)?;
        if self.mesh < 8 {
            return Err(CliError::Usage(format!("--mesh {} is below the minimum 8", self.mesh)));
        }
        if self.levels == 0 {
            return Err(CliError::Usage("--levels must be at least 1".into()));
        }
        if let Some(p) = self.p {
            if !(p >= 1.0) {
                return Err(CliError::Usage(format!("--p {p} must be at least 1")));
            }
        }
        if let Some(m) = self.m {
            if !(m > 0.0 && m.is_finite()) {
                return Err(CliError::Usage(format!("--M {m} must be positive")));
            }
        }
        if self.command == CommandKind::KernelVerify {
            if self.dim != 3 {
                return Err(CliError::Usage("kernel-verify supports --dim 3 only".into()));
            }
            if self.levels < 2 {
                return Err(CliError::Usage("kernel-verify needs --levels of at least 2".into()));
            }
        }
        DiscretizationConfig { max_azimuthal_mode: self.modes.max(1), ..DiscretizationConfig::with_grid(self.mesh) }
            .validate()
            .map_err(usage)?;
        Ok(())
    }

    fn discretization(&self) -> DiscretizationConfig {
        DiscretizationConfig { richardson_levels: self.levels, ..DiscretizationConfig::with_grid(self.mesh) }
    }
}

/// Result payload of a command and whether its verification passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: CommandKind,
    pub result: Value,
    pub passed: bool,
    /// CSV header and rows for the CSV export.
    pub table: (Vec<String>, Vec<Vec<String>>),
}

fn number(x: f64) -> String {
    format!("{x:.12e}")
}

pub fn analyze(cfg: &RunConfig) -> Result<Report, CliError> {
    let cap = CapDomain::new(cfg.dim, cfg.cap_angle)?;
    let dcfg = cfg.discretization();
    let ground = dirichlet_eigenvalue_cap(&cap, 0, &dcfg)?;
    let theta = theta_omega(&cap, &dcfg)?;
    let strip = strip_report(&PhiContext::new(cfg.dim, cfg.nu, ground.m_exponent)?)?;
    let result = json!({
        "n": cfg.dim,
        "theta0": cfg.cap_angle,
        "nu": cfg.nu,
        "eigenvalue": ground.eigenvalue,
        "eigen_residual": ground.residual,
        "M": ground.m_exponent,
        "Theta_Omega": theta.theta_omega,
        "Theta_attaining_mode": theta.attaining_mode,
        "t_of_M": strip.t_of_m,
        "alpha": strip.alpha,
        "strip_halfwidth": strip.halfwidth,
        "p_min": strip.p_min,
        "solvability_interval": {"lower_exclusive": strip.p_min, "upper": "inf"},
        "tolerances": {
            "eigen_backward_error": dcfg.tolerance,
            "richardson_levels": dcfg.richardson_levels,
            "grid_points": dcfg.grid_points,
            "phi_root_bisection": 1e-12,
        },
        "seed": cfg.seed,
    });
    let header = ["quantity", "value"].map(String::from).to_vec();
    let rows = [
        ("eigenvalue", ground.eigenvalue),
        ("M", ground.m_exponent),
        ("Theta_Omega", theta.theta_omega),
        ("t_of_M", strip.t_of_m),
        ("alpha", strip.alpha),
        ("strip_halfwidth", strip.halfwidth),
        ("p_min", strip.p_min),
    ]
    .iter()
    .map(|(k, v)| vec![k.to_string(), number(*v)])
    .collect();
    Ok(Report { command: cfg.command, result, passed: true, table: (header, rows) })
}

pub fn pencil_scan(cfg: &RunConfig) -> Result<Report, CliError> {
    let cap = CapDomain::new(cfg.dim, cfg.cap_angle)?;
    let mat = MaterialParams::new(cfg.nu)?;
    let dcfg = DiscretizationConfig { max_azimuthal_mode: cfg.modes, ..DiscretizationConfig::with_grid(cfg.mesh) };
    let scan = strip_scan_with(&cap, &mat, SCAN_GRID, SCAN_GRID, &dcfg, &ScanOptions::default())?;
    let passed = scan.flagged.is_empty();
    let header = ["re", "im", "sigma_min", "mode"].map(String::from).to_vec();
    let rows = scan
        .grid
        .iter()
        .zip(&scan.sigma_min)
        .zip(&scan.attaining_mode)
        .map(|((pt, s), m)| vec![number(pt.re), number(pt.im), number(*s), m.to_string()])
        .collect();
    Ok(Report { command: cfg.command, result: serde_json::to_value(&scan)?, passed, table: (header, rows) })
}

fn verdict_rows(v: &LemmaVerdict, rows: &mut Vec<Vec<String>>) {
    for s in &v.series {
        let ratios: Vec<String> = s.ratios.iter().map(|r| number(*r)).collect();
        rows.push(vec![
            v.lemma.to_string(),
            number(v.p),
            format!("{:?}", v.branch).to_lowercase(),
            format!("{:?}", v.outcome).to_uppercase(),
            s.datum.clone(),
            format!("{:?}", s.metric),
            ratios.join(" "),
            number(s.drift),
        ]);
    }
}

pub fn kernel_verify(cfg: &RunConfig) -> Result<Report, CliError> {
    let cap = CapDomain::new(cfg.dim, cfg.cap_angle)?;
    let dcfg = DiscretizationConfig::with_grid(cfg.mesh);
    let ground = dirichlet_eigenvalue_cap(&cap, 0, &dcfg)?;
    let strip = strip_report(&PhiContext::new(cfg.dim, cfg.nu, ground.m_exponent)?)?;
    let model = KernelBoundModel::from_strip(&strip, 1.0, 1.0)?;
    let hcfg = HarnessConfig::new(cfg.cap_angle, model.delta, cfg.levels);
    let mut suite = random_suite(cfg.seed, cfg.suite_size);
    suite.push(DataGenerator::Constant { value: 1.0 });
    let p_crit = critical_exponent(&model);

    let mut verdicts = vec![
        verify_lemma(LemmaId::Far, &suite, 1.0, &hcfg, &model)?,
        verify_lemma(LemmaId::MiddleUniform, &suite, 1.0, &hcfg, &model)?,
    ];
    let near_ps: Vec<f64> = match cfg.p {
        Some(p) => vec![p],
        None => vec![0.9 * p_crit, 1.05 * p_crit],
    };
    for p in near_ps {
        let mut near_suite = vec![near_zone_singular_datum(&model, p)];
        if p > p_crit {
            near_suite.extend(suite.iter().copied());
        }
        verdicts.push(verify_lemma(LemmaId::Near, &near_suite, p, &hcfg, &model)?);
    }
    let p4 = cfg.p.filter(|p| *p > 1.0).unwrap_or(2.0);
    verdicts.push(verify_lemma(LemmaId::MiddleLp, &suite, p4, &hcfg, &model)?);

    let finest = LemmaId::MiddleUniform.schedule().at(cfg.levels - 1);
    let bnd = ConeBoundary::new(cfg.cap_angle, model.delta, finest)?;
    let overlap = dyadic_band_accounting(&bnd)?;
    let one = DataGenerator::Constant { value: 1.0 }.sample(&bnd)?;
    let rep = maximal_report(&bnd, &one, &hcfg.cone, &model, p4, Components::ALL, hcfg.evaluation_radius)?;

    let passed = verdicts.iter().all(LemmaVerdict::passed) && overlap.max_count <= 5 && overlap.rescale_exact;
    let statuses: Vec<Value> =
        verdicts.iter().map(|v| json!({"lemma": v.lemma, "p": v.p, "outcome": v.outcome})).collect();
    let result = json!({
        "strip": strip,
        "p_critical": p_crit,
        "model": model,
        "harness": hcfg,
        "verdicts": verdicts,
        "summary": statuses,
        "sharpness_detected": verdicts.iter().any(|v| v.outcome == Outcome::Diverges),
        "overlap": overlap,
        "maximal_constant_datum": {
            "mesh": finest,
            "f_l1": rep.f_l1,
            "v1_norms": rep.v1_norms,
            "v2_norms": rep.v2_norms,
            "v3_norms": rep.v3_norms,
            "z_constant": rep.z_constant,
            "evaluated_points": rep.excluded.iter().filter(|e| !**e).count(),
            "skipped_points": rep.skipped_count(),
        },
    });
    let header = ["lemma", "p", "branch", "outcome", "datum", "metric", "ratios", "drift"].map(String::from).to_vec();
    let mut rows = Vec::new();
    for v in &verdicts {
        verdict_rows(v, &mut rows);
    }
    Ok(Report { command: cfg.command, result, passed, table: (header, rows) })
}

pub fn phi_table(cfg: &RunConfig) -> Result<Report, CliError> {
    let m = match cfg.m {
        Some(m) => m,
        None => {
            let cap = CapDomain::new(cfg.dim, cfg.cap_angle)?;
            dirichlet_eigenvalue_cap(&cap, 0, &DiscretizationConfig::with_grid(cfg.mesh))?.m_exponent
        }
    };
    let ctx = PhiContext::new(cfg.dim, cfg.nu, m)?;
    let k_lo = (-(cfg.dim as f64 - 2.0) / 2.0 / PHI_STEP).round() as i64;
    let k_hi = ((m + 0.5) / PHI_STEP).round() as i64;
    let mut rows = Vec::new();
    let mut samples = Vec::new();
    for k in k_lo..=k_hi {
        // integer multiples keep t = 0 exact
        let t = k as f64 * PHI_STEP;
        let phi = phi_eval(t, &ctx);
        let excess = phi_excess(t, &ctx);
        rows.push(vec![number(t), number(phi), number(excess)]);
        samples.push(json!({"t": t, "phi": phi, "excess": excess}));
    }
    let root = strip_report(&ctx).ok();
    let result = json!({"n": cfg.dim, "nu": cfg.nu, "M": m, "step": PHI_STEP, "strip": root, "samples": samples});
    let header = ["t", "phi", "excess"].map(String::from).to_vec();
    Ok(Report { command: cfg.command, result, passed: true, table: (header, rows) })
}

pub fn execute(cfg: &RunConfig) -> Result<Report, CliError> {
    match cfg.command {
        CommandKind::Analyze => analyze(cfg),
        CommandKind::PencilScan => pencil_scan(cfg),
        CommandKind::KernelVerify => kernel_verify(cfg),
        CommandKind::PhiTable => phi_table(cfg),
    }
}

/// Hex SHA-256 of a string.
pub fn content_hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// The JSON envelope: command, version, resolved config, result and a hash of all of them.
pub fn envelope(cfg: &RunConfig, report: &Report) -> Result<Value, CliError> {
    let mut doc = json!({
        "schema_version": SCHEMA_VERSION,
        "command": report.command.name(),
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg,
        "passed": report.passed,
        "result": report.result,
    });
    let hash = content_hash(&serde_json::to_string(&doc)?);
    doc["content_sha256"] = Value::String(hash);
    Ok(doc)
}

pub fn render(cfg: &RunConfig, report: &Report) -> Result<String, CliError> {
    match cfg.format {
        Format::Json => Ok(serde_json::to_string_pretty(&envelope(cfg, report)?)? + "\n"),
        Format::Csv => {
            let (header, rows) = &report.table;
            let mut body = header.join(",") + "\n";
            for row in rows {
                body.push_str(&row.join(","));
                body.push('\n');
            }
            Ok(format!(
                "# command: {}\n# version: {}\n# config: {}\n# passed: {}\n# content_sha256: {}\n{}",
                report.command.name(),
                env!("CARGO_PKG_VERSION"),
                serde_json::to_string(cfg)?,
                report.passed,
                content_hash(&body),
                body
            ))
        }
    }
}

/// Parses arguments, runs the command, writes the report and returns the exit code.
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
    match run_cli(&cli) {
        Ok(passed) => {
            if passed {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn run_cli(cli: &Cli) -> Result<bool, CliError> {
    let cfg = RunConfig::from_cli(cli)?;
    let report = execute(&cfg)?;
    let text = render(&cfg, &report)?;
    match &cfg.out_path {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(report.passed)
}
