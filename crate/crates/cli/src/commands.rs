use std::f64::consts::LN_10;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;
use debranges::classifier::{classify, ClassificationReport};
use debranges::defect::{bior_defect_profile, mixed_gram, GramReport};
use debranges::evaluator::{cauchy_real, log_a_real, RealPoint};
use debranges::fock::{
    build_fock_weight, max_disjoint_epsilon, norm_compare, rotation_matrix, rotation_trend, CompareConfig,
    CompareReport, RotationMatrix, RotationTrend,
};
use debranges::forge::{
    bior_construct, case_ii_with_blocks, case_iii_with_blocks, forge_case_ii, forge_case_iii, forge_case_iv,
    infinite_defect_seed, verify, Certificate, ForgeConfig,
};
use debranges::spectral::{gen_lacunary, gen_power_separated, MassRule, SpectralData};
use log::{debug, info, warn};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, EXIT_VERIFY};
use crate::manifest::{self, RunManifest};
use crate::plot::{csv, svg, Cell, Trace};
use crate::schema::{self, detect, Kind, ValidationReport};
use crate::{json, Cli, Command, Common, DefectArgs, Family, FockArgs, FockTest, ForgeArgs, ForgeCase, GenArgs};

/// Output of `fock --test rotation`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RotationReport {
    pub theta: f64,
    pub truncation: usize,
    pub column_norms: Vec<f64>,
    pub bound: f64,
    /// Bounds at half and full truncation.
    pub trend: RotationTrend,
    pub matrix: RotationMatrix,
}

/// Output of `fock --test compare`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompareOutput {
    pub epsilon: f64,
    /// Least `C` with every trial ratio in `[1/C, C]`.
    pub bound: f64,
    #[serde(flatten)]
    pub report: CompareReport,
}

struct Run {
    dir: PathBuf,
    manifest: RunManifest,
}

impl Run {
    fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        fs::create_dir_all(&self.dir)
            .map_err(|e| CliError::invalid("OutputUnwritable", format!("{}: {e}", self.dir.display())))?;
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| CliError::invalid("OutputUnwritable", format!("{}: {e}", path.display())))?;
        debug!("wrote {}", path.display());
        if !self.manifest.outputs.contains(&path) {
            self.manifest.outputs.push(path);
        }
        Ok(())
    }

    fn write_json<T: Serialize>(&mut self, name: &str, v: &T) -> Result<(), CliError> {
        let s = json::to_string(v)?;
        self.write(name, &s)
    }

    fn read_value(&mut self, common: &Common) -> Result<Value, CliError> {
        let path = common
            .input
            .as_ref()
            .ok_or_else(|| CliError::invalid("MissingInput", "--input is required"))?;
        self.manifest.inputs.push(path.clone());
        read_json(path)
    }

    /// Validated spectral data, cut to `--truncation` nodes when `prefix` is set.
    fn read_data(&mut self, common: &Common, prefix: bool) -> Result<SpectralData, CliError> {
        let v = self.read_value(common)?;
        let data: SpectralData = schema::parse(&v, "SpectralData")?;
        let data = data.validated()?;
        Ok(match common.truncation {
            Some(k) if prefix => {
                if k == 0 {
                    return Err(CliError::invalid("InvalidTruncation", "--truncation must be positive"));
                }
                data.prefix(k)
            }
            _ => data,
        })
    }
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::invalid("InputUnreadable", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::invalid("MalformedJson", format!("{}: {e}", path.display())))
}

pub fn report_error(e: &CliError) {
    match json::to_string(e) {
        Ok(s) => print!("{s}"),
        Err(_) => println!("{{\"error\": \"{}\"}}", e.name),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Gen(_) => "gen",
        Command::Validate => "validate",
        Command::Classify => "classify",
        Command::Forge(_) => "forge",
        Command::Verify => "verify",
        Command::Defect(_) => "defect",
        Command::Fock(_) => "fock",
        Command::Plot => "plot",
        Command::Replay => "replay",
    }
}

/// Runs one command, writes its manifest and returns the exit code.
pub fn execute(cli: Cli, argv: Vec<String>) -> i32 {
    if let Command::Replay = cli.command {
        return replay(&cli);
    }
    let params = serde_json::to_value(&cli).unwrap_or(Value::Null);
    let mut run = Run {
        dir: cli.common.output_dir(),
        manifest: RunManifest::new(command_name(&cli.command), argv, params),
    };
    let mut result = dispatch(&cli, &mut run);
    run.manifest.finish(&result);
    let m = run.manifest.clone();
    if let Err(e) = run.write_json(manifest::FILE_NAME, &m) {
        if result.is_ok() {
            result = Err(e);
        }
    }
    match result {
        Ok(()) => {
            for p in &m.outputs {
                println!("{}", p.display());
            }
            0
        }
        Err(e) => {
            report_error(&e);
            e.exit_code
        }
    }
}

fn replay(cli: &Cli) -> i32 {
    let loaded = cli
        .common
        .input
        .as_ref()
        .ok_or_else(|| CliError::invalid("MissingInput", "replay needs --input MANIFEST"))
        .and_then(|p| read_json(p))
        .and_then(|v| schema::parse::<RunManifest>(&v, "RunManifest"));
    let m = match loaded {
        Ok(m) => m,
        Err(e) => {
            report_error(&e);
            return e.exit_code;
        }
    };
    let mut argv = m.argv.clone();
    if let Some(out) = &cli.common.output {
        argv.push("--output".into());
        argv.push(out.display().to_string());
    }
    info!("replaying `{}`", argv.join(" "));
    match Cli::try_parse_from(std::iter::once("debranges".to_string()).chain(argv.iter().cloned())) {
        Ok(c) if !matches!(c.command, Command::Replay) => execute(c, argv),
        Ok(_) => {
            let e = CliError::invalid("InvalidManifest", "a manifest cannot replay another replay");
            report_error(&e);
            e.exit_code
        }
        Err(e) => {
            let e = CliError::invalid("InvalidManifest", e.to_string());
            report_error(&e);
            e.exit_code
        }
    }
}

fn dispatch(cli: &Cli, run: &mut Run) -> Result<(), CliError> {
    let common = &cli.common;
    match &cli.command {
        Command::Gen(a) => cmd_gen(run, a),
        Command::Validate => cmd_validate(run, common),
        Command::Classify => cmd_classify(run, common),
        Command::Forge(a) => cmd_forge(run, common, a),
        Command::Verify => cmd_verify(run, common),
        Command::Defect(a) => cmd_defect(run, common, a),
        Command::Fock(a) => cmd_fock(run, common, a),
        Command::Plot => cmd_plot(run, common),
        Command::Replay => unreachable!("handled before dispatch"),
    }
}

fn cmd_gen(run: &mut Run, a: &GenArgs) -> Result<(), CliError> {
    let mass = MassRule::parse(&a.mass)?;
    let data = match a.family {
        Family::Lacunary => gen_lacunary(a.ratio, a.count, a.first.unwrap_or(a.ratio), &mass)?,
        Family::Power => gen_power_separated(a.rho, a.count, &mass)?,
    };
    info!("generated {} nodes", data.len());
    run.write_json("data.json", &data)
}

fn cmd_validate(run: &mut Run, common: &Common) -> Result<(), CliError> {
    let v = run.read_value(common)?;
    let kind = detect(&v);
    let violations = match kind {
        Some(k) => schema::check(k, &v),
        None => vec!["unrecognized document".to_string()],
    };
    let report = ValidationReport {
        kind,
        valid: violations.is_empty(),
        violations,
    };
    run.write_json("validation.json", &report)?;
    if report.valid {
        info!("valid {:?}", kind.unwrap());
        return Ok(());
    }
    if kind == Some(Kind::SpectralData) {
        if let Ok(d) = schema::parse::<SpectralData>(&v, "SpectralData") {
            d.validated()?;
        }
    }
    Err(CliError::invalid(
        if kind.is_some() { "InvalidDocument" } else { "UnrecognizedDocument" },
        report.violations.join("; "),
    ))
}

fn cmd_classify(run: &mut Run, common: &Common) -> Result<(), CliError> {
    let data = run.read_data(common, true)?;
    let report = classify(&data);
    info!("verdict {:?}", report.verdict);
    run.write_json("classification.json", &report)
}

fn write_certificate(run: &mut Run, cert: &Certificate, tol: f64) -> Result<(), CliError> {
    run.write_json("certificate.json", cert)?;
    let report = verify(cert, tol);
    run.write_json("verify.json", &report)?;
    if report.passed {
        info!("certificate with {} zeros, residual {:.3e}", cert.zeros.len(), report.max_residual);
        Ok(())
    } else {
        Err(CliError::new(EXIT_VERIFY, "VerificationFailure", report.failures.join("; ")))
    }
}

fn cmd_forge(run: &mut Run, common: &Common, a: &ForgeArgs) -> Result<(), CliError> {
    let data = run.read_data(common, true)?;
    let mut cfg = ForgeConfig {
        residual_tol: common.tol,
        ..ForgeConfig::default()
    };
    if let Some(e) = a.epsilon {
        cfg.epsilon = e;
    }
    if let Some(anchor) = a.anchor.filter(|&x| x >= data.len()) {
        return Err(CliError::invalid("IndexOutOfRange", format!("anchor {anchor} not below {}", data.len())));
    }
    match a.case {
        ForgeCase::Ii => {
            let cert = match &a.lefts {
                Some(l) => case_ii_with_blocks(&data, l, &cfg)?,
                None => forge_case_ii(&data, a.blocks, &cfg)?,
            };
            write_certificate(run, &cert, common.tol)
        }
        ForgeCase::Iii => {
            let cert = match (&a.lefts, a.anchor) {
                (Some(l), Some(anchor)) => case_iii_with_blocks(&data, anchor, l, &cfg)?,
                (Some(_), None) => return Err(CliError::invalid("MissingAnchor", "--lefts for case iii needs --anchor")),
                _ => forge_case_iii(&data, a.blocks, &cfg)?,
            };
            write_certificate(run, &cert, common.tol)
        }
        ForgeCase::Iv => {
            let cert = forge_case_iv(&data, a.blocks, &cfg)?;
            write_certificate(run, &cert, common.tol)
        }
        ForgeCase::Bior => {
            let r = bior_construct(&data, a.defect)?;
            info!("generating function of degree {}", r.generating_function.degree());
            run.write_json("bior.json", &r)
        }
        ForgeCase::Seed => {
            if a.d_zeros.is_empty() {
                return Err(CliError::invalid("MissingDZeros", "--d-zeros is required for the seed"));
            }
            let r = infinite_defect_seed(&data.t, &a.d_zeros)?;
            run.write_json("seed.json", &r)?;
            if r.identity_error <= common.tol {
                info!("seed identity error {:.3e}", r.identity_error);
                Ok(())
            } else {
                Err(CliError::construction(
                    "IdentityFailure",
                    format!("identity error {:.3e} exceeds {:.3e}", r.identity_error, common.tol),
                ))
            }
        }
    }
}

fn cmd_verify(run: &mut Run, common: &Common) -> Result<(), CliError> {
    let v = run.read_value(common)?;
    let cert: Certificate = schema::parse(&v, "Certificate")?;
    cert.data.clone().validated()?;
    let report = verify(&cert, common.tol);
    run.write_json("verify.json", &report)?;
    if report.passed {
        info!("certificate verified");
        Ok(())
    } else {
        Err(CliError::new(EXIT_VERIFY, "VerificationFailure", report.failures.join("; ")))
    }
}

fn cmd_defect(run: &mut Run, common: &Common, a: &DefectArgs) -> Result<(), CliError> {
    let full = run.read_data(common, false)?;
    let k = common.truncation.unwrap_or(full.len()).min(full.len());
    let data = full.prefix(k);
    let r = bior_construct(&data, a.defect)?;
    let lambda1 = r.generating_function.zeros.clone();
    let lambda2: Vec<Complex64> = a.kernels.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let report = mixed_gram(&data, &r.generating_function, &lambda1, &lambda2, k, a.rank_tol)?;
    info!("defect estimate {} at K = {}", report.defect_estimate, report.truncation);
    run.write_json("bior.json", &r)?;
    run.write_json("gram.json", &report)?;
    if lambda2.is_empty() {
        let ks: Vec<usize> = if full.len() >= 2 * k { vec![k, 2 * k] } else { vec![k] };
        let profile = bior_defect_profile(|m| full.prefix(m), a.defect, &ks, a.rank_tol)?;
        info!("estimates {:?} at K = {:?}", profile.estimates, ks);
        run.write_json("defect_profile.json", &profile)?;
    }
    if a.dump_matrix {
        let rows: Vec<Vec<Cell>> = report
            .gram
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(move |(j, z)| vec![Cell::Int(i), Cell::Int(j), Cell::Float(z.re), Cell::Float(z.im)])
            })
            .collect();
        run.write("gram.csv", &csv(&["i", "j", "re", "im"], &rows)?)?;
    }
    Ok(())
}

fn band_epsilon(data: &SpectralData, given: Option<f64>) -> f64 {
    given.unwrap_or_else(|| 0.1f64.min(0.5 * max_disjoint_epsilon(data)))
}

fn cmd_fock(run: &mut Run, common: &Common, a: &FockArgs) -> Result<(), CliError> {
    let data = run.read_data(common, true)?;
    match a.test {
        FockTest::Rotation => {
            let matrix = rotation_matrix(&data, a.theta)?;
            let k = data.len();
            let ks = if k >= 2 { vec![k / 2, k] } else { vec![k] };
            let trend = rotation_trend(|m| data.prefix(m), a.theta, &ks)?;
            info!("rotation bound {:.3e}, growth {:.3} over K = {:?}", matrix.bound(), trend.growth, ks);
            let report = RotationReport {
                theta: a.theta,
                truncation: k,
                column_norms: matrix.column_norms(),
                bound: matrix.bound(),
                trend,
                matrix,
            };
            run.write_json("fock_rotation.json", &report)
        }
        FockTest::Weight => {
            let w = build_fock_weight(&data, band_epsilon(&data, a.epsilon))?;
            for msg in &w.warnings {
                warn!("{msg}");
            }
            run.write_json("fock_weight.json", &w)?;
            let rows: Vec<Vec<Cell>> = w
                .bands
                .iter()
                .flat_map(|b| {
                    b.table.iter().map(move |&(r, phi)| {
                        vec![Cell::Int(b.node), Cell::Float(b.inner), Cell::Float(b.outer), Cell::Float(r), Cell::Float(phi)]
                    })
                })
                .collect();
            run.write("bands.csv", &csv(&["node", "inner", "outer", "r", "phi"], &rows)?)
        }
        FockTest::Compare => {
            if a.trials == 0 {
                return Err(CliError::invalid("InvalidTrials", "--trials must be positive"));
            }
            let epsilon = band_epsilon(&data, a.epsilon);
            let w = build_fock_weight(&data, epsilon)?;
            for msg in &w.warnings {
                warn!("{msg}");
            }
            let cfg = CompareConfig {
                trials: a.trials,
                seed: common.seed,
                ..CompareConfig::default()
            };
            let report = norm_compare(&data, &w, &cfg)?;
            info!("ratio range [{:.3e}, {:.3e}]", report.min_ratio, report.max_ratio);
            run.write_json(
                "fock_compare.json",
                &CompareOutput {
                    epsilon,
                    bound: report.bound(),
                    report,
                },
            )
        }
    }
}

fn cmd_plot(run: &mut Run, common: &Common) -> Result<(), CliError> {
    let v = run.read_value(common)?;
    match detect(&v) {
        Some(Kind::Certificate) => plot_certificate(run, &schema::parse(&v, "Certificate")?),
        Some(Kind::ClassificationReport) => plot_classification(run, &schema::parse(&v, "ClassificationReport")?),
        Some(Kind::GramReport) => plot_gram(run, &schema::parse(&v, "GramReport")?),
        Some(Kind::RotationReport) => plot_rotation(run, &schema::parse(&v, "RotationReport")?),
        _ => Err(CliError::invalid(
            "MissingField",
            "plot needs a certificate (zeros), classification (C_constants), gram report (singular_values) or rotation report (column_norms)",
        )),
    }
}

/// `sign(x)·log10(1 + |x|)`, which keeps both signs and many decades on one axis.
fn axis(x: f64) -> f64 {
    x.signum() * x.abs().ln_1p() / LN_10
}

fn axis_inv(u: f64) -> f64 {
    u.signum() * (u.abs() * LN_10).exp_m1()
}

fn log10_abs_h(data: &SpectralData, w: &[f64], x: f64) -> Option<f64> {
    let p = RealPoint::anchored(data, x);
    let (c, _) = cauchy_real(data, w, &p).ok()?;
    let a = log_a_real(data, &p);
    Some((a.log_abs + c.abs().ln()) / LN_10)
}

fn plot_certificate(run: &mut Run, cert: &Certificate) -> Result<(), CliError> {
    let data = &cert.data;
    if data.is_empty() {
        return Err(CliError::missing_field("data.t", "certificate"));
    }
    let w = cert.h_weights();
    let mut breaks: Vec<f64> = data.t.iter().map(|&t| axis(t)).collect();
    breaks.insert(0, breaks[0] - 0.5);
    breaks.push(breaks[breaks.len() - 1] + 0.5);
    let mut rows = Vec::new();
    let mut points = Vec::new();
    for seg in breaks.windows(2) {
        for i in 1..24 {
            let x = axis_inv(seg[0] + (seg[1] - seg[0]) * i as f64 / 24.0);
            if data.node_index(x).is_some() {
                continue;
            }
            let y = log10_abs_h(data, &w, x).unwrap_or(f64::NAN);
            rows.push(vec![Cell::Float(x), Cell::Float(axis(x)), Cell::Float(y)]);
            points.push((axis(x), y));
        }
    }
    run.write("h_trace.csv", &csv(&["x", "axis", "log10_abs_h"], &rows)?)?;
    let zeros: Vec<Vec<Cell>> = cert
        .zeros
        .iter()
        .enumerate()
        .map(|(k, s)| vec![Cell::Int(k), Cell::Float(s.value), Cell::Float(axis(s.value))])
        .collect();
    run.write("h_zeros.csv", &csv(&["k", "s", "axis"], &zeros)?)?;
    let trace = Trace {
        title: format!("|h| on the real line, case {:?}, {} common zeros", cert.case, cert.zeros.len()),
        x_label: "sign(x)·log10(1+|x|)".into(),
        y_label: "log10 |h(x)|".into(),
        points,
        markers: cert.zeros.iter().map(|s| (axis(s.value), f64::NAN)).collect(),
    };
    run.write("h_trace.svg", &svg(&trace))
}

fn plot_classification(run: &mut Run, r: &ClassificationReport) -> Result<(), CliError> {
    if r.c_constants.is_empty() {
        return Err(CliError::missing_field("C_constants", "classification"));
    }
    let rows: Vec<Vec<Cell>> = r
        .c_constants
        .iter()
        .enumerate()
        .map(|(n, &c)| vec![Cell::Int(n), Cell::Float(c)])
        .collect();
    run.write("c_profile.csv", &csv(&["n", "C"], &rows)?)?;
    let trace = Trace {
        title: format!("C_n profile, verdict {:?}", r.verdict),
        x_label: "n".into(),
        y_label: "C_n".into(),
        points: r.c_constants.iter().enumerate().map(|(n, &c)| (n as f64, c)).collect(),
        markers: Vec::new(),
    };
    run.write("c_profile.svg", &svg(&trace))
}

fn plot_gram(run: &mut Run, r: &GramReport) -> Result<(), CliError> {
    let top = match r.singular_values.first() {
        Some(&s) if s > 0.0 => s,
        _ => return Err(CliError::missing_field("singular_values", "gram report")),
    };
    let rows: Vec<Vec<Cell>> = r
        .singular_values
        .iter()
        .enumerate()
        .map(|(i, &s)| vec![Cell::Int(i), Cell::Float(s), Cell::Float(s / top)])
        .collect();
    run.write("singular_values.csv", &csv(&["i", "sigma", "relative"], &rows)?)?;
    let trace = Trace {
        title: format!("singular values at K = {}, defect estimate {}", r.truncation, r.defect_estimate),
        x_label: "index".into(),
        y_label: "log10 σ/σ_max (floored at -20)".into(),
        points: r
            .singular_values
            .iter()
            .enumerate()
            .map(|(i, &s)| (i as f64, (s / top).log10().max(-20.0)))
            .collect(),
        markers: Vec::new(),
    };
    run.write("singular_values.svg", &svg(&trace))
}

fn plot_rotation(run: &mut Run, r: &RotationReport) -> Result<(), CliError> {
    if r.column_norms.is_empty() {
        return Err(CliError::missing_field("column_norms", "rotation report"));
    }
    let rows: Vec<Vec<Cell>> = r
        .column_norms
        .iter()
        .enumerate()
        .map(|(n, &c)| vec![Cell::Int(n), Cell::Float(c)])
        .collect();
    run.write("rotation_norms.csv", &csv(&["n", "norm"], &rows)?)?;
    let trace = Trace {
        title: format!("rotation column norms, θ = {:.4}, bound {:.3e}", r.theta, r.bound),
        x_label: "n".into(),
        y_label: "log10 ‖R e_n‖".into(),
        points: r.column_norms.iter().enumerate().map(|(n, &c)| (n as f64, c.log10())).collect(),
        markers: Vec::new(),
    };
    run.write("rotation_norms.svg", &svg(&trace))
}
