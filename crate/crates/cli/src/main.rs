//! Command-line front end: data I/O, validation, standard-form reduction,
//! symmetry solving and checking, spectra, field evaluation, holonomy, the
//! closed-form reference profile, and the registry of worked examples.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage or parse error.

use adhm_core::adhm::{
    reduce_standard, validate, validate_pair, ADHMPair, GridSpec, StandardData, SweepDomain,
};
use adhm_core::examples::{self, ExampleSpec};
use adhm_core::fields::{
    chakrabarti_mass, chakrabarti_profile, higgs_hyperbolic, higgs_singular, orbit_holonomy,
};
use adhm_core::liealg::ms_generator;
use adhm_core::symmetry::{
    in_ms_set, residual, solve_generators, CertGens, SymmetryCertificate, SymmetryKind, CERT_TOL,
};
use adhm_core::{QMat, Quat};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "adhm",
    about = "Quaternionic ADHM data: validation, symmetry solving, and monopole fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a registry example as StandardData JSON.
    Example(ExampleArgs),
    /// Validate StandardData (or an ADHMPair, reduced first) and report.
    Validate(ValidateArgs),
    /// Reduce an ADHM pair to standard form.
    Reduce(InputArgs),
    /// Solve for or check symmetry certificates.
    Symmetry(SymmetryArgs),
    /// Eigenvalues of Delta(x)^dagger Delta(x) at chosen points.
    Spectrum(SpectrumArgs),
    /// Evaluate monopole fields or circle holonomy.
    Field(FieldArgs),
    /// Closed-form |Phi|(r) reference profile.
    Chakrabarti(ChakrabartiArgs),
}

#[derive(Args)]
struct ExampleArgs {
    /// basic | m0-family | iso-ex | rot-ex | not-in-ms | not-in-ms-converted
    name: String,
    /// Scale parameter of iso-ex / rot-ex.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Comma-separated widths of the m0-family.
    #[arg(long, default_value = "1,2")]
    alphas: String,
    /// Family parameter of not-in-ms(-converted), in (0, (2/3) sqrt 6).
    #[arg(long = "B", default_value_t = 0.5)]
    b_param: f64,
    #[arg(long)]
    json_out: Option<String>,
}

#[derive(Args)]
struct InputArgs {
    /// Input JSON file; "-" or omitted reads stdin.
    file: Option<String>,
    #[arg(long)]
    json_out: Option<String>,
}

#[derive(Args)]
struct ValidateArgs {
    file: Option<String>,
    /// Reduced sweep domain: full | circular | toral | simple-spherical | isoclinic.
    #[arg(long, default_value = "full")]
    domain: String,
    /// Grid spacing as a fraction of the sweep radius.
    #[arg(long, default_value_t = 0.05)]
    grid_step: f64,
    /// Sweep radius margin over ||Mhat||_2.
    #[arg(long, default_value_t = 1.05)]
    radius_margin: f64,
    #[arg(long)]
    json_out: Option<String>,
}

#[derive(Args)]
struct SymmetryArgs {
    /// circular | toral | simple_spherical | isoclinic_spherical |
    /// conformal_spherical | isoclinic_superspherical |
    /// conformal_superspherical | rotational | full | ms_circle
    kind: String,
    file: Option<String>,
    /// Solve for the certificate space.
    #[arg(long, conflicts_with = "check")]
    solve: bool,
    /// Check a certificate file instead of solving.
    #[arg(long)]
    check: Option<String>,
    /// Circle slope for the circular kind.
    #[arg(long)]
    t: Option<f64>,
    /// Residual threshold for --check.
    #[arg(long, default_value_t = CERT_TOL)]
    tol: f64,
    #[arg(long)]
    json_out: Option<String>,
}

#[derive(Args)]
struct SpectrumArgs {
    file: Option<String>,
    /// Evaluation point "w,x,y,z" (repeatable).
    #[arg(long = "x", required = true)]
    points: Vec<String>,
    #[arg(long)]
    json_out: Option<String>,
}

#[derive(Args)]
struct FieldArgs {
    file: Option<String>,
    /// hyperbolic | singular | holonomy
    #[arg(long)]
    mode: String,
    /// Semicolon-separated points: "x0,x1,r" (hyperbolic), "X1,X2,X3"
    /// (singular / holonomy ball points), or "w,x,y,z" (holonomy).
    #[arg(long)]
    points: String,
    /// Certificate JSON file; solved on the fly when omitted.
    #[arg(long)]
    cert: Option<String>,
    /// Holonomy discretization steps.
    #[arg(long, default_value_t = 512)]
    steps: usize,
    /// Finite-difference step scale.
    #[arg(long, default_value_t = 1e-4)]
    h: f64,
    /// Circle offset of the fibration section (singular mode).
    #[arg(long, default_value_t = 0.0)]
    theta0: f64,
    /// Certificate residual gate.
    #[arg(long, default_value_t = CERT_TOL)]
    tol: f64,
    #[arg(long)]
    json_out: Option<String>,
}

#[derive(Args)]
struct ChakrabartiArgs {
    /// Profile parameter C > 1 (mass (C-1)/2).
    #[arg(long = "C")]
    c_param: f64,
    /// Single evaluation radius.
    #[arg(long)]
    r: Option<f64>,
    /// Grid "start:end:count".
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    json_out: Option<String>,
}

/// Shared certificate JSON schema: every generator in the 4-array matrix form.
#[derive(Serialize, Deserialize)]
struct CertificateJson {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<f64>,
    generators: Vec<QMat>,
    residual: f64,
}

fn cert_to_json(cert: &SymmetryCertificate) -> CertificateJson {
    let t = match cert.kind {
        SymmetryKind::Circular { t } => Some(t),
        _ => None,
    };
    let generators = match &cert.gens {
        CertGens::SoK(g) => g.iter().map(QMat::from_real).collect(),
        CertGens::SpNK(g) => g.clone(),
    };
    CertificateJson {
        kind: cert.kind.name().to_string(),
        t,
        generators,
        residual: cert.residual,
    }
}

fn cert_from_json(json: &CertificateJson) -> Result<SymmetryCertificate, String> {
    let kind = parse_kind(&json.kind, json.t)?;
    let gens = if kind.is_conformal() {
        CertGens::SpNK(json.generators.clone())
    } else {
        for g in &json.generators {
            if g.imag_part().norm_fro() > 1e-9 * (1.0 + g.norm_fro()) {
                return Err("so(k) generators must be real".into());
            }
        }
        CertGens::SoK(json.generators.iter().map(|g| g.real_part()).collect())
    };
    Ok(SymmetryCertificate {
        kind,
        gens,
        residual: json.residual,
    })
}

fn parse_kind(name: &str, t: Option<f64>) -> Result<SymmetryKind, String> {
    Ok(match name {
        "circular" => SymmetryKind::Circular {
            t: t.ok_or("circular kind needs --t in [0, 1]")?,
        },
        "toral" => SymmetryKind::Toral,
        "simple_spherical" => SymmetryKind::SimpleSpherical,
        "isoclinic_spherical" => SymmetryKind::IsoclinicSpherical,
        "conformal_spherical" => SymmetryKind::ConformalSpherical,
        "isoclinic_superspherical" => SymmetryKind::IsoclinicSuperspherical,
        "conformal_superspherical" => SymmetryKind::ConformalSuperspherical,
        "rotational" => SymmetryKind::Rotational,
        "full" => SymmetryKind::Full,
        "ms_circle" => SymmetryKind::MsCircle,
        other => return Err(format!("unknown symmetry kind '{other}'")),
    })
}

enum Failure {
    /// Check ran and failed: exit 1.
    Check(String),
    /// Bad usage or unparsable input: exit 2.
    Usage(String),
}

type CmdResult = Result<(), Failure>;

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn check<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Check(e.to_string())
}

fn read_input(file: &Option<String>) -> Result<String, Failure> {
    match file.as_deref() {
        None | Some("-") => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf).map_err(usage)?;
            Ok(buf)
        }
        Some(path) => std::fs::read_to_string(path).map_err(usage),
    }
}

/// StandardData directly, or an ADHMPair reduced to standard form.
fn load_data(file: &Option<String>) -> Result<StandardData, Failure> {
    let text = read_input(file)?;
    if let Ok(data) = serde_json::from_str::<StandardData>(&text) {
        return Ok(data);
    }
    match serde_json::from_str::<ADHMPair>(&text) {
        Ok(pair) => reduce_standard(&pair).map(|(d, _)| d).map_err(check),
        Err(e) => Err(usage(format!(
            "input is neither StandardData nor ADHMPair: {e}"
        ))),
    }
}

fn emit<T: Serialize>(value: &T, json_out: &Option<String>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(usage)?;
    match json_out {
        Some(path) => std::fs::write(path, text + "\n").map_err(usage)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn parse_floats(text: &str) -> Result<Vec<f64>, Failure> {
    text.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(usage))
        .collect()
}

fn cmd_example(args: &ExampleArgs) -> CmdResult {
    let spec = match args.name.as_str() {
        "basic" => ExampleSpec::Basic,
        "m0-family" => ExampleSpec::M0Family {
            alphas: parse_floats(&args.alphas)?,
        },
        "iso-ex" => ExampleSpec::IsoEx {
            lambda: args.lambda,
        },
        "rot-ex" => ExampleSpec::RotEx {
            lambda: args.lambda,
        },
        "not-in-ms" => ExampleSpec::NotInMs { b: args.b_param },
        "not-in-ms-converted" => ExampleSpec::NotInMsConverted { b: args.b_param },
        other => return Err(usage(format!("unknown example '{other}'"))),
    };
    let data = examples::build(&spec).map_err(usage)?;
    emit(&data, &args.json_out)
}

fn parse_domain(name: &str) -> Result<SweepDomain, Failure> {
    Ok(match name {
        "full" => SweepDomain::Full,
        "circular" => SweepDomain::CircularReduced,
        "toral" => SweepDomain::ToralReduced,
        "simple-spherical" => SweepDomain::SimpleSphericalReduced,
        "isoclinic" => SweepDomain::IsoclinicReduced,
        other => return Err(usage(format!("unknown domain '{other}'"))),
    })
}

fn cmd_validate(args: &ValidateArgs) -> CmdResult {
    let text = read_input(&args.file)?;
    let grid = GridSpec {
        step_factor: args.grid_step,
        radius_margin: args.radius_margin,
        domain: parse_domain(&args.domain)?,
    };
    // A raw pair is validated at the pair level first, then reduced.
    let report = if let Ok(data) = serde_json::from_str::<StandardData>(&text) {
        validate(&data, &grid)
    } else {
        match serde_json::from_str::<ADHMPair>(&text) {
            Ok(pair) => {
                let mut report = validate_pair(&pair);
                if report.pass {
                    match reduce_standard(&pair) {
                        Ok((data, _)) => {
                            let std_report = validate(&data, &grid);
                            report.pass &= std_report.pass;
                            report.checks.extend(std_report.checks);
                            report.min_delta_eigenvalue = std_report.min_delta_eigenvalue;
                            report.argmin_point = std_report.argmin_point;
                        }
                        Err(e) => return Err(check(e)),
                    }
                }
                report
            }
            Err(e) => {
                return Err(usage(format!(
                    "input is neither StandardData nor ADHMPair: {e}"
                )))
            }
        }
    };
    let pass = report.pass;
    emit(&report, &args.json_out)?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Check("validation failed".into()))
    }
}

fn cmd_reduce(args: &InputArgs) -> CmdResult {
    let text = read_input(&args.file)?;
    let pair: ADHMPair = serde_json::from_str::<ADHMPair>(&text)
        .or_else(|_| serde_json::from_str::<StandardData>(&text).map(|d| d.pair()))
        .map_err(|e| usage(format!("input is neither ADHMPair nor StandardData: {e}")))?;
    let (data, gauge) = reduce_standard(&pair).map_err(check)?;
    #[derive(Serialize)]
    struct ReduceOut {
        data: StandardData,
        gauge_q: QMat,
        gauge_k: QMat,
    }
    let out = ReduceOut {
        data,
        gauge_q: gauge.q.clone(),
        gauge_k: QMat::from_real(&gauge.k),
    };
    emit(&out, &args.json_out)
}

fn cmd_symmetry(args: &SymmetryArgs) -> CmdResult {
    let kind = parse_kind(&args.kind, args.t).map_err(usage)?;
    let data = load_data(&args.file)?;
    if let Some(cert_path) = &args.check {
        let text = std::fs::read_to_string(cert_path).map_err(usage)?;
        let json: CertificateJson = serde_json::from_str(&text).map_err(usage)?;
        let cert = cert_from_json(&json).map_err(usage)?;
        let res = residual(&data, &cert).map_err(check)?;
        #[derive(Serialize)]
        struct CheckOut {
            kind: String,
            residual: f64,
            pass: bool,
        }
        let pass = res <= args.tol * (1.0 + data.mhat().norm_fro());
        emit(
            &CheckOut {
                kind: kind.name().into(),
                residual: res,
                pass,
            },
            &args.json_out,
        )?;
        return if pass {
            Ok(())
        } else {
            Err(Failure::Check(format!("residual {res:e}")))
        };
    }
    // Default action is solving.
    let outcome = solve_generators(&data, kind).map_err(check)?;
    #[derive(Serialize)]
    struct SolveOut {
        kind: String,
        certificates: Vec<CertificateJson>,
        linear_residual: f64,
        kernel_dim: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        diagnostic: Option<String>,
        in_ms_set: bool,
    }
    let out = SolveOut {
        kind: kind.name().into(),
        certificates: outcome.certificates.iter().map(cert_to_json).collect(),
        linear_residual: outcome.linear_residual,
        kernel_dim: outcome.kernel_dim,
        diagnostic: outcome.diagnostic.clone(),
        in_ms_set: in_ms_set(&data),
    };
    emit(&out, &args.json_out)
}

fn cmd_spectrum(args: &SpectrumArgs) -> CmdResult {
    let data = load_data(&args.file)?;
    #[derive(Serialize)]
    struct Row {
        x: [f64; 4],
        eigenvalues: Vec<f64>,
    }
    let mut rows = Vec::new();
    for point in &args.points {
        let c = parse_floats(point)?;
        if c.len() != 4 {
            return Err(usage(format!("point '{point}' needs 4 components w,x,y,z")));
        }
        let x = Quat::new(c[0], c[1], c[2], c[3]);
        let eigenvalues = data.delta_spectrum(x).map_err(check)?;
        rows.push(Row {
            x: [c[0], c[1], c[2], c[3]],
            eigenvalues,
        });
    }
    emit(&rows, &args.json_out)
}

fn solve_or_load_cert(
    data: &StandardData,
    cert_file: &Option<String>,
    t: f64,
) -> Result<SymmetryCertificate, Failure> {
    if let Some(path) = cert_file {
        let text = std::fs::read_to_string(path).map_err(usage)?;
        let json: CertificateJson = serde_json::from_str(&text).map_err(usage)?;
        return cert_from_json(&json).map_err(usage);
    }
    let outcome = solve_generators(data, SymmetryKind::Circular { t }).map_err(check)?;
    outcome.certificates.into_iter().next().ok_or_else(|| {
        Failure::Check(format!(
            "no circular({t}) certificate found for this data; the requested circle class \
             needs one (supply --cert){}",
            outcome
                .diagnostic
                .map(|d| format!("; diagnostic: {d}"))
                .unwrap_or_default()
        ))
    })
}

fn cmd_field(args: &FieldArgs) -> CmdResult {
    let data = load_data(&args.file)?;
    let points: Vec<Vec<f64>> = args
        .points
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(parse_floats)
        .collect::<Result<_, _>>()?;
    let mut rows: Vec<serde_json::Value> = Vec::new();
    match args.mode.as_str() {
        "hyperbolic" => {
            let cert = solve_or_load_cert(&data, &args.cert, 1.0)?;
            for p in &points {
                if p.len() != 3 {
                    return Err(usage("hyperbolic points are x0,x1,r"));
                }
                let sample =
                    higgs_hyperbolic(&data, &cert, [p[0], p[1], p[2]], args.h).map_err(check)?;
                rows.push(serde_json::to_value(sample.to_row()).map_err(usage)?);
            }
        }
        "singular" => {
            let cert = solve_or_load_cert(&data, &args.cert, 0.0)?;
            for p in &points {
                if p.len() != 3 {
                    return Err(usage("singular points are X1,X2,X3"));
                }
                let sample = higgs_singular(&data, &cert, [p[0], p[1], p[2]], args.theta0, args.h)
                    .map_err(check)?;
                rows.push(serde_json::to_value(sample.to_row()).map_err(usage)?);
            }
        }
        "holonomy" => {
            let ms = ms_generator();
            for p in &points {
                let x = match p.len() {
                    3 => Quat::new(0.0, p[0], p[1], p[2]),
                    4 => Quat::new(p[0], p[1], p[2], p[3]),
                    _ => return Err(usage("holonomy points are X1,X2,X3 or w,x,y,z")),
                };
                let spec = orbit_holonomy(&data, &ms, x, args.steps).map_err(check)?;
                rows.push(serde_json::to_value(&spec).map_err(usage)?);
            }
        }
        other => return Err(usage(format!("unknown mode '{other}'"))),
    }
    emit(&rows, &args.json_out)
}

fn cmd_chakrabarti(args: &ChakrabartiArgs) -> CmdResult {
    #[derive(Serialize)]
    struct Row {
        c: f64,
        r: f64,
        phi: f64,
        mass: f64,
    }
    let mut rows = Vec::new();
    if let Some(r) = args.r {
        let phi = chakrabarti_profile(args.c_param, r).map_err(check)?;
        rows.push(Row {
            c: args.c_param,
            r,
            phi,
            mass: chakrabarti_mass(args.c_param),
        });
    }
    if let Some(grid) = &args.grid {
        let parts: Vec<&str> = grid.split(':').collect();
        if parts.len() != 3 {
            return Err(usage("grid is start:end:count"));
        }
        let (a, b): (f64, f64) = (
            parts[0].parse().map_err(usage)?,
            parts[1].parse().map_err(usage)?,
        );
        let count: usize = parts[2].parse().map_err(usage)?;
        for idx in 0..count {
            let r = a + (b - a) * idx as f64 / (count.max(2) - 1) as f64;
            let phi = chakrabarti_profile(args.c_param, r).map_err(check)?;
            rows.push(Row {
                c: args.c_param,
                r,
                phi,
                mass: chakrabarti_mass(args.c_param),
            });
        }
    }
    if rows.is_empty() {
        return Err(usage("chakrabarti needs --r or --grid"));
    }
    emit(&rows, &args.json_out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Example(args) => cmd_example(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Reduce(args) => cmd_reduce(args),
        Command::Symmetry(args) => cmd_symmetry(args),
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Field(args) => cmd_field(args),
        Command::Chakrabarti(args) => cmd_chakrabarti(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
