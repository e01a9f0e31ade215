//! `qybe`: build sl_q(2) representations and R-matrices, and run the
//! verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input,
//! 3 pole or singular basis.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use qybe_core::cyclic::{build_cyclic_rep, CyclicRepSpec};
use qybe_core::document::{complex_pair, CyclicParams, MatrixDocument, Metadata, TOOL_VERSION};
use qybe_core::linalg::normalize_by_max;
use qybe_core::qcore::ToleranceConfig;
use qybe_core::tensorrep::to_descending_frame;
use qybe_core::verify::{run_suite, Perturbation, ResidualReport, SuiteOptions};
use qybe_core::{assemble_r, build_spin_rep, Basis, DeformationParameter, Error, OperatorTriple, RMode, SpinLabel, Suite};

#[derive(Parser)]
#[command(name = "qybe", version, about = "sl_q(2) representations, R-matrices and Yang-Baxter checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write S+, S- and q^S of a representation as matrix documents.
    Rep(RepArgs),
    /// Assemble the R-matrix for a pair of spins.
    Rmatrix(RmatrixArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Read a matrix document, print it and optionally re-export it.
    Inspect(InspectArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Monomial,
    Orthonormal,
}

#[derive(Args)]
struct RepArgs {
    /// Spin, e.g. `1/2`, `1`, `1.5`.
    #[arg(long, value_parser = parse_spin, conflicts_with = "cyclic")]
    ell: Option<SpinLabel>,
    /// Deformation parameter `a+bi`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    q: Option<Complex64>,
    #[arg(long, value_enum, default_value = "monomial")]
    basis: BasisArg,
    /// Cyclic representation at the root of unity `q = exp(2πi/N)`.
    #[arg(long)]
    cyclic: bool,
    #[arg(long = "N", requires = "cyclic")]
    order: Option<u32>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, requires = "cyclic")]
    alpha: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, requires = "cyclic")]
    beta: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, requires = "cyclic")]
    lambda: Option<Complex64>,
    /// Output directory; the documents go to stdout as a JSON array otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RmatrixArgs {
    #[arg(long, value_parser = parse_spin)]
    l1: SpinLabel,
    #[arg(long, value_parser = parse_spin)]
    l2: SpinLabel,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    u: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, required_unless_present = "xxx")]
    q: Option<Complex64>,
    /// Rational limit q -> 1.
    #[arg(long, conflicts_with = "q")]
    xxx: bool,
    /// Normalization `R_0`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "1")]
    r0: Complex64,
    /// `orthonormal` rescales each factor and lists weights in descending order.
    #[arg(long, value_enum, default_value = "monomial")]
    basis: BasisArg,
    /// Divide by the entry of largest modulus.
    #[arg(long)]
    normalize: bool,
    /// Output file; stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_parser = parse_suite)]
    suite: Suite,
    #[arg(long, env = "QYBE_SEED", default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    samples: usize,
    /// Absolute tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 1e-9)]
    rel_tol: f64,
    /// Root-of-unity orders for the cyclic suite.
    #[arg(long = "N", value_delimiter = ',', default_values_t = [3u32, 5, 7])]
    orders: Vec<u32>,
    /// Write the reports as JSON (`-` for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
    /// Perturb assembled R-matrices by this relative amount.
    #[arg(long, hide = true, default_value_t = 0.0)]
    perturb: f64,
}

#[derive(Args)]
struct InspectArgs {
    file: PathBuf,
    /// Re-export the document here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    t.parse::<Complex64>().map_err(|_| format!("expected a complex number like 0.3+0.4i, got `{s}`"))
}

fn parse_spin(s: &str) -> Result<SpinLabel, String> {
    s.parse::<SpinLabel>().map_err(|e| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse::<Suite>().map_err(|e| e.to_string())
}

/// Exit code for a library error.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::PoleAtSector(_)
        | Error::SingularBasis(_)
        | Error::DegenerateDenominator(_)
        | Error::CompletenessFailure { .. }
        | Error::InconsistentConstraints(_) => 3,
        _ => 2,
    }
}

/// Prints a line to stdout; a closed pipe (e.g. `| head`) is not an error.
fn say(text: &str) -> anyhow::Result<()> {
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn write_or_print(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, format!("{text}\n")).with_context(|| format!("writing {}", p.display())),
        None => say(text),
    }
}

fn basis_tag(b: Basis) -> &'static str {
    match b {
        Basis::Monomial => "monomial",
        Basis::Orthonormal => "orthonormal",
        Basis::Theta => "theta",
    }
}

fn cmd_rep(a: RepArgs) -> anyhow::Result<ExitCode> {
    let (triple, meta): (OperatorTriple, Metadata) = if a.cyclic {
        let order = a.order.ok_or_else(|| Error::InvalidParameter("--cyclic needs --N".into()))?;
        let (alpha, beta, lambda) = (a.alpha.unwrap_or_default(), a.beta.unwrap_or_default(), a.lambda.unwrap_or_default());
        let spec = CyclicRepSpec::new(alpha, beta, lambda, order)?;
        let meta = Metadata {
            q: Some(complex_pair(spec.q().value())),
            cyclic: Some(CyclicParams {
                order,
                alpha: complex_pair(alpha),
                beta: complex_pair(beta),
                lambda: complex_pair(lambda),
            }),
            basis_tag: basis_tag(Basis::Theta).into(),
            tool_version: TOOL_VERSION.into(),
            ..Default::default()
        };
        (build_cyclic_rep(&spec).triple, meta)
    } else {
        let ell = a.ell.ok_or_else(|| Error::InvalidParameter("give --ell or --cyclic".into()))?;
        let qv = a.q.ok_or_else(|| Error::InvalidParameter("--q is required with --ell".into()))?;
        let q = DeformationParameter::generic(qv)?;
        let basis = match a.basis {
            BasisArg::Monomial => Basis::Monomial,
            BasisArg::Orthonormal => Basis::Orthonormal,
        };
        let meta = Metadata {
            q: Some(complex_pair(qv)),
            spins: Some(vec![ell.to_string()]),
            basis_tag: basis_tag(basis).into(),
            tool_version: TOOL_VERSION.into(),
            ..Default::default()
        };
        (build_spin_rep(ell, &q, basis)?, meta)
    };
    let docs: Vec<(&str, MatrixDocument)> = [("S+", triple.sp.clone()), ("S-", triple.sm.clone()), ("qS", triple.q_pow_sf(1.0))]
        .into_iter()
        .map(|(name, m)| (name, MatrixDocument::from_matrix(&m, Metadata { name: Some(name.into()), ..meta.clone() })))
        .collect();
    match a.out {
        Some(dir) => {
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            for (name, doc) in &docs {
                let file = match *name {
                    "S+" => "splus.json",
                    "S-" => "sminus.json",
                    _ => "qs.json",
                };
                write_or_print(Some(&dir.join(file)), &doc.to_json())?;
            }
            eprintln!("wrote {} matrices ({}x{}) to {}", docs.len(), triple.dim(), triple.dim(), dir.display());
        }
        None => {
            let all: Vec<&MatrixDocument> = docs.iter().map(|(_, d)| d).collect();
            say(&serde_json::to_string_pretty(&all)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_rmatrix(a: RmatrixArgs) -> anyhow::Result<ExitCode> {
    let (mode, q) = if a.xxx {
        (RMode::Xxx, None)
    } else {
        let q = DeformationParameter::generic(a.q.expect("required unless --xxx"))?;
        (RMode::Xxz(q), Some(q))
    };
    let r = assemble_r(a.l1, a.l2, a.u, mode, a.r0)?;
    let mut m = r.matrix.clone();
    let mut basis = Basis::Monomial;
    if let BasisArg::Orthonormal = a.basis {
        let q = q.ok_or_else(|| Error::InvalidParameter("the orthonormal frame needs a generic q".into()))?;
        m = to_descending_frame(&m, a.l1, a.l2, &q);
        basis = Basis::Orthonormal;
    }
    let mut normalization = r.normalization.clone();
    if a.normalize {
        m = normalize_by_max(&m);
        normalization = "largest-modulus entry = 1".into();
    }
    let mut tag = basis_tag(basis).to_string();
    if basis == Basis::Orthonormal {
        tag.push_str(", descending weights");
    }
    let meta = Metadata {
        name: Some(format!("R ({})", mode.tag())),
        q: q.map(|q| complex_pair(q.value())),
        u: Some(complex_pair(a.u)),
        spins: Some(vec![a.l1.to_string(), a.l2.to_string()]),
        basis_tag: tag,
        normalization: Some(normalization),
        tool_version: TOOL_VERSION.into(),
        ..Default::default()
    };
    write_or_print(a.out.as_deref(), &MatrixDocument::from_matrix(&m, meta).to_json())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: VerifyArgs) -> anyhow::Result<ExitCode> {
    let cfg = ToleranceConfig { abs_tol: a.tol, rel_tol: a.rel_tol, sample_count: a.samples, rng_seed: a.seed };
    let opts = SuiteOptions { orders: a.orders, perturb: Perturbation { epsilon: a.perturb } };
    let reports: Vec<ResidualReport> = run_suite(a.suite, &cfg, &opts)?;
    let to_stdout = a.json.as_deref() == Some(Path::new("-"));
    let mut lines = Vec::new();
    for r in &reports {
        lines.push(r.summary_line());
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    lines.push(format!("{} checks, {} failed (seed {}, {} samples)", reports.len(), failed, a.seed, a.samples));
    for l in &lines {
        if to_stdout {
            eprintln!("{l}");
        } else {
            say(l)?;
        }
    }
    if let Some(p) = &a.json {
        let json = serde_json::to_string_pretty(&reports)?;
        write_or_print(if to_stdout { None } else { Some(p) }, &json)?;
    }
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_inspect(a: InspectArgs) -> anyhow::Result<ExitCode> {
    let text = fs::read_to_string(&a.file).with_context(|| format!("reading {}", a.file.display()))?;
    let doc = MatrixDocument::from_json(&text)?;
    let m = doc.to_matrix()?;
    let [rows, cols] = doc.dims;
    let md = &doc.metadata;
    say(&format!("{} {rows}x{cols}, basis {}", md.name.as_deref().unwrap_or("matrix"), md.basis_tag))?;
    if let Some(s) = &md.spins {
        say(&format!("spins {}", s.join(", ")))?;
    }
    if let Some([x, y]) = md.q {
        say(&format!("q {}", Complex64::new(x, y)))?;
    }
    if let Some([x, y]) = md.u {
        say(&format!("u {}", Complex64::new(x, y)))?;
    }
    for i in 0..rows {
        let row: Vec<String> = (0..cols).map(|j| format!("{:>24}", format!("{:.6}", m[(i, j)]))).collect();
        say(&row.join(" "))?;
    }
    if let Some(out) = &a.out {
        write_or_print(Some(out), &doc.to_json())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Rep(a) => cmd_rep(a),
        Command::Rmatrix(a) => cmd_rmatrix(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Inspect(a) => cmd_inspect(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(err) => ExitCode::from(exit_code(err)),
                None => ExitCode::from(2),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("0.3+0.4i").unwrap(), Complex64::new(0.3, 0.4));
        assert_eq!(parse_complex("-1.5-2i").unwrap(), Complex64::new(-1.5, -2.0));
        assert_eq!(parse_complex("2").unwrap(), Complex64::new(2.0, 0.0));
        assert_eq!(parse_complex("0.5i").unwrap(), Complex64::new(0.0, 0.5));
        assert_eq!(parse_complex(" 1 + 1e-3i ").unwrap(), Complex64::new(1.0, 1e-3));
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn spins() {
        assert_eq!(parse_spin("1/2").unwrap(), SpinLabel::HALF);
        assert_eq!(parse_spin("1.5").unwrap(), SpinLabel::from_twice(3));
        assert!(parse_spin("1/3").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::PoleAtSector(1)), 3);
        assert_eq!(exit_code(&Error::SingularBasis(1e13)), 3);
        assert_eq!(exit_code(&Error::EvenOrder(4)), 2);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
