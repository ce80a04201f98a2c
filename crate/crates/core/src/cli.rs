//! Command front end. [`run`] takes the argument list and two output
//! streams and returns the process exit code, so it can be driven
//! in-process by tests.
//!
//! Exit codes: 0 expected result, 1 internal or output error, 2 bad input,
//! 3 infeasible feasibility query, 4 a verification that should have passed
//! did not.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bbmodel::{bb_simulate, BBPreparation};
use crate::error::{Error, Result};
use crate::figure::bloch_figure_svg;
use crate::nogo::{
    gleason_named, meas_nogo, od_unsharp_contradiction, pointwise_feasibility, prep_nogo, transf_nogo,
    trivial_povm_forced_indicator, Certificate, Conclusion, ConstraintSystem, Verdict,
};
use crate::operational::{prep_equivalent, pvm, six_state_theory, trivial_povm, MixtureKind, OperationalTheory};
use crate::qmath::Povm;
use crate::rational::{self, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_DEVIATION: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "contextuality",
    version,
    about = "Contextuality no-go certificates for a qubit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Numerical tolerance for premise and equivalence checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Sample count for simulations.
    #[arg(long, global = true, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the document here; the summary then goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum NogoTarget {
    Prep,
    Meas,
    Transf,
    Gleason,
    OdUnsharp,
}

#[derive(Subcommand, Debug, Clone, PartialEq)]
pub enum Command {
    /// Certify one of the no-go arguments on the canonical qubit instance.
    Nogo {
        #[arg(value_enum)]
        target: NogoTarget,
        /// First state for `gleason` (one of a, A, b, B, c, C).
        #[arg(long, default_value = "a")]
        psi: String,
        /// Second state for `gleason`.
        #[arg(long, default_value = "b")]
        psi_prime: String,
    },
    /// Decide a constraint system or an operational theory given as JSON.
    Feasibility { input: PathBuf },
    /// Sample the ray-valued model and compare with the Born rule.
    SimulateBb {
        /// Mixture such as `0.5*a+0.5*A`.
        #[arg(long)]
        prep: String,
        /// One of a, b, c, trivial, mixed.
        #[arg(long)]
        povm: String,
    },
    /// Draw the six states and their decompositions as SVG.
    FigureBloch,
}

/// Validated settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub tol: f64,
    pub samples: usize,
    pub seed: u64,
    pub format: Format,
}

impl RunConfig {
    fn from_cli(cli: Cli) -> Result<Self> {
        if !(cli.tol > 0.0) {
            return Err(Error::Parse(format!("--tol must be positive, got {}", cli.tol)));
        }
        if cli.samples == 0 {
            return Err(Error::Parse("--samples must be at least 1".into()));
        }
        let input = match &cli.command {
            Command::Feasibility { input } => Some(input.clone()),
            _ => None,
        };
        Ok(RunConfig {
            command: cli.command,
            input,
            out: cli.out,
            tol: cli.tol,
            samples: cli.samples,
            seed: cli.seed,
            format: cli.format,
        })
    }
}

/// Result of a command before it is written out.
struct Outcome {
    document: String,
    summary: String,
    code: i32,
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let config = match RunConfig::from_cli(cli) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let outcome = match execute(&config) {
        Ok(o) => o,
        Err((code, msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return code;
        }
    };
    match &config.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.document) {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                return EXIT_INTERNAL;
            }
            let _ = writeln!(stdout, "{}", outcome.summary);
        }
        None => {
            let _ = stdout.write_all(outcome.document.as_bytes());
            let _ = writeln!(stderr, "{}", outcome.summary);
        }
    }
    outcome.code
}

type CmdResult = std::result::Result<Outcome, (i32, String)>;

fn internal(e: Error) -> (i32, String) {
    (EXIT_INTERNAL, e.to_string())
}

fn execute(config: &RunConfig) -> CmdResult {
    match &config.command {
        Command::Nogo { target, psi, psi_prime } => cmd_nogo(*target, psi, psi_prime, config),
        Command::Feasibility { input } => cmd_feasibility(input, config),
        Command::SimulateBb { prep, povm } => cmd_simulate_bb(prep, povm, config),
        Command::FigureBloch => {
            let svg = bloch_figure_svg().map_err(internal)?;
            Ok(Outcome {
                document: svg,
                summary: "figure-bloch: 6 states, 3 segments, 2 triangles, center I/2".into(),
                code: EXIT_OK,
            })
        }
    }
}

fn certificate_outcome(name: &str, cert: &Certificate, expected: Verdict, config: &RunConfig) -> CmdResult {
    let document = match config.format {
        Format::Json => json(cert).map_err(internal)?,
        Format::Text => certificate_text(cert),
    };
    let code = if cert.verdict == expected {
        EXIT_OK
    } else {
        EXIT_DEVIATION
    };
    Ok(Outcome {
        document,
        summary: format!("{name}: {}", cert.summary()),
        code,
    })
}

fn nogo_error(e: Error) -> (i32, String) {
    match e {
        Error::PremiseFailed { .. } => (EXIT_DEVIATION, e.to_string()),
        other => internal(other),
    }
}

fn cmd_nogo(target: NogoTarget, psi: &str, psi_prime: &str, config: &RunConfig) -> CmdResult {
    match target {
        NogoTarget::Prep => {
            let cert = prep_nogo().map_err(nogo_error)?;
            certificate_outcome("nogo prep", &cert, Verdict::Infeasible, config)
        }
        NogoTarget::Transf => {
            let cert = transf_nogo().map_err(nogo_error)?;
            certificate_outcome("nogo transf", &cert, Verdict::Infeasible, config)
        }
        NogoTarget::Meas => {
            let cert = meas_nogo().map_err(nogo_error)?;
            let forced = trivial_povm_forced_indicator().map_err(nogo_error)?;
            let mut out = certificate_outcome("nogo meas", &cert, Verdict::Infeasible, config)?;
            if !forced.agree {
                out.code = EXIT_DEVIATION;
            }
            Ok(out)
        }
        NogoTarget::Gleason => {
            let report = gleason_named(psi, psi_prime, config.tol).map_err(|e| match e {
                Error::UnknownLabel(_) | Error::NoContradiction(_) => (EXIT_INPUT, e.to_string()),
                other => internal(other),
            })?;
            let document = match config.format {
                Format::Json => json(&report).map_err(internal)?,
                Format::Text => format!(
                    "χ_P′ = {}\ncontradiction: {}\n",
                    report.chi_p_prime, report.contradiction
                ),
            };
            Ok(Outcome {
                document,
                summary: format!(
                    "nogo gleason: χ_P′ = {} for ({psi}, {psi_prime}), contradiction {}",
                    report.chi_p_prime, report.contradiction
                ),
                code: if report.contradiction { EXIT_OK } else { EXIT_DEVIATION },
            })
        }
        NogoTarget::OdUnsharp => {
            let report = od_unsharp_contradiction().map_err(nogo_error)?;
            let document = match config.format {
                Format::Json => json(&report).map_err(internal)?,
                Format::Text => format!(
                    "forced indicator: {:?}\noutcome deterministic: {}\n{}\n",
                    report
                        .forced_indicator
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>(),
                    report.outcome_deterministic,
                    report.conclusion
                ),
            };
            Ok(Outcome {
                document,
                summary: format!("nogo od-unsharp: {}", report.conclusion),
                code: if report.contradiction { EXIT_OK } else { EXIT_DEVIATION },
            })
        }
    }
}

/// Human-readable rendering of a certificate.
pub fn certificate_text(cert: &Certificate) -> String {
    let mut s = format!("verdict: {:?}\n", cert.verdict);
    if let Some(sys) = &cert.system {
        s.push_str(&format!("system:\n{sys}"));
    }
    if !cert.premise_checks.is_empty() {
        s.push_str("premise checks:\n");
        for c in &cert.premise_checks {
            s.push_str(&format!("  {:<50} {:.3e}\n", c.name, c.max_deviation));
        }
    }
    s.push_str("cases:\n");
    for row in &cert.cases {
        let what = match &row.conclusion {
            Conclusion::AllZero => "all-zero".to_string(),
            Conclusion::Rays { rays } => format!("{} ray(s)", rays.len()),
            Conclusion::Mixed { values } => {
                let v: Vec<String> = values.iter().map(|c| rational::pretty(&c.0)).collect();
                format!("({})", v.join(", "))
            }
        };
        s.push_str(&format!("  [{}] → {what}\n", row.pattern.join(", ")));
        for line in &row.derivation {
            s.push_str(&format!("      {line}\n"));
        }
    }
    if let Some(w) = &cert.witness {
        s.push_str(&format!("witness on {} ontic points:\n", w.space().size()));
        for (label, mu) in &w.preparations {
            s.push_str(&format!("  {label}: {:?}\n", mu.weights()));
        }
    }
    for n in &cert.notes {
        s.push_str(&format!("note: {n}\n"));
    }
    s
}

fn parse_error(e: serde_json::Error) -> (i32, String) {
    (
        EXIT_INPUT,
        format!("invalid instance at line {} column {}: {e}", e.line(), e.column()),
    )
}

/// Derives a constraint system from a theory: one variable per preparation
/// used in a declared preparation mixture, a disjoint pair for every
/// orthogonal pair of them, and one equality form per mixture. All mixture
/// targets must be the same preparation up to equivalence.
pub fn system_from_theory(theory: &OperationalTheory, tol: f64) -> Result<ConstraintSystem> {
    let mixtures: Vec<_> = theory.mixtures.iter().filter(|m| m.kind == MixtureKind::Prep).collect();
    let first = mixtures
        .first()
        .ok_or_else(|| Error::InvalidSystem("theory declares no preparation mixtures".into()))?;
    let target = theory.preparation(&first.target)?;
    for m in &mixtures[1..] {
        if !prep_equivalent(target, theory.preparation(&m.target)?, tol)? {
            return Err(Error::InvalidSystem(format!(
                "mixture targets `{}` and `{}` are not equivalent",
                first.target, m.target
            )));
        }
    }
    let mut vars: Vec<String> = Vec::new();
    for m in &mixtures {
        for c in &m.components {
            if !vars.contains(&c.label) {
                vars.push(c.label.clone());
            }
        }
    }
    let mut pairs = Vec::new();
    for i in 0..vars.len() {
        for j in i + 1..vars.len() {
            let (p, q) = (theory.preparation(&vars[i])?, theory.preparation(&vars[j])?);
            if (p.rho.matrix() * q.rho.matrix()).trace().norm() <= tol {
                pairs.push((vars[i].as_str(), vars[j].as_str()));
            }
        }
    }
    let groups: Vec<Vec<(&str, Rational)>> = mixtures
        .iter()
        .map(|m| {
            m.components
                .iter()
                .map(|c| (c.label.as_str(), c.weight.0.clone()))
                .collect()
        })
        .collect();
    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
    ConstraintSystem::new(&names, &pairs, &groups)
}

fn cmd_feasibility(input: &PathBuf, config: &RunConfig) -> CmdResult {
    let text =
        std::fs::read_to_string(input).map_err(|e| (EXIT_INPUT, format!("cannot read {}: {e}", input.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(parse_error)?;
    let sys = if value.get("variables").is_some() {
        serde_json::from_str::<ConstraintSystem>(&text).map_err(parse_error)?
    } else if value.get("preparations").is_some() {
        let theory: OperationalTheory = serde_json::from_str(&text).map_err(parse_error)?;
        system_from_theory(&theory, config.tol).map_err(|e| (EXIT_INPUT, e.to_string()))?
    } else {
        return Err((
            EXIT_INPUT,
            "instance must have a \"variables\" or a \"preparations\" field".into(),
        ));
    };
    let cert = pointwise_feasibility(&sys).map_err(|e| match e {
        Error::EnumerationBound(_) | Error::InvalidSystem(_) => (EXIT_INPUT, e.to_string()),
        other => internal(other),
    })?;
    let mut out = certificate_outcome("feasibility", &cert, Verdict::Feasible, config)?;
    out.code = match cert.verdict {
        Verdict::Feasible => EXIT_OK,
        Verdict::Infeasible => EXIT_INFEASIBLE,
    };
    Ok(out)
}

/// POVM names accepted by `simulate-bb`.
pub fn named_povm(name: &str) -> Result<Povm> {
    match name {
        "a" | "b" | "c" => Ok(pvm(name).expect("known PVM")),
        "trivial" => Ok(trivial_povm()),
        "mixed" => Ok(six_state_theory().measurement("M")?.povm.clone()),
        other => Err(Error::UnknownLabel(other.to_string())),
    }
}

fn cmd_simulate_bb(prep: &str, povm: &str, config: &RunConfig) -> CmdResult {
    let bad = |e: Error| (EXIT_INPUT, e.to_string());
    let p = BBPreparation::parse(prep).map_err(bad)?;
    let m = named_povm(povm).map_err(bad)?;
    let report = bb_simulate(&p, &m, config.samples, config.seed).map_err(internal)?;
    let document = match config.format {
        Format::Json => json(&report).map_err(internal)?,
        Format::Text => format!(
            "prep: {}\npovm: {povm}\nn: {}\nseed: {}\nfrequencies: {:?}\nborn: {:?}\nmax_abs_dev: {}\nwithin 4σ: {}\n",
            report.prep,
            report.n,
            report.seed,
            report.frequencies,
            report.born,
            report.max_abs_dev,
            report.within_bounds
        ),
    };
    Ok(Outcome {
        document,
        summary: format!(
            "simulate-bb: {} on {povm}, n={}, max |freq − born| = {:.3e} ({})",
            report.prep,
            report.n,
            report.max_abs_dev,
            if report.within_bounds {
                "within 4σ"
            } else {
                "outside 4σ"
            }
        ),
        code: if report.within_bounds { EXIT_OK } else { EXIT_DEVIATION },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("contextuality").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn nogo_targets_succeed() {
        for t in ["prep", "meas", "transf", "gleason", "od-unsharp"] {
            let (code, out, err) = run_args(&["nogo", t]);
            assert_eq!(code, 0, "{t}: {err}");
            assert!(out.starts_with('{'));
        }
    }

    #[test]
    fn config_validation() {
        assert_eq!(run_args(&["--tol", "0", "nogo", "prep"]).0, EXIT_INPUT);
        assert_eq!(run_args(&["--samples", "0", "figure-bloch"]).0, EXIT_INPUT);
        assert_eq!(run_args(&["nogo", "bogus"]).0, EXIT_INPUT);
        assert_eq!(run_args(&["nogo", "gleason", "--psi-prime", "A"]).0, EXIT_INPUT);
    }

    #[test]
    fn text_format() {
        let (code, out, _) = run_args(&["nogo", "prep", "--format", "text"]);
        assert_eq!(code, 0);
        assert!(out.contains("½c = ⅓c ⇒ c = 0"));
    }

    #[test]
    fn theory_to_system() {
        let sys = system_from_theory(&six_state_theory(), 1e-9).unwrap();
        let renamed = sys
            .renamed(
                &crate::operational::STATE_NAMES
                    .iter()
                    .map(|n| (format!("P_{n}"), n.to_string()))
                    .collect(),
            )
            .unwrap();
        assert!(renamed.same_constraints(&crate::nogo::build_prep_system()));
    }
}
