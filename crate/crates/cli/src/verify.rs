use clap::ValueEnum;
use serde::Serialize;

use ckdv::backlund::BacklundParams;
use ckdv::families::AnalyticPair;
use ckdv::lattice::{Lattice, Window};
use ckdv::verify::{
    bt_report, complex_reduction, decoupling_residual, galileo, potential_residual, rescale, system_residual,
    ResidualReport,
};

use crate::args::{number, window};
use crate::run::Run;
use crate::target::{self, Target};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Check {
    System,
    Potential,
    Bt,
    Complex,
    Decoupling,
    Galileo,
    Rescale,
}

#[derive(clap::Args)]
pub struct Args {
    /// Target to check (repeatable); default is one representative per family.
    #[arg(long = "target", allow_hyphen_values = true, long_help = format!("Target to check (repeatable). Syntax: {}", target::HELP))]
    targets: Vec<String>,
    /// Checks to run; by default every check that applies to the target.
    #[arg(long, value_enum, value_delimiter = ',')]
    checks: Vec<Check>,
    /// Residual tolerance (default 1e-9, or 1e-8 for superpositions).
    #[arg(long, value_parser = number)]
    tol: Option<f64>,
    #[arg(long, value_parser = window, allow_hyphen_values = true, default_value = "-40:40:201")]
    lattice_x: Window,
    #[arg(long, value_parser = number, value_delimiter = ',', allow_hyphen_values = true, default_value = "-16,-8,0,8,16")]
    lattice_t: Vec<f64>,
}

#[derive(Serialize)]
struct Row {
    target: String,
    check: Check,
    variant: String,
    tolerance: f64,
    pass: bool,
    report: ResidualReport,
}

const GALILEO_SPEEDS: [f64; 2] = [-1.0, 1.0];
const RESCALE_FACTORS: [f64; 2] = [0.5, 2.0];

fn applies(check: Check, pair: &AnalyticPair) -> bool {
    match check {
        Check::Complex => pair.lambda() == -1.0,
        Check::Decoupling => pair.lambda() == 1.0,
        Check::Bt => pair.family().bt_eta().is_some(),
        _ => true,
    }
}

fn reports(check: Check, pair: &AnalyticPair, lattice: &Lattice) -> Result<Vec<(String, ResidualReport)>, CliError> {
    let lam = pair.lambda();
    let plain = |rs: Vec<ResidualReport>| rs.into_iter().map(|r| (String::new(), r)).collect();
    Ok(match check {
        Check::System => plain(system_residual(pair, lattice, lam)?.to_vec()),
        Check::Potential => plain(potential_residual(pair, lattice, lam)?.to_vec()),
        Check::Bt => {
            let eta = pair.family().bt_eta().ok_or_else(|| {
                CliError::Usage(format!(
                    "{} has no transformation parameter relative to the zero germ",
                    pair.family().name()
                ))
            })?;
            let zero = AnalyticPair::zero(lam);
            plain(bt_report(pair, &zero, &BacklundParams::new(eta, lam), lattice)?.to_vec())
        }
        Check::Complex => plain(vec![complex_reduction(pair, lattice)?]),
        Check::Decoupling => plain(decoupling_residual(pair, lattice)?.to_vec()),
        Check::Galileo => {
            let mut out = Vec::new();
            for c in GALILEO_SPEEDS {
                for r in system_residual(&galileo(pair, c), lattice, lam)? {
                    out.push((format!("c={c}"), r));
                }
            }
            out
        }
        Check::Rescale => {
            let mut out = Vec::new();
            for b in RESCALE_FACTORS {
                for r in system_residual(&rescale(pair, b)?, lattice, lam)? {
                    out.push((format!("b={b}"), r));
                }
            }
            out
        }
    })
}

pub fn run(a: Args, run: &mut Run) -> Result<i32, CliError> {
    let lattice = Lattice {
        x: a.lattice_x,
        t: a.lattice_t.clone(),
    };
    run.param("targets", &a.targets);
    run.param("checks", &a.checks);
    run.param("tol", a.tol);
    run.param("lattice", &lattice);
    let targets = if a.targets.is_empty() {
        target::representatives()?
    } else {
        a.targets
            .iter()
            .map(|s| Ok((s.clone(), target::parse(s)?)))
            .collect::<Result<Vec<_>, CliError>>()?
    };
    let explicit = !a.checks.is_empty();
    let checks = if explicit {
        a.checks.clone()
    } else {
        Check::value_variants().to_vec()
    };

    let mut rows = Vec::new();
    for (name, target) in &targets {
        let pair = target.pair()?;
        let tol = a.tol.unwrap_or(match target {
            Target::Superposed(_) => 1e-8,
            _ => 1e-9,
        });
        for &check in &checks {
            if !explicit && !applies(check, &pair) {
                continue;
            }
            for (variant, report) in reports(check, &pair, &lattice)? {
                rows.push(Row {
                    target: name.clone(),
                    check,
                    variant,
                    tolerance: tol,
                    pass: report.passes(tol),
                    report,
                });
            }
        }
    }

    println!(
        "{:<34} {:<10} {:<6} {:<10} {:>11} {:>11} {:>8}  verdict",
        "target", "check", "", "residual", "max |r|", "rms", "tol"
    );
    for r in &rows {
        println!(
            "{:<34} {:<10} {:<6} {:<10} {:>11.3e} {:>11.3e} {:>8.0e}  {}",
            r.target,
            format!("{:?}", r.check).to_lowercase(),
            r.variant,
            r.report.tag.to_string(),
            r.report.max_abs,
            r.report.rms,
            r.tolerance,
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    run.json("report", &rows)?;
    let failed = rows.iter().filter(|r| !r.pass).count();
    run.verdict("checks", rows.len());
    run.verdict("failed", failed);
    Ok(if failed == 0 { 0 } else { 1 })
}
