use ckdv::backlund::{eq50_holds, regularity_scan, superpose, SuperposedPair, Verdict, DEFAULT_FLOOR};
use ckdv::lattice::{Lattice, Window};
use ckdv::verify::{potential_residual, system_residual};

use crate::args::{number, window};
use crate::profile::write_profiles;
use crate::run::Run;
use crate::target::{self, Target};
use crate::CliError;

#[derive(clap::Args)]
pub struct Args {
    /// First branch, e.g. `soliton:eta=1/12,rho=2,C=1` (see `verify --help` for the syntax).
    #[arg(long, allow_hyphen_values = true)]
    branch1: String,
    #[arg(long, allow_hyphen_values = true)]
    branch2: String,
    /// Germ both branches descend from.
    #[arg(long, allow_hyphen_values = true, default_value = "zero")]
    germ: String,
    /// Transformation parameter of branch 1 (default: implied by its family).
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    eta1: Option<f64>,
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    eta2: Option<f64>,
    /// Comma-separated profile times.
    #[arg(long = "t", value_parser = number, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
    times: Vec<f64>,
    /// Profile window `lo:hi:count`.
    #[arg(long = "x", value_parser = window, allow_hyphen_values = true, default_value = "-60:60:1201")]
    x: Window,
    #[arg(long, value_parser = window, allow_hyphen_values = true, default_value = "-60:60:12001")]
    scan_x: Window,
    #[arg(long, value_parser = window, allow_hyphen_values = true, default_value = "-20:20:4001")]
    scan_t: Window,
    /// `|D|` at or below this is SINGULAR.
    #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "1e-12")]
    threshold: f64,
    /// Residual tolerance over the check lattice.
    #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "1e-8")]
    tol: f64,
    /// Residual check window `lo:hi:count`, evaluated at the profile times.
    #[arg(long, value_parser = window, allow_hyphen_values = true, default_value = "-40:40:201")]
    check_x: Window,
    #[arg(long)]
    potentials: bool,
}

fn pair_of(s: &str) -> Result<ckdv::families::AnalyticPair, CliError> {
    match target::parse(s)? {
        Target::Pair(p) => Ok(p),
        _ => Err(CliError::Usage(format!("{s:?} is not a closed-form branch"))),
    }
}

fn eta_of(given: Option<f64>, pair: &ckdv::families::AnalyticPair, which: &str) -> Result<f64, CliError> {
    given
        .or_else(|| pair.family().bt_eta())
        .ok_or_else(|| CliError::Usage(format!("{which}: no implied transformation parameter; pass --{which}")))
}

pub fn run(a: Args, run: &mut Run) -> Result<i32, CliError> {
    run.param("germ", &a.germ);
    run.param("branch1", &a.branch1);
    run.param("branch2", &a.branch2);
    run.param("t", &a.times);
    run.param("x", a.x);
    run.param("scan_x", a.scan_x);
    run.param("scan_t", a.scan_t);
    run.param("threshold", a.threshold);
    run.param("tol", a.tol);
    run.param("check_x", a.check_x);
    let germ = pair_of(&a.germ)?;
    let b1 = pair_of(&a.branch1)?;
    let b2 = pair_of(&a.branch2)?;
    let eta1 = eta_of(a.eta1, &b1, "eta1")?;
    let eta2 = eta_of(a.eta2, &b2, "eta2")?;
    run.param("eta1", eta1);
    run.param("eta2", eta2);
    let s = SuperposedPair::new(germ, b1, eta1, b2, eta2)?.with_floor(DEFAULT_FLOOR);
    run.param("lambda", s.lambda());

    let scan = regularity_scan(&s, a.scan_x, a.scan_t, a.threshold)?;
    println!(
        "regularity: min |D| = {:e} at (x, t) = ({}, {}); {}",
        scan.min_abs_d, scan.worst.0, scan.worst.1, scan.verdict
    );
    run.verdict("regularity", &scan);
    run.verdict("eq50_holds", eq50_holds(&s));
    if scan.verdict == Verdict::Singular {
        return Ok(3);
    }

    let pair = superpose(&s)?;
    write_profiles(run, &pair, &a.x, &a.times, a.potentials)?;
    let lattice = Lattice {
        x: a.check_x,
        t: a.times.clone(),
    };
    let mut reports = system_residual(&pair, &lattice, s.lambda())?.to_vec();
    reports.extend(potential_residual(&pair, &lattice, s.lambda())?);
    let mut pass = true;
    for r in &reports {
        let ok = r.passes(a.tol);
        pass &= ok;
        println!(
            "{:<4} max {:.3e}  rms {:.3e}  {}",
            r.tag.to_string(),
            r.max_abs,
            r.rms,
            if ok { "PASS" } else { "FAIL" }
        );
    }
    run.json("residuals", &reports)?;
    run.verdict("residuals_pass", pass);
    Ok(if pass { 0 } else { 1 })
}
