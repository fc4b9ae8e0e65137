use clap::Subcommand;

use ckdv::lattice::Window;

use crate::args::{number, window};
use crate::profile::write_profiles;
use crate::run::Run;
use crate::{target, CliError};

#[derive(clap::Args)]
pub struct Args {
    #[command(subcommand)]
    family: Family,
}

#[derive(clap::Args, Clone)]
struct Profile {
    /// Comma-separated times.
    #[arg(long = "t", value_parser = number, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
    times: Vec<f64>,
    /// Sampling window `lo:hi:count`.
    #[arg(long = "x", value_parser = window, allow_hyphen_values = true, default_value = "-40:40:401")]
    x: Window,
    /// Also write the potentials `w`, `y`.
    #[arg(long)]
    potentials: bool,
}

#[derive(Subcommand)]
enum Family {
    /// Hyperbolic λ = −1 family (η > 0).
    Soliton {
        #[arg(long, value_parser = number, allow_hyphen_values = true)]
        eta: f64,
        #[arg(long, value_parser = number, allow_hyphen_values = true)]
        rho: f64,
        #[arg(long = "C", value_parser = number, allow_hyphen_values = true)]
        c: f64,
        #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "0")]
        phase0: f64,
        #[command(flatten)]
        profile: Profile,
    },
    /// Trigonometric λ = −1 family (η < 0).
    Periodic {
        #[arg(long = "etaAbs", value_parser = number, allow_hyphen_values = true)]
        eta_abs: f64,
        #[arg(long, value_parser = number, allow_hyphen_values = true)]
        rho: f64,
        #[arg(long = "C", value_parser = number, allow_hyphen_values = true)]
        c: f64,
        #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "0")]
        phase0: f64,
        #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "1")]
        epsilon: f64,
        #[command(flatten)]
        profile: Profile,
    },
    /// Stationary rational λ = −1 family (η = 0).
    Rational {
        #[arg(long = "C", value_parser = number, allow_hyphen_values = true)]
        c: f64,
        #[arg(long, value_parser = number, allow_hyphen_values = true)]
        rho: f64,
        #[arg(long = "H", value_parser = number, allow_hyphen_values = true, default_value = "0")]
        h: f64,
        #[command(flatten)]
        profile: Profile,
    },
    /// λ = +1 pair from two scalar KdV solitons (k = 0 for the zero factor).
    Decoupled {
        #[arg(long, value_parser = number, allow_hyphen_values = true)]
        k1: f64,
        #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "0")]
        phase1: f64,
        #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "0")]
        k2: f64,
        #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "0")]
        phase2: f64,
        #[command(flatten)]
        profile: Profile,
    },
}

pub fn run(a: Args, run: &mut Run) -> Result<i32, CliError> {
    let (pair, profile) = match a.family {
        Family::Soliton {
            eta,
            rho,
            c,
            phase0,
            profile,
        } => {
            run.param("family", "soliton");
            run.param("eta", eta);
            run.param("rho", rho);
            run.param("C", c);
            run.param("phase0", phase0);
            (target::soliton(eta, rho, c, phase0), profile)
        }
        Family::Periodic {
            eta_abs,
            rho,
            c,
            phase0,
            epsilon,
            profile,
        } => {
            run.param("family", "periodic");
            run.param("etaAbs", eta_abs);
            run.param("rho", rho);
            run.param("C", c);
            run.param("phase0", phase0);
            run.param("epsilon", epsilon);
            (target::periodic(eta_abs, rho, c, phase0, epsilon), profile)
        }
        Family::Rational { c, rho, h, profile } => {
            run.param("family", "rational");
            run.param("C", c);
            run.param("rho", rho);
            run.param("H", h);
            (target::rational(c, rho, h), profile)
        }
        Family::Decoupled {
            k1,
            phase1,
            k2,
            phase2,
            profile,
        } => {
            run.param("family", "decoupled");
            run.param("k1", k1);
            run.param("phase1", phase1);
            run.param("k2", k2);
            run.param("phase2", phase2);
            (target::decoupled(k1, phase1, k2, phase2), profile)
        }
    };
    run.param("t", &profile.times);
    run.param("x", profile.x);
    run.param("potentials", profile.potentials);
    let pair = pair?;
    run.param("lambda", pair.lambda());
    let files = write_profiles(run, &pair, &profile.x, &profile.times, profile.potentials)?;
    run.verdict("profiles", files.len());
    Ok(0)
}
