use ckdv::numerics::{pole_datum, run as evolve_run, sample, EvolveConfig, Grid, DEFAULT_CEILING};
use ckdv::output::snapshot_name;

use crate::args::number;
use crate::run::Run;
use crate::target::{self, Target};
use crate::CliError;

#[derive(clap::Args)]
pub struct Args {
    /// Initial data, e.g. `soliton:eta=1/12,rho=2,C=0` or `pole:A=36,alpha=1`.
    #[arg(long, allow_hyphen_values = true)]
    initial: String,
    /// Coupling used for the evolution (default: that of the initial data).
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    lambda: Option<f64>,
    /// Box length L; the domain is [−L/2, L/2).
    #[arg(long = "L", value_parser = number, default_value = "100")]
    length: f64,
    /// Grid points N (a power of two).
    #[arg(long = "N", default_value_t = 1024)]
    points: usize,
    #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "1e-3")]
    dt: f64,
    #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "0")]
    t0: f64,
    #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "5")]
    t_end: f64,
    /// Time between snapshots.
    #[arg(long, value_parser = number, default_value = "1")]
    record: f64,
    #[arg(long, value_parser = number, default_value = "1e6")]
    ceiling: f64,
    /// Turn off 2/3-rule dealiasing.
    #[arg(long)]
    no_dealias: bool,
    /// Step even when dt exceeds the advective stability bound.
    #[arg(long)]
    force: bool,
}

pub fn run(a: Args, run: &mut Run) -> Result<i32, CliError> {
    run.param("initial", &a.initial);
    run.param("L", a.length);
    run.param("N", a.points);
    run.param("dt", a.dt);
    run.param("t0", a.t0);
    run.param("t_end", a.t_end);
    run.param("record", a.record);
    run.param("ceiling", a.ceiling);
    run.param("dealias", !a.no_dealias);
    run.param("force", a.force);
    let target = target::parse(&a.initial)?;
    let lambda = a.lambda.unwrap_or(target.lambda());
    run.param("lambda", lambda);
    let grid = Grid::new(a.length, a.points)?;
    let (initial, exact) = match &target {
        Target::Pole { amplitude, alpha } => {
            let mut s = pole_datum(&grid, *amplitude, *alpha);
            s.t = a.t0;
            (s, None)
        }
        t => {
            let pair = t.pair()?;
            let s = sample(&pair, &grid, a.t0)?;
            run.verdict("wrap", s.wrap);
            (s.state, (pair.lambda() == lambda).then_some(pair))
        }
    };
    let cfg = EvolveConfig {
        lambda,
        dt: a.dt,
        t_end: a.t_end,
        dealias: !a.no_dealias,
        record_every: a.record,
        ceiling: if a.ceiling > 0.0 { a.ceiling } else { DEFAULT_CEILING },
        enforce_cfl: !a.force,
    };
    let evo = evolve_run(&initial, &grid, &cfg)?;
    let xs = grid.xs();
    for s in &evo.snapshots {
        run.csv(snapshot_name(&run.run_id, s.t), &[("x", &xs), ("u", &s.u), ("v", &s.v)])?;
    }
    run.verdict("cfl_bound", evo.cfl_bound);
    run.verdict("steps", evo.steps);
    run.json("invariants", &evo.invariants)?;

    println!("{:<44} {:>12}", "invariant", "max drift");
    for (name, d) in evo.invariants.names.iter().zip(&evo.invariants.max_drift) {
        println!("{name:<44} {d:>12.3e}");
    }
    let drift: serde_json::Map<String, serde_json::Value> = evo
        .invariants
        .names
        .iter()
        .zip(&evo.invariants.max_drift)
        .map(|(n, d)| (n.clone(), (*d).into()))
        .collect();
    run.verdict("max_relative_drift", drift);

    if let Some(b) = evo.blow_up {
        println!(
            "blow-up: max |field| = {:e} crossed {:e} at t = {}",
            b.max_abs, b.ceiling, b.time
        );
        run.verdict("blow_up", b);
        return Ok(4);
    }
    if let Some(pair) = exact {
        let last = evo.last();
        let reference = sample(&pair, &grid, last.t)?.state;
        let err = last.distance(&reference);
        println!("max-norm error against the closed form at t = {}: {err:e}", last.t);
        run.verdict("final_max_error", err);
    }
    Ok(0)
}
