use num_rational::BigRational;
use serde::Serialize;

use ckdv::diffpoly::{classical_match, gardner_invert, Component, JsonTerm, CLASSICAL_NAMES, MAX_ORDER};

use crate::args::rational;
use crate::run::Run;
use crate::CliError;

#[derive(clap::Args)]
pub struct Args {
    /// Highest order N of the ladder (at most 10).
    #[arg(long)]
    order: usize,
    /// `formal` keeps λ symbolic; a number (e.g. `-1`, `1/2`) substitutes it.
    #[arg(long, allow_hyphen_values = true, default_value = "formal")]
    lambda: String,
}

#[derive(Serialize)]
struct Match {
    density: &'static str,
    factor: String,
}

#[derive(Serialize)]
struct Entry {
    n: usize,
    component: Component,
    text: String,
    terms: Vec<JsonTerm>,
    conserved: bool,
    total_derivative: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    matches: Option<Match>,
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn run(a: Args, run: &mut Run) -> Result<i32, CliError> {
    run.param("order", a.order);
    run.param("lambda", &a.lambda);
    if a.order > MAX_ORDER {
        return Err(CliError::Usage(format!(
            "order {} exceeds the cap {MAX_ORDER}",
            a.order
        )));
    }
    let lambda = match a.lambda.as_str() {
        "formal" => None,
        s => Some(rational(s).map_err(CliError::Usage)?),
    };
    let series = gardner_invert(a.order);
    let resubstitution = series.resubstitution_holds();
    let mut entries = Vec::new();
    let mut text = String::new();
    for n in 0..=a.order {
        for which in [Component::R, Component::S] {
            let formal = series.get(n, which);
            let (p, conserved) = match &lambda {
                None => (formal.clone(), formal.is_conserved()),
                Some(l) => (formal.at_lambda(l), formal.is_conserved_at(l)),
            };
            let matches = classical_match(n, which).map(|(i, c)| Match {
                density: CLASSICAL_NAMES[i],
                factor: fmt_rational(&c),
            });
            let name = match which {
                Component::R => "r",
                Component::S => "s",
            };
            text.push_str(&format!("{name}_{n} = {p}\n"));
            text.push_str(&format!(
                "    {}",
                if conserved { "CONSERVED" } else { "NOT CONSERVED" }
            ));
            let exact = p.is_exact();
            if exact {
                text.push_str(", total x-derivative");
            }
            if let Some(m) = &matches {
                text.push_str(&format!(", ≡ {} × ({}) mod d/dx", m.factor, m.density));
            }
            text.push('\n');
            entries.push(Entry {
                n,
                component: which,
                text: p.to_string(),
                terms: p.json_terms(),
                conserved,
                total_derivative: exact,
                matches,
            });
        }
    }
    print!("{text}");
    run.text("densities", &text)?;
    run.json("densities", &entries)?;
    let all = entries.iter().all(|e| e.conserved);
    run.verdict("resubstitution", resubstitution);
    run.verdict("all_conserved", all);
    Ok(if all && resubstitution { 0 } else { 1 })
}
