//! Target descriptions of the form `family:key=value,key=value`.

use std::collections::BTreeMap;

use ckdv::backlund::{superpose, SuperposedPair};
use ckdv::families::{
    make_decoupled, make_periodic, make_rational, make_soliton, AnalyticPair, KdvFactor, PeriodicParams,
    RationalParams, SolitonParams,
};

use crate::args::number;
use crate::CliError;

pub const HELP: &str = "zero[:lambda=L] | soliton:eta=,rho=,C=[,phase0=] | \
periodic:etaAbs=,rho=,C=[,phase0=,epsilon=±1] | rational:C=,rho=[,H=] | \
decoupled:k1=[,phase1=,k2=,phase2=] | pole:A=,alpha= | two-soliton | background";

/// A parsed target.
#[derive(Clone, Debug)]
pub enum Target {
    Pair(AnalyticPair),
    Superposed(SuperposedPair),
    /// `U = −A/(x + iα)²` at `λ = −1`; initial data only.
    Pole {
        amplitude: f64,
        alpha: f64,
    },
}

impl Target {
    /// The evaluable pair, superposing if needed.
    pub fn pair(&self) -> Result<AnalyticPair, CliError> {
        match self {
            Target::Pair(p) => Ok(p.clone()),
            Target::Superposed(s) => Ok(superpose(s)?),
            Target::Pole { .. } => Err(CliError::Usage("pole data has no closed-form evolution".into())),
        }
    }

    pub fn lambda(&self) -> f64 {
        match self {
            Target::Pair(p) => p.lambda(),
            Target::Superposed(s) => s.lambda(),
            Target::Pole { .. } => -1.0,
        }
    }
}

struct Keys<'a> {
    family: &'a str,
    map: BTreeMap<&'a str, &'a str>,
}

impl<'a> Keys<'a> {
    fn parse(family: &'a str, body: &'a str) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for item in body.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("{family}: expected key=value, got {item:?}")))?;
            if map.insert(k.trim(), v.trim()).is_some() {
                return Err(CliError::Usage(format!("{family}: key {k:?} given twice")));
            }
        }
        Ok(Keys { family, map })
    }

    fn take(&mut self, key: &str) -> Result<Option<f64>, CliError> {
        self.map
            .remove(key)
            .map(|v| number(v).map_err(|e| CliError::Usage(format!("{}: {key}: {e}", self.family))))
            .transpose()
    }

    fn need(&mut self, key: &str) -> Result<f64, CliError> {
        self.take(key)?
            .ok_or_else(|| CliError::Usage(format!("{}: missing {key}=", self.family)))
    }

    fn or(&mut self, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.take(key)?.unwrap_or(default))
    }

    fn finish(self) -> Result<(), CliError> {
        match self.map.keys().next() {
            Some(k) => Err(CliError::Usage(format!("{}: unknown key {k:?}", self.family))),
            None => Ok(()),
        }
    }
}

pub fn soliton(eta: f64, rho: f64, c: f64, phase0: f64) -> Result<AnalyticPair, CliError> {
    Ok(make_soliton(SolitonParams::new(eta, rho, c, phase0)?))
}

pub fn periodic(eta_abs: f64, rho: f64, c: f64, phase0: f64, epsilon: f64) -> Result<AnalyticPair, CliError> {
    let sign = if epsilon == 1.0 {
        1
    } else if epsilon == -1.0 {
        -1
    } else {
        0
    };
    Ok(make_periodic(PeriodicParams::new(eta_abs, rho, c, phase0, sign)?))
}

pub fn rational(c: f64, rho: f64, h: f64) -> Result<AnalyticPair, CliError> {
    Ok(make_rational(RationalParams::new(c, rho, h)?))
}

fn factor(k: f64, phase: f64) -> Result<KdvFactor, CliError> {
    if k == 0.0 {
        Ok(KdvFactor::Zero)
    } else {
        Ok(KdvFactor::soliton(k, phase)?)
    }
}

/// `k = 0` selects the zero factor.
pub fn decoupled(k1: f64, phase1: f64, k2: f64, phase2: f64) -> Result<AnalyticPair, CliError> {
    Ok(make_decoupled(factor(k1, phase1)?, factor(k2, phase2)?))
}

/// Two solitons over the zero germ with a common ratio `C/(ηρ) = 6`.
pub fn two_soliton() -> Result<SuperposedPair, CliError> {
    Ok(SuperposedPair::over_zero(
        soliton(1.0 / 12.0, 2.0, 1.0, 0.0)?,
        soliton(1.0 / 6.0, 2.0, 2.0, 0.0)?,
    )?)
}

/// A soliton crossing the stationary rational lump.
pub fn background() -> Result<SuperposedPair, CliError> {
    Ok(SuperposedPair::over_zero(
        rational(-1.0, 12.0, 0.0)?,
        soliton(1.0 / 12.0, 2.0, 1.0, 0.0)?,
    )?)
}

pub fn parse(text: &str) -> Result<Target, CliError> {
    let (family, body) = text.split_once(':').unwrap_or((text, ""));
    let family = family.trim();
    let mut k = Keys::parse(family, body)?;
    let target = match family {
        "zero" => Target::Pair(AnalyticPair::zero(k.or("lambda", -1.0)?)),
        "soliton" => Target::Pair(soliton(
            k.need("eta")?,
            k.need("rho")?,
            k.need("C")?,
            k.or("phase0", 0.0)?,
        )?),
        "periodic" => Target::Pair(periodic(
            k.need("etaAbs")?,
            k.need("rho")?,
            k.need("C")?,
            k.or("phase0", 0.0)?,
            k.or("epsilon", 1.0)?,
        )?),
        "rational" => Target::Pair(rational(k.need("C")?, k.need("rho")?, k.or("H", 0.0)?)?),
        "decoupled" => Target::Pair(decoupled(
            k.need("k1")?,
            k.or("phase1", 0.0)?,
            k.or("k2", 0.0)?,
            k.or("phase2", 0.0)?,
        )?),
        "pole" => Target::Pole {
            amplitude: k.need("A")?,
            alpha: k.need("alpha")?,
        },
        "two-soliton" => Target::Superposed(two_soliton()?),
        "background" => Target::Superposed(background()?),
        other => return Err(CliError::Usage(format!("unknown target {other:?}; expected {HELP}"))),
    };
    k.finish()?;
    Ok(target)
}

/// Stand-ins for every family.
pub fn representatives() -> Result<Vec<(String, Target)>, CliError> {
    [
        "soliton:eta=1/12,rho=2,C=1",
        "periodic:etaAbs=1/12,rho=1,C=1",
        "rational:C=-1,rho=12,H=0",
        "decoupled:k1=1/2,k2=1/3,phase2=1",
        "two-soliton",
    ]
    .iter()
    .map(|s| Ok((s.to_string(), parse(s)?)))
    .collect()
}
