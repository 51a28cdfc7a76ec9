//! Flat `key=value` scenario files.
//!
//! One setting per line, `#` starts a comment and keys use dotted sections
//! (`channel.n_clusters=4`). The last `band` entry picks the defaults, then
//! every other entry is applied in order, so later lines win.

use std::fmt::Write as _;

use crate::analog_opt::PowerAdaptConfig;
use crate::channel::{ArrayLayout, Normalization};
use crate::error::{Error, Result};
use crate::metrics::{Connectivity, RfChains};
use crate::montecarlo::{Band, ScenarioConfig, Sweep};

pub type Pairs = Vec<(String, String)>;

/// Splits text into `(key, value)` pairs without interpreting them.
pub fn parse_pairs(text: &str) -> Result<Pairs> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::config(
                format!("line {}", i + 1),
                format!("expected key=value, got `{line}`"),
            ));
        };
        pairs.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

/// Band defaults overridden by `pairs`, then validated.
pub fn resolve(pairs: &[(String, String)]) -> Result<ScenarioConfig> {
    let band = match pairs.iter().rev().find(|(k, _)| k == "band") {
        Some((k, v)) => v.parse::<Band>().map_err(|e| Error::config(k, e))?,
        None => Band::MmWave,
    };
    let mut cfg = ScenarioConfig::for_band(band);
    let mut adapt_on = false;
    let mut adapt = PowerAdaptConfig::default();
    for (key, value) in pairs {
        apply(&mut cfg, &mut adapt_on, &mut adapt, key, value)?;
    }
    cfg.power_adapt = adapt_on.then_some(adapt);
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    resolve(&parse_pairs(text)?)
}

fn apply(
    cfg: &mut ScenarioConfig,
    adapt_on: &mut bool,
    adapt: &mut PowerAdaptConfig,
    key: &str,
    v: &str,
) -> Result<()> {
    match key {
        "band" => {}
        "n_t" => cfg.n_t = uint(key, v)?,
        "n_r" => cfg.n_r = uint(key, v)?,
        "n_e" => cfg.n_e = uint(key, v)?,
        "n_j" => cfg.n_j = uint(key, v)?,
        "users" => cfg.users = uint(key, v)?,
        "eves" => cfg.eves = uint(key, v)?,
        "trials" => cfg.trials = uint(key, v)?,
        "seed" => cfg.master_seed = v.parse().map_err(|_| expected(key, "an unsigned 64-bit integer", v))?,
        "filter" => cfg.filter = v.parse().map_err(|e: String| Error::config(key, e))?,
        "sweep" => cfg.sweep = parse_sweep(key, v)?,
        "channel.n_clusters" => cfg.channel.n_clusters = uint(key, v)?,
        "channel.n_rays" => cfg.channel.n_rays = uint(key, v)?,
        "channel.angular_spread_deg" => cfg.channel.angular_spread_deg = float(key, v)?,
        "channel.spacing" => cfg.channel.spacing = float(key, v)?,
        "channel.layout" => {
            cfg.channel.layout = match v {
                "linear" => ArrayLayout::Linear,
                "planar" => ArrayLayout::Planar,
                _ => return Err(expected(key, "linear or planar", v)),
            }
        }
        "channel.normalization" => {
            cfg.channel.normalization = v.parse::<Normalization>().map_err(|e| Error::config(key, e))?
        }
        "power.p_b_db" => cfg.power.p_b_db = float(key, v)?,
        "power.p_j_db" => cfg.power.p_j_db = float(key, v)?,
        "power.noise_var_user" => cfg.power.noise_var_user = float(key, v)?,
        "power.noise_var_eve" => cfg.power.noise_var_eve = float(key, v)?,
        "energy.p_rf_mw" => cfg.energy.p_rf_mw = float(key, v)?,
        "energy.p_pa_mw" => cfg.energy.p_pa_mw = float(key, v)?,
        "energy.p_ps_mw" => cfg.energy.p_ps_mw = float(key, v)?,
        "energy.n_rf" => {
            cfg.energy.n_rf = match v {
                "per-user" => RfChains::PerUser,
                _ => RfChains::Fixed(uint(key, v).map_err(|_| expected(key, "per-user or a count", v))?),
            }
        }
        "energy.connectivity" => {
            cfg.energy.connectivity = match v {
                "full" => Connectivity::Full,
                "partial" => Connectivity::Partial,
                _ => return Err(expected(key, "full or partial", v)),
            }
        }
        "ascent.step_size_init" => cfg.ascent.step_size_init = float(key, v)?,
        "ascent.convergence_eps" => cfg.ascent.convergence_eps = float(key, v)?,
        "ascent.max_iters" => cfg.ascent.max_iters = uint(key, v)?,
        "ascent.step_shrink" => cfg.ascent.step_shrink = float(key, v)?,
        "power_adapt.enabled" => {
            *adapt_on = match v {
                "true" => true,
                "false" => false,
                _ => return Err(expected(key, "true or false", v)),
            }
        }
        "power_adapt.target_secrecy" => adapt.target_secrecy = float(key, v)?,
        "power_adapt.power_cap_db" => adapt.power_cap_db = float(key, v)?,
        "power_adapt.adapt_rate" => adapt.adapt_rate = float(key, v)?,
        _ => return Err(Error::config(key, "unknown key")),
    }
    Ok(())
}

fn expected(key: &str, what: &str, got: &str) -> Error {
    Error::config(key, format!("expected {what}, got `{got}`"))
}

fn uint(key: &str, v: &str) -> Result<usize> {
    v.parse().map_err(|_| expected(key, "a non-negative integer", v))
}

fn float(key: &str, v: &str) -> Result<f64> {
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(expected(key, "a finite number", v)),
    }
}

/// `none`, `snr:START:STOP:STEP` or `users:START:STOP`.
pub fn parse_sweep(key: &str, v: &str) -> Result<Sweep> {
    let parts: Vec<&str> = v.split(':').collect();
    match parts.as_slice() {
        ["none"] => Ok(Sweep::None),
        ["snr", a, b, s] => Ok(Sweep::Snr {
            start: float(key, a)?,
            stop: float(key, b)?,
            step: float(key, s)?,
        }),
        ["users", a, b] => Ok(Sweep::Users {
            start: uint(key, a)?,
            stop: uint(key, b)?,
        }),
        _ => Err(expected(key, "none, snr:START:STOP:STEP or users:START:STOP", v)),
    }
}

pub fn format_sweep(sweep: &Sweep) -> String {
    match *sweep {
        Sweep::None => "none".into(),
        Sweep::Snr { start, stop, step } => format!("snr:{start:?}:{stop:?}:{step:?}"),
        Sweep::Users { start, stop } => format!("users:{start}:{stop}"),
    }
}

/// Every setting of `cfg`, one per line. Floats use shortest round-trip form.
pub fn emit_config(cfg: &ScenarioConfig) -> String {
    let adapt = cfg.power_adapt.unwrap_or_default();
    let layout = match cfg.channel.layout {
        ArrayLayout::Linear => "linear",
        ArrayLayout::Planar => "planar",
    };
    let n_rf = match cfg.energy.n_rf {
        RfChains::PerUser => "per-user".to_string(),
        RfChains::Fixed(n) => n.to_string(),
    };
    let connectivity = match cfg.energy.connectivity {
        Connectivity::Full => "full",
        Connectivity::Partial => "partial",
    };
    let lines: Vec<(&str, String)> = vec![
        ("band", cfg.band.as_str().into()),
        ("n_t", cfg.n_t.to_string()),
        ("n_r", cfg.n_r.to_string()),
        ("n_e", cfg.n_e.to_string()),
        ("n_j", cfg.n_j.to_string()),
        ("users", cfg.users.to_string()),
        ("eves", cfg.eves.to_string()),
        ("trials", cfg.trials.to_string()),
        ("seed", cfg.master_seed.to_string()),
        ("filter", cfg.filter.as_str().into()),
        ("sweep", format_sweep(&cfg.sweep)),
        ("channel.n_clusters", cfg.channel.n_clusters.to_string()),
        ("channel.n_rays", cfg.channel.n_rays.to_string()),
        ("channel.angular_spread_deg", format!("{:?}", cfg.channel.angular_spread_deg)),
        ("channel.layout", layout.into()),
        ("channel.spacing", format!("{:?}", cfg.channel.spacing)),
        ("channel.normalization", cfg.channel.normalization.as_str().into()),
        ("power.p_b_db", format!("{:?}", cfg.power.p_b_db)),
        ("power.p_j_db", format!("{:?}", cfg.power.p_j_db)),
        ("power.noise_var_user", format!("{:?}", cfg.power.noise_var_user)),
        ("power.noise_var_eve", format!("{:?}", cfg.power.noise_var_eve)),
        ("energy.p_rf_mw", format!("{:?}", cfg.energy.p_rf_mw)),
        ("energy.p_pa_mw", format!("{:?}", cfg.energy.p_pa_mw)),
        ("energy.p_ps_mw", format!("{:?}", cfg.energy.p_ps_mw)),
        ("energy.n_rf", n_rf),
        ("energy.connectivity", connectivity.into()),
        ("ascent.step_size_init", format!("{:?}", cfg.ascent.step_size_init)),
        ("ascent.convergence_eps", format!("{:?}", cfg.ascent.convergence_eps)),
        ("ascent.max_iters", cfg.ascent.max_iters.to_string()),
        ("ascent.step_shrink", format!("{:?}", cfg.ascent.step_shrink)),
        ("power_adapt.enabled", cfg.power_adapt.is_some().to_string()),
        ("power_adapt.target_secrecy", format!("{:?}", adapt.target_secrecy)),
        ("power_adapt.power_cap_db", format!("{:?}", adapt.power_cap_db)),
        ("power_adapt.adapt_rate", format!("{:?}", adapt.adapt_rate)),
    ];
    let mut out = String::new();
    for (k, v) in lines {
        let _ = writeln!(out, "{k}={v}");
    }
    out
}
