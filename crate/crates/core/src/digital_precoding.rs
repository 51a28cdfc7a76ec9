//! Multi-user digital stage: effective channel, baseband filters, and the
//! full per-trial pipeline.

use std::fmt;
use std::str::FromStr;

use crate::analog_opt::{ascend_su, ascend_su_power_adapt, AscentConfig, BeamformerState, PowerAdaptConfig};
use crate::channel::ChannelSet;
use crate::error::{Error, Result};
use crate::linalg::{dot_slices, ComplexMatrix, C64};
use crate::metrics::{self, energy_efficiency, EnergyModel, PowerConfig};

/// `U × U` matrix whose row `u` is `w_u^H H_u F_RF`.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveChannel(ComplexMatrix);

impl EffectiveChannel {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        Ok(Self(matrix))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn users(&self) -> usize {
        self.0.rows()
    }
}

pub fn effective_channel(channels: &ChannelSet, state: &BeamformerState) -> Result<EffectiveChannel> {
    channels.validate()?;
    state.check_against(channels)?;
    let users = channels.users();
    let mut h = ComplexMatrix::zeros(users, users);
    for u in 0..users {
        let r = channels.bs_to_user[u].herm_mul_vec(&state.w_user[u])?;
        for (n, f) in state.f_rf.iter().enumerate() {
            h[(u, n)] = dot_slices(r.as_slice(), f.as_slice());
        }
    }
    Ok(EffectiveChannel(h))
}

/// Zero forcing, `H^H (H H^H)^{-1}`.
pub fn precode_zf(h: &EffectiveChannel) -> Result<ComplexMatrix> {
    let hh = h.0.hermitian();
    let gram = h.0.matmul(&hh)?;
    let inv = gram.inverse().map_err(|e| match e {
        Error::Singular { .. } => Error::SingularEffectiveChannel,
        other => other,
    })?;
    hh.matmul(&inv)
}

/// Regularized zero forcing, `H^H (H H^H + (U/SNR) I)^{-1}`.
pub fn precode_mmse(h: &EffectiveChannel, snr_linear: f64) -> Result<ComplexMatrix> {
    if !(snr_linear > 0.0) {
        return Err(Error::InvalidParameter {
            name: "snr_linear",
            reason: format!("must be positive, got {snr_linear}"),
        });
    }
    let users = h.users();
    let hh = h.0.hermitian();
    let reg = ComplexMatrix::identity(users).scale(C64::new(users as f64 / snr_linear, 0.0));
    let inv = h.0.matmul(&hh)?.add(&reg)?.inverse()?;
    hh.matmul(&inv)
}

/// Matched filter, `H^H`.
pub fn precode_mrt(h: &EffectiveChannel) -> ComplexMatrix {
    h.0.hermitian()
}

/// Scales every column of `f_bb` so that `‖F_RF f_BB^u‖ = 1`.
pub fn normalize_columns(f_bb: &ComplexMatrix, f_rf: &ComplexMatrix) -> Result<ComplexMatrix> {
    let x = f_rf.matmul(f_bb)?;
    let mut out = f_bb.clone();
    for n in 0..f_bb.cols() {
        let norm = x.column(n).two_norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::DegeneratePrecoder { column: n });
        }
        out.set_column(n, &f_bb.column(n).scale(C64::new(1.0 / norm, 0.0)))?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrecodingFilter {
    Zf,
    Mmse,
    Mrt,
}

impl PrecodingFilter {
    pub const ALL: [PrecodingFilter; 3] = [PrecodingFilter::Zf, PrecodingFilter::Mmse, PrecodingFilter::Mrt];

    pub fn as_str(self) -> &'static str {
        match self {
            PrecodingFilter::Zf => "zf",
            PrecodingFilter::Mmse => "mmse",
            PrecodingFilter::Mrt => "mrt",
        }
    }

    pub fn precode(self, h: &EffectiveChannel, snr_linear: f64) -> Result<ComplexMatrix> {
        match self {
            PrecodingFilter::Zf => precode_zf(h),
            PrecodingFilter::Mmse => precode_mmse(h, snr_linear),
            PrecodingFilter::Mrt => Ok(precode_mrt(h)),
        }
    }
}

impl fmt::Display for PrecodingFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PrecodingFilter {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "zf" => Ok(PrecodingFilter::Zf),
            "mmse" => Ok(PrecodingFilter::Mmse),
            "mrt" => Ok(PrecodingFilter::Mrt),
            other => Err(format!("unknown filter `{other}` (expected zf, mmse or mrt)")),
        }
    }
}

/// Settings for one run of the two-stage pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub ascent: AscentConfig,
    pub power_adapt: Option<PowerAdaptConfig>,
    pub filter: PrecodingFilter,
    pub energy: EnergyModel,
}

/// Outcome of the power-adaptation variant, aggregated over users.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptSummary {
    /// Cycles of the slowest user.
    pub cycles: usize,
    /// Transmit power the BS ends at: the largest any user needed.
    pub final_pb_db: f64,
    /// Every user met the target.
    pub reached_target: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    /// Multi-user secrecy rate per user after digital precoding.
    pub secrecy: Vec<f64>,
    /// Single-user secrecy rate per user right after the analog stage.
    pub su_secrecy: Vec<f64>,
    pub energy_efficiency: Vec<f64>,
    pub mean_secrecy: f64,
    pub mean_su_secrecy: f64,
    pub mean_energy_efficiency: f64,
    pub ascent_iterations: usize,
    pub adapt: Option<AdaptSummary>,
}

/// Analog ascent per user, then the shared digital stage.
///
/// With `power_adapt` set, each user runs the target-driven variant from
/// the same starting power and the digital stage uses the largest final
/// power among users.
pub fn run_mu_pipeline(
    channels: &ChannelSet,
    initial: &BeamformerState,
    power: &PowerConfig,
    cfg: &PipelineConfig,
) -> Result<TrialResult> {
    power.validate()?;
    channels.validate()?;
    initial.check_against(channels)?;
    let users = channels.users();

    let mut state = initial.clone();
    let mut iterations = 0;
    let mut su_secrecy = Vec::with_capacity(users);
    let mut final_power = *power;
    let mut adapt = None;

    match cfg.power_adapt {
        None => {
            for u in 0..users {
                let res = ascend_su(u, channels, &state, power, &cfg.ascent)?;
                iterations += res.iterations;
                su_secrecy.push(res.final_secrecy());
                state = res.state;
            }
        }
        Some(pcfg) => {
            let mut summary = AdaptSummary {
                cycles: 0,
                final_pb_db: f64::NEG_INFINITY,
                reached_target: true,
            };
            let mut p_b_max = f64::NEG_INFINITY;
            for u in 0..users {
                let res = ascend_su_power_adapt(u, channels, &state, power, &cfg.ascent, &pcfg)?;
                iterations += res.total_iterations;
                summary.cycles = summary.cycles.max(res.cycles);
                summary.reached_target &= res.reached_target;
                if res.p_b_linear > p_b_max {
                    p_b_max = res.p_b_linear;
                    final_power = res.power;
                }
                state = res.state;
            }
            summary.final_pb_db = final_power.p_b_db;
            adapt = Some(summary);
            for u in 0..users {
                su_secrecy.push(metrics::secrecy_su(u, channels, &state, &final_power)?);
            }
        }
    }

    let h = effective_channel(channels, &state)?;
    let f_bb = cfg.filter.precode(&h, final_power.snr_linear())?;
    let f_bb = normalize_columns(&f_bb, &state.f_rf_matrix())?;
    let columns = metrics::precoded_columns(&state, &f_bb)?;
    let p = final_power.linear();
    let secrecy: Vec<f64> = (0..users)
        .map(|u| metrics::secrecy_mu_from_columns(u, channels, &state, &columns, &p))
        .collect();
    let energy: Vec<f64> = secrecy
        .iter()
        .map(|&c| energy_efficiency(c, &final_power, &cfg.energy, channels.n_t(), users))
        .collect();

    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    Ok(TrialResult {
        mean_secrecy: mean(&secrecy),
        mean_su_secrecy: mean(&su_secrecy),
        mean_energy_efficiency: mean(&energy),
        secrecy,
        su_secrecy,
        energy_efficiency: energy,
        ascent_iterations: iterations,
        adapt,
    })
}
