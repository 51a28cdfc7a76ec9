//! Scenario definitions and seeded Monte Carlo campaigns.
//!
//! Trial `t` at axis point `a` always draws from
//! `child_stream(master_seed, a, t)`: channels first, then the initial
//! beamformers. Trials run on the ambient rayon pool and are merged by
//! index, so results are identical for any thread count.

use rayon::prelude::*;

use crate::analog_opt::{AscentConfig, BeamformerState, PowerAdaptConfig};
use crate::channel::{generate_channel_set, ArrayLayout, ChannelModel, Normalization, DEFAULT_SPACING};
use crate::digital_precoding::{run_mu_pipeline, PipelineConfig, PrecodingFilter, TrialResult};
use crate::error::{Error, Result};
use crate::metrics::{EnergyModel, PowerConfig};
use crate::rng::child_stream;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    Sub6,
    MmWave,
}

impl Band {
    pub fn as_str(self) -> &'static str {
        match self {
            Band::Sub6 => "sub6",
            Band::MmWave => "mmwave",
        }
    }
}

impl std::str::FromStr for Band {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "sub6" => Ok(Band::Sub6),
            "mmwave" => Ok(Band::MmWave),
            other => Err(format!("unknown band `{other}` (expected sub6 or mmwave)")),
        }
    }
}

/// What a campaign sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sweep {
    /// Single point at the configured settings.
    None,
    /// `P_b` in dB from `start` to `stop` inclusive.
    Snr { start: f64, stop: f64, step: f64 },
    /// Number of users from `start` to `stop` inclusive.
    Users { start: usize, stop: usize },
}

impl Sweep {
    pub fn label(&self) -> &'static str {
        match self {
            Sweep::None => "point",
            Sweep::Snr { .. } => "snr_db",
            Sweep::Users { .. } => "users",
        }
    }

    /// Axis values; an inverted range is empty.
    pub fn points(&self) -> Vec<f64> {
        match *self {
            Sweep::None => vec![0.0],
            Sweep::Snr { start, stop, step } => {
                if stop < start {
                    return Vec::new();
                }
                let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
                (0..n).map(|i| start + i as f64 * step).collect()
            }
            Sweep::Users { start, stop } => (start..=stop).map(|u| u as f64).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub band: Band,
    pub n_t: usize,
    pub n_r: usize,
    pub n_e: usize,
    pub n_j: usize,
    pub users: usize,
    pub eves: usize,
    pub channel: ChannelModel,
    pub power: PowerConfig,
    pub energy: EnergyModel,
    pub ascent: AscentConfig,
    pub power_adapt: Option<PowerAdaptConfig>,
    pub filter: PrecodingFilter,
    pub trials: usize,
    pub master_seed: u64,
    pub sweep: Sweep,
}

impl ScenarioConfig {
    /// Standard system parameters for a band, with 5 users, a 4-antenna
    /// jammer, `P_b = 5 dB` and `P_j = -10 dB`.
    pub fn for_band(band: Band) -> Self {
        let (n_t, n_rx, n_clusters, n_rays) = match band {
            Band::MmWave => (64, 4, 4, 15),
            Band::Sub6 => (16, 2, 10, 20),
        };
        Self {
            band,
            n_t,
            n_r: n_rx,
            n_e: n_rx,
            n_j: 4,
            users: 5,
            eves: 1,
            channel: ChannelModel {
                n_clusters,
                n_rays,
                angular_spread_deg: 10.0,
                layout: ArrayLayout::Linear,
                spacing: DEFAULT_SPACING,
                normalization: Normalization::UnitPower,
            },
            power: PowerConfig {
                p_b_db: 5.0,
                p_j_db: -10.0,
                noise_var_user: 1.0,
                noise_var_eve: 1.0,
            },
            energy: EnergyModel::default(),
            ascent: AscentConfig::default(),
            power_adapt: None,
            filter: PrecodingFilter::Mmse,
            trials: 1000,
            master_seed: 1,
            sweep: Sweep::None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, v: usize| {
            if v == 0 {
                Err(Error::InvalidParameter {
                    name,
                    reason: "must be at least 1".into(),
                })
            } else {
                Ok(())
            }
        };
        positive("n_t", self.n_t)?;
        positive("n_r", self.n_r)?;
        positive("n_e", self.n_e)?;
        positive("n_j", self.n_j)?;
        positive("users", self.users)?;
        positive("eves", self.eves)?;
        positive("trials", self.trials)?;
        self.channel.params(self.n_r, self.n_t).validate()?;
        self.channel.params(self.n_e, self.n_j).validate()?;
        self.power.validate()?;
        self.energy.validate()?;
        self.ascent.validate()?;
        if let Some(p) = &self.power_adapt {
            p.validate()?;
        }
        match self.sweep {
            Sweep::Snr { start, stop, step } => {
                if !(step > 0.0 && step.is_finite() && start.is_finite() && stop.is_finite()) {
                    return Err(Error::InvalidParameter {
                        name: "sweep",
                        reason: "snr range needs finite bounds and a positive step".into(),
                    });
                }
            }
            Sweep::Users { start, .. } => positive("sweep", start)?,
            Sweep::None => {}
        }
        Ok(())
    }

    /// Configuration of axis point `value`.
    pub fn at_point(&self, value: f64) -> ScenarioConfig {
        let mut cfg = self.clone();
        match self.sweep {
            Sweep::None => {}
            Sweep::Snr { .. } => cfg.power.p_b_db = value,
            Sweep::Users { .. } => cfg.users = value as usize,
        }
        cfg
    }

    pub fn pipeline(&self) -> PipelineConfig {
        PipelineConfig {
            ascent: self.ascent,
            power_adapt: self.power_adapt,
            filter: self.filter,
            energy: self.energy,
        }
    }
}

/// One trial, fully determined by `(cfg, axis_index, trial_index)`.
pub fn run_trial(cfg: &ScenarioConfig, axis_index: usize, trial_index: usize) -> Result<TrialResult> {
    let mut rng = child_stream(cfg.master_seed, axis_index as u64, trial_index as u64);
    let channels = generate_channel_set(cfg, &mut rng);
    let initial = BeamformerState::random(cfg.users, cfg.eves, cfg.n_t, cfg.n_r, cfg.n_e, cfg.n_j, &mut rng);
    run_mu_pipeline(&channels, &initial, &cfg.power, &cfg.pipeline())
}

/// Every trial of one axis point, in trial order.
pub fn run_point_trials(cfg: &ScenarioConfig, axis_index: usize) -> Vec<Result<TrialResult>> {
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, axis_index, t))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointSummary {
    pub axis_value: f64,
    pub mean_secrecy: f64,
    pub mean_su_secrecy: f64,
    pub mean_energy_efficiency: f64,
    /// Present for power-adaptation campaigns.
    pub mean_cycles: Option<f64>,
    pub mean_final_pb_db: Option<f64>,
    /// Fraction of trials in which every user met the secrecy target.
    pub target_hit_rate: Option<f64>,
    /// Successful trials.
    pub trials: usize,
    pub failures: usize,
}

/// Averages successful trials in index order.
pub fn summarize(axis_value: f64, results: &[Result<TrialResult>]) -> PointSummary {
    let ok: Vec<&TrialResult> = results.iter().filter_map(|r| r.as_ref().ok()).collect();
    let n = ok.len();
    let mean = |f: &dyn Fn(&TrialResult) -> f64| {
        if n == 0 {
            f64::NAN
        } else {
            ok.iter().map(|t| f(t)).sum::<f64>() / n as f64
        }
    };
    let adaptive = ok.first().is_some_and(|t| t.adapt.is_some());
    let adapt_mean = |f: &dyn Fn(&crate::digital_precoding::AdaptSummary) -> f64| {
        adaptive.then(|| mean(&|t: &TrialResult| f(t.adapt.as_ref().expect("adaptive campaign"))))
    };
    PointSummary {
        axis_value,
        mean_secrecy: mean(&|t| t.mean_secrecy),
        mean_su_secrecy: mean(&|t| t.mean_su_secrecy),
        mean_energy_efficiency: mean(&|t| t.mean_energy_efficiency),
        mean_cycles: adapt_mean(&|a| a.cycles as f64),
        mean_final_pb_db: adapt_mean(&|a| a.final_pb_db),
        target_hit_rate: adapt_mean(&|a| if a.reached_target { 1.0 } else { 0.0 }),
        trials: n,
        failures: results.len() - n,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignResult {
    pub axis_label: &'static str,
    pub points: Vec<PointSummary>,
    pub config: ScenarioConfig,
    pub seed: u64,
}

impl CampaignResult {
    pub fn mean_secrecy(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.mean_secrecy).collect()
    }

    pub fn mean_energy_efficiency(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.mean_energy_efficiency).collect()
    }
}

/// Runs every axis point; fails if more than 1% of a point's trials fail.
pub fn run_campaign(cfg: &ScenarioConfig) -> Result<CampaignResult> {
    cfg.validate()?;
    let mut points = Vec::new();
    for (axis_index, value) in cfg.sweep.points().into_iter().enumerate() {
        let point_cfg = cfg.at_point(value);
        point_cfg.validate()?;
        let results = run_point_trials(&point_cfg, axis_index);
        let summary = summarize(value, &results);
        if summary.failures * 100 > cfg.trials {
            return Err(Error::CampaignFailed {
                axis_index,
                failed: summary.failures,
                total: cfg.trials,
            });
        }
        points.push(summary);
    }
    Ok(CampaignResult {
        axis_label: cfg.sweep.label(),
        points,
        config: cfg.clone(),
        seed: cfg.master_seed,
    })
}

/// Single-user benchmark over the same axis and seed family: one user,
/// no inter-user interference, reported as the campaign's mean secrecy.
pub fn run_benchmark_su(cfg: &ScenarioConfig) -> Result<CampaignResult> {
    let mut su = cfg.clone();
    su.users = 1;
    if let Sweep::Users { .. } = su.sweep {
        // The benchmark is flat across a user sweep; keep the axis for overlay.
        let points = su.sweep.points();
        su.sweep = Sweep::None;
        let single = run_campaign(&su)?;
        let template = single.points.into_iter().next();
        let points = template
            .map(|p| points.iter().map(|&v| PointSummary { axis_value: v, ..p.clone() }).collect())
            .unwrap_or_default();
        return Ok(CampaignResult {
            axis_label: cfg.sweep.label(),
            points,
            config: cfg.clone(),
            seed: cfg.master_seed,
        });
    }
    let mut res = run_campaign(&su)?;
    for p in &mut res.points {
        p.mean_secrecy = p.mean_su_secrecy;
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(band: Band) -> ScenarioConfig {
        let mut cfg = ScenarioConfig::for_band(band);
        cfg.n_t = 8;
        cfg.users = 3;
        cfg.trials = 6;
        cfg.master_seed = 99;
        cfg
    }

    #[test]
    fn band_defaults() {
        let mm = ScenarioConfig::for_band(Band::MmWave);
        assert_eq!((mm.n_r, mm.n_e, mm.channel.n_clusters, mm.channel.n_rays), (4, 4, 4, 15));
        let s6 = ScenarioConfig::for_band(Band::Sub6);
        assert_eq!((s6.n_r, s6.n_e, s6.channel.n_clusters, s6.channel.n_rays), (2, 2, 10, 20));
        for c in [&mm, &s6] {
            assert_eq!(c.channel.angular_spread_deg, 10.0);
            assert_eq!(c.ascent.step_size_init, 0.1);
            assert_eq!(c.ascent.convergence_eps, 1e-7);
            assert_eq!(c.trials, 1000);
            c.validate().unwrap();
        }
        assert_eq!(PowerAdaptConfig::default().adapt_rate, 0.01);
    }

    #[test]
    fn sweep_points() {
        assert_eq!(Sweep::Snr { start: 0.0, stop: 10.0, step: 1.0 }.points().len(), 11);
        assert_eq!(Sweep::Snr { start: 0.0, stop: 1.0, step: 0.1 }.points().len(), 11);
        assert_eq!(Sweep::Users { start: 1, stop: 10 }.points().len(), 10);
        assert!(Sweep::Users { start: 3, stop: 2 }.points().is_empty());
        assert_eq!(Sweep::None.points().len(), 1);
    }

    #[test]
    fn single_trial_campaign_equals_trial() {
        let mut cfg = small(Band::Sub6);
        cfg.trials = 1;
        let res = run_campaign(&cfg).unwrap();
        let trial = run_trial(&cfg, 0, 0).unwrap();
        assert_eq!(res.points[0].mean_secrecy, trial.mean_secrecy);
        assert_eq!(res.points[0].mean_energy_efficiency, trial.mean_energy_efficiency);
        assert_eq!(res.points[0].trials, 1);
    }

    #[test]
    fn campaign_is_thread_count_independent() {
        let mut cfg = small(Band::MmWave);
        cfg.sweep = Sweep::Snr { start: 0.0, stop: 4.0, step: 2.0 };
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_campaign(&cfg).unwrap())
        };
        let a = run(1);
        assert_eq!(a, run(3));
        assert_eq!(a.points.len(), 3);
    }

    #[test]
    fn trial_order_does_not_change_means() {
        let cfg = small(Band::Sub6);
        let results = run_point_trials(&cfg, 0);
        let mut reversed = results.clone();
        reversed.reverse();
        let a = summarize(0.0, &results);
        let b = summarize(0.0, &reversed);
        assert!((a.mean_secrecy - b.mean_secrecy).abs() < 1e-12);
        assert!((a.mean_energy_efficiency - b.mean_energy_efficiency).abs() < 1e-12);
    }

    #[test]
    fn failures_are_counted_and_excluded() {
        let ok = run_trial(&small(Band::Sub6), 0, 0).unwrap();
        let results = vec![Ok(ok.clone()), Err(Error::SingularEffectiveChannel), Ok(ok.clone())];
        let s = summarize(1.0, &results);
        assert_eq!((s.trials, s.failures), (2, 1));
        assert_eq!(s.trials + s.failures, results.len());
        assert_eq!(s.mean_secrecy, ok.mean_secrecy);
    }

    #[test]
    fn su_benchmark_matches_single_user_campaign() {
        let mut cfg = small(Band::Sub6);
        cfg.users = 1;
        cfg.sweep = Sweep::Snr { start: 0.0, stop: 6.0, step: 3.0 };
        let mu = run_campaign(&cfg).unwrap();
        let su = run_benchmark_su(&cfg).unwrap();
        for (a, b) in mu.points.iter().zip(&su.points) {
            assert!((a.mean_secrecy - b.mean_secrecy).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_axis_gives_empty_result() {
        let mut cfg = small(Band::Sub6);
        cfg.sweep = Sweep::Snr { start: 5.0, stop: 0.0, step: 1.0 };
        assert!(run_benchmark_su(&cfg).unwrap().points.is_empty());
        cfg.sweep = Sweep::Users { start: 4, stop: 2 };
        assert!(run_benchmark_su(&cfg).unwrap().points.is_empty());
    }

    #[test]
    fn validation_rejects_bad_values() {
        let mut cfg = small(Band::Sub6);
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = small(Band::Sub6);
        cfg.sweep = Sweep::Snr { start: 0.0, stop: 1.0, step: 0.0 };
        assert!(cfg.validate().is_err());
    }
}
