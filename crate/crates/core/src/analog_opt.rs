//! Single-user projected gradient ascent over the analog combiner `w_u`
//! and analog precoder column `f_RF^u`.
//!
//! Each iteration takes a gradient step on both vectors from the same
//! cost snapshot, then projects each back onto the constant-amplitude
//! set: normalize to unit 2-norm, then force every entry to modulus
//! `1/√N` while keeping its phase. The step size is halved (by default)
//! every time the cost goes down; the step is kept either way.
//!
//! Gradients are the Wirtinger derivatives of the natural-log rates,
//! i.e. of `ln2 · (C_u − C_E)`. The missing `1/ln2` only rescales the
//! step size.
//!
//! The eavesdropper combiners and the jammer precoder are never touched.

use rand::Rng;

use crate::channel::ChannelSet;
use crate::error::{Error, Result};
use crate::linalg::{dot_slices, ComplexMatrix, ComplexVector, C64};
use crate::metrics::{LinkPowers, PowerConfig};
use crate::rng::complex_gaussian;

/// Analog beamformers for every user plus the (uncontrolled) attacker vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamformerState {
    /// `w_u`, length `N_r`.
    pub w_user: Vec<ComplexVector>,
    /// `f_RF^u`, length `N_t`; the columns of `F_RF`.
    pub f_rf: Vec<ComplexVector>,
    /// `w_E`, length `N_E`, one per eavesdropper.
    pub w_eve: Vec<ComplexVector>,
    /// `f_RF^j`, length `N_j`.
    pub f_jam: ComplexVector,
}

impl BeamformerState {
    /// Complex-Gaussian draws, each vector then projected onto the CA set.
    pub fn random<R: Rng + ?Sized>(
        users: usize,
        eves: usize,
        n_t: usize,
        n_r: usize,
        n_e: usize,
        n_j: usize,
        rng: &mut R,
    ) -> Self {
        let mut draw = |n: usize| {
            let v = ComplexVector::from_vec((0..n).map(|_| complex_gaussian(rng)).collect());
            project(&v)
        };
        let w_user = (0..users).map(|_| draw(n_r)).collect();
        let f_rf = (0..users).map(|_| draw(n_t)).collect();
        let w_eve = (0..eves).map(|_| draw(n_e)).collect();
        let f_jam = draw(n_j);
        Self {
            w_user,
            f_rf,
            w_eve,
            f_jam,
        }
    }

    pub fn users(&self) -> usize {
        self.w_user.len()
    }

    /// `F_RF`, `N_t × U`.
    pub fn f_rf_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_columns(&self.f_rf).expect("analog precoder columns share a length")
    }

    pub fn check_against(&self, channels: &ChannelSet) -> Result<()> {
        let users = channels.users();
        if self.w_user.len() != users || self.f_rf.len() != users {
            return Err(Error::dims("beamformer users", users, self.w_user.len().min(self.f_rf.len())));
        }
        if self.w_eve.len() != channels.eves() {
            return Err(Error::dims("eavesdropper combiners", channels.eves(), self.w_eve.len()));
        }
        let (n_r, n_t, n_e, n_j) = (channels.n_r(), channels.n_t(), channels.n_e(), channels.n_j());
        if let Some(w) = self.w_user.iter().find(|w| w.len() != n_r) {
            return Err(Error::dims("user combiner", n_r, w.len()));
        }
        if let Some(f) = self.f_rf.iter().find(|f| f.len() != n_t) {
            return Err(Error::dims("analog precoder", n_t, f.len()));
        }
        if let Some(w) = self.w_eve.iter().find(|w| w.len() != n_e) {
            return Err(Error::dims("eavesdropper combiner", n_e, w.len()));
        }
        if self.f_jam.len() != n_j {
            return Err(Error::dims("jammer precoder", n_j, self.f_jam.len()));
        }
        Ok(())
    }
}

/// Worst deviation of `v` from the unit-norm and constant-amplitude constraints.
pub fn constraint_violation(v: &ComplexVector) -> f64 {
    let target = 1.0 / (v.len() as f64).sqrt();
    let modulus = v.iter().map(|z| (z.norm() - target).abs()).fold(0.0, f64::max);
    modulus.max((v.two_norm() - 1.0).abs())
}

/// Projects onto the constant-amplitude set `{v : |v_k| = 1/√N}`.
///
/// Normalizes to unit 2-norm first, then rescales every entry to modulus
/// `1/√N`, keeping phases. An exactly-zero entry has no phase and becomes
/// `1/√N`.
pub fn project(v: &ComplexVector) -> ComplexVector {
    let mut out = v.clone();
    project_in_place(out.as_mut_slice());
    out
}

fn project_in_place(v: &mut [C64]) {
    let amp = 1.0 / (v.len() as f64).sqrt();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        let scaled = if norm > 0.0 { *z / norm } else { *z };
        let m = scaled.norm();
        *z = if m > 0.0 && m.is_finite() {
            scaled * (amp / m)
        } else {
            C64::new(amp, 0.0)
        };
    }
}

/// Step-size schedule and stopping rule for [`ascend_su`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AscentConfig {
    pub step_size_init: f64,
    pub convergence_eps: f64,
    pub max_iters: usize,
    pub step_shrink: f64,
}

impl Default for AscentConfig {
    fn default() -> Self {
        Self {
            step_size_init: 0.1,
            convergence_eps: 1e-7,
            max_iters: 5000,
            step_shrink: 0.5,
        }
    }
}

impl AscentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason: &str| {
            Err(Error::InvalidParameter {
                name,
                reason: reason.into(),
            })
        };
        if !(self.step_size_init > 0.0 && self.step_size_init.is_finite()) {
            return bad("ascent.step_size_init", "must be positive");
        }
        if !(self.convergence_eps > 0.0) {
            return bad("ascent.convergence_eps", "must be positive");
        }
        if self.max_iters == 0 {
            return bad("ascent.max_iters", "must be at least 1");
        }
        if !(self.step_shrink > 0.0 && self.step_shrink < 1.0) {
            return bad("ascent.step_shrink", "must lie in (0, 1)");
        }
        Ok(())
    }
}

/// Target-driven transmit power adaptation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerAdaptConfig {
    /// `ζ`, bits/s/Hz.
    pub target_secrecy: f64,
    /// `μ`, dB.
    pub power_cap_db: f64,
    /// `κ`: `P_b ← P_b (1 + κ)` after each cycle that misses the target.
    pub adapt_rate: f64,
}

impl Default for PowerAdaptConfig {
    fn default() -> Self {
        Self {
            target_secrecy: 1.0,
            power_cap_db: 30.0,
            adapt_rate: 0.01,
        }
    }
}

impl PowerAdaptConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.target_secrecy >= 0.0 && self.target_secrecy.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "power_adapt.target_secrecy",
                reason: "must be non-negative".into(),
            });
        }
        if !(self.adapt_rate > 0.0 && self.adapt_rate.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "power_adapt.adapt_rate",
                reason: "must be positive".into(),
            });
        }
        if self.power_cap_db.is_nan() {
            return Err(Error::InvalidParameter {
                name: "power_adapt.power_cap_db",
                reason: "must be a number".into(),
            });
        }
        Ok(())
    }
}

/// Everything about user `u`'s single-user problem that does not depend
/// on `(w_u, f_RF^u)`.
struct SuProblem<'a> {
    h: &'a ComplexMatrix,
    /// `H_{j,u} f_RF^j`.
    jam: Vec<C64>,
    /// `H_E^H w_E` per eavesdropper, so `w_E^H H_E f = eve_dirs[m]^H f`.
    eve_dirs: Vec<Vec<C64>>,
    /// `σ_E² ‖w_E‖²` per eavesdropper.
    eve_noise: Vec<f64>,
    /// `P_b / U`.
    pb: f64,
    /// `P_j / U`.
    pj: f64,
    noise: f64,
}

/// Quantities of one cost evaluation shared by the cost and both gradients.
struct Snapshot {
    /// `H_u f`.
    hf: Vec<C64>,
    /// `H_u^H w`.
    hw: Vec<C64>,
    /// `w^H H_u f`.
    signal: C64,
    /// `w^H H_{j,u} f_RF^j`.
    jam: C64,
    /// `σ_u² ‖w‖²`.
    noise: f64,
    /// Per eavesdropper: `w_E^H H_E f`.
    eve: Vec<C64>,
    /// Index of the eavesdropper with the highest rate.
    worst_eve: usize,
    user_rate: f64,
    eve_rate: f64,
}

impl<'a> SuProblem<'a> {
    fn new(u: usize, channels: &'a ChannelSet, state: &BeamformerState, p: &LinkPowers) -> Result<Self> {
        channels.validate()?;
        state.check_against(channels)?;
        if u >= channels.users() {
            return Err(Error::dims("user index", format!("< {}", channels.users()), u));
        }
        let users = channels.users() as f64;
        let jam = channels.jammer_to_user[u].mul_vec(&state.f_jam)?.into_inner();
        let eve_dirs = channels
            .bs_to_eve
            .iter()
            .zip(&state.w_eve)
            .map(|(h, w)| h.herm_mul_vec(w).map(ComplexVector::into_inner))
            .collect::<Result<Vec<_>>>()?;
        let eve_noise = state.w_eve.iter().map(|w| p.noise_eve * w.norm_sqr()).collect();
        Ok(Self {
            h: &channels.bs_to_user[u],
            jam,
            eve_dirs,
            eve_noise,
            pb: p.p_b / users,
            pj: p.p_j / users,
            noise: p.noise_user,
        })
    }

    fn with_power(&mut self, p_b: f64, users: usize) {
        self.pb = p_b / users as f64;
    }

    fn snapshot(&self, w: &[C64], f: &[C64]) -> Snapshot {
        let h = self.h;
        let hf: Vec<C64> = (0..h.rows())
            .map(|i| h.row(i).iter().zip(f).map(|(a, b)| a * b).sum())
            .collect();
        let mut hw = vec![C64::new(0.0, 0.0); h.cols()];
        for (i, wi) in w.iter().enumerate() {
            for (o, a) in hw.iter_mut().zip(h.row(i)) {
                *o += a.conj() * wi;
            }
        }
        let signal = dot_slices(w, &hf);
        let jam = dot_slices(w, &self.jam);
        let noise = self.noise * w.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let user_rate = (1.0 + self.pb * signal.norm_sqr() / (noise + self.pj * jam.norm_sqr())).log2();
        let eve: Vec<C64> = self.eve_dirs.iter().map(|d| dot_slices(d, f)).collect();
        let (worst_eve, eve_rate) = eve
            .iter()
            .zip(&self.eve_noise)
            .map(|(g, n)| (1.0 + self.pb * g.norm_sqr() / n).log2())
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (m, r)| if r > best.1 { (m, r) } else { best });
        Snapshot {
            hf,
            hw,
            signal,
            jam,
            noise,
            eve,
            worst_eve,
            user_rate,
            eve_rate,
        }
    }

    fn grad_w(&self, w: &[C64], s: &Snapshot) -> Vec<C64> {
        let psi_u = s.signal.norm_sqr();
        let psi_j = s.jam.norm_sqr();
        let d_jam = s.noise + self.pj * psi_j;
        let d_full = d_jam + self.pb * psi_u;
        // H_u f f^H H_u^H w = hf · conj(signal); likewise for the jammer term.
        let sig_coef = s.signal.conj() * self.pb;
        let jam_coef = s.jam.conj() * self.pj;
        w.iter()
            .zip(&s.hf)
            .zip(&self.jam)
            .map(|((wi, hfi), ji)| {
                let common = wi * self.noise + ji * jam_coef;
                (common + hfi * sig_coef) / d_full - common / d_jam
            })
            .collect()
    }

    fn grad_f(&self, s: &Snapshot) -> Vec<C64> {
        let d_full = s.noise + self.pj * s.jam.norm_sqr() + self.pb * s.signal.norm_sqr();
        let user_coef = s.signal * (self.pb / d_full);
        let m = s.worst_eve;
        let g = s.eve[m];
        let eve_coef = g * (self.pb / (self.eve_noise[m] + self.pb * g.norm_sqr()));
        s.hw
            .iter()
            .zip(&self.eve_dirs[m])
            .map(|(hwi, di)| hwi * user_coef - di * eve_coef)
            .collect()
    }
}

/// `∇_{w_u*}` of `ln2 · C_s^SU`.
pub fn grad_w(u: usize, channels: &ChannelSet, state: &BeamformerState, power: &PowerConfig) -> Result<ComplexVector> {
    let prob = SuProblem::new(u, channels, state, &power.linear())?;
    let w = state.w_user[u].as_slice();
    let snap = prob.snapshot(w, state.f_rf[u].as_slice());
    Ok(ComplexVector::from_vec(prob.grad_w(w, &snap)))
}

/// `∇_{(f_RF^u)*}` of `ln2 · C_s^SU`, taken against the strongest eavesdropper.
pub fn grad_f(u: usize, channels: &ChannelSet, state: &BeamformerState, power: &PowerConfig) -> Result<ComplexVector> {
    let prob = SuProblem::new(u, channels, state, &power.linear())?;
    let f = state.f_rf[u].as_slice();
    let snap = prob.snapshot(state.w_user[u].as_slice(), f);
    Ok(ComplexVector::from_vec(prob.grad_f(&snap)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AscentResult {
    pub state: BeamformerState,
    /// `C_s^SU` before the first step, then after every iteration.
    pub trace: Vec<f64>,
    pub iterations: usize,
    /// False when `max_iters` was hit before the cost settled.
    pub converged: bool,
    /// Step size at exit.
    pub final_step: f64,
}

impl AscentResult {
    pub fn final_secrecy(&self) -> f64 {
        *self.trace.last().expect("trace holds the initial value")
    }
}

/// Projected gradient ascent on `(w_u, f_RF^u)` at fixed transmit power.
///
/// Progress is measured on the unclamped gap `C_u^SU − C_E^SU` so the
/// search keeps moving while the secrecy rate is still pinned at zero.
pub fn ascend_su(
    u: usize,
    channels: &ChannelSet,
    state: &BeamformerState,
    power: &PowerConfig,
    cfg: &AscentConfig,
) -> Result<AscentResult> {
    ascend_su_observed(u, channels, state, power, cfg, |_, _| {})
}

/// [`ascend_su`], calling `observer(w_u, f_RF^u)` after every projected step.
pub fn ascend_su_observed<F>(
    u: usize,
    channels: &ChannelSet,
    state: &BeamformerState,
    power: &PowerConfig,
    cfg: &AscentConfig,
    observer: F,
) -> Result<AscentResult>
where
    F: FnMut(&[C64], &[C64]),
{
    cfg.validate()?;
    let prob = SuProblem::new(u, channels, state, &power.linear())?;
    run_ascent(&prob, u, state, cfg, observer)
}

fn run_ascent<F>(
    prob: &SuProblem<'_>,
    u: usize,
    state: &BeamformerState,
    cfg: &AscentConfig,
    mut observer: F,
) -> Result<AscentResult>
where
    F: FnMut(&[C64], &[C64]),
{
    let mut w = state.w_user[u].as_slice().to_vec();
    let mut f = state.f_rf[u].as_slice().to_vec();
    let mut snap = prob.snapshot(&w, &f);
    let mut prev = snap.user_rate - snap.eve_rate;
    if !prev.is_finite() {
        return Err(Error::NonFiniteCost { iteration: 0 });
    }
    let mut trace = Vec::with_capacity(64);
    trace.push(prev.max(0.0));
    let mut step = cfg.step_size_init;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < cfg.max_iters {
        iterations += 1;
        let gw = prob.grad_w(&w, &snap);
        let gf = prob.grad_f(&snap);
        for (wi, gi) in w.iter_mut().zip(&gw) {
            *wi += gi * step;
        }
        for (fi, gi) in f.iter_mut().zip(&gf) {
            *fi += gi * step;
        }
        project_in_place(&mut w);
        project_in_place(&mut f);
        observer(&w, &f);

        snap = prob.snapshot(&w, &f);
        let gap = snap.user_rate - snap.eve_rate;
        if !gap.is_finite() {
            return Err(Error::NonFiniteCost { iteration: iterations });
        }
        trace.push(gap.max(0.0));
        if gap < prev {
            step *= cfg.step_shrink;
        }
        if (gap - prev).abs() <= cfg.convergence_eps {
            converged = true;
            break;
        }
        prev = gap;
    }

    let mut out = state.clone();
    out.w_user[u] = ComplexVector::from_vec(w);
    out.f_rf[u] = ComplexVector::from_vec(f);
    Ok(AscentResult {
        state: out,
        trace,
        iterations,
        converged,
        final_step: step,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerAdaptResult {
    pub state: BeamformerState,
    /// Power settings of the last cycle.
    pub power: PowerConfig,
    /// Linear `P_b` of the last cycle, exactly `initial · (1 + κ)^adaptations`.
    pub p_b_linear: f64,
    /// Completed ascent runs, at least 1.
    pub cycles: usize,
    /// Number of times `P_b` was raised.
    pub adaptations: usize,
    pub reached_target: bool,
    pub final_secrecy: f64,
    pub total_iterations: usize,
}

/// Repeats [`ascend_su`], raising `P_b` by `(1 + κ)` after every cycle that
/// misses the secrecy target, until the target is met or the next raise
/// would exceed the power cap.
///
/// Each cycle warm-starts from the previous cycle's beamformers with the
/// step size reset to its initial value.
pub fn ascend_su_power_adapt(
    u: usize,
    channels: &ChannelSet,
    state: &BeamformerState,
    power: &PowerConfig,
    cfg: &AscentConfig,
    pcfg: &PowerAdaptConfig,
) -> Result<PowerAdaptResult> {
    cfg.validate()?;
    pcfg.validate()?;
    let base = power.linear();
    let mut prob = SuProblem::new(u, channels, state, &base)?;
    let cap = crate::metrics::db_to_linear(pcfg.power_cap_db);
    let growth = 1.0 + pcfg.adapt_rate;

    let mut current = state.clone();
    let mut adaptations = 0usize;
    let mut cycles = 0usize;
    let mut total_iterations = 0usize;
    loop {
        let p_b = base.p_b * growth.powi(adaptations as i32);
        prob.with_power(p_b, channels.users());
        let res = run_ascent(&prob, u, &current, cfg, |_, _| {})?;
        cycles += 1;
        total_iterations += res.iterations;
        current = res.state;
        let secrecy = res.trace.last().copied().unwrap_or(0.0);
        let reached = secrecy >= pcfg.target_secrecy;
        let next = base.p_b * growth.powi(adaptations as i32 + 1);
        if reached || next > cap {
            return Ok(PowerAdaptResult {
                state: current,
                power: PowerConfig {
                    p_b_db: crate::metrics::linear_to_db(p_b),
                    ..*power
                },
                p_b_linear: p_b,
                cycles,
                adaptations,
                reached_target: reached,
                final_secrecy: secrecy,
                total_iterations,
            });
        }
        adaptations += 1;
    }
}
