//! SINR, rate, secrecy and energy-efficiency evaluation.
//!
//! Noise at a receiver is taken after combining, so its power is
//! `σ²‖w‖²`. For unit-norm combiners (every state produced by the
//! optimizer) this is just `σ²`; keeping the `‖w‖²` factor makes the
//! cost scale-invariant in `w`, which is what the closed-form gradients
//! in [`crate::analog_opt`] differentiate.

use crate::analog_opt::BeamformerState;
use crate::channel::ChannelSet;
use crate::error::{Error, Result};
use crate::linalg::{dot_slices, ComplexMatrix, ComplexVector, C64};

pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Transmit powers (dB) and receiver noise variances (linear).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerConfig {
    pub p_b_db: f64,
    pub p_j_db: f64,
    pub noise_var_user: f64,
    pub noise_var_eve: f64,
}

impl PowerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.noise_var_user > 0.0 && self.noise_var_user.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "power.noise_var_user",
                reason: "must be positive".into(),
            });
        }
        if !(self.noise_var_eve > 0.0 && self.noise_var_eve.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "power.noise_var_eve",
                reason: "must be positive".into(),
            });
        }
        if self.p_b_db.is_nan() || self.p_j_db.is_nan() {
            return Err(Error::InvalidParameter {
                name: "power",
                reason: "powers must not be NaN".into(),
            });
        }
        Ok(())
    }

    pub fn linear(&self) -> LinkPowers {
        LinkPowers {
            p_b: db_to_linear(self.p_b_db),
            p_j: db_to_linear(self.p_j_db),
            noise_user: self.noise_var_user,
            noise_eve: self.noise_var_eve,
        }
    }

    /// Signal-to-noise ratio seen by the digital stage, `P_b / σ_u²`.
    pub fn snr_linear(&self) -> f64 {
        db_to_linear(self.p_b_db) / self.noise_var_user
    }
}

/// [`PowerConfig`] in linear units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkPowers {
    pub p_b: f64,
    pub p_j: f64,
    pub noise_user: f64,
    pub noise_eve: f64,
}

impl LinkPowers {
    pub fn to_config(&self) -> PowerConfig {
        PowerConfig {
            p_b_db: linear_to_db(self.p_b),
            p_j_db: linear_to_db(self.p_j),
            noise_var_user: self.noise_user,
            noise_var_eve: self.noise_eve,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    /// Every RF chain drives every antenna: `N_PS = N_t · N_RF`.
    Full,
    /// Each RF chain drives its own subarray: `N_PS = N_t`.
    Partial,
}

/// Number of RF chains: one per served user, or a fixed count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RfChains {
    PerUser,
    Fixed(usize),
}

impl RfChains {
    pub fn count(self, users: usize) -> usize {
        match self {
            RfChains::PerUser => users,
            RfChains::Fixed(n) => n,
        }
    }
}

/// Hardware power budget, all in milliwatts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyModel {
    pub p_rf_mw: f64,
    pub p_pa_mw: f64,
    pub p_ps_mw: f64,
    pub n_rf: RfChains,
    pub connectivity: Connectivity,
}

impl Default for EnergyModel {
    fn default() -> Self {
        Self {
            p_rf_mw: 100.0,
            p_pa_mw: 100.0,
            p_ps_mw: 10.0,
            n_rf: RfChains::PerUser,
            connectivity: Connectivity::Full,
        }
    }
}

impl EnergyModel {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("energy.p_rf_mw", self.p_rf_mw),
            ("energy.p_pa_mw", self.p_pa_mw),
            ("energy.p_ps_mw", self.p_ps_mw),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: "must be positive".into(),
                });
            }
        }
        if self.n_rf == RfChains::Fixed(0) {
            return Err(Error::InvalidParameter {
                name: "energy.n_rf",
                reason: "must be at least 1".into(),
            });
        }
        Ok(())
    }

    /// Total consumed power in mW for a given transmit power and array size.
    pub fn total_power_mw(&self, p_b_db: f64, n_t: usize, users: usize) -> f64 {
        let n_rf = self.n_rf.count(users) as f64;
        let n_t = n_t as f64;
        let n_ps = match self.connectivity {
            Connectivity::Full => n_t * n_rf,
            Connectivity::Partial => n_t,
        };
        // P_b in dB is read as dBm.
        db_to_linear(p_b_db) + n_rf * self.p_rf_mw + n_t * self.p_pa_mw + n_ps * self.p_ps_mw
    }
}

/// Secrecy rate per consumed milliwatt, bits/s/Hz/mW.
pub fn energy_efficiency(c_u: f64, power: &PowerConfig, model: &EnergyModel, n_t: usize, users: usize) -> f64 {
    c_u / model.total_power_mw(power.p_b_db, n_t, users)
}

pub fn rate(sinr: f64) -> f64 {
    (1.0 + sinr).log2()
}

/// `max(c_u − max(c_e), 0)`.
pub fn secrecy(c_u: f64, c_e: &[f64]) -> Result<f64> {
    let worst = c_e
        .iter()
        .copied()
        .reduce(f64::max)
        .ok_or(Error::NoEavesdroppers)?;
    Ok((c_u - worst).max(0.0))
}

/// Per-user precoded vectors `F_RF f_BB^n`, one per column of `f_bb`.
pub(crate) fn precoded_columns(state: &BeamformerState, f_bb: &ComplexMatrix) -> Result<Vec<ComplexVector>> {
    let users = state.users();
    if f_bb.shape() != (users, users) {
        return Err(Error::dims(
            "digital precoder",
            format!("{users}x{users}"),
            format!("{}x{}", f_bb.rows(), f_bb.cols()),
        ));
    }
    let n_t = state.f_rf[0].len();
    Ok((0..users)
        .map(|n| {
            let mut x = vec![C64::new(0.0, 0.0); n_t];
            for (k, f) in state.f_rf.iter().enumerate() {
                let coef = f_bb[(k, n)];
                for (xi, fi) in x.iter_mut().zip(f.iter()) {
                    *xi += fi * coef;
                }
            }
            ComplexVector::from_vec(x)
        })
        .collect())
}

fn check_user(u: usize, channels: &ChannelSet, state: &BeamformerState) -> Result<()> {
    channels.validate()?;
    state.check_against(channels)?;
    if u >= channels.users() {
        return Err(Error::dims("user index", format!("< {}", channels.users()), u));
    }
    Ok(())
}

/// Multi-user SINR of user `u` with digital precoder `f_bb`.
pub fn sinr_user_mu(
    u: usize,
    channels: &ChannelSet,
    state: &BeamformerState,
    f_bb: &ComplexMatrix,
    power: &PowerConfig,
) -> Result<f64> {
    check_user(u, channels, state)?;
    let x = precoded_columns(state, f_bb)?;
    Ok(sinr_user_from_columns(u, channels, state, &x, &power.linear()))
}

pub(crate) fn sinr_user_from_columns(
    u: usize,
    channels: &ChannelSet,
    state: &BeamformerState,
    x: &[ComplexVector],
    p: &LinkPowers,
) -> f64 {
    let users = channels.users() as f64;
    let w = &state.w_user[u];
    // r = H_u^H w_u, so w_u^H H_u x = r^H x.
    let r = channels.bs_to_user[u].herm_mul_vec(w).expect("validated");
    let jam = channels.jammer_to_user[u].mul_vec(&state.f_jam).expect("validated");
    let psi_j = dot_slices(w.as_slice(), jam.as_slice()).norm_sqr();
    let gains: Vec<f64> = x.iter().map(|xn| dot_slices(r.as_slice(), xn.as_slice()).norm_sqr()).collect();
    let interference: f64 = gains.iter().enumerate().filter(|(n, _)| *n != u).map(|(_, g)| g).sum();
    let signal = p.p_b / users * gains[u];
    signal / (p.noise_user * w.norm_sqr() + p.p_j / users * psi_j + p.p_b / users * interference)
}

/// Multi-user SINR at eavesdropper `eve` while overhearing user `u`'s stream.
pub fn sinr_eve_mu(
    u: usize,
    eve: usize,
    channels: &ChannelSet,
    state: &BeamformerState,
    f_bb: &ComplexMatrix,
    power: &PowerConfig,
) -> Result<f64> {
    check_user(u, channels, state)?;
    if eve >= channels.eves() {
        return Err(Error::dims("eavesdropper index", format!("< {}", channels.eves()), eve));
    }
    let x = precoded_columns(state, f_bb)?;
    Ok(sinr_eve_from_columns(u, eve, channels, state, &x, &power.linear()))
}

pub(crate) fn sinr_eve_from_columns(
    u: usize,
    eve: usize,
    channels: &ChannelSet,
    state: &BeamformerState,
    x: &[ComplexVector],
    p: &LinkPowers,
) -> f64 {
    let users = channels.users() as f64;
    let w_e = &state.w_eve[eve];
    let r = channels.bs_to_eve[eve].herm_mul_vec(w_e).expect("validated");
    let gains: Vec<f64> = x.iter().map(|xn| dot_slices(r.as_slice(), xn.as_slice()).norm_sqr()).collect();
    let interference: f64 = gains.iter().enumerate().filter(|(n, _)| *n != u).map(|(_, g)| g).sum();
    p.p_b / users * gains[u] / (p.noise_eve * w_e.norm_sqr() + p.p_b / users * interference)
}

/// Multi-user secrecy rate of user `u`, worst case over eavesdroppers.
pub fn secrecy_mu(
    u: usize,
    channels: &ChannelSet,
    state: &BeamformerState,
    f_bb: &ComplexMatrix,
    power: &PowerConfig,
) -> Result<f64> {
    check_user(u, channels, state)?;
    let x = precoded_columns(state, f_bb)?;
    Ok(secrecy_mu_from_columns(u, channels, state, &x, &power.linear()))
}

pub(crate) fn secrecy_mu_from_columns(
    u: usize,
    channels: &ChannelSet,
    state: &BeamformerState,
    x: &[ComplexVector],
    p: &LinkPowers,
) -> f64 {
    let c_u = rate(sinr_user_from_columns(u, channels, state, x, p));
    let c_e: Vec<f64> = (0..channels.eves())
        .map(|m| rate(sinr_eve_from_columns(u, m, channels, state, x, p)))
        .collect();
    secrecy(c_u, &c_e).expect("at least one eavesdropper")
}

/// Single-user rates of user `u`: interference from other users is ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuRates {
    pub user: f64,
    /// Worst case over eavesdroppers.
    pub eve: f64,
}

impl SuRates {
    pub fn secrecy(&self) -> f64 {
        (self.user - self.eve).max(0.0)
    }

    /// Unclamped `C_u − C_E`.
    pub fn gap(&self) -> f64 {
        self.user - self.eve
    }
}

pub fn rates_su(u: usize, channels: &ChannelSet, state: &BeamformerState, power: &PowerConfig) -> Result<SuRates> {
    check_user(u, channels, state)?;
    let p = power.linear();
    let users = channels.users() as f64;
    let w = &state.w_user[u];
    let f = &state.f_rf[u];
    let signal = dot_slices(w.as_slice(), channels.bs_to_user[u].mul_vec(f)?.as_slice()).norm_sqr();
    let jam = dot_slices(w.as_slice(), channels.jammer_to_user[u].mul_vec(&state.f_jam)?.as_slice()).norm_sqr();
    let user = rate(p.p_b / users * signal / (p.noise_user * w.norm_sqr() + p.p_j / users * jam));
    let eve = channels
        .bs_to_eve
        .iter()
        .zip(&state.w_eve)
        .map(|(h_e, w_e)| {
            let g = dot_slices(w_e.as_slice(), h_e.mul_vec(f).expect("validated").as_slice()).norm_sqr();
            rate(p.p_b / users * g / (p.noise_eve * w_e.norm_sqr()))
        })
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(SuRates { user, eve })
}

/// Single-user secrecy rate `max(C_u^SU − C_E^SU, 0)`.
pub fn secrecy_su(u: usize, channels: &ChannelSet, state: &BeamformerState, power: &PowerConfig) -> Result<f64> {
    Ok(rates_su(u, channels, state, power)?.secrecy())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analog_opt::{project, BeamformerState};
    use crate::rng::{complex_gaussian, stream_from_seed, RandomStream};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn scalar_matrix(v: f64) -> ComplexMatrix {
        ComplexMatrix::new(1, 1, vec![c(v)]).unwrap()
    }

    fn scalar_vec(v: f64) -> ComplexVector {
        ComplexVector::from_real(&[v]).unwrap()
    }

    fn scalar_setup(h_e: f64) -> (ChannelSet, BeamformerState) {
        let channels = ChannelSet {
            bs_to_user: vec![scalar_matrix(1.0)],
            bs_to_eve: vec![scalar_matrix(h_e)],
            jammer_to_user: vec![scalar_matrix(1.0)],
        };
        let state = BeamformerState {
            w_user: vec![scalar_vec(1.0)],
            f_rf: vec![scalar_vec(1.0)],
            w_eve: vec![scalar_vec(1.0)],
            f_jam: scalar_vec(1.0),
        };
        (channels, state)
    }

    fn power(p_b_db: f64, p_j_db: f64) -> PowerConfig {
        PowerConfig {
            p_b_db,
            p_j_db,
            noise_var_user: 1.0,
            noise_var_eve: 1.0,
        }
    }

    fn random_matrix(rng: &mut RandomStream, r: usize, c: usize) -> ComplexMatrix {
        ComplexMatrix::new(r, c, (0..r * c).map(|_| complex_gaussian(rng)).collect()).unwrap()
    }

    fn random_vec(rng: &mut RandomStream, n: usize) -> ComplexVector {
        ComplexVector::new((0..n).map(|_| complex_gaussian(rng)).collect()).unwrap()
    }

    fn random_instance(seed: u64, users: usize) -> (ChannelSet, BeamformerState, ComplexMatrix) {
        let mut rng = stream_from_seed(seed);
        let (n_t, n_r, n_e, n_j) = (6, 3, 2, 4);
        let channels = ChannelSet {
            bs_to_user: (0..users).map(|_| random_matrix(&mut rng, n_r, n_t)).collect(),
            bs_to_eve: vec![random_matrix(&mut rng, n_e, n_t)],
            jammer_to_user: (0..users).map(|_| random_matrix(&mut rng, n_r, n_j)).collect(),
        };
        let state = BeamformerState {
            w_user: (0..users).map(|_| project(&random_vec(&mut rng, n_r))).collect(),
            f_rf: (0..users).map(|_| project(&random_vec(&mut rng, n_t))).collect(),
            w_eve: vec![project(&random_vec(&mut rng, n_e))],
            f_jam: project(&random_vec(&mut rng, n_j)),
        };
        let f_bb = random_matrix(&mut rng, users, users);
        (channels, state, f_bb)
    }

    /// Direct triple-loop evaluation of the multi-user SINR expressions.
    fn oracle_sinrs(
        u: usize,
        ch: &ChannelSet,
        st: &BeamformerState,
        f_bb: &ComplexMatrix,
        pw: &PowerConfig,
    ) -> (f64, f64) {
        let users = ch.users();
        let (p_b, p_j) = (10f64.powf(pw.p_b_db / 10.0), 10f64.powf(pw.p_j_db / 10.0));
        let n_t = st.f_rf[0].len();
        let gain = |h: &ComplexMatrix, w: &ComplexVector, n: usize| {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..h.rows() {
                for j in 0..n_t {
                    let mut x = C64::new(0.0, 0.0);
                    for k in 0..users {
                        x += st.f_rf[k][j] * f_bb[(k, n)];
                    }
                    acc += w[i].conj() * h[(i, j)] * x;
                }
            }
            acc.norm_sqr()
        };
        let mut jam = C64::new(0.0, 0.0);
        for i in 0..st.w_user[u].len() {
            for j in 0..st.f_jam.len() {
                jam += st.w_user[u][i].conj() * ch.jammer_to_user[u][(i, j)] * st.f_jam[j];
            }
        }
        let uf = users as f64;
        let mut int_u = 0.0;
        let mut int_e = 0.0;
        for n in 0..users {
            if n != u {
                int_u += gain(&ch.bs_to_user[u], &st.w_user[u], n);
                int_e += gain(&ch.bs_to_eve[0], &st.w_eve[0], n);
            }
        }
        let su = p_b / uf * gain(&ch.bs_to_user[u], &st.w_user[u], u)
            / (pw.noise_var_user + p_j / uf * jam.norm_sqr() + p_b / uf * int_u);
        let se = p_b / uf * gain(&ch.bs_to_eve[0], &st.w_eve[0], u) / (pw.noise_var_eve + p_b / uf * int_e);
        (su, se)
    }

    #[test]
    fn db_conversion() {
        assert_eq!(db_to_linear(0.0), 1.0);
        assert!((db_to_linear(10.0) - 10.0).abs() < 1e-12);
        assert!((db_to_linear(-20.0) - 0.01).abs() < 1e-15);
        assert_eq!(db_to_linear(f64::NEG_INFINITY), 0.0);
    }

    #[test]
    fn scalar_sinr_examples() {
        let (ch, st) = scalar_setup(1.0);
        let f_bb = scalar_matrix(1.0);
        let s = sinr_user_mu(0, &ch, &st, &f_bb, &power(0.0, f64::NEG_INFINITY)).unwrap();
        assert!((s - 1.0).abs() < 1e-15);
        let s = sinr_user_mu(0, &ch, &st, &f_bb, &power(0.0, 0.0)).unwrap();
        assert!((s - 0.5).abs() < 1e-15);
        let e = sinr_eve_mu(0, 0, &ch, &st, &f_bb, &power(0.0, 0.0)).unwrap();
        assert!((e - 1.0).abs() < 1e-15);
        let e = sinr_eve_mu(0, 0, &ch, &st, &scalar_matrix(0.0), &power(0.0, 0.0)).unwrap();
        assert_eq!(e, 0.0);
    }

    #[test]
    fn mu_sinrs_match_loop_oracle() {
        let pw = power(3.0, -2.0);
        for seed in 0..5 {
            let (ch, st, f_bb) = random_instance(seed, 3);
            for u in 0..3 {
                let (su, se) = oracle_sinrs(u, &ch, &st, &f_bb, &pw);
                let a = sinr_user_mu(u, &ch, &st, &f_bb, &pw).unwrap();
                let b = sinr_eve_mu(u, 0, &ch, &st, &f_bb, &pw).unwrap();
                assert!((a - su).abs() <= 1e-12 * su.max(1.0), "{a} vs {su}");
                assert!((b - se).abs() <= 1e-12 * se.max(1.0), "{b} vs {se}");
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let (ch, st, _) = random_instance(1, 3);
        let bad = ComplexMatrix::zeros(2, 2);
        assert!(matches!(
            sinr_user_mu(0, &ch, &st, &bad, &power(0.0, 0.0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rate_examples() {
        assert_eq!(rate(0.0), 0.0);
        assert_eq!(rate(1.0), 1.0);
        assert_eq!(rate(3.0), 2.0);
    }

    #[test]
    fn secrecy_examples() {
        assert_eq!(secrecy(2.0, &[0.5]).unwrap(), 1.5);
        assert_eq!(secrecy(0.3, &[0.7]).unwrap(), 0.0);
        assert!((secrecy(1.0, &[0.2, 0.8]).unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(secrecy(1.0, &[]), Err(Error::NoEavesdroppers));
        assert_eq!(secrecy(0.7, &[0.7]).unwrap(), 0.0);
    }

    #[test]
    fn su_secrecy_examples() {
        // Jammer off and silent eavesdropper: plain single-user rate.
        let (ch, st) = scalar_setup(0.0);
        let pw = power(3.0, f64::NEG_INFINITY);
        let s = secrecy_su(0, &ch, &st, &pw).unwrap();
        assert!((s - (1.0 + db_to_linear(3.0)).log2()).abs() < 1e-14);

        // Combiner orthogonal to the received signal.
        let channels = ChannelSet {
            bs_to_user: vec![ComplexMatrix::from_rows(&[vec![c(1.0)], vec![c(-1.0)]]).unwrap()],
            bs_to_eve: vec![scalar_matrix(0.3)],
            jammer_to_user: vec![ComplexMatrix::from_rows(&[vec![c(1.0)], vec![c(0.0)]]).unwrap()],
        };
        let a = 1.0 / 2f64.sqrt();
        let state = BeamformerState {
            w_user: vec![ComplexVector::from_real(&[a, a]).unwrap()],
            f_rf: vec![scalar_vec(1.0)],
            w_eve: vec![scalar_vec(1.0)],
            f_jam: scalar_vec(1.0),
        };
        assert_eq!(secrecy_su(0, &channels, &state, &power(10.0, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn su_secrecy_matches_oracle() {
        let pw = power(5.0, -3.0);
        for seed in 10..15 {
            let (ch, st, _) = random_instance(seed, 2);
            for u in 0..2 {
                let uf = 2.0;
                let (p_b, p_j) = (db_to_linear(5.0), db_to_linear(-3.0));
                let mut sig = C64::new(0.0, 0.0);
                let mut jam = C64::new(0.0, 0.0);
                let mut eve = C64::new(0.0, 0.0);
                for i in 0..3 {
                    for j in 0..6 {
                        sig += st.w_user[u][i].conj() * ch.bs_to_user[u][(i, j)] * st.f_rf[u][j];
                    }
                    for j in 0..4 {
                        jam += st.w_user[u][i].conj() * ch.jammer_to_user[u][(i, j)] * st.f_jam[j];
                    }
                }
                for i in 0..2 {
                    for j in 0..6 {
                        eve += st.w_eve[0][i].conj() * ch.bs_to_eve[0][(i, j)] * st.f_rf[u][j];
                    }
                }
                let c_u = (1.0 + p_b / uf * sig.norm_sqr() / (1.0 + p_j / uf * jam.norm_sqr())).log2();
                let c_e = (1.0 + p_b / uf * eve.norm_sqr()).log2();
                let want = (c_u - c_e).max(0.0);
                let got = secrecy_su(u, &ch, &st, &pw).unwrap();
                assert!((got - want).abs() < 1e-12, "{got} vs {want}");
            }
        }
    }

    #[test]
    fn single_user_mu_equals_su() {
        let pw = power(4.0, -1.0);
        for seed in 20..30 {
            let (ch, st, _) = random_instance(seed, 1);
            let f_bb = scalar_matrix(1.0);
            let su = rates_su(0, &ch, &st, &pw).unwrap();
            let mu_u = rate(sinr_user_mu(0, &ch, &st, &f_bb, &pw).unwrap());
            let mu_e = rate(sinr_eve_mu(0, 0, &ch, &st, &f_bb, &pw).unwrap());
            assert!((su.user - mu_u).abs() < 1e-12);
            assert!((su.eve - mu_e).abs() < 1e-12);
        }
    }

    #[test]
    fn user_sinr_ignores_combiner_phase() {
        let pw = power(2.0, 1.0);
        let (ch, mut st, f_bb) = random_instance(3, 3);
        let before = sinr_user_mu(1, &ch, &st, &f_bb, &pw).unwrap();
        st.w_user[1] = st.w_user[1].scale(C64::from_polar(1.0, 1.234));
        let after = sinr_user_mu(1, &ch, &st, &f_bb, &pw).unwrap();
        assert!((before - after).abs() < 1e-12 * before.max(1.0));
    }

    #[test]
    fn energy_efficiency_examples() {
        let model = EnergyModel {
            p_rf_mw: 1.0,
            p_pa_mw: 1.0,
            p_ps_mw: 1.0,
            n_rf: RfChains::Fixed(1),
            connectivity: Connectivity::Full,
        };
        let pw = power(0.0, 0.0);
        assert_eq!(energy_efficiency(0.0, &pw, &model, 1, 1), 0.0);
        assert!((energy_efficiency(1.0, &pw, &model, 1, 1) - 0.25).abs() < 1e-15);

        // Hand evaluation: 10^0.5 + 5·100 + 64·100 + (64·5)·10 = 10103.16227766017 mW.
        let model = EnergyModel::default();
        let pw = power(5.0, 0.0);
        let ee = energy_efficiency(1.0, &pw, &model, 64, 5);
        assert!((ee - 1.0 / 10103.16227766017).abs() < 1e-15);

        let partial = EnergyModel {
            connectivity: Connectivity::Partial,
            ..model
        };
        // 10^0.5 + 500 + 6400 + 64·10 = 7543.16227766017 mW.
        assert!((energy_efficiency(1.0, &pw, &partial, 64, 5) - 1.0 / 7543.16227766017).abs() < 1e-15);
    }

    #[test]
    fn energy_efficiency_decreases_with_array_size() {
        let model = EnergyModel::default();
        let pw = power(5.0, 0.0);
        let mut last = f64::INFINITY;
        for n_t in [1, 2, 4, 8, 16, 32, 64, 128] {
            let ee = energy_efficiency(2.0, &pw, &model, n_t, 5);
            assert!(ee < last);
            last = ee;
        }
    }

    #[test]
    fn power_validation() {
        assert!(power(0.0, 0.0).validate().is_ok());
        assert!(PowerConfig { noise_var_user: 0.0, ..power(0.0, 0.0) }.validate().is_err());
        assert!(PowerConfig { noise_var_eve: -1.0, ..power(0.0, 0.0) }.validate().is_err());
    }

    proptest::proptest! {
        #[test]
        fn secrecy_is_nonnegative(cu in 0.0f64..20.0, ce in proptest::collection::vec(0.0f64..20.0, 1..4)) {
            proptest::prop_assert!(secrecy(cu, &ce).unwrap() >= 0.0);
        }

        #[test]
        fn rate_is_monotone(a in 0.0f64..1e6, d in 1e-9f64..1e3) {
            proptest::prop_assert!(rate(a + d) > rate(a));
        }
    }
}
