//! Clustered geometric channel synthesis.
//!
//! A link with `N_R` receive and `N_T` transmit antennas is the sum of
//! `N_cl · N_ray` plane-wave paths,
//!
//! ```text
//! H = sqrt(N_R N_T / (N_cl N_ray)) · Σ_i Σ_j β_ij · a_R(φa_ij, θa_ij) · a_T(φd_ij, θd_ij)^H
//! ```
//!
//! with `β_ij ~ CN(0, 1)`. Cluster centres are uniform in azimuth over
//! `[0, 2π)` and in elevation over `[-π/2, π/2]`; rays scatter around the
//! centre with Laplacian offsets whose standard deviation is the angular
//! spread. With unit-norm steering vectors this gives `E‖H‖_F² = N_R N_T`.
//!
//! [`Normalization::UnitPower`] drops the `N_R N_T` factor so that
//! `E‖H‖_F² = 1`; array gain then shows up only through beamforming.

use std::f64::consts::{PI, TAU};

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector, C64};
use crate::montecarlo::ScenarioConfig;
use crate::rng::{complex_gaussian, RandomStream};

pub const DEFAULT_SPACING: f64 = 0.5;

/// Physical arrangement of an antenna array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArrayKind {
    /// Uniform linear array, responds to azimuth only.
    UniformLinear,
    /// Uniform planar array of `horizontal × vertical` elements.
    UniformPlanar { horizontal: usize, vertical: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGeometry {
    pub kind: ArrayKind,
    pub count: usize,
    /// Element spacing in wavelengths.
    pub spacing: f64,
}

impl ArrayGeometry {
    pub fn ula(count: usize) -> Self {
        Self {
            kind: ArrayKind::UniformLinear,
            count,
            spacing: DEFAULT_SPACING,
        }
    }

    pub fn upa(horizontal: usize, vertical: usize) -> Self {
        Self {
            kind: ArrayKind::UniformPlanar {
                horizontal,
                vertical,
            },
            count: horizontal * vertical,
            spacing: DEFAULT_SPACING,
        }
    }

    pub fn with_spacing(mut self, spacing: f64) -> Self {
        self.spacing = spacing;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(invalid("array.count", "must be at least 1"));
        }
        if !(self.spacing.is_finite() && self.spacing > 0.0) {
            return Err(invalid("channel.spacing", "must be positive"));
        }
        if let ArrayKind::UniformPlanar {
            horizontal,
            vertical,
        } = self.kind
        {
            if horizontal * vertical != self.count || horizontal == 0 {
                return Err(invalid(
                    "array.count",
                    format!("planar factorization {horizontal}x{vertical} does not give {}", self.count),
                ));
            }
        }
        Ok(())
    }
}

/// Array layout family used when a scenario builds geometries from antenna counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrayLayout {
    Linear,
    /// Planar, factorized as close to square as the count allows.
    Planar,
}

impl ArrayLayout {
    pub fn geometry(self, count: usize, spacing: f64) -> ArrayGeometry {
        match self {
            ArrayLayout::Linear => ArrayGeometry::ula(count),
            ArrayLayout::Planar => {
                let horizontal = near_square_factor(count);
                ArrayGeometry::upa(horizontal, count / horizontal)
            }
        }
        .with_spacing(spacing)
    }
}

/// Largest divisor of `n` not exceeding `sqrt(n)`.
fn near_square_factor(n: usize) -> usize {
    let mut best = 1;
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            best = d;
        }
        d += 1;
    }
    best
}

/// Overall scaling of a synthesized channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `sqrt(N_R N_T / (N_cl N_ray))`: `E‖H‖_F² = N_R N_T`.
    ArrayGain,
    /// `sqrt(1 / (N_cl N_ray))`: `E‖H‖_F² = 1`.
    UnitPower,
}

impl Normalization {
    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::ArrayGain => "array-gain",
            Normalization::UnitPower => "unit-power",
        }
    }
}

impl std::str::FromStr for Normalization {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "array-gain" => Ok(Normalization::ArrayGain),
            "unit-power" => Ok(Normalization::UnitPower),
            other => Err(format!("unknown normalization `{other}` (expected array-gain or unit-power)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub n_clusters: usize,
    pub n_rays: usize,
    pub angular_spread_deg: f64,
    pub tx_geometry: ArrayGeometry,
    pub rx_geometry: ArrayGeometry,
    pub normalization: Normalization,
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_clusters == 0 {
            return Err(invalid("channel.n_clusters", "must be at least 1"));
        }
        if self.n_rays == 0 {
            return Err(invalid("channel.n_rays", "must be at least 1"));
        }
        if !(self.angular_spread_deg.is_finite() && self.angular_spread_deg > 0.0) {
            return Err(invalid("channel.angular_spread_deg", "must be positive"));
        }
        self.tx_geometry.validate()?;
        self.rx_geometry.validate()
    }
}

/// Scenario-level channel settings, shared by every link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel {
    pub n_clusters: usize,
    pub n_rays: usize,
    pub angular_spread_deg: f64,
    pub layout: ArrayLayout,
    pub spacing: f64,
    pub normalization: Normalization,
}

impl ChannelModel {
    pub fn params(&self, n_rx: usize, n_tx: usize) -> ChannelParams {
        ChannelParams {
            n_clusters: self.n_clusters,
            n_rays: self.n_rays,
            angular_spread_deg: self.angular_spread_deg,
            tx_geometry: self.layout.geometry(n_tx, self.spacing),
            rx_geometry: self.layout.geometry(n_rx, self.spacing),
            normalization: self.normalization,
        }
    }
}

/// One realization of every link in the system.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    /// `H_u`, `N_r × N_t`, one per user.
    pub bs_to_user: Vec<ComplexMatrix>,
    /// `H_E`, `N_E × N_t`, one per eavesdropper.
    pub bs_to_eve: Vec<ComplexMatrix>,
    /// `H_{j,u}`, `N_r × N_j`, one per user.
    pub jammer_to_user: Vec<ComplexMatrix>,
}

impl ChannelSet {
    pub fn users(&self) -> usize {
        self.bs_to_user.len()
    }

    pub fn eves(&self) -> usize {
        self.bs_to_eve.len()
    }

    pub fn n_t(&self) -> usize {
        self.bs_to_user[0].cols()
    }

    pub fn n_r(&self) -> usize {
        self.bs_to_user[0].rows()
    }

    pub fn n_e(&self) -> usize {
        self.bs_to_eve[0].rows()
    }

    pub fn n_j(&self) -> usize {
        self.jammer_to_user[0].cols()
    }

    /// Checks list lengths and that every matrix agrees on the antenna counts.
    pub fn validate(&self) -> Result<()> {
        if self.bs_to_user.is_empty() {
            return Err(Error::dims("channel set", "at least one user", 0));
        }
        if self.bs_to_eve.is_empty() {
            return Err(Error::NoEavesdroppers);
        }
        if self.jammer_to_user.len() != self.bs_to_user.len() {
            return Err(Error::dims(
                "channel set jammer links",
                self.bs_to_user.len(),
                self.jammer_to_user.len(),
            ));
        }
        let (n_r, n_t, n_e, n_j) = (self.n_r(), self.n_t(), self.n_e(), self.n_j());
        let check = |m: &ComplexMatrix, shape: (usize, usize), what: &'static str| {
            if m.shape() != shape {
                Err(Error::dims(what, format!("{shape:?}"), format!("{:?}", m.shape())))
            } else {
                Ok(())
            }
        };
        for h in &self.bs_to_user {
            check(h, (n_r, n_t), "bs_to_user")?;
        }
        for h in &self.bs_to_eve {
            check(h, (n_e, n_t), "bs_to_eve")?;
        }
        for h in &self.jammer_to_user {
            check(h, (n_r, n_j), "jammer_to_user")?;
        }
        Ok(())
    }
}

/// Array response toward `(azimuth, elevation)`, unit norm.
///
/// A linear array ignores elevation. A planar array is the Kronecker
/// product of a horizontal linear response in azimuth and a vertical
/// linear response in elevation.
pub fn steering_vector(geometry: &ArrayGeometry, azimuth_rad: f64, elevation_rad: f64) -> ComplexVector {
    match geometry.kind {
        ArrayKind::UniformLinear => ula_response(geometry.count, geometry.spacing, azimuth_rad),
        ArrayKind::UniformPlanar {
            horizontal,
            vertical,
        } => ula_response(horizontal, geometry.spacing, azimuth_rad)
            .kron(&ula_response(vertical, geometry.spacing, elevation_rad)),
    }
}

fn ula_response(n: usize, spacing: f64, angle: f64) -> ComplexVector {
    let amp = 1.0 / (n as f64).sqrt();
    let step = TAU * spacing * angle.sin();
    ComplexVector::from_vec((0..n).map(|k| C64::from_polar(amp, step * k as f64)).collect())
}

/// One propagation path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub gain: C64,
    pub arrival_azimuth: f64,
    pub arrival_elevation: f64,
    pub departure_azimuth: f64,
    pub departure_elevation: f64,
}

/// Draws the `N_cl · N_ray` paths of one link, cluster by cluster.
pub fn draw_rays(params: &ChannelParams, rng: &mut RandomStream) -> Vec<Ray> {
    // Laplacian scale b gives standard deviation b·√2.
    let scale = params.angular_spread_deg.to_radians() / 2f64.sqrt();
    let mut rays = Vec::with_capacity(params.n_clusters * params.n_rays);
    for _ in 0..params.n_clusters {
        let aoa_az = rng.random_range(0.0..TAU);
        let aoa_el = rng.random_range(-PI / 2.0..=PI / 2.0);
        let aod_az = rng.random_range(0.0..TAU);
        let aod_el = rng.random_range(-PI / 2.0..=PI / 2.0);
        for _ in 0..params.n_rays {
            let gain = complex_gaussian(rng);
            rays.push(Ray {
                gain,
                arrival_azimuth: aoa_az + laplacian(rng, scale),
                arrival_elevation: aoa_el + laplacian(rng, scale),
                departure_azimuth: aod_az + laplacian(rng, scale),
                departure_elevation: aod_el + laplacian(rng, scale),
            });
        }
    }
    rays
}

fn laplacian(rng: &mut RandomStream, scale: f64) -> f64 {
    // Inverse CDF; u in (-1/2, 1/2).
    let u: f64 = rng.random_range(-0.5..0.5);
    -scale * u.signum() * (1.0 - 2.0 * u.abs()).ln()
}

/// Sums the given paths into an `N_R × N_T` channel matrix.
pub fn compose_channel(params: &ChannelParams, rays: &[Ray]) -> ComplexMatrix {
    let n_rx = params.rx_geometry.count;
    let n_tx = params.tx_geometry.count;
    let paths = (params.n_clusters * params.n_rays) as f64;
    let norm = match params.normalization {
        Normalization::ArrayGain => ((n_rx * n_tx) as f64 / paths).sqrt(),
        Normalization::UnitPower => paths.recip().sqrt(),
    };
    let mut h = ComplexMatrix::zeros(n_rx, n_tx);
    for ray in rays {
        let a_r = steering_vector(&params.rx_geometry, ray.arrival_azimuth, ray.arrival_elevation);
        let a_t = steering_vector(&params.tx_geometry, ray.departure_azimuth, ray.departure_elevation);
        for i in 0..n_rx {
            let left = ray.gain * a_r[i] * norm;
            for j in 0..n_tx {
                h[(i, j)] += left * a_t[j].conj();
            }
        }
    }
    h
}

pub fn generate_channel(params: &ChannelParams, rng: &mut RandomStream) -> ComplexMatrix {
    let rays = draw_rays(params, rng);
    compose_channel(params, &rays)
}

/// Draws every link of a scenario: users first, then eavesdroppers, then jammer links.
pub fn generate_channel_set(scenario: &ScenarioConfig, rng: &mut RandomStream) -> ChannelSet {
    let model = &scenario.channel;
    let user = model.params(scenario.n_r, scenario.n_t);
    let eve = model.params(scenario.n_e, scenario.n_t);
    let jam = model.params(scenario.n_r, scenario.n_j);
    let bs_to_user = (0..scenario.users).map(|_| generate_channel(&user, rng)).collect();
    let bs_to_eve = (0..scenario.eves).map(|_| generate_channel(&eve, rng)).collect();
    let jammer_to_user = (0..scenario.users).map(|_| generate_channel(&jam, rng)).collect();
    ChannelSet {
        bs_to_user,
        bs_to_eve,
        jammer_to_user,
    }
}

fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
