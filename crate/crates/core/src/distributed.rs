//! Closed-form regions for the two-surface distributed deployment in the
//! uplink MAC.
//!
//! With one surface per user, each user's effective channel depends only on
//! its own surface, so a single phase configuration (every reflected term
//! aligned with the direct term) simultaneously maximizes both effective
//! channel gains. The capacity region is then a single pentagon, and the
//! TDMA/FDMA regions follow in closed form from the same gains.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::channel::{ChannelRealization, PowerConfig, ReflectionConfig, User};
use crate::region::{convex_hull, pentagon_vertices, PentagonRegion, RatePair, RatePolygon};
use crate::Result;

/// Which deployment a quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Deployment {
    Distributed,
    Centralized,
}

/// Per-user upper bounds on the effective channel amplitude,
/// `|h_bar_k| + sum |g| |h|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainBounds {
    pub user1: f64,
    pub user2: f64,
    pub deployment: Deployment,
}

impl GainBounds {
    pub fn gain(&self, user: User) -> f64 {
        match user {
            User::One => self.user1,
            User::Two => self.user2,
        }
    }
}

/// `log2(1 + snr)`.
pub fn rate(snr: f64) -> f64 {
    libm::log2(1.0 + snr)
}

fn user_gain_terms<'a>(
    ch: &'a ChannelRealization,
    deployment: Deployment,
    user: User,
) -> (Complex64, &'a [Complex64], &'a [Complex64]) {
    let k = user.index();
    match deployment {
        Deployment::Distributed => (
            ch.direct[k],
            &ch.dist_irs_to_ap[k],
            &ch.dist_user_to_irs[k],
        ),
        Deployment::Centralized => (ch.direct[k], &ch.cent_irs_to_ap, &ch.cent_user_to_irs[k]),
    }
}

/// Triangle-inequality gain bounds for the named deployment.
pub fn gain_upper_bounds(ch: &ChannelRealization, deployment: Deployment) -> GainBounds {
    let mut gains = [0.0; 2];
    for user in User::BOTH {
        let (direct, g, h) = user_gain_terms(ch, deployment, user);
        gains[user.index()] = direct.norm()
            + g.iter().zip(h).map(|(g, h)| g.norm() * h.norm()).sum::<f64>();
    }
    GainBounds {
        user1: gains[0],
        user2: gains[1],
        deployment,
    }
}

/// Reference phase of a possibly-zero complex number: `arg` with the
/// convention `arg(0) = 0`, so alignment stays well-defined when the direct
/// link vanishes (only relative phases matter).
pub(crate) fn ref_arg(z: Complex64) -> f64 {
    if z == Complex64::ZERO {
        0.0
    } else {
        z.arg()
    }
}

/// Gain-maximizing phases for both surfaces: each reflected product rotated
/// onto the direct term's phase. Attains both gain upper bounds at once.
pub fn optimal_phases_distributed(ch: &ChannelRealization) -> ReflectionConfig {
    let mut per_surface: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
    for user in User::BOTH {
        let k = user.index();
        let target = ref_arg(ch.direct[k]);
        per_surface[k] = ch.dist_irs_to_ap[k]
            .iter()
            .zip(&ch.dist_user_to_irs[k])
            .map(|(g, h)| target - ref_arg(g * h))
            .collect();
    }
    ReflectionConfig::Distributed(per_surface)
}

/// Capacity region under distributed deployment: the pentagon from the two
/// simultaneously attainable gain bounds.
pub fn capacity_region_distributed(
    ch: &ChannelRealization,
    powers: &PowerConfig,
) -> Result<PentagonRegion> {
    let bounds = gain_upper_bounds(ch, Deployment::Distributed);
    pentagon_from_gains(&bounds, powers)
}

/// Pentagon with caps `log2(1 + P_k g_k^2 / noise)` and the matching sum cap.
pub fn pentagon_from_gains(bounds: &GainBounds, powers: &PowerConfig) -> Result<PentagonRegion> {
    let s1 = powers.p1 * bounds.user1 * bounds.user1 / powers.noise;
    let s2 = powers.p2 * bounds.user2 * bounds.user2 / powers.noise;
    PentagonRegion::new(rate(s1), rate(s2), rate(s1 + s2))
}

/// TDMA region: the triangle on the two single-user rate points.
pub fn tdma_region_distributed(
    ch: &ChannelRealization,
    powers: &PowerConfig,
) -> Result<RatePolygon> {
    let bounds = gain_upper_bounds(ch, Deployment::Distributed);
    tdma_triangle(&bounds, powers)
}

pub(crate) fn tdma_triangle(bounds: &GainBounds, powers: &PowerConfig) -> Result<RatePolygon> {
    let r1 = rate(powers.p1 * bounds.user1 * bounds.user1 / powers.noise);
    let r2 = rate(powers.p2 * bounds.user2 * bounds.user2 / powers.noise);
    convex_hull(&[RatePair::new(r1, 0.0), RatePair::new(0.0, r2)])
}

/// One FDMA boundary point at bandwidth fraction `rho` for user 1, with the
/// removable endpoint singularities evaluated analytically.
pub(crate) fn fdma_point(gain1: f64, gain2: f64, powers: &PowerConfig, rho: f64) -> RatePair {
    let s1 = powers.p1 * gain1 * gain1 / powers.noise;
    let s2 = powers.p2 * gain2 * gain2 / powers.noise;
    let r1 = if rho <= 0.0 { 0.0 } else { rho * rate(s1 / rho) };
    let r2 = if rho >= 1.0 {
        0.0
    } else {
        (1.0 - rho) * rate(s2 / (1.0 - rho))
    };
    RatePair::new(r1, r2)
}

/// FDMA region: boundary sampled at `n_samples` bandwidth splits and hulled
/// with the origin.
pub fn fdma_region_distributed(
    ch: &ChannelRealization,
    powers: &PowerConfig,
    n_samples: usize,
) -> Result<RatePolygon> {
    let bounds = gain_upper_bounds(ch, Deployment::Distributed);
    fdma_region_from_gains(bounds.user1, bounds.user2, powers, n_samples)
}

pub(crate) fn fdma_region_from_gains(
    gain1: f64,
    gain2: f64,
    powers: &PowerConfig,
    n_samples: usize,
) -> Result<RatePolygon> {
    let n = n_samples.max(2);
    let points: Vec<RatePair> = (0..n)
        .map(|i| fdma_point(gain1, gain2, powers, i as f64 / (n - 1) as f64))
        .collect();
    convex_hull(&points)
}

/// Pentagon for the direct channels only (no reflecting elements).
pub fn no_irs_region(ch: &ChannelRealization, powers: &PowerConfig) -> Result<PentagonRegion> {
    let bounds = GainBounds {
        user1: ch.direct[0].norm(),
        user2: ch.direct[1].norm(),
        deployment: Deployment::Distributed,
    };
    pentagon_from_gains(&bounds, powers)
}

/// Convenience: pentagon region as a polygon.
pub fn capacity_polygon_distributed(
    ch: &ChannelRealization,
    powers: &PowerConfig,
) -> Result<RatePolygon> {
    Ok(pentagon_vertices(&capacity_region_distributed(ch, powers)?))
}
