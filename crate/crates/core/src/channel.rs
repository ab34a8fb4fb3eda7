//! Channel generation and effective-channel evaluation.
//!
//! Channels are drawn i.i.d. Rayleigh: every coefficient is circularly
//! symmetric complex Gaussian with variance equal to the link path loss
//! `gamma_0 * (1/d)^alpha`. Generation is seeded and portable: the RNG is
//! ChaCha8 (a counter-based stream generator) and Gaussians come from
//! Box-Muller, so a given seed produces the same realization on every
//! platform.
//!
//! The distributed-deployment channels are tied to the centralized draw by
//! the twin-channel identification: the centralized surface-to-AP vector is
//! the concatenation of the two distributed user-to-surface vectors, and
//! each centralized user-to-surface vector contains the corresponding
//! distributed surface-to-AP vector on its sub-surface block.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Tolerance on `||phi| - 1|` when phases are supplied as complex numbers.
pub const UNIT_MODULUS_TOL: f64 = 1e-9;

/// Element counts: the centralized surface has `m` elements, the two
/// distributed surfaces have `m1` and `m2` with `m1 + m2 = m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sizes {
    pub m: usize,
    pub m1: usize,
    pub m2: usize,
}

impl Sizes {
    pub fn new(m: usize, m1: usize, m2: usize) -> Result<Self> {
        if m1 + m2 != m {
            return Err(Error::Config("element split must satisfy m1 + m2 = m"));
        }
        if m > 0 && (m1 == 0 || m2 == 0) {
            return Err(Error::Config("both sub-surfaces need at least one element"));
        }
        Ok(Self { m, m1, m2 })
    }

    /// The no-surface configuration (direct links only).
    pub const EMPTY: Sizes = Sizes { m: 0, m1: 0, m2: 0 };
}

/// Index of one of the two users.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum User {
    One,
    Two,
}

impl User {
    pub const BOTH: [User; 2] = [User::One, User::Two];

    /// The other user.
    pub fn other(self) -> User {
        match self {
            User::One => User::Two,
            User::Two => User::One,
        }
    }

    pub fn index(self) -> usize {
        match self {
            User::One => 0,
            User::Two => 1,
        }
    }
}

/// All complex channel coefficients for one fading draw.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// Direct user-to-AP channels.
    pub direct: [Complex64; 2],
    /// Distributed deployment: user `k` to its serving surface (length `m_k`).
    pub dist_user_to_irs: [Vec<Complex64>; 2],
    /// Distributed deployment: serving surface of user `k` to the AP.
    pub dist_irs_to_ap: [Vec<Complex64>; 2],
    /// Centralized deployment: user `k` to the surface (length `m`).
    pub cent_user_to_irs: [Vec<Complex64>; 2],
    /// Centralized deployment: surface to the AP (length `m`).
    pub cent_irs_to_ap: Vec<Complex64>,
    pub sizes: Sizes,
}

impl ChannelRealization {
    /// Checks that all vector lengths match the declared sizes.
    pub fn validate(&self) -> Result<()> {
        let Sizes { m, m1, m2 } = self.sizes;
        let lens_ok = self.dist_user_to_irs[0].len() == m1
            && self.dist_user_to_irs[1].len() == m2
            && self.dist_irs_to_ap[0].len() == m1
            && self.dist_irs_to_ap[1].len() == m2
            && self.cent_user_to_irs[0].len() == m
            && self.cent_user_to_irs[1].len() == m
            && self.cent_irs_to_ap.len() == m;
        if lens_ok {
            Ok(())
        } else {
            Err(Error::Config("channel vector lengths do not match sizes"))
        }
    }

    /// A realization with direct links forced to zero (used by the
    /// twin-channel containment results, which assume negligible direct
    /// channels).
    pub fn with_zero_direct(mut self) -> Self {
        self.direct = [Complex64::ZERO, Complex64::ZERO];
        self
    }
}

/// Geometry and path-loss model for one scenario, following the twin-distance
/// layout: AP at `(0, 0, 10)`, users at `(+-d_k, 0, 1)`, centralized surface
/// at `(0, 0, 9)`, distributed surfaces at `(+-d_k, 0, 2)` (meters).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryConfig {
    pub ap_position: [f64; 3],
    pub user_positions: [[f64; 3]; 2],
    pub cent_irs_position: [f64; 3],
    pub dist_irs_positions: [[f64; 3]; 2],
    /// Horizontal AP-user distances in meters.
    pub horizontal_distances: [f64; 2],
    /// Path-loss at 1 m, linear.
    pub gamma0: f64,
    /// Path-loss exponent of the direct user-AP links.
    pub exponent_direct: f64,
    /// Path-loss exponent of all reflected links.
    pub exponent_reflected: f64,
}

impl GeometryConfig {
    /// Standard layout from the horizontal user distances; `gamma0` is
    /// linear (e.g. `10^(-30/10)`).
    pub fn from_distances(
        d1: f64,
        d2: f64,
        gamma0: f64,
        exponent_direct: f64,
        exponent_reflected: f64,
    ) -> Result<Self> {
        if !(d1 > 0.0 && d2 > 0.0) {
            return Err(Error::Config("horizontal distances must be positive"));
        }
        if gamma0 < 0.0 || exponent_direct <= 0.0 || exponent_reflected <= 0.0 {
            return Err(Error::Config("path-loss parameters must be positive"));
        }
        Ok(Self {
            ap_position: [0.0, 0.0, 10.0],
            user_positions: [[d1, 0.0, 1.0], [-d2, 0.0, 1.0]],
            cent_irs_position: [0.0, 0.0, 9.0],
            dist_irs_positions: [[d1, 0.0, 2.0], [-d2, 0.0, 2.0]],
            horizontal_distances: [d1, d2],
            gamma0,
            exponent_direct,
            exponent_reflected,
        })
    }

    fn link(&self, a: [f64; 3], b: [f64; 3], exponent: f64) -> Result<f64> {
        path_loss(distance(a, b), exponent, self.gamma0)
    }

    /// Path loss of the direct user-AP link.
    pub fn direct_loss(&self, user: User) -> Result<f64> {
        self.link(
            self.user_positions[user.index()],
            self.ap_position,
            self.exponent_direct,
        )
    }

    /// Path loss from a user to the centralized surface.
    pub fn cent_user_loss(&self, user: User) -> Result<f64> {
        self.link(
            self.user_positions[user.index()],
            self.cent_irs_position,
            self.exponent_reflected,
        )
    }

    /// Path loss from the centralized surface to the AP.
    pub fn cent_ap_loss(&self) -> Result<f64> {
        self.link(
            self.cent_irs_position,
            self.ap_position,
            self.exponent_reflected,
        )
    }
}

fn distance(a: [f64; 3], b: [f64; 3]) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    libm::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2])
}

/// Per-user uplink power caps, downlink sum-power cap, and noise power
/// (all linear). Exactly one of the two power descriptions is meaningful
/// per direction of use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerConfig {
    pub p1: f64,
    pub p2: f64,
    pub noise: f64,
}

impl PowerConfig {
    pub fn new(p1: f64, p2: f64, noise: f64) -> Result<Self> {
        if p1 < 0.0 || p2 < 0.0 || noise <= 0.0 {
            return Err(Error::Config(
                "powers must be nonnegative and noise strictly positive",
            ));
        }
        Ok(Self { p1, p2, noise })
    }

    pub fn power(&self, user: User) -> f64 {
        match user {
            User::One => self.p1,
            User::Two => self.p2,
        }
    }
}

/// Distance-power path loss `gamma_0 * (1/d)^exponent`.
pub fn path_loss(distance_m: f64, exponent: f64, gamma0: f64) -> Result<f64> {
    if !(distance_m > 0.0) {
        return Err(Error::Domain("path loss requires a positive distance"));
    }
    Ok(gamma0 * libm::pow(1.0 / distance_m, exponent))
}

/// Unit-modulus phase-shift configuration for one or two surfaces. Phases
/// are stored as angles, so the unit-modulus constraint holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum ReflectionConfig {
    /// Two angle vectors of lengths `m1`, `m2`.
    Distributed([Vec<f64>; 2]),
    /// One angle vector of length `m`.
    Centralized(Vec<f64>),
}

impl ReflectionConfig {
    pub fn centralized(angles: Vec<f64>) -> Self {
        ReflectionConfig::Centralized(angles)
    }

    pub fn centralized_angles(&self) -> Result<&[f64]> {
        match self {
            ReflectionConfig::Centralized(a) => Ok(a),
            _ => Err(Error::Validation("expected a centralized configuration")),
        }
    }

    pub fn distributed_angles(&self, user: User) -> Result<&[f64]> {
        match self {
            ReflectionConfig::Distributed(a) => Ok(&a[user.index()]),
            _ => Err(Error::Validation("expected a distributed configuration")),
        }
    }
}

/// Turns complex reflection coefficients into stored angles after checking
/// unit modulus within [`UNIT_MODULUS_TOL`].
pub fn angles_from_coefficients(coeffs: &[Complex64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        if (c.norm() - 1.0).abs() > UNIT_MODULUS_TOL {
            return Err(Error::Validation("reflection coefficient is not unit-modulus"));
        }
        out.push(c.arg());
    }
    Ok(out)
}

fn phasor(angle: f64) -> Complex64 {
    Complex64::new(libm::cos(angle), libm::sin(angle))
}

/// Effective user-to-AP channel under distributed deployment:
/// direct term plus the serving surface's reflected sum.
pub fn effective_channel_distributed(
    ch: &ChannelRealization,
    phases: &ReflectionConfig,
    user: User,
) -> Result<Complex64> {
    let angles = phases.distributed_angles(user)?;
    let k = user.index();
    if angles.len() != ch.dist_user_to_irs[k].len() {
        return Err(Error::Config("phase vector length does not match surface size"));
    }
    let mut sum = ch.direct[k];
    for ((g, h), &angle) in ch.dist_irs_to_ap[k]
        .iter()
        .zip(&ch.dist_user_to_irs[k])
        .zip(angles)
    {
        sum += g * phasor(angle) * h;
    }
    Ok(sum)
}

/// Effective user-to-AP channel under centralized deployment.
pub fn effective_channel_centralized(
    ch: &ChannelRealization,
    phases: &ReflectionConfig,
    user: User,
) -> Result<Complex64> {
    let angles = phases.centralized_angles()?;
    effective_channel_centralized_from_angles(ch, angles, user)
}

/// Same as [`effective_channel_centralized`] but on a bare angle slice
/// (the optimizers keep plain angle vectors).
pub fn effective_channel_centralized_from_angles(
    ch: &ChannelRealization,
    angles: &[f64],
    user: User,
) -> Result<Complex64> {
    let k = user.index();
    if angles.len() != ch.cent_irs_to_ap.len() {
        return Err(Error::Config("phase vector length does not match surface size"));
    }
    let mut sum = ch.direct[k];
    for ((g, h), &angle) in ch
        .cent_irs_to_ap
        .iter()
        .zip(&ch.cent_user_to_irs[k])
        .zip(angles)
    {
        sum += g * phasor(angle) * h;
    }
    Ok(sum)
}

/// Builds the distributed-deployment channels from a centralized draw under
/// the twin identification: `h_k^d` are the two blocks of `g^c`, and
/// `g_k^d` are the matching blocks of `h_k^c`.
pub fn build_twin_channels(
    cent_user_to_irs: &[Vec<Complex64>; 2],
    cent_irs_to_ap: &[Complex64],
    sizes: Sizes,
) -> Result<([Vec<Complex64>; 2], [Vec<Complex64>; 2])> {
    let Sizes { m, m1, m2 } = sizes;
    if cent_irs_to_ap.len() != m
        || cent_user_to_irs[0].len() != m
        || cent_user_to_irs[1].len() != m
    {
        return Err(Error::Config("centralized vectors do not match sizes"));
    }
    let user_to_irs = [
        cent_irs_to_ap[..m1].to_vec(),
        cent_irs_to_ap[m1..].to_vec(),
    ];
    let irs_to_ap = [
        cent_user_to_irs[0][..m1].to_vec(),
        cent_user_to_irs[1][m1..].to_vec(),
    ];
    debug_assert_eq!(irs_to_ap[1].len(), m2);
    Ok((user_to_irs, irs_to_ap))
}

/// Draws one Rayleigh-fading realization. Deterministic given the seed; the
/// draw order is fixed as `h_bar_1, h_bar_2, h_1^c, h_2^c, g^c` with one
/// Box-Muller pair (re, im) per coefficient.
pub fn sample_rayleigh_realization(
    geometry: &GeometryConfig,
    sizes: Sizes,
    seed: u64,
) -> Result<ChannelRealization> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let direct = [
        draw_cscg(&mut rng, geometry.direct_loss(User::One)?),
        draw_cscg(&mut rng, geometry.direct_loss(User::Two)?),
    ];
    let mut cent_user_to_irs: [Vec<Complex64>; 2] = [vec![], vec![]];
    for user in User::BOTH {
        let var = geometry.cent_user_loss(user)?;
        cent_user_to_irs[user.index()] =
            (0..sizes.m).map(|_| draw_cscg(&mut rng, var)).collect();
    }
    let g_var = geometry.cent_ap_loss()?;
    let cent_irs_to_ap: Vec<Complex64> =
        (0..sizes.m).map(|_| draw_cscg(&mut rng, g_var)).collect();

    let (dist_user_to_irs, dist_irs_to_ap) = if sizes.m > 0 {
        build_twin_channels(&cent_user_to_irs, &cent_irs_to_ap, sizes)?
    } else {
        ([vec![], vec![]], [vec![], vec![]])
    };

    let ch = ChannelRealization {
        direct,
        dist_user_to_irs,
        dist_irs_to_ap,
        cent_user_to_irs,
        cent_irs_to_ap,
        sizes,
    };
    ch.validate()?;
    Ok(ch)
}

/// One CSCG draw with the given variance, via Box-Muller.
fn draw_cscg<R: Rng>(rng: &mut R, variance: f64) -> Complex64 {
    // u in (0, 1] so the log is finite; v in [0, 1).
    let u: f64 = 1.0 - rng.random::<f64>();
    let v: f64 = rng.random();
    let radius = libm::sqrt(-libm::log(u));
    let angle = 2.0 * core::f64::consts::PI * v;
    // Each of re and im has variance `variance / 2`.
    let scale = libm::sqrt(variance);
    Complex64::new(
        scale * radius * libm::cos(angle),
        scale * radius * libm::sin(angle),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometry() -> GeometryConfig {
        GeometryConfig::from_distances(500.0, 500.0, 1e-3, 3.5, 3.0).unwrap()
    }

    #[test]
    fn path_loss_matches_model() {
        assert!((path_loss(1.0, 3.0, 1e-3).unwrap() - 1e-3).abs() < 1e-18);
        let g0 = libm::pow(10.0, -30.0 / 10.0);
        assert!((path_loss(10.0, 3.0, g0).unwrap() - 1e-6).abs() < 1e-18);
        assert!((path_loss(2.0, 2.0, 1.0).unwrap() - 0.25).abs() < 1e-15);
        assert!(path_loss(0.0, 3.0, 1.0).is_err());
        assert!(path_loss(-1.0, 3.0, 1.0).is_err());
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        let sizes = Sizes::new(6, 3, 3).unwrap();
        let a = sample_rayleigh_realization(&geometry(), sizes, 42).unwrap();
        let b = sample_rayleigh_realization(&geometry(), sizes, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_rayleigh_realization(&geometry(), sizes, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn zero_reference_loss_gives_zero_channels() {
        let g = GeometryConfig::from_distances(500.0, 500.0, 0.0, 3.5, 3.0).unwrap();
        let sizes = Sizes::new(4, 2, 2).unwrap();
        let ch = sample_rayleigh_realization(&g, sizes, 7).unwrap();
        assert_eq!(ch.direct[0], Complex64::ZERO);
        assert!(ch.cent_irs_to_ap.iter().all(|c| *c == Complex64::ZERO));
        assert!(ch.dist_user_to_irs[0].iter().all(|c| *c == Complex64::ZERO));
    }

    #[test]
    fn twin_mapping_small_case() {
        let a = Complex64::new(1.0, 0.0);
        let b = Complex64::new(0.0, 1.0);
        let c = Complex64::new(2.0, 0.0);
        let d = Complex64::new(0.0, 2.0);
        let e = Complex64::new(3.0, 0.0);
        let f = Complex64::new(0.0, 3.0);
        let sizes = Sizes::new(2, 1, 1).unwrap();
        let cent_user = [vec![c, d], vec![e, f]];
        let g_c = vec![a, b];
        let (h_d, g_d) = build_twin_channels(&cent_user, &g_c, sizes).unwrap();
        assert_eq!(h_d[0], vec![a]);
        assert_eq!(h_d[1], vec![b]);
        assert_eq!(g_d[0], vec![c]);
        assert_eq!(g_d[1], vec![f]);
    }

    #[test]
    fn twin_mapping_round_trip() {
        let sizes = Sizes::new(8, 3, 5).unwrap();
        let ch = sample_rayleigh_realization(&geometry(), sizes, 11).unwrap();
        let mut rebuilt = ch.dist_user_to_irs[0].clone();
        rebuilt.extend_from_slice(&ch.dist_user_to_irs[1]);
        assert_eq!(rebuilt, ch.cent_irs_to_ap);
        assert_eq!(&ch.dist_irs_to_ap[0][..], &ch.cent_user_to_irs[0][..3]);
        assert_eq!(&ch.dist_irs_to_ap[1][..], &ch.cent_user_to_irs[1][3..]);
    }

    #[test]
    fn twin_mapping_rejects_bad_lengths() {
        let sizes = Sizes::new(3, 1, 2).unwrap();
        let cent_user = [vec![Complex64::ZERO; 2], vec![Complex64::ZERO; 3]];
        let g_c = vec![Complex64::ZERO; 3];
        assert!(build_twin_channels(&cent_user, &g_c, sizes).is_err());
    }

    #[test]
    fn effective_channel_phase_cancellation() {
        let sizes = Sizes::new(2, 1, 1).unwrap();
        let gh = Complex64::from_polar(0.5, core::f64::consts::FRAC_PI_3);
        let ch = ChannelRealization {
            direct: [Complex64::ZERO, Complex64::ZERO],
            dist_user_to_irs: [vec![gh], vec![Complex64::ZERO]],
            dist_irs_to_ap: [vec![Complex64::new(1.0, 0.0)], vec![Complex64::ZERO]],
            cent_user_to_irs: [vec![Complex64::ZERO; 2], vec![Complex64::ZERO; 2]],
            cent_irs_to_ap: vec![Complex64::ZERO; 2],
            sizes,
        };
        let phases = ReflectionConfig::Distributed([
            vec![-core::f64::consts::FRAC_PI_3],
            vec![0.0],
        ]);
        let h = effective_channel_distributed(&ch, &phases, User::One).unwrap();
        assert!((h - Complex64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn empirical_second_moment_matches_path_loss() {
        // Monte-Carlo moment check on a single coefficient: mean |h|^2 over
        // 1e5 draws must be within 2% of the link path loss.
        let g = geometry();
        let var = g.cent_ap_loss().unwrap();
        let sizes = Sizes::new(2, 1, 1).unwrap();
        let n = 100_000;
        let mut acc = 0.0;
        for seed in 0..n {
            let ch = sample_rayleigh_realization(&g, sizes, seed).unwrap();
            acc += ch.cent_irs_to_ap[0].norm_sqr();
        }
        let mean = acc / n as f64;
        assert!(
            (mean - var).abs() / var < 0.02,
            "mean {mean:e} vs path loss {var:e}"
        );
    }

    #[test]
    fn non_unit_modulus_coefficients_rejected() {
        let coeffs = vec![Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.5)];
        assert!(angles_from_coefficients(&coeffs).is_err());
        let ok = vec![Complex64::from_polar(1.0, 1.234)];
        let angles = angles_from_coefficients(&ok).unwrap();
        assert!((angles[0] - 1.234).abs() < 1e-12);
    }
}
