//! Rate-profile inner bound, per-user outer bounds, and TDMA/FDMA regions
//! for the single centralized surface in the uplink MAC.
//!
//! The Pareto boundary is traced with the rate-profile method: for each rate
//! ratio `alpha` and each SIC decoding order, maximize the sum-rate subject
//! to the per-user rate shares. Each such problem is attacked by alternating
//! optimization over the reflection coefficients, where the single-element
//! subproblem is solved globally: a bisection on the auxiliary objective
//! `beta = 2^{(1 - alpha_first) r}` with a closed-form feasibility test over
//! the intersection of two half-planes with the unit disk, followed by a
//! rotation lifting interior solutions onto the unit circle without
//! decreasing either constraint.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{
    effective_channel_centralized_from_angles, ChannelRealization, PowerConfig, ReflectionConfig,
    User,
};
use crate::distributed::{fdma_point, gain_upper_bounds, rate, ref_arg, Deployment};
use crate::region::{convex_hull, PentagonRegion, RatePair, RatePolygon};
use crate::{Error, Result};

const TAU: f64 = 2.0 * core::f64::consts::PI;

/// SIC decoding order: which user the receiver decodes first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodingOrder {
    User1First,
    User2First,
}

impl DecodingOrder {
    pub const BOTH: [DecodingOrder; 2] = [DecodingOrder::User1First, DecodingOrder::User2First];

    /// The user decoded first (its rate constraint carries the
    /// interference-coupled term).
    pub fn first(self) -> User {
        match self {
            DecodingOrder::User1First => User::One,
            DecodingOrder::User2First => User::Two,
        }
    }

    pub fn second(self) -> User {
        self.first().other()
    }
}

/// One sum-rate maximization along a fixed rate ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateProfileProblem {
    /// User 1's share of the sum-rate, in `[0, 1]`.
    pub alpha1: f64,
    pub order: DecodingOrder,
}

impl RateProfileProblem {
    pub fn new(alpha1: f64, order: DecodingOrder) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha1) {
            return Err(Error::Config("rate ratio must lie in [0, 1]"));
        }
        Ok(Self { alpha1, order })
    }

    /// Rate share of the firstly decoded user.
    pub fn alpha_first(&self) -> f64 {
        match self.order {
            DecodingOrder::User1First => self.alpha1,
            DecodingOrder::User2First => 1.0 - self.alpha1,
        }
    }
}

/// Affine expansion of one user's squared effective channel gain in a single
/// reflection coefficient `phi_m`, all others fixed:
/// `|h(phi)|^2 = 2 Re{f2 phi} + f1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineCoefficients {
    pub f1: f64,
    pub f2: Complex64,
}

/// Coefficients from the channel minus element `m`'s contribution (`rest`)
/// and the element's own product `g_m h_km`.
pub(crate) fn affine_from_rest(rest: Complex64, gh: Complex64) -> AffineCoefficients {
    AffineCoefficients {
        f1: rest.norm_sqr() + gh.norm_sqr(),
        f2: gh * rest.conj(),
    }
}

/// Affine coefficients of user `user`'s squared gain in element `m` for the
/// centralized surface, with the other angles taken from `angles`.
pub fn affine_coefficients(
    ch: &ChannelRealization,
    angles: &[f64],
    user: User,
    m: usize,
) -> Result<AffineCoefficients> {
    if angles.len() != ch.sizes.m || m >= ch.sizes.m {
        return Err(Error::Config("element index or angle count out of range"));
    }
    let k = user.index();
    let mut rest = ch.direct[k];
    for i in 0..ch.sizes.m {
        if i != m {
            rest += ch.cent_irs_to_ap[i] * phasor(angles[i]) * ch.cent_user_to_irs[k][i];
        }
    }
    Ok(affine_from_rest(
        rest,
        ch.cent_irs_to_ap[m] * ch.cent_user_to_irs[k][m],
    ))
}

fn phasor(angle: f64) -> Complex64 {
    Complex64::new(libm::cos(angle), libm::sin(angle))
}

/// Grid sizes, initialization count, and convergence thresholds for the
/// alternating optimizers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Number of rate-ratio grid points (inclusive of both endpoints).
    pub rate_ratio_grid: usize,
    /// Number of power-split grid points for the downlink regions.
    pub power_split_grid: usize,
    /// Per-element grid size used by the brute-force oracle.
    pub oracle_phase_grid: usize,
    /// Number of random phase initializations per rate-profile problem.
    pub random_inits: usize,
    /// Maximum full element sweeps per rate-profile problem.
    pub max_sweeps: usize,
    /// Stop a sweep loop once the relative objective gain over one full
    /// sweep falls below this.
    pub sweep_rel_tol: f64,
    /// Seed for the random initializations (independent of channel seeds).
    pub init_seed: u64,
    /// Bandwidth-split samples for closed-form FDMA boundaries.
    pub fdma_samples: usize,
    /// Starts kept after the screening sweep and run to full convergence.
    /// Element-wise descent has genuine local optima, so a single run from
    /// the best initialization is not enough.
    pub refine_top: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            rate_ratio_grid: 100,
            power_split_grid: 100,
            oracle_phase_grid: 360,
            random_inits: 200,
            max_sweeps: 50,
            sweep_rel_tol: 1e-7,
            init_seed: 0,
            fdma_samples: 512,
            refine_top: 10,
        }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        if self.rate_ratio_grid < 2 || self.power_split_grid < 2 || self.oracle_phase_grid < 1 {
            return Err(Error::Config("grid sizes must be at least 2 (oracle: 1)"));
        }
        if self.max_sweeps < 1 || self.fdma_samples < 2 {
            return Err(Error::Config("sweep and sample counts must be positive"));
        }
        if !(self.sweep_rel_tol > 0.0) {
            return Err(Error::Config("convergence threshold must be positive"));
        }
        if self.refine_top == 0 {
            return Err(Error::Config("at least one start must be refined"));
        }
        Ok(())
    }
}

/// Final state of one alternating-optimization run.
#[derive(Debug, Clone, PartialEq)]
pub struct AoState {
    /// Reflection angles at termination (length `M`).
    pub angles: Vec<f64>,
    /// Final objective (`beta` for the MAC sum-rate problems, `r` for the
    /// FDMA ones).
    pub objective: f64,
    /// Completed full element sweeps.
    pub sweeps: usize,
    /// Objective after initialization and after every single-element update;
    /// non-decreasing by construction.
    pub history: Vec<f64>,
}

/// Phases maximizing one user's effective channel gain on the centralized
/// surface: every reflected product rotated onto the direct term's phase.
pub fn align_phases_to_user(ch: &ChannelRealization, user: User) -> ReflectionConfig {
    let k = user.index();
    let target = ref_arg(ch.direct[k]);
    let angles = ch
        .cent_irs_to_ap
        .iter()
        .zip(&ch.cent_user_to_irs[k])
        .map(|(g, h)| target - ref_arg(g * h))
        .collect();
    ReflectionConfig::Centralized(angles)
}

// ---------------------------------------------------------------------------
// Half-plane / unit-disk geometry
// ---------------------------------------------------------------------------

/// Maximizes `Re{n2 z}` over `|z| <= 1` subject to `Re{n1 z} >= c1`.
/// Returns `(maximum, argmax)` or `None` when the constraint cuts off the
/// whole disk. The argmax lies on the unit circle whenever `n2 != 0`.
fn max_on_disk(n1: Complex64, c1: f64, n2: Complex64) -> Option<(f64, Complex64)> {
    // Re{n z} is the planar inner product of z with conj(n).
    let u1 = n1.conj();
    let u2 = n2.conj();
    let a1 = u1.norm();
    let a2 = u2.norm();
    let dot = |a: Complex64, b: Complex64| a.re * b.re + a.im * b.im;

    if a1 == 0.0 {
        if c1 > 0.0 {
            return None;
        }
        let z = if a2 > 0.0 { u2 / a2 } else { Complex64::ONE };
        return Some((a2, z));
    }
    if c1 > a1 {
        return None;
    }
    if a2 == 0.0 {
        // Any feasible point does; the constraint's own normal is feasible.
        return Some((0.0, u1 / a1));
    }
    let z_free = u2 / a2;
    if dot(u1, z_free) >= c1 {
        return Some((a2, z_free));
    }
    // Constrained optimum: one of the two chord endpoints where the
    // half-plane boundary meets the circle.
    let t = (c1 / a1).clamp(-1.0, 1.0);
    let along = u1 * (t / a1);
    let perp = Complex64::new(-u1.im, u1.re) * (libm::sqrt((1.0 - t * t).max(0.0)) / a1);
    let za = along + perp;
    let zb = along - perp;
    let (va, vb) = (dot(u2, za), dot(u2, zb));
    if va >= vb {
        Some((va, za))
    } else {
        Some((vb, zb))
    }
}

// ---------------------------------------------------------------------------
// Unit-modulus lift
// ---------------------------------------------------------------------------

/// An interior solution of the relaxed single-element subproblem together
/// with the two constraint gradients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftCase {
    /// `f2` coefficient of the firstly decoded user's constraint.
    pub f2_first: Complex64,
    /// `f2` coefficient of the other constraint.
    pub f2_second: Complex64,
    /// Relaxed solution with modulus `< 1`.
    pub interior: Complex64,
}

impl LiftCase {
    pub fn new(f2_first: Complex64, f2_second: Complex64, interior: Complex64) -> Result<Self> {
        if interior.norm() >= 1.0 {
            return Err(Error::Validation("lift input must lie strictly inside the disk"));
        }
        Ok(Self {
            f2_first,
            f2_second,
            interior,
        })
    }
}

fn wrap_tau(x: f64) -> f64 {
    let t = x % TAU;
    if t < 0.0 {
        t + TAU
    } else {
        t
    }
}

/// Rotates an interior relaxed solution onto the unit circle without
/// decreasing either constraint: returns the angle of the unit-modulus
/// replacement, chosen by sign/quadrant case analysis of the two
/// constraint terms `Re{f2 phi}`.
pub fn lift_to_unit_modulus(case: &LiftCase) -> f64 {
    let a1 = case.f2_first.norm();
    let a2 = case.f2_second.norm();
    let b = case.interior.norm();
    let lambda = ref_arg(case.interior);

    // Degenerate gradients: the matching constraint is constant in phi,
    // so align with the other one (or keep the current angle).
    if a1 == 0.0 && a2 == 0.0 {
        return lambda;
    }
    if a1 == 0.0 {
        return -case.f2_second.arg();
    }
    if a2 == 0.0 {
        return -case.f2_first.arg();
    }
    let eta1 = case.f2_first.arg();
    let eta2 = case.f2_second.arg();
    if b < 1e-12 {
        // Near the disk center both terms vanish and the angle of the
        // interior point carries no information; point between the two
        // constraint normals so both terms become nonnegative.
        let u = phasor(-eta1) + phasor(-eta2);
        return if u.norm() > 1e-9 {
            u.arg()
        } else {
            -eta1 + 0.5 * core::f64::consts::PI
        };
    }

    let th1 = wrap_tau(eta1 + lambda);
    let th2 = wrap_tau(eta2 + lambda);
    let r1 = libm::cos(th1);
    let r2 = libm::cos(th2);
    let half_pi = 0.5 * core::f64::consts::PI;
    let pi = core::f64::consts::PI;

    let delta = if r1 >= 0.0 && r2 >= 0.0 {
        0.0
    } else if r1 < 0.0 && r2 < 0.0 {
        pi
    } else {
        // Mixed signs: i is the nonnegative term, j the negative one
        // (th_j in (pi/2, 3pi/2), th_i in [0, pi/2] or [3pi/2, 2pi)).
        let (th_i, th_j) = if r1 >= 0.0 { (th1, th2) } else { (th2, th1) };
        let acap = libm::acos((b * libm::cos(th_i)).clamp(-1.0, 1.0));
        if th_i <= half_pi {
            if th_j <= pi {
                -libm::acos(b.clamp(-1.0, 1.0))
            } else if th_j - pi < th_i {
                -th_i - acap
            } else {
                -th_i + acap
            }
        } else if th_j >= pi {
            libm::acos(b.clamp(-1.0, 1.0))
        } else if th_j + pi >= th_i {
            -th_i + acap
        } else {
            -th_i - acap
        }
    };
    lambda + delta
}

// ---------------------------------------------------------------------------
// Single-element subproblem
// ---------------------------------------------------------------------------

/// Required value of `Re{f2 phi}` for the firstly decoded user at objective
/// `beta`. Infinite when the power is zero but a positive gain is needed.
fn first_requirement(f1: f64, p: f64, noise: f64, alpha_first: f64, beta: f64) -> f64 {
    let growth = libm::pow(beta, 1.0 / (1.0 - alpha_first)) - beta;
    if p > 0.0 {
        (growth * noise / p - f1) / 2.0
    } else if growth > 0.0 {
        f64::INFINITY
    } else {
        -f1 / 2.0
    }
}

fn second_requirement(f1: f64, p: f64, noise: f64, beta: f64) -> f64 {
    if p > 0.0 {
        ((beta - 1.0) * noise / p - f1) / 2.0
    } else if beta > 1.0 {
        f64::INFINITY
    } else {
        -f1 / 2.0
    }
}

/// Feasibility of objective `beta` over the relaxed disk; on success returns
/// the maximizing coefficient.
fn p3m_feasible(
    first: &AffineCoefficients,
    second: &AffineCoefficients,
    p_first: f64,
    p_second: f64,
    noise: f64,
    alpha_first: f64,
    beta: f64,
) -> Option<Complex64> {
    let c1 = first_requirement(first.f1, p_first, noise, alpha_first, beta);
    let c2 = second_requirement(second.f1, p_second, noise, beta);
    if c1.is_infinite() || c2.is_infinite() {
        return None;
    }
    let (best, z) = max_on_disk(first.f2, c1, second.f2)?;
    (best >= c2).then_some(z)
}

/// Globally solves the single-element subproblem: maximizes `beta` over one
/// reflection coefficient with the affine gain expansions fixed, then lifts
/// the maximizer to unit modulus. Never returns a smaller objective than
/// `beta_in`; on numerical infeasibility at `beta_in` the input state is
/// returned unchanged.
pub fn solve_p3m(
    first: &AffineCoefficients,
    second: &AffineCoefficients,
    p_first: f64,
    p_second: f64,
    noise: f64,
    alpha_first: f64,
    beta_in: f64,
    angle_in: f64,
) -> (f64, f64) {
    debug_assert!((0.0..1.0).contains(&alpha_first));
    let mut lo = beta_in.max(1.0);
    let a2 = second.f2.norm();
    let mut hi = if p_second > 0.0 {
        (1.0 + p_second * (second.f1 + 2.0 * a2) / noise) * (1.0 + 1e-9) + 1e-9
    } else {
        1.0
    };
    if hi <= lo {
        // The second user's constraint already pins beta at its cap.
        return match p3m_feasible(first, second, p_first, p_second, noise, alpha_first, lo) {
            Some(z) => (lo, finalize_angle(first, second, z, angle_in)),
            None => (beta_in, angle_in),
        };
    }
    if p3m_feasible(first, second, p_first, p_second, noise, alpha_first, lo).is_none() {
        return (beta_in, angle_in);
    }
    for _ in 0..120 {
        if hi - lo <= 1e-9 + 1e-12 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if p3m_feasible(first, second, p_first, p_second, noise, alpha_first, mid).is_some() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    match p3m_feasible(first, second, p_first, p_second, noise, alpha_first, lo) {
        Some(z) => (lo, finalize_angle(first, second, z, angle_in)),
        None => (beta_in, angle_in),
    }
}

/// Turns a relaxed-disk maximizer into a stored angle, lifting interior
/// points onto the circle.
fn finalize_angle(
    first: &AffineCoefficients,
    second: &AffineCoefficients,
    z: Complex64,
    angle_in: f64,
) -> f64 {
    let b = z.norm();
    if (b - 1.0).abs() <= 1e-9 {
        return z.arg();
    }
    if b >= 1.0 {
        // Tiny overshoot from round-off.
        return z.arg();
    }
    match LiftCase::new(first.f2, second.f2, z) {
        Ok(case) => lift_to_unit_modulus(&case),
        Err(_) => angle_in,
    }
}

// ---------------------------------------------------------------------------
// Alternating optimization for the MAC rate profile
// ---------------------------------------------------------------------------

/// Largest feasible `beta` for fixed effective channel gains: the exact
/// optimum of the rate-profile problem once the phases are frozen.
fn achieved_beta(
    gain_sq_first: f64,
    gain_sq_second: f64,
    p_first: f64,
    p_second: f64,
    noise: f64,
    alpha_first: f64,
) -> f64 {
    let cap_second = 1.0 + p_second * gain_sq_second / noise;
    if alpha_first <= 0.0 {
        return cap_second;
    }
    // Largest beta with beta^{1/(1-alpha)} - beta <= P1 |h1|^2 / noise;
    // the left side is increasing in beta.
    let c1 = p_first * gain_sq_first / noise;
    let q = 1.0 / (1.0 - alpha_first);
    let growth = |b: f64| libm::pow(b, q) - b;
    if growth(cap_second) <= c1 {
        return cap_second;
    }
    let (mut lo, mut hi) = (1.0, cap_second);
    for _ in 0..200 {
        if hi - lo <= 1e-12 * (1.0 + hi) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if growth(mid) <= c1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn effective_gains(ch: &ChannelRealization, angles: &[f64]) -> Result<(Complex64, Complex64)> {
    Ok((
        effective_channel_centralized_from_angles(ch, angles, User::One)?,
        effective_channel_centralized_from_angles(ch, angles, User::Two)?,
    ))
}

/// Initialization pool: random uniform angle vectors plus the deterministic
/// candidates that matter at the region's corners (per-user alignment, and
/// the twin-channel rotation when direct links vanish).
pub(crate) fn initial_candidates(ch: &ChannelRealization, settings: &SolverSettings) -> Vec<Vec<f64>> {
    let m = ch.sizes.m;
    let mut rng = ChaCha8Rng::seed_from_u64(settings.init_seed);
    let mut pool: Vec<Vec<f64>> = (0..settings.random_inits)
        .map(|_| (0..m).map(|_| rng.random::<f64>() * TAU).collect())
        .collect();
    pool.push(vec![0.0; m]);
    for user in User::BOTH {
        if let ReflectionConfig::Centralized(a) = align_phases_to_user(ch, user) {
            pool.push(a);
        }
    }
    if ch.direct[0] == Complex64::ZERO && ch.direct[1] == Complex64::ZERO && m > 0 {
        if let Ok((config, _, _)) = crate::bc::twin_lift_construction(ch) {
            if let ReflectionConfig::Centralized(a) = config {
                pool.push(a);
            }
        }
    }
    pool
}

/// Runs the alternating optimizer for one rate-profile problem and returns
/// the achieved sum-rate together with the final optimizer state.
pub fn ao_sum_rate(
    ch: &ChannelRealization,
    powers: &PowerConfig,
    profile: &RateProfileProblem,
    settings: &SolverSettings,
) -> Result<(f64, AoState)> {
    settings.validate()?;
    ch.validate()?;
    let alpha = profile.alpha_first();
    let p_first = powers.power(profile.order.first());
    let p_second = powers.power(profile.order.second());

    if alpha >= 1.0 {
        // The whole sum-rate goes to the firstly decoded user; the
        // gain-maximizing alignment is optimal in closed form.
        let config = align_phases_to_user(ch, profile.order.first());
        let angles = config.centralized_angles()?.to_vec();
        let h = effective_channel_centralized_from_angles(ch, &angles, profile.order.first())?;
        let r = rate(p_first * h.norm_sqr() / powers.noise);
        return Ok((
            r,
            AoState {
                angles,
                objective: 1.0,
                sweeps: 0,
                history: vec![1.0],
            },
        ));
    }

    let m = ch.sizes.m;
    let beta_of = |angles: &[f64]| -> Result<f64> {
        let (h1, h2) = effective_gains(ch, angles)?;
        let (gf, gs) = match profile.order.first() {
            User::One => (h1.norm_sqr(), h2.norm_sqr()),
            User::Two => (h2.norm_sqr(), h1.norm_sqr()),
        };
        Ok(achieved_beta(gf, gs, p_first, p_second, powers.noise, alpha))
    };

    // One full element sweep; updates angles and beta in place, optionally
    // recording the per-update objective history.
    let sweep_once = |angles: &mut [f64], beta: &mut f64, history: Option<&mut Vec<f64>>| -> Result<()> {
        let (mut h1, mut h2) = effective_gains(ch, angles)?;
        let mut history = history;
        for i in 0..m {
            let gh1 = ch.cent_irs_to_ap[i] * ch.cent_user_to_irs[0][i];
            let gh2 = ch.cent_irs_to_ap[i] * ch.cent_user_to_irs[1][i];
            let phi = phasor(angles[i]);
            let rest1 = h1 - gh1 * phi;
            let rest2 = h2 - gh2 * phi;
            let c1 = affine_from_rest(rest1, gh1);
            let c2 = affine_from_rest(rest2, gh2);
            let (cf, cs) = match profile.order.first() {
                User::One => (&c1, &c2),
                User::Two => (&c2, &c1),
            };
            let (new_beta, new_angle) =
                solve_p3m(cf, cs, p_first, p_second, powers.noise, alpha, *beta, angles[i]);
            debug_assert!(new_beta >= *beta - 1e-12);
            angles[i] = new_angle;
            *beta = new_beta;
            let phi = phasor(new_angle);
            h1 = rest1 + gh1 * phi;
            h2 = rest2 + gh2 * phi;
            if let Some(h) = history.as_deref_mut() {
                h.push(*beta);
            }
        }
        Ok(())
    };

    let mut best: Option<(f64, Vec<f64>, Vec<f64>, usize)> = None;
    if m == 0 {
        let beta = beta_of(&[])?;
        best = Some((beta, Vec::new(), vec![beta], 0));
    } else {
        // Screening: one sweep from every start pulls it into its basin.
        let mut screened: Vec<(f64, Vec<f64>)> = Vec::new();
        for cand in initial_candidates(ch, settings) {
            let mut angles = cand;
            let mut beta = beta_of(&angles)?;
            sweep_once(&mut angles, &mut beta, None)?;
            screened.push((beta, angles));
        }
        screened.sort_by(|a, b| b.0.total_cmp(&a.0));
        screened.truncate(settings.refine_top);
        // Refinement: run the survivors to convergence, keep the best.
        for (beta0, angles0) in screened {
            let mut angles = angles0;
            let mut beta = beta0;
            let mut history = vec![beta];
            let mut sweeps = 1;
            for _ in 1..settings.max_sweeps {
                let beta_before = beta;
                sweep_once(&mut angles, &mut beta, Some(&mut history))?;
                sweeps += 1;
                if beta - beta_before < settings.sweep_rel_tol * (1.0 + beta_before) {
                    break;
                }
            }
            if best.as_ref().is_none_or(|(b, ..)| beta > *b) {
                best = Some((beta, angles, history, sweeps));
            }
        }
    }
    let (beta, angles, history, sweeps) = best.expect("at least one start is always refined");

    let r = libm::log2(beta.max(1.0)) / (1.0 - alpha);
    Ok((
        r,
        AoState {
            angles,
            objective: beta,
            sweeps,
            history,
        },
    ))
}

/// Profile points and optimizer traces backing the inner bound.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerBoundTrace {
    pub points: Vec<RatePair>,
    pub states: Vec<AoState>,
}

/// Rate-profile inner bound of the centralized capacity region: sweep the
/// rate ratio over a uniform grid, keep the better decoding order at each
/// ratio, and hull the resulting rate pairs with the origin.
pub fn inner_bound_region(
    ch: &ChannelRealization,
    powers: &PowerConfig,
    settings: &SolverSettings,
) -> Result<RatePolygon> {
    Ok(inner_bound_with_trace(ch, powers, settings)?.0)
}

pub fn inner_bound_with_trace(
    ch: &ChannelRealization,
    powers: &PowerConfig,
    settings: &SolverSettings,
) -> Result<(RatePolygon, InnerBoundTrace)> {
    settings.validate()?;
    let l = settings.rate_ratio_grid;
    let mut points = Vec::with_capacity(l);
    let mut states = Vec::with_capacity(2 * l);
    for i in 0..l {
        let alpha1 = i as f64 / (l - 1) as f64;
        let mut best = 0.0f64;
        for order in DecodingOrder::BOTH {
            let profile = RateProfileProblem::new(alpha1, order)?;
            let (r, state) = ao_sum_rate(ch, powers, &profile, settings)?;
            best = best.max(r);
            states.push(state);
        }
        points.push(RatePair::new(alpha1 * best, (1.0 - alpha1) * best));
    }
    let region = convex_hull(&points)?;
    Ok((region, InnerBoundTrace { points, states }))
}

/// Outer-bound pentagon: per-user triangle-inequality caps and an externally
/// supplied sum-rate cap (normally the semidefinite-relaxation bound). The
/// sum cap is clamped into the valid pentagon range.
pub fn outer_bound_region(
    ch: &ChannelRealization,
    powers: &PowerConfig,
    sum_rate_cap: f64,
) -> Result<PentagonRegion> {
    let bounds = gain_upper_bounds(ch, Deployment::Centralized);
    let r1 = rate(powers.p1 * bounds.user1 * bounds.user1 / powers.noise);
    let r2 = rate(powers.p2 * bounds.user2 * bounds.user2 / powers.noise);
    let sum = sum_rate_cap.clamp(r1.max(r2), r1 + r2);
    PentagonRegion::new(r1, r2, sum)
}

/// TDMA region: triangle on the two per-slot gain-maximized single-user
/// rates (the surface re-aligns to the active user each slot).
pub fn tdma_region_centralized(
    ch: &ChannelRealization,
    powers: &PowerConfig,
) -> Result<RatePolygon> {
    let bounds = gain_upper_bounds(ch, Deployment::Centralized);
    let r1 = rate(powers.p1 * bounds.user1 * bounds.user1 / powers.noise);
    let r2 = rate(powers.p2 * bounds.user2 * bounds.user2 / powers.noise);
    convex_hull(&[RatePair::new(r1, 0.0), RatePair::new(0.0, r2)])
}

// ---------------------------------------------------------------------------
// FDMA inner bound
// ---------------------------------------------------------------------------

/// Largest rate along ratio `alpha1` for fixed per-user SNR caps
/// `s_k = P_k |h_k|^2 / noise`, maximized over the bandwidth split.
/// Returns `(r, rho)`.
pub(crate) fn fdma_rate_fixed_gains(s1: f64, s2: f64, alpha1: f64) -> (f64, f64) {
    let band1 = |rho: f64| {
        if rho <= 0.0 {
            0.0
        } else {
            rho * libm::log2(1.0 + s1 / rho)
        }
    };
    let band2 = |rho: f64| {
        if rho >= 1.0 {
            0.0
        } else {
            (1.0 - rho) * libm::log2(1.0 + s2 / (1.0 - rho))
        }
    };
    if alpha1 <= 0.0 {
        return (band2(0.0), 0.0);
    }
    if alpha1 >= 1.0 {
        return (band1(1.0), 1.0);
    }
    // band1 grows and band2 shrinks in rho, so the min of the two scaled
    // constraints is maximized where they cross.
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if (1.0 - alpha1) * band1(mid) >= alpha1 * band2(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let rho = 0.5 * (lo + hi);
    let r = (band1(rho) / alpha1).min(band2(rho) / (1.0 - alpha1));
    (r.max(0.0), rho)
}

/// Required `Re{f2 phi}` for one FDMA user at rate `r`, bandwidth share
/// `share`, rate share `alpha`.
fn fdma_requirement(f1: f64, p: f64, noise: f64, alpha: f64, share: f64, r: f64) -> f64 {
    if alpha <= 0.0 || r <= 0.0 {
        return -f1 / 2.0;
    }
    if share <= 0.0 || p <= 0.0 {
        return f64::INFINITY;
    }
    let need = (libm::exp2(alpha * r / share) - 1.0) * share * noise / p;
    (need - f1) / 2.0
}

fn p5m_feasible(
    c1: &AffineCoefficients,
    c2: &AffineCoefficients,
    powers: &PowerConfig,
    alpha1: f64,
    rho: f64,
    r: f64,
) -> Option<Complex64> {
    let q1 = fdma_requirement(c1.f1, powers.p1, powers.noise, alpha1, rho, r);
    let q2 = fdma_requirement(c2.f1, powers.p2, powers.noise, 1.0 - alpha1, 1.0 - rho, r);
    if q1.is_infinite() || q2.is_infinite() {
        return None;
    }
    let (best, z) = max_on_disk(c1.f2, q1, c2.f2)?;
    (best >= q2).then_some(z)
}

/// Single-element FDMA subproblem: bisection on the common rate with the
/// same disk geometry and lift as the MAC case.
pub(crate) fn solve_p5m(
    c1: &AffineCoefficients,
    c2: &AffineCoefficients,
    powers: &PowerConfig,
    alpha1: f64,
    rho: f64,
    r_in: f64,
    angle_in: f64,
) -> (f64, f64) {
    let mut lo = r_in.max(0.0);
    let mut hi = f64::INFINITY;
    if alpha1 > 0.0 && rho > 0.0 && powers.p1 > 0.0 {
        let cap = powers.p1 * (c1.f1 + 2.0 * c1.f2.norm()) / (rho * powers.noise);
        hi = hi.min(rho * libm::log2(1.0 + cap) / alpha1);
    }
    if alpha1 < 1.0 && rho < 1.0 && powers.p2 > 0.0 {
        let cap = powers.p2 * (c2.f1 + 2.0 * c2.f2.norm()) / ((1.0 - rho) * powers.noise);
        hi = hi.min((1.0 - rho) * libm::log2(1.0 + cap) / (1.0 - alpha1));
    }
    if !hi.is_finite() || hi <= lo {
        return (r_in, angle_in);
    }
    hi = hi * (1.0 + 1e-9) + 1e-9;
    if p5m_feasible(c1, c2, powers, alpha1, rho, lo).is_none() {
        return (r_in, angle_in);
    }
    for _ in 0..120 {
        if hi - lo <= 1e-11 * (1.0 + hi) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if p5m_feasible(c1, c2, powers, alpha1, rho, mid).is_some() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    match p5m_feasible(c1, c2, powers, alpha1, rho, lo) {
        Some(z) => (lo, finalize_angle(c1, c2, z, angle_in)),
        None => (r_in, angle_in),
    }
}

/// Alternating optimizer for one FDMA rate-profile problem: bandwidth-split
/// update (closed form for fixed phases) alternated with per-element phase
/// updates. Returns `(r, rho, state)`.
pub fn ao_fdma_profile(
    ch: &ChannelRealization,
    powers: &PowerConfig,
    alpha1: f64,
    settings: &SolverSettings,
) -> Result<(f64, f64, AoState)> {
    settings.validate()?;
    ch.validate()?;
    let m = ch.sizes.m;
    let rate_of = |angles: &[f64]| -> Result<(f64, f64)> {
        let (h1, h2) = effective_gains(ch, angles)?;
        Ok(fdma_rate_fixed_gains(
            powers.p1 * h1.norm_sqr() / powers.noise,
            powers.p2 * h2.norm_sqr() / powers.noise,
            alpha1,
        ))
    };

    // One element sweep followed by a bandwidth-split refresh.
    let sweep_once = |angles: &mut [f64],
                      r: &mut f64,
                      rho: &mut f64,
                      history: Option<&mut Vec<f64>>|
     -> Result<()> {
        let (mut h1, mut h2) = effective_gains(ch, angles)?;
        let mut history = history;
        for i in 0..m {
            let gh1 = ch.cent_irs_to_ap[i] * ch.cent_user_to_irs[0][i];
            let gh2 = ch.cent_irs_to_ap[i] * ch.cent_user_to_irs[1][i];
            let phi = phasor(angles[i]);
            let rest1 = h1 - gh1 * phi;
            let rest2 = h2 - gh2 * phi;
            let c1 = affine_from_rest(rest1, gh1);
            let c2 = affine_from_rest(rest2, gh2);
            let (new_r, new_angle) = solve_p5m(&c1, &c2, powers, alpha1, *rho, *r, angles[i]);
            debug_assert!(new_r >= *r - 1e-12);
            angles[i] = new_angle;
            *r = new_r;
            let phi = phasor(new_angle);
            h1 = rest1 + gh1 * phi;
            h2 = rest2 + gh2 * phi;
            if let Some(h) = history.as_deref_mut() {
                h.push(*r);
            }
        }
        let (r_split, rho_split) = rate_of(angles)?;
        if r_split > *r {
            *r = r_split;
            *rho = rho_split;
        }
        if let Some(h) = history.as_deref_mut() {
            h.push(*r);
        }
        Ok(())
    };

    let mut best: Option<(f64, f64, Vec<f64>, Vec<f64>, usize)> = None;
    if m == 0 || alpha1 <= 0.0 || alpha1 >= 1.0 {
        // Boundary ratios are closed form in the gains; pick the best start.
        let mut r = 0.0;
        let mut rho = alpha1.clamp(0.0, 1.0);
        let mut angles: Vec<f64> = vec![0.0; m];
        for cand in initial_candidates(ch, settings) {
            let (cr, crho) = rate_of(&cand)?;
            if cr > r {
                r = cr;
                rho = crho;
                angles = cand;
            }
        }
        best = Some((r, rho, angles, vec![r], 0));
    } else {
        let mut screened: Vec<(f64, f64, Vec<f64>)> = Vec::new();
        for cand in initial_candidates(ch, settings) {
            let mut angles = cand;
            let (mut r, mut rho) = rate_of(&angles)?;
            sweep_once(&mut angles, &mut r, &mut rho, None)?;
            screened.push((r, rho, angles));
        }
        screened.sort_by(|a, b| b.0.total_cmp(&a.0));
        screened.truncate(settings.refine_top);
        for (r0, rho0, angles0) in screened {
            let mut angles = angles0;
            let mut r = r0;
            let mut rho = rho0;
            let mut history = vec![r];
            let mut sweeps = 1;
            for _ in 1..settings.max_sweeps {
                let r_before = r;
                sweep_once(&mut angles, &mut r, &mut rho, Some(&mut history))?;
                sweeps += 1;
                if r - r_before < settings.sweep_rel_tol * (1.0 + r_before) {
                    break;
                }
            }
            if best.as_ref().is_none_or(|(b, ..)| r > *b) {
                best = Some((r, rho, angles, history, sweeps));
            }
        }
    }
    let (r, rho, angles, history, sweeps) = best.expect("at least one start is always refined");

    Ok((
        r,
        rho,
        AoState {
            angles,
            objective: r,
            sweeps,
            history,
        },
    ))
}

/// FDMA inner bound for the centralized surface: hull of the rate-profile
/// points together with the two fixed-alignment FDMA regions (aligning the
/// whole surface to one user and sweeping the bandwidth split), which ensure
/// the TDMA triangle is always covered.
pub fn fdma_inner_bound_centralized(
    ch: &ChannelRealization,
    powers: &PowerConfig,
    settings: &SolverSettings,
) -> Result<RatePolygon> {
    settings.validate()?;
    let l = settings.rate_ratio_grid;
    let mut points = Vec::new();
    for i in 0..l {
        let alpha1 = i as f64 / (l - 1) as f64;
        let (r, _, _) = ao_fdma_profile(ch, powers, alpha1, settings)?;
        points.push(RatePair::new(alpha1 * r, (1.0 - alpha1) * r));
    }
    for user in User::BOTH {
        let config = align_phases_to_user(ch, user);
        let angles = config.centralized_angles()?;
        let (h1, h2) = effective_gains(ch, angles)?;
        let n = settings.fdma_samples.max(2);
        for j in 0..n {
            let rho = j as f64 / (n - 1) as f64;
            points.push(fdma_point(h1.norm(), h2.norm(), powers, rho));
        }
    }
    convex_hull(&points)
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

/// Exhaustive per-element phase-grid enumeration (`grid^M` points) of the
/// capacity and FDMA hulls. Guarded to `M <= 3`; oracle use only.
pub fn brute_force_regions(
    ch: &ChannelRealization,
    powers: &PowerConfig,
    grid: usize,
) -> Result<(RatePolygon, RatePolygon)> {
    let m = ch.sizes.m;
    if m > 3 {
        return Err(Error::Config("exhaustive enumeration is limited to M <= 3"));
    }
    if grid == 0 {
        return Err(Error::Config("phase grid must be non-empty"));
    }
    let total = grid.pow(m as u32);
    let mut cap_points = Vec::with_capacity(total * 4 + 1);
    let mut fdma_points = Vec::new();
    let n_rho = 17;
    let mut angles = vec![0.0f64; m];
    for index in 0..total {
        let mut rem = index;
        for a in angles.iter_mut() {
            *a = (rem % grid) as f64 / grid as f64 * TAU;
            rem /= grid;
        }
        let (h1, h2) = effective_gains(ch, &angles)?;
        let (g1, g2) = (h1.norm(), h2.norm());
        let s1 = powers.p1 * g1 * g1 / powers.noise;
        let s2 = powers.p2 * g2 * g2 / powers.noise;
        let (r1, r2, sum) = (rate(s1), rate(s2), rate(s1 + s2));
        cap_points.push(RatePair::new(r1, 0.0));
        cap_points.push(RatePair::new(0.0, r2));
        cap_points.push(RatePair::new(r1, sum - r1));
        cap_points.push(RatePair::new(sum - r2, r2));
        for j in 0..n_rho {
            let rho = j as f64 / (n_rho - 1) as f64;
            fdma_points.push(fdma_point(g1, g2, powers, rho));
        }
    }
    Ok((convex_hull(&cap_points)?, convex_hull(&fdma_points)?))
}
