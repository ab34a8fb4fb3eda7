//! Downlink broadcast-channel regions via uplink-downlink duality, plus the
//! twin-channel construction comparing the two deployments.
//!
//! Every BC region is the convex hull of dual MAC regions taken over a grid
//! of transmit-power splits summing to the downlink budget. The centralized
//! inner bound additionally re-optimizes the power split inside each
//! rate-profile problem (the dual MAC sum-power constraint replaces the
//! per-user caps), alternating a closed-form power subproblem with the same
//! per-element phase updates as the uplink solver.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::centralized::{
    affine_from_rest, align_phases_to_user, fdma_rate_fixed_gains, initial_candidates, solve_p3m,
    solve_p5m, AoState, DecodingOrder, RateProfileProblem, SolverSettings,
};
use crate::channel::{
    effective_channel_centralized_from_angles, ChannelRealization, PowerConfig, ReflectionConfig,
    User,
};
use crate::distributed::{
    fdma_region_from_gains, gain_upper_bounds, pentagon_from_gains, rate, ref_arg, tdma_triangle,
    Deployment,
};
use crate::region::{convex_hull, pentagon_vertices, RatePair, RatePolygon};
use crate::{Error, Result};

const TAU: f64 = 2.0 * core::f64::consts::PI;

/// One point on the downlink power-split grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerAllocation {
    pub p1: f64,
    pub p2: f64,
    pub total: f64,
}

impl PowerAllocation {
    /// Split `total` as `(ratio, 1 - ratio)`.
    pub fn split(total: f64, ratio: f64) -> Self {
        Self {
            p1: ratio * total,
            p2: (1.0 - ratio) * total,
            total,
        }
    }
}

fn split_grid(total: f64, n: usize) -> impl Iterator<Item = PowerAllocation> {
    let n = n.max(2);
    (0..n).map(move |i| PowerAllocation::split(total, i as f64 / (n - 1) as f64))
}

// ---------------------------------------------------------------------------
// Distributed deployment (closed form per split)
// ---------------------------------------------------------------------------

/// BC capacity region under distributed deployment: hull of the dual MAC
/// pentagons over the power-split grid.
pub fn bc_capacity_region_distributed(
    ch: &ChannelRealization,
    p_total: f64,
    noise: f64,
    settings: &SolverSettings,
) -> Result<RatePolygon> {
    let bounds = gain_upper_bounds(ch, Deployment::Distributed);
    let mut points = Vec::new();
    for alloc in split_grid(p_total, settings.power_split_grid) {
        let powers = PowerConfig::new(alloc.p1, alloc.p2, noise)?;
        let pentagon = pentagon_from_gains(&bounds, &powers)?;
        points.extend_from_slice(pentagon_vertices(&pentagon).vertices());
    }
    convex_hull(&points)
}

/// BC TDMA region under distributed deployment.
pub fn bc_tdma_distributed(
    ch: &ChannelRealization,
    p_total: f64,
    noise: f64,
    settings: &SolverSettings,
) -> Result<RatePolygon> {
    let bounds = gain_upper_bounds(ch, Deployment::Distributed);
    let mut points = Vec::new();
    for alloc in split_grid(p_total, settings.power_split_grid) {
        let powers = PowerConfig::new(alloc.p1, alloc.p2, noise)?;
        points.extend_from_slice(tdma_triangle(&bounds, &powers)?.vertices());
    }
    convex_hull(&points)
}

/// BC FDMA region under distributed deployment.
pub fn bc_fdma_distributed(
    ch: &ChannelRealization,
    p_total: f64,
    noise: f64,
    settings: &SolverSettings,
) -> Result<RatePolygon> {
    let bounds = gain_upper_bounds(ch, Deployment::Distributed);
    let mut points = Vec::new();
    for alloc in split_grid(p_total, settings.power_split_grid) {
        let powers = PowerConfig::new(alloc.p1, alloc.p2, noise)?;
        let region =
            fdma_region_from_gains(bounds.user1, bounds.user2, &powers, settings.fdma_samples)?;
        points.extend_from_slice(region.vertices());
    }
    convex_hull(&points)
}

// ---------------------------------------------------------------------------
// Dual-MAC power subproblem
// ---------------------------------------------------------------------------

/// Largest objective `beta` for fixed effective gains under a sum-power cap,
/// together with the minimal powers attaining it. `gain_first`/`gain_second`
/// are the amplitudes of the firstly and secondly decoded users' channels;
/// `alpha_first` is the first user's rate share, in `[0, 1)`.
pub fn solve_p6_power_subproblem(
    gain_first: f64,
    gain_second: f64,
    p_total: f64,
    noise: f64,
    alpha_first: f64,
) -> (f64, f64, f64) {
    debug_assert!((0.0..1.0).contains(&alpha_first));
    let g1sq = gain_first * gain_first;
    let g2sq = gain_second * gain_second;
    let needs = |beta: f64| -> Option<(f64, f64)> {
        let grow_first = libm::pow(beta, 1.0 / (1.0 - alpha_first)) - beta;
        let p_first = if alpha_first <= 0.0 || grow_first <= 0.0 {
            0.0
        } else if g1sq > 0.0 {
            grow_first * noise / g1sq
        } else {
            return None;
        };
        let need_second = (beta - 1.0) * noise;
        let p_second = if need_second <= 0.0 {
            0.0
        } else if g2sq > 0.0 {
            need_second / g2sq
        } else {
            return None;
        };
        (p_first + p_second <= p_total).then_some((p_first, p_second))
    };
    let mut lo = 1.0;
    let mut hi = (1.0 + p_total * (g1sq + g2sq) / noise) * (1.0 + 1e-9) + 1e-9;
    if needs(hi).is_some() {
        lo = hi;
    } else {
        for _ in 0..200 {
            if hi - lo <= 1e-12 * (1.0 + hi) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if needs(mid).is_some() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let (p_first, p_second) = needs(lo).unwrap_or((0.0, 0.0));
    (lo, p_first, p_second)
}

// ---------------------------------------------------------------------------
// Centralized BC inner bound
// ---------------------------------------------------------------------------

/// Alternating optimizer for one BC rate-profile problem: power subproblem
/// (closed form for fixed phases) alternated with per-element phase updates
/// at fixed powers. Returns the sum-rate, the final power split (in user
/// order), and the optimizer state.
pub fn bc_ao_sum_rate(
    ch: &ChannelRealization,
    p_total: f64,
    noise: f64,
    profile: &RateProfileProblem,
    settings: &SolverSettings,
) -> Result<(f64, PowerAllocation, AoState)> {
    settings.validate()?;
    ch.validate()?;
    if !(p_total >= 0.0) || !(noise > 0.0) {
        return Err(Error::Config("sum power must be nonnegative, noise positive"));
    }
    let alpha = profile.alpha_first();
    let first = profile.order.first();

    if alpha >= 1.0 {
        // All rate and all power to the firstly decoded user.
        let config = align_phases_to_user(ch, first);
        let angles = config.centralized_angles()?.to_vec();
        let h = effective_channel_centralized_from_angles(ch, &angles, first)?;
        let r = rate(p_total * h.norm_sqr() / noise);
        let (p1, p2) = match first {
            User::One => (p_total, 0.0),
            User::Two => (0.0, p_total),
        };
        return Ok((
            r,
            PowerAllocation { p1, p2, total: p_total },
            AoState {
                angles,
                objective: 1.0,
                sweeps: 0,
                history: vec![1.0],
            },
        ));
    }

    let m = ch.sizes.m;
    let ordered_gains = |angles: &[f64]| -> Result<(f64, f64)> {
        let hf = effective_channel_centralized_from_angles(ch, angles, first)?;
        let hs = effective_channel_centralized_from_angles(ch, angles, first.other())?;
        Ok((hf.norm(), hs.norm()))
    };
    let beta_of = |angles: &[f64]| -> Result<(f64, f64, f64)> {
        let (gf, gs) = ordered_gains(angles)?;
        Ok(solve_p6_power_subproblem(gf, gs, p_total, noise, alpha))
    };

    // One element sweep at the current power split, then a power refresh.
    let sweep_once = |angles: &mut [f64],
                      beta: &mut f64,
                      p_first: &mut f64,
                      p_second: &mut f64,
                      history: Option<&mut Vec<f64>>|
     -> Result<()> {
        let mut history = history;
        let mut hf = effective_channel_centralized_from_angles(ch, angles, first)?;
        let mut hs = effective_channel_centralized_from_angles(ch, angles, first.other())?;
        for i in 0..m {
            let gh_f = ch.cent_irs_to_ap[i] * ch.cent_user_to_irs[first.index()][i];
            let gh_s = ch.cent_irs_to_ap[i] * ch.cent_user_to_irs[first.other().index()][i];
            let phi = phasor(angles[i]);
            let rest_f = hf - gh_f * phi;
            let rest_s = hs - gh_s * phi;
            let cf = affine_from_rest(rest_f, gh_f);
            let cs = affine_from_rest(rest_s, gh_s);
            let (new_beta, new_angle) =
                solve_p3m(&cf, &cs, *p_first, *p_second, noise, alpha, *beta, angles[i]);
            debug_assert!(new_beta >= *beta - 1e-12);
            angles[i] = new_angle;
            *beta = new_beta;
            let phi = phasor(new_angle);
            hf = rest_f + gh_f * phi;
            hs = rest_s + gh_s * phi;
            if let Some(h) = history.as_deref_mut() {
                h.push(*beta);
            }
        }
        let (b, pf, ps) = beta_of(angles)?;
        if b > *beta {
            *beta = b;
            *p_first = pf;
            *p_second = ps;
        }
        if let Some(h) = history.as_deref_mut() {
            h.push(*beta);
        }
        Ok(())
    };

    let mut best: Option<(f64, f64, f64, Vec<f64>, Vec<f64>, usize)> = None;
    if m == 0 {
        let (beta, pf, ps) = beta_of(&[])?;
        best = Some((beta, pf, ps, Vec::new(), vec![beta], 0));
    } else {
        let mut screened: Vec<(f64, f64, f64, Vec<f64>)> = Vec::new();
        for cand in initial_candidates(ch, settings) {
            let mut angles = cand;
            let (mut beta, mut pf, mut ps) = beta_of(&angles)?;
            sweep_once(&mut angles, &mut beta, &mut pf, &mut ps, None)?;
            screened.push((beta, pf, ps, angles));
        }
        screened.sort_by(|a, b| b.0.total_cmp(&a.0));
        screened.truncate(settings.refine_top);
        for (beta0, pf0, ps0, angles0) in screened {
            let mut angles = angles0;
            let (mut beta, mut pf, mut ps) = (beta0, pf0, ps0);
            let mut history = vec![beta];
            let mut sweeps = 1;
            for _ in 1..settings.max_sweeps {
                let beta_before = beta;
                sweep_once(&mut angles, &mut beta, &mut pf, &mut ps, Some(&mut history))?;
                sweeps += 1;
                if beta - beta_before < settings.sweep_rel_tol * (1.0 + beta_before) {
                    break;
                }
            }
            if best.as_ref().is_none_or(|(b, ..)| beta > *b) {
                best = Some((beta, pf, ps, angles, history, sweeps));
            }
        }
    }
    let (beta, p_first, p_second, angles, history, sweeps) =
        best.expect("at least one start is always refined");

    let r = libm::log2(beta.max(1.0)) / (1.0 - alpha);
    let (p1, p2) = match first {
        User::One => (p_first, p_second),
        User::Two => (p_second, p_first),
    };
    Ok((
        r,
        PowerAllocation { p1, p2, total: p_total },
        AoState {
            angles,
            objective: beta,
            sweeps,
            history,
        },
    ))
}

/// Rate-profile inner bound of the BC capacity region under centralized
/// deployment.
pub fn bc_inner_bound_centralized(
    ch: &ChannelRealization,
    p_total: f64,
    noise: f64,
    settings: &SolverSettings,
) -> Result<RatePolygon> {
    settings.validate()?;
    let l = settings.rate_ratio_grid;
    let mut points = Vec::with_capacity(l);
    for i in 0..l {
        let alpha1 = i as f64 / (l - 1) as f64;
        let mut best = 0.0f64;
        for order in DecodingOrder::BOTH {
            let profile = RateProfileProblem::new(alpha1, order)?;
            let (r, _, _) = bc_ao_sum_rate(ch, p_total, noise, &profile, settings)?;
            best = best.max(r);
        }
        points.push(RatePair::new(alpha1 * best, (1.0 - alpha1) * best));
    }
    convex_hull(&points)
}

/// BC outer bound: hull over the power-split grid of the dual MAC outer
/// pentagons, each with its own semidefinite-relaxation sum cap.
pub fn bc_outer_bound_centralized(
    ch: &ChannelRealization,
    p_total: f64,
    noise: f64,
    settings: &SolverSettings,
    sdr_tol: f64,
) -> Result<RatePolygon> {
    let mut points = Vec::new();
    for alloc in split_grid(p_total, settings.power_split_grid) {
        let powers = PowerConfig::new(alloc.p1, alloc.p2, noise)?;
        let cap = crate::sdr::sum_rate_upper_bound(ch, &powers, sdr_tol)?;
        let pentagon = crate::centralized::outer_bound_region(ch, &powers, cap)?;
        points.extend_from_slice(pentagon_vertices(&pentagon).vertices());
    }
    convex_hull(&points)
}

/// BC TDMA region under centralized deployment.
pub fn bc_tdma_centralized(
    ch: &ChannelRealization,
    p_total: f64,
    noise: f64,
    settings: &SolverSettings,
) -> Result<RatePolygon> {
    let bounds = gain_upper_bounds(ch, Deployment::Centralized);
    let mut points = Vec::new();
    for alloc in split_grid(p_total, settings.power_split_grid) {
        let r1 = rate(alloc.p1 * bounds.user1 * bounds.user1 / noise);
        let r2 = rate(alloc.p2 * bounds.user2 * bounds.user2 / noise);
        points.push(RatePair::new(r1, 0.0));
        points.push(RatePair::new(0.0, r2));
    }
    convex_hull(&points)
}

/// FDMA inner bound of the BC under centralized deployment: the uplink FDMA
/// rate-profile solver extended with the power split, cycling power,
/// bandwidth, and per-element subproblems.
pub fn bc_fdma_inner_centralized(
    ch: &ChannelRealization,
    p_total: f64,
    noise: f64,
    settings: &SolverSettings,
) -> Result<RatePolygon> {
    settings.validate()?;
    let l = settings.rate_ratio_grid;
    let mut points = Vec::new();
    for i in 0..l {
        let alpha1 = i as f64 / (l - 1) as f64;
        let (r, _) = bc_fdma_profile(ch, p_total, noise, alpha1, settings)?;
        points.push(RatePair::new(alpha1 * r, (1.0 - alpha1) * r));
    }
    // Fixed-alignment endpoint regions keep the TDMA triangle covered.
    for user in User::BOTH {
        let config = align_phases_to_user(ch, user);
        let angles = config.centralized_angles()?;
        let h1 = effective_channel_centralized_from_angles(ch, angles, User::One)?;
        let h2 = effective_channel_centralized_from_angles(ch, angles, User::Two)?;
        for alloc in split_grid(p_total, settings.power_split_grid) {
            let powers = PowerConfig::new(alloc.p1, alloc.p2, noise)?;
            let region = fdma_region_from_gains(h1.norm(), h2.norm(), &powers, 65)?;
            points.extend_from_slice(region.vertices());
        }
    }
    convex_hull(&points)
}

/// One BC FDMA rate-profile problem; returns `(r, rho)`.
fn bc_fdma_profile(
    ch: &ChannelRealization,
    p_total: f64,
    noise: f64,
    alpha1: f64,
    settings: &SolverSettings,
) -> Result<(f64, f64)> {
    let m = ch.sizes.m;
    // Best rate for fixed phases, maximizing over both the power split and
    // the bandwidth split: bisection on r over the minimal-power test.
    let fixed_phase_rate = |angles: &[f64]| -> Result<(f64, f64, PowerConfig)> {
        let h1 = effective_channel_centralized_from_angles(ch, angles, User::One)?;
        let h2 = effective_channel_centralized_from_angles(ch, angles, User::Two)?;
        let (g1sq, g2sq) = (h1.norm_sqr(), h2.norm_sqr());
        let powers_for = |r: f64, rho: f64| -> Option<(f64, f64)> {
            let p1 = if alpha1 <= 0.0 || r <= 0.0 {
                0.0
            } else if rho > 0.0 && g1sq > 0.0 {
                (libm::exp2(alpha1 * r / rho) - 1.0) * rho * noise / g1sq
            } else {
                return None;
            };
            let p2 = if alpha1 >= 1.0 || r <= 0.0 {
                0.0
            } else if rho < 1.0 && g2sq > 0.0 {
                (libm::exp2((1.0 - alpha1) * r / (1.0 - rho)) - 1.0) * (1.0 - rho) * noise / g2sq
            } else {
                return None;
            };
            (p1 + p2 <= p_total).then_some((p1, p2))
        };
        // For each r the cheapest rho is found by golden-section-free grid
        // refinement: the minimal power sum is unimodal in rho.
        let feasible = |r: f64| -> Option<(f64, f64, f64)> {
            if r <= 0.0 {
                let rho = alpha1.clamp(0.0, 1.0);
                return Some((rho, 0.0, 0.0));
            }
            let mut best: Option<(f64, f64, f64)> = None;
            let n = 64;
            for j in 0..=n {
                let rho = j as f64 / n as f64;
                if let Some((p1, p2)) = powers_for(r, rho) {
                    if best.map_or(true, |(_, bp1, bp2)| p1 + p2 < bp1 + bp2) {
                        best = Some((rho, p1, p2));
                    }
                }
            }
            best
        };
        let mut lo = 0.0;
        let mut hi = {
            let s1 = p_total * g1sq / noise;
            let s2 = p_total * g2sq / noise;
            let (cap, _) = fdma_rate_fixed_gains(s1, s2, alpha1);
            cap * (1.0 + 1e-9) + 1e-9
        };
        for _ in 0..90 {
            if hi - lo <= 1e-11 * (1.0 + hi) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if feasible(mid).is_some() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (rho, p1, p2) = feasible(lo).unwrap_or((alpha1, 0.0, 0.0));
        // Spend any leftover power on the binding side implicitly: the
        // recorded split is the minimal one, which is all later stages need.
        Ok((lo, rho, PowerConfig::new(p1.min(p_total), p2.min(p_total), noise)?))
    };

    // One element sweep at fixed bandwidth split, then a joint
    // power/bandwidth refresh. The element subproblem sees the full
    // remaining budget on each side so it can actually improve; minimal
    // powers are re-derived afterwards.
    let sweep_once = |angles: &mut [f64],
                      r: &mut f64,
                      rho: &mut f64,
                      powers: &mut PowerConfig|
     -> Result<()> {
        let mut h1 = effective_channel_centralized_from_angles(ch, angles, User::One)?;
        let mut h2 = effective_channel_centralized_from_angles(ch, angles, User::Two)?;
        let sweep_powers = PowerConfig::new(
            powers.p1.max(p_total - powers.p2),
            powers.p2.max(p_total - powers.p1),
            noise,
        )?;
        let mut r_sweep = *r;
        for i in 0..m {
            let gh1 = ch.cent_irs_to_ap[i] * ch.cent_user_to_irs[0][i];
            let gh2 = ch.cent_irs_to_ap[i] * ch.cent_user_to_irs[1][i];
            let phi = phasor(angles[i]);
            let rest1 = h1 - gh1 * phi;
            let rest2 = h2 - gh2 * phi;
            let c1 = affine_from_rest(rest1, gh1);
            let c2 = affine_from_rest(rest2, gh2);
            let (new_r, new_angle) =
                solve_p5m(&c1, &c2, &sweep_powers, alpha1, *rho, r_sweep, angles[i]);
            angles[i] = new_angle;
            r_sweep = new_r;
            let phi = phasor(new_angle);
            h1 = rest1 + gh1 * phi;
            h2 = rest2 + gh2 * phi;
        }
        let (r_new, rho_new, p_new) = fixed_phase_rate(angles)?;
        if r_new > *r {
            *r = r_new;
            *rho = rho_new;
            *powers = p_new;
        }
        Ok(())
    };

    let mut best: Option<(f64, f64)> = None;
    if m == 0 || alpha1 <= 0.0 || alpha1 >= 1.0 {
        let mut r = 0.0;
        let mut rho = alpha1.clamp(0.0, 1.0);
        for cand in initial_candidates(ch, settings) {
            let (cr, crho, _) = fixed_phase_rate(&cand)?;
            if cr > r {
                r = cr;
                rho = crho;
            }
        }
        if m == 0 {
            let (cr, crho, _) = fixed_phase_rate(&[])?;
            if cr > r {
                r = cr;
                rho = crho;
            }
        }
        best = Some((r, rho));
    } else {
        let mut screened: Vec<(f64, f64, PowerConfig, Vec<f64>)> = Vec::new();
        for cand in initial_candidates(ch, settings) {
            let mut angles = cand;
            let (mut r, mut rho, mut powers) = fixed_phase_rate(&angles)?;
            sweep_once(&mut angles, &mut r, &mut rho, &mut powers)?;
            screened.push((r, rho, powers, angles));
        }
        screened.sort_by(|a, b| b.0.total_cmp(&a.0));
        screened.truncate(settings.refine_top);
        for (r0, rho0, powers0, angles0) in screened {
            let mut angles = angles0;
            let (mut r, mut rho, mut powers) = (r0, rho0, powers0);
            for _ in 1..settings.max_sweeps {
                let r_before = r;
                sweep_once(&mut angles, &mut r, &mut rho, &mut powers)?;
                if r - r_before < settings.sweep_rel_tol * (1.0 + r_before) {
                    break;
                }
            }
            if best.as_ref().is_none_or(|(b, _)| r > *b) {
                best = Some((r, rho));
            }
        }
    }
    Ok(best.expect("at least one start is always refined"))
}

// ---------------------------------------------------------------------------
// Twin-channel comparison constructions
// ---------------------------------------------------------------------------

/// Common rotation making both `|a_k + b_k e^{j theta}| >= |a_k|`:
/// with `c_k = arg(b_k) - arg(a_k)` wrapped to `[0, 2pi)`, pick
/// `theta = pi/2 - min(c_1, c_2)` when the two offsets are at least `pi`
/// apart and `pi/2 - max(c_1, c_2)` otherwise.
pub fn lemma_phase_rotation(c1: f64, c2: f64) -> f64 {
    let half_pi = 0.5 * core::f64::consts::PI;
    if (c1 - c2).abs() >= core::f64::consts::PI {
        half_pi - c1.min(c2)
    } else {
        half_pi - c1.max(c2)
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

fn check_twin(ch: &ChannelRealization) -> Result<()> {
    ch.validate()?;
    let m1 = ch.sizes.m1;
    let twin_ok = ch.cent_irs_to_ap[..m1] == ch.dist_user_to_irs[0][..]
        && ch.cent_irs_to_ap[m1..] == ch.dist_user_to_irs[1][..]
        && ch.cent_user_to_irs[0][..m1] == ch.dist_irs_to_ap[0][..]
        && ch.cent_user_to_irs[1][m1..] == ch.dist_irs_to_ap[1][..];
    if twin_ok {
        Ok(())
    } else {
        Err(Error::Validation(
            "distributed and centralized channels are not twin-identified",
        ))
    }
}

/// Centralized phases that dominate the distributed deployment under twin
/// channels with zero direct links: each sub-surface reuses the distributed
/// gain-maximizing phases, rotated by common phases `theta_1 = 0` and
/// `theta_2` chosen by [`lemma_phase_rotation`] so that both centralized
/// gains are at least the distributed gain bounds. Returns
/// `(config, theta_1, theta_2)`.
pub fn twin_lift_construction(
    ch: &ChannelRealization,
) -> Result<(ReflectionConfig, f64, f64)> {
    check_twin(ch)?;
    if ch.direct[0] != Complex64::ZERO || ch.direct[1] != Complex64::ZERO {
        return Err(Error::Validation(
            "the twin-lift construction requires zero direct channels",
        ));
    }
    let m1 = ch.sizes.m1;
    let bounds = gain_upper_bounds(ch, Deployment::Distributed);

    // Cross terms: what each sub-surface contributes to the *other* user's
    // effective channel once it carries that user's distributed phases.
    let mut f1 = Complex64::ZERO;
    for (m, (g, h1)) in ch.cent_irs_to_ap[m1..]
        .iter()
        .zip(&ch.cent_user_to_irs[0][m1..])
        .enumerate()
    {
        let own = ch.dist_irs_to_ap[1][m] * ch.dist_user_to_irs[1][m];
        f1 += g * h1 * phasor(-ref_arg(own));
    }
    let mut f2 = Complex64::ZERO;
    for (m, (g, h2)) in ch.cent_irs_to_ap[..m1]
        .iter()
        .zip(&ch.cent_user_to_irs[1][..m1])
        .enumerate()
    {
        let own = ch.dist_irs_to_ap[0][m] * ch.dist_user_to_irs[0][m];
        f2 += (g * h2).conj() * phasor(ref_arg(own));
    }

    let c1 = wrap_tau(ref_arg(f1) - ref_arg(Complex64::new(bounds.user1, 0.0)));
    let c2 = wrap_tau(ref_arg(f2) - ref_arg(Complex64::new(bounds.user2, 0.0)));
    let theta = lemma_phase_rotation(c1, c2);

    let (theta1, theta2) = (0.0, theta);
    let mut angles = Vec::with_capacity(ch.sizes.m);
    for m in 0..m1 {
        let own = ch.dist_irs_to_ap[0][m] * ch.dist_user_to_irs[0][m];
        angles.push(-ref_arg(own) + theta1);
    }
    for m in 0..ch.sizes.m2 {
        let own = ch.dist_irs_to_ap[1][m] * ch.dist_user_to_irs[1][m];
        angles.push(-ref_arg(own) + theta2);
    }
    Ok((ReflectionConfig::Centralized(angles), theta1, theta2))
}

/// Heuristic variant of the twin construction with both common rotations
/// zero; well-defined for arbitrary direct channels but without the gain
/// guarantee.
pub fn heuristic_twin_phases(ch: &ChannelRealization) -> Result<ReflectionConfig> {
    check_twin(ch)?;
    let mut angles = Vec::with_capacity(ch.sizes.m);
    for m in 0..ch.sizes.m1 {
        let own = ch.dist_irs_to_ap[0][m] * ch.dist_user_to_irs[0][m];
        angles.push(ref_arg(ch.direct[0]) - ref_arg(own));
    }
    for m in 0..ch.sizes.m2 {
        let own = ch.dist_irs_to_ap[1][m] * ch.dist_user_to_irs[1][m];
        angles.push(ref_arg(ch.direct[1]) - ref_arg(own));
    }
    Ok(ReflectionConfig::Centralized(angles))
}

fn phasor(angle: f64) -> Complex64 {
    Complex64::new(libm::cos(angle), libm::sin(angle))
}
