//! Capacity bounds of the two-user IM/DD interference channel: TIN and
//! simplified Han–Kobayashi inner bounds, Z-channel and genie-aided outer
//! bounds, the TDMA baseline, and the gap checks built from them.

mod config;
mod sweep;

pub use config::{ChannelConfig, HKAllocation, SweepGrid};
pub use sweep::{InnerSweep, UpperCache};

use crate::error::{Error, Result};
use crate::geometry::{hull_of_points, max_weighted_sum, region_from_caps, uniform_shift_inside, RateRegion};
use crate::p2p::{capacity_lower, capacity_upper, f_bound};

/// Convex hull of the TIN rectangles over the grid of private allocations.
pub fn tin_region(cfg: &ChannelConfig, grid: &SweepGrid) -> Result<RateRegion> {
    InnerSweep::new(cfg, grid)?.tin_region()
}

/// Convex hull of the Han–Kobayashi pentagons over the allocation grid.
pub fn hk_region(cfg: &ChannelConfig, grid: &SweepGrid) -> Result<RateRegion> {
    InnerSweep::new(cfg, grid)?.hk_region()
}

/// Pentagon caps `(a1, a2, s)` of one allocation, evaluated term by term with
/// [`f_bound`]. The sweep computes the same quantities from shared pieces.
pub fn hk_caps(cfg: &ChannelConfig, alloc: &HKAllocation) -> Result<(f64, f64, f64)> {
    let (k, e, t, p) = (alloc.kappa, alloc.eta, alloc.theta, alloc.phi);
    let h = |i: usize, j: usize| cfg.gain(i, j);
    let sigma = cfg.sigma;
    let tin = |i: usize| {
        let j = 1 - i;
        f_bound(0.0, h(i, i) * k[i], h(j, i) * k[j], 1.0, t[i], t[j], sigma)
    };
    let private_at = |rx: usize| h(0, rx) * k[0] + h(1, rx) * k[1];
    let tin = [tin(0)?, tin(1)?];
    let mut a = [0.0; 2];
    for i in 0..2 {
        let mut best = f64::INFINITY;
        for rx in 0..2 {
            let v = f_bound(0.0, h(i, rx) * e[i], private_at(rx), 1.0, p[i], alloc.theta_prime(cfg, rx), sigma)?;
            best = best.min(v);
        }
        a[i] = tin[i] + best;
    }
    let mut common = f64::INFINITY;
    for i in 0..2 {
        let j = 1 - i;
        let v = f_bound(
            h(i, i) * e[i],
            h(j, i) * e[j],
            private_at(i),
            p[i],
            p[j],
            alloc.theta_prime(cfg, i),
            sigma,
        )?;
        common = common.min(v);
    }
    Ok((a[0], a[1], tin[0] + tin[1] + common))
}

fn single_user_caps(cfg: &ChannelConfig) -> Result<[f64; 2]> {
    Ok([
        capacity_upper(cfg.gain(0, 0) * cfg.peak, cfg.alpha[0], cfg.sigma)?,
        capacity_upper(cfg.gain(1, 1) * cfg.peak, cfg.alpha[1], cfg.sigma)?,
    ])
}

/// Sum-rate cap of the Z-channel bound for the ordering where receiver `i`
/// is handed the interfering codeword of user `j`.
fn z_sum_cap(cfg: &ChannelConfig, i: usize, caps: &[f64; 2]) -> Result<f64> {
    let j = 1 - i;
    let (hii, hji, hjj) = (cfg.gain(i, i), cfg.gain(j, i), cfg.gain(j, j));
    let mixed = (hii * cfg.alpha[i] + hji * cfg.alpha[j]) / (hii + hji);
    let joint = capacity_upper((hii + hji) * cfg.peak, mixed, cfg.sigma)?;
    let r = (hji / hjj).powi(2);
    let arg = r.max((1.0 - r) * (-2.0 * caps[j] * std::f64::consts::LN_2).exp());
    Ok(joint - (0.5 * arg.log2()).min(0.0))
}

/// Z-channel outer bound: single-user caps plus the tighter of the two
/// orderings' sum-rate caps.
pub fn z_outer(cfg: &ChannelConfig) -> Result<RateRegion> {
    cfg.validate()?;
    let caps = single_user_caps(cfg)?;
    let sum = z_sum_cap(cfg, 0, &caps)?.min(z_sum_cap(cfg, 1, &caps)?);
    Ok(region_from_caps(caps[0], caps[1], sum))
}

/// Genie-aided outer bound. Without both cross links the sum constraint is
/// vacuous and the region is the rectangle of single-user caps.
pub fn genie_outer(cfg: &ChannelConfig) -> Result<RateRegion> {
    cfg.validate()?;
    let caps = single_user_caps(cfg)?;
    let (h12, h21) = (cfg.gain(0, 1), cfg.gain(1, 0));
    if h12 * h21 == 0.0 {
        return Ok(region_from_caps(caps[0], caps[1], caps[0] + caps[1]));
    }
    let mut sum = 0.0;
    for i in 0..2 {
        let j = 1 - i;
        let (hii, hij) = (cfg.gain(i, i), cfg.gain(i, j));
        let scaled = h12 * h21 / hii.hypot(hij) * cfg.peak;
        sum += capacity_upper(scaled, cfg.alpha[j], cfg.sigma)? + 0.5 * (1.0 + (hii / hij).powi(2)).log2();
    }
    Ok(region_from_caps(caps[0], caps[1], sum))
}

/// Equal time sharing of the two interference-free links.
pub fn tdma_sum_rate(cfg: &ChannelConfig) -> Result<f64> {
    cfg.validate()?;
    let c1 = capacity_lower(cfg.gain(0, 0) * cfg.peak, cfg.alpha[0], cfg.sigma)?;
    let c2 = capacity_lower(cfg.gain(1, 1) * cfg.peak, cfg.alpha[1], cfg.sigma)?;
    Ok(0.5 * (c1 + c2))
}

/// Smallest uniform back-off `d` (resolution 1e-3) such that every vertex of
/// the Z outer bound moved down by `d` in both rates is HK-achievable.
pub fn strong_interference_gap(cfg: &ChannelConfig, grid: &SweepGrid) -> Result<f64> {
    cfg.validate()?;
    if cfg.gain(0, 1) < cfg.gain(0, 0) || cfg.gain(1, 0) < cfg.gain(1, 1) {
        return Err(Error::domain(
            "strong interference needs h12 >= h11 and h21 >= h22",
        ));
    }
    let outer = z_outer(cfg)?;
    let inner = hk_region(cfg, grid)?;
    Ok(shift_gap(&outer, &inner))
}

pub(crate) fn shift_gap(outer: &RateRegion, inner: &RateRegion) -> f64 {
    let mut hi = outer
        .vertices()
        .iter()
        .map(|v| v.r1.max(v.r2))
        .fold(0.0, f64::max);
    let mut lo = 0.0;
    if uniform_shift_inside(outer, inner, lo) {
        return 0.0;
    }
    while hi - lo > 1e-3 {
        let mid = 0.5 * (lo + hi);
        if uniform_shift_inside(outer, inner, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Genie-aided sum-rate cap minus the best TIN sum-rate.
pub fn weak_interference_sum_gap(cfg: &ChannelConfig, grid: &SweepGrid) -> Result<f64> {
    let outer = max_weighted_sum(&genie_outer(cfg)?, 1.0, 1.0);
    let inner = InnerSweep::new(cfg, grid)?.tin_sum_rate();
    Ok(outer - inner)
}

/// Convex hull of explicit allocations' pentagons, straight from [`hk_caps`].
pub fn hk_region_of(cfg: &ChannelConfig, allocs: &[HKAllocation]) -> Result<RateRegion> {
    let mut pts = Vec::with_capacity(2 * allocs.len());
    for a in allocs {
        let (c1, c2, s) = hk_caps(cfg, a)?;
        pts.extend_from_slice(region_from_caps(c1, c2, s).vertices());
    }
    if pts.is_empty() {
        return Ok(RateRegion::degenerate());
    }
    hull_of_points(&pts)
}
