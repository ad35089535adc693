//! Generalized degrees of freedom of the symmetric channel, and the
//! normalized sum-rates `γ'` of each computable bound that approach it.

use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::sig9;
use crate::geometry::max_weighted_sum;
use crate::ic::{genie_outer, z_outer, ChannelConfig, InnerSweep, SweepGrid};
use crate::p2p::{capacity_lower, rho};
use crate::par::map_slice;

/// `min{max(1−δ, δ), max(1−δ/2, δ/2), 1}`.
pub fn gdof_closed_form(delta: f64) -> f64 {
    let a = (1.0 - delta).max(delta);
    let b = (1.0 - delta / 2.0).max(delta / 2.0);
    a.min(b).min(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bound {
    Tin,
    Hk,
    Z,
    Genie,
}

impl Bound {
    pub const ALL: [Bound; 4] = [Bound::Tin, Bound::Hk, Bound::Z, Bound::Genie];

    pub fn name(self) -> &'static str {
        match self {
            Bound::Tin => "tin",
            Bound::Hk => "hk",
            Bound::Z => "z",
            Bound::Genie => "genie",
        }
    }
}

impl FromStr for Bound {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tin" => Ok(Bound::Tin),
            "hk" => Ok(Bound::Hk),
            "z" => Ok(Bound::Z),
            "genie" | "ge" => Ok(Bound::Genie),
            other => Err(Error::config("bounds", format!("unknown bound `{other}` (expected tin, hk, z or genie)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GdofPoint {
    pub delta: f64,
    pub gamma_closed: f64,
    pub gamma_tin: f64,
    pub gamma_hk: f64,
    pub gamma_z: f64,
    pub gamma_ge: f64,
}

fn check_inputs(delta: f64, peak_ratio: f64) -> Result<()> {
    if !(peak_ratio > 1.0 && peak_ratio.is_finite()) {
        return Err(Error::config("peak_ratio", format!("must be finite and greater than 1, got {peak_ratio}")));
    }
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::config("delta", format!("must be finite and nonnegative, got {delta}")));
    }
    Ok(())
}

/// Symmetric channel with `A/σ = peak_ratio` and cross gain `(A/σ)^{δ−1}`.
pub fn symmetric_at(delta: f64, peak_ratio: f64, alpha: f64) -> Result<ChannelConfig> {
    check_inputs(delta, peak_ratio)?;
    ChannelConfig::symmetric(peak_ratio, 1.0, alpha, peak_ratio.powf(delta - 1.0))
}

/// `log₂(1 + ρ(α)A²/σ²)`, the normalization of every `γ'`.
pub fn normalizer(peak_ratio: f64, alpha: f64) -> Result<f64> {
    Ok(2.0 * capacity_lower(peak_ratio, alpha, 1.0)?)
}

/// Sum-rate of `bound` on the symmetric channel. Inner bounds include the
/// single-user corner, which TDMA always reaches.
fn sum_rate(cfg: &ChannelConfig, bound: Bound, sweep: Option<&InnerSweep>, grid: &SweepGrid) -> Result<f64> {
    let single = capacity_lower(cfg.peak, cfg.alpha[0], cfg.sigma)?;
    let owned;
    let sweep = match sweep {
        Some(s) => s,
        None if matches!(bound, Bound::Tin | Bound::Hk) => {
            owned = InnerSweep::new(cfg, grid)?;
            &owned
        }
        None => return outer_sum(cfg, bound),
    };
    match bound {
        Bound::Tin => Ok(sweep.tin_sum_rate().max(single)),
        Bound::Hk => Ok(sweep.hk_sum_rate()?.max(single)),
        Bound::Z | Bound::Genie => outer_sum(cfg, bound),
    }
}

fn outer_sum(cfg: &ChannelConfig, bound: Bound) -> Result<f64> {
    let region = match bound {
        Bound::Z => z_outer(cfg)?,
        _ => genie_outer(cfg)?,
    };
    Ok(max_weighted_sum(&region, 1.0, 1.0))
}

/// `γ'(δ) = R_sum / log₂(1 + ρ(α)A²/σ²)` for one bound.
pub fn gamma_prime(delta: f64, peak_ratio: f64, alpha: f64, bound: Bound, grid: &SweepGrid) -> Result<f64> {
    let cfg = symmetric_at(delta, peak_ratio, alpha)?;
    Ok(sum_rate(&cfg, bound, None, grid)? / normalizer(peak_ratio, alpha)?)
}

fn point(delta: f64, peak_ratio: f64, alpha: f64, grid: &SweepGrid) -> Result<GdofPoint> {
    let cfg = symmetric_at(delta, peak_ratio, alpha)?;
    let norm = normalizer(peak_ratio, alpha)?;
    let sweep = InnerSweep::new(&cfg, grid)?;
    let g = |b| -> Result<f64> { Ok(sum_rate(&cfg, b, Some(&sweep), grid)? / norm) };
    Ok(GdofPoint {
        delta,
        gamma_closed: gdof_closed_form(delta),
        gamma_tin: g(Bound::Tin)?,
        gamma_hk: g(Bound::Hk)?,
        gamma_z: g(Bound::Z)?,
        gamma_ge: g(Bound::Genie)?,
    })
}

/// `steps` evenly spaced values from `delta_min` to `delta_max` inclusive.
pub fn delta_grid(delta_min: f64, delta_max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::config("steps", format!("must be at least 2, got {steps}")));
    }
    if !(delta_min >= 0.0 && delta_min < delta_max && delta_max.is_finite()) {
        return Err(Error::config(
            "delta",
            format!("need 0 <= delta_min < delta_max, got [{delta_min}, {delta_max}]"),
        ));
    }
    let n = (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| delta_min + (delta_max - delta_min) * k as f64 / n)
        .collect())
}

/// Evaluates every bound at evenly spaced δ; output is ordered by δ.
pub fn gdof_sweep(
    peak_ratio: f64,
    alpha: f64,
    delta_min: f64,
    delta_max: f64,
    steps: usize,
    grid: &SweepGrid,
) -> Result<Vec<GdofPoint>> {
    let deltas = delta_grid(delta_min, delta_max, steps)?;
    check_inputs(delta_min, peak_ratio)?;
    rho(alpha)?;
    grid.validate()?;
    map_slice(&deltas, |&d| point(d, peak_ratio, alpha, grid))
        .into_iter()
        .collect()
}

pub fn write_csv<W: Write>(points: &[GdofPoint], mut w: W) -> std::io::Result<()> {
    writeln!(w, "delta,gamma_closed,gamma_tin,gamma_hk,gamma_z,gamma_ge")?;
    for p in points {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            sig9(p.delta),
            sig9(p.gamma_closed),
            sig9(p.gamma_tin),
            sig9(p.gamma_hk),
            sig9(p.gamma_z),
            sig9(p.gamma_ge)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_breakpoints() {
        assert_eq!(gdof_closed_form(0.0), 1.0);
        assert_eq!(gdof_closed_form(0.5), 0.5);
        assert!((gdof_closed_form(2.0 / 3.0) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(gdof_closed_form(1.0), 0.5);
        assert_eq!(gdof_closed_form(2.0), 1.0);
        assert_eq!(gdof_closed_form(3.0), 1.0);
    }

    #[test]
    fn bound_names_round_trip() {
        for b in Bound::ALL {
            assert_eq!(b.name().parse::<Bound>().unwrap(), b);
        }
        assert!("foo".parse::<Bound>().is_err());
    }

    #[test]
    fn delta_grid_validation() {
        assert_eq!(delta_grid(0.0, 2.0, 2).unwrap(), vec![0.0, 2.0]);
        assert!(delta_grid(0.0, 2.0, 1).is_err());
        assert!(delta_grid(1.0, 1.0, 5).is_err());
        assert!(gamma_prime(0.5, 1.0, 0.4, Bound::Z, &SweepGrid::default()).is_err());
    }
}
