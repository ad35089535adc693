//! Allocation sweeps behind the TIN and Han–Kobayashi inner bounds.
//!
//! Reductions used here, none of which shrink the swept region:
//! * ratios above ½ are clamped to ½, since ρ and C̄ are flat beyond ½ and a
//!   smaller ratio leaves more of the average budget for the common part;
//! * the common ratio φ takes the whole remaining budget (capped at 1), since
//!   φ only enters numerators through the nondecreasing ρ;
//! * for each pair of private choices the two interference upper bounds are
//!   computed once and reused for every pair of common choices.

use std::f64::consts::LN_2;

use dashmap::DashMap;

use super::config::{ChannelConfig, HKAllocation, SweepGrid};
use crate::error::Result;
use crate::geometry::{hull_of_points, pentagon_corners, RatePair, RateRegion};
use crate::p2p::{capacity_upper, rho};
use crate::par::map_range;

/// Concurrent memo of `C̄(a, t)` for one noise level, keyed by `a/σ` and `t`
/// rounded to 12 significant digits. Ratios at or above ½ share one key.
pub struct UpperCache {
    sigma: f64,
    map: DashMap<(i64, i32, i64, i32), f64>,
}

fn round12(x: f64) -> (i64, i32) {
    if x == 0.0 {
        return (0, 0);
    }
    let e = x.abs().log10().floor() as i32 - 11;
    ((x / 10f64.powi(e)).round() as i64, e)
}

impl UpperCache {
    pub fn new(sigma: f64) -> Self {
        UpperCache {
            sigma,
            map: DashMap::new(),
        }
    }

    pub fn get(&self, a: f64, t: f64) -> Result<f64> {
        if a == 0.0 {
            return Ok(0.0);
        }
        let t = t.min(0.5);
        let (m1, e1) = round12(a / self.sigma);
        let (m2, e2) = round12(t);
        let key = (m1, e1, m2, e2);
        if let Some(v) = self.map.get(&key) {
            return Ok(*v);
        }
        let v = capacity_upper(a, t, self.sigma)?;
        self.map.insert(key, v);
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[derive(Debug)]
struct Common {
    eta: f64,
    phi: f64,
    /// `ρ(φ)·(h_ik η)²` at receiver k.
    power: [f64; 2],
}

#[derive(Debug)]
struct Private {
    kappa: f64,
    theta: f64,
    /// `ρ(θ)·(h_ii κ)²` at the own receiver.
    own_power: f64,
    /// `C̄(h_ij κ, θ)` at the other receiver.
    leak_upper: f64,
    commons: Vec<Common>,
}

fn half_log(x: f64) -> f64 {
    0.5 * x.ln_1p() / LN_2
}

fn private_choices(cfg: &ChannelConfig, grid: &SweepGrid, user: usize, cache: &UpperCache) -> Result<Vec<Private>> {
    let a = cfg.peak;
    let alpha = cfg.alpha[user];
    let peaks = grid.peak_levels();
    let ratios = grid.ratio_levels();
    let mut out = Vec::new();
    for kf in grid.private_levels(cfg.peak / cfg.sigma) {
        let kappa = kf * a;
        let mut thetas: Vec<f64> = if kappa == 0.0 {
            vec![1.0]
        } else {
            let cap = (alpha * a / kappa).min(1.0);
            let mut t: Vec<f64> = ratios.iter().copied().filter(|&r| r <= cap).chain([cap]).collect();
            t.iter_mut().for_each(|r| *r = r.min(0.5));
            t
        };
        thetas.sort_by(f64::total_cmp);
        thetas.dedup();
        for theta in thetas {
            let own = cfg.gain(user, user) * kappa;
            let leak = cfg.gain(user, 1 - user) * kappa;
            let own_power = if kappa == 0.0 { 0.0 } else { rho(theta)? * own * own };
            let leak_upper = cache.get(leak, theta)?;
            let budget = alpha * a - theta * kappa;
            // Linear levels that fit next to κ, plus the level that fills the peak.
            let mut etas: Vec<f64> = peaks.iter().map(|&ef| ef * a).filter(|&e| kappa + e <= a * (1.0 + 1e-12)).collect();
            if etas.last().is_some_and(|&e| a - kappa - e > 1e-12 * a) {
                etas.push(a - kappa);
            }
            let mut commons = Vec::new();
            for eta in etas {
                if eta == 0.0 {
                    commons.push(Common {
                        eta,
                        phi: 1.0,
                        power: [0.0; 2],
                    });
                    continue;
                }
                if budget <= 0.0 {
                    continue;
                }
                let phi = (budget / eta).min(1.0);
                let r = rho(phi)?;
                let power = [0, 1].map(|k| {
                    let s = cfg.gain(user, k) * eta;
                    r * s * s
                });
                commons.push(Common { eta, phi, power });
            }
            out.push(Private {
                kappa,
                theta,
                own_power,
                leak_upper,
                commons,
            });
        }
    }
    Ok(out)
}

/// Precomputed per-user choices for one channel and grid. All inner-bound
/// queries for that channel go through one of these.
pub struct InnerSweep {
    cfg: ChannelConfig,
    choices: [Vec<Private>; 2],
    cache: UpperCache,
    symmetric: bool,
}

struct PairBounds {
    tin: [f64; 2],
    /// `σ²·2^{2C̄(P_k, θ'_k)}` at each receiver.
    denom: [f64; 2],
}

impl InnerSweep {
    pub fn new(cfg: &ChannelConfig, grid: &SweepGrid) -> Result<Self> {
        cfg.validate()?;
        grid.validate()?;
        let cache = UpperCache::new(cfg.sigma);
        let symmetric = cfg.is_symmetric();
        let first = private_choices(cfg, grid, 0, &cache)?;
        let second = private_choices(cfg, grid, 1, &cache)?;
        Ok(InnerSweep {
            cfg: *cfg,
            choices: [first, second],
            cache,
            symmetric,
        })
    }

    /// Number of (private, common) allocation pairs covered.
    pub fn allocation_count(&self) -> usize {
        let count = |u: usize| self.choices[u].iter().map(|p| p.commons.len()).sum::<usize>();
        count(0) * count(1)
    }

    pub fn cache(&self) -> &UpperCache {
        &self.cache
    }

    fn tin_pair(&self, p1: &Private, p2: &Private) -> [f64; 2] {
        let s2 = self.cfg.sigma * self.cfg.sigma;
        let rate = |own: &Private, other: &Private| {
            if own.own_power == 0.0 {
                0.0
            } else {
                half_log(own.own_power / (s2 * (2.0 * other.leak_upper * LN_2).exp()))
            }
        };
        [rate(p1, p2), rate(p2, p1)]
    }

    fn pair_bounds(&self, p1: &Private, p2: &Private) -> Result<PairBounds> {
        let s2 = self.cfg.sigma * self.cfg.sigma;
        let alloc = HKAllocation {
            kappa: [p1.kappa, p2.kappa],
            eta: [0.0; 2],
            theta: [p1.theta, p2.theta],
            phi: [1.0; 2],
        };
        let mut denom = [0.0; 2];
        for (k, d) in denom.iter_mut().enumerate() {
            let total = self.cfg.gain(0, k) * p1.kappa + self.cfg.gain(1, k) * p2.kappa;
            let u = self.cache.get(total, alloc.theta_prime(&self.cfg, k))?;
            *d = s2 * (2.0 * u * LN_2).exp();
        }
        Ok(PairBounds {
            tin: self.tin_pair(p1, p2),
            denom,
        })
    }

    /// Index pairs to visit for row `i`; symmetric channels only visit `j ≥ i`.
    fn columns(&self, i: usize) -> std::ops::Range<usize> {
        if self.symmetric {
            i..self.choices[1].len()
        } else {
            0..self.choices[1].len()
        }
    }

    fn rows<R: Send>(&self, f: impl Fn(usize) -> Result<R> + Sync + Send) -> Result<Vec<R>> {
        map_range(self.choices[0].len(), f).into_iter().collect()
    }

    /// Corner points `(tin1, tin2)` of every private allocation.
    pub fn tin_points(&self) -> Vec<RatePair> {
        let mut pts = Vec::new();
        for p1 in &self.choices[0] {
            for p2 in &self.choices[1] {
                let [r1, r2] = self.tin_pair(p1, p2);
                pts.push(RatePair::new(r1, r2));
            }
        }
        pts
    }

    pub fn tin_region(&self) -> Result<RateRegion> {
        hull_of_points(&self.tin_points())
    }

    pub fn tin_sum_rate(&self) -> f64 {
        self.tin_points().iter().map(|p| p.r1 + p.r2).fold(0.0, f64::max)
    }

    /// Pentagon caps `(a1, a2, s)` for every common pair under one private pair.
    fn for_each_caps(&self, p1: &Private, p2: &Private, mut f: impl FnMut(f64, f64, f64)) -> Result<()> {
        let b = self.pair_bounds(p1, p2)?;
        let [t1, t2] = b.tin;
        let [d1, d2] = b.denom;
        for c1 in &p1.commons {
            let x1 = [c1.power[0] / d1, c1.power[1] / d2];
            let a1 = t1 + half_log(x1[0].min(x1[1]));
            for c2 in &p2.commons {
                let x2 = [c2.power[0] / d1, c2.power[1] / d2];
                let a2 = t2 + half_log(x2[0].min(x2[1]));
                let s = t1 + t2 + half_log((x1[0] + x2[0]).min(x1[1] + x2[1]));
                f(a1, a2, s);
            }
        }
        Ok(())
    }

    pub fn hk_region(&self) -> Result<RateRegion> {
        let rows = self.rows(|i| {
            let p1 = &self.choices[0][i];
            let mut pts = Vec::new();
            for j in self.columns(i) {
                self.for_each_caps(p1, &self.choices[1][j], |a1, a2, s| {
                    for c in pentagon_corners(a1, a2, s) {
                        pts.push(c);
                        if self.symmetric {
                            pts.push(c.swapped());
                        }
                    }
                })?;
            }
            Ok(hull_of_points(&pts)?.vertices().to_vec())
        })?;
        let all: Vec<RatePair> = rows.into_iter().flatten().collect();
        hull_of_points(&all)
    }

    pub fn hk_sum_rate(&self) -> Result<f64> {
        let rows = self.rows(|i| {
            let p1 = &self.choices[0][i];
            let mut best = 0.0_f64;
            for j in self.columns(i) {
                self.for_each_caps(p1, &self.choices[1][j], |a1, a2, s| {
                    best = best.max((a1 + a2).min(s));
                })?;
            }
            Ok(best)
        })?;
        Ok(rows.into_iter().fold(0.0, f64::max))
    }

    /// Every allocation visited by the sweep, in sweep order (no symmetry reduction).
    pub fn allocations(&self) -> Vec<HKAllocation> {
        let mut out = Vec::new();
        for p1 in &self.choices[0] {
            for p2 in &self.choices[1] {
                for c1 in &p1.commons {
                    for c2 in &p2.commons {
                        out.push(HKAllocation {
                            kappa: [p1.kappa, p2.kappa],
                            eta: [c1.eta, c2.eta],
                            theta: [p1.theta, p2.theta],
                            phi: [c1.phi, c2.phi],
                        });
                    }
                }
            }
        }
        out
    }
}
