//! Scalar IM/DD link: Gaussian tail, maximum-entropy input, and the capacity
//! lower and upper bounds that all interference-channel bounds are built on.
//!
//! Every function here is pure. Peaks are amplitudes already multiplied by the
//! channel gain.

use std::f64::consts::{E, LOG2_E, PI, SQRT_2};

use crate::error::{Error, Result};
use crate::numeric::grid_then_golden;

/// `1/(2πe)`, the entropy-power factor of the uniform input.
pub const RHO_UNIFORM: f64 = 1.0 / (2.0 * PI * E);

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

const XI_LO: f64 = 1e-3;
const XI_HI: f64 = 20.0;
const C1_GRID: usize = 64;
const C2_GRID: usize = 256;
const LOG_XTOL: f64 = 1e-9;
// The μ→0⁺ limit of the c₁ objective, evaluated at a point where the
// expm1-based form is still exact to double precision.
const MU_FLOOR: f64 = 1e-12;

/// Gaussian tail `Q(x) = P(N(0,1) > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// `1 - 2Q(x)` without cancellation for small `x`.
fn one_minus_2q(x: f64) -> f64 {
    libm::erf(x / SQRT_2)
}

/// `ψ(x) = 1/x − 1/(eˣ − 1)` together with `ψ'(x)`.
///
/// ψ decreases from ½ at 0⁺ to 0 at ∞; it is the mean-to-peak ratio of the
/// truncated exponential density with rate `x`.
pub(crate) fn mean_ratio(x: f64) -> (f64, f64) {
    if x < 0.05 {
        let x2 = x * x;
        let v = 0.5 - x / 12.0 + x * x2 / 720.0 - x * x2 * x2 / 30240.0;
        let d = -1.0 / 12.0 + x2 / 240.0 - x2 * x2 / 6048.0;
        (v, d)
    } else if x > 700.0 {
        let t = (-x).exp();
        (1.0 / x - t, -1.0 / (x * x) + t)
    } else {
        let em = x.exp_m1();
        (1.0 / x - 1.0 / em, -1.0 / (x * x) + (em + 1.0) / (em * em))
    }
}

/// Solves `ψ(x) = target` for `target ∈ (0, ½)`.
fn inverse_mean_ratio(target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while mean_ratio(hi).0 > target {
        lo = hi;
        hi *= 2.0;
    }
    // ψ ≈ ½ − x/12 near zero and ≈ 1/x for large x.
    let guess = if target > 0.3 { 12.0 * (0.5 - target) } else { 1.0 / target };
    let mut x = if guess > lo && guess < hi { guess } else { 0.5 * (lo + hi) };
    for _ in 0..300 {
        let (v, d) = mean_ratio(x);
        let r = v - target;
        if r == 0.0 {
            return x;
        }
        if r > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - r / d;
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - x).abs() <= 1e-15 * x.max(1e-300) || hi - lo <= 1e-16 * hi {
            return next;
        }
        x = next;
    }
    x
}

/// Unique positive root `μ*` of `α = 1/μ − e^{−μ}/(1 − e^{−μ})` for `α ∈ (0, ½)`.
pub fn solve_mu_star(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::domain(format!("mu* needs alpha in (0, 1/2), got {alpha}")));
    }
    Ok(inverse_mean_ratio(alpha))
}

fn check_ratio(ratio: f64) -> Result<()> {
    if ratio > 0.0 && ratio <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("ratio must lie in (0, 1], got {ratio}")))
    }
}

fn check_peak(peak: f64) -> Result<()> {
    if peak >= 0.0 && peak.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("peak must be finite and nonnegative, got {peak}")))
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("sigma must be finite and positive, got {sigma}")))
    }
}

fn rho_at(ratio: f64, mu: f64) -> f64 {
    let shape = -(-mu).exp_m1() / mu;
    (2.0 * ratio * mu - 1.0).exp() / (2.0 * PI) * shape * shape
}

/// Entropy-power factor `ρ(α)`: the maxent input has entropy power `ρ·A²`.
pub fn rho(ratio: f64) -> Result<f64> {
    check_ratio(ratio)?;
    if ratio >= 0.5 {
        Ok(RHO_UNIFORM)
    } else {
        Ok(rho_at(ratio, solve_mu_star(ratio)?))
    }
}

/// Entropy-maximizing input under peak `A` and mean `αA`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaxEntParams {
    pub peak: f64,
    pub ratio: f64,
    /// Rate of the truncated exponential; `None` when the density is uniform.
    pub mu_star: Option<f64>,
    pub rho: f64,
    /// Differential entropy in bits; `-inf` for a zero peak.
    pub entropy: f64,
}

impl MaxEntParams {
    /// `2^{2h}/(2πe) = ρA²`, which is 0 for a zero peak.
    pub fn entropy_power(&self) -> f64 {
        self.rho * self.peak * self.peak
    }

    /// Density at `x`.
    pub fn density(&self, x: f64) -> f64 {
        let a = self.peak;
        if a == 0.0 || !(0.0..=a).contains(&x) {
            return 0.0;
        }
        match self.mu_star {
            None => 1.0 / a,
            Some(mu) => mu / (a * -(-mu).exp_m1()) * (-mu * x / a).exp(),
        }
    }
}

pub fn maxent_params(peak: f64, ratio: f64) -> Result<MaxEntParams> {
    check_peak(peak)?;
    check_ratio(ratio)?;
    let mu_star = if ratio < 0.5 { Some(solve_mu_star(ratio)?) } else { None };
    let rho = mu_star.map_or(RHO_UNIFORM, |mu| rho_at(ratio, mu));
    let entropy = if peak == 0.0 {
        f64::NEG_INFINITY
    } else {
        0.5 * (2.0 * PI * E * rho * peak * peak).log2()
    };
    Ok(MaxEntParams {
        peak,
        ratio,
        mu_star,
        rho,
        entropy,
    })
}

/// `½·log₂(1 + ρ(α)A²/σ²)`.
pub fn capacity_lower(peak: f64, ratio: f64, sigma: f64) -> Result<f64> {
    check_peak(peak)?;
    check_sigma(sigma)?;
    let r = rho(ratio)?;
    let snr = peak / sigma;
    Ok(0.5 * (r * snr * snr).ln_1p() * LOG2_E)
}

/// The c₂ objective at `ξ` (both in units of σ).
pub(crate) fn c2_objective(a: f64, xi: f64) -> f64 {
    let e1 = (-0.5 * xi * xi).exp();
    let weight = one_minus_2q(xi + 0.5 * a);
    let arg = (a + 2.0 * xi) * INV_SQRT_2PI / one_minus_2q(xi);
    weight * arg.log2() + LOG2_E * (-0.5 + q_function(xi) + xi * INV_SQRT_2PI * e1)
}

/// Terms of the c₁ objective that do not depend on μ.
struct C1Terms {
    a: f64,
    xi: f64,
    w: f64,
    c: f64,
    base: f64,
    tail: f64,
    k: f64,
}

impl C1Terms {
    fn new(a: f64, alpha: f64, xi: f64) -> Self {
        let e1 = (-0.5 * xi * xi).exp();
        let e2 = (-0.5 * (a + xi) * (a + xi)).exp();
        let w = 1.0 - q_function(xi + alpha * a) - q_function(xi + (1.0 - alpha) * a);
        let base = a.ln() - LN_SQRT_2PI - one_minus_2q(xi).ln();
        let tail = -0.5 + q_function(xi) + xi * INV_SQRT_2PI * e1;
        let k = (e1 - e2) * INV_SQRT_2PI / a + alpha * one_minus_2q(xi + 0.5 * a);
        C1Terms {
            a,
            xi,
            w,
            c: 1.0 + 2.0 * xi / a,
            base,
            tail,
            k,
        }
    }

    fn value(&self, mu: f64) -> f64 {
        let log_term = self.base + mu * self.xi / self.a + (-(-mu * self.c).exp_m1()).ln() - mu.ln();
        LOG2_E * (self.w * log_term + self.tail + mu * self.k)
    }

    /// Minimizer over μ > 0. The objective is convex in μ and its stationarity
    /// condition reduces to `ψ(cμ) = τ`.
    fn best_mu(&self) -> f64 {
        let tau = (self.xi / self.a + self.k / self.w) / self.c;
        if tau >= 0.5 || !tau.is_finite() {
            MU_FLOOR
        } else {
            (inverse_mean_ratio(tau) / self.c).max(MU_FLOOR)
        }
    }
}

/// The c₁ objective minimized over μ for fixed ξ.
pub(crate) fn c1_profile(a: f64, alpha: f64, xi: f64) -> (f64, f64) {
    let t = C1Terms::new(a, alpha, xi);
    let mu = t.best_mu();
    (mu, t.value(mu))
}

fn upper_normalized(a: f64, ratio: f64) -> f64 {
    let (_, v) = if ratio < 0.5 {
        grid_then_golden(|xi| c1_profile(a, ratio, xi).1, XI_LO, XI_HI, C1_GRID, LOG_XTOL)
    } else {
        grid_then_golden(|xi| c2_objective(a, xi), XI_LO, XI_HI, C2_GRID, LOG_XTOL)
    };
    v
}

/// Capacity upper bound `C̄(A, α)`: c₁ for `α < ½`, c₂ otherwise.
///
/// `C̄(0, α) = 0`, and the result never falls below [`capacity_lower`].
pub fn capacity_upper(peak: f64, ratio: f64, sigma: f64) -> Result<f64> {
    check_peak(peak)?;
    check_sigma(sigma)?;
    check_ratio(ratio)?;
    if peak == 0.0 {
        return Ok(0.0);
    }
    let lower = capacity_lower(peak, ratio, sigma)?;
    let v = upper_normalized(peak / sigma, ratio);
    if !v.is_finite() {
        return Err(Error::NoConvergence { best: v });
    }
    Ok(v.max(lower))
}

/// Lower and upper capacity bounds of one link.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct P2PBound {
    pub peak: f64,
    pub ratio: f64,
    pub sigma: f64,
    pub lower: f64,
    pub upper: f64,
}

impl P2PBound {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }
}

pub fn bound_pair(peak: f64, ratio: f64, sigma: f64) -> Result<P2PBound> {
    let lower = capacity_lower(peak, ratio, sigma)?;
    let upper = capacity_upper(peak, ratio, sigma)?;
    Ok(P2PBound {
        peak,
        ratio,
        sigma,
        lower,
        upper,
    })
}

fn entropy_power(a: f64, t: f64) -> Result<f64> {
    if a == 0.0 {
        return Ok(0.0);
    }
    check_peak(a)?;
    Ok(rho(t)? * a * a)
}

/// F with the interference upper bound `C̄(a₃, t₃)` already evaluated.
pub(crate) fn f_with_upper(a1: f64, t1: f64, a2: f64, t2: f64, upper3: f64, sigma: f64) -> Result<f64> {
    let num = entropy_power(a1, t1)? + entropy_power(a2, t2)?;
    if num == 0.0 {
        return Ok(0.0);
    }
    let snr = num / (sigma * sigma) * (-2.0 * upper3 * std::f64::consts::LN_2).exp();
    Ok(0.5 * snr.ln_1p() * LOG2_E)
}

/// Entropy-power lower bound on the rate of a sum of two maxent signals seen
/// through noise plus an interferer whose rate is at most `C̄(a₃, t₃)`:
/// `½·log₂(1 + (ρ(t₁)a₁² + ρ(t₂)a₂²)/(σ²·2^{2C̄(a₃,t₃)}))`.
///
/// Zero peaks contribute nothing and their ratios are not inspected.
pub fn f_bound(a1: f64, a2: f64, a3: f64, t1: f64, t2: f64, t3: f64, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    let upper3 = if a3 == 0.0 { 0.0 } else { capacity_upper(a3, t3, sigma)? };
    f_with_upper(a1, t1, a2, t2, upper3, sigma)
}
