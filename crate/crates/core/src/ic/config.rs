use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two-user IM/DD interference channel `Y_j = h_jj X_j + h_ij X_i + Z_j`.
///
/// `gains[i][j]` is the gain from transmitter `i` to receiver `j` (zero-based).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub peak: f64,
    pub sigma: f64,
    pub alpha: [f64; 2],
    pub gains: [[f64; 2]; 2],
}

impl ChannelConfig {
    pub fn new(peak: f64, sigma: f64, alpha: [f64; 2], gains: [[f64; 2]; 2]) -> Result<Self> {
        let cfg = ChannelConfig {
            peak,
            sigma,
            alpha,
            gains,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `h11 = h22 = 1`, `h12 = h21 = g`, equal ratios.
    pub fn symmetric(peak: f64, sigma: f64, alpha: f64, g: f64) -> Result<Self> {
        Self::new(peak, sigma, [alpha, alpha], [[1.0, g], [g, 1.0]])
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ChannelConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.peak > 0.0 && self.peak.is_finite()) {
            return Err(Error::config("peak", format!("must be finite and positive, got {}", self.peak)));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::config("sigma", format!("must be finite and positive, got {}", self.sigma)));
        }
        for (i, &a) in self.alpha.iter().enumerate() {
            if !(a > 0.0 && a <= 1.0) {
                return Err(Error::config(format!("alpha[{i}]"), format!("must lie in (0, 1], got {a}")));
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                let h = self.gains[i][j];
                if !(h >= 0.0 && h.is_finite()) {
                    return Err(Error::config(
                        format!("gains[{i}][{j}]"),
                        format!("must be finite and nonnegative, got {h}"),
                    ));
                }
            }
            if self.gains[i][i] == 0.0 {
                return Err(Error::config(format!("gains[{i}][{i}]"), "direct link gain must be positive"));
            }
        }
        Ok(())
    }

    pub fn gain(&self, tx: usize, rx: usize) -> f64 {
        self.gains[tx][rx]
    }

    /// Invariant under relabeling the two users.
    pub fn is_symmetric(&self) -> bool {
        self.gains[0][0] == self.gains[1][1] && self.gains[0][1] == self.gains[1][0] && self.alpha[0] == self.alpha[1]
    }

    /// The same channel with the user labels exchanged.
    pub fn swapped(&self) -> Self {
        let g = self.gains;
        ChannelConfig {
            peak: self.peak,
            sigma: self.sigma,
            alpha: [self.alpha[1], self.alpha[0]],
            gains: [[g[1][1], g[1][0]], [g[0][1], g[0][0]]],
        }
    }
}

/// Discretization of the allocation unions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    /// Number of levels in `{0, 1/(n-1), …, 1}·A` for κ and η.
    pub peak_steps: usize,
    /// Number of levels from `ratio_floor` to 1 for θ and φ.
    pub ratio_steps: usize,
    pub ratio_floor: f64,
    /// Extra private-peak levels `(σ/A)^{j/n}`, `j = 1..=n`, log-spaced down to
    /// the noise floor. The linear levels alone cannot place a private signal
    /// near noise level at the unintended receiver once A/σ is large.
    #[serde(default)]
    pub fine_peak_steps: usize,
}

impl Default for SweepGrid {
    fn default() -> Self {
        SweepGrid {
            peak_steps: 17,
            ratio_steps: 9,
            ratio_floor: 0.05,
            fine_peak_steps: 16,
        }
    }
}

impl SweepGrid {
    /// Coarser grid for scenario sweeps that evaluate thousands of channels.
    pub const REDUCED: SweepGrid = SweepGrid {
        peak_steps: 9,
        ratio_steps: 5,
        ratio_floor: 0.05,
        fine_peak_steps: 0,
    };

    pub fn new(peak_steps: usize, ratio_steps: usize, ratio_floor: f64, fine_peak_steps: usize) -> Result<Self> {
        let g = SweepGrid {
            peak_steps,
            ratio_steps,
            ratio_floor,
            fine_peak_steps,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.peak_steps < 2 {
            return Err(Error::config("peak_steps", format!("must be at least 2, got {}", self.peak_steps)));
        }
        if self.ratio_steps < 2 {
            return Err(Error::config("ratio_steps", format!("must be at least 2, got {}", self.ratio_steps)));
        }
        if !(self.ratio_floor > 0.0 && self.ratio_floor <= 0.1) {
            return Err(Error::config("ratio_floor", format!("must lie in (0, 0.1], got {}", self.ratio_floor)));
        }
        Ok(())
    }

    /// Peak fractions `k/(peak_steps-1)`.
    pub fn peak_levels(&self) -> Vec<f64> {
        let n = self.peak_steps - 1;
        (0..=n).map(|k| k as f64 / n as f64).collect()
    }

    /// Private-peak fractions: the linear levels merged with the fine levels
    /// for peak-to-noise ratio `snr`.
    pub fn private_levels(&self, snr: f64) -> Vec<f64> {
        let mut v = self.peak_levels();
        if snr > 1.0 {
            let n = self.fine_peak_steps as f64;
            v.extend((1..=self.fine_peak_steps).map(|j| snr.powf(-(j as f64) / n)));
        }
        v.sort_by(f64::total_cmp);
        v.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
        v
    }

    pub fn ratio_levels(&self) -> Vec<f64> {
        let n = self.ratio_steps - 1;
        (0..=n)
            .map(|k| self.ratio_floor + (1.0 - self.ratio_floor) * k as f64 / n as f64)
            .collect()
    }
}

/// One point of the simplified Han–Kobayashi allocation set: private peaks
/// `kappa`, common peaks `eta`, and the matching average-to-peak ratios.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HKAllocation {
    pub kappa: [f64; 2],
    pub eta: [f64; 2],
    pub theta: [f64; 2],
    pub phi: [f64; 2],
}

impl HKAllocation {
    /// Checks `κᵢ + ηᵢ ≤ A` and `θᵢκᵢ + φᵢηᵢ ≤ αᵢA` (relative slack 1e-12).
    pub fn is_valid(&self, cfg: &ChannelConfig) -> bool {
        let a = cfg.peak;
        let slack = 1e-12 * a;
        (0..2).all(|i| {
            let ratios_ok = (self.kappa[i] == 0.0 || (self.theta[i] > 0.0 && self.theta[i] <= 1.0))
                && (self.eta[i] == 0.0 || (self.phi[i] > 0.0 && self.phi[i] <= 1.0));
            ratios_ok
                && self.kappa[i] >= 0.0
                && self.eta[i] >= 0.0
                && self.kappa[i] + self.eta[i] <= a + slack
                && self.theta[i] * self.kappa[i] + self.phi[i] * self.eta[i] <= cfg.alpha[i] * a + slack
        })
    }

    /// Ratio of the private-signal mixture seen at receiver `rx`:
    /// `(h_kk θ_k κ_k + h_jk θ_j κ_j)/(h_kk κ_k + h_jk κ_j)`, or 0 with no private power.
    pub fn theta_prime(&self, cfg: &ChannelConfig, rx: usize) -> f64 {
        let num = cfg.gain(0, rx) * self.theta[0] * self.kappa[0] + cfg.gain(1, rx) * self.theta[1] * self.kappa[1];
        let den = cfg.gain(0, rx) * self.kappa[0] + cfg.gain(1, rx) * self.kappa[1];
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(ChannelConfig::symmetric(1000.0, 1.0, 0.4, 0.5).is_ok());
        assert!(ChannelConfig::symmetric(0.0, 1.0, 0.4, 0.5).is_err());
        assert!(ChannelConfig::symmetric(1.0, 1.0, 0.0, 0.5).is_err());
        assert!(ChannelConfig::new(1.0, 1.0, [0.5, 0.5], [[0.0, 1.0], [1.0, 1.0]]).is_err());
        let e = ChannelConfig::new(1.0, 1.0, [0.5, 0.5], [[1.0, -1.0], [1.0, 1.0]]).unwrap_err();
        assert!(e.to_string().contains("gains[0][1]"));
    }

    #[test]
    fn json_names_bad_field() {
        let e = ChannelConfig::from_json(r#"{"peak":1,"sigma":1,"alpha":[0.5,2],"gains":[[1,0],[0,1]]}"#).unwrap_err();
        assert!(e.to_string().contains("alpha[1]"), "{e}");
        let e = ChannelConfig::from_json(r#"{"peak":1,"alpha":[0.5,0.5],"gains":[[1,0],[0,1]]}"#).unwrap_err();
        assert!(e.to_string().contains("sigma"), "{e}");
    }

    #[test]
    fn swapping() {
        let c = ChannelConfig::new(5.0, 1.0, [0.2, 0.7], [[1.0, 0.3], [0.6, 2.0]]).unwrap();
        let s = c.swapped();
        assert_eq!(s.gains, [[2.0, 0.6], [0.3, 1.0]]);
        assert_eq!(s.swapped(), c);
        assert!(!c.is_symmetric());
        assert!(ChannelConfig::symmetric(5.0, 1.0, 0.3, 0.2).unwrap().is_symmetric());
    }

    #[test]
    fn grid_levels() {
        let g = SweepGrid::default();
        assert_eq!(g.peak_levels().len(), 17);
        let r = g.ratio_levels();
        assert_eq!(r.len(), 9);
        assert_eq!(r[0], 0.05);
        assert_eq!(r[8], 1.0);
        let p = g.private_levels(1e4);
        assert_eq!(p.len(), 17 + 16);
        assert!((p[1] - 1e-4).abs() < 1e-18);
        assert_eq!(SweepGrid::REDUCED.private_levels(1e4), SweepGrid::REDUCED.peak_levels());
        assert!(SweepGrid::new(1, 5, 0.05, 0).is_err());
        assert!(SweepGrid::new(3, 5, 0.2, 0).is_err());
    }

    #[test]
    fn theta_prime_mixture() {
        let c = ChannelConfig::new(1.0, 1.0, [0.5, 0.5], [[1.0, 0.5], [2.0, 1.0]]).unwrap();
        let a = HKAllocation {
            kappa: [0.5, 0.25],
            eta: [0.5, 0.75],
            theta: [0.2, 0.4],
            phi: [0.1, 0.1],
        };
        let want = (1.0 * 0.2 * 0.5 + 2.0 * 0.4 * 0.25) / (0.5 + 0.5);
        assert!((a.theta_prime(&c, 0) - want).abs() < 1e-15);
        let none = HKAllocation {
            kappa: [0.0, 0.0],
            ..a
        };
        assert_eq!(none.theta_prime(&c, 1), 0.0);
        assert!(a.is_valid(&c));
    }
}
