//! Differential entropy of scalar Gaussian mixtures, plus the handful of
//! normal-distribution helpers the rate evaluators share.

use crate::error::{Error, Result};
use crate::gaussian::quad::{integrate, QuadratureCfg};

pub const LOG2_2PIE: f64 = 4.094191289364455; // log2(2 pi e)

/// ½ log2(2πe v): differential entropy of a Gaussian with variance v.
pub fn gaussian_entropy_bits(variance: f64) -> f64 {
    0.5 * (LOG2_2PIE + variance.log2())
}

pub fn normal_pdf(x: f64, mean: f64, variance: f64) -> f64 {
    let z = x - mean;
    (-z * z / (2.0 * variance)).exp() / (2.0 * std::f64::consts::PI * variance).sqrt()
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
    }
}

/// Entropy of a discrete pmf in bits.
pub fn discrete_entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&v| v > 0.0).map(|&v| -v * v.log2()).sum()
}

/// Scalar Gaussian mixture Σ w_i N(μ_i, σ_i²).
#[derive(Debug, Clone)]
pub struct GaussianMixture {
    means: Vec<f64>,
    variances: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussianMixture {
    pub fn new(means: Vec<f64>, variances: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if means.len() != variances.len() || means.len() != weights.len() || means.is_empty() {
            return Err(Error::DimensionMismatch("mixture component lists differ".into()));
        }
        if variances.iter().any(|&v| v <= 0.0) {
            return Err(Error::InvalidParameter("mixture variance must be positive".into()));
        }
        if weights.iter().any(|&w| w < 0.0) {
            return Err(Error::InvalidParameter("mixture weight must be nonnegative".into()));
        }
        let s: f64 = weights.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized { sum: s, tol: 1e-9 });
        }
        Ok(GaussianMixture { means, variances, weights })
    }

    /// Equal-weight two-component mixture at ±mean, shared variance —
    /// the BPSK output law.
    pub fn bpsk(mean: f64, variance: f64) -> Self {
        GaussianMixture {
            means: vec![mean, -mean],
            variances: vec![variance, variance],
            weights: vec![0.5, 0.5],
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.means
            .iter()
            .zip(&self.variances)
            .zip(&self.weights)
            .map(|((&m, &v), &w)| if w > 0.0 { w * normal_pdf(x, m, v) } else { 0.0 })
            .sum()
    }

    /// Integration window: `truncation` standard deviations (of the widest
    /// component) beyond the outermost means.
    pub fn support(&self, cfg: &QuadratureCfg) -> (f64, f64) {
        let sd_max = self
            .variances
            .iter()
            .fold(0.0f64, |a, &v| a.max(v))
            .sqrt();
        let lo = self.means.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = self.means.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (lo - cfg.truncation * sd_max, hi + cfg.truncation * sd_max)
    }

    /// −∫ f log2 f, in bits.
    pub fn entropy_bits(&self, cfg: &QuadratureCfg) -> Result<f64> {
        let (lo, hi) = self.support(cfg);
        integrate(
            |x| {
                let v = self.pdf(x);
                if v > 0.0 {
                    -v * v.log2()
                } else {
                    0.0
                }
            },
            lo,
            hi,
            cfg.abs_tol,
        )
    }
}

/// Convenience wrapper matching the flat-argument shape of the callers.
pub fn mixture_entropy(
    means: &[f64],
    variances: &[f64],
    weights: &[f64],
    cfg: &QuadratureCfg,
) -> Result<f64> {
    GaussianMixture::new(means.to_vec(), variances.to_vec(), weights.to_vec())?.entropy_bits(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_gaussian_closed_form() {
        let cfg = QuadratureCfg::default_1d();
        for &v in &[0.25, 1.0, 7.3] {
            let h = mixture_entropy(&[2.0], &[v], &[1.0], &cfg).unwrap();
            assert_abs_diff_eq!(h, gaussian_entropy_bits(v), epsilon = 1e-8);
        }
    }

    #[test]
    fn wide_symmetric_mixture_approaches_noise_entropy() {
        // at sigma = 55 the two-component BPSK output is within 1e-3 bits of
        // a single Gaussian (measured gap ~2.4e-4)
        let cfg = QuadratureCfg::default_1d();
        let s2 = 55.0 * 55.0;
        let h = GaussianMixture::bpsk(1.0, s2).entropy_bits(&cfg).unwrap();
        let gap = h - gaussian_entropy_bits(s2);
        assert!(gap > 0.0 && gap < 1e-3, "gap {gap}");
        assert_abs_diff_eq!(gap, 2.384225837e-4, epsilon = 1e-9);
    }

    #[test]
    fn well_separated_modes() {
        let cfg = QuadratureCfg::default_1d();
        let h = GaussianMixture::bpsk(5.0, 1.0).entropy_bits(&cfg).unwrap();
        assert_abs_diff_eq!(h, 1.0 + gaussian_entropy_bits(1.0), epsilon = 1e-4);
        assert_abs_diff_eq!(h, 3.047094339895, epsilon = 1e-8);
    }

    #[test]
    fn monte_carlo_cross_check() {
        // importance-free MC: h ≈ -E log2 f(X), X ~ mixture
        let cfg = QuadratureCfg::default_1d();
        let gm = GaussianMixture::new(
            vec![-1.5, 0.0, 2.0],
            vec![0.7, 1.3, 0.4],
            vec![0.3, 0.45, 0.25],
        )
        .unwrap();
        let h = gm.entropy_bits(&cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n = 400_000usize;
        let mut acc = 0.0;
        let mut acc2 = 0.0;
        for _ in 0..n {
            let u: f64 = rng.gen();
            let k = if u < 0.3 {
                0
            } else if u < 0.75 {
                1
            } else {
                2
            };
            let x = rng.sample::<f64, _>(rand_distr::StandardNormal) * gm.variances[k].sqrt()
                + gm.means[k];
            let l = -gm.pdf(x).log2();
            acc += l;
            acc2 += l * l;
        }
        let mean = acc / n as f64;
        let se = ((acc2 / n as f64 - mean * mean) / n as f64).sqrt();
        assert!(
            (h - mean).abs() < 3.0 * se,
            "quadrature {h} vs MC {mean} ± {se}"
        );
    }

    #[test]
    fn halving_tolerance_is_stable() {
        let tight = QuadratureCfg::new(0.5e-9, 10.0).unwrap();
        let normal = QuadratureCfg::default_1d();
        let gm = GaussianMixture::bpsk(1.3, 0.8);
        let a = gm.entropy_bits(&normal).unwrap();
        let b = gm.entropy_bits(&tight).unwrap();
        assert!((a - b).abs() < 5.0 * normal.abs_tol);
    }

    #[test]
    fn rejects_bad_mixtures() {
        assert!(GaussianMixture::new(vec![0.0], vec![0.0], vec![1.0]).is_err());
        assert!(GaussianMixture::new(vec![0.0], vec![1.0], vec![0.5]).is_err());
        assert!(GaussianMixture::new(vec![0.0, 1.0], vec![1.0], vec![1.0]).is_err());
    }

    #[test]
    fn cdf_sanity() {
        assert_abs_diff_eq!(normal_cdf(0.0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(normal_cdf(1.96), 0.9750021048517795, epsilon = 1e-12);
        assert_abs_diff_eq!(normal_cdf(-1.96), 1.0 - 0.9750021048517795, epsilon = 1e-12);
    }
}
