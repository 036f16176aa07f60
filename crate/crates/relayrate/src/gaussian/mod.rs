//! Rates for the Gaussian relay channel with an orthogonal finite-capacity
//! relay link: the Gaussian-codebook closed form, BPSK coded-modulation
//! evaluation of decode-and-forward, the cut-set bound, Gaussian and
//! hard-decision quantizers, low-SNR asymptotics, and the best-strategy
//! region map.

pub mod gq;
pub mod hard_decision;
pub mod low_snr;
pub mod mixture;
pub mod quad;
pub mod region;

pub use gq::{gq_bpsk_rate, GqBpskResult};
pub use hard_decision::{
    best_dhd, best_hd_eaf, best_ts_dhd, dhd_rate, hd_eaf_rate, ts_dhd_rate, MappingParams,
};
pub use low_snr::{low_snr_rates, LowSnrRates};
pub use mixture::{gaussian_entropy_bits, mixture_entropy, GaussianMixture};
pub use quad::{integrate, integrate_2d, QuadratureCfg};
pub use region::{strategy_region_map, RegionCell, RegionMap, StrategyLabel};

use crate::error::{Error, Result};
use crate::single_relay::FeasibleRate;

/// Quadrature-limited feasibility tolerance for the continuous evaluators.
pub const GAUSS_SLACK_TOL: f64 = 1e-7;

pub(crate) fn feasible(rate: f64, slack: f64) -> FeasibleRate {
    FeasibleRate { rate, slack, feasible: slack >= -GAUSS_SLACK_TOL }
}

/// Source power, relay link gain, the two noise variances, and the
/// capacity of the noiseless relay→destination link (bits/use).
#[derive(Debug, Clone, Copy)]
pub struct GaussianCmParams {
    pub p: f64,
    pub g: f64,
    pub sigma2: f64,
    pub sigma1_2: f64,
    pub c: f64,
}

impl GaussianCmParams {
    pub fn new(p: f64, g: f64, sigma2: f64, sigma1_2: f64, c: f64) -> Result<Self> {
        if p <= 0.0 || sigma2 <= 0.0 || sigma1_2 <= 0.0 {
            return Err(Error::InvalidParameter(
                "power and noise variances must be positive".into(),
            ));
        }
        if g < 0.0 || c < 0.0 {
            return Err(Error::InvalidParameter("gain and link capacity must be >= 0".into()));
        }
        Ok(GaussianCmParams { p, g, sigma2, sigma1_2, c })
    }

    /// Unit-variance convenience constructor (the published evaluations use
    /// P = σ² = σ₁² = 1).
    pub fn unit(g: f64, c: f64) -> Self {
        GaussianCmParams { p: 1.0, g, sigma2: 1.0, sigma1_2: 1.0, c }
    }

    pub fn with_c(self, c: f64) -> Self {
        GaussianCmParams { c, ..self }
    }

    pub fn with_g(self, g: f64) -> Self {
        GaussianCmParams { g, ..self }
    }
}

/// How the printed gain parameter scales the relay observation.
/// The source text mixes two readings; `Amplitude` (relay mean g·√P, the
/// appendix convention) is the default, `Power` reads g as a power gain
/// (relay mean √(g·P), the closed-form convention).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GainConvention {
    #[default]
    Amplitude,
    Power,
}

impl GainConvention {
    pub fn relay_mean(&self, p: &GaussianCmParams) -> f64 {
        match self {
            GainConvention::Amplitude => p.g * p.p.sqrt(),
            GainConvention::Power => (p.g * p.p).sqrt(),
        }
    }
}

/// Gaussian-codebook estimate-and-forward with Gaussian quantization,
/// closed form. Evaluated on SNR-normalized quantities so that it reduces
/// verbatim to the printed formula when σ² = σ₁² = 1:
/// R = ½ log2(1 + P + gP/(1 + σ_Q²)), σ_Q² = (1+P+gP)/((2^{2C}−1)(P+1)).
pub fn gq_gaussian_codebook_rate(params: &GaussianCmParams) -> f64 {
    let snr_d = params.p / params.sigma2;
    let snr_r = params.g * params.p / params.sigma1_2;
    if params.c <= 0.0 {
        return 0.5 * (1.0 + snr_d).log2();
    }
    let link = (2.0f64).powf(2.0 * params.c) - 1.0;
    let sigma_q2 = (1.0 + snr_d + snr_r) / (link * (snr_d + 1.0));
    0.5 * (1.0 + snr_d + snr_r / (1.0 + sigma_q2)).log2()
}

/// I(X;Y) of BPSK with amplitude `amp` over AWGN of variance `var`.
pub fn bpsk_mi(amp: f64, var: f64, cfg: &QuadratureCfg) -> Result<f64> {
    if amp == 0.0 {
        return Ok(0.0);
    }
    let h = GaussianMixture::bpsk(amp, var).entropy_bits(cfg)?;
    Ok((h - gaussian_entropy_bits(var)).max(0.0))
}

/// Decode-and-forward under BPSK: min{I(X;Y₁), I(X;Y) + C}.
pub fn daf_bpsk_rate(
    params: &GaussianCmParams,
    conv: GainConvention,
    cfg: &QuadratureCfg,
) -> Result<f64> {
    let to_relay = bpsk_mi(conv.relay_mean(params), params.sigma1_2, cfg)?;
    let direct = bpsk_mi(params.p.sqrt(), params.sigma2, cfg)?;
    Ok(to_relay.min(direct + params.c))
}

/// Joint output entropy h(Y, V) of the symmetric two-component bivariate
/// mixture ½ G(μ)G(ν) + ½ G(−μ)G(−ν) with independent coordinates, by
/// iterated 2-D quadrature.
pub fn bpsk_pair_entropy(
    mean_y: f64,
    var_y: f64,
    mean_v: f64,
    var_v: f64,
    cfg: &QuadratureCfg,
) -> Result<f64> {
    let sy = var_y.sqrt();
    let sv = var_v.sqrt();
    let f = move |y: f64, v: f64| {
        let a = mixture::normal_pdf(y, mean_y, var_y) * mixture::normal_pdf(v, mean_v, var_v);
        let b = mixture::normal_pdf(y, -mean_y, var_y) * mixture::normal_pdf(v, -mean_v, var_v);
        let p = 0.5 * (a + b);
        if p > 0.0 {
            -p * p.log2()
        } else {
            0.0
        }
    };
    let k = cfg.truncation;
    integrate_2d(
        f,
        (-mean_y.abs() - k * sy, mean_y.abs() + k * sy),
        (-mean_v.abs() - k * sv, mean_v.abs() + k * sv),
        cfg.abs_tol,
    )
}

/// Cut-set upper bound under BPSK: min{I(X;Y) + C, I(X;Y,Y₁)}.
pub fn upper_bound_bpsk(
    params: &GaussianCmParams,
    conv: GainConvention,
    cfg2d: &QuadratureCfg,
) -> Result<f64> {
    let cfg1d = QuadratureCfg { abs_tol: cfg2d.abs_tol.min(1e-9), ..*cfg2d };
    let direct = bpsk_mi(params.p.sqrt(), params.sigma2, &cfg1d)?;
    let h_pair = bpsk_pair_entropy(
        params.p.sqrt(),
        params.sigma2,
        conv.relay_mean(params),
        params.sigma1_2,
        cfg2d,
    )?;
    let both =
        h_pair - gaussian_entropy_bits(params.sigma2) - gaussian_entropy_bits(params.sigma1_2);
    Ok((direct + params.c).min(both.max(0.0)))
}
