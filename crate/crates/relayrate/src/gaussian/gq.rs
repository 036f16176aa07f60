//! Gaussian quantization under BPSK: the relay forwards Yh1 = Y1 + N_Q and
//! the quantization noise variance is tuned so the Wyner-Ziv rate exactly
//! fills the relay link.

use crate::error::{Error, Result};
use crate::gaussian::mixture::{gaussian_entropy_bits, GaussianMixture, LOG2_2PIE};
use crate::gaussian::quad::QuadratureCfg;
use crate::gaussian::{bpsk_pair_entropy, GainConvention, GaussianCmParams};

/// Smallest quantization variance the bisection will report; below this the
/// forwarded value is effectively the raw observation.
const SIGMA_Q2_FLOOR: f64 = 1e-9;
/// Bisection stops when the constraint gap falls under this.
const CONSTRAINT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
pub struct GqBpskResult {
    pub rate: f64,
    pub sigma_q2: f64,
    /// I(Yh1;Y1|Y) − C at the returned variance.
    pub constraint_gap: f64,
    /// Set when the link capacity exceeds the cost of forwarding at the
    /// variance floor; the result is then the floor evaluation, not a
    /// solution of the constraint.
    pub saturated: bool,
}

struct GqContext {
    source_amp: f64,
    relay_mean: f64,
    sigma2: f64,
    sigma1_2: f64,
    h_y: f64,
    cfg2d: QuadratureCfg,
}

impl GqContext {
    fn new(params: &GaussianCmParams, conv: GainConvention, cfg2d: &QuadratureCfg) -> Result<Self> {
        let cfg1d = QuadratureCfg { abs_tol: cfg2d.abs_tol.min(1e-9), ..*cfg2d };
        let source_amp = params.p.sqrt();
        let h_y = GaussianMixture::bpsk(source_amp, params.sigma2).entropy_bits(&cfg1d)?;
        Ok(GqContext {
            source_amp,
            relay_mean: conv.relay_mean(params),
            sigma2: params.sigma2,
            sigma1_2: params.sigma1_2,
            h_y,
            cfg2d: *cfg2d,
        })
    }

    fn pair_entropy(&self, sigma_q2: f64) -> Result<f64> {
        bpsk_pair_entropy(
            self.source_amp,
            self.sigma2,
            self.relay_mean,
            self.sigma1_2 + sigma_q2,
            &self.cfg2d,
        )
    }

    /// I(Yh1;Y1|Y) = h(Y,Yh1) − h(Y) − h(N_Q).
    fn forwarding_cost(&self, h_pair: f64, sigma_q2: f64) -> f64 {
        h_pair - self.h_y - gaussian_entropy_bits(sigma_q2)
    }

    /// I(X;Y,Yh1) = h(Y,Yh1) − ½log2((2πe)² σ² (σ₁²+σ_Q²)).
    fn rate(&self, h_pair: f64, sigma_q2: f64) -> f64 {
        (h_pair - LOG2_2PIE - 0.5 * (self.sigma2 * (self.sigma1_2 + sigma_q2)).log2()).max(0.0)
    }
}

/// Finds the smallest feasible quantization variance by bisection (the
/// forwarding cost is monotone decreasing in it) and evaluates the rate
/// there by 2-D quadrature over the joint output mixture.
pub fn gq_bpsk_rate(
    params: &GaussianCmParams,
    conv: GainConvention,
    cfg2d: &QuadratureCfg,
) -> Result<GqBpskResult> {
    if params.c <= 0.0 {
        return Err(Error::InvalidParameter(
            "Gaussian quantization needs a positive relay link".into(),
        ));
    }
    let ctx = GqContext::new(params, conv, cfg2d)?;
    let cost_at = |sq: f64| -> Result<(f64, f64)> {
        let h = ctx.pair_entropy(sq)?;
        Ok((ctx.forwarding_cost(h, sq), h))
    };
    let (floor_cost, floor_h) = cost_at(SIGMA_Q2_FLOOR)?;
    if floor_cost <= params.c {
        // link outruns even near-lossless forwarding
        return Ok(GqBpskResult {
            rate: ctx.rate(floor_h, SIGMA_Q2_FLOOR),
            sigma_q2: SIGMA_Q2_FLOOR,
            constraint_gap: floor_cost - params.c,
            saturated: true,
        });
    }
    let mut lo = SIGMA_Q2_FLOOR; // cost(lo) > C
    let mut hi = 1.0;
    let mut guard = 0;
    while cost_at(hi)?.0 > params.c {
        hi *= 4.0;
        guard += 1;
        if guard > 60 {
            return Err(Error::BisectionBracket(format!(
                "forwarding cost stays above C = {} out to sigma_q2 = {hi}",
                params.c
            )));
        }
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let (cost, h) = cost_at(mid)?;
        let gap = cost - params.c;
        if gap.abs() < CONSTRAINT_TOL {
            return Ok(GqBpskResult {
                rate: ctx.rate(h, mid),
                sigma_q2: mid,
                constraint_gap: gap,
                saturated: false,
            });
        }
        if gap > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::BisectionBracket(format!(
        "constraint gap did not close at sigma_q2 = {mid}"
    )))
}
