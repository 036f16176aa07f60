//! Hard-decision quantizers at the relay: probabilistic-erasure sign
//! (HD-EAF), deterministic dead-zone threshold (DHD), and their hybrid
//! (TS-DHD), plus the per-strategy parameter optimizers.
//!
//! All three share one evaluator. With Yh1 conditionally independent of Y
//! given Y1,
//!     I(Yh1;Y1|Y) = H(Yh1) + h(Y|Yh1) − h(Y) − H(Yh1|Y1),
//! which needs only 1-D quadratures: h(Y) and h(Y|Yh1 = ±1). The erased
//! symbol carries the unconditional output law, so h(Y|Yh1 = E) = h(Y)
//! exactly.

use crate::error::{Error, Result};
use crate::gaussian::mixture::{
    binary_entropy, discrete_entropy, gaussian_entropy_bits, normal_cdf, GaussianMixture,
};
use crate::gaussian::quad::QuadratureCfg;
use crate::gaussian::{feasible, GainConvention, GaussianCmParams};
use crate::single_relay::FeasibleRate;

/// Quantizer parameterizations for the orthogonal-relay channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MappingParams {
    /// Additive Gaussian quantization noise of the given variance.
    Gq { sigma_q2: f64 },
    /// Sign decision forwarded with probability `p_ne`, erased otherwise.
    HdEaf { p_ne: f64 },
    /// Dead-zone sign quantizer: erase |Y1| <= t, forward the sign outside.
    Dhd { t: f64 },
    /// Dead zone first, then random gating of the surviving signs.
    TsDhd { t: f64, p_ne: f64 },
}

impl MappingParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match *self {
            MappingParams::Gq { sigma_q2 } if sigma_q2 <= 0.0 => {
                bad(format!("sigma_q2 = {sigma_q2} must be positive"))
            }
            MappingParams::HdEaf { p_ne } if !(0.0..=1.0).contains(&p_ne) => {
                bad(format!("p_ne = {p_ne} outside [0,1]"))
            }
            MappingParams::Dhd { t } if t < 0.0 => bad(format!("threshold {t} negative")),
            MappingParams::TsDhd { t, p_ne } if t < 0.0 || !(0.0..=1.0).contains(&p_ne) => {
                bad(format!("t = {t}, p_ne = {p_ne} out of range"))
            }
            _ => Ok(()),
        }
    }
}

/// Quantities shared by every (t, p_ne) evaluation at fixed channel
/// parameters; h(Y) is one quadrature reused across a whole sweep.
pub(crate) struct HdContext {
    pub source_amp: f64,
    pub relay_mean: f64,
    pub sigma2: f64,
    pub sigma1: f64,
    pub c: f64,
    pub h_y: f64,
    pub h_n: f64,
    cfg: QuadratureCfg,
}

impl HdContext {
    pub fn new(params: &GaussianCmParams, conv: GainConvention, cfg: &QuadratureCfg) -> Result<Self> {
        let source_amp = params.p.sqrt();
        let h_y = GaussianMixture::bpsk(source_amp, params.sigma2).entropy_bits(cfg)?;
        Ok(HdContext {
            source_amp,
            relay_mean: conv.relay_mean(params),
            sigma2: params.sigma2,
            sigma1: params.sigma1_2.sqrt(),
            c: params.c,
            h_y,
            h_n: gaussian_entropy_bits(params.sigma2),
            cfg: *cfg,
        })
    }

    /// Region probabilities given X = +√P: (above +t, below −t).
    /// The mirror image applies under X = −√P.
    fn regions(&self, t: f64) -> (f64, f64) {
        let above = normal_cdf((self.relay_mean - t) / self.sigma1);
        let below = normal_cdf((-t - self.relay_mean) / self.sigma1);
        (above, below)
    }

    /// Precomputes the pieces of a fixed threshold that do not depend on
    /// the gating probability: region masses and h(Y | Yh1 = +1).
    pub fn threshold_slice(&self, t: f64) -> Result<ThresholdSlice> {
        let (above, below) = self.regions(t);
        let keep = above + below;
        let h_y_given_sign = if keep > 1e-14 {
            GaussianMixture::new(
                vec![self.source_amp, -self.source_amp],
                vec![self.sigma2, self.sigma2],
                vec![above / keep, below / keep],
            )?
            .entropy_bits(&self.cfg)?
        } else {
            self.h_y
        };
        Ok(ThresholdSlice { above, below, h_y_given_sign })
    }

    /// Full evaluation at (slice, p_ne). Everything here is arithmetic, so
    /// gating-probability searches are cheap once the slice exists.
    pub fn evaluate(&self, s: &ThresholdSlice, p_ne: f64) -> HdEvaluation {
        let keep = s.above + s.below;
        let p_sign = 0.5 * p_ne * keep; // marginal mass of each of ±1
        let p_erase = 1.0 - 2.0 * p_sign;
        let h_out = discrete_entropy(&[p_sign, p_erase, p_sign]);
        let h_out_given_x = discrete_entropy(&[
            p_ne * s.above,
            1.0 - p_ne * keep,
            p_ne * s.below,
        ]);
        let i_x_out = (h_out - h_out_given_x).max(0.0);
        let h_y_given_out = 2.0 * p_sign * s.h_y_given_sign + p_erase * self.h_y;
        let i_xy_given_out = (h_y_given_out - self.h_n).max(0.0);
        let h_out_given_y1 = keep * binary_entropy(p_ne);
        let cost = (h_out + h_y_given_out - self.h_y - h_out_given_y1).max(0.0);
        HdEvaluation { rate: i_x_out + i_xy_given_out, cost }
    }

    /// Largest feasible gating probability at a fixed threshold slice; the
    /// forwarding cost is nondecreasing in p_ne (extra gating degrades the
    /// quantizer), so bisection applies.
    pub fn max_feasible_p_ne(&self, s: &ThresholdSlice) -> f64 {
        if self.evaluate(s, 1.0).cost <= self.c {
            return 1.0;
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.evaluate(s, mid).cost > self.c {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        lo
    }
}

pub(crate) struct ThresholdSlice {
    pub above: f64,
    pub below: f64,
    pub h_y_given_sign: f64,
}

pub(crate) struct HdEvaluation {
    pub rate: f64,
    pub cost: f64,
}

/// Sign quantizer with random erasure at probability 1 − p_ne.
pub fn hd_eaf_rate(
    params: &GaussianCmParams,
    p_ne: f64,
    conv: GainConvention,
    cfg: &QuadratureCfg,
) -> Result<FeasibleRate> {
    ts_dhd_rate(params, 0.0, p_ne, conv, cfg)
}

/// Deterministic dead-zone quantizer at threshold `t`.
pub fn dhd_rate(
    params: &GaussianCmParams,
    t: f64,
    conv: GainConvention,
    cfg: &QuadratureCfg,
) -> Result<FeasibleRate> {
    ts_dhd_rate(params, t, 1.0, conv, cfg)
}

/// Hybrid quantizer: dead zone `t`, then gate the surviving signs at
/// probability `p_ne`.
pub fn ts_dhd_rate(
    params: &GaussianCmParams,
    t: f64,
    p_ne: f64,
    conv: GainConvention,
    cfg: &QuadratureCfg,
) -> Result<FeasibleRate> {
    MappingParams::TsDhd { t, p_ne }.validate()?;
    let ctx = HdContext::new(params, conv, cfg)?;
    let slice = ctx.threshold_slice(t)?;
    let e = ctx.evaluate(&slice, p_ne);
    Ok(feasible(e.rate, params.c - e.cost))
}

/// Forwarding cost I(Yh1;Y1|Y) of the dead-zone quantizer as a function of
/// the threshold; exposed for the feasibility-crossing analysis.
pub fn dhd_cost(
    params: &GaussianCmParams,
    t: f64,
    conv: GainConvention,
    cfg: &QuadratureCfg,
) -> Result<f64> {
    let ctx = HdContext::new(params, conv, cfg)?;
    let slice = ctx.threshold_slice(t)?;
    Ok(ctx.evaluate(&slice, 1.0).cost)
}

/// Best sign-with-erasure rate: the forwarding cost is exactly linear in
/// p_ne at t = 0, so the maximum feasible gating probability is closed
/// form and the rate is monotone in it.
pub fn best_hd_eaf(
    params: &GaussianCmParams,
    conv: GainConvention,
    cfg: &QuadratureCfg,
) -> Result<(FeasibleRate, f64)> {
    let ctx = HdContext::new(params, conv, cfg)?;
    let slice = ctx.threshold_slice(0.0)?;
    let full_cost = ctx.evaluate(&slice, 1.0).cost;
    let p_ne = if full_cost <= params.c || full_cost <= 0.0 {
        1.0
    } else {
        (params.c / full_cost).min(1.0)
    };
    let e = ctx.evaluate(&slice, p_ne);
    Ok((feasible(e.rate, params.c - e.cost), p_ne))
}

const GRID_POINTS: usize = 200;
const GOLDEN: f64 = 0.618_033_988_749_894_9;

fn golden_refine<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    iters: usize,
) -> Result<(f64, f64)> {
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..iters {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2)?;
        }
    }
    if f1 >= f2 {
        Ok((x1, f1))
    } else {
        Ok((x2, f2))
    }
}

fn threshold_grid(ctx: &HdContext) -> Vec<f64> {
    let hi = ctx.relay_mean + 6.0 * ctx.sigma1;
    (0..GRID_POINTS)
        .map(|k| hi * k as f64 / (GRID_POINTS - 1) as f64)
        .collect()
}

/// Best deterministic dead-zone rate: coarse threshold grid restricted to
/// feasible points, then golden-section refinement around the best bracket.
/// The forwarding cost is non-monotone in the threshold, so infeasible
/// grid points are simply skipped.
pub fn best_dhd(
    params: &GaussianCmParams,
    conv: GainConvention,
    cfg: &QuadratureCfg,
) -> Result<(FeasibleRate, f64)> {
    let ctx = HdContext::new(params, conv, cfg)?;
    let grid = threshold_grid(&ctx);
    let mut best: Option<(f64, f64)> = None; // (rate, t)
    let mut rates = Vec::with_capacity(grid.len());
    for &t in &grid {
        let slice = ctx.threshold_slice(t)?;
        let e = ctx.evaluate(&slice, 1.0);
        let ok = e.cost <= params.c + crate::gaussian::GAUSS_SLACK_TOL;
        rates.push(if ok { e.rate } else { f64::NEG_INFINITY });
        if ok && best.map_or(true, |(r, _)| e.rate > r) {
            best = Some((e.rate, t));
        }
    }
    let step = grid[1] - grid[0];
    let mut refined = best;
    for k in 0..grid.len() {
        if rates[k] == f64::NEG_INFINITY {
            continue;
        }
        let is_peak = (k == 0 || rates[k] >= rates[k - 1])
            && (k + 1 == grid.len() || rates[k] >= rates[k + 1]);
        if !is_peak {
            continue;
        }
        let a = (grid[k] - step).max(0.0);
        let b = grid[k] + step;
        let (t, r) = golden_refine(
            |t| {
                let slice = ctx.threshold_slice(t)?;
                let e = ctx.evaluate(&slice, 1.0);
                Ok(if e.cost <= params.c + crate::gaussian::GAUSS_SLACK_TOL {
                    e.rate
                } else {
                    f64::NEG_INFINITY
                })
            },
            a,
            b,
            40,
        )?;
        if r.is_finite() && refined.map_or(true, |(br, _)| r > br) {
            refined = Some((r, t));
        }
    }
    match refined {
        Some((_, t)) => {
            let r = dhd_rate(params, t, conv, cfg)?;
            Ok((r, t))
        }
        // no feasible threshold: fully erased relay, direct rate only
        None => {
            let hi = ctx.relay_mean + 20.0 * ctx.sigma1;
            let r = dhd_rate(params, hi, conv, cfg)?;
            Ok((r, hi))
        }
    }
}

/// Best hybrid rate over (threshold, gating probability): per threshold the
/// optimal gating is the largest feasible one, so the search is a threshold
/// grid plus golden refinement, each point costing one quadrature.
pub fn best_ts_dhd(
    params: &GaussianCmParams,
    conv: GainConvention,
    cfg: &QuadratureCfg,
) -> Result<(FeasibleRate, f64, f64)> {
    let ctx = HdContext::new(params, conv, cfg)?;
    let rate_at = |ctx: &HdContext, t: f64| -> Result<(f64, f64)> {
        let slice = ctx.threshold_slice(t)?;
        let p_ne = ctx.max_feasible_p_ne(&slice);
        Ok((ctx.evaluate(&slice, p_ne).rate, p_ne))
    };
    let grid = threshold_grid(&ctx);
    let mut rates = Vec::with_capacity(grid.len());
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0); // (rate, t, p_ne)
    for &t in &grid {
        let (r, p_ne) = rate_at(&ctx, t)?;
        rates.push(r);
        if r > best.0 {
            best = (r, t, p_ne);
        }
    }
    let step = grid[1] - grid[0];
    for k in 0..grid.len() {
        let is_peak = (k == 0 || rates[k] >= rates[k - 1])
            && (k + 1 == grid.len() || rates[k] >= rates[k + 1]);
        if !is_peak {
            continue;
        }
        let (t, r) = golden_refine(
            |t| rate_at(&ctx, t).map(|(r, _)| r),
            (grid[k] - step).max(0.0),
            grid[k] + step,
            40,
        )?;
        if r > best.0 {
            let (_, p_ne) = rate_at(&ctx, t)?;
            best = (r, t, p_ne);
        }
    }
    let (_, t, p_ne) = best;
    let fr = ts_dhd_rate(params, t, p_ne, conv, cfg)?;
    Ok((fr, t, p_ne))
}
