//! Rates in the vanishing direct-link regime (σ² → ∞), where Y decouples
//! from the quantized relay observation and the general expressions lose
//! numerical footing.

use crate::error::{Error, Result};
use crate::gaussian::mixture::{
    binary_entropy, discrete_entropy, gaussian_entropy_bits, normal_cdf, GaussianMixture,
};
use crate::gaussian::quad::QuadratureCfg;
use crate::gaussian::{bpsk_mi, GainConvention, GaussianCmParams};

#[derive(Debug, Clone, Copy)]
pub struct LowSnrRates {
    pub hd_eaf: f64,
    pub gq_eaf: f64,
    pub dhd: f64,
    pub daf: f64,
}

/// Low-SNR limits of the four strategies. Intended for σ² ≫ P; the caller
/// chooses when the asymptotics apply (no hard check).
pub fn low_snr_rates(
    params: &GaussianCmParams,
    conv: GainConvention,
    cfg: &QuadratureCfg,
) -> Result<LowSnrRates> {
    let m = conv.relay_mean(params);
    let sigma1 = params.sigma1_2.sqrt();
    let c = params.c;
    // sign-quantizer limit: the link scales the relay's binary channel
    let p1 = normal_cdf(m / sigma1);
    let hd_eaf = c.min(1.0) * (1.0 - binary_entropy(p1));

    // Gaussian quantization: h(Yh1) − h(N_Q) = C fixes the variance, the
    // rate is h(Yh1) − h(N1 + N_Q).
    let gq_eaf = if c <= 0.0 {
        0.0
    } else {
        let h_out = |sq: f64| -> Result<f64> {
            GaussianMixture::bpsk(m, params.sigma1_2 + sq).entropy_bits(cfg)
        };
        let cost = |sq: f64| -> Result<f64> { Ok(h_out(sq)? - gaussian_entropy_bits(sq)) };
        let mut lo = 1e-9;
        if cost(lo)? < c {
            // even near-lossless forwarding fits: rate saturates at the
            // relay observation information
            bpsk_mi(m, params.sigma1_2, cfg)?
        } else {
            let mut hi = 1.0;
            let mut guard = 0;
            while cost(hi)? > c {
                hi *= 4.0;
                guard += 1;
                if guard > 60 {
                    return Err(Error::BisectionBracket("low-SNR GQ cost will not drop".into()));
                }
            }
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if cost(mid)? > c {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let sq = 0.5 * (lo + hi);
            (h_out(sq)? - gaussian_entropy_bits(params.sigma1_2 + sq)).max(0.0)
        }
    };

    // dead-zone limit: maximize the discrete I(X;Yh1) subject to the
    // whole quantizer entropy fitting through the link
    let mut dhd = 0.0f64;
    let hi = m + 6.0 * sigma1;
    for k in 0..200 {
        let t = hi * k as f64 / 199.0;
        let above = normal_cdf((m - t) / sigma1);
        let below = normal_cdf((-t - m) / sigma1);
        let keep = above + below;
        let h_out = discrete_entropy(&[0.5 * keep, 1.0 - keep, 0.5 * keep]);
        if h_out > c {
            continue;
        }
        let h_out_given_x = discrete_entropy(&[above, 1.0 - keep, below]);
        dhd = dhd.max((h_out - h_out_given_x).max(0.0));
    }

    let daf = c.min(bpsk_mi(m, params.sigma1_2, cfg)?);
    Ok(LowSnrRates { hd_eaf, gq_eaf, dhd, daf })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::best_hd_eaf;
    use approx::assert_abs_diff_eq;

    const AMP: GainConvention = GainConvention::Amplitude;

    #[test]
    fn blind_relay_gives_zero_everywhere() {
        let p = GaussianCmParams::new(1.0, 0.0, 1e4, 1.0, 0.8).unwrap();
        let r = low_snr_rates(&p, AMP, &QuadratureCfg::default_1d()).unwrap();
        assert_abs_diff_eq!(r.hd_eaf, 0.0, epsilon = 1e-9);
        assert!(r.gq_eaf < 1e-9);
        assert_abs_diff_eq!(r.dhd, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r.daf, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn strong_relay_with_wide_link_approaches_one_bit() {
        let p = GaussianCmParams::new(1.0, 4.0, 1e4, 1.0, 1.5).unwrap();
        let r = low_snr_rates(&p, AMP, &QuadratureCfg::default_1d()).unwrap();
        assert!(r.hd_eaf > 0.95, "hd {}", r.hd_eaf);
    }

    #[test]
    fn exact_sign_rate_matches_asymptotic_at_low_snr() {
        let cfg = QuadratureCfg::default_1d();
        for &g in &[0.5, 1.0, 2.0] {
            for &c in &[0.5, 1.0] {
                let p = GaussianCmParams::new(1.0, g, 1e4, 1.0, c).unwrap();
                let (exact, _) = best_hd_eaf(&p, AMP, &cfg).unwrap();
                let asym = low_snr_rates(&p, AMP, &cfg).unwrap().hd_eaf;
                assert!(
                    (exact.rate - asym).abs() < 1e-3,
                    "g={g}, C={c}: exact {} vs asymptotic {asym}",
                    exact.rate
                );
            }
        }
    }
}
