//! Derivative-free maximization of rate functionals over product input
//! distributions, with deterministic seeded restarts.
//!
//! Rate expressions contain min{} terms and clamped ratios, so the search
//! runs Nelder-Mead on unconstrained logits mapped to the simplex by
//! softmax. Restarts run concurrently; the reduction picks the maximum with
//! lowest-restart-index tie-break, so results are bit-identical whether the
//! restarts execute sequentially or in parallel.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Logits are clipped to this magnitude before softmax; ±40 spans mass
/// ratios down to ~1e-35, enough for the near-boundary optima the recorded
/// distributions exhibit.
pub const LOGIT_CLIP: f64 = 40.0;

#[derive(Debug, Clone)]
pub struct OptimizerCfg {
    pub restarts: usize,
    pub seed: u64,
    pub max_iters: usize,
    pub f_tol: f64,
    pub x_tol: f64,
}

impl Default for OptimizerCfg {
    fn default() -> Self {
        OptimizerCfg {
            restarts: 50,
            seed: 0,
            max_iters: 2000,
            f_tol: 1e-10,
            x_tol: 1e-8,
        }
    }
}

/// Outcome of one restart.
#[derive(Debug, Clone, Serialize)]
pub struct RestartRecord {
    pub restart: usize,
    pub value: f64,
    pub iterations: usize,
}

/// Maximization result: the best marginals found, their value, and the
/// per-restart trace.
#[derive(Debug, Clone)]
pub struct OptReport {
    pub best: Vec<Vec<f64>>,
    pub value: f64,
    pub trace: Vec<RestartRecord>,
    pub best_restart: usize,
}

/// Softmax with clipping; the image always lies strictly inside the simplex.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let clipped: Vec<f64> = logits
        .iter()
        .map(|&v| v.clamp(-LOGIT_CLIP, LOGIT_CLIP))
        .collect();
    let m = clipped.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let mut out: Vec<f64> = clipped.iter().map(|&v| (v - m).exp()).collect();
    let s: f64 = out.iter().sum();
    out.iter_mut().for_each(|p| *p /= s);
    debug_assert!((out.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    out
}

fn split_blocks(x: &[f64], sizes: &[usize]) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(sizes.len());
    let mut off = 0;
    for &s in sizes {
        out.push(softmax(&x[off..off + s]));
        off += s;
    }
    out
}

/// Classic Nelder-Mead on a fixed-dimension objective, minimizing.
/// Returns (point, value, iterations).
fn nelder_mead<F>(f: &F, x0: &[f64], cfg: &OptimizerCfg) -> Result<(Vec<f64>, f64, usize)>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let n = x0.len();
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += 1.0;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect::<Result<_>>()?;
    let mut iters = 0;
    while iters < cfg.max_iters {
        iters += 1;
        // sort ascending by value
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(std::cmp::Ordering::Equal));
        let simplex_s: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let values_s: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        simplex = simplex_s;
        values = values_s;

        let f_spread = values[n] - values[0];
        let x_spread = simplex[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if f_spread < cfg.f_tol || x_spread < cfg.x_tol {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|v| v[k]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let reflect: Vec<f64> = centroid
            .iter()
            .zip(&worst)
            .map(|(c, w)| c + alpha * (c - w))
            .collect();
        let fr = f(&reflect)?;
        if fr < values[0] {
            let expand: Vec<f64> = centroid
                .iter()
                .zip(&worst)
                .map(|(c, w)| c + gamma * (c - w))
                .collect();
            let fe = f(&expand)?;
            if fe < fr {
                simplex[n] = expand;
                values[n] = fe;
            } else {
                simplex[n] = reflect;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = reflect;
            values[n] = fr;
        } else {
            let contract: Vec<f64> = if fr < values[n] {
                centroid
                    .iter()
                    .zip(&reflect)
                    .map(|(c, r)| c + rho * (r - c))
                    .collect()
            } else {
                centroid
                    .iter()
                    .zip(&worst)
                    .map(|(c, w)| c + rho * (w - c))
                    .collect()
            };
            let fc = f(&contract)?;
            if fc < values[n].min(fr) {
                simplex[n] = contract;
                values[n] = fc;
            } else {
                // shrink toward the best vertex
                for i in 1..=n {
                    simplex[i] = simplex[i]
                        .iter()
                        .zip(&simplex[0])
                        .map(|(v, b)| b + sigma * (v - b))
                        .collect();
                    values[i] = f(&simplex[i])?;
                }
            }
        }
    }
    let (bi, bv) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(std::cmp::Ordering::Equal))
        .map(|(i, &v)| (i, v))
        .unwrap();
    Ok((simplex[bi].clone(), bv, iters))
}

/// Maximizes `rate_fn` over a product of simplexes, one per alphabet size.
/// Restart `r` draws its initial logits from an RNG stream derived from
/// (seed, r), so the search is reproducible and parallelizable.
pub fn maximize_product<F>(
    rate_fn: F,
    alphabet_sizes: &[usize],
    cfg: &OptimizerCfg,
) -> Result<OptReport>
where
    F: Fn(&[Vec<f64>]) -> Result<f64> + Sync,
{
    if cfg.restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be >= 1".into()));
    }
    if alphabet_sizes.is_empty() || alphabet_sizes.iter().any(|&s| s == 0) {
        return Err(Error::InvalidParameter("alphabet sizes must be positive".into()));
    }
    let dim: usize = alphabet_sizes.iter().sum();
    let objective = |x: &[f64]| -> Result<f64> {
        let blocks = split_blocks(x, alphabet_sizes);
        Ok(-rate_fn(&blocks)?)
    };
    let runs: Vec<Result<(Vec<f64>, f64, usize)>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(r as u64 + 1);
            let x0: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
            nelder_mead(&objective, &x0, cfg).map_err(|e| Error::RestartFailed {
                restart: r,
                source: Box::new(e),
            })
        })
        .collect();
    let mut trace = Vec::with_capacity(cfg.restarts);
    let mut best: Option<(usize, Vec<f64>, f64)> = None;
    for (r, run) in runs.into_iter().enumerate() {
        let (x, neg_v, iters) = run?;
        let v = -neg_v;
        trace.push(RestartRecord { restart: r, value: v, iterations: iters });
        let better = match &best {
            None => true,
            Some((_, _, bv)) => v > *bv,
        };
        if better {
            best = Some((r, x, v));
        }
    }
    let (best_restart, x, value) = best.expect("at least one restart");
    Ok(OptReport {
        best: split_blocks(&x, alphabet_sizes),
        value,
        trace,
        best_restart,
    })
}

/// Maximizes over a single joint pmf of `total_size` cells (one softmax
/// block).
pub fn maximize_joint<F>(rate_fn: F, total_size: usize, cfg: &OptimizerCfg) -> Result<OptReport>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    maximize_product(|blocks| rate_fn(&blocks[0]), &[total_size], cfg)
}
