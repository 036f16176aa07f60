//! Best-strategy map over the (g, C) plane: decode-and-forward vs the
//! hybrid hard-decision quantizer vs Gaussian quantization, each optimized
//! over its free parameters per cell.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::gq::gq_bpsk_rate;
use crate::gaussian::hard_decision::best_ts_dhd;
use crate::gaussian::quad::QuadratureCfg;
use crate::gaussian::{daf_bpsk_rate, GainConvention, GaussianCmParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StrategyLabel {
    #[serde(rename = "DAF")]
    Daf,
    #[serde(rename = "TS-DHD")]
    TsDhd,
    #[serde(rename = "GQ-EAF")]
    GqEaf,
}

impl StrategyLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            StrategyLabel::Daf => "DAF",
            StrategyLabel::TsDhd => "TS-DHD",
            StrategyLabel::GqEaf => "GQ-EAF",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RegionCell {
    pub g: f64,
    pub c: f64,
    pub best: StrategyLabel,
    pub daf: f64,
    pub ts_dhd: f64,
    pub ts_dhd_t: f64,
    pub ts_dhd_p_ne: f64,
    pub gq_eaf: f64,
    pub gq_sigma_q2: f64,
}

/// Row-major over g (rows) then C (columns).
#[derive(Debug, Clone, Serialize)]
pub struct RegionMap {
    pub g_grid: Vec<f64>,
    pub c_grid: Vec<f64>,
    pub cells: Vec<RegionCell>,
}

impl RegionMap {
    pub fn cell(&self, gi: usize, ci: usize) -> &RegionCell {
        &self.cells[gi * self.c_grid.len() + ci]
    }

    /// Label matrix in row-major (g rows, C columns) order.
    pub fn labels(&self) -> Vec<Vec<&'static str>> {
        self.g_grid
            .iter()
            .enumerate()
            .map(|(gi, _)| {
                self.c_grid
                    .iter()
                    .enumerate()
                    .map(|(ci, _)| self.cell(gi, ci).best.as_str())
                    .collect()
            })
            .collect()
    }
}

fn check_grid(grid: &[f64], name: &str) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter(format!("{name} grid is empty")));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(format!("{name} grid must ascend")));
    }
    Ok(())
}

fn evaluate_cell(
    base: &GaussianCmParams,
    g: f64,
    c: f64,
    conv: GainConvention,
    cfg1d: &QuadratureCfg,
    cfg2d: &QuadratureCfg,
) -> Result<RegionCell> {
    let p = GaussianCmParams { g, c, ..*base };
    let daf = daf_bpsk_rate(&p, conv, cfg1d)?;
    let (hd, t, p_ne) = best_ts_dhd(&p, conv, cfg1d)?;
    let gq = gq_bpsk_rate(&p, conv, cfg2d)?;
    let mut best = StrategyLabel::Daf;
    let mut best_rate = daf;
    if hd.rate > best_rate {
        best = StrategyLabel::TsDhd;
        best_rate = hd.rate;
    }
    if gq.rate > best_rate {
        best = StrategyLabel::GqEaf;
    }
    Ok(RegionCell {
        g,
        c,
        best,
        daf,
        ts_dhd: hd.rate,
        ts_dhd_t: t,
        ts_dhd_p_ne: p_ne,
        gq_eaf: gq.rate,
        gq_sigma_q2: gq.sigma_q2,
    })
}

/// Optimizes the three strategies on every (g, C) grid cell and labels the
/// winner. Cells evaluate in parallel; assembly order is row-major and
/// deterministic.
pub fn strategy_region_map(
    g_grid: &[f64],
    c_grid: &[f64],
    base: &GaussianCmParams,
    conv: GainConvention,
) -> Result<RegionMap> {
    check_grid(g_grid, "g")?;
    check_grid(c_grid, "C")?;
    let cfg1d = QuadratureCfg::default_1d();
    let cfg2d = QuadratureCfg::default_2d();
    let coords: Vec<(f64, f64)> = g_grid
        .iter()
        .flat_map(|&g| c_grid.iter().map(move |&c| (g, c)))
        .collect();
    let cells: Vec<RegionCell> = coords
        .par_iter()
        .map(|&(g, c)| evaluate_cell(base, g, c, conv, &cfg1d, &cfg2d))
        .collect::<Result<_>>()?;
    Ok(RegionMap {
        g_grid: g_grid.to_vec(),
        c_grid: c_grid.to_vec(),
        cells,
    })
}
