//! Cramér–Rao variance bounds and the simultaneous-vs-individual ratio.
//!
//! For a 2x2 Fisher block F the simultaneous minimal variances are the
//! diagonal of F^{-1} in pair order, (F_22/det, F_11/det); the individual
//! bounds treat the other parameter as known, (1/F_11, 1/F_22). The
//! performance ratio
//!
//! ```text
//! Gamma = (var_sim_1 + var_sim_2) / (2 (var_ind_1 + var_ind_2))
//! ```
//!
//! satisfies Gamma = F_11 F_22 / (2 det) >= 1/2 with equality iff F_12 = 0;
//! values below 1 mean the joint strategy beats parameter-at-a-time
//! estimation.

use crate::calculus::ParamTag;
use crate::error::{Error, Result};
use crate::qfim::QfimBlock;

/// Variance bounds for one parameter pair, plus the block they derive from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsReport {
    pub pair: (ParamTag, ParamTag),
    pub var_sim_1: f64,
    pub var_sim_2: f64,
    pub var_ind_1: f64,
    pub var_ind_2: f64,
    pub gamma_ratio: f64,
    pub qfim: QfimBlock,
}

fn det_threshold(block: &QfimBlock) -> f64 {
    1e-14 * (block.f11 * block.f22).max(1.0)
}

/// Diagonal of F^{-1} in pair order.
pub fn simultaneous_bounds(block: &QfimBlock) -> Result<(f64, f64)> {
    let threshold = det_threshold(block);
    if block.det <= threshold {
        return Err(Error::UnidentifiablePair {
            det: block.det,
            threshold,
        });
    }
    Ok((block.f22 / block.det, block.f11 / block.det))
}

/// Single-parameter bounds 1/F_kk (the other parameter assumed known).
pub fn individual_bounds(block: &QfimBlock) -> Result<(f64, f64)> {
    if block.f11 <= 0.0 {
        return Err(Error::UninformativeParameter {
            index: 1,
            value: block.f11,
        });
    }
    if block.f22 <= 0.0 {
        return Err(Error::UninformativeParameter {
            index: 2,
            value: block.f22,
        });
    }
    Ok((1.0 / block.f11, 1.0 / block.f22))
}

/// Gamma = (sum of simultaneous bounds) / (2 sum of individual bounds).
pub fn gamma_ratio(block: &QfimBlock) -> Result<f64> {
    let (s1, s2) = simultaneous_bounds(block)?;
    let (i1, i2) = individual_bounds(block)?;
    Ok(0.5 * (s1 + s2) / (i1 + i2))
}

/// All bounds for one block at once.
pub fn bounds_report(block: &QfimBlock) -> Result<BoundsReport> {
    let (var_sim_1, var_sim_2) = simultaneous_bounds(block)?;
    let (var_ind_1, var_ind_2) = individual_bounds(block)?;
    Ok(BoundsReport {
        pair: block.pair,
        var_sim_1,
        var_sim_2,
        var_ind_1,
        var_ind_2,
        gamma_ratio: 0.5 * (var_sim_1 + var_sim_2) / (var_ind_1 + var_ind_2),
        qfim: *block,
    })
}
