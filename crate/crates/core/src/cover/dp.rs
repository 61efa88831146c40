use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use super::descriptor::{combine, irv_descriptor, CoverDescriptor};
use super::{grid_irvs, CoverConfig};
use crate::dist::{KIrv, KSiirv};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct CoverOutcome {
    pub models: Vec<KSiirv>,
    #[serde(skip)]
    pub descriptors: Vec<CoverDescriptor>,
    /// Distinct descriptors after each layer.
    pub layer_sizes: Vec<usize>,
    /// Number of N-discrete k-IRVs.
    pub grid_size: usize,
    pub projected_states: f64,
}

/// `log10` of the number of descriptor values one arc can take.
fn log10_cells_per_arc(cfg: &CoverConfig) -> f64 {
    let (n, k) = (cfg.n as f64, cfg.k as f64);
    let root_cells = (std::f64::consts::PI * (1.0 / (3.0 * k * cfg.delta)).powi(2))
        .max(1.0)
        .log10();
    // |c_j| ≤ nk(3k)^j, summed over n parts; c_0 has |Re| bounded by the threshold and Im by nπ
    let mut coeffs = ((2.0 * cfg.sentinel_threshold().abs() / cfg.delta)
        * (2.0 * n * std::f64::consts::PI / cfg.delta))
        .log10();
    for j in 1..=cfg.ell {
        coeffs += 2.0 * (2.0 * n * k * (3.0 * k).powi(j as i32) / cfg.delta).log10();
    }
    let tracked = (0..cfg.m)
        .map(|r| r as f64 * root_cells)
        .fold(f64::NEG_INFINITY, f64::max)
        + coeffs;
    tracked + (cfg.m as f64).log10()
}

/// Work estimate for the dynamic program: the smaller of the descriptor-space
/// size and the number of (prefix, IRV) sequences, both times the grid size.
pub fn projected_states(cfg: &CoverConfig) -> f64 {
    let g = grid_irvs(cfg.k, cfg.grid_n).len() as f64;
    let arcs = cfg.partition().len() as f64;
    let by_cells = 10f64.powf(arcs * log10_cells_per_arc(cfg) + g.log10());
    let by_sequences: f64 = (1..=cfg.n as i32).map(|h| g.powi(h)).sum();
    by_cells.min(by_sequences)
}

/// Descriptor of a whole model, folding in components left to right.
pub fn descriptor_of(model: &KSiirv, cfg: &CoverConfig) -> CoverDescriptor {
    let part = cfg.partition();
    model
        .components()
        .iter()
        .fold(CoverDescriptor::empty(part.len(), cfg.ell), |acc, irv| {
            combine(&acc, &irv_descriptor(irv, &part, cfg), cfg)
        })
}

/// Dynamic program over descriptors: extend every kept prefix by every
/// N-discrete k-IRV and keep the first prefix reaching each descriptor.
pub fn cover_siirv(cfg: &CoverConfig) -> Result<CoverOutcome> {
    cfg.validate()?;
    let projected = projected_states(cfg);
    if projected > cfg.budget {
        return Err(Error::BudgetExceeded {
            projected,
            budget: cfg.budget,
        });
    }
    let part = cfg.partition();
    let grid = grid_irvs(cfg.k, cfg.grid_n);
    let grid_desc: Vec<CoverDescriptor> = grid
        .par_iter()
        .map(|irv| irv_descriptor(irv, &part, cfg))
        .collect();

    let mut layer: Vec<(Vec<usize>, CoverDescriptor)> =
        vec![(Vec::new(), CoverDescriptor::empty(part.len(), cfg.ell))];
    let mut layer_sizes = Vec::with_capacity(cfg.n);
    for _ in 0..cfg.n {
        let extended: Vec<(usize, usize, CoverDescriptor)> = layer
            .par_iter()
            .enumerate()
            .flat_map_iter(|(p, (_, d))| {
                grid_desc
                    .iter()
                    .enumerate()
                    .map(move |(g, gd)| (p, g, combine(d, gd, cfg)))
            })
            .collect();
        let mut seen = HashSet::with_capacity(extended.len());
        let mut next = Vec::new();
        for (p, g, d) in extended {
            if seen.insert(d.clone()) {
                let mut path = layer[p].0.clone();
                path.push(g);
                next.push((path, d));
            }
        }
        layer_sizes.push(next.len());
        layer = next;
    }

    let mut models = Vec::with_capacity(layer.len());
    let mut descriptors = Vec::with_capacity(layer.len());
    for (path, d) in layer {
        let comps: Vec<KIrv> = path.iter().map(|&g| grid[g].clone()).collect();
        models.push(KSiirv::new(comps)?);
        descriptors.push(d);
    }
    Ok(CoverOutcome {
        models,
        descriptors,
        layer_sizes,
        grid_size: grid.len(),
        projected_states: projected,
    })
}
