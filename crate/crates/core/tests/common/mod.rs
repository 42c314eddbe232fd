//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use firerisk_core::raster::{GridGeometry, RasterGrid};
use firerisk_core::{RiskClass, RiskMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Classic crossing-number point-in-polygon test (W. R. Franklin's pnpoly).
pub fn pnpoly(vertices: &[(f64, f64)], x: f64, y: f64) -> bool {
    let mut inside = false;
    let mut j = vertices.len() - 1;
    for i in 0..vertices.len() {
        let (xi, yi) = vertices[i];
        let (xj, yj) = vertices[j];
        if ((yi > y) != (yj > y)) && (x < (xj - xi) * (y - yi) / (yj - yi) + xi) {
            inside = !inside;
        }
        j = i;
    }
    inside
}

/// Cell-by-cell brute force over all cell centers.
pub fn brute_force_rasterize(vertices: &[(f64, f64)], g: &GridGeometry) -> Vec<bool> {
    let mut out = Vec::with_capacity(g.n_cols * g.n_rows);
    for row in 0..g.n_rows {
        let y = g.y_origin + (g.n_rows as f64 - row as f64 - 0.5) * g.cell_size;
        for col in 0..g.n_cols {
            let x = g.x_origin + (col as f64 + 0.5) * g.cell_size;
            out.push(pnpoly(vertices, x, y));
        }
    }
    out
}

/// Single-threaded per-pixel normalized difference with the documented
/// nodata rules.
pub fn reference_normalized_difference(a: &RasterGrid, b: &RasterGrid) -> Vec<Option<f64>> {
    a.cells()
        .zip(b.cells())
        .map(|(a, b)| match (a, b) {
            (Some(a), Some(b)) => {
                let den = a + b;
                if den.abs() < 1e-12 {
                    None
                } else {
                    Some((a - b) / den)
                }
            }
            _ => None,
        })
        .collect()
}

/// Left-to-right sum of the selected valid cells.
pub fn naive_zonal_mean(grid: &RasterGrid, mask: &[bool]) -> Option<(f64, usize)> {
    let mut sum = 0.0;
    let mut n = 0;
    for (v, &m) in grid.cells().zip(mask) {
        if let (Some(v), true) = (v, m) {
            sum += v;
            n += 1;
        }
    }
    (n > 0).then(|| (sum / n as f64, n))
}

/// (TP, FP, FN, TN) by direct enumeration.
pub fn brute_force_confusion(risk: &RiskMap, gt: &RasterGrid) -> (u64, u64, u64, u64) {
    let g = risk.geometry();
    let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
    for row in 0..g.n_rows {
        for col in 0..g.n_cols {
            let class = risk.get(row, col);
            let Some(truth) = gt.get(row, col) else { continue };
            match (class, truth != 0.0) {
                (RiskClass::AtRisk, true) => tp += 1,
                (RiskClass::AtRisk, false) => fp += 1,
                (RiskClass::NotAtRisk, true) => fn_ += 1,
                (RiskClass::NotAtRisk, false) => tn += 1,
                (RiskClass::Unclassified, _) => {}
            }
        }
    }
    (tp, fp, fn_, tn)
}

/// Random grid with values in `[lo, hi)` and roughly `nodata_rate` nodata.
pub fn random_grid(rng: &mut impl Rng, g: GridGeometry, lo: f64, hi: f64, nodata_rate: f64) -> RasterGrid {
    let cells = (0..g.n_cols * g.n_rows)
        .map(|_| {
            if rng.random::<f64>() < nodata_rate {
                None
            } else {
                Some(rng.random_range(lo..hi))
            }
        })
        .collect();
    RasterGrid::from_cells(g, cells).unwrap()
}

/// Random simple-or-not polygon with 3..=12 vertices around the grid. A third
/// of the vertices are snapped to cell-center or cell-edge coordinates to
/// exercise the boundary rule.
pub fn random_polygon(rng: &mut impl Rng, g: &GridGeometry) -> Vec<(f64, f64)> {
    let n = rng.random_range(3..=12);
    let width = g.n_cols as f64 * g.cell_size;
    let height = g.n_rows as f64 * g.cell_size;
    let mut pick = |origin: f64, extent: f64, cells: usize| -> f64 {
        if rng.random_bool(1.0 / 3.0) {
            let k = rng.random_range(0..=2 * cells) as f64 * 0.5;
            origin + k * g.cell_size
        } else {
            origin + rng.random_range(-0.1 * extent..1.1 * extent)
        }
    };
    loop {
        let v: Vec<(f64, f64)> = (0..n)
            .map(|_| (pick(g.x_origin, width, g.n_cols), pick(g.y_origin, height, g.n_rows)))
            .collect();
        let mut distinct = v.clone();
        distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
        distinct.dedup();
        if distinct.len() >= 3 {
            return v;
        }
    }
}
