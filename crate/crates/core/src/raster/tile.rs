//! Row-band tiling for per-cell map algebra.
//!
//! Work is split into bands of [`TILE_ROWS`] rows and processed on the rayon
//! pool. Every output cell depends only on the input cells at the same index,
//! so results are bitwise identical for any pool size.

use rayon::prelude::*;

use super::{GridGeometry, RasterGrid};
use crate::error::Result;

pub const TILE_ROWS: usize = 64;

fn tile_len(geometry: &GridGeometry) -> usize {
    TILE_ROWS * geometry.n_cols
}

pub(crate) fn map_unary<F>(grid: &RasterGrid, f: F) -> RasterGrid
where
    F: Fn(Option<f64>) -> Option<f64> + Sync,
{
    map_indexed(grid, |_, v| f(v))
}

/// Like [`map_unary`], with the row-major cell index passed to `f`.
pub fn map_indexed<F>(grid: &RasterGrid, f: F) -> RasterGrid
where
    F: Fn(usize, Option<f64>) -> Option<f64> + Sync,
{
    let geometry = *grid.geometry();
    let chunk = tile_len(&geometry);
    let mut values = vec![0.0; geometry.len()];
    let mut valid = vec![false; geometry.len()];
    values
        .par_chunks_mut(chunk)
        .zip(valid.par_chunks_mut(chunk))
        .enumerate()
        .for_each(|(tile, (out_v, out_ok))| {
            let start = tile * chunk;
            for (i, (v, ok)) in out_v.iter_mut().zip(out_ok.iter_mut()).enumerate() {
                if let Some(x) = f(start + i, grid.cell(start + i)) {
                    *v = x;
                    *ok = true;
                }
            }
        });
    RasterGrid::from_parts_unchecked(geometry, values, valid)
}

/// Combines two compatible grids cell by cell.
pub fn map_binary<F>(a: &RasterGrid, b: &RasterGrid, f: F) -> Result<RasterGrid>
where
    F: Fn(Option<f64>, Option<f64>) -> Option<f64> + Sync,
{
    a.geometry().ensure_compatible(b.geometry())?;
    let geometry = *a.geometry();
    let chunk = tile_len(&geometry);
    let mut values = vec![0.0; geometry.len()];
    let mut valid = vec![false; geometry.len()];
    values
        .par_chunks_mut(chunk)
        .zip(valid.par_chunks_mut(chunk))
        .enumerate()
        .for_each(|(tile, (out_v, out_ok))| {
            let start = tile * chunk;
            for (i, (v, ok)) in out_v.iter_mut().zip(out_ok.iter_mut()).enumerate() {
                if let Some(x) = f(a.cell(start + i), b.cell(start + i)) {
                    *v = x;
                    *ok = true;
                }
            }
        });
    Ok(RasterGrid::from_parts_unchecked(geometry, values, valid))
}
