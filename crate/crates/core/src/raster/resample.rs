use rayon::prelude::*;

use super::{GridGeometry, RasterGrid};
use crate::error::{Error, Result};

/// Aggregates `factor`×`factor` blocks into their mean.
///
/// Only valid members contribute; a block with no valid members is nodata.
/// Within a block each row is summed left to right and the row sums are then
/// added top to bottom, so the result does not depend on how output rows are
/// scheduled.
pub fn downsample_mean(grid: &RasterGrid, factor: usize) -> Result<RasterGrid> {
    if factor == 0 {
        return Err(Error::InvalidArgument("downsample factor must be positive".into()));
    }
    let src = *grid.geometry();
    if !src.n_cols.is_multiple_of(factor) || !src.n_rows.is_multiple_of(factor) {
        return Err(Error::InvalidArgument(format!(
            "{}x{} grid is not divisible by factor {factor}",
            src.n_cols, src.n_rows
        )));
    }
    if factor == 1 {
        return Ok(grid.clone());
    }
    let dst = GridGeometry::new(
        src.n_cols / factor,
        src.n_rows / factor,
        src.x_origin,
        src.y_origin,
        src.cell_size * factor as f64,
    )?;

    let mut values = vec![0.0; dst.len()];
    let mut valid = vec![false; dst.len()];
    values
        .par_chunks_mut(dst.n_cols)
        .zip(valid.par_chunks_mut(dst.n_cols))
        .enumerate()
        .for_each(|(out_row, (row_v, row_ok))| {
            for out_col in 0..dst.n_cols {
                let mut total = 0.0;
                let mut count = 0usize;
                for r in out_row * factor..(out_row + 1) * factor {
                    let mut row_sum = 0.0;
                    for c in out_col * factor..(out_col + 1) * factor {
                        if let Some(v) = grid.get(r, c) {
                            row_sum += v;
                            count += 1;
                        }
                    }
                    total += row_sum;
                }
                if count > 0 {
                    row_v[out_col] = total / count as f64;
                    row_ok[out_col] = true;
                }
            }
        });
    Ok(RasterGrid::from_parts_unchecked(dst, values, valid))
}

/// Downsamples `grid` to `cell_size`, which must be an integer multiple of
/// the grid's own cell size.
pub fn resample_to_cell_size(grid: &RasterGrid, cell_size: f64) -> Result<RasterGrid> {
    let native = grid.geometry().cell_size;
    let ratio = cell_size / native;
    let factor = ratio.round();
    if factor < 1.0 || (ratio - factor).abs() > 1e-9 * ratio {
        return Err(Error::InvalidArgument(format!(
            "cannot resample {native} m cells to {cell_size} m by block aggregation"
        )));
    }
    downsample_mean(grid, factor as usize)
}
