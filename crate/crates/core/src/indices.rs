//! Normalized-difference spectral indices.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::raster::{tile, GridGeometry, RasterGrid};

/// Denominators smaller than this in magnitude yield nodata.
pub const MIN_DENOMINATOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexKind {
    /// (NIR − SWIR) / (NIR + SWIR), bands B8 and B11.
    Ndwi,
    /// (NIR − Red) / (NIR + Red), bands B8 and B4.
    Ndvi,
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndexKind::Ndwi => "NDWI",
            IndexKind::Ndvi => "NDVI",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexGrid {
    pub grid: RasterGrid,
    pub kind: IndexKind,
    /// Cells where both inputs were valid but at least one was negative.
    /// Such cells are still computed, but may fall outside [-1, 1].
    pub negative_inputs: usize,
}

impl IndexGrid {
    pub fn geometry(&self) -> &GridGeometry {
        self.grid.geometry()
    }

    pub(crate) fn expect_kind(&self, kind: IndexKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("expected an {kind} grid, got {}", self.kind)))
        }
    }
}

#[inline]
pub fn normalized_difference(a: f64, b: f64) -> Option<f64> {
    let denominator = a + b;
    if denominator.abs() < MIN_DENOMINATOR {
        None
    } else {
        Some((a - b) / denominator)
    }
}

fn compute(first: &RasterGrid, second: &RasterGrid, kind: IndexKind) -> Result<IndexGrid> {
    let grid = tile::map_binary(first, second, |a, b| match (a, b) {
        (Some(a), Some(b)) => normalized_difference(a, b),
        _ => None,
    })?;
    let negative_inputs = (0..first.geometry().len())
        .into_par_iter()
        .filter(|&i| matches!((first.cell(i), second.cell(i)), (Some(a), Some(b)) if a < 0.0 || b < 0.0))
        .count();
    if negative_inputs > 0 {
        log::warn!("{kind}: {negative_inputs} cells have negative input reflectance");
    }
    Ok(IndexGrid {
        grid,
        kind,
        negative_inputs,
    })
}

pub fn compute_ndwi(nir: &RasterGrid, swir: &RasterGrid) -> Result<IndexGrid> {
    compute(nir, swir, IndexKind::Ndwi)
}

pub fn compute_ndvi(nir: &RasterGrid, red: &RasterGrid) -> Result<IndexGrid> {
    compute(nir, red, IndexKind::Ndvi)
}
