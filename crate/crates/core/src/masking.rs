//! Vegetation, cloud and AOI masks.

use crate::error::{Error, Result};
use crate::indices::{IndexGrid, IndexKind};
use crate::raster::{rasterize_aoi, tile, AreaOfInterest, GridGeometry, Mask, RasterGrid};

pub const DEFAULT_NDVI_THRESHOLD: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Vegetation,
    Cloud,
    Aoi,
    Combined,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PixelMask {
    pub mask: Mask,
    pub provenance: Provenance,
}

impl PixelMask {
    pub fn new(mask: Mask, provenance: Provenance) -> Self {
        PixelMask { mask, provenance }
    }

    pub fn geometry(&self) -> &GridGeometry {
        self.mask.geometry()
    }

    pub fn count(&self) -> usize {
        self.mask.count()
    }

    /// Clear-sky mask: true where `cloudy` is false.
    pub fn clear_sky(cloudy: &Mask) -> Self {
        PixelMask::new(cloudy.not(), Provenance::Cloud)
    }

    pub fn from_aoi(aoi: &AreaOfInterest, geometry: &GridGeometry) -> Result<Self> {
        Ok(PixelMask::new(rasterize_aoi(aoi, geometry)?, Provenance::Aoi))
    }
}

/// True where NDVI is valid and strictly above `threshold`.
pub fn vegetation_mask(ndvi: &IndexGrid, threshold: f64) -> Result<PixelMask> {
    ndvi.expect_kind(IndexKind::Ndvi)?;
    let cells = ndvi
        .grid
        .cells()
        .map(|c| matches!(c, Some(v) if v > threshold))
        .collect();
    Ok(PixelMask::new(Mask::new(*ndvi.geometry(), cells)?, Provenance::Vegetation))
}

/// Cellwise AND.
pub fn combine_masks(masks: &[&PixelMask]) -> Result<PixelMask> {
    let (first, rest) = masks
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("combine_masks needs at least one mask".into()))?;
    let mut combined = first.mask.clone();
    for m in rest {
        combined = combined.and(&m.mask)?;
    }
    Ok(PixelMask::new(combined, Provenance::Combined))
}

/// Sets cells to nodata where the mask is false.
pub fn apply_mask(grid: &RasterGrid, mask: &PixelMask) -> Result<RasterGrid> {
    grid.geometry().ensure_compatible(mask.geometry())?;
    let keep = mask.mask.cells();
    Ok(tile::map_indexed(grid, |i, v| v.filter(|_| keep[i])))
}
