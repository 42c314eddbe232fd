//! Fire-risk classification with the NDWI threshold rule.

mod render;

pub use render::{
    pgm_header, pgm_level, ppm_header, render_binary_pgm, render_risk_ppm, risk_color, write_binary_pgm, write_risk_ppm,
};

use chrono::NaiveDate;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::indices::{IndexGrid, IndexKind};
use crate::masking::PixelMask;
use crate::raster::{GridGeometry, Mask, RasterGrid};
use crate::timeseries::IndexSeries;

pub const DEFAULT_NDWI_THRESHOLD: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskConfig {
    /// NDWI at or below this value is at risk.
    pub ndwi_threshold: f64,
    /// NDVI strictly above this value counts as vegetation.
    pub ndvi_threshold: f64,
}

impl Default for RiskConfig {
    fn default() -> Self {
        RiskConfig {
            ndwi_threshold: DEFAULT_NDWI_THRESHOLD,
            ndvi_threshold: crate::masking::DEFAULT_NDVI_THRESHOLD,
        }
    }
}

impl RiskConfig {
    pub fn new(ndwi_threshold: f64, ndvi_threshold: f64) -> Result<Self> {
        for (name, t) in [("ndwi", ndwi_threshold), ("ndvi", ndvi_threshold)] {
            if !(-1.0..=1.0).contains(&t) {
                return Err(Error::InvalidArgument(format!(
                    "{name} threshold must lie in [-1, 1], got {t}"
                )));
            }
        }
        Ok(RiskConfig {
            ndwi_threshold,
            ndvi_threshold,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RiskClass {
    AtRisk,
    NotAtRisk,
    Unclassified,
}

impl RiskClass {
    #[inline]
    pub fn from_ndwi(ndwi: f64, threshold: f64) -> RiskClass {
        if ndwi <= threshold {
            RiskClass::AtRisk
        } else {
            RiskClass::NotAtRisk
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiskMap {
    geometry: GridGeometry,
    classes: Vec<RiskClass>,
    /// Threshold the map was classified with; sets the color ramp origin.
    pub ndwi_threshold: f64,
}

impl RiskMap {
    pub fn new(geometry: GridGeometry, classes: Vec<RiskClass>, ndwi_threshold: f64) -> Result<Self> {
        geometry.validate()?;
        if classes.len() != geometry.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} classes, got {}",
                geometry.len(),
                classes.len()
            )));
        }
        Ok(RiskMap {
            geometry,
            classes,
            ndwi_threshold,
        })
    }

    pub fn geometry(&self) -> &GridGeometry {
        &self.geometry
    }

    pub fn classes(&self) -> &[RiskClass] {
        &self.classes
    }

    pub fn get(&self, row: usize, col: usize) -> RiskClass {
        self.classes[self.geometry.index(row, col)]
    }

    pub fn count(&self, class: RiskClass) -> usize {
        self.classes.iter().filter(|&&c| c == class).count()
    }

    pub fn at_risk_mask(&self) -> Mask {
        Mask::from_parts_unchecked(
            self.geometry,
            self.classes.iter().map(|&c| c == RiskClass::AtRisk).collect(),
        )
    }

    /// 1 for at risk, 0 for not at risk, nodata for unclassified.
    pub fn to_grid(&self) -> RasterGrid {
        let cells = self
            .classes
            .iter()
            .map(|c| match c {
                RiskClass::AtRisk => Some(1.0),
                RiskClass::NotAtRisk => Some(0.0),
                RiskClass::Unclassified => None,
            })
            .collect();
        RasterGrid::from_cells(self.geometry, cells).expect("geometry already validated")
    }

    /// Inverse of [`RiskMap::to_grid`]: non-zero is at risk, zero is not,
    /// nodata is unclassified.
    pub fn from_grid(grid: &RasterGrid, ndwi_threshold: f64) -> RiskMap {
        RiskMap {
            geometry: *grid.geometry(),
            classes: grid
                .cells()
                .map(|c| match c {
                    Some(v) if v != 0.0 => RiskClass::AtRisk,
                    Some(_) => RiskClass::NotAtRisk,
                    None => RiskClass::Unclassified,
                })
                .collect(),
            ndwi_threshold,
        }
    }
}

/// Per-pixel classification: vegetation cells with NDWI at or below the
/// threshold are at risk, above it not at risk; everything else is
/// unclassified.
pub fn classify_risk(ndwi: &IndexGrid, veg_mask: &PixelMask, cfg: &RiskConfig) -> Result<RiskMap> {
    ndwi.expect_kind(IndexKind::Ndwi)?;
    ndwi.geometry().ensure_compatible(veg_mask.geometry())?;
    let veg = veg_mask.mask.cells();
    let classes = (0..veg.len())
        .into_par_iter()
        .map(|i| match ndwi.grid.cell(i) {
            Some(v) if veg[i] => RiskClass::from_ndwi(v, cfg.ndwi_threshold),
            _ => RiskClass::Unclassified,
        })
        .collect();
    Ok(RiskMap {
        geometry: *ndwi.geometry(),
        classes,
        ndwi_threshold: cfg.ndwi_threshold,
    })
}

/// Applies the threshold to an AOI's mean NDWI on `date`.
pub fn classify_aoi(series: &IndexSeries, date: NaiveDate, cfg: &RiskConfig) -> Result<RiskClass> {
    let point = series.point_at(date).ok_or(Error::DateNotFound(date))?;
    Ok(RiskClass::from_ndwi(point.mean_ndwi, cfg.ndwi_threshold))
}
