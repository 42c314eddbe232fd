//! Per-scene processing shared by the series and risk-map workflows:
//! resample to the common grid, compute both indices, build the analysis
//! mask (vegetation, and clear sky when a cloud mask is available).

use chrono::NaiveDate;

use crate::error::Result;
use crate::indices::{compute_ndvi, compute_ndwi, IndexGrid};
use crate::masking::{combine_masks, vegetation_mask, PixelMask};
use crate::raster::{BandId, CloudCover, GridGeometry, Scene};

pub const REQUIRED_BANDS: [BandId; 3] = [BandId::B4, BandId::B8, BandId::B11];

#[derive(Debug, Clone)]
pub struct SceneProducts {
    pub date: NaiveDate,
    pub cloud_cover: CloudCover,
    pub ndwi: IndexGrid,
    pub ndvi: IndexGrid,
    /// Vegetation pixels, minus cloudy pixels when the scene has a cloud mask.
    pub analysis_mask: PixelMask,
}

impl SceneProducts {
    pub fn geometry(&self) -> &GridGeometry {
        self.ndwi.geometry()
    }
}

pub fn process_scene(scene: &Scene, ndvi_threshold: f64) -> Result<SceneProducts> {
    let grids = scene.common_grid(&REQUIRED_BANDS)?;
    let (red, nir, swir) = (&grids[0], &grids[1], &grids[2]);
    let ndvi = compute_ndvi(nir, red)?;
    let ndwi = compute_ndwi(nir, swir)?;
    let vegetation = vegetation_mask(&ndvi, ndvi_threshold)?;
    let analysis_mask = match &scene.cloud_mask {
        Some(cloudy) => combine_masks(&[&vegetation, &PixelMask::clear_sky(cloudy)])?,
        None => {
            if scene.cloud_cover != CloudCover::None {
                log::warn!(
                    "scene {} is flagged {} cloud cover but has no cloud mask; using all pixels",
                    scene.acquisition_date,
                    scene.cloud_cover
                );
            }
            vegetation
        }
    };
    Ok(SceneProducts {
        date: scene.acquisition_date,
        cloud_cover: scene.cloud_cover,
        ndwi,
        ndvi,
        analysis_mask,
    })
}
