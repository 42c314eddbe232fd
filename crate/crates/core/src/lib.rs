//! NDWI-based vegetation fire-risk analytics for Sentinel-2 style
//! reflectance rasters.
//!
//! The workflow: bring red (B4), NIR (B8) and SWIR (B11) onto the common
//! 20 m grid, compute NDWI and NDVI, keep vegetation pixels, then either
//! average NDWI per area of interest over time ([`timeseries`]) or classify
//! each pixel against the NDWI risk threshold ([`risk`]) and score the result
//! against a burned-area ground truth ([`validate`]).

pub mod error;
pub mod indices;
pub mod manifest;
pub mod masking;
pub mod pipeline;
pub mod raster;
pub mod risk;
pub mod sum;
pub mod synth;
pub mod timeseries;
pub mod validate;

pub use error::{Error, Result};
pub use indices::{compute_ndvi, compute_ndwi, IndexGrid, IndexKind};
pub use masking::{apply_mask, combine_masks, vegetation_mask, PixelMask, Provenance};
pub use pipeline::{process_scene, SceneProducts};
pub use raster::{
    downsample_mean, rasterize_aoi, read_ascii_grid, write_ascii_grid, AoiShape, AreaOfInterest, BandId, CloudCover,
    GridGeometry, Mask, RasterGrid, Scene,
};
pub use risk::{classify_aoi, classify_risk, render_binary_pgm, render_risk_ppm, RiskClass, RiskConfig, RiskMap};
pub use timeseries::{build_series, build_series_multi, export_series_csv, zonal_mean, IndexSeries, SeriesPoint};
pub use validate::{confusion, metrics, ConfusionMatrix, Metrics};
