//! Grid data model, ASCII-grid I/O, resampling and AOI rasterization.

mod aoi;
mod ascii;
mod grid;
mod resample;
mod scene;
pub mod tile;

pub use aoi::{rasterize_aoi, AoiShape, AreaOfInterest, Point};
pub use ascii::{format_sig10, parse_ascii_grid, read_ascii_grid, write_ascii_grid, write_ascii_grid_to};
pub use grid::{GridGeometry, Mask, RasterGrid};
pub use resample::{downsample_mean, resample_to_cell_size};
pub use scene::{BandDescriptor, BandId, CloudCover, Scene};
