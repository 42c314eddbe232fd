//! Zonal NDWI statistics and their time series.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use chrono::NaiveDate;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::masking::{combine_masks, PixelMask};
use crate::pipeline::{process_scene, SceneProducts};
use crate::raster::{AreaOfInterest, CloudCover, RasterGrid, Scene};
use crate::sum::pairwise_sum;

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPoint {
    pub date: NaiveDate,
    pub mean_ndwi: f64,
    pub valid_pixel_count: usize,
    pub cloud_cover: CloudCover,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexSeries {
    pub aoi_name: String,
    points: Vec<SeriesPoint>,
}

impl IndexSeries {
    /// Sorts `points` by date; duplicate dates are rejected.
    pub fn new(aoi_name: impl Into<String>, mut points: Vec<SeriesPoint>) -> Result<Self> {
        points.sort_by_key(|p| p.date);
        if let Some(w) = points.windows(2).find(|w| w[0].date == w[1].date) {
            return Err(Error::DuplicateDate(w[0].date));
        }
        if points.iter().any(|p| p.valid_pixel_count == 0) {
            return Err(Error::InvalidArgument("series points need at least one pixel".into()));
        }
        Ok(IndexSeries {
            aoi_name: aoi_name.into(),
            points,
        })
    }

    pub fn points(&self) -> &[SeriesPoint] {
        &self.points
    }

    pub fn point_at(&self, date: NaiveDate) -> Option<&SeriesPoint> {
        self.points
            .binary_search_by_key(&date, |p| p.date)
            .ok()
            .map(|i| &self.points[i])
    }
}

/// Mean of the valid cells of `grid` selected by `mask`, with the number of
/// contributing cells. Cells are summed pairwise in row-major order.
pub fn zonal_mean(grid: &RasterGrid, mask: &PixelMask) -> Result<(f64, usize)> {
    grid.geometry().ensure_compatible(mask.geometry())?;
    let selected: Vec<f64> = grid
        .cells()
        .zip(mask.mask.cells())
        .filter_map(|(v, &keep)| if keep { v } else { None })
        .collect();
    if selected.is_empty() {
        return Err(Error::EmptyZone);
    }
    let (lo, hi) = selected
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let mean = pairwise_sum(&selected) / selected.len() as f64;
    // Rounding can push the mean of near-equal values one ulp past the range.
    Ok((mean.clamp(lo, hi), selected.len()))
}

fn sorted_scenes(scenes: &[Scene]) -> Result<Vec<&Scene>> {
    if scenes.is_empty() {
        return Err(Error::InvalidArgument("at least one scene is required".into()));
    }
    let mut sorted: Vec<&Scene> = scenes.iter().collect();
    sorted.sort_by_key(|s| s.acquisition_date);
    if let Some(w) = sorted.windows(2).find(|w| w[0].acquisition_date == w[1].acquisition_date) {
        return Err(Error::DuplicateDate(w[0].acquisition_date));
    }
    Ok(sorted)
}

fn series_point(products: &SceneProducts, aoi: &AreaOfInterest) -> Result<Option<SeriesPoint>> {
    let aoi_mask = PixelMask::from_aoi(aoi, products.geometry())?;
    let mask = combine_masks(&[&aoi_mask, &products.analysis_mask])?;
    match zonal_mean(&products.ndwi.grid, &mask) {
        Ok((mean_ndwi, valid_pixel_count)) => Ok(Some(SeriesPoint {
            date: products.date,
            mean_ndwi,
            valid_pixel_count,
            cloud_cover: products.cloud_cover,
        })),
        Err(Error::EmptyZone) => {
            log::info!("{}: no usable pixels in AOI {:?}, skipping", products.date, aoi.name);
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// Mean-NDWI series over vegetation pixels of each AOI.
///
/// Scenes are processed in parallel; the result does not depend on the
/// number of threads. Scenes where an AOI has no usable pixels contribute no
/// point to that AOI's series.
pub fn build_series_multi(
    scenes: &[Scene],
    aois: &[AreaOfInterest],
    ndvi_threshold: f64,
) -> Result<Vec<IndexSeries>> {
    let scenes = sorted_scenes(scenes)?;
    let per_scene: Vec<Vec<Option<SeriesPoint>>> = scenes
        .par_iter()
        .map(|scene| {
            let products = process_scene(scene, ndvi_threshold)?;
            aois.iter().map(|aoi| series_point(&products, aoi)).collect()
        })
        .collect::<Result<_>>()?;
    aois.iter()
        .enumerate()
        .map(|(i, aoi)| {
            let points = per_scene.iter().filter_map(|row| row[i].clone()).collect();
            IndexSeries::new(aoi.name.clone(), points)
        })
        .collect()
}

pub fn build_series(scenes: &[Scene], aoi: &AreaOfInterest, ndvi_threshold: f64) -> Result<IndexSeries> {
    let mut all = build_series_multi(scenes, std::slice::from_ref(aoi), ndvi_threshold)?;
    Ok(all.remove(0))
}

pub const CSV_HEADER: [&str; 5] = ["aoi", "date", "mean_ndwi", "valid_pixels", "cloud_cover"];

/// Writes one row per (AOI, date), grouped by AOI name and date-ascending
/// within each group.
pub fn export_series_csv(series: &[IndexSeries], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_series_csv(series, file).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn write_series_csv(series: &[IndexSeries], out: impl Write) -> Result<()> {
    if series.is_empty() {
        return Err(Error::InvalidArgument("no series to export".into()));
    }
    let mut rows: Vec<(&str, &SeriesPoint)> = series
        .iter()
        .flat_map(|s| s.points.iter().map(move |p| (s.aoi_name.as_str(), p)))
        .collect();
    rows.sort_by(|a, b| a.0.cmp(b.0).then(a.1.date.cmp(&b.1.date)));
    if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0 && w[0].1.date == w[1].1.date) {
        return Err(Error::DuplicateDate(w[0].1.date));
    }

    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let csv_err = |e: csv::Error| Error::io("<csv>", e.into());
    writer.write_record(CSV_HEADER).map_err(csv_err)?;
    for (aoi, p) in rows {
        writer
            .write_record([
                aoi.to_string(),
                p.date.format("%Y-%m-%d").to_string(),
                format!("{:.6}", p.mean_ndwi),
                p.valid_pixel_count.to_string(),
                p.cloud_cover.to_string(),
            ])
            .map_err(csv_err)?;
    }
    writer.flush().map_err(|e| Error::io("<csv>", e))
}

/// Parses CSV written by [`export_series_csv`]. Series appear in file order.
pub fn read_series_csv(path: impl AsRef<Path>) -> Result<Vec<IndexSeries>> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_to_error(path, e))?;
    let header = reader.headers().map_err(|e| csv_to_error(path, e))?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(parse_err(path, 1, format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    let mut groups: Vec<(String, Vec<SeriesPoint>)> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| csv_to_error(path, e))?;
        let field = |n: usize| record.get(n).unwrap_or_default();
        let date = NaiveDate::parse_from_str(field(1), "%Y-%m-%d")
            .map_err(|e| parse_err(path, line, format!("bad date {:?}: {e}", field(1))))?;
        let mean_ndwi: f64 = field(2)
            .parse()
            .map_err(|_| parse_err(path, line, format!("bad mean {:?}", field(2))))?;
        let valid_pixel_count: usize = field(3)
            .parse()
            .map_err(|_| parse_err(path, line, format!("bad pixel count {:?}", field(3))))?;
        let cloud_cover = field(4)
            .parse()
            .map_err(|e: Error| parse_err(path, line, e.to_string()))?;
        let point = SeriesPoint {
            date,
            mean_ndwi,
            valid_pixel_count,
            cloud_cover,
        };
        match groups.iter_mut().find(|(name, _)| name == field(0)) {
            Some((_, points)) => points.push(point),
            None => groups.push((field(0).to_string(), vec![point])),
        }
    }
    groups
        .into_iter()
        .map(|(name, points)| IndexSeries::new(name, points))
        .collect()
}

fn parse_err(path: &Path, line: usize, message: String) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        column: 1,
        message,
    }
}

fn csv_to_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    let message = e.to_string();
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        _ => parse_err(path, line, message),
    }
}
