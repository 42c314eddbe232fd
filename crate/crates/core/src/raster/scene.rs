use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;

use super::{resample_to_cell_size, Mask, RasterGrid};
use crate::error::{Error, Result};

/// Sentinel-2 band label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BandId {
    B2,
    B3,
    B4,
    B5,
    B6,
    B7,
    B8,
    B8A,
    B11,
    B12,
    Other(String),
}

impl BandId {
    /// Native resolution and center wavelength of the MSI bands.
    pub fn descriptor(&self) -> Option<BandDescriptor> {
        let (native_resolution, center_wavelength) = match self {
            BandId::B2 => (10.0, 0.490),
            BandId::B3 => (10.0, 0.560),
            BandId::B4 => (10.0, 0.665),
            BandId::B5 => (20.0, 0.705),
            BandId::B6 => (20.0, 0.740),
            BandId::B7 => (20.0, 0.783),
            BandId::B8 => (10.0, 0.842),
            BandId::B8A => (20.0, 0.865),
            BandId::B11 => (20.0, 1.610),
            BandId::B12 => (20.0, 2.190),
            BandId::Other(_) => return None,
        };
        Some(BandDescriptor {
            band_id: self.clone(),
            native_resolution,
            center_wavelength,
        })
    }
}

impl fmt::Display for BandId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BandId::B2 => f.write_str("B2"),
            BandId::B3 => f.write_str("B3"),
            BandId::B4 => f.write_str("B4"),
            BandId::B5 => f.write_str("B5"),
            BandId::B6 => f.write_str("B6"),
            BandId::B7 => f.write_str("B7"),
            BandId::B8 => f.write_str("B8"),
            BandId::B8A => f.write_str("B8A"),
            BandId::B11 => f.write_str("B11"),
            BandId::B12 => f.write_str("B12"),
            BandId::Other(name) => f.write_str(name),
        }
    }
}

impl FromStr for BandId {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "B2" | "B02" => BandId::B2,
            "B3" | "B03" => BandId::B3,
            "B4" | "B04" => BandId::B4,
            "B5" | "B05" => BandId::B5,
            "B6" | "B06" => BandId::B6,
            "B7" | "B07" => BandId::B7,
            "B8" | "B08" => BandId::B8,
            "B8A" => BandId::B8A,
            "B11" => BandId::B11,
            "B12" => BandId::B12,
            _ => BandId::Other(s.to_string()),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandDescriptor {
    pub band_id: BandId,
    /// Meters.
    pub native_resolution: f64,
    /// Micrometers.
    pub center_wavelength: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CloudCover {
    None,
    Partial,
    Full,
}

impl CloudCover {
    pub fn as_str(&self) -> &'static str {
        match self {
            CloudCover::None => "none",
            CloudCover::Partial => "partial",
            CloudCover::Full => "full",
        }
    }
}

impl fmt::Display for CloudCover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CloudCover {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" | "no" => Ok(CloudCover::None),
            "partial" | "partially" => Ok(CloudCover::Partial),
            "full" => Ok(CloudCover::Full),
            other => Err(Error::InvalidArgument(format!("unknown cloud cover {other:?}"))),
        }
    }
}

/// One dated acquisition: co-registered bands at their native resolutions.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub acquisition_date: NaiveDate,
    pub mission_tag: String,
    pub cloud_cover: CloudCover,
    pub bands: BTreeMap<BandId, RasterGrid>,
    /// True where the pixel is cloudy, on the common grid.
    pub cloud_mask: Option<Mask>,
}

impl Scene {
    pub fn new(acquisition_date: NaiveDate, mission_tag: impl Into<String>, cloud_cover: CloudCover) -> Self {
        Scene {
            acquisition_date,
            mission_tag: mission_tag.into(),
            cloud_cover,
            bands: BTreeMap::new(),
            cloud_mask: None,
        }
    }

    pub fn with_band(mut self, band: BandId, grid: RasterGrid) -> Self {
        self.bands.insert(band, grid);
        self
    }

    pub fn with_cloud_mask(mut self, mask: Mask) -> Self {
        self.cloud_mask = Some(mask);
        self
    }

    pub fn band(&self, band: &BandId) -> Result<&RasterGrid> {
        self.bands.get(band).ok_or_else(|| Error::MissingBand {
            date: self.acquisition_date,
            band: band.to_string(),
        })
    }

    /// Resamples the requested bands onto the coarsest of their resolutions
    /// and checks that they land on one grid.
    pub fn common_grid(&self, bands: &[BandId]) -> Result<Vec<RasterGrid>> {
        let grids = bands.iter().map(|b| self.band(b)).collect::<Result<Vec<_>>>()?;
        let target = grids
            .iter()
            .map(|g| g.geometry().cell_size)
            .fold(f64::MIN, f64::max);
        let resampled = grids
            .into_iter()
            .map(|g| resample_to_cell_size(g, target))
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = resampled.first() {
            for other in &resampled[1..] {
                first.geometry().ensure_compatible(other.geometry())?;
            }
            if let Some(cloud) = &self.cloud_mask {
                first.geometry().ensure_compatible(cloud.geometry())?;
            }
        }
        Ok(resampled)
    }
}
