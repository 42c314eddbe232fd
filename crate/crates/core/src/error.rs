use std::path::PathBuf;

use chrono::NaiveDate;
use thiserror::Error;

use crate::raster::GridGeometry;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("incompatible grid geometries: {left:?} vs {right:?}")]
    IncompatibleGeometry {
        left: GridGeometry,
        right: GridGeometry,
    },

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("zone selects no valid cells")]
    EmptyZone,

    #[error("scene {date}: missing band {band}")]
    MissingBand { date: NaiveDate, band: String },

    #[error("date {0} not present in series")]
    DateNotFound(NaiveDate),

    #[error("duplicate acquisition date {0}")]
    DuplicateDate(NaiveDate),

    #[error("regions {0} and {1} overlap")]
    OverlappingRegions(String, String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn incompatible(left: &GridGeometry, right: &GridGeometry) -> Self {
        Error::IncompatibleGeometry {
            left: *left,
            right: *right,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
