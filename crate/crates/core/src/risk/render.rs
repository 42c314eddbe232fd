//! Binary PPM/PGM rendering of risk maps.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{RiskClass, RiskMap};
use crate::error::{Error, Result};
use crate::indices::IndexGrid;

const NOT_AT_RISK_RGB: [u8; 3] = [180, 180, 180];
const UNCLASSIFIED_RGB: [u8; 3] = [0, 0, 0];

pub fn ppm_header(n_cols: usize, n_rows: usize) -> String {
    format!("P6\n{n_cols} {n_rows}\n255\n")
}

pub fn pgm_header(n_cols: usize, n_rows: usize) -> String {
    format!("P5\n{n_cols} {n_rows}\n255\n")
}

/// Color of an at-risk cell: yellow at the threshold, fading linearly to red
/// at NDWI = -1.
pub fn risk_color(ndwi: f64, threshold: f64) -> [u8; 3] {
    let span = threshold + 1.0;
    let t = if span > 0.0 {
        ((threshold - ndwi) / span).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let green = (255.0 * (1.0 - t)).round() as u8;
    [255, green, 0]
}

pub fn write_risk_ppm(ndwi: &IndexGrid, riskmap: &RiskMap, out: &mut impl Write) -> Result<()> {
    ndwi.geometry().ensure_compatible(riskmap.geometry())?;
    let g = riskmap.geometry();
    let mut bytes = Vec::with_capacity(g.len() * 3 + 32);
    bytes.extend_from_slice(ppm_header(g.n_cols, g.n_rows).as_bytes());
    for (i, class) in riskmap.classes().iter().enumerate() {
        let rgb = match (class, ndwi.grid.cell(i)) {
            (RiskClass::AtRisk, Some(v)) => risk_color(v, riskmap.ndwi_threshold),
            (RiskClass::AtRisk, None) => risk_color(riskmap.ndwi_threshold, riskmap.ndwi_threshold),
            (RiskClass::NotAtRisk, _) => NOT_AT_RISK_RGB,
            (RiskClass::Unclassified, _) => UNCLASSIFIED_RGB,
        };
        bytes.extend_from_slice(&rgb);
    }
    out.write_all(&bytes).map_err(|e| Error::io("<ppm>", e))
}

pub fn pgm_level(class: RiskClass) -> u8 {
    match class {
        RiskClass::AtRisk => 255,
        RiskClass::NotAtRisk => 0,
        RiskClass::Unclassified => 127,
    }
}

pub fn write_binary_pgm(riskmap: &RiskMap, out: &mut impl Write) -> Result<()> {
    let g = riskmap.geometry();
    let mut bytes = Vec::with_capacity(g.len() + 32);
    bytes.extend_from_slice(pgm_header(g.n_cols, g.n_rows).as_bytes());
    bytes.extend(riskmap.classes().iter().map(|&c| pgm_level(c)));
    out.write_all(&bytes).map_err(|e| Error::io("<pgm>", e))
}

fn write_file(path: &Path, write: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write(&mut out).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })?;
    out.flush().map_err(|e| Error::io(path, e))
}

/// Binary PPM (P6): at-risk cells on the yellow-to-red ramp, not-at-risk
/// gray, unclassified black.
pub fn render_risk_ppm(ndwi: &IndexGrid, riskmap: &RiskMap, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), |out| write_risk_ppm(ndwi, riskmap, out))
}

/// Binary PGM (P5): at risk 255, not at risk 0, unclassified 127.
pub fn render_binary_pgm(riskmap: &RiskMap, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), |out| write_binary_pgm(riskmap, out))
}
