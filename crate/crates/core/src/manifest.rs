//! Scene manifests and AOI files.
//!
//! A manifest is a `key = value` text file; `#` starts a comment line.
//!
//! ```text
//! scene.1.date = 2017-06-27
//! scene.1.cloud = partial
//! scene.1.mission = S-2A
//! scene.1.band.B4 = b4_20170627.asc
//! scene.1.band.B8 = b8_20170627.asc
//! scene.1.band.B11 = b11_20170627.asc
//! scene.1.cloud_mask = clouds_20170627.asc
//! dataset.rng = ...
//! ```
//!
//! Relative paths resolve against the manifest's directory. `dataset.*`
//! keys carry free-form metadata.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{read_ascii_grid, AreaOfInterest, BandId, CloudCover, Mask, Point, Scene};

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub date: NaiveDate,
    pub mission: String,
    pub cloud_cover: CloudCover,
    pub bands: BTreeMap<BandId, PathBuf>,
    pub cloud_mask: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Manifest {
    /// Date-ascending.
    pub entries: Vec<ManifestEntry>,
    pub metadata: BTreeMap<String, String>,
}

#[derive(Default)]
struct PartialEntry {
    line: usize,
    date: Option<NaiveDate>,
    mission: Option<String>,
    cloud: Option<CloudCover>,
    bands: BTreeMap<BandId, PathBuf>,
    cloud_mask: Option<PathBuf>,
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<Manifest> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or(Path::new(""));
    parse_manifest(&text, path, base)
}

/// Parses manifest text; relative paths are joined onto `base`.
pub fn parse_manifest(text: &str, path: impl AsRef<Path>, base: &Path) -> Result<Manifest> {
    let path = path.as_ref();
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        column: 1,
        message,
    };
    let mut scenes: BTreeMap<u64, PartialEntry> = BTreeMap::new();
    let mut metadata = BTreeMap::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(line_no, format!("expected `key = value`, got {line:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        if value.is_empty() {
            return Err(err(line_no, format!("{key} has an empty value")));
        }
        let parts: Vec<&str> = key.split('.').collect();
        match parts.as_slice() {
            ["dataset", rest @ ..] if !rest.is_empty() => {
                metadata.insert(rest.join("."), value.to_string());
            }
            ["scene", n, field @ ..] => {
                let n: u64 = n
                    .parse()
                    .map_err(|_| err(line_no, format!("scene number {n:?} is not an integer")))?;
                let entry = scenes.entry(n).or_insert_with(|| PartialEntry {
                    line: line_no,
                    ..Default::default()
                });
                let duplicate = || err(line_no, format!("{key} given twice"));
                match field {
                    ["date"] => {
                        let d = NaiveDate::parse_from_str(value, "%Y-%m-%d")
                            .map_err(|e| err(line_no, format!("bad date {value:?}: {e}")))?;
                        if entry.date.replace(d).is_some() {
                            return Err(duplicate());
                        }
                    }
                    ["cloud"] => {
                        let c = value.parse().map_err(|e: Error| err(line_no, e.to_string()))?;
                        if entry.cloud.replace(c).is_some() {
                            return Err(duplicate());
                        }
                    }
                    ["mission"] => {
                        if entry.mission.replace(value.to_string()).is_some() {
                            return Err(duplicate());
                        }
                    }
                    ["band", band] => {
                        let band: BandId = band.parse().expect("infallible");
                        if entry.bands.insert(band, base.join(value)).is_some() {
                            return Err(duplicate());
                        }
                    }
                    ["cloud_mask"] => {
                        if entry.cloud_mask.replace(base.join(value)).is_some() {
                            return Err(duplicate());
                        }
                    }
                    _ => return Err(err(line_no, format!("unknown key {key:?}"))),
                }
            }
            _ => return Err(err(line_no, format!("unknown key {key:?}"))),
        }
    }

    let mut entries = scenes
        .into_iter()
        .map(|(n, p)| {
            Ok(ManifestEntry {
                date: p.date.ok_or_else(|| err(p.line, format!("scene.{n} has no date")))?,
                mission: p.mission.unwrap_or_default(),
                cloud_cover: p.cloud.unwrap_or(CloudCover::None),
                bands: p.bands,
                cloud_mask: p.cloud_mask,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    entries.sort_by_key(|e| e.date);
    if let Some(w) = entries.windows(2).find(|w| w[0].date == w[1].date) {
        return Err(Error::DuplicateDate(w[0].date));
    }
    Ok(Manifest { entries, metadata })
}

impl ManifestEntry {
    pub fn load(&self) -> Result<Scene> {
        let mut scene = Scene::new(self.date, self.mission.clone(), self.cloud_cover);
        for (band, path) in &self.bands {
            scene.bands.insert(band.clone(), read_ascii_grid(path)?);
        }
        if let Some(path) = &self.cloud_mask {
            scene.cloud_mask = Some(Mask::from_grid(&read_ascii_grid(path)?));
        }
        Ok(scene)
    }
}

impl Manifest {
    pub fn entry(&self, date: NaiveDate) -> Result<&ManifestEntry> {
        self.entries
            .iter()
            .find(|e| e.date == date)
            .ok_or_else(|| Error::InvalidArgument(format!("manifest has no scene dated {date}")))
    }

    /// Reads every scene, in parallel, in date order.
    pub fn load_scenes(&self) -> Result<Vec<Scene>> {
        self.entries.par_iter().map(ManifestEntry::load).collect()
    }

    /// Renders the manifest; paths under `base` are written relative to it.
    pub fn to_text(&self, base: &Path) -> String {
        let rel = |p: &Path| p.strip_prefix(base).unwrap_or(p).display().to_string();
        let mut out = String::new();
        for (key, value) in &self.metadata {
            writeln!(out, "dataset.{key} = {value}").expect("write to String");
        }
        for (i, e) in self.entries.iter().enumerate() {
            let n = i + 1;
            writeln!(out, "scene.{n}.date = {}", e.date.format("%Y-%m-%d")).expect("write to String");
            if !e.mission.is_empty() {
                writeln!(out, "scene.{n}.mission = {}", e.mission).expect("write to String");
            }
            writeln!(out, "scene.{n}.cloud = {}", e.cloud_cover).expect("write to String");
            for (band, path) in &e.bands {
                writeln!(out, "scene.{n}.band.{band} = {}", rel(path)).expect("write to String");
            }
            if let Some(path) = &e.cloud_mask {
                writeln!(out, "scene.{n}.cloud_mask = {}", rel(path)).expect("write to String");
            }
        }
        out
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let base = path.parent().unwrap_or(Path::new(""));
        fs::write(path, self.to_text(base)).map_err(|e| Error::io(path, e))
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AoiFile {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    polygon: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mask: Option<PathBuf>,
}

/// Reads `{"name": ..., "polygon": [[x, y], ...]}` or
/// `{"name": ..., "mask": "<ascii grid path>"}`.
pub fn read_aoi(path: impl AsRef<Path>) -> Result<AreaOfInterest> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let file: AoiFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let bad = |message: &str| Error::Parse {
        path: path.to_path_buf(),
        line: 1,
        column: 1,
        message: message.to_string(),
    };
    match (file.polygon, file.mask) {
        (Some(vertices), None) => {
            AreaOfInterest::polygon(file.name, vertices.into_iter().map(|[x, y]| (x, y)).collect())
        }
        (None, Some(mask)) => {
            let mask_path = path.parent().unwrap_or(Path::new("")).join(mask);
            Ok(AreaOfInterest::mask(file.name, Mask::from_grid(&read_ascii_grid(mask_path)?)))
        }
        (Some(_), Some(_)) => Err(bad("AOI has both `polygon` and `mask`")),
        (None, None) => Err(bad("AOI needs `polygon` or `mask`")),
    }
}

pub fn write_aoi_polygon(name: &str, vertices: &[Point], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = AoiFile {
        name: name.to_string(),
        polygon: Some(vertices.iter().map(|&(x, y)| [x, y]).collect()),
        mask: None,
    };
    let text = serde_json::to_string(&file).expect("AOI serializes");
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}
