//! Synthetic multi-temporal scenes with known burned regions.
//!
//! Each region carries a reflectance profile: a pre-fire baseline and,
//! optionally, the reflectances it switches to from its ignition date on.
//! Red and NIR are emitted at half the common cell size (10 m for a 20 m
//! grid) and SWIR on the common grid, mirroring the Sentinel-2 layout. Fine
//! cells take the profile of the common-grid cell containing them.
//!
//! Noise is Gaussian, independent per cell and band, clamped at zero. Each
//! (acquisition, band) pair draws from its own ChaCha8 stream so scenes can
//! be generated in any order or in parallel with identical output.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::indices::normalized_difference;
use crate::manifest::{write_aoi_polygon, Manifest, ManifestEntry};
use crate::raster::{
    rasterize_aoi, write_ascii_grid, AoiShape, AreaOfInterest, BandId, CloudCover, GridGeometry, Mask, RasterGrid, Scene,
};

/// Identifies the random source so fixtures can be reproduced elsewhere.
pub const RNG_ALGORITHM: &str = "chacha8/stream=acquisition*3+band(B4=0,B8=1,B11=2)/rand_distr-0.5-normal";

/// Reflectance of cloudy pixels in every band.
pub const CLOUD_REFLECTANCE: Reflectance = Reflectance {
    red: 0.50,
    nir: 0.52,
    swir: 0.48,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reflectance {
    pub red: f64,
    pub nir: f64,
    pub swir: f64,
}

impl Reflectance {
    pub fn ndwi(&self) -> Option<f64> {
        normalized_difference(self.nir, self.swir)
    }

    pub fn ndvi(&self) -> Option<f64> {
        normalized_difference(self.nir, self.red)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Burn {
    pub ignition_date: NaiveDate,
    /// Reflectances from the ignition date onwards.
    pub burned: Reflectance,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectanceProfile {
    pub baseline: Reflectance,
    pub burn: Option<Burn>,
}

impl ReflectanceProfile {
    pub fn constant(baseline: Reflectance) -> Self {
        ReflectanceProfile { baseline, burn: None }
    }

    pub fn at(&self, date: NaiveDate) -> Reflectance {
        match self.burn {
            Some(burn) if date >= burn.ignition_date => burn.burned,
            _ => self.baseline,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub aoi: AreaOfInterest,
    pub profile: ReflectanceProfile,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Acquisition {
    pub date: NaiveDate,
    pub mission: String,
    pub cloud_cover: CloudCover,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    /// Common (SWIR) grid.
    pub geometry: GridGeometry,
    pub acquisitions: Vec<Acquisition>,
    pub regions: Vec<Region>,
    /// Reflectance outside every region.
    pub background: Reflectance,
    /// Cells covered on partially cloudy acquisitions; fully cloudy ones are
    /// covered everywhere.
    pub cloud_shape: Option<AreaOfInterest>,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "noise sigma must be non-negative, got {}",
                self.noise_sigma
            )));
        }
        if self.acquisitions.is_empty() {
            return Err(Error::InvalidArgument("at least one acquisition date is required".into()));
        }
        if let Some(w) = self.acquisitions.windows(2).find(|w| w[0].date >= w[1].date) {
            return Err(Error::InvalidArgument(format!(
                "acquisition dates must be strictly increasing ({} then {})",
                w[0].date, w[1].date
            )));
        }
        Ok(())
    }

    /// Fine (red/NIR) grid: half the cell size, same footprint.
    pub fn fine_geometry(&self) -> GridGeometry {
        GridGeometry {
            n_cols: self.geometry.n_cols * 2,
            n_rows: self.geometry.n_rows * 2,
            cell_size: self.geometry.cell_size / 2.0,
            ..self.geometry
        }
    }

    /// Region index per common-grid cell; errors if regions overlap.
    fn region_index(&self) -> Result<Vec<Option<usize>>> {
        let mut owner: Vec<Option<usize>> = vec![None; self.geometry.len()];
        for (r, region) in self.regions.iter().enumerate() {
            let mask = rasterize_aoi(&region.aoi, &self.geometry)?;
            for (cell, &inside) in owner.iter_mut().zip(mask.cells()) {
                if inside {
                    if let Some(prev) = *cell {
                        return Err(Error::OverlappingRegions(
                            self.regions[prev].aoi.name.clone(),
                            region.aoi.name.clone(),
                        ));
                    }
                    *cell = Some(r);
                }
            }
        }
        Ok(owner)
    }

    fn cloud_mask(&self, cover: CloudCover) -> Result<Option<Mask>> {
        match (cover, &self.cloud_shape) {
            (CloudCover::None, _) => Ok(None),
            (CloudCover::Full, _) => Ok(Some(Mask::filled(self.geometry, true))),
            (CloudCover::Partial, Some(shape)) => rasterize_aoi(shape, &self.geometry).map(Some),
            (CloudCover::Partial, None) => Ok(None),
        }
    }
}

pub fn generate_dataset(spec: &SynthSpec) -> Result<Vec<Scene>> {
    spec.validate()?;
    let owner = spec.region_index()?;
    spec.acquisitions
        .par_iter()
        .enumerate()
        .map(|(k, acq)| generate_scene(spec, &owner, k, acq))
        .collect()
}

fn generate_scene(spec: &SynthSpec, owner: &[Option<usize>], k: usize, acq: &Acquisition) -> Result<Scene> {
    let cloud = spec.cloud_mask(acq.cloud_cover)?;
    let reflectance_at = |coarse: usize| -> Reflectance {
        if cloud.as_ref().is_some_and(|m| m.cells()[coarse]) {
            return CLOUD_REFLECTANCE;
        }
        match owner[coarse] {
            Some(r) => spec.regions[r].profile.at(acq.date),
            None => spec.background,
        }
    };
    let coarse = spec.geometry;
    let fine = spec.fine_geometry();
    let parent = |i: usize| {
        let (row, col) = (i / fine.n_cols, i % fine.n_cols);
        (row / 2) * coarse.n_cols + col / 2
    };

    let band = |band_idx: u64, geometry: GridGeometry, pick: &dyn Fn(usize) -> f64| -> Result<RasterGrid> {
        let mut values: Vec<f64> = (0..geometry.len()).map(pick).collect();
        if spec.noise_sigma > 0.0 {
            let normal = Normal::new(0.0, spec.noise_sigma)
                .map_err(|e| Error::InvalidArgument(e.to_string()))?;
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(k as u64 * 3 + band_idx);
            for v in &mut values {
                *v = (*v + normal.sample(&mut rng)).max(0.0);
            }
        }
        RasterGrid::from_values(geometry, values)
    };

    let red = band(0, fine, &|i| reflectance_at(parent(i)).red)?;
    let nir = band(1, fine, &|i| reflectance_at(parent(i)).nir)?;
    let swir = band(2, coarse, &|i| reflectance_at(i).swir)?;

    let mut scene = Scene::new(acq.date, acq.mission.clone(), acq.cloud_cover)
        .with_band(BandId::B4, red)
        .with_band(BandId::B8, nir)
        .with_band(BandId::B11, swir);
    scene.cloud_mask = cloud;
    Ok(scene)
}

/// 1 on cells of regions that burn, 0 elsewhere.
pub fn generate_gt(spec: &SynthSpec) -> Result<RasterGrid> {
    spec.validate()?;
    let owner = spec.region_index()?;
    let values = owner
        .iter()
        .map(|o| match o {
            Some(r) if spec.regions[*r].profile.burn.is_some() => 1.0,
            _ => 0.0,
        })
        .collect();
    RasterGrid::from_values(spec.geometry, values)
}

/// Acquisition calendar of the 2016-2017 Vesuvius campaign: date, mission,
/// cloud cover.
pub fn vesuvius_acquisitions() -> Vec<Acquisition> {
    const ROWS: [(i32, u32, u32, &str, CloudCover); 14] = [
        (2016, 12, 9, "S-2A", CloudCover::None),
        (2017, 3, 29, "S-2A", CloudCover::None),
        (2017, 4, 8, "S-2A", CloudCover::None),
        (2017, 6, 27, "S-2A", CloudCover::Partial),
        (2017, 7, 7, "S-2A", CloudCover::Partial),
        (2017, 7, 12, "S-2B", CloudCover::None),
        (2017, 7, 17, "S-2A", CloudCover::Partial),
        (2017, 8, 6, "S-2A", CloudCover::None),
        (2017, 8, 16, "S-2A", CloudCover::None),
        (2017, 8, 31, "S-2B", CloudCover::None),
        (2017, 10, 15, "S-2A", CloudCover::None),
        (2017, 11, 4, "S-2A", CloudCover::None),
        (2017, 12, 19, "S-2B", CloudCover::None),
        (2017, 12, 24, "S-2A", CloudCover::None),
    ];
    ROWS.iter()
        .map(|&(y, m, d, mission, cloud_cover)| Acquisition {
            date: NaiveDate::from_ymd_opt(y, m, d).expect("valid calendar date"),
            mission: mission.to_string(),
            cloud_cover,
        })
        .collect()
}

pub fn vesuvius_ignition_date() -> NaiveDate {
    NaiveDate::from_ymd_opt(2017, 7, 7).expect("valid calendar date")
}

/// Drier-than-average vegetation that later burns.
pub const BURNED_PRE_FIRE: Reflectance = Reflectance {
    red: 0.05,
    nir: 0.30,
    swir: 0.22,
};
/// Charred but still above the vegetation NDVI floor.
pub const BURNED_POST_FIRE: Reflectance = Reflectance {
    red: 0.05,
    nir: 0.14,
    swir: 0.22,
};
pub const HEALTHY_VEGETATION: Reflectance = Reflectance {
    red: 0.04,
    nir: 0.40,
    swir: 0.18,
};
/// Built-up surface, removed by the vegetation mask.
pub const ARTIFICIAL_SURFACE: Reflectance = Reflectance {
    red: 0.20,
    nir: 0.24,
    swir: 0.26,
};

pub const BURNED_AOI: &str = "burned";
pub const UNBURNED_AOI: &str = "unburned";

/// Fourteen-acquisition fixture on an `n`×`n` 20 m grid with a burned and an
/// unburned vegetated block separated by built-up background. Partially
/// cloudy acquisitions are covered over the northern three eighths, which
/// clips the top of both blocks.
pub fn vesuvius_fixture(n: usize, noise_sigma: f64, seed: u64) -> Result<SynthSpec> {
    if n < 8 || !n.is_multiple_of(8) {
        return Err(Error::InvalidArgument(format!("fixture size must be a positive multiple of 8, got {n}")));
    }
    let geometry = GridGeometry::new(n, n, 448_000.0, 4_510_000.0, 20.0)?;
    let cell = geometry.cell_size;
    let x = |col: usize| geometry.x_origin + col as f64 * cell;
    // Row boundaries counted from the north edge.
    let top = geometry.y_origin + n as f64 * cell;
    let y = |row: usize| top - row as f64 * cell;
    let eighth = n / 8;

    let burned = AreaOfInterest::rectangle(BURNED_AOI, (x(eighth), y(6 * eighth)), (x(3 * eighth), y(2 * eighth)))?;
    let unburned =
        AreaOfInterest::rectangle(UNBURNED_AOI, (x(5 * eighth), y(6 * eighth)), (x(7 * eighth), y(2 * eighth)))?;
    let clouds = AreaOfInterest::rectangle("clouds", (x(0), y(3 * eighth)), (x(n), y(0)))?;

    Ok(SynthSpec {
        geometry,
        acquisitions: vesuvius_acquisitions(),
        regions: vec![
            Region {
                aoi: burned,
                profile: ReflectanceProfile {
                    baseline: BURNED_PRE_FIRE,
                    burn: Some(Burn {
                        ignition_date: vesuvius_ignition_date(),
                        burned: BURNED_POST_FIRE,
                    }),
                },
            },
            Region {
                aoi: unburned,
                profile: ReflectanceProfile::constant(HEALTHY_VEGETATION),
            },
        ],
        background: ARTIFICIAL_SURFACE,
        cloud_shape: Some(clouds),
        noise_sigma,
        seed,
    })
}

/// Paths of a dataset written by [`write_dataset`].
#[derive(Debug, Clone)]
pub struct DatasetFiles {
    pub manifest: PathBuf,
    pub ground_truth: PathBuf,
    pub aois: Vec<PathBuf>,
}

/// Writes every band as an ASCII grid plus the manifest, the ground truth
/// and one AOI file per polygon region.
pub fn write_dataset(spec: &SynthSpec, dir: impl AsRef<Path>) -> Result<DatasetFiles> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let scenes = generate_dataset(spec)?;

    let entries = scenes
        .par_iter()
        .map(|scene| {
            let stamp = scene.acquisition_date.format("%Y%m%d");
            let mut bands = BTreeMap::new();
            for (band, grid) in &scene.bands {
                let path = dir.join(format!("{band}_{stamp}.asc"));
                write_ascii_grid(grid, &path)?;
                bands.insert(band.clone(), path);
            }
            let cloud_mask = match &scene.cloud_mask {
                Some(mask) => {
                    let path = dir.join(format!("clouds_{stamp}.asc"));
                    write_ascii_grid(&mask.to_grid(), &path)?;
                    Some(path)
                }
                None => None,
            };
            Ok(ManifestEntry {
                date: scene.acquisition_date,
                mission: scene.mission_tag.clone(),
                cloud_cover: scene.cloud_cover,
                bands,
                cloud_mask,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let metadata = BTreeMap::from([
        ("rng".to_string(), RNG_ALGORITHM.to_string()),
        ("seed".to_string(), spec.seed.to_string()),
        ("noise_sigma".to_string(), spec.noise_sigma.to_string()),
    ]);
    let manifest_path = dir.join("manifest.txt");
    Manifest { entries, metadata }.write(&manifest_path)?;

    let gt_path = dir.join("gt.asc");
    write_ascii_grid(&generate_gt(spec)?, &gt_path)?;

    let mut aois = Vec::new();
    for region in &spec.regions {
        if let AoiShape::Polygon(vertices) = &region.aoi.shape {
            let path = dir.join(format!("aoi_{}.json", region.aoi.name));
            write_aoi_polygon(&region.aoi.name, vertices, &path)?;
            aois.push(path);
        }
    }
    Ok(DatasetFiles {
        manifest: manifest_path,
        ground_truth: gt_path,
        aois,
    })
}
