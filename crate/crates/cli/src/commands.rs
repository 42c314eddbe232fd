use std::fs;
use std::io::Write;
use std::path::Path;

use chrono::NaiveDate;
use firerisk_core::manifest::{read_aoi, read_manifest, Manifest};
use firerisk_core::pipeline::process_scene;
use firerisk_core::raster::{read_ascii_grid, write_ascii_grid};
use firerisk_core::synth::{vesuvius_fixture, write_dataset};
use firerisk_core::{
    build_series_multi, classify_risk, confusion, export_series_csv, metrics, render_binary_pgm, render_risk_ppm,
    ConfusionMatrix, Error, Metrics, RiskClass, RiskConfig, RiskMap,
};

use crate::{Command, Thresholds};

pub enum CliError {
    Usage(String),
    Data(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Data(e)
    }
}

type CliResult = Result<(), CliError>;

pub fn run(command: Command) -> CliResult {
    match command {
        Command::Index { manifest, date, out_dir } => index(&manifest, date, &out_dir),
        Command::Series { manifest, aois, out, thresholds } => {
            let cfg = config(&thresholds)?;
            series(&manifest, &aois, &out, &cfg)
        }
        Command::Riskmap { manifest, date, out_dir, thresholds } => {
            let cfg = config(&thresholds)?;
            riskmap(&manifest, date, &out_dir, &cfg)
        }
        Command::Validate { prediction, gt, out } => validate(&prediction, &gt, out.as_deref()),
        Command::Synth { out_dir, size, noise_sigma, seed } => synth(&out_dir, size, noise_sigma, seed),
    }
}

fn config(t: &Thresholds) -> Result<RiskConfig, CliError> {
    RiskConfig::new(t.ndwi_threshold, t.ndvi_threshold).map_err(|e| CliError::Usage(e.to_string()))
}

fn create_dir(dir: &Path) -> CliResult {
    fs::create_dir_all(dir).map_err(|e| CliError::Data(Error::Io { path: dir.to_path_buf(), source: e }))
}

fn load_manifest(path: &Path) -> Result<Manifest, CliError> {
    Ok(read_manifest(path)?)
}

fn index(manifest: &Path, date: NaiveDate, out_dir: &Path) -> CliResult {
    let manifest = load_manifest(manifest)?;
    let scene = manifest.entry(date)?.load()?;
    let products = process_scene(&scene, RiskConfig::default().ndvi_threshold)?;
    create_dir(out_dir)?;
    for index in [&products.ndwi, &products.ndvi] {
        let path = out_dir.join(format!("{}_{date}.asc", index.kind.to_string().to_lowercase()));
        write_ascii_grid(&index.grid, &path)?;
        println!(
            "{}: {} valid cells -> {}",
            index.kind,
            index.grid.valid_count(),
            path.display()
        );
    }
    Ok(())
}

fn series(manifest: &Path, aoi_paths: &[std::path::PathBuf], out: &Path, cfg: &RiskConfig) -> CliResult {
    let scenes = load_manifest(manifest)?.load_scenes()?;
    let aois = aoi_paths.iter().map(read_aoi).collect::<Result<Vec<_>, _>>()?;
    let series = build_series_multi(&scenes, &aois, cfg.ndvi_threshold)?;
    if let Some(parent) = out.parent() {
        create_dir(parent)?;
    }
    export_series_csv(&series, out)?;
    for s in &series {
        println!("{}: {} of {} scenes", s.aoi_name, s.points().len(), scenes.len());
    }
    Ok(())
}

fn riskmap(manifest: &Path, date: NaiveDate, out_dir: &Path, cfg: &RiskConfig) -> CliResult {
    let manifest = load_manifest(manifest)?;
    let scene = manifest.entry(date)?.load()?;
    let products = process_scene(&scene, cfg.ndvi_threshold)?;
    let map = classify_risk(&products.ndwi, &products.analysis_mask, cfg)?;
    create_dir(out_dir)?;
    let stem = out_dir.join(format!("risk_{date}"));
    render_risk_ppm(&products.ndwi, &map, stem.with_extension("ppm"))?;
    render_binary_pgm(&map, stem.with_extension("pgm"))?;
    write_ascii_grid(&map.to_grid(), stem.with_extension("asc"))?;
    println!(
        "at_risk={} not_at_risk={} unclassified={}",
        map.count(RiskClass::AtRisk),
        map.count(RiskClass::NotAtRisk),
        map.count(RiskClass::Unclassified)
    );
    Ok(())
}

fn fmt_ratio(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_string(), |v| format!("{v:.6}"))
}

fn report(cm: &ConfusionMatrix, m: &Metrics) -> String {
    format!(
        "tp,fp,fn,tn,accuracy,precision,recall,iou\n{},{},{},{},{},{},{},{}\n",
        cm.true_positive,
        cm.false_positive,
        cm.false_negative,
        cm.true_negative,
        fmt_ratio(m.accuracy),
        fmt_ratio(m.precision),
        fmt_ratio(m.recall),
        fmt_ratio(m.iou)
    )
}

fn validate(prediction: &Path, gt: &Path, out: Option<&Path>) -> CliResult {
    let map = RiskMap::from_grid(&read_ascii_grid(prediction)?, RiskConfig::default().ndwi_threshold);
    let gt = read_ascii_grid(gt)?;
    let cm = confusion(&map, &gt)?;
    let text = report(&cm, &metrics(&cm));
    print!("{text}");
    std::io::stdout().flush().ok();
    if let Some(path) = out {
        if let Some(parent) = path.parent() {
            create_dir(parent)?;
        }
        fs::write(path, &text).map_err(|e| CliError::Data(Error::Io { path: path.to_path_buf(), source: e }))?;
    }
    Ok(())
}

fn synth(out_dir: &Path, size: usize, noise_sigma: f64, seed: u64) -> CliResult {
    let spec = vesuvius_fixture(size, noise_sigma, seed).map_err(|e| CliError::Usage(e.to_string()))?;
    spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let files = write_dataset(&spec, out_dir)?;
    println!("manifest: {}", files.manifest.display());
    println!("ground truth: {}", files.ground_truth.display());
    for aoi in &files.aois {
        println!("aoi: {}", aoi.display());
    }
    Ok(())
}
