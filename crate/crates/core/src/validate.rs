//! Agreement between a risk map and a burned-area ground truth.

use crate::error::{Error, Result};
use crate::raster::RasterGrid;
use crate::risk::{RiskClass, RiskMap};

/// Counts over cells that are classified in the risk map and valid in the
/// ground truth. Positive means at risk / burned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionMatrix {
    pub true_positive: u64,
    pub false_positive: u64,
    pub false_negative: u64,
    pub true_negative: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.true_positive + self.false_positive + self.false_negative + self.true_negative
    }

    /// The matrix with prediction and truth swapped.
    pub fn transposed(&self) -> ConfusionMatrix {
        ConfusionMatrix {
            false_positive: self.false_negative,
            false_negative: self.false_positive,
            ..*self
        }
    }
}

/// Ratios derived from a confusion matrix. `None` marks a 0/0 ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub accuracy: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub iou: Option<f64>,
}

/// `gt` cells: non-zero is burned, zero unburned, nodata ignored.
pub fn confusion(risk: &RiskMap, gt: &RasterGrid) -> Result<ConfusionMatrix> {
    risk.geometry().ensure_compatible(gt.geometry())?;
    let mut cm = ConfusionMatrix::default();
    for (class, truth) in risk.classes().iter().zip(gt.cells()) {
        let Some(truth) = truth else { continue };
        let burned = truth != 0.0;
        match (class, burned) {
            (RiskClass::AtRisk, true) => cm.true_positive += 1,
            (RiskClass::AtRisk, false) => cm.false_positive += 1,
            (RiskClass::NotAtRisk, true) => cm.false_negative += 1,
            (RiskClass::NotAtRisk, false) => cm.true_negative += 1,
            (RiskClass::Unclassified, _) => {}
        }
    }
    if cm.total() == 0 {
        return Err(Error::EmptyZone);
    }
    Ok(cm)
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn metrics(cm: &ConfusionMatrix) -> Metrics {
    let ConfusionMatrix {
        true_positive: tp,
        false_positive: fp,
        false_negative: fn_,
        true_negative: tn,
    } = *cm;
    Metrics {
        accuracy: ratio(tp + tn, cm.total()),
        precision: ratio(tp, tp + fp),
        recall: ratio(tp, tp + fn_),
        iou: ratio(tp, tp + fp + fn_),
    }
}
