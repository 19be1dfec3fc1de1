//! Water-quality tables: ingestion, labeling, scaling, rebalancing, splitting,
//! and a synthetic generator with the same column layout.
//!
//! `NotAcceptable` is the positive class throughout (SVM label +1, QNN target 1).

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::encoding::FeatureVector;
use crate::error::{Error, Result};
use crate::rng::{stage_rng, Stage};

pub const DEFAULT_ECOLI_COLUMN: &str = "E.coli - (MPN/100mL)";
pub const DEFAULT_ECOLI_THRESHOLD: f64 = 235.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Acceptable,
    NotAcceptable,
}

impl Label {
    pub fn is_positive(self) -> bool {
        self == Label::NotAcceptable
    }

    /// SVM label: +1 for not acceptable, −1 for acceptable.
    pub fn sign(self) -> i8 {
        if self.is_positive() {
            1
        } else {
            -1
        }
    }

    /// QNN target: 1 for not acceptable, 0 for acceptable.
    pub fn target(self) -> f64 {
        if self.is_positive() {
            1.0
        } else {
            0.0
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Acceptable => "acceptable",
            Label::NotAcceptable => "not_acceptable",
        }
    }
}

/// Acceptable iff `ecoli ≤ threshold` (the boundary is acceptable).
pub fn label_by_ecoli(ecoli: f64, threshold: f64) -> Result<Label> {
    if !(ecoli >= 0.0) {
        return Err(Error::InvalidInput(format!("E.coli count must be ≥ 0, got {ecoli}")));
    }
    if !(threshold >= 0.0) {
        return Err(Error::InvalidInput(format!("E.coli threshold must be ≥ 0, got {threshold}")));
    }
    Ok(if ecoli <= threshold {
        Label::Acceptable
    } else {
        Label::NotAcceptable
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub features: Vec<f64>,
    pub ecoli: f64,
    pub label: Label,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassCounts {
    pub acceptable: usize,
    pub not_acceptable: usize,
}

impl ClassCounts {
    pub fn of(label: Label, n: usize) -> Self {
        match label {
            Label::Acceptable => Self {
                acceptable: n,
                not_acceptable: 0,
            },
            Label::NotAcceptable => Self {
                acceptable: 0,
                not_acceptable: n,
            },
        }
    }

    pub fn get(&self, label: Label) -> usize {
        match label {
            Label::Acceptable => self.acceptable,
            Label::NotAcceptable => self.not_acceptable,
        }
    }

    pub fn total(&self) -> usize {
        self.acceptable + self.not_acceptable
    }
}

/// Per-column affine map onto `[lo, hi]`, fitted on one dataset and reusable on another.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaler {
    pub lo: f64,
    pub hi: f64,
    pub mins: Vec<f64>,
    pub maxs: Vec<f64>,
}

impl MinMaxScaler {
    pub fn fit(rows: &[Vec<f64>], lo: f64, hi: f64) -> Result<Self> {
        let first = rows
            .first()
            .ok_or_else(|| Error::InvalidInput("cannot fit a scaler on an empty dataset".into()))?;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidInput(format!("scaling range [{lo}, {hi}] is empty")));
        }
        let mut mins = first.clone();
        let mut maxs = first.clone();
        for row in &rows[1..] {
            for (j, v) in row.iter().enumerate() {
                mins[j] = mins[j].min(*v);
                maxs[j] = maxs[j].max(*v);
            }
        }
        Ok(Self { lo, hi, mins, maxs })
    }

    /// Columns with a single distinct value land on the range midpoint.
    pub fn transform(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(j, v)| {
                let span = self.maxs[j] - self.mins[j];
                if span > 0.0 {
                    self.lo + (v - self.mins[j]) / span * (self.hi - self.lo)
                } else {
                    0.5 * (self.lo + self.hi)
                }
            })
            .collect()
    }

    /// Constant columns invert to their single value.
    pub fn inverse(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(j, v)| {
                let span = self.maxs[j] - self.mins[j];
                if span > 0.0 {
                    self.mins[j] + (v - self.lo) / (self.hi - self.lo) * span
                } else {
                    self.mins[j]
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub samples: Vec<Sample>,
    pub column_names: Vec<String>,
    #[serde(default)]
    pub scaling: Option<MinMaxScaler>,
}

impl Dataset {
    /// Checks that every row has one value per column and no NaNs.
    pub fn new(samples: Vec<Sample>, column_names: Vec<String>) -> Result<Self> {
        for (i, s) in samples.iter().enumerate() {
            if s.features.len() != column_names.len() {
                return Err(Error::InvalidInput(format!(
                    "row {i} has {} features, expected {}",
                    s.features.len(),
                    column_names.len()
                )));
            }
            if s.features.iter().any(|v| !v.is_finite()) || !(s.ecoli >= 0.0) {
                return Err(Error::InvalidInput(format!("row {i} has a missing or invalid value")));
            }
        }
        Ok(Self {
            samples,
            column_names,
            scaling: None,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn num_features(&self) -> usize {
        self.column_names.len()
    }

    pub fn class_counts(&self) -> ClassCounts {
        let mut c = ClassCounts::default();
        for s in &self.samples {
            match s.label {
                Label::Acceptable => c.acceptable += 1,
                Label::NotAcceptable => c.not_acceptable += 1,
            }
        }
        c
    }

    pub fn feature_vectors(&self) -> Result<Vec<FeatureVector<f64>>> {
        self.samples
            .iter()
            .map(|s| FeatureVector::new(s.features.clone()))
            .collect()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.samples.iter().map(|s| s.label).collect()
    }

    pub fn signs(&self) -> Vec<i8> {
        self.samples.iter().map(|s| s.label.sign()).collect()
    }

    pub fn targets(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.label.target()).collect()
    }

    fn with_samples(&self, samples: Vec<Sample>) -> Self {
        Self {
            samples,
            column_names: self.column_names.clone(),
            scaling: self.scaling.clone(),
        }
    }

    /// Applies an already-fitted scaler, e.g. the training set's to the test set.
    pub fn apply_scaling(&self, scaler: &MinMaxScaler) -> Result<Self> {
        if scaler.mins.len() != self.num_features() {
            return Err(Error::InvalidInput(format!(
                "scaler fitted on {} columns, dataset has {}",
                scaler.mins.len(),
                self.num_features()
            )));
        }
        let samples = self
            .samples
            .iter()
            .map(|s| Sample {
                features: scaler.transform(&s.features),
                ..s.clone()
            })
            .collect();
        Ok(Self {
            scaling: Some(scaler.clone()),
            ..self.with_samples(samples)
        })
    }

    /// Writes feature columns, the E.coli column and the label.
    pub fn write_csv<W: Write>(&self, out: W, ecoli_column: &str) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = self.column_names.clone();
        header.push(ecoli_column.to_string());
        header.push("label".into());
        w.write_record(&header)?;
        for s in &self.samples {
            let mut rec: Vec<String> = s.features.iter().map(|v| v.to_string()).collect();
            rec.push(s.ecoli.to_string());
            rec.push(s.label.as_str().into());
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io("csv output", e))?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        self.write_csv(file, DEFAULT_ECOLI_COLUMN)
    }
}

/// Fits a min-max scaler on `dataset` and maps every column onto `[lo, hi]`.
pub fn minmax_scale(dataset: &Dataset, lo: f64, hi: f64) -> Result<Dataset> {
    let rows: Vec<Vec<f64>> = dataset.samples.iter().map(|s| s.features.clone()).collect();
    let scaler = MinMaxScaler::fit(&rows, lo, hi)?;
    dataset.apply_scaling(&scaler)
}

/// Duplicates minority samples (drawn with replacement) until both classes
/// have the majority count, then shuffles.
pub fn random_oversample(dataset: &Dataset, seed: u64) -> Result<Dataset> {
    let counts = dataset.class_counts();
    if counts.acceptable == 0 || counts.not_acceptable == 0 {
        return Err(Error::DegenerateClass(format!(
            "oversampling needs both classes, got {} acceptable and {} not acceptable",
            counts.acceptable, counts.not_acceptable
        )));
    }
    let minority = if counts.acceptable < counts.not_acceptable {
        Label::Acceptable
    } else {
        Label::NotAcceptable
    };
    let deficit = counts.acceptable.abs_diff(counts.not_acceptable);
    let pool: Vec<&Sample> = dataset.samples.iter().filter(|s| s.label == minority).collect();
    let mut rng = stage_rng(seed, Stage::Oversample);
    let mut samples = dataset.samples.clone();
    for _ in 0..deficit {
        samples.push(pool[rng.random_range(0..pool.len())].clone());
    }
    samples.shuffle(&mut rng);
    Ok(dataset.with_samples(samples))
}

fn round_half_up(x: f64) -> usize {
    (x + 0.5).floor() as usize
}

/// Train/test partition.
///
/// Stratified: each class contributes round-half-up(count · fraction) test
/// samples, kept within [1, count − 1] when the class has at least two
/// members. Unstratified applies the same rule to the whole set. Within each
/// side, samples keep their original order.
pub fn split(dataset: &Dataset, test_fraction: f64, stratify: bool, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidInput(format!(
            "test fraction must lie strictly between 0 and 1, got {test_fraction}"
        )));
    }
    let mut rng = stage_rng(seed, Stage::Split);
    let groups: Vec<Vec<usize>> = if stratify {
        let mut by_label: BTreeMap<Label, Vec<usize>> = BTreeMap::new();
        for (i, s) in dataset.samples.iter().enumerate() {
            by_label.entry(s.label).or_default().push(i);
        }
        by_label.into_values().collect()
    } else {
        vec![(0..dataset.len()).collect()]
    };

    let mut in_test = vec![false; dataset.len()];
    for mut group in groups {
        let n = group.len();
        let take = if n >= 2 {
            round_half_up(n as f64 * test_fraction).clamp(1, n - 1)
        } else {
            0
        };
        group.shuffle(&mut rng);
        for &i in &group[..take] {
            in_test[i] = true;
        }
    }
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (s, t) in dataset.samples.iter().zip(&in_test) {
        if *t {
            test.push(s.clone());
        } else {
            train.push(s.clone());
        }
    }
    if train.is_empty() || test.is_empty() {
        return Err(Error::InvalidInput(format!(
            "{} samples are too few for a {test_fraction} split",
            dataset.len()
        )));
    }
    Ok((dataset.with_samples(train), dataset.with_samples(test)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MissingPolicy {
    /// Drop rows with any missing feature.
    #[default]
    Reject,
    /// Fill missing features with the column median of the complete values.
    Median,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestOptions {
    pub ecoli_column: String,
    pub threshold: f64,
    pub missing: MissingPolicy,
}

impl Default for IngestOptions {
    fn default() -> Self {
        Self {
            ecoli_column: DEFAULT_ECOLI_COLUMN.into(),
            threshold: DEFAULT_ECOLI_THRESHOLD,
            missing: MissingPolicy::Reject,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestReport {
    pub rows_read: usize,
    pub rows_rejected: usize,
    pub rows_imputed: usize,
    pub class_counts: ClassCounts,
    pub feature_columns: Vec<String>,
    pub skipped_columns: Vec<String>,
}

fn parse_cell(cell: &str) -> Option<Option<f64>> {
    let t = cell.trim();
    if t.is_empty() || matches!(t.to_ascii_lowercase().as_str(), "na" | "nan" | "n/a" | "null" | "-") {
        return Some(None);
    }
    t.parse::<f64>().ok().filter(|v| v.is_finite()).map(Some)
}

fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    Some(if values.len().is_multiple_of(2) {
        0.5 * (values[m - 1] + values[m])
    } else {
        values[m]
    })
}

/// Reads a header-first CSV. Numeric columns other than E.coli become
/// features; columns holding any non-numeric text are skipped and listed in
/// the report. Rows without a usable E.coli value are always rejected.
pub fn read_csv_from<R: Read>(input: R, options: &IngestOptions) -> Result<(Dataset, IngestReport)> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let ecoli_idx = headers
        .iter()
        .position(|h| h == &options.ecoli_column)
        .ok_or_else(|| Error::InvalidInput(format!("no column named {:?} in the CSV header", options.ecoli_column)))?;
    let records: Vec<csv::StringRecord> = reader.records().collect::<std::result::Result<_, _>>()?;

    let parsed: Vec<Vec<Option<Option<f64>>>> = records
        .iter()
        .map(|r| (0..headers.len()).map(|j| r.get(j).and_then(parse_cell)).collect())
        .collect();
    let mut feature_idx = Vec::new();
    let mut skipped = Vec::new();
    for (j, name) in headers.iter().enumerate() {
        if j == ecoli_idx {
            continue;
        }
        if parsed.iter().all(|row| row[j].is_some()) {
            feature_idx.push(j);
        } else {
            skipped.push(name.clone());
        }
    }
    if feature_idx.is_empty() {
        return Err(Error::InvalidInput("the CSV has no numeric feature columns".into()));
    }

    let medians: Vec<Option<f64>> = feature_idx
        .iter()
        .map(|&j| {
            let mut vals: Vec<f64> = parsed.iter().filter_map(|row| row[j].flatten()).collect();
            median(&mut vals)
        })
        .collect();

    let mut samples = Vec::new();
    let (mut rejected, mut imputed) = (0, 0);
    for row in &parsed {
        let ecoli = match row[ecoli_idx].flatten() {
            Some(v) if v >= 0.0 => v,
            _ => {
                rejected += 1;
                continue;
            }
        };
        let raw: Vec<Option<f64>> = feature_idx.iter().map(|&j| row[j].flatten()).collect();
        let features: Option<Vec<f64>> = if raw.iter().all(Option::is_some) {
            Some(raw.into_iter().flatten().collect())
        } else if options.missing == MissingPolicy::Median {
            imputed += 1;
            raw.iter().zip(&medians).map(|(v, m)| v.or(*m)).collect()
        } else {
            None
        };
        match features {
            Some(features) => samples.push(Sample {
                features,
                ecoli,
                label: label_by_ecoli(ecoli, options.threshold)?,
            }),
            None => rejected += 1,
        }
    }
    if samples.is_empty() {
        return Err(Error::InvalidInput("every CSV row was rejected".into()));
    }
    let names: Vec<String> = feature_idx.iter().map(|&j| headers[j].clone()).collect();
    let dataset = Dataset::new(samples, names.clone())?;
    let report = IngestReport {
        rows_read: records.len(),
        rows_rejected: rejected,
        rows_imputed: imputed,
        class_counts: dataset.class_counts(),
        feature_columns: names,
        skipped_columns: skipped,
    };
    if rejected > 0 {
        log::warn!("rejected {rejected} of {} CSV rows", records.len());
    }
    Ok((dataset, report))
}

pub fn read_csv(path: &Path, options: &IngestOptions) -> Result<(Dataset, IngestReport)> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    read_csv_from(file, options)
}

/// Column names used by the synthetic generator.
pub const SYNTHETIC_COLUMNS: [&str; 6] = [
    "NH3 (mg/L)",
    "NO2 (mg/L)",
    "NO3 (mg/L)",
    "SO4 (mg/L)",
    "Turbidity (NTU)",
    "Flow rate (m3/s)",
];

// Typical magnitude of each synthetic column, multiplied by exp(0.4·z).
const SYNTHETIC_BASE: [f64; 6] = [0.5, 0.05, 2.0, 40.0, 10.0, 1.5];
const CORE_SD: f64 = 0.6;
const SHELL_RADIUS: f64 = 1.8;
const SHELL_SD: f64 = 0.45;

/// Synthetic water-quality table with `round(n · imbalance)` acceptable rows.
///
/// In a latent standard space, acceptable sites cluster near the origin and
/// unacceptable sites sit on a noisy shell around it, so the classes overlap
/// a little and are not linearly separable. Columns are log-normal around
/// typical magnitudes. E.coli is log-uniform in [1, 235] for acceptable rows
/// and in (235, 24196] otherwise, so labeling at 235 gives the requested split.
pub fn generate_synthetic(n: usize, imbalance: f64, seed: u64) -> Result<Dataset> {
    if n < 4 {
        return Err(Error::InvalidInput(format!("synthetic data needs n ≥ 4, got {n}")));
    }
    if !(imbalance > 0.0 && imbalance < 1.0) {
        return Err(Error::InvalidInput(format!(
            "imbalance must lie strictly between 0 and 1, got {imbalance}"
        )));
    }
    let n_acc = round_half_up(n as f64 * imbalance);
    if n_acc == 0 || n_acc == n {
        return Err(Error::InvalidInput(format!(
            "imbalance {imbalance} on {n} rows leaves a class empty"
        )));
    }
    let mut rng = stage_rng(seed, Stage::Synthetic);
    let dim = SYNTHETIC_COLUMNS.len();
    let mut labels: Vec<Label> = (0..n)
        .map(|i| if i < n_acc { Label::Acceptable } else { Label::NotAcceptable })
        .collect();
    labels.shuffle(&mut rng);

    let mut samples = Vec::with_capacity(n);
    for label in labels {
        let z: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        let latent: Vec<f64> = match label {
            Label::Acceptable => z.iter().map(|v| v * CORE_SD).collect(),
            Label::NotAcceptable => {
                let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
                let e: f64 = StandardNormal.sample(&mut rng);
                let radius = SHELL_RADIUS + SHELL_SD * e;
                z.iter().map(|v| v / norm * radius).collect()
            }
        };
        let features = latent
            .iter()
            .zip(SYNTHETIC_BASE)
            .map(|(l, base)| base * (0.4 * l).exp())
            .collect();
        let u: f64 = rng.random();
        let ecoli = match label {
            Label::Acceptable => (u * 235f64.ln()).exp(),
            Label::NotAcceptable => (236f64.ln() + u * (24196f64.ln() - 236f64.ln())).exp(),
        };
        samples.push(Sample {
            features,
            ecoli,
            label: label_by_ecoli(ecoli, DEFAULT_ECOLI_THRESHOLD)?,
        });
    }
    Dataset::new(samples, SYNTHETIC_COLUMNS.iter().map(|s| s.to_string()).collect())
}
