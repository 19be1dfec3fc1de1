//! Binary classification metrics.
//!
//! Ratios with a zero denominator are reported as 0 and flagged rather than
//! raised, so a degenerate classifier still yields a complete report.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl ConfusionCounts {
    pub fn new(tp: usize, fp: usize, tn: usize, fn_: usize) -> Self {
        Self { tp, fp, tn, fn_ }
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    /// The counts seen from the other class's point of view.
    pub fn swapped(&self) -> Self {
        Self::new(self.tn, self.fn_, self.tp, self.fp)
    }
}

/// Counts with `positive` as the positive class.
pub fn confusion<L: PartialEq>(predictions: &[L], truths: &[L], positive: &L) -> Result<ConfusionCounts> {
    check_lengths(predictions.len(), truths.len())?;
    let mut c = ConfusionCounts::default();
    for (p, t) in predictions.iter().zip(truths) {
        match (p == positive, t == positive) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, false) => c.tn += 1,
            (false, true) => c.fn_ += 1,
        }
    }
    Ok(c)
}

fn check_lengths(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::InvalidInput(format!("{a} predictions but {b} truths")));
    }
    if a == 0 {
        return Err(Error::InvalidInput("metrics need at least one sample".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdMetrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub precision_undefined: bool,
    pub recall_undefined: bool,
    pub f1_undefined: bool,
}

fn ratio(num: usize, den: usize) -> (f64, bool) {
    if den == 0 {
        (0.0, true)
    } else {
        (num as f64 / den as f64, false)
    }
}

pub fn threshold_metrics(counts: &ConfusionCounts) -> Result<ThresholdMetrics> {
    let total = counts.total();
    if total == 0 {
        return Err(Error::InvalidInput("confusion matrix is empty".into()));
    }
    let accuracy = (counts.tp + counts.tn) as f64 / total as f64;
    let (precision, precision_undefined) = ratio(counts.tp, counts.tp + counts.fp);
    let (recall, recall_undefined) = ratio(counts.tp, counts.tp + counts.fn_);
    let (f1, f1_undefined) = if precision + recall > 0.0 {
        (2.0 * precision * recall / (precision + recall), false)
    } else {
        (0.0, true)
    };
    Ok(ThresholdMetrics {
        accuracy,
        precision,
        recall,
        f1,
        precision_undefined,
        recall_undefined,
        f1_undefined,
    })
}

fn positives<L: PartialEq>(truths: &[L], positive: &L) -> Vec<bool> {
    truths.iter().map(|t| t == positive).collect()
}

fn check_scores(scores: &[f64], truths: usize) -> Result<()> {
    check_lengths(scores.len(), truths)?;
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::InvalidInput("scores contain NaN".into()));
    }
    Ok(())
}

/// Area under the ROC curve from the rank-sum statistic, ties counted half.
pub fn auroc<L: PartialEq>(scores: &[f64], truths: &[L], positive: &L) -> Result<f64> {
    check_scores(scores, truths.len())?;
    auroc_flags(scores, &positives(truths, positive))
}

fn auroc_flags(scores: &[f64], is_pos: &[bool]) -> Result<f64> {
    let n_pos = is_pos.iter().filter(|p| **p).count();
    let n_neg = is_pos.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::UndefinedMetric("AUROC needs both classes among the truths".into()));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // midranks: a tied block covering 1-based ranks [i+1, j] gets (i+1+j)/2
    let mut pos_rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        let mid = (i + 1 + j) as f64 / 2.0;
        pos_rank_sum += mid * order[i..j].iter().filter(|&&k| is_pos[k]).count() as f64;
        i = j;
    }
    let u = pos_rank_sum - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos as f64 * n_neg as f64))
}

/// Step-wise average precision: Σ (R_k − R_{k−1}) P_k over descending unique thresholds.
pub fn auprc<L: PartialEq>(scores: &[f64], truths: &[L], positive: &L) -> Result<f64> {
    check_scores(scores, truths.len())?;
    auprc_flags(scores, &positives(truths, positive))
}

fn auprc_flags(scores: &[f64], is_pos: &[bool]) -> Result<f64> {
    let n_pos = is_pos.iter().filter(|p| **p).count();
    if n_pos == 0 {
        return Err(Error::UndefinedMetric("AUPRC needs at least one positive truth".into()));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut prev_recall = 0.0;
    let mut area = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            if is_pos[order[j]] {
                tp += 1;
            } else {
                fp += 1;
            }
            j += 1;
        }
        let recall = tp as f64 / n_pos as f64;
        let precision = tp as f64 / (tp + fp) as f64;
        area += (recall - prev_recall) * precision;
        prev_recall = recall;
        i = j;
    }
    Ok(area)
}

/// What the ranking metrics see.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scoring {
    /// Raw model scores (decision values or mapped outputs).
    #[default]
    Continuous,
    /// Thresholded 0/1 predictions.
    Hard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct UndefinedFlags {
    pub precision: bool,
    pub recall: bool,
    pub f1: bool,
    pub auroc: bool,
    pub auprc: bool,
}

impl UndefinedFlags {
    pub fn any(&self) -> bool {
        self.precision || self.recall || self.f1 || self.auroc || self.auprc
    }

    pub fn names(&self) -> Vec<&'static str> {
        [
            ("precision", self.precision),
            ("recall", self.recall),
            ("f1", self.f1),
            ("auroc", self.auroc),
            ("auprc", self.auprc),
        ]
        .into_iter()
        .filter_map(|(n, f)| f.then_some(n))
        .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub accuracy: f64,
    pub f1: f64,
    pub precision: f64,
    pub recall: f64,
    pub auroc: f64,
    pub auprc: f64,
    pub confusion: ConfusionCounts,
    pub scoring: Scoring,
    pub undefined: UndefinedFlags,
}

/// Full report from scores, predicting positive when `score ≥ threshold`.
pub fn metrics_report(scores: &[f64], threshold: f64, is_positive: &[bool], scoring: Scoring) -> Result<MetricsReport> {
    check_scores(scores, is_positive.len())?;
    let predicted: Vec<bool> = scores.iter().map(|s| *s >= threshold).collect();
    let confusion = confusion(&predicted, is_positive, &true)?;
    let t = threshold_metrics(&confusion)?;
    let ranked: Vec<f64> = match scoring {
        Scoring::Continuous => scores.to_vec(),
        Scoring::Hard => predicted.iter().map(|p| if *p { 1.0 } else { 0.0 }).collect(),
    };
    let (auroc, auroc_undefined) = match auroc_flags(&ranked, is_positive) {
        Ok(v) => (v, false),
        Err(Error::UndefinedMetric(_)) => (0.0, true),
        Err(e) => return Err(e),
    };
    let (auprc, auprc_undefined) = match auprc_flags(&ranked, is_positive) {
        Ok(v) => (v, false),
        Err(Error::UndefinedMetric(_)) => (0.0, true),
        Err(e) => return Err(e),
    };
    Ok(MetricsReport {
        accuracy: t.accuracy,
        f1: t.f1,
        precision: t.precision,
        recall: t.recall,
        auroc,
        auprc,
        confusion,
        scoring,
        undefined: UndefinedFlags {
            precision: t.precision_undefined,
            recall: t.recall_undefined,
            f1: t.f1_undefined,
            auroc: auroc_undefined,
            auprc: auprc_undefined,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn round4(v: f64) -> f64 {
        (v * 1e4).round() / 1e4
    }

    /// O(n²) pair counting: wins plus half the ties over all (pos, neg) pairs.
    fn pairwise_auroc(scores: &[f64], pos: &[bool]) -> f64 {
        let mut num = 0.0;
        let mut pairs = 0.0;
        for i in 0..scores.len() {
            for j in 0..scores.len() {
                if pos[i] && !pos[j] {
                    pairs += 1.0;
                    if scores[i] > scores[j] {
                        num += 1.0;
                    } else if scores[i] == scores[j] {
                        num += 0.5;
                    }
                }
            }
        }
        num / pairs
    }

    /// Sweep every distinct score as a threshold, from the top down.
    fn sweep_auprc(scores: &[f64], pos: &[bool]) -> f64 {
        let mut thresholds: Vec<f64> = scores.to_vec();
        thresholds.sort_by(|a, b| b.partial_cmp(a).unwrap());
        thresholds.dedup();
        let n_pos = pos.iter().filter(|p| **p).count() as f64;
        let mut prev = 0.0;
        let mut area = 0.0;
        for t in thresholds {
            let tp = (0..scores.len()).filter(|&i| scores[i] >= t && pos[i]).count() as f64;
            let sel = (0..scores.len()).filter(|&i| scores[i] >= t).count() as f64;
            let r = tp / n_pos;
            area += (r - prev) * (tp / sel);
            prev = r;
        }
        area
    }

    #[test]
    fn confusion_examples() {
        let truths = [1, 1, 0, 0];
        let c = confusion(&truths, &truths, &1).unwrap();
        assert_eq!((c.fp, c.fn_), (0, 0));
        let c = confusion(&[1, 1, 1, 1], &truths, &1).unwrap();
        assert_eq!(c.tn, 0);
        let preds = [1, 0, 0, 1];
        let a = confusion(&preds, &truths, &1).unwrap();
        let b = confusion(&preds, &truths, &0).unwrap();
        assert_eq!(a.swapped(), b);
        assert!(confusion(&[1], &truths, &1).is_err());
        assert!(confusion::<u8>(&[], &[], &1).is_err());
    }

    #[test]
    fn reported_table_rows() {
        let linear = threshold_metrics(&ConfusionCounts::new(6, 5, 1, 0)).unwrap();
        assert_eq!(
            [linear.accuracy, linear.precision, linear.recall, linear.f1].map(round4),
            [0.5833, 0.5455, 1.0, 0.7059]
        );
        let rbf = threshold_metrics(&ConfusionCounts::new(6, 3, 3, 0)).unwrap();
        assert_eq!(
            [rbf.accuracy, rbf.precision, rbf.recall, rbf.f1].map(round4),
            [0.75, 0.6667, 1.0, 0.8]
        );
    }

    #[test]
    fn undefined_ratios() {
        let m = threshold_metrics(&ConfusionCounts::new(0, 0, 5, 3)).unwrap();
        assert_eq!(m.precision, 0.0);
        assert!(m.precision_undefined && m.f1_undefined && !m.recall_undefined);
        assert_eq!(m.f1, 0.0);
        assert!(threshold_metrics(&ConfusionCounts::default()).is_err());
    }

    #[test]
    fn ranking_examples() {
        let truths = [true, true, false, false];
        let scores = [0.9, 0.8, 0.2, 0.1];
        assert_eq!(auroc(&scores, &truths, &true).unwrap(), 1.0);
        assert_eq!(auprc(&scores, &truths, &true).unwrap(), 1.0);
        let flat = [0.3; 4];
        assert_eq!(auroc(&flat, &truths, &true).unwrap(), 0.5);
        let t3 = [true, false, false, false];
        assert_eq!(auprc(&flat, &t3, &true).unwrap(), 0.25);
        assert!(matches!(auroc(&scores, &[true; 4], &true), Err(Error::UndefinedMetric(_))));
        assert!(matches!(auprc(&scores, &[false; 4], &true), Err(Error::UndefinedMetric(_))));
    }

    #[test]
    fn random_ten_sample_case() {
        let scores = [0.31, 0.77, 0.31, 0.05, 0.92, 0.64, 0.77, 0.18, 0.5, 0.31];
        let pos = [true, false, false, false, true, true, true, false, true, false];
        assert_eq!(auroc(&scores, &pos, &true).unwrap(), pairwise_auroc(&scores, &pos));
        assert!((auprc(&scores, &pos, &true).unwrap() - sweep_auprc(&scores, &pos)).abs() < 1e-12);
    }

    #[test]
    fn report_flags_single_class_without_failing() {
        let r = metrics_report(&[0.2, 0.7], 0.5, &[true, true], Scoring::Continuous).unwrap();
        assert!(r.undefined.auroc && !r.undefined.auprc);
        assert_eq!(r.auroc, 0.0);
        assert_eq!(r.undefined.names(), vec!["auroc"]);
    }

    #[test]
    fn hard_scoring_ranks_predictions() {
        let scores = [0.9, 0.6, 0.4, 0.7];
        let pos = [true, true, false, false];
        let r = metrics_report(&scores, 0.5, &pos, Scoring::Hard).unwrap();
        // predictions [1,1,0,1]: tp 2, fp 1, tn 1
        assert_eq!(r.confusion, ConfusionCounts::new(2, 1, 1, 0));
        assert_eq!(r.auroc, pairwise_auroc(&[1.0, 1.0, 0.0, 1.0], &pos));
    }

    #[test]
    fn json_keys() {
        let r = metrics_report(&[0.9, 0.1], 0.5, &[true, false], Scoring::Continuous).unwrap();
        let v = serde_json::to_value(r).unwrap();
        for key in ["accuracy", "f1", "precision", "recall", "auroc", "auprc"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["confusion"]["fn"], 0);
    }

    fn scored_sample() -> impl Strategy<Value = (Vec<f64>, Vec<bool>)> {
        (2usize..30).prop_flat_map(|n| {
            (
                prop::collection::vec(-5.0f64..5.0, n),
                prop::collection::vec(any::<bool>(), n),
            )
        })
    }

    proptest! {
        #[test]
        fn auroc_matches_pairwise_oracle((scores, pos) in scored_sample()) {
            prop_assume!(pos.iter().any(|p| *p) && pos.iter().any(|p| !*p));
            prop_assert_eq!(auroc(&scores, &pos, &true).unwrap(), pairwise_auroc(&scores, &pos));
        }

        #[test]
        fn auroc_is_rank_invariant((scores, pos) in scored_sample()) {
            prop_assume!(pos.iter().any(|p| *p) && pos.iter().any(|p| !*p));
            let squashed: Vec<f64> = scores.iter().map(|s| (s * 0.3).exp() + 2.0).collect();
            let a = auroc(&scores, &pos, &true).unwrap();
            let b = auroc(&squashed, &pos, &true).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
        }

        #[test]
        fn auroc_symmetries((scores, pos) in scored_sample()) {
            prop_assume!(pos.iter().any(|p| *p) && pos.iter().any(|p| !*p));
            let neg: Vec<f64> = scores.iter().map(|s| -s).collect();
            let flipped: Vec<bool> = pos.iter().map(|p| !p).collect();
            let a = auroc(&scores, &pos, &true).unwrap();
            prop_assert!((a - auroc(&neg, &flipped, &true).unwrap()).abs() < 1e-12);
            // complement: ties are shared, so the two sides still sum to 1
            prop_assert!((a + auroc(&neg, &pos, &true).unwrap() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn auprc_matches_sweep((scores, pos) in scored_sample()) {
            prop_assume!(pos.iter().any(|p| *p));
            let a = auprc(&scores, &pos, &true).unwrap();
            prop_assert!((a - sweep_auprc(&scores, &pos)).abs() < 1e-12);
        }

        #[test]
        fn bounded_and_consistent(tp in 0usize..20, fp in 0usize..20, tn in 0usize..20, fn_ in 0usize..20) {
            let c = ConfusionCounts::new(tp, fp, tn, fn_);
            prop_assume!(c.total() > 0);
            let m = threshold_metrics(&c).unwrap();
            prop_assert!((0.0..=1.0).contains(&m.accuracy));
            if tp == 0 { prop_assert_eq!(m.f1, 0.0); }
            if !m.precision_undefined && !m.recall_undefined && tp > 0 {
                let h = 2.0 * m.precision * m.recall / (m.precision + m.recall);
                prop_assert!((m.f1 - h).abs() < 1e-15);
            }
        }
    }
}
