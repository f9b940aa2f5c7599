use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{Source, SplitSide};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub n: usize,
    pub positives: usize,
    pub negatives: usize,
    /// Absent when either class is empty.
    pub auc: Option<f64>,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

/// Rank-sum AUC with midranks for tied scores: the probability that a
/// random positive outscores a random negative, ties counting one half.
pub fn auc(labels: &[bool], scores: &[f64]) -> Option<f64> {
    assert_eq!(labels.len(), scores.len());
    let positives = labels.iter().filter(|&&l| l).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    // ranks are 1-based; a tie group spanning ranks i+1..=j gets (i+1+j)/2
    let mut positive_rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        let midrank = (i + 1 + j) as f64 / 2.0;
        let group_positives = order[i..j].iter().filter(|&&k| labels[k]).count();
        positive_rank_sum += midrank * group_positives as f64;
        i = j;
    }
    let p = positives as f64;
    let u = positive_rank_sum - p * (p + 1.0) / 2.0;
    Some(u / (p * negatives as f64))
}

/// Confusion counts and derived metrics for the rule
/// `score >= threshold ⇒ topic`. Precision, recall and F1 are 0 where
/// their denominators vanish.
pub fn metrics(labels: &[bool], scores: &[f64], threshold: f64) -> Result<Metrics> {
    if labels.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (mut tp, mut fp, mut tn, mut fn_) = (0, 0, 0, 0);
    for (&label, &score) in labels.iter().zip(scores) {
        match (score >= threshold, label) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, false) => tn += 1,
            (false, true) => fn_ += 1,
        }
    }
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok(Metrics {
        n: labels.len(),
        positives: tp + fn_,
        negatives: fp + tn,
        auc: auc(labels, scores),
        precision,
        recall,
        f1,
        tp,
        fp,
        tn,
        fn_,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub source: Source,
    pub split: SplitSide,
    pub topic: bool,
    pub score: f64,
}

/// Metrics per split scope (`all`, `train`, `test`) and, within each, per
/// source plus `overall`. Scopes and sources without papers are omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub threshold: f64,
    pub scopes: BTreeMap<String, BTreeMap<String, Metrics>>,
}

pub fn evaluate(records: &[EvalRecord], threshold: f64) -> Result<EvalReport> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let rows = |filter: &dyn Fn(&EvalRecord) -> bool| -> Result<Option<Metrics>> {
        let chosen: Vec<&EvalRecord> = records.iter().filter(|r| filter(r)).collect();
        if chosen.is_empty() {
            return Ok(None);
        }
        let labels: Vec<bool> = chosen.iter().map(|r| r.topic).collect();
        let scores: Vec<f64> = chosen.iter().map(|r| r.score).collect();
        metrics(&labels, &scores, threshold).map(Some)
    };

    let mut scopes = BTreeMap::new();
    let scope_filters: [(&str, Option<SplitSide>); 3] =
        [("all", None), ("train", Some(SplitSide::Train)), ("test", Some(SplitSide::Test))];
    for (name, side) in scope_filters {
        let in_scope = |r: &EvalRecord| side.is_none_or(|s| r.split == s);
        let mut table = BTreeMap::new();
        for source in Source::ALL {
            if let Some(m) = rows(&|r| in_scope(r) && r.source == source)? {
                table.insert(source.as_str().to_string(), m);
            }
        }
        if let Some(m) = rows(&in_scope)? {
            table.insert("overall".to_string(), m);
            scopes.insert(name.to_string(), table);
        }
    }
    Ok(EvalReport { threshold, scopes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_separation() {
        let m = metrics(&[true, true, false, false], &[0.9, 1.0, 0.1, 0.2], 0.5).unwrap();
        assert_eq!(m.auc, Some(1.0));
        assert_eq!((m.precision, m.recall, m.f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn inverted() {
        let m = metrics(&[true, false], &[0.4, 0.6], 0.5).unwrap();
        assert_eq!(m.auc, Some(0.0));
        assert_eq!(m.recall, 0.0);
        assert_eq!(m.precision, 0.0);
        assert_eq!(m.f1, 0.0);
    }

    #[test]
    fn ties_count_half() {
        assert_eq!(auc(&[true, false], &[0.5, 0.5]), Some(0.5));
        assert_eq!(auc(&[true, true, false], &[0.5, 0.7, 0.5]), Some(0.75));
    }

    #[test]
    fn single_class_has_no_auc() {
        let m = metrics(&[true, true], &[0.9, 0.1], 0.5).unwrap();
        assert_eq!(m.auc, None);
        assert_eq!(m.recall, 0.5);
        assert!(metrics(&[], &[], 0.5).is_err());
    }

    #[test]
    fn report_scopes() {
        let records = vec![
            EvalRecord { source: Source::Pmlr, split: SplitSide::Train, topic: true, score: 0.8 },
            EvalRecord { source: Source::Pmlr, split: SplitSide::Test, topic: false, score: 0.3 },
            EvalRecord { source: Source::Facct, split: SplitSide::Train, topic: true, score: 0.4 },
        ];
        let report = evaluate(&records, 0.5).unwrap();
        assert_eq!(report.scopes.keys().collect::<Vec<_>>(), ["all", "test", "train"]);
        let all = &report.scopes["all"];
        assert_eq!(all["overall"].n, 3);
        assert_eq!(all["FACCT"].auc, None);
        assert_eq!(all["FACCT"].recall, 0.0);
        assert_eq!(all["PMLR"].auc, Some(1.0));
        assert!(!report.scopes["test"].contains_key("FACCT"));
    }
}
