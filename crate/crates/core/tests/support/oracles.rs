//! Brute-force reference implementations, written independently of the
//! library code they check.

use std::collections::{BTreeMap, BTreeSet};

pub fn prf(truth: &[bool], pred: &[bool]) -> (f64, f64, f64) {
    let tp = (0..truth.len()).filter(|&i| truth[i] && pred[i]).count() as f64;
    let predicted = pred.iter().filter(|&&p| p).count() as f64;
    let actual = truth.iter().filter(|&&t| t).count() as f64;
    let p = if predicted == 0.0 { 0.0 } else { tp / predicted };
    let r = if actual == 0.0 { 0.0 } else { tp / actual };
    let f = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
    (p, r, f)
}

/// Kappa from the 2x2 agreement table.
pub fn kappa(truth: &[bool], pred: &[bool]) -> f64 {
    let n = truth.len() as f64;
    let mut table = [[0.0f64; 2]; 2];
    for (&t, &p) in truth.iter().zip(pred) {
        table[t as usize][p as usize] += 1.0;
    }
    let po = (table[0][0] + table[1][1]) / n;
    let pe: f64 = (0..2).map(|k| ((table[k][0] + table[k][1]) / n) * ((table[0][k] + table[1][k]) / n)).sum();
    if pe == 1.0 {
        1.0
    } else {
        (po - pe) / (1.0 - pe)
    }
}

/// MCC as the Pearson correlation of the two indicator vectors.
pub fn mcc(truth: &[bool], pred: &[bool]) -> f64 {
    let n = truth.len() as f64;
    let x: Vec<f64> = truth.iter().map(|&b| b as u8 as f64).collect();
    let y: Vec<f64> = pred.iter().map(|&b| b as u8 as f64).collect();
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let cov: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let vy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    if vx == 0.0 || vy == 0.0 {
        if truth == pred {
            1.0
        } else {
            0.0
        }
    } else {
        cov / (vx * vy).sqrt()
    }
}

/// AUC by comparing every positive with every negative.
pub fn auc(truth: &[bool], scores: &[f64]) -> Option<f64> {
    let pos: Vec<f64> = (0..truth.len()).filter(|&i| truth[i]).map(|i| scores[i]).collect();
    let neg: Vec<f64> = (0..truth.len()).filter(|&i| !truth[i]).map(|i| scores[i]).collect();
    if pos.is_empty() || neg.is_empty() {
        return None;
    }
    let mut wins = 0.0;
    for &p in &pos {
        for &q in &neg {
            if p > q {
                wins += 1.0;
            } else if p == q {
                wins += 0.5;
            }
        }
    }
    Some(wins / (pos.len() * neg.len()) as f64)
}

/// Reference multi-label summary: `(per-label (P, R, F1, kappa, mcc, auc), weights,
/// weighted F1, weighted kappa, weighted mcc, weighted auc)`.
/// `(precision, recall, f1, kappa, mcc, auc)` of one label.
pub type LabelRow = (f64, f64, f64, f64, f64, Option<f64>);

pub struct MultiLabel {
    pub per_label: Vec<LabelRow>,
    pub weights: Vec<f64>,
    pub weighted_f1: f64,
    pub weighted_precision: f64,
    pub weighted_recall: f64,
    pub weighted_kappa: f64,
    pub weighted_mcc: f64,
    pub weighted_auc: Option<f64>,
}

/// `truth[i][l]`, `pred[i][l]`, `scores[i][l]`.
pub fn multi_label(truth: &[Vec<bool>], pred: &[Vec<bool>], scores: &[Vec<f64>], labels: usize) -> MultiLabel {
    let column = |m: &[Vec<bool>], l: usize| m.iter().map(|r| r[l]).collect::<Vec<bool>>();
    let mut per_label = Vec::new();
    let mut counts = Vec::new();
    for l in 0..labels {
        let t = column(truth, l);
        let p = column(pred, l);
        let s: Vec<f64> = scores.iter().map(|r| r[l]).collect();
        let (pr, re, f) = prf(&t, &p);
        per_label.push((pr, re, f, kappa(&t, &p), mcc(&t, &p), auc(&t, &s)));
        counts.push(t.iter().filter(|&&b| b).count() as f64);
    }
    let total: f64 = counts.iter().sum();
    let weights: Vec<f64> = counts.iter().map(|&c| if total == 0.0 { 0.0 } else { c / total }).collect();
    let wsum = |f: &dyn Fn(&LabelRow) -> f64| per_label.iter().zip(&weights).map(|(m, w)| w * f(m)).sum::<f64>();
    let auc_weight: f64 = per_label.iter().zip(&weights).filter(|(m, _)| m.5.is_some()).map(|(_, w)| w).sum();
    let weighted_auc = (auc_weight > 0.0)
        .then(|| per_label.iter().zip(&weights).filter_map(|(m, w)| m.5.map(|a| a * w)).sum::<f64>() / auc_weight);
    MultiLabel {
        weighted_f1: wsum(&|m| m.2),
        weighted_precision: wsum(&|m| m.0),
        weighted_recall: wsum(&|m| m.1),
        weighted_kappa: wsum(&|m| m.3),
        weighted_mcc: wsum(&|m| m.4),
        weighted_auc,
        per_label,
        weights,
    }
}

/// Rule as `(antecedent, consequent, count, support, confidence)`.
pub type OracleRule = (Vec<u8>, Vec<u8>, usize, f64, f64);

/// Association rules by enumerating every itemset over the item universe.
pub fn exhaustive_rules(transactions: &[BTreeSet<u8>], min_support: f64, min_confidence: f64) -> Vec<OracleRule> {
    let n = transactions.len();
    if n == 0 {
        return Vec::new();
    }
    let universe: Vec<u8> = transactions.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let count = |set: &[u8]| transactions.iter().filter(|t| set.iter().all(|i| t.contains(i))).count();
    let mut counts: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    for mask in 1u32..(1 << universe.len()) {
        let set: Vec<u8> = (0..universe.len()).filter(|b| mask >> b & 1 == 1).map(|b| universe[b]).collect();
        counts.insert(set.clone(), count(&set));
    }
    let mut rules = Vec::new();
    for (set, &c) in &counts {
        if set.len() < 2 || (c as f64 / n as f64) < min_support {
            continue;
        }
        for mask in 1u32..(1 << set.len()) - 1 {
            let a: Vec<u8> = (0..set.len()).filter(|b| mask >> b & 1 == 1).map(|b| set[b]).collect();
            let b: Vec<u8> = (0..set.len()).filter(|b| mask >> b & 1 == 0).map(|b| set[b]).collect();
            let conf = c as f64 / counts[&a] as f64;
            if conf >= min_confidence {
                rules.push((a, b, c, c as f64 / n as f64, conf));
            }
        }
    }
    rules.sort_by(|x, y| {
        y.4.partial_cmp(&x.4)
            .unwrap()
            .then(y.3.partial_cmp(&x.3).unwrap())
            .then_with(|| x.0.cmp(&y.0))
            .then_with(|| x.1.cmp(&y.1))
    });
    rules
}

/// TF-IDF by direct counting: `count(t in s) * (1 / #sections containing t)`.
pub fn tfidf(sections: &[Vec<String>], section: &[String]) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    for t in section {
        if out.contains_key(t) {
            continue;
        }
        let tf = section.iter().filter(|u| *u == t).count();
        let df = sections.iter().filter(|s| s.contains(t)).count();
        if df > 0 {
            out.insert(t.clone(), tf as f64 * (1.0 / df as f64));
        }
    }
    out
}
