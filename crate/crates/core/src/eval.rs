//! Stratified k-fold evaluation of the one-vs-one classifier.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{train, LabeledDataset, SmoParams};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seed::{rng_for, stream};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Split sample indices into `k` folds, spreading each class as evenly as possible.
///
/// Every class must have at least `k` samples. Fold membership depends only on
/// `labels`, `k` and `seed`.
pub fn stratified_folds(labels: &[usize], classes: &[String], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::Config(format!("need at least 2 folds, got {k}")));
    }
    let mut by_class = vec![Vec::new(); classes.len()];
    for (i, &l) in labels.iter().enumerate() {
        by_class
            .get_mut(l)
            .ok_or_else(|| Error::Data(format!("label index {l} outside class set")))?
            .push(i);
    }
    for (c, members) in by_class.iter().enumerate() {
        if members.len() < k {
            return Err(Error::Stratification {
                label: classes[c].clone(),
                count: members.len(),
                folds: k,
            });
        }
    }
    let mut rng = rng_for(seed, stream::FOLDS);
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for mut members in by_class {
        members.shuffle(&mut rng);
        for i in members {
            folds[next].push(i);
            next = (next + 1) % k;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}

/// Rows are true classes, columns predicted classes.
pub fn confusion_matrix(truth: &[usize], predicted: &[usize], n_classes: usize) -> Vec<Vec<usize>> {
    let mut m = vec![vec![0; n_classes]; n_classes];
    for (&t, &p) in truth.iter().zip(predicted) {
        m[t][p] += 1;
    }
    m
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport<F> {
    pub schema_version: u32,
    pub seed: u64,
    pub folds: usize,
    pub classes: Vec<String>,
    pub confusion: Vec<Vec<usize>>,
    pub precision: Vec<F>,
    pub recall: Vec<F>,
    pub accuracy: F,
    pub fold_sizes: Vec<usize>,
    pub fold_correct: Vec<usize>,
    /// Held-out prediction (class index) for every sample.
    pub predictions: Vec<usize>,
    #[serde(default)]
    pub count_error_ratios: Vec<F>,
}

impl<F: Scalar> EvalReport<F> {
    pub fn from_confusion(
        classes: Vec<String>,
        confusion: Vec<Vec<usize>>,
        seed: u64,
        fold_sizes: Vec<usize>,
        fold_correct: Vec<usize>,
        predictions: Vec<usize>,
    ) -> Self {
        let n = classes.len();
        let ratio = |num: usize, den: usize| {
            if den == 0 {
                F::zero()
            } else {
                F::from_usize_lossy(num) / F::from_usize_lossy(den)
            }
        };
        let precision = (0..n)
            .map(|c| ratio(confusion[c][c], (0..n).map(|r| confusion[r][c]).sum()))
            .collect();
        let recall = (0..n)
            .map(|c| ratio(confusion[c][c], confusion[c].iter().sum()))
            .collect();
        let correct: usize = (0..n).map(|c| confusion[c][c]).sum();
        let total: usize = confusion.iter().flatten().sum();
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            seed,
            folds: fold_sizes.len(),
            classes,
            accuracy: ratio(correct, total),
            confusion,
            precision,
            recall,
            fold_sizes,
            fold_correct,
            predictions,
            count_error_ratios: Vec::new(),
        }
    }

    pub fn fold_accuracies(&self) -> Vec<F> {
        self.fold_sizes
            .iter()
            .zip(&self.fold_correct)
            .map(|(&s, &c)| F::from_usize_lossy(c) / F::from_usize_lossy(s))
            .collect()
    }
}

/// Train on `k − 1` folds and predict the held-out fold, for every fold.
pub fn cross_validate<F: Scalar>(
    dataset: &LabeledDataset<F>,
    k: usize,
    params: &SmoParams<F>,
    seed: u64,
) -> Result<EvalReport<F>> {
    dataset.validate()?;
    let folds = stratified_folds(&dataset.labels, &dataset.classes, k, seed)?;
    let per_fold = folds
        .par_iter()
        .enumerate()
        .map(|(f, held)| {
            let train_idx: Vec<usize> = folds
                .iter()
                .enumerate()
                .filter(|(g, _)| *g != f)
                .flat_map(|(_, idx)| idx.iter().copied())
                .collect();
            let model = train(&dataset.subset(&train_idx), params)?;
            held.iter()
                .map(|&i| model.predict(&dataset.features[i]).map(|p| p.class_index))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut predictions = vec![usize::MAX; dataset.len()];
    let mut fold_correct = Vec::with_capacity(k);
    for (held, preds) in folds.iter().zip(&per_fold) {
        let mut correct = 0;
        for (&i, &p) in held.iter().zip(preds) {
            predictions[i] = p;
            if p == dataset.labels[i] {
                correct += 1;
            }
        }
        fold_correct.push(correct);
    }
    let confusion = confusion_matrix(&dataset.labels, &predictions, dataset.classes.len());
    Ok(EvalReport::from_confusion(
        dataset.classes.clone(),
        confusion,
        seed,
        folds.iter().map(Vec::len).collect(),
        fold_correct,
        predictions,
    ))
}
