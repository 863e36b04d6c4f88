//! One-vs-one multiclass SVM over standardized feature vectors.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::features::{FeatureVector, FEATURE_DIM};
use super::kernel::cubic_unchecked;
use super::smo::{kkt_violation, solve, SmoParams};

pub const MODEL_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset<F> {
    pub classes: Vec<String>,
    pub features: Vec<FeatureVector<F>>,
    /// Index into `classes` for each sample.
    pub labels: Vec<usize>,
}

impl<F: Scalar> LabeledDataset<F> {
    pub fn new(classes: Vec<String>) -> Self {
        Self {
            classes,
            features: Vec::new(),
            labels: Vec::new(),
        }
    }

    /// Build from `(features, label)` pairs with classes ordered by first appearance.
    pub fn from_pairs<S: AsRef<str>>(pairs: impl IntoIterator<Item = (FeatureVector<F>, S)>) -> Self {
        let mut ds = Self::new(Vec::new());
        for (f, label) in pairs {
            ds.push(f, label.as_ref());
        }
        ds
    }

    /// Append a sample, registering `label` as a new class if unseen.
    pub fn push(&mut self, f: FeatureVector<F>, label: &str) {
        let idx = match self.class_index(label) {
            Some(i) => i,
            None => {
                self.classes.push(label.to_string());
                self.classes.len() - 1
            }
        };
        self.features.push(f);
        self.labels.push(idx);
    }

    pub fn class_index(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c == label)
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.classes.len()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    pub fn subset(&self, idx: &[usize]) -> Self {
        Self {
            classes: self.classes.clone(),
            features: idx.iter().map(|&i| self.features[i]).collect(),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.features.len() != self.labels.len() {
            return Err(Error::Shape {
                expected: self.features.len(),
                got: self.labels.len(),
            });
        }
        if let Some(&bad) = self.labels.iter().find(|&&l| l >= self.classes.len()) {
            return Err(Error::Data(format!("label index {bad} outside class set")));
        }
        if let Some(i) = self.features.iter().position(|f| !f.is_finite()) {
            return Err(Error::Data(format!("sample {i} has non-finite features")));
        }
        Ok(())
    }
}

/// Per-feature affine map to zero mean and unit variance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer<F> {
    pub mean: Vec<F>,
    pub scale: Vec<F>,
}

impl<F: Scalar> Standardizer<F> {
    pub fn fit(rows: &[[F; FEATURE_DIM]]) -> Self {
        let n = F::from_usize_lossy(rows.len());
        let mut mean = vec![F::zero(); FEATURE_DIM];
        let mut scale = vec![F::one(); FEATURE_DIM];
        for d in 0..FEATURE_DIM {
            let m = rows.iter().fold(F::zero(), |a, r| a + r[d]) / n;
            let var = rows.iter().fold(F::zero(), |a, r| a + (r[d] - m) * (r[d] - m)) / n;
            mean[d] = m;
            let s = var.sqrt();
            if s > F::epsilon() * (F::one() + m.abs()) {
                scale[d] = s;
            }
        }
        Self { mean, scale }
    }

    pub fn apply(&self, x: &[F]) -> Result<Vec<F>> {
        if x.len() != self.mean.len() {
            return Err(Error::Shape {
                expected: self.mean.len(),
                got: x.len(),
            });
        }
        Ok(x.iter()
            .zip(self.mean.iter().zip(&self.scale))
            .map(|(&v, (&m, &s))| (v - m) / s)
            .collect())
    }
}

/// Binary machine separating `classes[positive]` (decision ≥ 0) from `classes[negative]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairModel<F> {
    pub positive: usize,
    pub negative: usize,
    /// Standardized support vectors.
    pub support_vectors: Vec<Vec<F>>,
    /// Signed dual coefficients `α_i y_i`.
    pub dual_coef: Vec<F>,
    pub bias: F,
    pub iterations: usize,
    pub converged: bool,
    pub kkt_violation: F,
}

impl<F: Scalar> PairModel<F> {
    pub fn decision(&self, z: &[F]) -> F {
        self.support_vectors
            .iter()
            .zip(&self.dual_coef)
            .fold(self.bias, |acc, (sv, &c)| acc + c * cubic_unchecked(sv, z))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OvoSvmModel<F> {
    pub schema_version: u32,
    pub classes: Vec<String>,
    pub standardizer: Standardizer<F>,
    pub pairs: Vec<PairModel<F>>,
    pub c_reg: F,
    pub tolerance: F,
    pub n_train: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction<F> {
    pub class_index: usize,
    pub label: String,
    /// Pairwise wins per class.
    pub votes: Vec<usize>,
    pub decisions: Vec<F>,
}

/// Train one binary machine per unordered class pair; pairs run in parallel.
pub fn train<F: Scalar>(dataset: &LabeledDataset<F>, params: &SmoParams<F>) -> Result<OvoSvmModel<F>> {
    params.validate()?;
    dataset.validate()?;
    let counts = dataset.class_counts();
    let present: Vec<usize> = (0..counts.len()).filter(|&c| counts[c] > 0).collect();
    if present.len() < 2 {
        return Err(Error::Training(format!(
            "need at least two classes with samples, found {}",
            present.len()
        )));
    }
    if let Some(c) = (0..counts.len()).find(|&c| counts[c] == 0) {
        return Err(Error::Training(format!("class {} has no samples", dataset.classes[c])));
    }
    let rows: Vec<[F; FEATURE_DIM]> = dataset.features.iter().map(|f| f.to_array()).collect();
    let standardizer = Standardizer::fit(&rows);
    let z: Vec<Vec<F>> = rows.iter().map(|r| standardizer.apply(r).expect("fixed width")).collect();

    let n_classes = dataset.classes.len();
    let pair_ids: Vec<(usize, usize)> = (0..n_classes)
        .flat_map(|a| (a + 1..n_classes).map(move |b| (a, b)))
        .collect();
    let pairs = pair_ids
        .par_iter()
        .map(|&(a, b)| {
            let idx: Vec<usize> = (0..dataset.len())
                .filter(|&i| dataset.labels[i] == a || dataset.labels[i] == b)
                .collect();
            let pts: Vec<Vec<F>> = idx.iter().map(|&i| z[i].clone()).collect();
            let y: Vec<F> = idx
                .iter()
                .map(|&i| if dataset.labels[i] == a { F::one() } else { -F::one() })
                .collect();
            let sol = solve(&pts, &y, params)?;
            let kkt = kkt_violation(&pts, &y, &sol, params.c_reg);
            let mut support_vectors = Vec::new();
            let mut dual_coef = Vec::new();
            for (t, &al) in sol.alpha.iter().enumerate() {
                if al > F::zero() {
                    support_vectors.push(pts[t].clone());
                    dual_coef.push(al * y[t]);
                }
            }
            Ok(PairModel {
                positive: a,
                negative: b,
                support_vectors,
                dual_coef,
                bias: sol.bias,
                iterations: sol.iterations,
                converged: sol.converged,
                kkt_violation: kkt,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(OvoSvmModel {
        schema_version: MODEL_SCHEMA_VERSION,
        classes: dataset.classes.clone(),
        standardizer,
        pairs,
        c_reg: params.c_reg,
        tolerance: params.tolerance,
        n_train: dataset.len(),
    })
}

impl<F: Scalar> OvoSvmModel<F> {
    pub fn dim(&self) -> usize {
        self.standardizer.mean.len()
    }

    /// Pairwise decision values in `pairs` order.
    pub fn decisions(&self, x: &[F]) -> Result<Vec<F>> {
        let z = self.standardizer.apply(x)?;
        Ok(self.pairs.iter().map(|p| p.decision(&z)).collect())
    }

    /// Aggregate pairwise decisions: a value ≥ 0 is a win for the pair's first class;
    /// equal win counts go to the lowest class index.
    pub fn predict_from_decisions(&self, decisions: &[F]) -> Result<Prediction<F>> {
        if decisions.len() != self.pairs.len() {
            return Err(Error::Shape {
                expected: self.pairs.len(),
                got: decisions.len(),
            });
        }
        let mut votes = vec![0usize; self.classes.len()];
        for (p, &d) in self.pairs.iter().zip(decisions) {
            if d >= F::zero() {
                votes[p.positive] += 1;
            } else {
                votes[p.negative] += 1;
            }
        }
        let mut best = 0;
        for c in 1..votes.len() {
            if votes[c] > votes[best] {
                best = c;
            }
        }
        Ok(Prediction {
            class_index: best,
            label: self.classes[best].clone(),
            votes,
            decisions: decisions.to_vec(),
        })
    }

    pub fn predict_slice(&self, x: &[F]) -> Result<Prediction<F>> {
        let d = self.decisions(x)?;
        self.predict_from_decisions(&d)
    }

    pub fn predict(&self, f: &FeatureVector<F>) -> Result<Prediction<F>> {
        self.predict_slice(&f.to_array())
    }

    pub fn accuracy(&self, dataset: &LabeledDataset<F>) -> Result<F> {
        if dataset.is_empty() {
            return Err(Error::Data("empty dataset".into()));
        }
        let mut correct = 0usize;
        for (f, &l) in dataset.features.iter().zip(&dataset.labels) {
            let p = self.predict(f)?;
            if p.label == dataset.classes[l] {
                correct += 1;
            }
        }
        Ok(F::from_usize_lossy(correct) / F::from_usize_lossy(dataset.len()))
    }
}
