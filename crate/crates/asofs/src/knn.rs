//! K-nearest-neighbor classification restricted to a feature subset.

use crate::data::Dataset;
use crate::error::{Error, Result};

/// Wrapper-evaluator classifier interface. Implementations score a feature
/// subset by training on one partition and reporting the misclassified
/// fraction on the other. `selected` is the sorted list of active feature
/// indices and is never empty.
pub trait Classifier: Send + Sync {
    fn error_rate(&self, train: &Dataset, eval: &Dataset, selected: &[usize]) -> f64;
    fn describe(&self) -> String;
}

/// Majority-vote KNN with Euclidean distance over the selected features.
///
/// Determinism rules: neighbor ties at equal distance are broken by lower
/// training-instance index, and vote ties by the smallest class label.
#[derive(Debug, Clone, Copy)]
pub struct KnnClassifier {
    pub k: usize,
}

impl KnnClassifier {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::config("knn k must be >= 1"));
        }
        Ok(KnnClassifier { k })
    }

    fn predict(&self, train: &Dataset, query: &[f64], selected: &[usize]) -> u32 {
        let mut dists: Vec<(f64, usize)> = (0..train.instances())
            .map(|i| {
                let row = train.row(i);
                let d2: f64 = selected
                    .iter()
                    .map(|&f| {
                        let diff = row[f] - query[f];
                        diff * diff
                    })
                    .sum();
                (d2, i)
            })
            .collect();
        let k = self.k.min(dists.len());
        let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if k < dists.len() {
            dists.select_nth_unstable_by(k - 1, cmp);
            dists.truncate(k);
        }

        // vote: max count, then smallest label
        let mut counts: Vec<(u32, usize)> = Vec::with_capacity(k);
        for &(_, i) in &dists {
            let label = train.label(i);
            match counts.iter_mut().find(|(l, _)| *l == label) {
                Some((_, c)) => *c += 1,
                None => counts.push((label, 1)),
            }
        }
        counts
            .into_iter()
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .map(|(label, _)| label)
            .expect("train partition is nonempty")
    }
}

impl Classifier for KnnClassifier {
    fn error_rate(&self, train: &Dataset, eval: &Dataset, selected: &[usize]) -> f64 {
        debug_assert!(!selected.is_empty());
        debug_assert!(self.k <= train.instances());
        let mut wrong = 0usize;
        for i in 0..eval.instances() {
            if self.predict(train, eval.row(i), selected) != eval.label(i) {
                wrong += 1;
            }
        }
        wrong as f64 / eval.instances() as f64
    }

    fn describe(&self) -> String {
        format!("knn(k={})", self.k)
    }
}
