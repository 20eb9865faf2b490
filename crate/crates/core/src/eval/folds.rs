use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;
use crate::{Error, Result};

/// Assignment of every instance to exactly one test fold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    folds: usize,
    seed: u64,
    assignment: Vec<usize>,
}

impl FoldPlan {
    pub fn folds(&self) -> usize {
        self.folds
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Test fold of each instance.
    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&i| self.assignment[i] == fold).collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&i| self.assignment[i] != fold).collect()
    }
}

fn shuffled_by_class(ds: &Dataset, seed: u64) -> Vec<Vec<usize>> {
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); ds.num_classes()];
    for (i, x) in ds.instances().iter().enumerate() {
        by_class[x.label].push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for members in &mut by_class {
        members.shuffle(&mut rng);
    }
    by_class
}

/// Shuffles each class with `seed` and deals the instances round-robin into
/// `folds` folds, continuing the deal across classes so fold sizes differ by
/// at most one.
pub fn stratified_folds(ds: &Dataset, folds: usize, seed: u64) -> Result<FoldPlan> {
    if folds < 2 {
        return Err(Error::Config(format!("need at least 2 folds, got {folds}")));
    }
    if folds > ds.len() {
        return Err(Error::Config(format!("{folds} folds exceed {} instances", ds.len())));
    }
    let mut assignment = vec![0; ds.len()];
    let mut next = 0;
    for members in shuffled_by_class(ds, seed) {
        for i in members {
            assignment[i] = next % folds;
            next += 1;
        }
    }
    Ok(FoldPlan {
        folds,
        seed,
        assignment,
    })
}

/// Indices (ascending) of a class-proportional sample of `n` instances.
/// Quotas use largest remainders, ties to the lower class index.
pub fn stratified_subsample(ds: &Dataset, n: usize, seed: u64) -> Vec<usize> {
    if n >= ds.len() {
        return (0..ds.len()).collect();
    }
    let by_class = shuffled_by_class(ds, seed);
    let total = ds.len() as f64;
    let exact: Vec<f64> = by_class.iter().map(|m| m.len() as f64 * n as f64 / total).collect();
    let mut quota: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let mut left = n - quota.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..by_class.len()).collect();
    order.sort_by(|&a, &b| (exact[b] - exact[b].floor()).total_cmp(&(exact[a] - exact[a].floor())).then(a.cmp(&b)));
    for c in order {
        if left == 0 {
            break;
        }
        if quota[c] < by_class[c].len() {
            quota[c] += 1;
            left -= 1;
        }
    }
    let mut out: Vec<usize> = by_class.iter().zip(&quota).flat_map(|(m, &q)| m[..q].iter().copied()).collect();
    out.sort_unstable();
    out
}
