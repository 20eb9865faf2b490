//! C4.5-style decision tree: multiway nominal splits, binary numeric splits
//! at class-boundary midpoints, gain-ratio selection and error-based
//! (pessimistic) pruning.

use statrs::distribution::{ContinuousCDF, Normal};

use super::{BatchLearner, BatchModel};
use crate::dataset::{Dataset, Instance};
use crate::stats::entropy;
use crate::{argmax, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pruning {
    None,
    /// Subtree replacement using the upper confidence limit of the leaf
    /// error rate.
    Pessimistic { confidence: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeConfig {
    pub min_leaf_instances: usize,
    pub use_gain_ratio: bool,
    pub pruning: Pruning,
    pub max_depth: Option<usize>,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig {
            min_leaf_instances: 2,
            use_gain_ratio: true,
            pruning: Pruning::Pessimistic { confidence: 0.25 },
            max_depth: None,
        }
    }
}

impl TreeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_leaf_instances < 1 {
            return Err(Error::Config("min_leaf_instances must be at least 1".into()));
        }
        if let Pruning::Pessimistic { confidence } = self.pruning {
            if !(confidence > 0.0 && confidence <= 0.5) {
                return Err(Error::Config(format!("pruning confidence {confidence} outside (0, 0.5]")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Leaf {
        counts: Vec<f64>,
    },
    Nominal {
        attribute: usize,
        children: Vec<TreeNode>,
        counts: Vec<f64>,
    },
    Numeric {
        attribute: usize,
        threshold: f64,
        /// Values `<= threshold`.
        left: Box<TreeNode>,
        right: Box<TreeNode>,
        counts: Vec<f64>,
    },
}

impl TreeNode {
    pub fn counts(&self) -> &[f64] {
        match self {
            TreeNode::Leaf { counts } | TreeNode::Nominal { counts, .. } | TreeNode::Numeric { counts, .. } => counts,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Nominal { children, .. } => 1 + children.iter().map(TreeNode::depth).max().unwrap_or(0),
            TreeNode::Numeric { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Nominal { children, .. } => children.iter().map(TreeNode::leaf_count).sum(),
            TreeNode::Numeric { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }

    fn leaf_for(&self, x: &Instance) -> &[f64] {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { counts } => return counts,
                TreeNode::Nominal {
                    attribute,
                    children,
                    counts,
                } => match children.get(x.nominal(*attribute)) {
                    Some(child) => node = child,
                    // Symbol not known when the tree was built.
                    None => return counts,
                },
                TreeNode::Numeric {
                    attribute,
                    threshold,
                    left,
                    right,
                    ..
                } => node = if x.values[*attribute] <= *threshold { left } else { right },
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct DecisionTree {
    root: TreeNode,
}

impl DecisionTree {
    pub fn fit(ds: &Dataset, cfg: &TreeConfig) -> Result<Self> {
        cfg.validate()?;
        let k = ds.num_classes();
        let builder = Builder { ds, cfg, k };
        let indices: Vec<usize> = (0..ds.len()).collect();
        let usable = vec![true; ds.schema().len()];
        let mut root = builder.build(&indices, &usable, 0);
        if let Pruning::Pessimistic { confidence } = cfg.pruning {
            let z = Normal::new(0.0, 1.0).expect("standard normal").inverse_cdf(1.0 - confidence);
            prune(&mut root, confidence, z);
        }
        Ok(DecisionTree { root })
    }

    pub fn root(&self) -> &TreeNode {
        &self.root
    }
}

impl BatchModel for DecisionTree {
    fn predict_scores(&self, x: &Instance) -> Vec<f64> {
        let counts = self.root.leaf_for(x);
        let total: f64 = counts.iter().sum();
        if total > 0.0 {
            counts.iter().map(|c| c / total).collect()
        } else {
            vec![0.0; counts.len()]
        }
    }

    fn predict(&self, x: &Instance) -> usize {
        argmax(self.root.leaf_for(x))
    }
}

#[derive(Debug, Clone, Default)]
pub struct TreeLearner {
    pub config: TreeConfig,
}

impl BatchLearner for TreeLearner {
    fn name(&self) -> &str {
        "j48"
    }

    fn fit(&self, train: &Dataset) -> Result<Box<dyn BatchModel>> {
        Ok(Box::new(DecisionTree::fit(train, &self.config)?))
    }
}

enum SplitKind {
    Nominal,
    Numeric(f64),
}

struct Candidate {
    attribute: usize,
    kind: SplitKind,
    gain: f64,
    split_info: f64,
}

impl Candidate {
    fn ratio(&self) -> f64 {
        if self.split_info > 0.0 {
            self.gain / self.split_info
        } else {
            self.gain
        }
    }
}

struct Builder<'a> {
    ds: &'a Dataset,
    cfg: &'a TreeConfig,
    k: usize,
}

/// Gains below this are treated as zero.
const MIN_GAIN: f64 = 1e-10;

impl Builder<'_> {
    fn counts(&self, indices: &[usize]) -> Vec<f64> {
        let mut c = vec![0.0; self.k];
        for &i in indices {
            c[self.ds.instance(i).label] += 1.0;
        }
        c
    }

    fn build(&self, indices: &[usize], usable: &[bool], depth: usize) -> TreeNode {
        let counts = self.counts(indices);
        let n = indices.len();
        let pure = counts.iter().filter(|&&c| c > 0.0).count() <= 1;
        let depth_capped = self.cfg.max_depth.is_some_and(|d| depth >= d);
        if pure || n < 2 * self.cfg.min_leaf_instances || depth_capped {
            return TreeNode::Leaf { counts };
        }

        let parent_entropy = entropy(&counts);
        let candidates: Vec<Candidate> = (0..self.ds.schema().len())
            .filter(|&a| usable[a])
            .filter_map(|a| {
                if self.ds.schema().is_nominal(a) {
                    self.nominal_candidate(a, indices, parent_entropy)
                } else {
                    self.numeric_candidate(a, indices, parent_entropy)
                }
            })
            .filter(|c| c.gain > MIN_GAIN)
            .collect();
        if candidates.is_empty() {
            return TreeNode::Leaf { counts };
        }

        let best = if self.cfg.use_gain_ratio {
            // Only splits with at least average gain compete on ratio, which
            // keeps tiny split-info splits from winning on ratio alone.
            let avg = candidates.iter().map(|c| c.gain).sum::<f64>() / candidates.len() as f64;
            candidates
                .iter()
                .filter(|c| c.gain >= avg - 1e-12)
                .fold(None::<&Candidate>, |best, c| match best {
                    Some(b) if b.ratio() >= c.ratio() => Some(b),
                    _ => Some(c),
                })
        } else {
            candidates.iter().fold(None::<&Candidate>, |best, c| match best {
                Some(b) if b.gain >= c.gain => Some(b),
                _ => Some(c),
            })
        }
        .expect("non-empty candidates");

        let a = best.attribute;
        match best.kind {
            SplitKind::Nominal => {
                let d = self.ds.schema().domain_len(a);
                let mut parts: Vec<Vec<usize>> = vec![Vec::new(); d];
                for &i in indices {
                    parts[self.ds.instance(i).nominal(a)].push(i);
                }
                let mut child_usable = usable.to_vec();
                child_usable[a] = false;
                let children = parts
                    .iter()
                    .map(|p| {
                        if p.is_empty() {
                            TreeNode::Leaf { counts: counts.clone() }
                        } else {
                            self.build(p, &child_usable, depth + 1)
                        }
                    })
                    .collect();
                TreeNode::Nominal {
                    attribute: a,
                    children,
                    counts,
                }
            }
            SplitKind::Numeric(threshold) => {
                let (left, right): (Vec<usize>, Vec<usize>) =
                    indices.iter().partition(|&&i| self.ds.instance(i).values[a] <= threshold);
                TreeNode::Numeric {
                    attribute: a,
                    threshold,
                    left: Box::new(self.build(&left, usable, depth + 1)),
                    right: Box::new(self.build(&right, usable, depth + 1)),
                    counts,
                }
            }
        }
    }

    fn nominal_candidate(&self, a: usize, indices: &[usize], parent_entropy: f64) -> Option<Candidate> {
        let d = self.ds.schema().domain_len(a);
        let mut table = vec![vec![0.0; self.k]; d];
        for &i in indices {
            let x = self.ds.instance(i);
            table[x.nominal(a)][x.label] += 1.0;
        }
        let sizes: Vec<f64> = table.iter().map(|r| r.iter().sum()).collect();
        let big_enough = sizes.iter().filter(|&&s| s >= self.cfg.min_leaf_instances as f64).count();
        if big_enough < 2 {
            return None;
        }
        let n = indices.len() as f64;
        let child_entropy: f64 = table.iter().zip(&sizes).map(|(r, s)| s / n * entropy(r)).sum();
        Some(Candidate {
            attribute: a,
            kind: SplitKind::Nominal,
            gain: parent_entropy - child_entropy,
            split_info: entropy(&sizes),
        })
    }

    /// Best binary threshold by information gain over class-boundary cut
    /// points with at least `min_leaf_instances` on each side.
    fn numeric_candidate(&self, a: usize, indices: &[usize], parent_entropy: f64) -> Option<Candidate> {
        let mut pairs: Vec<(f64, usize)> = indices
            .iter()
            .map(|&i| {
                let x = self.ds.instance(i);
                (x.values[a], x.label)
            })
            .collect();
        pairs.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)));

        // Groups of equal values with their class counts.
        let mut groups: Vec<(f64, Vec<f64>)> = Vec::new();
        for &(v, c) in &pairs {
            match groups.last_mut() {
                Some((gv, counts)) if *gv == v => counts[c] += 1.0,
                _ => {
                    let mut counts = vec![0.0; self.k];
                    counts[c] = 1.0;
                    groups.push((v, counts));
                }
            }
        }
        if groups.len() < 2 {
            return None;
        }

        let n = pairs.len() as f64;
        let min_leaf = self.cfg.min_leaf_instances as f64;
        let total: Vec<f64> = self.counts(indices);
        let mut left = vec![0.0; self.k];
        let mut left_n = 0.0;
        let mut best: Option<(f64, f64, f64)> = None; // (gain, threshold, left_n)
        for g in 0..groups.len() - 1 {
            for (l, c) in left.iter_mut().zip(&groups[g].1) {
                *l += c;
            }
            left_n += groups[g].1.iter().sum::<f64>();
            let right_n = n - left_n;
            if left_n < min_leaf || right_n < min_leaf {
                continue;
            }
            let single_class = |counts: &[f64]| {
                let mut nz = counts.iter().enumerate().filter(|(_, &c)| c > 0.0);
                match (nz.next(), nz.next()) {
                    (Some((i, _)), None) => Some(i),
                    _ => None,
                }
            };
            let here = single_class(&groups[g].1);
            if here.is_some() && here == single_class(&groups[g + 1].1) {
                continue;
            }
            let right: Vec<f64> = total.iter().zip(&left).map(|(t, l)| t - l).collect();
            let gain = parent_entropy - (left_n / n) * entropy(&left) - (right_n / n) * entropy(&right);
            if best.is_none_or(|(bg, _, _)| gain > bg) {
                let (lo, hi) = (groups[g].0, groups[g + 1].0);
                let mid = lo + (hi - lo) / 2.0;
                let threshold = if mid < hi { mid } else { lo };
                best = Some((gain, threshold, left_n));
            }
        }
        let (gain, threshold, left_n) = best?;
        Some(Candidate {
            attribute: a,
            kind: SplitKind::Numeric(threshold),
            gain,
            split_info: entropy(&[left_n, n - left_n]),
        })
    }
}

/// Extra errors predicted for a leaf with `n` instances and `e` errors at
/// confidence `cf`: the upper binomial confidence limit times `n`, minus `e`.
fn added_errors(n: f64, e: f64, cf: f64, z: f64) -> f64 {
    if n <= 0.0 {
        return 0.0;
    }
    if e < 1.0 {
        let base = n * (1.0 - cf.powf(1.0 / n));
        if e == 0.0 {
            return base;
        }
        return base + e * (added_errors(n, 1.0, cf, z) - base);
    }
    if e + 0.5 >= n {
        return (n - e).max(0.0);
    }
    let f = (e + 0.5) / n;
    let r = (f + z * z / (2.0 * n) + z * (f / n - f * f / n + z * z / (4.0 * n * n)).sqrt()) / (1.0 + z * z / n);
    r * n - e
}

fn leaf_error_estimate(counts: &[f64], cf: f64, z: f64) -> f64 {
    let n: f64 = counts.iter().sum();
    let e = n - counts.iter().copied().fold(0.0, f64::max);
    e + added_errors(n, e, cf, z)
}

/// Bottom-up subtree replacement; returns the node's estimated errors.
fn prune(node: &mut TreeNode, cf: f64, z: f64) -> f64 {
    let subtree = match node {
        TreeNode::Leaf { counts } => return leaf_error_estimate(counts, cf, z),
        TreeNode::Nominal { children, .. } => children
            .iter_mut()
            .filter(|c| c.counts().iter().sum::<f64>() > 0.0 || !matches!(c, TreeNode::Leaf { .. }))
            .map(|c| prune(c, cf, z))
            .sum::<f64>(),
        TreeNode::Numeric { left, right, .. } => prune(left, cf, z) + prune(right, cf, z),
    };
    let as_leaf = leaf_error_estimate(node.counts(), cf, z);
    if as_leaf <= subtree + 0.1 {
        *node = TreeNode::Leaf {
            counts: node.counts().to_vec(),
        };
        as_leaf
    } else {
        subtree
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Attribute, AttributeSchema};
    use proptest::prelude::*;

    fn nominal_ds(rows: &[([usize; 2], usize)]) -> Dataset {
        let schema = AttributeSchema::new(
            vec![Attribute::nominal("a", ["0", "1"]), Attribute::nominal("b", ["0", "1"])],
            vec!["neg".into(), "pos".into()],
        )
        .unwrap();
        let instances = rows
            .iter()
            .map(|(v, l)| Instance::new(v.iter().map(|&x| x as f64).collect(), *l))
            .collect();
        Dataset::new(schema, instances, vec![]).unwrap()
    }

    fn unpruned(min_leaf: usize) -> TreeConfig {
        TreeConfig {
            min_leaf_instances: min_leaf,
            pruning: Pruning::None,
            ..TreeConfig::default()
        }
    }

    #[test]
    fn pure_training_set_is_single_leaf() {
        let ds = nominal_ds(&[([0, 1], 1), ([1, 0], 1), ([1, 1], 1)]);
        let t = DecisionTree::fit(&ds, &TreeConfig::default()).unwrap();
        assert!(matches!(t.root(), TreeNode::Leaf { .. }));
        assert_eq!(t.predict(&Instance::new(vec![0.0, 0.0], 0)), 1);
    }

    /// Information gain of every single-attribute split, by enumeration.
    fn brute_force_gains(ds: &Dataset) -> Vec<f64> {
        let all: Vec<f64> = ds.class_counts().iter().map(|&c| c as f64).collect();
        let n = ds.len() as f64;
        (0..2)
            .map(|a| {
                let mut parts = vec![vec![0.0; 2]; 2];
                for x in ds.instances() {
                    parts[x.nominal(a)][x.label] += 1.0;
                }
                entropy(&all) - parts.iter().map(|p| p.iter().sum::<f64>() / n * entropy(p)).sum::<f64>()
            })
            .collect()
    }

    #[test]
    fn xor_style_set_gives_depth_two_tree() {
        // XOR of a and b with an extra (0,0) negative tilting the root gain.
        let ds = nominal_ds(&[
            ([0, 0], 0),
            ([0, 0], 0),
            ([0, 0], 0),
            ([1, 1], 0),
            ([0, 1], 1),
            ([0, 1], 1),
            ([1, 0], 1),
            ([1, 0], 1),
        ]);
        let gains = brute_force_gains(&ds);
        assert!(gains[0] > 0.0 && gains[1] > 0.0);
        let t = DecisionTree::fit(&ds, &unpruned(1)).unwrap();
        assert_eq!(t.root().depth(), 2);
        for x in ds.instances() {
            assert_eq!(t.predict(x), x.label);
        }
    }

    #[test]
    fn numeric_threshold_at_boundary_midpoint() {
        let schema = AttributeSchema::new(vec![Attribute::numeric("x")], vec!["lo".into(), "hi".into()]).unwrap();
        let rows = [(1.0, 0), (2.0, 0), (3.0, 0), (7.0, 1), (8.0, 1), (9.0, 1)];
        let ds = Dataset::new(schema, rows.iter().map(|&(v, l)| Instance::new(vec![v], l)).collect(), vec![]).unwrap();
        let t = DecisionTree::fit(&ds, &TreeConfig::default()).unwrap();
        match t.root() {
            TreeNode::Numeric { threshold, .. } => assert_eq!(*threshold, 5.0),
            other => panic!("expected numeric split, got {other:?}"),
        }
    }

    #[test]
    fn pruning_collapses_noise_split() {
        // 40 negatives and one positive: the split that isolates the
        // positive is not worth keeping under pessimistic estimates.
        let schema = AttributeSchema::new(vec![Attribute::numeric("x")], vec!["n".into(), "p".into()]).unwrap();
        let mut inst: Vec<Instance> = (0..40).map(|i| Instance::new(vec![i as f64], 0)).collect();
        inst.push(Instance::new(vec![20.5], 1));
        inst.push(Instance::new(vec![20.6], 1));
        let ds = Dataset::new(schema, inst, vec![]).unwrap();
        let full = DecisionTree::fit(&ds, &unpruned(2)).unwrap();
        assert!(full.root().leaf_count() > 1);
        let pruned = DecisionTree::fit(&ds, &TreeConfig::default()).unwrap();
        assert!(pruned.root().leaf_count() < full.root().leaf_count());
    }

    #[test]
    fn added_errors_reference_values() {
        let z = Normal::new(0.0, 1.0).unwrap().inverse_cdf(0.75);
        // Zero errors: n(1 - cf^(1/n)).
        assert!((added_errors(6.0, 0.0, 0.25, z) - 6.0 * (1.0 - 0.25f64.powf(1.0 / 6.0))).abs() < 1e-12);
        assert_eq!(added_errors(4.0, 4.0, 0.25, z), 0.0);
        assert!(added_errors(100.0, 10.0, 0.25, z) > 0.0);
    }

    #[test]
    fn bad_config_rejected() {
        let ds = nominal_ds(&[([0, 0], 0)]);
        let cfg = TreeConfig {
            pruning: Pruning::Pessimistic { confidence: 0.7 },
            ..TreeConfig::default()
        };
        assert!(DecisionTree::fit(&ds, &cfg).is_err());
    }

    proptest! {
        #[test]
        fn unpruned_tree_fits_distinct_numeric_values(rows in prop::collection::btree_map(0u16..500, 0usize..3, 2..80)) {
            let schema = AttributeSchema::new(
                vec![Attribute::numeric("x")],
                vec!["a".into(), "b".into(), "c".into()],
            ).unwrap();
            let instances = rows.iter().map(|(&x, &l)| Instance::new(vec![x as f64], l)).collect();
            let ds = Dataset::new(schema, instances, vec![]).unwrap();
            let t = DecisionTree::fit(&ds, &unpruned(1)).unwrap();
            for x in ds.instances() {
                prop_assert_eq!(t.predict(x), x.label);
            }
        }
    }
}
