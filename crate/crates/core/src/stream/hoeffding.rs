//! Hoeffding tree (VFDT) with multiway nominal splits and Gaussian
//! approximations for numeric attributes.

use super::StreamModel;
use crate::batch::{naive_bayes_posterior, NaiveBayesStats};
use crate::dataset::{AttributeSchema, Instance};
use crate::stats::entropy;
use crate::{argmax, Error, Result};

/// `sqrt(R^2 ln(1/delta) / (2n))`.
pub fn hoeffding_bound(range: f64, delta: f64, n: f64) -> Result<f64> {
    if !(range >= 0.0) || !(delta > 0.0 && delta < 1.0) || !(n >= 1.0) {
        return Err(Error::Config(format!(
            "hoeffding_bound needs R >= 0, 0 < delta < 1, n >= 1; got R = {range}, delta = {delta}, n = {n}"
        )));
    }
    Ok((range * range * (1.0 / delta).ln() / (2.0 * n)).sqrt())
}

/// Split when the best merit beats the runner-up by more than `epsilon`, or
/// when `epsilon` has shrunk below the tie threshold.
pub fn should_split(best: f64, second: f64, epsilon: f64, tie_threshold: f64) -> bool {
    best - second > epsilon || epsilon < tie_threshold
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LeafPrediction {
    #[default]
    Majority,
    NaiveBayes,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HoeffdingConfig {
    pub delta: f64,
    pub grace_period: usize,
    pub tie_threshold: f64,
    pub leaf_prediction: LeafPrediction,
    /// Candidate thresholds per numeric attribute, evenly spaced between the
    /// observed minimum and maximum.
    pub numeric_thresholds: usize,
}

impl Default for HoeffdingConfig {
    fn default() -> Self {
        HoeffdingConfig {
            delta: 1e-7,
            grace_period: 200,
            tie_threshold: 0.05,
            leaf_prediction: LeafPrediction::Majority,
            numeric_thresholds: 10,
        }
    }
}

impl HoeffdingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Config(format!("delta {} outside (0, 1)", self.delta)));
        }
        if self.grace_period == 0 {
            return Err(Error::Config("grace period must be at least 1".into()));
        }
        if !(self.tie_threshold >= 0.0) {
            return Err(Error::Config("tie threshold must be non-negative".into()));
        }
        if self.numeric_thresholds == 0 {
            return Err(Error::Config("need at least one numeric threshold".into()));
        }
        Ok(())
    }
}

/// Every branch of a split needs this fraction of the leaf's weight, except
/// one.
const MIN_BRANCH_FRACTION: f64 = 0.01;

#[derive(Debug, Clone)]
struct Leaf {
    /// Class weights including those inherited from the parent split.
    counts: Vec<f64>,
    seen_at_last_eval: f64,
    stats: NaiveBayesStats,
    /// Observed `(min, max)` per numeric attribute and class.
    ranges: Vec<Vec<Option<(f64, f64)>>>,
    /// Nominal attributes already split on along the path.
    used: Vec<bool>,
}

#[derive(Debug, Clone)]
enum Node {
    Leaf(Box<Leaf>),
    Nominal {
        attribute: usize,
        children: Vec<usize>,
        counts: Vec<f64>,
    },
    Numeric {
        attribute: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone)]
pub struct HoeffdingTree {
    cfg: HoeffdingConfig,
    schema: AttributeSchema,
    nodes: Vec<Node>,
}

enum SplitTest {
    Nominal(usize),
    Numeric(usize, f64),
}

struct Suggestion {
    test: Option<SplitTest>,
    merit: f64,
    branches: Vec<Vec<f64>>,
}

impl HoeffdingTree {
    pub fn new(schema: &AttributeSchema, cfg: HoeffdingConfig) -> Result<Self> {
        cfg.validate()?;
        let mut tree = HoeffdingTree {
            cfg,
            schema: schema.clone(),
            nodes: Vec::new(),
        };
        let root = tree.new_leaf(vec![0.0; schema.num_classes()], vec![false; schema.len()]);
        tree.nodes.push(root);
        Ok(tree)
    }

    fn new_leaf(&self, counts: Vec<f64>, used: Vec<bool>) -> Node {
        let k = self.schema.num_classes();
        Node::Leaf(Box::new(Leaf {
            seen_at_last_eval: counts.iter().sum(),
            counts,
            stats: NaiveBayesStats::new(&self.schema),
            ranges: vec![vec![None; k]; self.schema.len()],
            used,
        }))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf(_))).count()
    }

    /// Attribute tested at the root, if the root has split.
    pub fn root_attribute(&self) -> Option<usize> {
        match &self.nodes[0] {
            Node::Leaf(_) => None,
            Node::Nominal { attribute, .. } | Node::Numeric { attribute, .. } => Some(*attribute),
        }
    }

    pub fn depth(&self) -> usize {
        fn go(t: &HoeffdingTree, id: usize) -> usize {
            match &t.nodes[id] {
                Node::Leaf(_) => 0,
                Node::Nominal { children, .. } => 1 + children.iter().map(|&c| go(t, c)).max().unwrap_or(0),
                Node::Numeric { left, right, .. } => 1 + go(t, *left).max(go(t, *right)),
            }
        }
        go(self, 0)
    }

    /// Leaf reached by `x`, or the distribution of a nominal split whose
    /// branch for `x`'s symbol does not exist.
    fn route(&self, x: &Instance) -> std::result::Result<usize, &[f64]> {
        let mut id = 0;
        loop {
            match &self.nodes[id] {
                Node::Leaf(_) => return Ok(id),
                Node::Nominal {
                    attribute,
                    children,
                    counts,
                } => match children.get(x.nominal(*attribute)) {
                    Some(&c) => id = c,
                    None => return Err(counts),
                },
                Node::Numeric {
                    attribute,
                    threshold,
                    left,
                    right,
                } => id = if x.values[*attribute] <= *threshold { *left } else { *right },
            }
        }
    }

    fn leaf(&self, id: usize) -> &Leaf {
        match &self.nodes[id] {
            Node::Leaf(l) => l,
            _ => unreachable!("node {id} is not a leaf"),
        }
    }

    fn leaf_mut(&mut self, id: usize) -> &mut Leaf {
        match &mut self.nodes[id] {
            Node::Leaf(l) => l,
            _ => unreachable!("node {id} is not a leaf"),
        }
    }

    /// Like [`Self::route`], but creates a leaf for a symbol that has no
    /// branch yet.
    fn route_for_learning(&mut self, x: &Instance) -> usize {
        let mut id = 0;
        loop {
            match &self.nodes[id] {
                Node::Leaf(_) => return id,
                Node::Numeric {
                    attribute,
                    threshold,
                    left,
                    right,
                } => id = if x.values[*attribute] <= *threshold { *left } else { *right },
                Node::Nominal {
                    attribute, children, ..
                } => {
                    let a = *attribute;
                    let v = x.nominal(a);
                    if let Some(&c) = children.get(v) {
                        id = c;
                        continue;
                    }
                    let mut used = vec![false; self.schema.len()];
                    used[a] = true;
                    let k = self.schema.num_classes();
                    let first_new = children.len();
                    for _ in first_new..=v {
                        let leaf = self.new_leaf(vec![0.0; k], used.clone());
                        self.nodes.push(leaf);
                        let new_id = self.nodes.len() - 1;
                        if let Node::Nominal { children, .. } = &mut self.nodes[id] {
                            children.push(new_id);
                        }
                    }
                    id = self.nodes.len() - 1;
                }
            }
        }
    }

    fn class_weight_at_or_below(leaf: &Leaf, a: usize, c: usize, t: f64) -> f64 {
        let g = leaf.stats.gaussian(a, c).expect("numeric attribute");
        match leaf.ranges[a][c] {
            None => 0.0,
            Some((lo, _)) if t < lo => 0.0,
            Some((_, hi)) if t >= hi => g.count(),
            _ => g.weight_at_or_below(t).clamp(0.0, g.count()),
        }
    }

    fn merit(pre: &[f64], branches: &[Vec<f64>]) -> f64 {
        let total: f64 = pre.iter().sum();
        let substantial = branches
            .iter()
            .filter(|b| b.iter().sum::<f64>() > MIN_BRANCH_FRACTION * total)
            .count();
        if substantial < 2 {
            return f64::NEG_INFINITY;
        }
        let post: f64 = branches.iter().map(|b| b.iter().sum::<f64>() / total * entropy(b)).sum();
        entropy(pre) - post
    }

    fn suggestions(&self, leaf: &Leaf) -> Vec<Suggestion> {
        let k = self.schema.num_classes();
        let pre = leaf.stats.class_counts().to_vec();
        let mut out = vec![Suggestion {
            test: None,
            merit: 0.0,
            branches: vec![pre.clone()],
        }];
        for a in 0..self.schema.len() {
            if leaf.used[a] {
                continue;
            }
            if self.schema.is_nominal(a) {
                let width = (0..k)
                    .map(|c| leaf.stats.nominal_counts(a, c).map_or(0, <[f64]>::len))
                    .max()
                    .unwrap_or(0);
                let branches: Vec<Vec<f64>> = (0..width)
                    .map(|v| {
                        (0..k)
                            .map(|c| leaf.stats.nominal_counts(a, c).and_then(|r| r.get(v).copied()).unwrap_or(0.0))
                            .collect()
                    })
                    .collect();
                let merit = Self::merit(&pre, &branches);
                if merit.is_finite() {
                    out.push(Suggestion {
                        test: Some(SplitTest::Nominal(a)),
                        merit,
                        branches,
                    });
                }
            } else {
                let (lo, hi) = leaf.ranges[a].iter().flatten().fold((f64::INFINITY, f64::NEG_INFINITY), |acc, r| {
                    (acc.0.min(r.0), acc.1.max(r.1))
                });
                if !(lo < hi) {
                    continue;
                }
                let bins = self.cfg.numeric_thresholds;
                let step = (hi - lo) / (bins + 1) as f64;
                let mut best: Option<Suggestion> = None;
                for i in 1..=bins {
                    let t = lo + step * i as f64;
                    let left: Vec<f64> = (0..k).map(|c| Self::class_weight_at_or_below(leaf, a, c, t)).collect();
                    let right: Vec<f64> = pre.iter().zip(&left).map(|(p, l)| (p - l).max(0.0)).collect();
                    let branches = vec![left, right];
                    let merit = Self::merit(&pre, &branches);
                    if merit.is_finite() && best.as_ref().is_none_or(|b| merit > b.merit) {
                        best = Some(Suggestion {
                            test: Some(SplitTest::Numeric(a, t)),
                            merit,
                            branches,
                        });
                    }
                }
                out.extend(best);
            }
        }
        out
    }

    fn attempt_split(&mut self, id: usize) {
        let leaf = self.leaf(id);
        let pure = leaf.stats.class_counts().iter().filter(|&&c| c > 0.0).count() <= 1;
        if pure {
            return;
        }
        let n: f64 = leaf.stats.class_counts().iter().sum();
        let mut sugg = self.suggestions(leaf);
        sugg.sort_by(|a, b| b.merit.total_cmp(&a.merit));
        if sugg.len() < 2 {
            return;
        }
        let range = (self.schema.num_classes().max(2) as f64).log2();
        let eps = hoeffding_bound(range, self.cfg.delta, n).expect("validated config");
        if !should_split(sugg[0].merit, sugg[1].merit, eps, self.cfg.tie_threshold) {
            return;
        }
        let best = sugg.swap_remove(0);
        let Some(test) = best.test else {
            return;
        };
        let used = leaf.used.clone();
        match test {
            SplitTest::Nominal(a) => {
                let mut child_used = used;
                child_used[a] = true;
                let counts = leaf.counts.clone();
                let mut children = Vec::with_capacity(best.branches.len());
                for b in best.branches {
                    let node = self.new_leaf(b, child_used.clone());
                    self.nodes.push(node);
                    children.push(self.nodes.len() - 1);
                }
                self.nodes[id] = Node::Nominal {
                    attribute: a,
                    children,
                    counts,
                };
            }
            SplitTest::Numeric(a, t) => {
                let mut it = best.branches.into_iter();
                let l = self.new_leaf(it.next().expect("left"), used.clone());
                let r = self.new_leaf(it.next().expect("right"), used);
                self.nodes.push(l);
                self.nodes.push(r);
                let right = self.nodes.len() - 1;
                self.nodes[id] = Node::Numeric {
                    attribute: a,
                    threshold: t,
                    left: right - 1,
                    right,
                };
            }
        }
    }
}

impl StreamModel for HoeffdingTree {
    fn predict_scores(&self, x: &Instance) -> Vec<f64> {
        let counts = match self.route(x) {
            Ok(id) => {
                let leaf = self.leaf(id);
                if self.cfg.leaf_prediction == LeafPrediction::NaiveBayes
                    && leaf.stats.class_counts().iter().sum::<f64>() > 0.0
                {
                    return naive_bayes_posterior(&leaf.stats.log_scores(x));
                }
                &leaf.counts
            }
            Err(counts) => counts,
        };
        let total: f64 = counts.iter().sum();
        if total > 0.0 {
            counts.iter().map(|c| c / total).collect()
        } else {
            vec![0.0; counts.len()]
        }
    }

    fn predict(&self, x: &Instance) -> usize {
        argmax(&self.predict_scores(x))
    }

    fn learn(&mut self, x: &Instance) {
        let id = self.route_for_learning(x);
        let numeric: Vec<bool> = (0..self.schema.len()).map(|a| !self.schema.is_nominal(a)).collect();
        let grace = self.cfg.grace_period as f64;
        let leaf = self.leaf_mut(id);
        leaf.counts[x.label] += 1.0;
        leaf.stats.update(x);
        for (a, &v) in x.values.iter().enumerate() {
            if numeric[a] {
                let r = &mut leaf.ranges[a][x.label];
                *r = Some(match *r {
                    Some((lo, hi)) => (lo.min(v), hi.max(v)),
                    None => (v, v),
                });
            }
        }
        let weight: f64 = leaf.counts.iter().sum();
        if weight - leaf.seen_at_last_eval >= grace {
            self.attempt_split(id);
            if let Node::Leaf(l) = &mut self.nodes[id] {
                l.seen_at_last_eval = weight;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Attribute;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bound_closed_form() {
        let e = hoeffding_bound(1.0, 1e-7, 1000.0).unwrap();
        let direct = ((1e7f64).ln() / 2000.0).sqrt();
        assert_eq!(e, direct);
        assert!((e - 0.0897722).abs() < 1e-7, "{e}");
        assert_eq!(hoeffding_bound(0.0, 1e-7, 10.0).unwrap(), 0.0);
        let ratio = e / hoeffding_bound(1.0, 1e-7, 10000.0).unwrap();
        assert!((ratio - 10f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn bound_rejects_bad_domain() {
        assert!(hoeffding_bound(-1.0, 0.1, 10.0).is_err());
        assert!(hoeffding_bound(1.0, 1.0, 10.0).is_err());
        assert!(hoeffding_bound(1.0, 0.1, 0.0).is_err());
    }

    fn schema() -> AttributeSchema {
        AttributeSchema::new(
            vec![
                Attribute::nominal("noise", ["p", "q", "r"]),
                Attribute::nominal("key", ["a", "b", "c", "d"]),
                Attribute::numeric("x"),
            ],
            vec!["n".into(), "y".into()],
        )
        .unwrap()
    }

    #[test]
    fn cold_start_predicts_class_zero() {
        let t = HoeffdingTree::new(&schema(), HoeffdingConfig::default()).unwrap();
        assert_eq!(t.predict(&Instance::new(vec![0.0, 3.0, 1.5], 1)), 0);
    }

    #[test]
    fn learns_depth_one_concept() {
        // Class is determined by `key`: symbols a, c -> n; b, d -> y.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut tree = HoeffdingTree::new(&schema(), HoeffdingConfig::default()).unwrap();
        let n = 50_000;
        let mut correct_tail = 0;
        for i in 0..n {
            let key = rng.gen_range(0..4usize);
            let x = Instance::new(
                vec![rng.gen_range(0..3usize) as f64, key as f64, rng.gen::<f64>()],
                key % 2,
            );
            let p = tree.predict(&x);
            if i >= n - 10_000 && p == x.label {
                correct_tail += 1;
            }
            tree.learn(&x);
        }
        assert_eq!(tree.root_attribute(), Some(1));
        assert!(correct_tail as f64 / 10_000.0 > 0.99, "{correct_tail}");
    }

    #[test]
    fn numeric_concept_splits_on_threshold() {
        let s = AttributeSchema::new(vec![Attribute::numeric("x")], vec!["lo".into(), "hi".into()]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut tree = HoeffdingTree::new(&s, HoeffdingConfig::default()).unwrap();
        let mut tail = 0;
        for i in 0..20_000 {
            let v: f64 = rng.gen();
            let x = Instance::new(vec![v], usize::from(v > 0.5));
            if i >= 15_000 && tree.predict(&x) == x.label {
                tail += 1;
            }
            tree.learn(&x);
        }
        assert_eq!(tree.root_attribute(), Some(0));
        assert!(tail > 4_700, "{tail}");
    }

    #[test]
    fn unseen_symbol_branch_created_on_learn() {
        let mut s = schema();
        let mut tree = HoeffdingTree::new(&s, HoeffdingConfig::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let key = rng.gen_range(0..4usize);
            tree.learn(&Instance::new(vec![0.0, key as f64, 0.5], key % 2));
        }
        assert_eq!(tree.root_attribute(), Some(1));
        let code = s.intern_symbol(1, "e");
        let x = Instance::new(vec![0.0, code as f64, 0.5], 1);
        let before = tree.node_count();
        let _ = tree.predict(&x);
        tree.learn(&x);
        assert_eq!(tree.node_count(), before + 1);
    }

    #[test]
    fn predict_does_not_change_the_model() {
        let mut tree = HoeffdingTree::new(&schema(), HoeffdingConfig::default()).unwrap();
        for i in 0..500 {
            tree.learn(&Instance::new(vec![0.0, (i % 4) as f64, 0.1], i % 2));
        }
        let before = format!("{:?}", tree.nodes);
        for i in 0..50 {
            tree.predict(&Instance::new(vec![1.0, (i % 4) as f64, 0.9], 0));
        }
        assert_eq!(before, format!("{:?}", tree.nodes));
    }

    proptest! {
        #[test]
        fn split_decision_is_monotone_in_n(gap in 0.0f64..1.0, delta in 1e-9f64..0.5, n in 1.0f64..1e6, extra in 0.0f64..1e6) {
            let e1 = hoeffding_bound(1.0, delta, n).unwrap();
            let e2 = hoeffding_bound(1.0, delta, n + extra).unwrap();
            prop_assert!(e2 <= e1);
            if should_split(gap, 0.0, e1, 0.0) {
                prop_assert!(should_split(gap, 0.0, e2, 0.0));
            }
        }
    }
}
