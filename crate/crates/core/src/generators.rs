//! Seeded input generation and shrinking for every case-study input domain.
//!
//! All randomness flows from [`SeededSource`], a ChaCha8 stream. Iteration
//! `i` of a campaign with seed `s` draws from stream `i` of the generator
//! keyed by `s`, so iterations are independent and can be produced in any
//! order.

use std::ops::RangeInclusive;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cases::ast::{ExprNode, Operator};
use crate::cases::knapsack::{Item, KnapsackInstance};
use crate::cases::montecarlo::SampleBudgetPair;
use crate::error::{Error, Result};

/// Deterministic random stream. Same seed and stream → same values on every
/// platform.
#[derive(Debug, Clone)]
pub struct SeededSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl SeededSource {
    pub const ALGORITHM: &'static str = "chacha8";

    pub fn new(seed: u64) -> Self {
        SeededSource {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent per-iteration stream of a campaign seed.
    pub fn for_iteration(seed: u64, iteration: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(iteration);
        SeededSource { seed, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn algorithm(&self) -> &'static str {
        Self::ALGORITHM
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn in_range<T>(&mut self, range: &RangeInclusive<T>) -> T
    where
        T: rand::distributions::uniform::SampleUniform + PartialOrd + Copy,
    {
        self.rng.gen_range(*range.start()..=*range.end())
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }
}

/// A source of uniform reals in `[0, 1)`.
pub trait UnitSource {
    fn next_unit(&mut self) -> f64;
}

impl UnitSource for SeededSource {
    #[inline]
    fn next_unit(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrayConfig {
    pub max_len: usize,
    pub values: RangeInclusive<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeConfig {
    pub max_depth: u32,
    pub variables: Vec<String>,
    pub constants: RangeInclusive<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackConfig {
    pub max_items: usize,
    pub values: RangeInclusive<u32>,
    pub weights: RangeInclusive<u32>,
    pub capacity: RangeInclusive<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub array: ArrayConfig,
    pub tree: TreeConfig,
    pub knapsack: KnapsackConfig,
    pub montecarlo: SampleBudgetPair,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            array: ArrayConfig {
                max_len: 8,
                values: 0..=9,
            },
            tree: TreeConfig {
                max_depth: 4,
                variables: vec!["a".into(), "b".into(), "c".into()],
                constants: 0..=9,
            },
            knapsack: KnapsackConfig {
                max_items: 6,
                values: 1..=20,
                weights: 1..=10,
                capacity: 1..=50,
            },
            montecarlo: SampleBudgetPair::default(),
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        fn non_empty<T: PartialOrd>(r: &RangeInclusive<T>, what: &str) -> Result<()> {
            if r.is_empty() {
                return Err(Error::InvalidConfig(format!("{what} range is empty")));
            }
            Ok(())
        }
        non_empty(&self.array.values, "array value")?;
        non_empty(&self.tree.constants, "tree constant")?;
        non_empty(&self.knapsack.values, "knapsack value")?;
        non_empty(&self.knapsack.weights, "knapsack weight")?;
        non_empty(&self.knapsack.capacity, "knapsack capacity")?;
        if self.tree.variables.is_empty() {
            return Err(Error::InvalidConfig("no variable names".into()));
        }
        // a zero weight never lets the greedy fill loop terminate
        if *self.knapsack.weights.start() < 1 {
            return Err(Error::InvalidConfig(
                "knapsack weights must be at least 1".into(),
            ));
        }
        if *self.knapsack.values.start() < 1 {
            return Err(Error::InvalidConfig(
                "knapsack values must be positive".into(),
            ));
        }
        self.montecarlo.validate_strict()
    }
}

/// Length uniform in `0..=max_len`, elements uniform in the value range.
pub fn random_array(src: &mut SeededSource, cfg: &GeneratorConfig) -> Vec<i64> {
    let len = src.below(cfg.array.max_len + 1);
    (0..len).map(|_| src.in_range(&cfg.array.values)).collect()
}

/// Tree over `+`, `*`, variables and constants with depth at most
/// `max_depth`. Each interior position becomes an operation with
/// probability 1/2.
pub fn random_tree(src: &mut SeededSource, cfg: &GeneratorConfig) -> ExprNode {
    fn grow(src: &mut SeededSource, cfg: &TreeConfig, depth_left: u32) -> ExprNode {
        if depth_left > 0 && src.coin() {
            let op = if src.coin() {
                Operator::Add
            } else {
                Operator::Mul
            };
            let left = grow(src, cfg, depth_left - 1);
            let right = grow(src, cfg, depth_left - 1);
            return ExprNode::op(op, left, right);
        }
        if src.coin() {
            let name = &cfg.variables[src.below(cfg.variables.len())];
            ExprNode::var(name)
        } else {
            ExprNode::constant(src.in_range(&cfg.constants))
        }
    }
    grow(src, &cfg.tree, cfg.tree.max_depth)
}

/// Up to `max_items` items named `A`, `B`, ... plus a capacity.
pub fn random_knapsack_instance(src: &mut SeededSource, cfg: &GeneratorConfig) -> KnapsackInstance {
    let k = &cfg.knapsack;
    let count = src.below(k.max_items + 1);
    let items = (0..count)
        .map(|idx| Item {
            name: item_name(idx),
            value: src.in_range(&k.values),
            weight: src.in_range(&k.weights),
        })
        .collect();
    let capacity = src.in_range(&k.capacity);
    KnapsackInstance { items, capacity }
}

/// `A`..`Z`, then `AA`, `AB`, ...
fn item_name(mut idx: usize) -> String {
    let mut name = Vec::new();
    loop {
        name.push(b'A' + (idx % 26) as u8);
        if idx < 26 {
            break;
        }
        idx = idx / 26 - 1;
    }
    name.reverse();
    String::from_utf8(name).expect("ascii")
}

/// Deletions of single elements first, then per-element moves toward zero.
/// Every candidate is smaller by (length, sum of magnitudes).
pub fn shrink_array(arr: &[i64]) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for i in 0..arr.len() {
        let mut c = arr.to_vec();
        c.remove(i);
        out.push(c);
    }
    for (i, &v) in arr.iter().enumerate() {
        let mut targets = vec![0, v / 2, v - v.signum()];
        targets.dedup();
        for t in targets {
            if t.unsigned_abs() < v.unsigned_abs() {
                let mut c = arr.to_vec();
                c[i] = t;
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
    }
    out
}

/// Direct subtrees first, then operations with one child shrunk. Every
/// candidate has fewer nodes.
pub fn shrink_tree(tree: &ExprNode) -> Vec<ExprNode> {
    let ExprNode::Operation { op, left, right } = tree else {
        return Vec::new();
    };
    let mut out = vec![(**left).clone(), (**right).clone()];
    for l in shrink_tree(left) {
        out.push(ExprNode::op(*op, l, (**right).clone()));
    }
    for r in shrink_tree(right) {
        out.push(ExprNode::op(*op, (**left).clone(), r));
    }
    out
}

/// Single-item removals first, then smaller capacities.
pub fn shrink_knapsack(instance: &KnapsackInstance) -> Vec<KnapsackInstance> {
    let mut out = Vec::new();
    for i in 0..instance.items.len() {
        let mut items = instance.items.clone();
        items.remove(i);
        out.push(KnapsackInstance {
            items,
            capacity: instance.capacity,
        });
    }
    let cap = instance.capacity;
    let mut caps = vec![0, cap / 2, cap.saturating_sub(1)];
    caps.dedup();
    for c in caps.into_iter().filter(|&c| c < cap) {
        out.push(KnapsackInstance {
            items: instance.items.clone(),
            capacity: c,
        });
    }
    out
}
