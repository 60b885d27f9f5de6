//! Unbounded knapsack: a greedy solver, an exhaustive solver that replaces it
//! for testing, and a dynamic program used as an independent reference.

use std::cmp::Ordering;
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use thiserror::Error;

use crate::error::Error;
use crate::exec::ExecutionFailure;
use crate::generators::shrink_knapsack;
use crate::oracle::{
    ApplicationMode, Automation, Granularity, IntramorphicRelation, Payload, ProgramPair, Render,
    TransformationDescriptor,
};

/// Upper bound on recursion nodes visited by [`knapsack_exhaustive`].
pub const EXHAUSTIVE_NODE_BUDGET: u64 = 10_000_000;

/// Largest capacity [`dp_reference`] will allocate a table for.
pub const DP_CAPACITY_LIMIT: u32 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Item {
    pub name: String,
    pub value: u32,
    pub weight: u32,
}

impl Item {
    pub fn new(name: &str, value: u32, weight: u32) -> Self {
        Item {
            name: name.to_string(),
            value,
            weight,
        }
    }

    /// Compares value/weight densities exactly.
    fn density_cmp(&self, other: &Item) -> Ordering {
        let lhs = u64::from(self.value) * u64::from(other.weight);
        let rhs = u64::from(other.value) * u64::from(self.weight);
        lhs.cmp(&rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackInstance {
    pub items: Vec<Item>,
    pub capacity: u32,
}

impl KnapsackInstance {
    /// Weights at least 1, values positive, names unique.
    pub fn validate(&self) -> Result<(), String> {
        for (idx, item) in self.items.iter().enumerate() {
            if item.weight == 0 {
                return Err(format!("item {} has weight 0", item.name));
            }
            if item.value == 0 {
                return Err(format!("item {} has value 0", item.name));
            }
            if self.items[..idx].iter().any(|o| o.name == item.name) {
                return Err(format!("duplicate item name {}", item.name));
            }
        }
        Ok(())
    }
}

impl Payload for KnapsackInstance {
    fn shrink(&self) -> Vec<Self> {
        shrink_knapsack(self)
    }

    fn render(&self) -> String {
        let items: Vec<String> = self
            .items
            .iter()
            .map(|i| format!("{}:v{}/w{}", i.name, i.value, i.weight))
            .collect();
        format!("capacity={} items=[{}]", self.capacity, items.join(", "))
    }
}

/// A packing: item names with repetition, plus the sums.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KnapsackSolution {
    pub packed: Vec<String>,
    pub cum_value: u64,
    pub cum_weight: u64,
}

impl KnapsackSolution {
    /// Sums match the packed items and the weight fits `instance.capacity`.
    pub fn is_feasible_for(&self, instance: &KnapsackInstance) -> bool {
        let mut value = 0u64;
        let mut weight = 0u64;
        for name in &self.packed {
            let Some(item) = instance.items.iter().find(|i| &i.name == name) else {
                return false;
            };
            value += u64::from(item.value);
            weight += u64::from(item.weight);
        }
        value == self.cum_value
            && weight == self.cum_weight
            && self.cum_weight <= u64::from(instance.capacity)
    }
}

impl Render for KnapsackSolution {
    fn render(&self) -> String {
        format!(
            "value={} weight={} packed=[{}]",
            self.cum_value,
            self.cum_weight,
            self.packed.join(", ")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KnapsackError {
    #[error("exhaustive search exceeded {0} nodes")]
    BudgetExceeded(u64),
    #[error("capacity {0} exceeds the DP table limit")]
    CapacityTooLarge(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KnapsackMutant {
    /// Greedy considers the least dense item first.
    GreedySortAscending,
    /// Exhaustive never takes the include branch.
    ExhaustiveSkipInclude,
    /// Greedy fill admits `cum_weight + weight <= capacity + 1`.
    GreedyCapacityOffByOne,
}

impl KnapsackMutant {
    pub const ALL: [KnapsackMutant; 3] = [
        KnapsackMutant::GreedySortAscending,
        KnapsackMutant::ExhaustiveSkipInclude,
        KnapsackMutant::GreedyCapacityOffByOne,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::GreedySortAscending => "greedy-sort-ascending",
            Self::ExhaustiveSkipInclude => "exhaustive-skip-include",
            Self::GreedyCapacityOffByOne => "greedy-capacity-off-by-one",
        }
    }
}

impl fmt::Display for KnapsackMutant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KnapsackMutant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMutant {
                case_study: "knapsack".into(),
                mutant: s.into(),
            })
    }
}

/// Greedy and exhaustive solvers, possibly carrying one mutant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct KnapsackSolvers {
    pub mutant: Option<KnapsackMutant>,
}

impl KnapsackSolvers {
    pub fn greedy(&self, instance: &KnapsackInstance) -> KnapsackSolution {
        let mut objects: Vec<&Item> = instance.items.iter().collect();
        // stable: equal densities keep their input order
        if self.mutant == Some(KnapsackMutant::GreedySortAscending) {
            objects.sort_by(|a, b| a.density_cmp(b));
        } else {
            objects.sort_by(|a, b| b.density_cmp(a));
        }
        let slack = u64::from(self.mutant == Some(KnapsackMutant::GreedyCapacityOffByOne));
        let capacity = u64::from(instance.capacity) + slack;

        let mut solution = KnapsackSolution::default();
        for item in objects {
            let weight = u64::from(item.weight);
            while solution.cum_weight + weight <= capacity {
                solution.cum_weight += weight;
                solution.cum_value += u64::from(item.value);
                solution.packed.push(item.name.clone());
            }
        }
        solution
    }

    pub fn exhaustive(
        &self,
        instance: &KnapsackInstance,
    ) -> Result<KnapsackSolution, KnapsackError> {
        let mut search = Search {
            items: &instance.items,
            include: self.mutant != Some(KnapsackMutant::ExhaustiveSkipInclude),
            nodes: 0,
            budget: EXHAUSTIVE_NODE_BUDGET,
        };
        let best = search.recurse(i64::from(instance.capacity), 0, None, 0, 0)?;
        let mut packed = Vec::new();
        let mut cursor = best.packed.as_deref();
        while let Some(node) = cursor {
            packed.push(instance.items[node.item].name.clone());
            cursor = node.prev.as_deref();
        }
        packed.reverse();
        Ok(KnapsackSolution {
            packed,
            cum_value: best.cum_value,
            cum_weight: best.cum_weight,
        })
    }
}

/// Persistent list of packed item indices, newest first.
struct Packed {
    item: usize,
    prev: Option<Rc<Packed>>,
}

struct Partial {
    packed: Option<Rc<Packed>>,
    cum_value: u64,
    cum_weight: u64,
}

struct Search<'a> {
    items: &'a [Item],
    include: bool,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    /// For item `index`, explores both "one more copy of it" (same index)
    /// and "no more copies" (next index). The include branch wins only if
    /// strictly better.
    fn recurse(
        &mut self,
        capacity: i64,
        index: usize,
        packed: Option<Rc<Packed>>,
        cum_value: u64,
        cum_weight: u64,
    ) -> Result<Partial, KnapsackError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(KnapsackError::BudgetExceeded(self.budget));
        }
        if capacity <= 0 || index >= self.items.len() {
            return Ok(Partial {
                packed,
                cum_value,
                cum_weight,
            });
        }
        let item = &self.items[index];
        let weight = i64::from(item.weight);
        let included = if self.include && weight <= capacity {
            let with_item = Some(Rc::new(Packed {
                item: index,
                prev: packed.clone(),
            }));
            Some(self.recurse(
                capacity - weight,
                index,
                with_item,
                cum_value + u64::from(item.value),
                cum_weight + u64::from(item.weight),
            )?)
        } else {
            None
        };
        let excluded = self.recurse(capacity, index + 1, packed, cum_value, cum_weight)?;
        match included {
            Some(inc) if inc.cum_value > excluded.cum_value => Ok(inc),
            _ => Ok(excluded),
        }
    }
}

pub fn knapsack_greedy(instance: &KnapsackInstance) -> KnapsackSolution {
    KnapsackSolvers::default().greedy(instance)
}

pub fn knapsack_exhaustive(instance: &KnapsackInstance) -> Result<KnapsackSolution, KnapsackError> {
    KnapsackSolvers::default().exhaustive(instance)
}

pub fn inject_knapsack_mutant(name: &str) -> Result<KnapsackSolvers, Error> {
    Ok(KnapsackSolvers {
        mutant: Some(name.parse()?),
    })
}

/// Unbounded-knapsack table: `best[c] = max(0, max over items with
/// weight <= c of value + best[c - weight])`.
pub fn dp_reference(instance: &KnapsackInstance) -> Result<u64, KnapsackError> {
    if instance.capacity > DP_CAPACITY_LIMIT {
        return Err(KnapsackError::CapacityTooLarge(instance.capacity));
    }
    let capacity = instance.capacity as usize;
    let mut best = vec![0u64; capacity + 1];
    for c in 1..=capacity {
        for item in &instance.items {
            let w = item.weight as usize;
            if w <= c {
                best[c] = best[c].max(u64::from(item.value) + best[c - w]);
            }
        }
    }
    Ok(best[capacity])
}

/// The exhaustive value is at least the greedy value.
pub fn optimality_relation(exhaustive: &KnapsackSolution, greedy: &KnapsackSolution) -> bool {
    exhaustive.cum_value >= greedy.cum_value
}

/// Greedy restricted to its single densest item: as many copies of it as fit.
/// Ties go to the earliest item, as in the greedy sort.
pub fn densest_item_fill(instance: &KnapsackInstance) -> KnapsackSolution {
    let mut densest: Option<&Item> = None;
    for item in &instance.items {
        if densest.is_none_or(|d| item.density_cmp(d) == Ordering::Greater) {
            densest = Some(item);
        }
    }
    let Some(item) = densest else {
        return KnapsackSolution::default();
    };
    let copies = instance.capacity / item.weight;
    KnapsackSolution {
        packed: vec![item.name.clone(); copies as usize],
        cum_value: u64::from(copies) * u64::from(item.value),
        cum_weight: u64::from(copies) * u64::from(item.weight),
    }
}

fn to_failure(e: KnapsackError) -> ExecutionFailure {
    ExecutionFailure::Failed(e.to_string())
}

pub const OPTIMALITY_DESCRIPTOR: TransformationDescriptor = TransformationDescriptor {
    granularity: Granularity::AlgorithmReplaced,
    application: ApplicationMode::AddedAlongside,
    automation: Automation::Manual,
    relation_complete: false,
    false_alarm_possible: false,
};

pub const DP_DESCRIPTOR: TransformationDescriptor = TransformationDescriptor {
    granularity: Granularity::AlgorithmReplaced,
    application: ApplicationMode::AddedAlongside,
    automation: Automation::Manual,
    relation_complete: true,
    false_alarm_possible: false,
};

pub const DOMINANCE_DESCRIPTOR: TransformationDescriptor = TransformationDescriptor {
    granularity: Granularity::FunctionAdded,
    application: ApplicationMode::AddedAlongside,
    automation: Automation::Manual,
    relation_complete: false,
    false_alarm_possible: false,
};

/// Original: greedy. Variant: exhaustive.
pub fn optimality_pair(
    solvers: KnapsackSolvers,
) -> ProgramPair<KnapsackInstance, KnapsackSolution> {
    ProgramPair::fallible(
        move |i: KnapsackInstance| Ok(solvers.greedy(&i)),
        move |i: KnapsackInstance| solvers.exhaustive(&i).map_err(to_failure),
        OPTIMALITY_DESCRIPTOR,
    )
}

/// Exhaustive value must reach the greedy value.
pub fn optimality_intramorphic_relation() -> IntramorphicRelation<KnapsackSolution> {
    IntramorphicRelation::new("exhaustive-at-least-greedy", |greedy, exhaustive| {
        optimality_relation(exhaustive, greedy)
    })
}

/// Optimal value from the exhaustive search and from the DP table.
pub fn dp_pair(solvers: KnapsackSolvers) -> ProgramPair<KnapsackInstance, u64> {
    ProgramPair::fallible(
        move |i: KnapsackInstance| {
            solvers
                .exhaustive(&i)
                .map(|s| s.cum_value)
                .map_err(to_failure)
        },
        |i: KnapsackInstance| dp_reference(&i).map_err(to_failure),
        DP_DESCRIPTOR,
    )
}

/// Original: greedy. Variant: greedy over the densest item alone.
pub fn dominance_pair(solvers: KnapsackSolvers) -> ProgramPair<KnapsackInstance, KnapsackSolution> {
    ProgramPair::new(
        move |i: KnapsackInstance| solvers.greedy(&i),
        |i: KnapsackInstance| densest_item_fill(&i),
        DOMINANCE_DESCRIPTOR,
    )
}

/// The full greedy packing is worth at least its first phase.
pub fn dominance_relation() -> IntramorphicRelation<KnapsackSolution> {
    IntramorphicRelation::new(
        "greedy-at-least-densest-fill",
        |greedy: &KnapsackSolution, densest: &KnapsackSolution| {
            greedy.cum_value >= densest.cum_value
        },
    )
}
