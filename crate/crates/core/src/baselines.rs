//! Black-box oracles used as baselines: a hand-written unit test, differential
//! testing across sorting algorithms, and the element-removal metamorphic
//! relation.
//!
//! Outcomes reuse [`RelationOutcome`]: `original` holds the expected value
//! (or the reference algorithm's output) and `variant` the observed one.

use crate::cases::sorting::{sorted, SortFn};
use crate::error::{Error, Result};
use crate::exec::{run_budgeted, Budget, ExecutionFailure};
use crate::generators::{shrink_array, SeededSource};
use crate::oracle::{Payload, RelationOutcome};

/// A unit test case: input and expected sorted output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitCase {
    pub input: Vec<i64>,
    pub expected: Vec<i64>,
}

impl UnitCase {
    /// Builds a case whose expectation is computed by the standard library.
    pub fn sorting(input: Vec<i64>) -> Self {
        let mut expected = input.clone();
        expected.sort_unstable();
        UnitCase { input, expected }
    }
}

impl Payload for UnitCase {
    fn render(&self) -> String {
        format!("{:?} -> {:?}", self.input, self.expected)
    }
}

/// The hand-written regression suite; its first case is `[3, 1, 2]`.
pub fn unit_suite() -> Vec<UnitCase> {
    [
        vec![3, 1, 2],
        vec![],
        vec![7],
        vec![1, 2, 3],
        vec![5, 5, 1],
        vec![2, 1],
        vec![9, 0, 9, 0],
    ]
    .into_iter()
    .map(UnitCase::sorting)
    .collect()
}

/// Picks a case from [`unit_suite`].
pub fn pick_unit_case(src: &mut SeededSource) -> UnitCase {
    let mut suite = unit_suite();
    let idx = src.below(suite.len());
    suite.swap_remove(idx)
}

fn run_sort(sort: SortFn, arr: &[i64], budget: Budget) -> Result<Vec<i64>, ExecutionFailure> {
    let copy = arr.to_vec();
    run_budgeted(budget, move || Ok(sorted(sort, &copy)))
}

/// Holds iff `sort` reproduces the expected output.
pub fn unit_oracle(sort: SortFn, case: &UnitCase, budget: Budget) -> RelationOutcome<Vec<i64>> {
    match run_sort(sort, &case.input, budget) {
        Ok(actual) => {
            let passed = actual == case.expected;
            RelationOutcome::judge(passed, case.expected.clone(), actual)
        }
        Err(e) => RelationOutcome::from_failure("sort", e),
    }
}

/// Holds iff every algorithm agrees with the first. On disagreement the
/// first differing output is reported as the variant.
pub fn differential_oracle(
    algorithms: &[SortFn],
    arr: &[i64],
    budget: Budget,
) -> Result<RelationOutcome<Vec<i64>>> {
    if algorithms.is_empty() {
        return Err(Error::InvalidConfig(
            "differential oracle needs at least one algorithm".into(),
        ));
    }
    let mut outputs = Vec::with_capacity(algorithms.len());
    for (idx, alg) in algorithms.iter().enumerate() {
        match run_sort(*alg, arr, budget) {
            Ok(o) => outputs.push(o),
            Err(e) => {
                return Ok(RelationOutcome::from_failure(
                    &format!("algorithm #{idx}"),
                    e,
                ))
            }
        }
    }
    let reference = outputs[0].clone();
    let other = outputs
        .iter()
        .find(|o| **o != reference)
        .unwrap_or_else(|| outputs.last().expect("non-empty"))
        .clone();
    let passed = other == reference;
    Ok(RelationOutcome::judge(passed, reference, other))
}

/// Input of the removal relation: the array and the raw draw that selects
/// which sorted element is removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemovalInput {
    pub elements: Vec<i64>,
    pub pick: u64,
}

impl Payload for RemovalInput {
    /// Shrinks the array and keeps the pick.
    fn shrink(&self) -> Vec<Self> {
        shrink_array(&self.elements)
            .into_iter()
            .map(|elements| RemovalInput {
                elements,
                pick: self.pick,
            })
            .collect()
    }

    fn render(&self) -> String {
        format!("{:?} pick={}", self.elements, self.pick)
    }
}

fn remove_first(arr: &mut Vec<i64>, element: i64) -> bool {
    match arr.iter().position(|&x| x == element) {
        Some(pos) => {
            arr.remove(pos);
            true
        }
        None => false,
    }
}

/// Sorts `arr`, removes the first occurrence of `element` from both the
/// input and the sorted output, and checks that sorting the smaller input
/// gives the smaller output. `original` is the expected smaller output.
pub fn metamorphic_removal_with_element(
    sort: SortFn,
    arr: &[i64],
    sorted_full: Vec<i64>,
    element: i64,
    budget: Budget,
) -> RelationOutcome<Vec<i64>> {
    let mut expected = sorted_full;
    remove_first(&mut expected, element);
    let mut smaller = arr.to_vec();
    if !remove_first(&mut smaller, element) {
        // the sorted output invented an element
        return RelationOutcome::Violated {
            original: expected,
            variant: smaller,
        };
    }
    match run_sort(sort, &smaller, budget) {
        Ok(actual) => {
            let passed = actual == expected;
            RelationOutcome::judge(passed, expected, actual)
        }
        Err(e) => RelationOutcome::from_failure("follow-up sort", e),
    }
}

/// Removal relation with the element chosen as `sorted(arr)[pick % len]`.
pub fn metamorphic_removal_oracle(
    sort: SortFn,
    arr: &[i64],
    pick: u64,
    budget: Budget,
) -> Result<RelationOutcome<Vec<i64>>> {
    if arr.is_empty() {
        return Err(Error::InvalidConfig(
            "removal relation needs a non-empty array".into(),
        ));
    }
    let sorted_full = match run_sort(sort, arr, budget) {
        Ok(o) => o,
        Err(e) => return Ok(RelationOutcome::from_failure("source sort", e)),
    };
    if sorted_full.is_empty() {
        return Ok(RelationOutcome::Violated {
            original: arr.to_vec(),
            variant: sorted_full,
        });
    }
    let element = sorted_full[(pick % sorted_full.len() as u64) as usize];
    Ok(metamorphic_removal_with_element(
        sort,
        arr,
        sorted_full,
        element,
        budget,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cases::sorting::{bubble_sort, inject_sorting_mutant, insertion_sort, merge_sort};

    fn buggy_bubble() -> SortFn {
        inject_sorting_mutant("swap-index-i").unwrap().bubble
    }

    #[test]
    fn unit_oracle_examples() {
        let b = Budget::default();
        let case = UnitCase::sorting(vec![3, 1, 2]);
        assert_eq!(case.expected, vec![1, 2, 3]);
        assert!(unit_oracle(bubble_sort, &case, b).holds());
        assert_eq!(
            unit_oracle(buggy_bubble(), &case, b),
            RelationOutcome::Violated {
                original: vec![1, 2, 3],
                variant: vec![1, 2, 1]
            }
        );
        assert!(unit_oracle(buggy_bubble(), &UnitCase::sorting(vec![]), b).holds());
    }

    #[test]
    fn unit_suite_starts_with_three_one_two() {
        assert_eq!(unit_suite()[0].input, vec![3, 1, 2]);
        for case in unit_suite() {
            assert!(unit_oracle(merge_sort, &case, Budget::default()).holds());
        }
    }

    #[test]
    fn differential_examples() {
        let b = Budget::default();
        let algs: [SortFn; 3] = [bubble_sort, merge_sort, insertion_sort];
        assert!(differential_oracle(&algs, &[3, 1, 2], b).unwrap().holds());
        assert!(differential_oracle(&[buggy_bubble()], &[3, 1, 2], b)
            .unwrap()
            .holds());
        assert_eq!(
            differential_oracle(&[buggy_bubble(), merge_sort], &[3, 1, 2], b).unwrap(),
            RelationOutcome::Violated {
                original: vec![1, 2, 1],
                variant: vec![1, 2, 3]
            }
        );
        assert!(differential_oracle(&[], &[1], b).is_err());
    }

    #[test]
    fn removal_examples() {
        let b = Budget::default();
        let out = metamorphic_removal_with_element(bubble_sort, &[3, 1, 2], vec![1, 2, 3], 2, b);
        assert_eq!(
            out,
            RelationOutcome::Holds {
                original: vec![1, 3],
                variant: vec![1, 3]
            }
        );
        let bug = buggy_bubble();
        let out = metamorphic_removal_with_element(bug, &[3, 1, 2], sorted(bug, &[3, 1, 2]), 2, b);
        assert_eq!(
            out,
            RelationOutcome::Violated {
                original: vec![1, 1],
                variant: vec![1, 3]
            }
        );
        let out = metamorphic_removal_oracle(bubble_sort, &[5], 0, b).unwrap();
        assert_eq!(
            out,
            RelationOutcome::Holds {
                original: vec![],
                variant: vec![]
            }
        );
        assert!(metamorphic_removal_oracle(bubble_sort, &[], 0, b).is_err());
    }

    #[test]
    fn removal_picks_from_the_sorted_output() {
        let b = Budget::default();
        // sorted [1, 2, 3]; pick 1 → e = 2
        let out = metamorphic_removal_oracle(bubble_sort, &[3, 1, 2], 1, b).unwrap();
        assert_eq!(out.outputs().unwrap().0, &vec![1, 3]);
        // buggy output [1, 2, 1]; pick 1 → e = 2
        let out = metamorphic_removal_oracle(buggy_bubble(), &[3, 1, 2], 1, b).unwrap();
        assert!(out.is_violated());
    }

    #[test]
    fn removal_with_duplicates_drops_one_occurrence() {
        let b = Budget::default();
        for pick in 0..4 {
            let out = metamorphic_removal_oracle(merge_sort, &[4, 4, 1, 4], pick, b).unwrap();
            assert!(out.holds());
            let (expected, actual) = out.outputs().unwrap();
            assert_eq!(expected.len(), 3);
            assert_eq!(actual.len(), 3);
        }
    }
}
