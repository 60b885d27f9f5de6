//! Sorting running example: three ascending sorts, a descending bubble sort
//! added alongside the original, and a catalog of seeded bugs.
//!
//! All sorts are in-place; [`sorted`] is the copying entry point used by
//! oracles so an input is never sorted under another program's feet.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::generators::shrink_array;
use crate::oracle::{
    ApplicationMode, Automation, Granularity, IntramorphicRelation, Payload, ProgramPair,
    TransformationDescriptor,
};

pub type SortFn = fn(&mut [i64]);

/// Runs `sort` on a private copy of `arr`.
pub fn sorted(sort: SortFn, arr: &[i64]) -> Vec<i64> {
    let mut copy = arr.to_vec();
    sort(&mut copy);
    copy
}

#[derive(Clone, Copy)]
enum Swap {
    Correct,
    /// `arr[j], arr[j+1] = arr[j+1], arr[i]`
    OuterIndex,
}

fn bubble_kernel(arr: &mut [i64], out_of_order: fn(i64, i64) -> bool, swap: Swap) {
    let length = arr.len();
    for i in 0..length {
        for j in 0..length - i - 1 {
            if out_of_order(arr[j], arr[j + 1]) {
                let (a, b) = match swap {
                    Swap::Correct => (arr[j + 1], arr[j]),
                    Swap::OuterIndex => (arr[j + 1], arr[i]),
                };
                arr[j] = a;
                arr[j + 1] = b;
            }
        }
    }
}

fn greater(a: i64, b: i64) -> bool {
    a > b
}

fn less(a: i64, b: i64) -> bool {
    a < b
}

pub fn bubble_sort(arr: &mut [i64]) {
    bubble_kernel(arr, greater, Swap::Correct);
}

/// Descending bubble sort: the original with its comparison flipped.
pub fn bubble_sort_reverse(arr: &mut [i64]) {
    bubble_kernel(arr, less, Swap::Correct);
}

pub fn insertion_sort(arr: &mut [i64]) {
    for i in 1..arr.len() {
        let key = arr[i];
        let mut j = i;
        while j > 0 && arr[j - 1] > key {
            arr[j] = arr[j - 1];
            j -= 1;
        }
        arr[j] = key;
    }
}

pub fn merge_sort(arr: &mut [i64]) {
    if arr.len() <= 1 {
        return;
    }
    let mid = arr.len() / 2;
    merge_sort(&mut arr[..mid]);
    merge_sort(&mut arr[mid..]);
    let mut merged = Vec::with_capacity(arr.len());
    let (left, right) = arr.split_at(mid);
    let (mut l, mut r) = (0, 0);
    while l < left.len() && r < right.len() {
        if left[l] <= right[r] {
            merged.push(left[l]);
            l += 1;
        } else {
            merged.push(right[r]);
            r += 1;
        }
    }
    merged.extend_from_slice(&left[l..]);
    merged.extend_from_slice(&right[r..]);
    arr.copy_from_slice(&merged);
}

fn bubble_sort_swap_index_i(arr: &mut [i64]) {
    bubble_kernel(arr, greater, Swap::OuterIndex);
}

fn bubble_sort_reverse_swap_index_i(arr: &mut [i64]) {
    bubble_kernel(arr, less, Swap::OuterIndex);
}

fn bubble_sort_reverse_unflipped(arr: &mut [i64]) {
    bubble_kernel(arr, greater, Swap::Correct);
}

/// `true` iff reversing `sorted` yields `reverse_sorted`.
pub fn reverse_relation(sorted: &[i64], reverse_sorted: &[i64]) -> bool {
    sorted.len() == reverse_sorted.len() && sorted.iter().rev().eq(reverse_sorted.iter())
}

pub fn reverse_intramorphic_relation() -> IntramorphicRelation<Vec<i64>> {
    IntramorphicRelation::new("reverse", |o: &Vec<i64>, v: &Vec<i64>| {
        reverse_relation(o, v)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SortingMutant {
    /// Swap writes `arr[i]` instead of `arr[j]` in the ascending bubble sort.
    SwapIndexI,
    /// Both bubble sorts carry the index bug; the descending one differs only
    /// by its comparison.
    ComparisonFlipReverse,
    /// Descending variant forgets to flip the comparison.
    SortAscendingInReverse,
}

impl SortingMutant {
    pub const ALL: [SortingMutant; 3] = [
        SortingMutant::SwapIndexI,
        SortingMutant::ComparisonFlipReverse,
        SortingMutant::SortAscendingInReverse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::SwapIndexI => "swap-index-i",
            Self::ComparisonFlipReverse => "comparison-flip-reverse",
            Self::SortAscendingInReverse => "sort-ascending-in-reverse",
        }
    }
}

impl fmt::Display for SortingMutant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SortingMutant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMutant {
                case_study: "sorting".into(),
                mutant: s.into(),
            })
    }
}

/// The sorting functions of the case study, possibly with one mutant applied.
#[derive(Debug, Clone, Copy)]
pub struct SortSuite {
    pub bubble: SortFn,
    pub bubble_reverse: SortFn,
    pub insertion: SortFn,
    pub merge: SortFn,
}

impl SortSuite {
    pub fn correct() -> Self {
        SortSuite {
            bubble: bubble_sort,
            bubble_reverse: bubble_sort_reverse,
            insertion: insertion_sort,
            merge: merge_sort,
        }
    }

    pub fn with_mutant(mutant: Option<SortingMutant>) -> Self {
        let mut suite = Self::correct();
        match mutant {
            None => {}
            Some(SortingMutant::SwapIndexI) => suite.bubble = bubble_sort_swap_index_i,
            Some(SortingMutant::ComparisonFlipReverse) => {
                suite.bubble = bubble_sort_swap_index_i;
                suite.bubble_reverse = bubble_sort_reverse_swap_index_i;
            }
            Some(SortingMutant::SortAscendingInReverse) => {
                suite.bubble_reverse = bubble_sort_reverse_unflipped;
            }
        }
        suite
    }

    /// Algorithms compared by the differential oracle, in order.
    pub fn ascending(&self) -> [SortFn; 3] {
        [self.bubble, self.merge, self.insertion]
    }
}

/// The case-study suite with the named mutant injected.
pub fn inject_sorting_mutant(name: &str) -> Result<SortSuite, Error> {
    Ok(SortSuite::with_mutant(Some(name.parse()?)))
}

/// Integer array input for the sorting campaigns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortInput {
    pub elements: Vec<i64>,
}

impl SortInput {
    pub fn new(elements: Vec<i64>) -> Self {
        SortInput { elements }
    }
}

impl Payload for SortInput {
    fn shrink(&self) -> Vec<Self> {
        shrink_array(&self.elements)
            .into_iter()
            .map(SortInput::new)
            .collect()
    }

    fn render(&self) -> String {
        format!("{:?}", self.elements)
    }
}

pub const REVERSE_DESCRIPTOR: TransformationDescriptor = TransformationDescriptor {
    granularity: Granularity::FunctionAdded,
    application: ApplicationMode::AddedAlongside,
    automation: Automation::Manual,
    relation_complete: true,
    false_alarm_possible: false,
};

pub const REPLACED_SORT_DESCRIPTOR: TransformationDescriptor = TransformationDescriptor {
    granularity: Granularity::AlgorithmReplaced,
    application: ApplicationMode::AddedAlongside,
    automation: Automation::Manual,
    relation_complete: true,
    false_alarm_possible: false,
};

/// `bubble_sort` paired with the added `bubble_sort_reverse`.
pub fn reverse_pair(suite: SortSuite) -> ProgramPair<SortInput, Vec<i64>> {
    ProgramPair::new(
        move |i: SortInput| sorted(suite.bubble, &i.elements),
        move |i: SortInput| sorted(suite.bubble_reverse, &i.elements),
        REVERSE_DESCRIPTOR,
    )
}

/// `bubble_sort` with the sorting component replaced by merge sort.
pub fn merge_replacement_pair(suite: SortSuite) -> ProgramPair<SortInput, Vec<i64>> {
    ProgramPair::new(
        move |i: SortInput| sorted(suite.bubble, &i.elements),
        move |i: SortInput| sorted(suite.merge, &i.elements),
        REPLACED_SORT_DESCRIPTOR,
    )
}
