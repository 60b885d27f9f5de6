//! Program pairs, intramorphic relations and their evaluation.
//!
//! A program `P` is viewed as a composition of components. Replacing one
//! component yields a variant `P'`; the developer states how that local change
//! shows up in the output, and [`evaluate_pair`] checks the stated relation on
//! `P(I)` and `P'(I)` for a concrete input.

use std::fmt::{self, Debug};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exec::{run_budgeted, Budget, ExecutionFailure};

/// Where an input came from: the campaign seed and the 0-based iteration
/// index. Regenerating with the same pair yields the same payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Provenance {
    pub seed: u64,
    pub iteration: u64,
}

/// Behaviour every case-study input type provides to the harness.
pub trait Payload: Clone + Debug + Send + Sync + 'static {
    /// Strictly simpler candidates, most aggressive first. Empty when minimal.
    fn shrink(&self) -> Vec<Self> {
        Vec::new()
    }

    /// The input for repetition `trial` of a statistical evaluation. Inputs
    /// that carry no random source are returned unchanged. `for_trial(0)` of
    /// a freshly generated input must equal the input itself.
    fn for_trial(&self, _trial: u32) -> Self {
        self.clone()
    }

    /// Human-readable rendering used in reports.
    fn render(&self) -> String {
        format!("{self:?}")
    }
}

/// Renders outputs for reports.
pub trait Render {
    fn render(&self) -> String;

    /// Scalar summary, for outputs that are plain numbers.
    fn scalar(&self) -> Option<f64> {
        None
    }
}

impl Render for Vec<i64> {
    fn render(&self) -> String {
        format!("{self:?}")
    }
}

impl Render for u64 {
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Render for f64 {
    fn render(&self) -> String {
        format!("{self}")
    }

    fn scalar(&self) -> Option<f64> {
        Some(*self)
    }
}

impl Render for Vec<String> {
    fn render(&self) -> String {
        self.iter()
            .map(|s| format!("{s:?}"))
            .collect::<Vec<_>>()
            .join(" | ")
    }
}

/// Output type bound shared by all programs under test.
pub trait Output: Clone + Debug + Render + Send + Sync + 'static {}
impl<T: Clone + Debug + Render + Send + Sync + 'static> Output for T {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputCase<T> {
    pub payload: T,
    pub provenance: Provenance,
}

impl<T: Payload> InputCase<T> {
    pub fn new(payload: T, provenance: Provenance) -> Self {
        InputCase {
            payload,
            provenance,
        }
    }

    /// An input built by hand rather than drawn from a generator.
    pub fn fixed(payload: T) -> Self {
        InputCase::new(payload, Provenance::default())
    }

    pub fn with_payload(&self, payload: T) -> Self {
        InputCase::new(payload, self.provenance)
    }
}

/// How large the replaced component is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Granularity {
    Operator,
    FunctionAdded,
    ParameterAdded,
    AlgorithmReplaced,
}

/// Whether the variant lives next to the original or modifies it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ApplicationMode {
    AddedAlongside,
    InPlaceModified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Automation {
    Manual,
    Mechanical,
}

/// Classification of an intramorphic transformation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TransformationDescriptor {
    pub granularity: Granularity,
    pub application: ApplicationMode,
    pub automation: Automation,
    /// The relation determines the expected variant output for every input.
    pub relation_complete: bool,
    pub false_alarm_possible: bool,
}

impl fmt::Display for TransformationDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let granularity = match self.granularity {
            Granularity::Operator => "operator",
            Granularity::FunctionAdded => "function-added",
            Granularity::ParameterAdded => "parameter-added",
            Granularity::AlgorithmReplaced => "algorithm-replaced",
        };
        let application = match self.application {
            ApplicationMode::AddedAlongside => "added-alongside",
            ApplicationMode::InPlaceModified => "in-place-modified",
        };
        let automation = match self.automation {
            Automation::Manual => "manual",
            Automation::Mechanical => "mechanical",
        };
        write!(
            f,
            "granularity={granularity} application={application} automation={automation} \
             complete={} false-alarms={}",
            self.relation_complete, self.false_alarm_possible
        )
    }
}

type Program<I, O> = Arc<dyn Fn(I) -> Result<O, ExecutionFailure> + Send + Sync>;

/// An original program and its component-replaced variant over a shared input.
pub struct ProgramPair<I, O> {
    original: Program<I, O>,
    variant: Program<I, O>,
    pub descriptor: TransformationDescriptor,
}

impl<I, O> Clone for ProgramPair<I, O> {
    fn clone(&self) -> Self {
        ProgramPair {
            original: Arc::clone(&self.original),
            variant: Arc::clone(&self.variant),
            descriptor: self.descriptor,
        }
    }
}

impl<I: Payload, O: Output> ProgramPair<I, O> {
    pub fn new<P, Q>(original: P, variant: Q, descriptor: TransformationDescriptor) -> Self
    where
        P: Fn(I) -> O + Send + Sync + 'static,
        Q: Fn(I) -> O + Send + Sync + 'static,
    {
        ProgramPair {
            original: Arc::new(move |i| Ok(original(i))),
            variant: Arc::new(move |i| Ok(variant(i))),
            descriptor,
        }
    }

    /// A pair whose programs may report their own failures.
    pub fn fallible<P, Q>(original: P, variant: Q, descriptor: TransformationDescriptor) -> Self
    where
        P: Fn(I) -> Result<O, ExecutionFailure> + Send + Sync + 'static,
        Q: Fn(I) -> Result<O, ExecutionFailure> + Send + Sync + 'static,
    {
        ProgramPair {
            original: Arc::new(original),
            variant: Arc::new(variant),
            descriptor,
        }
    }

    pub fn run_original(&self, input: &I, budget: Budget) -> Result<O, ExecutionFailure> {
        run_program(&self.original, input, budget)
    }

    pub fn run_variant(&self, input: &I, budget: Budget) -> Result<O, ExecutionFailure> {
        run_program(&self.variant, input, budget)
    }
}

fn run_program<I: Payload, O: Output>(
    program: &Program<I, O>,
    input: &I,
    budget: Budget,
) -> Result<O, ExecutionFailure> {
    let program = Arc::clone(program);
    let copy = input.clone();
    run_budgeted(budget, move || program(copy))
}

/// Odd, positive number of repetitions for median aggregation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Repetitions(u32);

impl Repetitions {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 || k.is_multiple_of(2) {
            return Err(Error::InvalidRepetitions(k));
        }
        Ok(Repetitions(k))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

/// Repeat each side `repetitions` times and compare the per-side medians.
pub struct StatisticalConfig<O> {
    pub repetitions: Repetitions,
    pub(crate) median: fn(Vec<O>) -> O,
}

impl<O> Clone for StatisticalConfig<O> {
    fn clone(&self) -> Self {
        *self
    }
}
impl<O> Copy for StatisticalConfig<O> {}

impl<O: PartialOrd> StatisticalConfig<O> {
    pub fn median(repetitions: Repetitions) -> Self {
        StatisticalConfig {
            repetitions,
            median: median_of::<O>,
        }
    }
}

/// Middle element after sorting; `values` has odd length.
pub fn median_of<O: PartialOrd>(mut values: Vec<O>) -> O {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let mid = values.len() / 2;
    values.swap_remove(mid)
}

type Check<O> = Arc<dyn Fn(&O, &O) -> bool + Send + Sync>;

/// Expected relationship between `P(I)` and `P'(I)`.
pub struct IntramorphicRelation<O> {
    name: &'static str,
    check: Check<O>,
    pub statistical: Option<StatisticalConfig<O>>,
}

impl<O> Clone for IntramorphicRelation<O> {
    fn clone(&self) -> Self {
        IntramorphicRelation {
            name: self.name,
            check: Arc::clone(&self.check),
            statistical: self.statistical,
        }
    }
}

impl<O: Output> IntramorphicRelation<O> {
    pub fn new(name: &'static str, check: impl Fn(&O, &O) -> bool + Send + Sync + 'static) -> Self {
        IntramorphicRelation {
            name,
            check: Arc::new(check),
            statistical: None,
        }
    }

    pub fn with_statistics(mut self, config: StatisticalConfig<O>) -> Self {
        self.statistical = Some(config);
        self
    }

    /// Replaces the repetition count of a statistical relation.
    pub fn with_repetitions(mut self, repetitions: Repetitions) -> Result<Self> {
        match self.statistical.as_mut() {
            Some(cfg) => {
                cfg.repetitions = repetitions;
                Ok(self)
            }
            None => Err(Error::NotStatistical(self.name.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn holds(&self, original: &O, variant: &O) -> bool {
        (self.check)(original, variant)
    }
}

/// The special case where the variant must reproduce the original output
/// exactly, e.g. one sorting algorithm swapped for another.
pub fn equivalence_relation<O: Output + PartialEq>() -> IntramorphicRelation<O> {
    IntramorphicRelation::new("equivalence", |a: &O, b: &O| a == b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Holds,
    Violated,
    ExecutionError,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RelationOutcome<O> {
    Holds { original: O, variant: O },
    Violated { original: O, variant: O },
    ExecutionError { detail: String },
}

impl<O> RelationOutcome<O> {
    pub fn status(&self) -> Status {
        match self {
            Self::Holds { .. } => Status::Holds,
            Self::Violated { .. } => Status::Violated,
            Self::ExecutionError { .. } => Status::ExecutionError,
        }
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, Self::Violated { .. })
    }

    pub fn holds(&self) -> bool {
        matches!(self, Self::Holds { .. })
    }

    /// `(original, variant)` for outcomes that carry outputs.
    pub fn outputs(&self) -> Option<(&O, &O)> {
        match self {
            Self::Holds { original, variant } | Self::Violated { original, variant } => {
                Some((original, variant))
            }
            Self::ExecutionError { .. } => None,
        }
    }

    pub fn judge(passed: bool, original: O, variant: O) -> Self {
        if passed {
            Self::Holds { original, variant }
        } else {
            Self::Violated { original, variant }
        }
    }

    pub fn from_failure(side: &str, failure: ExecutionFailure) -> Self {
        Self::ExecutionError {
            detail: format!("{side} {failure}"),
        }
    }
}

/// Runs original and variant on independent copies of `input` and checks
/// `relation`. Statistical relations are evaluated through median
/// aggregation, see [`statistical_evaluate`].
pub fn evaluate_pair<I: Payload, O: Output>(
    pair: &ProgramPair<I, O>,
    relation: &IntramorphicRelation<O>,
    input: &InputCase<I>,
    budget: Budget,
) -> RelationOutcome<O> {
    if let Some(cfg) = relation.statistical {
        return aggregate(pair, relation, input, cfg, budget);
    }
    let original = match pair.run_original(&input.payload, budget) {
        Ok(o) => o,
        Err(e) => return RelationOutcome::from_failure("original", e),
    };
    let variant = match pair.run_variant(&input.payload, budget) {
        Ok(o) => o,
        Err(e) => return RelationOutcome::from_failure("variant", e),
    };
    let passed = relation.holds(&original, &variant);
    RelationOutcome::judge(passed, original, variant)
}

/// Runs each side `k` times, each repetition on the input's trial-`t`
/// derivation, and checks the relation on the two per-side medians.
///
/// `k` must be odd and positive. With `k == 1` the result equals a plain
/// evaluation of the (non-statistical) check.
pub fn statistical_evaluate<I: Payload, O: Output + PartialOrd>(
    pair: &ProgramPair<I, O>,
    relation: &IntramorphicRelation<O>,
    input: &InputCase<I>,
    k: u32,
    budget: Budget,
) -> Result<RelationOutcome<O>> {
    let repetitions = Repetitions::new(k)?;
    let cfg = match relation.statistical {
        Some(cfg) => StatisticalConfig { repetitions, ..cfg },
        None => StatisticalConfig::median(repetitions),
    };
    Ok(aggregate(pair, relation, input, cfg, budget))
}

fn aggregate<I: Payload, O: Output>(
    pair: &ProgramPair<I, O>,
    relation: &IntramorphicRelation<O>,
    input: &InputCase<I>,
    cfg: StatisticalConfig<O>,
    budget: Budget,
) -> RelationOutcome<O> {
    let k = cfg.repetitions.get();
    let mut originals = Vec::with_capacity(k as usize);
    let mut variants = Vec::with_capacity(k as usize);
    for trial in 0..k {
        let payload = input.payload.for_trial(trial);
        match pair.run_original(&payload, budget) {
            Ok(o) => originals.push(o),
            Err(e) => return RelationOutcome::from_failure("original", e),
        }
        match pair.run_variant(&payload, budget) {
            Ok(o) => variants.push(o),
            Err(e) => return RelationOutcome::from_failure("variant", e),
        }
    }
    let original = (cfg.median)(originals);
    let variant = (cfg.median)(variants);
    let passed = relation.holds(&original, &variant);
    RelationOutcome::judge(passed, original, variant)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DESC: TransformationDescriptor = TransformationDescriptor {
        granularity: Granularity::FunctionAdded,
        application: ApplicationMode::AddedAlongside,
        automation: Automation::Manual,
        relation_complete: true,
        false_alarm_possible: false,
    };

    impl Payload for u32 {}

    #[test]
    fn repetitions_reject_zero_and_even() {
        assert!(Repetitions::new(1).is_ok());
        assert!(Repetitions::new(5).is_ok());
        assert_eq!(Repetitions::new(0), Err(Error::InvalidRepetitions(0)));
        assert_eq!(Repetitions::new(4), Err(Error::InvalidRepetitions(4)));
    }

    #[test]
    fn median_picks_middle() {
        assert_eq!(median_of(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median_of(vec![9.5]), 9.5);
        assert_eq!(median_of(vec![5, 1, 4, 2, 3]), 3);
    }

    #[test]
    fn reflexive_pair_holds() {
        let pair = ProgramPair::new(|x: u32| x as f64 * 2.0, |x: u32| x as f64 * 2.0, DESC);
        let rel = IntramorphicRelation::new("eq", |a: &f64, b: &f64| a == b);
        for x in [0, 1, 17, u32::MAX] {
            let out = evaluate_pair(&pair, &rel, &InputCase::fixed(x), Budget::default());
            assert!(out.holds());
        }
    }

    #[test]
    fn panicking_variant_is_an_execution_error() {
        let pair = ProgramPair::new(
            |x: u32| vec![x as i64],
            |_: u32| -> Vec<i64> { panic!("variant crashed") },
            DESC,
        );
        let out = evaluate_pair(
            &pair,
            &equivalence_relation(),
            &InputCase::fixed(3),
            Budget::default(),
        );
        assert_eq!(out.status(), Status::ExecutionError);
        match out {
            RelationOutcome::ExecutionError { detail } => {
                assert!(detail.contains("variant crashed"))
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn overriding_repetitions_needs_statistical_relation() {
        let rel = equivalence_relation::<Vec<i64>>();
        assert!(matches!(
            rel.with_repetitions(Repetitions::new(3).unwrap()),
            Err(Error::NotStatistical(_))
        ));
    }

    #[test]
    fn descriptor_renders_all_fields() {
        let s = DESC.to_string();
        for field in [
            "granularity=",
            "application=",
            "automation=",
            "complete=",
            "false-alarms=",
        ] {
            assert!(s.contains(field), "{s}");
        }
    }
}
