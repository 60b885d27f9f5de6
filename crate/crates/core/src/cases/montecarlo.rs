//! Monte Carlo estimation of pi with the sample count as an added parameter.
//!
//! The relation compares two instantiations of that parameter: the estimate
//! from few samples should be at least as far from pi as the estimate from
//! many samples. A single trial can violate this by chance, so each side is
//! repeated `k` times and the medians of the absolute errors are compared.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::Budget;
use crate::generators::{SeededSource, UnitSource};
use crate::oracle::{
    evaluate_pair, ApplicationMode, Automation, Granularity, InputCase, IntramorphicRelation,
    Payload, ProgramPair, RelationOutcome, Repetitions, StatisticalConfig,
    TransformationDescriptor,
};

/// The two sample counts compared by the convergence relation, and how many
/// trials feed each side's median.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleBudgetPair {
    pub n_small: u64,
    pub n_large: u64,
    pub repetitions: u32,
}

impl Default for SampleBudgetPair {
    fn default() -> Self {
        SampleBudgetPair {
            n_small: 10,
            n_large: 100_000,
            repetitions: 5,
        }
    }
}

impl SampleBudgetPair {
    pub fn validate(&self) -> Result<()> {
        if self.n_small == 0 || self.n_large == 0 {
            return Err(Error::InvalidConfig(
                "sample counts must be positive".into(),
            ));
        }
        Repetitions::new(self.repetitions)?;
        Ok(())
    }

    /// [`validate`](Self::validate) plus the strict ordering the campaign
    /// relies on.
    pub fn validate_strict(&self) -> Result<()> {
        self.validate()?;
        if self.n_small >= self.n_large {
            return Err(Error::InvalidConfig(format!(
                "n_small ({}) must be below n_large ({})",
                self.n_small, self.n_large
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonteCarloMutant {
    /// Returns `2 * hits / n`.
    WrongScale,
    /// Counts `x² + y² < 1`. The boundary has measure zero, so no relation
    /// over estimates can tell.
    BoundaryStrict,
    /// Tests `x² <= 1` only; every sample hits.
    OneCoordinate,
}

impl MonteCarloMutant {
    pub const ALL: [MonteCarloMutant; 3] = [
        MonteCarloMutant::WrongScale,
        MonteCarloMutant::BoundaryStrict,
        MonteCarloMutant::OneCoordinate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::WrongScale => "wrong-scale",
            Self::BoundaryStrict => "boundary-strict",
            Self::OneCoordinate => "one-coordinate",
        }
    }
}

impl fmt::Display for MonteCarloMutant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MonteCarloMutant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMutant {
                case_study: "montecarlo".into(),
                mutant: s.into(),
            })
    }
}

/// A pi estimator, correct or carrying one mutant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PiEstimator {
    pub mutant: Option<MonteCarloMutant>,
}

impl PiEstimator {
    /// Number of samples out of `n` that the estimator counts as inside.
    pub fn hits<S: UnitSource>(&self, n: u64, src: &mut S) -> u64 {
        let mut inside = 0;
        for _ in 0..n {
            let x = src.next_unit();
            let y = src.next_unit();
            let hit = match self.mutant {
                Some(MonteCarloMutant::BoundaryStrict) => x * x + y * y < 1.0,
                Some(MonteCarloMutant::OneCoordinate) => x * x <= 1.0,
                _ => x * x + y * y <= 1.0,
            };
            if hit {
                inside += 1;
            }
        }
        inside
    }

    pub fn estimate<S: UnitSource>(&self, n: u64, src: &mut S) -> f64 {
        let scale = match self.mutant {
            Some(MonteCarloMutant::WrongScale) => 2.0,
            _ => 4.0,
        };
        scale * self.hits(n, src) as f64 / n as f64
    }
}

pub fn inject_montecarlo_mutant(name: &str) -> Result<PiEstimator> {
    Ok(PiEstimator {
        mutant: Some(name.parse()?),
    })
}

/// `4 * inside / n` over `n` uniform points of the unit square.
///
/// # Panics
///
/// When `n == 0`.
pub fn pi_approximation<S: UnitSource>(n: u64, src: &mut S) -> f64 {
    assert!(n >= 1, "pi_approximation needs at least one sample");
    PiEstimator::default().estimate(n, src)
}

/// Input of one convergence check: the budgets and the seed from which each
/// trial's random stream is derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvergenceInput {
    pub budgets: SampleBudgetPair,
    pub seed: u64,
    pub trial: u32,
}

impl ConvergenceInput {
    pub fn new(budgets: SampleBudgetPair, seed: u64) -> Self {
        ConvergenceInput {
            budgets,
            seed,
            trial: 0,
        }
    }

    /// The random source of this trial. Both sides of a trial draw from the
    /// same stream.
    pub fn source(&self) -> impl UnitSource {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(u64::from(self.trial));
        TrialSource(rng)
    }
}

struct TrialSource(ChaCha8Rng);

impl UnitSource for TrialSource {
    #[inline]
    fn next_unit(&mut self) -> f64 {
        rand::Rng::gen::<f64>(&mut self.0)
    }
}

impl Payload for ConvergenceInput {
    fn for_trial(&self, trial: u32) -> Self {
        ConvergenceInput { trial, ..*self }
    }

    fn render(&self) -> String {
        format!(
            "n_small={} n_large={} k={} seed={}",
            self.budgets.n_small, self.budgets.n_large, self.budgets.repetitions, self.seed
        )
    }
}

pub fn generate_convergence_input(
    src: &mut SeededSource,
    budgets: SampleBudgetPair,
) -> ConvergenceInput {
    ConvergenceInput::new(budgets, src.next_u64())
}

pub const CONVERGENCE_DESCRIPTOR: TransformationDescriptor = TransformationDescriptor {
    granularity: Granularity::ParameterAdded,
    application: ApplicationMode::InPlaceModified,
    automation: Automation::Manual,
    relation_complete: false,
    false_alarm_possible: true,
};

/// Original: absolute error with `n_small` samples. Variant: absolute error
/// with `n_large` samples from `large`, the estimator under test on that side.
pub fn convergence_pair(large: PiEstimator) -> ProgramPair<ConvergenceInput, f64> {
    ProgramPair::new(
        |i: ConvergenceInput| {
            let estimate = PiEstimator::default().estimate(i.budgets.n_small, &mut i.source());
            (estimate - PI).abs()
        },
        move |i: ConvergenceInput| {
            let estimate = large.estimate(i.budgets.n_large, &mut i.source());
            (estimate - PI).abs()
        },
        CONVERGENCE_DESCRIPTOR,
    )
}

/// Median small-sample error must be at least the median large-sample error.
pub fn convergence_intramorphic_relation(repetitions: Repetitions) -> IntramorphicRelation<f64> {
    IntramorphicRelation::new("converges", |small_err: &f64, large_err: &f64| {
        small_err >= large_err
    })
    .with_statistics(StatisticalConfig::median(repetitions))
}

/// One convergence check on a fresh seed drawn from `src`.
pub fn convergence_relation(
    budgets: SampleBudgetPair,
    src: &mut SeededSource,
) -> Result<RelationOutcome<f64>> {
    budgets.validate()?;
    let relation = convergence_intramorphic_relation(Repetitions::new(budgets.repetitions)?);
    let input = InputCase::fixed(generate_convergence_input(src, budgets));
    Ok(evaluate_pair(
        &convergence_pair(PiEstimator::default()),
        &relation,
        &input,
        Budget::default(),
    ))
}
