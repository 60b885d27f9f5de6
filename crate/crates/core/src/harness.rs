//! Bounded random-testing campaigns: generate, evaluate, shrink, report.
//!
//! Iteration `i` of a campaign draws its input from
//! [`SeededSource::for_iteration`]`(seed, i)`, so iterations are independent.
//! They are evaluated in parallel chunks and scanned in order; the report is
//! the same as a serial run would produce.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exec::Budget;
use crate::generators::{GeneratorConfig, SeededSource};
use crate::oracle::{
    evaluate_pair, median_of, InputCase, IntramorphicRelation, Output, Payload, ProgramPair,
    Provenance, RelationOutcome, Repetitions,
};

pub use crate::oracle::statistical_evaluate;

const CHUNK: u64 = 256;

/// Anything that can judge a single input.
pub trait Oracle<I, O>: Send + Sync {
    fn check(&self, input: &InputCase<I>) -> RelationOutcome<O>;

    /// Repetitions per side when the oracle aggregates medians.
    fn repetitions(&self) -> Option<u32> {
        None
    }
}

impl<I, O, F> Oracle<I, O> for F
where
    F: Fn(&InputCase<I>) -> RelationOutcome<O> + Send + Sync,
{
    fn check(&self, input: &InputCase<I>) -> RelationOutcome<O> {
        self(input)
    }
}

/// An intramorphic relation checked on a program pair.
pub struct PairOracle<I, O> {
    pub pair: ProgramPair<I, O>,
    pub relation: IntramorphicRelation<O>,
    pub budget: Budget,
}

impl<I: Payload, O: Output> Oracle<I, O> for PairOracle<I, O> {
    fn check(&self, input: &InputCase<I>) -> RelationOutcome<O> {
        evaluate_pair(&self.pair, &self.relation, input, self.budget)
    }

    fn repetitions(&self) -> Option<u32> {
        self.relation.statistical.map(|s| s.repetitions.get())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseStudy {
    Sorting,
    Ast,
    MonteCarlo,
    Knapsack,
}

impl CaseStudy {
    pub fn name(self) -> &'static str {
        match self {
            CaseStudy::Sorting => "sorting",
            CaseStudy::Ast => "ast",
            CaseStudy::MonteCarlo => "montecarlo",
            CaseStudy::Knapsack => "knapsack",
        }
    }
}

impl fmt::Display for CaseStudy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which family of test oracle a campaign instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Technique {
    Unit,
    Differential,
    Metamorphic,
    Intramorphic,
}

impl Technique {
    pub fn name(self) -> &'static str {
        match self {
            Technique::Unit => "unit",
            Technique::Differential => "differential",
            Technique::Metamorphic => "metamorphic",
            Technique::Intramorphic => "intramorphic",
        }
    }
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A seeded bug in a case study's catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MutantInfo {
    pub name: &'static str,
    pub summary: &'static str,
    /// No campaign of the case study is expected to detect it.
    pub blind_spot: bool,
    /// Campaigns expected to detect it.
    pub detected_by: &'static [&'static str],
}

impl MutantInfo {
    pub fn expected_detected_by(&self, campaign: &str) -> bool {
        self.detected_by.contains(&campaign)
    }
}

/// Static description of a registered campaign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CampaignInfo {
    pub name: &'static str,
    pub case_study: CaseStudy,
    pub technique: Technique,
    /// Present exactly for intramorphic campaigns; baselines are black-box.
    pub descriptor: Option<crate::oracle::TransformationDescriptor>,
    pub summary: &'static str,
    pub mutants: &'static [MutantInfo],
}

impl CampaignInfo {
    /// Stochastic campaigns can raise false alarms and are judged by rate.
    pub fn is_stochastic(&self) -> bool {
        self.descriptor.is_some_and(|d| d.false_alarm_possible)
    }

    pub fn mutant(&self, name: &str) -> Result<&'static MutantInfo> {
        self.mutants
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| Error::UnknownMutant {
                case_study: self.case_study.name().into(),
                mutant: name.into(),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StopMode {
    #[default]
    FirstViolation,
    /// Evaluate every iteration and count all violations.
    Continue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub campaign: String,
    pub seed: u64,
    pub iterations: u64,
    pub mutant: Option<String>,
    /// Overrides the relation's repetition count (statistical campaigns only).
    pub repetitions: Option<u32>,
    pub mode: StopMode,
    pub generator: GeneratorConfig,
    pub budget: Budget,
}

impl CampaignConfig {
    pub fn new(campaign: &str, seed: u64, iterations: u64) -> Self {
        CampaignConfig {
            campaign: campaign.to_string(),
            seed,
            iterations,
            mutant: None,
            repetitions: None,
            mode: StopMode::default(),
            generator: GeneratorConfig::default(),
            budget: Budget::default(),
        }
    }

    pub fn with_mutant(mut self, mutant: &str) -> Self {
        self.mutant = Some(mutant.to_string());
        self
    }

    pub fn with_mode(mut self, mode: StopMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_repetitions(mut self, k: u32) -> Self {
        self.repetitions = Some(k);
        self
    }
}

/// What a campaign's oracle builder receives.
pub struct BuildContext<'a> {
    pub mutant: Option<&'a str>,
    pub repetitions: Option<Repetitions>,
    pub generator: &'a GeneratorConfig,
    pub budget: Budget,
}

/// Counterexample rendered for reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderedCounterexample {
    pub input: String,
    pub output_original: String,
    pub output_variant: String,
}

/// Per-side medians of a statistical campaign, taken over the per-iteration
/// medians of all evaluated iterations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Statistics {
    pub repetitions: u32,
    pub median_original: f64,
    pub median_variant: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignReport {
    pub campaign: String,
    pub seed: u64,
    pub mutant: Option<String>,
    pub iterations_run: u64,
    pub violations: u64,
    /// 1-based ordinal of the first violating iteration.
    pub first_violation_iteration: Option<u64>,
    pub counterexample: Option<RenderedCounterexample>,
    pub execution_errors: u64,
    pub statistics: Option<Statistics>,
    pub wall_time_ms: u64,
}

impl CampaignReport {
    /// The report without its timing, for determinism comparisons.
    pub fn without_timing(&self) -> CampaignReport {
        CampaignReport {
            wall_time_ms: 0,
            ..self.clone()
        }
    }
}

/// A shrunk violating input and the outputs it produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample<I, O> {
    pub input: InputCase<I>,
    pub original: O,
    pub variant: O,
}

impl<I: Payload, O: Output> Counterexample<I, O> {
    pub fn render(&self) -> RenderedCounterexample {
        RenderedCounterexample {
            input: self.input.payload.render(),
            output_original: self.original.render(),
            output_variant: self.variant.render(),
        }
    }
}

type Generate<I> = fn(&mut SeededSource, &GeneratorConfig) -> I;
type Build<I, O> = fn(&BuildContext<'_>) -> Result<Box<dyn Oracle<I, O>>>;

/// A (generator, oracle) combination runnable by the harness.
pub struct Campaign<I, O> {
    pub info: CampaignInfo,
    generate: Generate<I>,
    build: Build<I, O>,
}

impl<I: Payload, O: Output> Campaign<I, O> {
    pub fn new(info: CampaignInfo, generate: Generate<I>, build: Build<I, O>) -> Self {
        Campaign {
            info,
            generate,
            build,
        }
    }

    /// The input of iteration `iteration` (0-based) for `seed`.
    pub fn input(&self, seed: u64, iteration: u64, cfg: &GeneratorConfig) -> InputCase<I> {
        let mut src = SeededSource::for_iteration(seed, iteration);
        InputCase::new(
            (self.generate)(&mut src, cfg),
            Provenance { seed, iteration },
        )
    }

    /// Builds the oracle described by `config`, validating it first.
    pub fn oracle(&self, config: &CampaignConfig) -> Result<Box<dyn Oracle<I, O>>> {
        if config.campaign != self.info.name {
            return Err(Error::UnknownCampaign(config.campaign.clone()));
        }
        if config.iterations == 0 {
            return Err(Error::InvalidConfig("iterations must be at least 1".into()));
        }
        config.generator.validate()?;
        if let Some(m) = &config.mutant {
            self.info.mutant(m)?;
        }
        let repetitions = match config.repetitions {
            Some(k) => {
                let k = Repetitions::new(k)?;
                if !self.info.is_stochastic() {
                    return Err(Error::NotStatistical(self.info.name.into()));
                }
                Some(k)
            }
            None => None,
        };
        (self.build)(&BuildContext {
            mutant: config.mutant.as_deref(),
            repetitions,
            generator: &config.generator,
            budget: config.budget,
        })
    }

    /// Greedy first-improvement shrinking: adopt the first candidate that
    /// still violates, until none does.
    pub fn shrink(
        &self,
        oracle: &dyn Oracle<I, O>,
        input: InputCase<I>,
        original: O,
        variant: O,
    ) -> Counterexample<I, O> {
        let mut best = Counterexample {
            input,
            original,
            variant,
        };
        'outer: loop {
            for candidate in best.input.payload.shrink() {
                let candidate = best.input.with_payload(candidate);
                if let RelationOutcome::Violated { original, variant } = oracle.check(&candidate) {
                    best = Counterexample {
                        input: candidate,
                        original,
                        variant,
                    };
                    continue 'outer;
                }
            }
            return best;
        }
    }

    pub fn run_typed(
        &self,
        config: &CampaignConfig,
    ) -> Result<(CampaignReport, Option<Counterexample<I, O>>)> {
        let oracle = self.oracle(config)?;
        let started = Instant::now();

        let mut report = CampaignReport {
            campaign: self.info.name.to_string(),
            seed: config.seed,
            mutant: config.mutant.clone(),
            iterations_run: 0,
            violations: 0,
            first_violation_iteration: None,
            counterexample: None,
            execution_errors: 0,
            statistics: None,
            wall_time_ms: 0,
        };
        let mut first: Option<(InputCase<I>, O, O)> = None;
        let mut side_originals = Vec::new();
        let mut side_variants = Vec::new();

        let mut start = 0;
        'chunks: while start < config.iterations {
            let end = (start + CHUNK).min(config.iterations);
            let outcomes: Vec<_> = (start..end)
                .into_par_iter()
                .map(|i| {
                    let input = self.input(config.seed, i, &config.generator);
                    let outcome = oracle.check(&input);
                    (input, outcome)
                })
                .collect();
            for (input, outcome) in outcomes {
                report.iterations_run += 1;
                if let Some((o, v)) = outcome.outputs() {
                    if let (Some(o), Some(v)) = (o.scalar(), v.scalar()) {
                        side_originals.push(o);
                        side_variants.push(v);
                    }
                }
                match outcome {
                    RelationOutcome::Holds { .. } => {}
                    RelationOutcome::ExecutionError { .. } => report.execution_errors += 1,
                    RelationOutcome::Violated { original, variant } => {
                        report.violations += 1;
                        if first.is_none() {
                            report.first_violation_iteration = Some(report.iterations_run);
                            first = Some((input, original, variant));
                        }
                        if config.mode == StopMode::FirstViolation {
                            break 'chunks;
                        }
                    }
                }
            }
            start = end;
        }

        let counterexample = first.map(|(input, o, v)| self.shrink(oracle.as_ref(), input, o, v));
        report.counterexample = counterexample.as_ref().map(Counterexample::render);
        if let Some(k) = oracle.repetitions() {
            if !side_originals.is_empty() {
                report.statistics = Some(Statistics {
                    repetitions: k,
                    median_original: median_of(side_originals),
                    median_variant: median_of(side_variants),
                });
            }
        }
        report.wall_time_ms = started.elapsed().as_millis() as u64;
        Ok((report, counterexample))
    }
}

/// Type-erased campaign, as held by the registry.
pub trait CampaignRunner: Send + Sync {
    fn info(&self) -> &CampaignInfo;
    fn run(&self, config: &CampaignConfig) -> Result<CampaignReport>;
}

impl<I: Payload, O: Output> CampaignRunner for Campaign<I, O> {
    fn info(&self) -> &CampaignInfo {
        &self.info
    }

    fn run(&self, config: &CampaignConfig) -> Result<CampaignReport> {
        self.run_typed(config).map(|(report, _)| report)
    }
}

/// Runs `config` against the campaign registry.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignReport> {
    crate::registry::find(&config.campaign)?.run(config)
}

/// Violation share a stochastic campaign needs for a mutant to count as
/// detected, as a percentage of evaluated iterations.
pub const STOCHASTIC_DETECTION_PERCENT: u64 = 95;

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixCell {
    pub campaign: String,
    pub technique: Technique,
    /// `None` is the unmutated control.
    pub mutant: Option<String>,
    pub detected: bool,
    pub expected_detected: bool,
    pub violations: u64,
    pub iterations_run: u64,
    pub first_violation_iteration: Option<u64>,
}

impl MatrixCell {
    pub fn as_expected(&self) -> bool {
        self.detected == self.expected_detected
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DetectionMatrix {
    pub seed: u64,
    pub iterations: u64,
    pub cells: Vec<MatrixCell>,
}

impl DetectionMatrix {
    pub fn cell(&self, campaign: &str, mutant: Option<&str>) -> Option<&MatrixCell> {
        self.cells
            .iter()
            .find(|c| c.campaign == campaign && c.mutant.as_deref() == mutant)
    }

    /// Whether any campaign detected `mutant`.
    pub fn detected_anywhere(&self, mutant: &str) -> bool {
        self.cells
            .iter()
            .any(|c| c.mutant.as_deref() == Some(mutant) && c.detected)
    }

    pub fn all_as_expected(&self) -> bool {
        self.cells.iter().all(MatrixCell::as_expected)
    }
}

/// Detection rule: any violation for deterministic campaigns; at least
/// [`STOCHASTIC_DETECTION_PERCENT`] of iterations violated for stochastic ones.
pub fn is_detected(info: &CampaignInfo, report: &CampaignReport) -> bool {
    if info.is_stochastic() {
        report.iterations_run > 0
            && report.violations * 100 >= STOCHASTIC_DETECTION_PERCENT * report.iterations_run
    } else {
        report.violations > 0
    }
}

/// One campaign run per (campaign, mutant) cell plus an unmutated control
/// per campaign. Mutants outside a campaign's case study are skipped for it.
pub fn run_detection_matrix(
    campaigns: &[&str],
    mutants: &[&str],
    seed: u64,
    iterations: u64,
) -> Result<DetectionMatrix> {
    let runners = campaigns
        .iter()
        .map(|c| crate::registry::find(c))
        .collect::<Result<Vec<_>>>()?;
    let catalog = crate::registry::all_mutants();
    for m in mutants {
        if !catalog.iter().any(|(_, info)| info.name == *m) {
            return Err(Error::UnknownMutant {
                case_study: "any".into(),
                mutant: (*m).into(),
            });
        }
    }

    let mut matrix = DetectionMatrix {
        seed,
        iterations,
        cells: Vec::new(),
    };
    for runner in runners {
        let info = *runner.info();
        let mode = if info.is_stochastic() {
            StopMode::Continue
        } else {
            StopMode::FirstViolation
        };
        let columns = std::iter::once(None).chain(
            mutants
                .iter()
                .filter(|m| info.mutants.iter().any(|mi| mi.name == **m))
                .map(|m| Some(*m)),
        );
        for mutant in columns {
            let mut config = CampaignConfig::new(info.name, seed, iterations).with_mode(mode);
            config.mutant = mutant.map(str::to_string);
            let report = runner.run(&config)?;
            let expected_detected = match mutant {
                None => false,
                Some(m) => info.mutant(m)?.expected_detected_by(info.name),
            };
            matrix.cells.push(MatrixCell {
                campaign: info.name.to_string(),
                technique: info.technique,
                mutant: mutant.map(str::to_string),
                detected: is_detected(&info, &report),
                expected_detected,
                violations: report.violations,
                iterations_run: report.iterations_run,
                first_violation_iteration: report.first_violation_iteration,
            });
        }
    }
    Ok(matrix)
}
