use intramorph::cases::sorting::{
    reverse_intramorphic_relation, reverse_pair, SortInput, SortSuite,
};
use intramorph::harness::{CampaignConfig, StopMode};
use intramorph::oracle::{evaluate_pair, InputCase, Payload};
use intramorph::registry::{self, campaigns};
use intramorph::{run_campaign, Budget, Error};

#[test]
fn repeated_runs_produce_identical_reports() {
    for (campaign, mutant) in [
        ("sorting-intramorphic", Some("swap-index-i")),
        ("ast-tokens", Some("paren-left-as-right")),
        ("knapsack-optimality", Some("greedy-capacity-off-by-one")),
        ("montecarlo-convergence", None),
        ("sorting-differential", None),
    ] {
        let mut config = CampaignConfig::new(campaign, 9, 40);
        config.mutant = mutant.map(String::from);
        let a = run_campaign(&config).unwrap().without_timing();
        let b = run_campaign(&config).unwrap().without_timing();
        assert_eq!(a, b, "{campaign}");
    }
}

#[test]
fn shrunk_counterexamples_violate_and_are_locally_minimal() {
    let c = registry::sorting_intramorphic();
    let config = CampaignConfig::new("sorting-intramorphic", 42, 1000).with_mutant("swap-index-i");
    let oracle = c.oracle(&config).unwrap();
    let (report, cx) = c.run_typed(&config).unwrap();
    let cx = cx.expect("counterexample");
    assert!(report.violations > 0);
    assert!(oracle.check(&cx.input).is_violated());
    for smaller in cx.input.payload.shrink() {
        assert!(!oracle.check(&cx.input.with_payload(smaller)).is_violated());
    }

    let first = c.input(
        42,
        report.first_violation_iteration.unwrap() - 1,
        &config.generator,
    );
    assert!(oracle.check(&first).is_violated());
    assert_eq!(first.provenance, cx.input.provenance);
}

#[test]
fn knapsack_and_ast_counterexamples_replay() {
    let k = registry::knapsack_optimality();
    let config =
        CampaignConfig::new("knapsack-optimality", 3, 500).with_mutant("exhaustive-skip-include");
    let (_, cx) = k.run_typed(&config).unwrap();
    let cx = cx.unwrap();
    assert!(k.oracle(&config).unwrap().check(&cx.input).is_violated());

    let a = registry::ast_tokens();
    let config = CampaignConfig::new("ast-tokens", 3, 5000).with_mutant("drop-right-operand");
    let (_, cx) = a.run_typed(&config).unwrap();
    let cx = cx.unwrap();
    assert!(a.oracle(&config).unwrap().check(&cx.input).is_violated());
    // one operation is the smallest tree an infix printer can get wrong
    assert_eq!(cx.input.payload.node_count(), 3);
}

#[test]
fn continue_mode_counts_every_violation() {
    let config = CampaignConfig::new("sorting-unit", 5, 300)
        .with_mutant("swap-index-i")
        .with_mode(StopMode::Continue);
    let report = run_campaign(&config).unwrap();
    assert_eq!(report.iterations_run, 300);
    assert!(report.violations > 1 && report.violations < 300);
    assert_eq!(report.execution_errors, 0);
}

#[test]
fn control_campaigns_are_clean() {
    for c in campaigns() {
        let info = c.info();
        if info.is_stochastic() {
            continue;
        }
        let report = c.run(&CampaignConfig::new(info.name, 2024, 3000)).unwrap();
        assert_eq!(report.violations, 0, "{}", info.name);
        assert_eq!(report.execution_errors, 0, "{}", info.name);
        assert!(report.counterexample.is_none());
    }
}

#[test]
fn statistical_reports_carry_medians() {
    let report = run_campaign(&CampaignConfig::new("montecarlo-convergence", 42, 10)).unwrap();
    let stats = report.statistics.expect("statistics");
    assert_eq!(stats.repetitions, 5);
    assert!(stats.median_original > stats.median_variant);
    assert!(run_campaign(&CampaignConfig::new("sorting-unit", 42, 10))
        .unwrap()
        .statistics
        .is_none());
}

#[test]
fn configuration_errors() {
    let err = |c: CampaignConfig| run_campaign(&c).unwrap_err();
    assert!(matches!(
        err(CampaignConfig::new("nope", 1, 1)),
        Error::UnknownCampaign(_)
    ));
    assert!(matches!(
        err(CampaignConfig::new("ast-tokens", 1, 1).with_mutant("swap-index-i")),
        Error::UnknownMutant { .. }
    ));
    assert!(matches!(
        err(CampaignConfig::new("sorting-unit", 1, 1).with_repetitions(3)),
        Error::NotStatistical(_)
    ));
    assert!(matches!(
        err(CampaignConfig::new("montecarlo-convergence", 1, 1).with_repetitions(4)),
        Error::InvalidRepetitions(4)
    ));
    assert!(matches!(
        err(CampaignConfig::new("sorting-unit", 1, 0)),
        Error::InvalidConfig(_)
    ));
    let mut c = CampaignConfig::new("montecarlo-convergence", 1, 1);
    c.generator.montecarlo.n_large = c.generator.montecarlo.n_small;
    assert!(matches!(err(c), Error::InvalidConfig(_)));
}

#[test]
fn only_false_alarm_prone_oracles_aggregate() {
    let mc = registry::montecarlo_convergence();
    let config = CampaignConfig::new(mc.info.name, 1, 1);
    assert!(mc.info.descriptor.unwrap().false_alarm_possible);
    assert_eq!(mc.oracle(&config).unwrap().repetitions(), Some(5));
    let config = config.with_repetitions(7);
    assert_eq!(mc.oracle(&config).unwrap().repetitions(), Some(7));

    let s = registry::sorting_intramorphic();
    assert!(!s.info.descriptor.unwrap().false_alarm_possible);
    let config = CampaignConfig::new(s.info.name, 1, 1);
    assert_eq!(s.oracle(&config).unwrap().repetitions(), None);
    let k = registry::knapsack_optimality();
    let config = CampaignConfig::new(k.info.name, 1, 1);
    assert_eq!(k.oracle(&config).unwrap().repetitions(), None);
}

#[test]
fn pair_evaluation_is_deterministic() {
    let pair = reverse_pair(SortSuite::correct());
    let relation = reverse_intramorphic_relation();
    let input = InputCase::fixed(SortInput::new(vec![4, 1, 3, 1]));
    let a = evaluate_pair(&pair, &relation, &input, Budget::default());
    let b = evaluate_pair(&pair, &relation, &input, Budget::default());
    assert_eq!(a, b);
    assert!(a.holds());
}
