//! Registered campaigns and the mutant catalog of each case study.

use std::sync::OnceLock;

use crate::baselines::{
    differential_oracle, metamorphic_removal_oracle, pick_unit_case, unit_oracle, RemovalInput,
    UnitCase,
};
use crate::cases::ast::TOKEN_DESCRIPTOR;
use crate::cases::ast::{printer_pair, token_relation, AstMutant, ExprNode, InfixPrinter};
use crate::cases::knapsack::{
    dominance_pair, dominance_relation, dp_pair, optimality_intramorphic_relation, optimality_pair,
    KnapsackInstance, KnapsackMutant, KnapsackSolvers,
};
use crate::cases::knapsack::{DOMINANCE_DESCRIPTOR, DP_DESCRIPTOR, OPTIMALITY_DESCRIPTOR};
use crate::cases::montecarlo::{
    convergence_intramorphic_relation, convergence_pair, generate_convergence_input,
    ConvergenceInput, MonteCarloMutant, PiEstimator, CONVERGENCE_DESCRIPTOR,
};
use crate::cases::sorting::{
    merge_replacement_pair, reverse_intramorphic_relation, reverse_pair, SortInput, SortSuite,
    SortingMutant, REPLACED_SORT_DESCRIPTOR, REVERSE_DESCRIPTOR,
};
use crate::error::{Error, Result};
use crate::generators::{random_array, random_knapsack_instance, random_tree};
use crate::harness::{
    BuildContext, Campaign, CampaignInfo, CampaignRunner, CaseStudy, MutantInfo, Oracle,
    PairOracle, Technique,
};
use crate::oracle::{equivalence_relation, InputCase, RelationOutcome, Repetitions};

pub const SORTING_UNIT: &str = "sorting-unit";
pub const SORTING_DIFFERENTIAL: &str = "sorting-differential";
pub const SORTING_METAMORPHIC: &str = "sorting-metamorphic";
pub const SORTING_INTRAMORPHIC: &str = "sorting-intramorphic";
pub const SORTING_EQUIVALENCE: &str = "sorting-equivalence";
pub const AST_TOKENS: &str = "ast-tokens";
pub const MONTECARLO_CONVERGENCE: &str = "montecarlo-convergence";
pub const KNAPSACK_OPTIMALITY: &str = "knapsack-optimality";
pub const KNAPSACK_DP_EQUIVALENCE: &str = "knapsack-dp-equivalence";
pub const KNAPSACK_DOMINANCE: &str = "knapsack-dominance";

const ALL_SORTING: &[&str] = &[
    SORTING_UNIT,
    SORTING_DIFFERENTIAL,
    SORTING_METAMORPHIC,
    SORTING_INTRAMORPHIC,
    SORTING_EQUIVALENCE,
];

pub static SORTING_MUTANTS: &[MutantInfo] = &[
    MutantInfo {
        name: "swap-index-i",
        summary: "bubble sort swap writes arr[i] instead of arr[j]",
        blind_spot: false,
        detected_by: ALL_SORTING,
    },
    MutantInfo {
        name: "comparison-flip-reverse",
        summary: "both bubble sorts carry the index bug; reverse differs only by comparison",
        blind_spot: false,
        detected_by: ALL_SORTING,
    },
    MutantInfo {
        name: "sort-ascending-in-reverse",
        summary: "reverse bubble sort forgets to flip its comparison",
        blind_spot: false,
        detected_by: &[SORTING_INTRAMORPHIC],
    },
];

pub static AST_MUTANTS: &[MutantInfo] = &[
    MutantInfo {
        name: "paren-left-as-right",
        summary: "parenthesized right operand built from the left operand",
        blind_spot: false,
        detected_by: &[AST_TOKENS],
    },
    MutantInfo {
        name: "drop-right-operand",
        summary: "infix output omits the right operand",
        blind_spot: false,
        detected_by: &[AST_TOKENS],
    },
    MutantInfo {
        name: "paren-missing",
        summary: "parentheses never added; invisible once parentheses are stripped",
        blind_spot: true,
        detected_by: &[],
    },
];

pub static MONTECARLO_MUTANTS: &[MutantInfo] = &[
    MutantInfo {
        name: "wrong-scale",
        summary: "estimate is 2 * hits / n",
        blind_spot: false,
        detected_by: &[MONTECARLO_CONVERGENCE],
    },
    MutantInfo {
        name: "boundary-strict",
        summary: "hit test x^2 + y^2 < 1; the boundary has measure zero",
        blind_spot: true,
        detected_by: &[],
    },
    MutantInfo {
        name: "one-coordinate",
        summary: "hit test x^2 <= 1; estimate tends to 4",
        blind_spot: false,
        detected_by: &[MONTECARLO_CONVERGENCE],
    },
];

pub static KNAPSACK_MUTANTS: &[MutantInfo] = &[
    MutantInfo {
        name: "greedy-sort-ascending",
        summary: "greedy considers the least dense item first",
        blind_spot: false,
        detected_by: &[KNAPSACK_DOMINANCE],
    },
    MutantInfo {
        name: "exhaustive-skip-include",
        summary: "exhaustive search never takes the include branch",
        blind_spot: false,
        detected_by: &[KNAPSACK_OPTIMALITY, KNAPSACK_DP_EQUIVALENCE],
    },
    MutantInfo {
        name: "greedy-capacity-off-by-one",
        summary: "greedy fill admits cum_weight + weight <= capacity + 1",
        blind_spot: false,
        detected_by: &[KNAPSACK_OPTIMALITY],
    },
];

fn sorting_mutant(ctx: &BuildContext<'_>) -> Result<Option<SortingMutant>> {
    ctx.mutant.map(str::parse).transpose()
}

fn sorting_input(
    src: &mut crate::generators::SeededSource,
    cfg: &crate::generators::GeneratorConfig,
) -> SortInput {
    SortInput::new(random_array(src, cfg))
}

pub fn sorting_unit() -> Campaign<UnitCase, Vec<i64>> {
    Campaign::new(
        CampaignInfo {
            name: SORTING_UNIT,
            case_study: CaseStudy::Sorting,
            technique: Technique::Unit,
            descriptor: None,
            summary: "hand-written expected outputs for bubble sort",
            mutants: SORTING_MUTANTS,
        },
        |src, _| pick_unit_case(src),
        |ctx| {
            let sort = SortSuite::with_mutant(sorting_mutant(ctx)?).bubble;
            let budget = ctx.budget;
            let oracle =
                move |input: &InputCase<UnitCase>| unit_oracle(sort, &input.payload, budget);
            Ok(Box::new(oracle) as Box<dyn Oracle<_, _>>)
        },
    )
}

pub fn sorting_differential() -> Campaign<SortInput, Vec<i64>> {
    Campaign::new(
        CampaignInfo {
            name: SORTING_DIFFERENTIAL,
            case_study: CaseStudy::Sorting,
            technique: Technique::Differential,
            descriptor: None,
            summary: "bubble, merge and insertion sort must agree",
            mutants: SORTING_MUTANTS,
        },
        sorting_input,
        |ctx| {
            let algorithms = SortSuite::with_mutant(sorting_mutant(ctx)?).ascending();
            let budget = ctx.budget;
            let oracle = move |input: &InputCase<SortInput>| {
                differential_oracle(&algorithms, &input.payload.elements, budget)
                    .expect("three algorithms")
            };
            Ok(Box::new(oracle) as Box<dyn Oracle<_, _>>)
        },
    )
}

pub fn sorting_metamorphic() -> Campaign<RemovalInput, Vec<i64>> {
    Campaign::new(
        CampaignInfo {
            name: SORTING_METAMORPHIC,
            case_study: CaseStudy::Sorting,
            technique: Technique::Metamorphic,
            descriptor: None,
            summary: "removing one element from input and sorted output keeps them related",
            mutants: SORTING_MUTANTS,
        },
        |src, cfg| RemovalInput {
            elements: random_array(src, cfg),
            pick: src.next_u64(),
        },
        |ctx| {
            let sort = SortSuite::with_mutant(sorting_mutant(ctx)?).bubble;
            let budget = ctx.budget;
            let oracle = move |input: &InputCase<RemovalInput>| {
                let p = &input.payload;
                if p.elements.is_empty() {
                    // nothing to remove; the relation is vacuous
                    return RelationOutcome::Holds {
                        original: Vec::new(),
                        variant: Vec::new(),
                    };
                }
                metamorphic_removal_oracle(sort, &p.elements, p.pick, budget).expect("non-empty")
            };
            Ok(Box::new(oracle) as Box<dyn Oracle<_, _>>)
        },
    )
}

pub fn sorting_intramorphic() -> Campaign<SortInput, Vec<i64>> {
    Campaign::new(
        CampaignInfo {
            name: SORTING_INTRAMORPHIC,
            case_study: CaseStudy::Sorting,
            technique: Technique::Intramorphic,
            descriptor: Some(REVERSE_DESCRIPTOR),
            summary: "bubble_sort output reversed equals bubble_sort_reverse output",
            mutants: SORTING_MUTANTS,
        },
        sorting_input,
        |ctx| {
            let suite = SortSuite::with_mutant(sorting_mutant(ctx)?);
            Ok(Box::new(PairOracle {
                pair: reverse_pair(suite),
                relation: reverse_intramorphic_relation(),
                budget: ctx.budget,
            }) as Box<dyn Oracle<_, _>>)
        },
    )
}

pub fn sorting_equivalence() -> Campaign<SortInput, Vec<i64>> {
    Campaign::new(
        CampaignInfo {
            name: SORTING_EQUIVALENCE,
            case_study: CaseStudy::Sorting,
            technique: Technique::Intramorphic,
            descriptor: Some(REPLACED_SORT_DESCRIPTOR),
            summary: "bubble sort replaced by merge sort yields the same output",
            mutants: SORTING_MUTANTS,
        },
        sorting_input,
        |ctx| {
            let suite = SortSuite::with_mutant(sorting_mutant(ctx)?);
            Ok(Box::new(PairOracle {
                pair: merge_replacement_pair(suite),
                relation: equivalence_relation(),
                budget: ctx.budget,
            }) as Box<dyn Oracle<_, _>>)
        },
    )
}

pub fn ast_tokens() -> Campaign<ExprNode, Vec<String>> {
    Campaign::new(
        CampaignInfo {
            name: AST_TOKENS,
            case_study: CaseStudy::Ast,
            technique: Technique::Intramorphic,
            descriptor: Some(TOKEN_DESCRIPTOR),
            summary: "infix, prefix and postfix printers emit the same tokens",
            mutants: AST_MUTANTS,
        },
        random_tree,
        |ctx| {
            let mutant: Option<AstMutant> = ctx.mutant.map(str::parse).transpose()?;
            Ok(Box::new(PairOracle {
                pair: printer_pair(InfixPrinter { mutant }),
                relation: token_relation(),
                budget: ctx.budget,
            }) as Box<dyn Oracle<_, _>>)
        },
    )
}

pub fn montecarlo_convergence() -> Campaign<ConvergenceInput, f64> {
    Campaign::new(
        CampaignInfo {
            name: MONTECARLO_CONVERGENCE,
            case_study: CaseStudy::MonteCarlo,
            technique: Technique::Intramorphic,
            descriptor: Some(CONVERGENCE_DESCRIPTOR),
            summary: "median error with few samples is at least the median error with many",
            mutants: MONTECARLO_MUTANTS,
        },
        |src, cfg| generate_convergence_input(src, cfg.montecarlo),
        |ctx| {
            let mutant: Option<MonteCarloMutant> = ctx.mutant.map(str::parse).transpose()?;
            ctx.generator.montecarlo.validate_strict()?;
            let k = match ctx.repetitions {
                Some(k) => k,
                None => Repetitions::new(ctx.generator.montecarlo.repetitions)?,
            };
            Ok(Box::new(PairOracle {
                pair: convergence_pair(PiEstimator { mutant }),
                relation: convergence_intramorphic_relation(k),
                budget: ctx.budget,
            }) as Box<dyn Oracle<_, _>>)
        },
    )
}

fn knapsack_solvers(ctx: &BuildContext<'_>) -> Result<KnapsackSolvers> {
    let mutant: Option<KnapsackMutant> = ctx.mutant.map(str::parse).transpose()?;
    Ok(KnapsackSolvers { mutant })
}

pub fn knapsack_optimality() -> Campaign<KnapsackInstance, crate::cases::knapsack::KnapsackSolution>
{
    Campaign::new(
        CampaignInfo {
            name: KNAPSACK_OPTIMALITY,
            case_study: CaseStudy::Knapsack,
            technique: Technique::Intramorphic,
            descriptor: Some(OPTIMALITY_DESCRIPTOR),
            summary: "greedy replaced by exhaustive search never loses value",
            mutants: KNAPSACK_MUTANTS,
        },
        random_knapsack_instance,
        |ctx| {
            Ok(Box::new(PairOracle {
                pair: optimality_pair(knapsack_solvers(ctx)?),
                relation: optimality_intramorphic_relation(),
                budget: ctx.budget,
            }) as Box<dyn Oracle<_, _>>)
        },
    )
}

pub fn knapsack_dp_equivalence() -> Campaign<KnapsackInstance, u64> {
    Campaign::new(
        CampaignInfo {
            name: KNAPSACK_DP_EQUIVALENCE,
            case_study: CaseStudy::Knapsack,
            technique: Technique::Intramorphic,
            descriptor: Some(DP_DESCRIPTOR),
            summary: "exhaustive search replaced by dynamic programming yields the same value",
            mutants: KNAPSACK_MUTANTS,
        },
        random_knapsack_instance,
        |ctx| {
            Ok(Box::new(PairOracle {
                pair: dp_pair(knapsack_solvers(ctx)?),
                relation: equivalence_relation(),
                budget: ctx.budget,
            }) as Box<dyn Oracle<_, _>>)
        },
    )
}

pub fn knapsack_dominance() -> Campaign<KnapsackInstance, crate::cases::knapsack::KnapsackSolution>
{
    Campaign::new(
        CampaignInfo {
            name: KNAPSACK_DOMINANCE,
            case_study: CaseStudy::Knapsack,
            technique: Technique::Intramorphic,
            descriptor: Some(DOMINANCE_DESCRIPTOR),
            summary: "greedy is worth at least filling with its densest item alone",
            mutants: KNAPSACK_MUTANTS,
        },
        random_knapsack_instance,
        |ctx| {
            Ok(Box::new(PairOracle {
                pair: dominance_pair(knapsack_solvers(ctx)?),
                relation: dominance_relation(),
                budget: ctx.budget,
            }) as Box<dyn Oracle<_, _>>)
        },
    )
}

/// Every registered campaign, in listing order.
pub fn campaigns() -> &'static [Box<dyn CampaignRunner>] {
    static REGISTRY: OnceLock<Vec<Box<dyn CampaignRunner>>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        vec![
            Box::new(sorting_unit()),
            Box::new(sorting_differential()),
            Box::new(sorting_metamorphic()),
            Box::new(sorting_intramorphic()),
            Box::new(sorting_equivalence()),
            Box::new(ast_tokens()),
            Box::new(montecarlo_convergence()),
            Box::new(knapsack_optimality()),
            Box::new(knapsack_dp_equivalence()),
            Box::new(knapsack_dominance()),
        ]
    })
}

pub fn find(name: &str) -> Result<&'static dyn CampaignRunner> {
    campaigns()
        .iter()
        .find(|c| c.info().name == name)
        .map(|c| c.as_ref())
        .ok_or_else(|| Error::UnknownCampaign(name.to_string()))
}

pub fn campaign_names() -> Vec<&'static str> {
    campaigns().iter().map(|c| c.info().name).collect()
}

/// Every catalogued mutant with its case study, each listed once.
pub fn all_mutants() -> Vec<(CaseStudy, &'static MutantInfo)> {
    [
        (CaseStudy::Sorting, SORTING_MUTANTS),
        (CaseStudy::Ast, AST_MUTANTS),
        (CaseStudy::MonteCarlo, MONTECARLO_MUTANTS),
        (CaseStudy::Knapsack, KNAPSACK_MUTANTS),
    ]
    .into_iter()
    .flat_map(|(cs, list)| list.iter().map(move |m| (cs, m)))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        let mut names = campaign_names();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), campaigns().len());
    }

    #[test]
    fn intramorphic_campaigns_carry_descriptors() {
        for c in campaigns() {
            let info = c.info();
            assert_eq!(
                info.descriptor.is_some(),
                info.technique == Technique::Intramorphic,
                "{}",
                info.name
            );
        }
    }

    #[test]
    fn catalogs_match_enums() {
        let names = |list: &[MutantInfo]| list.iter().map(|m| m.name).collect::<Vec<_>>();
        assert_eq!(
            names(SORTING_MUTANTS),
            SortingMutant::ALL.map(SortingMutant::name).to_vec()
        );
        assert_eq!(
            names(AST_MUTANTS),
            AstMutant::ALL.map(AstMutant::name).to_vec()
        );
        assert_eq!(
            names(MONTECARLO_MUTANTS),
            MonteCarloMutant::ALL.map(MonteCarloMutant::name).to_vec()
        );
        assert_eq!(
            names(KNAPSACK_MUTANTS),
            KnapsackMutant::ALL.map(KnapsackMutant::name).to_vec()
        );
    }

    #[test]
    fn detected_by_refers_to_campaigns_of_the_same_case_study() {
        for (cs, m) in all_mutants() {
            assert_eq!(m.blind_spot, m.detected_by.is_empty(), "{}", m.name);
            for c in m.detected_by {
                assert_eq!(find(c).unwrap().info().case_study, cs, "{}", m.name);
            }
        }
    }

    #[test]
    fn unknown_campaign() {
        assert!(matches!(
            find("nonexistent"),
            Err(Error::UnknownCampaign(_))
        ));
    }
}
