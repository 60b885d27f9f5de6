//! Expression trees printed in infix, prefix and postfix notation.
//!
//! The infix printer is the component under test: it has to parenthesize an
//! addition that sits below a multiplication. Prefix and postfix printers are
//! added alongside it; all three must print the same tokens.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::generators::shrink_tree;
use crate::oracle::{
    ApplicationMode, Automation, Granularity, IntramorphicRelation, Payload, ProgramPair,
    TransformationDescriptor,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operator {
    Add,
    Mul,
}

impl Operator {
    pub fn symbol(self) -> &'static str {
        match self {
            Operator::Add => "+",
            Operator::Mul => "*",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExprNode {
    Operation {
        op: Operator,
        left: Box<ExprNode>,
        right: Box<ExprNode>,
    },
    Variable(String),
    Constant(u32),
}

impl ExprNode {
    pub fn op(op: Operator, left: ExprNode, right: ExprNode) -> Self {
        ExprNode::Operation {
            op,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn var(name: &str) -> Self {
        ExprNode::Variable(name.to_string())
    }

    pub fn constant(value: u32) -> Self {
        ExprNode::Constant(value)
    }

    pub fn node_count(&self) -> usize {
        match self {
            ExprNode::Operation { left, right, .. } => 1 + left.node_count() + right.node_count(),
            _ => 1,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            ExprNode::Operation { left, right, .. } => 1 + left.depth().max(right.depth()),
            _ => 0,
        }
    }

    fn is_addition(&self) -> bool {
        matches!(
            self,
            ExprNode::Operation {
                op: Operator::Add,
                ..
            }
        )
    }

    fn leaf_text(&self) -> Option<String> {
        match self {
            ExprNode::Variable(name) => Some(name.clone()),
            ExprNode::Constant(value) => Some(value.to_string()),
            ExprNode::Operation { .. } => None,
        }
    }
}

/// Displays the correct infix rendering.
impl fmt::Display for ExprNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&as_string_infix(self))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AstMutant {
    /// `right = '(' + left + ')'` when parenthesizing the right operand.
    ParenLeftAsRight,
    /// Infix output omits the right operand.
    DropRightOperand,
    /// Parentheses are never added. The token relation strips parentheses,
    /// so it cannot see this one.
    ParenMissing,
}

impl AstMutant {
    pub const ALL: [AstMutant; 3] = [
        AstMutant::ParenLeftAsRight,
        AstMutant::DropRightOperand,
        AstMutant::ParenMissing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::ParenLeftAsRight => "paren-left-as-right",
            Self::DropRightOperand => "drop-right-operand",
            Self::ParenMissing => "paren-missing",
        }
    }
}

impl fmt::Display for AstMutant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AstMutant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMutant {
                case_study: "ast".into(),
                mutant: s.into(),
            })
    }
}

/// An infix printer, correct or carrying one mutant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct InfixPrinter {
    pub mutant: Option<AstMutant>,
}

impl InfixPrinter {
    pub fn print(&self, tree: &ExprNode) -> String {
        let ExprNode::Operation {
            op,
            left: l,
            right: r,
        } = tree
        else {
            return tree.leaf_text().expect("leaf");
        };
        let mut left = self.print(l);
        let mut right = self.print(r);
        let parenthesize = self.mutant != Some(AstMutant::ParenMissing);
        if *op == Operator::Mul && parenthesize {
            if l.is_addition() {
                left = format!("({left})");
            }
            if r.is_addition() {
                right = if self.mutant == Some(AstMutant::ParenLeftAsRight) {
                    format!("({left})")
                } else {
                    format!("({right})")
                };
            }
        }
        if self.mutant == Some(AstMutant::DropRightOperand) {
            return format!("{left} {}", op.symbol());
        }
        format!("{left} {} {right}", op.symbol())
    }
}

pub fn inject_ast_mutant(name: &str) -> Result<InfixPrinter, Error> {
    Ok(InfixPrinter {
        mutant: Some(name.parse()?),
    })
}

pub fn as_string_infix(tree: &ExprNode) -> String {
    InfixPrinter::default().print(tree)
}

pub fn as_string_prefix(tree: &ExprNode) -> String {
    match tree {
        ExprNode::Operation { op, left, right } => format!(
            "{} {} {}",
            op.symbol(),
            as_string_prefix(left),
            as_string_prefix(right)
        ),
        leaf => leaf.leaf_text().expect("leaf"),
    }
}

pub fn as_string_postfix(tree: &ExprNode) -> String {
    match tree {
        ExprNode::Operation { op, left, right } => format!(
            "{} {} {}",
            as_string_postfix(left),
            as_string_postfix(right),
            op.symbol()
        ),
        leaf => leaf.leaf_text().expect("leaf"),
    }
}

fn sorted_tokens(text: &str) -> Vec<&str> {
    let mut tokens: Vec<&str> = text.split(' ').collect();
    tokens.sort_unstable();
    tokens
}

/// Strips parentheses from the infix text and compares the sorted
/// space-separated tokens of all renderings.
pub fn same_tokens(infix: &str, others: &[String]) -> bool {
    let stripped: String = infix.chars().filter(|c| *c != '(' && *c != ')').collect();
    let reference = sorted_tokens(&stripped);
    others.iter().all(|o| sorted_tokens(o) == reference)
}

/// All three renderings of `tree` carry the same tokens.
pub fn token_multiset_relation(tree: &ExprNode) -> bool {
    token_multiset_relation_with(InfixPrinter::default(), tree)
}

pub fn token_multiset_relation_with(printer: InfixPrinter, tree: &ExprNode) -> bool {
    same_tokens(
        &printer.print(tree),
        &[as_string_prefix(tree), as_string_postfix(tree)],
    )
}

impl Payload for ExprNode {
    fn shrink(&self) -> Vec<Self> {
        shrink_tree(self)
    }

    fn render(&self) -> String {
        as_string_prefix(self)
    }
}

pub const TOKEN_DESCRIPTOR: TransformationDescriptor = TransformationDescriptor {
    granularity: Granularity::FunctionAdded,
    application: ApplicationMode::AddedAlongside,
    automation: Automation::Manual,
    relation_complete: false,
    false_alarm_possible: false,
};

/// Original: `[infix]`. Variant: `[prefix, postfix]`.
pub fn printer_pair(printer: InfixPrinter) -> ProgramPair<ExprNode, Vec<String>> {
    ProgramPair::new(
        move |t: ExprNode| vec![printer.print(&t)],
        |t: ExprNode| vec![as_string_prefix(&t), as_string_postfix(&t)],
        TOKEN_DESCRIPTOR,
    )
}

pub fn token_relation() -> IntramorphicRelation<Vec<String>> {
    IntramorphicRelation::new(
        "same-tokens",
        |infix: &Vec<String>, others: &Vec<String>| {
            infix.len() == 1 && same_tokens(&infix[0], others)
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a_plus_3_times_2() -> ExprNode {
        ExprNode::op(
            Operator::Mul,
            ExprNode::op(Operator::Add, ExprNode::var("a"), ExprNode::constant(3)),
            ExprNode::constant(2),
        )
    }

    #[test]
    fn golden_renderings() {
        let t = a_plus_3_times_2();
        assert_eq!(as_string_infix(&t), "(a + 3) * 2");
        assert_eq!(as_string_prefix(&t), "* + a 3 2");
        assert_eq!(as_string_postfix(&t), "a 3 + 2 *");
    }

    #[test]
    fn leaves_and_simple_operations() {
        assert_eq!(as_string_infix(&ExprNode::constant(3)), "3");
        assert_eq!(as_string_prefix(&ExprNode::var("a")), "a");
        assert_eq!(as_string_postfix(&ExprNode::constant(7)), "7");
        let ab_sum = ExprNode::op(Operator::Add, ExprNode::var("a"), ExprNode::var("b"));
        assert_eq!(as_string_prefix(&ab_sum), "+ a b");
        let ab_prod = ExprNode::op(Operator::Mul, ExprNode::var("a"), ExprNode::var("b"));
        assert_eq!(as_string_postfix(&ab_prod), "a b *");
    }

    #[test]
    fn addition_on_top_needs_no_parentheses() {
        let t = ExprNode::op(
            Operator::Add,
            ExprNode::var("a"),
            ExprNode::op(Operator::Mul, ExprNode::constant(3), ExprNode::constant(2)),
        );
        assert_eq!(as_string_infix(&t), "a + 3 * 2");
    }

    #[test]
    fn token_relation_holds_for_correct_printers() {
        assert!(token_multiset_relation(&a_plus_3_times_2()));
        assert!(token_multiset_relation(&ExprNode::var("c")));
        let mut tokens = sorted_tokens("* + a 3 2");
        tokens.dedup();
        assert_eq!(tokens, vec!["*", "+", "2", "3", "a"]);
    }

    #[test]
    fn paren_left_as_right_is_caught() {
        let t = ExprNode::op(
            Operator::Mul,
            ExprNode::constant(2),
            ExprNode::op(Operator::Add, ExprNode::var("a"), ExprNode::constant(3)),
        );
        let printer = inject_ast_mutant("paren-left-as-right").unwrap();
        assert_eq!(printer.print(&t), "2 * (2)");
        assert!(!token_multiset_relation_with(printer, &t));
    }

    #[test]
    fn drop_right_operand_is_caught() {
        let t = ExprNode::op(Operator::Add, ExprNode::var("a"), ExprNode::var("b"));
        let printer = inject_ast_mutant("drop-right-operand").unwrap();
        assert_eq!(printer.print(&t), "a +");
        assert!(!token_multiset_relation_with(printer, &t));
    }

    #[test]
    fn paren_missing_is_invisible_to_tokens() {
        let printer = inject_ast_mutant("paren-missing").unwrap();
        let t = a_plus_3_times_2();
        assert_eq!(printer.print(&t), "a + 3 * 2");
        assert!(token_multiset_relation_with(printer, &t));
    }

    #[test]
    fn unknown_mutant_is_rejected() {
        assert!(inject_ast_mutant("paren-everywhere").is_err());
    }
}
