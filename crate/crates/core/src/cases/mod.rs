pub mod ast;
pub mod knapsack;
pub mod montecarlo;
pub mod sorting;
