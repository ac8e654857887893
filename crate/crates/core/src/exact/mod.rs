//! Exact rational evaluation of the counting and moment formulas, with
//! brute-force oracles over small configuration spaces.

pub mod combin;
pub mod enumerate;
pub mod identities;
pub mod moments;
pub mod rational;

pub use combin::{
    count_trees_with_degrees, count_uniform_trees, num_partitions, tree_degree_sequences,
    TreeDegreeSequence,
};
pub use enumerate::{enumerate_configurations, enumerate_uniform_trees, fold_configurations};
pub use identities::{chu_identity_check, chu_sides, jensen_tree_sides, jensen_tree_sum_check};
pub use moments::{
    brute_moments, exact_expected_y, exact_second_moment, exact_second_moment_with, ln_expected_y,
    BruteStatistic, MomentMode, MomentValue,
};
pub use rational::ExactQ;
