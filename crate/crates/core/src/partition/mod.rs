//! Treewidth, well-linked sets and the bipartition pipelines built on
//! acceptable partitions of a graph.

mod charging;
mod contract;
mod split;
mod synthetic;
mod bipartition;
mod treewidth;
mod tripartition;
mod welllinked;

use thiserror::Error;

use crate::scalar::Scalar;

pub use charging::{charging, ChargeState, ChargeViolation};
pub use contract::{acceptability, eq3_residual, is_acceptable, Acceptability, ContractedGraph};
pub use split::{better_partition, minimal_endpoint_set, split, BetterPartition, Split, SplitTrace, TraceNode, SPLIT_LIMIT};
pub use synthetic::{clustered_instance, Clustered};
pub use bipartition::{
    best_connected_bipartition, lemma4_partition, shrink_to_2connected, theorem4_partition, Bipartition, Lemma4, Route, EXHAUSTIVE_LIMIT,
    WL_BUDGET,
};
pub use treewidth::{
    decomposition_from_order, elimination_width, treewidth_brute_force, treewidth_exact, treewidth_of,
    treewidth_with_limit, verify_decomposition, TreeDecomposition, Treewidth, BRUTE_FORCE_LIMIT, DEFAULT_TW_LIMIT,
};
pub use tripartition::{tripartition, tripartition_graph, tripartition_unchecked, Tripartition, DEFAULT_TRIALS, EXHAUSTIVE_BLOCKS};
pub use welllinked::{check_separator_property, check_wl_bounds, is_well_linked, well_linked_set, WellLinked};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("{what} has size {size}, limit is {limit}")]
    TooLarge { what: &'static str, size: usize, limit: usize },
    /// No bipartition of `Y` meets the split inequality.
    #[error("treewidth too large: no qualifying split of a {size}-vertex set")]
    TreewidthTooLarge { size: usize },
    #[error("split bound violated: {0}")]
    SplitBound(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("tripartition needs |E| >= 25·Δ, got |E| = {edges}, Δ = {max_degree}")]
    TripartitionPrecondition { edges: usize, max_degree: usize },
    #[error("no tripartition found after {trials} trials")]
    RetryBudgetExhausted { trials: usize },
    #[error("trace inconsistent with the graph: {0}")]
    TraceInconsistent(String),
    #[error("bound {bound} not met: sides have treewidth {tw_a} and {tw_b}")]
    BoundNotMet { bound: usize, tw_a: usize, tw_b: usize },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Oracle(String),
}

/// Constants of the partition argument. `delta_prime` overrides `β·r·Δ²`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionParams<S> {
    pub gamma: S,
    pub beta: S,
    pub alpha: S,
    pub delta_prime: Option<S>,
}

/// The two numbers `split` and `better_partition` compare against.
#[derive(Debug, Clone, PartialEq)]
pub struct Thresholds<S> {
    pub gamma: S,
    pub delta_prime: S,
}

impl<S: Scalar> PartitionParams<S> {
    /// `γ = 1/2000`, `β = 6/γ`, `α = 1/(200β)`.
    pub fn standard() -> Self {
        Self::from_gamma(S::ratio(1, 2000))
    }

    pub fn from_gamma(gamma: S) -> Self {
        let beta = S::from_count(6) / gamma.clone();
        let alpha = S::one() / (S::from_count(200) * beta.clone());
        PartitionParams {
            gamma,
            beta,
            alpha,
            delta_prime: None,
        }
    }

    /// Small `γ` denominators and a fixed `Δ′` so that splits exist on small
    /// graphs.
    pub fn relaxed(gamma: S, delta_prime: S) -> Self {
        PartitionParams {
            delta_prime: Some(delta_prime),
            ..Self::from_gamma(gamma)
        }
    }

    pub fn with_alpha(self, alpha: S) -> Self {
        PartitionParams { alpha, ..self }
    }

    /// `r = 2αk/Δ²`.
    pub fn r(&self, k: usize, delta: usize) -> S {
        if delta == 0 {
            return S::zero();
        }
        S::from_count(2) * self.alpha.clone() * S::from_count(k) / S::from_count(delta * delta)
    }

    /// `Δ′ = β·r·Δ²`, unless overridden.
    pub fn delta_prime(&self, k: usize, delta: usize) -> S {
        match &self.delta_prime {
            Some(d) => d.clone(),
            None => self.beta.clone() * self.r(k, delta) * S::from_count(delta * delta),
        }
    }

    /// `⌊α·tw/Δ²⌋`, 0 for an edgeless graph.
    pub fn tw_bound(&self, tw: usize, delta: usize) -> usize {
        if delta == 0 {
            return 0;
        }
        (self.alpha.clone() * S::from_count(tw) / S::from_count(delta * delta)).floor_count()
    }

    pub fn thresholds(&self, k: usize, delta: usize) -> Thresholds<S> {
        Thresholds {
            gamma: self.gamma.clone(),
            delta_prime: self.delta_prime(k, delta),
        }
    }
}

impl<S: Scalar> Default for PartitionParams<S> {
    fn default() -> Self {
        Self::standard()
    }
}

#[cfg(test)]
mod tests;
