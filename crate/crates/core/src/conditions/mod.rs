//! Necessary conditions on equitable partitions and perfect sets, each
//! reported as a verdict with named witnesses.

mod automorphisms;
mod characters;
mod equitable;
mod report;

pub use automorphisms::thm_vt_bound;
pub use characters::{
    coro_perfect_code_specialization, lemma_right_count, lemma_translate_invariance,
    permutation_character_multiplicities, thm_nec_cd, thm_nec_cond, DEFAULT_SCALE_CAP,
};
pub use equitable::{
    coro_eigenvector_family, coro_perfect_vs_partition, divisibility_gate, thm_2equ, thm_2equ_all_pairs,
    TwoPartitionInstance,
};
pub use report::{ConditionReport, ExactRational, Verdict, Witness, WitnessValue};

use thiserror::Error;

use crate::graph::GraphError;
use crate::group::GroupError;
use crate::linalg::{rat, ratio, LinalgError, Rational};
use crate::partition::{Partition, PartitionError};

#[derive(Debug, Error)]
pub enum ConditionError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub(crate) fn ri(n: i64) -> Rational {
    rat(n)
}

/// `q[t][l] = |R_t ∩ C_l| / |R_t|`.
pub(crate) fn intersection_fractions(rows: &Partition, cols: &Partition) -> Vec<Vec<Rational>> {
    rows.blocks()
        .iter()
        .map(|r| {
            let mut counts = vec![0i64; cols.len()];
            for &v in r {
                counts[cols.block_of(v)] += 1;
            }
            counts.into_iter().map(|c| ratio(c, r.len() as i64)).collect()
        })
        .collect()
}
