//! Word metric, word synthesis and L1 embeddings for the Cayley graph of
//! `Sym_n` generated by the adjacent transposition `t = (0 1)` and the full
//! cycle `c = (0 1 ... n-1)`.
//!
//! Real-valued pieces are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the common `f64` and `f32` instances.

pub mod embed;
pub mod error;
pub mod experiments;
pub mod metric;
pub mod perm;
pub mod scalar;
pub mod synth;

pub use error::{Error, Result};
pub use metric::{
    bfs_distances, formula_distance, formula_length, shared_minimizer, split_check, t1, t2, DistanceTable,
    FormulaBreakdown, FormulaEvaluator, ShiftTerms, SplitCheck, DEFAULT_BFS_LIMIT,
};
pub use perm::{
    compose, cycle_decompose, cycle_diam, cycle_dist, eval_word, factorial, inverse, CycleDecomposition,
    GeneratorWord, Letter, Permutation,
};
pub use scalar::Scalar;
pub use synth::{synthesize, word_cycle, word_transposition, CertifiedWord, WordBuilder};

pub type PlanarGrid64 = embed::PlanarGrid<f64>;
pub type PlanarGrid32 = embed::PlanarGrid<f32>;
pub type SparseL1Vector64 = embed::SparseL1Vector<f64>;
pub type SparseL1Vector32 = embed::SparseL1Vector<f32>;
pub type CombinedPoint64 = embed::CombinedPoint<f64>;
pub type CombinedPoint32 = embed::CombinedPoint<f32>;
pub type DistortionReport64 = experiments::DistortionReport<f64>;
pub type DistortionReport32 = experiments::DistortionReport<f32>;
pub type CubeAuditReport64 = experiments::CubeAuditReport<f64>;
pub type DriftSeries64 = experiments::DriftSeries<f64>;
