//! The two L1 embeddings of `Sym_n`, their direct sum, and the cycle-median
//! and interval-counting facts they rest on.

pub mod combined;
pub mod median;
pub mod phi1;
pub mod phi2;

pub use combined::{combined_distance, default_scale1, phi_combined, phi_combined_with_margin, CombinedPoint, CombinedRecord};
pub use median::{avg_vs_min_check, median_min, median_min_in_cloud, AvgVsMin, MedianMin};
pub use phi1::{l1_distance, phi1, phi1_distance, phi1_realize, PlanarGrid, PlanarGridRecord};
pub use phi2::{
    count_separating_intervals, difference_set, find_collapsed_coordinate, kept_interval_count, phi2,
    phi2_distance, phi2_with_margin, separating_lower_bound, Collision, InteriorMargin, IntervalKey,
    SparseL1Vector, SparseRecord,
};
