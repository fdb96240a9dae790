//! Information curves of discrete joint distributions and the parallel
//! unmasking schedules they control.
//!
//! A distribution `μ` over `[q]^n` is sampled in `k` rounds, each revealing a
//! block of positions drawn independently from their conditional marginals.
//! The expected KL error of doing so with a uniformly random partition of
//! sizes `s_1..s_k` is the L¹ gap between the information curve `Z` of `μ`
//! and its left Riemann step approximation on the schedule's nodes. This
//! crate computes those curves exactly (or by Monte Carlo), plans schedules
//! from the full curve or from TC/DTC estimates, and checks the identity by
//! brute force.
//!
//! Conventions: information is in bits, positions are 0-based in tuples and
//! partitions, while curve indices and Riemann nodes are 1-based.

pub mod combinatorics;
pub mod dist;
pub mod dist_spec;
pub mod error;
pub mod info;
pub mod sampler;
pub mod schedule;
pub mod stepfit;
pub mod zoo;

pub use dist::{
    conditional_oracle, entropy_bits, kl_bits, marginalize, product_of_marginals, tv, JointPmf,
    MarginalTable, PartialAssignment,
};
pub use dist_spec::{load_dist, DistSpec};
pub use error::{Error, Result};
pub use info::{
    dtc_direct, entropy_curve_exact, entropy_curve_mc, info_curve, info_curve_from_entropy,
    tc_direct, tc_dtc_from_curve, CorrelationSummary, CurveMethod, EntropyCurve, InfoCurve,
    McConfig,
};
pub use sampler::{
    decoupling_check, expected_kl_exact, expected_kl_mc, mixture_output_dist, output_dist_fixed,
    sample_fixed, sample_random, DecouplingReport, KlEstimate, OracleModel, SubsetSchedule,
};
pub use schedule::{
    austin_schedule, dtc_schedule, licai_bound, nodes_to_schedule, optimal_nodes_dp,
    riemann_error, schedule_to_nodes, sweep_grid, tc_schedule, BoundSource, GridBound,
    NodeVector, Schedule, ScheduleReport,
};
pub use stepfit::{
    best_k_piecewise, hard_curve, lower_bound_experiment, DiscreteCurve, EpsRule, LevelMode,
    PiecewiseFit,
};
pub use zoo::{code_dist, mds_check, random_balanced_rs, rs_code, AffineCode};
