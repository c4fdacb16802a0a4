//! The single-sample model: weight distributions, SAM and the non-adaptive
//! optimum, exact and Monte Carlo expectations, and the quantities used by
//! the bond bound.

mod adaptive;
mod dist;
mod exchange;
mod instance;
mod montecarlo;
pub(crate) mod recursion;
mod report;
pub(crate) mod sam;

pub use adaptive::{adaptive_expected_min, MAX_JOINT_OUTCOMES};
pub use dist::{WeightDistribution, PROBABILITY_SUM_TOLERANCE};
pub use exchange::{
    exchange_inequality, exchange_inequality_with_bond, e_star, exchange_edges, ExchangeEdge,
};
pub use instance::Instance;
pub use montecarlo::{
    argmin_frequencies, conditional_expected_sam_mc, log_uniform, mc_expected_sam, task_rng,
    McEstimate, Moments, DRAWS_PER_TASK,
};
pub use report::{
    analyze, AnalysisOptions, AnalysisReport, LemmaCheck, BOUND_TOLERANCE, MC_AGREEMENT_SIGMAS,
};
pub use sam::{
    alpha, exact_expected_sam, exact_expected_sam_with_limit, first_choice_prob,
    item_selection_expected_sam, opt_tree, sam_tree, AlphaMode, ItemSelection,
    DEFAULT_EXACT_EDGE_LIMIT,
};
