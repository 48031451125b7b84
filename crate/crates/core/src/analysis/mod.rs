//! Expansions in the orthonormal system and the functions built from them:
//! square and maximal functions, the Hardy–Littlewood maximal function,
//! level sets, the sign-flip experiment and decay audits.

pub mod audit;
pub mod expansion;
pub mod experiment;
pub mod maximal;
pub mod table;

pub use audit::{norm_equivalence, sup_bound_audit, tail_decay_audit, NormBand, TailAudit};
pub use expansion::{expand, expand_spline, Expansion};
pub use experiment::{
    uncond_experiment, uncond_experiment_on, CoefficientMode, ExperimentReport, TrialDraw,
};
pub use maximal::{
    hl_maximal, hl_maximal_bruteforce, level_sets, maximal_function, square_function, GridFunction,
    LevelSets,
};
pub use table::ValueTable;
