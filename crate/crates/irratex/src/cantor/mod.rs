//! Desk-scale Cantor-like fractal machinery: prime-indexed approximation
//! bands, nested interval levels with an exact mass distribution,
//! empirical Hölder constants, truncated well-approximable sets with tail
//! certificates, and the nested-interval selection loop.

pub mod bands;
pub mod holder;
pub mod levels;
pub mod selection;
pub mod vsets;

pub use bands::{approximation_band, level_union, primes_between};
pub use holder::{holder_check, HolderReport};
pub use levels::{
    build_levels, compute_bk, gap_inequality_holds, refine_level, BSource, CantorLevel,
    FractalSchedule, MassDistribution, ScheduleMode,
};
pub use selection::{run_selection, SelectionConfig, SelectionTrace};
pub use vsets::{choose_h, truncated_v_set, v_tail_bound, TruncatedV};
