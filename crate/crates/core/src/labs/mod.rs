//! Infinite-model laboratories realized by truncation: the bilateral
//! shift acting on the compacts of `l2(Z)` (Laurent/Toeplitz symbol
//! calculus, relative-continuity dichotomies) and proper actions on
//! discrete spaces.

pub mod circle;
pub mod classical;
pub mod shift;

pub use circle::{step_symbol, Banded, CircleFunction, ShiftWindow};
pub use classical::{
    free_action_system, proper_free_action_report, translation_on_z_report, LatticeFunction,
    ProperActionReport, TranslationReport,
};
pub use shift::{
    delta_twist_demo, dichotomy_at, fourier_shift_report, gentle_pair, laurent_matrix,
    positive_decomposition, rank_one_projection, rc_dichotomy, reverse_cube_bound, shift_sum,
    shift_sum_report, step_fixture, truncation_budget, CubeReport, DichotomyReport, DichotomyRow,
    FourierShiftReport, PositiveReport, ShiftSumReport, TwistReport,
};
