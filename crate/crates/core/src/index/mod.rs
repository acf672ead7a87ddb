//! Fadell–Husseini indexes as graded ideals.

mod fh;
mod ideal;

pub use fh::{
    check_monotonicity, fh_index, fh_index_computation, IndexComputation, MonotonicityReport,
};
pub use ideal::{verify_ideal_equality, DegreeComparison, GradedIdeal, IdealComparison};
