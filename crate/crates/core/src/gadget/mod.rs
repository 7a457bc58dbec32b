//! Gadgets: small polymatrix sub-games whose equilibria compute arithmetic.

mod build;
mod catalog;
mod circuit;
mod lift;
mod sweep;

pub use build::{
    bit_extract_eps_bound, build_and, build_assign, build_bit_extract, build_compare,
    build_complement, build_copy, build_kind, build_mask, build_max, build_median, build_min,
    build_minus, build_primitive_onto, build_scale, build_scaled_sum, build_simple,
    build_threshold, standalone, SimpleKind,
};
pub(crate) use build::build_threshold_unclamped;
pub use catalog::{
    binary_digit, catalog, check_guarantee, error_bound, error_multiple, far_from_grid,
    kind_from_name, standard_kinds, CatalogEntry,
};
pub use circuit::{GadgetCircuit, GadgetKind, GadgetRecord, Precondition, Wire};
pub use lift::{lift_circuit, lift_circuit_values, lift_gadget, lift_primitive};
pub use sweep::{reachable_outputs, sweep, SweepConfig, SweepReport, SweepViolation, Sweeper};
