//! Exact-arithmetic engine for genus-zero Gromov-Witten invariants of the
//! Calabi-Yau complete-intersection threefolds in projective space.
//!
//! The computation localizes to the fixed points of the torus action on the
//! space of stable maps: each fixed component is indexed by a decorated
//! tree, and the invariant is an exact rational sum of one closed-form term
//! per tree. The pipeline is
//!
//! 1. [`graphs`] — enumerate decorated trees up to isomorphism, with
//!    automorphism orders, and all proper vertex labelings;
//! 2. [`localization`] — evaluate each graph's equivariant Euler and Chern
//!    class factors exactly at a chosen weight specialization;
//! 3. [`invariants`] — reduce the summands to the invariants `N_d`, invert
//!    the multiple-cover formula to integer instanton numbers, and expose
//!    the closed-form line count on hypersurfaces.
//!
//! Everything is exact: the only scalar type is an arbitrary-precision
//! reduced fraction, and results are independent of worker count.

pub mod error;
pub mod graphs;
pub mod invariants;
pub mod localization;
pub mod rational;

pub use error::{Error, Result};
pub use graphs::{
    count_fixed_graphs, decorate, decorated_shapes, enumerate_labelings, enumerate_shapes,
    DecoratedShape, FixedGraph, Flag, TreeShape,
};
pub use invariants::{
    bott_sum, cicy_reports, cy_types, gw_invariant, gw_invariant_tracked, instanton_numbers,
    lines_closed_form, lines_report, moduli_dim, quintic_n, CYType, InvariantReport, Target,
    DEFAULT_MAX_DEGREE,
};
pub use localization::{
    check_nondegenerate, contribution_chern, edge_euler, flag_weight, vertex_euler, Evaluator,
    NondegeneracyReport, WeightStrategy, WeightVector,
};
pub use rational::Rational;

pub use num_bigint::BigInt;
