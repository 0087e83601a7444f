//! Finite-difference weights from partial products of elementary symmetric
//! functions, Chebyshev and arcsine-mapped spectral differentiation, and
//! models of the rounding and discretization errors they incur.

pub mod chebgrid;
pub mod ddprec;
pub mod errmodel;
pub mod error;
pub mod experiment;
pub mod kte_map;
pub mod real;
pub mod symfun;

pub use chebgrid::{diff_dct, diff_weights, ChebGrid, ChebSeries, ChebTransform, DiffMode};
pub use ddprec::{
    disc_error, disc_error_asym, divdiff, interp_error_est, DivDiffTable, DoubleDouble,
    TestFunction,
};
pub use error::{Error, Result};
pub use kte_map::{
    mapped_diff, solve_alpha, DiffBackend, MapParams, MappedGrid, MappedMode, UNIT_ROUNDOFF,
};
pub use real::Real;
pub use symfun::{
    elem_sym, fd_apply, fd_weights, lagrange_weights, Grid, GridKind, Stencil, SymTable, WeightSet,
};
