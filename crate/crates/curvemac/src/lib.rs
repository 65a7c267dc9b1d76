//! Two-dimensional incompressible Navier-Stokes solver on boundary-fitted
//! curvilinear structured grids.
//!
//! The pipeline: spline-defined edges -> transfinite-interpolation seed ->
//! elliptic Gauss-Seidel smoothing -> transformation metrics -> simplified
//! MAC time stepping (first-order upwind convection, central diffusion,
//! Gauss-Seidel pressure solve enforcing discrete continuity), plus the
//! benchmark scenarios and post-processing built on top.

pub mod field;
pub mod grid;
pub mod metrics;
pub mod spline;

pub use field::Field2;
pub use grid::{generate_grid, validate_grid, CurvilinearMesh, EdgeSet, GridError, GridQualityReport};
pub use metrics::{compute_metrics, contravariant_velocity, MetricField, MetricPoint, MetricsError};
pub use spline::{
    build_spline, evaluate_spline, read_edge_points, sample_boundary, spline_derivative,
    ParametricSpline, Point2, SplineError,
};
