//! Structured curvilinear mesh generation.
//!
//! The mesh is built from four sampled boundary point lists: a transfinite
//! interpolation seed followed by Gauss-Seidel sweeps of the discrete
//! Laplace system for the node coordinates in computational space, with
//! unit spacing in both directions. Boundary nodes are never touched by
//! the smoothing.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::spline::Point2;

/// Tolerance for corner coincidence between adjacent edges.
const CORNER_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("opposite edges must have equal point counts: south {south} vs north {north}, west {west} vs east {east}")]
    EdgeCountMismatch {
        south: usize,
        north: usize,
        west: usize,
        east: usize,
    },
    #[error("edge needs at least 2 points, got {0}")]
    EdgeTooShort(usize),
    #[error("corner {corner} of adjacent edges differs by {gap:.3e} (> 1e-9)")]
    CornerMismatch { corner: &'static str, gap: f64 },
    #[error("folded cell at ({i}, {j}): non-positive jacobian after smoothing")]
    FoldedCell { i: usize, j: usize },
    #[error("mesh file: {0}")]
    MeshFile(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// The four sampled boundary point lists of a domain.
///
/// `south`/`north` run in increasing xi and must have equal length;
/// `west`/`east` run in increasing eta. Corner points of adjacent
/// edges must coincide within 1e-9.
#[derive(Clone, Debug)]
pub struct EdgeSet {
    pub south: Vec<Point2>,
    pub north: Vec<Point2>,
    pub west: Vec<Point2>,
    pub east: Vec<Point2>,
}

/// Node coordinates of an (n_xi x n_eta)-line structured grid.
///
/// Computational spacing is fixed at `dxi = deta = 1`; cell (i, j) has its
/// corners at nodes (i, j), (i+1, j), (i, j+1), (i+1, j+1).
#[derive(Clone, Debug)]
pub struct CurvilinearMesh {
    n_xi: usize,
    n_eta: usize,
    x: Vec<f64>,
    y: Vec<f64>,
    smoothing_residuals: Vec<f64>,
}

impl CurvilinearMesh {
    pub fn n_xi(&self) -> usize {
        self.n_xi
    }

    pub fn n_eta(&self) -> usize {
        self.n_eta
    }

    /// Cell count in xi.
    pub fn ncx(&self) -> usize {
        self.n_xi - 1
    }

    /// Cell count in eta.
    pub fn ncy(&self) -> usize {
        self.n_eta - 1
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n_xi && j < self.n_eta);
        j * self.n_xi + i
    }

    #[inline]
    pub fn node_x(&self, i: usize, j: usize) -> f64 {
        self.x[self.idx(i, j)]
    }

    #[inline]
    pub fn node_y(&self, i: usize, j: usize) -> f64 {
        self.y[self.idx(i, j)]
    }

    pub fn node(&self, i: usize, j: usize) -> Point2 {
        Point2::new(self.node_x(i, j), self.node_y(i, j))
    }

    /// Physical center of cell (i, j): mean of its four corner nodes.
    pub fn cell_center(&self, i: usize, j: usize) -> Point2 {
        Point2::new(
            0.25 * (self.node_x(i, j)
                + self.node_x(i + 1, j)
                + self.node_x(i, j + 1)
                + self.node_x(i + 1, j + 1)),
            0.25 * (self.node_y(i, j)
                + self.node_y(i + 1, j)
                + self.node_y(i, j + 1)
                + self.node_y(i + 1, j + 1)),
        )
    }

    /// Max-update residual recorded at every smoothing sweep.
    pub fn smoothing_residuals(&self) -> &[f64] {
        &self.smoothing_residuals
    }

    /// Build a mesh directly from a node coordinate function (for tests and
    /// analytically defined grids).
    pub fn from_fn(n_xi: usize, n_eta: usize, f: impl Fn(usize, usize) -> (f64, f64)) -> Self {
        let mut x = vec![0.0; n_xi * n_eta];
        let mut y = vec![0.0; n_xi * n_eta];
        for j in 0..n_eta {
            for i in 0..n_xi {
                let (px, py) = f(i, j);
                x[j * n_xi + i] = px;
                y[j * n_xi + i] = py;
            }
        }
        Self {
            n_xi,
            n_eta,
            x,
            y,
            smoothing_residuals: Vec::new(),
        }
    }

    /// Identity mesh x = i, y = j.
    pub fn identity(n_xi: usize, n_eta: usize) -> Self {
        Self::from_fn(n_xi, n_eta, |i, j| (i as f64, j as f64))
    }

    /// Serialize as the plain-text mesh format: header `nxi neta`, then one
    /// `i j x y` row per node.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n_xi, self.n_eta);
        for j in 0..self.n_eta {
            for i in 0..self.n_xi {
                let _ = writeln!(
                    out,
                    "{} {} {:.16e} {:.16e}",
                    i,
                    j,
                    self.node_x(i, j),
                    self.node_y(i, j)
                );
            }
        }
        out
    }

    pub fn write_text(&self, path: &Path) -> Result<(), GridError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read_text(path: &Path) -> Result<Self, GridError> {
        let text = std::fs::read_to_string(path)?;
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| GridError::MeshFile("empty file".into()))?;
        let mut it = header.split_whitespace();
        let parse_count = |tok: Option<&str>| {
            tok.and_then(|t| t.parse::<usize>().ok())
                .ok_or_else(|| GridError::MeshFile("bad header, expected `nxi neta`".into()))
        };
        let n_xi = parse_count(it.next())?;
        let n_eta = parse_count(it.next())?;
        let mut mesh = Self::from_fn(n_xi, n_eta, |_, _| (f64::NAN, f64::NAN));
        for (lineno, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let bad = || GridError::MeshFile(format!("line {}: expected `i j x y`", lineno + 1));
            let i: usize = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
            let j: usize = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
            let x: f64 = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
            let y: f64 = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
            if i >= n_xi || j >= n_eta {
                return Err(GridError::MeshFile(format!(
                    "line {}: node ({}, {}) outside {}x{}",
                    lineno + 1,
                    i,
                    j,
                    n_xi,
                    n_eta
                )));
            }
            let k = j * n_xi + i;
            mesh.x[k] = x;
            mesh.y[k] = y;
        }
        if mesh.x.iter().chain(mesh.y.iter()).any(|v| v.is_nan()) {
            return Err(GridError::MeshFile("missing node rows".into()));
        }
        Ok(mesh)
    }
}

/// Mesh quality summary from [`validate_grid`].
#[derive(Clone, Copy, Debug)]
pub struct GridQualityReport {
    /// Smallest cell-center jacobian J = 1/(x_xi y_eta - x_eta y_xi).
    pub min_jacobian: f64,
    pub max_jacobian: f64,
    /// Smallest physical cell area (shoelace).
    pub min_cell_area: f64,
    /// Cells whose center jacobian or any corner cross product is <= 0.
    pub nonpositive_cells: usize,
    pub worst_cell: (usize, usize),
    pub valid: bool,
}

/// Generate the mesh: transfinite-interpolation seed, then Gauss-Seidel
/// smoothing of the discrete Laplace system until the largest nodal update
/// drops below `tol` or `max_iter` sweeps have run.
pub fn generate_grid(
    edges: &EdgeSet,
    max_iter: usize,
    tol: f64,
) -> Result<CurvilinearMesh, GridError> {
    check_edges(edges)?;
    let n_xi = edges.south.len();
    let n_eta = edges.west.len();
    let mut mesh = tfi_seed(edges);

    let mut residuals = Vec::new();
    for _ in 0..max_iter {
        let mut max_update: f64 = 0.0;
        for j in 1..n_eta - 1 {
            for i in 1..n_xi - 1 {
                let k = j * n_xi + i;
                let new_x =
                    0.25 * (mesh.x[k - 1] + mesh.x[k + 1] + mesh.x[k - n_xi] + mesh.x[k + n_xi]);
                let new_y =
                    0.25 * (mesh.y[k - 1] + mesh.y[k + 1] + mesh.y[k - n_xi] + mesh.y[k + n_xi]);
                max_update = max_update
                    .max((new_x - mesh.x[k]).abs())
                    .max((new_y - mesh.y[k]).abs());
                mesh.x[k] = new_x;
                mesh.y[k] = new_y;
            }
        }
        residuals.push(max_update);
        if max_update < tol {
            break;
        }
    }
    log::debug!(
        "grid generation: {} sweeps, final residual {:.3e}",
        residuals.len(),
        residuals.last().copied().unwrap_or(0.0)
    );
    mesh.smoothing_residuals = residuals;

    let report = validate_grid(&mesh);
    if !report.valid {
        return Err(GridError::FoldedCell {
            i: report.worst_cell.0,
            j: report.worst_cell.1,
        });
    }
    Ok(mesh)
}

fn check_edges(edges: &EdgeSet) -> Result<(), GridError> {
    if edges.south.len() != edges.north.len() || edges.west.len() != edges.east.len() {
        return Err(GridError::EdgeCountMismatch {
            south: edges.south.len(),
            north: edges.north.len(),
            west: edges.west.len(),
            east: edges.east.len(),
        });
    }
    let shortest = edges.south.len().min(edges.west.len());
    if shortest < 2 {
        return Err(GridError::EdgeTooShort(shortest));
    }
    let pairs: [(&'static str, Point2, Point2); 4] = [
        ("south-west", edges.south[0], edges.west[0]),
        ("south-east", *edges.south.last().unwrap(), edges.east[0]),
        ("north-west", edges.north[0], *edges.west.last().unwrap()),
        (
            "north-east",
            *edges.north.last().unwrap(),
            *edges.east.last().unwrap(),
        ),
    ];
    for (corner, a, b) in pairs {
        let gap = a.distance(b);
        if gap > CORNER_TOL {
            return Err(GridError::CornerMismatch { corner, gap });
        }
    }
    Ok(())
}

/// Bilinear transfinite interpolation of the four edges.
fn tfi_seed(edges: &EdgeSet) -> CurvilinearMesh {
    let n_xi = edges.south.len();
    let n_eta = edges.west.len();
    let sw = edges.south[0];
    let se = *edges.south.last().unwrap();
    let nw = edges.north[0];
    let ne = *edges.north.last().unwrap();

    let mut mesh = CurvilinearMesh::from_fn(n_xi, n_eta, |i, j| {
        let s = i as f64 / (n_xi - 1) as f64;
        let t = j as f64 / (n_eta - 1) as f64;
        let bx = (1.0 - t) * edges.south[i].x + t * edges.north[i].x + (1.0 - s) * edges.west[j].x
            + s * edges.east[j].x
            - ((1.0 - s) * (1.0 - t) * sw.x
                + s * (1.0 - t) * se.x
                + (1.0 - s) * t * nw.x
                + s * t * ne.x);
        let by = (1.0 - t) * edges.south[i].y + t * edges.north[i].y + (1.0 - s) * edges.west[j].y
            + s * edges.east[j].y
            - ((1.0 - s) * (1.0 - t) * sw.y
                + s * (1.0 - t) * se.y
                + (1.0 - s) * t * nw.y
                + s * t * ne.y);
        (bx, by)
    });

    // Boundary rows/columns carry the sampled points verbatim so the
    // boundary is bit-identical to the spline input.
    for i in 0..n_xi {
        let k0 = i;
        mesh.x[k0] = edges.south[i].x;
        mesh.y[k0] = edges.south[i].y;
        let k1 = (n_eta - 1) * n_xi + i;
        mesh.x[k1] = edges.north[i].x;
        mesh.y[k1] = edges.north[i].y;
    }
    for j in 1..n_eta - 1 {
        let k0 = j * n_xi;
        mesh.x[k0] = edges.west[j].x;
        mesh.y[k0] = edges.west[j].y;
        let k1 = j * n_xi + n_xi - 1;
        mesh.x[k1] = edges.east[j].x;
        mesh.y[k1] = edges.east[j].y;
    }
    mesh
}

/// Report min/max jacobian, minimum cell area and the count of folded
/// cells. A cell counts as folded when its center jacobian or any of its
/// four corner cross products is non-positive.
pub fn validate_grid(mesh: &CurvilinearMesh) -> GridQualityReport {
    let mut min_j = f64::INFINITY;
    let mut max_j = f64::NEG_INFINITY;
    let mut min_area = f64::INFINITY;
    let mut nonpositive = 0usize;
    let mut worst = (0usize, 0usize);
    let mut worst_metric = f64::INFINITY;

    for j in 0..mesh.ncy() {
        for i in 0..mesh.ncx() {
            let p00 = mesh.node(i, j);
            let p10 = mesh.node(i + 1, j);
            let p01 = mesh.node(i, j + 1);
            let p11 = mesh.node(i + 1, j + 1);

            // Center metric derivatives (edge midpoint differences).
            let x_xi = 0.5 * (p10.x + p11.x) - 0.5 * (p00.x + p01.x);
            let y_xi = 0.5 * (p10.y + p11.y) - 0.5 * (p00.y + p01.y);
            let x_eta = 0.5 * (p01.x + p11.x) - 0.5 * (p00.x + p10.x);
            let y_eta = 0.5 * (p01.y + p11.y) - 0.5 * (p00.y + p10.y);
            let det = x_xi * y_eta - x_eta * y_xi;
            let jac = 1.0 / det;
            min_j = min_j.min(jac);
            max_j = max_j.max(jac);

            // Shoelace area of the quad p00 -> p10 -> p11 -> p01.
            let area = 0.5
                * ((p00.x * p10.y - p10.x * p00.y)
                    + (p10.x * p11.y - p11.x * p10.y)
                    + (p11.x * p01.y - p01.x * p11.y)
                    + (p01.x * p00.y - p00.x * p01.y));
            min_area = min_area.min(area);

            // Corner cross products of the bilinear map catch twisted quads
            // whose center determinant is still positive.
            let cross = |a: Point2, b: Point2, c: Point2| {
                (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y)
            };
            let corner_min = cross(p00, p10, p01)
                .min(cross(p10, p11, p00))
                .min(cross(p11, p01, p10))
                .min(cross(p01, p00, p11));
            let cell_metric = det.min(corner_min);
            if cell_metric <= 0.0 {
                nonpositive += 1;
            }
            if cell_metric < worst_metric {
                worst_metric = cell_metric;
                worst = (i, j);
            }
        }
    }

    GridQualityReport {
        min_jacobian: min_j,
        max_jacobian: max_j,
        min_cell_area: min_area,
        nonpositive_cells: nonpositive,
        worst_cell: worst,
        valid: nonpositive == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spline::{build_spline, sample_boundary};

    fn rect_edges(w: f64, h: f64, n_xi: usize, n_eta: usize) -> EdgeSet {
        let seg = |a: (f64, f64), b: (f64, f64), n: usize| {
            let s = build_spline(&[Point2::new(a.0, a.1), Point2::new(b.0, b.1)]).unwrap();
            sample_boundary(&s, n).unwrap()
        };
        EdgeSet {
            south: seg((0.0, 0.0), (w, 0.0), n_xi),
            north: seg((0.0, h), (w, h), n_xi),
            west: seg((0.0, 0.0), (0.0, h), n_eta),
            east: seg((w, 0.0), (w, h), n_eta),
        }
    }

    #[test]
    fn unit_square_gives_uniform_grid() {
        let mesh = generate_grid(&rect_edges(1.0, 1.0, 5, 5), 1000, 1e-4).unwrap();
        assert!((mesh.node_x(2, 2) - 0.5).abs() < 1e-12);
        assert!((mesh.node_y(2, 2) - 0.5).abs() < 1e-12);
        assert!((mesh.node_x(1, 3) - 0.25).abs() < 1e-12);
        assert!((mesh.node_y(1, 3) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn parallel_plates_p1_spacing() {
        // 8 x 1 rectangle on 9 x 5 lines: h_x = 1.0, h_y = 0.25.
        let mesh = generate_grid(&rect_edges(8.0, 1.0, 9, 5), 1000, 1e-4).unwrap();
        for j in 0..5 {
            for i in 0..8 {
                let hx = mesh.node_x(i + 1, j) - mesh.node_x(i, j);
                assert!((hx - 1.0).abs() < 1e-9, "hx = {hx}");
            }
        }
        for j in 0..4 {
            for i in 0..9 {
                let hy = mesh.node_y(i, j + 1) - mesh.node_y(i, j);
                assert!((hy - 0.25).abs() < 1e-9, "hy = {hy}");
            }
        }
    }

    #[test]
    fn rectangle_tfi_is_a_fixed_point() {
        let mesh = generate_grid(&rect_edges(2.0, 1.0, 9, 7), 1000, 1e-4).unwrap();
        // The bilinear TFI seed already solves the Laplace system, so the
        // first sweep's update is at roundoff level.
        assert_eq!(mesh.smoothing_residuals().len(), 1);
        assert!(mesh.smoothing_residuals()[0] < 1e-12);
    }

    #[test]
    fn boundary_nodes_bit_identical_to_input() {
        let curve = build_spline(&[
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.3),
            Point2::new(2.0, -0.1),
            Point2::new(3.0, 0.0),
        ])
        .unwrap();
        let south = sample_boundary(&curve, 17).unwrap();
        let north: Vec<Point2> = south.iter().map(|p| Point2::new(p.x, p.y + 2.0)).collect();
        let wseg = build_spline(&[south[0], north[0]]).unwrap();
        let eseg = build_spline(&[*south.last().unwrap(), *north.last().unwrap()]).unwrap();
        let edges = EdgeSet {
            west: sample_boundary(&wseg, 9).unwrap(),
            east: sample_boundary(&eseg, 9).unwrap(),
            south,
            north,
        };
        let mesh = generate_grid(&edges, 1000, 1e-4).unwrap();
        for i in 0..17 {
            assert_eq!(mesh.node_x(i, 0), edges.south[i].x);
            assert_eq!(mesh.node_y(i, 0), edges.south[i].y);
            assert_eq!(mesh.node_x(i, 8), edges.north[i].x);
            assert_eq!(mesh.node_y(i, 8), edges.north[i].y);
        }
        for j in 1..8 {
            assert_eq!(mesh.node_x(0, j), edges.west[j].x);
            assert_eq!(mesh.node_y(0, j), edges.west[j].y);
            assert_eq!(mesh.node_x(16, j), edges.east[j].x);
            assert_eq!(mesh.node_y(16, j), edges.east[j].y);
        }
    }

    #[test]
    fn smoothing_residual_monotone_on_curved_domain() {
        // Curved south/north edges so the TFI seed is not already harmonic.
        let south = build_spline(&[
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.25),
            Point2::new(2.0, 0.0),
        ])
        .unwrap();
        let north = build_spline(&[
            Point2::new(0.0, 1.0),
            Point2::new(1.0, 0.75),
            Point2::new(2.0, 1.0),
        ])
        .unwrap();
        let west = build_spline(&[Point2::new(0.0, 0.0), Point2::new(0.0, 1.0)]).unwrap();
        let east = build_spline(&[Point2::new(2.0, 0.0), Point2::new(2.0, 1.0)]).unwrap();
        let edges = EdgeSet {
            south: sample_boundary(&south, 21).unwrap(),
            north: sample_boundary(&north, 21).unwrap(),
            west: sample_boundary(&west, 11).unwrap(),
            east: sample_boundary(&east, 11).unwrap(),
        };
        let mesh = generate_grid(&edges, 1000, 1e-4).unwrap();
        let res = mesh.smoothing_residuals();
        assert!(res.len() > 1, "expected several sweeps");
        assert!(res.last().unwrap() < &1e-4);
        for w in res.windows(2) {
            assert!(
                w[1] <= w[0] * (1.0 + 1e-12) + 1e-300,
                "residual increased: {} -> {}",
                w[0],
                w[1]
            );
        }
        assert!(validate_grid(&mesh).valid);
    }

    #[test]
    fn validate_uniform_and_scaled_grids() {
        let uniform = CurvilinearMesh::identity(6, 5);
        let rep = validate_grid(&uniform);
        assert!((rep.min_jacobian - 1.0).abs() < 1e-14);
        assert!((rep.max_jacobian - 1.0).abs() < 1e-14);
        assert!((rep.min_cell_area - 1.0).abs() < 1e-14);
        assert!(rep.valid);

        let scaled = CurvilinearMesh::from_fn(6, 5, |i, j| (2.0 * i as f64, j as f64));
        let rep = validate_grid(&scaled);
        assert!((rep.min_jacobian - 0.5).abs() < 1e-14);
        assert!((rep.max_jacobian - 0.5).abs() < 1e-14);
        assert!(rep.valid);
    }

    #[test]
    fn crossed_quad_flags_invalid() {
        let mut mesh = CurvilinearMesh::identity(4, 4);
        // Swap two adjacent nodes to fold the cells between them.
        let a = mesh.idx(1, 1);
        let b = mesh.idx(2, 1);
        mesh.x.swap(a, b);
        mesh.y.swap(a, b);
        let rep = validate_grid(&mesh);
        assert!(!rep.valid);
        assert!(rep.nonpositive_cells >= 1);
    }

    #[test]
    fn mismatched_edges_and_corners_error() {
        let mut edges = rect_edges(1.0, 1.0, 5, 5);
        edges.north.pop();
        assert!(matches!(
            generate_grid(&edges, 100, 1e-4),
            Err(GridError::EdgeCountMismatch { .. })
        ));

        let mut edges = rect_edges(1.0, 1.0, 5, 5);
        for p in edges.east.iter_mut() {
            p.x += 1e-3;
        }
        assert!(matches!(
            generate_grid(&edges, 100, 1e-4),
            Err(GridError::CornerMismatch { .. })
        ));
    }

    #[test]
    fn mesh_text_round_trip() {
        let mesh = generate_grid(&rect_edges(2.0, 1.0, 5, 4), 1000, 1e-4).unwrap();
        let dir = std::env::temp_dir().join("curvemac_mesh_io_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("mesh.txt");
        mesh.write_text(&path).unwrap();
        let back = CurvilinearMesh::read_text(&path).unwrap();
        assert_eq!(back.n_xi(), 5);
        assert_eq!(back.n_eta(), 4);
        for j in 0..4 {
            for i in 0..5 {
                assert_eq!(back.node_x(i, j), mesh.node_x(i, j));
                assert_eq!(back.node_y(i, j), mesh.node_y(i, j));
            }
        }
    }
}
