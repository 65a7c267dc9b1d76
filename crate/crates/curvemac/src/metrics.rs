//! Transformation metrics of the curvilinear mesh.
//!
//! Computes x_xi, x_eta, y_xi, y_eta, the jacobian J and the coefficients
//! alpha, beta, gamma at every point the solver stencils touch: mesh nodes
//! (cell corners), cell centers, vertical faces (where u lives) and
//! horizontal faces (where v lives). Interior derivatives are central
//! differences with unit spacing; boundaries use second-order one-sided
//! differences. Face derivatives along the face come straight from the two
//! bounding nodes.

use thiserror::Error;

use crate::grid::CurvilinearMesh;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("non-positive jacobian at {location} ({i}, {j})")]
    NonPositiveJacobian {
        location: &'static str,
        i: usize,
        j: usize,
    },
}

/// Metric quantities evaluated at one point.
#[derive(Clone, Copy, Debug, Default)]
pub struct MetricPoint {
    pub x_xi: f64,
    pub x_eta: f64,
    pub y_xi: f64,
    pub y_eta: f64,
    /// J = (x_xi y_eta - x_eta y_xi)^-1.
    pub jac: f64,
    /// alpha = x_eta^2 + y_eta^2.
    pub alpha: f64,
    /// beta = x_xi x_eta + y_xi y_eta.
    pub beta: f64,
    /// gamma = x_xi^2 + y_xi^2.
    pub gamma: f64,
}

impl MetricPoint {
    fn from_derivs(
        x_xi: f64,
        x_eta: f64,
        y_xi: f64,
        y_eta: f64,
        location: &'static str,
        i: usize,
        j: usize,
    ) -> Result<Self, MetricsError> {
        let det = x_xi * y_eta - x_eta * y_xi;
        if det <= 0.0 {
            return Err(MetricsError::NonPositiveJacobian { location, i, j });
        }
        Ok(Self {
            x_xi,
            x_eta,
            y_xi,
            y_eta,
            jac: 1.0 / det,
            alpha: x_eta * x_eta + y_eta * y_eta,
            beta: x_xi * x_eta + y_xi * y_eta,
            gamma: x_xi * x_xi + y_xi * y_xi,
        })
    }
}

#[derive(Clone, Debug)]
struct MetricGrid {
    ni: usize,
    data: Vec<MetricPoint>,
}

impl MetricGrid {
    #[inline]
    fn at(&self, i: usize, j: usize) -> &MetricPoint {
        &self.data[j * self.ni + i]
    }
}

/// Metrics of one mesh at all solver storage locations.
#[derive(Clone, Debug)]
pub struct MetricField {
    n_xi: usize,
    n_eta: usize,
    nodes: MetricGrid,
    centers: MetricGrid,
    vfaces: MetricGrid,
    hfaces: MetricGrid,
}

impl MetricField {
    pub fn n_xi(&self) -> usize {
        self.n_xi
    }

    pub fn n_eta(&self) -> usize {
        self.n_eta
    }

    pub fn ncx(&self) -> usize {
        self.n_xi - 1
    }

    pub fn ncy(&self) -> usize {
        self.n_eta - 1
    }

    /// Metrics at mesh node (cell corner) (i, j), i < n_xi, j < n_eta.
    #[inline]
    pub fn node(&self, i: usize, j: usize) -> &MetricPoint {
        self.nodes.at(i, j)
    }

    /// Metrics at the center of cell (i, j), i < ncx, j < ncy.
    #[inline]
    pub fn center(&self, i: usize, j: usize) -> &MetricPoint {
        self.centers.at(i, j)
    }

    /// Metrics at vertical face `i` of cell row `j` (the east face of cell
    /// (i-1, j), west face of cell (i, j)); i < n_xi, j < ncy.
    #[inline]
    pub fn vface(&self, i: usize, j: usize) -> &MetricPoint {
        self.vfaces.at(i, j)
    }

    /// Metrics at horizontal face `j` of cell column `i`; i < ncx, j < n_eta.
    #[inline]
    pub fn hface(&self, i: usize, j: usize) -> &MetricPoint {
        self.hfaces.at(i, j)
    }
}

/// Central difference along one index with second-order one-sided closures.
#[inline]
fn diff_1d(get: impl Fn(usize) -> f64, k: usize, n: usize) -> f64 {
    if k == 0 {
        0.5 * (-3.0 * get(0) + 4.0 * get(1) - get(2))
    } else if k == n - 1 {
        0.5 * (3.0 * get(n - 1) - 4.0 * get(n - 2) + get(n - 3))
    } else {
        0.5 * (get(k + 1) - get(k - 1))
    }
}

/// Compute the metric field of a mesh, checking jacobian positivity at
/// every evaluation point.
pub fn compute_metrics(mesh: &CurvilinearMesh) -> Result<MetricField, MetricsError> {
    let n_xi = mesh.n_xi();
    let n_eta = mesh.n_eta();
    let ncx = n_xi - 1;
    let ncy = n_eta - 1;
    assert!(
        n_xi >= 3 && n_eta >= 3,
        "metrics need at least 3 grid lines per direction"
    );

    // Nodes.
    let mut nodes = Vec::with_capacity(n_xi * n_eta);
    for j in 0..n_eta {
        for i in 0..n_xi {
            let x_xi = diff_1d(|k| mesh.node_x(k, j), i, n_xi);
            let y_xi = diff_1d(|k| mesh.node_y(k, j), i, n_xi);
            let x_eta = diff_1d(|k| mesh.node_x(i, k), j, n_eta);
            let y_eta = diff_1d(|k| mesh.node_y(i, k), j, n_eta);
            nodes.push(MetricPoint::from_derivs(
                x_xi, x_eta, y_xi, y_eta, "node", i, j,
            )?);
        }
    }

    // Cell centers: differences of opposite edge midpoints (exact central
    // differences at the center, no boundary cases).
    let mut centers = Vec::with_capacity(ncx * ncy);
    for j in 0..ncy {
        for i in 0..ncx {
            let x_xi = 0.5 * (mesh.node_x(i + 1, j) + mesh.node_x(i + 1, j + 1))
                - 0.5 * (mesh.node_x(i, j) + mesh.node_x(i, j + 1));
            let y_xi = 0.5 * (mesh.node_y(i + 1, j) + mesh.node_y(i + 1, j + 1))
                - 0.5 * (mesh.node_y(i, j) + mesh.node_y(i, j + 1));
            let x_eta = 0.5 * (mesh.node_x(i, j + 1) + mesh.node_x(i + 1, j + 1))
                - 0.5 * (mesh.node_x(i, j) + mesh.node_x(i + 1, j));
            let y_eta = 0.5 * (mesh.node_y(i, j + 1) + mesh.node_y(i + 1, j + 1))
                - 0.5 * (mesh.node_y(i, j) + mesh.node_y(i + 1, j));
            centers.push(MetricPoint::from_derivs(
                x_xi, x_eta, y_xi, y_eta, "center", i, j,
            )?);
        }
    }

    // Vertical faces: eta-derivative from the two bounding nodes,
    // xi-derivative across neighboring face midpoints.
    let mut vfaces = Vec::with_capacity(n_xi * ncy);
    for j in 0..ncy {
        let mid_x = |k: usize| 0.5 * (mesh.node_x(k, j) + mesh.node_x(k, j + 1));
        let mid_y = |k: usize| 0.5 * (mesh.node_y(k, j) + mesh.node_y(k, j + 1));
        for i in 0..n_xi {
            let x_eta = mesh.node_x(i, j + 1) - mesh.node_x(i, j);
            let y_eta = mesh.node_y(i, j + 1) - mesh.node_y(i, j);
            let x_xi = diff_1d(mid_x, i, n_xi);
            let y_xi = diff_1d(mid_y, i, n_xi);
            vfaces.push(MetricPoint::from_derivs(
                x_xi, x_eta, y_xi, y_eta, "vface", i, j,
            )?);
        }
    }

    // Horizontal faces.
    let mut hfaces = Vec::with_capacity(ncx * n_eta);
    for j in 0..n_eta {
        for i in 0..ncx {
            let x_xi = mesh.node_x(i + 1, j) - mesh.node_x(i, j);
            let y_xi = mesh.node_y(i + 1, j) - mesh.node_y(i, j);
            let mid_x = |k: usize| 0.5 * (mesh.node_x(i, k) + mesh.node_x(i + 1, k));
            let mid_y = |k: usize| 0.5 * (mesh.node_y(i, k) + mesh.node_y(i + 1, k));
            let x_eta = diff_1d(mid_x, j, n_eta);
            let y_eta = diff_1d(mid_y, j, n_eta);
            hfaces.push(MetricPoint::from_derivs(
                x_xi, x_eta, y_xi, y_eta, "hface", i, j,
            )?);
        }
    }

    Ok(MetricField {
        n_xi,
        n_eta,
        nodes: MetricGrid {
            ni: n_xi,
            data: nodes,
        },
        centers: MetricGrid {
            ni: ncx,
            data: centers,
        },
        vfaces: MetricGrid {
            ni: n_xi,
            data: vfaces,
        },
        hfaces: MetricGrid {
            ni: ncx,
            data: hfaces,
        },
    })
}

/// Contravariant velocity components at a point with the given metrics:
/// U = u y_eta - v x_eta, V = -u y_xi + v x_xi.
#[inline]
pub fn contravariant_velocity(u: f64, v: f64, m: &MetricPoint) -> (f64, f64) {
    (u * m.y_eta - v * m.x_eta, -u * m.y_xi + v * m.x_xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::CurvilinearMesh;

    fn for_all_points(m: &MetricField, mut f: impl FnMut(&MetricPoint)) {
        for j in 0..m.n_eta() {
            for i in 0..m.n_xi() {
                f(m.node(i, j));
            }
        }
        for j in 0..m.ncy() {
            for i in 0..m.ncx() {
                f(m.center(i, j));
            }
        }
        for j in 0..m.ncy() {
            for i in 0..m.n_xi() {
                f(m.vface(i, j));
            }
        }
        for j in 0..m.n_eta() {
            for i in 0..m.ncx() {
                f(m.hface(i, j));
            }
        }
    }

    #[test]
    fn identity_mesh_reduces_to_cartesian() {
        let mesh = CurvilinearMesh::identity(7, 6);
        let m = compute_metrics(&mesh).unwrap();
        for_all_points(&m, |p| {
            assert_eq!(p.jac, 1.0);
            assert_eq!(p.alpha, 1.0);
            assert_eq!(p.beta, 0.0);
            assert_eq!(p.gamma, 1.0);
            assert_eq!(p.x_xi, 1.0);
            assert_eq!(p.y_eta, 1.0);
            assert_eq!(p.x_eta, 0.0);
            assert_eq!(p.y_xi, 0.0);
        });
    }

    #[test]
    fn stretched_mesh_metrics() {
        let mesh = CurvilinearMesh::from_fn(7, 6, |i, j| (2.0 * i as f64, j as f64));
        let m = compute_metrics(&mesh).unwrap();
        for_all_points(&m, |p| {
            assert!((p.jac - 0.5).abs() < 1e-14);
            assert!((p.alpha - 1.0).abs() < 1e-14);
            assert!(p.beta.abs() < 1e-14);
            assert!((p.gamma - 4.0).abs() < 1e-14);
        });
    }

    #[test]
    fn rotated_mesh_is_orthogonal() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mesh = CurvilinearMesh::from_fn(7, 7, |i, j| {
            let (i, j) = (i as f64, j as f64);
            ((i - j) * s, (i + j) * s)
        });
        let m = compute_metrics(&mesh).unwrap();
        for_all_points(&m, |p| {
            assert!((p.jac - 1.0).abs() < 1e-12);
            assert!(p.beta.abs() < 1e-12);
            assert!((p.alpha - 1.0).abs() < 1e-12);
            assert!((p.gamma - 1.0).abs() < 1e-12);
        });
    }

    #[test]
    fn determinant_identity_on_curved_mesh() {
        // alpha gamma - beta^2 = 1/J^2 at every stored point.
        let mesh = CurvilinearMesh::from_fn(9, 8, |i, j| {
            let (s, t) = (i as f64, j as f64);
            (s + 0.15 * (0.7 * t).sin(), t + 0.2 * (0.5 * s).cos())
        });
        let m = compute_metrics(&mesh).unwrap();
        for_all_points(&m, |p| {
            let lhs = p.alpha * p.gamma - p.beta * p.beta;
            let rhs = 1.0 / (p.jac * p.jac);
            assert!(
                (lhs - rhs).abs() <= 1e-10 * rhs.abs(),
                "identity violated: {lhs} vs {rhs}"
            );
        });
    }

    #[test]
    fn folded_mesh_reports_location() {
        let mesh = CurvilinearMesh::from_fn(5, 5, |i, j| {
            // Reflect in x: negative determinant everywhere.
            (-(i as f64), j as f64)
        });
        assert!(matches!(
            compute_metrics(&mesh),
            Err(MetricsError::NonPositiveJacobian { .. })
        ));
    }

    #[test]
    fn contravariant_identity_and_shear() {
        let id = MetricPoint::from_derivs(1.0, 0.0, 0.0, 1.0, "node", 0, 0).unwrap();
        assert_eq!(contravariant_velocity(2.0, 3.0, &id), (2.0, 3.0));
        assert_eq!(contravariant_velocity(0.0, 0.0, &id), (0.0, 0.0));

        // Sheared mesh x = i + 0.5 j, y = j.
        let sheared = MetricPoint::from_derivs(1.0, 0.5, 0.0, 1.0, "node", 0, 0).unwrap();
        let (cu, cv) = contravariant_velocity(0.0, 1.0, &sheared);
        assert_eq!(cu, -0.5);
        assert_eq!(cv, 1.0);
    }

    #[test]
    fn contravariant_is_linear() {
        let m = MetricPoint::from_derivs(1.1, 0.3, -0.2, 0.9, "node", 0, 0).unwrap();
        let (u1, v1) = (0.7, -1.3);
        let (u2, v2) = (-0.4, 2.2);
        let (a, b) = (1.75, -0.6);
        let (cu1, cv1) = contravariant_velocity(u1, v1, &m);
        let (cu2, cv2) = contravariant_velocity(u2, v2, &m);
        let (cu, cv) = contravariant_velocity(a * u1 + b * u2, a * v1 + b * v2, &m);
        assert!((cu - (a * cu1 + b * cu2)).abs() < 1e-14);
        assert!((cv - (a * cv1 + b * cv2)).abs() < 1e-14);
    }
}
