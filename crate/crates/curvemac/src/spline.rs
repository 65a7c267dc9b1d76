//! Parametrized interpolating splines for the domain edges.
//!
//! Each edge of the physical domain is a natural cubic spline through an
//! ordered list of control points, parametrized by normalized cumulative
//! chord length on [0, 1]. Two control points degenerate to the straight
//! segment.

use std::path::Path;

use thiserror::Error;

/// A point in the physical plane, meters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point2) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }
}

#[derive(Debug, Error)]
pub enum SplineError {
    #[error("spline needs at least 2 control points, got {0}")]
    TooFewPoints(usize),
    #[error("coincident consecutive control points at index {0} (zero chord)")]
    ZeroChord(usize),
    #[error("parameter {0} outside [0, 1]")]
    ParameterOutOfRange(f64),
    #[error("boundary sampling needs at least 2 nodes, got {0}")]
    TooFewSamples(usize),
    #[error("geometry file: {0}")]
    GeometryFile(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Per-segment cubic coefficients: s(d) = a + b d + c d^2 + e d^3 for
/// d = t - t_i on segment i.
#[derive(Clone, Copy, Debug)]
struct SegmentCoeffs {
    a: f64,
    b: f64,
    c: f64,
    e: f64,
}

/// Piecewise-cubic interpolating curve for one boundary edge.
///
/// Invariants: knots strictly increasing with knots[0] = 0 and
/// knots[last] = 1; evaluating at a knot reproduces the corresponding
/// control point.
#[derive(Clone, Debug)]
pub struct ParametricSpline {
    control_points: Vec<Point2>,
    knots: Vec<f64>,
    coeffs_x: Vec<SegmentCoeffs>,
    coeffs_y: Vec<SegmentCoeffs>,
}

impl ParametricSpline {
    pub fn control_points(&self) -> &[Point2] {
        &self.control_points
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// First control point.
    pub fn start(&self) -> Point2 {
        self.control_points[0]
    }

    /// Last control point.
    pub fn end(&self) -> Point2 {
        *self.control_points.last().unwrap()
    }
}

/// Build a natural cubic spline through `points`, parametrized by
/// normalized cumulative chord length.
pub fn build_spline(points: &[Point2]) -> Result<ParametricSpline, SplineError> {
    let n = points.len();
    if n < 2 {
        return Err(SplineError::TooFewPoints(n));
    }

    let mut knots = Vec::with_capacity(n);
    knots.push(0.0);
    let mut acc = 0.0;
    for k in 1..n {
        let chord = points[k].distance(points[k - 1]);
        if chord == 0.0 {
            return Err(SplineError::ZeroChord(k));
        }
        acc += chord;
        knots.push(acc);
    }
    let total = acc;
    for t in knots.iter_mut() {
        *t /= total;
    }
    // Pin the last knot exactly.
    knots[n - 1] = 1.0;

    let xs: Vec<f64> = points.iter().map(|p| p.x).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.y).collect();
    let coeffs_x = natural_cubic_coeffs(&knots, &xs);
    let coeffs_y = natural_cubic_coeffs(&knots, &ys);

    Ok(ParametricSpline {
        control_points: points.to_vec(),
        knots,
        coeffs_x,
        coeffs_y,
    })
}

/// Natural cubic spline coefficients for values `f` at `knots`.
///
/// Solves the standard tridiagonal system for the interior second
/// derivatives (Thomas algorithm) with zero second derivative at both ends.
fn natural_cubic_coeffs(knots: &[f64], f: &[f64]) -> Vec<SegmentCoeffs> {
    let n = knots.len();
    let nseg = n - 1;
    let h: Vec<f64> = (0..nseg).map(|i| knots[i + 1] - knots[i]).collect();

    // Second derivatives m[0..n], natural ends m[0] = m[n-1] = 0.
    let mut m = vec![0.0; n];
    if n > 2 {
        let rows = n - 2;
        let mut diag = vec![0.0; rows];
        let mut upper = vec![0.0; rows];
        let mut rhs = vec![0.0; rows];
        for r in 0..rows {
            let i = r + 1;
            diag[r] = 2.0 * (h[i - 1] + h[i]);
            upper[r] = h[i];
            rhs[r] = 6.0 * ((f[i + 1] - f[i]) / h[i] - (f[i] - f[i - 1]) / h[i - 1]);
        }
        // Forward elimination; the sub-diagonal of row r is h[r+1-1] = h[r].
        for r in 1..rows {
            let w = h[r] / diag[r - 1];
            diag[r] -= w * upper[r - 1];
            rhs[r] -= w * rhs[r - 1];
        }
        m[rows] = rhs[rows - 1] / diag[rows - 1];
        for r in (0..rows - 1).rev() {
            m[r + 1] = (rhs[r] - upper[r] * m[r + 2]) / diag[r];
        }
    }

    (0..nseg)
        .map(|i| {
            let hi = h[i];
            SegmentCoeffs {
                a: f[i],
                b: (f[i + 1] - f[i]) / hi - hi * (2.0 * m[i] + m[i + 1]) / 6.0,
                c: m[i] / 2.0,
                e: (m[i + 1] - m[i]) / (6.0 * hi),
            }
        })
        .collect()
}

/// Evaluate the spline at parameter `t` in [0, 1].
///
/// Endpoints return the first/last control point exactly.
pub fn evaluate_spline(s: &ParametricSpline, t: f64) -> Result<Point2, SplineError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(SplineError::ParameterOutOfRange(t));
    }
    if t == 0.0 {
        return Ok(s.start());
    }
    if t == 1.0 {
        return Ok(s.end());
    }
    // Segment index: last knot <= t.
    let seg = match s.knots.binary_search_by(|k| k.partial_cmp(&t).unwrap()) {
        Ok(k) => k.min(s.knots.len() - 2),
        Err(k) => k - 1,
    };
    let d = t - s.knots[seg];
    let cx = &s.coeffs_x[seg];
    let cy = &s.coeffs_y[seg];
    Ok(Point2::new(
        cx.a + d * (cx.b + d * (cx.c + d * cx.e)),
        cy.a + d * (cy.b + d * (cy.c + d * cy.e)),
    ))
}

/// Derivative of the spline with respect to the parameter at `t`.
pub fn spline_derivative(s: &ParametricSpline, t: f64) -> Result<(f64, f64), SplineError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(SplineError::ParameterOutOfRange(t));
    }
    let seg = match s.knots.binary_search_by(|k| k.partial_cmp(&t).unwrap()) {
        Ok(k) => k.min(s.knots.len() - 2),
        Err(k) => k - 1,
    };
    let d = t - s.knots[seg];
    let cx = &s.coeffs_x[seg];
    let cy = &s.coeffs_y[seg];
    Ok((
        cx.b + d * (2.0 * cx.c + 3.0 * d * cx.e),
        cy.b + d * (2.0 * cy.c + 3.0 * d * cy.e),
    ))
}

/// Sample `n` points at uniformly spaced parameters t = i/(n-1).
pub fn sample_boundary(s: &ParametricSpline, n: usize) -> Result<Vec<Point2>, SplineError> {
    if n < 2 {
        return Err(SplineError::TooFewSamples(n));
    }
    (0..n)
        .map(|i| {
            let t = if i == n - 1 {
                1.0
            } else {
                i as f64 / (n - 1) as f64
            };
            evaluate_spline(s, t)
        })
        .collect()
}

/// Read the four edge point lists of a geometry file.
///
/// Format: one `x y` pair per line, four blocks separated by a line that
/// contains only `#edge`, in the order south, north, west, east.
pub fn read_edge_points(path: &Path) -> Result<[Vec<Point2>; 4], SplineError> {
    let text = std::fs::read_to_string(path)?;
    let mut blocks: Vec<Vec<Point2>> = vec![Vec::new()];
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "#edge" {
            blocks.push(Vec::new());
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<f64, SplineError> {
            tok.ok_or_else(|| {
                SplineError::GeometryFile(format!("line {}: expected `x y`", lineno + 1))
            })?
            .parse::<f64>()
            .map_err(|_| {
                SplineError::GeometryFile(format!("line {}: malformed coordinate", lineno + 1))
            })
        };
        let x = parse(it.next())?;
        let y = parse(it.next())?;
        if it.next().is_some() {
            return Err(SplineError::GeometryFile(format!(
                "line {}: trailing tokens after `x y`",
                lineno + 1
            )));
        }
        blocks.last_mut().unwrap().push(Point2::new(x, y));
    }
    if blocks.len() != 4 {
        return Err(SplineError::GeometryFile(format!(
            "expected 4 edge blocks (south, north, west, east), got {}",
            blocks.len()
        )));
    }
    let mut it = blocks.into_iter();
    Ok([
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
    ])
}
