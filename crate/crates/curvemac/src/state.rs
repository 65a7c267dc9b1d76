//! Staggered flow state and fluid properties.
//!
//! Storage follows the displaced-grid layout: pressure at cell centers,
//! u at the vertical faces, v at the horizontal faces. Ghost layers hold
//! the boundary-condition mirror values:
//!
//! - `u(i, j)`: vertical face i in 0..=ncx, cell row j in -1..=ncy
//!   (ghost rows above and below the domain);
//! - `v(i, j)`: cell column i in -1..=ncx (ghost columns), horizontal
//!   face j in 0..=ncy;
//! - `p(i, j)`: cells with a one-deep ghost ring on all sides.
//!
//! The contravariant face fluxes U, V produced by the projection step are
//! kept alongside the cartesian components; the discrete continuity
//! equation is written in them.

use crate::field::Field2;
use crate::metrics::MetricField;

/// Density and viscosity of the working fluid.
#[derive(Clone, Copy, Debug)]
pub struct FluidProps {
    /// Density, kg/m^3.
    pub rho: f64,
    /// Dynamic viscosity, Pa s.
    pub mu: f64,
    /// Reynolds number of the scenario (bookkeeping).
    pub re: f64,
}

impl FluidProps {
    pub fn new(rho: f64, mu: f64, re: f64) -> Self {
        assert!(rho > 0.0, "rho must be positive");
        assert!(mu > 0.0, "mu must be positive");
        Self { rho, mu, re }
    }

    /// Build from a Reynolds number and reference scales: mu = rho V L / Re.
    pub fn from_reynolds(re: f64, rho: f64, v_ref: f64, l_ref: f64) -> Self {
        assert!(re > 0.0, "Re must be positive");
        Self::new(rho, rho * v_ref * l_ref / re, re)
    }

    /// Kinematic viscosity nu = mu / rho, m^2/s.
    pub fn nu(&self) -> f64 {
        self.mu / self.rho
    }
}

/// Staggered velocity/pressure fields plus the projected contravariant
/// face fluxes, ghost layers included.
#[derive(Clone, Debug)]
pub struct FlowState {
    ncx: usize,
    ncy: usize,
    pub u: Field2,
    pub v: Field2,
    pub p: Field2,
    /// Contravariant flux U through vertical faces, i in 0..=ncx, j in 0..ncy.
    pub flux_u: Field2,
    /// Contravariant flux V through horizontal faces, i in 0..ncx, j in 0..=ncy.
    pub flux_v: Field2,
    /// Current time.
    pub tau: f64,
    /// Completed step count.
    pub step: u64,
}

impl FlowState {
    /// Quiescent state for an ncx x ncy cell grid.
    pub fn quiescent(ncx: usize, ncy: usize) -> Self {
        assert!(ncx >= 2 && ncy >= 2, "need at least 2x2 cells");
        Self {
            ncx,
            ncy,
            u: Field2::new(0, -1, ncx + 1, ncy + 2),
            v: Field2::new(-1, 0, ncx + 2, ncy + 1),
            p: Field2::new(-1, -1, ncx + 2, ncy + 2),
            flux_u: Field2::new(0, 0, ncx + 1, ncy),
            flux_v: Field2::new(0, 0, ncx, ncy + 1),
            tau: 0.0,
            step: 0,
        }
    }

    pub fn ncx(&self) -> usize {
        self.ncx
    }

    pub fn ncy(&self) -> usize {
        self.ncy
    }

    /// v interpolated to vertical face (i, j): arithmetic mean of the four
    /// surrounding horizontal-face values.
    #[inline]
    pub fn v_at_vface(&self, i: isize, j: isize) -> f64 {
        0.25 * (self.v.at(i - 1, j)
            + self.v.at(i, j)
            + self.v.at(i - 1, j + 1)
            + self.v.at(i, j + 1))
    }

    /// u interpolated to horizontal face (i, j).
    #[inline]
    pub fn u_at_hface(&self, i: isize, j: isize) -> f64 {
        0.25 * (self.u.at(i, j - 1)
            + self.u.at(i + 1, j - 1)
            + self.u.at(i, j)
            + self.u.at(i + 1, j))
    }

    /// Recompute every contravariant face flux from the current u, v.
    pub fn refresh_fluxes(&mut self, metrics: &MetricField) {
        for j in 0..self.ncy as isize {
            for i in 0..=self.ncx as isize {
                let m = metrics.vface(i as usize, j as usize);
                let vv = self.v_at_vface(i, j);
                self.flux_u
                    .set(i, j, self.u.at(i, j) * m.y_eta - vv * m.x_eta);
            }
        }
        for j in 0..=self.ncy as isize {
            for i in 0..self.ncx as isize {
                let m = metrics.hface(i as usize, j as usize);
                let uu = self.u_at_hface(i, j);
                self.flux_v
                    .set(i, j, -uu * m.y_xi + self.v.at(i, j) * m.x_xi);
            }
        }
    }

    /// Recompute only the boundary-face fluxes from the current u, v
    /// (interior faces keep their projected values).
    pub fn refresh_boundary_fluxes(&mut self, metrics: &MetricField) {
        let ncx = self.ncx as isize;
        let ncy = self.ncy as isize;
        for j in 0..ncy {
            for i in [0, ncx] {
                let m = metrics.vface(i as usize, j as usize);
                let vv = self.v_at_vface(i, j);
                self.flux_u
                    .set(i, j, self.u.at(i, j) * m.y_eta - vv * m.x_eta);
            }
        }
        for i in 0..ncx {
            for j in [0, ncy] {
                let m = metrics.hface(i as usize, j as usize);
                let uu = self.u_at_hface(i, j);
                self.flux_v
                    .set(i, j, -uu * m.y_xi + self.v.at(i, j) * m.x_xi);
            }
        }
    }

    /// True if all stored fields are finite.
    pub fn all_finite(&self) -> bool {
        self.u.all_finite() && self.v.all_finite() && self.p.all_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::CurvilinearMesh;
    use crate::metrics::compute_metrics;

    #[test]
    fn quiescent_shapes() {
        let s = FlowState::quiescent(4, 3);
        assert_eq!(s.u.ni(), 5);
        assert_eq!(s.u.nj(), 5);
        assert_eq!(s.v.ni(), 6);
        assert_eq!(s.v.nj(), 4);
        assert_eq!(s.p.ni(), 6);
        assert_eq!(s.p.nj(), 5);
        assert!(s.all_finite());
    }

    #[test]
    fn fluxes_match_velocities_on_identity_mesh() {
        let mesh = CurvilinearMesh::identity(6, 5);
        let metrics = compute_metrics(&mesh).unwrap();
        let mut s = FlowState::quiescent(5, 4);
        for j in -1..=4_isize {
            for i in 0..=5_isize {
                s.u.set(i, j, (i + 2 * j) as f64 * 0.1);
            }
        }
        for j in 0..=4_isize {
            for i in -1..=5_isize {
                s.v.set(i, j, (3 * i - j) as f64 * 0.05);
            }
        }
        s.refresh_fluxes(&metrics);
        for j in 0..4_isize {
            for i in 0..=5_isize {
                assert_eq!(s.flux_u.at(i, j), s.u.at(i, j));
            }
        }
        for j in 0..=4_isize {
            for i in 0..5_isize {
                assert_eq!(s.flux_v.at(i, j), s.v.at(i, j));
            }
        }
    }

    #[test]
    fn reynolds_construction() {
        let props = FluidProps::from_reynolds(100.0, 1.0, 1.0, 1.0);
        assert!((props.nu() - 0.01).abs() < 1e-15);
        assert_eq!(props.re, 100.0);
    }
}
