//! Boundary conditions.
//!
//! Four families over the four wall orientations, realized through ghost
//! and boundary-face assignments:
//!
//! - `NoSlip` (CNEI): tangential ghost mirrors with opposite sign, normal
//!   face velocity zero;
//! - `FreeSlip` (CLES): tangential ghost reflects about the wall speed,
//!   normal face velocity zero;
//! - `Inflow` (CIPR): like `NoSlip` but with the normal face velocity set
//!   to the injection speed;
//! - `Outflow` (CECO): zero normal gradient, both components copied from
//!   the adjacent interior values.
//!
//! The pressure condition is homogeneous Neumann on all sides: every ghost
//! pressure equals its interior neighbor.

use thiserror::Error;

use crate::field::Field2;
use crate::state::FlowState;

#[derive(Debug, Error)]
pub enum BcError {
    #[error("{side:?} boundary: segment range [{start}, {end}) outside 0..{len}")]
    RangeOutOfBounds {
        side: Side,
        start: usize,
        end: usize,
        len: usize,
    },
    #[error("{side:?} boundary: cells [{start}, {end}) covered by more than one segment")]
    Overlap {
        side: Side,
        start: usize,
        end: usize,
    },
    #[error("{side:?} boundary: cells not covered by any segment")]
    Gap { side: Side },
    #[error("{side:?} boundary: non-finite prescribed velocity {value}")]
    BadVelocity { side: Side, value: f64 },
}

/// Wall orientation; matches the four geometric configuration cases
/// (a = west, b = east, c = north, d = south).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    West,
    East,
    North,
    South,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::West, Side::East, Side::North, Side::South];
}

/// Boundary-condition family applied on a segment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryKind {
    /// CNEI: no-slip, impermeable wall.
    NoSlip,
    /// CLES: free-slip wall moving at `wall_speed` tangentially.
    FreeSlip { wall_speed: f64 },
    /// CIPR: prescribed injection with the given normal face velocity
    /// (positive along the +x axis for west/east walls, +y for
    /// north/south).
    Inflow { speed: f64 },
    /// CECO: continuous ejection, zero normal gradient of both components.
    Outflow,
}

impl BoundaryKind {
    fn class(&self) -> u8 {
        // Application order: walls, then inlets, then outlets.
        match self {
            BoundaryKind::NoSlip | BoundaryKind::FreeSlip { .. } => 0,
            BoundaryKind::Inflow { .. } => 1,
            BoundaryKind::Outflow => 2,
        }
    }
}

/// One contiguous run of boundary cells on a side.
///
/// `range` is a half-open cell index interval along the side: j-cells for
/// west/east, i-cells for north/south. Where two segments of one side
/// meet, the shared tangential ghost entry takes the later writer.
#[derive(Clone, Copy, Debug)]
pub struct BoundarySegment {
    pub side: Side,
    pub kind: BoundaryKind,
    pub range: (usize, usize),
}

/// The full boundary map of a rectangular-topology domain.
#[derive(Clone, Debug)]
pub struct BoundarySpec {
    segments: Vec<BoundarySegment>,
}

impl BoundarySpec {
    pub fn new(segments: Vec<BoundarySegment>) -> Self {
        Self { segments }
    }

    /// One whole-edge segment per side.
    pub fn per_side(
        west: BoundaryKind,
        east: BoundaryKind,
        north: BoundaryKind,
        south: BoundaryKind,
        ncx: usize,
        ncy: usize,
    ) -> Self {
        Self::new(vec![
            BoundarySegment {
                side: Side::West,
                kind: west,
                range: (0, ncy),
            },
            BoundarySegment {
                side: Side::East,
                kind: east,
                range: (0, ncy),
            },
            BoundarySegment {
                side: Side::North,
                kind: north,
                range: (0, ncx),
            },
            BoundarySegment {
                side: Side::South,
                kind: south,
                range: (0, ncx),
            },
        ])
    }

    pub fn segments(&self) -> &[BoundarySegment] {
        &self.segments
    }

    /// Every boundary cell edge must be covered exactly once and all
    /// prescribed velocities must be finite.
    pub fn validate(&self, ncx: usize, ncy: usize) -> Result<(), BcError> {
        for side in Side::ALL {
            let len = match side {
                Side::West | Side::East => ncy,
                Side::North | Side::South => ncx,
            };
            let mut cover = vec![0u8; len];
            for seg in self.segments.iter().filter(|s| s.side == side) {
                let (start, end) = seg.range;
                if start >= end || end > len {
                    return Err(BcError::RangeOutOfBounds {
                        side,
                        start,
                        end,
                        len,
                    });
                }
                match seg.kind {
                    BoundaryKind::FreeSlip { wall_speed: v } | BoundaryKind::Inflow { speed: v }
                        if !v.is_finite() =>
                    {
                        return Err(BcError::BadVelocity { side, value: v });
                    }
                    _ => {}
                }
                for c in cover[start..end].iter_mut() {
                    *c += 1;
                }
            }
            if let Some(start) = cover.iter().position(|&c| c > 1) {
                let end = start + cover[start..].iter().take_while(|&&c| c > 1).count();
                return Err(BcError::Overlap { side, start, end });
            }
            if cover.iter().any(|&c| c == 0) {
                return Err(BcError::Gap { side });
            }
        }
        Ok(())
    }

    /// True if any segment is an outflow.
    pub fn has_outflow(&self) -> bool {
        self.segments
            .iter()
            .any(|s| matches!(s.kind, BoundaryKind::Outflow))
    }

    /// Outflow segments only.
    pub fn outflow_segments(&self) -> impl Iterator<Item = &BoundarySegment> {
        self.segments
            .iter()
            .filter(|s| matches!(s.kind, BoundaryKind::Outflow))
    }
}

/// Set every ghost and boundary-face velocity prescribed by `spec`.
///
/// Segments apply walls first, then inlets, then outlets; within a class,
/// specification order. The spec must have been validated against the
/// state's cell counts.
pub fn apply_velocity_bc(state: &mut FlowState, spec: &BoundarySpec) {
    let mut order: Vec<&BoundarySegment> = spec.segments.iter().collect();
    order.sort_by_key(|s| s.kind.class());
    for seg in order {
        apply_segment(state, seg);
    }
}

fn apply_segment(state: &mut FlowState, seg: &BoundarySegment) {
    let ncx = state.ncx() as isize;
    let ncy = state.ncy() as isize;
    let (start, end) = (seg.range.0 as isize, seg.range.1 as isize);
    match seg.side {
        Side::West => {
            for j in start..end {
                let normal = match seg.kind {
                    BoundaryKind::NoSlip | BoundaryKind::FreeSlip { .. } => 0.0,
                    BoundaryKind::Inflow { speed } => speed,
                    BoundaryKind::Outflow => state.u.at(1, j),
                };
                state.u.set(0, j, normal);
            }
            for j in start..=end {
                let ghost = match seg.kind {
                    BoundaryKind::NoSlip | BoundaryKind::Inflow { .. } => -state.v.at(0, j),
                    BoundaryKind::FreeSlip { wall_speed } => 2.0 * wall_speed - state.v.at(0, j),
                    BoundaryKind::Outflow => state.v.at(0, j),
                };
                state.v.set(-1, j, ghost);
            }
        }
        Side::East => {
            for j in start..end {
                let normal = match seg.kind {
                    BoundaryKind::NoSlip | BoundaryKind::FreeSlip { .. } => 0.0,
                    BoundaryKind::Inflow { speed } => speed,
                    BoundaryKind::Outflow => state.u.at(ncx - 1, j),
                };
                state.u.set(ncx, j, normal);
            }
            for j in start..=end {
                let ghost = match seg.kind {
                    BoundaryKind::NoSlip | BoundaryKind::Inflow { .. } => -state.v.at(ncx - 1, j),
                    BoundaryKind::FreeSlip { wall_speed } => {
                        2.0 * wall_speed - state.v.at(ncx - 1, j)
                    }
                    BoundaryKind::Outflow => state.v.at(ncx - 1, j),
                };
                state.v.set(ncx, j, ghost);
            }
        }
        Side::North => {
            for i in start..end {
                let normal = match seg.kind {
                    BoundaryKind::NoSlip | BoundaryKind::FreeSlip { .. } => 0.0,
                    BoundaryKind::Inflow { speed } => speed,
                    BoundaryKind::Outflow => state.v.at(i, ncy - 1),
                };
                state.v.set(i, ncy, normal);
            }
            for i in start..=end {
                let ghost = match seg.kind {
                    BoundaryKind::NoSlip | BoundaryKind::Inflow { .. } => -state.u.at(i, ncy - 1),
                    BoundaryKind::FreeSlip { wall_speed } => {
                        2.0 * wall_speed - state.u.at(i, ncy - 1)
                    }
                    BoundaryKind::Outflow => state.u.at(i, ncy - 1),
                };
                state.u.set(i, ncy, ghost);
            }
        }
        Side::South => {
            for i in start..end {
                let normal = match seg.kind {
                    BoundaryKind::NoSlip | BoundaryKind::FreeSlip { .. } => 0.0,
                    BoundaryKind::Inflow { speed } => speed,
                    BoundaryKind::Outflow => state.v.at(i, 1),
                };
                state.v.set(i, 0, normal);
            }
            for i in start..=end {
                let ghost = match seg.kind {
                    BoundaryKind::NoSlip | BoundaryKind::Inflow { .. } => -state.u.at(i, 0),
                    BoundaryKind::FreeSlip { wall_speed } => 2.0 * wall_speed - state.u.at(i, 0),
                    BoundaryKind::Outflow => state.u.at(i, 0),
                };
                state.u.set(i, -1, ghost);
            }
        }
    }
}

/// Homogeneous Neumann pressure condition: every ghost pressure equals its
/// interior neighbor (corner ghosts take the diagonal interior cell).
pub fn apply_pressure_bc(p: &mut Field2, ncx: usize, ncy: usize) {
    let ncx = ncx as isize;
    let ncy = ncy as isize;
    for j in 0..ncy {
        p.set(-1, j, p.at(0, j));
        p.set(ncx, j, p.at(ncx - 1, j));
    }
    for i in 0..ncx {
        p.set(i, -1, p.at(i, 0));
        p.set(i, ncy, p.at(i, ncy - 1));
    }
    p.set(-1, -1, p.at(0, 0));
    p.set(ncx, -1, p.at(ncx - 1, 0));
    p.set(-1, ncy, p.at(0, ncy - 1));
    p.set(ncx, ncy, p.at(ncx - 1, ncy - 1));
}
