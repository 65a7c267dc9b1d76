//! Dense 2D scalar storage with an optional ghost margin.
//!
//! Staggered-grid fields index naturally from -1 (ghost) up to the last
//! face/cell, so the accessor takes signed indices and the struct records
//! the logical index of the first stored entry.

/// Row-major 2D array of `f64` addressed by signed logical indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Field2 {
    i0: isize,
    j0: isize,
    ni: usize,
    nj: usize,
    data: Vec<f64>,
}

impl Field2 {
    /// Allocate a zero-filled field covering `i0..i0+ni` by `j0..j0+nj`.
    pub fn new(i0: isize, j0: isize, ni: usize, nj: usize) -> Self {
        Self {
            i0,
            j0,
            ni,
            nj,
            data: vec![0.0; ni * nj],
        }
    }

    /// First logical index in i.
    pub fn i0(&self) -> isize {
        self.i0
    }

    /// First logical index in j.
    pub fn j0(&self) -> isize {
        self.j0
    }

    /// Extent in i (number of stored columns).
    pub fn ni(&self) -> usize {
        self.ni
    }

    /// Extent in j (number of stored rows).
    pub fn nj(&self) -> usize {
        self.nj
    }

    #[inline]
    fn idx(&self, i: isize, j: isize) -> usize {
        debug_assert!(
            i >= self.i0 && i < self.i0 + self.ni as isize,
            "i index {} out of range [{}, {})",
            i,
            self.i0,
            self.i0 + self.ni as isize
        );
        debug_assert!(
            j >= self.j0 && j < self.j0 + self.nj as isize,
            "j index {} out of range [{}, {})",
            j,
            self.j0,
            self.j0 + self.nj as isize
        );
        (j - self.j0) as usize * self.ni + (i - self.i0) as usize
    }

    #[inline]
    pub fn at(&self, i: isize, j: isize) -> f64 {
        self.data[self.idx(i, j)]
    }

    #[inline]
    pub fn at_mut(&mut self, i: isize, j: isize) -> &mut f64 {
        let k = self.idx(i, j);
        &mut self.data[k]
    }

    #[inline]
    pub fn set(&mut self, i: isize, j: isize, value: f64) {
        let k = self.idx(i, j);
        self.data[k] = value;
    }

    pub fn fill(&mut self, value: f64) {
        self.data.fill(value);
    }

    /// Raw row-major contents, ghosts included.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Maximum absolute entry over the whole storage.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// True if every entry is finite.
    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}
