//! The position permutation at the core of the cipher: transpose an
//! `m x n` plane, then reinterpret the result in column-major order as
//! `m x n` again.
//!
//! Column-major (Fortran-style) linearization is the canonical flat order
//! inside this module; [`ChannelPlane`] stores its values row-major, and the
//! conversion happens explicitly at this boundary
//! ([`flatten_column_major`] / [`plane_from_column_major`]).
//!
//! Writing the composition out for a source element at `(i, j)` of an
//! `m x n` plane gives the closed form
//!
//! ```text
//! source column-major index  k      = i + j*m
//! destination index          map[k] = j + i*n
//! ```
//!
//! which is a bijection on `{0, .., m*n-1}`, exposed for inspection as
//! [`PositionPermutation`]. [`scramble_plane`] applies it in one gather pass;
//! [`unscramble_plane`] is the exact inverse. Values are only relocated,
//! never altered, so per-plane sums, extrema, and histograms are invariant.
//!
//! Two shapes are worth remembering: a square plane scrambles to its plain
//! transpose, and a single row or column does not move at all.

use thiserror::Error;

use crate::raster::ChannelPlane;

/// Element-count mismatch between a buffer and a target shape.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot arrange {len} values into a {rows}x{cols} plane")]
pub struct ShapeError {
    pub len: usize,
    pub rows: usize,
    pub cols: usize,
}

/// Matrix transpose: output is `n x m` with `out(j, i) = in(i, j)`.
pub fn transpose(plane: &ChannelPlane) -> ChannelPlane {
    let (m, n) = (plane.rows(), plane.cols());
    let src = plane.values();
    let mut out = vec![0u8; m * n];
    for i in 0..m {
        for j in 0..n {
            out[j * m + i] = src[i * n + j];
        }
    }
    ChannelPlane::from_raw(n, m, out)
}

/// Reinterprets the plane's values as a `rows x cols` matrix such that
/// reading input and output in column-major order yields the same sequence.
pub fn reshape_column_major(
    plane: &ChannelPlane,
    rows: usize,
    cols: usize,
) -> Result<ChannelPlane, ShapeError> {
    if rows == 0 || cols == 0 || plane.len() != rows * cols {
        return Err(ShapeError {
            len: plane.len(),
            rows,
            cols,
        });
    }
    let (m, n) = (plane.rows(), plane.cols());
    let src = plane.values();
    let mut out = vec![0u8; plane.len()];
    // q walks both sides in column-major order.
    for q in 0..plane.len() {
        let (a, b) = (q % rows, q / rows);
        out[a * cols + b] = src[(q % m) * n + q / m];
    }
    Ok(ChannelPlane::from_raw(rows, cols, out))
}

/// The plane's values in column-major order.
pub fn flatten_column_major(plane: &ChannelPlane) -> Vec<u8> {
    let (m, n) = (plane.rows(), plane.cols());
    let src = plane.values();
    let mut out = Vec::with_capacity(m * n);
    for j in 0..n {
        for i in 0..m {
            out.push(src[i * n + j]);
        }
    }
    out
}

/// Builds a `rows x cols` plane from values given in column-major order.
pub fn plane_from_column_major(
    rows: usize,
    cols: usize,
    values: &[u8],
) -> Result<ChannelPlane, ShapeError> {
    if rows == 0 || cols == 0 || values.len() != rows * cols {
        return Err(ShapeError {
            len: values.len(),
            rows,
            cols,
        });
    }
    let mut out = vec![0u8; values.len()];
    for (k, &v) in values.iter().enumerate() {
        out[(k % rows) * cols + k / rows] = v;
    }
    Ok(ChannelPlane::from_raw(rows, cols, out))
}

// The scramble in flat row-major terms. For an m x n plane, destination
// element (rd, cd) takes the source's row-major element at rd + cd*m: the
// output is filled column-major while the input is read row-major. The
// inverse reads column-major and refills row-major.

fn scramble_row(src: &[u8], row: &mut [u8], rd: usize, m: usize) {
    for (cd, v) in row.iter_mut().enumerate() {
        *v = src[rd + cd * m];
    }
}

fn unscramble_row(src: &[u8], row: &mut [u8], i: usize, m: usize, n: usize) {
    for (j, v) in row.iter_mut().enumerate() {
        let e = i * n + j;
        *v = src[(e % m) * n + e / m];
    }
}

/// Applies the transpose + column-major-reshape permutation to a plane.
///
/// Output shape equals input shape; equal to
/// `reshape_column_major(&transpose(plane), m, n)` in one pass.
pub fn scramble_plane(plane: &ChannelPlane) -> ChannelPlane {
    let (m, n) = (plane.rows(), plane.cols());
    let src = plane.values();
    let mut out = vec![0u8; m * n];
    for (rd, row) in out.chunks_exact_mut(n).enumerate() {
        scramble_row(src, row, rd, m);
    }
    ChannelPlane::from_raw(m, n, out)
}

/// Inverse of [`scramble_plane`]: `unscramble_plane(&scramble_plane(p)) == p`
/// for every plane, and vice versa.
pub fn unscramble_plane(plane: &ChannelPlane) -> ChannelPlane {
    let (m, n) = (plane.rows(), plane.cols());
    let src = plane.values();
    let mut out = vec![0u8; m * n];
    for (i, row) in out.chunks_exact_mut(n).enumerate() {
        unscramble_row(src, row, i, m, n);
    }
    ChannelPlane::from_raw(m, n, out)
}

/// [`scramble_plane`] with the gather parallelized over output rows.
///
/// Requires the `parallel` feature. The output is identical to the
/// sequential path; only the row order of evaluation differs.
#[cfg(feature = "parallel")]
pub fn par_scramble_plane(plane: &ChannelPlane) -> ChannelPlane {
    use rayon::prelude::*;

    let (m, n) = (plane.rows(), plane.cols());
    let src = plane.values();
    let mut out = vec![0u8; m * n];
    out.par_chunks_exact_mut(n)
        .enumerate()
        .for_each(|(rd, row)| scramble_row(src, row, rd, m));
    ChannelPlane::from_raw(m, n, out)
}

/// [`unscramble_plane`] with the gather parallelized over output rows.
///
/// Requires the `parallel` feature. Output is identical to the sequential
/// path.
#[cfg(feature = "parallel")]
pub fn par_unscramble_plane(plane: &ChannelPlane) -> ChannelPlane {
    use rayon::prelude::*;

    let (m, n) = (plane.rows(), plane.cols());
    let src = plane.values();
    let mut out = vec![0u8; m * n];
    out.par_chunks_exact_mut(n)
        .enumerate()
        .for_each(|(i, row)| unscramble_row(src, row, i, m, n));
    ChannelPlane::from_raw(m, n, out)
}

/// Planes below this element count scramble sequentially even when the
/// `parallel` feature is on; forking the pool costs more than the gather.
#[cfg(feature = "parallel")]
const PAR_MIN_PLANE_LEN: usize = 1 << 15;

#[cfg(feature = "parallel")]
pub(crate) fn scramble_plane_auto(plane: &ChannelPlane) -> ChannelPlane {
    if plane.len() >= PAR_MIN_PLANE_LEN {
        par_scramble_plane(plane)
    } else {
        scramble_plane(plane)
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn scramble_plane_auto(plane: &ChannelPlane) -> ChannelPlane {
    scramble_plane(plane)
}

#[cfg(feature = "parallel")]
pub(crate) fn unscramble_plane_auto(plane: &ChannelPlane) -> ChannelPlane {
    if plane.len() >= PAR_MIN_PLANE_LEN {
        par_unscramble_plane(plane)
    } else {
        unscramble_plane(plane)
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn unscramble_plane_auto(plane: &ChannelPlane) -> ChannelPlane {
    unscramble_plane(plane)
}

/// An explicit bijection on the `m*n` column-major flat indices of a plane.
///
/// `map()[k]` is the destination index of the source element at flat index
/// `k`; for the scramble this is `map[i + j*m] = j + i*n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionPermutation {
    rows: usize,
    cols: usize,
    map: Vec<usize>,
}

/// The scramble's closed-form permutation for an `m x n` plane.
///
/// # Panics
///
/// Panics if `rows` or `cols` is zero.
pub fn scramble_permutation(rows: usize, cols: usize) -> PositionPermutation {
    assert!(rows > 0 && cols > 0, "permutation needs a non-empty plane");
    let mut map = vec![0usize; rows * cols];
    for i in 0..rows {
        for j in 0..cols {
            map[i + j * rows] = j + i * cols;
        }
    }
    PositionPermutation { rows, cols, map }
}

impl PositionPermutation {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Destination index per source index, both in column-major order.
    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(k, &d)| k == d)
    }

    /// The inverse bijection on the same plane shape.
    pub fn inverse(&self) -> PositionPermutation {
        let mut map = vec![0usize; self.map.len()];
        for (k, &d) in self.map.iter().enumerate() {
            map[d] = k;
        }
        PositionPermutation {
            rows: self.rows,
            cols: self.cols,
            map,
        }
    }

    /// Applies the permutation to a column-major-flattened buffer:
    /// `out[map[k]] = src[k]`.
    pub fn apply<T: Copy + Default>(&self, src: &[T]) -> Result<Vec<T>, ShapeError> {
        if src.len() != self.map.len() {
            return Err(ShapeError {
                len: src.len(),
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut out = vec![T::default(); src.len()];
        for (k, &v) in src.iter().enumerate() {
            out[self.map[k]] = v;
        }
        Ok(out)
    }
}
