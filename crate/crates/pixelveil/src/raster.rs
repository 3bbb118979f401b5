//! Image and region data model.
//!
//! A [`RasterImage`] is a plain 8-bit RGB raster stored row-major. A
//! [`Region`] selects a rectangular window of it, 0-based and half-open on
//! both axes. [`extract_region`] slices the window into three per-channel
//! matrices ([`ChannelPlane`]s, bundled as a [`ChannelTriple`]) and
//! [`insert_region`] puts a triple back, leaving every pixel outside the
//! window untouched.
//!
//! All values here are immutable; every operation returns a new value, so
//! round trips are easy to test and concurrent use needs no locking.

use thiserror::Error;

/// Errors from constructing or slicing rasters.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum RasterError {
    #[error("image dimensions must be at least 1x1, got {width}x{height}")]
    EmptyImage { width: usize, height: usize },

    #[error("pixel buffer holds {actual} bytes, expected {expected} for a {width}x{height} image")]
    BufferSize {
        width: usize,
        height: usize,
        expected: usize,
        actual: usize,
    },

    #[error("empty row range {start}..{end}")]
    EmptyRows { start: usize, end: usize },

    #[error("empty column range {start}..{end}")]
    EmptyCols { start: usize, end: usize },

    #[error("row range {start}..{end} exceeds image height {height}")]
    RowsOutOfBounds {
        start: usize,
        end: usize,
        height: usize,
    },

    #[error("column range {start}..{end} exceeds image width {width}")]
    ColsOutOfBounds {
        start: usize,
        end: usize,
        width: usize,
    },

    #[error("plane holds {actual} values, expected {expected} for {rows}x{cols}")]
    PlaneSize {
        rows: usize,
        cols: usize,
        expected: usize,
        actual: usize,
    },

    #[error("channel planes differ in shape: r {r_rows}x{r_cols}, g {g_rows}x{g_cols}, b {b_rows}x{b_cols}")]
    MismatchedPlanes {
        r_rows: usize,
        r_cols: usize,
        g_rows: usize,
        g_cols: usize,
        b_rows: usize,
        b_cols: usize,
    },

    #[error("triple is {rows}x{cols} but region is {region_rows}x{region_cols}")]
    TripleRegionShape {
        rows: usize,
        cols: usize,
        region_rows: usize,
        region_cols: usize,
    },
}

/// An 8-bit RGB raster: `width * height` pixels stored as a flat row-major
/// sequence of interleaved `r, g, b` bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl RasterImage {
    /// Wraps a byte buffer as an image. The buffer must hold exactly
    /// `3 * width * height` bytes.
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self, RasterError> {
        if width == 0 || height == 0 {
            return Err(RasterError::EmptyImage { width, height });
        }
        let expected = 3 * width * height;
        if data.len() != expected {
            return Err(RasterError::BufferSize {
                width,
                height,
                expected,
                actual: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Builds an image by evaluating `f(row, col)` for every pixel.
    ///
    /// # Panics
    ///
    /// Panics if `width` or `height` is zero.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> [u8; 3]) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be at least 1x1");
        let mut data = Vec::with_capacity(3 * width * height);
        for row in 0..height {
            for col in 0..width {
                data.extend_from_slice(&f(row, col));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    /// An image with every pixel set to `rgb`.
    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Self {
        Self::from_fn(width, height, |_, _| rgb)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// The pixel at `(row, col)`.
    ///
    /// # Panics
    ///
    /// Panics if the coordinates are outside the image.
    pub fn pixel(&self, row: usize, col: usize) -> [u8; 3] {
        assert!(row < self.height && col < self.width, "pixel out of bounds");
        let at = 3 * (row * self.width + col);
        [self.data[at], self.data[at + 1], self.data[at + 2]]
    }

    /// The interleaved RGB payload, row-major.
    pub fn as_bytes(&self) -> &[u8] {
        &self.data
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.data
    }
}

/// A rectangular window of an image: 0-based indices, half-open on both
/// axes, rows first.
///
/// Ranges written in the 1-based inclusive `a:b` style (MATLAB and friends)
/// convert as `[a-1, b)`: the window `55:136, 62:124` of an image is
/// `Region::new(54, 136, 61, 124)` here, an 82x63 window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    row_start: usize,
    row_end: usize,
    col_start: usize,
    col_end: usize,
}

impl Region {
    /// A window spanning rows `row_start..row_end` and columns
    /// `col_start..col_end`. Both ranges must be non-empty; bounds against a
    /// concrete image are checked by [`Region::check_within`].
    pub fn new(
        row_start: usize,
        row_end: usize,
        col_start: usize,
        col_end: usize,
    ) -> Result<Self, RasterError> {
        if row_start >= row_end {
            return Err(RasterError::EmptyRows {
                start: row_start,
                end: row_end,
            });
        }
        if col_start >= col_end {
            return Err(RasterError::EmptyCols {
                start: col_start,
                end: col_end,
            });
        }
        Ok(Self {
            row_start,
            row_end,
            col_start,
            col_end,
        })
    }

    /// The full-image window.
    pub fn full(image: &RasterImage) -> Self {
        Self {
            row_start: 0,
            row_end: image.height(),
            col_start: 0,
            col_end: image.width(),
        }
    }

    pub fn row_start(&self) -> usize {
        self.row_start
    }

    pub fn row_end(&self) -> usize {
        self.row_end
    }

    pub fn col_start(&self) -> usize {
        self.col_start
    }

    pub fn col_end(&self) -> usize {
        self.col_end
    }

    /// Window height, the `m` of the extracted planes.
    pub fn rows(&self) -> usize {
        self.row_end - self.row_start
    }

    /// Window width, the `n` of the extracted planes.
    pub fn cols(&self) -> usize {
        self.col_end - self.col_start
    }

    /// Checks that the window lies inside `image`, naming the violated axis
    /// otherwise.
    pub fn check_within(&self, image: &RasterImage) -> Result<(), RasterError> {
        if self.row_end > image.height() {
            return Err(RasterError::RowsOutOfBounds {
                start: self.row_start,
                end: self.row_end,
                height: image.height(),
            });
        }
        if self.col_end > image.width() {
            return Err(RasterError::ColsOutOfBounds {
                start: self.col_start,
                end: self.col_end,
                width: image.width(),
            });
        }
        Ok(())
    }
}

/// One color component of a region viewed as an `rows x cols` matrix of
/// 8-bit values, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelPlane {
    rows: usize,
    cols: usize,
    values: Vec<u8>,
}

impl ChannelPlane {
    /// Wraps a value buffer as a plane. The buffer must hold exactly
    /// `rows * cols` values.
    pub fn new(rows: usize, cols: usize, values: Vec<u8>) -> Result<Self, RasterError> {
        let expected = rows * cols;
        if rows == 0 || cols == 0 || values.len() != expected {
            return Err(RasterError::PlaneSize {
                rows,
                cols,
                expected,
                actual: values.len(),
            });
        }
        Ok(Self { rows, cols, values })
    }

    /// Internal constructor for buffers whose length is correct by
    /// construction.
    pub(crate) fn from_raw(rows: usize, cols: usize, values: Vec<u8>) -> Self {
        debug_assert!(rows > 0 && cols > 0 && values.len() == rows * cols);
        Self { rows, cols, values }
    }

    /// Builds a plane by evaluating `f(row, col)` for every element.
    ///
    /// # Panics
    ///
    /// Panics if `rows` or `cols` is zero.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        assert!(rows > 0 && cols > 0, "plane dimensions must be at least 1x1");
        let mut values = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                values.push(f(i, j));
            }
        }
        Self { rows, cols, values }
    }

    /// A plane with every element set to `value`.
    pub fn filled(rows: usize, cols: usize, value: u8) -> Self {
        Self::from_fn(rows, cols, |_, _| value)
    }

    /// Builds a plane from nested row slices.
    ///
    /// # Panics
    ///
    /// Panics if `rows` is empty or ragged. Meant for literals in tests and
    /// examples.
    pub fn from_rows(rows: &[&[u8]]) -> Self {
        assert!(!rows.is_empty() && !rows[0].is_empty(), "plane must be at least 1x1");
        let cols = rows[0].len();
        let mut values = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            values.extend_from_slice(row);
        }
        Self {
            rows: rows.len(),
            cols,
            values,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of elements, `rows * cols`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // planes are at least 1x1 by construction
    }

    /// The element at `(row, col)`.
    ///
    /// # Panics
    ///
    /// Panics if the coordinates are outside the plane.
    pub fn get(&self, row: usize, col: usize) -> u8 {
        assert!(row < self.rows && col < self.cols, "element out of bounds");
        self.values[row * self.cols + col]
    }

    /// Row-major value slice.
    pub fn values(&self) -> &[u8] {
        &self.values
    }
}

/// The three channel planes of a region. All share the same shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelTriple {
    r: ChannelPlane,
    g: ChannelPlane,
    b: ChannelPlane,
}

impl ChannelTriple {
    pub fn new(r: ChannelPlane, g: ChannelPlane, b: ChannelPlane) -> Result<Self, RasterError> {
        if r.rows() != g.rows()
            || r.cols() != g.cols()
            || r.rows() != b.rows()
            || r.cols() != b.cols()
        {
            return Err(RasterError::MismatchedPlanes {
                r_rows: r.rows(),
                r_cols: r.cols(),
                g_rows: g.rows(),
                g_cols: g.cols(),
                b_rows: b.rows(),
                b_cols: b.cols(),
            });
        }
        Ok(Self { r, g, b })
    }

    pub fn r(&self) -> &ChannelPlane {
        &self.r
    }

    pub fn g(&self) -> &ChannelPlane {
        &self.g
    }

    pub fn b(&self) -> &ChannelPlane {
        &self.b
    }

    /// The planes in `[r, g, b]` order.
    pub fn planes(&self) -> [&ChannelPlane; 3] {
        [&self.r, &self.g, &self.b]
    }

    pub fn into_planes(self) -> (ChannelPlane, ChannelPlane, ChannelPlane) {
        (self.r, self.g, self.b)
    }

    pub fn rows(&self) -> usize {
        self.r.rows()
    }

    pub fn cols(&self) -> usize {
        self.r.cols()
    }
}

/// Slices the region out of `image` as three channel planes: plane `r` at
/// `(i, j)` holds the red component of pixel
/// `(region.row_start() + i, region.col_start() + j)`, likewise `g` and `b`.
pub fn extract_region(image: &RasterImage, region: Region) -> Result<ChannelTriple, RasterError> {
    region.check_within(image)?;
    let (m, n) = (region.rows(), region.cols());
    let mut r = Vec::with_capacity(m * n);
    let mut g = Vec::with_capacity(m * n);
    let mut b = Vec::with_capacity(m * n);
    let bytes = image.as_bytes();
    for row in region.row_start()..region.row_end() {
        let from = 3 * (row * image.width() + region.col_start());
        for px in bytes[from..from + 3 * n].chunks_exact(3) {
            r.push(px[0]);
            g.push(px[1]);
            b.push(px[2]);
        }
    }
    Ok(ChannelTriple {
        r: ChannelPlane::from_raw(m, n, r),
        g: ChannelPlane::from_raw(m, n, g),
        b: ChannelPlane::from_raw(m, n, b),
    })
}

/// Returns a copy of `image` with the region's pixels replaced by the
/// triple's values. Everything outside the region is byte-identical to the
/// input; width and height never change.
pub fn insert_region(
    image: &RasterImage,
    region: Region,
    triple: &ChannelTriple,
) -> Result<RasterImage, RasterError> {
    region.check_within(image)?;
    if triple.rows() != region.rows() || triple.cols() != region.cols() {
        return Err(RasterError::TripleRegionShape {
            rows: triple.rows(),
            cols: triple.cols(),
            region_rows: region.rows(),
            region_cols: region.cols(),
        });
    }
    let mut data = image.as_bytes().to_vec();
    let n = region.cols();
    for i in 0..region.rows() {
        let row = region.row_start() + i;
        let from = 3 * (row * image.width() + region.col_start());
        let dst = &mut data[from..from + 3 * n];
        for (j, px) in dst.chunks_exact_mut(3).enumerate() {
            px[0] = triple.r().get(i, j);
            px[1] = triple.g().get(i, j);
            px[2] = triple.b().get(i, j);
        }
    }
    Ok(RasterImage {
        width: image.width(),
        height: image.height(),
        data,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gradient(width: usize, height: usize) -> RasterImage {
        RasterImage::from_fn(width, height, |row, col| {
            [
                (row * 7 + col) as u8,
                (row + col * 13) as u8,
                (row * col + 3) as u8,
            ]
        })
    }

    #[test]
    fn buffer_length_is_checked() {
        let err = RasterImage::new(2, 2, vec![0; 11]).unwrap_err();
        assert_eq!(
            err,
            RasterError::BufferSize {
                width: 2,
                height: 2,
                expected: 12,
                actual: 11
            }
        );
        assert!(RasterImage::new(0, 2, vec![]).is_err());
    }

    #[test]
    fn single_pixel_extraction() {
        let img = RasterImage::new(1, 1, vec![10, 20, 30]).unwrap();
        let region = Region::full(&img);
        let t = extract_region(&img, region).unwrap();
        assert_eq!(t.r().values(), &[10]);
        assert_eq!(t.g().values(), &[20]);
        assert_eq!(t.b().values(), &[30]);
    }

    #[test]
    fn full_region_extracts_channels_verbatim() {
        let img = gradient(9, 5);
        let t = extract_region(&img, Region::full(&img)).unwrap();
        for row in 0..5 {
            for col in 0..9 {
                let [r, g, b] = img.pixel(row, col);
                assert_eq!(t.r().get(row, col), r);
                assert_eq!(t.g().get(row, col), g);
                assert_eq!(t.b().get(row, col), b);
            }
        }
    }

    #[test]
    fn window_dims_match_one_based_inclusive_conversion() {
        // 1-based inclusive 55:136, 62:124 on a 212x158 image.
        let img = RasterImage::filled(212, 158, [0, 0, 0]);
        let region = Region::new(54, 136, 61, 124).unwrap();
        let t = extract_region(&img, region).unwrap();
        assert_eq!((t.rows(), t.cols()), (82, 63));
    }

    #[test]
    fn extract_insert_round_trip_is_identity() {
        let img = gradient(20, 11);
        let region = Region::new(2, 9, 4, 17).unwrap();
        let t = extract_region(&img, region).unwrap();
        let back = insert_region(&img, region, &t).unwrap();
        assert_eq!(back, img);
    }

    #[test]
    fn insert_changes_only_the_region() {
        let img = RasterImage::filled(2, 2, [0, 0, 0]);
        let region = Region::new(0, 1, 0, 1).unwrap();
        let white = ChannelTriple::new(
            ChannelPlane::from_rows(&[&[255]]),
            ChannelPlane::from_rows(&[&[255]]),
            ChannelPlane::from_rows(&[&[255]]),
        )
        .unwrap();
        let out = insert_region(&img, region, &white).unwrap();
        assert_eq!(out.pixel(0, 0), [255, 255, 255]);
        assert_eq!(out.pixel(0, 1), [0, 0, 0]);
        assert_eq!(out.pixel(1, 0), [0, 0, 0]);
        assert_eq!(out.pixel(1, 1), [0, 0, 0]);
        assert_eq!((out.width(), out.height()), (2, 2));
    }

    #[test]
    fn bounds_errors_name_the_axis() {
        let img = gradient(10, 8);
        let rows_err = extract_region(&img, Region::new(0, 9, 0, 5).unwrap()).unwrap_err();
        assert_eq!(
            rows_err,
            RasterError::RowsOutOfBounds {
                start: 0,
                end: 9,
                height: 8
            }
        );
        let cols_err = extract_region(&img, Region::new(0, 5, 3, 11).unwrap()).unwrap_err();
        assert_eq!(
            cols_err,
            RasterError::ColsOutOfBounds {
                start: 3,
                end: 11,
                width: 10
            }
        );
    }

    #[test]
    fn empty_ranges_are_rejected() {
        assert_eq!(
            Region::new(3, 3, 0, 1).unwrap_err(),
            RasterError::EmptyRows { start: 3, end: 3 }
        );
        assert_eq!(
            Region::new(0, 1, 5, 2).unwrap_err(),
            RasterError::EmptyCols { start: 5, end: 2 }
        );
    }

    #[test]
    fn insert_rejects_mismatched_triple() {
        let img = gradient(6, 6);
        let region = Region::new(0, 3, 0, 3).unwrap();
        let wrong = extract_region(&img, Region::new(0, 2, 0, 3).unwrap()).unwrap();
        let err = insert_region(&img, region, &wrong).unwrap_err();
        assert_eq!(
            err,
            RasterError::TripleRegionShape {
                rows: 2,
                cols: 3,
                region_rows: 3,
                region_cols: 3
            }
        );
    }

    #[test]
    fn triple_requires_matching_plane_shapes() {
        let a = ChannelPlane::filled(2, 3, 0);
        let b = ChannelPlane::filled(3, 2, 0);
        assert!(matches!(
            ChannelTriple::new(a.clone(), b, a.clone()),
            Err(RasterError::MismatchedPlanes { .. })
        ));
    }
}
