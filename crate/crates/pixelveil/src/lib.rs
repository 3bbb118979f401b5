//! Lossless, reversible masking of rectangular image regions.
//!
//! The core transform treats each RGB channel of a selected region as an
//! `m x n` matrix, transposes it, and reinterprets the transpose in
//! column-major order as `m x n` again. The composition is a fixed
//! permutation of the region's pixel positions: every value moves, none
//! change, the image keeps its exact size, and the inverse restores the
//! original bit for bit. An optional channel interchange additionally
//! reassigns whole planes among the R/G/B slots.
//!
//! This is reversible masking, not semantic security. The transform carries
//! no key: anyone who knows (or guesses) the region coordinates can undo
//! it. Use it where recoverable redaction is the point, never where
//! confidentiality against an adversary matters.
//!
//! Module map:
//!
//! - [`raster`] — images, regions, channel planes, extract/insert
//! - [`permute`] — the transpose-reshape permutation and its closed form
//! - [`cipher`] — region and image encryption plus sidecar metadata
//! - [`analysis`] — histograms, sums, correlations, traces, CSV reports
//! - [`ppm`] — bit-exact binary PPM (P6) codec
//!
//! With the `parallel` feature (on by default) the plane permutations and
//! histograms also come in rayon-backed variants, and the image-level
//! operations pick them automatically for large regions; outputs are
//! identical to the sequential paths.
//!
//! ```
//! use pixelveil::{decrypt_image, encrypt_image, ChannelPermutation, RasterImage, Region};
//!
//! let image = RasterImage::from_fn(20, 12, |row, col| [row as u8, col as u8, 7]);
//! let region = Region::new(2, 10, 4, 16)?;
//! let cipher = encrypt_image(&image, region, ChannelPermutation::Gbr)?;
//!
//! assert_eq!((cipher.width(), cipher.height()), (20, 12));
//! assert_eq!(decrypt_image(&cipher, region, ChannelPermutation::Gbr)?, image);
//! # Ok::<(), pixelveil::raster::RasterError>(())
//! ```

pub mod analysis;
pub mod cipher;
pub mod permute;
pub mod ppm;
pub mod raster;

pub use cipher::{
    decrypt_image, encrypt_image, read_metadata, write_metadata, ChannelPermutation,
    CipherMetadata,
};
pub use raster::{
    extract_region, insert_region, ChannelPlane, ChannelTriple, RasterImage, Region,
};
