//! End-to-end encryption of an image region: per-channel position scramble,
//! optional channel interchange, and the sidecar metadata needed to undo
//! both.
//!
//! Encryption scrambles each plane with the transpose-reshape permutation
//! and then reassigns the three planes among the R/G/B slots according to a
//! [`ChannelPermutation`] (the default, [`ChannelPermutation::Identity`],
//! leaves the slots alone). Decryption applies the inverse interchange and
//! then unscrambles. Because all three planes share one position
//! permutation, scrambling before or after the interchange would give the
//! same result; the order here is fixed as scramble-then-interchange and
//! covered by tests.
//!
//! The transform carries no key: region coordinates and the permutation
//! name are all a decrypter needs, and the sidecar text format records
//! exactly that.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::permute::{scramble_plane_auto, unscramble_plane_auto};
use crate::raster::{
    extract_region, insert_region, ChannelPlane, ChannelTriple, RasterError, RasterImage, Region,
};

/// Current sidecar format version.
pub const METADATA_VERSION: u32 = 1;

/// Algorithm tag written to and required in sidecar files.
pub const METADATA_ALGORITHM: &str = "transpose-reshape";

/// One of the six permutations of the (R, G, B) channel slots.
///
/// The name spells where each output slot takes its values from:
/// `rgb2gbr` fills the output (R, G, B) from the input (G, B, R).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelPermutation {
    Identity,
    Gbr,
    Brg,
    Rbg,
    Grb,
    Bgr,
}

impl ChannelPermutation {
    /// All six permutations, identity first.
    pub const ALL: [ChannelPermutation; 6] = [
        ChannelPermutation::Identity,
        ChannelPermutation::Gbr,
        ChannelPermutation::Brg,
        ChannelPermutation::Rbg,
        ChannelPermutation::Grb,
        ChannelPermutation::Bgr,
    ];

    /// Canonical text name, as used in sidecar files and on the CLI.
    pub fn as_str(&self) -> &'static str {
        match self {
            ChannelPermutation::Identity => "identity",
            ChannelPermutation::Gbr => "rgb2gbr",
            ChannelPermutation::Brg => "rgb2brg",
            ChannelPermutation::Rbg => "rgb2rbg",
            ChannelPermutation::Grb => "rgb2grb",
            ChannelPermutation::Bgr => "rgb2bgr",
        }
    }

    /// Source plane index (0 = r, 1 = g, 2 = b) for each output slot.
    fn sources(&self) -> [usize; 3] {
        match self {
            ChannelPermutation::Identity => [0, 1, 2],
            ChannelPermutation::Gbr => [1, 2, 0],
            ChannelPermutation::Brg => [2, 0, 1],
            ChannelPermutation::Rbg => [0, 2, 1],
            ChannelPermutation::Grb => [1, 0, 2],
            ChannelPermutation::Bgr => [2, 1, 0],
        }
    }

    /// The permutation that undoes this one. The three-cycles `rgb2gbr` and
    /// `rgb2brg` invert each other; the swaps and the identity are their own
    /// inverses.
    pub fn inverse(&self) -> ChannelPermutation {
        match self {
            ChannelPermutation::Gbr => ChannelPermutation::Brg,
            ChannelPermutation::Brg => ChannelPermutation::Gbr,
            other => *other,
        }
    }

    /// Reassigns the triple's planes among the output channel slots.
    pub fn apply(&self, triple: ChannelTriple) -> ChannelTriple {
        if *self == ChannelPermutation::Identity {
            return triple;
        }
        let [s0, s1, s2] = self.sources();
        let (r, g, b) = triple.into_planes();
        let mut planes = [Some(r), Some(g), Some(b)];
        let take = |planes: &mut [Option<ChannelPlane>; 3], idx: usize| {
            planes[idx].take().expect("each source used exactly once")
        };
        let out_r = take(&mut planes, s0);
        let out_g = take(&mut planes, s1);
        let out_b = take(&mut planes, s2);
        ChannelTriple::new(out_r, out_g, out_b).expect("relabeling keeps shapes")
    }
}

impl fmt::Display for ChannelPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Error for channel-permutation names that are not one of the six
/// canonical ones.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown channel permutation `{0}` (expected identity, rgb2gbr, rgb2brg, rgb2rbg, rgb2grb or rgb2bgr)")]
pub struct UnknownPermutation(pub String);

impl FromStr for ChannelPermutation {
    type Err = UnknownPermutation;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ChannelPermutation::ALL
            .iter()
            .copied()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| UnknownPermutation(s.to_string()))
    }
}

fn scramble_triple(triple: &ChannelTriple) -> ChannelTriple {
    ChannelTriple::new(
        scramble_plane_auto(triple.r()),
        scramble_plane_auto(triple.g()),
        scramble_plane_auto(triple.b()),
    )
    .expect("per-plane transforms keep shapes")
}

fn unscramble_triple(triple: &ChannelTriple) -> ChannelTriple {
    ChannelTriple::new(
        unscramble_plane_auto(triple.r()),
        unscramble_plane_auto(triple.g()),
        unscramble_plane_auto(triple.b()),
    )
    .expect("per-plane transforms keep shapes")
}

/// Encrypts a region triple: scrambles each plane, then interchanges the
/// channel slots per `cp`. Dimensions are unchanged.
pub fn encrypt_region(triple: &ChannelTriple, cp: ChannelPermutation) -> ChannelTriple {
    cp.apply(scramble_triple(triple))
}

/// Inverse of [`encrypt_region`] with the same `cp`: undoes the interchange,
/// then unscrambles each plane.
pub fn decrypt_region(triple: &ChannelTriple, cp: ChannelPermutation) -> ChannelTriple {
    unscramble_triple(&cp.inverse().apply(triple.clone()))
}

/// Encrypts `region` of `image` in place of the plain content; everything
/// outside the region, and the image dimensions, are untouched.
pub fn encrypt_image(
    image: &RasterImage,
    region: Region,
    cp: ChannelPermutation,
) -> Result<RasterImage, RasterError> {
    let triple = extract_region(image, region)?;
    insert_region(image, region, &encrypt_region(&triple, cp))
}

/// Inverse of [`encrypt_image`] given the same region and permutation.
pub fn decrypt_image(
    image: &RasterImage,
    region: Region,
    cp: ChannelPermutation,
) -> Result<RasterImage, RasterError> {
    let triple = extract_region(image, region)?;
    insert_region(image, region, &decrypt_region(&triple, cp))
}

/// The parameters a decrypter needs, as recorded in a sidecar file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CipherMetadata {
    pub version: u32,
    pub region: Region,
    pub channel_perm: ChannelPermutation,
}

impl CipherMetadata {
    pub fn new(region: Region, channel_perm: ChannelPermutation) -> Self {
        Self {
            version: METADATA_VERSION,
            region,
            channel_perm,
        }
    }
}

/// Sidecar parse errors. Lines are numbered from 1.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetadataError {
    #[error("line {line}: expected key=value, got `{content}`")]
    Malformed { line: usize, content: String },

    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },

    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },

    #[error("line {line}: bad value `{value}` for {key}")]
    BadValue {
        line: usize,
        key: &'static str,
        value: String,
    },

    #[error("line {line}: {source}")]
    BadPermutation {
        line: usize,
        source: UnknownPermutation,
    },

    #[error("line {line}: unsupported version `{version}`, expected {METADATA_VERSION}")]
    BadVersion { line: usize, version: String },

    #[error("line {line}: unknown algorithm `{algorithm}`, expected {METADATA_ALGORITHM}")]
    BadAlgorithm { line: usize, algorithm: String },

    #[error("missing key `{key}`")]
    MissingKey { key: &'static str },
}

/// Renders metadata in the sidecar text format: UTF-8, LF line endings,
/// fixed key order.
///
/// ```text
/// version=1
/// region_rows=54..136
/// region_cols=61..124
/// channel_perm=identity
/// algorithm=transpose-reshape
/// ```
pub fn write_metadata(meta: &CipherMetadata) -> String {
    format!(
        "version={}\nregion_rows={}..{}\nregion_cols={}..{}\nchannel_perm={}\nalgorithm={}\n",
        meta.version,
        meta.region.row_start(),
        meta.region.row_end(),
        meta.region.col_start(),
        meta.region.col_end(),
        meta.channel_perm,
        METADATA_ALGORITHM,
    )
}

fn parse_range(
    line: usize,
    key: &'static str,
    value: &str,
) -> Result<(usize, usize), MetadataError> {
    let bad = || MetadataError::BadValue {
        line,
        key,
        value: value.to_string(),
    };
    let (start, end) = value.split_once("..").ok_or_else(bad)?;
    let start: usize = start.parse().map_err(|_| bad())?;
    let end: usize = end.parse().map_err(|_| bad())?;
    if start >= end {
        return Err(bad());
    }
    Ok((start, end))
}

/// Parses sidecar text written by [`write_metadata`]. Unknown keys,
/// duplicates, missing keys, and unsupported version or algorithm values are
/// all rejected; `read ∘ write` is the identity.
pub fn read_metadata(text: &str) -> Result<CipherMetadata, MetadataError> {
    let mut version: Option<u32> = None;
    let mut rows: Option<(usize, usize)> = None;
    let mut cols: Option<(usize, usize)> = None;
    let mut perm: Option<ChannelPermutation> = None;
    let mut algorithm_seen = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.is_empty() {
            continue;
        }
        let (key, value) = raw.split_once('=').ok_or_else(|| MetadataError::Malformed {
            line,
            content: raw.to_string(),
        })?;
        let duplicate = |key: &str| MetadataError::DuplicateKey {
            line,
            key: key.to_string(),
        };
        match key {
            "version" => {
                if version.is_some() {
                    return Err(duplicate(key));
                }
                let v: u32 = value.parse().map_err(|_| MetadataError::BadVersion {
                    line,
                    version: value.to_string(),
                })?;
                if v != METADATA_VERSION {
                    return Err(MetadataError::BadVersion {
                        line,
                        version: value.to_string(),
                    });
                }
                version = Some(v);
            }
            "region_rows" => {
                if rows.is_some() {
                    return Err(duplicate(key));
                }
                rows = Some(parse_range(line, "region_rows", value)?);
            }
            "region_cols" => {
                if cols.is_some() {
                    return Err(duplicate(key));
                }
                cols = Some(parse_range(line, "region_cols", value)?);
            }
            "channel_perm" => {
                if perm.is_some() {
                    return Err(duplicate(key));
                }
                perm = Some(
                    value
                        .parse()
                        .map_err(|source| MetadataError::BadPermutation { line, source })?,
                );
            }
            "algorithm" => {
                if algorithm_seen {
                    return Err(duplicate(key));
                }
                if value != METADATA_ALGORITHM {
                    return Err(MetadataError::BadAlgorithm {
                        line,
                        algorithm: value.to_string(),
                    });
                }
                algorithm_seen = true;
            }
            other => {
                return Err(MetadataError::UnknownKey {
                    line,
                    key: other.to_string(),
                })
            }
        }
    }

    let version = version.ok_or(MetadataError::MissingKey { key: "version" })?;
    let (row_start, row_end) = rows.ok_or(MetadataError::MissingKey { key: "region_rows" })?;
    let (col_start, col_end) = cols.ok_or(MetadataError::MissingKey { key: "region_cols" })?;
    let channel_perm = perm.ok_or(MetadataError::MissingKey { key: "channel_perm" })?;
    if !algorithm_seen {
        return Err(MetadataError::MissingKey { key: "algorithm" });
    }
    let region = Region::new(row_start, row_end, col_start, col_end)
        .expect("ranges validated as non-empty");
    Ok(CipherMetadata {
        version,
        region,
        channel_perm,
    })
}
