//! Binary PPM (P6) codec, bit-exact in both directions.
//!
//! The writer always emits the canonical header `P6\n<width> <height>\n255\n`
//! followed by the raw interleaved RGB payload, so identical images produce
//! identical bytes. The reader accepts any amount of header whitespace and
//! `#` comments, but insists on maxval 255 and an exact payload length:
//! trailing bytes are rejected so that decode/encode cannot silently drop
//! data.

use thiserror::Error;

use crate::raster::RasterImage;

/// Header tokens longer than this many digits are rejected outright; no
/// real dimension needs more.
const MAX_TOKEN_DIGITS: usize = 10;

/// PPM parse errors, each carrying the byte offset it was detected at.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PpmError {
    #[error("not a binary ppm (P6) stream: bad magic at byte {offset}")]
    BadMagic { offset: usize },

    #[error("unsupported maxval {maxval} at byte {offset}: only 255 is supported")]
    UnsupportedMaxval { maxval: u64, offset: usize },

    #[error("zero image dimension at byte {offset}")]
    ZeroDimension { offset: usize },

    #[error("oversized header token at byte {offset}")]
    OversizedToken { offset: usize },

    #[error("expected a decimal header token at byte {offset}")]
    InvalidToken { offset: usize },

    #[error("unexpected end of header at byte {offset}")]
    UnexpectedEof { offset: usize },

    #[error("truncated payload: expected {expected} bytes from byte {offset}, found {actual}")]
    TruncatedPayload {
        expected: usize,
        actual: usize,
        offset: usize,
    },

    #[error("{extra} trailing bytes after the payload at byte {offset}")]
    TrailingBytes { extra: usize, offset: usize },
}

fn is_ppm_space(byte: u8) -> bool {
    matches!(byte, b' ' | b'\t' | b'\n' | b'\r' | 0x0b | 0x0c)
}

/// Skips whitespace and `#`-to-end-of-line comments.
fn skip_separators(bytes: &[u8], pos: &mut usize) {
    while let Some(&byte) = bytes.get(*pos) {
        if is_ppm_space(byte) {
            *pos += 1;
        } else if byte == b'#' {
            while let Some(&b) = bytes.get(*pos) {
                *pos += 1;
                if b == b'\n' {
                    break;
                }
            }
        } else {
            break;
        }
    }
}

/// Reads one decimal header token, returning its value and starting offset.
fn read_number(bytes: &[u8], pos: &mut usize) -> Result<(u64, usize), PpmError> {
    skip_separators(bytes, pos);
    let start = *pos;
    match bytes.get(start) {
        None => return Err(PpmError::UnexpectedEof { offset: start }),
        Some(b) if !b.is_ascii_digit() => return Err(PpmError::InvalidToken { offset: start }),
        _ => {}
    }
    let mut value: u64 = 0;
    while let Some(&b) = bytes.get(*pos) {
        if !b.is_ascii_digit() {
            break;
        }
        if *pos - start >= MAX_TOKEN_DIGITS {
            return Err(PpmError::OversizedToken { offset: start });
        }
        value = value * 10 + (b - b'0') as u64;
        *pos += 1;
    }
    Ok((value, start))
}

/// Decodes a binary PPM (P6) byte stream into a raster image.
pub fn read_ppm(bytes: &[u8]) -> Result<RasterImage, PpmError> {
    if bytes.len() < 2 || &bytes[..2] != b"P6" {
        return Err(PpmError::BadMagic { offset: 0 });
    }
    match bytes.get(2) {
        Some(&b) if is_ppm_space(b) || b == b'#' => {}
        _ => return Err(PpmError::BadMagic { offset: 0 }),
    }
    let mut pos = 2;
    let (width, width_at) = read_number(bytes, &mut pos)?;
    let (height, height_at) = read_number(bytes, &mut pos)?;
    let (maxval, maxval_at) = read_number(bytes, &mut pos)?;
    if width == 0 {
        return Err(PpmError::ZeroDimension { offset: width_at });
    }
    if height == 0 {
        return Err(PpmError::ZeroDimension { offset: height_at });
    }
    if maxval != 255 {
        return Err(PpmError::UnsupportedMaxval {
            maxval,
            offset: maxval_at,
        });
    }
    // Exactly one whitespace byte separates the header from the payload.
    match bytes.get(pos) {
        None => return Err(PpmError::UnexpectedEof { offset: pos }),
        Some(&b) if is_ppm_space(b) => pos += 1,
        Some(_) => return Err(PpmError::InvalidToken { offset: pos }),
    }

    let expected = (width as usize)
        .checked_mul(height as usize)
        .and_then(|px| px.checked_mul(3))
        .ok_or(PpmError::OversizedToken { offset: width_at })?;
    let actual = bytes.len() - pos;
    if actual < expected {
        return Err(PpmError::TruncatedPayload {
            expected,
            actual,
            offset: pos,
        });
    }
    if actual > expected {
        return Err(PpmError::TrailingBytes {
            extra: actual - expected,
            offset: pos + expected,
        });
    }
    let image = RasterImage::new(width as usize, height as usize, bytes[pos..].to_vec())
        .expect("payload length checked against dimensions");
    Ok(image)
}

/// Encodes an image as canonical binary PPM: `P6\n<w> <h>\n255\n` plus the
/// raw payload. `read_ppm(&write_ppm(&image))` recovers `image` bit-exactly.
pub fn write_ppm(image: &RasterImage) -> Vec<u8> {
    let header = format!("P6\n{} {}\n255\n", image.width(), image.height());
    let mut out = Vec::with_capacity(header.len() + image.as_bytes().len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(image.as_bytes());
    out
}
