//! Statistical evidence that the cipher moves values without changing them:
//! histograms, exact channel sums, Pearson correlation between plain and
//! cipher planes, and per-channel intensity traces, all exportable as CSV.
//!
//! Every statistic accumulates in integer arithmetic (value sums, squared
//! sums, cross sums) and converts to floating point only at the end, so
//! results are exact where the claims are exact (sums, histograms) and
//! deterministic across platforms and thread counts where they are not
//! (means, correlations).

use thiserror::Error;

use crate::raster::{ChannelPlane, ChannelTriple};

/// Channel labels in plane order.
pub const CHANNEL_NAMES: [&str; 3] = ["r", "g", "b"];

/// Analysis and report-format errors.
#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("planes differ in shape: {a_rows}x{a_cols} vs {b_rows}x{b_cols}")]
    ShapeMismatch {
        a_rows: usize,
        a_cols: usize,
        b_rows: usize,
        b_cols: usize,
    },

    #[error("correlation undefined: a plane with zero variance has no linear relation")]
    UndefinedCorrelation,

    #[error("csv line {line}: {reason}")]
    Csv { line: usize, reason: String },
}

/// 256-bin histogram of a plane: `counts[v]` is the number of elements equal
/// to `v`. The counts sum to `rows * cols`.
pub fn histogram(plane: &ChannelPlane) -> [u64; 256] {
    let mut counts = [0u64; 256];
    for &v in plane.values() {
        counts[v as usize] += 1;
    }
    counts
}

/// [`histogram`] with a parallel fold over value chunks. Requires the
/// `parallel` feature; counts are identical to the sequential path.
#[cfg(feature = "parallel")]
pub fn par_histogram(plane: &ChannelPlane) -> [u64; 256] {
    use rayon::prelude::*;

    plane
        .values()
        .par_chunks(1 << 16)
        .fold(
            || [0u64; 256],
            |mut counts, chunk| {
                for &v in chunk {
                    counts[v as usize] += 1;
                }
                counts
            },
        )
        .reduce(
            || [0u64; 256],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b.iter()) {
                    *x += y;
                }
                a
            },
        )
}

/// Exact per-channel value sums and their grand total.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelSums {
    pub r: u64,
    pub g: u64,
    pub b: u64,
    pub total: u64,
}

fn plane_sum(plane: &ChannelPlane) -> u64 {
    plane.values().iter().map(|&v| v as u64).sum()
}

/// Sums every channel of the triple in integer arithmetic.
pub fn channel_sums(triple: &ChannelTriple) -> ChannelSums {
    let r = plane_sum(triple.r());
    let g = plane_sum(triple.g());
    let b = plane_sum(triple.b());
    ChannelSums {
        r,
        g,
        b,
        total: r + g + b,
    }
}

/// Pearson correlation between two same-shaped planes over their flattened
/// value pairs, in `[-1, 1]`.
///
/// Moments are accumulated exactly in integers; only the final division is
/// floating point, clamped to the mathematical range to absorb rounding at
/// the extremes. A plane with zero variance has no defined correlation and
/// yields [`AnalysisError::UndefinedCorrelation`].
pub fn correlation(a: &ChannelPlane, b: &ChannelPlane) -> Result<f64, AnalysisError> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(AnalysisError::ShapeMismatch {
            a_rows: a.rows(),
            a_cols: a.cols(),
            b_rows: b.rows(),
            b_cols: b.cols(),
        });
    }
    let n = a.len() as i128;
    let (mut sum_a, mut sum_b, mut sum_ab, mut sum_aa, mut sum_bb) = (0u64, 0u64, 0u64, 0u64, 0u64);
    for (&x, &y) in a.values().iter().zip(b.values()) {
        let (x, y) = (x as u64, y as u64);
        sum_a += x;
        sum_b += y;
        sum_ab += x * y;
        sum_aa += x * x;
        sum_bb += y * y;
    }
    let var_a = n * sum_aa as i128 - (sum_a as i128) * (sum_a as i128);
    let var_b = n * sum_bb as i128 - (sum_b as i128) * (sum_b as i128);
    if var_a == 0 || var_b == 0 {
        return Err(AnalysisError::UndefinedCorrelation);
    }
    let cov = n * sum_ab as i128 - (sum_a as i128) * (sum_b as i128);
    let corr = cov as f64 / ((var_a as f64).sqrt() * (var_b as f64).sqrt());
    Ok(corr.clamp(-1.0, 1.0))
}

/// Per-channel intensity traces: `col_means[c][j]` is the mean of column `j`
/// of channel `c`, `row_means[c][i]` the mean of row `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbProfile {
    pub col_means: [Vec<f64>; 3],
    pub row_means: [Vec<f64>; 3],
}

fn plane_traces(plane: &ChannelPlane) -> (Vec<f64>, Vec<f64>) {
    let (m, n) = (plane.rows(), plane.cols());
    let mut col_sums = vec![0u64; n];
    let mut row_sums = vec![0u64; m];
    for (i, row) in plane.values().chunks_exact(n).enumerate() {
        for (j, &v) in row.iter().enumerate() {
            col_sums[j] += v as u64;
            row_sums[i] += v as u64;
        }
    }
    let cols = col_sums.iter().map(|&s| s as f64 / m as f64).collect();
    let rows = row_sums.iter().map(|&s| s as f64 / n as f64).collect();
    (cols, rows)
}

/// Column-mean and row-mean traces for every channel of the triple.
pub fn rgb_profile(triple: &ChannelTriple) -> RgbProfile {
    let (rc, rr) = plane_traces(triple.r());
    let (gc, gr) = plane_traces(triple.g());
    let (bc, br) = plane_traces(triple.b());
    RgbProfile {
        col_means: [rc, gc, bc],
        row_means: [rr, gr, br],
    }
}

/// Histograms, sums, and traces of one triple.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleStats {
    pub histograms: [[u64; 256]; 3],
    pub sums: ChannelSums,
    pub profile: RgbProfile,
}

/// Computes all statistics of one triple.
pub fn triple_stats(triple: &ChannelTriple) -> TripleStats {
    TripleStats {
        histograms: [
            histogram(triple.r()),
            histogram(triple.g()),
            histogram(triple.b()),
        ],
        sums: channel_sums(triple),
        profile: rgb_profile(triple),
    }
}

/// Side-by-side statistics of a plain/cipher pair plus their per-channel
/// correlations. A constant channel on either side has no defined
/// correlation and reports `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub plain: TripleStats,
    pub cipher: TripleStats,
    pub correlations: [Option<f64>; 3],
}

/// Builds the full report for a plain/cipher pair of equal shape.
pub fn compare_report(
    plain: &ChannelTriple,
    cipher: &ChannelTriple,
) -> Result<AnalysisReport, AnalysisError> {
    if plain.rows() != cipher.rows() || plain.cols() != cipher.cols() {
        return Err(AnalysisError::ShapeMismatch {
            a_rows: plain.rows(),
            a_cols: plain.cols(),
            b_rows: cipher.rows(),
            b_cols: cipher.cols(),
        });
    }
    let mut correlations = [None; 3];
    for (slot, (a, b)) in correlations
        .iter_mut()
        .zip(plain.planes().into_iter().zip(cipher.planes()))
    {
        *slot = match correlation(a, b) {
            Ok(c) => Some(c),
            Err(AnalysisError::UndefinedCorrelation) => None,
            Err(other) => return Err(other),
        };
    }
    Ok(AnalysisReport {
        plain: triple_stats(plain),
        cipher: triple_stats(cipher),
        correlations,
    })
}

const CSV_HEADER: &str = "metric,channel,index,value";

fn format_mean(v: f64) -> String {
    format!("{v:.6}")
}

impl AnalysisReport {
    /// Renders the report as CSV: UTF-8, LF line endings, a header row, then
    /// `metric,channel,index,value` rows for histograms and traces and
    /// `summary,<name>,,<value>` rows for sums and correlations. Undefined
    /// correlations are written as `undefined`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(CSV_HEADER);
        out.push('\n');
        for (side_name, side) in [("plain", &self.plain), ("cipher", &self.cipher)] {
            for (channel, hist) in CHANNEL_NAMES.iter().zip(side.histograms.iter()) {
                for (bin, count) in hist.iter().enumerate() {
                    out.push_str(&format!("{side_name}_histogram,{channel},{bin},{count}\n"));
                }
            }
        }
        for (side_name, side) in [("plain", &self.plain), ("cipher", &self.cipher)] {
            for (channel, trace) in CHANNEL_NAMES.iter().zip(side.profile.col_means.iter()) {
                for (idx, mean) in trace.iter().enumerate() {
                    out.push_str(&format!(
                        "{side_name}_col_mean,{channel},{idx},{}\n",
                        format_mean(*mean)
                    ));
                }
            }
            for (channel, trace) in CHANNEL_NAMES.iter().zip(side.profile.row_means.iter()) {
                for (idx, mean) in trace.iter().enumerate() {
                    out.push_str(&format!(
                        "{side_name}_row_mean,{channel},{idx},{}\n",
                        format_mean(*mean)
                    ));
                }
            }
        }
        for (side_name, side) in [("plain", &self.plain), ("cipher", &self.cipher)] {
            let s = side.sums;
            out.push_str(&format!("summary,{side_name}_sum_r,,{}\n", s.r));
            out.push_str(&format!("summary,{side_name}_sum_g,,{}\n", s.g));
            out.push_str(&format!("summary,{side_name}_sum_b,,{}\n", s.b));
            out.push_str(&format!("summary,{side_name}_total,,{}\n", s.total));
        }
        for (channel, corr) in CHANNEL_NAMES.iter().zip(self.correlations.iter()) {
            let value = match corr {
                Some(c) => format_mean(*c),
                None => "undefined".to_string(),
            };
            out.push_str(&format!("summary,correlation_{channel},,{value}\n"));
        }
        out
    }

    /// Parses CSV produced by [`to_csv`]. Means and correlations come back
    /// at the 6-decimal precision of the file, so `to_csv` of the parsed
    /// report reproduces the input text exactly.
    pub fn from_csv(text: &str) -> Result<Self, AnalysisError> {
        let err = |line: usize, reason: &str| AnalysisError::Csv {
            line,
            reason: reason.to_string(),
        };

        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header == CSV_HEADER => {}
            _ => return Err(err(1, "missing `metric,channel,index,value` header")),
        }

        let mut hists = [[[0u64; 256]; 3], [[0u64; 256]; 3]];
        let mut hist_fill = [[0usize; 3]; 2];
        let mut col_means: [[Vec<f64>; 3]; 2] = Default::default();
        let mut row_means: [[Vec<f64>; 3]; 2] = Default::default();
        let mut sums = [[None::<u64>; 4]; 2];
        let mut correlations: [Option<Option<f64>>; 3] = [None; 3];

        for (idx, raw) in lines {
            let line = idx + 1;
            let mut fields = raw.split(',');
            let (metric, channel, index, value) = match (
                fields.next(),
                fields.next(),
                fields.next(),
                fields.next(),
                fields.next(),
            ) {
                (Some(m), Some(c), Some(i), Some(v), None) => (m, c, i, v),
                _ => return Err(err(line, "expected 4 comma-separated fields")),
            };

            if metric == "summary" {
                if !index.is_empty() {
                    return Err(err(line, "summary rows carry no index"));
                }
                if let Some(rest) = channel.strip_prefix("correlation_") {
                    let ch = channel_index(rest).ok_or_else(|| err(line, "unknown channel"))?;
                    if correlations[ch].is_some() {
                        return Err(err(line, "duplicate correlation"));
                    }
                    correlations[ch] = Some(if value == "undefined" {
                        None
                    } else {
                        Some(parse_mean(value).ok_or_else(|| err(line, "bad correlation value"))?)
                    });
                    continue;
                }
                let (side, name) = split_side(channel).ok_or_else(|| err(line, "unknown summary name"))?;
                let slot = match name {
                    "sum_r" => 0,
                    "sum_g" => 1,
                    "sum_b" => 2,
                    "total" => 3,
                    _ => return Err(err(line, "unknown summary name")),
                };
                if sums[side][slot].is_some() {
                    return Err(err(line, "duplicate summary"));
                }
                sums[side][slot] =
                    Some(value.parse().map_err(|_| err(line, "bad integer sum"))?);
                continue;
            }

            let (side, kind) = split_side(metric).ok_or_else(|| err(line, "unknown metric"))?;
            let ch = channel_index(channel).ok_or_else(|| err(line, "unknown channel"))?;
            let index: usize = index.parse().map_err(|_| err(line, "bad index"))?;
            match kind {
                "histogram" => {
                    if index != hist_fill[side][ch] || index > 255 {
                        return Err(err(line, "histogram bins must arrive in order 0..=255"));
                    }
                    hists[side][ch][index] =
                        value.parse().map_err(|_| err(line, "bad histogram count"))?;
                    hist_fill[side][ch] += 1;
                }
                "col_mean" | "row_mean" => {
                    let trace = if kind == "col_mean" {
                        &mut col_means[side][ch]
                    } else {
                        &mut row_means[side][ch]
                    };
                    if index != trace.len() {
                        return Err(err(line, "trace indices must be consecutive from 0"));
                    }
                    trace.push(parse_mean(value).ok_or_else(|| err(line, "bad mean value"))?);
                }
                _ => return Err(err(line, "unknown metric")),
            }
        }

        for side in 0..2 {
            for ch in 0..3 {
                if hist_fill[side][ch] != 256 {
                    return Err(err(0, "incomplete histogram"));
                }
                if col_means[side][ch].is_empty() || row_means[side][ch].is_empty() {
                    return Err(err(0, "missing trace"));
                }
            }
        }
        let mut stats = Vec::with_capacity(2);
        for side in 0..2 {
            let [sr, sg, sb, st] = sums[side];
            let (r, g, b, total) = match (sr, sg, sb, st) {
                (Some(r), Some(g), Some(b), Some(t)) => (r, g, b, t),
                _ => return Err(err(0, "missing summary sums")),
            };
            if r + g + b != total {
                return Err(err(0, "total does not equal the sum of channel sums"));
            }
            stats.push(TripleStats {
                histograms: hists[side],
                sums: ChannelSums { r, g, b, total },
                profile: RgbProfile {
                    col_means: col_means[side].clone(),
                    row_means: row_means[side].clone(),
                },
            });
        }
        let correlations = [
            correlations[0].ok_or_else(|| err(0, "missing correlation_r"))?,
            correlations[1].ok_or_else(|| err(0, "missing correlation_g"))?,
            correlations[2].ok_or_else(|| err(0, "missing correlation_b"))?,
        ];
        let cipher = stats.pop().expect("two sides pushed");
        let plain = stats.pop().expect("two sides pushed");
        Ok(AnalysisReport {
            plain,
            cipher,
            correlations,
        })
    }
}

fn channel_index(name: &str) -> Option<usize> {
    CHANNEL_NAMES.iter().position(|&c| c == name)
}

fn split_side(name: &str) -> Option<(usize, &str)> {
    if let Some(rest) = name.strip_prefix("plain_") {
        Some((0, rest))
    } else {
        name.strip_prefix("cipher_").map(|rest| (1, rest))
    }
}

fn parse_mean(value: &str) -> Option<f64> {
    let parsed: f64 = value.parse().ok()?;
    parsed.is_finite().then_some(parsed)
}
