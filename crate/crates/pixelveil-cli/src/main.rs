//! Reversible region masking for binary PPM images.
//!
//! Exit codes: 0 on success, 1 on any runtime failure (file, parse, bounds
//! or shape errors), 2 on bad usage.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::exit;

use clap::{Args, Parser, Subcommand};

use pixelveil::analysis::compare_report;
use pixelveil::cipher::{
    decrypt_image, encrypt_image, read_metadata, write_metadata, ChannelPermutation,
    CipherMetadata,
};
use pixelveil::ppm::{read_ppm, write_ppm};
use pixelveil::raster::{extract_region, RasterImage, Region};

#[derive(Parser)]
#[command(
    name = "pixelveil",
    version,
    about = "Reversibly mask a rectangular region of a PPM image by scrambling pixel positions",
    after_help = "The transform is keyless: whoever knows the region coordinates can undo it.\n\
                  Use it for recoverable redaction, not for confidentiality."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RegionArg {
    /// Region as R0:R1,C0:C1 (0-based, half-open, rows first)
    #[arg(long, value_name = "R0:R1,C0:C1", value_parser = parse_region)]
    region: Region,
}

#[derive(Subcommand)]
enum Command {
    /// Scramble a region of a PPM image
    Encrypt {
        /// Input PPM (P6) file
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,

        /// Output PPM file
        #[arg(long = "out", value_name = "FILE")]
        output: PathBuf,

        #[command(flatten)]
        region: RegionArg,

        /// Channel interchange applied after the scramble
        #[arg(
            long = "channel-perm",
            value_name = "NAME",
            default_value = "identity",
            value_parser = parse_perm
        )]
        channel_perm: ChannelPermutation,

        /// Also write the decryption parameters to this sidecar file
        #[arg(long = "meta-out", value_name = "FILE")]
        meta_out: Option<PathBuf>,
    },

    /// Restore a previously scrambled region
    Decrypt {
        /// Input PPM (P6) file
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,

        /// Output PPM file
        #[arg(long = "out", value_name = "FILE")]
        output: PathBuf,

        /// Region as R0:R1,C0:C1; overrides the sidecar value
        #[arg(long, value_name = "R0:R1,C0:C1", value_parser = parse_region)]
        region: Option<Region>,

        /// Sidecar file written by encrypt --meta-out
        #[arg(long = "meta", value_name = "FILE")]
        meta: Option<PathBuf>,

        /// Channel interchange used at encryption; overrides the sidecar value
        #[arg(long = "channel-perm", value_name = "NAME", value_parser = parse_perm)]
        channel_perm: Option<ChannelPermutation>,
    },

    /// Compare a plain/cipher pair and write the statistics as CSV
    Analyze {
        /// Plain PPM (P6) file
        #[arg(long, value_name = "FILE")]
        plain: PathBuf,

        /// Cipher PPM (P6) file
        #[arg(long, value_name = "FILE")]
        cipher: PathBuf,

        #[command(flatten)]
        region: RegionArg,

        /// Output CSV file
        #[arg(long = "out", value_name = "FILE")]
        output: PathBuf,
    },
}

fn parse_region(s: &str) -> Result<Region, String> {
    let usage = "expected R0:R1,C0:C1 with 0-based half-open ranges, e.g. 54:136,61:124";
    let (rows, cols) = s.split_once(',').ok_or(usage)?;
    let parse_range = |range: &str| -> Result<(usize, usize), String> {
        let (start, end) = range.split_once(':').ok_or(usage)?;
        let start = start.trim().parse::<usize>().map_err(|_| usage.to_string())?;
        let end = end.trim().parse::<usize>().map_err(|_| usage.to_string())?;
        Ok((start, end))
    };
    let (r0, r1) = parse_range(rows)?;
    let (c0, c1) = parse_range(cols)?;
    Region::new(r0, r1, c0, c1).map_err(|e| e.to_string())
}

fn parse_perm(s: &str) -> Result<ChannelPermutation, String> {
    s.parse().map_err(|e: pixelveil::cipher::UnknownPermutation| e.to_string())
}

fn read_image(path: &Path) -> Result<RasterImage, String> {
    let bytes = fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    read_ppm(&bytes).map_err(|e| format!("{}: {e}", path.display()))
}

/// Writes through a sibling temp file and renames into place, so an error
/// never leaves a partial output behind.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), String> {
    let mut tmp_name = path.as_os_str().to_owned();
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp_name);
    let fail = |e: std::io::Error| format!("{}: {e}", path.display());
    fs::write(&tmp, bytes).map_err(fail)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        fail(e)
    })
}

fn run(command: Command) -> Result<(), String> {
    match command {
        Command::Encrypt {
            input,
            output,
            region: RegionArg { region },
            channel_perm,
            meta_out,
        } => {
            let image = read_image(&input)?;
            let cipher = encrypt_image(&image, region, channel_perm).map_err(|e| e.to_string())?;
            write_atomic(&output, &write_ppm(&cipher))?;
            if let Some(meta_path) = meta_out {
                let meta = CipherMetadata::new(region, channel_perm);
                write_atomic(&meta_path, write_metadata(&meta).as_bytes())?;
            }
            Ok(())
        }
        Command::Decrypt {
            input,
            output,
            region,
            meta,
            channel_perm,
        } => {
            let sidecar = match meta {
                Some(path) => {
                    let text =
                        fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                    Some(read_metadata(&text).map_err(|e| format!("{}: {e}", path.display()))?)
                }
                None => None,
            };
            // Flags win over the sidecar on conflict.
            let region = match region.or_else(|| sidecar.as_ref().map(|m| m.region)) {
                Some(region) => region,
                None => {
                    eprintln!("error: decrypt needs --region or --meta");
                    eprintln!(
                        "Usage: pixelveil decrypt --in <FILE> --out <FILE> <--region <R0:R1,C0:C1>|--meta <FILE>>"
                    );
                    exit(2);
                }
            };
            let channel_perm = channel_perm
                .or_else(|| sidecar.as_ref().map(|m| m.channel_perm))
                .unwrap_or(ChannelPermutation::Identity);
            let image = read_image(&input)?;
            let plain = decrypt_image(&image, region, channel_perm).map_err(|e| e.to_string())?;
            write_atomic(&output, &write_ppm(&plain))
        }
        Command::Analyze {
            plain,
            cipher,
            region: RegionArg { region },
            output,
        } => {
            let plain_image = read_image(&plain)?;
            let cipher_image = read_image(&cipher)?;
            let plain_triple =
                extract_region(&plain_image, region).map_err(|e| format!("{}: {e}", plain.display()))?;
            let cipher_triple = extract_region(&cipher_image, region)
                .map_err(|e| format!("{}: {e}", cipher.display()))?;
            let report =
                compare_report(&plain_triple, &cipher_triple).map_err(|e| e.to_string())?;
            write_atomic(&output, report.to_csv().as_bytes())
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(message) = run(cli.command) {
        eprintln!("error: {message}");
        exit(1);
    }
}
