//! End-to-end tests against the built binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use pixelveil::analysis::AnalysisReport;
use pixelveil::ppm::write_ppm;
use pixelveil::raster::RasterImage;

static DIR_COUNTER: AtomicUsize = AtomicUsize::new(0);

struct Workdir(PathBuf);

impl Workdir {
    fn new() -> Self {
        let dir = std::env::temp_dir().join(format!(
            "pixelveil-cli-{}-{}",
            std::process::id(),
            DIR_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        fs::create_dir_all(&dir).unwrap();
        Workdir(dir)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }
}

impl Drop for Workdir {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

fn pixelveil(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pixelveil"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stderr_line(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).trim().to_string()
}

fn write_test_image(path: &Path, width: usize, height: usize, seed: u64) {
    let mut rng = StdRng::seed_from_u64(seed);
    let image = RasterImage::from_fn(width, height, |_, _| rng.random());
    fs::write(path, write_ppm(&image)).unwrap();
}

#[test]
fn encrypt_then_decrypt_restores_the_file_byte_for_byte() {
    let dir = Workdir::new();
    write_test_image(&dir.path("plain.ppm"), 64, 40, 1);

    let enc = pixelveil(
        &[
            "encrypt",
            "--in",
            "plain.ppm",
            "--out",
            "cipher.ppm",
            "--region",
            "5:35,8:60",
            "--channel-perm",
            "rgb2brg",
        ],
        &dir.0,
    );
    assert!(enc.status.success(), "{}", stderr_line(&enc));

    let cipher = fs::read(dir.path("cipher.ppm")).unwrap();
    let plain = fs::read(dir.path("plain.ppm")).unwrap();
    assert_ne!(cipher, plain);
    assert_eq!(cipher.len(), plain.len(), "no pixel expansion");

    let dec = pixelveil(
        &[
            "decrypt",
            "--in",
            "cipher.ppm",
            "--out",
            "restored.ppm",
            "--region",
            "5:35,8:60",
            "--channel-perm",
            "rgb2brg",
        ],
        &dir.0,
    );
    assert!(dec.status.success(), "{}", stderr_line(&dec));
    assert_eq!(fs::read(dir.path("restored.ppm")).unwrap(), plain);
}

#[test]
fn sidecar_carries_the_decryption_parameters() {
    let dir = Workdir::new();
    write_test_image(&dir.path("plain.ppm"), 212, 158, 2);

    let enc = pixelveil(
        &[
            "encrypt",
            "--in",
            "plain.ppm",
            "--out",
            "cipher.ppm",
            "--region",
            "54:136,61:124",
            "--channel-perm",
            "rgb2gbr",
            "--meta-out",
            "mask.meta",
        ],
        &dir.0,
    );
    assert!(enc.status.success(), "{}", stderr_line(&enc));
    assert_eq!(
        fs::read_to_string(dir.path("mask.meta")).unwrap(),
        "version=1\nregion_rows=54..136\nregion_cols=61..124\nchannel_perm=rgb2gbr\nalgorithm=transpose-reshape\n"
    );

    let dec = pixelveil(
        &[
            "decrypt",
            "--in",
            "cipher.ppm",
            "--out",
            "restored.ppm",
            "--meta",
            "mask.meta",
        ],
        &dir.0,
    );
    assert!(dec.status.success(), "{}", stderr_line(&dec));
    assert_eq!(
        fs::read(dir.path("restored.ppm")).unwrap(),
        fs::read(dir.path("plain.ppm")).unwrap()
    );
}

#[test]
fn explicit_flags_override_the_sidecar() {
    let dir = Workdir::new();
    write_test_image(&dir.path("plain.ppm"), 50, 50, 3);

    let enc = pixelveil(
        &[
            "encrypt",
            "--in",
            "plain.ppm",
            "--out",
            "cipher.ppm",
            "--region",
            "10:40,12:44",
            "--channel-perm",
            "rgb2bgr",
            "--meta-out",
            "mask.meta",
        ],
        &dir.0,
    );
    assert!(enc.status.success(), "{}", stderr_line(&enc));

    // Corrupt the sidecar's permutation; the explicit flag must win.
    let tampered = fs::read_to_string(dir.path("mask.meta"))
        .unwrap()
        .replace("rgb2bgr", "identity");
    fs::write(dir.path("mask.meta"), tampered).unwrap();

    let dec = pixelveil(
        &[
            "decrypt",
            "--in",
            "cipher.ppm",
            "--out",
            "restored.ppm",
            "--meta",
            "mask.meta",
            "--channel-perm",
            "rgb2bgr",
        ],
        &dir.0,
    );
    assert!(dec.status.success(), "{}", stderr_line(&dec));
    assert_eq!(
        fs::read(dir.path("restored.ppm")).unwrap(),
        fs::read(dir.path("plain.ppm")).unwrap()
    );
}

#[test]
fn out_of_bounds_region_exits_1_with_a_diagnostic_and_no_output() {
    let dir = Workdir::new();
    write_test_image(&dir.path("plain.ppm"), 212, 158, 4);

    let out = pixelveil(
        &[
            "encrypt",
            "--in",
            "plain.ppm",
            "--out",
            "cipher.ppm",
            "--region",
            "0:200,0:10",
        ],
        &dir.0,
    );
    assert_eq!(out.status.code(), Some(1));
    let diagnostic = stderr_line(&out);
    assert!(
        diagnostic.contains("row range 0..200 exceeds image height 158"),
        "{diagnostic}"
    );
    assert_eq!(diagnostic.lines().count(), 1, "one-line diagnostic");
    assert!(!dir.path("cipher.ppm").exists(), "no partial output");
}

#[test]
fn bad_usage_exits_2() {
    let dir = Workdir::new();
    write_test_image(&dir.path("plain.ppm"), 8, 8, 5);

    let unknown = pixelveil(&["frobnicate"], &dir.0);
    assert_eq!(unknown.status.code(), Some(2));

    let missing = pixelveil(&["encrypt", "--in", "plain.ppm"], &dir.0);
    assert_eq!(missing.status.code(), Some(2));

    let bad_region = pixelveil(
        &[
            "encrypt",
            "--in",
            "plain.ppm",
            "--out",
            "c.ppm",
            "--region",
            "5-10,2-4",
        ],
        &dir.0,
    );
    assert_eq!(bad_region.status.code(), Some(2));

    let bad_perm = pixelveil(
        &[
            "encrypt",
            "--in",
            "plain.ppm",
            "--out",
            "c.ppm",
            "--region",
            "0:4,0:4",
            "--channel-perm",
            "rgb2xyz",
        ],
        &dir.0,
    );
    assert_eq!(bad_perm.status.code(), Some(2));

    let no_params = pixelveil(
        &["decrypt", "--in", "plain.ppm", "--out", "p.ppm"],
        &dir.0,
    );
    assert_eq!(no_params.status.code(), Some(2));
}

#[test]
fn unreadable_and_malformed_inputs_exit_1() {
    let dir = Workdir::new();

    let missing_file = pixelveil(
        &[
            "encrypt",
            "--in",
            "nope.ppm",
            "--out",
            "c.ppm",
            "--region",
            "0:1,0:1",
        ],
        &dir.0,
    );
    assert_eq!(missing_file.status.code(), Some(1));

    fs::write(dir.path("bogus.ppm"), b"JFIF not a ppm").unwrap();
    let bad_ppm = pixelveil(
        &[
            "encrypt",
            "--in",
            "bogus.ppm",
            "--out",
            "c.ppm",
            "--region",
            "0:1,0:1",
        ],
        &dir.0,
    );
    assert_eq!(bad_ppm.status.code(), Some(1));
    assert!(stderr_line(&bad_ppm).contains("bad magic"));

    write_test_image(&dir.path("plain.ppm"), 8, 8, 6);
    fs::write(dir.path("bad.meta"), "version=1\nchannel_perm=rgb2xyz\n").unwrap();
    let bad_meta = pixelveil(
        &[
            "decrypt",
            "--in",
            "plain.ppm",
            "--out",
            "p.ppm",
            "--meta",
            "bad.meta",
        ],
        &dir.0,
    );
    assert_eq!(bad_meta.status.code(), Some(1));
    assert!(stderr_line(&bad_meta).contains("rgb2xyz"));
}

#[test]
fn analyze_writes_a_parseable_report() {
    let dir = Workdir::new();
    write_test_image(&dir.path("plain.ppm"), 80, 60, 7);

    let enc = pixelveil(
        &[
            "encrypt",
            "--in",
            "plain.ppm",
            "--out",
            "cipher.ppm",
            "--region",
            "10:50,5:70",
            "--channel-perm",
            "rgb2gbr",
        ],
        &dir.0,
    );
    assert!(enc.status.success(), "{}", stderr_line(&enc));

    let analyze = pixelveil(
        &[
            "analyze",
            "--plain",
            "plain.ppm",
            "--cipher",
            "cipher.ppm",
            "--region",
            "10:50,5:70",
            "--out",
            "report.csv",
        ],
        &dir.0,
    );
    assert!(analyze.status.success(), "{}", stderr_line(&analyze));

    let text = fs::read_to_string(dir.path("report.csv")).unwrap();
    let report = AnalysisReport::from_csv(&text).unwrap();
    assert_eq!(report.plain.sums.total, report.cipher.sums.total);
    assert_eq!(report.cipher.histograms[0], report.plain.histograms[1]);
    assert_eq!(report.to_csv(), text);
}
