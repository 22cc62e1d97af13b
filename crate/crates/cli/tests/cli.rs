//! Contract tests for the `regrid` subcommands: flag handling, exit
//! codes, and file outputs.

use std::path::Path;
use std::process::{Command, Output};

fn regrid(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regrid"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("spawning regrid")
}

fn synth_scene(dir: &Path, name: &str) {
    let out = regrid(
        &[
            "synth", "--kind", "thin-lines", "--size", "64", "--contrast", "0.8", "--seed", "5",
            "--out", name,
        ],
        dir,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn synth_is_deterministic_and_writes_pgm() {
    let dir = tempfile::tempdir().unwrap();
    synth_scene(dir.path(), "a.pgm");
    synth_scene(dir.path(), "b.pgm");
    let a = std::fs::read(dir.path().join("a.pgm")).unwrap();
    let b = std::fs::read(dir.path().join("b.pgm")).unwrap();
    assert_eq!(a, b);
    assert!(a.starts_with(b"P5\n64 64\n255\n"));
}

#[test]
fn synth_rejects_unknown_kind_with_usage_exit() {
    let dir = tempfile::tempdir().unwrap();
    let out = regrid(
        &["synth", "--kind", "perlin", "--size", "64", "--contrast", "0.5", "--out", "x.pgm"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn resample_nn_identity_copies_bytes() {
    let dir = tempfile::tempdir().unwrap();
    synth_scene(dir.path(), "scene.pgm");
    let out = regrid(
        &[
            "resample", "--in", "scene.pgm", "--out", "copy.pgm", "--method", "nn",
            "--transform", "1,0,0,0,1,0", "--size", "64x64",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let a = std::fs::read(dir.path().join("scene.pgm")).unwrap();
    let b = std::fs::read(dir.path().join("copy.pgm")).unwrap();
    assert_eq!(a, b, "identity nn resample must be a byte-identical copy");
}

#[test]
fn resample_hybrid_downscale_has_contracted_dims() {
    let dir = tempfile::tempdir().unwrap();
    synth_scene(dir.path(), "scene.pgm");
    let out = regrid(
        &[
            "resample", "--in", "scene.pgm", "--out", "half.rsf", "--method", "hybrid",
            "--levels", "3", "--transform", "2,0,0,0,2,0", "--size", "32x32",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let bytes = std::fs::read(dir.path().join("half.rsf")).unwrap();
    assert_eq!(&bytes[..4], b"RSF1");
    assert_eq!(bytes.len(), 12 + 32 * 32 * 4);
}

#[test]
fn resample_rejects_unknown_method_and_bad_flags_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    synth_scene(dir.path(), "scene.pgm");
    let base = [
        "resample", "--in", "scene.pgm", "--out", "o.pgm", "--size", "64x64", "--transform",
        "1,0,0,0,1,0",
    ];
    let mut bad_method = base.to_vec();
    bad_method.extend(["--method", "sinc256"]);
    assert_eq!(regrid(&bad_method, dir.path()).status.code(), Some(2));

    let bad_transform = [
        "resample", "--in", "scene.pgm", "--out", "o.pgm", "--method", "nn", "--size", "64x64",
        "--transform", "1,0,0,0,1,oops",
    ];
    assert_eq!(regrid(&bad_transform, dir.path()).status.code(), Some(2));

    let singular = [
        "resample", "--in", "scene.pgm", "--out", "o.pgm", "--method", "nn", "--size", "64x64",
        "--transform", "1,1,0,1,1,0",
    ];
    assert_eq!(regrid(&singular, dir.path()).status.code(), Some(2));
}

#[test]
fn resample_missing_input_is_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = regrid(
        &[
            "resample", "--in", "nope.pgm", "--out", "o.pgm", "--method", "nn", "--transform",
            "1,0,0,0,1,0", "--size", "8x8",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.pgm"));
}

#[test]
fn pyramid_dumps_levels_and_reports_reconstruction_error() {
    let dir = tempfile::tempdir().unwrap();
    synth_scene(dir.path(), "scene.pgm");
    let out = regrid(
        &["pyramid", "--in", "scene.pgm", "--levels", "2", "--out-dir", "pyr", "--reconstruct"],
        dir.path(),
    );
    assert!(out.status.success());
    for name in ["level_0.rsf", "level_1.rsf", "residual.rsf", "reconstructed.rsf"] {
        assert!(dir.path().join("pyr").join(name).is_file(), "{name} missing");
    }
    let stdout = String::from_utf8_lossy(&out.stdout);
    let err: f64 = stdout
        .trim()
        .rsplit(' ')
        .next()
        .unwrap()
        .parse()
        .unwrap_or_else(|_| panic!("unparsable error line: {stdout}"));
    assert!(err <= 1e-5, "reconstruction error {err}");
}

#[test]
fn pyramid_constant_scene_has_zero_bands() {
    let dir = tempfile::tempdir().unwrap();
    let out = regrid(
        &["synth", "--kind", "constant", "--size", "32", "--contrast", "0.5", "--out", "c.pgm"],
        dir.path(),
    );
    assert!(out.status.success());
    let out = regrid(
        &["pyramid", "--in", "c.pgm", "--levels", "2", "--out-dir", "pyr"],
        dir.path(),
    );
    assert!(out.status.success());
    for name in ["level_0.rsf", "level_1.rsf"] {
        let bytes = std::fs::read(dir.path().join("pyr").join(name)).unwrap();
        for chunk in bytes[12..].chunks_exact(4) {
            let v = f32::from_le_bytes(chunk.try_into().unwrap());
            assert!(v.abs() < 1e-6, "{name} band value {v}");
        }
    }
}

#[test]
fn pyramid_too_many_levels_is_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    synth_scene(dir.path(), "scene.pgm");
    let out = regrid(
        &["pyramid", "--in", "scene.pgm", "--levels", "9", "--out-dir", "pyr"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("too many pyramid levels"));
}

#[test]
fn bench_constant_scene_exits_one_and_records_errors() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("b.cfg"),
        "scenes = constant:16:0.5\nmethods = nn, cc\noutput_dir = out\n",
    )
    .unwrap();
    let out = regrid(&["bench", "--config", "b.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let csv = std::fs::read_to_string(dir.path().join("out/report.csv")).unwrap();
    for line in csv.lines().skip(1) {
        assert!(line.contains("zero variance"), "{line}");
    }
}

#[test]
fn bench_unreadable_config_is_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = regrid(&["bench", "--config", "missing.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bench_markdown_flag_prints_table() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("b.cfg"),
        "scenes = ramp:16:1\nmethods = nn\noutput_dir = out\n",
    )
    .unwrap();
    let out = regrid(&["bench", "--config", "b.cfg", "--markdown"], dir.path());
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("| ramp:16:1 | nn |"), "{stdout}");
}
