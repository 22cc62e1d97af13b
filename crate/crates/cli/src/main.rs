//! `regrid`: resample rasters, inspect pyramids, synthesize benchmark
//! scenes, and run the full method x scene benchmark matrix.
//!
//! Exit codes: 0 on success, 1 on runtime failure (I/O, method errors,
//! failed benchmark cells), 2 on usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use regrid_cli::bench::run_bench;
use regrid_cli::config::{parse_config, MethodToken};
use regrid_cli::{read_raster, write_raster};
use regrid_core::kernels::{BoundaryPolicy, KernelSpec};
use regrid_core::pyramid;
use regrid_core::raster::{synth_scene, SceneKind, SceneSpec};
use regrid_core::resampler::{run, MethodSpec};
use regrid_core::GridTransform;

#[derive(Parser)]
#[command(name = "regrid", version, about = "Raster resampling toolkit and benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Resample a raster through an affine grid transform.
    Resample(Box<ResampleArgs>),
    /// Run the benchmark matrix described by a config file.
    Bench(BenchArgs),
    /// Decompose a raster into its Laplacian pyramid and dump the levels.
    Pyramid(PyramidArgs),
    /// Synthesize a ground-truth scene.
    Synth(SynthArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundaryArg {
    Mirror,
    Clamp,
}

impl From<BoundaryArg> for BoundaryPolicy {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Mirror => BoundaryPolicy::Mirror,
            BoundaryArg::Clamp => BoundaryPolicy::Clamp,
        }
    }
}

fn parse_method(s: &str) -> Result<MethodToken, String> {
    s.parse().map_err(|e: anyhow::Error| format!("{e:#}"))
}

fn parse_transform(s: &str) -> Result<GridTransform, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 6 {
        return Err(format!("expected 6 comma-separated coefficients a,b,c,d,e,f, got {}", parts.len()));
    }
    let mut v = [0.0f64; 6];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|e| format!("bad coefficient {part:?}: {e}"))?;
    }
    GridTransform::new(v[0], v[1], v[2], v[3], v[4], v[5]).map_err(|e| e.to_string())
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WxH, got {s:?}"))?;
    let w = w.parse().map_err(|e| format!("bad width {w:?}: {e}"))?;
    let h = h.parse().map_err(|e| format!("bad height {h:?}: {e}"))?;
    if w == 0 || h == 0 {
        return Err("output dimensions must be positive".to_owned());
    }
    Ok((w, h))
}

#[derive(Args)]
struct ResampleArgs {
    /// Input raster (.pgm or .rsf).
    #[arg(long = "in")]
    input: PathBuf,
    /// Output raster (.pgm or .rsf).
    #[arg(long)]
    out: PathBuf,
    /// Method: nn | bl | cc[:a] | kd16[:beta] | hybrid[:levels] | adaptive[:threshold[:window]].
    #[arg(long, value_parser = parse_method)]
    method: MethodToken,
    /// Affine output-to-source map a,b,c,d,e,f
    /// (x_src = a*x + b*y + c; y_src = d*x + e*y + f).
    #[arg(long, value_parser = parse_transform)]
    transform: GridTransform,
    /// Output size WxH.
    #[arg(long, value_parser = parse_size)]
    size: (usize, usize),
    /// Pyramid depth for the hybrid method.
    #[arg(long)]
    levels: Option<usize>,
    /// Kaiser window shape for kd16.
    #[arg(long)]
    beta: Option<f64>,
    /// Cubic-convolution shape parameter.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    /// Contrast window for the adaptive method (odd, >= 3).
    #[arg(long)]
    window: Option<usize>,
    /// Selection threshold for the adaptive method, in [0, 1].
    #[arg(long)]
    threshold: Option<f64>,
    /// Edge handling.
    #[arg(long, value_enum, default_value = "mirror")]
    boundary: BoundaryArg,
}

#[derive(Args)]
struct BenchArgs {
    /// Benchmark config file (key = value lines).
    #[arg(long)]
    config: PathBuf,
    /// Also print a table rendering of the report to stdout.
    #[arg(long)]
    markdown: bool,
}

#[derive(Args)]
struct PyramidArgs {
    /// Input raster (.pgm or .rsf).
    #[arg(long = "in")]
    input: PathBuf,
    /// Pyramid depth.
    #[arg(long)]
    levels: usize,
    /// Directory for level_<k>.rsf and residual.rsf dumps.
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
    /// Also rebuild the image and report the max reconstruction error.
    #[arg(long)]
    reconstruct: bool,
}

#[derive(Args)]
struct SynthArgs {
    /// Scene kind: constant | ramp | checkerboard | thin-lines | point-targets | mixed.
    #[arg(long)]
    kind: SceneKind,
    /// Scene size in pixels (square, >= 8).
    #[arg(long)]
    size: usize,
    /// Feature contrast in [0, 1].
    #[arg(long)]
    contrast: f64,
    /// RNG seed for stochastic kinds.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output raster (.pgm or .rsf).
    #[arg(long)]
    out: PathBuf,
}

/// Applies the standalone kernel-parameter flags on top of the parsed
/// method token.
fn apply_overrides(args: &ResampleArgs) -> Result<MethodSpec> {
    let mut spec = args.method.spec.clone();
    match &mut spec {
        MethodSpec::Classic(KernelSpec::CubicConvolution { a }) => {
            if let Some(v) = args.a {
                *a = v;
            }
        }
        MethodSpec::Classic(KernelSpec::KaiserSinc16 { beta }) => {
            if let Some(v) = args.beta {
                *beta = v;
            }
        }
        MethodSpec::HybridPyramid { levels } => {
            if let Some(v) = args.levels {
                if v == 0 {
                    bail!("--levels must be at least 1");
                }
                *levels = v;
            }
        }
        MethodSpec::Adaptive { window, threshold, .. } => {
            if let Some(v) = args.window {
                *window = v;
            }
            if let Some(v) = args.threshold {
                *threshold = v;
            }
        }
        MethodSpec::Classic(_) => {}
    }
    if let MethodSpec::Classic(k) = &spec {
        k.validate().map_err(|e| anyhow!("{e}"))?;
    }
    Ok(spec)
}

fn cmd_resample(args: ResampleArgs) -> Result<()> {
    let input = read_raster(&args.input)?;
    let spec = apply_overrides(&args)?;
    let (out_w, out_h) = args.size;
    let out = run(&input, &args.transform, out_w, out_h, &spec, args.boundary.into())?;
    write_raster(&args.out, &out)
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| anyhow!("reading {}: {e}", args.config.display()))?;
    let cfg = parse_config(&text)?;
    let outcome = run_bench(&cfg)?;
    println!("wrote {}", outcome.csv_path.display());
    if args.markdown {
        print!("{}", outcome.markdown);
    }
    if outcome.failed_cells > 0 {
        bail!("{} benchmark cell(s) failed; see the error column", outcome.failed_cells);
    }
    Ok(())
}

fn cmd_pyramid(args: PyramidArgs) -> Result<()> {
    let input = read_raster(&args.input)?;
    let pyr = pyramid::build(&input, args.levels)?;
    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| anyhow!("creating {}: {e}", args.out_dir.display()))?;
    for (k, band) in pyr.bands().iter().enumerate() {
        write_raster(&args.out_dir.join(format!("level_{k}.rsf")), band)?;
    }
    write_raster(&args.out_dir.join("residual.rsf"), pyr.residual())?;
    if args.reconstruct {
        let rebuilt = pyramid::reconstruct(&pyr)?;
        write_raster(&args.out_dir.join("reconstructed.rsf"), &rebuilt)?;
        let err = rebuilt.max_abs_diff(&input)?;
        println!("max abs reconstruction error: {err:.3e}");
    }
    Ok(())
}

fn cmd_synth(args: SynthArgs) -> Result<()> {
    let spec = SceneSpec::new(args.kind, args.size, args.contrast, args.seed)?;
    let scene = synth_scene(&spec)?;
    write_raster(&args.out, &scene)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Resample(args) => cmd_resample(*args),
        Command::Bench(args) => cmd_bench(args),
        Command::Pyramid(args) => cmd_pyramid(args),
        Command::Synth(args) => cmd_synth(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
