//! Benchmark configuration: a flat line-oriented `key = value` file.
//!
//! Grammar (one pair per line, `#` starts a comment, lists are
//! comma-separated):
//!
//! ```text
//! scale      = 2
//! bins       = 256
//! seed       = 42
//! output_dir = bench-out
//! scenes     = thin-lines:64:0.8:5, constant:32:0.5
//! methods    = nn, bl, cc, kd16, hybrid:3, adaptive
//! ```
//!
//! A scene token is `kind:size:contrast[:seed]`; a missing seed defaults
//! to the global seed plus the scene's position. Method tokens are
//! `nn | bl | cc[:a] | kd16[:beta] | hybrid[:levels] |
//! adaptive[:threshold[:window]]`.
//!
//! The cellular-network template behind every `adaptive` method can be
//! overridden with optional keys (row-major 3x3 coefficient lists):
//!
//! ```text
//! cnn_feedback  = 0,0,0, 0,2,0, 0,0,0
//! cnn_control   = 0,0,0, 0,4,0, 0,0,0
//! cnn_bias      = 0
//! cnn_step      = 0.1
//! cnn_tol       = 1e-5
//! cnn_max_iters = 500
//! ```

use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use regrid_core::context::CnnTemplate;
use regrid_core::kernels::KernelSpec;
use regrid_core::raster::{SceneKind, SceneSpec};
use regrid_core::resampler::MethodSpec;

pub const DEFAULT_SCALE: usize = 2;
pub const DEFAULT_BINS: usize = 256;
pub const DEFAULT_LEVELS: usize = 3;
pub const DEFAULT_WINDOW: usize = 3;
pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// A parsed method token: the spec to run plus the verbatim label used
/// in reports and file names.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodToken {
    pub label: String,
    pub spec: MethodSpec,
}

impl FromStr for MethodToken {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let label = s.trim().to_owned();
        let mut parts = label.split(':');
        let name = parts.next().unwrap_or_default();
        let args: Vec<&str> = parts.collect();
        let too_many = |max: usize| -> Result<()> {
            if args.len() > max {
                bail!("method {label:?} takes at most {max} parameter(s)");
            }
            Ok(())
        };
        let spec = match name {
            "nn" => {
                too_many(0)?;
                MethodSpec::Classic(KernelSpec::NearestNeighbor)
            }
            "bl" => {
                too_many(0)?;
                MethodSpec::Classic(KernelSpec::Bilinear)
            }
            "cc" => {
                too_many(1)?;
                let a = parse_opt(args.first(), "cubic shape a", KernelSpec::DEFAULT_CUBIC_A)?;
                let spec = KernelSpec::CubicConvolution { a };
                spec.validate().map_err(|e| anyhow!("{label:?}: {e}"))?;
                MethodSpec::Classic(spec)
            }
            "kd16" => {
                too_many(1)?;
                let beta = parse_opt(args.first(), "Kaiser beta", KernelSpec::DEFAULT_KAISER_BETA)?;
                let spec = KernelSpec::KaiserSinc16 { beta };
                spec.validate().map_err(|e| anyhow!("{label:?}: {e}"))?;
                MethodSpec::Classic(spec)
            }
            "hybrid" => {
                too_many(1)?;
                let levels = parse_opt(args.first(), "pyramid levels", DEFAULT_LEVELS)?;
                if levels == 0 {
                    bail!("{label:?}: pyramid levels must be at least 1");
                }
                MethodSpec::HybridPyramid { levels }
            }
            "adaptive" => {
                too_many(2)?;
                let threshold = parse_opt(args.first(), "threshold", DEFAULT_THRESHOLD)?;
                let window = parse_opt(args.get(1), "window", DEFAULT_WINDOW)?;
                MethodSpec::Adaptive {
                    template: CnnTemplate::contrast_selector(),
                    window,
                    threshold,
                }
            }
            other => bail!("unknown method {other:?} (expected nn|bl|cc|kd16|hybrid|adaptive)"),
        };
        Ok(MethodToken { label, spec })
    }
}

fn parse_opt<T: FromStr>(arg: Option<&&str>, what: &str, default: T) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    match arg {
        None => Ok(default),
        Some(s) => s
            .parse()
            .map_err(|e| anyhow!("invalid {what} {s:?}: {e}")),
    }
}

/// A scene token plus its verbatim label.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneToken {
    pub label: String,
    pub spec: SceneSpec,
}

impl SceneToken {
    fn parse(s: &str, default_seed: u64) -> Result<Self> {
        let label = s.trim().to_owned();
        let parts: Vec<&str> = label.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            bail!("scene token {label:?} must be kind:size:contrast[:seed]");
        }
        let kind: SceneKind = parts[0]
            .parse()
            .map_err(|e| anyhow!("scene {label:?}: {e}"))?;
        let size: usize = parts[1]
            .parse()
            .map_err(|e| anyhow!("scene {label:?}: invalid size: {e}"))?;
        let contrast: f64 = parts[2]
            .parse()
            .map_err(|e| anyhow!("scene {label:?}: invalid contrast: {e}"))?;
        let seed: u64 = match parts.get(3) {
            Some(s) => s
                .parse()
                .map_err(|e| anyhow!("scene {label:?}: invalid seed: {e}"))?,
            None => default_seed,
        };
        let spec = SceneSpec::new(kind, size, contrast, seed).map_err(|e| anyhow!("scene {label:?}: {e}"))?;
        Ok(SceneToken { label, spec })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub scenes: Vec<SceneToken>,
    pub methods: Vec<MethodToken>,
    pub scale: usize,
    pub bins: usize,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub markdown: bool,
}

fn parse_template_grid(value: &str) -> Result<[[f64; 3]; 3]> {
    let cells: Vec<f64> = value
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| anyhow!("bad coefficient {s:?}: {e}")))
        .collect::<Result<_>>()?;
    if cells.len() != 9 {
        bail!("expected 9 coefficients, got {}", cells.len());
    }
    let mut grid = [[0.0; 3]; 3];
    for (i, v) in cells.into_iter().enumerate() {
        grid[i / 3][i % 3] = v;
    }
    Ok(grid)
}

pub fn parse_config(text: &str) -> Result<BenchConfig> {
    let mut scale = DEFAULT_SCALE;
    let mut bins = DEFAULT_BINS;
    let mut seed = 0u64;
    let mut output_dir = PathBuf::from("bench-out");
    let mut scene_list: Option<String> = None;
    let mut method_list: Option<String> = None;
    let mut template = CnnTemplate::contrast_selector();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .with_context(|| format!("line {}: expected key = value, got {raw:?}", lineno + 1))?;
        let (key, value) = (key.trim(), value.trim());
        let at = || format!("line {}: {key}", lineno + 1);
        match key {
            "scale" => scale = value.parse().with_context(at)?,
            "bins" => bins = value.parse().with_context(at)?,
            "seed" => seed = value.parse().with_context(at)?,
            "output_dir" => output_dir = PathBuf::from(value),
            "scenes" => scene_list = Some(value.to_owned()),
            "methods" => method_list = Some(value.to_owned()),
            "cnn_feedback" => template.feedback = parse_template_grid(value).with_context(at)?,
            "cnn_control" => template.control = parse_template_grid(value).with_context(at)?,
            "cnn_bias" => template.bias = value.parse().with_context(at)?,
            "cnn_step" => template.step = value.parse().with_context(at)?,
            "cnn_tol" => template.tol = value.parse().with_context(at)?,
            "cnn_max_iters" => template.max_iters = value.parse().with_context(at)?,
            other => bail!("line {}: unknown key {other:?}", lineno + 1),
        }
    }
    template
        .validate()
        .map_err(|e| anyhow!("invalid cnn_* settings: {e}"))?;

    if scale < 2 {
        bail!("scale must be an integer >= 2, got {scale}");
    }
    if bins < 2 {
        bail!("bins must be >= 2, got {bins}");
    }
    let scene_list = scene_list.ok_or_else(|| anyhow!("config needs a scenes = ... line"))?;
    let method_list = method_list.ok_or_else(|| anyhow!("config needs a methods = ... line"))?;

    let mut scenes = Vec::new();
    for (i, tok) in scene_list.split(',').enumerate() {
        scenes.push(SceneToken::parse(tok, seed + i as u64)?);
    }
    let mut methods: Vec<MethodToken> = method_list
        .split(',')
        .map(|tok| tok.parse())
        .collect::<Result<_>>()?;
    for m in &mut methods {
        if let MethodSpec::Adaptive { template: t, .. } = &mut m.spec {
            *t = template.clone();
        }
    }
    if scenes.is_empty() {
        bail!("at least one scene is required");
    }
    if methods.is_empty() {
        bail!("at least one method is required");
    }

    Ok(BenchConfig {
        scenes,
        methods,
        scale,
        bins,
        seed,
        output_dir,
        markdown: false,
    })
}
