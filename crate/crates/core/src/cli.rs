//! `holocomp` command line: generate, compress, decompress, evaluate, bench.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::codec::{self, compression_ratio, HinrHeader, ValuePrecision};
use crate::error::{HoloError, Result};
use crate::hologram::{OpticalConfig, PhaseHologram};
use crate::imaging::{load_target, save_f32_raw, save_rgb_png, ResizeRecord};
use crate::metrics::{display_db, evaluate_pair, mean_std, ReferenceMode, Reference};
use crate::nn::{InrArchitecture, InrKind, PRESET_PATCH_SIZES};
use crate::optics::{max_propagation_distance, reconstruct, synthesize_hologram};
use crate::patch::PatchGrid;
use crate::train::{train_hologram_subset, ComputePrecision, EarlyStop, StopReason, TrainLog, TrainOptions, TrainingSchedule};

pub const EXIT_USER: u8 = 1;
pub const EXIT_INTEGRITY: u8 = 2;
pub const EXIT_PARTIAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "holocomp", version, about = "Compress phase-only holograms with per-patch neural representations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize a double-phase hologram from an image.
    Generate(GenerateArgs),
    /// Fit one network per patch and write a .hinr container.
    Compress(CompressArgs),
    /// Rebuild a .holo hologram from a .hinr container.
    Decompress(DecompressArgs),
    /// Score a compressed hologram against the original.
    Evaluate(EvaluateArgs),
    /// Compress every hologram of a corpus for several architectures and patch sizes.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Input image (PNG or JPEG).
    pub image: PathBuf,
    /// Output .holo path.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Distance from the hologram to the image plane, in millimeters.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub distance: f64,
    /// Square output size in pixels (even); overridden by --height/--width.
    #[arg(long, default_value_t = 512)]
    pub size: usize,
    #[arg(long)]
    pub height: Option<usize>,
    #[arg(long)]
    pub width: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ScheduleArgs {
    /// Maximum epochs per patch (one epoch is one full-batch step).
    #[arg(long, visible_alias = "max-epochs", default_value_t = 10_000)]
    pub epochs: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub lr: f64,
    /// Epochs between learning-rate decays.
    #[arg(long, default_value_t = 5000)]
    pub step_size: usize,
    /// Learning-rate decay factor.
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
    #[arg(long, default_value_t = 500)]
    pub early_stop_window: usize,
    /// Minimum relative improvement of the best loss over the window.
    #[arg(long, default_value_t = 1e-4)]
    pub early_stop_rel: f64,
    /// Epochs before early stopping is considered.
    #[arg(long, default_value_t = 3000)]
    pub early_stop_min_epochs: usize,
    #[arg(long)]
    pub no_early_stop: bool,
    /// Parallel patch chains.
    #[arg(long, env = "HOLOCOMP_THREADS", default_value_t = 1)]
    pub workers: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Arithmetic used while training (f32 or f64).
    #[arg(long, default_value = "f32", value_parser = parse_compute)]
    pub compute: ComputePrecision,
    /// Start every patch from a fresh initialization.
    #[arg(long)]
    pub no_warm_start: bool,
}

impl ScheduleArgs {
    pub fn options(&self) -> Result<TrainOptions> {
        let schedule = TrainingSchedule {
            base_lr: self.lr,
            step_size: self.step_size,
            gamma: self.gamma,
            max_epochs: self.epochs,
            early_stop: (!self.no_early_stop).then_some(EarlyStop {
                window: self.early_stop_window,
                min_rel_improvement: self.early_stop_rel,
                min_epochs: self.early_stop_min_epochs,
            }),
            ..TrainingSchedule::default()
        };
        schedule.validate()?;
        if self.workers == 0 {
            return Err(HoloError::Validation("--workers must be at least 1".into()));
        }
        Ok(TrainOptions {
            schedule,
            seed: self.seed,
            workers: self.workers,
            precision: self.compute,
            warm_start: !self.no_warm_start,
        })
    }
}

fn parse_compute(s: &str) -> std::result::Result<ComputePrecision, String> {
    match s {
        "f32" => Ok(ComputePrecision::F32),
        "f64" => Ok(ComputePrecision::F64),
        other => Err(format!("unknown compute precision '{other}' (expected f32 or f64)")),
    }
}

#[derive(Debug, Args)]
pub struct CompressArgs {
    /// Input .holo hologram.
    pub input: PathBuf,
    /// Output .hinr path (default: input with .hinr extension).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value = "siren", value_parser = clap::value_parser!(InrKind))]
    pub arch: InrKind,
    /// Square patch side; one of 64, 96, 128, 160.
    #[arg(long, default_value_t = 64)]
    pub patch: usize,
    /// Stored parameter precision.
    #[arg(long, default_value = "f32", value_parser = clap::value_parser!(ValuePrecision))]
    pub precision: ValuePrecision,
    /// Per-epoch JSON-lines training log.
    #[arg(long)]
    pub log: Option<PathBuf>,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
}

#[derive(Debug, Args)]
pub struct DecompressArgs {
    pub input: PathBuf,
    /// Output .holo path (default: input with .holo extension).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Uncompressed .holo hologram.
    pub original: PathBuf,
    /// Compressed .hinr container or decompressed .holo hologram.
    pub compressed: PathBuf,
    /// Reference for reconstruction scores: source or uncompressed.
    #[arg(long, default_value = "uncompressed", value_parser = clap::value_parser!(ReferenceMode))]
    pub reference: ReferenceMode,
    /// Source image; required with --reference source.
    #[arg(long)]
    pub source: Option<PathBuf>,
    /// Output directory (default: <compressed>.eval next to the input).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Directory with .holo holograms.
    pub corpus: PathBuf,
    /// Comma-separated architectures.
    #[arg(long, value_delimiter = ',', default_value = "mlp,film-siren,siren", value_parser = clap::value_parser!(InrKind))]
    pub archs: Vec<InrKind>,
    /// Comma-separated patch sizes.
    #[arg(long, value_delimiter = ',', default_value = "64,96,128,160")]
    pub patches: Vec<usize>,
    /// Train only the first N patches of each hologram.
    #[arg(long)]
    pub patch_limit: Option<usize>,
    /// Output directory (default: <corpus>/bench).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub log: Option<PathBuf>,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
}

/// Fully resolved parameters of one invocation, written next to its outputs.
#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum RunConfig {
    Generate {
        image: PathBuf,
        output: PathBuf,
        distance_m: f64,
        resize: ResizeRecord,
        optics: OpticalConfig,
    },
    Compress {
        input: PathBuf,
        output: PathBuf,
        arch: InrArchitecture,
        patch: usize,
        precision: ValuePrecision,
        training: TrainOptions,
        log: Option<PathBuf>,
    },
    Decompress {
        input: PathBuf,
        output: PathBuf,
    },
    Evaluate {
        original: PathBuf,
        compressed: PathBuf,
        reference: ReferenceMode,
        source: Option<PathBuf>,
        out: PathBuf,
    },
    Bench {
        corpus: PathBuf,
        holograms: Vec<PathBuf>,
        archs: Vec<InrKind>,
        patches: Vec<usize>,
        patch_limit: Option<usize>,
        training: TrainOptions,
        out: PathBuf,
    },
}

/// `<path>.run.json`
pub fn run_config_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".run.json");
    output.with_file_name(name)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    fs::write(path, text + "\n").map_err(|e| HoloError::file(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| HoloError::file(path, e))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| HoloError::file(dir, e))
}

fn open_log(path: &Path) -> Result<TrainLog> {
    let file = File::create(path).map_err(|e| HoloError::file(path, e))?;
    Ok(TrainLog::new(BufWriter::new(file)))
}

pub fn generate(args: &GenerateArgs) -> Result<RunConfig> {
    let height = args.height.unwrap_or(args.size);
    let width = args.width.unwrap_or(args.size);
    let (target, resize) = load_target(&args.image, height, width)?;
    let optics = OpticalConfig::default();
    let distance = args.distance * 1e-3;
    let limit = optics
        .wavelengths
        .iter()
        .map(|&wl| max_propagation_distance(height, width, wl, optics.pixel_pitch))
        .fold(f64::INFINITY, f64::min);
    if distance.abs() > limit {
        return Err(HoloError::Validation(format!(
            "--distance {} mm exceeds the {:.3} mm sampling limit for {height}×{width}",
            args.distance,
            limit * 1e3
        )));
    }
    let holo = synthesize_hologram(target.view(), &optics, distance)?;
    holo.save(&args.output)?;
    save_rgb_png(target.view(), args.output.with_extension("target.png"))?;
    let config = RunConfig::Generate {
        image: args.image.clone(),
        output: args.output.clone(),
        distance_m: distance,
        resize,
        optics,
    };
    write_json(&run_config_path(&args.output), &config)?;
    Ok(config)
}

/// Trains and encodes; returns the container bytes and the training report.
pub fn compress_hologram(
    holo: &PhaseHologram,
    arch: &InrArchitecture,
    patch: usize,
    precision: ValuePrecision,
    options: &TrainOptions,
    log: Option<&TrainLog>,
) -> Result<(Vec<u8>, crate::train::TrainReport)> {
    let grid = PatchGrid::for_hologram(patch, holo)?;
    let (models, report) = train_hologram_subset(holo, &grid, arch, options, log, None)?;
    let header = HinrHeader::new(&grid, arch.clone(), precision, options.seed, holo.config().clone());
    Ok((codec::encode(&models, &header)?, report))
}

pub fn compress(args: &CompressArgs) -> Result<RunConfig> {
    let options = args.schedule.options()?;
    let arch = InrArchitecture::preset(args.arch, args.patch)?;
    let holo = PhaseHologram::load(&args.input)?;
    let output = args.output.clone().unwrap_or_else(|| args.input.with_extension("hinr"));
    let log = args.log.as_deref().map(open_log).transpose()?;
    let (bytes, report) = compress_hologram(&holo, &arch, args.patch, args.precision, &options, log.as_ref())?;
    fs::write(&output, &bytes).map_err(|e| HoloError::file(&output, e))?;
    let mut report_path = output.clone().into_os_string();
    report_path.push(".train.json");
    write_json(Path::new(&report_path), &report)?;
    eprintln!(
        "{}: {} patches, PSNR {} ± {:.2} dB, ratio {}%, {} bytes{}",
        output.display(),
        report.patches.len(),
        display_db(report.mean_psnr),
        report.std_psnr,
        compression_ratio(arch.parameter_count(), args.patch, args.patch),
        bytes.len(),
        match report.failures() {
            0 => String::new(),
            n => format!(", {n} failed patches"),
        }
    );
    let config = RunConfig::Compress {
        input: args.input.clone(),
        output: output.clone(),
        arch,
        patch: args.patch,
        precision: args.precision,
        training: options,
        log: args.log.clone(),
    };
    write_json(&run_config_path(&output), &config)?;
    Ok(config)
}

pub fn decompress(args: &DecompressArgs) -> Result<RunConfig> {
    let bytes = fs::read(&args.input).map_err(|e| HoloError::file(&args.input, e))?;
    let holo = codec::decompress(&bytes)?;
    let output = args.output.clone().unwrap_or_else(|| args.input.with_extension("holo"));
    holo.save(&output)?;
    let config = RunConfig::Decompress {
        input: args.input.clone(),
        output: output.clone(),
    };
    write_json(&run_config_path(&output), &config)?;
    Ok(config)
}

/// Loads a `.hinr` (decompressing it) or a `.holo`, chosen by magic bytes.
fn load_any(path: &Path) -> Result<(PhaseHologram, Option<HinrHeader>, usize)> {
    let bytes = fs::read(path).map_err(|e| HoloError::file(path, e))?;
    if bytes.starts_with(codec::HINR_MAGIC) {
        let (models, header) = codec::decode(&bytes)?;
        Ok((codec::decompress_models(&models, &header)?, Some(header), bytes.len()))
    } else {
        Ok((PhaseHologram::from_bytes(&bytes)?, None, bytes.len()))
    }
}

/// File-name tag of a reconstruction plane, e.g. `-2500` for −2.5 mm.
pub fn distance_tag(distance: f64) -> String {
    format!("{}", (distance * 1e6).round() as i64)
}

pub fn evaluate(args: &EvaluateArgs) -> Result<(RunConfig, crate::metrics::QualityReport)> {
    let original = PhaseHologram::load(&args.original)?;
    let (decompressed, header, bytes) = load_any(&args.compressed)?;
    // the .holo container does not carry evaluation distances; use the compressed side's
    let original = original.with_config(decompressed.config().clone())?;
    let source = match (args.reference, &args.source) {
        (ReferenceMode::Source, Some(path)) => Some(load_target(path, original.height(), original.width())?.0),
        (ReferenceMode::Source, None) => {
            return Err(HoloError::Validation("--reference source needs --source <image>".into()));
        }
        (ReferenceMode::Uncompressed, _) => None,
    };
    let reference = match &source {
        Some(image) => Reference::Source(image.view()),
        None => Reference::Uncompressed,
    };
    let mut report = evaluate_pair(&original, &decompressed, reference)?;
    report.compression = header.map(|h| h.stats(bytes));

    let out = args.out.clone().unwrap_or_else(|| {
        let mut name = args.compressed.file_name().unwrap_or_default().to_os_string();
        name.push(".eval");
        args.compressed.with_file_name(name)
    });
    ensure_dir(&out)?;
    let stack = reconstruct(&decompressed, &decompressed.config().eval_distances)?;
    for plane in &stack.planes {
        let tag = distance_tag(plane.distance);
        save_rgb_png(plane.intensity.view(), out.join(format!("recon_{tag}um.png")))?;
        save_f32_raw(plane.intensity.view(), out.join(format!("recon_{tag}um.f32")))?;
    }
    write_json(&out.join("report.json"), &report)?;
    write_text(&out.join("report.txt"), &report.to_text())?;
    let config = RunConfig::Evaluate {
        original: args.original.clone(),
        compressed: args.compressed.clone(),
        reference: args.reference,
        source: args.source.clone(),
        out: out.clone(),
    };
    write_json(&out.join("run.json"), &config)?;
    Ok((config, report))
}

/// One (architecture, patch size) line of a bench table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub arch: InrKind,
    pub patch: usize,
    pub patches: usize,
    #[serde(with = "crate::metrics::db_serde")]
    pub mean_psnr: f64,
    #[serde(with = "crate::metrics::db_serde")]
    pub std_psnr: f64,
    pub params: usize,
    pub ratio_percent: u32,
    pub failed_patches: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchPatch {
    pub hologram: PathBuf,
    pub arch: InrKind,
    pub patch: usize,
    pub index: usize,
    #[serde(with = "crate::metrics::db_serde")]
    pub psnr: f64,
    pub epochs: usize,
    pub stop_reason: StopReason,
    pub wall_seconds: f64,
}

#[derive(Clone, Debug, Default)]
pub struct BenchOutcome {
    pub rows: Vec<BenchRow>,
    pub patches: Vec<BenchPatch>,
    /// Holograms that could not be read, or (arch, patch) runs that errored.
    pub problems: Vec<String>,
}

impl BenchOutcome {
    pub fn is_partial(&self) -> bool {
        !self.problems.is_empty() || self.rows.iter().any(|r| r.failed_patches > 0)
    }
}

fn fmt_psnr_std(mean: f64, std: f64) -> String {
    format!("{} ± {:.2}", display_db(mean), std)
}

/// Table with one block per architecture: Patch size | PSNR ± Std. | Params | Comp. Ratio.
pub fn bench_table(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    let mut archs: Vec<InrKind> = Vec::new();
    for r in rows {
        if !archs.contains(&r.arch) {
            archs.push(r.arch);
        }
    }
    for arch in archs {
        let _ = writeln!(out, "{arch}");
        let _ = writeln!(out, "{:<14} {:>16} {:>8} {:>12}", "Patch size", "PSNR ± Std.", "Params", "Comp. Ratio");
        for r in rows.iter().filter(|r| r.arch == arch) {
            let size = format!("3×{}×{}", r.patch, r.patch);
            let _ = writeln!(
                out,
                "{:<14} {:>16} {:>8} {:>11}%",
                size,
                fmt_psnr_std(r.mean_psnr, r.std_psnr),
                r.params,
                r.ratio_percent
            );
        }
        out.push('\n');
    }
    out
}

/// Lists the `.holo` files of a corpus directory in name order.
pub fn corpus_holograms(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| HoloError::file(dir, e))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "holo"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(HoloError::Validation(format!("corpus {} contains no .holo files", dir.display())));
    }
    Ok(paths)
}

/// Runs every (architecture, patch size) pair over the given holograms.
pub fn run_bench(
    holograms: &[PathBuf],
    archs: &[InrKind],
    patches: &[usize],
    options: &TrainOptions,
    patch_limit: Option<usize>,
    log: Option<&TrainLog>,
) -> Result<BenchOutcome> {
    if holograms.is_empty() {
        return Err(HoloError::Validation("empty corpus".into()));
    }
    let mut outcome = BenchOutcome::default();
    let mut loaded = Vec::new();
    for path in holograms {
        match PhaseHologram::load(path) {
            Ok(h) => loaded.push((path.clone(), h)),
            Err(e) => outcome.problems.push(format!("{}: {e}", path.display())),
        }
    }
    if loaded.is_empty() {
        return Err(HoloError::Validation(format!("no readable holograms: {}", outcome.problems.join("; "))));
    }
    for &arch_kind in archs {
        for &patch in patches {
            let arch = InrArchitecture::preset(arch_kind, patch)?;
            let mut psnrs = Vec::new();
            let mut failed = 0;
            for (path, holo) in &loaded {
                let grid = match PatchGrid::for_hologram(patch, holo) {
                    Ok(g) => g,
                    Err(e) => {
                        outcome.problems.push(format!("{} {arch_kind}-{patch}: {e}", path.display()));
                        continue;
                    }
                };
                let (_, report) = match train_hologram_subset(holo, &grid, &arch, options, log, patch_limit) {
                    Ok(r) => r,
                    Err(e) => {
                        outcome.problems.push(format!("{} {arch_kind}-{patch}: {e}", path.display()));
                        continue;
                    }
                };
                for p in &report.patches {
                    if p.stop_reason == StopReason::Failed {
                        failed += 1;
                    } else {
                        psnrs.push(p.psnr);
                    }
                    outcome.patches.push(BenchPatch {
                        hologram: path.clone(),
                        arch: arch_kind,
                        patch,
                        index: p.index,
                        psnr: p.psnr,
                        epochs: p.epochs,
                        stop_reason: p.stop_reason,
                        wall_seconds: p.wall_seconds,
                    });
                }
                eprintln!(
                    "{} {arch_kind}-{patch}: {} patches, mean {} dB",
                    path.display(),
                    report.patches.len(),
                    display_db(report.mean_psnr)
                );
            }
            if psnrs.is_empty() {
                outcome.problems.push(format!("{arch_kind}-{patch}: no patch trained"));
                continue;
            }
            let (mean_psnr, std_psnr) = mean_std(&psnrs);
            outcome.rows.push(BenchRow {
                arch: arch_kind,
                patch,
                patches: psnrs.len(),
                mean_psnr,
                std_psnr,
                params: arch.parameter_count(),
                ratio_percent: compression_ratio(arch.parameter_count(), patch, patch),
                failed_patches: failed,
            });
        }
    }
    Ok(outcome)
}

pub fn bench(args: &BenchArgs) -> Result<(RunConfig, BenchOutcome)> {
    let options = args.schedule.options()?;
    for &p in &args.patches {
        if !PRESET_PATCH_SIZES.contains(&p) {
            return Err(HoloError::Validation(format!("no preset for patch size {p} (use {PRESET_PATCH_SIZES:?})")));
        }
    }
    let holograms = corpus_holograms(&args.corpus)?;
    let out = args.out.clone().unwrap_or_else(|| args.corpus.join("bench"));
    ensure_dir(&out)?;
    let log = args.log.as_deref().map(open_log).transpose()?;
    let outcome = run_bench(&holograms, &args.archs, &args.patches, &options, args.patch_limit, log.as_ref())?;

    let table = bench_table(&outcome.rows);
    write_text(&out.join("bench.txt"), &table)?;
    let jsonl = |items: Vec<String>| items.into_iter().map(|l| l + "\n").collect::<String>();
    let rows = outcome.rows.iter().map(|r| serde_json::to_string(r).expect("row")).collect();
    write_text(&out.join("bench.jsonl"), &jsonl(rows))?;
    let patches = outcome.patches.iter().map(|p| serde_json::to_string(p).expect("patch")).collect();
    write_text(&out.join("patches.jsonl"), &jsonl(patches))?;
    if !outcome.problems.is_empty() {
        write_text(&out.join("problems.txt"), &(outcome.problems.join("\n") + "\n"))?;
    }
    print!("{table}");
    for p in &outcome.problems {
        eprintln!("problem: {p}");
    }
    let config = RunConfig::Bench {
        corpus: args.corpus.clone(),
        holograms,
        archs: args.archs.clone(),
        patches: args.patches.clone(),
        patch_limit: args.patch_limit,
        training: options,
        out: out.clone(),
    };
    write_json(&out.join("run.json"), &config)?;
    Ok((config, outcome))
}

pub fn exit_code(err: &HoloError) -> u8 {
    match err {
        HoloError::Integrity { .. } | HoloError::UnsupportedVersion { .. } => EXIT_INTEGRITY,
        _ => EXIT_USER,
    }
}

/// Parses arguments, runs the command and maps the outcome to an exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USER) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Generate(a) => generate(a).map(|_| 0),
        Command::Compress(a) => compress(a).map(|_| 0),
        Command::Decompress(a) => decompress(a).map(|_| 0),
        Command::Evaluate(a) => evaluate(a).map(|(_, report)| {
            print!("{}", report.to_text());
            0
        }),
        Command::Bench(a) => bench(a).map(|(_, o)| if o.is_partial() { EXIT_PARTIAL } else { 0 }),
    };
    let _ = std::io::stdout().flush();
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
