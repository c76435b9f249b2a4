//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed. Exits
//! non-zero if any hard criterion fails; the ordering trend is reported only.

#[path = "support/gradcheck.rs"]
mod gradcheck;

use std::f64::consts::{PI, TAU};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use holocomp::cli::{corpus_holograms, run_bench, BenchPatch};
use holocomp::codec::{self, preset_ratio, HinrHeader, ValuePrecision};
use holocomp::hologram::OpticalConfig;
use holocomp::imaging::load_target;
use holocomp::metrics::{mean_std, psnr, ssim_plane, SSIM_K1, SSIM_K2, SSIM_SIGMA, SSIM_WINDOW};
use holocomp::nn::{InrArchitecture, InrKind, InrModel};
use holocomp::optics::{double_phase_decode, double_phase_encode, propagate_asm, synthesize_hologram, ComplexField};
use holocomp::patch::PatchGrid;
use holocomp::train::{train_patch, StopReason, TrainOptions, TrainingSchedule};
use ndarray::{s, Array2, Array3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;

type Outcome = Result<String, String>;

struct Criterion {
    id: u8,
    name: &'static str,
    budget: Duration,
    soft: bool,
    run: fn() -> Outcome,
}

fn repo_root() -> PathBuf {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    root.canonicalize().unwrap_or(root)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// 1. Compression accounting

const RATIO_TABLE: [(InrKind, [u32; 4]); 3] = [
    (InrKind::VanillaMlp, [41, 40, 40, 41]),
    (InrKind::FilmSiren, [40, 39, 39, 40]),
    (InrKind::Siren, [40, 40, 40, 41]),
];

fn compression_accounting() -> Outcome {
    let mut cells = Vec::new();
    for (kind, expected) in RATIO_TABLE {
        for (patch, want) in [64, 96, 128, 160].into_iter().zip(expected) {
            let got = preset_ratio(kind, patch).map_err(|e| e.to_string())?;
            ensure(got == want, || format!("{kind}-{patch}: {got}% != {want}%"))?;
            cells.push(format!("{got}"));
        }
    }
    Ok(format!("12/12 presets match ({})", cells.join("/")))
}

// 2. Gradient correctness

fn gradient_correctness() -> Outcome {
    let mut summary = Vec::new();
    let mut failed = false;
    for kind in InrKind::ALL {
        let worst = gradcheck::config_seeds(kind)
            .map(|seed| gradcheck::max_relative_error(kind, seed))
            .fold(0.0, f64::max);
        let failing = gradcheck::failing_configs(kind).len();
        failed |= failing > 0;
        summary.push(format!("{kind} {failing}/20 over tolerance (worst {worst:.1e})"));
    }
    let text = format!("h={:e}, tol={:e}: {}", gradcheck::STEP, gradcheck::TOLERANCE, summary.join(", "));
    if failed {
        Err(text)
    } else {
        Ok(text)
    }
}

// 3. Optics invariants

fn rel_l2(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}

fn random_field(n: usize, wavelength: f64, pitch: f64, rng: &mut ChaCha8Rng) -> ComplexField {
    let values = Array2::from_shape_fn((n, n), |_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    ComplexField::new(values, wavelength, pitch).unwrap()
}

fn optics_invariants() -> Outcome {
    let config = OpticalConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut identity, mut roundtrip, mut energy, mut compose) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &wl in &config.wavelengths {
        // every sampled frequency propagates at these λ/px, so any sampled field is band-limited
        let f = random_field(128, wl, config.pixel_pitch, &mut rng);
        let e = |r: holocomp::Result<ComplexField>| r.map_err(|e| e.to_string());
        identity = identity.max(rel_l2(&e(propagate_asm(&f, 0.0))?.values, &f.values));
        for d in [2.5e-3, -1.3e-3] {
            let back = e(propagate_asm(&e(propagate_asm(&f, d))?, -d))?;
            roundtrip = roundtrip.max(rel_l2(&back.values, &f.values));
            let moved = e(propagate_asm(&f, d))?;
            energy = energy.max(((moved.energy() - f.energy()) / f.energy()).abs());
        }
        let (d1, d2) = (1.1e-3, 1.4e-3);
        let once = e(propagate_asm(&f, d1 + d2))?;
        let twice = e(propagate_asm(&e(propagate_asm(&f, d1))?, d2))?;
        compose = compose.max(rel_l2(&twice.values, &once.values));
    }
    let text = format!("identity {identity:.1e}, ±d {roundtrip:.1e}, energy {energy:.1e}, composition {compose:.1e}");
    ensure(identity < 1e-10 && roundtrip < 1e-6 && energy < 1e-9 && compose < 1e-8, || text.clone())?;
    Ok(text)
}

// 4. Double-phase round-trip

/// Smooth random field built by direct summation of a few low-frequency
/// plane waves, sampled once per horizontal pixel pair.
fn pair_sampled_field(h: usize, w: usize, rng: &mut ChaCha8Rng) -> Array2<Complex64> {
    let modes: Vec<(f64, f64, Complex64)> = (0..6)
        .map(|_| {
            (
                rng.random_range(-3.0..3.0),
                rng.random_range(-3.0..3.0),
                Complex64::from_polar(rng.random_range(0.1..1.0), rng.random_range(0.0..TAU)),
            )
        })
        .collect();
    Array2::from_shape_fn((h, w), |(y, x)| {
        let (u, v) = (y as f64 / h as f64, (x / 2 * 2) as f64 / w as f64);
        modes.iter().map(|&(ky, kx, c)| c * Complex64::from_polar(1.0, TAU * (ky * u + kx * v))).sum()
    })
}

fn wrapped(a: f64) -> f64 {
    (a + PI).rem_euclid(TAU) - PI
}

fn double_phase_roundtrip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (wl, px) = (515e-9, 3.74e-6);
    let (mut vs_oracle, mut amp_err, mut phase_err) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..8 {
        let values = pair_sampled_field(32, 48, &mut rng);
        let field = ComplexField::new(values.clone(), wl, px).unwrap();
        let encoded = double_phase_encode(&field).map_err(|e| e.to_string())?;
        let decoded = double_phase_decode(&encoded, wl, px).map_err(|e| e.to_string())?;
        for y in 0..32 {
            for x in (0..48).step_by(2) {
                // brute-force pairing: mean of the pair's two unit phasors
                let (p, q) = (encoded.phases[[y, x]], encoded.phases[[y, x + 1]]);
                let oracle = Complex64::new(p.cos() + q.cos(), p.sin() + q.sin()) * (0.5 * encoded.scale);
                for xx in [x, x + 1] {
                    let got = decoded.values[[y, xx]];
                    vs_oracle = vs_oracle.max((got - oracle).norm());
                    let want = values[[y, xx]];
                    amp_err = amp_err.max((got.norm() - want.norm()).abs());
                    if want.norm() > 1e-3 {
                        phase_err = phase_err.max(wrapped(got.arg() - want.arg()).abs());
                    }
                }
            }
        }
    }
    let text = format!("vs pairing oracle {vs_oracle:.1e}, amplitude {amp_err:.1e}, phase {phase_err:.1e}");
    ensure(vs_oracle < 1e-6 && amp_err < 1e-6 && phase_err < 1e-6, || text.clone())?;
    Ok(text)
}

// 5. Schedule conformance

fn schedule_conformance() -> Outcome {
    let s = TrainingSchedule::default();
    for (epoch, want) in [(0, 1e-4), (4999, 1e-4), (5000, 5e-5), (9999, 5e-5)] {
        let got = s.lr(epoch);
        ensure(got == want, || format!("lr({epoch}) = {got:e}, expected {want:e}"))?;
    }
    let options = TrainOptions {
        schedule: TrainingSchedule {
            early_stop: None,
            ..TrainingSchedule::default()
        },
        ..TrainOptions::default()
    };
    let patch = Array3::from_shape_fn((3, 4, 4), |(c, y, x)| ((c + y + x) % 4) as f64 / 4.0);
    let (_, report) = train_patch(patch.view(), &InrArchitecture::siren(vec![4]), &options, None, 0, 0, None)
        .map_err(|e| e.to_string())?;
    ensure(report.epochs == 10_000 && report.stop_reason == StopReason::MaxEpochs, || {
        format!("ran {} epochs ({:?})", report.epochs, report.stop_reason)
    })?;
    Ok("lr 1e-4/1e-4/5e-5/5e-5 exact; 10000 epochs without early stop".into())
}

// 6. Desk-scale quality

const QUALITY_FLOOR_DB: f64 = 35.0;
const PATCH_BUDGET: Duration = Duration::from_secs(300);

/// SIREN-64 runs on patch 0 of each smoke hologram, shared with criterion 7.
static SIREN_SMOKE: OnceLock<Vec<BenchPatch>> = OnceLock::new();

fn smoke_patches(kind: InrKind) -> Result<Vec<BenchPatch>, String> {
    let corpus = repo_root().join("corpus/smoke");
    let holograms = corpus_holograms(&corpus).map_err(|e| e.to_string())?;
    let outcome = run_bench(&holograms, &[kind], &[64], &TrainOptions::default(), Some(SMOKE_PATCHES), None)
        .map_err(|e| e.to_string())?;
    ensure(outcome.problems.is_empty(), || outcome.problems.join("; "))?;
    Ok(outcome.patches)
}

fn name(p: &BenchPatch) -> String {
    p.hologram.file_stem().unwrap_or_default().to_string_lossy().into_owned()
}

fn desk_scale_quality() -> Outcome {
    let patches = smoke_patches(InrKind::Siren)?;
    let _ = SIREN_SMOKE.set(patches.clone());
    let text = patches
        .iter()
        .map(|p| format!("{} patch {}: {:.2} dB in {} epochs, {:.0} s", name(p), p.index, p.psnr, p.epochs, p.wall_seconds))
        .collect::<Vec<_>>()
        .join("; ");
    ensure(!patches.is_empty(), || "no patches trained".into())?;
    ensure(patches.iter().all(|p| p.psnr >= QUALITY_FLOOR_DB), || format!("below {QUALITY_FLOOR_DB} dB: {text}"))?;
    ensure(patches.iter().all(|p| p.wall_seconds <= PATCH_BUDGET.as_secs_f64()), || format!("over {PATCH_BUDGET:?} per patch: {text}"))?;
    Ok(format!("SIREN-64 {text}"))
}

// 7. Architecture ordering trend (soft)

const ORDERING_ALERT_DB: f64 = -1.0;
const SMOKE_PATCHES: usize = 1;

fn ordering_trend() -> Outcome {
    let siren = match SIREN_SMOKE.get() {
        Some(p) => p.clone(),
        None => smoke_patches(InrKind::Siren)?,
    };
    let mlp = smoke_patches(InrKind::VanillaMlp)?;
    let mean = |v: &[BenchPatch]| mean_std(&v.iter().map(|p| p.psnr).collect::<Vec<_>>()).0;
    let (siren, mlp) = (mean(&siren), mean(&mlp));
    let delta = siren - mlp;
    let record = serde_json::json!({
        "corpus": "corpus/smoke", "patches_per_hologram": SMOKE_PATCHES,
        "siren_db": siren, "mlp_db": mlp, "delta_db": delta, "alert_db": ORDERING_ALERT_DB,
    });
    let dir = repo_root().join("target/acceptance");
    let _ = std::fs::create_dir_all(&dir);
    let _ = std::fs::write(dir.join("ordering.json"), record.to_string() + "\n");
    let text = format!("SIREN {siren:.2} dB vs MLP {mlp:.2} dB (Δ {delta:+.2} dB, alert below {ORDERING_ALERT_DB} dB)");
    ensure(delta >= ORDERING_ALERT_DB, || text.clone())?;
    Ok(text)
}

// 8. Codec integrity

fn run_cli(args: &[&std::ffi::OsStr]) -> Result<std::process::Output, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_holocomp")).args(args).output().map_err(|e| e.to_string())?;
    Ok(out)
}

fn codec_integrity() -> Outcome {
    let arch = InrArchitecture::preset(InrKind::FilmSiren, 64).map_err(|e| e.to_string())?;
    let grid = PatchGrid::square(64, 128, 192).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let models: Vec<InrModel> = (0..grid.len() as u64)
        .map(|i| {
            let mut m = InrModel::init(arch.clone(), i).unwrap();
            m.params.iter_mut().for_each(|p| *p = (*p + rng.random_range(-0.5..0.5)) as f32 as f64);
            m
        })
        .collect();
    let header = HinrHeader::new(&grid, arch, ValuePrecision::F32, 0, OpticalConfig::default());
    let bytes = codec::encode(&models, &header).map_err(|e| e.to_string())?;
    let (decoded, _) = codec::decode(&bytes).map_err(|e| e.to_string())?;
    for (a, b) in models.iter().zip(&decoded) {
        let same = a.params.iter().zip(&b.params).all(|(x, y)| x.to_bits() == y.to_bits());
        ensure(same && a.params.len() == b.params.len(), || "decoded parameters differ".into())?;
    }

    let mut undetected = 0;
    for i in 0..bytes.len() {
        let mut bad = bytes.clone();
        bad[i] ^= 0x5a;
        if codec::decode(&bad).is_ok() {
            undetected += 1;
        }
    }
    ensure(undetected == 0, || format!("{undetected} of {} single-byte corruptions decoded", bytes.len()))?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let hinr = dir.path().join("x.hinr");
    std::fs::write(&hinr, &bytes).map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for run in 0..2 {
        let holo = dir.path().join(format!("x{run}.holo"));
        let out = run_cli(&["decompress".as_ref(), hinr.as_os_str(), "-o".as_ref(), holo.as_os_str()])?;
        ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
        outputs.push(std::fs::read(&holo).map_err(|e| e.to_string())?);
    }
    ensure(outputs[0] == outputs[1], || "decompress output differs across runs".into())?;

    let corrupt = dir.path().join("bad.hinr");
    let mut bad = bytes.clone();
    bad[bytes.len() / 2] ^= 1;
    std::fs::write(&corrupt, &bad).map_err(|e| e.to_string())?;
    let out = run_cli(&["decompress".as_ref(), corrupt.as_os_str()])?;
    ensure(out.status.code() == Some(2), || format!("corrupt input exited with {:?}", out.status.code()))?;
    Ok(format!(
        "f32 bit-exact over {} patches, {}/{} corruptions caught, decompress deterministic",
        models.len(),
        bytes.len(),
        bytes.len()
    ))
}

// 9. Evaluation protocol

fn generated_hologram(image: &str, size: usize) -> Result<holocomp::PhaseHologram, String> {
    let path = repo_root().join("corpus/images").join(image);
    let (target, _) = load_target(&path, size, size).map_err(|e| e.to_string())?;
    synthesize_hologram(target.view(), &OpticalConfig::default(), 0.0).map_err(|e| e.to_string())
}

fn evaluation_protocol() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let holo_path = dir.path().join("astronaut.holo");
    generated_hologram("astronaut.png", 256)?.save(&holo_path).map_err(|e| e.to_string())?;
    let hinr = dir.path().join("astronaut.hinr");
    let out = run_cli(&[
        "compress".as_ref(),
        holo_path.as_os_str(),
        "-o".as_ref(),
        hinr.as_os_str(),
        "--arch".as_ref(),
        "mlp".as_ref(),
        "--epochs".as_ref(),
        "2".as_ref(),
    ])?;
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;

    let eval_dir = dir.path().join("eval");
    let start = Instant::now();
    let out = run_cli(&[
        "evaluate".as_ref(),
        holo_path.as_os_str(),
        hinr.as_os_str(),
        "--out".as_ref(),
        eval_dir.as_os_str(),
    ])?;
    let elapsed = start.elapsed();
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    ensure(elapsed < Duration::from_secs(30), || format!("evaluate took {elapsed:.1?}"))?;

    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(eval_dir.join("report.json")).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
    let planes = report["reconstruction"]["planes"].as_array().ok_or("no planes in report")?;
    let distances: Vec<f64> = planes.iter().filter_map(|p| p["distance"].as_f64()).collect();
    ensure(distances == [-2.5e-3, 0.0, 2.5e-3], || format!("plane distances {distances:?}"))?;
    let psnrs: Vec<f64> = planes.iter().filter_map(|p| p["psnr"].as_f64()).collect();
    let ssims: Vec<f64> = planes.iter().filter_map(|p| p["ssim"].as_f64()).collect();
    ensure(psnrs.len() == 3 && ssims.len() == 3, || "plane scores missing".into())?;
    let recon = &report["reconstruction"];
    let mean_psnr = recon["mean_psnr"].as_f64().unwrap_or(f64::NAN);
    let mean_ssim = recon["mean_ssim"].as_f64().unwrap_or(f64::NAN);
    ensure((mean_psnr - psnrs.iter().sum::<f64>() / 3.0).abs() < 1e-9, || "PSNR mean is not the plane average".into())?;
    ensure((mean_ssim - ssims.iter().sum::<f64>() / 3.0).abs() < 1e-9, || "SSIM mean is not the plane average".into())?;

    let mut files: Vec<String> = std::fs::read_dir(&eval_dir)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok()?.file_name().into_string().ok())
        .filter(|n| n.starts_with("recon_"))
        .collect();
    files.sort();
    let expected = [
        "recon_-2500um.f32",
        "recon_-2500um.png",
        "recon_0um.f32",
        "recon_0um.png",
        "recon_2500um.f32",
        "recon_2500um.png",
    ];
    ensure(files == expected, || format!("plane files {files:?}"))?;
    let raw = std::fs::metadata(eval_dir.join("recon_0um.f32")).map_err(|e| e.to_string())?.len();
    ensure(raw == 3 * 256 * 256 * 4, || format!("raw plane is {raw} bytes"))?;
    Ok(format!("3 planes at -2.5/0/+2.5 mm plus mean, evaluate {elapsed:.2?} at 256×256"))
}

// 10. Metric oracles

/// SSIM by explicit per-window double sums over the 2-D Gaussian weights.
fn ssim_oracle(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    let r = SSIM_WINDOW / 2;
    let g: Vec<f64> = (0..SSIM_WINDOW)
        .map(|i| {
            let d = i as f64 - r as f64;
            (-d * d / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp()
        })
        .collect();
    let total: f64 = g.iter().flat_map(|u| g.iter().map(move |v| u * v)).sum();
    let weight = |i: usize, j: usize| g[i] * g[j] / total;
    let (c1, c2) = (SSIM_K1 * SSIM_K1, SSIM_K2 * SSIM_K2);
    let (h, w) = a.dim();
    let mut sum = 0.0;
    let mut count = 0;
    for y in 0..=h - SSIM_WINDOW {
        for x in 0..=w - SSIM_WINDOW {
            let wa = a.slice(s![y..y + SSIM_WINDOW, x..x + SSIM_WINDOW]);
            let wb = b.slice(s![y..y + SSIM_WINDOW, x..x + SSIM_WINDOW]);
            let (mut ma, mut mb) = (0.0, 0.0);
            for i in 0..SSIM_WINDOW {
                for j in 0..SSIM_WINDOW {
                    ma += weight(i, j) * wa[[i, j]];
                    mb += weight(i, j) * wb[[i, j]];
                }
            }
            let (mut va, mut vb, mut cov) = (0.0, 0.0, 0.0);
            for i in 0..SSIM_WINDOW {
                for j in 0..SSIM_WINDOW {
                    let (da, db) = (wa[[i, j]] - ma, wb[[i, j]] - mb);
                    va += weight(i, j) * da * da;
                    vb += weight(i, j) * db * db;
                    cov += weight(i, j) * da * db;
                }
            }
            sum += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
            count += 1;
        }
    }
    sum / count as f64
}

fn metric_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let img = Array2::from_shape_fn((16, 16), |_| rng.random_range(0.0..1.0));
    let same = ssim_plane(img.view(), img.view()).map_err(|e| e.to_string())?;
    ensure(same == 1.0, || format!("SSIM(x, x) = {same:.17}"))?;

    let base = Array2::from_elem((16, 16), 0.4);
    let offset = psnr(base.view(), base.mapv(|v| v + 0.1).view()).map_err(|e| e.to_string())?;
    let checker = Array2::from_shape_fn((16, 16), |(y, x)| ((y + x) % 2) as f64);
    let gray = Array2::from_elem((16, 16), 0.5);
    let check = psnr(checker.view(), gray.view()).map_err(|e| e.to_string())?;
    ensure((offset - 20.00).abs() < 0.01, || format!("offset PSNR {offset:.4} dB"))?;
    ensure((check - 6.02).abs() < 0.01, || format!("checkerboard PSNR {check:.4} dB"))?;

    let mut worst: f64 = 0.0;
    for _ in 0..6 {
        let a = Array2::from_shape_fn((16, 16), |_| rng.random_range(0.0..1.0));
        let b = a.mapv(|v: f64| (v + rng.random_range(-0.3..0.3)).clamp(0.0, 1.0));
        let got = ssim_plane(a.view(), b.view()).map_err(|e| e.to_string())?;
        worst = worst.max((got - ssim_oracle(&a, &b)).abs());
    }
    ensure(worst < 1e-6, || format!("SSIM differs from direct summation by {worst:.1e}"))?;
    Ok(format!("SSIM(x,x)=1 exact, PSNR {offset:.2}/{check:.2} dB, SSIM oracle diff {worst:.1e}"))
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "compression accounting", budget: Duration::from_secs(1), soft: false, run: compression_accounting },
        Criterion { id: 2, name: "gradient correctness", budget: Duration::from_secs(30), soft: false, run: gradient_correctness },
        Criterion { id: 3, name: "optics invariants", budget: Duration::from_secs(10), soft: false, run: optics_invariants },
        Criterion { id: 4, name: "double-phase round-trip", budget: Duration::from_secs(5), soft: false, run: double_phase_roundtrip },
        Criterion { id: 5, name: "schedule conformance", budget: Duration::from_secs(5), soft: false, run: schedule_conformance },
        Criterion { id: 6, name: "desk-scale quality", budget: Duration::MAX, soft: false, run: desk_scale_quality },
        Criterion { id: 7, name: "architecture ordering (soft)", budget: Duration::MAX, soft: true, run: ordering_trend },
        Criterion { id: 8, name: "codec integrity", budget: Duration::from_secs(5), soft: false, run: codec_integrity },
        Criterion { id: 9, name: "evaluation protocol", budget: Duration::MAX, soft: false, run: evaluation_protocol },
        Criterion { id: 10, name: "metric oracles", budget: Duration::from_secs(5), soft: false, run: metric_oracles },
    ];
    let mut hard_failures = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let mut outcome = (c.run)();
        let elapsed = start.elapsed();
        if outcome.is_ok() && elapsed > c.budget {
            outcome = Err(format!("took {elapsed:.1?}, budget {:?}", c.budget));
        }
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) if c.soft => ("ALERT", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        println!("{status} criterion {:>2} {} [{elapsed:.2?}]: {detail}", c.id, c.name);
        if outcome.is_err() && !c.soft {
            hard_failures.push(c.id);
        }
    }
    if hard_failures.is_empty() {
        println!("acceptance: all hard criteria passed");
    } else {
        println!("acceptance: failed criteria {hard_failures:?}");
        std::process::exit(1);
    }
}
