use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use deltaion::adiabatic::rate_cycle_averaged;
use deltaion::analysis::output::{write_csv, write_json, write_metadata, ScanMetadata};
use deltaion::analysis::{
    barrier_path, compare_scans, scan_rate, traversal_time_through_barrier, ComparePoint,
    MissingSample, OracleEngine, RateEngine, RateScan, ScanMode, SemiclassicalEngine,
};
use deltaion::oracle::OracleConfig;
use deltaion::semiclassical::{SemiclassicalOptions, SqrtBranch};
use deltaion::{Drive, ModelParams};

use crate::config::{BranchHook, Engine, Format, RunConfig};
use crate::Failure;

/// Largest γ for which the semiclassical formula is expected to hold.
const GAMMA_VALIDATED: f64 = 2.5;

pub fn branch(cfg: &RunConfig) -> SqrtBranch {
    match cfg.debug_branch {
        Some(BranchHook::Principal) => SqrtBranch::Principal,
        None => SqrtBranch::Negative,
    }
}

fn drive(cfg: &RunConfig) -> Drive {
    if cfg.field_off {
        Drive::Off
    } else {
        Drive::Cosine
    }
}

pub fn semiclassical_engine(cfg: &RunConfig) -> SemiclassicalEngine {
    SemiclassicalEngine {
        options: SemiclassicalOptions {
            include_odd: cfg.include_odd,
            drive: drive(cfg),
            branch: branch(cfg),
        },
    }
}

pub fn oracle_config(cfg: &RunConfig) -> OracleConfig {
    OracleConfig {
        dt: cfg.oracle_dt,
        dt_divisor: cfg.oracle_dt_divisor,
        drive: drive(cfg),
        burn_in_cycles: cfg.burn_in,
        tolerance: cfg.oracle_tolerance,
        check_convergence: cfg.check_convergence,
    }
}

fn oracle_engine(cfg: &RunConfig) -> OracleEngine {
    OracleEngine {
        config: oracle_config(cfg),
        checkpoint_dir: cfg.checkpoint_dir.clone(),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn describe(mode: &ScanMode) -> String {
    match mode {
        ScanMode::FixedGamma { gamma } => format!("fixed gamma = {gamma}"),
        ScanMode::FixedNio { n_io } => format!("fixed n_io = {n_io}"),
    }
}

fn missing_failure(what: &str, missing: &[MissingSample]) -> Result<(), Failure> {
    if missing.is_empty() {
        return Ok(());
    }
    let first = &missing[0];
    Err(Failure::Numeric(format!(
        "{what}: {} sample(s) failed and were interpolated; first at z = {}: {}",
        missing.len(),
        first.z,
        first.reason
    )))
}

fn run_scan(
    engine: &dyn RateEngine,
    cfg: &RunConfig,
    mode: ScanMode,
    z: &[f64],
) -> Result<RateScan, Failure> {
    let mut s = scan_rate(engine, mode, z, cfg.cycles)?;
    s.analyse(cfg.sg_window, cfg.sg_order, cfg.prominence)?;
    Ok(s)
}

pub fn scan(cfg: &RunConfig) -> Result<(), Failure> {
    let mode = cfg.mode()?;
    let z = cfg.z_values()?;
    let engine: Box<dyn RateEngine> = match cfg.engine {
        Engine::Semiclassical => Box::new(semiclassical_engine(cfg)),
        Engine::Oracle => Box::new(oracle_engine(cfg)),
    };
    let s = run_scan(engine.as_ref(), cfg, mode, &z)?;
    let meta = ScanMetadata::new(&s, engine.settings(), Some(s.peak_options(cfg.prominence)));

    let path = cfg.output_path(&format!("scan_{}", engine.name()));
    let mut written = vec![path.clone()];
    match cfg.format {
        Format::Csv => {
            let mut w = create(&path)?;
            write_csv(&s, &mut w)?;
            w.flush()?;
            let meta_path = path.with_extension("meta.json");
            let mut m = create(&meta_path)?;
            write_metadata(&meta, &mut m)?;
            m.flush()?;
            written.push(meta_path);
        }
        Format::Json => {
            let mut w = create(&path)?;
            write_json(&s, &meta, &mut w)?;
            w.flush()?;
        }
    }

    println!(
        "engine: {}, {}, cycles: {}",
        engine.name(),
        describe(&mode),
        cfg.cycles
    );
    println!("samples: {} ({} missing)", s.len(), s.missing.len());
    println!("threshold spacing: {:.6}", mode.threshold_spacing());
    match &meta.detected_period {
        Some(p) => println!(
            "modulation period: {:.6} ± {:.6} ({} peaks)",
            p.mean,
            p.std,
            s.peaks.len()
        ),
        None => println!(
            "modulation period: not determined ({} peaks, need 4)",
            s.peaks.len()
        ),
    }
    let zm = 0.5 * (z[0] + z[z.len() - 1]);
    let pm = ModelParams::from_dimensionless(mode.gamma_at(zm), zm)?;
    println!(
        "background 2π·D̄ at z = {zm}: {:.6e}",
        2.0 * std::f64::consts::PI * rate_cycle_averaged(&pm)
    );
    for p in written {
        println!("wrote {}", p.display());
    }
    missing_failure("scan", &s.missing)
}

#[derive(Serialize)]
struct CompareReport<'a> {
    schema_version: &'static str,
    mode: ScanMode,
    n_cycles: u32,
    window: f64,
    semiclassical_settings: serde_json::Value,
    oracle_settings: serde_json::Value,
    semiclassical_peaks: Vec<f64>,
    oracle_peaks: Vec<f64>,
    points: &'a [ComparePoint],
    oracle_missing: &'a [MissingSample],
}

pub fn compare(cfg: &RunConfig) -> Result<(), Failure> {
    let mode = cfg.mode()?;
    let z = cfg.z_values()?;
    let g_max = z.iter().map(|&v| mode.gamma_at(v)).fold(0.0, f64::max);
    if g_max > GAMMA_VALIDATED {
        eprintln!("warning: γ = {g_max} exceeds the validated range γ ≤ {GAMMA_VALIDATED}; the semiclassical rate may be unreliable");
    }
    let sce = semiclassical_engine(cfg);
    let ore = oracle_engine(cfg);
    let sc = run_scan(&sce, cfg, mode, &z)?;
    let or = run_scan(&ore, cfg, mode, &z)?;
    let report_at = cfg.report_points()?.unwrap_or_else(|| z.clone());
    let cmp = compare_scans(&sc, &or, &report_at)?;

    let path = cfg.output_path("compare");
    let (csv_path, json_path) = match cfg.format {
        Format::Csv => (Some(path.clone()), path.with_extension("report.json")),
        Format::Json => (None, path.clone()),
    };
    if let Some(p) = &csv_path {
        let mut w = create(p)?;
        writeln!(
            w,
            "z,gamma_param,Gamma_semiclassical,Gamma_oracle,Gamma_semiclassical_avg,Gamma_oracle_avg,is_peak_semiclassical,is_peak_oracle,oracle_missing"
        )?;
        for (i, zi) in z.iter().enumerate() {
            let miss = or.missing.iter().any(|m| m.index == i);
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{}",
                zi,
                sc.gamma_param[i],
                sc.gamma_raw[i],
                or.gamma_raw[i],
                cmp.semiclassical_smooth[i],
                cmp.oracle_smooth[i],
                u8::from(sc.is_peak(i)),
                u8::from(or.is_peak(i)),
                u8::from(miss)
            )?;
        }
        w.flush()?;
    }
    let report = CompareReport {
        schema_version: "deltaion.compare/1",
        mode,
        n_cycles: cfg.cycles,
        window: cmp.window,
        semiclassical_settings: sce.settings(),
        oracle_settings: ore.settings(),
        semiclassical_peaks: sc.peak_positions(),
        oracle_peaks: or.peak_positions(),
        points: &cmp.points,
        oracle_missing: &or.missing,
    };
    let mut w = create(&json_path)?;
    serde_json::to_writer_pretty(&mut w, &report).map_err(|e| Failure::Usage(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;

    println!(
        "{}, cycles: {}, averaging window {:.6}",
        describe(&mode),
        cfg.cycles,
        cmp.window
    );
    let max_abs = |v: &[f64]| v.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    println!(
        "max |Γ| semiclassical {:.3e}, oracle {:.3e}",
        max_abs(&sc.gamma_raw),
        max_abs(&or.gamma_raw)
    );
    for p in &cmp.points {
        let ratio = p
            .ratio
            .map_or("undefined".to_string(), |r| format!("{r:.4}"));
        let off = p
            .peak_offset
            .map_or("n/a".to_string(), |o| format!("{o:+.4}"));
        println!(
            "z = {}: smoothed ratio oracle/semiclassical {ratio}, peak offset {off}",
            p.z
        );
    }
    if let Some(p) = &csv_path {
        println!("wrote {}", p.display());
    }
    println!("wrote {}", json_path.display());
    missing_failure("oracle", &or.missing)
}

pub fn thresholds(cfg: &RunConfig) -> Result<(), Failure> {
    let mode = cfg.mode()?;
    let z = cfg.z_values()?;
    let list = mode.thresholds(z[0], z[z.len() - 1]);
    let mut text = String::from("k,z_k\n");
    for t in &list {
        text.push_str(&format!("{},{}\n", t.k, t.z));
    }
    print!("{text}");
    if let Some(p) = &cfg.out {
        let mut w = create(p)?;
        w.write_all(text.as_bytes())?;
        w.flush()?;
    }
    Ok(())
}

#[derive(Serialize)]
struct DemoReport {
    traversal_time: [f64; 2],
    deviation_from_i_pi: f64,
    contour: Vec<ContourPoint>,
}

#[derive(Serialize)]
struct ContourPoint {
    t: [f64; 2],
    x: [f64; 2],
}

pub fn demo_appendix_c(cfg: &RunConfig) -> Result<(), Failure> {
    let t = traversal_time_through_barrier(branch(cfg));
    let dev = (t - Complex64::new(0.0, std::f64::consts::PI)).norm();
    println!(
        "traversal time ∫_{{-1}}^{{1}} dx / sqrt(2E + x²) at E = -1/2: {} {:+}i",
        t.re, t.im
    );
    println!("deviation from iπ: {dev:.3e}");
    println!("x(t) = -cosh t along -3 -> 0 -> iπ -> iπ + 3:");
    let ip = std::f64::consts::PI;
    let marks = [
        Complex64::new(-3.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, ip / 2.0),
        Complex64::new(0.0, ip),
        Complex64::new(3.0, ip),
    ];
    let mut contour = Vec::new();
    for m in marks {
        let x = barrier_path(m);
        println!(
            "  t = {:+.6} {:+.6}i  x = {:+.6} {:+.6}i",
            m.re, m.im, x.re, x.im
        );
        contour.push(ContourPoint {
            t: [m.re, m.im],
            x: [x.re, x.im],
        });
    }
    if let Some(p) = &cfg.out {
        let mut w = create(p)?;
        let r = DemoReport {
            traversal_time: [t.re, t.im],
            deviation_from_i_pi: dev,
            contour,
        };
        serde_json::to_writer_pretty(&mut w, &r).map_err(|e| Failure::Usage(e.to_string()))?;
        writeln!(w)?;
        w.flush()?;
    }
    if dev > 1e-10 {
        return Err(Failure::Numeric(format!(
            "traversal time deviates from iπ by {dev:.3e}"
        )));
    }
    Ok(())
}
