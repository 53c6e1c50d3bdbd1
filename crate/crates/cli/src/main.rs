//! Command-line driver for the plateaued-vortex eigenmode solver.

mod config;
mod output;
mod svg;

use anyhow::{anyhow, Result};
use clap::{Parser, Subcommand};
use config::RunConfig;
use output::{eps_tag, fmt, Lambda2Summary, OutputWriter, SweepRow, SweepSummary};
use std::path::PathBuf;
use std::process::ExitCode;
use vortex_modes::checks::{run_all, CheckOptions};
use vortex_modes::eigensolver::{lambda1_leading, LAMBDA2_BOUND};
use vortex_modes::mode_assembly::{
    c_gap_figure_data, difference_scaling_study, mode_figure_data, profile_figure_data,
    solve_and_verify_cfg, SolveOutput,
};
use vortex_modes::profiles::VortexProfile;

const EXIT_CHECK_FAILURE: u8 = 1;
const EXIT_SOLVER_FAILURE: u8 = 2;
const EXIT_CONFIG_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "vortex-modes", version, about = "Rotating eigenmodes of a plateaued radial vortex")]
struct Cli {
    /// Configuration file (key=value with sections, or JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides config and VORTEX_MODES_OUT).
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the fast invariant suite and print a pass/fail table.
    Check {
        /// Machine-readable report.
        #[arg(long)]
        json: bool,
        #[arg(long, hide = true)]
        inject_kernel_fault: bool,
    },
    /// Solve the eigenvalue problem for each plateau width and write
    /// eigen/mode/residual files.
    Solve {
        /// Comma-separated plateau widths.
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        /// Azimuthal wavenumber.
        #[arg(long)]
        n: Option<u32>,
    },
    /// Solve a decreasing width sweep and write expansion and scaling
    /// summaries on top of the per-width outputs.
    Sweep {
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        #[arg(long)]
        n: Option<u32>,
        /// Worker threads for independent widths.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Emit SVG figures: profiles, the angular-velocity gap, and the mode.
    Figures {
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Dump profile and angular-velocity tables.
    Profile {
        /// Write profile_{eps}.csv files.
        #[arg(long)]
        dump: bool,
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
    },
}

fn resolve_config(cli: &Cli, eps: Option<&[f64]>, n: Option<u32>) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Ok(dir) = std::env::var("VORTEX_MODES_OUT") {
        if !dir.is_empty() {
            cfg.output_dir = PathBuf::from(dir);
        }
    }
    if let Some(out) = &cli.out {
        cfg.output_dir = out.clone();
    }
    if let Some(eps) = eps {
        cfg.epsilon = eps.to_vec();
    }
    if let Some(n) = n {
        cfg.n = n;
    }
    cfg.validate().map_err(|e| anyhow!("{e}"))?;
    Ok(cfg)
}

fn writer_for(cfg: &RunConfig) -> Result<OutputWriter> {
    OutputWriter::new(&cfg.output_dir, &cfg.hash())
}

fn cmd_check(json: bool, fault: bool) -> Result<u8> {
    let report = run_all(CheckOptions { inject_kernel_fault: fault })
        .map_err(|e| anyhow!("check suite failed to run: {e}"))?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("{:<46} {:>12} {:>12}  status", "check", "required", "achieved");
        for r in &report.results {
            println!(
                "{:<46} {:>12.3e} {:>12.3e}  {}",
                r.name,
                r.required,
                r.achieved,
                if r.passed { "ok" } else { "FAIL" }
            );
        }
        println!(
            "{} checks in {:.2} s: {}",
            report.results.len(),
            report.elapsed_seconds,
            if report.all_passed() { "all passed" } else { "FAILURES PRESENT" }
        );
    }
    Ok(if report.all_passed() { 0 } else { EXIT_CHECK_FAILURE })
}

fn solve_one(cfg: &RunConfig, eps: f64, l1_ref: f64) -> vortex_modes::Result<SolveOutput> {
    solve_and_verify_cfg(eps, cfg.n, &cfg.solver_settings(), Some(l1_ref))
}

fn write_solution(writer: &OutputWriter, out: &SolveOutput) -> Result<()> {
    writer.write_eigen(&out.eigen)?;
    writer.write_mode_csv(&out.eigen, &out.mode)?;
    writer.write_residuals(out.eigen.epsilon, &out.report)?;
    Ok(())
}

fn announce_solution(out: &SolveOutput) {
    let e = &out.eigen;
    println!(
        "eps={:<6} n={} lambda={} l1_fit={} l2_fit={} |det|={:.2e} resid_max={:.2e}",
        eps_tag(e.epsilon),
        e.n,
        fmt(e.lambda.total),
        fmt(e.lambda.lambda1_fit),
        fmt(e.lambda.lambda2_fit),
        e.det_at_root.abs(),
        out.report
            .left_max
            .max(out.report.right_max)
            .max(out.report.physical_max),
    );
}

fn monotone_limit_message(n: u32) {
    println!(
        "eps=0: the spectral gap closes and no bracket exists; the strictly \
         monotone profile admits no rotating mode at n={n}. Nothing solved."
    );
}

fn cmd_solve(cfg: &RunConfig) -> Result<u8> {
    let writer = writer_for(cfg)?;
    if cfg.n < 4 {
        eprintln!(
            "warning: one-sided positivity is only established for n >= 4; n={} is best-effort",
            cfg.n
        );
    }
    let l1_ref = lambda1_leading(cfg.n).map_err(|e| anyhow!("leading-order solve failed: {e}"))?;
    let mut failures = 0usize;
    for &eps in &cfg.epsilon {
        if eps == 0.0 {
            monotone_limit_message(cfg.n);
            continue;
        }
        match solve_one(cfg, eps, l1_ref.value) {
            Ok(out) => {
                write_solution(&writer, &out)?;
                announce_solution(&out);
            }
            Err(err) => {
                eprintln!("eps={eps}: solver failed: {err}");
                failures += 1;
            }
        }
    }
    Ok(if failures > 0 { EXIT_SOLVER_FAILURE } else { 0 })
}

fn cmd_sweep(cfg: &RunConfig, jobs: usize) -> Result<u8> {
    let writer = writer_for(cfg)?;
    let l1_ref = lambda1_leading(cfg.n).map_err(|e| anyhow!("leading-order solve failed: {e}"))?;
    let widths: Vec<f64> = cfg.epsilon.iter().copied().filter(|&e| e > 0.0).collect();
    if widths.len() < cfg.epsilon.len() {
        monotone_limit_message(cfg.n);
    }
    if widths.is_empty() {
        return Ok(0);
    }

    let jobs = jobs.max(1).min(widths.len());
    let mut slots: Vec<Option<vortex_modes::Result<SolveOutput>>> = Vec::new();
    slots.resize_with(widths.len(), || None);
    {
        let slots_ref = std::sync::Mutex::new(&mut slots);
        let next = std::sync::atomic::AtomicUsize::new(0);
        std::thread::scope(|scope| {
            for _ in 0..jobs {
                scope.spawn(|| loop {
                    let idx = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                    if idx >= widths.len() {
                        break;
                    }
                    let res = solve_one(cfg, widths[idx], l1_ref.value);
                    slots_ref.lock().unwrap()[idx] = Some(res);
                });
            }
        });
    }

    let mut failures = 0usize;
    let mut rows = Vec::new();
    let mut l2_values = Vec::new();
    for (i, slot) in slots.into_iter().enumerate() {
        match slot.expect("worker filled slot") {
            Ok(out) => {
                write_solution(&writer, &out)?;
                announce_solution(&out);
                let e = &out.eigen;
                rows.push(SweepRow {
                    epsilon: e.epsilon,
                    lambda: e.lambda.total,
                    lambda1_fit: e.lambda.lambda1_fit,
                    lambda2_fit: e.lambda.lambda2_fit,
                    det_at_root: e.det_at_root,
                    residual_max: out
                        .report
                        .left_max
                        .max(out.report.right_max)
                        .max(out.report.physical_max),
                });
                l2_values.push(e.lambda.lambda2_fit);
            }
            Err(err) => {
                eprintln!("eps={}: solver failed: {err}", widths[i]);
                failures += 1;
            }
        }
    }
    if rows.is_empty() {
        return Ok(EXIT_SOLVER_FAILURE);
    }

    let max_abs = l2_values.iter().fold(0.0_f64, |m: f64, v| m.max(v.abs()));
    let min_abs = l2_values.iter().fold(f64::INFINITY, |m: f64, v| m.min(v.abs()));
    let bounded = max_abs <= LAMBDA2_BOUND;
    println!(
        "second-order coefficient across the sweep: |l2| in [{}, {}], spread {:.3}, bound {} -> {}",
        fmt(min_abs),
        fmt(max_abs),
        max_abs / min_abs,
        LAMBDA2_BOUND,
        if bounded { "bounded" } else { "NOT BOUNDED" }
    );

    let mut study_widths = widths.clone();
    study_widths.sort_by(|a, b| b.partial_cmp(a).unwrap());
    study_widths.dedup();
    let scaling = difference_scaling_study(cfg.n, &study_widths, cfg.tolerances.root)
        .map_err(|e| anyhow!("scaling study failed: {e}"))?;
    let summary = SweepSummary {
        n: cfg.n,
        rows,
        lambda2: Lambda2Summary {
            lambda1_ref: l1_ref.value,
            max_abs,
            min_abs,
            spread: max_abs / min_abs,
            bound: LAMBDA2_BOUND,
            bounded,
        },
        scaling,
    };
    writer.write_sweep_summary(&summary)?;
    Ok(if failures > 0 { EXIT_SOLVER_FAILURE } else { 0 })
}

fn cmd_figures(cfg: &RunConfig, eps: f64) -> Result<u8> {
    let writer = writer_for(cfg)?;
    if eps <= 0.0 {
        return Err(anyhow!("figures require a positive plateau width"));
    }

    // Profile comparison.
    let rows = profile_figure_data(eps, 600).map_err(|e| anyhow!("{e}"))?;
    let mut plot = svg::Plot::new("base and plateaued vorticity profiles", "r", "vorticity");
    plot.series.push(svg::Series {
        label: "base profile",
        color: "#1f77b4",
        points: rows.iter().map(|(r, v0, _)| (*r, *v0)).collect(),
    });
    plot.series.push(svg::Series {
        label: "plateaued profile",
        color: "#d62728",
        points: rows.iter().map(|(r, _, ve)| (*r, *ve)).collect(),
    });
    writer.write_svg("profiles.svg", &plot.render())?;

    // Angular-velocity coefficient with the gap band.
    let gap = c_gap_figure_data(eps, 700).map_err(|e| anyhow!("{e}"))?;
    let mut full = svg::Plot::new("angular-velocity coefficient", "r", "c(r)");
    full.series.push(svg::Series {
        label: "inner branch",
        color: "#1f77b4",
        points: gap.rows.iter().filter(|(_, _, l)| *l == "left").map(|(r, c, _)| (*r, *c)).collect(),
    });
    full.series.push(svg::Series {
        label: "outer branch",
        color: "#d62728",
        points: gap.rows.iter().filter(|(_, _, l)| *l == "right").map(|(r, c, _)| (*r, *c)).collect(),
    });
    writer.write_svg("c_gap.svg", &full.render())?;

    let mut zoom = svg::Plot::new("angular-velocity gap near the plateau", "r", "c(r)");
    let window = 6.0 * eps;
    zoom.x_range = Some((1.0 - window, 1.0 + window));
    zoom.y_range = Some((-gap.band.1 - 0.05 * eps, -gap.band.0 + 0.05 * eps));
    zoom.bands.push(svg::Band { y0: -gap.band.1, y1: -gap.band.0, color: "#2ca02c" });
    for (label, color, branch) in [
        ("inner branch", "#1f77b4", "left"),
        ("plateau", "#2ca02c", "plateau"),
        ("outer branch", "#d62728", "right"),
    ] {
        zoom.series.push(svg::Series {
            label,
            color,
            points: gap.rows.iter().filter(|(_, _, l)| *l == branch).map(|(r, c, _)| (*r, *c)).collect(),
        });
    }
    zoom.markers.push((gap.r_star, -0.5 * (gap.band.0 + gap.band.1), "#2ca02c"));
    writer.write_svg("c_gap_zoom.svg", &zoom.render())?;

    // Solved mode: radial section and revolving heatmap.
    let l1_ref = lambda1_leading(cfg.n).map_err(|e| anyhow!("{e}"))?;
    let out = solve_one(cfg, eps, l1_ref.value).map_err(|e| anyhow!("mode solve failed: {e}"))?;
    let data = mode_figure_data(&out.mode, 120, 72);
    let mut radial = svg::Plot::new("radial mode profile", "r", "W_n(r)");
    radial.series.push(svg::Series {
        label: "W_n",
        color: "#1f77b4",
        points: data.radial.clone(),
    });
    writer.write_svg("mode_radial.svg", &radial.render())?;
    writer.write_svg(
        "mode_heatmap.svg",
        &svg::polar_heatmap("rotating eigenmode at t = 0", &data.heatmap),
    )?;
    writer.write_heatmap_csv(eps, &data.heatmap)?;
    println!(
        "figures written to {} (profiles, c_gap, c_gap_zoom, mode_radial, mode_heatmap)",
        writer.dir.display()
    );
    Ok(0)
}

fn cmd_profile(cfg: &RunConfig, dump: bool) -> Result<u8> {
    let writer = writer_for(cfg)?;
    for &eps in &cfg.epsilon {
        let profile = VortexProfile::new(eps).map_err(|e| anyhow!("{e}"))?;
        if dump {
            let mut rows = Vec::with_capacity(601);
            for i in 0..=600 {
                let r = 3.0 * i as f64 / 600.0;
                rows.push((
                    r,
                    vortex_modes::profiles::varpi0(r),
                    profile.perturbed(r),
                    profile.c_physical(r).map_err(|e| anyhow!("{e}"))?,
                ));
            }
            let path = writer.write_profile_csv(eps, &rows)?;
            println!("wrote {}", path.display());
        } else {
            println!(
                "eps={}: plateau [{}, {}], shift {}",
                eps_tag(eps),
                fmt(profile.inner_edge()),
                fmt(profile.outer_edge()),
                fmt(profile.shift()),
            );
        }
    }
    Ok(0)
}

fn run() -> Result<u8> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Check { json, inject_kernel_fault } => cmd_check(*json, *inject_kernel_fault),
        Command::Solve { eps, n } => {
            let cfg = resolve_config(&cli, eps.as_deref(), *n)?;
            cmd_solve(&cfg)
        }
        Command::Sweep { eps, n, jobs } => {
            let cfg = resolve_config(&cli, eps.as_deref(), *n)?;
            cmd_sweep(&cfg, *jobs)
        }
        Command::Figures { eps, n } => {
            let eps_list = eps.map(|e| vec![e]);
            let cfg = resolve_config(&cli, eps_list.as_deref(), *n)?;
            let eps = cfg.epsilon[0];
            cmd_figures(&cfg, eps)
        }
        Command::Profile { dump, eps } => {
            let cfg = resolve_config(&cli, eps.as_deref(), None)?;
            cmd_profile(&cfg, *dump)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_CONFIG_ERROR)
        }
    }
}
