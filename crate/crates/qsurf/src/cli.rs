//! Command-line front end: `catalog`, `build`, `verify`, `profile`.
//!
//! All surface-producing subcommands read one JSON config describing the
//! geometry (factor curvature and dimension, catalog base, profile,
//! offset range) plus optional grid and verification settings:
//!
//! ```json
//! {
//!   "epsilon": 1,
//!   "n": 2,
//!   "base": { "kind": "geodesic_sphere", "params": { "r": 1.0 } },
//!   "profile": { "kind": "linear", "A": 1.0 },
//!   "s_range": [-0.5, 0.5],
//!   "grid": { "u": 64, "s": 64 },
//!   "verify": { "samples": 100, "fd_step": 1e-4, "tol": 1e-5, "seed": 0 }
//! }
//! ```
//!
//! Exit codes: 0 success, 1 verification found a failing check, 2 bad
//! usage or configuration. Output files are written deterministically:
//! the same config and flags produce byte-identical CSV, OBJ, and report
//! files.

use std::ffi::OsString;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ambient::Signature;
use crate::basecat::{catalog_listing, make_base, CatalogEntry};
use crate::construct::ProductHypersurface;
use crate::error::{Error, Result};
use crate::parallel::ParallelFamily;
use crate::profile::{cmc_ode_residual, ParallelMeanCurvature, Profile};
use crate::verify::{run_report, VerifyOptions};

/// Serializable description of a surface build.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    /// Curvature sign of the quadric factor: 1, 0, or -1.
    pub epsilon: i32,
    /// Dimension of the quadric factor (the surface has dimension n).
    pub n: usize,
    /// Base hypersurface from the catalog.
    pub base: CatalogEntry,
    /// Height profile.
    pub profile: ProfileSpec,
    /// Offset range [lo, hi] to cover.
    pub s_range: [f64; 2],
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub verify: VerifySpec,
}

/// Profile selection in a config file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileSpec {
    /// a(s) = A s.
    Linear {
        #[serde(rename = "A")]
        a: f64,
    },
    /// Solve the constant-mean-curvature equation with target H from
    /// (a, a')(0) = (a0, a1).
    Cmc {
        #[serde(rename = "H")]
        h: f64,
        a0: f64,
        a1: f64,
        /// ODE step; defaults to min(1e-3, range length / 1000).
        #[serde(default)]
        step: Option<f64>,
    },
    /// Closed-form minimal profile from first-order data h0 at s = 0.
    Minimal { a0: f64, h0: f64, sign: i8 },
}

/// Sampling density for `build` and `profile` output.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// Points per base-chart coordinate.
    #[serde(default = "default_grid_count")]
    pub u: usize,
    /// Points along the offset range.
    #[serde(default = "default_grid_count")]
    pub s: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { u: 64, s: 64 }
    }
}

fn default_grid_count() -> usize {
    64
}

/// Verification settings in a config file; command-line flags override.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySpec {
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub seed: u64,
}

impl Default for VerifySpec {
    fn default() -> Self {
        VerifySpec {
            samples: default_samples(),
            fd_step: default_fd_step(),
            tol: default_tol(),
            seed: 0,
        }
    }
}

fn default_samples() -> usize {
    100
}

fn default_fd_step() -> f64 {
    1e-4
}

fn default_tol() -> f64 {
    1e-5
}

/// A surface built from a config, with the family's mean-curvature
/// function alongside.
#[derive(Debug)]
pub struct BuiltSurface {
    pub surface: ProductHypersurface,
    pub hs: ParallelMeanCurvature,
}

/// Construct the surface a config describes.
pub fn build_from_config(cfg: &Config) -> Result<BuiltSurface> {
    let sig = Signature::new(cfg.epsilon, cfg.n)
        .map_err(|e| Error::Config(format!("epsilon/n: {e}")))?;
    let [lo, hi] = cfg.s_range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Config(format!(
            "s_range: must be a finite range with lo < hi (got [{lo}, {hi}])"
        )));
    }
    let base = make_base(&cfg.base, sig)?;
    let fam = ParallelFamily::new(base);
    let hs = ParallelMeanCurvature::of_family(&fam)?;
    // Profiles integrate from s = 0; widen their interval to include it.
    let prof_interval = (lo.min(0.0), hi.max(0.0));
    let profile = match &cfg.profile {
        ProfileSpec::Linear { a } => Profile::linear(*a),
        ProfileSpec::Cmc { h, a0, a1, step } => {
            let len = prof_interval.1 - prof_interval.0;
            let st = step.unwrap_or_else(|| (len / 1000.0).min(1e-3));
            Profile::solve_cmc(*h, &hs, *a0, *a1, prof_interval, st)
        }
        ProfileSpec::Minimal { a0, h0, sign } => {
            Profile::minimal(&hs, *a0, *h0, *sign, prof_interval)
        }
    }
    .map_err(|e| match e {
        Error::InvalidParameter(m) => Error::Config(format!("profile.{m}")),
        other => other,
    })?;
    let surface = ProductHypersurface::new(fam, profile, (lo, hi))?;
    Ok(BuiltSurface { surface, hs })
}

#[derive(Parser)]
#[command(
    name = "qsurf",
    version,
    about = "Build hypersurfaces of S^n x R, R^n x R and H^n x R from parallel \
             families and profile curves, and verify their curvature identities"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the catalog of base hypersurfaces
    Catalog {
        /// Emit the listing as JSON
        #[arg(long)]
        json: bool,
    },
    /// Sample a surface on a grid and write CSV (plus OBJ for surfaces in flat 3-space)
    Build {
        /// JSON config describing the surface
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
    /// Measure the surface and check every identity the construction promises
    Verify {
        /// JSON config describing the surface
        #[arg(long)]
        config: PathBuf,
        /// Where to write the JSON report
        #[arg(long)]
        report: Option<PathBuf>,
        /// Tolerance for finite-difference checks (overrides the config)
        #[arg(long)]
        tol: Option<f64>,
        /// Centered-difference step (overrides the config)
        #[arg(long)]
        fd_step: Option<f64>,
        /// Number of random sample points (overrides the config)
        #[arg(long)]
        samples: Option<usize>,
        /// Seed for the sample generator (overrides the config)
        #[arg(long)]
        seed: Option<u64>,
        /// Print the full report JSON to stdout
        #[arg(long)]
        json: bool,
    },
    /// Tabulate the height profile and its equation residual as CSV
    Profile {
        /// JSON config describing the surface
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
}

/// Entry point used by the binary: parse arguments, run, map errors to
/// exit codes (0 ok, 1 failed verification, 2 usage/config error).
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match cli.cmd {
        Cmd::Catalog { json } => cmd_catalog(json),
        Cmd::Build { config, out } => cmd_build(&config, &out),
        Cmd::Verify {
            config,
            report,
            tol,
            fd_step,
            samples,
            seed,
            json,
        } => cmd_verify(&config, report.as_deref(), tol, fd_step, samples, seed, json),
        Cmd::Profile { config, out } => cmd_profile(&config, &out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn cmd_catalog(json: bool) -> Result<i32> {
    let list = catalog_listing();
    if json {
        println!("{}", serde_json::to_string_pretty(&list)?);
    } else {
        println!("{:<28} {:<12} {:<10} constraint", "kind", "epsilon", "params");
        for k in &list {
            println!("{:<28} {:<12} {:<10} {}", k.name, k.epsilon, k.params, k.constraint);
        }
    }
    Ok(0)
}

fn load_config(path: &Path) -> Result<(Config, String)> {
    let bytes = fs::read(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let cfg: Config = serde_json::from_slice(&bytes)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let digest = Sha256::digest(&bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect::<String>();
    Ok((cfg, digest))
}

fn warn_if_clipped(surf: &ProductHypersurface) {
    if surf.was_clipped() {
        let (lo, hi) = surf.s_range();
        let (rlo, rhi) = surf.requested_range();
        eprintln!(
            "warning: offset range clipped from [{rlo}, {rhi}] to [{lo:.6}, {hi:.6}]"
        );
        for note in surf.clip_notes() {
            eprintln!("warning:   {note}");
        }
    }
}

fn validate_grid(grid: &GridSpec, chart_dim: usize) -> Result<()> {
    if grid.u == 0 || grid.s < 2 {
        return Err(Error::Config(
            "grid: u must be at least 1 and s at least 2".into(),
        ));
    }
    let total = (grid.u as u128).pow(chart_dim as u32) * grid.s as u128;
    if total > 4_000_000 {
        return Err(Error::Config(format!(
            "grid: {total} sample points is too many; reduce grid.u or grid.s"
        )));
    }
    Ok(())
}

/// Midpoint samples of each open chart interval, plus a closed sweep of
/// the offset range.
fn grid_axes(surf: &ProductHypersurface, grid: &GridSpec) -> (Vec<Vec<f64>>, Vec<f64>) {
    let axes = surf
        .family()
        .base()
        .chart_domain()
        .iter()
        .map(|&(lo, hi)| {
            (0..grid.u)
                .map(|j| lo + (hi - lo) * (j as f64 + 0.5) / grid.u as f64)
                .collect()
        })
        .collect();
    let (slo, shi) = surf.s_range();
    // Pin the final sample to the upper endpoint: the interpolation formula
    // can land one ulp above `shi`, which the domain guard would reject.
    let s_axis = (0..grid.s)
        .map(|j| {
            if j + 1 == grid.s {
                shi
            } else {
                slo + (shi - slo) * j as f64 / (grid.s - 1) as f64
            }
        })
        .collect();
    (axes, s_axis)
}

/// Walk the cartesian product of the chart axes in row-major order.
fn for_each_grid_point<F: FnMut(&[f64]) -> Result<()>>(
    axes: &[Vec<f64>],
    mut visit: F,
) -> Result<()> {
    let k = axes.len();
    if k == 0 {
        return visit(&[]);
    }
    let mut idx = vec![0usize; k];
    let mut u = vec![0.0; k];
    loop {
        for (j, &i) in idx.iter().enumerate() {
            u[j] = axes[j][i];
        }
        visit(&u)?;
        let mut j = k;
        loop {
            if j == 0 {
                return Ok(());
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < axes[j].len() {
                break;
            }
            idx[j] = 0;
        }
    }
}

fn cmd_build(config: &Path, out: &Path) -> Result<i32> {
    let (cfg, _) = load_config(config)?;
    let built = build_from_config(&cfg)?;
    let surf = &built.surface;
    warn_if_clipped(surf);
    let chart_dim = surf.dim() - 1;
    validate_grid(&cfg.grid, chart_dim)?;
    let (axes, s_axis) = grid_axes(surf, &cfg.grid);

    let file = fs::File::create(out)?;
    let mut w = BufWriter::new(file);
    let sig = surf.signature();
    let mut header: Vec<String> = (0..chart_dim).map(|j| format!("u{j}")).collect();
    header.push("s".into());
    header.extend((0..sig.ambient_dim() - 1).map(|j| format!("x{j}")));
    header.push("t".into());
    writeln!(w, "{}", header.join(","))?;
    for_each_grid_point(&axes, |u| {
        for &s in &s_axis {
            let p = surf.point(u, s)?;
            let mut row: Vec<String> = u.iter().map(|v| format!("{v:.16e}")).collect();
            row.push(format!("{s:.16e}"));
            row.extend(p.coords().iter().map(|v| format!("{v:.16e}")));
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    })?;
    w.flush()?;

    if sig.epsilon() == 0 && sig.n() == 2 {
        let obj_path = out.with_extension("obj");
        write_obj(surf, &axes[0], &s_axis, &obj_path)?;
        println!("wrote {} and {}", out.display(), obj_path.display());
    } else {
        println!("wrote {}", out.display());
    }
    Ok(0)
}

/// Quad-mesh OBJ export for surfaces living in flat 3-space.
fn write_obj(
    surf: &ProductHypersurface,
    u_axis: &[f64],
    s_axis: &[f64],
    path: &Path,
) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "o surface")?;
    for &u in u_axis {
        for &s in s_axis {
            let p = surf.point(&[u], s)?;
            let c = p.coords();
            writeln!(w, "v {:.9} {:.9} {:.9}", c[0], c[1], c[2])?;
        }
    }
    // A circle chart is one full angular turn sampled at cell centers, so
    // the last column of quads wraps back to the first; a line chart stays
    // an open strip.
    let wraps = matches!(surf.family().base().entry(), CatalogEntry::RoundSphere { .. });
    let un = u_axis.len();
    let sn = s_axis.len();
    let vid = |iu: usize, is: usize| iu * sn + is + 1;
    let strips = if wraps { un } else { un - 1 };
    for iu in 0..strips {
        let iu1 = (iu + 1) % un;
        for is in 0..sn - 1 {
            writeln!(
                w,
                "f {} {} {} {}",
                vid(iu, is),
                vid(iu1, is),
                vid(iu1, is + 1),
                vid(iu, is + 1)
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

fn cmd_verify(
    config: &Path,
    report_path: Option<&Path>,
    tol: Option<f64>,
    fd_step: Option<f64>,
    samples: Option<usize>,
    seed: Option<u64>,
    json: bool,
) -> Result<i32> {
    let (cfg, digest) = load_config(config)?;
    let built = build_from_config(&cfg)?;
    warn_if_clipped(&built.surface);
    let opts = VerifyOptions {
        fd_step: fd_step.unwrap_or(cfg.verify.fd_step),
        tol: tol.unwrap_or(cfg.verify.tol),
        samples: samples.unwrap_or(cfg.verify.samples),
        seed: seed.unwrap_or(cfg.verify.seed),
        config_digest: Some(digest),
    };
    let report = run_report(&built.surface, &opts)?;
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    if let Some(p) = report_path {
        fs::write(p, &text)?;
    }
    if json {
        print!("{text}");
    } else {
        for c in &report.checks {
            println!(
                "[{}] {:<24} worst residual {:.3e}  (tol {:.1e})",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.residual,
                c.tol
            );
        }
        println!(
            "{} over {} samples (fd_step {:.1e}, seed {})",
            if report.all_pass() { "all checks passed" } else { "VERIFICATION FAILED" },
            report.sample_count,
            report.fd_step,
            report.seed
        );
    }
    Ok(if report.all_pass() { 0 } else { 1 })
}

fn cmd_profile(config: &Path, out: &Path) -> Result<i32> {
    let (cfg, _) = load_config(config)?;
    let built = build_from_config(&cfg)?;
    let surf = &built.surface;
    warn_if_clipped(surf);
    if cfg.grid.s < 2 {
        return Err(Error::Config("grid: s must be at least 2".into()));
    }
    let (slo, shi) = surf.s_range();
    let file = fs::File::create(out)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "s,a,a_prime,a_second,b,nu,Hs,ode_residual")?;
    for j in 0..cfg.grid.s {
        let s = slo + (shi - slo) * j as f64 / (cfg.grid.s - 1) as f64;
        let (a, ap, app) = surf.profile().eval(s);
        let b = (1.0 + ap * ap).sqrt();
        let nu = 1.0 / b;
        let hs_v = built.hs.eval(s);
        let h_for_residual = surf
            .profile()
            .cmc_target()
            .unwrap_or_else(|| surf.expected_shape_trace(hs_v, s));
        let res = cmc_ode_residual((a, ap, app), hs_v, h_for_residual);
        let row = [a, ap, app, b, nu, hs_v, res]
            .iter()
            .map(|v| format!("{v:.16e}"))
            .collect::<Vec<_>>()
            .join(",");
        writeln!(w, "{s:.16e},{row}")?;
    }

    // A zero-target ODE profile has a closed-form twin; cross-check them.
    if let ProfileSpec::Cmc { h, a0, a1, .. } = &cfg.profile {
        if *h == 0.0 {
            let h0 = a1 * a1 / (1.0 + a1 * a1);
            let sign = if *a1 > 0.0 { 1 } else { -1 };
            let interval = (slo.min(0.0), shi.max(0.0));
            match Profile::minimal(&built.hs, *a0, h0, sign, interval) {
                Ok(twin) => {
                    let mut worst: f64 = 0.0;
                    let (tlo, thi) = twin.domain();
                    for j in 0..cfg.grid.s {
                        let s = slo + (shi - slo) * j as f64 / (cfg.grid.s - 1) as f64;
                        if s >= tlo && s <= thi {
                            worst = worst.max((twin.eval(s).0 - surf.profile().eval(s).0).abs());
                        }
                    }
                    writeln!(w, "# minimal_cross_check_max_delta = {worst:.3e}")?;
                }
                Err(e) => {
                    writeln!(w, "# minimal_cross_check_unavailable: {e}")?;
                }
            }
        }
    }
    w.flush()?;
    println!("wrote {}", out.display());
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> serde_json::Result<Config> {
        serde_json::from_str(text)
    }

    #[test]
    fn config_round_trip_covers_all_profiles() {
        let texts = [
            r#"{"epsilon":1,"n":2,"base":{"kind":"geodesic_sphere","params":{"r":1.0}},
                "profile":{"kind":"linear","A":1.0},"s_range":[-0.5,0.5]}"#,
            r#"{"epsilon":0,"n":2,"base":{"kind":"round_sphere","params":{"r":1.0}},
                "profile":{"kind":"cmc","H":0.5,"a0":0.0,"a1":1.0},"s_range":[-0.2,0.2]}"#,
            r#"{"epsilon":-1,"n":3,"base":{"kind":"horosphere","params":{}},
                "profile":{"kind":"minimal","a0":0.0,"h0":0.25,"sign":1},"s_range":[-0.4,0.4]}"#,
        ];
        for t in texts {
            let cfg = parse(t).unwrap();
            let back = serde_json::to_string(&cfg).unwrap();
            let again = parse(&back).unwrap();
            assert_eq!(serde_json::to_string(&again).unwrap(), back);
        }
    }

    #[test]
    fn config_rejects_unknown_fields_and_defaults_the_rest() {
        let err = parse(
            r#"{"epsilon":1,"n":2,"base":{"kind":"equator","params":{}},
                "profile":{"kind":"linear","A":1.0},"s_range":[-0.5,0.5],"bogus":1}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
        let cfg = parse(
            r#"{"epsilon":1,"n":2,"base":{"kind":"equator","params":{}},
                "profile":{"kind":"linear","A":1.0},"s_range":[-0.5,0.5]}"#,
        )
        .unwrap();
        assert_eq!(cfg.grid.u, 64);
        assert_eq!(cfg.verify.samples, 100);
        assert_eq!(cfg.verify.fd_step, 1e-4);
        assert_eq!(cfg.verify.tol, 1e-5);
        assert_eq!(cfg.verify.seed, 0);
    }

    #[test]
    fn build_from_config_wires_everything_together() {
        let cfg = parse(
            r#"{"epsilon":1,"n":2,"base":{"kind":"geodesic_sphere","params":{"r":1.0}},
                "profile":{"kind":"linear","A":1.0},"s_range":[-0.3,0.3]}"#,
        )
        .unwrap();
        let built = build_from_config(&cfg).unwrap();
        assert_eq!(built.surface.dim(), 2);
        assert_eq!(built.surface.s_range(), (-0.3, 0.3));
    }

    #[test]
    fn build_from_config_reports_field_paths() {
        let cfg = parse(
            r#"{"epsilon":1,"n":2,"base":{"kind":"geodesic_sphere","params":{"r":-1.0}},
                "profile":{"kind":"linear","A":1.0},"s_range":[-0.3,0.3]}"#,
        )
        .unwrap();
        let err = build_from_config(&cfg).unwrap_err();
        assert!(err.to_string().contains("base.params.r"), "{err}");
        let cfg = parse(
            r#"{"epsilon":0,"n":2,"base":{"kind":"round_sphere","params":{"r":1.0}},
                "profile":{"kind":"linear","A":0.0},"s_range":[-0.3,0.3]}"#,
        )
        .unwrap();
        let err = build_from_config(&cfg).unwrap_err();
        assert!(err.to_string().contains("profile.A"), "{err}");
        let cfg = parse(
            r#"{"epsilon":0,"n":2,"base":{"kind":"hyperplane","params":{}},
                "profile":{"kind":"linear","A":1.0},"s_range":[0.5,0.1]}"#,
        )
        .unwrap();
        let err = build_from_config(&cfg).unwrap_err();
        assert!(err.to_string().contains("s_range"), "{err}");
    }

    #[test]
    fn wrong_epsilon_for_base_is_a_config_error() {
        let cfg = parse(
            r#"{"epsilon":0,"n":2,"base":{"kind":"geodesic_sphere","params":{"r":1.0}},
                "profile":{"kind":"linear","A":1.0},"s_range":[-0.3,0.3]}"#,
        )
        .unwrap();
        let err = build_from_config(&cfg).unwrap_err();
        assert!(err.to_string().contains("epsilon"), "{err}");
    }

    #[test]
    fn grid_walker_visits_row_major() {
        let axes = vec![vec![1.0, 2.0], vec![10.0, 20.0]];
        let mut seen = Vec::new();
        for_each_grid_point(&axes, |u| {
            seen.push((u[0], u[1]));
            Ok(())
        })
        .unwrap();
        assert_eq!(seen, vec![(1.0, 10.0), (1.0, 20.0), (2.0, 10.0), (2.0, 20.0)]);
    }
}
