//! Thin command-line front end over the library: scattering tables,
//! spectral catalogues, branch traces, self-validation, and the
//! coalescence scan. All numerical work lives in the library; this file
//! only parses arguments and writes files.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rayon::prelude::*;

use nlsbif::branch::{coalescence_scan, threshold_branch, trace_branch, Controls};
use nlsbif::error::Error;
use nlsbif::potential::{PotentialDescriptor, PotentialSpec};
use nlsbif::report;
use nlsbif::scattering::scattering_data;
use nlsbif::spectrum::{
    count_zeros_box, detect_threshold, locate_complex_zeros, scan_axis, Parity, Rect,
    SpectralClass, Target,
};
use nlsbif::validate::{format_table, run_validation};

#[derive(Parser)]
#[command(name = "nlsbif", version, about = "Scattering, spectra and nonlinear bound-state branches for compactly supported potentials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PotentialArgs {
    /// JSON or TOML file with the potential descriptor.
    #[arg(long, conflicts_with = "inline")]
    potential: Option<PathBuf>,
    /// Inline JSON potential descriptor.
    #[arg(long)]
    inline: Option<String>,
}

impl PotentialArgs {
    fn build(&self) -> Result<PotentialSpec, Error> {
        let text = match (&self.potential, &self.inline) {
            (Some(path), None) => std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?,
            (None, Some(s)) => s.clone(),
            _ => return Err(Error::Config("need exactly one of --potential/--inline".into())),
        };
        let desc: PotentialDescriptor = serde_json::from_str(&text)
            .or_else(|_| toml::from_str(&text).map_err(|e| Error::Config(e.to_string())))?;
        desc.build()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate w, s-, s+, t, r-, r+ over a grid of wavenumbers.
    Scatter {
        #[command(flatten)]
        potential: PotentialArgs,
        /// Real-axis grid start:stop:count.
        #[arg(long, default_value = "0.1:5:50")]
        k_grid: String,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Catalogue spectral points: axis scan, complex box, threshold test.
    Spectrum {
        #[command(flatten)]
        potential: PotentialArgs,
        /// Imaginary-axis window start:stop:count for the scan of kappa.
        #[arg(long, default_value = "-3:3:120")]
        kappa_range: String,
        /// Complex search box re0:re1:im0:im1 for resonances.
        #[arg(long, name = "box")]
        box_: Option<String>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Trace nonlinear bound-state branches from spectral seeds.
    Branch {
        #[command(flatten)]
        potential: PotentialArgs,
        /// Seed class filter: bound, antibound, transmission, threshold.
        #[arg(long, default_value = "bound")]
        seed_class: String,
        /// eps of the first branch point.
        #[arg(long, default_value_t = 1e-6)]
        eps0: f64,
        /// Stop when E falls below this.
        #[arg(long, default_value_t = -25.0)]
        e_min: f64,
        /// Stop when eps exceeds this.
        #[arg(long, default_value_t = 10.0)]
        eps_max: f64,
        /// Threshold branch parity (even|odd), used with --seed-class threshold.
        #[arg(long, default_value = "even")]
        parity: String,
        /// Also write sampled profiles for this many evenly spaced points.
        #[arg(long, default_value_t = 0)]
        profiles: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Run the built-in cross-checks and print a pass/fail table.
    Validate {
        /// Only run checks whose name contains this substring.
        #[arg(long)]
        only: Option<String>,
    },
    /// Scan a square-well family for an axis-pair coalescence.
    Coalesce {
        /// Depth grid start:stop:count.
        #[arg(long, default_value = "8:9.4:8")]
        alpha_grid: String,
        /// Half width of the wells.
        #[arg(long, default_value_t = 1.0)]
        half_width: f64,
        /// Axis window for the scan, start:stop.
        #[arg(long, default_value = "-2.2:-0.05")]
        kappa_window: String,
        /// Conservation box re0:re1:im0:im1.
        #[arg(long, name = "box", default_value = "-1:1:-2:-0.05")]
        box_: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

fn parse_grid(s: &str) -> Result<(f64, f64, usize), Error> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!("grid '{s}' is not start:stop:count")));
    }
    let a: f64 = parts[0].parse().map_err(|_| Error::Config(format!("bad grid '{s}'")))?;
    let b: f64 = parts[1].parse().map_err(|_| Error::Config(format!("bad grid '{s}'")))?;
    let n: usize = parts[2].parse().map_err(|_| Error::Config(format!("bad grid '{s}'")))?;
    if n < 2 || !(a < b) {
        return Err(Error::Config(format!("grid '{s}' needs start < stop and count >= 2")));
    }
    Ok((a, b, n))
}

fn parse_box(s: &str) -> Result<Rect, Error> {
    let v: Vec<f64> = s
        .split(':')
        .map(|p| p.parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Error::Config(format!("bad box '{s}'")))?;
    if v.len() != 4 || v[0] >= v[1] || v[2] >= v[3] {
        return Err(Error::Config(format!("box '{s}' is not re0:re1:im0:im1")));
    }
    Ok(Rect { re_min: v[0], re_max: v[1], im_min: v[2], im_max: v[3] })
}

fn setup_jobs(jobs: usize) {
    if jobs > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
}

fn write(out: &PathBuf, name: &str, content: &str) -> Result<(), Error> {
    std::fs::create_dir_all(out)
        .map_err(|e| Error::Config(format!("cannot create {}: {e}", out.display())))?;
    let path = out.join(name);
    std::fs::write(&path, content)
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Scatter { potential, k_grid, out, jobs } => {
            setup_jobs(jobs);
            let spec = potential.build()?;
            let (a, b, n) = parse_grid(&k_grid)?;
            let ks: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
            let rows = ks
                .par_iter()
                .map(|&k| scattering_data(&spec, Complex64::new(k, 0.0)))
                .collect::<Result<Vec<_>, _>>()?;
            write(&out, "scatter.csv", &report::scatter_csv(&spec, &rows))
        }
        Command::Spectrum { potential, kappa_range, box_, out } => {
            let spec = potential.build()?;
            let (a, b, n) = parse_grid(&kappa_range)?;
            let mut points = Vec::new();
            // Split the window at zero: the scan targets simple zeros and
            // k = 0 is the branch point handled by the threshold test.
            let margin = 0.02 * (b - a);
            if a < -margin {
                points.extend(scan_axis(&spec, Target::WFunction, a, (-margin).min(b), n)?);
                points.extend(scan_axis(&spec, Target::SMinusFunction, a, (-margin).min(b), n)?);
            }
            if b > margin {
                points.extend(scan_axis(&spec, Target::WFunction, margin.max(a), b, n)?);
            }
            if let Some(bx) = box_ {
                points.extend(locate_complex_zeros(&spec, Target::WFunction, parse_box(&bx)?, 24)?);
            }
            if let Some(thr) = detect_threshold(&spec)? {
                points.push(thr);
            }
            points.sort_by(|p, q| {
                (p.k_star.im, p.k_star.re)
                    .partial_cmp(&(q.k_star.im, q.k_star.re))
                    .unwrap()
            });
            // The box locator re-finds axis zeros lying inside the box;
            // keep one entry per zero of the same target.
            points.dedup_by(|p, q| {
                p.target == q.target
                    && (p.k_star - q.k_star).norm() < 1e-6 * (1.0 + p.k_star.norm())
            });
            let doc = report::spectrum_json(&spec, &points);
            write(&out, "spectrum.json", &serde_json::to_string_pretty(&doc).unwrap())
        }
        Command::Branch {
            potential,
            seed_class,
            eps0,
            e_min,
            eps_max,
            parity,
            profiles,
            out,
            jobs,
        } => {
            setup_jobs(jobs);
            let spec = potential.build()?;
            let controls = Controls { eps_seed: eps0, e_min, eps_max, ..Controls::default() };
            let curves: Vec<(String, nlsbif::branch::BranchCurve)> = match seed_class.as_str() {
                "threshold" => {
                    let par = match parity.as_str() {
                        "even" => Parity::Even,
                        "odd" => Parity::Odd,
                        other => return Err(Error::Config(format!("bad parity '{other}'"))),
                    };
                    vec![("threshold-0".into(), threshold_branch(&spec, par, &controls)?)]
                }
                class @ ("bound" | "antibound" | "transmission") => {
                    let (target, lo, hi) = match class {
                        "bound" => (Target::WFunction, 0.02, (spec.alpha.max(1.0)).sqrt() + 0.5),
                        "antibound" => (Target::WFunction, -6.0, -0.02),
                        _ => (Target::SMinusFunction, -6.0, -0.02),
                    };
                    let seeds = scan_axis(&spec, target, lo, hi, 200)?;
                    let seeds: Vec<_> = seeds
                        .into_iter()
                        .filter(|p| {
                            !matches!(p.class, SpectralClass::ThresholdResonance { .. })
                        })
                        .collect();
                    seeds
                        .par_iter()
                        .enumerate()
                        .map(|(i, p)| {
                            trace_branch(&spec, p, &controls).map(|c| (format!("{class}-{i}"), c))
                        })
                        .collect::<Result<Vec<_>, _>>()?
                }
                other => return Err(Error::Config(format!("bad seed class '{other}'"))),
            };
            let refs: Vec<(String, &nlsbif::branch::BranchCurve)> =
                curves.iter().map(|(id, c)| (id.clone(), c)).collect();
            write(&out, "branches.csv", &report::branch_csv(&spec, &refs))?;
            for (id, curve) in &curves {
                if profiles == 0 || curve.points.is_empty() {
                    continue;
                }
                let step = (curve.points.len() / profiles.min(curve.points.len())).max(1);
                for (j, g) in curve.points.iter().step_by(step).take(profiles).enumerate() {
                    let doc = report::profile_json(&spec, g, 801)?;
                    let name = format!("profile-{id}-{j}.json");
                    write(&out, &name, &serde_json::to_string_pretty(&doc).unwrap())?;
                }
            }
            Ok(())
        }
        Command::Validate { only } => {
            let checks = run_validation(only.as_deref())?;
            print!("{}", format_table(&checks));
            if checks.iter().all(|c| c.pass()) {
                Ok(())
            } else {
                Err(Error::NewtonDiverged)
            }
        }
        Command::Coalesce { alpha_grid, half_width, kappa_window, box_, out, jobs } => {
            setup_jobs(jobs);
            let (a, b, n) = parse_grid(&alpha_grid)?;
            let alphas: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
            let parts: Vec<&str> = kappa_window.split(':').collect();
            if parts.len() != 2 {
                return Err(Error::Config(format!("bad window '{kappa_window}'")));
            }
            let lo: f64 = parts[0].parse().map_err(|_| Error::Config("bad window".into()))?;
            let hi: f64 = parts[1].parse().map_err(|_| Error::Config("bad window".into()))?;
            let rect = parse_box(&box_)?;
            let report_data = coalescence_scan(
                |alpha| PotentialSpec::square_well(alpha, half_width),
                &alphas,
                Target::WFunction,
                (lo, hi),
                rect,
            )?;
            // Conservation statement for the record: box count per sample.
            let sample_spec = PotentialSpec::square_well(alphas[0], half_width)?;
            let _ = count_zeros_box(&sample_spec, Target::WFunction, rect)?;
            let doc = serde_json::json!({
                "tool_version": report::tool_version(),
                "samples": serde_json::to_value(&report_data.samples).unwrap(),
                "bracket": report_data.bracket,
            });
            write(&out, "coalesce.json", &serde_json::to_string_pretty(&doc).unwrap())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            ExitCode::from(2)
        }
        Err(Error::IntegrationFailure { x_last }) => {
            eprintln!("integration failure near x = {x_last}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
