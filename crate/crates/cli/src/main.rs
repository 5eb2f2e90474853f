//! Batch front end: every computation in the library behind a subcommand,
//! emitting checksummed JSON reports.
//!
//! Exit codes: 0 on pass, 1 on a mathematical fail (a frame asserted where
//! there is none, a violated bound, a tampered report), 2 on usage errors
//! (unknown specs, malformed files).

mod report;
mod spec;

use clap::{Args, Parser, Subcommand};
use ncgabor::gabor;
use ncgabor::heisenberg::{frame_op_as_right_multiplier, module_frame_check, Bimodule};
use ncgabor::padic::{fundamental_domain_check, tensor_reduction_check};
use ncgabor::spectral::{
    adk_bound_check, adk_commutator_bound_check, build_dirac, qck_certify_element,
    qck_certify_windows, window_qck_ladder, DiracShape,
};
use ncgabor::weights::{stc_constants, verify_weight};
use num_rational::Rational64;
use report::Report;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

const DEFAULT_SEED: u64 = 2026;
const OUT_DIR_ENV: &str = "NCGABOR_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "ncgabor",
    version,
    about = "Gabor frames, twisted algebras and QC^k certificates on finite abelian groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Group spec, e.g. Z12 or 4,6
    #[arg(long)]
    group: String,
    /// Lattice spec: rect:a,b or gen:(x1,w1);(x2,w2)
    #[arg(long)]
    lattice: String,
    /// Report output file (relative paths resolve against $NCGABOR_OUT_DIR)
    #[arg(long)]
    out: Option<PathBuf>,
    /// RNG seed recorded in the report
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args, Clone)]
struct WindowOpts {
    /// Window: gaussian, bspline:N, or a CSV sample file
    #[arg(long)]
    window: String,
    /// Sampling scale for named windows (defaults to sqrt(N))
    #[arg(long)]
    scale: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Frame bounds of a (multiwindow) Gabor system
    FrameBounds {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        window: WindowOpts,
    },
    /// Canonical dual window S^{-1} g
    DualWindow {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        window: WindowOpts,
        /// Write the dual window samples as CSV
        #[arg(long)]
        window_out: Option<PathBuf>,
    },
    /// Canonical Parseval window S^{-1/2} g
    ParsevalWindow {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        window: WindowOpts,
        #[arg(long)]
        window_out: Option<PathBuf>,
    },
    /// Exhaustive weight-axiom verification over phase space
    VerifyWeight {
        /// Group spec, e.g. Z8
        #[arg(long)]
        group: String,
        /// Weight spec: poly:s or const:c
        #[arg(long)]
        weight: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certified constants C_dif, C_sm, C_gr of f(v) on a lattice
    StcConstants {
        #[command(flatten)]
        common: CommonOpts,
        /// Weight spec: poly:s or const:c
        #[arg(long)]
        weight: String,
        /// Compatible function: identity, const:c, torus-sqrt
        #[arg(long)]
        f: String,
    },
    /// ad^k norm bounds for a seeded random element
    AdkVerify {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        weight: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        k: u32,
        /// Coefficients from a twisted-element CSV instead of random ones
        #[arg(long)]
        element: Option<PathBuf>,
    },
    /// QC^k certification of an element or a window family; with --ladder,
    /// a discretized-R truncation study across group sizes
    QckCertify {
        /// Group spec (lattice mode)
        #[arg(long)]
        group: Option<String>,
        /// Lattice spec (lattice mode)
        #[arg(long)]
        lattice: Option<String>,
        #[arg(long)]
        weight: Option<String>,
        #[arg(long)]
        f: String,
        #[arg(long)]
        k: u32,
        /// Extend the weighted-norm table up to v^n (n >= k+1)
        #[arg(long)]
        n: Option<u32>,
        /// Window for family certification (otherwise a random element)
        #[arg(long)]
        window: Option<String>,
        #[arg(long)]
        scale: Option<f64>,
        /// Replace windows by their canonical Parseval versions
        #[arg(long, default_value_t = false)]
        parseval: bool,
        /// Ladder mode: comma-separated L values (groups Z_{L^2})
        #[arg(long)]
        ladder: Option<String>,
        /// Ladder lattice step alpha (rational, e.g. 1 or 1/2)
        #[arg(long, default_value = "1")]
        alpha: String,
        /// Ladder lattice step beta
        #[arg(long, default_value = "1/2")]
        beta: String,
        /// Ladder weight power s
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Bimodule compatibility residual over random triples
    BimoduleCheck {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Parseval module-frame check along both routes, plus the
    /// right-multiplier form of the frame operator
    ModuleFrameCheck {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        window: WindowOpts,
        #[arg(long, default_value_t = false)]
        parseval: bool,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Solenoid lattice checks: fundamental domain and the tensor-window
    /// reduction of the Gabor Gram
    Solenoid {
        /// Prime p
        #[arg(long)]
        p: u64,
        /// alpha (rational)
        #[arg(long)]
        alpha: String,
        /// beta (rational)
        #[arg(long)]
        beta: String,
        /// p-power truncation height
        #[arg(long, default_value_t = 1)]
        height: u32,
        /// Window for the R factor
        #[arg(long, default_value = "gaussian")]
        window: String,
        /// Enumeration bound
        #[arg(long, default_value_t = 1)]
        bound: i64,
        /// Discretization parameter L (group Z_{L^2})
        #[arg(long, default_value_t = 8)]
        l: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Re-read a report file: parse, verify checksum, verify byte roundtrip
    CheckReport { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            // mathematical failures exit 1; spec/format problems exit 2
            match e {
                ncgabor::Error::NotAFrame { .. }
                | ncgabor::Error::NotInvertible
                | ncgabor::Error::Incompatible(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn emit(report: &Report, out: Option<&PathBuf>, pass: bool) -> ncgabor::Result<ExitCode> {
    let rendered = report.render();
    print!("{rendered}");
    if let Some(path) = out {
        let resolved = match std::env::var_os(OUT_DIR_ENV) {
            Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
            _ => path.clone(),
        };
        if let Some(parent) = resolved.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        std::fs::write(resolved, &rendered)?;
    }
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

fn run(command: Command) -> ncgabor::Result<ExitCode> {
    match command {
        Command::FrameBounds { common, window } => {
            let (group, lattice) = spec::group_and_lattice(&common.group, &common.lattice)?;
            let w = spec::window(&window.window, &group, window.scale)?;
            let rep = gabor::frame_bounds(&group, std::slice::from_ref(&w), &lattice);
            let results = json!({
                "frame": rep,
                "lattice_points": lattice.len(),
                "size": lattice.size().to_string(),
            });
            let report = Report::new(
                "frame-bounds",
                common.seed,
                spec::echo(&[
                    ("group", &common.group),
                    ("lattice", &common.lattice),
                    ("window", &window.window),
                ]),
                results,
                verdict(true),
            );
            emit(&report, common.out.as_ref(), true)
        }
        Command::DualWindow {
            common,
            window,
            window_out,
        } => {
            let (group, lattice) = spec::group_and_lattice(&common.group, &common.lattice)?;
            let w = spec::window(&window.window, &group, window.scale)?;
            let duals = gabor::canonical_dual(&group, std::slice::from_ref(&w), &lattice)?;
            if let Some(path) = &window_out {
                ncgabor::io::write_window_file(path, &duals[0])?;
            }
            let results = json!({
                "dual": spec::vec_to_json(&duals[0]),
                "frame": gabor::frame_bounds(&group, std::slice::from_ref(&w), &lattice),
            });
            let report = Report::new(
                "dual-window",
                common.seed,
                spec::echo(&[
                    ("group", &common.group),
                    ("lattice", &common.lattice),
                    ("window", &window.window),
                ]),
                results,
                verdict(true),
            );
            emit(&report, common.out.as_ref(), true)
        }
        Command::ParsevalWindow {
            common,
            window,
            window_out,
        } => {
            let (group, lattice) = spec::group_and_lattice(&common.group, &common.lattice)?;
            let w = spec::window(&window.window, &group, window.scale)?;
            let pars = gabor::parseval_window(&group, std::slice::from_ref(&w), &lattice)?;
            if let Some(path) = &window_out {
                ncgabor::io::write_window_file(path, &pars[0])?;
            }
            let after = gabor::frame_bounds(&group, &pars, &lattice);
            let pass = after.parseval_residual <= 1e-10;
            let results = json!({
                "parseval_window": spec::vec_to_json(&pars[0]),
                "frame_after": after,
            });
            let report = Report::new(
                "parseval-window",
                common.seed,
                spec::echo(&[
                    ("group", &common.group),
                    ("lattice", &common.lattice),
                    ("window", &window.window),
                ]),
                results,
                verdict(pass),
            );
            emit(&report, common.out.as_ref(), pass)
        }
        Command::VerifyWeight { group, weight, out } => {
            let g = spec::group(&group)?;
            let v = spec::weight(&weight, &g)?;
            let rep = verify_weight(&v);
            let results = serde_json::to_value(&rep).expect("report serializes");
            let report = Report::new(
                "verify-weight",
                DEFAULT_SEED,
                spec::echo(&[("group", &group), ("weight", &weight)]),
                results,
                verdict(true),
            );
            emit(&report, out.as_ref(), true)
        }
        Command::StcConstants { common, weight, f } => {
            let (group, lattice) = spec::group_and_lattice(&common.group, &common.lattice)?;
            let v = spec::weight(&weight, &group)?;
            let func = spec::compatible_function(&f)?;
            let cert = stc_constants(&func, &v, &lattice);
            let compatible = cert.is_compatible();
            let results = json!({
                "certificate": cert,
                "compatible": compatible,
            });
            let report = Report::new(
                "stc-constants",
                common.seed,
                spec::echo(&[
                    ("group", &common.group),
                    ("lattice", &common.lattice),
                    ("weight", &weight),
                    ("f", &f),
                ]),
                results,
                verdict(compatible),
            );
            emit(&report, common.out.as_ref(), compatible)
        }
        Command::AdkVerify {
            common,
            weight,
            f,
            k,
            element,
        } => {
            let (group, lattice) = spec::group_and_lattice(&common.group, &common.lattice)?;
            let lattice = std::sync::Arc::new(lattice);
            let v = spec::weight(&weight, &group)?;
            let func = spec::compatible_function(&f)?;
            let a = match &element {
                Some(path) => ncgabor::io::read_twisted_file(path, &lattice)?,
                None => spec::random_element(&lattice, common.seed),
            };
            let dirac = build_dirac(&func, &v, &lattice, DiracShape::OffDiag)?;
            let mut checks = Vec::new();
            let mut all_pass = true;
            for j in 1..=k {
                let c = adk_bound_check(&dirac, &*lattice, a.coeffs(), j);
                all_pass &= c.pass;
                checks.push(("element", c));
                let c2 = adk_commutator_bound_check(&dirac, &*lattice, a.coeffs(), j);
                all_pass &= c2.pass;
                checks.push(("commutator", c2));
            }
            let results = json!({
                "checks": checks
                    .iter()
                    .map(|(kind, c)| json!({"kind": kind, "check": c}))
                    .collect::<Vec<_>>(),
                "certificate": dirac.certificate,
            });
            let report = Report::new(
                "adk-verify",
                common.seed,
                spec::echo(&[
                    ("group", &common.group),
                    ("lattice", &common.lattice),
                    ("weight", &weight),
                    ("f", &f),
                    ("k", &k.to_string()),
                ]),
                results,
                verdict(all_pass),
            );
            emit(&report, common.out.as_ref(), all_pass)
        }
        Command::QckCertify {
            group,
            lattice,
            weight,
            f,
            k,
            n,
            window,
            scale,
            parseval,
            ladder,
            alpha,
            beta,
            s,
            out,
            seed,
        } => {
            let func = spec::compatible_function(&f)?;
            if let Some(ladder_spec) = &ladder {
                let ls = spec::ladder(ladder_spec)?;
                let kind = spec::window_kind(window.as_deref().unwrap_or("gaussian"))?;
                let alpha_r: Rational64 = spec::rational(&alpha)?;
                let beta_r: Rational64 = spec::rational(&beta)?;
                let rep = window_qck_ladder(kind, alpha_r, beta_r, &ls, s, &func, k, parseval)?;
                let pass = rep.rungs.iter().all(|r| r.certificate_pass);
                let results = serde_json::to_value(&rep).expect("report serializes");
                let report = Report::new(
                    "qck-certify",
                    seed,
                    spec::echo(&[
                        ("mode", "ladder"),
                        ("ladder", ladder_spec),
                        ("alpha", &alpha),
                        ("beta", &beta),
                        ("s", &s.to_string()),
                        ("f", &f),
                        ("k", &k.to_string()),
                        ("parseval", &parseval.to_string()),
                    ]),
                    results,
                    verdict(pass),
                );
                return emit(&report, out.as_ref(), pass);
            }

            let group_spec = group.ok_or_else(|| {
                ncgabor::Error::Format("qck-certify needs --group (or --ladder)".into())
            })?;
            let lattice_spec = lattice.ok_or_else(|| {
                ncgabor::Error::Format("qck-certify needs --lattice (or --ladder)".into())
            })?;
            let weight_spec = weight.ok_or_else(|| {
                ncgabor::Error::Format("qck-certify needs --weight in lattice mode".into())
            })?;
            let (g, lat) = spec::group_and_lattice(&group_spec, &lattice_spec)?;
            let v = spec::weight(&weight_spec, &g)?;
            let (results, pass) = match &window {
                Some(wspec) => {
                    let w = spec::window(wspec, &g, scale)?;
                    let windows = if parseval {
                        gabor::parseval_window(&g, std::slice::from_ref(&w), &lat)?
                    } else {
                        vec![w]
                    };
                    let bm = Bimodule::new(lat);
                    let rep = qck_certify_windows(&bm, &windows, &v, &func, k)?;
                    let pass = rep.pass;
                    (serde_json::to_value(&rep).expect("serializes"), pass)
                }
                None => {
                    let lat = std::sync::Arc::new(lat);
                    let a = spec::random_element(&lat, seed);
                    let mut cert = qck_certify_element(&a, &v, &func, k)?;
                    if let Some(n) = n {
                        if n < k + 1 {
                            return Err(ncgabor::Error::Format(format!(
                                "--n must be at least k + 1 = {}",
                                k + 1
                            )));
                        }
                        let dirac = build_dirac(&func, &v, &lat, DiracShape::OffDiag)?;
                        ncgabor::spectral::extend_norms(&mut cert, &*lat, &dirac, a.coeffs(), n);
                    }
                    let pass = cert.pass;
                    (serde_json::to_value(&cert).expect("serializes"), pass)
                }
            };
            let report = Report::new(
                "qck-certify",
                seed,
                spec::echo(&[
                    ("mode", "lattice"),
                    ("group", &group_spec),
                    ("lattice", &lattice_spec),
                    ("weight", &weight_spec),
                    ("f", &f),
                    ("k", &k.to_string()),
                    (
                        "n",
                        &n.map(|x| x.to_string())
                            .unwrap_or_else(|| (k + 1).to_string()),
                    ),
                    ("window", window.as_deref().unwrap_or("random-element")),
                    ("parseval", &parseval.to_string()),
                ]),
                results,
                verdict(pass),
            );
            emit(&report, out.as_ref(), pass)
        }
        Command::BimoduleCheck { common, trials } => {
            let (group, lattice) = spec::group_and_lattice(&common.group, &common.lattice)?;
            let bm = Bimodule::new(lattice);
            let n = group.order();
            let mut rng = spec::rng(common.seed);
            let mut worst = 0.0f64;
            for _ in 0..trials {
                let f = spec::random_vec(n, &mut rng);
                let g = spec::random_vec(n, &mut rng);
                let h = spec::random_vec(n, &mut rng);
                let res = bm.bimodule_check(&f, &g, &h)?;
                worst = worst.max(res / (f.norm() * g.norm() * h.norm()));
            }
            let pass = worst <= 1e-10;
            let results = json!({
                "trials": trials,
                "worst_relative_residual": worst,
                "tolerance": 1e-10,
                "size": bm.lattice().size().to_string(),
            });
            let report = Report::new(
                "bimodule-check",
                common.seed,
                spec::echo(&[
                    ("group", &common.group),
                    ("lattice", &common.lattice),
                    ("trials", &trials.to_string()),
                ]),
                results,
                verdict(pass),
            );
            emit(&report, common.out.as_ref(), pass)
        }
        Command::ModuleFrameCheck {
            common,
            window,
            parseval,
            trials,
        } => {
            let (group, lattice) = spec::group_and_lattice(&common.group, &common.lattice)?;
            let w = spec::window(&window.window, &group, window.scale)?;
            let windows = if parseval {
                gabor::parseval_window(&group, std::slice::from_ref(&w), &lattice)?
            } else {
                vec![w]
            };
            let bm = Bimodule::new(lattice);
            let rep = module_frame_check(&bm, &windows, trials, common.seed)?;
            let multiplier = frame_op_as_right_multiplier(&bm, &windows, trials, common.seed)
                .map(|m| serde_json::to_value(&m).expect("serializes"))
                .unwrap_or(serde_json::Value::Null);
            let pass = rep.verdicts_agree;
            let results = json!({
                "module_frame": rep,
                "right_multiplier": multiplier,
            });
            let report = Report::new(
                "module-frame-check",
                common.seed,
                spec::echo(&[
                    ("group", &common.group),
                    ("lattice", &common.lattice),
                    ("window", &window.window),
                    ("parseval", &parseval.to_string()),
                ]),
                results,
                verdict(pass),
            );
            emit(&report, common.out.as_ref(), pass)
        }
        Command::Solenoid {
            p,
            alpha,
            beta,
            height,
            window,
            bound,
            l,
            out,
            seed,
        } => {
            let alpha_r = spec::rational(&alpha)?;
            let beta_r = spec::rational(&beta)?;
            let kind = spec::window_kind(&window)?;
            let domain = fundamental_domain_check(alpha_r, p, height, bound)?;
            let reduction = tensor_reduction_check(kind, p, alpha_r, beta_r, height, bound, l)?;
            let pass = domain.violations == 0
                && domain.unresolved == 0
                && reduction.vanishing_violations == 0
                && reduction.block_discrepancy <= 1e-10
                && reduction.full_discrepancy <= 1e-10;
            let results = json!({
                "fundamental_domain": domain,
                "tensor_reduction": reduction,
            });
            let report = Report::new(
                "solenoid",
                seed,
                spec::echo(&[
                    ("p", &p.to_string()),
                    ("alpha", &alpha),
                    ("beta", &beta),
                    ("height", &height.to_string()),
                    ("window", &window),
                    ("bound", &bound.to_string()),
                    ("l", &l.to_string()),
                ]),
                results,
                verdict(pass),
            );
            emit(&report, out.as_ref(), pass)
        }
        Command::CheckReport { file } => {
            let content = std::fs::read_to_string(&file)?;
            match report::check_report_text(&content) {
                Ok(check) => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&check).expect("serializes")
                    );
                    if check.checksum_ok && check.roundtrip_ok {
                        Ok(ExitCode::SUCCESS)
                    } else {
                        Ok(ExitCode::from(1))
                    }
                }
                Err(e) => {
                    eprintln!("error: report does not parse: {e}");
                    Ok(ExitCode::from(2))
                }
            }
        }
    }
}
