//! Command-line front end: braid-word reduction, exchange-graph balls,
//! chamber reports, period evaluation and monodromy, the verification
//! battery, and SVG figures.

mod checks;
mod plot;
mod util;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;
use staba2_core::braid::{reduce, Word};
use staba2_core::exchange::{generate_ball, Heart, Quotient};
use staba2_core::periods::{monodromy, period_map, pf_residual, Continuation, Form, BASEPOINT};
use staba2_core::stability::{
    chamber_descent_with, fundamental_domain_test_with, ProjectiveCharge, DESCENT_CAP,
};
use staba2_core::Config;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

type C64 = Complex64;

#[derive(Parser)]
#[command(
    name = "staba2",
    version,
    about = "Stability conditions of the CY3 A2 quiver category"
)]
struct Cli {
    /// Configuration file of `key = value` lines.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Emit machine-readable JSON instead of text where applicable.
    #[arg(long, global = true)]
    json: bool,
    /// Output directory for generated artifacts.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Braid-group word problem in the autoequivalence group.
    Braid {
        #[command(subcommand)]
        cmd: BraidCmd,
    },
    /// Exchange-graph generation and export.
    Graph {
        #[command(subcommand)]
        cmd: GraphCmd,
    },
    /// Stability chambers, widths, and the fundamental domain.
    Stab {
        #[command(subcommand)]
        cmd: StabCmd,
    },
    /// Elliptic-curve periods: evaluation, monodromy, Picard-Fuchs checks.
    Periods {
        #[command(subcommand)]
        cmd: PeriodsCmd,
    },
    /// Consistency verification battery.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
    /// SVG figures.
    Plot {
        #[command(subcommand)]
        cmd: PlotCmd,
    },
}

#[derive(Subcommand)]
enum BraidCmd {
    /// Reduce a word (e.g. "S T S^-1 [2]") to its canonical triple.
    Reduce { word: String },
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Generate a ball of the exchange graph and print it as DOT (or JSON).
    Ball {
        #[arg(long, default_value_t = 3)]
        radius: usize,
        #[arg(long, value_enum, default_value_t = QuotientArg::None)]
        quotient: QuotientArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum QuotientArg {
    None,
    Shift,
    Sph,
}

impl From<QuotientArg> for Quotient {
    fn from(q: QuotientArg) -> Quotient {
        match q {
            QuotientArg::None => Quotient::None,
            QuotientArg::Shift => Quotient::Shift,
            QuotientArg::Sph => Quotient::Sph,
        }
    }
}

#[derive(Args)]
struct ChargeArgs {
    /// Central charge of the S-simple, e.g. "-0.25+1i".
    #[arg(long, allow_hyphen_values = true)]
    zs: String,
    /// Central charge of the T-simple, e.g. "0.5".
    #[arg(long, allow_hyphen_values = true)]
    zt: String,
}

#[derive(Subcommand)]
enum StabCmd {
    /// Descend to the width-minimizing chamber of a projective charge.
    Chamber {
        #[command(flatten)]
        charge: ChargeArgs,
    },
    /// Locate a charge relative to the standard fundamental domain.
    Domain {
        #[command(flatten)]
        charge: ChargeArgs,
    },
    /// Chamber CSV over a grid in the charge ratio Z(S)/Z(T).
    Sweep {
        #[arg(long, default_value_t = 40)]
        nx: usize,
        #[arg(long, default_value_t = 20)]
        ny: usize,
    },
}

#[derive(Subcommand)]
enum PeriodsCmd {
    /// Evaluate the canonically continued periods at a point u.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, value_enum, default_value_t = FormArg::Both)]
        form: FormArg,
    },
    /// Integer monodromy of the period basis around a loop.
    Monodromy {
        /// Named loop around a singular value.
        #[arg(long, value_enum, conflicts_with = "loop_json")]
        around: Option<AroundArg>,
        /// Explicit polyline as a JSON array of [re, im] pairs.
        #[arg(long = "loop", value_name = "JSON")]
        loop_json: Option<String>,
    },
    /// Residual of the hypergeometric (Picard-Fuchs) equation.
    PfCheck {
        /// Single point; defaults to a 20-point arc around u = 1/2.
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
    },
    /// CSV of periods over a grid in the u-plane.
    Sweep {
        #[arg(long, default_value_t = 10)]
        nx: usize,
        #[arg(long, default_value_t = 10)]
        ny: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Lambda,
    Omega,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum AroundArg {
    Zero,
    One,
    Inf,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Run every consistency check and report pass/fail per check.
    All {
        /// Write a JSON report to this path.
        #[arg(long, value_name = "PATH")]
        report: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PlotCmd {
    /// Chamber decomposition around the fundamental domain (SVG).
    Domain {
        #[arg(long, default_value = "domain.svg")]
        file: String,
    },
    /// Image of a u-plane grid under the period map (SVG).
    PeriodGrid {
        #[arg(long, default_value = "period_grid.svg")]
        file: String,
    },
}

/// Failure modes mapped to the exit-code contract: checks that do not hold
/// exit 1, malformed invocations exit 2.
enum Failure {
    Check(String),
    Usage(String),
}

impl From<String> for Failure {
    fn from(s: String) -> Failure {
        Failure::Check(s)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_config(cli: &Cli) -> Result<Config, Failure> {
    let mut cfg = Config::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("reading {}: {e}", path.display())))?;
        cfg.apply_kv_text(&text).map_err(Failure::Usage)?;
    }
    cfg.apply_env().map_err(Failure::Usage)?;
    if let Some(out) = &cli.out {
        cfg.output_dir = out.display().to_string();
    }
    cfg.validate().map_err(Failure::Usage)?;
    Ok(cfg)
}

fn parse_charge(a: &ChargeArgs) -> Result<ProjectiveCharge, Failure> {
    let zs = util::parse_complex(&a.zs).map_err(Failure::Usage)?;
    let zt = util::parse_complex(&a.zt).map_err(Failure::Usage)?;
    Ok(ProjectiveCharge::new(zs, zt))
}

fn heart_json(h: &Heart) -> serde_json::Value {
    json!({
        "k_matrix": h.g.k_matrix.matrix().0,
        "twist_sum": h.g.twist_sum,
        "shift_res": h.g.shift_res,
        "simples": {
            "t_role": { "class": [h.t_role.class.s, h.t_role.class.t], "shift_tag": h.t_role.shift_tag },
            "s_role": { "class": [h.s_role.class.s, h.s_role.class.t], "shift_tag": h.s_role.shift_tag },
        },
    })
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let cfg = load_config(cli)?;
    match &cli.cmd {
        Cmd::Braid {
            cmd: BraidCmd::Reduce { word },
        } => {
            let w: Word = word
                .parse()
                .map_err(|e| Failure::Usage(format!("cannot parse word {word:?}: {e}")))?;
            let a = reduce(&w);
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "input": w.to_string(),
                        "k_matrix": a.k_matrix.matrix().0,
                        "twist_sum": a.twist_sum,
                        "shift_res": a.shift_res,
                    })
                );
            } else {
                let m = a.k_matrix.matrix().0;
                println!(
                    "k=[[{},{}],[{},{}]] twist={} shift={}",
                    m[0][0], m[0][1], m[1][0], m[1][1], a.twist_sum, a.shift_res
                );
            }
            Ok(())
        }
        Cmd::Graph {
            cmd: GraphCmd::Ball { radius, quotient },
        } => {
            let ball = generate_ball(*radius, (*quotient).into())
                .map_err(|e| Failure::Usage(e.to_string()))?;
            if cli.json {
                println!("{}", ball.to_json());
            } else {
                print!("{}", ball.to_dot());
            }
            Ok(())
        }
        Cmd::Stab { cmd } => run_stab(cli, &cfg, cmd),
        Cmd::Periods { cmd } => run_periods(cli, &cfg, cmd),
        Cmd::Verify {
            cmd: VerifyCmd::All { report },
        } => run_verify(&cfg, report.as_deref()),
        Cmd::Plot { cmd } => run_plot(&cfg, cmd),
    }
}

fn run_stab(cli: &Cli, cfg: &Config, cmd: &StabCmd) -> Result<(), Failure> {
    match cmd {
        StabCmd::Chamber { charge } => {
            let z = parse_charge(charge)?;
            let rep = chamber_descent_with(&z, cfg.tie_tol, DESCENT_CAP)
                .map_err(|e| Failure::Check(e.to_string()))?;
            let walls: Vec<&str> = rep.wall_flags.iter().map(|g| g.label()).collect();
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "heart": heart_json(&rep.heart),
                        "width": rep.width,
                        "stable": rep.stable,
                        "wall_flags": walls,
                        "steps": rep.steps,
                    })
                );
            } else {
                let m = rep.heart.g.k_matrix.matrix().0;
                println!(
                    "chamber heart: k=[[{},{}],[{},{}]] twist={} shift={}",
                    m[0][0],
                    m[0][1],
                    m[1][0],
                    m[1][1],
                    rep.heart.g.twist_sum,
                    rep.heart.g.shift_res
                );
                println!("width: {:.12}", rep.width);
                println!(
                    "stable simples: s1={} s2={} ext={}",
                    rep.stable.s1, rep.stable.s2, rep.stable.ext
                );
                println!(
                    "walls: {}",
                    if walls.is_empty() {
                        "none".into()
                    } else {
                        walls.join(" ")
                    }
                );
                println!("descent steps: {}", rep.steps);
            }
            Ok(())
        }
        StabCmd::Domain { charge } => {
            let z = parse_charge(charge)?;
            let pos = fundamental_domain_test_with(&z, cfg.tie_tol);
            if cli.json {
                println!("{}", serde_json::to_string(&pos).expect("serializable"));
            } else {
                println!("{pos:?}");
            }
            Ok(())
        }
        StabCmd::Sweep { nx, ny } => {
            if *nx < 2 || *ny < 1 {
                return Err(Failure::Usage("sweep grid must be at least 2x1".into()));
            }
            let mut csv =
                String::from("zs_re,zs_im,zt_re,zt_im,k00,k01,k10,k11,twist,shift,width,stable_count,wall_flags\n");
            for iy in 0..*ny {
                let y = 0.1 + 1.9 * iy as f64 / *ny as f64;
                for ix in 0..*nx {
                    let x = -2.0 + 4.0 * ix as f64 / (*nx - 1) as f64;
                    let z = ProjectiveCharge::new(C64::new(x, y), C64::new(1.0, 0.0));
                    let rep = match chamber_descent_with(&z, cfg.tie_tol, DESCENT_CAP) {
                        Ok(r) => r,
                        Err(_) => continue,
                    };
                    let m = rep.heart.g.k_matrix.matrix().0;
                    let stable_count = [rep.stable.s1, rep.stable.s2, rep.stable.ext]
                        .iter()
                        .filter(|b| **b)
                        .count();
                    let walls: Vec<&str> = rep.wall_flags.iter().map(|g| g.label()).collect();
                    csv.push_str(&format!(
                        "{x},{y},1,0,{},{},{},{},{},{},{:.12},{},{}\n",
                        m[0][0],
                        m[0][1],
                        m[1][0],
                        m[1][1],
                        rep.heart.g.twist_sum,
                        rep.heart.g.shift_res,
                        rep.width,
                        stable_count,
                        walls.join("|"),
                    ));
                }
            }
            emit_artifact(cfg, "stab_sweep.csv", &csv)
        }
    }
}

fn named_loop(a: AroundArg) -> Vec<C64> {
    let c = C64::new;
    match a {
        AroundArg::Zero => vec![
            BASEPOINT,
            c(-0.5, 0.5),
            c(-0.5, -0.5),
            c(0.5, -0.5),
            BASEPOINT,
        ],
        AroundArg::One => vec![
            BASEPOINT,
            c(0.5, -0.5),
            c(1.5, -0.5),
            c(1.5, 0.5),
            BASEPOINT,
        ],
        AroundArg::Inf => vec![
            BASEPOINT,
            c(-1.5, 1.0),
            c(-1.5, -1.0),
            c(2.5, -1.0),
            c(2.5, 1.0),
            BASEPOINT,
        ],
    }
}

fn run_periods(cli: &Cli, cfg: &Config, cmd: &PeriodsCmd) -> Result<(), Failure> {
    match cmd {
        PeriodsCmd::Eval { u, form } => {
            let u = util::parse_complex(u).map_err(Failure::Usage)?;
            let pv = period_map(u, cfg).map_err(|e| Failure::Check(e.to_string()))?;
            let j = 4.0 * u * (C64::new(1.0, 0.0) - u);
            let mut forms = Vec::new();
            if matches!(form, FormArg::Lambda | FormArg::Both) {
                forms.push(("lambda", pv.lambda));
            }
            if matches!(form, FormArg::Omega | FormArg::Both) {
                forms.push(("omega", pv.omega));
            }
            if cli.json {
                let mut body = json!({
                    "u": [u.re, u.im],
                    "j": [j.re, j.im],
                });
                for (name, p) in &forms {
                    body[name] = json!({
                        "alpha": [p.alpha.re, p.alpha.im],
                        "beta": [p.beta.re, p.beta.im],
                        "ratio": [p.ratio().re, p.ratio().im],
                    });
                }
                println!("{body}");
            } else {
                println!(
                    "u = {}   j = {}",
                    util::fmt_complex(u),
                    util::fmt_complex(j)
                );
                for (name, p) in &forms {
                    println!(
                        "{name}: alpha = {}  beta = {}  ratio = {}",
                        util::fmt_complex(p.alpha),
                        util::fmt_complex(p.beta),
                        util::fmt_complex(p.ratio()),
                    );
                }
            }
            Ok(())
        }
        PeriodsCmd::Monodromy { around, loop_json } => {
            let path: Vec<C64> = match (around, loop_json) {
                (Some(a), None) => named_loop(*a),
                (None, Some(text)) => {
                    let pts: Vec<[f64; 2]> = serde_json::from_str(text)
                        .map_err(|e| Failure::Usage(format!("bad --loop JSON: {e}")))?;
                    if pts.len() < 3 {
                        return Err(Failure::Usage("loop needs at least 3 vertices".into()));
                    }
                    let mut path: Vec<C64> = pts.iter().map(|p| C64::new(p[0], p[1])).collect();
                    if path.first() != path.last() {
                        let first = path[0];
                        path.push(first);
                    }
                    path
                }
                _ => {
                    return Err(Failure::Usage(
                        "exactly one of --around or --loop is required".into(),
                    ))
                }
            };
            let m = monodromy(&path, cfg).map_err(|e| Failure::Check(e.to_string()))?;
            if cli.json {
                println!(
                    "{}",
                    json!({ "matrix": m.0, "trace": m.trace(), "det": m.det() })
                );
            } else {
                println!(
                    "monodromy = [[{},{}],[{},{}]]  trace = {}  det = {}",
                    m.0[0][0],
                    m.0[0][1],
                    m.0[1][0],
                    m.0[1][1],
                    m.trace(),
                    m.det()
                );
            }
            Ok(())
        }
        PeriodsCmd::PfCheck { u, tol } => {
            let points: Vec<C64> = match u {
                Some(text) => vec![util::parse_complex(text).map_err(Failure::Usage)?],
                None => (0..20)
                    .map(|k| C64::new(0.5, 0.0) + C64::from_polar(0.9, 0.15 + 0.085 * k as f64))
                    .collect(),
            };
            let mut worst: f64 = 0.0;
            let mut rows = Vec::new();
            for u in &points {
                for form in [Form::Omega, Form::Lambda] {
                    let r =
                        pf_residual(*u, form, cfg).map_err(|e| Failure::Check(e.to_string()))?;
                    worst = worst.max(r);
                    rows.push(json!({
                        "u": [u.re, u.im],
                        "form": format!("{form:?}"),
                        "residual": r,
                    }));
                }
            }
            let passed = worst < *tol;
            if cli.json {
                println!(
                    "{}",
                    json!({ "passed": passed, "worst_residual": worst, "tol": tol, "points": rows })
                );
            } else {
                for row in &rows {
                    println!(
                        "u = ({:.4}, {:.4})  {}  residual = {:.3e}",
                        row["u"][0].as_f64().unwrap_or(f64::NAN),
                        row["u"][1].as_f64().unwrap_or(f64::NAN),
                        row["form"].as_str().unwrap_or("?"),
                        row["residual"].as_f64().unwrap_or(f64::NAN),
                    );
                }
                println!(
                    "picard-fuchs residuals: {} (worst {worst:.3e}, tol {tol:.1e})",
                    if passed { "PASS" } else { "FAIL" }
                );
            }
            if passed {
                Ok(())
            } else {
                Err(Failure::Check(format!(
                    "worst residual {worst:.3e} exceeds tol {tol:.1e}"
                )))
            }
        }
        PeriodsCmd::Sweep { nx, ny } => {
            if *nx < 2 || *ny < 1 {
                return Err(Failure::Usage("sweep grid must be at least 2x1".into()));
            }
            let mut csv = String::from(
                "u_re,u_im,j_re,j_im,p_alpha_re,p_alpha_im,p_beta_re,p_beta_im,ratio_re,ratio_im\n",
            );
            for iy in 0..*ny {
                let im = 0.2 + 1.35 * iy as f64 / (*ny).max(2) as f64;
                // March each constant-Im row with one continuation so the
                // whole row stays on a common branch.
                let re_at = |ix: usize| -1.4 + 3.8 * ix as f64 / (*nx - 1) as f64;
                let pv = period_map(C64::new(re_at(0), im), cfg)
                    .map_err(|e| Failure::Check(e.to_string()))?;
                let mut cont =
                    Continuation::resume(&pv, cfg).map_err(|e| Failure::Check(e.to_string()))?;
                for ix in 0..*nx {
                    let u = C64::new(re_at(ix), im);
                    cont.advance_to(u)
                        .map_err(|e| Failure::Check(e.to_string()))?;
                    let j = 4.0 * u * (C64::new(1.0, 0.0) - u);
                    let p = cont.lambda;
                    let r = p.ratio();
                    csv.push_str(&format!(
                        "{},{},{},{},{},{},{},{},{},{}\n",
                        u.re,
                        u.im,
                        j.re,
                        j.im,
                        p.alpha.re,
                        p.alpha.im,
                        p.beta.re,
                        p.beta.im,
                        r.re,
                        r.im
                    ));
                }
            }
            emit_artifact(cfg, "periods_sweep.csv", &csv)
        }
    }
}

fn run_verify(cfg: &Config, report: Option<&Path>) -> Result<(), Failure> {
    let results = checks::run_all(cfg);
    let mut all_passed = true;
    for r in &results {
        if r.passed {
            println!("check {}: PASS", r.name);
        } else {
            println!("check {}: FAIL - {}", r.name, r.detail);
            all_passed = false;
        }
    }
    if let Some(path) = report {
        let body = json!({ "passed": all_passed, "checks": results });
        util::atomic_write(path, &format!("{:#}\n", body)).map_err(Failure::Check)?;
        println!("report written to {}", path.display());
    }
    if all_passed {
        println!("all checks passed");
        Ok(())
    } else {
        Err(Failure::Check("one or more checks failed".into()))
    }
}

fn run_plot(cfg: &Config, cmd: &PlotCmd) -> Result<(), Failure> {
    let (file, svg) = match cmd {
        PlotCmd::Domain { file } => (file, plot::domain_svg(cfg)),
        PlotCmd::PeriodGrid { file } => (file, plot::period_grid_svg(cfg).map_err(Failure::Check)?),
    };
    emit_artifact(cfg, file, &svg)
}

/// Writes a named artifact into the configured output directory.
fn emit_artifact(cfg: &Config, name: &str, contents: &str) -> Result<(), Failure> {
    let path = Path::new(&cfg.output_dir).join(name);
    util::atomic_write(&path, contents).map_err(Failure::Check)?;
    println!("wrote {}", path.display());
    Ok(())
}
