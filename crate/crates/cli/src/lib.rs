//! Command line front end: argument and config parsing, dispatch, and output.

pub mod config;
pub mod record;
pub mod render;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use hypgrowth::constructions::*;
use hypgrowth::experiments::{
    full_pipeline_audit, growth_tight_experiment, surjection_sweep, theta_scan, xi_scan, PipelineOptions, ScanBounds,
};
use hypgrowth::limit::{factoring_check, growth_continuity_probe, stable_kernel_scan, HomomorphismSequence};
use hypgrowth::{
    cone_automaton, enumerate_balls, estimate_uniform_wpd_d, growth_estimate, ActionConstants, Error, GeneratingSet,
    Group, Space, WpdParams,
};

use config::RunConfig;
use record::{Ledger, ResultRecord, Runtime, SCHEMA_VERSION};

pub const DEFAULT_CAP: usize = 10_000_000;

#[derive(Parser, Debug)]
#[command(name = "hypgrowth", version, about = "Growth and ping-pong experiments for groups acting on trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: RunConfig,
}

#[derive(Subcommand, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    /// Sphere and ball sizes with growth brackets.
    Growth,
    /// First hyperbolic element of S^M and the large displacement element.
    FindHyperbolic,
    /// Free pair g^k, s g^k s^-1 with an exhaustive ping-pong check.
    FreePair,
    /// The element u with its translation, word length and primitivity checks.
    PrimitiveU,
    /// The four separators u1..u4.
    Separators,
    /// Injectivity of the map on adequate tuples.
    PhiCheck,
    /// Certified lower bound for the growth rate.
    LowerBound,
    /// Growth rates of generating sets of the whole group.
    XiScan,
    /// Growth rates of finite sets generating subgroups.
    ThetaScan,
    /// BS(2,3) * Z against its image under a -> a^2.
    GrowthTight,
    /// All constructions in order.
    Audit,
    /// Stable kernel, factoring and continuity for a sequence of homomorphisms.
    Limit,
    /// Ball sizes under random endomorphisms.
    Sweep,
    /// Sampled estimate of the uniform WPD constant.
    Wpd,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Growth => "growth",
            Command::FindHyperbolic => "find-hyperbolic",
            Command::FreePair => "free-pair",
            Command::PrimitiveU => "primitive-u",
            Command::Separators => "separators",
            Command::PhiCheck => "phi-check",
            Command::LowerBound => "lower-bound",
            Command::XiScan => "xi-scan",
            Command::ThetaScan => "theta-scan",
            Command::GrowthTight => "growth-tight",
            Command::Audit => "audit",
            Command::Limit => "limit",
            Command::Sweep => "sweep",
            Command::Wpd => "wpd",
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

#[derive(Default)]
struct Outcome {
    payload: Value,
    passed: bool,
    delta_n: Option<u64>,
    csv: Option<String>,
    svg: Option<String>,
}

fn to_value(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("reports serialise")
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

struct Ctx {
    cfg: RunConfig,
    space: Space,
    s: GeneratingSet,
    constants: ActionConstants,
    cap: usize,
    shards: usize,
}

impl Ctx {
    fn group(&self) -> &Group {
        self.space.group()
    }

    fn depth(&self, default: usize) -> usize {
        self.cfg.depth.unwrap_or(default)
    }
}

fn setup(cfg: &RunConfig) -> Result<Ctx, Failure> {
    let model = cfg.model.as_deref().unwrap_or("f2");
    let group = Group::new(model.parse()?)?;
    let s = match &cfg.gens {
        Some(text) => GeneratingSet::parse(&group, text)?,
        None => GeneratingSet::standard(&group),
    };
    let space = Space::new(&group)?;
    let constants = ActionConstants::new(space.delta(), cfg.constants_d.unwrap_or(1), cfg.constants_m.unwrap_or(2))?;
    Ok(Ctx {
        cfg: cfg.clone(),
        space,
        s,
        constants,
        cap: cfg.cap.unwrap_or(DEFAULT_CAP),
        shards: cfg.shards(),
    })
}

fn growth(c: &Ctx) -> Result<Outcome, Failure> {
    let depth = c.depth(10);
    let table = enumerate_balls(c.group(), &c.s, depth, c.cap, c.shards);
    let estimate = growth_estimate(&table, None);
    let mut passed = true;
    let automaton = match c.cfg.automaton {
        Some(r) => {
            let a = cone_automaton(c.group(), &c.s, r, c.cap)?;
            let counts = a.path_counts(table.radius());
            let matches = counts == table.spheres;
            passed &= matches;
            Some(json!({
                "states": a.state_count(),
                "cutoff_radius": r,
                "spectral_radius": a.spectral_radius(),
                "sphere_counts": counts,
                "matches_bfs": matches,
            }))
        }
        None => None,
    };
    Ok(Outcome {
        csv: Some(render::growth_csv(&table).map_err(usage)?),
        payload: json!({ "table": table, "estimate": estimate, "automaton": automaton }),
        passed,
        ..Outcome::default()
    })
}

fn find_hyp(c: &Ctx) -> Result<Outcome, Failure> {
    let g = c.group();
    let h = find_hyperbolic(&c.space, &c.s, c.constants.m_power as usize, c.cap)?;
    let ld = large_displacement_element(&c.space, &c.s)?;
    Ok(Outcome {
        payload: json!({
            "hyperbolic": {
                "element": g.format_compact(&h.element.element),
                "level": h.level,
                "translation": h.translation,
                "non_elementary_witness": g.format_compact(&h.non_elementary_witness),
            },
            "large_displacement": ld.summary(g),
            "point": c.space.format_point(&ld.point),
        }),
        passed: true,
        ..Outcome::default()
    })
}

fn pair(c: &Ctx) -> Result<FreePair, Failure> {
    let ld = large_displacement_element(&c.space, &c.s)?;
    Ok(build_free_pair(&c.space, &c.s, &ld.element, &ld.point, &c.constants, c.depth(8))?)
}

fn separators(c: &Ctx) -> Result<SeparatorSet, Failure> {
    let opts = SeparatorOptions {
        ball_radius: c.cfg.radius.unwrap_or(3),
        cap: c.cap,
    };
    Ok(build_separators(&c.space, &c.s, &c.constants, &opts)?)
}

fn scan_bounds(c: &Ctx) -> ScanBounds {
    let d = ScanBounds::default();
    ScanBounds {
        max_cardinality: c.cfg.cardinality.unwrap_or(d.max_cardinality),
        max_length: c.cfg.length.unwrap_or(d.max_length),
        depth: c.depth(d.depth),
        lower_bounds: !c.cfg.no_lower.unwrap_or(false),
        cap: c.cap,
        ..d
    }
}

fn split_list(text: &str) -> Vec<&str> {
    text.split(',').map(str::trim).filter(|t| !t.is_empty()).collect()
}

fn dispatch(cmd: Command, c: &Ctx) -> Result<Outcome, Failure> {
    match cmd {
        Command::Growth => growth(c),
        Command::FindHyperbolic => find_hyp(c),
        Command::FreePair => {
            let p = pair(c)?;
            Ok(Outcome {
                passed: p.report.passed,
                payload: to_value(&p.report),
                ..Outcome::default()
            })
        }
        Command::PrimitiveU => {
            let p = pair(c)?;
            if !p.report.passed {
                return Err(Error::Audit("free pair certificate failed".into()).into());
            }
            let opts = PrimitiveOptions {
                ball_radius: c.cfg.radius.unwrap_or(4),
                cap: c.cap,
            };
            let u = build_primitive_u(&c.space, &c.s, &p, &c.constants, &opts)?;
            Ok(Outcome {
                passed: u.report.passed,
                payload: json!({ "free_pair": p.report, "primitive": u.report }),
                ..Outcome::default()
            })
        }
        Command::Separators => {
            let set = separators(c)?;
            Ok(Outcome {
                passed: set.passed(),
                delta_n: Some(set.context.delta_n),
                payload: to_value(&set.report),
                ..Outcome::default()
            })
        }
        Command::PhiCheck => {
            let set = separators(c)?;
            let cases = match (c.cfg.m, c.cfg.q) {
                (None, None) => vec![(2, 1), (2, 2), (3, 1)],
                (m, q) => vec![(m.unwrap_or(2), q.unwrap_or(1))],
            };
            let mut reports = Vec::new();
            for (m, q) in cases {
                reports.push(phi_injectivity_check(&c.space, &c.s, &set, c.constants.delta, c.constants.d, m, q, c.cap)?);
            }
            Ok(Outcome {
                passed: set.passed() && reports.iter().all(|r| r.passed),
                delta_n: Some(set.context.delta_n),
                payload: json!({ "separators": set.report, "phi": reports }),
                ..Outcome::default()
            })
        }
        Command::LowerBound => {
            let opts = LowerBoundOptions {
                ball_radius: c.cfg.radius.unwrap_or(2),
                cap: c.cap,
                ..LowerBoundOptions::default()
            };
            let r = lower_bound_audit(&c.space, &c.s, &c.constants, &opts)?;
            Ok(Outcome {
                passed: r.passed,
                payload: to_value(&r),
                ..Outcome::default()
            })
        }
        Command::XiScan | Command::ThetaScan => {
            let bounds = scan_bounds(c);
            let t = if cmd == Command::XiScan {
                xi_scan(&c.space, &bounds, &c.constants, c.shards)?
            } else {
                let hyp = c.cfg.require_hyperbolic.unwrap_or(false);
                theta_scan(&c.space, &bounds, hyp, &c.constants, c.shards)?
            };
            Ok(Outcome {
                passed: t.dedup_sound && t.rows.iter().all(|r| r.consistent != Some(false)),
                csv: Some(render::spectrum_csv(&t).map_err(usage)?),
                svg: Some(render::spectrum_svg(&t)),
                payload: to_value(&t),
                ..Outcome::default()
            })
        }
        Command::GrowthTight => {
            let r = growth_tight_experiment(c.depth(8), c.cap, c.shards)?;
            Ok(Outcome {
                passed: r.doubling_bound_holds && r.rows.iter().all(|x| x.image <= x.source),
                csv: Some(render::tight_csv(&r).map_err(usage)?),
                svg: Some(render::tight_svg(&r)),
                payload: to_value(&r),
                ..Outcome::default()
            })
        }
        Command::Audit => {
            let opts = PipelineOptions {
                pair_depth: 8,
                ball_radius: c.cfg.radius.unwrap_or(3),
                growth_depth: c.depth(8),
                cap: c.cap,
                shards: c.shards,
                ..PipelineOptions::default()
            };
            let r = full_pipeline_audit(&c.space, &c.s, &c.constants, &opts);
            Ok(Outcome {
                passed: r.passed,
                delta_n: r.separators.as_ref().map(|x| x.delta_n),
                payload: to_value(&r),
                ..Outcome::default()
            })
        }
        Command::Limit => {
            let templates = c
                .cfg
                .templates
                .as_deref()
                .ok_or_else(|| Failure::Usage("limit needs --templates".into()))?;
            let seq = HomomorphismSequence::from_templates(c.group(), &split_list(templates))?;
            let horizon = c.cfg.horizon.unwrap_or(32);
            let kernel = stable_kernel_scan(&seq, c.cfg.length.unwrap_or(4), horizon)?;
            let factoring = match &c.cfg.relations {
                Some(r) => Some(factoring_check(&seq, &split_list(r), horizon)?),
                None => None,
            };
            let continuity = match &c.cfg.limit_model {
                Some(m) => {
                    let lg = Group::new(m.parse()?)?;
                    let ls = match &c.cfg.limit_gens {
                        Some(t) => GeneratingSet::parse(&lg, t)?,
                        None => GeneratingSet::standard(&lg),
                    };
                    Some(growth_continuity_probe(&seq, Some((&lg, &ls)), c.depth(6), horizon, c.cap, c.shards)?)
                }
                None => None,
            };
            Ok(Outcome {
                passed: continuity.as_ref().is_none_or(|r| r.inequality_holds),
                payload: json!({ "kernel": kernel, "factoring": factoring, "continuity": continuity }),
                ..Outcome::default()
            })
        }
        Command::Sweep => {
            let r = surjection_sweep(c.cfg.cases.unwrap_or(50), c.depth(8), c.cfg.seed.unwrap_or(0), c.cap, c.shards)?;
            Ok(Outcome {
                passed: r.violations == 0,
                payload: to_value(&r),
                ..Outcome::default()
            })
        }
        Command::Wpd => {
            let params = WpdParams {
                epsilon: c.cfg.epsilon.unwrap_or(0),
                power: c.constants.d,
                seed: c.cfg.seed.unwrap_or(0),
                ..WpdParams::default()
            };
            let r = estimate_uniform_wpd_d(&c.space, &params)?;
            Ok(Outcome {
                passed: true,
                payload: json!({ "params": params, "estimate": r }),
                ..Outcome::default()
            })
        }
    }
}

fn write_or(path: Option<&std::path::Path>, text: &str, fallback: &mut dyn Write) -> std::io::Result<()> {
    match path {
        Some(p) => render::write_file(p, text),
        None => fallback.write_all(text.as_bytes()),
    }
}

/// Parses `args`, runs the command and writes outputs. Returns the exit status:
/// 0 when every asserted check passed, 2 when a check failed, 1 on usage or IO errors.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let start = Instant::now();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return code;
        }
    };
    let mut cfg = cli.config.clone();
    if let Some(path) = &cli.config.config {
        match RunConfig::load(path) {
            Ok(file) => cfg = cfg.overlay(&file),
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                return 1;
            }
        }
    }
    let ctx = match setup(&cfg) {
        Ok(c) => c,
        Err(Failure::Core(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            return 1;
        }
        Err(Failure::Usage(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            return 1;
        }
    };
    let ledger = ctx.constants.ledger();
    let (outcome, error, code) = match dispatch(cli.command, &ctx) {
        Ok(o) => {
            let code = if o.passed { 0 } else { 2 };
            (o, None, code)
        }
        Err(Failure::Core(e)) if e.is_assertion() => (Outcome::default(), Some(e.to_string()), 2),
        Err(Failure::Core(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            return 1;
        }
        Err(Failure::Usage(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            return 1;
        }
    };
    let record = ResultRecord {
        schema_version: SCHEMA_VERSION,
        command: cli.command.name().into(),
        config: cfg.clone(),
        ledger: Ledger {
            constants: ledger,
            delta_n: outcome.delta_n,
        },
        passed: code == 0,
        error: error.clone(),
        payload: outcome.payload,
        version: env!("CARGO_PKG_VERSION").into(),
        runtime: Runtime {
            shards: cfg.shards(),
            wall_ms: start.elapsed().as_millis() as u64,
        },
    };
    let line = record.to_line() + "\n";
    let mut io = write_or(cfg.out.as_deref(), &line, stdout);
    if let (Some(p), Some(csv)) = (&cfg.csv, &outcome.csv) {
        io = io.and(render::write_file(p, csv));
    }
    if let (Some(p), Some(svg)) = (&cfg.plot, &outcome.svg) {
        io = io.and(render::write_file(p, svg));
    }
    if let Err(e) = io {
        let _ = writeln!(stderr, "error: {e}");
        return 1;
    }
    if let Some(e) = error {
        let _ = writeln!(stderr, "{}: {e}", cli.command.name());
    }
    code
}
