//! Command-line front end. Every invocation is turned into `key=value`
//! lines, validated by [`parse_run_config`], then executed on a rayon pool
//! of `workers` threads.
//!
//! Exit codes: 0 success, 1 property violation, 2 usage or input error,
//! 3 search truncated or attempts exhausted.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::configuration::{Alphabet, WindowConfiguration};
use crate::field::{derive_seed, local_max_config, RandomField};
use crate::format::{
    decode_configuration, decode_packing, decode_plan, encode_configuration, encode_elements,
    encode_packing, encode_plan, FormatError, Meta, Report,
};
use crate::glue::{check_ones_apart, find_common_one, sample_witness_shift_config, StampGeometry};
use crate::group::{ball, ElementSet, Group, SymmetricSet};
use crate::packing::{glue_packings, greedy_saturate, merge_phi, PackingWindow, ScanOrder, Shape};
use crate::prox::{
    build_t_prime, check_eps_minimal, check_eps_proximal, faithfulness_check,
    obstruction_certificate, random_full_shift_config, sample_s_config, Distance, Faithfulness,
    Obstruction, ProximalPlan, Search,
};
use crate::run_config::{
    parse_elements, parse_run_config, parse_x, GroupVisitor, Operation, RunConfig, RunConfigError,
    ShapeKind,
};
use crate::witness::{
    build_plan, failure_bound, min_admissible_size, sample_witness_config,
    verify_witness_properties, BoundConstants, WitnessError, WitnessParams, WitnessPlan,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Violation = 1,
    Inconclusive = 3,
}

pub const USAGE_EXIT: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid run configuration:\n{}", list(.0))]
    Config(Vec<RunConfigError>),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error("{0}")]
    Run(String),
}

fn list(errors: &[RunConfigError]) -> String {
    errors
        .iter()
        .map(|e| format!("  {e}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn run_err(e: impl ToString) -> CliError {
    CliError::Run(e.to_string())
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: Status,
    pub stdout: String,
}

pub fn run_text(text: &str) -> Result<Outcome, CliError> {
    let cfg = parse_run_config(text).map_err(CliError::Config)?;
    execute(&cfg)
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(run_err)?;
    pool.install(|| match (cfg.op, cfg.group) {
        (Operation::BoundEval, None) => bound_eval_plain(cfg),
        (_, Some(spec)) => spec.visit(Exec { cfg }),
        (_, None) => Err(run_err("no group given")),
    })
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn sidecar(out: &Path, ext: &str) -> PathBuf {
    let mut name = out.as_os_str().to_os_string();
    name.push(".");
    name.push(ext);
    PathBuf::from(name)
}

fn format_err(path: &Path) -> impl FnOnce(FormatError) -> CliError + '_ {
    move |source| CliError::Format {
        path: path.to_path_buf(),
        source,
    }
}

fn distance_text(d: &Distance) -> String {
    match d {
        Distance::Exact(k) => format!("1/{k}"),
        Distance::Within(depth) => format!("<=1/{}", depth + 1),
    }
}

fn bound_report(r: &mut Report, c: &BoundConstants, y_size: u64, y_pow_k: f64) -> Result<(), CliError> {
    let b = failure_bound(c, y_size, y_pow_k).map_err(run_err)?;
    r.push("x_size", c.x_size)
        .push("k", c.k)
        .push("c_exp", c.c_exp)
        .push("c_den", c.c_den)
        .push("y_size", y_size)
        .push("y_pow_k_size", format!("{y_pow_k:?}"))
        .push("bound_exact", format!("{:e}", b.exact()))
        .push("bound_loose", format!("{:e}", b.loose()))
        .push("bound_exact_ln", format!("{:?}", b.exact_ln))
        .push("bound_loose_ln", format!("{:?}", b.loose_ln))
        .push("admissible", b.admissible())
        .push("min_admissible_size", min_admissible_size(c));
    Ok(())
}

fn bound_eval_plain(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let c = BoundConstants {
        x_size: cfg.x_size.expect("validated") as usize,
        k: cfg.k,
        c_exp: 2 * cfg.k,
        c_den: cfg.c_den.expect("validated"),
    };
    let y = cfg.y_size.expect("validated");
    let mut r = Report::new("bound-eval");
    bound_report(&mut r, &c, y, cfg.y_pow_k_size.unwrap_or((y as f64).powi(cfg.k as i32)))?;
    finish(cfg, Status::Success, r.encode())
}

/// Primary output goes to `out` when set, otherwise to stdout.
fn finish(cfg: &RunConfig, status: Status, text: String) -> Result<Outcome, CliError> {
    match &cfg.out {
        Some(path) => {
            write(path, &text)?;
            Ok(Outcome {
                status,
                stdout: String::new(),
            })
        }
        None => Ok(Outcome { status, stdout: text }),
    }
}

struct Exec<'a> {
    cfg: &'a RunConfig,
}

impl GroupVisitor for Exec<'_> {
    type Output = Result<Outcome, CliError>;

    fn visit<G: Group>(self, group: &G) -> Result<Outcome, CliError> {
        let run = Runner { cfg: self.cfg, group };
        match self.cfg.op {
            Operation::SampleField => run.sample_field(),
            Operation::WitnessSample => run.witness_sample(),
            Operation::WitnessVerify => run.witness_verify(),
            Operation::PackSaturate => run.pack_saturate(),
            Operation::PackGlue => run.pack_glue(),
            Operation::PackMerge => run.pack_merge(),
            Operation::GlueSample => run.glue_sample(),
            Operation::GlueVerify => run.glue_verify(),
            Operation::ProxCheck => run.prox_search(true),
            Operation::ProxMinimal => run.prox_search(false),
            Operation::ProxTprime => run.prox_tprime(),
            Operation::ProxObstruct => run.prox_obstruct(),
            Operation::ProxFaithful => run.prox_faithful(),
            Operation::BoundEval => run.bound_eval(),
        }
    }
}

struct Runner<'a, G: Group> {
    cfg: &'a RunConfig,
    group: &'a G,
}

impl<G: Group> Runner<'_, G> {
    fn x(&self) -> SymmetricSet<G::Element> {
        match &self.cfg.x {
            Some(text) => parse_x(self.group, text).expect("validated"),
            None => ball(self.group, self.cfg.x_ball),
        }
    }

    fn elements(&self, text: &Option<String>) -> ElementSet<G::Element> {
        let items = parse_elements(self.group, text.as_deref().unwrap_or("")).expect("validated");
        ElementSet::from_iter_in(self.group, items)
    }

    fn element(&self) -> G::Element {
        self.elements(&self.cfg.g).iter().next().expect("validated").clone()
    }

    fn window(&self, default: usize) -> ElementSet<G::Element> {
        ball(self.group, self.cfg.window_radius.unwrap_or(default)).into_set()
    }

    fn params(&self) -> Result<WitnessParams<G::Element>, CliError> {
        let x = self.x();
        let base = WitnessParams::new(self.group, x.clone(), self.cfg.k).map_err(run_err)?;
        WitnessParams::with_constants(
            self.group,
            x,
            self.cfg.k,
            self.cfg.c_den.unwrap_or(base.c_den()),
            self.cfg.frac.unwrap_or(base.frac()),
        )
        .map_err(run_err)
    }

    fn config(&self, path: &Option<PathBuf>) -> Result<WindowConfiguration<G::Element>, CliError> {
        let path = path.as_deref().expect("validated");
        decode_configuration(self.group, &read(path)?)
            .map(|(c, _)| c)
            .map_err(format_err(path))
    }

    fn packing(&self, path: &Option<PathBuf>) -> Result<PackingWindow<G::Element>, CliError> {
        let path = path.as_deref().expect("validated");
        decode_packing(self.group, &read(path)?)
            .map(|(p, _)| p)
            .map_err(format_err(path))
    }

    fn plan(&self) -> Result<WitnessPlan<G::Element>, CliError> {
        let path = self.cfg.plan.as_deref().expect("validated");
        decode_plan(self.group, &read(path)?).map_err(format_err(path))
    }

    fn order(&self) -> ScanOrder {
        if self.cfg.shuffle {
            ScanOrder::Shuffled(self.cfg.seed)
        } else {
            ScanOrder::Canonical
        }
    }

    fn config_text(&self, c: &WindowConfiguration<G::Element>, meta: Meta) -> String {
        encode_configuration(self.group, c, &meta)
    }

    fn sample_field(&self) -> Result<Outcome, CliError> {
        let x = self.x();
        let window = self.window(4);
        let c = local_max_config(self.group, &RandomField::new(self.cfg.seed), &x, &window);
        let meta = vec![
            ("seed".into(), self.cfg.seed.to_string()),
            ("x".into(), encode_elements(self.group, &x)),
        ];
        finish(self.cfg, Status::Success, self.config_text(&c, meta))
    }

    fn witness_sample(&self) -> Result<Outcome, CliError> {
        let cfg = self.cfg;
        let plan = build_plan(self.group, self.params()?, cfg.y1_size, cfg.switch_radius)
            .map_err(run_err)?;
        let out = cfg.out.as_deref().expect("validated");
        let mut r = Report::new("witness-sample");
        let gs = plan.switching_element().map_or("-".into(), |g| self.group.encode(g));
        r.push("group", self.group.label())
            .push("g_s", gs)
            .push("y1_size", plan.y1().len())
            .push("frac", plan.params().frac())
            .push("seed", cfg.seed)
            .push("max_attempts", cfg.max_attempts)
            .push("override_admissibility", cfg.override_admissibility);
        bound_report(
            &mut r,
            &plan.params().constants(),
            plan.y().len() as u64,
            plan.y_pow_k_size(),
        )?;
        write(&sidecar(out, "plan"), &encode_plan(self.group, &plan))?;
        let outcome = sample_witness_config(
            self.group,
            &plan,
            cfg.seed,
            cfg.max_attempts,
            cfg.override_admissibility,
        );
        let status = match outcome {
            Ok(s) => {
                r.push("attempts", s.attempts)
                    .push("field_seed", s.field_seed)
                    .push("ones", s.config.ones().count());
                let meta = vec![
                    ("seed".into(), cfg.seed.to_string()),
                    ("field_seed".into(), s.field_seed.to_string()),
                ];
                write(out, &self.config_text(&s.config, meta))?;
                Status::Success
            }
            Err(WitnessError::Exhausted(n)) => {
                r.push("attempts", n).push("result", "exhausted");
                Status::Inconclusive
            }
            Err(e) => return Err(run_err(e)),
        };
        write(&sidecar(out, "report"), &r.encode())?;
        Ok(Outcome {
            status,
            stdout: String::new(),
        })
    }

    fn witness_verify(&self) -> Result<Outcome, CliError> {
        let plan = self.plan()?;
        let s = self.config(&self.cfg.input)?;
        let w = verify_witness_properties(self.group, &s, &plan).map_err(run_err)?;
        let mut r = Report::new("witness-verify");
        r.push("close_pairs", w.close_ones.len())
            .push("uncovered_pairs", w.uncovered.len())
            .push("passes", w.passes());
        let enc = |g| self.group.encode(g);
        for (a, b) in &w.close_ones {
            r.push("close", format!("{} {}", enc(a), enc(b)));
        }
        for (g, h) in &w.uncovered {
            r.push("uncovered", format!("{} {}", enc(g), enc(h)));
        }
        let status = if w.passes() { Status::Success } else { Status::Violation };
        finish(self.cfg, status, r.encode())
    }

    fn packing_text(&self, p: &PackingWindow<G::Element>) -> String {
        encode_packing(self.group, p, &vec![])
    }

    fn pack_saturate(&self) -> Result<Outcome, CliError> {
        let shape = match (&self.cfg.shape, self.cfg.shape_kind) {
            (Some(_), _) => Shape::new("shape", self.elements(&self.cfg.shape)).map_err(run_err)?,
            (None, Some(kind)) => {
                let geom = StampGeometry::new(self.group, &self.plan()?).map_err(run_err)?;
                match kind {
                    ShapeKind::Coarse => geom.coarse().clone(),
                    ShapeKind::Fine => geom.fine().clone(),
                }
            }
            (None, None) => unreachable!("validated"),
        };
        let p = greedy_saturate(self.group, &self.window(4), &[shape], &[], self.order())
            .map_err(run_err)?;
        finish(self.cfg, Status::Success, self.packing_text(&p))
    }

    fn pack_glue(&self) -> Result<Outcome, CliError> {
        let p1 = self.packing(&self.cfg.input)?;
        let p2 = self.packing(&self.cfg.input2)?;
        let e1 = self.elements(&self.cfg.e1);
        let e2 = self.elements(&self.cfg.e2);
        let p = glue_packings(self.group, &p1, &p2, &e1, &e2, self.order()).map_err(run_err)?;
        finish(self.cfg, Status::Success, self.packing_text(&p))
    }

    fn pack_merge(&self) -> Result<Outcome, CliError> {
        let coarse = self.packing(&self.cfg.input)?;
        let fine = self.packing(&self.cfg.input2)?;
        let p = merge_phi(self.group, &coarse, &fine).map_err(run_err)?;
        finish(self.cfg, Status::Success, self.packing_text(&p))
    }

    fn glue_sample(&self) -> Result<Outcome, CliError> {
        let cfg = self.cfg;
        let plan = self.plan()?;
        let geom = StampGeometry::new(self.group, &plan).map_err(run_err)?;
        let s = self.config(&cfg.s_config)?;
        let seeds = cfg
            .seeds
            .unwrap_or((derive_seed(cfg.seed, 0), derive_seed(cfg.seed, 1)));
        let sample = sample_witness_shift_config(self.group, &geom, &s, seeds, &self.window(6))
            .map_err(run_err)?;
        if let Some(out) = &cfg.out {
            let mut r = Report::new("glue-sample");
            let coarse = sample.packing.blocks().filter(|(_, k)| *k == 0).count();
            r.push("seed_coarse", seeds.0)
                .push("seed_fine", seeds.1)
                .push("coarse_blocks", coarse)
                .push("fine_blocks", sample.packing.block_count() - coarse)
                .push("ones", sample.config.ones().count());
            write(&sidecar(out, "packing"), &self.packing_text(&sample.packing))?;
            write(&sidecar(out, "report"), &r.encode())?;
        }
        let meta = vec![
            ("seed_coarse".into(), seeds.0.to_string()),
            ("seed_fine".into(), seeds.1.to_string()),
        ];
        finish(cfg, Status::Success, self.config_text(&sample.config, meta))
    }

    fn glue_verify(&self) -> Result<Outcome, CliError> {
        let plan = self.plan()?;
        let t1 = self.config(&self.cfg.input)?;
        let t2 = self.config(&self.cfg.input2)?;
        let x = plan.params().x();
        let v1 = check_ones_apart(self.group, &t1, x);
        let v2 = check_ones_apart(self.group, &t2, x);
        let common = ElementSet::from_canonical(
            t1.window()
                .iter()
                .filter(|g| t2.window().contains(g))
                .cloned()
                .collect(),
        );
        let found = find_common_one(&t1, &t2, &common);
        let passes = v1.is_empty() && v2.is_empty() && found.is_some();
        let mut r = Report::new("glue-verify");
        r.push("apart_violations_1", v1.len())
            .push("apart_violations_2", v2.len())
            .push("common_one", found.map_or("-".into(), |g| self.group.encode(&g)))
            .push("passes", passes);
        let status = if passes { Status::Success } else { Status::Violation };
        finish(self.cfg, status, r.encode())
    }

    fn prox_search(&self, both: bool) -> Result<Outcome, CliError> {
        let cfg = self.cfg;
        let t1 = self.config(&cfg.input)?;
        let t2 = self.config(&cfg.input2)?;
        let m = cfg.epsilon_inv;
        let depth = cfg.depth.max(m);
        let found = if both {
            check_eps_proximal(self.group, &t1, &t2, m, cfg.search_radius, depth)
        } else {
            check_eps_minimal(self.group, &t1, &t2, m, cfg.search_radius, depth)
        }
        .map_err(run_err)?;
        let mut r = Report::new(if both { "prox-check" } else { "prox-minimal" });
        r.push("epsilon", format!("1/{m}"))
            .push("search_radius", cfg.search_radius)
            .push("depth", depth);
        let status = match found {
            Search::Found { g, distance } => {
                r.push("found", true)
                    .push("g", self.group.encode(&g))
                    .push("distance", distance_text(&distance));
                Status::Success
            }
            Search::NotFound { .. } => {
                r.push("found", false);
                Status::Inconclusive
            }
        };
        finish(cfg, status, r.encode())
    }

    fn prox_tprime(&self) -> Result<Outcome, CliError> {
        let cfg = self.cfg;
        let plan = ProximalPlan::full_shift(self.group, Alphabet::binary(), cfg.epsilon_inv)
            .map_err(run_err)?;
        let s = match &cfg.s_config {
            Some(_) => self.config(&cfg.s_config)?,
            None => {
                let forced = match &cfg.g {
                    Some(_) => self.element(),
                    None => self.group.identity(),
                };
                sample_s_config(self.group, &plan, &forced, cfg.extra, cfg.spread, cfg.seed)
            }
        };
        let t = match &cfg.input {
            Some(_) => self.config(&cfg.input)?,
            None => {
                let window = self.window(plan.v_radius() + plan.x_radius + 2);
                random_full_shift_config::<G>(&window, &Alphabet::binary(), derive_seed(cfg.seed, 1))
            }
        };
        let t_prime = build_t_prime(self.group, &plan, &s, &t).map_err(run_err)?;
        if let Some(out) = &cfg.out {
            let mut r = Report::new("prox-tprime");
            let z = match &plan.z {
                crate::prox::FiniteRegion::Ball(r) => format!("ball {r}"),
                crate::prox::FiniteRegion::Set(s) => format!("set {}", s.len()),
            };
            r.push("epsilon", format!("1/{}", cfg.epsilon_inv))
                .push("x_radius", plan.x_radius)
                .push("u_radius", plan.u_radius)
                .push("v_radius", plan.v_radius())
                .push("z", z)
                .push("patterns", plan.library.slots.len())
                .push("centers", s.ones().count());
            write(&sidecar(out, "s"), &self.config_text(&s, vec![]))?;
            write(&sidecar(out, "report"), &r.encode())?;
        }
        let meta = vec![("epsilon".into(), format!("1/{}", cfg.epsilon_inv))];
        finish(cfg, Status::Success, self.config_text(&t_prime, meta))
    }

    fn prox_obstruct(&self) -> Result<Outcome, CliError> {
        let g = self.element();
        let u = self.config(&self.cfg.input)?;
        let x = self.x();
        let res = obstruction_certificate(self.group, &g, &x, &u, self.cfg.conj_radius)
            .map_err(run_err)?;
        let mut r = Report::new("prox-obstruct");
        r.push("g", self.group.encode(&g))
            .push("conj_radius", self.cfg.conj_radius);
        let status = match res {
            Obstruction::Certificate { ones_checked } => {
                r.push("result", "certificate").push("ones_checked", ones_checked);
                Status::Success
            }
            Obstruction::Refutation { pair: (a, b) } => {
                r.push("result", "refutation").push(
                    "close_pair",
                    format!("{} {}", self.group.encode(&a), self.group.encode(&b)),
                );
                Status::Violation
            }
        };
        finish(self.cfg, status, r.encode())
    }

    fn prox_faithful(&self) -> Result<Outcome, CliError> {
        let g = self.element();
        let mut samples = vec![self.config(&self.cfg.input)?];
        if self.cfg.input2.is_some() {
            samples.push(self.config(&self.cfg.input2)?);
        }
        let res = faithfulness_check(self.group, &g, &samples).map_err(run_err)?;
        let mut r = Report::new("prox-faithful");
        r.push("g", self.group.encode(&g));
        let status = match res {
            Faithfulness::Moved { sample, site } => {
                r.push("result", "moved")
                    .push("sample", sample)
                    .push("site", self.group.encode(&site));
                Status::Success
            }
            Faithfulness::Inconclusive => {
                r.push("result", "inconclusive");
                Status::Inconclusive
            }
        };
        finish(self.cfg, status, r.encode())
    }

    fn bound_eval(&self) -> Result<Outcome, CliError> {
        let params = self.params()?;
        let mut c = params.constants();
        if let Some(n) = self.cfg.x_size {
            c.x_size = n as usize;
        }
        let y = self.cfg.y_size.expect("validated");
        let mut r = Report::new("bound-eval");
        r.push("group", self.group.label());
        bound_report(&mut r, &c, y, self.cfg.y_pow_k_size.unwrap_or((y as f64).powi(c.k as i32)))?;
        finish(self.cfg, Status::Success, r.encode())
    }
}

macro_rules! common_flags {
    ($($field:ident: $help:literal),* $(,)?) => {
        /// Run parameters; each maps to the run-config key of the same name.
        #[derive(Debug, Clone, Default, Args)]
        pub struct Common {
            $(
                #[arg(long, global = true, allow_hyphen_values = true, help = $help)]
                pub $field: Option<String>,
            )*
            /// Sample even when the failure bound is not below 1.
            #[arg(long, global = true)]
            pub override_admissibility: bool,
            /// Scan centers in a seeded random order instead of canonical order.
            #[arg(long, global = true)]
            pub shuffle: bool,
        }

        impl Common {
            fn lines(&self) -> Vec<(&'static str, String)> {
                let mut out = Vec::new();
                $(
                    if let Some(v) = &self.$field {
                        out.push((stringify!($field), v.clone()));
                    }
                )*
                if self.override_admissibility {
                    out.push(("override_admissibility", "true".into()));
                }
                if self.shuffle {
                    out.push(("shuffle", "true".into()));
                }
                out
            }
        }
    };
}

common_flags! {
    group: "Group backend: Z, Zd, H3, F1..F4, L2",
    seed: "Base seed",
    seeds: "Two packing seeds `a,b`",
    x_ball: "X = ball(r)",
    x: "Explicit X, space-separated elements",
    k: "Power k of Y",
    c_den: "Bound denominator constant",
    frac: "Distancing fraction denominator",
    y1_size: "Floor on |Y1|",
    switch_radius: "Search radius for the switching element",
    window_radius: "Window = ball(r)",
    epsilon: "Epsilon as 1/m",
    epsilon_inv: "Epsilon given by m",
    max_attempts: "Attempt cap for witness sampling",
    shape: "Block shape, space-separated elements",
    shape_kind: "coarse or fine shape from --plan",
    e1: "Region E1 for gluing",
    e2: "Region E2 for gluing",
    search_radius: "Radius searched for proximality witnesses",
    depth: "Enumeration depth for distances",
    conj_radius: "Conjugator radius for the obstruction certificate",
    g: "Group element",
    extra: "Extra random centers of s",
    spread: "Radius the extra centers are drawn from",
    x_size: "|X| for bound evaluation",
    y_size: "|Y| for bound evaluation",
    y_pow_k_size: "|Y^k| for bound evaluation",
    plan: "Witness plan file",
    input: "First input file",
    input2: "Second input file",
    s_config: "Configuration s",
    out: "Output file (stdout if absent)",
    workers: "Worker threads",
}

#[derive(Debug, Parser)]
#[command(name = "proxshift", version, about = "Witness configurations, packings and proximal approximations on finitely generated groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Local-maximum configuration of a keyed random field
    SampleField,
    /// Witness plans and configurations
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// Saturated packings
    #[command(subcommand)]
    Pack(PackCmd),
    /// Glued witness-shift samples
    #[command(subcommand)]
    Glue(GlueCmd),
    /// Proximality searches and constructions
    #[command(subcommand)]
    Prox(ProxCmd),
    /// Failure bound
    #[command(subcommand)]
    Bound(BoundCmd),
    /// Execute a key=value run file; flags override its keys
    Run { config: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum WitnessCmd {
    /// Build a plan and sample a witness configuration
    Sample,
    /// Check X-apartness and pair coverage of a configuration
    Verify,
}

#[derive(Debug, Subcommand)]
pub enum PackCmd {
    /// Greedy saturated packing of a ball
    Saturate,
    /// Glue two packings along E1 and E2
    Glue,
    /// Merge a coarse and a fine packing
    Merge,
}

#[derive(Debug, Subcommand)]
pub enum GlueCmd {
    /// Sample a configuration from packings stamped with s
    Sample,
    /// Check apartness and a common 1 of two samples
    Verify,
}

#[derive(Debug, Subcommand)]
pub enum ProxCmd {
    /// Search for g with d(g t1, g t2) < epsilon
    Check,
    /// Search for g with d(g t1, t2) < epsilon
    Minimal,
    /// Build the proximal approximation t' of a full-shift point
    Tprime,
    /// Certificate that u and g u share no 1
    Obstruct,
    /// Look for a sample moved by g
    Faithful,
}

#[derive(Debug, Subcommand)]
pub enum BoundCmd {
    /// Evaluate the failure bound
    Eval,
}

impl Command {
    fn op(&self) -> Option<Operation> {
        Some(match self {
            Command::SampleField => Operation::SampleField,
            Command::Witness(WitnessCmd::Sample) => Operation::WitnessSample,
            Command::Witness(WitnessCmd::Verify) => Operation::WitnessVerify,
            Command::Pack(PackCmd::Saturate) => Operation::PackSaturate,
            Command::Pack(PackCmd::Glue) => Operation::PackGlue,
            Command::Pack(PackCmd::Merge) => Operation::PackMerge,
            Command::Glue(GlueCmd::Sample) => Operation::GlueSample,
            Command::Glue(GlueCmd::Verify) => Operation::GlueVerify,
            Command::Prox(ProxCmd::Check) => Operation::ProxCheck,
            Command::Prox(ProxCmd::Minimal) => Operation::ProxMinimal,
            Command::Prox(ProxCmd::Tprime) => Operation::ProxTprime,
            Command::Prox(ProxCmd::Obstruct) => Operation::ProxObstruct,
            Command::Prox(ProxCmd::Faithful) => Operation::ProxFaithful,
            Command::Bound(BoundCmd::Eval) => Operation::BoundEval,
            Command::Run { .. } => return None,
        })
    }
}

/// Run-config text for a parsed command line.
pub fn config_text(cli: &Cli) -> Result<String, CliError> {
    let flags = cli.common.lines();
    let mut text = String::new();
    match (&cli.command, cli.command.op()) {
        (Command::Run { config }, _) => {
            for line in read(config)?.lines() {
                let key = line.split_once('=').map(|(k, _)| k.trim().replace('-', "_"));
                if !matches!(key, Some(k) if flags.iter().any(|(f, _)| *f == k)) {
                    text.push_str(line);
                    text.push('\n');
                }
            }
        }
        (_, Some(op)) => text.push_str(&format!("op={}\n", op.id())),
        (_, None) => unreachable!(),
    }
    for (k, v) in flags {
        text.push_str(&format!("{k}={v}\n"));
    }
    Ok(text)
}

/// Parses `args`, runs, prints, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { USAGE_EXIT } else { 0 };
        }
    };
    match config_text(&cli).and_then(|t| run_text(&t)) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            outcome.status as i32
        }
        Err(e) => {
            eprintln!("error: {e}");
            USAGE_EXIT
        }
    }
}
