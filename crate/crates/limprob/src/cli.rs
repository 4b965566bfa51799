//! Command-line surface: machine-readable access to every subsystem.
//!
//! Exit codes: 0 success, 1 computational failure (budget exhaustion,
//! non-convergence, i/o), 2 usage. Output is JSON by default; `sweep`
//! defaults to CSV. All floats carry 12 significant digits and repeated runs
//! with identical flags and seeds produce byte-identical output.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cache;
use crate::error::{Error, Result};
use crate::fragment;
use crate::hyper;
use crate::intervals;
use crate::jsonout::JVal;
use crate::limits;
use crate::model::{ModelKind, ModelParams};
use crate::montecarlo::{self, SampleConfig};
use crate::unicycle;

#[derive(Debug, Parser)]
#[command(
    name = "limprob",
    version,
    about = "Interval structure of limiting probabilities for sparse random graphs and d-uniform hypergraphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the output document here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; `csv` is accepted only by `sweep` and defaults there.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for sweeps and simulations (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Graph,
    Hyper,
}

#[derive(Debug, Args)]
pub struct ModelFlags {
    /// Model family.
    #[arg(long, value_enum)]
    pub model: ModelArg,
    /// Edge arity for the hypergraph model (required with --model hyper).
    #[arg(long)]
    pub d: Option<u32>,
}

impl ModelFlags {
    pub fn kind(&self) -> Result<ModelKind> {
        match (self.model, self.d) {
            (ModelArg::Graph, None) => Ok(ModelKind::Graph),
            (ModelArg::Graph, Some(_)) => {
                Err(Error::Usage("--d applies only to --model hyper".into()))
            }
            (ModelArg::Hyper, Some(d)) if d >= 3 => Ok(ModelKind::Hypergraph { d }),
            (ModelArg::Hyper, Some(d)) => {
                Err(Error::Usage(format!("--d must be >= 3, got {d}")))
            }
            (ModelArg::Hyper, None) => Err(Error::Usage("--model hyper requires --d".into())),
        }
    }

    fn label(&self) -> &'static str {
        match self.model {
            ModelArg::Graph => "graph",
            ModelArg::Hyper => "hyper",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Critical density c0 where the limiting acyclic probability is 1/2.
    C0 {
        #[command(flatten)]
        model: ModelFlags,
    },
    /// Enumerate unicyclic shapes (optionally fragment shapes) with exact
    /// automorphism counts.
    Enumerate {
        #[command(flatten)]
        model: ModelFlags,
        /// Report only the shapes of exactly this size.
        #[arg(long, conflicts_with = "max_size")]
        size: Option<u32>,
        /// Largest size (edge count) to enumerate.
        #[arg(long)]
        max_size: Option<u32>,
        /// Enumerate multi-component fragment shapes instead of connected
        /// unicycles.
        #[arg(long)]
        fragments: bool,
        /// Cache directory override.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Interval decomposition of the closure of limiting probabilities at a
    /// subcritical density.
    Intervals {
        #[command(flatten)]
        model: ModelFlags,
        /// Edge-density parameter.
        #[arg(long)]
        c: f64,
        /// Enumeration budget; defaults to the certified depth, capped.
        #[arg(long)]
        max_size: Option<u32>,
    },
    /// Interval structure across a density range (CSV by default).
    Sweep {
        #[command(flatten)]
        model: ModelFlags,
        /// Lowest density in the grid.
        #[arg(long)]
        from: f64,
        /// Highest density in the grid (strictly below criticality).
        #[arg(long)]
        to: f64,
        /// Number of grid rows, endpoints included.
        #[arg(long, default_value_t = 10)]
        steps: u32,
        #[arg(long)]
        max_size: Option<u32>,
    },
    /// Monte Carlo validation of the analytic predictions.
    Simulate {
        #[command(flatten)]
        model: ModelFlags,
        /// Edge-density parameter.
        #[arg(long)]
        c: f64,
        /// Vertex count (default 100000 for graphs, 10000 for hypergraphs).
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value_t = 2000)]
        trials: u32,
        /// Master seed; each trial derives its own stream from it.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Largest cycle length tracked exactly.
        #[arg(long)]
        max_cycle_len: Option<u32>,
        /// Write a per-trial CSV dump to this file.
        #[arg(long)]
        dump_trials: Option<PathBuf>,
    },
    /// Find (k, a) so that "at most a cycles of length at most k" has
    /// limiting probability within eps of the target.
    Approx {
        #[command(flatten)]
        model: ModelFlags,
        /// Edge-density parameter, at or above criticality.
        #[arg(long)]
        c: f64,
        /// Target probability in (0,1).
        #[arg(long)]
        p: f64,
        /// Tolerance on the achieved probability.
        #[arg(long, default_value_t = 0.02)]
        eps: f64,
    },
    /// Verify the exact enumeration identities and automorphism bounds.
    Verify {
        #[command(flatten)]
        model: ModelFlags,
        #[arg(long)]
        max_size: Option<u32>,
    },
    /// Manage on-disk enumeration caches.
    Cache {
        #[arg(value_enum)]
        action: CacheAction,
        #[command(flatten)]
        model: ModelFlags,
        /// Table depth the cache file covers.
        #[arg(long)]
        max_size: u32,
        /// Cache directory override.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CacheAction {
    Warm,
    Clear,
}

/// Hard enumeration caps guarding combinatorial explosion.
pub fn hard_cap(kind: ModelKind) -> u32 {
    match kind {
        ModelKind::Graph => unicycle::DEFAULT_GRAPH_BUDGET,
        ModelKind::Hypergraph { d } => match d {
            3 => 10,
            4 => 7,
            _ => 5,
        },
    }
}

fn default_enum_size(kind: ModelKind) -> u32 {
    match kind {
        ModelKind::Graph => 8,
        ModelKind::Hypergraph { d } => hyper::default_hyper_budget(d).min(6),
    }
}

fn interval_budget(kind: ModelKind, requested: Option<u32>) -> Result<u32> {
    let cap = hard_cap(kind);
    match requested {
        Some(r) if r > cap => Err(Error::Budget { requested: r, cap }),
        Some(r) => Ok(r),
        None => Ok(cap),
    }
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits 2 on usage errors and 0 for --help/--version.
            e.exit();
        }
    };
    if let Some(t) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match execute(&cli) {
        Ok((doc, code)) => {
            let payload = match &doc {
                Output::Json(v) => format!("{v}\n"),
                Output::Csv(s) => s.clone(),
            };
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, payload) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 1;
                }
            } else {
                print!("{payload}");
            }
            code
        }
        Err(Error::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub enum Output {
    Json(JVal),
    Csv(String),
}

type Document = (Output, i32);

fn ok(doc: JVal) -> Result<Document> {
    Ok((Output::Json(doc), 0))
}

fn intervals_json(label: &str, d: Option<u32>, rep: &intervals::GapReport) -> JVal {
    let pairs = |xs: &[(f64, f64)]| {
        JVal::Arr(
            xs.iter()
                .map(|&(a, b)| JVal::Arr(vec![JVal::Float(a), JVal::Float(b)]))
                .collect(),
        )
    };
    let mut fields = vec![
        ("model", JVal::str(label)),
        ("c", JVal::Float(rep.c)),
        ("certified", JVal::Bool(rep.certified)),
        ("interval_count", JVal::UInt(rep.interval_count as u64)),
        ("intervals", pairs(&rep.intervals)),
        ("gaps", pairs(&rep.gaps)),
        (
            "theoretical_gap",
            rep.theoretical_gap
                .map_or(JVal::Null, |(a, b)| {
                    JVal::Arr(vec![JVal::Float(a), JVal::Float(b)])
                }),
        ),
        ("uncertainty_radius", JVal::Float(rep.uncertainty_radius)),
    ];
    if let Some(d) = d {
        fields.insert(1, ("d", JVal::UInt(d as u64)));
    }
    JVal::obj(fields)
}

pub fn execute(cli: &Cli) -> Result<Document> {
    if matches!(cli.format, Some(Format::Csv)) && !matches!(cli.command, Command::Sweep { .. }) {
        return Err(Error::Usage("--format csv is only available for sweep".into()));
    }
    match &cli.command {
        Command::C0 { model } => {
            let kind = model.kind()?;
            let c0 = limits::solve_c0(kind);
            let residual =
                (limits::acyclic_probability(&ModelParams { kind, c: c0 })? - 0.5).abs();
            let mut fields = vec![
                ("model", JVal::str(model.label())),
                ("c0", JVal::Float(c0)),
                ("residual", JVal::Float(residual)),
            ];
            if let ModelKind::Hypergraph { d } = kind {
                fields.insert(1, ("d", JVal::UInt(d as u64)));
                fields.push(("ratio", JVal::Float(c0 / kind.criticality())));
            }
            ok(JVal::obj(fields))
        }
        Command::Enumerate {
            model,
            size,
            max_size,
            fragments,
            cache_dir,
        } => {
            let kind = model.kind()?;
            let cap = hard_cap(kind);
            let max_size = size
                .or(*max_size)
                .unwrap_or_else(|| default_enum_size(kind));
            if max_size > cap {
                return Err(Error::Budget {
                    requested: max_size,
                    cap,
                });
            }
            let dir = cache_dir.clone().unwrap_or_else(cache::default_cache_dir);
            let (classes, source) = cache::classes_cached(&dir, kind, max_size, cap)?;
            let mut shapes: Vec<fragment::ComponentClass> = if *fragments {
                fragment::enumerate_fragments(&classes, max_size)?
                    .into_iter()
                    .map(|f| fragment::ComponentClass {
                        code: f.code,
                        size: f.size,
                        aut: f.aut,
                    })
                    .collect()
            } else {
                classes
            };
            if let Some(exact) = size {
                shapes.retain(|s| s.size == *exact);
            }
            let mut counts: std::collections::BTreeMap<u32, u64> = Default::default();
            for s in &shapes {
                *counts.entry(s.size).or_insert(0) += 1;
            }
            let mut fields = vec![
                ("model", JVal::str(model.label())),
                ("max_size", JVal::UInt(max_size as u64)),
                ("fragments", JVal::Bool(*fragments)),
                ("source", JVal::str(source.as_str())),
                (
                    "counts",
                    JVal::Obj(
                        counts
                            .iter()
                            .map(|(k, v)| (k.to_string(), JVal::UInt(*v)))
                            .collect(),
                    ),
                ),
                (
                    "shapes",
                    JVal::Arr(
                        shapes
                            .iter()
                            .map(|s| {
                                JVal::obj(vec![
                                    ("code", JVal::str(s.code.clone())),
                                    ("size", JVal::UInt(s.size as u64)),
                                    ("aut", JVal::str(s.aut.to_string())),
                                ])
                            })
                            .collect(),
                    ),
                ),
            ];
            if let ModelKind::Hypergraph { d } = kind {
                fields.insert(1, ("d", JVal::UInt(d as u64)));
            }
            ok(JVal::obj(fields))
        }
        Command::Intervals { model, c, max_size } => {
            let kind = model.kind()?;
            let params = ModelParams::new(kind, *c).map_err(usage)?;
            if !params.is_subcritical() {
                return Err(Error::Usage(format!(
                    "intervals requires subcritical c (c < {}), got {c}",
                    kind.criticality()
                )));
            }
            let rep = intervals::gap_report(&params, interval_budget(kind, *max_size)?)?;
            let d = match kind {
                ModelKind::Hypergraph { d } => Some(d),
                ModelKind::Graph => None,
            };
            ok(intervals_json(model.label(), d, &rep))
        }
        Command::Sweep {
            model,
            from,
            to,
            steps,
            max_size,
        } => {
            let kind = model.kind()?;
            if from.is_nan() || *from <= 0.0 || to < from || *to >= kind.criticality() {
                return Err(Error::Usage(format!(
                    "sweep range must satisfy 0 < from <= to < {}, got [{from}, {to}]",
                    kind.criticality()
                )));
            }
            let rows =
                intervals::sweep_intervals(kind, *from, *to, *steps, interval_budget(kind, *max_size)?)?;
            match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => Ok((Output::Csv(intervals::sweep_to_csv(&rows)), 0)),
                Format::Json => {
                    let rows = rows
                        .iter()
                        .map(|r| {
                            JVal::obj(vec![
                                ("c", JVal::Float(r.c)),
                                ("interval_count", JVal::UInt(r.interval_count as u64)),
                                ("certified", JVal::Bool(r.certified)),
                                (
                                    "gaps",
                                    JVal::Arr(
                                        r.gaps
                                            .iter()
                                            .map(|&(a, b)| {
                                                JVal::Arr(vec![JVal::Float(a), JVal::Float(b)])
                                            })
                                            .collect(),
                                    ),
                                ),
                                ("uncertainty_radius", JVal::Float(r.uncertainty_radius)),
                            ])
                        })
                        .collect();
                    ok(JVal::obj(vec![
                        ("model", JVal::str(model.label())),
                        ("rows", JVal::Arr(rows)),
                    ]))
                }
            }
        }
        Command::Simulate {
            model,
            c,
            n,
            trials,
            seed,
            max_cycle_len,
            dump_trials,
        } => {
            let kind = model.kind()?;
            let params = ModelParams::new(kind, *c).map_err(usage)?;
            let n = n.unwrap_or(match kind {
                ModelKind::Graph => 100_000,
                ModelKind::Hypergraph { .. } => 10_000,
            });
            let mut cfg = SampleConfig::new(params, n, *trials, *seed).map_err(usage)?;
            if let Some(mcl) = max_cycle_len {
                cfg = cfg.with_max_cycle_len(*mcl).map_err(usage)?;
            }
            cfg.keep_trial_records = dump_trials.is_some();
            let result = montecarlo::run_experiment(&cfg)?;
            if let Some(path) = dump_trials {
                let csv = result.trials_csv().expect("records were kept");
                std::fs::write(path, csv)?;
            }
            ok(result.to_json())
        }
        Command::Approx { model, c, p, eps } => {
            let kind = model.kind()?;
            let params = ModelParams::new(kind, *c).map_err(usage)?;
            if params.x() < 1.0 {
                return Err(Error::Usage(format!(
                    "approx requires c at or above criticality {}",
                    kind.criticality()
                )));
            }
            if p.is_nan() || *p <= 0.0 || *p >= 1.0 {
                return Err(Error::Usage(format!("--p must lie in (0,1), got {p}")));
            }
            if eps.is_nan() || *eps <= 0.0 {
                return Err(Error::Usage(format!("--eps must be positive, got {eps}")));
            }
            let r = limits::fo_approximation(&params, *p, *eps)?;
            ok(JVal::obj(vec![
                ("model", JVal::str(model.label())),
                ("c", JVal::Float(*c)),
                ("p", JVal::Float(*p)),
                ("eps", JVal::Float(*eps)),
                ("k", JVal::UInt(r.k as u64)),
                ("a", JVal::UInt(r.a)),
                ("mu", JVal::Float(r.mu)),
                ("achieved", JVal::Float(r.achieved)),
                ("error", JVal::Float(r.error)),
                ("certified", JVal::Bool(r.certified)),
            ]))
        }
        Command::Verify { model, max_size } => {
            let kind = model.kind()?;
            let (doc, all_pass) = verify_document(model, kind, *max_size)?;
            Ok((Output::Json(doc), if all_pass { 0 } else { 1 }))
        }
        Command::Cache {
            action,
            model,
            max_size,
            cache_dir,
        } => {
            let kind = model.kind()?;
            let cap = hard_cap(kind);
            if *max_size > cap {
                return Err(Error::Budget {
                    requested: *max_size,
                    cap,
                });
            }
            let dir = cache_dir.clone().unwrap_or_else(cache::default_cache_dir);
            let status = match action {
                CacheAction::Warm => match cache::warm(&dir, kind, *max_size, cap)? {
                    cache::Source::Cache => "cached",
                    cache::Source::Computed => "computed",
                },
                CacheAction::Clear => {
                    if cache::clear(&dir, kind, *max_size)? {
                        "cleared"
                    } else {
                        "absent"
                    }
                }
            };
            ok(JVal::obj(vec![
                (
                    "action",
                    JVal::str(match action {
                        CacheAction::Warm => "warm",
                        CacheAction::Clear => "clear",
                    }),
                ),
                ("model", JVal::str(model.label())),
                ("max_size", JVal::UInt(*max_size as u64)),
                ("status", JVal::str(status)),
                ("dir", JVal::str(dir.display().to_string())),
            ]))
        }
    }
}

fn usage(e: Error) -> Error {
    match e {
        Error::Domain(msg) => Error::Usage(msg),
        other => other,
    }
}

fn verify_document(
    model: &ModelFlags,
    kind: ModelKind,
    max_size: Option<u32>,
) -> Result<(JVal, bool)> {
    let mut checks: Vec<JVal> = Vec::new();
    let mut all_pass = true;
    let mut push = |name: String, k: u32, expected: String, actual: String, pass: bool| {
        checks.push(JVal::obj(vec![
            ("name", JVal::str(name)),
            ("k", JVal::UInt(k as u64)),
            ("expected", JVal::str(expected)),
            ("actual", JVal::str(actual)),
            ("pass", JVal::Bool(pass)),
        ]));
        pass
    };
    match kind {
        ModelKind::Graph => {
            let max = max_size.unwrap_or(10).min(hard_cap(kind));
            for k in 4..=max {
                let rep = unicycle::verify_graph_families(k, hard_cap(kind))?;
                all_pass &= push(
                    "cycle_path_family".into(),
                    k,
                    rep.c_expected.to_string(),
                    rep.c_sum.to_string(),
                    rep.c_sum == rep.c_expected,
                );
                all_pass &= push(
                    "triangle_paths_family".into(),
                    k,
                    rep.t_expected.to_string(),
                    rep.t_sum.to_string(),
                    rep.t_sum == rep.t_expected,
                );
                all_pass &= push(
                    "inverse_aut_lower_bound".into(),
                    k,
                    format!(">= {}", rep.inverse_aut_lower),
                    rep.inverse_aut.to_string(),
                    rep.inverse_aut >= rep.inverse_aut_lower,
                );
            }
        }
        ModelKind::Hypergraph { d } => {
            let max = max_size
                .unwrap_or_else(|| hyper::default_hyper_budget(d))
                .min(hard_cap(kind));
            for k in 4..=max {
                let rep = hyper::verify_family_sums(d, k)?;
                for (name, sum, expected) in [
                    ("triangle_paths_family", &rep.t_sum, &rep.t_expected),
                    ("two_cycle_paths_family", &rep.b_sum, &rep.b_expected),
                    ("cycle_path_family", &rep.o_sum, &rep.o_expected),
                ] {
                    all_pass &= push(
                        name.into(),
                        k,
                        expected.to_string(),
                        sum.to_string(),
                        sum == expected,
                    );
                }
            }
            let (max_ratio, attained) = hyper::verify_aut_bound(d, max, hard_cap(kind))?;
            let q = num_rational::BigRational::new(
                num_bigint::BigInt::from((d - 2) * (d - 2)),
                num_bigint::BigInt::from((d - 1) * (d - 1)),
            );
            let pass = max_ratio <= q;
            all_pass &= push(
                "aut_ratio_bound".into(),
                max,
                format!("<= {q}"),
                format!("{max_ratio} attained by {}", attained.join(" ")),
                pass,
            );
        }
    }
    let mut fields = vec![
        ("model", JVal::str(model.label())),
        ("checks", JVal::Arr(checks)),
        ("all_pass", JVal::Bool(all_pass)),
    ];
    if let ModelKind::Hypergraph { d } = kind {
        fields.insert(1, ("d", JVal::UInt(d as u64)));
    }
    Ok((JVal::obj(fields), all_pass))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("limprob").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn parses_basic_commands() {
        let cli = parse(&["c0", "--model", "graph"]);
        assert!(matches!(cli.command, Command::C0 { .. }));
        let cli = parse(&["intervals", "--model", "hyper", "--d", "3", "--c", "0.5"]);
        match &cli.command {
            Command::Intervals { model, c, .. } => {
                assert_eq!(model.kind().unwrap(), ModelKind::Hypergraph { d: 3 });
                assert_eq!(*c, 0.5);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_flags() {
        assert!(Cli::try_parse_from(["limprob", "c0", "--model", "graph", "--bogus"]).is_err());
        assert!(Cli::try_parse_from(["limprob", "c0", "--model", "tree"]).is_err());
    }

    #[test]
    fn hyper_requires_d() {
        let cli = parse(&["c0", "--model", "hyper"]);
        match &cli.command {
            Command::C0 { model } => assert!(matches!(model.kind(), Err(Error::Usage(_)))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn supercritical_intervals_is_usage_error() {
        let cli = parse(&["intervals", "--model", "graph", "--c", "1.2"]);
        assert!(matches!(execute(&cli), Err(Error::Usage(_))));
    }

    #[test]
    fn csv_format_limited_to_sweep() {
        let mut cli = parse(&["c0", "--model", "graph"]);
        cli.format = Some(Format::Csv);
        assert!(matches!(execute(&cli), Err(Error::Usage(_))));
    }

    #[test]
    fn c0_document_contents() {
        let cli = parse(&["c0", "--model", "hyper", "--d", "4"]);
        match execute(&cli).unwrap().0 {
            Output::Json(doc) => {
                let text = doc.to_string();
                assert!(text.contains("\"ratio\""));
                assert!(text.contains("\"c0\""));
            }
            _ => panic!("expected json"),
        }
    }
}
