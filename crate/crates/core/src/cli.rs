//! Command-line front end.
//!
//! Exit codes: 0 holds, 1 violated, 2 unknown, 3 usage or input error.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::format::parse_net;
use crate::net::{FiringWord, Marking, Net, TransitionId};
use crate::omega::OmegaVector;
use crate::oracle::{Computed, OracleConfig, OracleStats, ReachOracle, Verdict};
use crate::persistence::{
    classic_net, classify, elk_net, elk_net_alt, k_ab, marking_violation, min_re, step_violations, Classification,
    PairBound, PairWitness, PersistenceKind,
};
use crate::statespace::{build_coverability_graph, build_k_component};

pub const BUDGET_ENV: &str = "PNPERSIST_BUDGET";

#[derive(Debug, Parser)]
#[command(
    name = "pnpersist",
    version,
    about = "Persistence analysis for place/transition nets"
)]
pub struct Cli {
    /// Net file to analyse; standard input when absent.
    #[arg(long, global = true)]
    pub file: Option<PathBuf>,

    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,

    /// Maximum number of markings stored by the reachability oracle.
    #[arg(long, global = true, env = BUDGET_ENV, default_value_t = 1_000_000)]
    pub budget: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide a persistence property of the net, a marking, or a single step.
    Check {
        /// ee, ll, el or el-k.
        #[arg(long)]
        property: String,
        /// Bound for el-k.
        #[arg(long)]
        k: Option<u32>,
        /// Check this marking instead of the whole net.
        #[arg(long)]
        marking: Option<String>,
        /// Check only the step of this transition (at --marking, or the initial marking).
        #[arg(long)]
        step: Option<String>,
        /// Decide el-k through set reachability instead of trees.
        #[arg(long)]
        sets: bool,
    },
    /// Build the coverability graph; holds when the net is bounded, or when --cover is coverable.
    Coverability {
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        cover: Option<String>,
    },
    /// Minimal reachable markings enabling both transitions.
    MinRe { a: String, b: String },
    /// Least number of steps by which `a` can postpone `b`.
    KAb { a: String, b: String },
    /// Least k for which the net is e/l-k-persistent.
    Classify,
    /// Depth-bounded reachability tree.
    ReachTree {
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Root marking; ω entries are written `w`.
        #[arg(long)]
        marking: Option<String>,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<[String; 2]>,
    pub marking: String,
    /// Word firing from the initial marking to `marking`.
    pub word: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub budget: usize,
    pub exact: bool,
    #[serde(flatten)]
    pub stats: OracleStats,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub net: String,
    pub command: &'static str,
    pub parameters: Value,
    pub verdict: &'static str,
    pub summary: String,
    pub result: Value,
    pub witnesses: Vec<WitnessReport>,
    pub timing: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            "holds" => 0,
            "violated" => 1,
            _ => 2,
        }
    }

    fn render_text(&self) -> String {
        let mut s = format!(
            "net: {}\ncommand: {}\nverdict: {}\n{}\n",
            self.net, self.command, self.verdict, self.summary
        );
        for w in &self.witnesses {
            let word = if w.word.is_empty() {
                "ε".to_string()
            } else {
                w.word.join(" ")
            };
            match &w.pair {
                Some([a, b]) => s.push_str(&format!("witness: ({a}, {b}) at [{}] via {word}\n", w.marking)),
                None => s.push_str(&format!("witness: [{}] via {word}\n", w.marking)),
            }
        }
        if let Some(o) = &self.oracle {
            s.push_str(&format!(
                "oracle: {} states explored, {}\n",
                o.stats.states_explored,
                if o.exact { "exact" } else { "budgeted" }
            ));
        }
        s
    }
}

fn pair_witness(net: &Net, w: &PairWitness) -> WitnessReport {
    WitnessReport {
        pair: Some([
            net.transition_name(w.a).to_string(),
            net.transition_name(w.b).to_string(),
        ]),
        marking: w.marking.to_plain(),
        word: names(net, &w.word),
    }
}

fn names(net: &Net, w: &FiringWord) -> Vec<String> {
    w.names(net).into_iter().map(str::to_string).collect()
}

fn verdict_of<H, V>(v: &Verdict<H, V>) -> &'static str {
    v.label()
}

struct Outcome {
    verdict: &'static str,
    summary: String,
    result: Value,
    witnesses: Vec<WitnessReport>,
}

fn oracle_report(oracle: &ReachOracle<'_>, verdict: &str) -> OracleReport {
    let stats = oracle.stats();
    OracleReport {
        budget: oracle.config().state_budget,
        exact: verdict != "unknown",
        stats,
    }
}

fn transition(net: &Net, name: &str) -> anyhow::Result<TransitionId> {
    Ok(net.transition(name)?)
}

fn marking(net: &Net, text: &str) -> anyhow::Result<Marking> {
    let m: Marking = text.parse()?;
    net.check_marking(&m)?;
    Ok(m)
}

fn read_net(path: Option<&Path>) -> anyhow::Result<Net> {
    let Some(path) = path else {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .context("reading standard input")?;
        return parse_net(&text).context("in standard input");
    };
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_net(&text).with_context(|| format!("in {}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn check(
    net: &Net,
    cfg: OracleConfig,
    kind: PersistenceKind,
    at: Option<Marking>,
    step: Option<TransitionId>,
    sets: bool,
) -> anyhow::Result<(Outcome, Option<OracleReport>)> {
    if step.is_some() || at.is_some() {
        let m = at.unwrap_or_else(|| net.initial().clone());
        let harmed = match step {
            Some(a) => step_violations(net, kind, &m, a)?.into_iter().map(|b| (a, b)).collect(),
            None => marking_violation(net, kind, &m)?.into_iter().collect::<Vec<_>>(),
        };
        let scope = match step {
            Some(a) => format!("step {} at [{}]", net.transition_name(a), m.to_plain()),
            None => format!("marking [{}]", m.to_plain()),
        };
        let pairs: Vec<[&str; 2]> = harmed
            .iter()
            .map(|&(a, b)| [net.transition_name(a), net.transition_name(b)])
            .collect();
        let outcome = if harmed.is_empty() {
            Outcome {
                verdict: "holds",
                summary: format!("{scope} is {kind}-persistent"),
                result: json!({ "violations": pairs }),
                witnesses: Vec::new(),
            }
        } else {
            Outcome {
                verdict: "violated",
                summary: format!(
                    "{scope} is not {kind}-persistent: {} harms {}",
                    pairs[0][0], pairs[0][1]
                ),
                result: json!({ "violations": pairs }),
                witnesses: Vec::new(),
            }
        };
        return Ok((outcome, None));
    }

    let oracle = ReachOracle::new(net, cfg)?;
    let verdict = match kind {
        PersistenceKind::ELK(k) if sets => elk_net_alt(&oracle, k)?,
        PersistenceKind::ELK(k) => elk_net(&oracle, k)?,
        _ => classic_net(&oracle, kind)?,
    };
    let label = verdict_of(&verdict);
    let (summary, witnesses) = match &verdict {
        Verdict::Holds(()) => (format!("the net is {kind}-persistent"), Vec::new()),
        Verdict::Violated(w) => (
            format!(
                "the net is not {kind}-persistent: {} harms {}",
                net.transition_name(w.a),
                net.transition_name(w.b)
            ),
            vec![pair_witness(net, w)],
        ),
        Verdict::Unknown(u) => (format!("undecided: {}", u.reason), Vec::new()),
    };
    let outcome = Outcome {
        verdict: label,
        summary,
        result: json!({ "property": kind.to_string() }),
        witnesses,
    };
    Ok((outcome, Some(oracle_report(&oracle, label))))
}

fn coverability(net: &Net, dot: Option<&Path>, cover: Option<&str>) -> anyhow::Result<Outcome> {
    let g = build_coverability_graph(net, net.initial())?;
    if let Some(path) = dot {
        write_file(path, &g.to_dot(net))?;
    }
    let vertices: Vec<String> = g.vertices().iter().map(OmegaVector::to_plain).collect();
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|&(s, t, d)| json!([s, net.transition_name(t), d]))
        .collect();
    let bounded = g.is_bounded();
    let mut result = json!({ "vertices": vertices, "edges": edges, "bounded": bounded });
    let (holds, summary) = match cover {
        Some(text) => {
            let target = marking(net, text)?;
            let covered = g.covers(&target);
            result["cover"] = json!(target.to_plain());
            result["coverable"] = json!(covered);
            (
                covered,
                format!(
                    "[{}] is {}coverable ({} vertices)",
                    target.to_plain(),
                    if covered { "" } else { "not " },
                    vertices.len()
                ),
            )
        }
        None => (
            bounded,
            format!(
                "{} vertices, {} edges, {}",
                vertices.len(),
                edges.len(),
                if bounded { "bounded" } else { "unbounded" }
            ),
        ),
    };
    Ok(Outcome {
        verdict: if holds { "holds" } else { "violated" },
        summary,
        result,
        witnesses: Vec::new(),
    })
}

fn dispatch(cli: &Cli) -> anyhow::Result<Report> {
    let start = Instant::now();
    let net = read_net(cli.file.as_deref())?;
    let cfg = OracleConfig::with_budget(cli.budget);
    let mut oracle_stats = None;
    let (command, parameters, outcome) = match &cli.command {
        Command::Check {
            property,
            k,
            marking: at,
            step,
            sets,
        } => {
            let kind = PersistenceKind::from_property(property, *k)?;
            let at = at.as_deref().map(|s| marking(&net, s)).transpose()?;
            let step = step.as_deref().map(|s| transition(&net, s)).transpose()?;
            let (outcome, stats) = check(&net, cfg, kind, at.clone(), step, *sets)?;
            oracle_stats = stats;
            let params = json!({
                "property": property,
                "k": k,
                "marking": at.map(|m| m.to_plain()),
                "step": step.map(|t| net.transition_name(t).to_string()),
                "method": if *sets { "sets" } else { "trees" },
                "budget": cli.budget,
            });
            ("check", params, outcome)
        }
        Command::Coverability { dot, cover } => (
            "coverability",
            json!({ "cover": cover }),
            coverability(&net, dot.as_deref(), cover.as_deref())?,
        ),
        Command::MinRe { a, b } => {
            let (ta, tb) = (transition(&net, a)?, transition(&net, b)?);
            let oracle = ReachOracle::new(&net, cfg)?;
            let outcome = match min_re(&oracle, ta, tb)? {
                Computed::Done(min) => Outcome {
                    verdict: "holds",
                    summary: format!(
                        "Min(RE) = {{{}}}",
                        min.iter()
                            .map(|m| format!("[{}]", m.to_plain()))
                            .collect::<Vec<_>>()
                            .join(", ")
                    ),
                    result: json!({ "min_re": min.iter().map(Marking::to_plain).collect::<Vec<_>>() }),
                    witnesses: Vec::new(),
                },
                Computed::Unknown(u) => Outcome {
                    verdict: "unknown",
                    summary: format!("undecided: {}", u.reason),
                    result: json!({ "min_re": null }),
                    witnesses: Vec::new(),
                },
            };
            oracle_stats = Some(oracle_report(&oracle, outcome.verdict));
            ("min-re", json!({ "a": a, "b": b, "budget": cli.budget }), outcome)
        }
        Command::KAb { a, b } => {
            let (ta, tb) = (transition(&net, a)?, transition(&net, b)?);
            let oracle = ReachOracle::new(&net, cfg)?;
            let outcome = match k_ab(&oracle, ta, tb)? {
                Computed::Done(PairBound::Bound { k, slowest }) => Outcome {
                    verdict: "holds",
                    summary: format!("k_ab = {k}"),
                    result: json!({ "k": k }),
                    witnesses: vec![pair_witness(&net, &slowest)],
                },
                Computed::Done(PairBound::NeverCoEnabled) => Outcome {
                    verdict: "holds",
                    summary: "no bound needed: never co-enabled".into(),
                    result: json!({ "k": null, "reason": "never co-enabled" }),
                    witnesses: Vec::new(),
                },
                Computed::Done(PairBound::Kills(w)) => Outcome {
                    verdict: "violated",
                    summary: format!("no bound: {a} kills {b}"),
                    result: json!({ "k": null, "reason": "a kills b" }),
                    witnesses: vec![pair_witness(&net, &w)],
                },
                Computed::Unknown(u) => Outcome {
                    verdict: "unknown",
                    summary: format!("undecided: {}", u.reason),
                    result: json!({ "k": null }),
                    witnesses: Vec::new(),
                },
            };
            oracle_stats = Some(oracle_report(&oracle, outcome.verdict));
            ("k-ab", json!({ "a": a, "b": b, "budget": cli.budget }), outcome)
        }
        Command::Classify => {
            let oracle = ReachOracle::new(&net, cfg)?;
            let report = classify(&oracle)?;
            let pairs: Vec<Value> = report
                .pairs
                .iter()
                .map(|p| {
                    json!({
                        "a": net.transition_name(p.a),
                        "b": net.transition_name(p.b),
                        "k_ab": p.bound.as_ref().and_then(PairBound::k),
                        "status": match &p.bound {
                            None => "unknown",
                            Some(PairBound::NeverCoEnabled) => "never co-enabled",
                            Some(PairBound::Kills(_)) => "kills",
                            Some(PairBound::Bound { .. }) => "bounded",
                        },
                    })
                })
                .collect();
            let outcome = match report.classification {
                Classification::Elk(k) => Outcome {
                    verdict: "holds",
                    summary: format!("e/l-{k}-persistent, and {k} is the least such bound"),
                    result: json!({ "class": "el-k", "k": k, "pairs": pairs }),
                    witnesses: Vec::new(),
                },
                Classification::NotEl(w) => Outcome {
                    verdict: "violated",
                    summary: format!(
                        "not e/l-persistent: {} kills {}",
                        net.transition_name(w.a),
                        net.transition_name(w.b)
                    ),
                    result: json!({ "class": "not-el", "k": null, "pairs": pairs }),
                    witnesses: vec![pair_witness(&net, &w)],
                },
                Classification::Unknown(u) => Outcome {
                    verdict: "unknown",
                    summary: format!("undecided: {}", u.reason),
                    result: json!({ "class": "unknown", "k": null, "pairs": pairs }),
                    witnesses: Vec::new(),
                },
            };
            oracle_stats = Some(oracle_report(&oracle, outcome.verdict));
            ("classify", json!({ "budget": cli.budget }), outcome)
        }
        Command::ReachTree {
            depth,
            dot,
            marking: root,
        } => {
            let root: OmegaVector = match root {
                Some(text) => text.parse()?,
                None => net.initial().to_omega(),
            };
            net.check_marking(&vec![0; root.dim()])?;
            let tree = build_k_component(&net, &root, *depth)?;
            if let Some(path) = dot {
                write_file(path, &tree.to_dot(&net))?;
            }
            let outcome = Outcome {
                verdict: "holds",
                summary: format!("{} nodes up to depth {depth}", tree.len()),
                result: json!({ "nodes": tree.len(), "root": root.to_plain() }),
                witnesses: Vec::new(),
            };
            (
                "reach-tree",
                json!({ "depth": depth, "marking": root.to_plain() }),
                outcome,
            )
        }
    };
    Ok(Report {
        net: net.name().to_string(),
        command,
        parameters,
        verdict: outcome.verdict,
        summary: outcome.summary,
        result: outcome.result,
        witnesses: outcome.witnesses,
        timing: json!({ "elapsed_ms": start.elapsed().as_secs_f64() * 1e3 }),
        oracle: oracle_stats,
    })
}

/// Runs the command line `args` (including the program name), writing the
/// report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            let text = if cli.json {
                serde_json::to_string_pretty(&report).expect("reports serialize") + "\n"
            } else {
                report.render_text()
            };
            let _ = out.write_all(text.as_bytes());
            report.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            if cli.json {
                let _ = writeln!(out, "{}", json!({ "verdict": "error", "error": format!("{e:#}") }));
            }
            3
        }
    }
}
