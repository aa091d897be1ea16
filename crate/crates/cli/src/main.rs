//! `unionsys`: bounds, constructions, checks and exact search for
//! union-intersecting set systems.
//!
//! Exit codes: 0 success, 1 property violated or bound mismatch, 2 usage or
//! I/O error.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use unionsys::bounds::{self, BoundReport};
use unionsys::constructions;
use unionsys::io::{parse_family, to_canonical_json};
use unionsys::matching::{verify_katona_inequalities, verify_level_inequalities};
use unionsys::predicates::{find_l_intersecting_violation, find_regime_violation};
use unionsys::reproduce;
use unionsys::search::{self, Method, SearchOptions};
use unionsys::sunflower::extract_sunflower;
use unionsys::{Error, Family, ProblemSpec, Regime};

use report::{Provenance, Report};

#[derive(Parser, Debug)]
#[command(name = "unionsys", version, about = "Exact bounds, constructions and search for union-intersecting set systems")]
struct Cli {
    /// Output layout; text is a rendering of the same JSON.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form maximum for a regime.
    Bound(RegimeArgs),
    /// Build the extremal family for a regime.
    Construct(ConstructArgs),
    /// Check a family file against a regime.
    Verify(VerifyArgs),
    /// Check the level-pair inequalities of a family file.
    VerifyLevels(LevelArgs),
    /// Extract a sunflower from a uniform family file.
    Sunflower(SunflowerArgs),
    /// Exact maximum by exhaustive search.
    Search(SearchArgs),
    /// Compare closed forms, constructions and search on a grid of cases.
    Reproduce(ReproduceArgs),
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
struct RegimeArgs {
    /// Union-l-intersecting families with this l.
    #[arg(long, value_name = "L")]
    union_l: Option<usize>,
    /// (s,t)-union-intersecting families.
    #[arg(long)]
    st: bool,
    /// k-uniform (s,t)-union-intersecting families.
    #[arg(long)]
    uniform: bool,
    /// k-uniform l-intersecting families.
    #[arg(long)]
    ak: bool,
    /// Ground-set size; `verify` takes it from the family file if omitted.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
}

#[derive(Debug, Clone, Copy)]
enum Target {
    Spec(ProblemSpec),
    Ak { n: usize, k: usize, l: usize },
}

fn need(value: Option<usize>, flag: &str, regime: &str) -> anyhow::Result<usize> {
    value.with_context(|| format!("--{regime} needs --{flag}"))
}

impl RegimeArgs {
    fn target(&self) -> anyhow::Result<Target> {
        self.target_with(None)
    }

    /// `fallback_n` fills in a missing `--n`.
    fn target_with(&self, fallback_n: Option<usize>) -> anyhow::Result<Target> {
        let chosen = [self.union_l.is_some(), self.st, self.uniform, self.ak].iter().filter(|b| **b).count();
        if chosen != 1 {
            bail!("give exactly one of --union-l L, --st, --uniform, --ak");
        }
        let n = self.n.or(fallback_n).context("missing --n")?;
        Ok(if let Some(l) = self.union_l {
            Target::Spec(ProblemSpec::union_l(n, l)?)
        } else if self.st {
            Target::Spec(ProblemSpec::st(n, need(self.s, "s", "st")?, need(self.t, "t", "st")?)?)
        } else if self.uniform {
            let k = need(self.k, "k", "uniform")?;
            Target::Spec(ProblemSpec::uniform(n, k, need(self.s, "s", "uniform")?, need(self.t, "t", "uniform")?)?)
        } else {
            Target::Ak { n, k: need(self.k, "k", "ak")?, l: need(self.l, "l", "ak")? }
        })
    }

    fn spec(&self, command: &str) -> anyhow::Result<ProblemSpec> {
        match self.target()? {
            Target::Spec(spec) => Ok(spec),
            Target::Ak { .. } => bail!("{command} does not take --ak"),
        }
    }
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
struct ConstructArgs {
    #[command(flatten)]
    #[serde(flatten)]
    regime: RegimeArgs,
    /// With --ak: which candidate family F_i (default: the largest).
    #[arg(long)]
    i: Option<usize>,
    /// Write the family file here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
struct VerifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    regime: RegimeArgs,
    /// Family file to check.
    #[arg(long)]
    family: PathBuf,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
struct LevelArgs {
    #[arg(long)]
    family: PathBuf,
    /// Union-l pairing for a union-l-intersecting upset.
    #[arg(long, conflicts_with = "t", required_unless_present = "t")]
    l: Option<usize>,
    /// Pairing for a t-intersecting family.
    #[arg(long)]
    t: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
struct SunflowerArgs {
    #[arg(long)]
    family: PathBuf,
    /// Number of petals wanted.
    #[arg(long)]
    petals: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum MethodArg {
    Auto,
    Full,
    Upset,
    UniformBb,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
struct SearchArgs {
    #[command(flatten)]
    #[serde(flatten)]
    regime: RegimeArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Allow upset search at n = 6.
    #[arg(long)]
    allow_n6: bool,
    /// Also write the witness family file here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
struct ReproduceArgs {
    #[arg(long, default_value_t = 5)]
    max_n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Allow --max-n 6.
    #[arg(long)]
    allow_n6: bool,
}

struct Outcome {
    report: Report,
    ok: bool,
}

fn read_family(path: &Path) -> anyhow::Result<Family> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_family(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_family(path: &Path, f: &Family) -> anyhow::Result<()> {
    std::fs::write(path, to_canonical_json(f)).with_context(|| format!("writing {}", path.display()))
}

fn inputs(args: &impl Serialize) -> Value {
    serde_json::to_value(args).expect("arguments serialize")
}

fn bound_for(target: Target) -> anyhow::Result<BoundReport> {
    Ok(match target {
        Target::Ak { n, k, l } => bounds::ak_bound(n, k, l)?,
        Target::Spec(spec) => match spec.regime {
            Regime::UnionL { l } => bounds::union_l_upper_bound(spec.n, l)?,
            Regime::St { s, t } => bounds::f_value(spec.n, s, t)?,
            Regime::Uniform { k, s, .. } => bounds::uniform_upper_bound(spec.n, k, s)?,
        },
    })
}

fn cmd_bound(args: &RegimeArgs) -> anyhow::Result<Outcome> {
    let report = bound_for(args.target()?)?;
    let tag = report.case.tag();
    Ok(Outcome {
        report: Report {
            command: "bound",
            inputs: inputs(args),
            outputs: serde_json::to_value(&report)?,
            provenance: vec![Provenance::new("value", tag)],
        },
        ok: true,
    })
}

fn cmd_construct(args: &ConstructArgs) -> anyhow::Result<Outcome> {
    let target = args.regime.target()?;
    let (family, source) = match target {
        Target::Ak { n, k, l } => {
            let i = match args.i {
                Some(i) => i,
                None => bounds::ak_bound(n, k, l)?.argmax.context("k < l: every candidate family is empty")?,
            };
            (constructions::construct_ak_family(n, k, l, i)?, format!("ak-candidate-{i}"))
        }
        Target::Spec(spec) => {
            if args.i.is_some() {
                bail!("--i only applies with --ak");
            }
            let tag = bound_for(target)?.case.tag();
            (reproduce::construction_for(&spec)?, format!("construction:{tag}"))
        }
    };
    if let Some(path) = &args.out {
        write_family(path, &family)?;
    }
    Ok(Outcome {
        report: Report {
            command: "construct",
            inputs: inputs(args),
            outputs: json!({ "size": family.len(), "family": family }),
            provenance: vec![Provenance::new("size", source)],
        },
        ok: true,
    })
}

fn cmd_verify(args: &VerifyArgs) -> anyhow::Result<Outcome> {
    let family = read_family(&args.family)?;
    let violation = match args.regime.target_with(Some(family.n()))? {
        Target::Spec(spec) => {
            if spec.n != family.n() {
                bail!("family file has n = {}, flags give n = {}", family.n(), spec.n);
            }
            find_regime_violation(&spec, &family)
        }
        Target::Ak { n, k, l } => {
            if n != family.n() {
                bail!("family file has n = {}, flags give n = {n}", family.n());
            }
            match family.iter().find(|m| m.len() != k) {
                Some(bad) => Some(unionsys::predicates::Violation { left: vec![bad], right: vec![] }),
                None => find_l_intersecting_violation(&family, l),
            }
        }
    };
    let pass = violation.is_none();
    let witness = violation.map(|v| {
        json!({
            "left": v.left,
            "right": v.right,
            "left-union": v.left_union(),
            "right-union": v.right_union(),
            "overlap": v.overlap(),
        })
    });
    Ok(Outcome {
        report: Report {
            command: "verify",
            inputs: inputs(args),
            outputs: json!({ "size": family.len(), "pass": pass, "witness": witness }),
            provenance: vec![Provenance::new("pass", "direct-check")],
        },
        ok: pass,
    })
}

fn cmd_verify_levels(args: &LevelArgs) -> anyhow::Result<Outcome> {
    let family = read_family(&args.family)?;
    let result = match (args.l, args.t) {
        (Some(l), _) => verify_level_inequalities(&family, l),
        (None, Some(t)) => verify_katona_inequalities(&family, t),
        (None, None) => bail!("give --l or --t"),
    };
    let (outputs, ok) = match result {
        Ok(report) => {
            let rows: Vec<Value> = report
                .rows
                .iter()
                .map(|r| json!({ "i": r.i, "j": r.j, "|F^i|": r.size_i, "|F^j|": r.size_j, "sum": r.sum(), "bound": r.bound, "pass": r.pass }))
                .collect();
            (json!({ "pass": report.pass, "rows": rows }), report.pass)
        }
        Err(Error::PreconditionFailed(why)) => (json!({ "pass": false, "precondition": why }), false),
        Err(e) => return Err(e.into()),
    };
    let source = if args.l.is_some() { "union-l-level-pairing" } else { "t-intersecting-level-pairing" };
    Ok(Outcome {
        report: Report {
            command: "verify-levels",
            inputs: inputs(args),
            outputs,
            provenance: vec![Provenance::new("rows.bound", source)],
        },
        ok,
    })
}

fn cmd_sunflower(args: &SunflowerArgs) -> anyhow::Result<Outcome> {
    let family = read_family(&args.family)?;
    let found = extract_sunflower(&family, args.petals)?;
    let k = family.uniformity().unwrap_or(0);
    let threshold = bounds::sunflower_threshold(k, args.petals)?;
    let above = family.len() as u128 > threshold;
    let (outputs, ok) = match found {
        Some(sf) => (
            json!({ "found": true, "center": sf.center, "petals": sf.petals.members(), "threshold": threshold }),
            true,
        ),
        None => (
            json!({
                "found": false,
                "threshold": threshold,
                "message": format!("none found (size {} {} threshold {threshold})", family.len(), if above { ">" } else { "<=" }),
            }),
            // above the threshold a sunflower must exist
            !above,
        ),
    };
    Ok(Outcome {
        report: Report {
            command: "sunflower",
            inputs: inputs(args),
            outputs,
            provenance: vec![Provenance::new("threshold", "sunflower-threshold")],
        },
        ok,
    })
}

fn cmd_search(args: &SearchArgs) -> anyhow::Result<Outcome> {
    let spec = args.regime.spec("search")?;
    let opts = SearchOptions { threads: args.threads, allow_n6: args.allow_n6 };
    let result = match args.method {
        MethodArg::Auto => search::search(&spec, opts)?,
        MethodArg::Full => search::search_with(&spec, Method::FullEnum, opts)?,
        MethodArg::Upset => search::search_with(&spec, Method::UpsetEnum, opts)?,
        MethodArg::UniformBb => search::search_with(&spec, Method::UniformBB, opts)?,
    };
    if let Some(path) = &args.out {
        write_family(path, &result.witness)?;
    }
    let bound = bound_for(Target::Spec(spec))?;
    let mismatch = bound.exact().is_some_and(|v| v != result.optimum as u64);
    let mut provenance = vec![
        Provenance::new("optimum", "empirical-search"),
        Provenance::new("bound", bound.case.tag()),
    ];
    if result.method == Method::UpsetEnum {
        let note = match spec.regime {
            Regime::St { s, t } if (s, t) != (1, 1) => {
                "upsets-suffice: compression preserves (s,t) families (property-tested)"
            }
            _ => "upsets-suffice: compression lemma",
        };
        provenance.push(Provenance::new("method", note));
    }
    let mut outputs = serde_json::to_value(&result)?;
    outputs["bound"] = serde_json::to_value(&bound.value)?;
    outputs["matches-bound"] = match bound.exact() {
        Some(v) => json!(v == result.optimum as u64),
        None => Value::Null,
    };
    Ok(Outcome {
        report: Report { command: "search", inputs: inputs(args), outputs, provenance },
        ok: !mismatch,
    })
}

fn cmd_reproduce(args: &ReproduceArgs) -> anyhow::Result<Outcome> {
    let cap = if args.allow_n6 { 6 } else { 5 };
    if !(3..=cap).contains(&args.max_n) {
        bail!("--max-n must lie in 3..={cap}");
    }
    let opts = SearchOptions { threads: args.threads, allow_n6: args.allow_n6 };
    let r = reproduce::reproduce(args.max_n, args.seed, opts)?;
    let grid: Vec<Value> = r
        .grid
        .iter()
        .map(|g| {
            json!({
                "regime": g.label(),
                "n": g.spec.n,
                "case": g.bound.case.tag(),
                "bound": g.bound.exact().map_or_else(|| format!(">= {}", g.bound.lower()), |v| v.to_string()),
                "construction": g.construction,
                "upset-search": g.upset_optimum,
                "full-search": g.full_optimum,
                "pass": g.pass,
            })
        })
        .collect();
    let uniform: Vec<Value> = r
        .uniform
        .iter()
        .map(|u| {
            let Regime::Uniform { k, s, t } = u.spec.regime else { unreachable!() };
            json!({
                "n": u.spec.n, "k": k, "s": s, "t": t,
                "star-bound": u.bound,
                "construction": u.construction,
                "optimum": u.optimum,
                "flag": if u.above_bound { "ABOVE STAR BOUND" } else { "" },
                "pass": u.pass,
            })
        })
        .collect();
    let outputs = json!({
        "pass": r.pass,
        "grid": grid,
        "uniform": uniform,
        "ak": r.ak,
        "properties": r.properties.iter().map(|p| json!({
            "check": p.name, "samples": p.samples, "failures": p.failures, "pass": p.pass(),
        })).collect::<Vec<_>>(),
    });
    Ok(Outcome {
        report: Report {
            command: "reproduce",
            inputs: inputs(args),
            outputs,
            provenance: vec![
                Provenance::new("grid.bound", "closed form named in grid.case"),
                Provenance::new("grid.upset-search", "empirical-search"),
                Provenance::new("grid.full-search", "empirical-search"),
                Provenance::new("uniform.optimum", "empirical-search"),
                Provenance::new("uniform.star-bound", "uniform-star"),
                Provenance::new("ak.value", "ak"),
            ],
        },
        ok: r.pass,
    })
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Bound(a) => cmd_bound(a),
        Command::Construct(a) => cmd_construct(a),
        Command::Verify(a) => cmd_verify(a),
        Command::VerifyLevels(a) => cmd_verify_levels(a),
        Command::Sunflower(a) => cmd_sunflower(a),
        Command::Search(a) => cmd_search(a),
        Command::Reproduce(a) => cmd_reproduce(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let text = match cli.format {
                Format::Json => outcome.report.to_json(),
                Format::Text => outcome.report.to_text(),
            };
            print!("{text}");
            ExitCode::from(if outcome.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
