use std::cmp::Ordering;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ordtree_core::space::load_space;
use ordtree_core::verifier::{
    basis_suite, chain_limit_check, commutation_suite, duality_suite, oracle_suite, plichko_suite,
    reorder_check, repro_mbaze_divna, sample_r_trees, sigma_suite, skeleton_suite, standard_chains,
};
use ordtree_core::{
    AdmissibleSet, ClosurePolicy, Ordinal, Report, ScaffoldTree, SuiteConfig, XiRule,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "ordtree", version, about = "Ordinal segments, scaffold trees and their function spaces")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Opts {
    /// Seed for sampled instances
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Fundamental-sequence prefix used at limit atoms
    #[arg(long, global = true, default_value_t = 8)]
    truncation: u64,
    /// Rounds of the bounded closure
    #[arg(long, global = true, default_value_t = 3)]
    depth: usize,
    /// Sampled instances per suite
    #[arg(long, global = true, default_value_t = 500)]
    budget: usize,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// seg:<ordinal>, builtin:<name> or a space file
    #[arg(long, global = true, default_value = "seg:w2")]
    space: String,
    /// How missing wedges in set literals are handled
    #[arg(long, global = true, value_enum, default_value_t = Close::Require)]
    close: Close,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Close {
    Require,
    Strict,
    Interval,
}

#[derive(Subcommand)]
enum Command {
    /// Ordinal arithmetic
    #[command(subcommand)]
    Ord(OrdCmd),
    /// Scaffold trees
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Admissible sets and retractions
    #[command(subcommand)]
    Set(SetCmd),
    /// Step functions
    #[command(subcommand)]
    Fn(FnCmd),
    /// Atomic measures
    #[command(subcommand)]
    Meas(MeasCmd),
    /// Biorthogonal systems and generators
    #[command(subcommand)]
    Basis(BasisCmd),
    /// Verification suites, printed as JSON reports
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Reproduce a worked example
    #[command(subcommand)]
    Repro(ReproCmd),
}

#[derive(Subcommand)]
enum OrdCmd {
    /// Print the normal form
    Eval { a: String },
    /// Compare two ordinals
    Cmp { a: String, b: String },
    /// Cofinality class
    Cf { a: String },
    /// Cardinality class
    Card { a: String },
    /// n-th term of the fundamental sequence
    Fs { a: String, n: u64 },
}

#[derive(Subcommand)]
enum SpaceCmd {
    /// Print the space in line format
    Build,
    /// r-tree and r1-tree flags
    Classify,
    /// Reorder into an r1-tree
    Reorder,
    /// Weight and countable-cofinality weight
    Weight,
}

#[derive(Subcommand)]
enum SetCmd {
    /// Normalize a set literal
    Make { set: String },
    /// Retraction of a point onto a set
    Retract { set: String, point: String },
    /// Smallest admissible set containing both
    Union { a: String, b: String },
    /// Intersection of two sets
    Intersect { a: String, b: String },
    /// Sigma-continuity test
    SigmaOk { set: String },
}

#[derive(Subcommand)]
enum FnCmd {
    /// Value at a point
    Eval { f: String, point: String },
    /// Sup norm
    Norm { f: String },
    /// Projection onto a set
    Project { set: String, f: String },
}

#[derive(Subcommand)]
enum MeasCmd {
    /// Pairing of a function with a measure
    Pair { f: String, mu: String },
    /// Image of a measure under the retraction
    Adjoint { set: String, mu: String },
    /// Membership in the induced subspace
    InD { mu: String },
}

#[derive(Subcommand)]
enum BasisCmd {
    /// Tail pair at a point
    Tail { point: String },
    /// Pair induced by a bijection rule on a segment
    Pri {
        alpha: String,
        /// identity, mbaze-divna-swap or a JSON rule
        #[arg(long, default_value = "identity")]
        rule: String,
    },
    /// Biorthogonality of the tail pairs at the listed points
    Biortho { points: Vec<String> },
    /// Rebuild a function from the tail basis
    Reconstruct { f: String },
    /// Generator points of a measure
    Phi { mu: String },
    /// Finite-span generator test
    GenCheck { measures: Vec<String> },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Skeleton axioms on a sampled family
    Skeleton,
    /// Nested commutation and the non-commuting search
    Commute,
    /// Chain limits on fundamental-sequence chains
    Chain,
    /// Adjoint identity and contractions
    Duality,
    /// Agreement with the finite-model oracle
    Oracle,
    /// Segment decisions for the listed lengths
    Plichko { etas: Vec<String> },
    /// Sigma-continuity against stability of the induced subspace
    Sigma,
    /// Basis suite
    Basis,
    /// Reordering of sample r-trees
    Reorder,
}

#[derive(Subcommand)]
enum ReproCmd {
    /// Projection of a basis vector that leaves the basis
    MbazeDivna,
}

enum Output {
    Text(String),
    Value(Value),
    Report(Report),
}

struct Ctx {
    opts: Opts,
    tree: Option<ScaffoldTree>,
}

impl Ctx {
    fn tree(&mut self) -> Result<&ScaffoldTree> {
        if self.tree.is_none() {
            let t = load_space(&self.opts.space).with_context(|| format!("loading space '{}'", self.opts.space))?;
            self.tree = Some(t);
        }
        Ok(self.tree.as_ref().expect("just loaded"))
    }

    fn policy(&self) -> ClosurePolicy {
        match self.opts.close {
            Close::Require => ClosurePolicy::Require,
            Close::Strict => ClosurePolicy::Strict,
            Close::Interval => ClosurePolicy::Interval,
        }
    }

    fn set(&mut self, text: &str) -> Result<AdmissibleSet> {
        let policy = self.policy();
        Ok(self.tree()?.parse_set(text, policy)?)
    }

    fn suite_config(&self) -> SuiteConfig {
        SuiteConfig {
            seed: self.opts.seed,
            budget: self.opts.budget,
            truncation: self.opts.truncation,
            depth: self.opts.depth,
            ..SuiteConfig::default()
        }
    }
}

fn ord(text: &str) -> Result<Ordinal> {
    Ordinal::parse(text).with_context(|| format!("parsing ordinal '{text}'"))
}

fn text(s: impl Into<String>) -> Result<Output> {
    Ok(Output::Text(s.into()))
}

fn run_ord(cmd: &OrdCmd) -> Result<Output> {
    match cmd {
        OrdCmd::Eval { a } => text(ord(a)?.to_string()),
        OrdCmd::Cmp { a, b } => text(match ord(a)?.cmp(&ord(b)?) {
            Ordering::Less => "<",
            Ordering::Equal => "=",
            Ordering::Greater => ">",
        }),
        OrdCmd::Cf { a } => text(ord(a)?.cofinality().to_string()),
        OrdCmd::Card { a } => text(ord(a)?.cardinality_class().to_string()),
        OrdCmd::Fs { a, n } => text(ord(a)?.fundamental_sequence(*n)?.to_string()),
    }
}

fn run_space(ctx: &mut Ctx, cmd: &SpaceCmd) -> Result<Output> {
    let t = ctx.tree()?;
    match cmd {
        SpaceCmd::Build => text(t.to_lines()),
        SpaceCmd::Classify => Ok(Output::Value(serde_json::to_value(t.classify())?)),
        SpaceCmd::Reorder => text(t.reorder_to_r1()?.to_lines()),
        SpaceCmd::Weight => Ok(Output::Value(json!({
            "weight": t.weight().to_string(),
            "countable_cf_weight": t.countable_cf_weight().to_string(),
        }))),
    }
}

fn run_set(ctx: &mut Ctx, cmd: &SetCmd) -> Result<Output> {
    match cmd {
        SetCmd::Make { set } => {
            let a = ctx.set(set)?;
            text(ctx.tree()?.format_set(&a))
        }
        SetCmd::Retract { set, point } => {
            let a = ctx.set(set)?;
            let t = ctx.tree()?;
            let p = t.parse_point(point)?;
            text(t.format_point(&t.retract(&a, &p)?))
        }
        SetCmd::Union { a, b } => {
            let (a, b) = (ctx.set(a)?, ctx.set(b)?);
            let t = ctx.tree()?;
            text(t.format_set(&t.union_admissible(&a, &b)))
        }
        SetCmd::Intersect { a, b } => {
            let (a, b) = (ctx.set(a)?, ctx.set(b)?);
            let t = ctx.tree()?;
            text(t.format_set(&t.intersect_admissible(&a, &b)))
        }
        SetCmd::SigmaOk { set } => {
            let a = ctx.set(set)?;
            let t = ctx.tree()?;
            let s = t.sigma_continuity_ok(&a);
            Ok(Output::Value(json!({
                "ok": s.ok,
                "witness": s.witness.map(|p| t.format_point(&p)),
                "escape": s.escape.map(|p| t.format_point(&p)),
            })))
        }
    }
}

fn run_fn(ctx: &mut Ctx, cmd: &FnCmd) -> Result<Output> {
    match cmd {
        FnCmd::Eval { f, point } => {
            let t = ctx.tree()?;
            let f = t.parse_function(f)?;
            text(t.evaluate(&f, &t.parse_point(point)?)?.to_string())
        }
        FnCmd::Norm { f } => {
            let t = ctx.tree()?;
            text(t.sup_norm(&t.parse_function(f)?).to_string())
        }
        FnCmd::Project { set, f } => {
            let a = ctx.set(set)?;
            let t = ctx.tree()?;
            let f = t.parse_function(f)?;
            text(t.format_function(&t.project(&a, &f)?))
        }
    }
}

fn run_meas(ctx: &mut Ctx, cmd: &MeasCmd) -> Result<Output> {
    match cmd {
        MeasCmd::Pair { f, mu } => {
            let t = ctx.tree()?;
            text(t.pair(&t.parse_function(f)?, &t.parse_measure(mu)?)?.to_string())
        }
        MeasCmd::Adjoint { set, mu } => {
            let a = ctx.set(set)?;
            let t = ctx.tree()?;
            text(t.format_measure(&t.adjoint(&a, &t.parse_measure(mu)?)?))
        }
        MeasCmd::InD { mu } => {
            let t = ctx.tree()?;
            let d = t.in_induced_d(&t.parse_measure(mu)?)?;
            Ok(Output::Value(json!({
                "ok": d.ok,
                "witness": d.witness.map(|p| t.format_point(&p)),
            })))
        }
    }
}

fn run_basis(ctx: &mut Ctx, cmd: &BasisCmd) -> Result<Output> {
    let truncation = ctx.opts.truncation;
    let t = ctx.tree()?;
    let pair_value = |b: &ordtree_core::BasisPair| {
        json!({
            "index": t.format_point(&b.index),
            "vector": t.format_function(&b.vector),
            "functional": t.format_measure(&b.functional),
        })
    };
    match cmd {
        BasisCmd::Tail { point } => Ok(Output::Value(pair_value(&t.tail_basis(&t.parse_point(point)?)?))),
        BasisCmd::Pri { alpha, rule } => {
            let xi = XiRule::parse(rule)?;
            Ok(Output::Value(pair_value(&t.pri_basis(&xi, &ord(alpha)?)?)))
        }
        BasisCmd::Biortho { points } => {
            let pairs = points
                .iter()
                .map(|p| Ok(t.tail_basis(&t.parse_point(p)?)?))
                .collect::<Result<Vec<_>>>()?;
            Ok(Output::Report(t.biorthogonality_check(&pairs)?))
        }
        BasisCmd::Reconstruct { f } => {
            let r = t.strong_reconstruct(&t.parse_function(f)?)?;
            let terms: Vec<Value> = r
                .terms
                .iter()
                .map(|(x, c)| json!({"index": t.format_point(x), "coefficient": c.to_string()}))
                .collect();
            Ok(Output::Value(json!({
                "terms": terms,
                "function": t.format_function(&r.function),
            })))
        }
        BasisCmd::Phi { mu } => {
            let pts = t.generator_phi(&t.parse_measure(mu)?, truncation)?;
            let shown: Vec<String> = pts.iter().map(|p| t.format_point(p)).collect();
            text(format!("{{{}}}", shown.join(", ")))
        }
        BasisCmd::GenCheck { measures } => {
            let ms = measures
                .iter()
                .map(|m| Ok(t.parse_measure(m)?))
                .collect::<Result<Vec<_>>>()?;
            Ok(Output::Report(t.generator_check(&ms, truncation)?))
        }
    }
}

fn run_verify(ctx: &mut Ctx, cmd: &VerifyCmd) -> Result<Output> {
    let cfg = ctx.suite_config();
    let space = ctx.opts.space.clone();
    let mut report = match cmd {
        VerifyCmd::Plichko { etas } => {
            let etas = if etas.is_empty() {
                ["5", "w", "w1", "w1*2", "w2", "w2 + w"].map(String::from).to_vec()
            } else {
                etas.clone()
            };
            let etas = etas.iter().map(|e| ord(e)).collect::<Result<Vec<_>>>()?;
            plichko_suite(&etas)?
        }
        VerifyCmd::Reorder => reorder_check(&sample_r_trees()?),
        VerifyCmd::Chain => {
            let t = ctx.tree()?;
            let mut report = Report::new("chain", cfg.seed).config("space", space.as_str());
            for (chain, queries) in standard_chains(t)? {
                report.absorb(chain_limit_check(t, &chain, &queries)?);
            }
            report
        }
        other => {
            let t = ctx.tree()?;
            match other {
                VerifyCmd::Skeleton => skeleton_suite(t, &space, &cfg)?,
                VerifyCmd::Commute => commutation_suite(t, &space, &cfg),
                VerifyCmd::Duality => duality_suite(t, &space, &cfg),
                VerifyCmd::Oracle => oracle_suite(t, &space, &cfg),
                VerifyCmd::Sigma => sigma_suite(t, &space, &cfg),
                VerifyCmd::Basis => basis_suite(t, &space, &cfg)?,
                _ => unreachable!("handled above"),
            }
        }
    };
    report.seed = cfg.seed;
    for (k, v) in [
        ("seed", json!(cfg.seed)),
        ("budget", json!(cfg.budget)),
        ("truncation", json!(cfg.truncation)),
        ("depth", json!(cfg.depth)),
    ] {
        report.config.insert(k.to_string(), v);
    }
    Ok(Output::Report(report))
}

fn run(ctx: &mut Ctx, cmd: &Command) -> Result<Output> {
    match cmd {
        Command::Ord(c) => run_ord(c),
        Command::Space(c) => run_space(ctx, c),
        Command::Set(c) => run_set(ctx, c),
        Command::Fn(c) => run_fn(ctx, c),
        Command::Meas(c) => run_meas(ctx, c),
        Command::Basis(c) => run_basis(ctx, c),
        Command::Verify(c) => run_verify(ctx, c),
        Command::Repro(ReproCmd::MbazeDivna) => {
            let cfg = ctx.suite_config();
            Ok(Output::Report(repro_mbaze_divna(&cfg)?))
        }
    }
}

fn render(out: &Output, format: Format) -> (String, bool) {
    match (out, format) {
        (Output::Text(s), Format::Text) => (s.clone(), true),
        (Output::Text(s), Format::Json) => (json!({ "result": s }).to_string(), true),
        (Output::Value(v), Format::Text) => (serde_json::to_string_pretty(v).expect("values serialize"), true),
        (Output::Value(v), Format::Json) => (json!({ "result": v }).to_string(), true),
        (Output::Report(r), _) => (r.to_json(), r.passed()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.opts.format;
    let out_path = cli.opts.out.clone();
    let mut ctx = Ctx {
        opts: cli.opts,
        tree: None,
    };
    let result = run(&mut ctx, &cli.command).and_then(|out| {
        let (body, ok) = render(&out, format);
        match &out_path {
            Some(p) => fs::write(p, format!("{body}\n")).with_context(|| format!("writing {}", p.display()))?,
            None => println!("{body}"),
        }
        if let Output::Report(r) = &out {
            if format == Format::Text && out_path.is_some() {
                println!("{}: {}/{} passed", r.suite, r.summary.passed, r.summary.total);
            }
        }
        Ok(ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

