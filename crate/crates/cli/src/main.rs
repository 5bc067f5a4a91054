//! `qalt`: Jones polynomials, Tait graphs and quasi-alternating checks from
//! the command line.

mod batch;
mod report;

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qalt::bracket::{determinant, jones, jones_determinant, BracketResult};
use qalt::qa::{certify, goeritz_determinant, kanenobu_jones, kanenobu_obstruction, obstruct, Budget, CertifyOutcome};
use qalt::tait::SignedPlanarGraph;
use qalt::{parse_pd, Diagram};

use report::{big, polynomial_summary, Output};

#[derive(Parser, Debug)]
#[command(name = "qalt", version, about = "Jones polynomials and quasi-alternating link checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Jones polynomial with determinant, breadth and gaps.
    Jones(DiagramArgs),
    /// Kauffman bracket and writhe.
    Bracket(DiagramArgs),
    /// Spanning-tree expansion over a Tait graph (or an edge list).
    Gamma(GraphArgs),
    /// Goeritz determinant of a Tait graph (or an edge list).
    Goeritz(GraphArgs),
    /// Determinant three ways: |V(-1)|, Goeritz, and the bracket pipeline.
    Det(DiagramArgs),
    /// Breadth, gaps and sign pattern of the Jones polynomial.
    Analyze(DiagramArgs),
    /// Run every quasi-alternating obstruction.
    Obstruct(ObstructArgs),
    /// Search for a determinant-additive smoothing tree.
    Certify(CertifyArgs),
    /// The Kanenobu knot K(p, q).
    Kanenobu(KanenobuArgs),
    /// Process a file of PD codes, one per line.
    Batch(BatchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Pd,
    Edgelist,
}

#[derive(Args, Debug)]
#[group(id = "source", required = true, multiple = false)]
struct Source {
    /// Inline input text.
    #[arg(long, group = "source")]
    pd: Option<String>,
    /// Read input from a file (`-` for stdin).
    #[arg(long, short, group = "source")]
    input: Option<PathBuf>,
}

impl Source {
    fn text(&self) -> Result<String> {
        match (&self.pd, &self.input) {
            (Some(s), _) => Ok(s.clone()),
            (None, Some(p)) if p.as_os_str() == "-" => {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
                Ok(s)
            }
            (None, Some(p)) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
            (None, None) => bail!("no input given"),
        }
    }

    fn diagram(&self) -> Result<Diagram> {
        Ok(parse_pd(&self.text()?)?)
    }
}

#[derive(Args, Debug)]
struct DiagramArgs {
    #[command(flatten)]
    source: Source,
    /// Input format; only `pd` is accepted here.
    #[arg(long, value_enum, default_value = "pd")]
    format: Format,
    #[arg(long)]
    json: bool,
}

impl DiagramArgs {
    fn diagram(&self) -> Result<Diagram> {
        if self.format != Format::Pd {
            bail!("edge lists are only accepted by `gamma` and `goeritz`");
        }
        self.source.diagram()
    }
}

#[derive(Args, Debug)]
struct GraphArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_enum, default_value = "pd")]
    format: Format,
    /// With PD input, use the dual Tait graph.
    #[arg(long)]
    dual: bool,
    #[arg(long)]
    json: bool,
}

impl GraphArgs {
    fn graph(&self) -> Result<SignedPlanarGraph> {
        let text = self.source.text()?;
        match self.format {
            Format::Edgelist => {
                if self.dual {
                    bail!("--dual needs PD input");
                }
                Ok(SignedPlanarGraph::parse_edge_list(&text)?)
            }
            Format::Pd => {
                let (g, gd) = SignedPlanarGraph::checkerboard(&parse_pd(&text)?)?;
                Ok(if self.dual { gd } else { g })
            }
        }
    }
}

#[derive(Args, Debug)]
struct ObstructArgs {
    #[command(flatten)]
    diagram: DiagramArgs,
    /// Assume the link is prime.
    #[arg(long)]
    prime: bool,
    /// Assume the link is a (2,n)-torus link.
    #[arg(long)]
    torus2n: bool,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct BudgetArgs {
    #[arg(long)]
    max_depth: Option<usize>,
    /// Defaults to QALT_BUDGET_NODES when set.
    #[arg(long)]
    max_nodes: Option<usize>,
    #[arg(long)]
    simplify_passes: Option<usize>,
}

impl BudgetArgs {
    pub fn budget(self) -> Budget {
        let mut b = Budget::from_env();
        b.max_depth = self.max_depth.unwrap_or(b.max_depth);
        b.max_nodes = self.max_nodes.unwrap_or(b.max_nodes);
        b.simplify_passes = self.simplify_passes.unwrap_or(b.simplify_passes);
        b
    }
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[command(flatten)]
    diagram: DiagramArgs,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args, Debug)]
struct KanenobuArgs {
    #[arg(allow_negative_numbers = true)]
    p: i64,
    #[arg(allow_negative_numbers = true)]
    q: i64,
    /// Also run the obstruction battery and the gap/criterion comparison.
    #[arg(long)]
    analyze: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct BatchArgs {
    path: PathBuf,
    /// Also search for certificates.
    #[arg(long)]
    certify: bool,
    /// Treat every entry as prime.
    #[arg(long)]
    prime: bool,
    /// Treat every entry as a (2,n)-torus link.
    #[arg(long)]
    torus2n: bool,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long)]
    json: bool,
}

fn run(cli: Cli) -> Result<ExitCode> {
    let out = match cli.command {
        Command::Jones(a) => {
            let d = a.diagram()?;
            let v = jones(&d);
            let mut o = Output::new(a.json);
            o.line("V", v.display_in("t"), json!(v));
            polynomial_summary(&mut o, &v)?;
            o.line("writhe", d.writhe(), json!(d.writhe()));
            o
        }
        Command::Bracket(a) => {
            let r = BracketResult::of(&a.diagram()?);
            let mut o = Output::new(a.json);
            o.line("bracket", r.bracket.display_in("A"), json!(r.bracket.display_in("A").to_string()));
            o.line("writhe", r.writhe, json!(r.writhe));
            o.line("V", r.jones.display_in("t"), json!(r.jones));
            o.line("det", &r.determinant, big(&r.determinant));
            o
        }
        Command::Gamma(a) => {
            let g = a.graph()?;
            let gamma = g.gamma();
            let mut o = Output::new(a.json);
            o.line("Gamma", gamma.display_in("A"), json!(gamma.display_in("A").to_string()));
            o.line("vertices", g.vertex_count(), json!(g.vertex_count()));
            o.line("edges", g.edges().len(), json!(g.edges().len()));
            let trees = g.kirchhoff_count();
            o.line("spanning_trees", &trees, big(&trees));
            o
        }
        Command::Goeritz(a) => {
            let g = a.graph()?;
            let det = g.goeritz_det();
            let mut o = Output::new(a.json);
            o.line("det", &det, big(&det));
            o
        }
        Command::Det(a) => {
            let d = a.diagram()?;
            let v = jones(&d);
            let via_jones = jones_determinant(&v);
            let via_goeritz = goeritz_determinant(&d);
            let via_bracket = determinant(&d);
            let mut o = Output::new(a.json);
            o.line("det", &via_jones, big(&via_jones));
            o.line("goeritz", via_goeritz, json!(via_goeritz));
            o.line("bracket", &via_bracket, big(&via_bracket));
            let agree = via_bracket == via_jones && (!d.is_connected() || via_jones == via_goeritz.into());
            o.line("agree", agree, json!(agree));
            o
        }
        Command::Analyze(a) => {
            let d = a.diagram()?;
            let v = jones(&d);
            let mut o = Output::new(a.json);
            o.line("V", v.display_in("t"), json!(v));
            polynomial_summary(&mut o, &v)?;
            let alt = v.analyze(qalt::HalfInt::ONE)?.alternating;
            o.line("alternating", alt, json!(alt));
            o
        }
        Command::Obstruct(a) => {
            let d = a.diagram.diagram()?;
            let v = jones(&d);
            let det = report::det_u64(&jones_determinant(&v))?;
            let verdict = obstruct(&v, det, a.prime, a.torus2n)?;
            let mut o = Output::new(a.diagram.json);
            o.line("V", v.display_in("t"), json!(v));
            o.line("det", det, json!(det));
            report::verdict(&mut o, &verdict);
            o
        }
        Command::Certify(a) => {
            let d = a.diagram.diagram()?;
            let outcome = certify(&d, a.budget.budget())?;
            let code = match outcome {
                CertifyOutcome::Certified { .. } => ExitCode::SUCCESS,
                CertifyOutcome::Unknown { .. } => ExitCode::from(2),
            };
            report::certificate(a.diagram.json, &outcome)?;
            return Ok(code);
        }
        Command::Kanenobu(a) => {
            let v = kanenobu_jones(a.p, a.q);
            let mut o = Output::new(a.json);
            o.line("p", a.p, json!(a.p));
            o.line("q", a.q, json!(a.q));
            o.line("V", v.display_in("t"), json!(v));
            polynomial_summary(&mut o, &v)?;
            if a.analyze {
                let r = kanenobu_obstruction(a.p, a.q);
                o.line("status", format!("{:?}", r.status), json!(r.status));
                o.line("gap_status", format!("{:?}", r.gap_status), json!(r.gap_status));
                o.line("battery_agrees", r.agrees, json!(r.agrees));
                o.line("gap_clause_disagrees", r.gap_clause_disagrees, json!(r.gap_clause_disagrees));
                report::verdict(&mut o, &r.battery);
            }
            o
        }
        Command::Batch(a) => {
            let text = fs::read_to_string(&a.path).with_context(|| format!("reading {}", a.path.display()))?;
            let opts = batch::Options {
                certify: a.certify,
                prime: a.prime,
                torus_2n: a.torus2n,
                budget: a.budget.budget(),
            };
            let report = batch::run(&text, &opts);
            if a.json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", report.render_text());
            }
            return Ok(ExitCode::SUCCESS);
        }
    };
    out.print()?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
