//! Command-line interface. Exit codes: 0 pass, 1 check failure, 2 bad input.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::cli::format::{self, Instance};
use crate::cli::generate::family_instance;
use crate::cli::suite::{run_suite, summarize, Suite};
use crate::dynamics::{PartialAction, PointSet};
use crate::expand::{expansion_action, Expansion};
use crate::gact::{bis_action, Bisections};
use crate::germ::GermGroupoid;
use crate::isg::Congruence;
use crate::quot::induced_action;

#[derive(Debug, Parser)]
#[command(name = "partact", version, about = "Partial actions of finite inverse semigroups and their recurrence sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate every instance in a file
    Validate { file: PathBuf },
    /// Orbits of every action in a file
    Orbits { file: PathBuf },
    /// Recurrence sets of a partial action
    Recur(RecurArgs),
    /// Prefix expansion table, and the lifted action when present
    Expand { file: PathBuf },
    /// Quotient by a congruence and the induced action
    Quotient {
        file: PathBuf,
        /// `min-group`, `equality`, or a file of `class` lines
        #[arg(long, default_value = "min-group")]
        congruence: String,
    },
    /// Germ groupoid of a partial action
    Germ {
        file: PathBuf,
        /// Write a Graphviz rendering here
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Bisections of a groupoid and their action
    Bis { file: PathBuf },
    /// Run a check suite, printing one JSON report per line
    Check(CheckArgs),
    /// Print a generated instance
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct RecurArgs {
    pub file: PathBuf,
    /// Source point (or comma-separated points for --naive and --set)
    #[arg(long)]
    pub at: String,
    /// Comma-separated target points; empty for the empty set
    #[arg(long, default_value = "")]
    pub target: String,
    #[arg(long, group = "kind")]
    pub naive: bool,
    #[arg(long, group = "kind")]
    pub classes: bool,
    #[arg(long, group = "kind")]
    pub set: bool,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Instance file; omit with --fixtures
    #[arg(required_unless_present = "fixtures")]
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub fixtures: bool,
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Print per-check counts instead of the reports
    #[arg(long)]
    pub summary: bool,
}

/// Bad input: the message goes to stderr and the exit code is 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn load(path: &PathBuf) -> Result<Vec<Instance>, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    format::parse(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn points(a: &PartialAction, list: &str) -> Result<PointSet, InputError> {
    list.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| a.space().index_of(p).ok_or_else(|| InputError(format!("unknown point `{p}`"))))
        .collect()
}

fn action_of(inst: &Instance) -> Result<&PartialAction, InputError> {
    inst.action.as_ref().ok_or_else(|| InputError(format!("instance `{}` has no partial action", inst.name)))
}

fn describe(inst: &Instance, out: &mut String) {
    let _ = writeln!(out, "instance {}", inst.name);
    if let Some(s) = &inst.semigroup {
        let _ = writeln!(
            out,
            "  semigroup: {} elements, {} idempotents, e-unitary {}, group {}",
            s.len(),
            s.idempotents().len(),
            s.is_e_unitary(),
            s.is_group()
        );
    }
    if let Some(a) = &inst.action {
        let _ = writeln!(out, "  action: {} points, genuine {}", a.space().len(), a.is_genuine());
    }
    if let Some(c) = &inst.congruence {
        let _ = writeln!(out, "  congruence: {} classes", c.num_classes());
    }
    if let Some(g) = &inst.groupoid {
        let _ = writeln!(out, "  groupoid: {} arrows, {} units", g.len(), g.units().len());
    }
    if let Some(ga) = &inst.gaction {
        let _ = writeln!(out, "  groupoid action: {} points", ga.space().len());
    }
}

fn fmt_orbits(sets: &[PointSet], label: impl Fn(&PointSet) -> String) -> String {
    sets.iter().map(label).collect::<Vec<_>>().join(" ")
}

/// Runs a command, writing its output into `out`, and returns the exit code.
pub fn run(cli: Cli, out: &mut String) -> Result<i32, InputError> {
    match cli.command {
        Command::Validate { file } => {
            for inst in load(&file)? {
                describe(&inst, out);
            }
        }
        Command::Orbits { file } => {
            for inst in load(&file)? {
                if let Some(a) = &inst.action {
                    let _ = writeln!(out, "{}: {}", inst.name, fmt_orbits(&a.orbits(), |o| a.fmt_points(o)));
                }
                if let Some(ga) = &inst.gaction {
                    let _ = writeln!(out, "{}: {}", inst.name, fmt_orbits(&ga.orbits(), |o| ga.space().fmt_set(o)));
                }
            }
        }
        Command::Recur(args) => {
            for inst in load(&args.file)? {
                let a = action_of(&inst)?;
                let m = points(a, &args.at)?;
                let n = points(a, &args.target)?;
                let s = a.semigroup();
                if args.classes {
                    if m.len() != 1 {
                        return Err(InputError("--classes needs exactly one point in --at".into()));
                    }
                    let sigma = *m.first().unwrap();
                    let table = a.germ_classes(sigma);
                    let classes: Vec<String> =
                        table.recurrence(a, &n).iter().map(|&c| s.fmt_set(table.class(c))).collect();
                    let _ = writeln!(out, "{}: {} classes: {}", inst.name, classes.len(), classes.join(" "));
                } else if args.set {
                    let c = Congruence::min_group(s)?;
                    let classes: Vec<String> =
                        a.set_recurrence_with(&c, &m, &n).iter().map(|&k| s.fmt_set(c.class(k))).collect();
                    let _ = writeln!(out, "{}: {} classes: {}", inst.name, classes.len(), classes.join(" "));
                } else {
                    let naive = a.naive_recurrence(&m, &n);
                    let _ = writeln!(out, "{}: {} elements: {}", inst.name, naive.len(), s.fmt_set(&naive));
                }
            }
        }
        Command::Expand { file } => {
            for inst in load(&file)? {
                let Some(s) = &inst.semigroup else { continue };
                let exp = Expansion::new(s)?;
                let _ = writeln!(out, "instance {} expansion, {} elements", inst.name, exp.len());
                out.push_str(&exp.render_table());
                if let Some(a) = &inst.action {
                    let lifted = expansion_action(&exp, a)?;
                    for x in lifted.semigroup().elements() {
                        let _ = writeln!(out, "map {} : {}", lifted.semigroup().label(x), lifted.map(x).image_word());
                    }
                }
            }
        }
        Command::Quotient { file, congruence } => {
            let mut instances = load(&file)?;
            for inst in &mut instances {
                let s = inst
                    .semigroup
                    .clone()
                    .ok_or_else(|| InputError(format!("instance `{}` has no semigroup", inst.name)))?;
                let c = match congruence.as_str() {
                    "min-group" => Congruence::min_group(&s)?,
                    "equality" => Congruence::equality(&s),
                    path => {
                        let base = format::print(&Instance::named(&inst.name).with_semigroup(s.clone()));
                        let extra = std::fs::read_to_string(path).map_err(|e| InputError(format!("{path}: {e}")))?;
                        format::parse(&format!("{base}{extra}"))?
                            .remove(0)
                            .congruence
                            .ok_or_else(|| InputError(format!("{path}: no class lines")))?
                    }
                };
                let (q, _) = c.quotient(&s)?;
                let mut quotient = Instance::named(&format!("{}_quotient", inst.name)).with_semigroup(q);
                let mut skipped = None;
                if let Some(a) = &inst.action {
                    match induced_action(a, &c) {
                        Ok(induced) => quotient = quotient.with_action(induced.action().clone()),
                        Err(e) => skipped = Some(e),
                    }
                }
                out.push_str(&format::print(&quotient));
                if let Some(e) = skipped {
                    let _ = writeln!(out, "# no induced action: {e}");
                }
            }
        }
        Command::Germ { file, dot } => {
            let mut dots = String::new();
            for inst in load(&file)? {
                let a = action_of(&inst)?;
                let gg = GermGroupoid::new(a)?;
                let g = gg.groupoid();
                let _ = writeln!(out, "instance {}: {} germs", inst.name, gg.len());
                for xi in g.arrows() {
                    let (q, p) = gg.theta_hat(xi);
                    let _ = writeln!(out, "  {} : {} -> {}", g.label(xi), a.space().label(p), a.space().label(q));
                }
                dots.push_str(&gg.to_dot(&inst.name));
            }
            if let Some(path) = dot {
                std::fs::write(&path, dots).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            }
        }
        Command::Bis { file } => {
            for inst in load(&file)? {
                let Some(g) = &inst.groupoid else { continue };
                let bis = Bisections::new(g)?;
                let s = bis.semigroup();
                let _ = writeln!(
                    out,
                    "instance {}: {} bisections, {} idempotents",
                    inst.name,
                    bis.len(),
                    s.idempotents().len()
                );
                let theta = inst.gaction.as_ref().map(|ga| bis_action(ga, &bis)).transpose()?;
                for x in s.elements() {
                    let _ = write!(out, "  {}", s.label(x));
                    if let Some(t) = &theta {
                        let pairs: Vec<String> = t
                            .map(x)
                            .pairs()
                            .map(|(p, q)| format!("{}->{}", t.space().label(p), t.space().label(q)))
                            .collect();
                        let _ = write!(out, " : {}", pairs.join(" "));
                    }
                    out.push('\n');
                }
            }
        }
        Command::Check(args) => {
            let suite: Suite = args.suite.parse().map_err(InputError)?;
            let instances = match (&args.file, args.fixtures) {
                (_, true) => crate::cli::fixtures::catalog(),
                (Some(f), false) => load(f)?,
                (None, false) => return Err(InputError("give a file or --fixtures".into())),
            };
            let reports = run_suite(&instances, suite, args.seed);
            if args.summary {
                for (check, (pass, fail)) in summarize(&reports) {
                    let _ = writeln!(out, "{check}: {pass} pass, {fail} fail");
                }
            } else {
                for r in &reports {
                    out.push_str(&r.to_json_line());
                    out.push('\n');
                }
            }
            if reports.iter().any(|r| !r.passed()) {
                return Ok(1);
            }
        }
        Command::Gen { family, n, seed } => {
            out.push_str(&format::print(&family_instance(&family, n, seed)?));
        }
    }
    Ok(0)
}
