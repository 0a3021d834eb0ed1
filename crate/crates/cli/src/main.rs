//! Command-line front end: verify certificates, run the solvers and
//! kernelizations, build the constructive maps, and generate benchmark
//! instances.
//!
//! Exit codes: 0 = yes / success, 1 = no (or a failed verification),
//! 2 = usage or input error, 3 = resource cap exhausted.

use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nctm_core::gadgets;
use nctm_core::io;
use nctm_core::planar;
use nctm_core::solver;
use nctm_core::squares;
use nctm_core::td::{self, TdOptions};
use nctm_core::teaching::{self, Verdict};
use nctm_core::treedepth;
use nctm_core::vc;
use nctm_core::{ConceptClass, Error, Graph, Instance, SolveOptions, TeachingMap, Variant, VertexSet};

#[derive(Parser)]
#[command(name = "nctm", version, about = "Non-clashing teaching maps for closed neighborhoods")]
struct Cli {
    /// Emit key=value records instead of the human-readable report.
    #[arg(long, global = true)]
    porcelain: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    General,
    Positive,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::General => Variant::General,
            VariantArg::Positive => Variant::Positive,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Strategy {
    /// Exact backtracking on the instance as given.
    Direct,
    /// Vertex-cover kernelization, then exact solve, then lifting.
    Vc,
    /// Treedepth kernelization, then exact solve, then lifting.
    Td,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GadgetArg {
    General,
    Positive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Construction {
    /// Positive maps of size at most 7 for planar graphs.
    PlanarPos,
    /// General maps of size at most 5 for planar graphs.
    Planar,
    /// Positive maps of size at most 4 for unit-square arrangements.
    UnitSquare,
}

#[derive(Args)]
struct InstanceArgs {
    /// Graph file (`p`/`e` lines, optional `b` line of concept centers).
    #[arg(long)]
    graph: String,
    /// Concept centers file (overrides any `b` line; default: all vertices).
    #[arg(long)]
    classes: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a teaching map against an instance.
    Verify {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Teaching map file (`t <center>: <examples>` lines).
        #[arg(long)]
        map: String,
        #[arg(long, value_enum)]
        variant: VariantArg,
    },
    /// Decide one budget or minimize the teaching dimension.
    Solve {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum)]
        variant: VariantArg,
        /// Decide whether a map of size at most K exists.
        #[arg(long, conflicts_with = "minimize")]
        k: Option<usize>,
        /// Find the smallest size admitting a map.
        #[arg(long)]
        minimize: bool,
        #[arg(long, value_enum, default_value = "direct")]
        strategy: Strategy,
        /// Vertex cover file for --strategy vc (default: 2-approximation).
        #[arg(long)]
        cover: Option<String>,
        /// Decomposition file for --strategy td (default: computed).
        #[arg(long)]
        decomp: Option<String>,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        cert: Option<String>,
        /// Workers for the top-level search branching (default 1 =
        /// deterministic output).
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Abort after this many search nodes (default: NCTM_NODE_LIMIT).
        #[arg(long)]
        node_limit: Option<u64>,
    },
    /// Build a bounded-size map for a structured graph class.
    Construct {
        #[arg(long, value_enum)]
        construction: Construction,
        /// Graph file (planar constructions).
        #[arg(long)]
        graph: Option<String>,
        /// Arrangement file (`s <x> <y>` lines, unit-square construction).
        #[arg(long)]
        arrangement: Option<String>,
        /// Concept centers file (default: all vertices).
        #[arg(long)]
        classes: Option<String>,
        #[arg(long)]
        cert: Option<String>,
    },
    /// Generate a hardness-gadget instance from a 3-CNF formula.
    Generate {
        #[arg(long, value_enum)]
        gadget: GadgetArg,
        /// DIMACS CNF file.
        #[arg(long)]
        cnf: String,
        /// Write the instance here instead of stdout.
        #[arg(long)]
        out: Option<String>,
    },
    /// Encode an abstract concept class as closed neighborhoods.
    Encode {
        /// Concept file: one concept per line, 1-based elements, `-` = empty.
        #[arg(long)]
        concepts: String,
        /// Universe size (default: largest element mentioned).
        #[arg(long)]
        universe: Option<usize>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Emit the kernel and its deletion trace without solving.
    Kernelize {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        strategy: Strategy,
        #[arg(long)]
        cover: Option<String>,
        #[arg(long)]
        decomp: Option<String>,
        #[arg(long)]
        out_graph: Option<String>,
        #[arg(long)]
        out_trace: Option<String>,
    },
}

/// Ordered report fields with the two output renderings.
struct Report {
    fields: Vec<(&'static str, String)>,
}

impl Report {
    fn new(command: &str) -> Self {
        Report { fields: vec![("command", command.to_string())] }
    }

    fn push(&mut self, key: &'static str, value: impl ToString) {
        self.fields.push((key, value.to_string()));
    }

    fn print(&self, porcelain: bool) {
        for (k, v) in &self.fields {
            if porcelain {
                println!("{k}={v}");
            } else {
                println!("{k}: {v}");
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::ResourceExhausted { .. } => 3,
                _ => 2,
            }
        }
    };
    // Timing goes to stderr so identical inputs give byte-identical stdout.
    eprintln!("elapsed: {:?}", started.elapsed());
    ExitCode::from(code)
}

fn read(path: &str) -> Result<String, Error> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))
}

fn write_out(path: &str, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::InvalidInput(format!("cannot write {path}: {e}")))
}

/// Loads a graph plus concept class: an explicit class file wins over the
/// graph file's `b` line; with neither, every closed neighborhood is a
/// concept.
fn load_instance(args: &InstanceArgs) -> Result<(Graph, ConceptClass), Error> {
    let parsed = io::parse_graph(&read(&args.graph)?)?;
    let graph = parsed.graph;
    let centers = match &args.classes {
        Some(path) => Some(io::parse_vertex_list(&read(path)?, graph.vertex_count())?),
        None => parsed.centers,
    };
    let class = match centers {
        Some(cs) => ConceptClass::new(&graph, &cs)?,
        None => ConceptClass::all_neighborhoods(&graph),
    };
    Ok((graph, class))
}

fn push_instance_stats(report: &mut Report, g: &Graph, class: &ConceptClass) {
    report.push("vertices", g.vertex_count());
    report.push("edges", g.edge_count());
    report.push("concepts", class.len());
}

/// Re-verifies and then emits a certificate, to a file when a path was
/// given, else onto stdout after the report.
fn emit_certificate(
    report: &mut Report,
    g: &Graph,
    class: &ConceptClass,
    map: &TeachingMap,
    variant: Variant,
    cert: Option<&str>,
    porcelain: bool,
) -> Result<(), Error> {
    let verdict = teaching::verify(g, class, map, variant)?;
    if !verdict.is_ok() {
        return Err(Error::ConstructionFailed(format!(
            "refusing to emit a certificate that fails verification: {verdict:?}"
        )));
    }
    let text = io::emit_teaching_map(map);
    match cert {
        Some(path) => {
            write_out(path, &text)?;
            report.push("certificate", format!("{path} (verified)"));
            report.print(porcelain);
        }
        None => {
            report.push("certificate", "stdout (verified)");
            report.print(porcelain);
            print!("{text}");
        }
    }
    Ok(())
}

fn solve_options(threads: usize, node_limit: Option<u64>) -> SolveOptions {
    let node_limit = node_limit.or_else(|| {
        std::env::var("NCTM_NODE_LIMIT").ok().and_then(|v| v.parse().ok())
    });
    SolveOptions { node_limit, threads, ..SolveOptions::default() }
}

fn run(cli: Cli) -> Result<u8, Error> {
    let porcelain = cli.porcelain;
    match cli.command {
        Command::Verify { instance, map, variant } => {
            let (g, class) = load_instance(&instance)?;
            let map = io::parse_teaching_map(&read(&map)?, &class)?;
            let variant: Variant = variant.into();
            let mut report = Report::new("verify");
            push_instance_stats(&mut report, &g, &class);
            report.push("variant", variant.name());
            report.push("map-size", map.size());
            match teaching::verify(&g, &class, &map, variant)? {
                Verdict::Ok => {
                    report.push("result", "ok");
                    report.print(porcelain);
                    Ok(0)
                }
                Verdict::Clash(w) => {
                    report.push("result", "clash");
                    report.push("witness", format!("{} {}", w.first + 1, w.second + 1));
                    report.print(porcelain);
                    Ok(1)
                }
                Verdict::NotPositive { center, example } => {
                    report.push("result", "not-positive");
                    report.push("witness", format!("{} {}", center + 1, example + 1));
                    report.print(porcelain);
                    Ok(1)
                }
            }
        }

        Command::Solve {
            instance,
            variant,
            k,
            minimize,
            strategy,
            cover,
            decomp,
            cert,
            threads,
            node_limit,
        } => {
            if k.is_none() && !minimize {
                return Err(Error::InvalidInput("pass --k K or --minimize".into()));
            }
            let (g, class) = load_instance(&instance)?;
            let variant: Variant = variant.into();
            let opts = solve_options(threads, node_limit);
            let mut report = Report::new("solve");
            push_instance_stats(&mut report, &g, &class);
            report.push("variant", variant.name());
            report.push(
                "strategy",
                match strategy {
                    Strategy::Direct => "direct",
                    Strategy::Vc => "vc",
                    Strategy::Td => "td",
                },
            );

            // Resolve strategy inputs once so the report can carry them.
            let cover_set = match (strategy, &cover) {
                (Strategy::Vc, Some(path)) => {
                    let ids = io::parse_vertex_list(&read(path)?, g.vertex_count())?;
                    let set = VertexSet::from_iter(g.vertex_count(), ids);
                    g.is_vertex_cover(&set)?;
                    Some(set)
                }
                (Strategy::Vc, None) => Some(g.vertex_cover_2approx()),
                _ => None,
            };
            if let Some(c) = &cover_set {
                report.push("cover-size", c.len());
            }
            let decomp_forest = match (strategy, &decomp) {
                (Strategy::Td, Some(path)) => {
                    let f = io::parse_decomposition(&read(path)?, g.vertex_count())?;
                    f.validate_for(&g)?;
                    Some(f)
                }
                (Strategy::Td, None) => Some(match treedepth::exact(&g) {
                    Ok(f) => f,
                    Err(Error::TreedepthCapExceeded { .. }) => treedepth::heuristic(&g),
                    Err(e) => return Err(e),
                }),
                _ => None,
            };
            if let Some(f) = &decomp_forest {
                report.push("decomposition-height", f.height());
            }

            let run_one = |k: usize| -> Result<solver::SolveResult, Error> {
                let inst = Instance::new(g.clone(), class.clone(), k, variant);
                match strategy {
                    Strategy::Direct => solver::solve(&inst, &opts),
                    Strategy::Vc => vc::solve(&inst, cover_set.as_ref(), &opts),
                    Strategy::Td => {
                        td::solve(&inst, decomp_forest.as_ref(), &opts, &TdOptions::default())
                    }
                }
            };

            let (decision, map, nodes, value) = if minimize {
                let mut outcome = None;
                for k in 0..=class.max_concept_size() {
                    let res = run_one(k)?;
                    if res.decision {
                        outcome = Some((res, k));
                        break;
                    }
                }
                let (res, k) = outcome.expect("the identity map bounds the dimension");
                (true, res.map, res.stats.nodes, Some(k))
            } else {
                let k = k.expect("checked above");
                let res = run_one(k)?;
                report.push("k", k);
                (res.decision, res.map, res.stats.nodes, None)
            };
            if let Some(v) = value {
                report.push("value", v);
            }
            report.push("decision", if decision { "yes" } else { "no" });
            report.push("nodes", nodes);
            if decision {
                let map = map.expect("yes carries a map");
                report.push("map-size", map.size());
                emit_certificate(&mut report, &g, &class, &map, variant, cert.as_deref(), porcelain)?;
                Ok(0)
            } else {
                report.print(porcelain);
                Ok(1)
            }
        }

        Command::Construct { construction, graph, arrangement, classes, cert } => {
            let mut report = Report::new("construct");
            let (g, class, map, variant, label) = match construction {
                Construction::PlanarPos | Construction::Planar => {
                    let path = graph.ok_or_else(|| {
                        Error::InvalidInput("planar constructions need --graph".into())
                    })?;
                    let args = InstanceArgs { graph: path, classes };
                    let (g, class) = load_instance(&args)?;
                    match construction {
                        Construction::PlanarPos => {
                            let map = planar::positive_nctm(&g, &class)?;
                            (g, class, map, Variant::Positive, "planar-positive")
                        }
                        _ => {
                            let map = planar::general_nctm(&g, &class)?;
                            (g, class, map, Variant::General, "planar-general")
                        }
                    }
                }
                Construction::UnitSquare => {
                    let path = arrangement.ok_or_else(|| {
                        Error::InvalidInput("--construction unit-square needs --arrangement".into())
                    })?;
                    let arr = io::parse_arrangement(&read(&path)?)?;
                    let g = squares::intersection_graph(&arr);
                    let class = match classes {
                        Some(p) => {
                            let ids = io::parse_vertex_list(&read(&p)?, g.vertex_count())?;
                            ConceptClass::new(&g, &ids)?
                        }
                        None => ConceptClass::all_neighborhoods(&g),
                    };
                    let map = squares::positive_nctm(&arr, &class)?;
                    (g, class, map, Variant::Positive, "unit-square")
                }
            };
            report.push("construction", label);
            push_instance_stats(&mut report, &g, &class);
            report.push("map-size", map.size());
            emit_certificate(&mut report, &g, &class, &map, variant, cert.as_deref(), porcelain)?;
            Ok(0)
        }

        Command::Generate { gadget, cnf, out } => {
            let phi = io::parse_dimacs(&read(&cnf)?)?;
            let built = match gadget {
                GadgetArg::General => gadgets::encode_general(&phi),
                GadgetArg::Positive => gadgets::encode_positive(&phi),
            };
            let centers: Vec<usize> = built.instance.concepts.canonical_centers().collect();
            let text = io::emit_graph(&built.instance.graph, Some(&centers));
            let mut report = Report::new("generate");
            report.push("gadget", built.instance.variant.name());
            push_instance_stats(&mut report, &built.instance.graph, &built.instance.concepts);
            report.push("k", built.instance.k);
            match out {
                Some(path) => {
                    write_out(&path, &text)?;
                    report.push("instance", path);
                    report.print(porcelain);
                }
                None => print!("{text}"),
            }
            Ok(0)
        }

        Command::Encode { concepts, universe, out } => {
            let text = read(&concepts)?;
            let universe = match universe {
                Some(u) => u,
                None => {
                    // Largest 1-based element mentioned anywhere.
                    text.split_whitespace()
                        .filter_map(|t| t.parse::<usize>().ok())
                        .max()
                        .ok_or_else(|| {
                            Error::InvalidInput("empty concepts need --universe".into())
                        })?
                }
            };
            let parsed = io::parse_concept_list(&text, universe)?;
            let (g, class) = gadgets::encode_concept_class(universe, &parsed)?;
            let centers: Vec<usize> = class.canonical_centers().collect();
            let out_text = io::emit_graph(&g, Some(&centers));
            let mut report = Report::new("encode");
            report.push("universe", universe);
            push_instance_stats(&mut report, &g, &class);
            match out {
                Some(path) => {
                    write_out(&path, &out_text)?;
                    report.push("instance", path);
                    report.print(porcelain);
                }
                None => print!("{out_text}"),
            }
            Ok(0)
        }

        Command::Kernelize {
            instance,
            variant,
            k,
            strategy,
            cover,
            decomp,
            out_graph,
            out_trace,
        } => {
            let (g, class) = load_instance(&instance)?;
            let variant: Variant = variant.into();
            let inst = Instance::new(g.clone(), class.clone(), k, variant);
            let mut report = Report::new("kernelize");
            push_instance_stats(&mut report, &g, &class);
            report.push("variant", variant.name());
            report.push("k", k);

            let (kernel_graph, kernel_centers, trace_text, deletions) = match strategy {
                Strategy::Direct => {
                    return Err(Error::InvalidInput("kernelize needs --strategy vc or td".into()))
                }
                Strategy::Vc => {
                    let cover_set = match cover {
                        Some(path) => {
                            let ids = io::parse_vertex_list(&read(&path)?, g.vertex_count())?;
                            VertexSet::from_iter(g.vertex_count(), ids)
                        }
                        None => g.vertex_cover_2approx(),
                    };
                    report.push("cover-size", cover_set.len());
                    match vc::kernelize(&inst, &cover_set)? {
                        vc::VcOutcome::ImmediateYes(map) => {
                            report.push("result", "immediate-yes");
                            report.push("map-size", map.size());
                            emit_certificate(
                                &mut report, &g, &class, &map, variant, None, porcelain,
                            )?;
                            return Ok(0);
                        }
                        vc::VcOutcome::Kernel(kernel) => {
                            let mut trace = String::new();
                            for d in &kernel.trace.deletions {
                                let rule = match d.rule {
                                    vc::VcRule::SurplusConceptTwin => "surplus-concept-twin",
                                    vc::VcRule::NonConceptTwin => "non-concept-twin",
                                };
                                trace.push_str(&format!("del {} rule={rule}", d.vertex + 1));
                                if !d.concept_twins.is_empty() {
                                    trace.push_str(" twins:");
                                    for &t in &d.concept_twins {
                                        trace.push_str(&format!(" {}", t + 1));
                                    }
                                }
                                trace.push('\n');
                            }
                            let centers: Vec<usize> =
                                kernel.instance.concepts.canonical_centers().collect();
                            (
                                kernel.instance.graph.clone(),
                                centers,
                                trace,
                                kernel.trace.deletions.len(),
                            )
                        }
                    }
                }
                Strategy::Td => {
                    let forest = match decomp {
                        Some(path) => {
                            let f = io::parse_decomposition(&read(&path)?, g.vertex_count())?;
                            f.validate_for(&g)?;
                            f
                        }
                        None => match treedepth::exact(&g) {
                            Ok(f) => f,
                            Err(Error::TreedepthCapExceeded { .. }) => treedepth::heuristic(&g),
                            Err(e) => return Err(e),
                        },
                    };
                    report.push("decomposition-height", forest.height());
                    let kernel = td::kernelize(&inst, &forest, &TdOptions::default())?;
                    let mut trace = String::new();
                    for d in &kernel.trace.deletions {
                        trace.push_str(&format!("del-component node={}", d.node + 1));
                        trace.push_str(" separator:");
                        for v in d.separator.iter() {
                            trace.push_str(&format!(" {}", v + 1));
                        }
                        trace.push_str(" deleted:");
                        for &v in &d.deleted {
                            trace.push_str(&format!(" {}", v + 1));
                        }
                        trace.push('\n');
                        for s in &d.survivors {
                            trace.push_str("  survivor:");
                            for &v in s {
                                trace.push_str(&format!(" {}", v + 1));
                            }
                            trace.push('\n');
                        }
                    }
                    let centers: Vec<usize> =
                        kernel.instance.concepts.canonical_centers().collect();
                    (kernel.instance.graph.clone(), centers, trace, kernel.trace.deletions.len())
                }
            };

            report.push("kernel-vertices", kernel_graph.vertex_count());
            report.push("kernel-edges", kernel_graph.edge_count());
            report.push("deletions", deletions);
            let graph_text = io::emit_graph(&kernel_graph, Some(&kernel_centers));
            match (out_graph, out_trace) {
                (Some(gp), Some(tp)) => {
                    write_out(&gp, &graph_text)?;
                    write_out(&tp, &trace_text)?;
                    report.push("kernel", gp);
                    report.push("trace", tp);
                    report.print(porcelain);
                }
                (Some(gp), None) => {
                    write_out(&gp, &graph_text)?;
                    report.push("kernel", gp);
                    report.print(porcelain);
                    print!("{trace_text}");
                }
                (None, Some(tp)) => {
                    write_out(&tp, &trace_text)?;
                    report.push("trace", tp);
                    report.print(porcelain);
                    print!("{graph_text}");
                }
                (None, None) => {
                    report.print(porcelain);
                    print!("{graph_text}");
                    print!("{trace_text}");
                }
            }
            Ok(0)
        }
    }
}
