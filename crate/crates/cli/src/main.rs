//! `bcfw`: enumeration, conversion, sampling, verification, experiments and rendering.
//!
//! Exit codes: 0 on success or a finding, 1 on a violation, 2 on a usage or input error.

use std::collections::{HashMap, VecDeque};
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use bcfw_core::catalan::{
    enumerate_dyck, enumerate_path_pairs, enumerate_trees, graph_to_tree, omega_lp, omega_pl,
    omega_tl, paths_to_plane_partition, plane_partition_to_paths, tree_to_graph,
};
use bcfw_core::diagrams::{enumerate_diagrams, omega_ld};
use bcfw_core::experiments::{
    conjecture_sweeps, count_report, disjointness_experiment, m3_counterexample,
};
use bcfw_core::linalg::{le_form, parameterize, plucker, positroid_membership, q, sample_cell};
use bcfw_core::plabic::{bcfw_permutations, build_network, enumerate_bcfw_graphs, graph_from_le};
use bcfw_core::render;
use bcfw_core::signs::matching_classes;
use bcfw_core::{
    BinaryTree, DecoratedPermutation, DyckPath, ExperimentReport, OPlusDiagram, PathPair,
    PlabicGraph, PlanePartition, RationalMatrix, Verdict,
};

#[derive(Parser)]
#[command(name = "bcfw", version, about = "Exact combinatorics of BCFW cells")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// List every object of a family.
    Enumerate {
        #[arg(long)]
        kind: Kind,
        #[command(flatten)]
        family: Family,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Convert one object (JSON on stdin) along the bijections.
    Convert {
        #[arg(long)]
        from: Kind,
        #[arg(long)]
        to: Kind,
        /// Left shift `c_n^s` applied to a resulting permutation.
        #[arg(long, default_value_t = 0)]
        shift: usize,
        #[command(flatten)]
        io: Input,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Sample points of a cell: a diagram on stdin, or member `--index` of `D_{n,k,m}`.
    Sample {
        #[command(flatten)]
        family: Family,
        #[arg(long)]
        index: Option<usize>,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        io: Input,
    },
    /// Run the invariant checks that apply to one object (JSON on stdin).
    Verify {
        #[arg(long)]
        kind: VerifyKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        io: Input,
    },
    /// Run an experiment of the verification harness.
    Experiment {
        id: ExperimentId,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Draw one object (JSON on stdin), or a whole family into `--out-dir`.
    Render {
        #[arg(long)]
        kind: Kind,
        #[command(flatten)]
        family: Family,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[command(flatten)]
        io: Input,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
    },
}

#[derive(clap::Args)]
struct Family {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
}

#[derive(clap::Args)]
struct Input {
    /// Read the input object from this file instead of stdin.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, ValueEnum)]
enum Kind {
    Tree,
    Graph,
    Paths,
    Dyck,
    Diagram,
    /// Le-diagrams of `Gr(k,n)` (enumeration only; they are diagrams).
    Le,
    Permutation,
    Network,
    PlanePartition,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VerifyKind {
    Tree,
    Graph,
    Paths,
    Dyck,
    Diagram,
    PlanePartition,
    /// `{"diagram": ..., "matrix": ...}`, as produced by `sample`.
    Sample,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Svg,
    Ascii,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExperimentId {
    Counts,
    Disjointness,
    M3Counterexample,
    Sweeps,
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(msg.into())
}

enum Object {
    Tree(BinaryTree),
    Graph(PlabicGraph),
    Paths(PathPair),
    Dyck(DyckPath),
    Diagram(OPlusDiagram),
    Permutation(DecoratedPermutation),
    Network(Value),
    PlanePartition(PlanePartition),
}

impl Object {
    fn kind(&self) -> Kind {
        match self {
            Object::Tree(_) => Kind::Tree,
            Object::Graph(_) => Kind::Graph,
            Object::Paths(_) => Kind::Paths,
            Object::Dyck(_) => Kind::Dyck,
            Object::Diagram(_) => Kind::Diagram,
            Object::Permutation(_) => Kind::Permutation,
            Object::Network(_) => Kind::Network,
            Object::PlanePartition(_) => Kind::PlanePartition,
        }
    }

    fn parse(kind: Kind, v: &Value) -> Result<Self> {
        Ok(match kind {
            Kind::Tree => Object::Tree(BinaryTree::from_json(v)?),
            Kind::Graph => Object::Graph(PlabicGraph::from_json(v)?),
            Kind::Paths => Object::Paths(PathPair::from_json(v)?),
            Kind::Dyck => Object::Dyck(DyckPath::from_json(v)?),
            Kind::Diagram | Kind::Le => Object::Diagram(OPlusDiagram::from_json(v)?),
            Kind::Permutation => Object::Permutation(DecoratedPermutation::from_json(v)?),
            Kind::Network => bail!(usage("networks are output only")),
            Kind::PlanePartition => Object::PlanePartition(serde_json::from_value(v.clone())?),
        })
    }

    fn to_json(&self) -> Value {
        match self {
            Object::Tree(t) => t.to_json(),
            Object::Graph(g) => g.to_json(),
            Object::Paths(p) => p.to_json(),
            Object::Dyck(p) => p.to_json(),
            Object::Diagram(d) => d.to_json(),
            Object::Permutation(p) => p.to_json(),
            Object::Network(v) => v.clone(),
            Object::PlanePartition(pp) => json!(pp),
        }
    }

    /// One line of text.
    fn to_line(&self) -> String {
        match self {
            Object::Tree(t) => t.to_string(),
            Object::Graph(g) => g.to_string(),
            Object::Paths(p) => p.to_string(),
            Object::Dyck(p) => p.to_string(),
            Object::Diagram(d) => d.row_strings().join("/"),
            Object::Permutation(p) => p.to_string(),
            Object::Network(_) | Object::PlanePartition(_) => self.to_json().to_string(),
        }
    }

    fn render(&self, format: Format) -> Result<String> {
        let svg = format == Format::Svg;
        Ok(match self {
            Object::Tree(t) if svg => render::tree_svg(t),
            Object::Tree(t) => render::tree_ascii(t),
            Object::Graph(g) if svg => render::graph_svg(g),
            Object::Graph(g) => render::graph_ascii(g),
            Object::Paths(p) if svg => render::path_pair_svg(p),
            Object::Paths(p) => render::path_pair_ascii(p),
            Object::Dyck(p) if svg => render::dyck_svg(p),
            Object::Dyck(p) => render::dyck_ascii(p),
            Object::Diagram(d) if svg => render::diagram_svg(d),
            Object::Diagram(d) => render::diagram_ascii(d),
            Object::Permutation(p) if svg => render::permutation_svg(p),
            Object::Permutation(p) => render::permutation_ascii(p),
            Object::PlanePartition(pp) if svg => render::plane_partition_svg(pp),
            Object::PlanePartition(pp) => render::plane_partition_ascii(pp),
            Object::Network(_) => bail!(usage("networks have no drawing; render the diagram")),
        })
    }
}

/// The bijection arrows `convert` can follow; longer conversions chain them.
const ARROWS: &[(Kind, Kind)] = &[
    (Kind::Tree, Kind::Graph),
    (Kind::Graph, Kind::Tree),
    (Kind::Tree, Kind::Paths),
    (Kind::Paths, Kind::Dyck),
    (Kind::Dyck, Kind::Paths),
    (Kind::Paths, Kind::Diagram),
    (Kind::Diagram, Kind::Permutation),
    (Kind::Diagram, Kind::Graph),
    (Kind::Diagram, Kind::Network),
    (Kind::Graph, Kind::Permutation),
    (Kind::Paths, Kind::PlanePartition),
    (Kind::PlanePartition, Kind::Paths),
];

fn step(obj: &Object, to: Kind) -> Result<Object> {
    Ok(match (obj, to) {
        (Object::Tree(t), Kind::Graph) => Object::Graph(tree_to_graph(t)?),
        (Object::Graph(g), Kind::Tree) => Object::Tree(graph_to_tree(g)?),
        (Object::Tree(t), Kind::Paths) => Object::Paths(omega_tl(t)?),
        (Object::Paths(p), Kind::Dyck) => Object::Dyck(omega_lp(p)?),
        (Object::Dyck(p), Kind::Paths) => Object::Paths(omega_pl(p)?),
        (Object::Paths(p), Kind::Diagram) => Object::Diagram(omega_ld(p)?),
        (Object::Diagram(d), Kind::Permutation) => Object::Permutation(d.pipe_dream_permutation()),
        (Object::Diagram(d), Kind::Graph) => Object::Graph(graph_from_le(&le_form(d)?)?),
        (Object::Diagram(d), Kind::Network) => Object::Network(network_json(d)?),
        (Object::Graph(g), Kind::Permutation) => Object::Permutation(g.trip_permutation()?),
        (Object::Paths(p), Kind::PlanePartition) => Object::PlanePartition(
            paths_to_plane_partition(p.k(), p.b(), &[p.wl().to_vec(), p.wu().to_vec()])?,
        ),
        (Object::PlanePartition(pp), Kind::Paths) => {
            if pp.c != 2 {
                bail!(usage(
                    "only plane partitions with c = 2 come from path pairs"
                ));
            }
            let mut words = plane_partition_to_paths(pp)?;
            let wu = words.pop().expect("two paths");
            let wl = words.pop().expect("two paths");
            Object::Paths(PathPair::new(pp.a, pp.b, 4, wu, wl)?)
        }
        (obj, to) => bail!("no arrow {:?} -> {:?}", obj.kind(), to),
    })
}

/// Shortest chain of arrows from one kind to another.
fn route(from: Kind, to: Kind) -> Option<Vec<Kind>> {
    let mut prev: HashMap<Kind, Kind> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = prev[&cur];
                path.push(cur);
            }
            path.pop();
            path.reverse();
            return Some(path);
        }
        for &(a, b) in ARROWS {
            if a == x && b != from && !prev.contains_key(&b) {
                prev.insert(b, a);
                queue.push_back(b);
            }
        }
    }
    None
}

fn network_json(d: &OPlusDiagram) -> Result<Value> {
    let le = le_form(d)?;
    let net = build_network(&le)?;
    let ones = vec![q(1); net.variable_count()];
    Ok(json!({
        "diagram": le.to_json(),
        "sources": net.sources(),
        "variables": net.variables(),
        "unit_matrix": parameterize(&le, &ones)?.to_json(),
    }))
}

fn read_input(io: &Input) -> Result<Value> {
    let text = match &io.input {
        Some(path) => {
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
        }
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    let text = text.trim();
    if text.is_empty() {
        bail!(usage("expected a JSON object on stdin or via --input"));
    }
    // Bare Dyck words such as `++-+--` are accepted as strings.
    Ok(serde_json::from_str(text).unwrap_or_else(|_| Value::String(text.to_string())))
}

fn need(x: Option<usize>, name: &str) -> Result<usize> {
    x.ok_or_else(|| usage(format!("--{name} is required")))
}

fn enumerate(kind: Kind, f: &Family) -> Result<Vec<Object>> {
    let n = need(f.n, "n")?;
    let k = need(f.k, "k")?;
    let m4 = |what: &str| -> Result<()> {
        match f.m {
            None | Some(4) => Ok(()),
            Some(m) => Err(usage(format!("{what} exist for m = 4 only, got m = {m}"))),
        }
    };
    let out = match kind {
        Kind::Tree => {
            m4("trees")?;
            enumerate_trees(n, k)?
                .into_iter()
                .map(Object::Tree)
                .collect()
        }
        Kind::Paths => {
            m4("path pairs")?;
            enumerate_path_pairs(n, k, 4)?
                .into_iter()
                .map(Object::Paths)
                .collect()
        }
        Kind::Dyck => {
            m4("Dyck paths")?;
            enumerate_dyck(n, k)?
                .into_iter()
                .map(Object::Dyck)
                .collect()
        }
        Kind::PlanePartition => {
            m4("plane partitions")?;
            enumerate_path_pairs(n, k, 4)?
                .into_iter()
                .map(|p| step(&Object::Paths(p), Kind::PlanePartition))
                .collect::<Result<_>>()?
        }
        Kind::Diagram => enumerate_diagrams(n, k, need(f.m, "m")?)?
            .into_iter()
            .map(Object::Diagram)
            .collect(),
        Kind::Le => {
            if k > n {
                bail!(usage(format!("need k <= n, got k={k}, n={n}")));
            }
            OPlusDiagram::enumerate_le_diagrams(k, n)
                .into_iter()
                .map(Object::Diagram)
                .collect()
        }
        Kind::Permutation => bcfw_permutations(n, k, need(f.m, "m")?)?
            .into_iter()
            .map(Object::Permutation)
            .collect(),
        Kind::Graph => enumerate_bcfw_graphs(n, k, need(f.m, "m")?)?
            .into_iter()
            .map(Object::Graph)
            .collect(),
        Kind::Network => enumerate_diagrams(n, k, need(f.m, "m")?)?
            .iter()
            .map(|d| network_json(d).map(Object::Network))
            .collect::<Result<_>>()?,
    };
    Ok(out)
}

fn print_objects(objs: &[Object], format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => {
            serde_json::to_string_pretty(&objs.iter().map(Object::to_json).collect::<Vec<_>>())?
                + "\n"
        }
        Format::Tsv => objs.iter().map(|o| o.to_line() + "\n").collect(),
        Format::Ascii => objs
            .iter()
            .map(|o| o.render(Format::Ascii))
            .collect::<Result<Vec<_>>>()?
            .join("\n"),
        Format::Svg => bail!(usage("svg output of a list: use `render --out-dir`")),
    })
}

fn sample(f: &Family, index: Option<usize>, count: usize, seed: u64, io: &Input) -> Result<Value> {
    let d = match index {
        Some(i) => {
            let family = enumerate_diagrams(need(f.n, "n")?, need(f.k, "k")?, need(f.m, "m")?)?;
            let len = family.len();
            family
                .into_iter()
                .nth(i)
                .ok_or_else(|| usage(format!("--index {i} out of range 0..{len}")))?
        }
        None => OPlusDiagram::from_json(&read_input(io)?)?,
    };
    let le = le_form(&d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..count)
        .map(|_| {
            let s = sample_cell(&le, &mut rng)?;
            let mut v = s.to_json();
            v["diagram"] = d.to_json();
            v["permutation"] = d.pipe_dream_permutation().to_json();
            v["plucker"] = plucker(&s.matrix)?.to_json();
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Value::Array(samples))
}

fn verify(kind: VerifyKind, v: &Value, seed: u64) -> Result<Vec<(String, bool)>> {
    let mut checks = Vec::new();
    let mut push = |name: &str, ok: bool| checks.push((name.to_string(), ok));
    match kind {
        VerifyKind::Tree => {
            let t = BinaryTree::from_json(v)?;
            let g = tree_to_graph(&t)?;
            push("graph -> tree returns the tree", graph_to_tree(&g)? == t);
            let lhs = omega_ld(&omega_tl(&t)?)?.pipe_dream_permutation();
            push(
                "diagram permutation is c_n^2 of the trip permutation",
                lhs == g.trip_permutation()?.left_shift(2),
            );
        }
        VerifyKind::Graph => {
            let g = PlabicGraph::from_json(v)?;
            push("trip permutation is defined", g.trip_permutation().is_ok());
            if let Ok(t) = graph_to_tree(&g) {
                push("tree -> graph returns the graph", tree_to_graph(&t)? == g);
            }
        }
        VerifyKind::Paths => {
            let p = PathPair::from_json(v)?;
            push(
                "dyck -> paths returns the pair",
                omega_pl(&omega_lp(&p)?)? == p,
            );
            let pp = step(&Object::Paths(p.clone()), Kind::PlanePartition)?;
            let back = step(&pp, Kind::Paths)?;
            push(
                "plane partition -> paths returns the pair",
                matches!(back, Object::Paths(q) if q == p),
            );
            let d = omega_ld(&p)?;
            push(
                "diagram has the pair's type",
                d.k() == p.k() && d.n() == p.n(),
            );
        }
        VerifyKind::Dyck => {
            let p = DyckPath::from_json(v)?;
            push(
                "paths -> dyck returns the path",
                omega_lp(&omega_pl(&p)?)? == p,
            );
        }
        VerifyKind::PlanePartition => {
            let pp: PlanePartition = serde_json::from_value(v.clone())?;
            push("entries form a plane partition", pp.is_valid());
            let paths = plane_partition_to_paths(&pp)?;
            push(
                "paths -> plane partition returns it",
                paths_to_plane_partition(pp.a, pp.b, &paths)? == pp,
            );
        }
        VerifyKind::Diagram => {
            let d = OPlusDiagram::from_json(v)?;
            let le = le_form(&d)?;
            push(
                "Le-normalization keeps the permutation",
                le.pipe_dream_permutation() == d.pipe_dream_permutation(),
            );
            let s = sample_cell(&le, &mut ChaCha8Rng::seed_from_u64(seed))?;
            push(
                "a sampled point lies in the cell",
                positroid_membership(&s.matrix, &d)?,
            );
            if d.k() == 2 {
                let classes = matching_classes(&d);
                if !classes.is_empty() {
                    push("matches exactly one k=2 template", classes.len() == 1);
                }
            }
        }
        VerifyKind::Sample => {
            let d = OPlusDiagram::from_json(&v["diagram"])?;
            let m = RationalMatrix::from_json(&v["matrix"])?;
            push("point lies in the cell", positroid_membership(&m, &d)?);
        }
    }
    Ok(checks)
}

fn experiment(
    id: ExperimentId,
    n: Option<usize>,
    n_max: Option<usize>,
    k: Option<usize>,
    m: Option<usize>,
    samples: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    Ok(match id {
        ExperimentId::Counts => {
            let n_max = n_max.unwrap_or(10);
            if !(4..=12).contains(&n_max) {
                bail!(usage("counts needs 4 <= --n-max <= 12"));
            }
            count_report(n_max)?
        }
        ExperimentId::Disjointness => {
            disjointness_experiment(need(n, "n")?, need(k, "k")?, need(m, "m")?, samples, seed)?
        }
        ExperimentId::M3Counterexample => m3_counterexample(seed)?,
        ExperimentId::Sweeps => {
            let n_max = n_max.unwrap_or(8);
            if !(4..=9).contains(&n_max) {
                bail!(usage("sweeps needs 4 <= --n-max <= 9"));
            }
            conjecture_sweeps(n_max, samples, seed)?
        }
    })
}

fn run(cli: Cli, out: &mut impl Write) -> Result<ExitCode> {
    match cli.verb {
        Verb::Enumerate {
            kind,
            family,
            format,
        } => {
            let objs = enumerate(kind, &family)?;
            out.write_all(print_objects(&objs, format)?.as_bytes())?;
        }
        Verb::Convert {
            from,
            to,
            shift,
            io,
            format,
        } => {
            let from = if from == Kind::Le {
                Kind::Diagram
            } else {
                from
            };
            let to = if to == Kind::Le { Kind::Diagram } else { to };
            let path = route(from, to)
                .ok_or_else(|| usage(format!("no conversion from {from:?} to {to:?}")))?;
            if shift != 0 && to != Kind::Permutation {
                bail!(usage("--shift applies to permutations only"));
            }
            let mut obj = Object::parse(from, &read_input(&io)?)?;
            for kind in path {
                obj = step(&obj, kind)?;
            }
            if let Object::Permutation(p) = &obj {
                obj = Object::Permutation(p.left_shift(shift));
            }
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&obj.to_json())? + "\n",
                Format::Tsv => obj.to_line() + "\n",
                f => obj.render(f)?,
            };
            out.write_all(text.as_bytes())?;
        }
        Verb::Sample {
            family,
            index,
            count,
            seed,
            io,
        } => {
            let v = sample(&family, index, count, seed, &io)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
        }
        Verb::Verify { kind, seed, io } => {
            let checks = verify(kind, &read_input(&io)?, seed)?;
            let ok = checks.iter().all(|(_, ok)| *ok);
            let verdict = if ok {
                Verdict::Pass
            } else {
                Verdict::Violation
            };
            let report = json!({
                "verdict": verdict,
                "checks": checks
                    .iter()
                    .map(|(name, ok)| json!({"check": name, "ok": ok}))
                    .collect::<Vec<_>>(),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            if !ok {
                return Ok(ExitCode::from(1));
            }
        }
        Verb::Experiment {
            id,
            n,
            n_max,
            k,
            m,
            samples,
            seed,
            format,
        } => {
            let report = experiment(id, n, n_max, k, m, samples, seed)?;
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&report.to_json())? + "\n",
                Format::Tsv => report.to_tsv(),
                _ => bail!(usage("experiments print json or tsv")),
            };
            out.write_all(text.as_bytes())?;
            if report.verdict == Verdict::Violation {
                return Ok(ExitCode::from(1));
            }
        }
        Verb::Render {
            kind,
            family,
            out_dir,
            io,
            format,
        } => {
            if !matches!(format, Format::Svg | Format::Ascii) {
                bail!(usage("render prints svg or ascii"));
            }
            match out_dir {
                Some(dir) => {
                    let objs = enumerate(kind, &family)?;
                    fs::create_dir_all(&dir)?;
                    let ext = if format == Format::Svg { "svg" } else { "txt" };
                    let name = format!("{kind:?}").to_lowercase();
                    for (i, o) in objs.iter().enumerate() {
                        let path = dir.join(format!("{name}-{i}.{ext}"));
                        fs::write(&path, o.render(format)?)
                            .with_context(|| format!("writing {}", path.display()))?;
                    }
                    writeln!(out, "{}", json!({"written": objs.len(), "dir": dir}))?;
                }
                None => {
                    let obj = Object::parse(kind, &read_input(&io)?)?;
                    out.write_all(obj.render(format)?.as_bytes())?;
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
