//! Subcommands: argument definitions and the JSON each one produces.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use limcan::bricks::{self, Psl};
use limcan::cones;
use limcan::genus0::{self, GluingData, Quartic};
use limcan::graph::{Multigraph, OrderedPartition, Pair};
use limcan::rat::{self, Q};
use limcan::residue::{self, ResidueSpace};
use limcan::setfn::{PolytopeH, SetFunction};
use limcan::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::suites;

/// Exact computations with limit canonical series of nodal curves.
#[derive(Debug, Parser)]
#[command(name = "limcan", version)]
pub struct Cli {
    /// Seed for every random draw; recorded in the output.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON result here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Progress messages on standard error.
    #[arg(long, short, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a graph is connected and report its genus.
    Validate {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Properties and transforms of a set function.
    Setfn {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = SetfnOp::Properties)]
        op: SetfnOp,
    },
    /// A basis of the residue space of a level graph.
    Residue {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        partition: PathBuf,
    },
    /// The set function γ_π.
    Gamma {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        partition: PathBuf,
    },
    /// η, η̂ and ζ of a slope-level pair, with the UpMin transform of η.
    Eta {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        pair: PathBuf,
    },
    /// The slope-level cone of a pair; with `--lengths`, membership of a length function.
    Cone {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        pair: PathBuf,
        #[arg(long)]
        lengths: Option<PathBuf>,
    },
    /// Squash a pair along a circuit (arrow keys, e.g. "e02:- e01:+"), or list its facets.
    Squash {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        pair: PathBuf,
        #[arg(long)]
        circuit: Option<String>,
    },
    /// Permissible slope-level pairs.
    Psl {
        #[arg(long)]
        graph: PathBuf,
        /// Slope bound; the default is 2(g + max valence), grown until stable.
        #[arg(long)]
        bound: Option<i64>,
    },
    /// Full-dimensional bricks of Δ_g, from a graph or from `--labels` and `--genus`.
    Bricks {
        #[arg(long, conflicts_with_all = ["labels", "genus"])]
        graph: Option<PathBuf>,
        #[arg(long, requires = "genus")]
        labels: Option<usize>,
        #[arg(long, requires = "labels")]
        genus: Option<i64>,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
    },
    /// The fan Σ_B of one brick: `B<i>` for the brick at vertex i, or a brick key.
    Fan {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        brick: String,
        #[arg(long)]
        bound: Option<i64>,
    },
    /// The canonical fan Σ, the meet of all Σ_B.
    CanonicalFan {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        bound: Option<i64>,
    },
    /// Permissible pairs whose open cone contains a length function.
    PairsAt {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        lengths: PathBuf,
        #[arg(long)]
        bound: Option<i64>,
    },
    /// Realize Ŵ and W^exp of a pair on a random genus-0 configuration.
    Realize {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        pair: PathBuf,
        /// Gluing constants per edge; all ones by default.
        #[arg(long, conflicts_with = "quartic")]
        rho: Option<PathBuf>,
        /// A plane quartic whose pencil gives the gluing constants (K4 only).
        #[arg(long)]
        quartic: Option<PathBuf>,
    },
    /// Run the verification suites.
    Verify {
        /// `all` or one suite name.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SetfnOp {
    Properties,
    Upmin,
    Downsum,
    Adjoint,
    Polytope,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Setfn { .. } => "setfn",
            Command::Residue { .. } => "residue",
            Command::Gamma { .. } => "gamma",
            Command::Eta { .. } => "eta",
            Command::Cone { .. } => "cone",
            Command::Squash { .. } => "squash",
            Command::Psl { .. } => "psl",
            Command::Bricks { .. } => "bricks",
            Command::Fan { .. } => "fan",
            Command::CanonicalFan { .. } => "canonical-fan",
            Command::PairsAt { .. } => "pairs-at",
            Command::Realize { .. } => "realize",
            Command::Verify { .. } => "verify",
        }
    }
}

/// A finished run: the JSON document and the process exit code.
#[derive(Debug)]
pub struct Outcome {
    pub json: Value,
    pub exit: i32,
}

/// Runs a command. Errors become a JSON document with the matching exit code.
pub fn run(cli: &Cli) -> Outcome {
    let head = |body: (&str, Value)| {
        let mut doc = json!({ "command": cli.command.name(), "seed": cli.seed });
        doc[body.0] = body.1;
        doc
    };
    match execute(cli) {
        Ok((result, exit)) => Outcome { json: head(("result", result)), exit },
        Err(e) => {
            let kind = match e {
                Error::Input(_) => "input",
                Error::Guard(_) => "guard",
                Error::Cap(_) => "cap",
                Error::Property(_) => "property",
            };
            Outcome { json: head(("error", json!({ "kind": kind, "message": e.to_string() }))), exit: e.exit_code() }
        }
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Multigraph> {
    Multigraph::from_json(&read_json(path)?)
}

fn read_pair(g: &Multigraph, path: &Path) -> Result<Pair> {
    Pair::from_json(g, &read_json(path)?)
}

fn setfn_json(f: &SetFunction) -> Value {
    f.to_json()
}

fn polytope_json(p: &PolytopeH) -> Value {
    let rows = |rows: &[(Vec<Q>, Q)]| -> Vec<Value> {
        rows.iter()
            .map(|(a, b)| json!({ "coeffs": a.iter().map(rat::fmt).collect::<Vec<_>>(), "rhs": rat::fmt(b) }))
            .collect()
    };
    json!({
        "ambient": p.ambient.elements(),
        "inequalities": rows(&p.inequalities),
        "equalities": rows(&p.equalities),
        "dimension": p.dimension(),
    })
}

fn psl_for(g: &Multigraph, bound: Option<i64>, verbose: bool) -> Result<Psl> {
    let psl = bricks::enumerate_psl(g, bound)?;
    if verbose {
        eprintln!("{} permissible pairs over {} bricks (slope bound {})", psl.pairs.len(), psl.bricks.len(), psl.bound);
    }
    Ok(psl)
}

fn fan_json(g: &Multigraph, psl: &Psl, fan: &bricks::Fan) -> Value {
    let mut v = fan.to_json(g, psl);
    v["maximal"] = json!(fan.maximal());
    v
}

fn execute(cli: &Cli) -> Result<(Value, i32)> {
    let value = match &cli.command {
        Command::Validate { graph } => {
            let g = read_graph(graph)?;
            let v = g.validate();
            json!({ "connected": v.connected, "genus": g.total_genus(), "cycle_rank": v.genus, "graph": g.to_json() })
        }
        Command::Setfn { input, op } => {
            let f = SetFunction::from_json(&read_json(input)?)?;
            match op {
                SetfnOp::Properties => {
                    let p = f.properties();
                    json!({
                        "function": setfn_json(&f),
                        "submodular": p.submodular,
                        "supermodular": p.supermodular,
                        "nondecreasing": p.nondecreasing,
                        "nonnegative": p.nonnegative,
                        "positive": p.positive,
                        "simple": p.simple,
                        "range": rat::fmt(&p.range),
                        "upmin": setfn_json(&f.upmin()),
                    })
                }
                SetfnOp::Upmin => setfn_json(&f.upmin()),
                SetfnOp::Downsum => setfn_json(&f.downsum()),
                SetfnOp::Adjoint => setfn_json(&f.adjoint()),
                SetfnOp::Polytope => polytope_json(&f.polytope_hrep()?),
            }
        }
        Command::Residue { graph, partition } => {
            let g = read_graph(graph)?;
            let pi = OrderedPartition::from_json(&g, &read_json(partition)?)?;
            ResidueSpace::new(&g, &pi)?.to_json(&g)
        }
        Command::Gamma { graph, partition } => {
            let g = read_graph(graph)?;
            let pi = OrderedPartition::from_json(&g, &read_json(partition)?)?;
            setfn_json(&residue::gamma(&g, &pi)?)
        }
        Command::Eta { graph, pair } => {
            let g = read_graph(graph)?;
            let p = read_pair(&g, pair)?;
            let eta = residue::eta(&g, &p)?;
            json!({
                "pair": p.to_json(&g),
                "gamma": setfn_json(&residue::gamma(&g, &p.pi)?),
                "zeta": setfn_json(&p.s.zeta(&g)),
                "eta_hat": setfn_json(&residue::eta_hat(&g, &p)?),
                "eta": setfn_json(&eta),
                "upmin_eta": setfn_json(&eta.upmin()),
                "positive": eta.is_positive(),
                "simple": eta.is_simple(),
            })
        }
        Command::Cone { graph, pair, lengths } => {
            let g = read_graph(graph)?;
            let p = read_pair(&g, pair)?;
            let cone = cones::cone_hrep(&g, &p)?;
            let mut v = cone.to_json(&g);
            v["dimension"] = json!(cones::dimension(&g, &p)?);
            v["int_genus"] = json!(cones::int_genus(&g, &p));
            v["interior_point"] = cone.interior_point().map_or(Value::Null, |x| g.lengths_to_json(&x));
            if let Some(path) = lengths {
                let l = g.lengths_from_json(&read_json(path)?)?;
                v["lengths"] = g.lengths_to_json(&l);
                v["in_open_cone"] = json!(cone.interior_membership(&l));
                v["in_closed_cone"] = json!(cone.contains(&l));
            }
            v
        }
        Command::Squash { graph, pair, circuit } => {
            let g = read_graph(graph)?;
            let p = read_pair(&g, pair)?;
            match circuit {
                Some(text) => {
                    let z = find_circuit(&g, &p, text)?;
                    let q = cones::squash(&g, &p, &z)?;
                    json!({
                        "pair": p.to_json(&g),
                        "squashed": q.to_json(&g),
                        "label": q.label(&g),
                        "int_genus": [cones::int_genus(&g, &p), cones::int_genus(&g, &q)],
                    })
                }
                None => {
                    let facets: Vec<Value> = cones::facets(&g, &p)?
                        .into_iter()
                        .map(|f| {
                            json!({
                                "pair": f.pair.to_json(&g),
                                "label": f.pair.label(&g),
                                "circuit": f.circuit,
                                "alternatives": f.alternatives,
                            })
                        })
                        .collect();
                    json!({ "pair": p.to_json(&g), "facets": facets })
                }
            }
        }
        Command::Psl { graph, bound } => {
            let g = read_graph(graph)?;
            psl_for(&g, *bound, cli.verbose)?.to_json(&g)
        }
        Command::Bricks { graph, labels, genus, cap } => {
            let (ground, genus) = match (graph, labels, genus) {
                (Some(path), _, _) => {
                    let g = read_graph(path)?;
                    (g.vertices().clone(), g.total_genus() as i64)
                }
                (None, Some(n), Some(genus)) => (limcan::setfn::GroundSet::numbered("v", *n), *genus),
                _ => return Err(Error::Input("give --graph, or --labels with --genus".into())),
            };
            let all = bricks::enumerate_bricks(ground.len(), genus, *cap)?;
            let volume: Q = all.iter().map(|b| b.volume()).sum();
            json!({
                "genus": genus,
                "count": all.len(),
                "total_volume": rat::fmt(&volume),
                "bricks": all.iter().map(|b| {
                    let mut v = b.to_json(&ground);
                    v["volume"] = json!(rat::fmt(&b.volume()));
                    v
                }).collect::<Vec<_>>(),
            })
        }
        Command::Fan { graph, brick, bound } => {
            let g = read_graph(graph)?;
            let psl = psl_for(&g, *bound, cli.verbose)?;
            let index = brick_index(&g, &psl, brick)?;
            let fan = bricks::fan_for_brick(&g, &psl, index)?;
            let mut v = fan_json(&g, &psl, &fan);
            v["brick"] = psl.bricks[index].to_json(g.vertices());
            v
        }
        Command::CanonicalFan { graph, bound } => {
            let g = read_graph(graph)?;
            let psl = psl_for(&g, *bound, cli.verbose)?;
            fan_json(&g, &psl, &bricks::canonical_fan(&g, &psl)?)
        }
        Command::PairsAt { graph, lengths, bound } => {
            let g = read_graph(graph)?;
            let l = g.lengths_from_json(&read_json(lengths)?)?;
            let psl = psl_for(&g, *bound, cli.verbose)?;
            let pairs: Vec<Value> = psl
                .pairs_at(&l)
                .into_iter()
                .map(|i| {
                    let pp = &psl.pairs[i];
                    json!({
                        "pair": pp.pair.to_json(&g),
                        "label": pp.pair.label(&g),
                        "bricks": pp.bricks.iter().map(|&b| psl.bricks[b].key()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            json!({ "lengths": g.lengths_to_json(&l), "pairs": pairs })
        }
        Command::Realize { graph, pair, rho, quartic } => {
            let g = read_graph(graph)?;
            let p = read_pair(&g, pair)?;
            let rho = match (rho, quartic) {
                (Some(path), _) => GluingData::from_json(&g, &read_json(path)?)?,
                (None, Some(path)) => {
                    if g.num_edges() != 6 {
                        return Err(Error::Input("quartic gluing data needs the six edges of K4".into()));
                    }
                    GluingData::new(&g, genus0::rho_from_quartic(&Quartic::from_json(&read_json(path)?)?)?)?
                }
                (None, None) => GluingData::ones(&g),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let mut v = genus0::realize(&g, &p, &rho, cli.seed, &mut rng)?.to_json(&g);
            v["rho"] = rho.to_json(&g);
            v
        }
        Command::Verify { suite } => {
            let reports = suites::run(suite, cli.seed)?;
            for r in &reports {
                if cli.verbose {
                    eprintln!("{}", r.line());
                }
            }
            let passed = reports.iter().all(suites::SuiteReport::passed);
            let v = json!({
                "passed": passed,
                "suites": reports.iter().map(suites::SuiteReport::to_json).collect::<Vec<_>>(),
            });
            return Ok((v, if passed { 0 } else { 4 }));
        }
    };
    Ok((value, 0))
}

/// `B<i>` names the brick at vertex `i` of `Δ_g`; anything else is a brick key.
fn brick_index(g: &Multigraph, psl: &Psl, name: &str) -> Result<usize> {
    let key = match name.strip_prefix('B').and_then(|i| i.parse::<usize>().ok()) {
        Some(i) if i < g.n() => bricks::vertex_brick(g.n(), psl.genus, i).key(),
        Some(i) => return Err(Error::Input(format!("brick B{i}: the graph has {} vertices", g.n()))),
        None => name.to_string(),
    };
    psl.brick_index(&key).ok_or_else(|| Error::Input(format!("no full-dimensional brick with key {key}")))
}

/// The essential circuit with these arc labels, in any rotation.
fn find_circuit(g: &Multigraph, p: &Pair, text: &str) -> Result<Vec<usize>> {
    let want: Vec<&str> = text.split_whitespace().collect();
    let (gg, zs) = cones::essential_circuits(g, p)?;
    zs.into_iter()
        .find(|z| {
            let labels = gg.label_seq(z);
            labels.len() == want.len() && (0..labels.len()).any(|r| (0..labels.len()).all(|i| labels[(i + r) % labels.len()] == want[i]))
        })
        .ok_or_else(|| Error::Input(format!("no essential circuit {text:?}")))
}
