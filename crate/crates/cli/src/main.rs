use std::fs;
use std::io::{self, BufWriter, Write};
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use mpreprog::dynamics::{fixed_points, minimal_trap_spaces, smallest_trap_space};
use mpreprog::ensembles::{
    domain_attractors, enumerate_domain, parse_multi_model, solve_ensemble, Domain,
};
use mpreprog::json::{
    assignment_to_json, configuration_to_json, parse_assignment, subcube_to_json,
};
use mpreprog::oracle::{async_stg, stg_to_dot};
use mpreprog::{
    influence_graph, parse_booleannet, serialize_booleannet, solve_with, BooleanNetwork,
    ComponentId, Framing, InfluenceGraph, Limits, MonotoneNetwork, Quantifier, ReprogramQuery,
    Target,
};

/// Marker reprogramming of locally-monotone Boolean networks under
/// most-permissive dynamics.
#[derive(Parser, Debug)]
#[command(name = "mpreprog", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimal perturbations making fixed points or attractors match a marker
    Reprogram {
        /// Model in BooleanNet format
        model: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
        /// Print solutions as soon as they are found, in discovery order
        #[arg(long)]
        stream: bool,
    },
    /// Fixed points, one JSON object per line
    Fixpoints { model: PathBuf },
    /// Minimal trap spaces, free components printed as "*"
    Attractors { model: PathBuf },
    /// Smallest trap space containing a configuration
    Trapspace {
        model: PathBuf,
        /// Total configuration as a JSON object
        config: String,
    },
    /// Signed influence graph in DOT
    InfluenceGraph { model: PathBuf },
    /// Asynchronous state transition graph in DOT
    Stg {
        model: PathBuf,
        /// Restrict to configurations reachable from this JSON configuration
        #[arg(long)]
        from: Option<String>,
    },
    /// Analyses over ensembles of networks
    Ensemble {
        #[command(subcommand)]
        verb: EnsembleVerb,
    },
}

#[derive(Args, Debug)]
struct QueryArgs {
    /// Marker as a JSON object, e.g. '{"C": 1}'
    marker: String,
    /// Maximum number of perturbed components
    k: usize,
    /// Reprogram fixed points instead of attractors
    #[arg(long)]
    fixpoints: bool,
    /// Only consider what is reachable from this JSON configuration
    #[arg(long, value_name = "Z")]
    reachable_from: Option<String>,
    /// Do not require a fixed point to exist after perturbation
    #[arg(long)]
    allow_no_fixpoint: bool,
    /// Comma-separated components that must not be perturbed
    #[arg(long, value_name = "A,B,..")]
    exclude: Option<String>,
    /// Decide attractor problems through their complement
    #[arg(long)]
    complement: bool,
}

#[derive(Args, Debug)]
struct DomainArgs {
    /// Directory of .bnet files, multi-model .bnet file, or signed edge list
    domain: PathBuf,
    /// Only networks with exactly the given influence graph
    #[arg(long)]
    exact: bool,
    /// Maximum number of clauses per local function
    #[arg(long)]
    max_clauses: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum EnsembleVerb {
    /// Print every member as a BooleanNet block
    Enumerate {
        #[command(flatten)]
        domain: DomainArgs,
    },
    /// Attractors of every member
    Attractors {
        #[command(flatten)]
        domain: DomainArgs,
    },
    /// Reprogramming over all members
    Reprogram {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        query: QueryArgs,
        /// Solutions must work for every member
        #[arg(long, conflicts_with = "existential")]
        universal: bool,
        /// Solutions must work for at least one member
        #[arg(long)]
        existential: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli.command, &mut out).and_then(|lines| {
        out.flush()?;
        Ok(lines)
    });
    match result {
        Ok(0) => ExitCode::from(1),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Runs one command and returns the number of results printed.
fn run(command: Command, out: &mut impl Write) -> Result<usize> {
    let limits = Limits::default();
    match command {
        Command::Reprogram {
            model,
            query,
            stream,
        } => {
            let net = read_model(&model)?;
            let f = MonotoneNetwork::new(&net)?;
            let q = build_query(net.names(), &query)?;
            let framing = framing(&query);
            if stream {
                let mut count = 0;
                let mut failed = None;
                solve_with(&f, &q, framing, &limits, |p| {
                    count += 1;
                    match writeln!(out, "{}", assignment_to_json(net.names(), p))
                        .and_then(|_| out.flush())
                    {
                        Ok(()) => ControlFlow::Continue(()),
                        Err(e) => {
                            failed = Some(e);
                            ControlFlow::Break(())
                        }
                    }
                })?;
                if let Some(e) = failed {
                    return Err(e.into());
                }
                Ok(count)
            } else {
                let solutions =
                    solve_with(&f, &q, framing, &limits, |_| ControlFlow::Continue(()))?;
                for p in solutions.iter() {
                    writeln!(out, "{}", assignment_to_json(net.names(), p))?;
                }
                Ok(solutions.len())
            }
        }
        Command::Fixpoints { model } => {
            let net = read_model(&model)?;
            let fps = fixed_points(&MonotoneNetwork::new(&net)?);
            for x in &fps {
                writeln!(out, "{}", configuration_to_json(net.names(), x))?;
            }
            Ok(fps.len())
        }
        Command::Attractors { model } => {
            let net = read_model(&model)?;
            let attractors = minimal_trap_spaces(&MonotoneNetwork::new(&net)?, &limits)?;
            for h in &attractors {
                writeln!(out, "{}", subcube_to_json(net.names(), h))?;
            }
            Ok(attractors.len())
        }
        Command::Trapspace { model, config } => {
            let net = read_model(&model)?;
            let x = parse_assignment(net.names(), &config)?
                .to_configuration(net.len())
                .context("the configuration must assign every component")?;
            let h = smallest_trap_space(&MonotoneNetwork::new(&net)?, &x);
            writeln!(out, "{}", subcube_to_json(net.names(), &h))?;
            Ok(1)
        }
        Command::InfluenceGraph { model } => {
            let net = read_model(&model)?;
            out.write_all(influence_graph(&net)?.to_dot().as_bytes())?;
            Ok(1)
        }
        Command::Stg { model, from } => {
            let net = read_model(&model)?;
            let init = match from {
                Some(text) => Some(
                    parse_assignment(net.names(), &text)?
                        .to_configuration(net.len())
                        .context("the initial configuration must assign every component")?,
                ),
                None => None,
            };
            let stg = async_stg(&net, init.as_ref(), &limits)?;
            out.write_all(stg_to_dot(&net, &stg).as_bytes())?;
            Ok(1)
        }
        Command::Ensemble { verb } => run_ensemble(verb, out, &limits),
    }
}

fn run_ensemble(verb: EnsembleVerb, out: &mut impl Write, limits: &Limits) -> Result<usize> {
    match verb {
        EnsembleVerb::Enumerate { domain } => {
            let members = load_domain(&domain, limits)?;
            for (i, m) in members.iter().enumerate() {
                writeln!(out, "--- bn{i}")?;
                out.write_all(serialize_booleannet(m).as_bytes())?;
            }
            Ok(members.len())
        }
        EnsembleVerb::Attractors { domain } => {
            let members = load_domain(&domain, limits)?;
            let mut count = 0;
            for (i, attractors) in domain_attractors(&members, limits)?.iter().enumerate() {
                for h in attractors {
                    writeln!(
                        out,
                        "{{\"network\": {i}, \"attractor\": {}}}",
                        subcube_to_json(members[i].names(), h)
                    )?;
                    count += 1;
                }
            }
            Ok(count)
        }
        EnsembleVerb::Reprogram {
            domain,
            query,
            universal,
            existential,
        } => {
            let members = load_domain(&domain, limits)?;
            let names = members[0].names();
            let mut q = build_query(names, &query)?;
            let target = q.target;
            let quantifier = match (universal, existential) {
                (true, _) => Quantifier::Universal,
                (_, true) => Quantifier::Existential,
                _ => target.default_quantifier(),
            };
            if quantifier == Quantifier::Universal && target == Target::FixedPoints {
                // members without fixed points satisfy the universal property
                q.ensure_exists = false;
            }
            let solutions = solve_ensemble(&members, &q, quantifier, framing(&query), limits)?;
            for p in solutions.iter() {
                writeln!(out, "{}", assignment_to_json(names, p))?;
            }
            Ok(solutions.len())
        }
    }
}

fn read_model(path: &Path) -> Result<BooleanNetwork> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_booleannet(&text).with_context(|| format!("in {}", path.display()))
}

fn framing(query: &QueryArgs) -> Framing {
    if query.complement {
        Framing::Complement
    } else {
        Framing::Direct
    }
}

fn build_query(names: &[ComponentId], args: &QueryArgs) -> Result<ReprogramQuery> {
    let marker = parse_assignment(names, &args.marker).context("invalid marker")?;
    let target = if args.fixpoints {
        Target::FixedPoints
    } else {
        Target::Attractors
    };
    let mut query = ReprogramQuery::new(target, marker, args.k);
    if let Some(z) = &args.reachable_from {
        query = query.with_source(parse_assignment(names, z).context("invalid --reachable-from")?);
    }
    if let Some(list) = &args.exclude {
        query = query.with_exclude(parse_exclude(names, list)?);
    }
    if args.allow_no_fixpoint {
        query = query.allow_no_fixpoint();
    }
    Ok(query)
}

fn parse_exclude(names: &[ComponentId], list: &str) -> Result<Vec<usize>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|name| {
            names
                .iter()
                .position(|n| n.as_str() == name)
                .ok_or_else(|| mpreprog::Error::UnknownComponent(name.to_string()).into())
        })
        .collect()
}

#[derive(Debug, Default, PartialEq)]
struct Sidecar {
    exact: Option<bool>,
    max_clauses: Option<usize>,
}

fn read_sidecar(path: &Path) -> Result<Sidecar> {
    let mut name = path.as_os_str().to_owned();
    name.push(".json");
    let sidecar = PathBuf::from(name);
    if !sidecar.exists() {
        return Ok(Sidecar::default());
    }
    let text = fs::read_to_string(&sidecar)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .with_context(|| format!("invalid JSON in {}", sidecar.display()))?;
    let exact = match value.get("exact") {
        None => None,
        Some(v) => Some(v.as_bool().context("`exact` must be a boolean")?),
    };
    let max_clauses = match value
        .get("max_clauses")
        .or_else(|| value.get("max-clauses"))
    {
        None | Some(serde_json::Value::Null) => None,
        Some(v) => Some(
            v.as_u64()
                .context("`max_clauses` must be a positive integer")? as usize,
        ),
    };
    Ok(Sidecar { exact, max_clauses })
}

fn load_domain(args: &DomainArgs, limits: &Limits) -> Result<Vec<BooleanNetwork>> {
    let path = &args.domain;
    let domain = if path.is_dir() {
        let mut files: Vec<PathBuf> = fs::read_dir(path)?
            .map(|e| e.map(|e| e.path()))
            .collect::<io::Result<_>>()?;
        files.retain(|p| p.extension().is_some_and(|e| e == "bnet"));
        files.sort();
        if files.is_empty() {
            bail!("no .bnet files in {}", path.display());
        }
        Domain::Explicit(files.iter().map(|p| read_model(p)).collect::<Result<_>>()?)
    } else if path.extension().is_some_and(|e| e == "bnet") {
        let text =
            fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let models = parse_multi_model(&text).with_context(|| format!("in {}", path.display()))?;
        Domain::Explicit(models.into_iter().map(|(_, m)| m).collect())
    } else {
        let text =
            fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let graph = InfluenceGraph::parse_edge_list(&text)
            .with_context(|| format!("in {}", path.display()))?;
        let sidecar = read_sidecar(path)?;
        Domain::Implicit {
            graph,
            exact: args.exact || sidecar.exact.unwrap_or(false),
            max_clauses: args.max_clauses.or(sidecar.max_clauses),
        }
    };
    let members = enumerate_domain(&domain, limits)?;
    if members.is_empty() {
        bail!("the domain has no member");
    }
    Ok(members)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(ns: &[&str]) -> Vec<ComponentId> {
        ns.iter().map(|n| ComponentId::new(n).unwrap()).collect()
    }

    fn query(fixpoints: bool, z: Option<&str>) -> QueryArgs {
        QueryArgs {
            marker: r#"{"C": 1}"#.into(),
            k: 2,
            fixpoints,
            reachable_from: z.map(String::from),
            allow_no_fixpoint: false,
            exclude: Some("A, B".into()),
            complement: false,
        }
    }

    #[test]
    fn flags_select_problems() {
        use mpreprog::Problem::*;
        let ns = names(&["A", "B", "C"]);
        let z = Some(r#"{"A": 1, "B": 0, "C": 0}"#);
        assert_eq!(
            build_query(&ns, &query(true, None)).unwrap().problem(),
            MarkerFixpoints
        );
        assert_eq!(
            build_query(&ns, &query(true, z)).unwrap().problem(),
            SourceMarkerFixpoints
        );
        assert_eq!(
            build_query(&ns, &query(false, None)).unwrap().problem(),
            MarkerAttractors
        );
        assert_eq!(
            build_query(&ns, &query(false, z)).unwrap().problem(),
            SourceMarkerAttractors
        );
        let q = build_query(&ns, &query(true, None)).unwrap();
        assert_eq!(q.exclude.iter().copied().collect::<Vec<_>>(), vec![0, 1]);
        assert!(q.ensure_exists);
    }

    #[test]
    fn exclude_rejects_unknown() {
        assert!(parse_exclude(&names(&["A"]), "A,Z").is_err());
        assert_eq!(
            parse_exclude(&names(&["A"]), "").unwrap(),
            Vec::<usize>::new()
        );
    }

    #[test]
    fn sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let edges = dir.path().join("g.edges");
        fs::write(&edges, "A + B\n").unwrap();
        assert_eq!(read_sidecar(&edges).unwrap(), Sidecar::default());
        fs::write(
            dir.path().join("g.edges.json"),
            r#"{"exact": true, "max_clauses": 2}"#,
        )
        .unwrap();
        assert_eq!(
            read_sidecar(&edges).unwrap(),
            Sidecar {
                exact: Some(true),
                max_clauses: Some(2)
            }
        );
    }

    #[test]
    fn cli_parses() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
        let cli = Cli::try_parse_from([
            "mpreprog",
            "reprogram",
            "m.bnet",
            r#"{"C":1}"#,
            "3",
            "--reachable-from",
            "{}",
        ])
        .unwrap();
        assert!(matches!(cli.command, Command::Reprogram { .. }));
        assert!(Cli::try_parse_from(["mpreprog", "reprogram", "m.bnet", "{}", "-1"]).is_err());
    }
}
