//! Reasoning over ensembles of locally-monotone networks: explicit lists of
//! networks, or every network compatible with a signed influence graph.
//!
//! A perturbation is an existential solution when it works for at least one
//! member, and a universal solution when it works for all of them.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use crate::bnet::{parse_booleannet, serialize_booleannet};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::network::{BooleanNetwork, ComponentId, Expr};
use crate::reprogramming::{
    check_perturbation, enumerate_minimal, Framing, ReprogramQuery, SolutionSet, Target,
};
use crate::state::{PartialAssignment, Subhypercube};
use crate::unate::{InfluenceGraph, MonotoneNetwork, Sign};

/// Largest in-degree for which local functions are enumerated.
pub const MAX_DOMAIN_INDEGREE: usize = 4;

#[derive(Debug, Clone)]
pub enum Domain {
    /// An explicit, nonempty list of networks over the same components.
    Explicit(Vec<BooleanNetwork>),
    /// Every locally-monotone network whose influence graph is included in
    /// (or, when `exact`, equal to) `graph`. `max_clauses` bounds the number
    /// of clauses of each local function in irredundant DNF.
    Implicit {
        graph: InfluenceGraph,
        exact: bool,
        max_clauses: Option<usize>,
    },
}

impl Domain {
    pub fn from_graph(graph: InfluenceGraph, exact: bool) -> Self {
        Domain::Implicit {
            graph,
            exact,
            max_clauses: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    Existential,
    Universal,
}

/// Materializes the members of a domain, without semantic duplicates.
///
/// Implicit domains are enumerated node by node: each local function is an
/// irredundant monotone DNF over the signed literals of its regulators. The
/// members are the cartesian product, the first node varying slowest.
pub fn enumerate_domain(domain: &Domain, limits: &Limits) -> Result<Vec<BooleanNetwork>> {
    match domain {
        Domain::Explicit(members) => align_members(members),
        Domain::Implicit {
            graph,
            exact,
            max_clauses,
        } => enumerate_graph_domain(graph, *exact, *max_clauses, limits),
    }
}

fn align_members(members: &[BooleanNetwork]) -> Result<Vec<BooleanNetwork>> {
    let Some(first) = members.first() else {
        return Err(Error::InvalidQuery("empty ensemble".into()));
    };
    let names = first.names();
    members
        .iter()
        .map(|m| {
            if m.names() == names {
                return Ok(m.clone());
            }
            let mut sorted_a: Vec<_> = m.names().to_vec();
            let mut sorted_b: Vec<_> = names.to_vec();
            sorted_a.sort();
            sorted_b.sort();
            if sorted_a != sorted_b {
                return Err(Error::InvalidQuery(
                    "ensemble members have different components".into(),
                ));
            }
            // reorder to the first member's declaration order
            let position = |i: usize| names.iter().position(|n| n == m.name(i)).unwrap();
            let mut out = BooleanNetwork::new();
            for n in names {
                out.declare(n)?;
            }
            for i in 0..m.len() {
                out.set_rule(position(i), m.rule(i).remap(&position));
            }
            Ok(out)
        })
        .collect()
}

/// Distinct regulators of a node with their allowed signs.
type Regulators = Vec<(usize, Vec<Sign>)>;

/// A unate function of the regulators of one node: truth table indexed by
/// the regulator values (regulator `k` is bit `k`).
#[derive(Debug, Clone, PartialEq, Eq)]
struct NodeFunction {
    table: u16,
    /// Polarity of each essential regulator, `None` when unused.
    signs: Vec<Option<Sign>>,
    clauses: Vec<Vec<usize>>,
}

fn table_bit(table: u16, idx: usize) -> bool {
    table >> idx & 1 == 1
}

/// All monotone (non-decreasing) truth tables over `r ≤ 4` variables.
fn monotone_tables(r: usize) -> Vec<u16> {
    let points = 1usize << r;
    let limit: u32 = 1 << points;
    (0..limit)
        .map(|t| t as u16)
        .filter(|&t| {
            (0..points).all(|p| {
                (0..r).all(|k| p >> k & 1 == 1 || !table_bit(t, p) || table_bit(t, p | 1 << k))
            })
        })
        .collect()
}

fn analyse_function(table: u16, r: usize) -> NodeFunction {
    let points = 1usize << r;
    let mut signs = vec![None; r];
    for (k, sign) in signs.iter_mut().enumerate() {
        let (mut up, mut down) = (false, false);
        for p in (0..points).filter(|p| p >> k & 1 == 0) {
            match (table_bit(table, p), table_bit(table, p | 1 << k)) {
                (false, true) => up = true,
                (true, false) => down = true,
                _ => {}
            }
        }
        debug_assert!(!(up && down));
        *sign = match (up, down) {
            (true, _) => Some(Sign::Positive),
            (_, true) => Some(Sign::Negative),
            _ => None,
        };
    }
    // Map into literal space, where the function is non-decreasing, and
    // collect its minimal true points: the clauses of the irredundant DNF.
    let flip: usize = (0..r)
        .filter(|&k| signs[k] == Some(Sign::Negative))
        .map(|k| 1 << k)
        .sum();
    let essential: usize = (0..r).filter(|&k| signs[k].is_some()).map(|k| 1 << k).sum();
    let literal_true = |p: usize| table_bit(table, p ^ flip);
    let mut clauses = Vec::new();
    for p in 0..points {
        if p & !essential != 0 || !literal_true(p) {
            continue;
        }
        let minimal = (0..r).all(|k| p >> k & 1 == 0 || !literal_true(p & !(1 << k)));
        if minimal {
            clauses.push((0..r).filter(|&k| p >> k & 1 == 1).collect());
        }
    }
    NodeFunction {
        table,
        signs,
        clauses,
    }
}

fn node_functions(
    regulators: &[(usize, Vec<Sign>)],
    exact: bool,
    max_clauses: Option<usize>,
    monotone: &[u16],
) -> Vec<NodeFunction> {
    let r = regulators.len();
    let points = 1usize << r;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    // each sign choice maps the monotone functions to unate ones
    let choices: Vec<&Vec<Sign>> = regulators.iter().map(|(_, s)| s).collect();
    let mut pick = vec![0usize; r];
    loop {
        let flip: usize = (0..r)
            .filter(|&k| choices[k][pick[k]] == Sign::Negative)
            .map(|k| 1 << k)
            .sum();
        for &t in monotone {
            let mut table = 0u16;
            for p in 0..points {
                if table_bit(t, p ^ flip) {
                    table |= 1 << p;
                }
            }
            if seen.insert(table) {
                out.push(analyse_function(table, r));
            }
        }
        let mut k = 0;
        while k < r && pick[k] + 1 == choices[k].len() {
            pick[k] = 0;
            k += 1;
        }
        if k == r {
            break;
        }
        pick[k] += 1;
    }
    out.retain(|nf| {
        let exact_ok = !exact
            || nf
                .signs
                .iter()
                .zip(regulators)
                .all(|(s, (_, allowed))| s.is_some_and(|s| allowed == &vec![s]));
        exact_ok && max_clauses.is_none_or(|m| nf.clauses.len() <= m)
    });
    out.sort_by(|a, b| (a.clauses.len(), &a.clauses).cmp(&(b.clauses.len(), &b.clauses)));
    out
}

fn node_expression(nf: &NodeFunction, regulators: &[(usize, Vec<Sign>)]) -> Expr {
    if nf.clauses.iter().any(|c| c.is_empty()) {
        return Expr::Const(true);
    }
    Expr::or(
        nf.clauses
            .iter()
            .map(|clause| {
                Expr::and(
                    clause
                        .iter()
                        .map(|&k| {
                            let var = Expr::Var(regulators[k].0);
                            match nf.signs[k] {
                                Some(Sign::Negative) => Expr::not(var),
                                _ => var,
                            }
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

fn enumerate_graph_domain(
    graph: &InfluenceGraph,
    exact: bool,
    max_clauses: Option<usize>,
    limits: &Limits,
) -> Result<Vec<BooleanNetwork>> {
    let n = graph.nodes().len();
    let mut per_node: Vec<(Regulators, Vec<NodeFunction>)> = Vec::with_capacity(n);
    let mut monotone_cache: Vec<Option<Vec<u16>>> = vec![None; MAX_DOMAIN_INDEGREE + 1];
    for j in 0..n {
        let mut regulators: Vec<(usize, Vec<Sign>)> = Vec::new();
        for (s, sign) in graph.regulators(j) {
            match regulators.iter_mut().find(|(src, _)| *src == s) {
                Some((_, signs)) => signs.push(sign),
                None => regulators.push((s, vec![sign])),
            }
        }
        if regulators.len() > MAX_DOMAIN_INDEGREE {
            return Err(Error::DomainTooLarge(format!(
                "`{}` has {} regulators (at most {MAX_DOMAIN_INDEGREE} supported)",
                graph.nodes()[j],
                regulators.len()
            )));
        }
        let r = regulators.len();
        let monotone = monotone_cache[r].get_or_insert_with(|| monotone_tables(r));
        let functions = node_functions(&regulators, exact, max_clauses, monotone);
        per_node.push((regulators, functions));
    }

    let mut total: usize = 1;
    for (_, fs) in &per_node {
        total = total.saturating_mul(fs.len());
    }
    if total > limits.max_domain_size {
        return Err(Error::DomainTooLarge(format!(
            "{total} networks (limit {})",
            limits.max_domain_size
        )));
    }

    let mut template = BooleanNetwork::new();
    for name in graph.nodes() {
        template.declare(name)?;
    }
    let mut members = Vec::with_capacity(total);
    let mut pick = vec![0usize; n];
    for _ in 0..total {
        let mut net = template.clone();
        for (j, (regs, fs)) in per_node.iter().enumerate() {
            net.set_rule(j, node_expression(&fs[pick[j]], regs));
        }
        members.push(net);
        // the last node varies fastest
        for j in (0..n).rev() {
            pick[j] += 1;
            if pick[j] < per_node[j].1.len() {
                break;
            }
            pick[j] = 0;
        }
    }
    Ok(members)
}

/// The MP attractors of every member, in enumeration order.
pub fn domain_attractors(
    members: &[BooleanNetwork],
    limits: &Limits,
) -> Result<Vec<Vec<Subhypercube>>> {
    members
        .iter()
        .map(|m| crate::dynamics::minimal_trap_spaces(&MonotoneNetwork::new(m)?, limits))
        .collect()
}

fn compile_members(members: &[BooleanNetwork]) -> Result<Vec<MonotoneNetwork>> {
    let members = align_members(members)?;
    members.iter().map(MonotoneNetwork::new).collect()
}

/// Solves `query` over an ensemble: a perturbation is kept when it works
/// for at least one member (existential) or for every member (universal).
pub fn solve_ensemble(
    members: &[BooleanNetwork],
    query: &ReprogramQuery,
    quantifier: Quantifier,
    framing: Framing,
    limits: &Limits,
) -> Result<SolutionSet> {
    let compiled = compile_members(members)?;
    let n = compiled[0].len();
    query.validate(n)?;
    let allowed = query.allowed_components(n);
    let found = enumerate_minimal(
        &allowed,
        query.max_size,
        |p| ensemble_check(&compiled, query, p, quantifier, framing, limits),
        |_| ControlFlow::Continue(()),
    )?;
    Ok(SolutionSet::new(found, compiled[0].names()))
}

fn ensemble_check(
    members: &[MonotoneNetwork],
    query: &ReprogramQuery,
    p: &PartialAssignment,
    quantifier: Quantifier,
    framing: Framing,
    limits: &Limits,
) -> Result<bool> {
    for f in members {
        let good = check_perturbation(f, query, p, framing, limits)?;
        match quantifier {
            Quantifier::Existential if good => return Ok(true),
            Quantifier::Universal if !good => return Ok(false),
            _ => {}
        }
    }
    Ok(quantifier == Quantifier::Universal)
}

/// Perturbations after which, for at least one member, every fixed point
/// matches the marker (and one exists, with `ensure_exists`).
pub fn solve_existential_fixpoints(
    members: &[BooleanNetwork],
    marker: &PartialAssignment,
    max_size: usize,
    ensure_exists: bool,
    exclude: &[usize],
    limits: &Limits,
) -> Result<SolutionSet> {
    let mut query =
        ReprogramQuery::fixpoints(marker.clone(), max_size).with_exclude(exclude.iter().copied());
    query.ensure_exists = ensure_exists;
    solve_ensemble(
        members,
        &query,
        Quantifier::Existential,
        Framing::Direct,
        limits,
    )
}

/// Perturbations after which every MP attractor of every member matches the
/// marker.
pub fn solve_universal_attractors(
    members: &[BooleanNetwork],
    marker: &PartialAssignment,
    max_size: usize,
    exclude: &[usize],
    limits: &Limits,
) -> Result<SolutionSet> {
    let query =
        ReprogramQuery::attractors(marker.clone(), max_size).with_exclude(exclude.iter().copied());
    solve_ensemble(
        members,
        &query,
        Quantifier::Universal,
        Framing::Direct,
        limits,
    )
}

/// Perturbations after which every fixed point of every member matches the
/// marker. Members without fixed points satisfy this vacuously.
pub fn solve_universal_fixpoints(
    members: &[BooleanNetwork],
    marker: &PartialAssignment,
    max_size: usize,
    exclude: &[usize],
    limits: &Limits,
) -> Result<SolutionSet> {
    let query = ReprogramQuery::fixpoints(marker.clone(), max_size)
        .with_exclude(exclude.iter().copied())
        .allow_no_fixpoint();
    solve_ensemble(
        members,
        &query,
        Quantifier::Universal,
        Framing::Direct,
        limits,
    )
}

/// Splits a multi-model document into named networks. Models are separated
/// by `--- name` lines; text before the first separator forms a model named
/// `bn0` when it contains any rule.
pub fn parse_multi_model(text: &str) -> Result<Vec<(String, BooleanNetwork)>> {
    let mut sections: Vec<(String, usize, String)> = Vec::new();
    let mut current = (String::from("bn0"), 0usize, String::new());
    let mut started = false;
    for (lineno, line) in text.lines().enumerate() {
        if let Some(name) = line.trim().strip_prefix("---") {
            if started || !current.2.trim().is_empty() {
                sections.push(std::mem::take(&mut current));
            }
            started = true;
            let name = name.trim();
            current = (
                if name.is_empty() {
                    format!("bn{}", sections.len())
                } else {
                    name.to_string()
                },
                lineno + 1,
                String::new(),
            );
        } else {
            current.2.push_str(line);
            current.2.push('\n');
        }
    }
    if started || !current.2.trim().is_empty() {
        sections.push(current);
    }
    sections
        .into_iter()
        .map(|(name, offset, body)| {
            let net = parse_booleannet(&body).map_err(|e| match e {
                Error::Syntax { line, message } => Error::Syntax {
                    line: line + offset,
                    message,
                },
                other => other,
            })?;
            Ok((name, net))
        })
        .collect()
}

/// Renders members as a multi-model document readable by
/// [`parse_multi_model`].
pub fn render_multi_model<'a>(
    members: impl IntoIterator<Item = (&'a str, &'a BooleanNetwork)>,
) -> String {
    let mut out = String::new();
    for (name, net) in members {
        out.push_str("--- ");
        out.push_str(name);
        out.push('\n');
        out.push_str(&serialize_booleannet(net));
    }
    out
}

/// Component names shared by all members.
pub fn member_names(members: &[BooleanNetwork]) -> Result<Vec<ComponentId>> {
    Ok(align_members(members)?[0].names().to_vec())
}

/// Raw good set of `query` over the ensemble, by exhaustive evaluation of
/// every candidate. Exponential; meant for cross-checks.
pub fn raw_ensemble_good_set(
    members: &[BooleanNetwork],
    query: &ReprogramQuery,
    quantifier: Quantifier,
    limits: &Limits,
) -> Result<Vec<PartialAssignment>> {
    let compiled = compile_members(members)?;
    let n = compiled[0].len();
    let exclude: Vec<usize> = query.exclude.iter().copied().collect();
    crate::candidates::candidate_perturbations(n, query.max_size, &exclude)
        .filter_map(|p| {
            match ensemble_check(&compiled, query, &p, quantifier, Framing::Direct, limits) {
                Ok(true) => Some(Ok(p)),
                Ok(false) => None,
                Err(e) => Some(Err(e)),
            }
        })
        .collect()
}

impl Target {
    pub fn default_quantifier(self) -> Quantifier {
        match self {
            Target::FixedPoints => Quantifier::Existential,
            Target::Attractors => Quantifier::Universal,
        }
    }
}
