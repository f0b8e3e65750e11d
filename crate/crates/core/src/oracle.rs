//! Brute-force reference computations working directly on the rule
//! expressions, without unateness: sub-hypercube enumeration, exhaustive
//! fixed points and the fully-asynchronous state transition graph.
//!
//! These are used to cross-check the polynomial-time routines of
//! [`crate::dynamics`] and to export small dynamics as DOT.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use petgraph::graph::{DiGraph, NodeIndex};

use crate::dynamics::{check_bits, minimal_elements};
use crate::error::Result;
use crate::limits::Limits;
use crate::network::BooleanNetwork;
use crate::state::{Configuration, Subhypercube};

/// `f(x)` for every configuration, indexed by the bit encoding of `x`.
fn image_table(net: &BooleanNetwork) -> Vec<u64> {
    Configuration::all(net.len())
        .map(|x| net.apply(&x).to_bits())
        .collect()
}

/// Every sub-hypercube closed under `f` (all 3^n are examined).
pub fn closed_subhypercubes(net: &BooleanNetwork, limits: &Limits) -> Result<Vec<Subhypercube>> {
    let n = net.len();
    check_bits("oracle dimension", n, limits.max_oracle_dimension)?;
    let image = image_table(net);
    let mut out = Vec::new();
    let mut code = vec![0u8; n]; // 0, 1 or 2 (free)
    loop {
        let mut fixed_mask = 0u64;
        let mut fixed_vals = 0u64;
        for (i, &c) in code.iter().enumerate() {
            if c < 2 {
                fixed_mask |= 1 << i;
                fixed_vals |= (c as u64) << i;
            }
        }
        let free_mask = !fixed_mask & ((1u64 << n) - 1);
        // iterate over all subsets of the free mask
        let mut sub = 0u64;
        let mut closed = true;
        loop {
            let x = fixed_vals | sub;
            if image[x as usize] & fixed_mask != fixed_vals {
                closed = false;
                break;
            }
            if sub == free_mask {
                break;
            }
            sub = (sub.wrapping_sub(free_mask)) & free_mask;
        }
        if closed {
            out.push(Subhypercube::new(
                code.iter()
                    .map(|&c| if c == 2 { None } else { Some(c == 1) })
                    .collect(),
            ));
        }
        // next code in base 3
        let mut i = 0;
        while i < n && code[i] == 2 {
            code[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        code[i] += 1;
    }
    Ok(out)
}

/// The minimal trap spaces, as the ⪯-minimal closed sub-hypercubes.
pub fn trap_space_oracle(net: &BooleanNetwork, limits: &Limits) -> Result<Vec<Subhypercube>> {
    Ok(minimal_elements(closed_subhypercubes(net, limits)?))
}

/// The ⪯-least closed sub-hypercube containing `x`, by scanning `closed`.
pub fn smallest_closed_containing(closed: &[Subhypercube], x: &Configuration) -> Subhypercube {
    let containing: Vec<&Subhypercube> = closed.iter().filter(|h| h.contains(x)).collect();
    let least = containing
        .iter()
        .min_by_key(|h| h.free_count())
        .expect("the full hypercube is always closed");
    debug_assert!(containing.iter().all(|h| least.is_subcube_of(h)));
    (*least).clone()
}

/// `{x | f(x) = x}` by scanning every configuration.
pub fn fixed_points_exhaustive(
    net: &BooleanNetwork,
    limits: &Limits,
) -> Result<Vec<Configuration>> {
    check_bits(
        "network dimension",
        net.len(),
        limits.max_configuration_bits,
    )?;
    Ok(Configuration::all(net.len())
        .filter(|x| net.apply(x) == *x)
        .collect())
}

/// Fully-asynchronous state transition graph. Nodes are configurations,
/// edge weights are the index of the updated component.
pub type Stg = DiGraph<Configuration, usize>;

/// Builds the asynchronous transition graph, over all configurations when
/// `init` is `None`, or over those reachable from `init`.
pub fn async_stg(
    net: &BooleanNetwork,
    init: Option<&Configuration>,
    limits: &Limits,
) -> Result<Stg> {
    let n = net.len();
    let mut graph = Stg::new();
    let mut index: HashMap<Configuration, NodeIndex> = HashMap::new();
    let mut queue: VecDeque<Configuration> = VecDeque::new();
    let limit = 1usize << limits.max_stg_dimension.min(40);
    match init {
        None => {
            check_bits("transition graph dimension", n, limits.max_stg_dimension)?;
            for x in Configuration::all(n) {
                index.insert(x.clone(), graph.add_node(x.clone()));
                queue.push_back(x);
            }
        }
        Some(x) => {
            index.insert(x.clone(), graph.add_node(x.clone()));
            queue.push_back(x.clone());
        }
    }
    while let Some(x) = queue.pop_front() {
        let from = index[&x];
        for i in 0..n {
            let v = net.evaluate_local(i, &x);
            if v == x.get(i) {
                continue;
            }
            let mut y = x.clone();
            y.set(i, v);
            let to = match index.get(&y) {
                Some(&to) => to,
                None => {
                    check_bits("reachable configurations", index.len() + 1, limit)?;
                    let to = graph.add_node(y.clone());
                    index.insert(y.clone(), to);
                    queue.push_back(y);
                    to
                }
            };
            graph.add_edge(from, to, i);
        }
    }
    Ok(graph)
}

/// Configurations without outgoing transitions, sorted.
pub fn stg_fixed_points(stg: &Stg) -> Vec<Configuration> {
    let mut out: Vec<Configuration> = stg
        .node_indices()
        .filter(|&v| stg.neighbors(v).next().is_none())
        .map(|v| stg[v].clone())
        .collect();
    out.sort();
    out
}

/// Strongly connected components without edges leaving them, each sorted.
pub fn stg_terminal_sccs(stg: &Stg) -> Vec<Vec<Configuration>> {
    let sccs = petgraph::algo::tarjan_scc(stg);
    let mut component = vec![0; stg.node_count()];
    for (k, scc) in sccs.iter().enumerate() {
        for v in scc {
            component[v.index()] = k;
        }
    }
    let mut out: Vec<Vec<Configuration>> = sccs
        .iter()
        .enumerate()
        .filter(|(k, scc)| {
            scc.iter()
                .all(|&v| stg.neighbors(v).all(|w| component[w.index()] == *k))
        })
        .map(|(_, scc)| {
            let mut states: Vec<Configuration> = scc.iter().map(|&v| stg[v].clone()).collect();
            states.sort();
            states
        })
        .collect();
    out.sort();
    out
}

/// DOT rendering of a transition graph; nodes are labelled by their
/// configuration, edges by the updated component.
pub fn stg_to_dot(net: &BooleanNetwork, stg: &Stg) -> String {
    let mut out = String::from("digraph {\n");
    let mut nodes: Vec<NodeIndex> = stg.node_indices().collect();
    nodes.sort_by(|a, b| stg[*a].cmp(&stg[*b]));
    for v in &nodes {
        let _ = writeln!(out, "  \"{}\";", stg[*v]);
    }
    let mut edges: Vec<(String, String, usize)> = stg
        .edge_indices()
        .map(|e| {
            let (a, b) = stg.edge_endpoints(e).unwrap();
            (stg[a].to_string(), stg[b].to_string(), stg[e])
        })
        .collect();
    edges.sort();
    for (a, b, i) in edges {
        let _ = writeln!(out, "  \"{a}\" -> \"{b}\" [label=\"{}\"];", net.name(i));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bnet::parse_booleannet;

    #[test]
    fn example1_oracle() {
        let f = parse_booleannet("A, B\nB, !A\nC, !A&B").unwrap();
        let limits = Limits::default();
        assert_eq!(
            trap_space_oracle(&f, &limits).unwrap(),
            vec![Subhypercube::full(3)]
        );
        let closed = closed_subhypercubes(&f, &limits).unwrap();
        assert!(closed.contains(&Subhypercube::full(3)));
    }

    #[test]
    fn example1_async_graph_is_one_terminal_scc() {
        let f = parse_booleannet("A, B\nB, !A\nC, !A&B").unwrap();
        let stg = async_stg(&f, None, &Limits::default()).unwrap();
        assert_eq!(stg.node_count(), 8);
        let terminal = stg_terminal_sccs(&stg);
        assert_eq!(terminal.len(), 1);
        assert_eq!(terminal[0].len(), 8);
        assert!(stg_fixed_points(&stg).is_empty());
    }

    #[test]
    fn example2_reachable_part() {
        let f = parse_booleannet("A, B\nB, A\nC, !D & (A|B)\nD, !C").unwrap();
        let z = Configuration::new(vec![true, true, false, false]);
        let stg = async_stg(&f, Some(&z), &Limits::default()).unwrap();
        let fps: Vec<String> = stg_fixed_points(&stg)
            .iter()
            .map(|x| x.to_string())
            .collect();
        assert_eq!(fps, ["1101", "1110"]);
        let dot = stg_to_dot(&f, &stg);
        assert!(dot.contains("\"1100\" -> \"1110\" [label=\"C\"];"));
    }

    #[test]
    fn fixed_point_is_sink() {
        let f = parse_booleannet("a, a\nb, a").unwrap();
        let stg = async_stg(&f, None, &Limits::default()).unwrap();
        assert_eq!(
            stg_fixed_points(&stg),
            fixed_points_exhaustive(&f, &Limits::default()).unwrap()
        );
    }

    #[test]
    fn bounds() {
        let f = parse_booleannet("a, a\nb, a\nc, b").unwrap();
        let limits = Limits {
            max_oracle_dimension: 2,
            max_stg_dimension: 2,
            ..Limits::default()
        };
        assert!(closed_subhypercubes(&f, &limits).is_err());
        assert!(async_stg(&f, None, &limits).is_err());
    }
}
