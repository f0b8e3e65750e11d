//! Unateness certificates, influence graphs and the compiled form of a
//! locally-monotone network used by the dynamics analyses.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::network::{BooleanNetwork, ComponentId, Expr};
use crate::state::PartialAssignment;

/// Largest number of distinct variables a local function may mention.
/// Truth tables are built over the syntactic support.
pub const MAX_SUPPORT: usize = 20;

/// Polarity of an influence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn from_i8(s: i8) -> Option<Sign> {
        match s {
            1 => Some(Sign::Positive),
            -1 => Some(Sign::Negative),
            _ => None,
        }
    }
}

/// Per-component polarity of one local function; `None` marks a component
/// the function does not depend on.
pub type SignVector = Vec<Option<Sign>>;

/// Outcome of the unateness check of one local function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Unateness {
    Unate(SignVector),
    /// The function both increases and decreases with `witness`.
    NotUnate {
        witness: usize,
    },
}

/// A local function stored as a truth table over its essential variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalFunction {
    support: Vec<usize>,
    signs: Vec<Sign>,
    table: Vec<u64>,
}

impl LocalFunction {
    pub fn constant(value: bool) -> Self {
        LocalFunction {
            support: Vec::new(),
            signs: Vec::new(),
            table: vec![value as u64],
        }
    }

    /// Essential variables, in increasing order.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Polarity of each essential variable, parallel to [`Self::support`].
    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn as_constant(&self) -> Option<bool> {
        self.support.is_empty().then(|| self.table[0] & 1 == 1)
    }

    #[inline]
    pub fn lookup(&self, index: usize) -> bool {
        self.table[index >> 6] >> (index & 63) & 1 == 1
    }

    #[inline]
    pub fn eval(&self, value: impl Fn(usize) -> bool) -> bool {
        let mut index = 0;
        for (k, &j) in self.support.iter().enumerate() {
            if value(j) {
                index |= 1 << k;
            }
        }
        self.lookup(index)
    }

    /// Evaluates the function at the vertex of the sub-hypercube described
    /// by `fixed` that pushes it towards `target`: each free essential
    /// variable takes the value that can only help reaching `target`.
    /// For a unate function the result equals `target` iff some vertex of
    /// the sub-hypercube evaluates to `target`.
    #[inline]
    pub fn can_reach(&self, fixed: impl Fn(usize) -> Option<bool>, target: bool) -> bool {
        let mut index = 0;
        for (k, (&j, &s)) in self.support.iter().zip(&self.signs).enumerate() {
            let v = fixed(j).unwrap_or(match s {
                Sign::Positive => target,
                Sign::Negative => !target,
            });
            if v {
                index |= 1 << k;
            }
        }
        self.lookup(index) == target
    }

    /// Compiles `expr`, returning the function together with the variable
    /// witnessing non-unateness if there is one.
    pub fn compile(expr: &Expr) -> Result<(LocalFunction, Option<usize>)> {
        let vars: Vec<usize> = expr.variables().into_iter().collect();
        if vars.len() > MAX_SUPPORT {
            return Err(Error::TooLarge {
                what: "local function support",
                size: vars.len(),
                limit: MAX_SUPPORT,
            });
        }
        let m = vars.len();
        let size = 1usize << m;
        let mut full = vec![0u64; size.div_ceil(64)];
        for idx in 0..size {
            let value = |j: usize| {
                let k = vars.binary_search(&j).unwrap();
                idx >> k & 1 == 1
            };
            if expr.eval(&value) {
                full[idx >> 6] |= 1 << (idx & 63);
            }
        }
        let bit = |idx: usize| full[idx >> 6] >> (idx & 63) & 1 == 1;

        let mut essential = Vec::new();
        let mut signs = Vec::new();
        let mut witness = None;
        #[allow(clippy::needless_range_loop)]
        for k in 0..m {
            let (mut up, mut down) = (false, false);
            for idx in (0..size).filter(|idx| idx >> k & 1 == 0) {
                match (bit(idx), bit(idx | 1 << k)) {
                    (false, true) => up = true,
                    (true, false) => down = true,
                    _ => {}
                }
                if up && down {
                    break;
                }
            }
            match (up, down) {
                (true, true) => {
                    witness.get_or_insert(vars[k]);
                    essential.push(k);
                    signs.push(Sign::Positive);
                }
                (true, false) => {
                    essential.push(k);
                    signs.push(Sign::Positive);
                }
                (false, true) => {
                    essential.push(k);
                    signs.push(Sign::Negative);
                }
                (false, false) => {}
            }
        }

        // Project onto the essential variables (inessential ones set to 0).
        let reduced_size = 1usize << essential.len();
        let mut table = vec![0u64; reduced_size.div_ceil(64)];
        for r in 0..reduced_size {
            let mut idx = 0;
            for (pos, &k) in essential.iter().enumerate() {
                if r >> pos & 1 == 1 {
                    idx |= 1 << k;
                }
            }
            if bit(idx) {
                table[r >> 6] |= 1 << (r & 63);
            }
        }
        let support = essential.iter().map(|&k| vars[k]).collect();
        Ok((
            LocalFunction {
                support,
                signs,
                table,
            },
            witness,
        ))
    }
}

/// Semantic unateness check of the local function of component `i`.
pub fn unateness_certificate(net: &BooleanNetwork, i: usize) -> Result<Unateness> {
    let (lf, witness) = LocalFunction::compile(net.rule(i))?;
    if let Some(witness) = witness {
        return Ok(Unateness::NotUnate { witness });
    }
    let mut signs = vec![None; net.len()];
    for (&j, &s) in lf.support.iter().zip(&lf.signs) {
        signs[j] = Some(s);
    }
    Ok(Unateness::Unate(signs))
}

/// Whether every local function of the network is unate.
pub fn is_locally_monotone(net: &BooleanNetwork) -> Result<bool> {
    for i in 0..net.len() {
        if let Unateness::NotUnate { .. } = unateness_certificate(net, i)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A signed directed graph over named components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfluenceGraph {
    nodes: Vec<ComponentId>,
    edges: BTreeSet<(usize, Sign, usize)>,
}

impl InfluenceGraph {
    pub fn new(nodes: Vec<ComponentId>) -> Self {
        InfluenceGraph {
            nodes,
            edges: BTreeSet::new(),
        }
    }

    /// Builds a graph from `(source, sign, target)` triples. Nodes are
    /// sorted by name.
    pub fn from_edges<'a>(
        edges: impl IntoIterator<Item = (&'a str, Sign, &'a str)>,
    ) -> Result<Self> {
        let edges: Vec<_> = edges.into_iter().collect();
        let mut names: Vec<ComponentId> = Vec::new();
        for (s, _, t) in &edges {
            for name in [s, t] {
                let id = ComponentId::new(name)?;
                if !names.contains(&id) {
                    names.push(id);
                }
            }
        }
        names.sort();
        let mut g = InfluenceGraph::new(names);
        for (s, sign, t) in edges {
            let (s, t) = (g.index_of(s).unwrap(), g.index_of(t).unwrap());
            g.add_edge(s, sign, t);
        }
        Ok(g)
    }

    /// Parses an edge list: one `source sign target` triple per line, with
    /// `sign` among `+`, `-`, `1`, `-1`, `+1`. Blank lines and `#`
    /// comments are skipped.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut triples = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let syntax = |message: String| Error::Syntax {
                line: lineno + 1,
                message,
            };
            let [s, sign, t] = fields[..] else {
                return Err(syntax("expected `source sign target`".into()));
            };
            let sign = match sign {
                "+" | "1" | "+1" => Sign::Positive,
                "-" | "-1" => Sign::Negative,
                other => return Err(syntax(format!("invalid sign `{other}`"))),
            };
            for name in [s, t] {
                if !ComponentId::is_valid(name) {
                    return Err(syntax(format!("invalid component name `{name}`")));
                }
            }
            triples.push((s, sign, t));
        }
        Self::from_edges(triples)
    }

    pub fn add_edge(&mut self, source: usize, sign: Sign, target: usize) {
        assert!(source < self.nodes.len() && target < self.nodes.len());
        self.edges.insert((source, sign, target));
    }

    pub fn nodes(&self) -> &[ComponentId] {
        &self.nodes
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.as_str() == name)
    }

    /// Edges as `(source, sign, target)` node indices, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, Sign, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, source: usize, sign: Sign, target: usize) -> bool {
        self.edges.contains(&(source, sign, target))
    }

    /// Incoming edges of `target` as `(source, sign)`.
    pub fn regulators(&self, target: usize) -> Vec<(usize, Sign)> {
        self.edges
            .iter()
            .filter(|e| e.2 == target)
            .map(|&(s, sign, _)| (s, sign))
            .collect()
    }

    /// Whether every edge of `self` is an edge of `other` (nodes compared
    /// by name).
    pub fn is_subgraph_of(&self, other: &InfluenceGraph) -> bool {
        self.edges.iter().all(|&(s, sign, t)| {
            match (
                other.index_of(&self.nodes[s]),
                other.index_of(&self.nodes[t]),
            ) {
                (Some(s2), Some(t2)) => other.has_edge(s2, sign, t2),
                _ => false,
            }
        })
    }

    /// Same node names and same edges.
    pub fn same_as(&self, other: &InfluenceGraph) -> bool {
        let mut a: Vec<_> = self.nodes.iter().collect();
        let mut b: Vec<_> = other.nodes.iter().collect();
        a.sort();
        b.sort();
        a == b && self.edge_count() == other.edge_count() && self.is_subgraph_of(other)
    }

    /// Graphviz rendering: `sign` edge attribute, `tee` arrowheads for
    /// negative edges and `normal` ones for positive edges.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph {\n");
        for n in &self.nodes {
            let _ = writeln!(out, "  \"{n}\";");
        }
        for &(s, sign, t) in &self.edges {
            let head = match sign {
                Sign::Positive => "normal",
                Sign::Negative => "tee",
            };
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [sign={}, arrowhead={head}];",
                self.nodes[s],
                self.nodes[t],
                sign.as_i8()
            );
        }
        out.push_str("}\n");
        out
    }
}

/// The influence graph `G(f)`: an edge `i -s-> j` whenever flipping `i`
/// from 0 to 1 changes `f_j` by `s` for some configuration. Decided by
/// evaluating each rule over the co-assignments of its variables.
pub fn influence_graph(net: &BooleanNetwork) -> Result<InfluenceGraph> {
    let mut g = InfluenceGraph::new(net.names().to_vec());
    for j in 0..net.len() {
        let rule = net.rule(j);
        let vars: Vec<usize> = rule.variables().into_iter().collect();
        if vars.len() > MAX_SUPPORT {
            return Err(Error::TooLarge {
                what: "local function support",
                size: vars.len(),
                limit: MAX_SUPPORT,
            });
        }
        for &i in &vars {
            let others: Vec<usize> = vars.iter().copied().filter(|&v| v != i).collect();
            let (mut up, mut down) = (false, false);
            for bits in 0..1u64 << others.len() {
                let at = |xi: bool| {
                    rule.eval(&|v: usize| {
                        if v == i {
                            xi
                        } else {
                            let p = others.iter().position(|&o| o == v).unwrap();
                            bits >> p & 1 == 1
                        }
                    })
                };
                match (at(false), at(true)) {
                    (false, true) => up = true,
                    (true, false) => down = true,
                    _ => {}
                }
                if up && down {
                    break;
                }
            }
            if up {
                g.add_edge(i, Sign::Positive, j);
            }
            if down {
                g.add_edge(i, Sign::Negative, j);
            }
        }
    }
    Ok(g)
}

/// A locally-monotone network compiled to truth tables with certified
/// polarities. Cheap to clone and to perturb.
#[derive(Debug, Clone)]
pub struct MonotoneNetwork {
    names: Arc<Vec<ComponentId>>,
    functions: Vec<Arc<LocalFunction>>,
}

impl MonotoneNetwork {
    /// Compiles `net`, failing with [`Error::NotUnate`] on the first local
    /// function that is not unate.
    pub fn new(net: &BooleanNetwork) -> Result<Self> {
        let mut functions = Vec::with_capacity(net.len());
        for i in 0..net.len() {
            let (lf, witness) = LocalFunction::compile(net.rule(i))?;
            if witness.is_some() {
                return Err(Error::NotUnate(net.name(i).to_string()));
            }
            functions.push(Arc::new(lf));
        }
        Ok(MonotoneNetwork {
            names: Arc::new(net.names().to_vec()),
            functions,
        })
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn names(&self) -> &[ComponentId] {
        &self.names
    }

    pub fn function(&self, i: usize) -> &LocalFunction {
        &self.functions[i]
    }

    /// `f/P` in compiled form.
    pub fn perturbed(&self, perturbation: &PartialAssignment) -> MonotoneNetwork {
        let mut out = self.clone();
        for (i, v) in perturbation.iter() {
            out.functions[i] = Arc::new(LocalFunction::constant(v));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bnet::parse_booleannet;

    fn signs_of(net: &BooleanNetwork, i: usize) -> Unateness {
        unateness_certificate(net, i).unwrap()
    }

    #[test]
    fn unate_example_formula() {
        let f = BooleanNetwork::from_rules([("x1", "x1 | (!x3 & x2)"), ("x2", "x2"), ("x3", "x3")])
            .unwrap();
        assert_eq!(
            signs_of(&f, 0),
            Unateness::Unate(vec![
                Some(Sign::Positive),
                Some(Sign::Positive),
                Some(Sign::Negative)
            ])
        );
    }

    #[test]
    fn xor_is_not_unate() {
        let f = BooleanNetwork::from_rules([
            ("x1", "(x2 & !x3) | (!x2 & x3)"),
            ("x2", "x2"),
            ("x3", "x3"),
        ])
        .unwrap();
        assert!(matches!(signs_of(&f, 0), Unateness::NotUnate { .. }));
        assert!(!is_locally_monotone(&f).unwrap());
        assert_eq!(
            MonotoneNetwork::new(&f).unwrap_err(),
            Error::NotUnate("x1".into())
        );
    }

    #[test]
    fn constants_use_nothing() {
        let f = BooleanNetwork::from_rules([("a", "1"), ("b", "a | !a")]).unwrap();
        assert_eq!(signs_of(&f, 0), Unateness::Unate(vec![None, None]));
        // semantically constant even though `a` occurs
        assert_eq!(signs_of(&f, 1), Unateness::Unate(vec![None, None]));
        let m = MonotoneNetwork::new(&f).unwrap();
        assert_eq!(m.function(1).as_constant(), Some(true));
    }

    #[test]
    fn basic_example_is_locally_monotone() {
        let f =
            BooleanNetwork::from_rules([("x1", "!x2"), ("x2", "!x1"), ("x3", "!x1 & x2")]).unwrap();
        assert!(is_locally_monotone(&f).unwrap());
        assert!(is_locally_monotone(&BooleanNetwork::new()).unwrap());
    }

    #[test]
    fn example1_influence_graph() {
        let f = parse_booleannet("A, B\nB, !A\nC, !A&B").unwrap();
        let g = influence_graph(&f).unwrap();
        let edges: Vec<_> = g.edges().collect();
        use Sign::*;
        assert_eq!(
            edges,
            vec![
                (0, Negative, 1),
                (0, Negative, 2),
                (1, Positive, 0),
                (1, Positive, 2)
            ]
        );
        let dot = g.to_dot();
        assert!(dot.contains("\"A\" -> \"B\" [sign=-1, arrowhead=tee];"));
        assert!(dot.contains("\"B\" -> \"A\" [sign=1, arrowhead=normal];"));
    }

    #[test]
    fn example2_influence_graph() {
        let f =
            BooleanNetwork::from_rules([("A", "B"), ("B", "A"), ("C", "!D & (A|B)"), ("D", "!C")])
                .unwrap();
        let g = influence_graph(&f).unwrap();
        let expected = InfluenceGraph::from_edges([
            ("B", Sign::Positive, "A"),
            ("A", Sign::Positive, "B"),
            ("A", Sign::Positive, "C"),
            ("B", Sign::Positive, "C"),
            ("D", Sign::Negative, "C"),
            ("C", Sign::Negative, "D"),
        ])
        .unwrap();
        assert!(g.same_as(&expected));
    }

    #[test]
    fn constant_network_has_no_edges() {
        let f = parse_booleannet("a, 1\nb, 0").unwrap();
        assert_eq!(influence_graph(&f).unwrap().edge_count(), 0);
    }

    #[test]
    fn non_unate_function_has_both_signs() {
        let f = parse_booleannet("a, b&!c | !b&c\nb, b\nc, c").unwrap();
        let g = influence_graph(&f).unwrap();
        assert!(g.has_edge(1, Sign::Positive, 0) && g.has_edge(1, Sign::Negative, 0));
    }

    #[test]
    fn perturbed_inputs_have_no_incoming_edges() {
        let f = parse_booleannet("A, B\nB, !A\nC, !A&B").unwrap();
        let p = f.assignment([("A", false), ("C", true)]).unwrap();
        let g = influence_graph(&f.perturb(&p).unwrap()).unwrap();
        assert!(g.edges().all(|(_, _, t)| !p.contains(t)));
    }

    #[test]
    fn edge_list_parsing() {
        let g = InfluenceGraph::parse_edge_list("C + B\nA 1 C\n# x\nB - C\nC +1 D\n").unwrap();
        let names: Vec<&str> = g.nodes().iter().map(|n| n.as_str()).collect();
        assert_eq!(names, ["A", "B", "C", "D"]);
        assert_eq!(g.edge_count(), 4);
        assert!(g.has_edge(1, Sign::Negative, 2));
        assert!(InfluenceGraph::parse_edge_list("A ? B").is_err());
        assert!(InfluenceGraph::parse_edge_list("A + ").is_err());
    }

    #[test]
    fn extremal_vertex_decides_reachability() {
        // f = a | (!c & b)
        let f = parse_booleannet("a, a | !c & b\nb, b\nc, c").unwrap();
        let m = MonotoneNetwork::new(&f).unwrap();
        let lf = m.function(0);
        let cube = [Some(false), None, Some(true)];
        assert!(!lf.can_reach(|j| cube[j], true));
        assert!(lf.can_reach(|j| cube[j], false));
        let cube = [Some(false), None, None];
        assert!(lf.can_reach(|j| cube[j], true));
    }
}
