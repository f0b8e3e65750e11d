use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};
use crate::state::{Configuration, PartialAssignment};

/// Name of a network component: letters, digits and underscores, not
/// starting with a digit. Comparison is case-sensitive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComponentId(String);

impl ComponentId {
    pub fn new(name: &str) -> Result<Self> {
        if Self::is_valid(name) {
            Ok(ComponentId(name.to_string()))
        } else {
            Err(Error::InvalidName(name.to_string()))
        }
    }

    pub fn is_valid(name: &str) -> bool {
        let mut chars = name.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return false,
        }
        chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Deref for ComponentId {
    type Target = str;
    fn deref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Propositional formula over the components of a network. Variables are
/// component indices of the enclosing network.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(bool),
    Var(usize),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
}

impl Expr {
    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    /// Conjunction; collapses to the single operand or to `1` when fewer
    /// than two operands are given.
    pub fn and(mut children: Vec<Expr>) -> Expr {
        match children.len() {
            0 => Expr::Const(true),
            1 => children.pop().unwrap(),
            _ => Expr::And(children),
        }
    }

    /// Disjunction; collapses like [`Expr::and`], with `0` for no operand.
    pub fn or(mut children: Vec<Expr>) -> Expr {
        match children.len() {
            0 => Expr::Const(false),
            1 => children.pop().unwrap(),
            _ => Expr::Or(children),
        }
    }

    pub fn eval(&self, value: &impl Fn(usize) -> bool) -> bool {
        match self {
            Expr::Const(b) => *b,
            Expr::Var(i) => value(*i),
            Expr::Not(e) => !e.eval(value),
            Expr::And(es) => es.iter().all(|e| e.eval(value)),
            Expr::Or(es) => es.iter().any(|e| e.eval(value)),
        }
    }

    /// Variables occurring syntactically in the formula, in increasing order.
    pub fn variables(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut BTreeSet<usize>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(i) => {
                out.insert(*i);
            }
            Expr::Not(e) => e.collect_variables(out),
            Expr::And(es) | Expr::Or(es) => es.iter().for_each(|e| e.collect_variables(out)),
        }
    }

    /// Rewrites variable indices through `map`.
    pub fn remap(&self, map: &impl Fn(usize) -> usize) -> Expr {
        match self {
            Expr::Const(b) => Expr::Const(*b),
            Expr::Var(i) => Expr::Var(map(*i)),
            Expr::Not(e) => Expr::not(e.remap(map)),
            Expr::And(es) => Expr::And(es.iter().map(|e| e.remap(map)).collect()),
            Expr::Or(es) => Expr::Or(es.iter().map(|e| e.remap(map)).collect()),
        }
    }
}

/// A Boolean network: an ordered list of named components, each with one
/// local function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanNetwork {
    names: Vec<ComponentId>,
    index: HashMap<ComponentId, usize>,
    rules: Vec<Expr>,
}

impl Default for BooleanNetwork {
    fn default() -> Self {
        Self::new()
    }
}

impl BooleanNetwork {
    pub fn new() -> Self {
        BooleanNetwork {
            names: Vec::new(),
            index: HashMap::new(),
            rules: Vec::new(),
        }
    }

    /// Builds a network from `(component, expression)` pairs written in the
    /// BooleanNet expression syntax, e.g. `[("A", "B"), ("B", "!A")]`.
    pub fn from_rules<'a>(rules: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let rules: Vec<_> = rules.into_iter().collect();
        let mut net = BooleanNetwork::new();
        for (name, _) in &rules {
            net.declare(name)?;
        }
        for (i, (_, text)) in rules.iter().enumerate() {
            let expr = crate::bnet::parse_expression(text, |v| net.index_of(v).ok()).map_err(
                |e| match e {
                    Error::Syntax { message, .. } => Error::Syntax {
                        line: i + 1,
                        message,
                    },
                    other => other,
                },
            )?;
            net.rules[i] = expr;
        }
        Ok(net)
    }

    /// Declares a new component whose rule is the constant `0`.
    pub fn declare(&mut self, name: &str) -> Result<usize> {
        let id = ComponentId::new(name)?;
        if self.index.contains_key(&id) {
            return Err(Error::Duplicate(name.to_string()));
        }
        let i = self.names.len();
        self.index.insert(id.clone(), i);
        self.names.push(id);
        self.rules.push(Expr::Const(false));
        Ok(i)
    }

    /// Replaces the rule of component `i`. Panics if the expression refers
    /// to an undeclared component.
    pub fn set_rule(&mut self, i: usize, expr: Expr) {
        assert!(
            expr.variables().iter().all(|&v| v < self.len()),
            "rule refers to an undeclared component"
        );
        self.rules[i] = expr;
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[ComponentId] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &ComponentId {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        // Names failing validation cannot be components.
        ComponentId::new(name)
            .ok()
            .and_then(|id| self.index.get(&id).copied())
            .ok_or_else(|| Error::UnknownComponent(name.to_string()))
    }

    pub fn rule(&self, i: usize) -> &Expr {
        &self.rules[i]
    }

    pub fn rules(&self) -> &[Expr] {
        &self.rules
    }

    /// Value of the local function of component `i` at `x`.
    pub fn evaluate_local(&self, i: usize, x: &Configuration) -> bool {
        self.rules[i].eval(&|j| x.get(j))
    }

    /// The image `f(x)`.
    pub fn apply(&self, x: &Configuration) -> Configuration {
        Configuration::new((0..self.len()).map(|i| self.evaluate_local(i, x)).collect())
    }

    /// The perturbed network `f/P`: every component in the domain of `P`
    /// gets the constant rule `P(i)`.
    pub fn perturb(&self, perturbation: &PartialAssignment) -> Result<BooleanNetwork> {
        let mut out = self.clone();
        for (i, v) in perturbation.iter() {
            if i >= self.len() {
                return Err(Error::UnknownComponent(format!("#{i}")));
            }
            out.rules[i] = Expr::Const(v);
        }
        Ok(out)
    }

    /// Configuration from `(name, value)` pairs; every component must be
    /// given exactly once.
    pub fn configuration<'a>(
        &self,
        values: impl IntoIterator<Item = (&'a str, bool)>,
    ) -> Result<Configuration> {
        let p = self.assignment(values)?;
        p.to_configuration(self.len()).ok_or_else(|| {
            let missing = (0..self.len()).find(|&i| !p.contains(i)).unwrap();
            Error::InvalidQuery(format!(
                "configuration does not assign `{}`",
                self.names[missing]
            ))
        })
    }

    /// Partial assignment from `(name, value)` pairs.
    pub fn assignment<'a>(
        &self,
        values: impl IntoIterator<Item = (&'a str, bool)>,
    ) -> Result<PartialAssignment> {
        let mut p = PartialAssignment::new();
        for (name, v) in values {
            let i = self.index_of(name)?;
            if p.insert(i, v).is_some() {
                return Err(Error::Duplicate(name.to_string()));
            }
        }
        Ok(p)
    }

    /// Whether both networks have the same components (in the same order)
    /// and logically equivalent rules. Exponential in the rule supports.
    pub fn semantically_equal(&self, other: &BooleanNetwork) -> bool {
        self.names == other.names
            && (0..self.len()).all(|i| exprs_equivalent(&self.rules[i], &other.rules[i]))
    }
}

/// Truth-table comparison of two formulas over the union of their variables.
pub fn exprs_equivalent(a: &Expr, b: &Expr) -> bool {
    let vars: Vec<usize> = a.variables().union(&b.variables()).copied().collect();
    assert!(
        vars.len() < 32,
        "support too large for truth-table comparison"
    );
    (0..1u64 << vars.len()).all(|bits| {
        let value = |j: usize| {
            let k = vars.iter().position(|&v| v == j).unwrap();
            bits >> k & 1 == 1
        };
        a.eval(&value) == b.eval(&value)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basic_example() -> BooleanNetwork {
        // f1 = !x2, f2 = !x1, f3 = !x1 & x2
        BooleanNetwork::from_rules([("x1", "!x2"), ("x2", "!x1"), ("x3", "!x1 & x2")]).unwrap()
    }

    #[test]
    fn component_names() {
        assert!(ComponentId::is_valid("A"));
        assert!(ComponentId::is_valid("_x1"));
        assert!(ComponentId::is_valid("Cdc20"));
        assert!(!ComponentId::is_valid("1A"));
        assert!(!ComponentId::is_valid(""));
        assert!(!ComponentId::is_valid("a-b"));
    }

    #[test]
    fn apply_on_basic_example() {
        let f = basic_example();
        let x = Configuration::zeros(3);
        assert!(!f.evaluate_local(2, &x));
        assert_eq!(f.apply(&x).to_string(), "110");
    }

    #[test]
    fn evaluate_unate_formula() {
        let f = BooleanNetwork::from_rules([("x1", "x1 | (!x3 & x2)"), ("x2", "1"), ("x3", "0")])
            .unwrap();
        let x = Configuration::new(vec![false, true, false]);
        assert!(f.evaluate_local(0, &x));
        for x in Configuration::all(3) {
            assert!(f.evaluate_local(1, &x));
        }
    }

    #[test]
    fn identity_network_is_identity() {
        let f = BooleanNetwork::from_rules([("a", "a"), ("b", "b"), ("c", "c")]).unwrap();
        for x in Configuration::all(3) {
            assert_eq!(f.apply(&x), x);
        }
    }

    #[test]
    fn perturbation_makes_rules_constant() {
        let f = basic_example();
        let p = f.assignment([("x3", true)]).unwrap();
        let g = f.perturb(&p).unwrap();
        assert_eq!(g.rule(2), &Expr::Const(true));
        assert_eq!(g.rule(0), f.rule(0));
        assert_eq!(f.rule(2), basic_example().rule(2));
        assert!(f
            .perturb(&PartialAssignment::new())
            .unwrap()
            .semantically_equal(&f));
    }

    #[test]
    fn unknown_and_duplicate_components() {
        let f = basic_example();
        assert_eq!(
            f.assignment([("Z", true)]),
            Err(Error::UnknownComponent("Z".into()))
        );
        assert!(matches!(
            f.assignment([("x1", true), ("x1", false)]),
            Err(Error::Duplicate(_))
        ));
        assert!(matches!(
            f.configuration([("x1", true)]),
            Err(Error::InvalidQuery(_))
        ));
    }
}
