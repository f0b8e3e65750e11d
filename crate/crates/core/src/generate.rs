//! Random locally-monotone networks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::network::{BooleanNetwork, Expr};

/// A random network of `n` components `x0..x{n-1}` with at most
/// `max_indegree` regulators per component. Each regulator gets a fixed
/// sign, and the local function is a random DNF of clauses over the signed
/// literals, so every component is unate. Constants appear occasionally.
pub fn random_unate_network<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_indegree: usize,
) -> BooleanNetwork {
    let mut net = BooleanNetwork::new();
    for i in 0..n {
        net.declare(&format!("x{i}"))
            .expect("generated names are valid");
    }
    let all: Vec<usize> = (0..n).collect();
    for i in 0..n {
        let degree = rng.gen_range(0..=max_indegree.min(n));
        if degree == 0 {
            net.set_rule(i, Expr::Const(rng.gen()));
            continue;
        }
        let regulators: Vec<usize> = all.choose_multiple(rng, degree).copied().collect();
        let literals: Vec<Expr> = regulators
            .iter()
            .map(|&r| {
                if rng.gen_bool(0.5) {
                    Expr::Var(r)
                } else {
                    Expr::not(Expr::Var(r))
                }
            })
            .collect();
        let clauses = rng.gen_range(1..=degree);
        let mut dnf = Vec::with_capacity(clauses);
        for _ in 0..clauses {
            let size = rng.gen_range(1..=degree);
            let mut picked: Vec<&Expr> = literals.choose_multiple(rng, size).collect();
            picked.sort_by_key(|e| e.variables().into_iter().next());
            dnf.push(Expr::and(picked.into_iter().cloned().collect()));
        }
        net.set_rule(i, Expr::or(dnf));
    }
    net
}
