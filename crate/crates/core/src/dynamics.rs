//! Most Permissive dynamics of locally-monotone networks.
//!
//! MP attractors are the minimal trap spaces of the network. Everything here
//! rests on one primitive, [`escape_exists`]: whether a component can take a
//! given value somewhere in a sub-hypercube. For a unate local function this
//! is decided by evaluating it at a single extremal vertex, which makes trap
//! space checks and the smallest trap space `TS(x)` polynomial.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::state::{Configuration, Subhypercube};
use crate::unate::MonotoneNetwork;

/// `h ⪯ other`: every vertex of `h` is a vertex of `other`.
pub fn subhypercube_leq(h: &Subhypercube, other: &Subhypercube) -> bool {
    h.is_subcube_of(other)
}

/// Whether some vertex `y` of `h` has `f_i(y) = value`.
pub fn escape_exists(f: &MonotoneNetwork, h: &Subhypercube, i: usize, value: bool) -> bool {
    f.function(i).can_reach(|j| h.get(j), value)
}

/// Same as [`escape_exists`], by enumerating the vertices of `h` restricted
/// to the support of `f_i`.
pub fn escape_exists_exhaustive(
    f: &MonotoneNetwork,
    h: &Subhypercube,
    i: usize,
    value: bool,
) -> bool {
    let lf = f.function(i);
    let free: Vec<usize> = lf
        .support()
        .iter()
        .copied()
        .filter(|&j| h.get(j).is_none())
        .collect();
    (0..1u64 << free.len()).any(|bits| {
        let at = |j: usize| match h.get(j) {
            Some(v) => v,
            None => {
                let k = free.iter().position(|&v| v == j).unwrap();
                bits >> k & 1 == 1
            }
        };
        lf.eval(at) == value
    })
}

/// Whether `h` is closed under `f`: no fixed component can be driven away
/// from its value.
pub fn is_trap_space(f: &MonotoneNetwork, h: &Subhypercube) -> bool {
    (0..f.len()).all(|i| match h.get(i) {
        Some(v) => !escape_exists(f, h, i, !v),
        None => true,
    })
}

/// The smallest trap space containing `x`.
///
/// Starting from `x`, components that can escape their value are freed
/// until a full pass over the components frees nothing.
pub fn smallest_trap_space(f: &MonotoneNetwork, x: &Configuration) -> Subhypercube {
    smallest_trap_space_from(f, Subhypercube::from(x))
}

/// Smallest trap space containing the sub-hypercube `h`.
pub fn smallest_trap_space_from(f: &MonotoneNetwork, mut h: Subhypercube) -> Subhypercube {
    loop {
        let mut changed = false;
        for i in 0..f.len() {
            if let Some(v) = h.get(i) {
                if escape_exists(f, &h, i, !v) {
                    h.set(i, None);
                    changed = true;
                }
            }
        }
        if !changed {
            return h;
        }
    }
}

/// Whether the MP attractor `attractor` is reachable from `x`, i.e. lies in
/// `TS(x)`.
pub fn attractor_reachable(
    f: &MonotoneNetwork,
    x: &Configuration,
    attractor: &Subhypercube,
) -> bool {
    subhypercube_leq(attractor, &smallest_trap_space(f, x))
}

/// Whether `x` belongs to an MP attractor: every vertex `y` of `TS(x)`
/// has `TS(y) = TS(x)`.
pub fn in_attractor(f: &MonotoneNetwork, x: &Configuration, limits: &Limits) -> Result<bool> {
    let h = smallest_trap_space(f, x);
    is_minimal_trap_space(f, &h, limits)
}

/// Whether the trap space `h` contains no strictly smaller trap space.
pub fn is_minimal_trap_space(
    f: &MonotoneNetwork,
    h: &Subhypercube,
    limits: &Limits,
) -> Result<bool> {
    check_bits(
        "free components of a trap space",
        h.free_count(),
        limits.max_configuration_bits,
    )?;
    if percolate(f, h.clone()) != *h {
        return Ok(false);
    }
    Ok(h.vertices().all(|y| smallest_trap_space(f, &y) == *h))
}

/// All fixed points of `f`.
pub fn fixed_points(f: &MonotoneNetwork) -> Vec<Configuration> {
    let mut out = Vec::new();
    let _ = for_each_fixed_point(f, &Subhypercube::full(f.len()), |x| {
        out.push(x.clone());
        ControlFlow::<()>::Continue(())
    });
    out.sort();
    out
}

/// All fixed points of `f` lying in the sub-hypercube `h`.
pub fn fixed_points_in(f: &MonotoneNetwork, h: &Subhypercube) -> Vec<Configuration> {
    let mut out = Vec::new();
    let _ = for_each_fixed_point(f, h, |x| {
        out.push(x.clone());
        ControlFlow::<()>::Continue(())
    });
    out.sort();
    out
}

/// Visits the fixed points of `f` within `h` until `visit` breaks.
///
/// Backtracking search over the components: a component is checked as soon
/// as it and all its regulators are assigned, and a component whose
/// regulators are all assigned before it takes its forced value.
pub fn for_each_fixed_point<B>(
    f: &MonotoneNetwork,
    h: &Subhypercube,
    mut visit: impl FnMut(&Configuration) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let plan = SearchPlan::new(f);
    let mut x = vec![false; f.len()];
    plan.search(f, h, 0, &mut x, &mut visit)
}

struct SearchPlan {
    order: Vec<usize>,
    /// Whether the value of `order[d]` is determined by earlier levels.
    forced: Vec<bool>,
    /// Components whose consistency can be checked once level `d` is set.
    checks: Vec<Vec<usize>>,
}

impl SearchPlan {
    fn new(f: &MonotoneNetwork) -> Self {
        let n = f.len();
        let deps: Vec<Vec<usize>> = (0..n)
            .map(|c| {
                let mut d = f.function(c).support().to_vec();
                if !d.contains(&c) {
                    d.push(c);
                }
                d
            })
            .collect();
        let mut assigned = vec![false; n];
        let mut done = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let mut best: Option<(usize, bool, usize)> = None;
            for v in (0..n).filter(|&v| !assigned[v]) {
                let completes = (0..n)
                    .filter(|&c| !done[c])
                    .filter(|&c| deps[c].iter().all(|&j| assigned[j] || j == v))
                    .count();
                let is_forced = f.function(v).support().iter().all(|&j| assigned[j]);
                let better = match best {
                    None => true,
                    Some((_, bf, bc)) => (is_forced, completes) > (bf, bc),
                };
                if better {
                    best = Some((v, is_forced, completes));
                }
            }
            let (v, _, _) = best.unwrap();
            assigned[v] = true;
            order.push(v);
            for c in 0..n {
                if !done[c] && deps[c].iter().all(|&j| assigned[j]) {
                    done[c] = true;
                }
            }
        }
        let mut position = vec![0; n];
        for (d, &v) in order.iter().enumerate() {
            position[v] = d;
        }
        let mut checks = vec![Vec::new(); n];
        let mut forced = vec![false; n];
        for c in 0..n {
            let last = deps[c].iter().map(|&j| position[j]).max().unwrap();
            let own = position[c];
            if f.function(c).support().iter().all(|&j| position[j] < own) {
                forced[own] = true;
            } else {
                checks[last].push(c);
            }
        }
        SearchPlan {
            order,
            forced,
            checks,
        }
    }

    fn search<B>(
        &self,
        f: &MonotoneNetwork,
        h: &Subhypercube,
        depth: usize,
        x: &mut Vec<bool>,
        visit: &mut impl FnMut(&Configuration) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        if depth == self.order.len() {
            return visit(&Configuration::new(x.clone()));
        }
        let v = self.order[depth];
        let candidates: &[bool] = if self.forced[depth] {
            let value = f.function(v).eval(|j| x[j]);
            if h.get(v).is_some_and(|b| b != value) {
                return ControlFlow::Continue(());
            }
            if value {
                &[true]
            } else {
                &[false]
            }
        } else {
            match h.get(v) {
                Some(true) => &[true],
                Some(false) => &[false],
                None => &[false, true],
            }
        };
        for &value in candidates {
            x[v] = value;
            if self.checks[depth]
                .iter()
                .all(|&c| f.function(c).eval(|j| x[j]) == x[c])
            {
                self.search(f, h, depth + 1, x, visit)?;
            }
        }
        ControlFlow::Continue(())
    }
}

/// Fixes every free component of the trap space `h` whose local function
/// is constant over `h`, until none is left. The result is a trap space
/// holding every minimal trap space included in `h`.
pub fn percolate(f: &MonotoneNetwork, mut h: Subhypercube) -> Subhypercube {
    loop {
        let mut changed = false;
        for i in 0..f.len() {
            if h.get(i).is_none() {
                let up = escape_exists(f, &h, i, true);
                if up != escape_exists(f, &h, i, false) {
                    h.set(i, Some(up));
                    changed = true;
                }
            }
        }
        if !changed {
            return h;
        }
    }
}

/// The MP attractors of `f`: the ⪯-minimal elements of `{TS(x)}` over all
/// configurations, which are exactly its minimal trap spaces. Sorted.
pub fn minimal_trap_spaces(f: &MonotoneNetwork, limits: &Limits) -> Result<Vec<Subhypercube>> {
    minimal_trap_spaces_within(f, &Subhypercube::full(f.len()), limits)
}

/// The minimal trap spaces included in the trap space `h`, i.e. the MP
/// attractors reachable from any vertex whose smallest trap space is `h`.
pub fn minimal_trap_spaces_within(
    f: &MonotoneNetwork,
    h: &Subhypercube,
    limits: &Limits,
) -> Result<Vec<Subhypercube>> {
    debug_assert!(is_trap_space(f, h));
    let h = &percolate(f, h.clone());
    let free = h.free_components();
    check_bits(
        "free components to enumerate",
        free.len(),
        limits.max_configuration_bits,
    )?;
    let base: Vec<bool> = h.values().iter().map(|v| v.unwrap_or(false)).collect();
    let vertex = |bits: u64| {
        let mut x = base.clone();
        for (k, &i) in free.iter().enumerate() {
            x[i] = bits >> k & 1 == 1;
        }
        Configuration::new(x)
    };
    let total = 1u64 << free.len();
    let spaces: BTreeSet<Subhypercube> = if total >= 1 << 12 {
        (0..total)
            .into_par_iter()
            .map(|bits| smallest_trap_space(f, &vertex(bits)))
            .collect::<std::collections::HashSet<_>>()
            .into_iter()
            .collect()
    } else {
        (0..total)
            .map(|bits| smallest_trap_space(f, &vertex(bits)))
            .collect()
    };
    Ok(minimal_elements(spaces))
}

/// Keeps the ⪯-minimal sub-hypercubes of a set.
pub fn minimal_elements(spaces: impl IntoIterator<Item = Subhypercube>) -> Vec<Subhypercube> {
    let mut spaces: Vec<Subhypercube> = spaces.into_iter().collect();
    spaces.sort();
    spaces.dedup();
    // Fewer free components first: a strictly smaller cube has fewer.
    spaces.sort_by_key(|h| h.free_count());
    let mut kept: Vec<Subhypercube> = Vec::new();
    for h in spaces {
        if !kept.iter().any(|m| m.is_subcube_of(&h)) {
            kept.push(h);
        }
    }
    kept.sort();
    kept
}

pub(crate) fn check_bits(what: &'static str, size: usize, limit: usize) -> Result<()> {
    if size > limit {
        Err(Error::TooLarge { what, size, limit })
    } else {
        Ok(())
    }
}
