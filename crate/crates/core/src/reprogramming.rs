//! Marker reprogramming: enumeration of the subset-minimal permanent
//! perturbations of at most `k` components after which every fixed point,
//! or every MP attractor, matches a marker. Both problems come in a global
//! form and in a form restricted to what is reachable from a source
//! configuration.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use rayon::prelude::*;

use crate::candidates::SizedCandidates;
use crate::dynamics::{
    check_bits, for_each_fixed_point, in_attractor, minimal_trap_spaces_within, smallest_trap_space,
};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::network::ComponentId;
use crate::state::{Configuration, PartialAssignment, Subhypercube};
use crate::unate::MonotoneNetwork;

/// What must match the marker after perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    FixedPoints,
    Attractors,
}

/// The four reprogramming problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Problem {
    /// All fixed points match the marker.
    MarkerFixpoints,
    /// All fixed points reachable from the source match the marker.
    SourceMarkerFixpoints,
    /// All MP attractors match the marker.
    MarkerAttractors,
    /// All MP attractors reachable from the source match the marker.
    SourceMarkerAttractors,
}

/// How attractor problems are decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Framing {
    /// Compute the (reachable) minimal trap spaces and check each of them.
    #[default]
    Direct,
    /// Search for a configuration in an attractor violating the marker and
    /// negate.
    Complement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReprogramQuery {
    pub target: Target,
    pub marker: PartialAssignment,
    /// Largest number of simultaneously perturbed components.
    pub max_size: usize,
    /// Components that must not be perturbed.
    pub exclude: BTreeSet<usize>,
    /// Source configuration; components it leaves out are free and any
    /// completion may serve as the source.
    pub source: Option<PartialAssignment>,
    /// For fixed-point problems, also require that at least one (reachable)
    /// fixed point matches the marker. Ignored for attractors.
    pub ensure_exists: bool,
}

impl ReprogramQuery {
    pub fn new(target: Target, marker: PartialAssignment, max_size: usize) -> Self {
        ReprogramQuery {
            target,
            marker,
            max_size,
            exclude: BTreeSet::new(),
            source: None,
            ensure_exists: true,
        }
    }

    pub fn fixpoints(marker: PartialAssignment, max_size: usize) -> Self {
        Self::new(Target::FixedPoints, marker, max_size)
    }

    pub fn attractors(marker: PartialAssignment, max_size: usize) -> Self {
        Self::new(Target::Attractors, marker, max_size)
    }

    pub fn with_source(mut self, source: PartialAssignment) -> Self {
        self.source = Some(source);
        self
    }

    pub fn with_exclude(mut self, exclude: impl IntoIterator<Item = usize>) -> Self {
        self.exclude.extend(exclude);
        self
    }

    pub fn allow_no_fixpoint(mut self) -> Self {
        self.ensure_exists = false;
        self
    }

    pub fn problem(&self) -> Problem {
        match (self.target, self.source.is_some()) {
            (Target::FixedPoints, false) => Problem::MarkerFixpoints,
            (Target::FixedPoints, true) => Problem::SourceMarkerFixpoints,
            (Target::Attractors, false) => Problem::MarkerAttractors,
            (Target::Attractors, true) => Problem::SourceMarkerAttractors,
        }
    }

    /// Checks that every referenced component exists in a network of
    /// dimension `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        let out_of_range = self
            .marker
            .keys()
            .chain(self.exclude.iter().copied())
            .chain(self.source.iter().flat_map(|s| s.keys()))
            .find(|&i| i >= n);
        match out_of_range {
            Some(i) => Err(Error::UnknownComponent(format!("#{i}"))),
            None => Ok(()),
        }
    }

    /// Components that may be perturbed, in increasing order.
    pub fn allowed_components(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|i| !self.exclude.contains(i)).collect()
    }
}

/// Submap-minimal perturbations, sorted by size, then by component names
/// and values.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolutionSet {
    solutions: Vec<PartialAssignment>,
}

impl SolutionSet {
    /// Sorts `solutions` for display using the component names.
    pub fn new(mut solutions: Vec<PartialAssignment>, names: &[ComponentId]) -> Self {
        solutions.sort_by_cached_key(|p| sort_key(p, names));
        solutions.dedup();
        SolutionSet { solutions }
    }

    pub fn solutions(&self) -> &[PartialAssignment] {
        &self.solutions
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &PartialAssignment> {
        self.solutions.iter()
    }

    pub fn into_vec(self) -> Vec<PartialAssignment> {
        self.solutions
    }

    /// The solutions as a set, for order-insensitive comparisons.
    pub fn to_set(&self) -> BTreeSet<PartialAssignment> {
        self.solutions.iter().cloned().collect()
    }
}

fn sort_key(p: &PartialAssignment, names: &[ComponentId]) -> (usize, Vec<(ComponentId, bool)>) {
    let mut entries: Vec<(ComponentId, bool)> =
        p.iter().map(|(i, v)| (names[i].clone(), v)).collect();
    entries.sort();
    (p.len(), entries)
}

/// Keeps the perturbations of `raw` having no strict submap in `raw`.
pub fn minimal_filter(raw: impl IntoIterator<Item = PartialAssignment>) -> Vec<PartialAssignment> {
    let mut raw: Vec<PartialAssignment> = raw.into_iter().collect();
    raw.sort();
    raw.dedup();
    raw.sort_by_key(|p| p.len());
    let mut kept: Vec<PartialAssignment> = Vec::new();
    for p in raw {
        if !kept.iter().any(|q| q.is_submap_of(&p)) {
            kept.push(p);
        }
    }
    kept
}

/// Whether `x` agrees with the marker on every marked component.
pub fn matches(x: &Configuration, marker: &PartialAssignment) -> bool {
    marker.matches(x)
}

/// Whether every configuration of the attractor `m` matches the marker,
/// i.e. every marked component is fixed in `m` to its marker value.
pub fn attractor_matches(m: &Subhypercube, marker: &PartialAssignment) -> bool {
    marker.matched_by_subcube(m)
}

/// Every fixed point of `f` lying in `space` matches `marker`, and if
/// `ensure_exists`, at least one does.
fn fixed_points_match(
    f: &MonotoneNetwork,
    space: &Subhypercube,
    marker: &PartialAssignment,
    ensure_exists: bool,
) -> bool {
    let mut found = false;
    let flow = for_each_fixed_point(f, space, |x| {
        if marker.matches(x) {
            found = true;
            ControlFlow::Continue(())
        } else {
            ControlFlow::Break(())
        }
    });
    flow.is_continue() && (found || !ensure_exists)
}

/// All fixed points of `f/P` match the marker (and, with `ensure_exists`,
/// there is at least one).
pub fn is_fixpoint_solution(
    f: &MonotoneNetwork,
    marker: &PartialAssignment,
    perturbation: &PartialAssignment,
    ensure_exists: bool,
) -> bool {
    let fp = f.perturbed(perturbation);
    fixed_points_match(&fp, &Subhypercube::full(f.len()), marker, ensure_exists)
}

/// All fixed points of `f/P` reachable from `source` match the marker
/// (and, with `ensure_exists`, at least one matching fixed point is
/// reachable).
pub fn is_source_fixpoint_solution(
    f: &MonotoneNetwork,
    source: &Configuration,
    marker: &PartialAssignment,
    perturbation: &PartialAssignment,
    ensure_exists: bool,
) -> bool {
    let fp = f.perturbed(perturbation);
    let reachable = smallest_trap_space(&fp, source);
    fixed_points_match(&fp, &reachable, marker, ensure_exists)
}

/// All MP attractors of `f/P` match the marker.
pub fn is_attractor_solution(
    f: &MonotoneNetwork,
    marker: &PartialAssignment,
    perturbation: &PartialAssignment,
    limits: &Limits,
) -> Result<bool> {
    let fp = f.perturbed(perturbation);
    let attractors = minimal_trap_spaces_within(&fp, &Subhypercube::full(f.len()), limits)?;
    Ok(attractors.iter().all(|m| attractor_matches(m, marker)))
}

/// Some configuration of some MP attractor of `f/P` violates the marker.
/// The negation of [`is_attractor_solution`], decided configuration by
/// configuration.
pub fn is_bad_attractor_perturbation(
    f: &MonotoneNetwork,
    marker: &PartialAssignment,
    perturbation: &PartialAssignment,
    limits: &Limits,
) -> Result<bool> {
    let fp = f.perturbed(perturbation);
    exists_violating_attractor_state(&fp, &Subhypercube::full(f.len()), marker, limits)
}

/// All MP attractors of `f/P` reachable from `source` match the marker.
pub fn is_source_attractor_solution(
    f: &MonotoneNetwork,
    source: &Configuration,
    marker: &PartialAssignment,
    perturbation: &PartialAssignment,
    limits: &Limits,
) -> Result<bool> {
    let fp = f.perturbed(perturbation);
    let reachable = smallest_trap_space(&fp, source);
    let attractors = minimal_trap_spaces_within(&fp, &reachable, limits)?;
    Ok(attractors.iter().all(|m| attractor_matches(m, marker)))
}

/// Some configuration reachable from `source` lies in an MP attractor of
/// `f/P` and violates the marker.
pub fn is_bad_source_attractor_perturbation(
    f: &MonotoneNetwork,
    source: &Configuration,
    marker: &PartialAssignment,
    perturbation: &PartialAssignment,
    limits: &Limits,
) -> Result<bool> {
    let fp = f.perturbed(perturbation);
    let reachable = smallest_trap_space(&fp, source);
    exists_violating_attractor_state(&fp, &reachable, marker, limits)
}

fn exists_violating_attractor_state(
    f: &MonotoneNetwork,
    space: &Subhypercube,
    marker: &PartialAssignment,
    limits: &Limits,
) -> Result<bool> {
    check_bits(
        "free components to enumerate",
        space.free_count(),
        limits.max_configuration_bits,
    )?;
    for x in space.vertices() {
        if !marker.matches(&x) && in_attractor(f, &x, limits)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Total completions of a partial source configuration.
pub fn source_completions(
    source: &PartialAssignment,
    n: usize,
    limits: &Limits,
) -> Result<Vec<Configuration>> {
    let h = source.to_subcube(n);
    check_bits(
        "free components of the source",
        h.free_count(),
        limits.max_source_completion_bits,
    )?;
    Ok(h.vertices().collect())
}

/// Decides whether `perturbation` solves `query` on `f`. With a partial
/// source, the perturbation qualifies if it works from at least one total
/// completion of it.
pub fn check_perturbation(
    f: &MonotoneNetwork,
    query: &ReprogramQuery,
    perturbation: &PartialAssignment,
    framing: Framing,
    limits: &Limits,
) -> Result<bool> {
    let marker = &query.marker;
    match &query.source {
        None => match query.target {
            Target::FixedPoints => Ok(is_fixpoint_solution(
                f,
                marker,
                perturbation,
                query.ensure_exists,
            )),
            Target::Attractors => match framing {
                Framing::Direct => is_attractor_solution(f, marker, perturbation, limits),
                Framing::Complement => Ok(!is_bad_attractor_perturbation(
                    f,
                    marker,
                    perturbation,
                    limits,
                )?),
            },
        },
        Some(source) => {
            for z in source_completions(source, f.len(), limits)? {
                let good = match query.target {
                    Target::FixedPoints => is_source_fixpoint_solution(
                        f,
                        &z,
                        marker,
                        perturbation,
                        query.ensure_exists,
                    ),
                    Target::Attractors => match framing {
                        Framing::Direct => {
                            is_source_attractor_solution(f, &z, marker, perturbation, limits)?
                        }
                        Framing::Complement => !is_bad_source_attractor_perturbation(
                            f,
                            &z,
                            marker,
                            perturbation,
                            limits,
                        )?,
                    },
                };
                if good {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

const CHUNK: usize = 256;

/// Enumerates the submap-minimal perturbations over `allowed` of at most
/// `max_size` components satisfying `predicate`, by increasing size.
///
/// Candidates having an already accepted solution as submap are skipped.
/// Within a size class candidates are checked in parallel, chunk by chunk;
/// each chunk's solutions are passed to `on_solution` in enumeration order
/// as soon as the chunk completes. Returns early if `on_solution` breaks.
pub fn enumerate_minimal(
    allowed: &[usize],
    max_size: usize,
    predicate: impl Fn(&PartialAssignment) -> Result<bool> + Sync,
    mut on_solution: impl FnMut(&PartialAssignment) -> ControlFlow<()>,
) -> Result<Vec<PartialAssignment>> {
    let mut accepted: Vec<PartialAssignment> = Vec::new();
    for size in 0..=max_size.min(allowed.len()) {
        let mut candidates = SizedCandidates::new(allowed.to_vec(), size)
            .filter(|p| !accepted.iter().any(|q| q.is_submap_of(p)))
            .peekable();
        let mut found = Vec::new();
        let mut stop = false;
        'chunks: while candidates.peek().is_some() {
            let chunk: Vec<PartialAssignment> = candidates.by_ref().take(CHUNK).collect();
            let verdicts: Vec<bool> = chunk.par_iter().map(&predicate).collect::<Result<_>>()?;
            for (p, good) in chunk.into_iter().zip(verdicts) {
                if good {
                    stop = on_solution(&p).is_break();
                    found.push(p);
                    if stop {
                        break 'chunks;
                    }
                }
            }
        }
        drop(candidates);
        accepted.extend(found);
        if stop {
            break;
        }
    }
    Ok(accepted)
}

/// Solves `query` on `f`, returning all submap-minimal solutions.
pub fn solve(f: &MonotoneNetwork, query: &ReprogramQuery, limits: &Limits) -> Result<SolutionSet> {
    solve_with(f, query, Framing::Direct, limits, |_| {
        ControlFlow::Continue(())
    })
}

/// Like [`solve`], choosing the framing for attractor problems and
/// streaming each solution to `on_solution` as soon as it is established.
pub fn solve_with(
    f: &MonotoneNetwork,
    query: &ReprogramQuery,
    framing: Framing,
    limits: &Limits,
    on_solution: impl FnMut(&PartialAssignment) -> ControlFlow<()>,
) -> Result<SolutionSet> {
    query.validate(f.len())?;
    let allowed = query.allowed_components(f.len());
    let found = enumerate_minimal(
        &allowed,
        query.max_size,
        |p| check_perturbation(f, query, p, framing, limits),
        on_solution,
    )?;
    Ok(SolutionSet::new(found, f.names()))
}

/// Every perturbation of at most `max_size` allowed components, without
/// pruning, for which `query` holds. Exponential; meant for cross-checks.
pub fn raw_good_set(
    f: &MonotoneNetwork,
    query: &ReprogramQuery,
    framing: Framing,
    limits: &Limits,
) -> Result<Vec<PartialAssignment>> {
    let allowed = query.allowed_components(f.len());
    let mut out = Vec::new();
    for size in 0..=query.max_size.min(allowed.len()) {
        for p in SizedCandidates::new(allowed.clone(), size) {
            if check_perturbation(f, query, &p, framing, limits)? {
                out.push(p);
            }
        }
    }
    Ok(out)
}
