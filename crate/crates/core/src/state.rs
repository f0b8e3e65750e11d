//! Value types over the components of a network: total configurations,
//! sub-hypercubes and partial assignments.
//!
//! All of them index components by their position in the declaring
//! [`BooleanNetwork`](crate::BooleanNetwork). Conversions from and to
//! component names go through the network.

use std::collections::BTreeMap;
use std::fmt;

/// A total assignment of Boolean values to the components.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration(Vec<bool>);

impl Configuration {
    pub fn new(values: Vec<bool>) -> Self {
        Configuration(values)
    }

    pub fn zeros(n: usize) -> Self {
        Configuration(vec![false; n])
    }

    /// Configuration whose component `i` is bit `i` of `bits`.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        debug_assert!(n <= 64);
        Configuration((0..n).map(|i| bits >> i & 1 == 1).collect())
    }

    pub fn to_bits(&self) -> u64 {
        debug_assert!(self.0.len() <= 64);
        self.0
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &v)| acc | (v as u64) << i)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.0[i] = value;
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }

    /// Iterates over all 2^n configurations of dimension `n`, in binary
    /// counting order with component 0 as the least significant bit.
    pub fn all(n: usize) -> impl Iterator<Item = Configuration> {
        assert!(n < 64, "cannot enumerate 2^{n} configurations");
        (0..1u64 << n).map(move |bits| Configuration::from_bits(n, bits))
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &v in &self.0 {
            f.write_str(if v { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A sub-hypercube of `{0,1}^n`: each component is fixed to a value or free.
///
/// Sub-hypercubes are used both for trap spaces and for MP attractors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subhypercube(Vec<Option<bool>>);

impl Subhypercube {
    pub fn new(values: Vec<Option<bool>>) -> Self {
        Subhypercube(values)
    }

    /// The whole hypercube `*^n`.
    pub fn full(n: usize) -> Self {
        Subhypercube(vec![None; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, value: Option<bool>) {
        self.0[i] = value;
    }

    pub fn values(&self) -> &[Option<bool>] {
        &self.0
    }

    pub fn free_components(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i].is_none()).collect()
    }

    pub fn free_count(&self) -> usize {
        self.0.iter().filter(|v| v.is_none()).count()
    }

    /// Whether `x` is a vertex of this sub-hypercube.
    pub fn contains(&self, x: &Configuration) -> bool {
        self.0
            .iter()
            .zip(x.values())
            .all(|(h, &v)| h.is_none_or(|b| b == v))
    }

    /// `self ⪯ other`, i.e. the vertices of `self` are vertices of `other`.
    pub fn is_subcube_of(&self, other: &Subhypercube) -> bool {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .all(|(mine, theirs)| theirs.is_none() || mine == theirs)
    }

    /// Iterates over the vertices of the sub-hypercube. The free components
    /// are enumerated in binary counting order.
    pub fn vertices(&self) -> impl Iterator<Item = Configuration> + '_ {
        let free = self.free_components();
        assert!(free.len() < 64, "too many free components to enumerate");
        let base: Vec<bool> = self.0.iter().map(|v| v.unwrap_or(false)).collect();
        (0..1u64 << free.len()).map(move |bits| {
            let mut x = base.clone();
            for (k, &i) in free.iter().enumerate() {
                x[i] = bits >> k & 1 == 1;
            }
            Configuration(x)
        })
    }
}

impl From<&Configuration> for Subhypercube {
    fn from(x: &Configuration) -> Self {
        Subhypercube(x.values().iter().map(|&v| Some(v)).collect())
    }
}

impl fmt::Display for Subhypercube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.0 {
            f.write_str(match v {
                Some(true) => "1",
                Some(false) => "0",
                None => "*",
            })?;
        }
        Ok(())
    }
}

/// A partial map from components to Boolean values.
///
/// Depending on the context this is a marker, a perturbation or a partial
/// source configuration.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialAssignment(BTreeMap<usize, bool>);

impl PartialAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, component: usize, value: bool) -> Option<bool> {
        self.0.insert(component, value)
    }

    pub fn get(&self, component: usize) -> Option<bool> {
        self.0.get(&component).copied()
    }

    pub fn contains(&self, component: usize) -> bool {
        self.0.contains_key(&component)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entries in increasing component order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.0.iter().map(|(&k, &v)| (k, v))
    }

    pub fn keys(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.keys().copied()
    }

    /// Whether every entry of `self` is also an entry of `other`.
    pub fn is_submap_of(&self, other: &PartialAssignment) -> bool {
        self.len() <= other.len() && self.iter().all(|(k, v)| other.get(k) == Some(v))
    }

    /// Whether the total configuration `x` agrees with every entry.
    pub fn matches(&self, x: &Configuration) -> bool {
        self.iter().all(|(i, v)| x.get(i) == v)
    }

    /// Whether every vertex of `h` agrees with every entry.
    pub fn matched_by_subcube(&self, h: &Subhypercube) -> bool {
        self.iter().all(|(i, v)| h.get(i) == Some(v))
    }

    /// The sub-hypercube of dimension `n` fixing exactly these entries.
    pub fn to_subcube(&self, n: usize) -> Subhypercube {
        let mut h = Subhypercube::full(n);
        for (i, v) in self.iter() {
            h.set(i, Some(v));
        }
        h
    }

    /// If every one of the `n` components is assigned, the corresponding
    /// configuration.
    pub fn to_configuration(&self, n: usize) -> Option<Configuration> {
        (0..n)
            .map(|i| self.get(i))
            .collect::<Option<Vec<_>>>()
            .map(Configuration::new)
    }
}

impl FromIterator<(usize, bool)> for PartialAssignment {
    fn from_iter<I: IntoIterator<Item = (usize, bool)>>(iter: I) -> Self {
        PartialAssignment(iter.into_iter().collect())
    }
}

impl From<&Configuration> for PartialAssignment {
    fn from(x: &Configuration) -> Self {
        x.values().iter().copied().enumerate().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube(s: &str) -> Subhypercube {
        Subhypercube::new(
            s.chars()
                .map(|c| match c {
                    '0' => Some(false),
                    '1' => Some(true),
                    _ => None,
                })
                .collect(),
        )
    }

    #[test]
    fn subcube_order() {
        assert!(cube("0**").is_subcube_of(&cube("***")));
        assert!(cube("001").is_subcube_of(&cube("0**")));
        assert!(cube("011").is_subcube_of(&cube("0*1")));
        assert!(!cube("0**").is_subcube_of(&cube("1**")));
        assert!(!cube("***").is_subcube_of(&cube("0**")));
    }

    #[test]
    fn subcube_order_matches_vertex_inclusion() {
        let all: Vec<Subhypercube> = (0..27)
            .map(|mut code| {
                let mut v = Vec::new();
                for _ in 0..3 {
                    v.push(match code % 3 {
                        0 => Some(false),
                        1 => Some(true),
                        _ => None,
                    });
                    code /= 3;
                }
                Subhypercube::new(v)
            })
            .collect();
        for a in &all {
            for b in &all {
                let included = a.vertices().all(|x| b.contains(&x));
                assert_eq!(a.is_subcube_of(b), included, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn vertices_enumerates_free_part() {
        let h = cube("1*0*");
        let v: Vec<String> = h.vertices().map(|x| x.to_string()).collect();
        assert_eq!(v, ["1000", "1100", "1001", "1101"]);
        assert_eq!(Configuration::from_bits(3, 0b110).to_string(), "011");
    }

    #[test]
    fn submaps() {
        let a: PartialAssignment = [(0, false)].into_iter().collect();
        let ac: PartialAssignment = [(0, false), (2, true)].into_iter().collect();
        let a1: PartialAssignment = [(0, true)].into_iter().collect();
        assert!(a.is_submap_of(&ac));
        assert!(!ac.is_submap_of(&a));
        assert!(!a1.is_submap_of(&ac));
        assert!(PartialAssignment::new().is_submap_of(&a1));
    }

    #[test]
    fn empty_marker_matches_everything() {
        let m = PartialAssignment::new();
        assert!(Configuration::all(3).all(|x| m.matches(&x)));
        assert!(m.matched_by_subcube(&Subhypercube::full(3)));
    }
}
