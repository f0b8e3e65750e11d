use crate::state::PartialAssignment;

/// Lazily enumerates the perturbations of exactly `size` components drawn
/// from `allowed`, in lexicographic order of keys and then values (0 before
/// 1, earlier keys varying slowest).
#[derive(Debug, Clone)]
pub struct SizedCandidates {
    allowed: Vec<usize>,
    combo: Vec<usize>,
    values: u64,
    done: bool,
}

impl SizedCandidates {
    pub fn new(mut allowed: Vec<usize>, size: usize) -> Self {
        allowed.sort_unstable();
        allowed.dedup();
        assert!(size < 64, "perturbation size too large");
        SizedCandidates {
            done: size > allowed.len(),
            combo: (0..size).collect(),
            values: 0,
            allowed,
        }
    }

    fn advance_combo(&mut self) -> bool {
        let k = self.combo.len();
        let m = self.allowed.len();
        for pos in (0..k).rev() {
            if self.combo[pos] < m - k + pos {
                self.combo[pos] += 1;
                for next in pos + 1..k {
                    self.combo[next] = self.combo[next - 1] + 1;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for SizedCandidates {
    type Item = PartialAssignment;

    fn next(&mut self) -> Option<PartialAssignment> {
        if self.done {
            return None;
        }
        let k = self.combo.len();
        let item = self
            .combo
            .iter()
            .enumerate()
            .map(|(pos, &c)| (self.allowed[c], self.values >> (k - 1 - pos) & 1 == 1))
            .collect();
        self.values += 1;
        if self.values == 1 << k {
            self.values = 0;
            if !self.advance_combo() {
                self.done = true;
            }
        }
        Some(item)
    }
}

/// Every perturbation of at most `max_size` components of `0..n` outside
/// `exclude`, grouped by increasing size.
pub fn candidate_perturbations(
    n: usize,
    max_size: usize,
    exclude: &[usize],
) -> impl Iterator<Item = PartialAssignment> {
    let allowed: Vec<usize> = (0..n).filter(|i| !exclude.contains(i)).collect();
    let top = max_size.min(allowed.len());
    (0..=top).flat_map(move |size| SizedCandidates::new(allowed.clone(), size))
}

/// `Σ_{j ≤ k} C(m, j) 2^j`, the number of perturbations of at most `k` of
/// `m` components.
pub fn candidate_count(m: usize, k: usize) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128;
    for j in 0..=k.min(m) {
        total += binom << j;
        binom = binom * (m - j) as u128 / (j + 1) as u128;
    }
    total
}
