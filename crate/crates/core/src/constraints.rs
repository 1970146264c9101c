//! Independence systems supplying the candidate sets `A_j` of the greedy loop.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::objective::SolutionSet;
use crate::rng::trial_stream;

/// A downward-closed family of independent subsets of `{0, .., n-1}`.
pub trait ConstraintSystem: Send + Sync {
    fn ground_size(&self) -> usize;

    fn is_independent(&self, members: &[usize]) -> bool;

    /// Upper bound on the size of any independent set; `n` when nothing
    /// tighter is known.
    fn solution_bound(&self) -> usize {
        self.ground_size()
    }

    /// The `k` of a plain cardinality constraint, if this is one.
    fn cardinality(&self) -> Option<usize> {
        None
    }

    /// Elements `e ∉ S` with `S + e` independent, ascending.
    fn candidates(&self, set: &SolutionSet) -> Result<Vec<usize>> {
        if !self.is_independent(set.members()) {
            return Err(Error::NotIndependent);
        }
        let mut buf = set.members().to_vec();
        let mut out = Vec::new();
        for e in 0..self.ground_size() {
            if set.contains(e) {
                continue;
            }
            buf.push(e);
            if self.is_independent(&buf) {
                out.push(e);
            }
            buf.pop();
        }
        Ok(out)
    }
}

fn in_range(members: &[usize], n: usize) -> bool {
    let mut seen = HashSet::with_capacity(members.len());
    members.iter().all(|&e| e < n && seen.insert(e))
}

/// `|S| ≤ k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CardinalityConstraint {
    n: usize,
    k: usize,
}

impl CardinalityConstraint {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(invalid("cardinality bound k must be positive"));
        }
        if n == 0 {
            return Err(invalid("ground set must be nonempty"));
        }
        Ok(Self { n, k })
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl ConstraintSystem for CardinalityConstraint {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn is_independent(&self, members: &[usize]) -> bool {
        members.len() <= self.k && in_range(members, self.n)
    }

    fn solution_bound(&self) -> usize {
        self.k.min(self.n)
    }

    fn cardinality(&self) -> Option<usize> {
        Some(self.k)
    }

    fn candidates(&self, set: &SolutionSet) -> Result<Vec<usize>> {
        if !self.is_independent(set.members()) {
            return Err(Error::NotIndependent);
        }
        if set.len() >= self.k {
            return Ok(Vec::new());
        }
        Ok((0..self.n).filter(|&e| !set.contains(e)).collect())
    }
}

/// At most `capacities[p]` elements from each part `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionMatroid {
    part_of: Vec<usize>,
    capacities: Vec<usize>,
}

impl PartitionMatroid {
    /// `part_of[e]` names the part of element `e`.
    pub fn new(part_of: Vec<usize>, capacities: Vec<usize>) -> Result<Self> {
        if part_of.is_empty() {
            return Err(invalid("ground set must be nonempty"));
        }
        if let Some(&p) = part_of.iter().find(|&&p| p >= capacities.len()) {
            return Err(invalid(format!("part {p} has no capacity")));
        }
        Ok(Self {
            part_of,
            capacities,
        })
    }

    /// Builds from explicit parts, which must partition `{0, .., n-1}`.
    pub fn from_parts(parts: &[Vec<usize>], capacities: Vec<usize>) -> Result<Self> {
        if parts.len() != capacities.len() {
            return Err(invalid("one capacity per part required"));
        }
        let n: usize = parts.iter().map(Vec::len).sum();
        let mut part_of = vec![usize::MAX; n];
        for (p, part) in parts.iter().enumerate() {
            for &e in part {
                if e >= n || part_of[e] != usize::MAX {
                    return Err(invalid("parts must be disjoint and cover 0..n"));
                }
                part_of[e] = p;
            }
        }
        Self::new(part_of, capacities)
    }
}

impl ConstraintSystem for PartitionMatroid {
    fn ground_size(&self) -> usize {
        self.part_of.len()
    }

    fn is_independent(&self, members: &[usize]) -> bool {
        if !in_range(members, self.part_of.len()) {
            return false;
        }
        let mut used = vec![0usize; self.capacities.len()];
        members.iter().all(|&e| {
            let p = self.part_of[e];
            used[p] += 1;
            used[p] <= self.capacities[p]
        })
    }

    fn solution_bound(&self) -> usize {
        let mut sizes = vec![0usize; self.capacities.len()];
        self.part_of.iter().for_each(|&p| sizes[p] += 1);
        sizes
            .iter()
            .zip(&self.capacities)
            .map(|(s, c)| s.min(c))
            .sum()
    }
}

/// Sets independent in every one of `p` matroids; a `p`-system.
pub struct MatroidIntersection {
    matroids: Vec<Box<dyn ConstraintSystem>>,
}

impl MatroidIntersection {
    pub fn new(matroids: Vec<Box<dyn ConstraintSystem>>) -> Result<Self> {
        let n = matroids
            .first()
            .map(|m| m.ground_size())
            .ok_or_else(|| invalid("no matroids"))?;
        if matroids.iter().any(|m| m.ground_size() != n) {
            return Err(invalid("all matroids must share the ground set"));
        }
        Ok(Self { matroids })
    }

    pub fn p(&self) -> usize {
        self.matroids.len()
    }
}

impl ConstraintSystem for MatroidIntersection {
    fn ground_size(&self) -> usize {
        self.matroids[0].ground_size()
    }

    fn is_independent(&self, members: &[usize]) -> bool {
        self.matroids.iter().all(|m| m.is_independent(members))
    }

    fn solution_bound(&self) -> usize {
        self.matroids
            .iter()
            .map(|m| m.solution_bound())
            .min()
            .unwrap_or(0)
    }
}

/// Matchings of a graph; the ground set is the edge list. A 2-system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingSystem {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl MatchingSystem {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if edges.is_empty() {
            return Err(invalid("matching system needs at least one edge"));
        }
        if let Some(&(a, b)) = edges
            .iter()
            .find(|(a, b)| *a >= vertices || *b >= vertices || a == b)
        {
            return Err(invalid(format!("edge ({a},{b}) is a loop or out of range")));
        }
        Ok(Self { vertices, edges })
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

impl ConstraintSystem for MatchingSystem {
    fn ground_size(&self) -> usize {
        self.edges.len()
    }

    fn is_independent(&self, members: &[usize]) -> bool {
        if !in_range(members, self.edges.len()) {
            return false;
        }
        let mut used = vec![false; self.vertices];
        members.iter().all(|&e| {
            let (a, b) = self.edges[e];
            let free = !used[a] && !used[b];
            used[a] = true;
            used[b] = true;
            free
        })
    }

    fn solution_bound(&self) -> usize {
        (self.vertices / 2).min(self.edges.len())
    }
}

/// Lower bound on `p`: over random subsets `E′ ⊆ E`, grows maximal independent
/// sets inside `E′` in random orders and returns the largest ratio of the
/// biggest to the smallest one found.
pub fn empirical_p(system: &dyn ConstraintSystem, trials: usize, seed: u64) -> f64 {
    let n = system.ground_size();
    let mut worst: f64 = 1.0;
    for t in 0..trials {
        let mut rng = trial_stream(seed, t as u64);
        // The first trial always looks at E itself.
        let restricted: Vec<usize> = if t == 0 {
            (0..n).collect()
        } else {
            (0..n).filter(|_| rng.random_bool(0.5)).collect()
        };
        if restricted.is_empty() {
            continue;
        }
        let mut smallest = usize::MAX;
        let mut largest = 0;
        for _ in 0..8 {
            let mut order = restricted.clone();
            order.shuffle(&mut rng);
            let mut set = Vec::new();
            for e in order {
                set.push(e);
                if !system.is_independent(&set) {
                    set.pop();
                }
            }
            smallest = smallest.min(set.len());
            largest = largest.max(set.len());
        }
        if smallest > 0 {
            worst = worst.max(largest as f64 / smallest as f64);
        }
    }
    worst
}
