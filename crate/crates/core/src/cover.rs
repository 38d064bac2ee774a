//! Exact cover by Algorithm X on dancing links.
//!
//! Branching is deterministic: the uncovered item with the fewest remaining
//! candidates is chosen (ties to the lowest item index) and its candidates are
//! tried in increasing index order. Same instance, same solution order.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverInstance {
    universe: usize,
    candidates: Vec<Vec<usize>>,
    forced: Vec<usize>,
}

impl CoverInstance {
    /// Candidates are sorted and deduplicated; they must be non-empty with indices below `universe`.
    pub fn new(universe: usize, candidates: Vec<Vec<usize>>) -> Result<Self> {
        let mut cleaned = Vec::with_capacity(candidates.len());
        for (i, mut c) in candidates.into_iter().enumerate() {
            c.sort_unstable();
            c.dedup();
            if c.is_empty() {
                return Err(Error::InvalidInstance(format!("candidate {i} is empty")));
            }
            if c[c.len() - 1] >= universe {
                return Err(Error::InvalidInstance(format!("candidate {i} exceeds universe {universe}")));
            }
            cleaned.push(c);
        }
        Ok(CoverInstance { universe, candidates: cleaned, forced: Vec::new() })
    }

    /// Candidates that every solution must contain.
    pub fn with_forced(mut self, mut forced: Vec<usize>) -> Result<Self> {
        forced.sort_unstable();
        forced.dedup();
        if let Some(&bad) = forced.iter().find(|&&i| i >= self.candidates.len()) {
            return Err(Error::InvalidInstance(format!("forced candidate {bad} does not exist")));
        }
        self.forced = forced;
        Ok(self)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn candidates(&self) -> &[Vec<usize>] {
        &self.candidates
    }

    pub fn forced(&self) -> &[usize] {
        &self.forced
    }

    /// Lexicographically first candidate containing item 0.
    pub fn seed_candidate(&self) -> Option<usize> {
        (0..self.candidates.len())
            .filter(|&i| self.candidates[i][0] == 0)
            .min_by(|&a, &b| self.candidates[a].cmp(&self.candidates[b]).then(a.cmp(&b)))
    }

    /// Partition check done without the solver: disjoint candidates covering everything.
    pub fn is_exact_cover(&self, chosen: &[usize]) -> bool {
        let mut seen = vec![false; self.universe];
        for &c in chosen {
            let Some(set) = self.candidates.get(c) else {
                return false;
            };
            for &x in set {
                if std::mem::replace(&mut seen[x], true) {
                    return false;
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Chosen candidate indices, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoverSolution(pub Vec<usize>);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    First,
    All,
    Count,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Maximum number of solutions to return or count.
    pub limit: Option<u64>,
    /// When nothing is forced, pin [`CoverInstance::seed_candidate`].
    pub seed_candidate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverResult {
    /// Found solutions; left empty in [`Mode::Count`].
    pub solutions: Vec<CoverSolution>,
    pub count: u64,
}

pub fn solve(inst: &CoverInstance, mode: Mode, opts: SolveOptions) -> CoverResult {
    let mut forced = inst.forced.clone();
    if forced.is_empty() && opts.seed_candidate {
        forced.extend(inst.seed_candidate());
    }
    let limit = match mode {
        Mode::First => Some(opts.limit.map_or(1, |l| l.min(1))),
        _ => opts.limit,
    };
    let mut search = Search {
        links: Links::build(inst),
        partial: Vec::new(),
        keep: mode != Mode::Count,
        limit,
        result: CoverResult { solutions: Vec::new(), count: 0 },
    };
    if limit == Some(0) {
        return search.result;
    }
    for &c in &forced {
        if !search.links.select_row(c) {
            return search.result;
        }
        search.partial.push(c);
    }
    search.run();
    search.result
}

struct Search {
    links: Links,
    partial: Vec<usize>,
    keep: bool,
    limit: Option<u64>,
    result: CoverResult,
}

impl Search {
    fn done(&self) -> bool {
        self.limit.is_some_and(|l| self.result.count >= l)
    }

    fn run(&mut self) {
        let Some(col) = self.links.choose_column() else {
            self.result.count += 1;
            if self.keep {
                let mut s = self.partial.clone();
                s.sort_unstable();
                self.result.solutions.push(CoverSolution(s));
            }
            return;
        };
        if self.links.size[col] == 0 {
            return;
        }
        self.links.cover(col);
        let mut r = self.links.down[col];
        while r != col {
            let row = self.links.row_of[r];
            self.partial.push(row);
            let mut j = self.links.right[r];
            while j != r {
                self.links.cover(self.links.col_of[j]);
                j = self.links.right[j];
            }
            self.run();
            let mut j = self.links.left[r];
            while j != r {
                self.links.uncover(self.links.col_of[j]);
                j = self.links.left[j];
            }
            self.partial.pop();
            if self.done() {
                break;
            }
            r = self.links.down[r];
        }
        self.links.uncover(col);
    }
}

/// Toroidal doubly linked lists. Node 0 is the root, nodes `1..=universe` are
/// column headers, the rest are candidate entries.
struct Links {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    col_of: Vec<usize>,
    row_of: Vec<usize>,
    size: Vec<usize>,
    /// first node of each candidate row
    row_head: Vec<usize>,
    covered_rows: Vec<bool>,
}

impl Links {
    fn build(inst: &CoverInstance) -> Self {
        let n = inst.universe;
        let total = 1 + n + inst.candidates.iter().map(Vec::len).sum::<usize>();
        let mut l = Links {
            left: Vec::with_capacity(total),
            right: Vec::with_capacity(total),
            up: Vec::with_capacity(total),
            down: Vec::with_capacity(total),
            col_of: Vec::with_capacity(total),
            row_of: Vec::with_capacity(total),
            size: vec![0; n + 1],
            row_head: Vec::with_capacity(inst.candidates.len()),
            covered_rows: vec![false; inst.candidates.len()],
        };
        for i in 0..=n {
            l.left.push(if i == 0 { n } else { i - 1 });
            l.right.push(if i == n { 0 } else { i + 1 });
            l.up.push(i);
            l.down.push(i);
            l.col_of.push(i);
            l.row_of.push(usize::MAX);
        }
        for (r, cand) in inst.candidates.iter().enumerate() {
            let first = l.left.len();
            l.row_head.push(first);
            for (k, &item) in cand.iter().enumerate() {
                let node = first + k;
                let col = item + 1;
                l.left.push(if k == 0 { first + cand.len() - 1 } else { node - 1 });
                l.right.push(if k + 1 == cand.len() { first } else { node + 1 });
                l.up.push(l.up[col]);
                l.down.push(col);
                let last = l.up[col];
                l.down[last] = node;
                l.up[col] = node;
                l.col_of.push(col);
                l.row_of.push(r);
                l.size[col] += 1;
            }
        }
        l
    }

    fn choose_column(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        let mut c = self.right[0];
        while c != 0 {
            if best.is_none_or(|b| self.size[c] < self.size[b]) {
                best = Some(c);
                if self.size[c] == 0 {
                    break;
                }
            }
            c = self.right[c];
        }
        best
    }

    fn cover(&mut self, col: usize) {
        let (l, r) = (self.left[col], self.right[col]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[col];
        while i != col {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.col_of[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, col: usize) {
        let mut i = self.up[col];
        while i != col {
            let mut j = self.left[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                self.size[self.col_of[j]] += 1;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[col], self.right[col]);
        self.right[l] = col;
        self.left[r] = col;
    }

    /// Commits to a candidate up front. Fails if it clashes with an earlier choice.
    fn select_row(&mut self, row: usize) -> bool {
        if self.covered_rows[row] {
            return false;
        }
        let head = self.row_head[row];
        let mut node = head;
        loop {
            let col = self.col_of[node];
            // a column already removed means an overlap with a previous forced row
            if self.right[self.left[col]] != col {
                return false;
            }
            node = self.right[node];
            if node == head {
                break;
            }
        }
        loop {
            let col = self.col_of[node];
            let mut i = self.down[col];
            while i != col {
                self.covered_rows[self.row_of[i]] = true;
                i = self.down[i];
            }
            self.cover(col);
            node = self.right[node];
            if node == head {
                break;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sets(result: &CoverResult) -> Vec<Vec<usize>> {
        result.solutions.iter().map(|s| s.0.clone()).collect()
    }

    #[test]
    fn tiny_instances() {
        let inst = CoverInstance::new(2, vec![vec![0], vec![1], vec![0, 1]]).unwrap();
        let all = solve(&inst, Mode::All, SolveOptions::default());
        assert_eq!(all.count, 2);
        let mut found = sets(&all);
        found.sort();
        assert_eq!(found, vec![vec![0, 1], vec![2]]);
        assert_eq!(solve(&inst, Mode::Count, SolveOptions::default()).count, 2);
        assert_eq!(solve(&inst, Mode::First, SolveOptions::default()).solutions.len(), 1);

        let twins = CoverInstance::new(1, vec![vec![0], vec![0]]).unwrap();
        assert_eq!(solve(&twins, Mode::Count, SolveOptions::default()).count, 2);

        let none = CoverInstance::new(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(solve(&none, Mode::All, SolveOptions::default()).count, 0);

        let empty = CoverInstance::new(0, vec![]).unwrap();
        assert_eq!(solve(&empty, Mode::Count, SolveOptions::default()).count, 1);
    }

    #[test]
    fn branching_order_is_fixed() {
        // item 1 has the fewest candidates, so candidate 3 = {1,2} is tried before 2 = {1}
        let inst = CoverInstance::new(3, vec![vec![0], vec![0, 2], vec![1], vec![1, 2], vec![2]]).unwrap();
        let all = solve(&inst, Mode::All, SolveOptions::default());
        assert_eq!(sets(&all), vec![vec![0, 2, 4], vec![0, 3], vec![1, 2]]);
        assert_eq!(sets(&solve(&inst, Mode::First, SolveOptions::default())), vec![vec![0, 2, 4]]);
    }

    #[test]
    fn forced_limit_and_seed() {
        let inst = CoverInstance::new(2, vec![vec![0], vec![1], vec![0, 1]]).unwrap();
        let forced = inst.clone().with_forced(vec![2]).unwrap();
        assert_eq!(sets(&solve(&forced, Mode::All, SolveOptions::default())), vec![vec![2]]);
        let clash = inst.clone().with_forced(vec![0, 2]).unwrap();
        assert_eq!(solve(&clash, Mode::Count, SolveOptions::default()).count, 0);
        let limited = solve(&inst, Mode::All, SolveOptions { limit: Some(1), ..Default::default() });
        assert_eq!(limited.count, 1);
        let seeded = solve(&inst, Mode::All, SolveOptions { seed_candidate: true, ..Default::default() });
        assert_eq!(sets(&seeded), vec![vec![0, 1]]);
        assert_eq!(inst.seed_candidate(), Some(0));
        assert!(inst.clone().with_forced(vec![7]).is_err());
    }

    #[test]
    fn invalid_instances() {
        assert!(CoverInstance::new(2, vec![vec![]]).is_err());
        assert!(CoverInstance::new(2, vec![vec![2]]).is_err());
    }

    fn brute_count(inst: &CoverInstance) -> u64 {
        let n = inst.candidates().len();
        (0u32..1 << n)
            .filter(|mask| {
                let chosen: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                inst.is_exact_cover(&chosen)
            })
            .count() as u64
    }

    proptest! {
        #[test]
        fn matches_brute_force_and_is_permutation_invariant(
            universe in 1usize..7,
            raw in prop::collection::vec(prop::collection::vec(0usize..7, 1..4), 1..12),
            shift in 0usize..12,
        ) {
            let cands: Vec<Vec<usize>> = raw.into_iter()
                .map(|c| c.into_iter().map(|x| x % universe).collect())
                .collect();
            let inst = CoverInstance::new(universe, cands.clone()).unwrap();
            let all = solve(&inst, Mode::All, SolveOptions::default());
            prop_assert_eq!(all.count, brute_count(&inst));
            for s in &all.solutions {
                prop_assert!(inst.is_exact_cover(&s.0));
            }
            let mut rotated = cands.clone();
            rotated.rotate_left(shift % cands.len());
            let other = CoverInstance::new(universe, rotated.clone()).unwrap();
            let mut a: Vec<Vec<Vec<usize>>> = all.solutions.iter()
                .map(|s| { let mut v: Vec<Vec<usize>> = s.0.iter().map(|&i| inst.candidates()[i].clone()).collect(); v.sort(); v })
                .collect();
            let mut b: Vec<Vec<Vec<usize>>> = solve(&other, Mode::All, SolveOptions::default()).solutions.iter()
                .map(|s| { let mut v: Vec<Vec<usize>> = s.0.iter().map(|&i| other.candidates()[i].clone()).collect(); v.sort(); v })
                .collect();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
            prop_assert_eq!(solve(&inst, Mode::All, SolveOptions::default()), all);
        }
    }
}
