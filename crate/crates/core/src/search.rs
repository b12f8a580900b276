//! Exhaustive backtracking search for iterative roots on small ground sets.
//!
//! Candidates are assigned point by point in index order. For multifunctions
//! each point's image runs over subsets in size-then-value order, for maps
//! over target indices in ascending order; the first root met is therefore
//! the canonically least one, whatever pruning is active.
//!
//! Pruning is sound for every root `G` of `F` of order `n`:
//!
//! * Partial iterates: with undecided points mapped to `∅`, the partial
//!   `G^n(x)` is a subset of the final one, so it must stay inside `F(x)`,
//!   and must equal `F(x)` once the whole orbit is decided.
//! * Commutation: `G ∘ F = F ∘ G = G^{n+1}`. For decided `x` and
//!   `z ∈ F(x)` this bounds `G(z) ⊆ F(G(x))`.
//! * For `n = 2`, `y ∈ G(x)` bounds `G(y) ⊆ F(x)`.
//! * `F(x) ≠ ∅` forces `G(x) ≠ ∅`.
//!
//! Top-level branches may run in parallel; their results are merged in
//! branch order so the witness, node count and budget verdict equal those of
//! a sequential run.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use crate::mf::{Multifunction, SingleMap};
use crate::oracle::canonical_subsets;
use crate::{Error, Execution, PointSet, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DegreeBound {
    Unconstrained,
    /// `#G(x) ≤ M` for every `x`.
    MaxOutDegree(u64),
    /// `#G^{-1}({x}) ≤ M` for every `x`.
    MaxInDegree(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RootConstraint {
    pub bound: DegreeBound,
    pub require_total_domain: bool,
}

impl RootConstraint {
    pub const UNCONSTRAINED: RootConstraint =
        RootConstraint { bound: DegreeBound::Unconstrained, require_total_domain: false };

    pub fn max_out(m: u64) -> Self {
        RootConstraint { bound: DegreeBound::MaxOutDegree(m), require_total_domain: false }
    }

    pub fn max_in(m: u64) -> Self {
        RootConstraint { bound: DegreeBound::MaxInDegree(m), require_total_domain: false }
    }

    pub fn total(self) -> Self {
        RootConstraint { require_total_domain: true, ..self }
    }

    /// Whether `g` lies in the constrained class.
    pub fn admits(&self, g: &Multifunction) -> bool {
        if self.require_total_domain && !g.is_total() {
            return false;
        }
        match self.bound {
            DegreeBound::Unconstrained => true,
            DegreeBound::MaxOutDegree(m) => g.out_degrees().into_iter().all(|d| d as u64 <= m),
            DegreeBound::MaxInDegree(m) => g.in_degrees().into_iter().all(|d| d as u64 <= m),
        }
    }
}

/// Ground-size caps and pruning switches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    /// Multifunction search without a degree bound, or with a bound above 2.
    pub unconstrained_cap: usize,
    /// Multifunction search with an in- or out-degree bound of at most 2.
    pub low_degree_cap: usize,
    /// Single-map search covered exhaustively within a default budget.
    pub single_exhaustive_cap: usize,
    /// Largest single map accepted at all; between the two caps the search
    /// is still complete but relies on pruning and the node budget.
    pub single_backtracking_cap: usize,
    pub commutation_filter: bool,
    pub execution: Execution,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            unconstrained_cap: 5,
            low_degree_cap: 6,
            single_exhaustive_cap: 8,
            single_backtracking_cap: 64,
            commutation_filter: true,
            execution: Execution::default(),
        }
    }
}

impl SearchConfig {
    fn multi_cap(&self, c: &RootConstraint) -> usize {
        let cap = match c.bound {
            DegreeBound::MaxOutDegree(m) | DegreeBound::MaxInDegree(m) if m <= 2 => self.low_degree_cap,
            _ => self.unconstrained_cap,
        };
        cap.min(64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<W> {
    Witness(W),
    /// The whole constrained candidate space was covered.
    ExhaustedNone { nodes_explored: u64 },
    BudgetExceeded { budget: u64 },
}

#[derive(Debug, Clone)]
pub struct SearchResult<W> {
    pub order: u64,
    pub constraint: RootConstraint,
    pub outcome: Outcome<W>,
    pub elapsed: Duration,
}

impl<W> SearchResult<W> {
    pub fn witness(&self) -> Option<&W> {
        match &self.outcome {
            Outcome::Witness(w) => Some(w),
            _ => None,
        }
    }

    pub fn found(&self) -> bool {
        matches!(self.outcome, Outcome::Witness(_))
    }

    pub fn exhausted(&self) -> bool {
        matches!(self.outcome, Outcome::ExhaustedNone { .. })
    }
}

/// Result of one top-level branch.
enum Branch<W> {
    Found(W, u64),
    None(u64),
    Exceeded,
    Skipped,
}

struct OverBudget;

/// Runs `run_branch(i, budget)` for every top-level branch and merges.
fn fan_out<W: Send>(
    branches: usize,
    budget: u64,
    exec: Execution,
    run_branch: impl Fn(usize, u64, &dyn Fn() -> bool) -> Branch<W> + Sync + Send,
) -> Outcome<W> {
    let mut total = 0u64;
    if exec.is_parallel() && branches > 1 {
        let best = AtomicUsize::new(usize::MAX);
        let results = exec.map_range(0..branches, |i| {
            if best.load(Ordering::Relaxed) < i {
                return Branch::Skipped;
            }
            let cancelled = || best.load(Ordering::Relaxed) < i;
            let r = run_branch(i, budget, &cancelled);
            if matches!(r, Branch::Found(..)) {
                best.fetch_min(i, Ordering::Relaxed);
            }
            r
        });
        for r in results {
            match r {
                Branch::Found(w, nodes) => {
                    total += nodes;
                    return if total > budget { Outcome::BudgetExceeded { budget } } else { Outcome::Witness(w) };
                }
                Branch::None(nodes) => {
                    total += nodes;
                    if total > budget {
                        return Outcome::BudgetExceeded { budget };
                    }
                }
                Branch::Exceeded => return Outcome::BudgetExceeded { budget },
                Branch::Skipped => unreachable!("branches after a witness are never merged"),
            }
        }
    } else {
        for i in 0..branches {
            if total >= budget {
                return Outcome::BudgetExceeded { budget };
            }
            match run_branch(i, budget - total, &|| false) {
                Branch::Found(w, _) => return Outcome::Witness(w),
                Branch::None(nodes) => total += nodes,
                Branch::Exceeded => return Outcome::BudgetExceeded { budget },
                Branch::Skipped => unreachable!(),
            }
        }
    }
    Outcome::ExhaustedNone { nodes_explored: total }
}

/// Searches for `G` with `G^n = F` in the constrained class.
pub fn find_multi_root(
    f: &Multifunction,
    n: u64,
    constraint: RootConstraint,
    budget: u64,
    config: &SearchConfig,
) -> Result<SearchResult<Multifunction>> {
    let start = Instant::now();
    if n < 2 {
        return Err(Error::OrderTooSmall { min: 2, got: n });
    }
    if budget == 0 {
        return Err(Error::ZeroCount("budget"));
    }
    let cap = config.multi_cap(&constraint);
    if f.size() > cap {
        return Err(Error::GroundTooLarge { size: f.size(), cap });
    }
    let search = MultiSearch::new(f, n, constraint, config.commutation_filter);
    let top = search.candidates_for(0, &search.fresh_state());
    let outcome = fan_out(top.len(), budget, config.execution, |i, budget, cancelled| {
        let mut state = search.fresh_state();
        let mut nodes = 1u64;
        if !search.assign(&mut state, 0, top[i]) {
            return Branch::None(nodes);
        }
        match search.dfs(&mut state, 1, &mut nodes, budget, cancelled) {
            Ok(true) => Branch::Found(state.g.clone(), nodes),
            Ok(false) if cancelled() => Branch::Skipped,
            Ok(false) => Branch::None(nodes),
            Err(OverBudget) => Branch::Exceeded,
        }
    });
    let outcome = match outcome {
        Outcome::Witness(masks) => {
            let images = masks.into_iter().map(PointSet::from_mask).collect();
            Outcome::Witness(Multifunction::new(f.ground().clone(), images).expect("indices in range"))
        }
        Outcome::ExhaustedNone { nodes_explored } => Outcome::ExhaustedNone { nodes_explored },
        Outcome::BudgetExceeded { budget } => Outcome::BudgetExceeded { budget },
    };
    Ok(SearchResult { order: n, constraint, outcome, elapsed: start.elapsed() })
}

#[derive(Clone)]
struct MultiState {
    g: Vec<u64>,
    in_count: Vec<u64>,
}

struct MultiSearch {
    size: usize,
    order: u64,
    target: Vec<u64>,
    /// `F(G(x))` lookups need `F` of a set.
    constraint: RootConstraint,
    commutation: bool,
    candidates: Vec<u64>,
}

impl MultiSearch {
    fn new(f: &Multifunction, order: u64, constraint: RootConstraint, commutation: bool) -> Self {
        let size = f.size();
        let candidates = canonical_subsets(size)
            .into_iter()
            .filter(|s| match constraint.bound {
                DegreeBound::MaxOutDegree(m) => s.count_ones() as u64 <= m,
                _ => true,
            })
            .filter(|&s| !constraint.require_total_domain || s != 0)
            .collect();
        MultiSearch { size, order, target: f.masks(), constraint, commutation, candidates }
    }

    fn fresh_state(&self) -> MultiState {
        MultiState { g: vec![0; self.size], in_count: vec![0; self.size] }
    }

    fn image(map: &[u64], set: u64) -> u64 {
        let mut out = 0;
        let mut s = set;
        while s != 0 {
            out |= map[s.trailing_zeros() as usize];
            s &= s - 1;
        }
        out
    }

    /// Candidates for point `x` given decided points `0..x`.
    fn candidates_for(&self, x: usize, st: &MultiState) -> Vec<u64> {
        let full = if self.size == 64 { u64::MAX } else { (1u64 << self.size) - 1 };
        let mut upper = full;
        for p in 0..x {
            if self.commutation && self.target[p] & (1 << x) != 0 {
                upper &= Self::image(&self.target, st.g[p]);
            }
            if self.order == 2 && st.g[p] & (1 << x) != 0 {
                upper &= self.target[p];
            }
        }
        let need_nonempty = self.target[x] != 0;
        self.candidates
            .iter()
            .copied()
            .filter(|&s| s & !upper == 0 && !(need_nonempty && s == 0))
            .collect()
    }

    /// Sets `G(x) = s` and checks every pruning rule; `false` means prune.
    fn assign(&self, st: &mut MultiState, x: usize, s: u64) -> bool {
        st.g[x] = s;
        if let DegreeBound::MaxInDegree(m) = self.constraint.bound {
            let mut bits = s;
            let mut ok = true;
            while bits != 0 {
                let y = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                st.in_count[y] += 1;
                ok &= st.in_count[y] <= m;
            }
            if !ok {
                return false;
            }
        }
        self.consistent(st, x)
    }

    fn unassign(&self, st: &mut MultiState, x: usize) {
        if let DegreeBound::MaxInDegree(_) = self.constraint.bound {
            let mut bits = st.g[x];
            while bits != 0 {
                st.in_count[bits.trailing_zeros() as usize] -= 1;
                bits &= bits - 1;
            }
        }
        st.g[x] = 0;
    }

    fn consistent(&self, st: &MultiState, x: usize) -> bool {
        let decided = if x + 1 >= 64 { u64::MAX } else { (1u64 << (x + 1)) - 1 };
        for p in 0..=x {
            let mut cur = 1u64 << p;
            let mut determined = true;
            for _ in 0..self.order {
                if cur & !decided != 0 {
                    determined = false;
                }
                cur = Self::image(&st.g, cur & decided);
            }
            if cur & !self.target[p] != 0 || (determined && cur != self.target[p]) {
                return false;
            }
            if self.commutation {
                let fg = Self::image(&self.target, st.g[p]);
                let gf = Self::image(&st.g, self.target[p] & decided);
                if gf & !fg != 0 || (self.target[p] & !decided == 0 && gf != fg) {
                    return false;
                }
            }
        }
        true
    }

    fn dfs(
        &self,
        st: &mut MultiState,
        x: usize,
        nodes: &mut u64,
        budget: u64,
        cancelled: &dyn Fn() -> bool,
    ) -> std::result::Result<bool, OverBudget> {
        if x == self.size {
            return Ok(true);
        }
        if cancelled() {
            return Ok(false);
        }
        for s in self.candidates_for(x, st) {
            *nodes += 1;
            if *nodes > budget {
                return Err(OverBudget);
            }
            if self.assign(st, x, s) && self.dfs(st, x + 1, nodes, budget, cancelled)? {
                return Ok(true);
            }
            self.unassign(st, x);
        }
        Ok(false)
    }
}

/// Searches for a map `g` with `g^n = f`.
///
/// The reported constraint is the class of total maps: images of size
/// exactly one.
pub fn find_single_root(f: &SingleMap, n: u64, budget: u64, config: &SearchConfig) -> Result<SearchResult<SingleMap>> {
    let start = Instant::now();
    if n < 2 {
        return Err(Error::OrderTooSmall { min: 2, got: n });
    }
    if budget == 0 {
        return Err(Error::ZeroCount("budget"));
    }
    let cap = config.single_backtracking_cap.max(config.single_exhaustive_cap);
    if f.size() > cap {
        return Err(Error::GroundTooLarge { size: f.size(), cap });
    }
    let search = SingleSearch { target: f.as_slice().to_vec(), order: n, commutation: config.commutation_filter };
    let size = f.size();
    let outcome = fan_out(size, budget, config.execution, |i, budget, cancelled| {
        let mut g = vec![usize::MAX; size];
        let mut nodes = 1u64;
        g[0] = i;
        if !search.consistent(&g, 0) {
            return Branch::None(nodes);
        }
        match search.dfs(&mut g, 1, &mut nodes, budget, cancelled) {
            Ok(true) => Branch::Found(g, nodes),
            Ok(false) if cancelled() => Branch::Skipped,
            Ok(false) => Branch::None(nodes),
            Err(OverBudget) => Branch::Exceeded,
        }
    });
    let outcome = match outcome {
        Outcome::Witness(g) => Outcome::Witness(SingleMap::new(f.ground().clone(), g).expect("indices in range")),
        Outcome::ExhaustedNone { nodes_explored } => Outcome::ExhaustedNone { nodes_explored },
        Outcome::BudgetExceeded { budget } => Outcome::BudgetExceeded { budget },
    };
    let constraint = RootConstraint { bound: DegreeBound::MaxOutDegree(1), require_total_domain: true };
    Ok(SearchResult { order: n, constraint, outcome, elapsed: start.elapsed() })
}

struct SingleSearch {
    target: Vec<usize>,
    order: u64,
    commutation: bool,
}

const UNSET: usize = usize::MAX;

impl SingleSearch {
    /// The value `g(x)` is forced to by decided points, `Some(None)` on a
    /// conflict, `None` if free.
    fn forced(&self, g: &[usize], x: usize) -> Option<Option<usize>> {
        let mut forced: Option<usize> = None;
        let mut force = |v: usize| -> bool {
            match forced {
                Some(w) if w != v => false,
                _ => {
                    forced = Some(v);
                    true
                }
            }
        };
        for p in 0..x {
            // g(f(p)) = f(g(p))
            if self.commutation && self.target[p] == x && !force(self.target[g[p]]) {
                return Some(None);
            }
            // the orbit of p reaches x after n - 1 steps: g(x) = f(p)
            let mut cur = p;
            let mut steps = 0;
            while steps < self.order - 1 && g[cur] != UNSET {
                cur = g[cur];
                steps += 1;
            }
            if steps == self.order - 1 && cur == x && !force(self.target[p]) {
                return Some(None);
            }
        }
        forced.map(Some)
    }

    fn consistent(&self, g: &[usize], x: usize) -> bool {
        for p in 0..=x {
            let mut cur = p;
            let mut steps = 0;
            while steps < self.order && g[cur] != UNSET {
                cur = g[cur];
                steps += 1;
            }
            if steps == self.order && cur != self.target[p] {
                return false;
            }
            if self.commutation {
                let fp = self.target[p];
                if g[fp] != UNSET && g[fp] != self.target[g[p]] {
                    return false;
                }
            }
        }
        true
    }

    fn dfs(
        &self,
        g: &mut [usize],
        x: usize,
        nodes: &mut u64,
        budget: u64,
        cancelled: &dyn Fn() -> bool,
    ) -> std::result::Result<bool, OverBudget> {
        if x == g.len() {
            return Ok(true);
        }
        if cancelled() {
            return Ok(false);
        }
        let range = match self.forced(g, x) {
            Some(None) => return Ok(false),
            Some(Some(v)) => v..v + 1,
            None => 0..g.len(),
        };
        for v in range {
            *nodes += 1;
            if *nodes > budget {
                return Err(OverBudget);
            }
            g[x] = v;
            if self.consistent(g, x) && self.dfs(g, x + 1, nodes, budget, cancelled)? {
                return Ok(true);
            }
        }
        g[x] = UNSET;
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{self, cyclic_power, CyclicVariant};
    use crate::oracle;
    use crate::pullback::pullback_of;
    use crate::GroundSet;
    use std::sync::Arc;

    const BIG: u64 = u64::MAX;

    fn cfg(exec: Execution) -> SearchConfig {
        SearchConfig { execution: exec, ..SearchConfig::default() }
    }

    #[test]
    fn identity_is_its_own_least_square_root() {
        let id = Multifunction::identity(Arc::new(GroundSet::numbered(4).unwrap()));
        let r = find_multi_root(&id, 2, RootConstraint::UNCONSTRAINED, BIG, &SearchConfig::default()).unwrap();
        assert_eq!(r.witness(), Some(&id));
    }

    #[test]
    fn f1_has_no_low_degree_square_root() {
        let f1 = instances::f1(3).unwrap();
        let config = SearchConfig { low_degree_cap: 12, ..SearchConfig::default() };
        let r = find_multi_root(&f1, 2, RootConstraint::max_out(2), BIG, &config).unwrap();
        assert!(r.exhausted(), "{:?}", r.outcome);
    }

    #[test]
    fn translation_pullback_has_a_square_root() {
        let f = pullback_of(&cyclic_power(8, 2, CyclicVariant::Add).unwrap());
        let config = SearchConfig { unconstrained_cap: 8, ..SearchConfig::default() };
        let r = find_multi_root(&f, 2, RootConstraint::UNCONSTRAINED, BIG, &config).unwrap();
        let g = r.witness().expect("root exists");
        assert_eq!(g.iterate(2), f);
    }

    #[test]
    fn fig67_has_a_fourth_root() {
        let (f, _) = instances::fig67();
        let r = find_single_root(&f, 4, 10_000_000, &SearchConfig::default()).unwrap();
        let g = r.witness().expect("root exists");
        assert_eq!(g.iterate(4), f);
    }

    #[test]
    fn four_cycle_has_no_square_root() {
        let f = cyclic_power(4, 1, CyclicVariant::Add).unwrap();
        let r = find_single_root(&f, 2, BIG, &SearchConfig::default()).unwrap();
        assert!(r.exhausted());
        assert_eq!(oracle::first_single_root(&f, 2), None);
    }

    #[test]
    fn identity_map_cube_root() {
        let id = SingleMap::identity(Arc::new(GroundSet::numbered(5).unwrap()));
        let r = find_single_root(&id, 3, BIG, &SearchConfig::default()).unwrap();
        assert_eq!(r.witness(), Some(&id));
    }

    #[test]
    fn argument_errors() {
        let f = Multifunction::from_masks(&[1; 6]).unwrap();
        let c = SearchConfig::default();
        assert!(matches!(
            find_multi_root(&f, 2, RootConstraint::UNCONSTRAINED, 10, &c),
            Err(Error::GroundTooLarge { size: 6, cap: 5 })
        ));
        assert!(find_multi_root(&f, 2, RootConstraint::max_out(2), 10, &c).is_ok());
        assert_eq!(find_multi_root(&f, 2, RootConstraint::max_out(2), 0, &c).unwrap_err(), Error::ZeroCount("budget"));
        assert!(matches!(find_multi_root(&f, 1, RootConstraint::max_out(2), 10, &c), Err(Error::OrderTooSmall { .. })));
    }

    #[test]
    fn budget_exceeded_is_distinct() {
        let f = cyclic_power(7, 1, CyclicVariant::Add).unwrap();
        let r = find_single_root(&f, 3, 3, &SearchConfig::default()).unwrap();
        assert_eq!(r.outcome, Outcome::BudgetExceeded { budget: 3 });
    }

    #[test]
    fn parallel_matches_sequential_including_node_counts() {
        for seed in 0..60 {
            let f = instances::random_multifunction(4, 4, 0.35, seed).unwrap();
            for n in [2, 3] {
                let a = find_multi_root(&f, n, RootConstraint::UNCONSTRAINED, BIG, &cfg(Execution::Sequential)).unwrap();
                let b = find_multi_root(&f, n, RootConstraint::UNCONSTRAINED, BIG, &cfg(Execution::Parallel)).unwrap();
                assert_eq!(a.outcome, b.outcome);
            }
            let m = instances::random_map(6, seed).unwrap();
            let a = find_single_root(&m, 2, BIG, &cfg(Execution::Sequential)).unwrap();
            let b = find_single_root(&m, 2, BIG, &cfg(Execution::Parallel)).unwrap();
            assert_eq!(a.outcome, b.outcome);
        }
    }

    #[test]
    fn budget_verdict_is_execution_independent() {
        let f = instances::random_multifunction(5, 5, 0.3, 11).unwrap();
        let full = find_multi_root(&f, 2, RootConstraint::UNCONSTRAINED, BIG, &cfg(Execution::Sequential)).unwrap();
        let nodes = match full.outcome {
            Outcome::ExhaustedNone { nodes_explored } => nodes_explored,
            _ => return,
        };
        for budget in [1, nodes / 3, nodes - 1, nodes] {
            let a = find_multi_root(&f, 2, RootConstraint::UNCONSTRAINED, budget.max(1), &cfg(Execution::Sequential)).unwrap();
            let b = find_multi_root(&f, 2, RootConstraint::UNCONSTRAINED, budget.max(1), &cfg(Execution::Parallel)).unwrap();
            assert_eq!(a.outcome, b.outcome, "budget {budget}");
        }
    }

    #[test]
    fn witnesses_satisfy_constraints() {
        for seed in 0..40 {
            let g = instances::random_multifunction(4, 2, 0.4, seed).unwrap();
            let f = g.iterate(2);
            for c in [RootConstraint::max_out(2), RootConstraint::max_in(2), RootConstraint::UNCONSTRAINED.total()] {
                let r = find_multi_root(&f, 2, c, BIG, &SearchConfig::default()).unwrap();
                if let Some(w) = r.witness() {
                    assert_eq!(w.iterate(2), f);
                    assert!(c.admits(w));
                } else {
                    assert!(r.exhausted());
                }
            }
            // g itself is a root with out-degree ≤ 2
            let r = find_multi_root(&f, 2, RootConstraint::max_out(2), BIG, &SearchConfig::default()).unwrap();
            assert!(r.found());
        }
    }
}
