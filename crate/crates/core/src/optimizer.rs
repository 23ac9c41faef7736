//! 2-page crossing minimization for K_n: pick a page for every edge so that
//! as few interleaving pairs as possible share a page (max-cut complement).

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::constructions::{crossings_two_page, realize, Layout, Page, TwoPageLayout, DEFAULT_RESOLUTION};
use crate::drawing::{EdgeKey, VertexId};
use crate::error::{Error, Result};
use crate::goodness::crossing_count;
use crate::kedges::zeta;
use crate::shelling::{theorem1_pipeline, Conclusion, PipelineOptions, PipelineVerdict};

pub const EXACT_LIMIT_VAR: &str = "CROSSLAB_EXACT_LIMIT";
pub const DEFAULT_EXACT_LIMIT: usize = 10;
pub const DEFAULT_EXACT_BUDGET: u64 = 2_000_000_000;
pub const DEFAULT_RESTARTS: usize = 8;
pub const DEFAULT_ITERATIONS: usize = 2000;
pub const COOLING: f64 = 0.995;

/// Largest n accepted by the exact solver; `CROSSLAB_EXACT_LIMIT` overrides.
pub fn exact_limit() -> usize {
    std::env::var(EXACT_LIMIT_VAR)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_EXACT_LIMIT)
}

#[derive(Clone, Debug)]
pub struct ConflictGraph {
    pub n: usize,
    pub spine: Vec<VertexId>,
    pub nodes: Vec<EdgeKey>,
    pub adj: Vec<Vec<usize>>,
    pub conflicts: usize,
}

impl ConflictGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Monochromatic conflicts of an assignment (true = bottom).
    pub fn count(&self, bottom: &[bool]) -> u64 {
        let mut total = 0;
        for (u, list) in self.adj.iter().enumerate() {
            total += list.iter().filter(|&&v| v > u && bottom[v] == bottom[u]).count() as u64;
        }
        total
    }

    /// Change in the count when node u flips.
    fn flip_delta(&self, bottom: &[bool], u: usize) -> i64 {
        let same = self.adj[u].iter().filter(|&&v| bottom[v] == bottom[u]).count() as i64;
        self.adj[u].len() as i64 - 2 * same
    }

    pub fn layout(&self, bottom: &[bool]) -> TwoPageLayout {
        TwoPageLayout {
            spine: self.spine.clone(),
            pages: self
                .nodes
                .iter()
                .zip(bottom)
                .map(|(e, &b)| (*e, if b { Page::Bottom } else { Page::Top }))
                .collect(),
        }
    }
}

pub fn build_conflict_graph_on(spine: &[VertexId]) -> Result<ConflictGraph> {
    let n = spine.len();
    if n < 3 {
        return Err(Error::Domain(format!("conflict graph needs n >= 3, got {n}")));
    }
    let pos: BTreeMap<VertexId, usize> = spine.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    if pos.len() != n {
        return Err(Error::Structural("spine repeats a vertex".into()));
    }
    let mut nodes = Vec::new();
    for (i, a) in spine.iter().enumerate() {
        for b in &spine[i + 1..] {
            nodes.push(EdgeKey::new(*a, *b));
        }
    }
    nodes.sort();
    let span = |e: &EdgeKey| {
        let (a, b) = (pos[&e.lo], pos[&e.hi]);
        (a.min(b), a.max(b))
    };
    let mut adj = vec![Vec::new(); nodes.len()];
    let mut conflicts = 0;
    for x in 0..nodes.len() {
        let (a, b) = span(&nodes[x]);
        for y in x + 1..nodes.len() {
            let (c, d) = span(&nodes[y]);
            if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                adj[x].push(y);
                adj[y].push(x);
                conflicts += 1;
            }
        }
    }
    Ok(ConflictGraph {
        n,
        spine: spine.to_vec(),
        nodes,
        adj,
        conflicts,
    })
}

/// Conflict graph on the identity spine 1..n.
pub fn build_conflict_graph(n: usize) -> Result<ConflictGraph> {
    let spine: Vec<VertexId> = (1..=n as u32).map(VertexId).collect();
    build_conflict_graph_on(&spine)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact,
    LocalSearch,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::LocalSearch => "local-search",
        }
    }

    pub fn parse(s: &str) -> Result<Method> {
        match s {
            "exact" => Ok(Method::Exact),
            "local-search" => Ok(Method::LocalSearch),
            _ => Err(Error::Parse(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Heuristic,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::Heuristic => "heuristic",
        }
    }

    pub fn parse(s: &str) -> Result<Status> {
        match s {
            "optimal" => Ok(Status::Optimal),
            "heuristic" => Ok(Status::Heuristic),
            _ => Err(Error::Parse(format!("unknown status {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptResult {
    pub n: usize,
    pub layout: TwoPageLayout,
    pub count: u64,
    pub method: Method,
    pub status: Status,
    pub seeds: Vec<u64>,
    /// Branch-and-bound nodes or annealing proposals.
    pub explored: u64,
}

impl OptResult {
    fn new(g: &ConflictGraph, bottom: &[bool], method: Method, status: Status, seeds: Vec<u64>, explored: u64) -> Self {
        let layout = g.layout(bottom);
        let count = g.count(bottom);
        debug_assert_eq!(crossings_two_page(&layout), count);
        OptResult {
            n: g.n,
            layout,
            count,
            method,
            status,
            seeds,
            explored,
        }
    }
}

struct Search<'a> {
    g: &'a ConflictGraph,
    order: Vec<usize>,
    page: Vec<Option<bool>>,
    cnt: Vec<[u32; 2]>,
    cur: u64,
    rest: u64,
    best: u64,
    best_assign: Vec<bool>,
    explored: u64,
    budget: u64,
}

impl Search<'_> {
    fn assign(&mut self, v: usize, p: bool) {
        let c = self.cnt[v];
        self.rest -= c[0].min(c[1]) as u64;
        self.cur += c[p as usize] as u64;
        self.page[v] = Some(p);
        for &u in &self.g.adj[v] {
            if self.page[u].is_none() {
                let old = self.cnt[u][0].min(self.cnt[u][1]);
                self.cnt[u][p as usize] += 1;
                self.rest += (self.cnt[u][0].min(self.cnt[u][1]) - old) as u64;
            }
        }
    }

    fn unassign(&mut self, v: usize, p: bool) {
        for &u in &self.g.adj[v] {
            if self.page[u].is_none() {
                let old = self.cnt[u][0].min(self.cnt[u][1]);
                self.cnt[u][p as usize] -= 1;
                self.rest -= (old - self.cnt[u][0].min(self.cnt[u][1])) as u64;
            }
        }
        self.page[v] = None;
        let c = self.cnt[v];
        self.cur -= c[p as usize] as u64;
        self.rest += c[0].min(c[1]) as u64;
    }

    /// false when the budget ran out.
    fn go(&mut self, depth: usize) -> bool {
        self.explored += 1;
        if self.explored > self.budget {
            return false;
        }
        if self.cur + self.rest >= self.best {
            return true;
        }
        if depth == self.order.len() {
            self.best = self.cur;
            self.best_assign = self.page.iter().map(|p| p.unwrap_or(false)).collect();
            return true;
        }
        let v = self.order[depth];
        // Cheaper page first; the first node is pinned to top (page swap symmetry).
        let c = self.cnt[v];
        let first = c[1] < c[0];
        let choices: &[bool] = if depth == 0 { &[false] } else if first { &[true, false] } else { &[false, true] };
        for &p in choices {
            self.assign(v, p);
            let ok = self.go(depth + 1);
            self.unassign(v, p);
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Branch and bound; the bound adds, for every open node, the cheaper of its
/// two pages against the nodes fixed so far.
pub fn exact_min_crossings(n: usize, budget: u64) -> Result<OptResult> {
    let limit = exact_limit();
    if n > limit {
        return Err(Error::Domain(format!(
            "n = {n} exceeds the exact limit {limit} (set {EXACT_LIMIT_VAR} to raise it)"
        )));
    }
    let g = build_conflict_graph(n)?;
    let mut order: Vec<usize> = (0..g.node_count()).filter(|&u| !g.adj[u].is_empty()).collect();
    order.sort_by_key(|&u| (std::cmp::Reverse(g.adj[u].len()), u));
    // Incumbent from a short heuristic run.
    let start = local_search(n, 0, 2, 200)?;
    let start_assign: Vec<bool> = g.nodes.iter().map(|e| start.layout.pages[e] == Page::Bottom).collect();
    let mut s = Search {
        g: &g,
        order,
        page: vec![None; g.node_count()],
        cnt: vec![[0, 0]; g.node_count()],
        cur: 0,
        rest: 0,
        best: start.count + 1,
        best_assign: start_assign.clone(),
        explored: 0,
        budget,
    };
    let complete = s.go(0);
    let mut assign = if s.best <= start.count { s.best_assign.clone() } else { start_assign };
    // Free nodes (no conflicts) go on top.
    for (u, a) in assign.iter_mut().enumerate() {
        if g.adj[u].is_empty() {
            *a = false;
        }
    }
    let status = if complete { Status::Optimal } else { Status::Heuristic };
    let r = OptResult::new(&g, &assign, Method::Exact, status, Vec::new(), s.explored);
    assert!(r.count >= zeta(n as u64), "2-page drawing of K_{n} below Z(n)");
    if complete {
        assert_eq!(r.count, zeta(n as u64), "exact optimum differs from Z({n})");
    }
    Ok(r)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Flips improving nodes until none is left.
fn descend(g: &ConflictGraph, bottom: &mut [bool]) {
    loop {
        let mut improved = false;
        for u in 0..bottom.len() {
            if g.flip_delta(bottom, u) < 0 {
                bottom[u] = !bottom[u];
                improved = true;
            }
        }
        if !improved {
            return;
        }
    }
}

fn greedy(g: &ConflictGraph) -> Vec<bool> {
    let mut order: Vec<usize> = (0..g.node_count()).collect();
    order.sort_by_key(|&u| (std::cmp::Reverse(g.adj[u].len()), u));
    let mut page: Vec<Option<bool>> = vec![None; g.node_count()];
    for u in order {
        let on_bottom = g.adj[u].iter().filter(|&&v| page[v] == Some(true)).count();
        let on_top = g.adj[u].iter().filter(|&&v| page[v] == Some(false)).count();
        page[u] = Some(on_bottom < on_top);
    }
    let mut bottom: Vec<bool> = page.into_iter().map(|p| p.unwrap()).collect();
    descend(g, &mut bottom);
    bottom
}

fn anneal(g: &ConflictGraph, seed: u64, sweeps: usize) -> (Vec<bool>, u64, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = g.node_count();
    let mut bottom: Vec<bool> = (0..m).map(|_| rng.random_bool(0.5)).collect();
    let mut cur = g.count(&bottom) as i64;
    let mut best = bottom.clone();
    let mut best_count = cur;
    let mut t = g.conflicts as f64 / 10.0;
    let mut proposals = 0;
    for _ in 0..sweeps {
        for _ in 0..m {
            proposals += 1;
            let u = rng.random_range(0..m);
            let delta = g.flip_delta(&bottom, u);
            if delta <= 0 || (t > 0.0 && rng.random::<f64>() < (-(delta as f64) / t).exp()) {
                bottom[u] = !bottom[u];
                cur += delta;
                if cur < best_count {
                    best_count = cur;
                    best.copy_from_slice(&bottom);
                }
            }
        }
        t *= COOLING;
    }
    descend(g, &mut best);
    let count = g.count(&best);
    (best, count, proposals)
}

/// Multi-restart annealing with single-node flips, finished by greedy descent.
/// Restart r uses seed splitmix64(seed + r); the minimum count wins, ties go
/// to the lexicographically smallest assignment. `restarts = 0` returns the
/// greedy baseline.
pub fn local_search(n: usize, seed: u64, restarts: usize, iterations: usize) -> Result<OptResult> {
    let g = build_conflict_graph(n)?;
    let (best, seeds, explored) = if restarts == 0 {
        (greedy(&g), Vec::new(), 0)
    } else {
        let seeds: Vec<u64> = (0..restarts as u64).map(|r| splitmix64(seed.wrapping_add(r))).collect();
        let runs: Vec<(Vec<bool>, u64, u64)> = seeds.par_iter().map(|&s| anneal(&g, s, iterations)).collect();
        let explored = runs.iter().map(|r| r.2).sum();
        let best = runs
            .into_iter()
            .min_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)))
            .map(|r| r.0)
            .unwrap();
        (best, seeds, explored)
    };
    assert!(
        (0..best.len()).all(|u| g.flip_delta(&best, u) >= 0),
        "reported assignment is not a local optimum"
    );
    let r = OptResult::new(&g, &best, Method::LocalSearch, Status::Heuristic, seeds, explored);
    assert!(r.count >= zeta(n as u64), "2-page drawing of K_{n} below Z(n)");
    Ok(r)
}

#[derive(Clone, Debug)]
pub struct CertificationReport {
    pub n: usize,
    pub count: u64,
    pub zeta: u64,
    pub geometric: u64,
    pub pipeline: PipelineVerdict,
    pub pass: bool,
}

/// Re-checks a result: floor Z(n), layout bookkeeping, geometric count of the
/// realization, and the shelling pipeline on it.
pub fn certify_result(r: &OptResult) -> Result<CertificationReport> {
    let z = zeta(r.n as u64);
    if r.count < z {
        return Err(Error::Certification(format!(
            "reported {} crossings for K_{}, below Z(n) = {z}",
            r.count, r.n
        )));
    }
    let combinatorial = crossings_two_page(&r.layout);
    if combinatorial != r.count {
        return Err(Error::Certification(format!(
            "layout has {combinatorial} crossings but the result reports {}",
            r.count
        )));
    }
    let d = realize(&Layout::TwoPage(r.layout.clone()), DEFAULT_RESOLUTION)?;
    let geometric = crossing_count(&d)?;
    if geometric != r.count {
        return Err(Error::Certification(format!(
            "realization has {geometric} crossings, layout {}",
            r.count
        )));
    }
    let pipeline = theorem1_pipeline(&d, &PipelineOptions::default())?;
    let pass = pipeline.conclusion == Conclusion::Conclusive;
    Ok(CertificationReport {
        n: r.n,
        count: r.count,
        zeta: z,
        geometric,
        pipeline,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kedges::binom;

    /// Exhaustive minimum by Gray code over all assignments of conflicting nodes.
    fn gray_min(g: &ConflictGraph) -> u64 {
        let live: Vec<usize> = (0..g.node_count()).filter(|&u| !g.adj[u].is_empty()).collect();
        let mut bottom = vec![false; g.node_count()];
        let mut cur = g.count(&bottom) as i64;
        let mut best = cur;
        for step in 1u64..(1 << (live.len() - 1)) {
            let u = live[step.trailing_zeros() as usize];
            cur += g.flip_delta(&bottom, u);
            bottom[u] = !bottom[u];
            best = best.min(cur);
        }
        best as u64
    }

    #[test]
    fn conflict_graph_counts() {
        for (n, nodes, conflicts) in [(4, 6, 1), (5, 10, 5), (8, 28, 70)] {
            let g = build_conflict_graph(n).unwrap();
            assert_eq!((g.node_count(), g.conflicts), (nodes, conflicts));
        }
        for n in 3..12 {
            assert_eq!(build_conflict_graph(n).unwrap().conflicts as u64, binom(n as u64, 4));
        }
        assert!(build_conflict_graph(2).is_err());
    }

    #[test]
    fn exact_matches_exhaustive() {
        for n in 4..=7 {
            let g = build_conflict_graph(n).unwrap();
            let r = exact_min_crossings(n, DEFAULT_EXACT_BUDGET).unwrap();
            assert_eq!(r.status, Status::Optimal);
            assert_eq!(r.count, gray_min(&g));
            assert_eq!(crossings_two_page(&r.layout), r.count);
        }
        assert_eq!(exact_min_crossings(8, DEFAULT_EXACT_BUDGET).unwrap().count, 18);
    }

    #[test]
    fn tiny_budget_is_heuristic() {
        let r = exact_min_crossings(8, 10).unwrap();
        assert_eq!(r.status, Status::Heuristic);
        assert!(r.count >= 18);
    }

    #[test]
    fn local_search_basics() {
        assert_eq!(local_search(6, 1, 4, 300).unwrap().count, 3);
        let a = local_search(9, 5, 3, 300).unwrap();
        let b = local_search(9, 5, 3, 300).unwrap();
        assert_eq!(a, b);
        let g = local_search(9, 5, 0, 300).unwrap();
        assert!(g.seeds.is_empty());
        assert!(g.count >= 36);
    }

    #[test]
    fn certification() {
        let r = exact_min_crossings(6, DEFAULT_EXACT_BUDGET).unwrap();
        let rep = certify_result(&r).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.geometric, 3);

        let mut fake = r.clone();
        fake.count = 2;
        assert!(matches!(certify_result(&fake), Err(Error::Certification(_))));
    }
}
