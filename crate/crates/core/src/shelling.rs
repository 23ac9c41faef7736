//! Shellability certificates and the lower-bound pipeline.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::arrangement::{planarize, FaceRef};
use crate::constructions::is_x_bounded;
use crate::drawing::{Drawing, EdgeKey, VertexId};
use crate::error::{Error, Result};
use crate::geom::{intersect_segments, SegHit};
use crate::goodness::{compute_crossings_geometric, require_good};
use crate::kedges::{check_shellable_bound, zeta, BoundVerdict};
use crate::scalar::{ratio, Point};

pub const DEFAULT_CYCLE_BUDGET: u64 = 10_000_000;

fn check_sequence(d: &Drawing, seq: &[VertexId]) -> Result<()> {
    let distinct: BTreeSet<_> = seq.iter().collect();
    if distinct.len() != seq.len() {
        return Err(Error::Structural("vertex sequence repeats a vertex".into()));
    }
    for v in seq {
        if !d.has_vertex(*v) {
            return Err(Error::UnknownVertex(*v));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingCheck {
    pub edge: EdgeKey,
    /// 1-based cycle positions of the crossing edge's endpoints, if on the cycle.
    pub i: Option<usize>,
    pub j: Option<usize>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleEdgeEvidence {
    /// The edge v_k v_{k+1}.
    pub k: usize,
    pub edge: EdgeKey,
    pub crossings: Vec<CrossingCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleWitness {
    pub cycle: Vec<VertexId>,
    /// Edges crossing v_s v_1 (must be none).
    pub closing_crossings: Vec<EdgeKey>,
    pub edges: Vec<CycleEdgeEvidence>,
    pub pass: bool,
}

impl CycleWitness {
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let s = self.cycle.len();
        for e in &self.closing_crossings {
            out.push(format!(
                "closing edge {}-{} is crossed by {e}",
                self.cycle[s - 1], self.cycle[0]
            ));
        }
        for ev in &self.edges {
            for c in ev.crossings.iter().filter(|c| !c.ok) {
                out.push(format!(
                    "edge v{}v{} = {} is crossed by {} (positions {:?}, {:?})",
                    ev.k,
                    ev.k + 1,
                    ev.edge,
                    c.edge,
                    c.i,
                    c.j
                ));
            }
        }
        out
    }
}

/// Sufficient condition for s-shellability: v_s v_1 uncrossed, and each edge
/// crossing v_k v_{k+1} is some v_i v_j with i < k and j > k + 1.
pub fn check_lemma_cycle(d: &Drawing, cycle: &[VertexId]) -> Result<CycleWitness> {
    check_sequence(d, cycle)?;
    let s = cycle.len();
    if s < 3 {
        return Err(Error::Precondition(format!("cycle needs at least 3 vertices, got {s}")));
    }
    let (records, _) = compute_crossings_geometric(d)?;
    let mut partners: BTreeMap<EdgeKey, Vec<EdgeKey>> = BTreeMap::new();
    for r in &records {
        partners.entry(r.a).or_default().push(r.b);
        partners.entry(r.b).or_default().push(r.a);
    }
    let index: BTreeMap<VertexId, usize> = cycle.iter().enumerate().map(|(i, v)| (*v, i + 1)).collect();
    let closing = EdgeKey::new(cycle[s - 1], cycle[0]);
    let closing_crossings = partners.get(&closing).cloned().unwrap_or_default();
    let mut edges = Vec::new();
    for k in 1..s {
        let edge = EdgeKey::new(cycle[k - 1], cycle[k]);
        let crossings = partners
            .get(&edge)
            .map(|list| {
                list.iter()
                    .map(|e| {
                        let (a, b) = (index.get(&e.lo).copied(), index.get(&e.hi).copied());
                        let (i, j) = match (a, b) {
                            (Some(a), Some(b)) => (Some(a.min(b)), Some(a.max(b))),
                            _ => (a, b),
                        };
                        let ok = matches!((i, j), (Some(i), Some(j)) if i < k && j > k + 1);
                        CrossingCheck { edge: *e, i, j, ok }
                    })
                    .collect()
            })
            .unwrap_or_default();
        edges.push(CycleEdgeEvidence { k, edge, crossings });
    }
    let pass = closing_crossings.is_empty() && edges.iter().all(|e| e.crossings.iter().all(|c| c.ok));
    Ok(CycleWitness {
        cycle: cycle.to_vec(),
        closing_crossings,
        edges,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleSearch {
    Found(Vec<VertexId>),
    /// The whole uncrossed subgraph was searched.
    NotFound,
    /// The expansion budget ran out first.
    Exhausted,
}

/// Depth-first search for a cycle of at least `target` vertices using only
/// uncrossed edges. Each cycle is found from its smallest vertex.
pub fn search_cycle(d: &Drawing, target: usize, budget: u64) -> Result<CycleSearch> {
    if target < 3 {
        return Err(Error::Precondition(format!("target must be at least 3, got {target}")));
    }
    let (records, _) = compute_crossings_geometric(d)?;
    let crossed: BTreeSet<EdgeKey> = records.iter().flat_map(|r| [r.a, r.b]).collect();
    let ids = d.vertex_ids();
    let n = ids.len();
    if target > n {
        return Ok(CycleSearch::NotFound);
    }
    let index: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in d.edges().keys().filter(|e| !crossed.contains(e)) {
        let (a, b) = (index[&e.lo], index[&e.hi]);
        adj[a].push(b);
        adj[b].push(a);
    }
    // Vertices of degree < 2 lie on no cycle.
    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        for v in 0..n {
            if alive[v] && adj[v].iter().filter(|&&u| alive[u]).count() < 2 {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for list in adj.iter_mut() {
        list.sort_unstable();
    }

    struct Dfs<'a> {
        adj: &'a [Vec<usize>],
        alive: &'a [bool],
        target: usize,
        budget: u64,
        used: u64,
        on_path: Vec<bool>,
        path: Vec<usize>,
    }
    impl Dfs<'_> {
        /// Some(true) found, Some(false) exhausted subtree, None budget gone.
        fn go(&mut self, start: usize) -> Option<bool> {
            self.used += 1;
            if self.used > self.budget {
                return None;
            }
            let v = *self.path.last().unwrap();
            if self.path.len() >= self.target && self.adj[v].contains(&start) {
                return Some(true);
            }
            for &u in &self.adj[v] {
                if u <= start || !self.alive[u] || self.on_path[u] {
                    continue;
                }
                self.on_path[u] = true;
                self.path.push(u);
                match self.go(start) {
                    Some(false) => {}
                    other => return other,
                }
                self.path.pop();
                self.on_path[u] = false;
            }
            Some(false)
        }
    }

    let mut dfs = Dfs {
        adj: &adj,
        alive: &alive,
        target,
        budget,
        used: 0,
        on_path: vec![false; n],
        path: Vec::new(),
    };
    for start in 0..n {
        if !alive[start] {
            continue;
        }
        dfs.path = vec![start];
        dfs.on_path = vec![false; n];
        dfs.on_path[start] = true;
        match dfs.go(start) {
            Some(true) => return Ok(CycleSearch::Found(dfs.path.iter().map(|&i| ids[i]).collect())),
            Some(false) => {}
            None => return Ok(CycleSearch::Exhausted),
        }
    }
    Ok(CycleSearch::NotFound)
}

pub fn find_crossing_free_cycle(d: &Drawing, target: usize) -> Result<Option<Vec<VertexId>>> {
    match search_cycle(d, target, DEFAULT_CYCLE_BUDGET)? {
        CycleSearch::Found(c) => Ok(Some(c)),
        _ => Ok(None),
    }
}

/// A point just left of the first segment of the directed edge `a -> b`,
/// inside the face bordering that segment on its left.
pub fn seat_witness(d: &Drawing, a: VertexId, b: VertexId) -> Result<Point> {
    require_good(d)?;
    let line = d
        .directed(a, b)
        .ok_or_else(|| Error::Precondition(format!("no edge {a}-{b}")))?;
    let (p, q) = (&line.points()[0], &line.points()[1]);
    let dir = q.sub(p);
    let normal = Point::new(-&dir.y, dir.x.clone());
    let segments: Vec<(&Point, &Point)> = d.edges().values().flat_map(|l| l.segments()).collect();
    for along in [ratio(1, 2), ratio(1, 3), ratio(2, 3), ratio(1, 5), ratio(4, 5)] {
        let base = p.lerp(q, &along);
        let mut eps = ratio(1, 4);
        for _ in 0..200 {
            let w = base.add(&normal.scale(&eps));
            let clear = segments.iter().all(|(s, t)| {
                let host = (*s == p && *t == q) || (*s == q && *t == p);
                match intersect_segments(&base, &w, s, t) {
                    SegHit::None => true,
                    SegHit::Point { t: at, .. } => host && at == crate::scalar::zero(),
                    SegHit::Overlap => false,
                }
            });
            let through_other = segments.iter().any(|(s, t)| {
                !((*s == p && *t == q) || (*s == q && *t == p)) && crate::geom::on_segment(s, t, &base)
            });
            if through_other {
                break;
            }
            if clear {
                return Ok(w);
            }
            eps = eps * ratio(1, 2);
        }
    }
    Err(Error::Precondition(format!("could not seat a witness beside edge {a}-{b}")))
}

/// Witness for a cycle certificate: the face left of v_s -> v_1.
pub fn lemma_witness(d: &Drawing, cycle: &[VertexId]) -> Result<FaceRef> {
    let s = cycle.len();
    Ok(FaceRef::Point(seat_witness(d, cycle[s - 1], cycle[0])?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairEvidence {
    pub i: usize,
    pub j: usize,
    pub vi_on_boundary: bool,
    pub vj_on_boundary: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShellingCertificate {
    pub sequence: Vec<VertexId>,
    pub witness: FaceRef,
    /// Concrete reference point of the witness (a far point for the unbounded face).
    pub witness_point: Point,
    pub pairs: Vec<PairEvidence>,
    /// For |S| = 1: whether v_1 is on the witness face.
    pub single_on_boundary: Option<bool>,
    pub valid: bool,
}

pub fn witness_point(d: &Drawing, f: &FaceRef) -> Point {
    match f {
        FaceRef::Unbounded => d.far_point(),
        FaceRef::Point(p) => p.clone(),
    }
}

/// Checks the definition directly: for all i < j, v_i and v_j lie on the
/// face of D_ij containing the witness, where D_ij drops v_1..v_{i-1} and v_{j+1}..v_s.
pub fn verify_shelling_direct(d: &Drawing, seq: &[VertexId], witness: &FaceRef) -> Result<ShellingCertificate> {
    check_sequence(d, seq)?;
    if seq.is_empty() {
        return Err(Error::Precondition("empty shelling sequence".into()));
    }
    require_good(d)?;
    let arr = planarize(d)?;
    let face = arr.locate(witness)?;
    let s = seq.len();
    let point = witness_point(d, witness);
    let reference = match witness {
        FaceRef::Unbounded => FaceRef::Unbounded,
        FaceRef::Point(p) => FaceRef::Point(p.clone()),
    };
    if s == 1 {
        let on = arr.face_vertices(face).contains(&seq[0]);
        return Ok(ShellingCertificate {
            sequence: seq.to_vec(),
            witness: reference,
            witness_point: point,
            pairs: Vec::new(),
            single_on_boundary: Some(on),
            valid: on,
        });
    }
    let tasks: Vec<(usize, usize)> = (1..=s).flat_map(|i| (i + 1..=s).map(move |j| (i, j))).collect();
    let pairs: Result<Vec<PairEvidence>> = tasks
        .par_iter()
        .map(|&(i, j)| {
            let gone: BTreeSet<VertexId> = seq[..i - 1].iter().chain(&seq[j..]).copied().collect();
            let sub = d.delete_vertices(&gone)?;
            let a = planarize(&sub)?;
            let f = a.locate(&reference).map_err(|e| match e {
                Error::AmbiguousFace => Error::Precondition(format!(
                    "witness point lies on the sub-drawing for (i, j) = ({i}, {j}); re-seat it"
                )),
                other => other,
            })?;
            let on = a.face_vertices(f);
            Ok(PairEvidence {
                i,
                j,
                vi_on_boundary: on.contains(&seq[i - 1]),
                vj_on_boundary: on.contains(&seq[j - 1]),
            })
        })
        .collect();
    let pairs = pairs?;
    let valid = pairs.iter().all(|p| p.vi_on_boundary && p.vj_on_boundary);
    Ok(ShellingCertificate {
        sequence: seq.to_vec(),
        witness: reference,
        witness_point: point,
        pairs,
        single_on_boundary: None,
        valid,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    LemmaCycle,
    XOrder,
    Direct,
}

impl CertificateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CertificateKind::LemmaCycle => "lemma-cycle",
            CertificateKind::XOrder => "x-order",
            CertificateKind::Direct => "direct",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conclusion {
    /// s >= n/2, crossings >= Z(n) and the whole bound chain holds.
    Conclusive,
    /// No shelling of size >= n/2 was certified; nothing is claimed.
    Inconclusive,
    /// A certified shelling together with a failed inequality: a bug or an invalid input.
    Violated,
}

impl Conclusion {
    pub fn as_str(self) -> &'static str {
        match self {
            Conclusion::Conclusive => "conclusive",
            Conclusion::Inconclusive => "inconclusive",
            Conclusion::Violated => "violated",
        }
    }
}

#[derive(Clone, Debug)]
pub struct PipelineVerdict {
    pub n: usize,
    pub s: Option<usize>,
    pub kind: Option<CertificateKind>,
    pub sequence: Vec<VertexId>,
    pub witness: Option<FaceRef>,
    pub cycle: Option<CycleWitness>,
    pub certificate: Option<ShellingCertificate>,
    pub crossings: u64,
    pub zeta: u64,
    pub bound_chain: Vec<BoundVerdict>,
    pub conclusion: Conclusion,
}

#[derive(Clone, Debug, Default)]
pub struct PipelineOptions {
    /// Caller-supplied shelling sequence, tried last.
    pub sequence: Option<Vec<VertexId>>,
    /// Witness for the supplied sequence (unbounded face if absent).
    pub witness: Option<FaceRef>,
    pub cycle_budget: Option<u64>,
}

/// Tries, in order: a long crossing-free cycle; the x-order of an x-bounded
/// drawing with the unbounded face; a supplied sequence. A shelling with
/// s >= n/2 yields the crossing bound and the E<=<=k chain up to min(s-2, floor((n-3)/2)).
pub fn theorem1_pipeline(d: &Drawing, opts: &PipelineOptions) -> Result<PipelineVerdict> {
    let n = d.n();
    if n < 3 {
        return Err(Error::Domain(format!("pipeline needs n >= 3, got {n}")));
    }
    let crossings = compute_crossings_geometric(d)?.1;
    let z = zeta(n as u64);
    let half = n.div_ceil(2).max(3);
    let budget = opts.cycle_budget.unwrap_or(DEFAULT_CYCLE_BUDGET);

    let mut found: Option<(CertificateKind, Vec<VertexId>, FaceRef, Option<CycleWitness>, Option<ShellingCertificate>)> =
        None;
    for target in (half..=n).rev() {
        match search_cycle(d, target, budget)? {
            CycleSearch::Found(cycle) => {
                let w = check_lemma_cycle(d, &cycle)?;
                if w.pass {
                    let face = lemma_witness(d, &cycle)?;
                    found = Some((CertificateKind::LemmaCycle, cycle, face, Some(w), None));
                }
                break;
            }
            CycleSearch::NotFound => continue,
            CycleSearch::Exhausted => break,
        }
    }
    if found.is_none() && is_x_bounded(d).unwrap_or(false) {
        let mut order = d.vertex_ids();
        order.sort_by(|a, b| d.vertices()[a].x.cmp(&d.vertices()[b].x));
        let cert = verify_shelling_direct(d, &order, &FaceRef::Unbounded)?;
        if cert.valid {
            found = Some((CertificateKind::XOrder, order, FaceRef::Unbounded, None, Some(cert)));
        }
    }
    if found.is_none() {
        if let Some(seq) = &opts.sequence {
            let w = opts.witness.clone().unwrap_or(FaceRef::Unbounded);
            let cert = verify_shelling_direct(d, seq, &w)?;
            if cert.valid {
                found = Some((CertificateKind::Direct, seq.clone(), w, None, Some(cert)));
            }
        }
    }

    let Some((kind, sequence, witness, cycle, certificate)) = found else {
        return Ok(PipelineVerdict {
            n,
            s: None,
            kind: None,
            sequence: Vec::new(),
            witness: None,
            cycle: None,
            certificate: None,
            crossings,
            zeta: z,
            bound_chain: Vec::new(),
            conclusion: Conclusion::Inconclusive,
        });
    };
    let s = sequence.len();
    let mut bound_chain = Vec::new();
    let conclusion = if 2 * s >= n {
        let kmax = (s as i64 - 2).min((n as i64 - 3) / 2);
        if kmax >= 0 {
            bound_chain = check_shellable_bound(d, &witness, kmax)?;
        }
        if crossings >= z && bound_chain.iter().all(|b| b.pass) {
            Conclusion::Conclusive
        } else {
            Conclusion::Violated
        }
    } else {
        Conclusion::Inconclusive
    };
    Ok(PipelineVerdict {
        n,
        s: Some(s),
        kind: Some(kind),
        sequence,
        witness: Some(witness),
        cycle,
        certificate,
        crossings,
        zeta: z,
        bound_chain,
        conclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{blazek_koman, convex, harary_hill};
    use crate::drawing::ClassTag;

    fn ids(v: &[u32]) -> Vec<VertexId> {
        v.iter().map(|&i| VertexId(i)).collect()
    }

    #[test]
    fn lemma_cycle_examples() {
        let k3 = convex(3).unwrap();
        assert!(check_lemma_cycle(&k3, &ids(&[1, 2, 3])).unwrap().pass);
        let (_, bk) = blazek_koman(8).unwrap();
        assert!(check_lemma_cycle(&bk, &ids(&[1, 2, 3, 4, 5, 6, 7, 8])).unwrap().pass);
        let k4 = convex(4).unwrap();
        let w = check_lemma_cycle(&k4, &ids(&[1, 2, 4])).unwrap();
        assert!(!w.pass);
        assert_eq!(w.violations().len(), 1);
        assert!(matches!(check_lemma_cycle(&k4, &ids(&[1, 2, 1])), Err(Error::Structural(_))));
    }

    #[test]
    fn cycle_search() {
        let (_, hh) = harary_hill(10).unwrap();
        let c = find_crossing_free_cycle(&hh, 5).unwrap().unwrap();
        assert!(c.len() >= 5);
        let (_, bk) = blazek_koman(8).unwrap();
        assert_eq!(find_crossing_free_cycle(&bk, 8).unwrap().unwrap().len(), 8);
        assert_eq!(find_crossing_free_cycle(&convex(5).unwrap(), 6).unwrap(), None);
    }

    #[test]
    fn direct_examples() {
        let (_, bk) = blazek_koman(8).unwrap();
        let c = verify_shelling_direct(&bk, &ids(&[1, 2, 3, 4, 5, 6, 7, 8]), &FaceRef::Unbounded).unwrap();
        assert!(c.valid);
        assert_eq!(c.pairs.len(), 28);

        // Bounded face of convex K_4 between vertices 2, 3 and the crossing: not incident to v_1.
        let k4 = Drawing::straight(
            ClassTag::Convex,
            (0..4).map(|i| (VertexId(i as u32 + 1), Point::from_ints(i, i * i))).collect(),
        )
        .unwrap();
        let face = FaceRef::Point(Point::new(ratio(3, 2), ratio(17, 6)));
        let c = verify_shelling_direct(&k4, &ids(&[1, 2, 3, 4]), &face).unwrap();
        assert!(!c.valid);
        let first = c.pairs.iter().find(|p| (p.i, p.j) == (1, 4)).unwrap();
        assert!(!first.vi_on_boundary);

        let c = verify_shelling_direct(&k4, &ids(&[3]), &FaceRef::Unbounded).unwrap();
        assert!(c.valid);
    }

    #[test]
    fn lemma_witness_certifies() {
        let (_, bk) = blazek_koman(7).unwrap();
        let cycle = ids(&[1, 2, 3, 4, 5, 6, 7]);
        let w = lemma_witness(&bk, &cycle).unwrap();
        assert!(verify_shelling_direct(&bk, &cycle, &w).unwrap().valid);
    }

    #[test]
    fn pipeline_examples() {
        let (_, hh) = harary_hill(10).unwrap();
        let v = theorem1_pipeline(&hh, &PipelineOptions::default()).unwrap();
        assert_eq!(v.conclusion, Conclusion::Conclusive);
        assert!(v.s.unwrap() >= 5);
        assert_eq!((v.crossings, v.zeta), (60, 60));

        let (_, bk) = blazek_koman(9).unwrap();
        let v = theorem1_pipeline(&bk, &PipelineOptions::default()).unwrap();
        assert_eq!(v.conclusion, Conclusion::Conclusive);
        assert_eq!(v.s, Some(9));
        assert_eq!(v.crossings, 36);
    }
}
