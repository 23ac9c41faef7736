//! k-edges, their cumulative tables, the crossing identity, and the
//! inequalities and recurrences built on them.
//!
//! Sides are decided by the closed curve `pq . qr . rp` together with the
//! designated face: `r` is left of `pq` iff the disk bounded by that curve and
//! missing the designated face lies to the left of the traversal. For the
//! unbounded face this is the sign of the signed area. The test needs only
//! the per-edge signed area and the per-edge winding contribution around the
//! face's reference point, so one table answers every triple of every
//! sub-drawing (the reference point persists across deletions).

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;

use crate::arrangement::{boundary_vertices, induced_order_in, planarize, FaceRef};
use crate::drawing::{Drawing, EdgeKey, VertexId};
use crate::error::{Error, Result};
use crate::geom::{on_segment, shoelace, winding_step};
use crate::goodness::{crossing_count, require_good};
use crate::scalar::{sign, zero, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Orientation of every vertex triple relative to a designated face.
#[derive(Clone, Debug)]
pub struct SideTable {
    ids: Vec<VertexId>,
    index: BTreeMap<VertexId, usize>,
    left: Vec<bool>,
}

impl SideTable {
    pub fn new(d: &Drawing, f: &FaceRef) -> Result<SideTable> {
        require_good(d)?;
        let ids = d.vertex_ids();
        let n = ids.len();
        let index: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let reference = match f {
            FaceRef::Unbounded => None,
            FaceRef::Point(p) => {
                let hits_edge = d
                    .edges()
                    .values()
                    .any(|line| line.segments().any(|(a, b)| on_segment(a, b, p)));
                if hits_edge || d.vertices().values().any(|q| q == p) {
                    return Err(Error::AmbiguousFace);
                }
                Some(p)
            }
        };
        let mut area = vec![zero(); n * n];
        let mut wind = vec![0i32; n * n];
        for (key, line) in d.edges() {
            let (a, b) = (index[&key.lo], index[&key.hi]);
            let mut s = zero();
            let mut w = 0;
            for (p, q) in line.segments() {
                s += shoelace(p, q);
                if let Some(r) = reference {
                    w += winding_step(p, q, r);
                }
            }
            area[b * n + a] = -s.clone();
            area[a * n + b] = s;
            wind[a * n + b] = w;
            wind[b * n + a] = -w;
        }
        let mut left = vec![false; n * n * n];
        let at = |p: usize, q: usize, r: usize| (p * n + q) * n + r;
        for p in 0..n {
            for q in p + 1..n {
                for r in q + 1..n {
                    let s: Scalar = &area[p * n + q] + &area[q * n + r] + &area[r * n + p];
                    let w = wind[p * n + q] + wind[q * n + r] + wind[r * n + p];
                    if sign(&s) == 0 {
                        return Err(Error::Precondition(format!(
                            "degenerate triangle {} {} {}",
                            ids[p], ids[q], ids[r]
                        )));
                    }
                    let l = (sign(&s) > 0) != (w != 0);
                    for (x, y, z) in [(p, q, r), (q, r, p), (r, p, q)] {
                        left[at(x, y, z)] = l;
                        left[at(y, x, z)] = !l;
                    }
                }
            }
        }
        Ok(SideTable { ids, index, left })
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    fn idx(&self, v: VertexId) -> usize {
        self.index[&v]
    }

    fn left_idx(&self, p: usize, q: usize, r: usize) -> bool {
        let n = self.ids.len();
        self.left[(p * n + q) * n + r]
    }

    /// Whether `r` is on the left of the directed edge `p -> q`.
    pub fn left(&self, p: VertexId, q: VertexId, r: VertexId) -> bool {
        self.left_idx(self.idx(p), self.idx(q), self.idx(r))
    }

    pub fn side(&self, p: VertexId, q: VertexId, r: VertexId) -> Side {
        if self.left(p, q, r) {
            Side::Left
        } else {
            Side::Right
        }
    }

    /// Number of members to the left of `p -> q`, among members other than p, q.
    pub fn left_count(&self, p: VertexId, q: VertexId, members: &[VertexId]) -> usize {
        let (a, b) = (self.idx(p), self.idx(q));
        members
            .iter()
            .map(|&v| self.idx(v))
            .filter(|&r| r != a && r != b && self.left_idx(a, b, r))
            .count()
    }

    /// The k of edge `pq` in the sub-drawing induced by `members` (which contains p and q).
    pub fn class_in(&self, p: VertexId, q: VertexId, members: &[VertexId]) -> usize {
        let l = self.left_count(p, q, members);
        l.min(members.len() - 2 - l)
    }

    /// Class of every edge of the sub-drawing induced by `members`.
    pub fn classes_in(&self, members: &[VertexId]) -> BTreeMap<EdgeKey, usize> {
        let mut out = BTreeMap::new();
        for (i, &p) in members.iter().enumerate() {
            for &q in &members[i + 1..] {
                out.insert(EdgeKey::new(p, q), self.class_in(p, q, members));
            }
        }
        out
    }

    pub fn spectrum_in(&self, members: &[VertexId]) -> KEdgeSpectrum {
        let n = members.len();
        let mut counts = vec![0u64; (n / 2).max(1)];
        for k in self.classes_in(members).into_values() {
            counts[k] += 1;
        }
        KEdgeSpectrum { n, counts }
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }
}

pub fn side_of(d: &Drawing, p: VertexId, q: VertexId, r: VertexId, f: &FaceRef) -> Result<Side> {
    for v in [p, q, r] {
        if !d.has_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
    }
    if p == q || q == r || p == r {
        return Err(Error::Precondition("side_of needs three distinct vertices".into()));
    }
    Ok(SideTable::new(d, f)?.side(p, q, r))
}

/// `counts[k]` = number of k-edges, for k = 0 .. floor(n/2) - 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KEdgeSpectrum {
    pub n: usize,
    pub counts: Vec<u64>,
}

impl KEdgeSpectrum {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

pub fn spectrum(d: &Drawing, f: &FaceRef) -> Result<KEdgeSpectrum> {
    let t = SideTable::new(d, f)?;
    Ok(t.spectrum_in(&d.vertex_ids()))
}

pub fn edge_classes(d: &Drawing, f: &FaceRef) -> Result<BTreeMap<EdgeKey, usize>> {
    let t = SideTable::new(d, f)?;
    Ok(t.classes_in(&d.vertex_ids()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CumulativeTable {
    pub n: usize,
    pub counts: Vec<u64>,
    /// E_{<=k}.
    pub leq: Vec<u64>,
    /// E_{<=<=k}.
    pub leqleq: Vec<u64>,
}

impl CumulativeTable {
    /// E_{<=<=k}, with E_{<=<=-1} = 0 and the value saturating beyond the table.
    pub fn leqleq_at(&self, k: i64) -> u64 {
        if k < 0 {
            return 0;
        }
        let k = k as usize;
        if k < self.leqleq.len() {
            self.leqleq[k]
        } else {
            // Past the last class every edge keeps contributing one per step.
            let last = self.leqleq.len() - 1;
            self.leqleq[last] + (k - last) as u64 * self.counts.iter().sum::<u64>()
        }
    }
}

pub fn cumulative(s: &KEdgeSpectrum) -> CumulativeTable {
    let m = s.counts.len();
    let mut leq = Vec::with_capacity(m);
    let mut acc = 0;
    for &c in &s.counts {
        acc += c;
        leq.push(acc);
    }
    let mut leqleq = Vec::with_capacity(m);
    let mut acc = 0;
    for &c in &leq {
        acc += c;
        leqleq.push(acc);
    }
    for k in 0..m {
        let weighted: u64 = (0..=k).map(|i| (k + 1 - i) as u64 * s.counts[i]).sum();
        let double: u64 = (0..=k).map(|j| (0..=j).map(|i| s.counts[i]).sum::<u64>()).sum();
        assert_eq!(leqleq[k], weighted, "cumulative forms disagree at k={k}");
        assert_eq!(leqleq[k], double, "cumulative forms disagree at k={k}");
    }
    CumulativeTable {
        n: s.n,
        counts: s.counts.clone(),
        leq,
        leqleq,
    }
}

/// The Harary-Hill number.
pub fn zeta(n: u64) -> u64 {
    (n / 2) * ((n.saturating_sub(1)) / 2) * ((n.saturating_sub(2)) / 2) * ((n.saturating_sub(3)) / 2) / 4
}

pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Evaluates the crossing identity for given E_{<=<=k} values, k = 0 .. floor(n/2) - 2.
fn identity_rhs(n: u64, leqleq: impl Fn(i64) -> i128) -> Result<i128> {
    if n < 3 {
        return Err(Error::Domain(format!("crossing identity needs n >= 3, got {n}")));
    }
    let top = (n / 2) as i64 - 2;
    let sum: i128 = (0..=top).map(&leqleq).sum();
    let pairs = binom(n, 2) as i128;
    let half = |v: i128| Ratio::new(v, 2);
    let parity = if n % 2 == 0 { 2 } else { 0 };
    let value = Ratio::from_integer(2 * sum)
        - half(pairs * ((n as i128 - 2) / 2))
        - half(parity * if top >= 0 { leqleq(top) } else { 0 });
    assert!(
        value.is_integer(),
        "crossing identity produced a non-integer {value}"
    );
    Ok(value.to_integer())
}

pub fn crossings_from_spectrum(t: &CumulativeTable) -> Result<i128> {
    identity_rhs(t.n as u64, |k| t.leqleq_at(k) as i128)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identity2Report {
    pub lhs: u64,
    pub rhs: i128,
    pub equal: bool,
}

pub fn check_identity2(d: &Drawing) -> Result<Identity2Report> {
    let lhs = crossing_count(d)?;
    let table = cumulative(&spectrum(d, &FaceRef::Unbounded)?);
    let rhs = crossings_from_spectrum(&table)?;
    Ok(Identity2Report {
        lhs,
        rhs,
        equal: lhs as i128 == rhs,
    })
}

/// Edges of `d` avoiding `y` that have the same class k <= `k` in `d` and in `d - y`.
pub fn invariant_leq_k_count(d: &Drawing, y: VertexId, k: i64, f: &FaceRef) -> Result<u64> {
    let t = SideTable::new(d, f)?;
    let members = d.vertex_ids();
    invariant_edges(&t, &members, y, k).map(|e| e.len() as u64)
}

fn check_k_range(n: usize, k: i64) -> Result<()> {
    let top = (n as i64 - 3).div_euclid(2);
    if n < 4 || k < 0 || k > top {
        return Err(Error::Domain(format!(
            "k = {k} outside 0..=floor((n-3)/2) for a deletion from n = {n}"
        )));
    }
    Ok(())
}

pub(crate) fn invariant_edges(
    t: &SideTable,
    members: &[VertexId],
    y: VertexId,
    k: i64,
) -> Result<BTreeSet<EdgeKey>> {
    if !members.contains(&y) {
        return Err(Error::UnknownVertex(y));
    }
    check_k_range(members.len(), k)?;
    Ok(same_class_edges(t, members, y, k))
}

/// Edges avoiding `y` whose class is the same j <= k before and after deleting `y`.
fn same_class_edges(t: &SideTable, members: &[VertexId], y: VertexId, k: i64) -> BTreeSet<EdgeKey> {
    let rest: Vec<VertexId> = members.iter().copied().filter(|&v| v != y).collect();
    let mut out = BTreeSet::new();
    for (i, &p) in rest.iter().enumerate() {
        for &q in &rest[i + 1..] {
            let before = t.class_in(p, q, members);
            if before as i64 <= k && t.class_in(p, q, &rest) == before {
                out.insert(EdgeKey::new(p, q));
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct LastPointEntry {
    pub i: usize,
    pub vertex: VertexId,
    pub expected: usize,
    pub actual: usize,
}

#[derive(Clone, Debug)]
pub struct LastPointReport {
    pub x: VertexId,
    pub order: Vec<VertexId>,
    pub entries: Vec<LastPointEntry>,
    pub pass: bool,
}

impl LastPointReport {
    pub fn witness(&self) -> Option<&LastPointEntry> {
        self.entries.iter().find(|e| e.expected != e.actual)
    }
}

/// Checks that `x x_i` is a min(i-1, n-1-i)-edge along the order induced by `x`.
pub fn check_prop_lastpoint(d: &Drawing, x: VertexId, f: &FaceRef) -> Result<LastPointReport> {
    let arr = planarize(d)?;
    let t = SideTable::new(d, f)?;
    lastpoint_with(&arr, &t, d, x, f)
}

pub(crate) fn lastpoint_with(
    arr: &crate::arrangement::Arrangement,
    t: &SideTable,
    d: &Drawing,
    x: VertexId,
    f: &FaceRef,
) -> Result<LastPointReport> {
    let order = induced_order_in(arr, t, x, f)?;
    let members = d.vertex_ids();
    let n = members.len();
    let entries: Vec<LastPointEntry> = order
        .iter()
        .enumerate()
        .map(|(j, &v)| {
            let i = j + 1;
            LastPointEntry {
                i,
                vertex: v,
                expected: (i - 1).min(n - 1 - i),
                actual: t.class_in(x, v, &members),
            }
        })
        .collect();
    let pass = entries.iter().all(|e| e.expected == e.actual);
    Ok(LastPointReport {
        x,
        order,
        entries,
        pass,
    })
}

#[derive(Clone, Debug)]
pub struct InvariantReport {
    pub x: VertexId,
    pub y: VertexId,
    pub k: i64,
    pub i: usize,
    pub found: u64,
    pub required: u64,
    pub pass: bool,
}

/// Counts invariant (w.r.t. deleting `y`) <=k-edges at `x` avoiding `u`, where
/// `x` lies on the designated face of `d - u` and i = |u| + 1.
pub fn check_prop_invariant(
    d: &Drawing,
    x: VertexId,
    y: VertexId,
    u: &BTreeSet<VertexId>,
    k: i64,
    f: &FaceRef,
) -> Result<InvariantReport> {
    let t = SideTable::new(d, f)?;
    let sub = d.delete_vertices(u)?;
    let on_face = boundary_vertices(&planarize(&sub)?, f)?.contains(&x);
    if !on_face {
        return Err(Error::Precondition(format!(
            "vertex {x} is not on the designated face after deleting U"
        )));
    }
    invariant_at(&t, &d.vertex_ids(), x, y, u, k)
}

pub(crate) fn invariant_at(
    t: &SideTable,
    members: &[VertexId],
    x: VertexId,
    y: VertexId,
    u: &BTreeSet<VertexId>,
    k: i64,
) -> Result<InvariantReport> {
    let i = u.len() + 1;
    if x == y || u.contains(&x) || u.contains(&y) {
        return Err(Error::Precondition("x, y and U must be disjoint".into()));
    }
    if (i as i64 - 1) > k {
        return Err(Error::Domain(format!("need |U| <= k, got |U| = {} and k = {k}", u.len())));
    }
    let inv = invariant_edges(t, members, y, k)?;
    let found = inv
        .iter()
        .filter(|e| e.contains(x) && !u.contains(&e.other(x)))
        .count() as u64;
    let required = (k - i as i64 + 2) as u64;
    Ok(InvariantReport {
        x,
        y,
        k,
        i,
        found,
        required,
        pass: found >= required,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepVerdict {
    Holds,
    Fails,
    /// k' outside the valid range for this step; the identity is not evaluated.
    OutOfRange,
}

#[derive(Clone, Debug)]
pub struct RecurrenceStep {
    pub r: usize,
    pub removed: VertexId,
    pub size: usize,
    /// e_l(v_r) for l = 0 ..= k'.
    pub incident: Vec<u64>,
    pub invariant: u64,
    pub lhs: u64,
    pub rhs: u64,
    pub verdict: StepVerdict,
}

#[derive(Clone, Debug)]
pub struct DeletionTrace {
    pub order: Vec<VertexId>,
    pub kprime: i64,
    pub steps: Vec<RecurrenceStep>,
}

impl DeletionTrace {
    pub fn all_hold(&self) -> bool {
        self.steps.iter().all(|s| s.verdict != StepVerdict::Fails)
    }

    pub fn evaluated(&self) -> usize {
        self.steps.iter().filter(|s| s.verdict != StepVerdict::OutOfRange).count()
    }
}

fn leqleq_of(t: &SideTable, members: &[VertexId], k: i64) -> u64 {
    if k < 0 {
        return 0;
    }
    t.classes_in(members)
        .into_values()
        .map(|c| (k + 1 - c as i64).max(0) as u64)
        .sum()
}

/// Checks `E<=<=k'(D_{1,r}) = E<=<=k'-1(D_{1,r-1}) + sum_l (k'+1-l) e_l(v_r) + E<=k'(D_{1,r}, D_{1,r-1})`
/// for r = s down to 2, where D_{1,r} deletes v_{r+1}, ..., v_s.
pub fn check_recurrence(d: &Drawing, order: &[VertexId], kprime: i64) -> Result<DeletionTrace> {
    check_recurrence_in(d, order, kprime, &FaceRef::Unbounded)
}

pub fn check_recurrence_in(
    d: &Drawing,
    order: &[VertexId],
    kprime: i64,
    f: &FaceRef,
) -> Result<DeletionTrace> {
    let distinct: BTreeSet<_> = order.iter().collect();
    if distinct.len() != order.len() {
        return Err(Error::Structural("deletion order repeats a vertex".into()));
    }
    for v in order {
        if !d.has_vertex(*v) {
            return Err(Error::UnknownVertex(*v));
        }
    }
    let t = SideTable::new(d, f)?;
    let s = order.len();
    let mut steps = Vec::new();
    for r in (2..=s).rev() {
        let gone: BTreeSet<VertexId> = order[r..].iter().copied().collect();
        let members: Vec<VertexId> = d.vertex_ids().into_iter().filter(|v| !gone.contains(v)).collect();
        let vr = order[r - 1];
        let rest: Vec<VertexId> = members.iter().copied().filter(|&v| v != vr).collect();
        let size = members.len();
        // The identity itself is valid for 0 <= k' <= floor(|D_{1,r}| / 2).
        let in_range = kprime >= 0 && kprime <= size as i64 / 2;
        let mut incident = vec![0u64; kprime.max(0) as usize + 1];
        for &z in &members {
            if z != vr {
                let c = t.class_in(vr, z, &members);
                if (c as i64) <= kprime {
                    incident[c] += 1;
                }
            }
        }
        let (invariant, lhs, rhs, verdict) = if in_range {
            let invariant = same_class_edges(&t, &members, vr, kprime).len() as u64;
            let lhs = leqleq_of(&t, &members, kprime);
            let weighted: u64 = incident
                .iter()
                .enumerate()
                .map(|(l, &e)| (kprime as u64 + 1 - l as u64) * e)
                .sum();
            let rhs = leqleq_of(&t, &rest, kprime - 1) + weighted + invariant;
            let v = if lhs == rhs { StepVerdict::Holds } else { StepVerdict::Fails };
            (invariant, lhs, rhs, v)
        } else {
            (0, 0, 0, StepVerdict::OutOfRange)
        };
        steps.push(RecurrenceStep {
            r,
            removed: vr,
            size,
            incident,
            invariant,
            lhs,
            rhs,
            verdict,
        });
    }
    Ok(DeletionTrace {
        order: order.to_vec(),
        kprime,
        steps,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundVerdict {
    pub k: i64,
    pub lhs: u64,
    pub rhs: u64,
    pub pass: bool,
}

pub fn shellable_bound_value(k: u64) -> u64 {
    3 * binom(k + 3, 3)
}

/// `E<=<=k(d) >= 3 C(k+3, 3)` for k = 0 ..= kmax.
pub fn check_shellable_bound(d: &Drawing, f: &FaceRef, kmax: i64) -> Result<Vec<BoundVerdict>> {
    let n = d.n() as i64;
    if n < 3 || kmax < 0 || kmax > (n - 3) / 2 {
        return Err(Error::Domain(format!("kmax = {kmax} outside 0..=floor((n-3)/2) for n = {n}")));
    }
    let table = cumulative(&spectrum(d, f)?);
    Ok(bound_rows(&table, kmax))
}

pub(crate) fn bound_rows(table: &CumulativeTable, kmax: i64) -> Vec<BoundVerdict> {
    (0..=kmax)
        .map(|k| {
            let lhs = table.leqleq_at(k);
            let rhs = shellable_bound_value(k as u64);
            BoundVerdict {
                k,
                lhs,
                rhs,
                pass: lhs >= rhs,
            }
        })
        .collect()
}

/// The crossing lower bound obtained by putting E<=<=k = 3 C(k+3, 3) into the identity.
pub fn lower_bound_from_table(n: u64) -> Result<i128> {
    identity_rhs(n, |k| shellable_bound_value(k as u64) as i128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::ClassTag;
    use crate::scalar::{ratio, Point};

    fn straight(pts: &[(i64, i64)]) -> Drawing {
        Drawing::straight(
            ClassTag::Generic,
            pts.iter()
                .enumerate()
                .map(|(i, &(x, y))| (VertexId(i as u32 + 1), Point::from_ints(x, y)))
                .collect(),
        )
        .unwrap()
    }

    fn parabola(n: i64) -> Drawing {
        straight(&(0..n).map(|i| (i, i * i)).collect::<Vec<_>>())
    }

    /// Orientation oracle for straight-line drawings: plain cross products.
    fn oracle_spectrum(pts: &[(i64, i64)]) -> Vec<u64> {
        let n = pts.len();
        let mut counts = vec![0u64; (n / 2).max(1)];
        for a in 0..n {
            for b in a + 1..n {
                let mut l = 0;
                for c in 0..n {
                    if c == a || c == b {
                        continue;
                    }
                    let (p, q, r) = (pts[a], pts[b], pts[c]);
                    if (q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0) > 0 {
                        l += 1;
                    }
                }
                counts[l.min(n - 2 - l)] += 1;
            }
        }
        counts
    }

    #[test]
    fn side_examples() {
        let d = straight(&[(0, 0), (1, 0), (0, 1)]);
        let [p, q, r] = [VertexId(1), VertexId(2), VertexId(3)];
        assert_eq!(side_of(&d, p, q, r, &FaceRef::Unbounded).unwrap(), Side::Left);
        assert_eq!(side_of(&d, q, p, r, &FaceRef::Unbounded).unwrap(), Side::Right);
        let d = straight(&[(0, 0), (1, 0), (0, -1)]);
        assert_eq!(side_of(&d, p, q, r, &FaceRef::Unbounded).unwrap(), Side::Right);
        // Designating the inner face of the triangle flips every side.
        let d = straight(&[(0, 0), (4, 0), (0, 4)]);
        let inner = FaceRef::Point(Point::from_ints(1, 1));
        assert_eq!(side_of(&d, p, q, r, &inner).unwrap(), Side::Right);
    }

    #[test]
    fn convex_spectra_match_oracle() {
        for n in 3..=8 {
            let pts: Vec<(i64, i64)> = (0..n).map(|i| (i, i * i)).collect();
            let s = spectrum(&parabola(n), &FaceRef::Unbounded).unwrap();
            assert_eq!(s.counts, oracle_spectrum(&pts), "n={n}");
            assert_eq!(s.total(), binom(n as u64, 2));
        }
        assert_eq!(spectrum(&parabola(4), &FaceRef::Unbounded).unwrap().counts, vec![4, 2]);
        assert_eq!(spectrum(&parabola(6), &FaceRef::Unbounded).unwrap().counts, vec![6, 6, 3]);
        assert_eq!(spectrum(&parabola(3), &FaceRef::Unbounded).unwrap().counts, vec![3]);
    }

    #[test]
    fn hull_edge_has_both_others_on_one_side() {
        let d = parabola(4);
        let (p, q) = (VertexId(1), VertexId(2));
        let a = side_of(&d, p, q, VertexId(3), &FaceRef::Unbounded).unwrap();
        let b = side_of(&d, p, q, VertexId(4), &FaceRef::Unbounded).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cumulative_and_identity() {
        let t = cumulative(&spectrum(&parabola(6), &FaceRef::Unbounded).unwrap());
        assert_eq!(&t.leqleq[..2], &[6, 18]);
        assert_eq!(crossings_from_spectrum(&cumulative(&KEdgeSpectrum { n: 4, counts: vec![4, 2] })).unwrap(), 1);
        assert_eq!(crossings_from_spectrum(&cumulative(&KEdgeSpectrum { n: 5, counts: vec![5, 5] })).unwrap(), 5);
        for n in 3..=8 {
            let r = check_identity2(&parabola(n)).unwrap();
            assert!(r.equal, "{r:?}");
            assert_eq!(r.lhs, binom(n as u64, 4));
        }
        let bad = KEdgeSpectrum { n: 2, counts: vec![1] };
        assert!(matches!(crossings_from_spectrum(&cumulative(&bad)), Err(Error::Domain(_))));
    }

    #[test]
    fn zeta_values() {
        assert_eq!(zeta(4), 0);
        assert_eq!(zeta(7), 9);
        assert_eq!(zeta(10), 60);
        assert_eq!(zeta(12), 150);
        assert_eq!(zeta(1), 0);
    }

    #[test]
    fn table_bound_equals_zeta() {
        assert_eq!(lower_bound_from_table(5).unwrap(), 1);
        assert_eq!(lower_bound_from_table(6).unwrap(), 3);
        assert_eq!(lower_bound_from_table(8).unwrap(), 18);
        for n in 3..=100 {
            assert_eq!(lower_bound_from_table(n).unwrap(), zeta(n) as i128, "n={n}");
        }
        assert_eq!(shellable_bound_value(0), 3);
    }

    #[test]
    fn lastpoint_on_convex() {
        let d = parabola(6);
        for x in d.vertex_ids() {
            let r = check_prop_lastpoint(&d, x, &FaceRef::Unbounded).unwrap();
            assert!(r.pass, "{:?}", r.witness());
            let ks: Vec<usize> = r.entries.iter().map(|e| e.actual).collect();
            assert_eq!(ks, vec![0, 1, 2, 1, 0]);
        }
        let d = straight(&[(0, 0), (10, 0), (0, 10), (2, 2)]);
        assert!(matches!(
            check_prop_lastpoint(&d, VertexId(4), &FaceRef::Unbounded),
            Err(Error::Precondition(_))
        ));
    }

    /// Recount of invariant edges by deleting y and classifying from scratch.
    fn oracle_invariant(d: &Drawing, y: VertexId, k: usize) -> u64 {
        let before = edge_classes(d, &FaceRef::Unbounded).unwrap();
        let after = edge_classes(&d.delete(&[y]).unwrap(), &FaceRef::Unbounded).unwrap();
        after
            .iter()
            .filter(|(e, &c)| before[*e] == c && c <= k)
            .count() as u64
    }

    #[test]
    fn invariant_counts() {
        let d = parabola(3);
        assert!(matches!(
            invariant_leq_k_count(&d, VertexId(1), 0, &FaceRef::Unbounded),
            Err(Error::Domain(_))
        ));
        let d = parabola(6);
        for y in d.vertex_ids() {
            let got = invariant_leq_k_count(&d, y, 1, &FaceRef::Unbounded).unwrap();
            assert_eq!(got, oracle_invariant(&d, y, 1));
        }
        let d = parabola(5);
        let got = invariant_leq_k_count(&d, VertexId(3), 0, &FaceRef::Unbounded).unwrap();
        assert!(got >= 2, "{got}");
        assert!(invariant_leq_k_count(&d, VertexId(3), 2, &FaceRef::Unbounded).is_err());
    }

    #[test]
    fn prop_invariant_on_convex() {
        let d = parabola(7);
        let u: BTreeSet<VertexId> = [VertexId(2)].into_iter().collect();
        for k in 1..=2 {
            let r = check_prop_invariant(&d, VertexId(1), VertexId(5), &u, k, &FaceRef::Unbounded).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn recurrence_on_convex() {
        let d = parabola(5);
        let order = d.vertex_ids();
        let tr = check_recurrence(&d, &order, 1).unwrap();
        assert!(tr.all_hold());
        assert!(tr.evaluated() >= 1);
        let d = parabola(4);
        let tr = check_recurrence(&d, &[VertexId(4)], 1).unwrap();
        assert!(tr.steps.is_empty());
        for kp in 0..=2 {
            let tr = check_recurrence(&d, &[VertexId(1), VertexId(4)], kp).unwrap();
            assert_eq!(tr.steps.len(), 1);
            assert_eq!(tr.steps[0].verdict, StepVerdict::Holds);
        }
        let tr = check_recurrence(&d, &[VertexId(1), VertexId(4)], 3).unwrap();
        assert_eq!(tr.steps[0].verdict, StepVerdict::OutOfRange);
    }

    #[test]
    fn shellable_bound_rows() {
        let rows = check_shellable_bound(&parabola(6), &FaceRef::Unbounded, 1).unwrap();
        assert_eq!(rows.iter().map(|r| (r.lhs, r.rhs)).collect::<Vec<_>>(), vec![(6, 3), (18, 12)]);
        assert!(rows.iter().all(|r| r.pass));
        assert!(check_shellable_bound(&parabola(6), &FaceRef::Unbounded, 2).is_err());
    }

    #[test]
    fn bounded_face_reference_on_drawing_is_ambiguous() {
        let d = parabola(4);
        let on = FaceRef::Point(Point::new(ratio(1, 2), ratio(1, 2)));
        assert!(matches!(SideTable::new(&d, &on), Err(Error::AmbiguousFace)));
    }
}
