//! The reproduction battery behind `verify --suite paper`.

use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::Instant;

use rayon::prelude::*;

use crate::arrangement::{boundary_vertices, planarize, FaceRef};
use crate::constructions::{
    blazek_koman, convex, harary_hill, is_monotone, is_x_bounded, random_two_page, realize, sample_mean_crossings,
    Layout, DEFAULT_RESOLUTION,
};
use crate::drawing::{Drawing, VertexId};
use crate::error::{Error, Result};
use crate::goodness::crossing_count;
use crate::kedges::{
    check_identity2, check_recurrence, invariant_edges, lastpoint_with, lower_bound_from_table, zeta, SideTable,
    StepVerdict,
};
use crate::optimizer::{exact_min_crossings, local_search, Status, DEFAULT_EXACT_BUDGET, DEFAULT_ITERATIONS, DEFAULT_RESTARTS};
use crate::shelling::{
    check_lemma_cycle, lemma_witness, search_cycle, theorem1_pipeline, verify_shelling_direct, Conclusion, CycleSearch,
    PipelineOptions, DEFAULT_CYCLE_BUDGET,
};

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

pub const CRITERIA: [(u32, &str); 11] = [
    (1, "construction exactness"),
    (2, "crossing identity"),
    (3, "last-point k-edges"),
    (4, "invariant <=k-edges"),
    (5, "deletion recurrence"),
    (6, "shellability lower bound"),
    (7, "certifier consistency"),
    (8, "2-page optimizer"),
    (9, "random spherical expectation"),
    (10, "bound table arithmetic"),
    (11, "class predicates"),
];

pub const EXCLUSION_NOTE: &str = "12: excluded - the crossing number of K_n over all good drawings is an open problem; \
the bounds are verified on generated and optimized members of the certified classes only";

pub const RANDOM_TWO_PAGE: u64 = 200;

/// Drawing corpus shared by several criteria: convex 4..=10, both
/// constructions 3..=14 and 200 seeded random 2-page drawings with 5 <= n <= 11.
pub fn corpus() -> Result<&'static [(String, Drawing)]> {
    static CORPUS: OnceLock<std::result::Result<Vec<(String, Drawing)>, String>> = OnceLock::new();
    let built = CORPUS.get_or_init(|| {
        let mut jobs: Vec<(String, Box<dyn Fn() -> Result<Drawing> + Send + Sync>)> = Vec::new();
        for n in 4..=10 {
            jobs.push((format!("convex({n})"), Box::new(move || convex(n))));
        }
        for n in 3..=14 {
            jobs.push((format!("blazek_koman({n})"), Box::new(move || Ok(blazek_koman(n)?.1))));
            jobs.push((format!("harary_hill({n})"), Box::new(move || Ok(harary_hill(n)?.1))));
        }
        for seed in 0..RANDOM_TWO_PAGE {
            let n = 5 + (seed % 7) as usize;
            jobs.push((
                format!("random_two_page({n}, {seed})"),
                Box::new(move || realize(&Layout::TwoPage(random_two_page(n, seed)?), DEFAULT_RESOLUTION)),
            ));
        }
        jobs.into_par_iter()
            .map(|(name, job)| job().map(|d| (name.clone(), d)).map_err(|e| format!("{name}: {e}")))
            .collect()
    });
    built.as_deref().map_err(|e| Error::Precondition(e.clone()))
}

/// Peels vertices off the unbounded face (smallest id first) and returns
/// v_1..v_s with v_s the first vertex peeled.
pub fn hull_deletion_order(d: &Drawing) -> Result<Vec<VertexId>> {
    let mut peeled = Vec::new();
    let mut cur = d.clone();
    while cur.n() > 1 {
        let arr = planarize(&cur)?;
        let v = *boundary_vertices(&arr, &FaceRef::Unbounded)?
            .iter()
            .next()
            .ok_or_else(|| Error::Precondition("empty outer boundary".into()))?;
        peeled.push(v);
        cur = cur.delete(&[v])?;
    }
    peeled.extend(cur.vertex_ids());
    peeled.reverse();
    Ok(peeled)
}

/// Collects failures of a per-item check into a verdict line.
fn tally<T: Sync>(items: &[T], check: impl Fn(&T) -> Result<Option<String>> + Sync) -> (bool, Vec<String>, usize) {
    let out: Vec<Option<String>> = items
        .par_iter()
        .map(|it| match check(it) {
            Ok(v) => v,
            Err(e) => Some(format!("error: {e}")),
        })
        .collect();
    let failures: Vec<String> = out.into_iter().flatten().collect();
    (failures.is_empty(), failures, items.len())
}

fn summarize(ok: bool, failures: Vec<String>, checked: usize, what: &str) -> (bool, String) {
    if ok {
        (true, format!("{checked} {what} checked"))
    } else {
        let shown: Vec<String> = failures.iter().take(3).cloned().collect();
        (false, format!("{} of {checked} {what} failed: {}", failures.len(), shown.join("; ")))
    }
}

fn criterion1() -> Result<(bool, String)> {
    let ns: Vec<usize> = (3..=14).collect();
    let (ok, fails, count) = tally(&ns, |&n| {
        let z = zeta(n as u64);
        let (bl, bd) = blazek_koman(n)?;
        let (hl, hd) = harary_hill(n)?;
        let got = [
            Layout::TwoPage(bl).crossings()?,
            crossing_count(&bd)?,
            Layout::Cylindrical(hl).crossings()?,
            crossing_count(&hd)?,
        ];
        Ok((got != [z; 4]).then(|| format!("n={n}: expected {z}, got {got:?}")))
    });
    Ok(summarize(ok, fails, 2 * count, "constructions"))
}

fn criterion2() -> Result<(bool, String)> {
    let (ok, fails, count) = tally(corpus()?, |(name, d)| {
        let r = check_identity2(d)?;
        Ok((!r.equal).then(|| format!("{name}: {} vs {}", r.lhs, r.rhs)))
    });
    Ok(summarize(ok, fails, count, "drawings"))
}

fn criterion3() -> Result<(bool, String)> {
    let (ok, fails, count) = tally(corpus()?, |(name, d)| {
        let f = FaceRef::Unbounded;
        let arr = planarize(d)?;
        let t = SideTable::new(d, &f)?;
        for x in boundary_vertices(&arr, &f)? {
            let r = lastpoint_with(&arr, &t, d, x, &f)?;
            if !r.pass {
                return Ok(Some(format!("{name}, x={x}: {:?}", r.witness())));
            }
        }
        Ok(None)
    });
    Ok(summarize(ok, fails, count, "drawings"))
}

fn criterion4() -> Result<(bool, String)> {
    let (ok, fails, count) = tally(corpus()?, |(name, d)| {
        let n = d.n();
        if n < 4 {
            return Ok(None);
        }
        let f = FaceRef::Unbounded;
        let t = SideTable::new(d, &f)?;
        let ids = d.vertex_ids();
        let kmax = (n as i64 - 3) / 2;
        // Invariant edges depend only on (y, k).
        let mut inv = Vec::new();
        for &y in &ids {
            for k in 0..=kmax {
                inv.push(((y, k), invariant_edges(&t, &ids, y, k)?));
            }
        }
        let mut subsets: Vec<BTreeSet<VertexId>> = vec![BTreeSet::new()];
        for (i, &a) in ids.iter().enumerate() {
            subsets.push([a].into());
            for &b in &ids[i + 1..] {
                subsets.push([a, b].into());
            }
        }
        for u in subsets {
            if u.len() as i64 > kmax {
                continue;
            }
            let sub = d.delete_vertices(&u)?;
            let on = boundary_vertices(&planarize(&sub)?, &f)?;
            let i = u.len() as i64 + 1;
            for &x in &on {
                for ((y, k), edges) in &inv {
                    if *y == x || u.contains(y) || *k < i - 1 {
                        continue;
                    }
                    let found = edges.iter().filter(|e| e.contains(x) && !u.contains(&e.other(x))).count() as i64;
                    if found < k - i + 2 {
                        return Ok(Some(format!("{name}: x={x}, y={y}, U={u:?}, k={k}: {found} < {}", k - i + 2)));
                    }
                }
            }
        }
        Ok(None)
    });
    Ok(summarize(ok, fails, count, "drawings"))
}

fn criterion5() -> Result<(bool, String)> {
    let drawings = vec![
        ("convex(8)".to_string(), convex(8)?),
        ("blazek_koman(9)".to_string(), blazek_koman(9)?.1),
        ("harary_hill(10)".to_string(), harary_hill(10)?.1),
    ];
    let (ok, fails, count) = tally(&drawings, |(name, d)| {
        let order = hull_deletion_order(d)?;
        let mut evaluated = 0;
        for kp in 0..=(d.n() as i64 - 3) / 2 {
            let trace = check_recurrence(d, &order, kp)?;
            if let Some(s) = trace.steps.iter().find(|s| s.verdict == StepVerdict::Fails) {
                return Ok(Some(format!("{name}, k'={kp}, r={}: {} != {}", s.r, s.lhs, s.rhs)));
            }
            evaluated += trace.evaluated();
        }
        Ok((evaluated == 0).then(|| format!("{name}: no step evaluated")))
    });
    Ok(summarize(ok, fails, count, "deletion sequences"))
}

fn criterion6() -> Result<(bool, String)> {
    let mut jobs = Vec::new();
    for n in 5..=14 {
        jobs.push((format!("blazek_koman({n})"), n, true));
        jobs.push((format!("harary_hill({n})"), n, false));
    }
    let (ok, fails, count) = tally(&jobs, |(name, n, bk)| {
        let d = if *bk { blazek_koman(*n)?.1 } else { harary_hill(*n)?.1 };
        let v = theorem1_pipeline(&d, &PipelineOptions::default())?;
        let s = v.s.unwrap_or(0);
        let kmax = (s as i64 - 2).min((*n as i64 - 3) / 2);
        let good = v.conclusion == Conclusion::Conclusive
            && 2 * s >= *n
            && v.crossings >= v.zeta
            && v.bound_chain.len() as i64 == kmax + 1
            && v.bound_chain.iter().all(|b| b.pass);
        Ok((!good).then(|| format!("{name}: {:?}, s={s}, crossings={}", v.conclusion, v.crossings)))
    });
    Ok(summarize(ok, fails, count, "constructions"))
}

fn criterion7() -> Result<(bool, String)> {
    let (ok, fails, count) = tally(corpus()?, |(name, d)| {
        let n = d.n();
        let mut cycles: Vec<Vec<VertexId>> = Vec::new();
        for target in (3..=n).rev() {
            if let CycleSearch::Found(c) = search_cycle(d, target, DEFAULT_CYCLE_BUDGET)? {
                cycles.push(c);
                break;
            }
        }
        // Spine order for 2-page drawings, id order otherwise.
        let natural = match d.layout() {
            Some(Layout::TwoPage(l)) => l.spine.clone(),
            _ => d.vertex_ids(),
        };
        cycles.push(natural);
        for c in cycles {
            if !check_lemma_cycle(d, &c)?.pass {
                continue;
            }
            let w = lemma_witness(d, &c)?;
            if !verify_shelling_direct(d, &c, &w)?.valid {
                return Ok(Some(format!("{name}: cycle {c:?} passes the cycle condition but not the definition")));
            }
        }
        Ok(None)
    });
    Ok(summarize(ok, fails, count, "drawings"))
}

fn criterion8() -> Result<(bool, String)> {
    let mut notes = Vec::new();
    let mut pass = true;
    for n in 4..=8 {
        let r = exact_min_crossings(n, DEFAULT_EXACT_BUDGET)?;
        if r.count != zeta(n as u64) || r.status != Status::Optimal {
            pass = false;
            notes.push(format!("exact n={n}: {} ({:?})", r.count, r.status));
        }
    }
    for n in 9..=12 {
        let runs: Vec<u64> = (0..20u64)
            .into_par_iter()
            .map(|seed| local_search(n, seed, DEFAULT_RESTARTS, DEFAULT_ITERATIONS).map(|r| r.count))
            .collect::<Result<_>>()?;
        let z = zeta(n as u64);
        let hits = runs.iter().filter(|&&c| c == z).count();
        if runs.iter().any(|&c| c < z) || hits < 19 {
            pass = false;
        }
        notes.push(format!("n={n}: {hits}/20 at Z={z}"));
    }
    Ok((pass, format!("exact 4..=8 optimal; local search {}", notes.join(", "))))
}

pub const SPHERE_SAMPLES: usize = 20000;

fn criterion9() -> Result<(bool, String)> {
    let m8 = sample_mean_crossings(8, SPHERE_SAMPLES, 2024)?;
    let m5 = sample_mean_crossings(5, SPHERE_SAMPLES, 2025)?;
    let (e8, e5) = (8.0 * 7.0 * 6.0 * 5.0 / 64.0, 5.0 * 4.0 * 3.0 * 2.0 / 64.0);
    let (r8, r5) = ((m8 - e8).abs() / e8, (m5 - e5).abs() / e5);
    Ok((
        r8 <= 0.01 && r5 <= 0.02,
        format!("n=8 mean {m8:.4} vs {e8} ({:.2}%), n=5 mean {m5:.4} vs {e5} ({:.2}%)", 100.0 * r8, 100.0 * r5),
    ))
}

fn criterion10() -> Result<(bool, String)> {
    let bad: Vec<u64> = (3..=100u64)
        .filter(|&n| lower_bound_from_table(n).map_or(true, |b| b != zeta(n) as i128))
        .collect();
    Ok((bad.is_empty(), if bad.is_empty() { "3..=100 exact".into() } else { format!("mismatch at n={bad:?}") }))
}

fn criterion11() -> Result<(bool, String)> {
    let (ok, fails, count) = tally(corpus()?, |(name, d)| {
        let two_page = matches!(d.layout(), Some(Layout::TwoPage(_)));
        match (is_monotone(d), is_x_bounded(d)) {
            (Ok(m), Ok(x)) => {
                if two_page && !(m && x) {
                    return Ok(Some(format!("{name}: 2-page drawing monotone={m}, x-bounded={x}")));
                }
                Ok((m && !x).then(|| format!("{name}: monotone but not x-bounded")))
            }
            // Shared x-coordinates: the predicates do not apply.
            (Err(Error::Precondition(_)), _) if !two_page => Ok(None),
            (Err(e), _) | (_, Err(e)) => Err(e),
        }
    });
    Ok(summarize(ok, fails, count, "drawings"))
}

pub fn run_criterion(id: u32) -> CriterionResult {
    let start = Instant::now();
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| *n)
        .unwrap_or("unknown");
    let outcome = match id {
        1 => criterion1(),
        2 => criterion2(),
        3 => criterion3(),
        4 => criterion4(),
        5 => criterion5(),
        6 => criterion6(),
        7 => criterion7(),
        8 => criterion8(),
        9 => criterion9(),
        10 => criterion10(),
        11 => criterion11(),
        _ => Err(Error::Domain(format!("no criterion {id}"))),
    };
    let (pass, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult {
        id,
        name,
        pass,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// All criteria, in id order.
pub fn run_suite() -> Vec<CriterionResult> {
    CRITERIA.iter().map(|(id, _)| run_criterion(*id)).collect()
}

pub fn format_line(r: &CriterionResult) -> String {
    format!(
        "criterion {:>2} {:<30} {}  ({:.1}s) {}",
        r.id,
        r.name,
        if r.pass { "PASS" } else { "FAIL" },
        r.seconds,
        r.detail
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_order_of_convex() {
        let order = hull_deletion_order(&convex(6).unwrap()).unwrap();
        assert_eq!(order.len(), 6);
        assert_eq!(*order.last().unwrap(), VertexId(1));
    }

    #[test]
    fn cheap_criteria() {
        assert!(run_criterion(10).pass);
        assert!(run_criterion(5).pass, "{}", run_criterion(5).detail);
        assert!(!run_criterion(99).pass);
    }
}
