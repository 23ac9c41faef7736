//! Random spherical drawings: uniform points on S^2 joined by minor great arcs.
//! This is the one floating-point component; it feeds statistics only.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::drawing::{ClassTag, Drawing, EdgeKey, Polyline, VertexId};
use crate::error::{Error, Result};
use crate::goodness::crossing_count;
use crate::scalar::{from_f64_grid, Point};

const TOL: f64 = 1e-9;
const MAX_RETRIES: usize = 1000;

type V3 = [f64; 3];

fn dot(a: &V3, b: &V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &V3, b: &V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn normalize(a: V3) -> V3 {
    let r = dot(&a, &a).sqrt();
    [a[0] / r, a[1] / r, a[2] / r]
}

fn triple(a: &V3, b: &V3, c: &V3) -> f64 {
    dot(a, &cross(b, c))
}

fn unit<R: Rng>(rng: &mut R) -> V3 {
    loop {
        let v: V3 = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
        let r = dot(&v, &v).sqrt();
        if r > 1e-6 {
            return [v[0] / r, v[1] / r, v[2] / r];
        }
    }
}

#[derive(Clone, Debug)]
pub struct SphericalDrawing {
    pub points: Vec<V3>,
}

/// Whether minor arcs ab and cd (four distinct endpoints) cross; `None` when
/// the configuration is within tolerance of degenerate.
fn arcs_cross(a: &V3, b: &V3, c: &V3, d: &V3) -> Option<bool> {
    let abc = triple(a, b, c);
    let abd = triple(a, b, d);
    let cda = triple(c, d, a);
    let cdb = triple(c, d, b);
    if [abc, abd, cda, cdb].iter().any(|s| s.abs() < TOL) {
        return None;
    }
    // The four signs must agree after orienting each pair consistently.
    let s = (-abc).signum();
    Some(abd.signum() == s && (-cdb).signum() == s && cda.signum() == s)
}

impl SphericalDrawing {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    fn sample<R: Rng>(n: usize, rng: &mut R) -> Result<(SphericalDrawing, u64)> {
        for _ in 0..MAX_RETRIES {
            let d = SphericalDrawing {
                points: (0..n).map(|_| unit(rng)).collect(),
            };
            if let Some(c) = d.crossing_count() {
                return Ok((d, c));
            }
        }
        Err(Error::Precondition("could not draw a non-degenerate spherical sample".into()))
    }

    /// Crossing pairs, or `None` for a degenerate configuration.
    pub fn crossing_count(&self) -> Option<u64> {
        let p = &self.points;
        let n = p.len();
        for i in 0..n {
            for j in i + 1..n {
                if dot(&p[i], &p[j]).abs() > 1.0 - TOL {
                    return None;
                }
            }
        }
        let edges: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let mut total = 0;
        for (x, &(a, b)) in edges.iter().enumerate() {
            for &(c, d) in &edges[x + 1..] {
                if a == c || a == d || b == c || b == d {
                    continue;
                }
                if arcs_cross(&p[a], &p[b], &p[c], &p[d])? {
                    total += 1;
                }
            }
        }
        Some(total)
    }

    fn arc_distance(&self, q: &V3, a: usize, b: usize) -> f64 {
        let (pa, pb) = (&self.points[a], &self.points[b]);
        let nrm = normalize(cross(pa, pb));
        let h = dot(q, &nrm);
        let proj = [q[0] - h * nrm[0], q[1] - h * nrm[1], q[2] - h * nrm[2]];
        if dot(&cross(pa, &proj), &nrm) >= 0.0 && dot(&cross(&proj, pb), &nrm) >= 0.0 {
            h.abs().clamp(-1.0, 1.0).asin()
        } else {
            dot(q, pa).clamp(-1.0, 1.0).acos().min(dot(q, pb).clamp(-1.0, 1.0).acos())
        }
    }

    /// Stereographic projection from a pole far from every arc, with arcs
    /// sampled and rounded to a 2^-24 grid; densified until the planar count
    /// matches the spherical one.
    pub fn realize(&self) -> Result<Drawing> {
        let n = self.n();
        let expected = self
            .crossing_count()
            .ok_or_else(|| Error::Precondition("degenerate spherical drawing".into()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut pole = [0.0, 0.0, 1.0];
        let mut best = -1.0;
        for _ in 0..256 {
            let q = unit(&mut rng);
            let mut score = f64::INFINITY;
            for a in 0..n {
                for b in a + 1..n {
                    score = score.min(self.arc_distance(&q, a, b));
                }
            }
            if score > best {
                best = score;
                pole = q;
            }
        }
        let e1 = normalize(if pole[0].abs() < 0.9 { cross(&pole, &[1.0, 0.0, 0.0]) } else { cross(&pole, &[0.0, 1.0, 0.0]) });
        let e2 = cross(&pole, &e1);
        let den = 1 << 24;
        let project = |p: &V3| -> Point {
            let z = dot(p, &pole);
            let s = 1.0 / (1.0 - z);
            Point::new(from_f64_grid(dot(p, &e1) * s, den), from_f64_grid(dot(p, &e2) * s, den))
        };
        let ids: Vec<VertexId> = (1..=n as u32).map(VertexId).collect();
        let vertices: BTreeMap<VertexId, Point> =
            ids.iter().zip(&self.points).map(|(v, p)| (*v, project(p))).collect();
        let mut samples = 16;
        loop {
            let mut edges = BTreeMap::new();
            for a in 0..n {
                for b in a + 1..n {
                    let (pa, pb) = (&self.points[a], &self.points[b]);
                    let mut pts = vec![vertices[&ids[a]].clone()];
                    for k in 1..samples {
                        let t = k as f64 / samples as f64;
                        let q = normalize([
                            (1.0 - t) * pa[0] + t * pb[0],
                            (1.0 - t) * pa[1] + t * pb[1],
                            (1.0 - t) * pa[2] + t * pb[2],
                        ]);
                        pts.push(project(&q));
                    }
                    pts.push(vertices[&ids[b]].clone());
                    pts.dedup();
                    edges.insert(EdgeKey::new(ids[a], ids[b]), Polyline::new(pts)?);
                }
            }
            let d = Drawing::new(ClassTag::SphericalProjected, vertices.clone(), edges, None)?;
            match crossing_count(&d) {
                Ok(c) if c == expected => return Ok(d),
                other if samples >= 256 => {
                    return match other {
                        Ok(c) => Err(Error::Fidelity {
                            combinatorial: expected,
                            realized: c,
                            resolution: samples as u32,
                        }),
                        Err(e) => Err(e),
                    }
                }
                _ => samples *= 2,
            }
        }
    }
}

/// One uniform sample with its crossing count.
pub fn random_spherical(n: usize, seed: u64) -> Result<(SphericalDrawing, u64)> {
    if n < 4 {
        return Err(Error::Domain(format!("random_spherical needs n >= 4, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SphericalDrawing::sample(n, &mut rng)
}

const BATCH: usize = 1000;

/// Mean crossing count over `samples` independent drawings. Batches run in
/// parallel with seeds derived from `seed` and the batch index, so the result
/// does not depend on scheduling.
pub fn sample_mean_crossings(n: usize, samples: usize, seed: u64) -> Result<f64> {
    if n < 4 || samples == 0 {
        return Err(Error::Domain("need n >= 4 and at least one sample".into()));
    }
    let batches = samples.div_ceil(BATCH);
    let totals: Result<Vec<u64>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let size = BATCH.min(samples - b * BATCH);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (b as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let mut sum = 0;
            for _ in 0..size {
                sum += SphericalDrawing::sample(n, &mut rng)?.1;
            }
            Ok(sum)
        })
        .collect();
    Ok(totals?.iter().sum::<u64>() as f64 / samples as f64)
}
