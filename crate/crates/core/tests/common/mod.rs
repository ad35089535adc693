#![allow(dead_code)]

use imdd_ic::geometry::RatePair;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn p(r1: f64, r2: f64) -> RatePair {
    RatePair::new(r1, r2)
}

pub fn cross(o: RatePair, a: RatePair, b: RatePair) -> f64 {
    (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1)
}

pub fn closure(points: &[RatePair]) -> Vec<RatePair> {
    let mut s = vec![p(0.0, 0.0)];
    for q in points {
        s.extend([*q, p(q.r1, 0.0), p(0.0, q.r2)]);
    }
    let mut out: Vec<RatePair> = Vec::new();
    for q in s {
        if !out.iter().any(|o| (o.r1 - q.r1).abs() <= 1e-12 && (o.r2 - q.r2).abs() <= 1e-12) {
            out.push(q);
        }
    }
    out
}

/// Hull vertices by brute force: (a, b) is an edge when every other point is
/// on its left or on the segment itself. Returns vertices walked
/// counterclockwise from the origin.
pub fn brute_hull(points: &[RatePair]) -> Vec<RatePair> {
    let s = closure(points);
    if s.len() == 1 {
        return s;
    }
    let mut next = vec![None; s.len()];
    for (i, &a) in s.iter().enumerate() {
        for (j, &b) in s.iter().enumerate() {
            if i == j {
                continue;
            }
            let len2 = (b.r1 - a.r1).powi(2) + (b.r2 - a.r2).powi(2);
            let edge = s.iter().enumerate().all(|(k, &c)| {
                if k == i || k == j {
                    return true;
                }
                let x = cross(a, b, c);
                if x.abs() <= 1e-12 {
                    let t = ((c.r1 - a.r1) * (b.r1 - a.r1) + (c.r2 - a.r2) * (b.r2 - a.r2)) / len2;
                    (0.0..=1.0).contains(&t)
                } else {
                    x > 0.0
                }
            });
            if edge {
                next[i] = Some(j);
            }
        }
    }
    let start = s.iter().position(|q| q.r1 == 0.0 && q.r2 == 0.0).unwrap();
    let mut out = vec![s[start]];
    let mut at = next[start].expect("origin lies on the hull");
    while at != start {
        out.push(s[at]);
        at = next[at].expect("hull is closed");
        assert!(out.len() <= s.len());
    }
    out
}

/// Inside the closure's hull iff inside some triangle of its points.
pub fn brute_contains(points: &[RatePair], q: RatePair, tol: f64) -> bool {
    let s = closure(points);
    if s.len() < 3 {
        return s.iter().any(|c| (c.r1 - q.r1).abs() <= tol && (c.r2 - q.r2).abs() <= tol)
            || (s.len() == 2 && {
                let (a, b) = (s[0], s[1]);
                let len = ((b.r1 - a.r1).powi(2) + (b.r2 - a.r2).powi(2)).sqrt();
                let t = ((q.r1 - a.r1) * (b.r1 - a.r1) + (q.r2 - a.r2) * (b.r2 - a.r2)) / (len * len);
                cross(a, b, q).abs() <= tol * len && (-1e-12..=1.0 + 1e-12).contains(&t)
            });
    }
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            for k in j + 1..s.len() {
                let (a, b, c) = (s[i], s[j], s[k]);
                let area = cross(a, b, c);
                if area.abs() < 1e-12 {
                    continue;
                }
                let sign = area.signum();
                let edge = |u: RatePair, v: RatePair| {
                    let len = ((v.r1 - u.r1).powi(2) + (v.r2 - u.r2).powi(2)).sqrt();
                    sign * cross(u, v, q) >= -tol * len
                };
                if edge(a, b) && edge(b, c) && edge(c, a) {
                    return true;
                }
            }
        }
    }
    false
}

pub fn random_points(rng: &mut ChaCha8Rng, n: usize, snap: bool) -> Vec<RatePair> {
    (0..n)
        .map(|_| {
            let (a, b) = (rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0));
            if snap {
                p(f64::round(a), f64::round(b))
            } else {
                p(a, b)
            }
        })
        .collect()
}
