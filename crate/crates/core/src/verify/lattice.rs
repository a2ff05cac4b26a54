//! Exhaustive lattice checks on simplex grids.

use std::time::Instant;

use serde_json::json;

use crate::simplex::{simplex_point_count, SimplexGrid};

use super::scan::{self, Check};
use super::PropertyReport;

fn grid(n: usize, m: usize) -> SimplexGrid<f64> {
    SimplexGrid::new(n.max(1), m.max(2)).expect("valid grid parameters")
}

fn leq(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn join(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x.max(*y)).collect()
}

fn meet(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x.min(*y)).collect()
}

fn degenerate(a: &[f64]) -> bool {
    a.windows(2).all(|w| w[0] == w[1])
}

/// Reflexivity, antisymmetry and transitivity of `≤` over all points, pairs
/// and triples of the grid.
pub fn partial_order(n: usize, m: usize) -> PropertyReport {
    let start = Instant::now();
    let g = grid(n, m);
    let pts = g.points();
    let count = pts.len();
    let failing_c = |a: usize, b: usize| -> Option<usize> {
        let (x, y) = (pts[a].values(), pts[b].values());
        if a == b && !leq(x, x) {
            return Some(a);
        }
        if leq(x, y) && leq(y, x) && x != y {
            return Some(b);
        }
        if leq(x, y) {
            return (0..count).find(|&c| leq(y, pts[c].values()) && !leq(x, pts[c].values()));
        }
        None
    };
    let s = scan::pairs(count, 0, |a, b| match failing_c(a, b) {
        Some(_) => Check::Fail(1.0),
        None => Check::Ok(0.0),
    });
    PropertyReport::new("lattice.partial_order", n, m, 0.0)
        .absorb(&s, |a, b| {
            json!({"x": pts[a], "y": pts[b], "z": failing_c(a, b).map(|c| &pts[c])})
        })
        .timed(start)
}

/// Join and meet are the least upper and greatest lower bounds.
pub fn join_meet(n: usize, m: usize) -> PropertyReport {
    let start = Instant::now();
    let g = grid(n, m);
    let pts = g.points();
    let failure = |a: usize, b: usize| -> Option<serde_json::Value> {
        let (x, y) = (pts[a].values(), pts[b].values());
        let (j, w) = (join(x, y), meet(x, y));
        if !(leq(x, &j) && leq(y, &j) && leq(&w, x) && leq(&w, y)) {
            return Some(json!({"reason": "not a bound", "join": j, "meet": w}));
        }
        if j.windows(2).any(|p| p[0] > p[1]) || w.windows(2).any(|p| p[0] > p[1]) {
            return Some(json!({"reason": "bound leaves L_n", "join": j, "meet": w}));
        }
        for z in pts {
            let z = z.values();
            if leq(x, z) && leq(y, z) && !leq(&j, z) {
                return Some(json!({"reason": "join not least", "join": j, "z": z}));
            }
            if leq(z, x) && leq(z, y) && !leq(z, &w) {
                return Some(json!({"reason": "meet not greatest", "meet": w, "z": z}));
            }
        }
        None
    };
    let s = scan::pairs(pts.len(), 0, |a, b| {
        if failure(a, b).is_some() {
            Check::Fail(1.0)
        } else {
            Check::Ok(0.0)
        }
    });
    PropertyReport::new("lattice.join_meet", n, m, 0.0)
        .absorb(&s, |a, b| json!({"x": pts[a], "y": pts[b], "detail": failure(a, b)}))
        .timed(start)
}

/// A degenerate join (meet) of two elements is one of them.
pub fn degenerate_dichotomy(n: usize, m: usize) -> PropertyReport {
    let start = Instant::now();
    let g = grid(n, m);
    let pts = g.points();
    let s = scan::pairs(pts.len(), 0, |a, b| {
        let (x, y) = (pts[a].values(), pts[b].values());
        let (j, w) = (join(x, y), meet(x, y));
        let premise = degenerate(&j) || degenerate(&w);
        if !premise {
            return Check::Skip;
        }
        let join_ok = !degenerate(&j) || j == x || j == y;
        let meet_ok = !degenerate(&w) || w == x || w == y;
        if join_ok && meet_ok {
            Check::Ok(0.0)
        } else {
            Check::Fail(1.0)
        }
    });
    PropertyReport::new("lattice.degenerate_dichotomy", n, m, 0.0)
        .absorb(&s, |a, b| {
            let (x, y) = (pts[a].values(), pts[b].values());
            json!({"x": x, "y": y, "join": join(x, y), "meet": meet(x, y)})
        })
        .timed(start)
}

/// `x ⊆_i y` and `y ⊆_i x` force equal projections `i` and `i+1`.
pub fn subset_antisymmetry(n: usize, m: usize) -> PropertyReport {
    let start = Instant::now();
    let g = grid(n, m);
    let pts = g.points();
    let s = scan::pairs(pts.len(), 0, |a, b| {
        let (x, y) = (&pts[a], &pts[b]);
        let mut premise = false;
        for i in 1..n {
            let both = x.subset_i(y, i).unwrap_or(false) && y.subset_i(x, i).unwrap_or(false);
            if both {
                premise = true;
                let (xv, yv) = (x.values(), y.values());
                if xv[i - 1] != yv[i - 1] || xv[i] != yv[i] {
                    return Check::Fail(1.0);
                }
            }
        }
        if premise {
            Check::Ok(0.0)
        } else {
            Check::Skip
        }
    });
    PropertyReport::new("lattice.subset_antisymmetry", n, m, 0.0)
        .absorb(&s, |a, b| json!({"x": pts[a], "y": pts[b]}))
        .timed(start)
}

/// Grid size equals `binomial(m+n−1, n)` and enumeration is strictly lexicographic.
pub fn grid_census(n: usize, m: usize) -> PropertyReport {
    let start = Instant::now();
    let g = grid(n, m);
    let expected = simplex_point_count(n, m);
    let sorted = g.points().windows(2).all(|w| {
        w[0].values()
            .partial_cmp(w[1].values())
            .is_some_and(|o| o.is_lt())
    });
    let mut r = PropertyReport::new("lattice.grid_census", n, m, 0.0);
    r.pairs_tested = g.len() as u64;
    if g.len() as u128 == expected && sorted {
        r.timed(start)
    } else {
        r.fail(json!({"points": g.len(), "expected": expected.to_string(), "lexicographic": sorted}))
            .timed(start)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grids_satisfy_the_lattice_axioms() {
        for (n, m) in [(1, 6), (2, 5), (3, 4)] {
            for r in [
                partial_order(n, m),
                join_meet(n, m),
                degenerate_dichotomy(n, m),
                subset_antisymmetry(n, m),
                grid_census(n, m),
            ] {
                assert!(r.passed(), "{r:?}");
            }
        }
    }
}
