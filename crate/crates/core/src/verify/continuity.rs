//! Sampling heuristic for jumps.
//!
//! `F` is evaluated through `sort_to_simplex` on nested cube grids of
//! resolution `m, 2m−1, 4m−3, …`. For each level the largest sup-norm
//! variation between axis neighbours is recorded. A continuous map sees this
//! variation shrink with the mesh; a jump keeps it roughly constant. A jump is
//! suspected when every consecutive ratio stays above [`RATIO_THRESHOLD`].

use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use crate::simplex::unit_grid;

use super::PropertyReport;

pub const DEFAULT_LEVELS: usize = 3;
pub const RATIO_THRESHOLD: f64 = 0.9;

/// Variations below this are treated as constant behaviour, not as a jump.
const FLAT: f64 = 1e-9;

/// Runs the refinement scan on an `n`-ary map `f`. `f` receives a
/// nondecreasing tuple and returns `None` where it cannot be evaluated.
pub fn discontinuity_scan<F>(n: usize, m: usize, levels: usize, f: F) -> PropertyReport
where
    F: Fn(&[f64]) -> Option<Vec<f64>> + Sync,
{
    let start = Instant::now();
    let m = m.max(2);
    let levels = levels.max(1);
    let mut variations = Vec::with_capacity(levels + 1);
    let mut argmax = Vec::with_capacity(levels + 1);
    let mut evaluated = 0u64;
    let mut res = m;
    for _ in 0..=levels {
        let (v, at, count) = level_variation(n, res, &f);
        variations.push(v);
        argmax.push(at);
        evaluated += count;
        res = 2 * res - 1;
    }
    let ratios: Vec<f64> = variations
        .windows(2)
        .map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 })
        .collect();
    let finest = variations[levels];
    let jump = finest > FLAT && ratios.iter().all(|&r| r > RATIO_THRESHOLD);
    let mut report = PropertyReport::new("continuity.heuristic", n, m, RATIO_THRESHOLD);
    report.pairs_tested = evaluated;
    report.max_error = finest;
    if jump {
        report = report
            .fail(json!({
                "suspected_jump_at": argmax[levels],
                "variation_per_level": variations,
                "ratios": ratios,
            }))
            .with_note("suspected jump");
    } else {
        report = report.with_note(format!(
            "no jump detected at resolution {} ({} refinements)",
            m, levels
        ));
    }
    report.timed(start)
}

/// Largest neighbour variation on the cube grid of resolution `m`, the
/// sorted point where it occurs, and the number of evaluations.
fn level_variation<F>(n: usize, m: usize, f: &F) -> (f64, Vec<f64>, u64)
where
    F: Fn(&[f64]) -> Option<Vec<f64>> + Sync,
{
    let coords = unit_grid::<f64>(m);
    let total = m.pow(n as u32);
    let point = |mut idx: usize| -> Vec<usize> {
        let mut digits = vec![0; n];
        for d in digits.iter_mut().rev() {
            *d = idx % m;
            idx /= m;
        }
        digits
    };
    let eval = |digits: &[usize]| -> Option<Vec<f64>> {
        let mut t: Vec<f64> = digits.iter().map(|&k| coords[k]).collect();
        t.sort_by(|a, b| a.partial_cmp(b).expect("grid coordinates are finite"));
        f(&t)
    };
    let values: Vec<Option<Vec<f64>>> = (0..total).into_par_iter().map(|i| eval(&point(i))).collect();
    let (best, at) = (0..total)
        .into_par_iter()
        .map(|i| {
            let Some(here) = &values[i] else { return (0.0, i) };
            let digits = point(i);
            let mut stride = 1;
            let mut worst = 0.0f64;
            for axis in (0..n).rev() {
                if digits[axis] + 1 < m {
                    if let Some(next) = &values[i + stride] {
                        let d = here
                            .iter()
                            .zip(next)
                            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
                        worst = worst.max(d);
                    }
                }
                stride *= m;
            }
            (worst, i)
        })
        .reduce(
            || (0.0, usize::MAX),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    let mut location: Vec<f64> = if at == usize::MAX {
        vec![0.0; n]
    } else {
        point(at).iter().map(|&k| coords[k]).collect()
    };
    location.sort_by(|a, b| a.partial_cmp(b).expect("grid coordinates are finite"));
    (best, location, total as u64)
}
