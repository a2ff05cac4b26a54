//! Deterministic parallel scans over grid points and grid pairs.
//!
//! Workers evaluate independently; the reported witness is always the
//! lexicographically first failing index (pair), whatever the schedule.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Above this many ordered pairs, pair scans switch to a seeded subsample.
pub const PAIR_CAP: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Check {
    /// Premise does not hold; the pair is not counted.
    Skip,
    /// Checked and held; carries the observed deviation.
    Ok(f64),
    /// Checked and violated; carries the observed deviation.
    Fail(f64),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub(crate) struct Scan {
    pub tested: u64,
    pub max_error: f64,
    pub first_failure: Option<(usize, usize)>,
    pub sampled: bool,
}

#[derive(Default)]
struct Partial {
    tested: u64,
    max_error: f64,
    first: Option<(usize, usize)>,
}

impl Partial {
    fn record(&mut self, c: Check, at: (usize, usize)) {
        match c {
            Check::Skip => {}
            Check::Ok(e) => {
                self.tested += 1;
                self.max_error = self.max_error.max(e);
            }
            Check::Fail(e) => {
                self.tested += 1;
                self.max_error = self.max_error.max(e);
                if self.first.is_none_or(|f| at < f) {
                    self.first = Some(at);
                }
            }
        }
    }

    fn merge(mut self, other: Partial) -> Partial {
        self.tested += other.tested;
        self.max_error = self.max_error.max(other.max_error);
        self.first = match (self.first, other.first) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self
    }

    fn finish(self, sampled: bool) -> Scan {
        Scan {
            tested: self.tested,
            max_error: self.max_error,
            first_failure: self.first,
            sampled,
        }
    }
}

/// Applies `check` to every index in `0..count`. Failures report `(i, i)`.
pub(crate) fn points<F>(count: usize, check: F) -> Scan
where
    F: Fn(usize) -> Check + Sync,
{
    (0..count)
        .into_par_iter()
        .fold(Partial::default, |mut acc, i| {
            acc.record(check(i), (i, i));
            acc
        })
        .reduce(Partial::default, Partial::merge)
        .finish(false)
}

/// Applies `check` to every ordered pair over `0..count`, or to a seeded
/// sorted subsample of [`PAIR_CAP`] pairs when the full set is larger.
pub(crate) fn pairs<F>(count: usize, seed: u64, check: F) -> Scan
where
    F: Fn(usize, usize) -> Check + Sync,
{
    let total = (count as u64) * (count as u64);
    if total <= PAIR_CAP {
        return (0..count)
            .into_par_iter()
            .fold(Partial::default, |mut acc, i| {
                for j in 0..count {
                    acc.record(check(i, j), (i, j));
                }
                acc
            })
            .reduce(Partial::default, Partial::merge)
            .finish(false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample: Vec<(usize, usize)> = (0..PAIR_CAP)
        .map(|_| (rng.gen_range(0..count), rng.gen_range(0..count)))
        .collect();
    sample.sort_unstable();
    sample.dedup();
    sample
        .par_iter()
        .fold(Partial::default, |mut acc, &(i, j)| {
            acc.record(check(i, j), (i, j));
            acc
        })
        .reduce(Partial::default, Partial::merge)
        .finish(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_failure_is_lexicographic() {
        let scan = pairs(50, 0, |i, j| {
            if (i + j) % 17 == 0 && i > 3 {
                Check::Fail(1.0)
            } else {
                Check::Ok(0.0)
            }
        });
        assert_eq!(scan.first_failure, Some((4, 13)));
        assert_eq!(scan.tested, 2500);
        assert!(!scan.sampled);
    }

    #[test]
    fn skipped_pairs_are_not_counted() {
        let scan = pairs(10, 0, |i, j| if i < j { Check::Ok(0.5) } else { Check::Skip });
        assert_eq!(scan.tested, 45);
        assert_eq!(scan.max_error, 0.5);
        assert_eq!(scan.first_failure, None);
    }

    #[test]
    fn large_pair_sets_are_sampled_deterministically() {
        let a = pairs(2000, 9, |i, j| if i == j { Check::Fail(0.0) } else { Check::Ok(0.0) });
        let b = pairs(2000, 9, |i, j| if i == j { Check::Fail(0.0) } else { Check::Ok(0.0) });
        assert!(a.sampled);
        assert_eq!(a, b);
    }
}
