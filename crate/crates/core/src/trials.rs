//! Seeded, order-independent execution of Monte Carlo trials.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::mix;

/// Seed of trial `index` under `master_seed`.
pub fn trial_seed(master_seed: u64, index: u64) -> u64 {
    mix(master_seed, index)
}

/// Runs `f(index, seed)` for every trial on the current rayon pool and
/// returns results in trial order. The first failing trial (lowest index)
/// aborts the run.
pub fn run_trials<T, F>(count: u64, master_seed: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, u64) -> Result<T> + Sync + Send,
{
    let results: Vec<Result<T>> =
        (0..count).into_par_iter().map(|i| f(i, trial_seed(master_seed, i))).collect();
    results
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            r.map_err(|e| Error::TrialFailed { trial: i as u64, seed: trial_seed(master_seed, i as u64), source: Box::new(e) })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_and_deterministic() {
        let a = run_trials(100, 9, |i, s| Ok((i, s))).unwrap();
        let b = run_trials(100, 9, |i, s| Ok((i, s))).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().enumerate().all(|(i, &(j, _))| i as u64 == j));
    }

    #[test]
    fn first_failure_reported() {
        let err = run_trials(50, 1, |i, _| if i % 7 == 3 { Err(Error::Edgeless) } else { Ok(i) }).unwrap_err();
        match err {
            Error::TrialFailed { trial, seed, .. } => {
                assert_eq!(trial, 3);
                assert_eq!(seed, trial_seed(1, 3));
            }
            other => panic!("{other:?}"),
        }
    }
}
