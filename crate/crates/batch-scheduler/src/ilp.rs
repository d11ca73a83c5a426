//! Exhaustive oracle for the batch-scheduling integer program.
//!
//! The program assigns `X_{mk}` effective pulls of each arm `k` to each
//! agent `m` with `sum_m X_{mk} = 4^i`, and minimizes the latest agent end
//! time `max_m sum_k (alpha_m [X_{mk} > 0] + X_{mk})`. This module finds
//! the exact minimum by depth-first search over per-arm compositions with
//! branch-and-bound pruning, and refuses instances beyond a small guard so
//! it stays an oracle rather than a solver.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error(
        "oracle guard: instance (M={m}, K={k}, 4^i={pulls}) exceeds M<=3, K<=4, 4^i<=16"
    )]
    InstanceTooLarge { m: usize, k: usize, pulls: u64 },
    #[error("oracle needs at least one agent and one arm")]
    Empty,
}

/// Exact minimum end time over all integral pull splits. Tiny instances
/// only (`M <= 3`, `K <= 4`, `4^i <= 16`).
pub fn ilp_optimum(alphas: &[u32], k: usize, i: u32) -> Result<u64, OracleError> {
    let m = alphas.len();
    let pulls = 4u64.pow(i);
    if m == 0 || k == 0 {
        return Err(OracleError::Empty);
    }
    if m > 3 || k > 4 || pulls > 16 {
        return Err(OracleError::InstanceTooLarge { m, k, pulls });
    }
    let alphas: Vec<u64> = alphas.iter().map(|&a| u64::from(a)).collect();

    // Feasible incumbent: whole arms placed greedily on the least-loaded
    // agent (counting the repetition charge).
    let mut loads = vec![0u64; m];
    for _ in 0..k {
        let best = (0..m)
            .min_by_key(|&j| loads[j] + alphas[j] + pulls)
            .expect("at least one agent");
        loads[best] += alphas[best] + pulls;
    }
    let mut best = *loads.iter().max().expect("non-empty");

    let comps = compositions(pulls, m);
    let mut loads = vec![0u64; m];
    dfs(&comps, &alphas, k, &mut loads, &mut best);
    Ok(best)
}

/// All ways of writing `total` as an ordered sum of `m` non-negative parts.
fn compositions(total: u64, m: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut current = vec![0u64; m];
    fill(total, 0, &mut current, &mut out);
    out
}

fn fill(remaining: u64, idx: usize, current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if idx + 1 == current.len() {
        current[idx] = remaining;
        out.push(current.clone());
        return;
    }
    for x in 0..=remaining {
        current[idx] = x;
        fill(remaining - x, idx + 1, current, out);
    }
}

fn dfs(
    comps: &[Vec<u64>],
    alphas: &[u64],
    arms_left: usize,
    loads: &mut Vec<u64>,
    best: &mut u64,
) {
    let current_max = *loads.iter().max().expect("non-empty");
    if current_max >= *best {
        return; // cannot improve
    }
    if arms_left == 0 {
        *best = current_max;
        return;
    }
    for comp in comps {
        for (j, &x) in comp.iter().enumerate() {
            if x > 0 {
                loads[j] += alphas[j] + x;
            }
        }
        dfs(comps, alphas, arms_left - 1, loads, best);
        for (j, &x) in comp.iter().enumerate() {
            if x > 0 {
                loads[j] -= alphas[j] + x;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp_end_time;

    #[test]
    fn symmetric_zero_delay_case() {
        assert_eq!(ilp_optimum(&[0, 0], 2, 1).unwrap(), 4);
    }

    #[test]
    fn asymmetric_split_example() {
        // One whole arm on the fast agent plus a 1/3 split of the other:
        // max(0*2 + 4 + 1, 2 + 3) = 5, and the LP bound 4.8 rounds to 5.
        assert_eq!(ilp_optimum(&[0, 2], 2, 1).unwrap(), 5);
    }

    #[test]
    fn huge_alphas_make_balanced_splitting_best() {
        // Splitting pays both repetition charges but halves the pulls:
        // (4,0) gives 104, (2,2) gives 102.
        assert_eq!(ilp_optimum(&[100, 100], 1, 1).unwrap(), 102);
    }

    #[test]
    fn guard_refuses_large_instances() {
        assert!(matches!(
            ilp_optimum(&[0; 4], 2, 1),
            Err(OracleError::InstanceTooLarge { .. })
        ));
        assert!(ilp_optimum(&[0; 2], 5, 1).is_err());
        assert!(ilp_optimum(&[0; 2], 2, 3).is_err());
    }

    #[test]
    fn lp_lower_bounds_ilp_on_a_grid() {
        for m in 1..=3usize {
            for k in 1..=4usize {
                for a0 in [0u32, 1, 2, 4] {
                    for a1 in [0u32, 1, 2, 4] {
                        let mut alphas = vec![a0; m];
                        if m > 1 {
                            alphas[m - 1] = a0.max(a1);
                        }
                        let opt = ilp_optimum(&alphas, k, 1).unwrap();
                        let lp = lp_end_time(&alphas, k, 1);
                        assert!(
                            lp <= opt as f64 + 1e-9,
                            "lp {lp} > ilp {opt} for alphas {alphas:?} k {k}"
                        );
                    }
                }
            }
        }
    }

    /// Independent route: plain cartesian enumeration without pruning.
    fn brute_force(alphas: &[u64], k: usize, pulls: u64) -> u64 {
        let comps = compositions(pulls, alphas.len());
        let mut best = u64::MAX;
        let mut stack = vec![0usize; k];
        loop {
            let mut loads = vec![0u64; alphas.len()];
            for &c in &stack {
                for (j, &x) in comps[c].iter().enumerate() {
                    if x > 0 {
                        loads[j] += alphas[j] + x;
                    }
                }
            }
            best = best.min(*loads.iter().max().unwrap());
            // odometer increment
            let mut pos = 0;
            loop {
                if pos == k {
                    return best;
                }
                stack[pos] += 1;
                if stack[pos] < comps.len() {
                    break;
                }
                stack[pos] = 0;
                pos += 1;
            }
        }
    }

    #[test]
    fn pruned_search_matches_plain_enumeration() {
        for alphas in [vec![0u32, 3], vec![1, 1], vec![0, 2, 5], vec![4, 4, 4]] {
            for k in 1..=3usize {
                let expect = brute_force(
                    &alphas.iter().map(|&a| u64::from(a)).collect::<Vec<_>>(),
                    k,
                    4,
                );
                assert_eq!(ilp_optimum(&alphas, k, 1).unwrap(), expect, "{alphas:?} k={k}");
            }
        }
    }
}
