//! Closed-form end-time bounds for one batch.

/// LP-relaxation lower bound on the batch end time:
/// `4^i K / sum_m 1/(alpha_m/4^i + 1)`.
///
/// Fractional pulls amortize the repetition cost, so one effective pull on
/// agent `m` costs `alpha_m/4^i + 1` rounds and the optimum loads every
/// agent equally.
pub fn lp_end_time(alphas: &[u32], k: usize, i: u32) -> f64 {
    let p4 = 4f64.powi(i as i32);
    let denom: f64 = alphas
        .iter()
        .map(|&a| 1.0 / (f64::from(a) / p4 + 1.0))
        .sum();
    p4 * k as f64 / denom
}

/// Upper bound on the end time of the two-stage scheduler:
/// `K 4^i tau' + 6 (sum_m alpha_m / M + 2 K 4^i / M)` with
/// `tau' = 1 / sum_m 1/(alpha_m/4^i + 1)`. The first term equals
/// [`lp_end_time`], so the bound always dominates it.
pub fn schedule_end_time_bound(alphas: &[u32], k: usize, i: u32) -> f64 {
    let m = alphas.len() as f64;
    let k4 = k as f64 * 4f64.powi(i as i32);
    let alpha_sum: f64 = alphas.iter().map(|&a| f64::from(a)).sum();
    lp_end_time(alphas, k, i) + 6.0 * (alpha_sum / m + 2.0 * k4 / m)
}

/// End time of the direct LP-rounding scheduler: the LP optimum plus a
/// `max(2 alpha_{M-1}, alpha_M)` slack that makes the fractional solution
/// feasible. Reference formula for comparison plots only.
pub fn lp_rounding_end_time(alphas: &[u32], k: usize, i: u32) -> f64 {
    let slack = match alphas.len() {
        0 => 0.0,
        1 => f64::from(alphas[0]),
        m => f64::from(2 * alphas[m - 2]).max(f64::from(alphas[m - 1])),
    };
    lp_end_time(alphas, k, i) + slack
}

/// Exact test of `x <= tau` for integer `x`, where
/// `tau = K / sum_m 1/(alpha_m + 4^i)` is the stage-1 budget.
///
/// Equivalent to `sum_m x/costs[m] <= K` with `costs[m] = alpha_m + 4^i`.
/// Computed in integer arithmetic over a common multiple of the costs so
/// exact-fit cases (e.g. a single agent packing all K arms) never fall on
/// the wrong side of a floating-point boundary; falls back to f64 with a
/// tie-tolerant epsilon if the common multiple overflows u128.
pub fn fits_within_budget(x: u64, costs: &[u64], k: u64) -> bool {
    if let Some(lcm) = common_multiple(costs) {
        let mut lhs: u128 = 0;
        for &c in costs {
            let term = (x as u128).checked_mul(lcm / c as u128);
            match term.and_then(|t| lhs.checked_add(t)) {
                Some(sum) => lhs = sum,
                None => return fits_within_budget_f64(x, costs, k),
            }
        }
        match (k as u128).checked_mul(lcm) {
            Some(rhs) => lhs <= rhs,
            None => fits_within_budget_f64(x, costs, k),
        }
    } else {
        fits_within_budget_f64(x, costs, k)
    }
}

fn fits_within_budget_f64(x: u64, costs: &[u64], k: u64) -> bool {
    let lhs: f64 = costs.iter().map(|&c| x as f64 / c as f64).sum();
    lhs <= k as f64 * (1.0 + 1e-12)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn common_multiple(costs: &[u64]) -> Option<u128> {
    let mut lcm: u128 = 1;
    for &c in costs {
        debug_assert!(c > 0);
        let c = c as u128;
        lcm = lcm.checked_mul(c / gcd(lcm, c))?;
    }
    Some(lcm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lp_end_time_hand_values() {
        assert_eq!(lp_end_time(&[0, 0], 2, 1), 4.0);
        assert_eq!(lp_end_time(&[4, 4], 2, 1), 8.0);
        assert!((lp_end_time(&[0, 2], 2, 1) - 4.8).abs() < 1e-12);
    }

    #[test]
    fn end_time_bound_hand_values() {
        // K 4^i tau' = lp_end_time; the additive term is 6(mean alpha + 2K 4^i/M).
        let b = schedule_end_time_bound(&[0, 0], 2, 1);
        assert!((b - (4.0 + 6.0 * (0.0 + 8.0))).abs() < 1e-12, "got {b}");
        // K = M, all alphas zero: 4 + 48 independent of M.
        for m in [2usize, 4, 8, 16] {
            let alphas = vec![0; m];
            let b = schedule_end_time_bound(&alphas, m, 1);
            assert!((b - 52.0).abs() < 1e-9, "M={m} gave {b}");
        }
    }

    #[test]
    fn normalized_tau_matches_lp_quantity() {
        // The end-time bound's tau is the LP quantity divided by K 4^i.
        for (alphas, k, i) in [
            (vec![0u32, 2, 7], 3usize, 1u32),
            (vec![1, 1, 1, 9], 5, 2),
            (vec![3], 4, 1),
        ] {
            let p4 = 4f64.powi(i as i32);
            let tau_prime: f64 =
                1.0 / alphas.iter().map(|&a| 1.0 / (f64::from(a) / p4 + 1.0)).sum::<f64>();
            let lhs = k as f64 * p4 * tau_prime;
            let rhs = lp_end_time(&alphas, k, i);
            assert!((lhs - rhs).abs() < 1e-9 * rhs.max(1.0));
        }
    }

    #[test]
    fn lp_rounding_adds_the_feasibility_slack() {
        let lp = lp_end_time(&[0, 2, 5], 3, 1);
        assert_eq!(lp_rounding_end_time(&[0, 2, 5], 3, 1), lp + 5.0);
        let lp = lp_end_time(&[0, 4, 5], 3, 1);
        assert_eq!(lp_rounding_end_time(&[0, 4, 5], 3, 1), lp + 8.0);
        let lp = lp_end_time(&[7], 2, 1);
        assert_eq!(lp_rounding_end_time(&[7], 2, 1), lp + 7.0);
    }

    #[test]
    fn exact_budget_handles_single_agent_exact_fit() {
        // tau = K (alpha + 4^i) exactly; all K arms must fit.
        for (alpha, k, i) in [(3u64, 7u64, 1u32), (0, 5, 2), (11, 32, 3)] {
            let cost = alpha + 4u64.pow(i);
            assert!(fits_within_budget(k * cost, &[cost], k));
            assert!(!fits_within_budget(k * cost + 1, &[cost], k));
        }
    }

    #[test]
    fn exact_budget_matches_f64_away_from_boundaries() {
        let costs = [5u64, 9, 17, 101];
        let k = 6;
        let tau = k as f64 / costs.iter().map(|&c| 1.0 / c as f64).sum::<f64>();
        for x in 0..200u64 {
            if ((x as f64) - tau).abs() > 1e-6 {
                assert_eq!(fits_within_budget(x, &costs, k), (x as f64) <= tau, "x={x}");
            }
        }
    }

    proptest! {
        #[test]
        fn lp_is_monotone_in_alpha_and_linear_in_k(
            mut alphas in proptest::collection::vec(0u32..50, 1..8),
            k in 1usize..20,
            i in 1u32..4,
            bump in 1u32..10,
            which in 0usize..8,
        ) {
            alphas.sort_unstable();
            let base = lp_end_time(&alphas, k, i);
            let mut bumped = alphas.clone();
            let idx = which % alphas.len();
            bumped[idx] += bump;
            prop_assert!(lp_end_time(&bumped, k, i) >= base - 1e-12);
            let doubled = lp_end_time(&alphas, 2 * k, i);
            prop_assert!((doubled - 2.0 * base).abs() < 1e-9 * doubled.max(1.0));
        }

        #[test]
        fn end_time_bound_dominates_lp(
            mut alphas in proptest::collection::vec(0u32..50, 1..8),
            k in 1usize..20,
            i in 1u32..4,
        ) {
            alphas.sort_unstable();
            prop_assert!(schedule_end_time_bound(&alphas, k, i) >= lp_end_time(&alphas, k, i));
        }
    }
}
