//! Good-event diagnostics.
//!
//! The good event requires that no agent ever sees `alpha_m` consecutive
//! erasures; any such window can break the attribution of effective pulls.

/// Counts violation windows: pairs `(agent, t)` such that the `alpha_m`
/// sends starting at `t` were all erased. Overlapping windows each count.
/// `traces[m][t]` is true when agent `m`'s send at round `t` was erased.
///
/// Agents with `alpha_m = 0` run no repetition protocol and contribute no
/// windows.
pub fn good_event_violations(traces: &[Vec<bool>], alphas: &[u32]) -> u64 {
    assert_eq!(traces.len(), alphas.len(), "one trace per agent");
    let mut violations = 0u64;
    for (trace, &alpha) in traces.iter().zip(alphas) {
        if alpha == 0 {
            continue;
        }
        let mut run = 0u32;
        for &erased in trace {
            run = if erased { run + 1 } else { 0 };
            violations += violation_windows_in_run(run, alpha);
        }
    }
    violations
}

/// Incremental form: given the consecutive-erasure run length after a
/// round, the number of new violation windows that round completes (0 or
/// 1). Summing this per round reproduces [`good_event_violations`].
pub fn violation_windows_in_run(run_length: u32, alpha: u32) -> u64 {
    u64::from(alpha >= 1 && run_length >= alpha)
}
