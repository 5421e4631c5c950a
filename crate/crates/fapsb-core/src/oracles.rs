//! Brute-force validation oracles. Each builds the object under test from
//! first principles (explicit matrices, direct simulation, exhaustive
//! enumeration) so the analytical implementations can be checked against an
//! independent route.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stationary distribution of the payload/ack retry chain, computed from
/// the explicitly constructed embedded transition matrix.
///
/// State order: payload attempts 0..=M, payload-BA 0..=M, ack attempts
/// 0..=M, ack-BA 0..=M. Transitions: a data state moves to its BA state on
/// success and to the next retry on failure; a BA state moves to the other
/// side's first attempt on success and to the next retry on failure; after
/// the M-th retry the segment is resent from scratch.
pub fn chain_stationary_bruteforce(p_p: f64, p_a: f64, p_ack: f64, m_max: u32) -> Vec<f64> {
    let m = m_max as usize;
    let n = 4 * (m + 1);
    let pay = |i: usize| i;
    let pay_ba = |i: usize| (m + 1) + i;
    let ack = |i: usize| 2 * (m + 1) + i;
    let ack_ba = |i: usize| 3 * (m + 1) + i;

    let mut t = vec![vec![0.0f64; n]; n];
    for i in 0..=m {
        let next_pay = if i < m { pay(i + 1) } else { pay(0) };
        t[pay(i)][pay_ba(i)] = 1.0 - p_p;
        t[pay(i)][next_pay] = p_p;
        t[pay_ba(i)][ack(0)] += 1.0 - p_a;
        t[pay_ba(i)][next_pay] += p_a;

        let next_ack = if i < m { ack(i + 1) } else { ack(0) };
        t[ack(i)][ack_ba(i)] = 1.0 - p_ack;
        t[ack(i)][next_ack] = p_ack;
        t[ack_ba(i)][pay(0)] += 1.0 - p_a;
        t[ack_ba(i)][next_ack] += p_a;
    }

    // Solve pi (T - I) = 0 with sum(pi) = 1: transpose into (T' - I) pi = 0
    // and replace the last row by the normalization.
    let mut a = vec![vec![0.0f64; n + 1]; n];
    for r in 0..n {
        for c in 0..n {
            a[r][c] = t[c][r] - if r == c { 1.0 } else { 0.0 };
        }
    }
    for c in 0..n {
        a[n - 1][c] = 1.0;
    }
    a[n - 1][n] = 1.0;
    solve_dense(a)
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn solve_dense(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        let p = a[col][col];
        assert!(p.abs() > 1e-14, "singular system");
        for c in col..=n {
            a[col][c] /= p;
        }
        for r in 0..n {
            if r != col && a[r][col] != 0.0 {
                let f = a[r][col];
                for c in col..=n {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    (0..n).map(|r| a[r][n]).collect()
}

/// Monte-Carlo run of the sequential LoS-subdivision process: keep adding
/// relays until every sub-link of the evenly divided link has line of
/// sight, drawing each sub-link's LoS state independently at that stage's
/// length. Returns the mean relay count.
pub fn relay_count_monte_carlo(
    p_los_at: impl Fn(f64) -> f64,
    link_distance_m: f64,
    trials: u32,
    r_hard_cap: u32,
    seed: u64,
) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0u64;
    for _ in 0..trials {
        let mut r = 0u32;
        loop {
            let q = p_los_at(link_distance_m / (r + 1) as f64).clamp(0.0, 1.0);
            let all_los = (0..=r).all(|_| rng.gen::<f64>() < q);
            if all_los || r >= r_hard_cap {
                break;
            }
            r += 1;
        }
        total += r as u64;
    }
    total as f64 / trials as f64
}
