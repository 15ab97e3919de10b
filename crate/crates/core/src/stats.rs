//! Two-sample rank tests and multiple-comparison correction.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Largest combined sample size for which the exact null distribution is used.
pub const EXACT_MAX_TOTAL: usize = 20;

/// Smallest group size for which pairwise tests are reported.
pub const MIN_TEST_N: usize = 4;

/// How the p-value of a [`UTest`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PMethod {
    Exact,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UTest {
    /// `min(U_a, U_b)`.
    pub u: f64,
    /// Two-sided.
    pub p: f64,
    pub method: PMethod,
}

/// Midranks (1-based) of `values`, with tied values sharing their mean rank.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let rank = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Mann-Whitney U test, two-sided.
///
/// Uses the exact permutation distribution when the samples are tie-free and
/// `|a| + |b| <= 20`, and the tie-corrected normal approximation with
/// continuity correction otherwise.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<UTest> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    if pooled.iter().all(|&v| v == pooled[0]) {
        return Err(Error::DegenerateSamples);
    }
    let (n1, n2) = (a.len(), b.len());
    let ranks = midranks(&pooled);
    let rank_sum_a: f64 = ranks[..n1].iter().sum();
    let u_a = rank_sum_a - (n1 * (n1 + 1)) as f64 / 2.0;
    let u_b = (n1 * n2) as f64 - u_a;
    let u = u_a.min(u_b);

    let has_ties = tie_groups(&pooled).iter().any(|&t| t > 1);
    if !has_ties && n1 + n2 <= EXACT_MAX_TOTAL {
        let p = exact_p(u as usize, n1, n2);
        return Ok(UTest { u, p, method: PMethod::Exact });
    }
    Ok(UTest {
        u,
        p: normal_p(u, n1, n2, &pooled),
        method: PMethod::Normal,
    })
}

fn tie_groups(values: &[f64]) -> Vec<usize> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut groups = Vec::new();
    let mut count = 1;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            count += 1;
        } else {
            groups.push(count);
            count = 1;
        }
    }
    groups.push(count);
    groups
}

/// Number of ways each value of U arises when `n1` of `n1 + n2` distinct
/// ranks are assigned to the first sample. Index is U.
pub fn u_distribution(n1: usize, n2: usize) -> Vec<u64> {
    // table[i][j][u]: arrangements of i first-sample and j second-sample
    // items with statistic u. The largest item either belongs to the first
    // sample, beating all j others, or to the second, adding nothing.
    let max_u = n1 * n2;
    let mut table = vec![vec![vec![0u64; max_u + 1]; n2 + 1]; n1 + 1];
    for i in 0..=n1 {
        for j in 0..=n2 {
            if i == 0 || j == 0 {
                table[i][j][0] = 1;
                continue;
            }
            for u in 0..=i * j {
                let with_one = if u >= j { table[i - 1][j][u - j] } else { 0 };
                table[i][j][u] = with_one + table[i][j - 1][u];
            }
        }
    }
    table.swap_remove(n1).swap_remove(n2)
}

fn binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

fn exact_p(u: usize, n1: usize, n2: usize) -> f64 {
    let dist = u_distribution(n1, n2);
    let tail: u64 = dist[..=u].iter().sum();
    let total = binomial(n1 + n2, n1);
    (2.0 * tail as f64 / total as f64).min(1.0)
}

fn normal_p(u: f64, n1: usize, n2: usize, pooled: &[f64]) -> f64 {
    let (n1f, n2f) = (n1 as f64, n2 as f64);
    let n = n1f + n2f;
    let mean = n1f * n2f / 2.0;
    let tie_term: f64 = tie_groups(pooled)
        .iter()
        .map(|&t| {
            let t = t as f64;
            t * t * t - t
        })
        .sum();
    let var = n1f * n2f / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if var <= 0.0 {
        return 1.0;
    }
    let z = ((u - mean).abs() - 0.5).max(0.0) / var.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    (2.0 * normal.sf(z)).min(1.0)
}

/// Holm step-down adjustment, returned in the input order.
pub fn holm_correction(p: &[f64]) -> Vec<f64> {
    let m = p.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| p[i].total_cmp(&p[j]));
    let mut adjusted = vec![0.0; m];
    let mut running = 0.0f64;
    for (rank, &i) in order.iter().enumerate() {
        running = running.max(((m - rank) as f64 * p[i]).min(1.0));
        adjusted[i] = running;
    }
    adjusted
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_force_p(a: &[f64], b: &[f64]) -> f64 {
        // Every way of splitting the pooled values into groups of |a| and |b|.
        let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
        let n = pooled.len();
        let observed = u_of(a, b);
        let (mut hits, mut total) = (0u64, 0u64);
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != a.len() {
                continue;
            }
            let (x, y): (Vec<_>, Vec<_>) = (0..n).partition(|&i| mask & (1 << i) != 0);
            let x: Vec<f64> = x.iter().map(|&i| pooled[i]).collect();
            let y: Vec<f64> = y.iter().map(|&i| pooled[i]).collect();
            total += 1;
            if first_u(&x, &y) <= observed {
                hits += 1;
            }
        }
        (2.0 * hits as f64 / total as f64).min(1.0)
    }

    fn u_of(a: &[f64], b: &[f64]) -> f64 {
        let u_a = first_u(a, b);
        u_a.min((a.len() * b.len()) as f64 - u_a)
    }

    fn first_u(a: &[f64], b: &[f64]) -> f64 {
        let mut u_a: f64 = 0.0;
        for x in a {
            for y in b {
                if x > y {
                    u_a += 1.0;
                } else if x == y {
                    u_a += 0.5;
                }
            }
        }
        u_a
    }

    #[test]
    fn fully_separated_tens() {
        let a: Vec<f64> = (0..10).map(|i| 100.0 + i as f64).collect();
        let b: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let t = mann_whitney_u(&a, &b).unwrap();
        assert_eq!(t.u, 0.0);
        assert_eq!(t.method, PMethod::Exact);
        let expected = 2.0 / 184756.0;
        assert!((t.p - expected).abs() / expected < 1e-12);
    }

    #[test]
    fn two_by_two() {
        let t = mann_whitney_u(&[1.0, 2.0], &[3.0, 4.0]).unwrap();
        assert_eq!(t.u, 0.0);
        assert!((t.p - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn identical_values_are_degenerate() {
        assert!(matches!(mann_whitney_u(&[2.0], &[2.0]), Err(Error::DegenerateSamples)));
        assert!(matches!(mann_whitney_u(&[], &[2.0]), Err(Error::EmptySample)));
    }

    #[test]
    fn distribution_counts_sum_to_binomial() {
        for n1 in 1..=10 {
            for n2 in 1..=10 {
                let d = u_distribution(n1, n2);
                assert_eq!(d.iter().sum::<u64>(), binomial(n1 + n2, n1));
                for u in 0..d.len() {
                    assert_eq!(d[u], d[d.len() - 1 - u]);
                }
            }
        }
    }

    #[test]
    fn ties_use_midranks_and_normal_approximation() {
        assert_eq!(midranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
        let t = mann_whitney_u(&[1.0, 2.0, 2.0, 3.0], &[2.0, 4.0, 5.0, 6.0]).unwrap();
        assert_eq!(t.method, PMethod::Normal);
        assert_eq!(t.u, u_of(&[1.0, 2.0, 2.0, 3.0], &[2.0, 4.0, 5.0, 6.0]));
    }

    #[test]
    fn holm_examples() {
        let adj = holm_correction(&[0.01, 0.02, 0.03]);
        for (x, e) in adj.iter().zip([0.03, 0.04, 0.04]) {
            assert!((x - e).abs() < 1e-12);
        }
        assert_eq!(holm_correction(&[0.5]), vec![0.5]);
        assert_eq!(holm_correction(&[1.0, 1.0]), vec![1.0, 1.0]);
        assert!(holm_correction(&[]).is_empty());
    }

    fn distinct_samples(min: usize, max: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (min..=max, min..=max).prop_flat_map(split_distinct)
    }

    fn split_distinct((n1, n2): (usize, usize)) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        proptest::sample::subsequence((0..200).collect::<Vec<i32>>(), n1 + n2)
            .prop_shuffle()
            .prop_map(move |v| {
                let v: Vec<f64> = v.into_iter().map(f64::from).collect();
                (v[..n1].to_vec(), v[n1..].to_vec())
            })
    }

    proptest! {
        #[test]
        fn symmetric_in_argument_order(a in prop::collection::vec(0u8..20, 1..12),
                                       b in prop::collection::vec(0u8..20, 1..12)) {
            let a: Vec<f64> = a.into_iter().map(f64::from).collect();
            let b: Vec<f64> = b.into_iter().map(f64::from).collect();
            match (mann_whitney_u(&a, &b), mann_whitney_u(&b, &a)) {
                (Ok(x), Ok(y)) => { prop_assert_eq!(x.u, y.u); prop_assert_eq!(x.p, y.p); }
                (Err(_), Err(_)) => {}
                _ => prop_assert!(false),
            }
        }

        #[test]
        fn exact_matches_enumeration((a, b) in distinct_samples(1, 7)) {
            let t = mann_whitney_u(&a, &b).unwrap();
            prop_assert_eq!(t.u, u_of(&a, &b));
            prop_assert_eq!(t.p, brute_force_p(&a, &b));
        }

        #[test]
        fn normal_approximation_tracks_exact(
            (a, b) in (8usize..=10)
                .prop_flat_map(|n1| ((18 - n1).max(8)..=20 - n1).prop_map(move |n2| (n1, n2)))
                .prop_flat_map(split_distinct)
        ) {
            let t = mann_whitney_u(&a, &b).unwrap();
            let pooled: Vec<f64> = a.iter().chain(&b).copied().collect();
            let approx = normal_p(t.u, a.len(), b.len(), &pooled);
            if t.p >= 0.01 {
                prop_assert!((approx - t.p).abs() <= 0.01, "exact {} approx {}", t.p, approx);
            }
        }

        #[test]
        fn shifting_one_sample_moves_u_monotonically(a in prop::collection::vec(0u8..50, 1..8),
                                                     b in prop::collection::vec(0u8..50, 1..8)) {
            let a: Vec<f64> = a.into_iter().map(f64::from).collect();
            let b: Vec<f64> = b.into_iter().map(f64::from).collect();
            let u_a = |shift: f64| {
                let shifted: Vec<f64> = a.iter().map(|x| x + shift).collect();
                let ranks = midranks(&shifted.iter().chain(&b).copied().collect::<Vec<_>>());
                ranks[..a.len()].iter().sum::<f64>() - (a.len() * (a.len() + 1)) as f64 / 2.0
            };
            let mut last = u_a(-100.0);
            prop_assert_eq!(last, 0.0);
            for k in -99..=100 {
                let now = u_a(k as f64);
                prop_assert!(now >= last);
                last = now;
            }
            prop_assert_eq!(last, (a.len() * b.len()) as f64);
        }

        #[test]
        fn holm_dominates_and_preserves_order(p in prop::collection::vec(0.0f64..=1.0, 1..12)) {
            let adj = holm_correction(&p);
            for i in 0..p.len() {
                prop_assert!(adj[i] >= p[i] && adj[i] <= 1.0);
                for j in 0..p.len() {
                    if p[i] < p[j] { prop_assert!(adj[i] <= adj[j]); }
                }
            }
        }
    }
}
