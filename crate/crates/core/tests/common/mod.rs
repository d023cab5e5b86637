//! Brute-force oracles shared by the integration suites.
//!
//! Everything here is deliberately independent of the library's
//! implementation: canonical forms are minimized over all rootings instead
//! of centroid-rooted, trees on identified vertex sets come from Prufer
//! sequences, and automorphisms are counted by checking all permutations.
#![allow(dead_code)]

use bott_core::Rational;
use num_bigint::BigInt;
use num_traits::Pow;

/// Decodes a Prufer sequence over `{0..n-1}` (length `n - 2`) into the edge
/// set of the corresponding labeled tree; iterating over all sequences
/// enumerates all `n^(n-2)` trees on the identified vertex set.
pub fn prufer_tree(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    assert!(n >= 2 && seq.len() == n - 2);
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut leaves: std::collections::BTreeSet<usize> =
        (0..n).filter(|&v| degree[v] == 1).collect();
    for &s in seq {
        let leaf = *leaves.iter().next().expect("a tree always has a leaf");
        leaves.remove(&leaf);
        edges.push((leaf, s));
        degree[s] -= 1;
        if degree[s] == 1 {
            leaves.insert(s);
        }
    }
    let mut rest = leaves.into_iter();
    let (u, v) = (rest.next().unwrap(), rest.next().unwrap());
    edges.push((u, v));
    edges
}

/// Canonical string of a degree-decorated tree with vertex labels, taken as
/// the minimum over all rootings of a recursive encoding. Quadratic and
/// slow, but with no shared machinery with the library's canonizer.
pub fn naive_labeled_key(n: usize, edges: &[(usize, usize, u32)], labels: &[u32]) -> String {
    let mut adj: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n];
    for &(u, v, deg) in edges {
        adj[u].push((v, deg));
        adj[v].push((u, deg));
    }
    (0..n)
        .map(|root| encode(root, usize::MAX, &adj, labels))
        .min()
        .expect("at least one vertex")
}

fn encode(v: usize, parent: usize, adj: &[Vec<(usize, u32)>], labels: &[u32]) -> String {
    let mut parts: Vec<String> = adj[v]
        .iter()
        .filter(|&&(u, _)| u != parent)
        .map(|&(u, deg)| format!("{deg}:{}", encode(u, v, adj, labels)))
        .collect();
    parts.sort();
    format!("l{}({})", labels[v], parts.join(","))
}

/// Number of permutations of the vertex set preserving the edge set with
/// degrees and fixing every vertex label.
pub fn brute_label_stabilizer(n: usize, edges: &[(usize, usize, u32)], labels: &[u32]) -> u64 {
    let target: std::collections::BTreeSet<(usize, usize, u32)> = edges
        .iter()
        .map(|&(u, v, d)| (u.min(v), u.max(v), d))
        .collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut count = 0u64;
    permute(&mut perm, 0, &mut |p| {
        if labels.iter().enumerate().any(|(v, &l)| labels[p[v]] != l) {
            return;
        }
        let mapped: std::collections::BTreeSet<(usize, usize, u32)> = edges
            .iter()
            .map(|&(u, v, d)| (p[u].min(p[v]), p[u].max(p[v]), d))
            .collect();
        if mapped == target {
            count += 1;
        }
    });
    count
}

fn permute(items: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, f);
        items.swap(k, i);
    }
}

/// All positive compositions of `total` into `parts` parts.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 0 {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for v in 1..=(total - parts as u32 + 1) {
            prefix.push(v);
            rec(total - v, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts as u32 <= total {
        rec(total, parts, &mut Vec::new(), &mut out);
    }
    out
}

/// Exact signed 128-bit fraction arithmetic for the small oracle sums; a
/// separate code path from the library's big rationals.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Frac128 {
    pub num: i128,
    pub den: i128,
}

impl Frac128 {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0);
        let g = gcd128(num.abs(), den.abs()).max(1);
        let sign = if den < 0 { -1 } else { 1 };
        Frac128 {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub fn add(self, other: Frac128) -> Frac128 {
        Frac128::new(
            self.num.checked_mul(other.den).unwrap() + other.num.checked_mul(self.den).unwrap(),
            self.den.checked_mul(other.den).unwrap(),
        )
    }

    pub fn to_rational(self) -> Rational {
        Rational::new(BigInt::from(self.num), BigInt::from(self.den))
    }
}

fn gcd128(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd128(b, a % b)
    }
}

/// Oracle for the closed-form line count: a direct 128-bit transcription of
/// the sum over unordered fixed-point pairs at `λ_i = 10^i`. Only valid for
/// `r <= 3`, where the factors stay inside `i128`.
pub fn lines_oracle_pow10(r: usize) -> Rational {
    assert!((2..=3).contains(&r));
    let lam: Vec<i128> = (0..=r as u32).map(|i| 10i128.pow(i)).collect();
    let m = 2 * r as i128 - 3;
    let mut total = Frac128::new(0, 1);
    for i in 0..=r {
        for j in i + 1..=r {
            let mut num = 1i128;
            for a in 0..=m {
                num = num.checked_mul(a * lam[i] + (m - a) * lam[j]).unwrap();
            }
            let mut den = 1i128;
            for (k, &lk) in lam.iter().enumerate() {
                if k != i && k != j {
                    den = den.checked_mul((lam[i] - lk) * (lam[j] - lk)).unwrap();
                }
            }
            total = total.add(Frac128::new(num, den));
        }
    }
    total.to_rational()
}

/// Rebuilds the invariants from instanton numbers by the divisor sum
/// `N_d = Σ_{k|d} n_{d/k} / k³`.
pub fn reconstruct_gw(instanton: &[BigInt]) -> Vec<Rational> {
    (1..=instanton.len())
        .map(|d| {
            let mut total = Rational::new(BigInt::from(0), BigInt::from(1));
            for k in 1..=d {
                if d % k == 0 {
                    total += Rational::new(instanton[d / k - 1].clone(), BigInt::from(k).pow(3u32));
                }
            }
            total
        })
        .collect()
}
