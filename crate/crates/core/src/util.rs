//! Small counting helpers shared across modules.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// All `k`-subsets of `{1..n}` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (1..=k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - (k - 1 - i) {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub fn binomial_big(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Narayana number `N_{a,b} = (1/a) C(a,b) C(a,b-1)`; zero outside `1 <= b <= a`.
pub fn narayana(a: usize, b: usize) -> u128 {
    if a == 0 || b == 0 || b > a {
        return 0;
    }
    binomial(a, b) * binomial(a, b - 1) / a as u128
}

/// All words of length `len` with exactly `k` entries `true`.
pub fn binary_words(len: usize, k: usize) -> Vec<Vec<bool>> {
    k_subsets(len, k)
        .into_iter()
        .map(|s| {
            let mut w = vec![false; len];
            for i in s {
                w[i - 1] = true;
            }
            w
        })
        .collect()
}
