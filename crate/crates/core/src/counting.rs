//! Exact binomial coefficients and powers.

use num_bigint::BigUint;
use num_traits::One;

/// `C(n, k)`, or 0 when `k > n`. Exact for every `n <= 128`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc
            .checked_mul((n - i) as u128)
            .map(|x| x / (i + 1) as u128)
            .unwrap_or_else(|| binomial_big(n, k).try_into().expect("binomial exceeds u128"));
        if acc == 0 {
            break;
        }
    }
    acc
}

pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `C(n, k)` where `n` may be negative: 0 unless `0 <= k <= n`.
pub fn binomial_signed(n: i64, k: i64) -> u128 {
    if n < 0 || k < 0 || k > n {
        0
    } else {
        binomial(n as u64, k as u64)
    }
}
