//! Squarefree decomposition of integers, used to normalize radicands.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Decomposes a nonzero integer `n` as `n = s · f²` with `s` squarefree
/// (carrying the sign of `n`) and `f > 0`. Panics on zero input.
pub fn squarefree_part(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_zero(), "squarefree_part of zero");
    let negative = n.is_negative();
    let mag = n.abs();
    let (s, f) = match mag.to_u64() {
        Some(v) => {
            let (s, f) = squarefree_u64(v);
            (BigInt::from(s), BigInt::from(f))
        }
        None => squarefree_big(&mag),
    };
    (if negative { -s } else { s }, f)
}

fn squarefree_u64(n: u64) -> (u64, u64) {
    let mut s = 1u64;
    let mut f = 1u64;
    for (p, e) in factorize(n) {
        if e % 2 == 1 {
            s *= p;
        }
        f *= p.pow((e / 2) as u32);
    }
    (s, f)
}

/// Fallback for magnitudes beyond u64: trial division plus repeated
/// perfect-square extraction. Complete for all values this crate produces;
/// a missed square factor would only make a radicand non-minimal, never
/// incorrect.
fn squarefree_big(n: &BigInt) -> (BigInt, BigInt) {
    let mut s = BigInt::one();
    let mut f = BigInt::one();
    let mut rem = n.clone();
    let mut p = BigInt::from(2);
    let bound = BigInt::from(100_000u64);
    while &p * &p <= rem && p <= bound {
        let mut e = 0u32;
        while (&rem % &p).is_zero() {
            rem /= &p;
            e += 1;
        }
        if e % 2 == 1 {
            s *= &p;
        }
        for _ in 0..e / 2 {
            f *= &p;
        }
        p += 1;
    }
    loop {
        if rem.is_one() {
            break;
        }
        let r = rem.sqrt();
        if &r * &r == rem {
            f *= &r;
            rem = BigInt::one();
        } else {
            break;
        }
    }
    s *= &rem;
    (s, f)
}

fn factorize(mut n: u64) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == 1 {
            return out;
        }
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    let mut stack = vec![n];
    let mut primes: Vec<u64> = Vec::new();
    while let Some(v) = stack.pop() {
        if v == 1 {
            continue;
        }
        if is_prime_u64(v) {
            primes.push(v);
            continue;
        }
        let d = pollard_rho(v);
        stack.push(d);
        stack.push(v / d);
    }
    primes.sort_unstable();
    for p in primes {
        match out.iter_mut().find(|(q, _)| *q == p) {
            Some((_, e)) => *e += 1,
            None => out.push((p, 1)),
        }
    }
    out.sort_unstable();
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard's rho; input must be composite and odd-free
/// of small primes.
fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let f = |v: u64| (mul_mod(v, v, n) + c) % n;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(squarefree_part(&BigInt::from(8)), (BigInt::from(2), BigInt::from(2)));
        assert_eq!(squarefree_part(&BigInt::from(4)), (BigInt::from(1), BigInt::from(2)));
        assert_eq!(squarefree_part(&BigInt::from(-1)), (BigInt::from(-1), BigInt::from(1)));
        assert_eq!(squarefree_part(&BigInt::from(360)), (BigInt::from(10), BigInt::from(6)));
        assert_eq!(squarefree_part(&BigInt::from(7)), (BigInt::from(7), BigInt::from(1)));
    }

    #[test]
    fn large_semiprime_square() {
        // (1_000_003)^2 * 5: square factor beyond trial-division range
        let p = BigInt::from(1_000_003u64);
        let n = &p * &p * 5;
        assert_eq!(squarefree_part(&n), (BigInt::from(5), p));
    }

    #[test]
    fn reconstructs_input() {
        for v in [-360i64, -7, 2, 12, 49, 1000, 123456] {
            let n = BigInt::from(v);
            let (s, f) = squarefree_part(&n);
            assert_eq!(s * &f * &f, n);
        }
    }
}
