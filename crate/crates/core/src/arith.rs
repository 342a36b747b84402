//! Elementary integer arithmetic: gcd, factorization, modular powers,
//! primitive roots, the Kronecker symbol and a cached prime sieve.

use std::sync::{Arc, RwLock};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Reduces a signed integer into `[0, m)`.
pub fn mod_floor(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
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

/// Modular inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Prime factorization by trial division, primes in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, k)| k == 1)
}

/// Smallest primitive root modulo an odd prime `p` that is also a primitive
/// root modulo `p^2` (and hence modulo every power of `p`).
pub fn primitive_root_prime_power(p: u64) -> u64 {
    debug_assert!(p > 2 && is_prime(p));
    let order = p - 1;
    let factors: Vec<u64> = factorize(order).into_iter().map(|(q, _)| q).collect();
    let mut g = 2u64;
    loop {
        if factors.iter().all(|&q| pow_mod(g, order / q, p) != 1) {
            let p2 = p * p;
            if pow_mod(g, p - 1, p2) != 1 {
                return g;
            }
            return g + p;
        }
        g += 1;
    }
}

/// Kronecker symbol `(d / n)` for `n >= 0`.
pub fn kronecker_symbol(d: i64, n: u64) -> i32 {
    if n == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut result = 1i32;
    let v2 = n.trailing_zeros();
    if v2 > 0 {
        if d.rem_euclid(2) == 0 {
            return 0;
        }
        let r = d.rem_euclid(8);
        if v2 % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
        n >>= v2;
    }
    // Jacobi symbol (d / n) with n odd
    let mut a = d.rem_euclid(n as i64) as u64;
    let mut m = n;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            let r = m % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            result = -result;
        }
        a %= m;
    }
    if m == 1 {
        result
    } else {
        0
    }
}

/// Fundamental discriminant test: `d ≡ 1 (mod 4)` squarefree, or `d = 4m`
/// with `m ≡ 2, 3 (mod 4)` squarefree. `d = 1` is excluded.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let r = d.rem_euclid(4);
    if r == 1 {
        return is_squarefree(d.unsigned_abs());
    }
    if r == 0 {
        let m = d / 4;
        let mr = m.rem_euclid(4);
        return (mr == 2 || mr == 3) && is_squarefree(m.unsigned_abs());
    }
    false
}

static PRIME_CACHE: RwLock<Option<(u64, Arc<Vec<u32>>)>> = RwLock::new(None);

/// All primes up to at least `limit`, served from a process-wide cache that
/// grows on demand. The returned table may extend past `limit`.
pub fn primes_up_to(limit: u64) -> Arc<Vec<u32>> {
    assert!(limit < u32::MAX as u64, "prime cutoff too large");
    {
        let guard = PRIME_CACHE.read().unwrap_or_else(|e| e.into_inner());
        if let Some((covered, table)) = guard.as_ref() {
            if *covered >= limit {
                return Arc::clone(table);
            }
        }
    }
    let limit = limit.max(1000);
    let fresh = Arc::new(sieve(limit));
    let mut guard = PRIME_CACHE.write().unwrap_or_else(|e| e.into_inner());
    match guard.as_ref() {
        Some((covered, table)) if *covered >= limit => Arc::clone(table),
        _ => {
            *guard = Some((limit, Arc::clone(&fresh)));
            fresh
        }
    }
}

/// Odd-only sieve of Eratosthenes.
fn sieve(limit: u64) -> Vec<u32> {
    let limit = limit as usize;
    if limit < 2 {
        return Vec::new();
    }
    // index i represents 2i + 1
    let half = limit / 2 + 1;
    let mut composite = vec![false; half];
    composite[0] = true;
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= limit {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut out = Vec::with_capacity(limit / 10 + 10);
    out.push(2);
    for (i, &c) in composite.iter().enumerate() {
        let n = 2 * i + 1;
        if !c && n <= limit {
            out.push(n as u32);
        }
    }
    out
}

/// Primes `<= limit`, as a fresh vector (slice of the cached table).
pub fn primes_list(limit: u64) -> Vec<u64> {
    let table = primes_up_to(limit);
    table
        .iter()
        .take_while(|&&p| p as u64 <= limit)
        .map(|&p| p as u64)
        .collect()
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut limit = 100u64;
    loop {
        let ps = primes_list(limit);
        if ps.len() >= count {
            return ps.into_iter().take(count).collect();
        }
        limit *= 2;
    }
}
