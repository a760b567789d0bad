//! Exact integer helpers: square roots, factorisation, Hilbert symbols.

/// Floor of the square root of `n`.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    // correct the float estimate in both directions
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

/// `Some(r)` when `n = r^2`.
pub fn exact_sqrt(n: u128) -> Option<u128> {
    let r = isqrt(n);
    (r * r == n).then_some(r)
}

pub fn is_square(n: i128) -> bool {
    n >= 0 && exact_sqrt(n as u128).is_some()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorisation by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// The square-free part `s` of `n`, where `n = s * m^2` with `s` square-free.
pub fn squarefree_part(n: u64) -> u64 {
    factorize(n).into_iter().filter(|&(_, e)| e % 2 == 1).map(|(p, _)| p).product()
}

/// `Some((p, e))` when `n = p^e` with `p` prime and `e >= 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    let f = factorize(n);
    (f.len() == 1).then(|| f[0])
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> =
        (1..=isqrt(n as u128) as u64).filter(|d| n.is_multiple_of(*d)).flat_map(|d| [d, n / d]).collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut acc: u128 = 1;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Multiplicative order of `a` modulo `m`, or `None` if `gcd(a, m) != 1`.
pub fn mult_order(a: u64, m: u64) -> Option<u64> {
    if m < 2 || gcd(a % m, m) != 1 {
        return None;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 {
        x = (x as u128 * a as u128 % m as u128) as u64;
        k += 1;
    }
    Some(k)
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: i128, p: u64) -> i32 {
    let r = a.rem_euclid(p as i128) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

fn split_p(mut a: i128, p: i128) -> (u32, i128) {
    let mut e = 0;
    while a % p == 0 {
        a /= p;
        e += 1;
    }
    (e, a)
}

/// Hilbert symbol `(a, b)_p` over the p-adic numbers, for non-zero `a`, `b`
/// and prime `p`.
pub fn hilbert_symbol(a: i128, b: i128, p: u64) -> i32 {
    assert!(a != 0 && b != 0, "Hilbert symbol of zero");
    let pi = p as i128;
    let (alpha, u) = split_p(a, pi);
    let (beta, w) = split_p(b, pi);
    if p == 2 {
        let eps = |x: i128| ((x.rem_euclid(4) - 1) / 2) as u32 & 1;
        let omega = |x: i128| {
            let r = x.rem_euclid(8);
            (((r * r - 1) / 8) as u32) & 1
        };
        let e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let eps_p = ((p - 1) / 2) as u32 & 1;
        let mut s = if (alpha * beta * eps_p).is_multiple_of(2) { 1 } else { -1 };
        if beta % 2 == 1 {
            s *= legendre(u, p);
        }
        if alpha % 2 == 1 {
            s *= legendre(w, p);
        }
        s
    }
}

/// Whether `z^2 = a x^2 + b y^2` has a non-trivial rational solution, decided
/// by local solvability at the real place and every prime dividing `2ab`.
pub fn ternary_form_solvable(a: i128, b: i128) -> bool {
    if a < 0 && b < 0 {
        return false;
    }
    let mut primes = vec![2u64];
    for n in [a.unsigned_abs(), b.unsigned_abs()] {
        for (p, _) in factorize(n as u64) {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
    }
    primes.into_iter().all(|p| hilbert_symbol(a, b, p) == 1)
}

/// Binomial coefficient with overflow detection.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}
