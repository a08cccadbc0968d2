//! Elementary exact number theory: Kronecker symbol, primes, valuations,
//! divisors.
//!
//! Everything here is integer arithmetic on `i64` with provably small
//! operands (discriminants and primes are bounded by a few hundred in every
//! pipeline use; divisor loops stay below `d`). The Kronecker symbol follows
//! the standard convention extending the Jacobi symbol to even and negative
//! lower arguments:
//!
//! * `(a/1) = 1`, `(a/0) = [|a| = 1]`,
//! * `(a/2) = 0` for even `a`, `+1` for `a ≡ ±1 (mod 8)`, `−1` for
//!   `a ≡ ±3 (mod 8)`,
//! * `(a/−1) = −1` iff `a < 0`, and complete multiplicativity in the lower
//!   argument.

use num_integer::Integer;

/// Kronecker symbol `(a/n)` with the standard extension to all integers `n`.
///
/// For odd prime `n` this is the Legendre symbol; for odd positive `n` the
/// Jacobi symbol (computed by the reciprocity loop); factors of 2 and the
/// sign of `n` use the conventions in the module docs.
pub fn kronecker(a: i64, n: i64) -> i64 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut a = a;
    let mut n = n;
    let mut k = 1i64;
    if n < 0 {
        n = -n;
        if a < 0 {
            k = -1;
        }
    }
    if n.is_even() {
        if a.is_even() {
            return 0;
        }
        let mut e = 0u32;
        while n.is_even() {
            n /= 2;
            e += 1;
        }
        if e.is_odd() {
            k *= two_symbol(a);
        }
    }
    // Jacobi loop on odd n > 0.
    a = a.rem_euclid(n);
    while a != 0 {
        while a.is_even() {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                k = -k;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            k = -k;
        }
        a %= n;
    }
    if n == 1 {
        k
    } else {
        0
    }
}

/// `(a/2)`: 0 for even `a`, `+1` for `a ≡ ±1 (mod 8)`, `−1` for `a ≡ ±3`.
fn two_symbol(a: i64) -> i64 {
    match a.rem_euclid(8) {
        1 | 7 => 1,
        3 | 5 => -1,
        _ => 0,
    }
}

/// All primes `≤ limit`, ascending (sieve of Eratosthenes).
pub fn primes_up_to(limit: i64) -> Vec<i64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            out.push(p as i64);
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += p;
            }
        }
    }
    out
}

/// Primality by trial division; sufficient for the desk-scale inputs here.
pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `p`-adic valuation of `n ≠ 0`.
pub fn valuation(mut n: i64, p: i64) -> u32 {
    assert!(n != 0 && p >= 2, "valuation needs n != 0, p >= 2");
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// All positive divisors of `n > 0`, ascending.
pub fn divisors(n: i64) -> Vec<i64> {
    assert!(n > 0);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Distinct prime factors of `n > 1`, ascending.
pub fn prime_factors(mut n: i64) -> Vec<i64> {
    assert!(n > 0);
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// True iff no square > 1 divides `n > 0`.
pub fn is_squarefree(n: i64) -> bool {
    assert!(n > 0);
    let mut p = 2;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Legendre symbol by exhaustive squares mod an odd prime: the oracle the
    /// Kronecker implementation is checked against.
    fn legendre_by_squares(a: i64, p: i64) -> i64 {
        assert!(is_prime(p) && p > 2);
        let r = a.rem_euclid(p);
        if r == 0 {
            return 0;
        }
        for x in 1..p {
            if (x * x) % p == r {
                return 1;
            }
        }
        -1
    }

    #[test]
    fn kronecker_matches_exhaustive_squares_oracle() {
        for p in [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            for a in -200..=200 {
                assert_eq!(
                    kronecker(a, p),
                    legendre_by_squares(a, p),
                    "(a/p) mismatch for a={a}, p={p}"
                );
            }
        }
    }

    #[test]
    fn kronecker_minus_163_mod_3_is_minus_one() {
        // −163 ≡ 2 (mod 3) and the squares mod 3 are {0, 1}, so 2 is a
        // non-residue: the symbol is −1. Pinned against the oracle too.
        assert_eq!(kronecker(-163, 3), -1);
        assert_eq!(legendre_by_squares(-163, 3), -1);
    }

    #[test]
    fn kronecker_unit_denominator() {
        for a in -50..=50 {
            assert_eq!(kronecker(a, 1), 1, "(a/1) must be 1, a={a}");
        }
    }

    #[test]
    fn kronecker_shared_factor_vanishes() {
        for d in [8i64, 11, 20, 24, 40, 55, 84, 163] {
            for p in prime_factors(d) {
                assert_eq!(kronecker(-d, p), 0, "(−{d}/{p}) should be 0");
            }
        }
    }

    #[test]
    fn kronecker_top_multiplicativity_odd_bottom() {
        for m in [3i64, 9, 15, 21, 55, 163] {
            for a in -30..=30 {
                for b in -30..=30 {
                    assert_eq!(
                        kronecker(a * b, m),
                        kronecker(a, m) * kronecker(b, m),
                        "multiplicativity fails for a={a}, b={b}, m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn kronecker_two_symbol_convention() {
        // (a/2): ±1 mod 8 → 1, ±3 mod 8 → −1, even → 0.
        assert_eq!(kronecker(7, 2), 1);
        assert_eq!(kronecker(9, 2), 1);
        assert_eq!(kronecker(3, 2), -1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-163, 2), -1); // −163 ≡ 5 (mod 8)
        assert_eq!(kronecker(6, 2), 0);
    }

    #[test]
    fn kronecker_bottom_multiplicativity() {
        for a in -40..=40 {
            for n1 in -12i64..=12 {
                for n2 in -12i64..=12 {
                    if n1 == 0 || n2 == 0 {
                        continue;
                    }
                    assert_eq!(
                        kronecker(a, n1 * n2),
                        kronecker(a, n1) * kronecker(a, n2),
                        "bottom multiplicativity fails for a={a}, n1={n1}, n2={n2}"
                    );
                }
            }
        }
    }

    #[test]
    fn primes_and_divisors() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(divisors(36), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
        assert_eq!(prime_factors(84), vec![2, 3, 7]);
        assert_eq!(valuation(48, 2), 4);
        assert!(is_squarefree(163) && !is_squarefree(12));
        assert!(is_prime(163) && !is_prime(143));
    }
}
