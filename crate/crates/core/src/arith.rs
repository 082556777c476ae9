//! Small multiplicative-arithmetic helpers shared by the congruence and
//! circle modules. Inputs here are tiny (moduli up to a few thousand), so
//! plain trial division is all that is needed.

use num_integer::Integer;

/// Prime factorization as `(p, e)` pairs in increasing order of `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound)
        .filter(|&n| factorize(n).first() == Some(&(n, 1)))
        .collect()
}

/// Combine `x ≡ r1 (mod m1)` and `x ≡ r2 (mod m2)` for coprime moduli.
/// Returns the residue modulo `m1 * m2`.
pub fn crt_pair(r1: u64, m1: u64, r2: u64, m2: u64) -> u64 {
    let ext = (m1 as i128).extended_gcd(&(m2 as i128));
    debug_assert_eq!(ext.gcd, 1, "crt_pair needs coprime moduli");
    let m = m1 as i128 * m2 as i128;
    // m1 * x ≡ 1 (mod m2)
    let inv = ext.x.rem_euclid(m2 as i128);
    let diff = (r2 as i128 - r1 as i128).rem_euclid(m2 as i128);
    let k = (diff * inv).rem_euclid(m2 as i128);
    ((r1 as i128 + m1 as i128 * k).rem_euclid(m)) as u64
}

/// Order of SL(2, Z/qZ): `q³ ∏_{p|q} (1 − p⁻²)`.
pub fn sl2_order(q: u64) -> u64 {
    if q == 1 {
        return 1;
    }
    factorize(q)
        .into_iter()
        .fold(q * q * q, |acc, (p, _)| acc / (p * p) * (p * p - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_and_divisors() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn phi_and_mu() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(9), 6);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(18), 0);
    }

    #[test]
    fn sl2_orders_match_brute_force() {
        for q in 1..=6u64 {
            let mut count = 0;
            for a in 0..q {
                for b in 0..q {
                    for c in 0..q {
                        for d in 0..q {
                            if (a * d + q * q - b * c % q) % q == 1 % q {
                                count += 1;
                            }
                        }
                    }
                }
            }
            assert_eq!(sl2_order(q), count, "q = {q}");
        }
        assert_eq!(sl2_order(2), 6);
        assert_eq!(sl2_order(3), 24);
    }

    #[test]
    fn crt_combines() {
        for r1 in 0..4 {
            for r2 in 0..9 {
                let x = crt_pair(r1, 4, r2, 9);
                assert!(x < 36);
                assert_eq!(x % 4, r1);
                assert_eq!(x % 9, r2);
            }
        }
    }
}
