//! Arithmetic modulo primes just below `2^61`, and reconstruction of a
//! big integer from its residues.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

const BITS: u32 = 61;
const LOW: u128 = (1u128 << BITS) - 1;

/// A prime `p = 2^61 - c` with small `c`, so that `2^61 ≡ c (mod p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Prime {
    pub p: u64,
    c: u64,
}

impl Prime {
    /// Reduces any `u128` using `2^61 ≡ c`.
    #[inline]
    pub fn reduce(self, mut x: u128) -> u64 {
        while x >> BITS != 0 {
            x = (x >> BITS) * self.c as u128 + (x & LOW);
        }
        let mut r = x as u64;
        if r >= self.p {
            r -= self.p;
        }
        r
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow(a, self.p - 2)
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub(crate) fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

const PRIME_POOL: usize = 64;

/// The largest primes below `2^61`, in decreasing order.
pub(crate) fn primes() -> &'static [Prime] {
    static POOL: OnceLock<Vec<Prime>> = OnceLock::new();
    POOL.get_or_init(|| {
        let top = 1u64 << BITS;
        (1..)
            .step_by(2)
            .filter(|&c| is_prime(top - c))
            .take(PRIME_POOL)
            .map(|c| Prime { p: top - c, c })
            .collect()
    })
}

/// Enough primes that their product exceeds `bound_bits` bits.
pub(crate) fn primes_for_bits(bound_bits: u64) -> Option<&'static [Prime]> {
    // every pool prime exceeds 2^60
    let k = (bound_bits / 60 + 1) as usize;
    primes().get(..k)
}

/// The unique `x < ∏ p_i` with `x ≡ r_i (mod p_i)`.
pub(crate) fn crt(residues: &[u64], primes: &[Prime]) -> BigUint {
    debug_assert_eq!(residues.len(), primes.len());
    let mut x = BigUint::zero();
    let mut modulus = BigUint::one();
    for (&r, &pr) in residues.iter().zip(primes) {
        let x_mod = (&x % pr.p).to_u64().expect("below p");
        let m_mod = (&modulus % pr.p).to_u64().expect("below p");
        let t = pr.mul(pr.sub(r, x_mod), pr.inv(m_mod));
        x += &modulus * t;
        modulus *= pr.p;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn miller_rabin_agrees_with_trial_division() {
        for n in 0..5000 {
            assert_eq!(is_prime(n), trial_division(n), "{n}");
        }
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
    }

    #[test]
    fn pool_primes_are_below_two_to_the_61() {
        let ps = primes();
        assert_eq!(ps[0].p, (1 << 61) - 1);
        assert!(ps.windows(2).all(|w| w[0].p > w[1].p));
        assert!(ps.iter().all(|p| p.p > 1 << 60));
    }

    #[test]
    fn reduction_matches_u128_remainder() {
        for pr in &primes()[..4] {
            let samples = [
                0u128,
                1,
                pr.p as u128,
                u128::MAX,
                (1u128 << 122) - 12345,
                987_654_321_987_654_321_987,
            ];
            for &x in &samples {
                assert_eq!(pr.reduce(x) as u128, x % pr.p as u128);
            }
            let a = pr.p - 3;
            assert_eq!(pr.mul(a, pr.inv(a)), 1);
        }
    }

    #[test]
    fn crt_reconstructs() {
        let value = BigUint::parse_bytes(b"123456789012345678901234567890123456789", 10).unwrap();
        let ps = primes_for_bits(value.bits()).unwrap();
        let residues: Vec<u64> = ps
            .iter()
            .map(|p| (&value % p.p).to_u64().unwrap())
            .collect();
        assert_eq!(crt(&residues, ps), value);
    }
}
