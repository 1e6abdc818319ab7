/// Default upper bound of the prime sieve.
pub const DEFAULT_SIEVE_BOUND: u64 = 1_000_000;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
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

/// Deterministic Miller-Rabin; the first twelve prime bases are exact for all
/// 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Von Mangoldt function: `log p` on prime powers `p^k`, zero elsewhere.
pub fn mangoldt(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            return if m == 1 { (p as f64).ln() } else { 0.0 };
        }
        p += 1;
    }
    // n has a single prime factor left over, so n = m is prime
    (m as f64).ln()
}

/// Primes up to a bound, from a sieve of Eratosthenes.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    bound: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn new(bound: u64) -> Self {
        let n = bound as usize;
        let mut composite = vec![false; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if !composite[i] {
                primes.push(i as u64);
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        PrimeTable { bound, primes }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// All prime powers `p^k <= limit` as `(p, k, p^k)`, ascending in `p^k`.
    pub fn prime_powers(&self, limit: f64) -> Vec<(u64, u32, u64)> {
        let mut out = Vec::new();
        for &p in self.primes.iter().take_while(|&&p| (p as f64) <= limit) {
            let mut k = 1;
            let mut pk = p;
            while (pk as f64) <= limit {
                out.push((p, k, pk));
                match pk.checked_mul(p) {
                    Some(next) => pk = next,
                    None => break,
                }
                k += 1;
            }
        }
        out.sort_by_key(|&(_, _, pk)| pk);
        out
    }
}

impl Default for PrimeTable {
    fn default() -> Self {
        PrimeTable::new(DEFAULT_SIEVE_BOUND)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mangoldt_examples() {
        assert_eq!(mangoldt(8), 2f64.ln());
        assert_eq!(mangoldt(6), 0.0);
        assert_eq!(mangoldt(7), 7f64.ln());
        assert_eq!(mangoldt(1), 0.0);
        assert_eq!(mangoldt(81), 3f64.ln());
    }

    #[test]
    fn primality_matches_sieve() {
        let table = PrimeTable::new(10_000);
        let set: std::collections::HashSet<u64> = table.primes().iter().copied().collect();
        for n in 0..10_000u64 {
            assert_eq!(is_prime(n), set.contains(&n), "n = {n}");
        }
        assert!(is_prime(9_223_372_036_854_775_783)); // largest prime below 2^63
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
    }

    #[test]
    fn prime_powers_are_sorted() {
        let table = PrimeTable::new(100);
        let pp: Vec<u64> = table.prime_powers(10.0).iter().map(|t| t.2).collect();
        assert_eq!(pp, vec![2, 3, 4, 5, 7, 8, 9]);
    }
}
