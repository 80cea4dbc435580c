//! Exact modular arithmetic: factorization and square roots of unity.
//!
//! Everything here is a pure function on `u64` inputs; intermediate
//! products are widened to `u128` so no operation can overflow.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModArithError {
    /// Inputs must satisfy `1 <= n < 2^63`.
    #[error("n out of range: {0} (must satisfy 1 <= n < 2^63)")]
    OutOfRange(u64),
    /// The linear-scan operations refuse inputs past their feasibility bound.
    #[error("n = {n} exceeds the scan bound {bound}")]
    BoundExceeded { n: u64, bound: u64 },
}

/// Prime factorization as an ordered list of `(prime, exponent)` pairs.
///
/// Primes are strictly increasing and the product of `prime^exponent`
/// reconstructs the input. `factorize(1)` yields the empty list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Reconstructs the factored integer.
    pub fn value(&self) -> u64 {
        self.factors
            .iter()
            .fold(1u64, |acc, &(p, e)| acc * p.pow(e))
    }

    /// Exponent of `p` in the factorization (0 if `p` does not divide).
    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// Number of distinct odd prime divisors.
    pub fn odd_prime_count(&self) -> usize {
        self.factors.iter().filter(|&&(p, _)| p != 2).count()
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
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

/// Deterministic Miller-Rabin for `u64`; the witness set below is proven
/// sufficient for all n < 3.3 * 10^24.
pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Pollard rho with Brent cycle detection and batched gcds; `n` must be
/// odd and composite. Returns a nontrivial factor.
fn pollard_rho(n: u64) -> u64 {
    debug_assert!(n > 1 && n % 2 == 1 && !is_prime(n));
    for c in 1..64u64 {
        if let Some(d) = rho_brent(n, c) {
            return d;
        }
    }
    unreachable!("pollard rho exhausted all offsets for n = {n}");
}

fn rho_brent(n: u64, c: u64) -> Option<u64> {
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let (mut x, mut ys) = (y, y);
    let mut g = 1u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0u64;
        while k < r && g == 1 {
            ys = y;
            let m = 128.min(r - k);
            for _ in 0..m {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd(q, n);
            k += m;
        }
        r <<= 1;
    }
    if g == n {
        // the batch overshot a factor; retrace one step at a time
        loop {
            ys = f(ys);
            g = gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

const TRIAL_LIMIT: u64 = 1_000;

/// Exact prime factorization of `n`, `1 <= n < 2^63`.
///
/// Trial division strips all factors below 1000; what remains is split by
/// Miller-Rabin and Pollard rho.
pub fn factorize(n: u64) -> Result<Factorization, ModArithError> {
    if n == 0 || n >= 1 << 63 {
        return Err(ModArithError::OutOfRange(n));
    }
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut m = n;
    for p in [2u64, 3, 5] {
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    }
    // 30-wheel over residues coprime to 2*3*5.
    let mut c = 7u64;
    const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut w = 0usize;
    while c <= TRIAL_LIMIT && c * c <= m {
        let mut e = 0;
        while m.is_multiple_of(c) {
            m /= c;
            e += 1;
        }
        if e > 0 {
            factors.push((c, e));
        }
        c += WHEEL[w];
        w = (w + 1) % WHEEL.len();
    }
    if m > 1 && c * c > m {
        // cofactor below the trial square is prime
        factors.push((m, 1));
        m = 1;
    }
    if m > 1 {
        let mut stack = vec![m];
        let mut large: Vec<u64> = Vec::new();
        while let Some(v) = stack.pop() {
            if is_prime(v) {
                large.push(v);
            } else {
                let d = pollard_rho(v);
                stack.push(d);
                stack.push(v / d);
            }
        }
        large.sort_unstable();
        let mut i = 0;
        while i < large.len() {
            let p = large[i];
            let mut e = 0;
            while i < large.len() && large[i] == p {
                e += 1;
                i += 1;
            }
            factors.push((p, e));
        }
    }
    factors.sort_unstable_by_key(|&(p, _)| p);
    debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
    debug_assert!(factors.iter().all(|&(p, _)| is_prime(p)));
    Ok(Factorization { factors })
}

/// Number of square roots of unity modulo `n`, i.e. residues `x` with
/// `x^2 = 1 (mod n)`.
///
/// Computed by the Chinese remainder theorem as a product over prime
/// powers: an odd `p^e` contributes 2; `2` contributes 1, `4` contributes
/// 2, and `2^a` with `a >= 3` contributes 4. For `n = 1` the count is 1.
pub fn unit_square_root_count(n: u64) -> Result<u64, ModArithError> {
    let f = factorize(n)?;
    let mut count = 1u64;
    for &(p, e) in f.factors() {
        count *= match (p, e) {
            (2, 1) => 1,
            (2, 2) => 2,
            (2, _) => 4,
            _ => 2,
        };
    }
    Ok(count)
}

/// Scan bound for [`unit_square_roots_bruteforce`].
pub const BRUTEFORCE_BOUND: u64 = 10_000_000;

/// All residues `0 <= x < n` with `x^2 = 1 (mod n)`, by direct scan.
///
/// Independent oracle for [`unit_square_root_count`]; refuses `n` past
/// [`BRUTEFORCE_BOUND`].
pub fn unit_square_roots_bruteforce(n: u64) -> Result<Vec<u64>, ModArithError> {
    if n == 0 {
        return Err(ModArithError::OutOfRange(n));
    }
    if n > BRUTEFORCE_BOUND {
        return Err(ModArithError::BoundExceeded {
            n,
            bound: BRUTEFORCE_BOUND,
        });
    }
    Ok((0..n)
        .filter(|&x| (x as u128 * x as u128) % n as u128 == 1 % n as u128)
        .collect())
}

/// Number of integers `0 <= b < 2n` with `b^2 = 1 (mod 4n)`, by direct scan.
///
/// Always equals half of `unit_square_root_count(4n)`; the equality is
/// asserted by tests, not assumed here.
pub fn count_sqrt1_halfrange(n: u64) -> u64 {
    assert!(n >= 1, "count_sqrt1_halfrange requires n >= 1");
    let modulus = 4 * n as u128;
    (0..2 * n)
        .filter(|&b| (b as u128 * b as u128) % modulus == 1)
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_one_is_empty() {
        assert_eq!(factorize(1).unwrap().factors(), &[]);
        assert_eq!(factorize(1).unwrap().value(), 1);
    }

    #[test]
    fn factorize_small_examples() {
        assert_eq!(factorize(108).unwrap().factors(), &[(2, 2), (3, 3)]);
        assert_eq!(factorize(180).unwrap().factors(), &[(2, 2), (3, 2), (5, 1)]);
        assert_eq!(factorize(97).unwrap().factors(), &[(97, 1)]);
    }

    #[test]
    fn factorize_rejects_out_of_range() {
        assert_eq!(factorize(0), Err(ModArithError::OutOfRange(0)));
        assert!(factorize(1 << 63).is_err());
    }

    #[test]
    fn factorize_large_semiprime() {
        // both factors above the trial-division limit
        let p = 1_000_003u64;
        let q = 998_244_353u64;
        let f = factorize(p * q).unwrap();
        assert_eq!(f.factors(), &[(p, 1), (q, 1)]);
    }

    #[test]
    fn factorize_large_prime() {
        let p = (1u64 << 61) - 1; // Mersenne prime
        assert_eq!(factorize(p).unwrap().factors(), &[(p, 1)]);
    }

    #[test]
    fn factorize_roundtrip_random() {
        // splitmix64 keeps this deterministic without an RNG dependency
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^ (z >> 31)
        };
        for _ in 0..100_000 {
            let n = (next() >> 1).max(1); // < 2^63
            let f = factorize(n).unwrap();
            assert_eq!(f.value(), n, "roundtrip failed for {n}");
            assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn unit_count_examples() {
        assert_eq!(unit_square_root_count(1).unwrap(), 1);
        assert_eq!(unit_square_root_count(2).unwrap(), 1);
        assert_eq!(unit_square_root_count(36).unwrap(), 4);
        assert_eq!(unit_square_root_count(16).unwrap(), 4); // n = 2d, d = 8 = 2^{a+1}
        assert_eq!(unit_square_root_count(24).unwrap(), 8);
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(unit_square_roots_bruteforce(12).unwrap(), vec![1, 5, 7, 11]);
        assert_eq!(unit_square_roots_bruteforce(2).unwrap(), vec![1]);
        assert_eq!(
            unit_square_roots_bruteforce(24).unwrap(),
            vec![1, 5, 7, 11, 13, 17, 19, 23]
        );
        assert_eq!(unit_square_roots_bruteforce(1).unwrap(), vec![0]);
    }

    #[test]
    fn bruteforce_rejects_past_bound() {
        assert!(matches!(
            unit_square_roots_bruteforce(BRUTEFORCE_BOUND + 1),
            Err(ModArithError::BoundExceeded { .. })
        ));
    }

    #[test]
    fn crt_count_matches_bruteforce() {
        for n in 1..=10_000u64 {
            assert_eq!(
                unit_square_root_count(n).unwrap(),
                unit_square_roots_bruteforce(n).unwrap().len() as u64,
                "mismatch at n = {n}"
            );
        }
    }

    #[test]
    fn halfrange_examples() {
        assert_eq!(count_sqrt1_halfrange(1), 1);
        assert_eq!(count_sqrt1_halfrange(6), 4);
        assert_eq!(count_sqrt1_halfrange(2), 2);
    }

    #[test]
    fn halfrange_is_half_of_unit_count() {
        for n in 1..=10_000u64 {
            let full = unit_square_root_count(4 * n).unwrap();
            assert_eq!(full % 2, 0);
            assert_eq!(count_sqrt1_halfrange(n), full / 2, "mismatch at n = {n}");
        }
    }

    /// The closed form for |(Z_2d)_2| over the three admissible even shapes
    /// of d: 4 for d = 2^{a+1}; 2^{k+1} for d = 2 * odd; 2^{k+2} otherwise.
    #[test]
    fn closed_form_for_even_d_shapes() {
        for d in (4..=100_000u64).step_by(2) {
            let f = factorize(d).unwrap();
            let a_plus_1 = f.exponent_of(2);
            let k = f.odd_prime_count() as u32;
            let expected = if k == 0 {
                assert!(a_plus_1 >= 2, "d = {d}");
                4
            } else if a_plus_1 == 1 {
                1u64 << (k + 1)
            } else {
                1u64 << (k + 2)
            };
            assert_eq!(
                unit_square_root_count(2 * d).unwrap(),
                expected,
                "closed form failed at d = {d}"
            );
        }
    }
}
