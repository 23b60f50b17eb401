//! Power residue symbols, additive characters, and Gauss sums.
//!
//! Everything here is relative to a [`PrimeContext`]: an odd prime `p` and a
//! cover degree `n` with `2n | p - 1`, together with a fixed primitive root
//! `g` mod `p`. The `n`-th power residue character is pinned down by the
//! identification `g^{(p-1)/n} -> zeta_n`, which makes every value of this
//! module a concrete element of `Z[zeta]` rather than an abstract root of
//! unity. The chosen `g` is part of the context's serialized form so results
//! are reproducible.

use serde::{Deserialize, Serialize};

use crate::cyclotomic::CycNum;
use crate::Error;

fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// `base^exp mod m` without overflow.
pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut b = base % m;
    let mut acc = 1u64 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse of `a` mod `p^k`, in `[0, p^k)`. By convention the
/// empty modulus `k = 0` returns 0.
pub fn inverse_mod(a: u64, p: u64, k: u32) -> Result<u64, Error> {
    if k == 0 {
        return Ok(0);
    }
    if a % p == 0 {
        return Err(Error::NotAUnit(a, p));
    }
    let m = p.pow(k);
    // extended Euclid on (a mod m, m)
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    Ok(t0.rem_euclid(m as i128) as u64)
}

/// Euler phi of `p^k`.
pub fn euler_phi(p: u64, k: u32) -> u64 {
    if k == 0 {
        1
    } else {
        p.pow(k - 1) * (p - 1)
    }
}

/// An odd prime `p` with cover degree `n`, `2n | p - 1`, a fixed primitive
/// root, and the discrete-log table base that root.
#[derive(Clone)]
pub struct PrimeContext {
    p: u64,
    n: u32,
    generator: u64,
    index: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
pub struct PrimeContextJson {
    pub p: u64,
    pub n: u32,
    pub generator: u64,
}

impl PrimeContext {
    pub fn new(p: u64, n: u32) -> Result<PrimeContext, Error> {
        if !is_odd_prime(p) {
            return Err(Error::NotAnOddPrime(p));
        }
        if n == 0 || (p - 1) % (2 * n as u64) != 0 {
            return Err(Error::BadCoverDegree { p, n });
        }
        let generator = (2..p)
            .find(|&g| is_primitive_root(g, p))
            .expect("every prime has a primitive root");
        let mut index = vec![u32::MAX; p as usize];
        let mut x = 1u64;
        for i in 0..(p - 1) {
            index[x as usize] = i as u32;
            x = x * generator % p;
        }
        Ok(PrimeContext {
            p,
            n,
            generator,
            index,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn to_json(&self) -> PrimeContextJson {
        PrimeContextJson {
            p: self.p,
            n: self.n,
            generator: self.generator,
        }
    }

    /// Discrete log of a unit `a` mod `p`, base the stored primitive root.
    pub fn index_of(&self, a: u64) -> u32 {
        self.index[(a % self.p) as usize]
    }

    /// Exponent `e` such that the residue symbol of `a` to the given power is
    /// `zeta_n^e`; callers in hot loops combine these integers directly.
    #[inline]
    pub fn symbol_exponent(&self, a: u64, power: i64) -> Result<u32, Error> {
        let r = a % self.p;
        if r == 0 {
            return Err(Error::NotAUnit(a, self.p));
        }
        let n = self.n as i64;
        Ok((self.index[r as usize] as i64 * power).rem_euclid(n) as u32)
    }

    /// The `n`-th power residue symbol `(a/p)^power`: the unique `n`-th root
    /// of unity congruent to `a^{(p-1)/n}` mod `p`, raised to `power`.
    pub fn residue_symbol(&self, a: i64, power: i64) -> Result<CycNum, Error> {
        let r = a.rem_euclid(self.p as i64) as u64;
        let e = self.symbol_exponent(r, power)?;
        CycNum::root_of_unity(e as i64, self.n as u64)
    }

    /// `psi(a / p^k)` as an exact root of unity; `k = 0` gives 1.
    pub fn additive_char(&self, a: i64, k: u32) -> CycNum {
        if k == 0 {
            return CycNum::one();
        }
        let m = self.p.pow(k);
        CycNum::root_of_unity(a.rem_euclid(m as i64), m).expect("modulus positive")
    }

    /// The Gauss sum `g_j(m, l) = sum over units a mod p^l of
    /// `(a/p)^{jl} psi(p^m a / p^l)`, with `g_j(m, 0) = 1`.
    ///
    /// The defining sum has `p^l` terms, but its summand only depends on `a`
    /// modulo `p^max(1, l-m)`; the evaluation sums one residue class
    /// representative per fiber and scales by the exact fiber count.
    pub fn gauss_sum(&self, j: i64, m: u32, l: u32) -> CycNum {
        if l == 0 {
            return CycNum::one();
        }
        let p = self.p;
        if l >= m + 2 {
            // grouping a = u (1 + v p^{l-m-1}) with v mod p: the character is
            // unchanged (its conductor divides p <= p^{l-m-1}) while the
            // additive part picks up the full-period factor
            // sum_v zeta_p^{uv} = 0, so every fiber cancels
            return CycNum::zero();
        }
        let k0 = std::cmp::max(1, l.saturating_sub(m));
        let fiber = p.pow(l - k0);
        let pk = p.pow(k0);
        let n = self.n as u64;
        let modulus = n * pk;
        let mut counts = vec![0i128; modulus as usize];
        // CRT combination: zeta_n^u * zeta_{p^k0}^v = zeta_{n p^k0}^{u*A + v*B}
        let (ca, cb) = crt_coefficients(n, pk);
        let shift = if m >= l { 0 } else { pow_mod(p, (m + k0 - l) as u64, pk) };
        for a in 0..pk {
            if a % p == 0 {
                continue;
            }
            let u = self.symbol_exponent(a, j * l as i64).unwrap() as u64;
            let v = (a as u128 * shift as u128 % pk as u128) as u64;
            let e = ((u as u128 * ca as u128 + v as u128 * cb as u128) % modulus as u128) as usize;
            counts[e] += 1;
        }
        CycNum::from_exponent_counts(modulus, &counts)
            .scale_by_integer(&num_bigint::BigInt::from(fiber))
    }

    /// `g(k) = g_1(k-1, k)`.
    pub fn gauss_g(&self, k: u32) -> CycNum {
        assert!(k >= 1, "g(k) requires k >= 1");
        self.gauss_sum(1, k - 1, k)
    }

    /// `h(k) = g_1(k, k)`; equals `phi(p^k)` when `n | k` and 0 otherwise.
    pub fn gauss_h(&self, k: u32) -> CycNum {
        self.gauss_sum(1, k, k)
    }

    /// `g(m, l) = g_1(m, l)`.
    pub fn gauss_gml(&self, m: u32, l: u32) -> CycNum {
        self.gauss_sum(1, m, l)
    }

    /// `q^e` as an exact value, `q = p`, with `e` of either sign.
    pub fn q_power(&self, e: i64) -> CycNum {
        CycNum::one().scale_by_p_power(self.p, e)
    }
}

fn is_primitive_root(g: u64, p: u64) -> bool {
    let mut m = p - 1;
    let mut primes = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            primes.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    primes.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1)
}

/// Coefficients `(A, B) = (b, a)` with `zeta_a^u zeta_b^v = zeta_{ab}^{uA + vB}`,
/// from `u/a + v/b = (ub + va)/(ab)`.
pub fn crt_coefficients(a: u64, b: u64) -> (u64, u64) {
    (b, a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_construction() {
        assert!(PrimeContext::new(7, 3).is_ok());
        assert!(PrimeContext::new(5, 2).is_ok());
        assert!(PrimeContext::new(3, 1).is_ok());
        // 2n does not divide p-1
        assert!(matches!(
            PrimeContext::new(3, 2),
            Err(Error::BadCoverDegree { .. })
        ));
        assert!(matches!(PrimeContext::new(9, 1), Err(Error::NotAnOddPrime(9))));
        assert!(matches!(PrimeContext::new(2, 1), Err(Error::NotAnOddPrime(2))));
    }

    #[test]
    fn residue_symbol_basics() {
        let ctx = PrimeContext::new(7, 3).unwrap();
        assert!(ctx.residue_symbol(1, 1).unwrap().equals(&CycNum::one()));
        // cubes map to 1
        let g3 = pow_mod(ctx.generator(), 3, 7) as i64;
        assert!(ctx.residue_symbol(g3, 1).unwrap().equals(&CycNum::one()));
        // 2 has order 3 mod 7, so its symbol is a primitive cube root
        let s = ctx.residue_symbol(2, 1).unwrap();
        assert!(!s.equals(&CycNum::one()));
        let z3 = CycNum::root_of_unity(1, 3).unwrap();
        let z3sq = CycNum::root_of_unity(2, 3).unwrap();
        assert!(s.equals(&z3) || s.equals(&z3sq));
        assert!(ctx.residue_symbol(7, 1).is_err());
    }

    #[test]
    fn residue_symbol_trivial_on_minus_one() {
        // 2n | p-1 forces the character to kill -1
        for (p, n) in [(3u64, 1u32), (5, 1), (5, 2), (7, 1), (7, 3), (13, 2), (13, 3), (11, 5)] {
            let ctx = PrimeContext::new(p, n).unwrap();
            assert!(
                ctx.residue_symbol(-1, 1).unwrap().equals(&CycNum::one()),
                "(-1/p) != 1 for p={p}, n={n}"
            );
        }
    }

    #[test]
    fn residue_symbol_multiplicative() {
        let ctx = PrimeContext::new(13, 3).unwrap();
        for a in 1..13i64 {
            for b in 1..13i64 {
                let lhs = ctx.residue_symbol(a * b, 1).unwrap();
                let rhs = ctx
                    .residue_symbol(a, 1)
                    .unwrap()
                    .mul(&ctx.residue_symbol(b, 1).unwrap());
                assert!(lhs.equals(&rhs));
            }
        }
    }

    #[test]
    fn additive_char_conductor() {
        let ctx = PrimeContext::new(7, 1).unwrap();
        assert!(ctx.additive_char(123, 0).equals(&CycNum::one()));
        assert!(ctx.additive_char(7, 1).equals(&CycNum::one()));
        let z7 = CycNum::root_of_unity(1, 7).unwrap();
        assert!(ctx.additive_char(1, 1).equals(&z7));
    }

    #[test]
    fn inverse_and_phi() {
        assert_eq!(inverse_mod(3, 7, 1).unwrap(), 5);
        assert_eq!(inverse_mod(1, 7, 2).unwrap(), 1);
        assert_eq!(inverse_mod(4, 7, 0).unwrap(), 0);
        assert!(inverse_mod(14, 7, 2).is_err());
        assert_eq!(euler_phi(7, 0), 1);
        assert_eq!(euler_phi(7, 1), 6);
        assert_eq!(euler_phi(7, 3), 294);
    }

    #[test]
    fn gauss_sum_examples() {
        // quadratic Gauss sum mod 5 is sqrt(5)
        let ctx = PrimeContext::new(5, 2).unwrap();
        let g = ctx.gauss_sum(1, 0, 1);
        let (re, im) = g.to_complex();
        assert!((re - 5f64.sqrt()).abs() < 1e-9 && im.abs() < 1e-9);
        assert!(g.equals(&g.conjugate()));

        // trivial character: phi(p^l) whenever m >= l and n | jl
        let ctx = PrimeContext::new(7, 3).unwrap();
        for l in 0..4u32 {
            for m in l..l + 2 {
                let v = ctx.gauss_sum(3, m, l);
                assert!(v.equals(&CycNum::from_i64(euler_phi(7, l) as i64)));
            }
        }

        // non-primitive cancellation: m <= l - 2 kills the sum
        let v = ctx.gauss_sum(1, 0, 2);
        assert!(v.is_zero(), "expected the 42-term sum to vanish, got {v:?}");
    }

    #[test]
    fn gauss_sum_matches_term_by_term_summation() {
        // fiber-count evaluation against the fully unrolled defining sum
        for (p, n) in [(5u64, 2u32), (7, 3), (7, 1)] {
            let ctx = PrimeContext::new(p, n).unwrap();
            for j in 0..n as i64 {
                for l in 0..=3u32 {
                    for m in 0..=3u32 {
                        let fast = ctx.gauss_sum(j, m, l);
                        let mut slow = CycNum::zero();
                        if l == 0 {
                            slow = CycNum::one();
                        } else {
                            for a in 0..p.pow(l) {
                                if a % p == 0 {
                                    continue;
                                }
                                let sym = ctx.residue_symbol(a as i64, j * l as i64).unwrap();
                                let add = ctx
                                    .additive_char((p.pow(m) as u128 * a as u128
                                        % p.pow(l) as u128)
                                        as i64, l);
                                slow = slow.add(&sym.mul(&add));
                            }
                        }
                        assert!(fast.equals(&slow), "g_{j}({m},{l}) mismatch for p={p} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn h_and_g_shorthands() {
        let ctx = PrimeContext::new(7, 3).unwrap();
        for k in 0..=6u32 {
            let h = ctx.gauss_h(k);
            if k % 3 == 0 {
                assert!(h.equals(&CycNum::from_i64(euler_phi(7, k) as i64)));
            } else {
                assert!(h.is_zero());
            }
        }
        assert!(ctx.gauss_gml(0, 0).equals(&CycNum::one()));
        // |g(k)|^2 = p^{2k-1} when n does not divide k
        for k in [1u32, 2, 4, 5] {
            let g = ctx.gauss_g(k);
            let prod = g.mul(&g.conjugate());
            let expect = CycNum::from_integer(num_bigint::BigInt::from(7u64).pow(2 * k - 1));
            assert!(prod.equals(&expect), "|g({k})|^2 != p^{}", 2 * k - 1);
        }
    }
}
