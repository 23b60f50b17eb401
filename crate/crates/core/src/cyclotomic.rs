//! Exact arithmetic in `Z[zeta_M][1/p]`.
//!
//! Elements are stored in canonical form: an integer polynomial in the
//! primitive `M`-th root of unity `zeta_M`, reduced modulo the `M`-th
//! cyclotomic polynomial, together with a power of a prime `p` in the
//! denominator. All sum identities in this crate are decided by exact
//! equality of such values; floating point appears only in `to_complex`,
//! which is for display and sanity checks.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use crate::Error;

/// Euler's totient of `m`.
pub fn euler_phi_u64(mut m: u64) -> u64 {
    let mut result = m;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            while m % d == 0 {
                m /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn distinct_primes(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

// ---------------------------------------------------------------------------
// Integer polynomial helpers (dense, ascending degree), used to build the
// per-modulus reduction tables. Checked arithmetic: table coefficients stay
// tiny for the moduli this crate touches, and an overflow here would mean a
// silent wrong answer downstream.
// ---------------------------------------------------------------------------

fn poly_trim(p: &mut Vec<i64>) {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = out[i + j]
                .checked_add(x.checked_mul(y).expect("poly coeff overflow"))
                .expect("poly coeff overflow");
        }
    }
    poly_trim(&mut out);
    out
}

/// Exact division of integer polynomials; panics if the division is inexact.
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem: Vec<i64> = num.to_vec();
    poly_trim(&mut rem);
    let dlead = *den.last().unwrap();
    let dn = den.len();
    assert!(dn >= 1 && dlead != 0);
    if rem.len() < dn {
        assert!(rem.iter().all(|&c| c == 0), "inexact polynomial division");
        return vec![0];
    }
    let mut quot = vec![0i64; rem.len() - dn + 1];
    for k in (0..quot.len()).rev() {
        let lead = rem[k + dn - 1];
        assert!(lead % dlead == 0, "inexact polynomial division");
        let q = lead / dlead;
        quot[k] = q;
        if q != 0 {
            for j in 0..dn {
                rem[k + j] -= q * den[j];
            }
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "inexact polynomial division");
    poly_trim(&mut quot);
    quot
}

/// `p(x^k)` for a polynomial `p`.
fn poly_compose_power(p: &[i64], k: usize) -> Vec<i64> {
    let mut out = vec![0i64; (p.len() - 1) * k + 1];
    for (i, &c) in p.iter().enumerate() {
        out[i * k] = c;
    }
    out
}

fn x_pow_minus_one(n: usize) -> Vec<i64> {
    let mut v = vec![0i64; n + 1];
    v[0] = -1;
    v[n] = 1;
    v
}

/// The `M`-th cyclotomic polynomial.
///
/// Computed by reducing to the radical: `Phi_M(x) = Phi_rad(M)(x^{M/rad(M)})`,
/// the prime-power lift identity applied once per prime. `Phi` of the
/// squarefree radical is obtained by exact division of `x^r - 1` by the
/// cyclotomic factors of proper divisors.
pub fn cyclotomic_poly(m: u64) -> Vec<i64> {
    assert!(m >= 1, "cyclotomic_poly: modulus must be positive");
    let rad: u64 = distinct_primes(m).iter().product::<u64>().max(1);
    let phi_rad = cyclotomic_poly_squarefree(rad);
    poly_compose_power(&phi_rad, (m / rad) as usize)
}

fn cyclotomic_poly_squarefree(r: u64) -> Vec<i64> {
    if r == 1 {
        return vec![-1, 1];
    }
    let mut quot = x_pow_minus_one(r as usize);
    for d in 1..r {
        if r % d == 0 {
            let phi_d = cyclotomic_poly_squarefree_rec(d);
            quot = poly_div_exact(&quot, &phi_d);
        }
    }
    quot
}

fn cyclotomic_poly_squarefree_rec(d: u64) -> Vec<i64> {
    // divisors of a squarefree number are squarefree
    cyclotomic_poly_squarefree(d)
}

/// Direct Moebius-product computation of `Phi_M`; independent oracle for
/// `cyclotomic_poly`, exercised in tests for all moduli up to 200.
pub fn cyclotomic_poly_moebius(m: u64) -> Vec<i64> {
    assert!(m >= 1);
    fn moebius(mut n: u64) -> i64 {
        let mut mu = 1i64;
        let mut d = 2u64;
        while d * d <= n {
            if n % d == 0 {
                n /= d;
                if n % d == 0 {
                    return 0;
                }
                mu = -mu;
            }
            d += 1;
        }
        if n > 1 {
            mu = -mu;
        }
        mu
    }
    let mut num: Vec<i64> = vec![1];
    let mut den: Vec<i64> = vec![1];
    for d in 1..=m {
        if m % d == 0 {
            match moebius(d) {
                1 => num = poly_mul(&num, &x_pow_minus_one((m / d) as usize)),
                -1 => den = poly_mul(&den, &x_pow_minus_one((m / d) as usize)),
                _ => {}
            }
        }
    }
    poly_div_exact(&num, &den)
}

// ---------------------------------------------------------------------------
// Per-modulus basis data, cached globally.
// ---------------------------------------------------------------------------

/// A canonical form `x^k mod Phi_M`, stored sparsely: cyclotomic reduction
/// rows have O(number of prime factors of M) support, so dense storage would
/// waste O(M * phi(M)) memory at prime-power-heavy moduli.
pub type SparseRow = Vec<(u32, i64)>;

/// Reduction data for one modulus: `Phi_M` and the canonical form of every
/// power `x^k` that arithmetic can produce.
pub struct CycBasis {
    pub modulus: u64,
    pub degree: usize,
    pub phi: Vec<i64>,
    /// `powers[k]` = sparse coefficients of `x^k mod Phi_M`, for `k` up to
    /// `max(M-1, 2*degree-2)`.
    powers: Vec<SparseRow>,
}

impl CycBasis {
    fn build(m: u64) -> CycBasis {
        let phi = cyclotomic_poly(m);
        let degree = phi.len() - 1;
        let top = std::cmp::max(m as usize, 2 * degree.max(1) - 1);
        // x^degree = -sum_{j<degree} phi_j x^j
        let top_row: SparseRow = phi[..degree]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| (j as u32, -c))
            .collect();
        let mut powers: Vec<SparseRow> = Vec::with_capacity(top);
        for k in 0..degree {
            powers.push(vec![(k as u32, 1)]);
        }
        let mut scratch = vec![0i64; degree];
        for k in degree..top {
            let mut touched: Vec<u32> = Vec::new();
            let mut add = |scratch: &mut Vec<i64>, touched: &mut Vec<u32>, idx: u32, c: i64| {
                if scratch[idx as usize] == 0 {
                    touched.push(idx);
                }
                scratch[idx as usize] = scratch[idx as usize]
                    .checked_add(c)
                    .expect("reduction overflow");
            };
            // multiply row k-1 by x; a term landing on x^degree re-reduces
            let prev = powers[k - 1].clone();
            for &(idx, c) in &prev {
                let up = idx + 1;
                if (up as usize) < degree {
                    add(&mut scratch, &mut touched, up, c);
                } else {
                    for &(j, r) in &top_row {
                        add(
                            &mut scratch,
                            &mut touched,
                            j,
                            c.checked_mul(r).expect("reduction overflow"),
                        );
                    }
                }
            }
            touched.sort_unstable();
            let mut row: SparseRow = Vec::with_capacity(touched.len());
            for idx in touched {
                let c = scratch[idx as usize];
                scratch[idx as usize] = 0;
                if c != 0 {
                    row.push((idx, c));
                }
            }
            powers.push(row);
        }
        CycBasis {
            modulus: m,
            degree,
            phi,
            powers,
        }
    }

    #[inline]
    pub fn power(&self, k: usize) -> &SparseRow {
        &self.powers[k]
    }
}

static BASIS_CACHE: Lazy<RwLock<HashMap<u64, Arc<CycBasis>>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

/// Fetch (building and caching if needed) the basis data for modulus `m`.
pub fn basis(m: u64) -> Arc<CycBasis> {
    if let Some(b) = BASIS_CACHE.read().unwrap().get(&m) {
        return b.clone();
    }
    let built = Arc::new(CycBasis::build(m));
    let mut cache = BASIS_CACHE.write().unwrap();
    cache.entry(m).or_insert(built).clone()
}

// ---------------------------------------------------------------------------
// CycNum
// ---------------------------------------------------------------------------

/// An element of `Z[zeta_M][1/p]` in canonical form.
///
/// The represented value is `(sum coeffs[k] zeta_M^k) / p^e` with the
/// polynomial reduced modulo `Phi_M` and the fraction normalized so that
/// either `e = 0` or not every coefficient is divisible by `p`.
#[derive(Clone, PartialEq, Eq)]
pub struct CycNum {
    modulus: u64,
    coeffs: Vec<BigInt>,
    p_base: u64,
    p_denom_exp: u32,
}

impl CycNum {
    pub fn zero() -> CycNum {
        CycNum {
            modulus: 1,
            coeffs: vec![BigInt::zero()],
            p_base: 1,
            p_denom_exp: 0,
        }
    }

    pub fn one() -> CycNum {
        CycNum::from_integer(BigInt::one())
    }

    pub fn from_integer(n: BigInt) -> CycNum {
        CycNum {
            modulus: 1,
            coeffs: vec![n],
            p_base: 1,
            p_denom_exp: 0,
        }
    }

    pub fn from_i64(n: i64) -> CycNum {
        CycNum::from_integer(BigInt::from(n))
    }

    /// `zeta_M^a`, with `a` reduced modulo `M`.
    pub fn root_of_unity(a: i64, m: u64) -> Result<CycNum, Error> {
        if m == 0 {
            return Err(Error::ZeroModulus);
        }
        let b = basis(m);
        let k = a.rem_euclid(m as i64) as usize;
        let mut coeffs = vec![BigInt::zero(); b.degree];
        for &(j, c) in b.power(k) {
            coeffs[j as usize] = BigInt::from(c);
        }
        Ok(CycNum {
            modulus: m,
            coeffs,
            p_base: 1,
            p_denom_exp: 0,
        })
    }

    /// Build from a histogram of root-of-unity exponents: the value
    /// `sum counts[k] * zeta_M^k`. This is the bridge out of the integer-only
    /// summation kernels.
    pub fn from_exponent_counts(m: u64, counts: &[i128]) -> CycNum {
        assert_eq!(counts.len(), m as usize);
        let b = basis(m);
        let mut acc = vec![0i128; b.degree];
        for (k, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &(j, r) in b.power(k) {
                acc[j as usize] += c * r as i128;
            }
        }
        CycNum {
            modulus: m,
            coeffs: acc.into_iter().map(BigInt::from).collect(),
            p_base: 1,
            p_denom_exp: 0,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn p_denom_exp(&self) -> u32 {
        self.p_denom_exp
    }

    pub fn p_base(&self) -> u64 {
        self.p_base
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Re-express in the basis of a larger modulus `m2` (requires `M | m2`).
    pub fn embed(&self, m2: u64) -> CycNum {
        assert!(m2 % self.modulus == 0, "embed: modulus must divide target");
        if m2 == self.modulus {
            return self.clone();
        }
        let step = (m2 / self.modulus) as usize;
        let b2 = basis(m2);
        let mut coeffs = vec![BigInt::zero(); b2.degree];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(j, r) in b2.power(k * step) {
                coeffs[j as usize] += c * r;
            }
        }
        CycNum {
            modulus: m2,
            coeffs,
            p_base: self.p_base,
            p_denom_exp: self.p_denom_exp,
        }
    }

    fn unify(a: &CycNum, b: &CycNum) -> (CycNum, CycNum) {
        let m = num_integer::lcm(a.modulus, b.modulus);
        let mut x = a.embed(m);
        let mut y = b.embed(m);
        // unify denominators
        if x.p_denom_exp > 0 || y.p_denom_exp > 0 {
            let p = if x.p_denom_exp > 0 { x.p_base } else { y.p_base };
            assert!(
                y.p_denom_exp == 0 || x.p_denom_exp == 0 || x.p_base == y.p_base,
                "mixed denominator primes {} and {}",
                x.p_base,
                y.p_base
            );
            let e = x.p_denom_exp.max(y.p_denom_exp);
            x.rescale_to(p, e);
            y.rescale_to(p, e);
        }
        (x, y)
    }

    fn rescale_to(&mut self, p: u64, e: u32) {
        debug_assert!(e >= self.p_denom_exp);
        if e == self.p_denom_exp && (self.p_denom_exp == 0 || self.p_base == p) {
            self.p_base = if e > 0 { p } else { 1 };
            return;
        }
        let factor = BigInt::from(p).pow(e - self.p_denom_exp);
        for c in &mut self.coeffs {
            *c *= &factor;
        }
        self.p_denom_exp = e;
        self.p_base = if e > 0 { p } else { 1 };
    }

    fn normalize(&mut self) {
        if self.is_zero() {
            self.p_denom_exp = 0;
            self.p_base = 1;
            return;
        }
        if self.p_denom_exp == 0 {
            self.p_base = 1;
            return;
        }
        let p = BigInt::from(self.p_base);
        while self.p_denom_exp > 0 {
            if self.coeffs.iter().all(|c| (c % &p).is_zero()) {
                for c in &mut self.coeffs {
                    *c /= &p;
                }
                self.p_denom_exp -= 1;
            } else {
                break;
            }
        }
        if self.p_denom_exp == 0 {
            self.p_base = 1;
        }
    }

    pub fn add(&self, other: &CycNum) -> CycNum {
        let (mut x, y) = CycNum::unify(self, other);
        for (a, b) in x.coeffs.iter_mut().zip(y.coeffs.iter()) {
            *a += b;
        }
        x.normalize();
        x
    }

    pub fn sub(&self, other: &CycNum) -> CycNum {
        self.add(&other.negate())
    }

    pub fn negate(&self) -> CycNum {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = -&*c;
        }
        out
    }

    pub fn mul(&self, other: &CycNum) -> CycNum {
        let (x, y) = CycNum::unify(self, other);
        let b = basis(x.modulus);
        let deg = b.degree;
        let mut prod = vec![BigInt::zero(); 2 * deg.max(1) - 1];
        for (i, a) in x.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, c) in y.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                prod[i + j] += a * c;
            }
        }
        let mut coeffs = vec![BigInt::zero(); deg];
        for (k, c) in prod.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < deg {
                coeffs[k] += c;
            } else {
                for &(j, r) in b.power(k) {
                    coeffs[j as usize] += &c * r;
                }
            }
        }
        let mut out = CycNum {
            modulus: x.modulus,
            coeffs,
            p_base: if x.p_denom_exp + y.p_denom_exp > 0 {
                x.p_base.max(y.p_base)
            } else {
                1
            },
            p_denom_exp: x.p_denom_exp + y.p_denom_exp,
        };
        out.normalize();
        out
    }

    /// Complex conjugation: `zeta_M -> zeta_M^{-1}`.
    pub fn conjugate(&self) -> CycNum {
        let b = basis(self.modulus);
        let m = self.modulus as usize;
        let mut coeffs = vec![BigInt::zero(); b.degree];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let kk = (m - k) % m;
            for &(j, r) in b.power(kk) {
                coeffs[j as usize] += c * r;
            }
        }
        CycNum {
            modulus: self.modulus,
            coeffs,
            p_base: self.p_base,
            p_denom_exp: self.p_denom_exp,
        }
    }

    pub fn scale_by_integer(&self, k: &BigInt) -> CycNum {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= k;
        }
        out.normalize();
        out
    }

    pub fn scale_by_i64(&self, k: i64) -> CycNum {
        self.scale_by_integer(&BigInt::from(k))
    }

    /// Divide exactly by `p^e`, staying inside `Z[zeta][1/p]`.
    pub fn divide_by_p_power(&self, p: u64, e: u32) -> CycNum {
        if e == 0 {
            return self.clone();
        }
        assert!(
            self.p_denom_exp == 0 || self.p_base == p,
            "mixed denominator primes"
        );
        let mut out = self.clone();
        out.p_base = p;
        out.p_denom_exp += e;
        out.normalize();
        out
    }

    /// Multiply by `p^e` for `e` of either sign.
    pub fn scale_by_p_power(&self, p: u64, e: i64) -> CycNum {
        if e >= 0 {
            self.scale_by_integer(&BigInt::from(p).pow(e as u32))
        } else {
            self.divide_by_p_power(p, (-e) as u32)
        }
    }

    pub fn equals(&self, other: &CycNum) -> bool {
        let (x, y) = CycNum::unify(self, other);
        x.coeffs == y.coeffs
    }

    /// Floating-point approximation, for display and sanity checks only.
    pub fn to_complex(&self) -> (f64, f64) {
        let m = self.modulus as f64;
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cf = c.to_f64().unwrap_or(f64::NAN);
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / m;
            re += cf * theta.cos();
            im += cf * theta.sin();
        }
        if self.p_denom_exp > 0 {
            let scale = (self.p_base as f64).powi(self.p_denom_exp as i32);
            re /= scale;
            im /= scale;
        }
        (re, im)
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_complex();
        write!(
            f,
            "CycNum(M={}, e={}, ~{:.6}{:+.6}i)",
            self.modulus, self.p_denom_exp, re, im
        )
    }
}

/// JSON form: coefficients as decimal strings so values outside the f64-safe
/// integer range survive a round trip.
#[derive(Serialize, Deserialize)]
pub struct CycNumJson {
    pub modulus: u64,
    pub coeffs: Vec<String>,
    pub p_denom_exp: u32,
    pub approx: [f64; 2],
}

impl CycNum {
    pub fn to_json(&self) -> CycNumJson {
        let (re, im) = self.to_complex();
        CycNumJson {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
            p_denom_exp: self.p_denom_exp,
            approx: [re, im],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn approx_eq(a: (f64, f64), b: (f64, f64), tol: f64) -> bool {
        (a.0 - b.0).abs() < tol && (a.1 - b.1).abs() < tol
    }

    #[test]
    fn phi_poly_small_cases() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn phi_poly_matches_moebius_product_up_to_200() {
        for m in 1..=200u64 {
            assert_eq!(
                cyclotomic_poly(m),
                cyclotomic_poly_moebius(m),
                "Phi_{} mismatch",
                m
            );
            assert_eq!(cyclotomic_poly(m).len() as u64 - 1, euler_phi_u64(m));
        }
    }

    #[test]
    fn roots_of_unity() {
        let one = CycNum::root_of_unity(0, 12).unwrap();
        assert!(one.equals(&CycNum::one()));
        let minus_one = CycNum::root_of_unity(6, 12).unwrap();
        assert!(minus_one.equals(&CycNum::from_i64(-1)));
        // zeta_12^4 = zeta_3
        let z = CycNum::root_of_unity(4, 12).unwrap();
        let expected = (
            (2.0 * std::f64::consts::PI / 3.0).cos(),
            (2.0 * std::f64::consts::PI / 3.0).sin(),
        );
        assert!(approx_eq(z.to_complex(), expected, 1e-12));
        assert!(CycNum::root_of_unity(1, 0).is_err());
    }

    #[test]
    fn basic_arithmetic() {
        let one = CycNum::one();
        assert!(one.add(&one.negate()).is_zero());
        let z5 = CycNum::root_of_unity(1, 5).unwrap();
        assert!(z5.conjugate().mul(&z5).equals(&CycNum::one()));
        let mut s = CycNum::zero();
        for a in 1..5 {
            s = s.add(&CycNum::root_of_unity(a, 5).unwrap());
        }
        assert!(s.equals(&CycNum::from_i64(-1)));
    }

    #[test]
    fn equality_across_moduli() {
        let z6 = CycNum::root_of_unity(1, 6).unwrap();
        let z3sq = CycNum::root_of_unity(2, 3).unwrap();
        assert!(z6.equals(&z3sq.negate()));
        let z7 = CycNum::root_of_unity(1, 7).unwrap();
        let z7sq = CycNum::root_of_unity(2, 7).unwrap();
        assert!(!z7.equals(&z7sq));
    }

    #[test]
    fn p_power_round_trip() {
        let z = CycNum::root_of_unity(3, 35).unwrap().scale_by_i64(10);
        let back = z.scale_by_i64(7).divide_by_p_power(7, 1);
        assert!(back.equals(&z));
        let q = z.divide_by_p_power(7, 2);
        assert!(q.scale_by_integer(&BigInt::from(49)).equals(&z));
        assert_eq!(q.p_denom_exp(), 2);
    }

    #[test]
    fn from_exponent_counts_matches_sum() {
        let mut counts = vec![0i128; 12];
        counts[3] = 5;
        counts[7] = -2;
        counts[0] = 1;
        let h = CycNum::from_exponent_counts(12, &counts);
        let direct = CycNum::root_of_unity(3, 12)
            .unwrap()
            .scale_by_i64(5)
            .add(&CycNum::root_of_unity(7, 12).unwrap().scale_by_i64(-2))
            .add(&CycNum::one());
        assert!(h.equals(&direct));
    }

    fn arb_cyc() -> impl Strategy<Value = CycNum> {
        (
            prop::sample::select(vec![1u64, 3, 4, 5, 6, 12, 15]),
            prop::collection::vec(-20i64..21, 1..5),
            0u32..3,
        )
            .prop_map(|(m, cs, e)| {
                let mut x = CycNum::zero();
                for (k, c) in cs.into_iter().enumerate() {
                    x = x.add(
                        &CycNum::root_of_unity(k as i64, m)
                            .unwrap()
                            .scale_by_i64(c),
                    );
                }
                x.divide_by_p_power(7, e)
            })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_cyc(), b in arb_cyc(), c in arb_cyc()) {
            let ab_c = a.mul(&b).mul(&c);
            let a_bc = a.mul(&b.mul(&c));
            prop_assert!(ab_c.equals(&a_bc));
            let lhs = a.mul(&b.add(&c));
            let rhs = a.mul(&b).add(&a.mul(&c));
            prop_assert!(lhs.equals(&rhs));
            prop_assert!(a.add(&b).equals(&b.add(&a)));
        }

        #[test]
        fn complex_embedding_is_multiplicative(a in arb_cyc(), b in arb_cyc()) {
            let (ar, ai) = a.to_complex();
            let (br, bi) = b.to_complex();
            let (pr, pi) = a.mul(&b).to_complex();
            let er = ar * br - ai * bi;
            let ei = ar * bi + ai * br;
            prop_assert!((pr - er).abs() < 1e-9 * (1.0 + er.abs()));
            prop_assert!((pi - ei).abs() < 1e-9 * (1.0 + ei.abs()));
        }
    }
}
