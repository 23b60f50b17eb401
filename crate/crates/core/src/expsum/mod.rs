//! Evaluation of the exponential sums `S_{l,m}` and `H(d;t)`.
//!
//! [`brute_force_h`] evaluates the general cominuscule prime-power sum from
//! its definition; [`gl4`] holds the specialized GL4 sum together with its
//! closed-form evaluation by cases; [`composite`] evaluates `H(d;t)` for
//! composite arguments over up to two primes and checks twisted
//! multiplicativity in both arguments.

pub mod composite;
pub mod gl4;
pub(crate) mod kernel;

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::charsums::{euler_phi, PrimeContext};
use crate::cyclotomic::CycNum;
use crate::root_system::ParabolicData;
use crate::Error;

pub use composite::{composite_h, verify_twisted_mult_d, verify_twisted_mult_t, CompositeSumSpec};
pub use gl4::{cancellation_sum, gl4_brute_force, gl4_closed_form, gl4_sign_table, CaseLabel};

/// Structure-constant signs on commutation pairs; any pair not present has
/// sign +1.
#[derive(Debug, Clone, Default)]
pub struct SignTable {
    signs: BTreeMap<(usize, usize, usize), i64>,
}

impl SignTable {
    pub fn all_plus() -> SignTable {
        SignTable::default()
    }

    pub fn set(&mut self, j: usize, k: usize, kp: usize, sign: i64) {
        assert!(sign == 1 || sign == -1);
        self.signs.insert((j, k, kp), sign);
    }

    pub fn get(&self, j: usize, k: usize, kp: usize) -> i64 {
        *self.signs.get(&(j, k, kp)).unwrap_or(&1)
    }

    pub fn flipped(&self, j: usize, k: usize, kp: usize) -> SignTable {
        let mut out = self.clone();
        out.signs.insert((j, k, kp), -self.get(j, k, kp));
        out
    }
}

/// One prime-power sum `S_{l,m}`: a cominuscule parabolic, a prime context,
/// Lusztig data `l`, character orders `m` (one entry per simple root), and a
/// sign table.
pub struct SumSpec<'a> {
    pub parabolic: &'a ParabolicData,
    pub ctx: &'a PrimeContext,
    pub ell: Vec<u32>,
    pub m: Vec<u32>,
    pub signs: SignTable,
}

impl<'a> SumSpec<'a> {
    pub fn new(
        parabolic: &'a ParabolicData,
        ctx: &'a PrimeContext,
        ell: Vec<u32>,
        m: Vec<u32>,
        signs: SignTable,
    ) -> Result<SumSpec<'a>, Error> {
        if ell.len() != parabolic.n() {
            return Err(Error::LengthMismatch {
                expected: parabolic.n(),
                got: ell.len(),
            });
        }
        if m.len() != parabolic.rank() {
            return Err(Error::LengthMismatch {
                expected: parabolic.rank(),
                got: m.len(),
            });
        }
        Ok(SumSpec {
            parabolic,
            ctx,
            ell,
            m,
            signs,
        })
    }
}

/// The divisibility support condition: for every simple root `alpha_j` in
/// the parabolic, `sum_i <alpha_j, gamma_i^vee> l_i <= m_j`. Outside it the
/// sum is 0 by definition.
pub fn support_condition(spec: &SumSpec) -> bool {
    let pd = spec.parabolic;
    for j in pd.levi_nodes() {
        let lhs: i64 = (1..=pd.n())
            .map(|i| pd.alpha_gamma_pairing(j, i) * spec.ell[i - 1] as i64)
            .sum();
        if lhs > spec.m[j - 1] as i64 {
            return false;
        }
    }
    true
}

/// All `(j, k, k')` with the effective denominator exponent
/// `ord_p D(k,k'; alpha_j) - m_j` attached.
fn effective_exponents(spec: &SumSpec) -> Vec<(usize, usize, usize, i64)> {
    let pd = spec.parabolic;
    let mut out = Vec::new();
    for (&j, pairs) in &pd.commutation_pairs {
        for p in pairs {
            let e = pd
                .denominator_exponent(&spec.ell, (p.k, p.kp), j)
                .expect("pair exists")
                - spec.m[j - 1] as i64;
            out.push((j, p.k, p.kp, e));
        }
    }
    out
}

/// Exact brute-force evaluation of `S_{l,m}` for a cominuscule parabolic:
/// `c_j` ranges over residues mod `p^{ord_p D_j}` (units when `l_j > 0`),
/// `b_k` is the canonical inverse of `c_k` mod `p^{l_k}` (0 when `l_k = 0`),
/// and the summand is the product of residue symbols `(c_k/p)^{q_k l_k}`
/// against `psi` of the commutation-pair terms plus the omitted-root term.
///
/// Returns 0 immediately outside the support condition. Errors if a psi-term
/// zeroed by the `b_k = 0` convention would have carried a positive
/// denominator exponent: such a sum is convention-dependent and is never
/// silently evaluated.
pub fn brute_force_h(spec: &SumSpec) -> Result<CycNum, Error> {
    let pd = spec.parabolic;
    if !pd.cominuscule {
        return Err(Error::Invalid(
            "brute_force_h requires a cominuscule parabolic".into(),
        ));
    }
    if !support_condition(spec) {
        return Ok(CycNum::zero());
    }

    let mut terms = Vec::new();
    for (j, k, kp, e) in effective_exponents(spec) {
        if e <= 0 {
            continue;
        }
        if spec.ell[k - 1] == 0 {
            return Err(Error::IllDefinedSum { k, kp, j, e });
        }
        terms.push(kernel::Term {
            b_var: Some(k - 1),
            c_var: kp - 1,
            exp: e as u32,
            sign: spec.signs.get(j, k, kp),
        });
    }
    let n_idx = pd.n();
    let omitted_e = spec.ell[n_idx - 1] as i64 - spec.m[pd.node - 1] as i64;
    if omitted_e > 0 {
        terms.push(kernel::Term {
            b_var: None,
            c_var: n_idx - 1,
            exp: omitted_e as u32,
            sign: 1,
        });
    }

    let n = spec.ctx.n();
    let vars: Vec<kernel::Var> = (1..=n_idx)
        .map(|k| {
            let range = pd.modulus_exponent(&spec.ell, k).expect("lengths checked");
            assert!(range >= 0, "modulus exponent must be nonnegative");
            kernel::Var {
                range_exp: range as u32,
                unit: spec.ell[k - 1] > 0,
                ell: spec.ell[k - 1],
                chi: (pd.q_values[k - 1].rem_euclid(n as i64) as u32 * spec.ell[k - 1]) % n,
            }
        })
        .collect();
    for t in &terms {
        assert!(
            t.exp as i64 <= vars[t.c_var].range_exp as i64,
            "term exponent exceeds its variable's modulus"
        );
    }

    Ok(kernel::evaluate(spec.ctx, &vars, &terms))
}

/// Closed-form value of `S_{l,m}` on the region where every psi-term is
/// integral: `prod_k p^{eps_k} phi(p^{l_k})` if `n(gamma_k) | l_k` for all
/// `k`, and 0 otherwise. Returns `None` where the hypothesis fails.
pub fn phifun_closed_form(spec: &SumSpec) -> Option<CycNum> {
    let pd = spec.parabolic;
    for (_, _, _, e) in effective_exponents(spec) {
        if e > 0 {
            return None;
        }
    }
    if spec.ell[pd.n() - 1] as i64 > spec.m[pd.node - 1] as i64 {
        return None;
    }
    let n = spec.ctx.n() as i64;
    let p = spec.ctx.p();
    for k in 1..=pd.n() {
        let n_gamma = n / num_integer::gcd(n, pd.q_values[k - 1].rem_euclid(n));
        if spec.ell[k - 1] as i64 % n_gamma != 0 {
            return Some(CycNum::zero());
        }
    }
    let mut value = BigInt::from(1);
    for k in 1..=pd.n() {
        let eps = pd.modulus_exponent(&spec.ell, k).unwrap() - spec.ell[k - 1] as i64;
        value *= BigInt::from(p).pow(eps as u32) * BigInt::from(euler_phi(p, spec.ell[k - 1]));
    }
    Some(CycNum::from_integer(value))
}

/// The generic-vanishing criterion: true iff one of the two maximal-gap
/// conditions holds, in which case the sum must vanish.
pub fn generic_vanishing_applies(spec: &SumSpec) -> bool {
    let pd = spec.parabolic;
    let exps = effective_exponents(spec);

    // condition 1: a pair (k,k') with l_k, l_k' > 0 whose gap exceeds 1 and
    // strictly dominates every other pair touching k'
    for &(j, k, kp, e) in &exps {
        if e <= 1 || spec.ell[k - 1] == 0 || spec.ell[kp - 1] == 0 {
            continue;
        }
        let dominated = exps.iter().all(|&(j0, k0, kp0, e0)| {
            if (j0, k0, kp0) == (j, k, kp) {
                true
            } else if k0 == kp || kp0 == kp {
                e > e0
            } else {
                true
            }
        });
        if dominated {
            return true;
        }
    }

    // condition 2: the omitted-root gap
    let n_idx = pd.n();
    let e_omit = spec.ell[n_idx - 1] as i64 - spec.m[pd.node - 1] as i64;
    if e_omit > 1 {
        let dominated = exps
            .iter()
            .all(|&(_, k0, kp0, e0)| if k0 == n_idx || kp0 == n_idx { e_omit > e0 } else { true });
        if dominated {
            return true;
        }
    }
    false
}
