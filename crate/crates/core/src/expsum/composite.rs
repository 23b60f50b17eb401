//! `H(d; t)` for composite arguments supported on up to two primes, and the
//! twisted-multiplicativity checks in `d` and in `t`.
//!
//! The evaluation is direct: `c_j` runs mod `D_j = d_j prod d_l^{<gamma_j,
//! gamma_l^vee>}` subject to per-prime unit conditions, `b_j` is the
//! canonical inverse of `c_j` mod `d_j`, the residue symbol is extended
//! multiplicatively in the lower argument, and `psi` is realized exactly by
//! splitting each rational argument into prime-power additive characters.

use num_bigint::BigInt;

use crate::charsums::PrimeContext;
use crate::cyclotomic::CycNum;
use crate::root_system::ParabolicData;
use crate::Error;

use super::SignTable;

/// `H(d; t)` over a cominuscule parabolic with composite `d`, `t`.
pub struct CompositeSumSpec<'a> {
    pub parabolic: &'a ParabolicData,
    pub contexts: Vec<&'a PrimeContext>,
    pub d: Vec<u64>,
    pub t: Vec<u64>,
    pub signs: SignTable,
}

fn ord_of(mut x: u64, p: u64) -> u32 {
    let mut e = 0;
    while x % p == 0 {
        x /= p;
        e += 1;
    }
    e
}

fn inv_mod_u64(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert_eq!(r0, 1, "inverse of non-unit");
    t0.rem_euclid(m as i128) as u64
}

fn pow_u64(b: u64, e: u32) -> u64 {
    b.checked_pow(e).expect("overflow in power")
}

impl<'a> CompositeSumSpec<'a> {
    pub fn new(
        parabolic: &'a ParabolicData,
        contexts: Vec<&'a PrimeContext>,
        d: Vec<u64>,
        t: Vec<u64>,
        signs: SignTable,
    ) -> Result<CompositeSumSpec<'a>, Error> {
        if d.len() != parabolic.n() {
            return Err(Error::LengthMismatch {
                expected: parabolic.n(),
                got: d.len(),
            });
        }
        if t.len() != parabolic.rank() {
            return Err(Error::LengthMismatch {
                expected: parabolic.rank(),
                got: t.len(),
            });
        }
        if contexts.len() > 2 {
            return Err(Error::Invalid(
                "composite sums support at most two primes".into(),
            ));
        }
        if contexts.len() > 1 {
            let n0 = contexts[0].n();
            if contexts.iter().any(|c| c.n() != n0) {
                return Err(Error::Invalid(
                    "all contexts must share the cover degree n".into(),
                ));
            }
        }
        for &x in d.iter().chain(t.iter()) {
            if x == 0 {
                return Err(Error::Invalid("arguments must be nonzero".into()));
            }
            let mut rest = x;
            for ctx in &contexts {
                while rest % ctx.p() == 0 {
                    rest /= ctx.p();
                }
            }
            if rest != 1 {
                return Err(Error::UnsupportedPrime(rest));
            }
        }
        Ok(CompositeSumSpec {
            parabolic,
            contexts,
            d,
            t,
            signs,
        })
    }

    fn ell_at(&self, ctx: &PrimeContext) -> Vec<u32> {
        self.d.iter().map(|&x| ord_of(x, ctx.p())).collect()
    }

    fn m_at(&self, ctx: &PrimeContext) -> Vec<u32> {
        self.t.iter().map(|&x| ord_of(x, ctx.p())).collect()
    }
}

struct CompTerm {
    b_var: Option<usize>,
    c_var: usize,
    sign: i64,
    /// per-prime effective denominator exponents
    exps: Vec<i64>,
}

/// Direct evaluation of `H(d; t)`; 0 outside the support condition, error if
/// a zeroed psi-term is non-integral at some prime ("never silently
/// evaluated"), exactly as in the prime-power case.
pub fn composite_h(spec: &CompositeSumSpec) -> Result<CycNum, Error> {
    let pd = spec.parabolic;
    if !pd.cominuscule {
        return Err(Error::Invalid("composite_h requires cominuscule".into()));
    }
    let nprimes = spec.contexts.len();
    let nvars = pd.n();

    // per-prime Lusztig data / character orders
    let ells: Vec<Vec<u32>> = spec.contexts.iter().map(|c| spec.ell_at(c)).collect();
    let ms: Vec<Vec<u32>> = spec.contexts.iter().map(|c| spec.m_at(c)).collect();

    // support condition per prime
    for (pi, _) in spec.contexts.iter().enumerate() {
        for j in pd.levi_nodes() {
            let lhs: i64 = (1..=nvars)
                .map(|i| pd.alpha_gamma_pairing(j, i) * ells[pi][i - 1] as i64)
                .sum();
            if lhs > ms[pi][j - 1] as i64 {
                return Ok(CycNum::zero());
            }
        }
    }

    // terms with per-prime exponents
    let mut terms: Vec<CompTerm> = Vec::new();
    for (&j, pairs) in &pd.commutation_pairs {
        for pr in pairs {
            let exps: Vec<i64> = (0..nprimes)
                .map(|pi| {
                    pd.denominator_exponent(&ells[pi], (pr.k, pr.kp), j).unwrap()
                        - ms[pi][j - 1] as i64
                })
                .collect();
            if exps.iter().all(|&e| e <= 0) {
                continue;
            }
            for (pi, &e) in exps.iter().enumerate() {
                if e > 0 && ells[pi][pr.k - 1] == 0 {
                    if spec.d[pr.k - 1] == 1 {
                        // b_k = 0 wipes the whole term only when d_k = 1;
                        // then a positive exponent is the ill-defined case
                        return Err(Error::IllDefinedSum {
                            k: pr.k,
                            kp: pr.kp,
                            j,
                            e,
                        });
                    }
                    // d_k has no p-part: b_k mod p^e is not pinned by the
                    // residue data of c_k
                    return Err(Error::IllDefinedSum {
                        k: pr.k,
                        kp: pr.kp,
                        j,
                        e,
                    });
                }
            }
            terms.push(CompTerm {
                b_var: Some(pr.k - 1),
                c_var: pr.kp - 1,
                sign: spec.signs.get(j, pr.k, pr.kp),
                exps,
            });
        }
    }
    {
        let exps: Vec<i64> = (0..nprimes)
            .map(|pi| ells[pi][nvars - 1] as i64 - ms[pi][pd.node - 1] as i64)
            .collect();
        if exps.iter().any(|&e| e > 0) {
            terms.push(CompTerm {
                b_var: None,
                c_var: nvars - 1,
                sign: 1,
                exps,
            });
        }
    }

    // psi common denominator exponents per prime
    let kpsi: Vec<u32> = (0..nprimes)
        .map(|pi| {
            terms
                .iter()
                .map(|t| t.exps[pi].max(0) as u32)
                .max()
                .unwrap_or(0)
        })
        .collect();
    let psi_mods: Vec<u64> = (0..nprimes)
        .map(|pi| pow_u64(spec.contexts[pi].p(), kpsi[pi]))
        .collect();

    // per-term, per-prime multiplier w: term contributes
    // sign * b * c * w mod p^{kpsi}
    let w_table: Vec<Vec<u64>> = terms
        .iter()
        .map(|t| {
            (0..nprimes)
                .map(|pi| {
                    let e = t.exps[pi];
                    if e <= 0 {
                        return 0;
                    }
                    let pm = psi_mods[pi];
                    let mut w = pow_u64(spec.contexts[pi].p(), kpsi[pi] - e as u32) % pm;
                    for (pj, ctxj) in spec.contexts.iter().enumerate() {
                        if pj == pi {
                            continue;
                        }
                        let ej = t.exps[pj];
                        let q = ctxj.p();
                        let factor = if ej >= 0 {
                            inv_mod_u64(pow_u64(q, ej as u32) % pm, pm)
                        } else {
                            pow_u64(q, (-ej) as u32) % pm
                        };
                        w = (w as u128 * factor as u128 % pm as u128) as u64;
                    }
                    w
                })
                .collect()
        })
        .collect();

    // reduced modulus per variable and prime
    let mut k_red = vec![vec![0u32; nprimes]; nvars];
    for v in 0..nvars {
        let has_b = terms.iter().any(|t| t.b_var == Some(v));
        for pi in 0..nprimes {
            let lv = ells[pi][v];
            let mut k = if lv > 0 { 1 } else { 0 };
            if has_b {
                k = k.max(lv);
            }
            for t in &terms {
                if t.c_var == v && t.exps[pi] > 0 {
                    k = k.max(t.exps[pi] as u32);
                }
            }
            let range = pd.modulus_exponent(&ells[pi], v + 1).unwrap();
            assert!(k as i64 <= range, "reduced exponent exceeds modulus");
            k_red[v][pi] = k;
        }
    }

    // variable value lists
    struct Vals {
        entries: Vec<(u64, u64, u32)>, // (c mod m_v, b mod d_v, chi exponent)
    }
    let n = spec.contexts.first().map_or(1, |c| c.n());
    let mut multiplier = BigInt::from(1);
    let vals: Vec<Vals> = (0..nvars)
        .map(|v| {
            let m_v: u64 = (0..nprimes)
                .map(|pi| pow_u64(spec.contexts[pi].p(), k_red[v][pi]))
                .product();
            let d_v = spec.d[v];
            for (pi, ctx) in spec.contexts.iter().enumerate() {
                let range = pd.modulus_exponent(&ells[pi], v + 1).unwrap() as u32;
                multiplier *= BigInt::from(ctx.p()).pow(range - k_red[v][pi]);
            }
            let mut entries = Vec::new();
            for c in 0..m_v {
                let unit_ok = spec
                    .contexts
                    .iter()
                    .enumerate()
                    .all(|(pi, ctx)| ells[pi][v] == 0 || c % ctx.p() != 0);
                if !unit_ok {
                    continue;
                }
                let b = if d_v == 1 { 0 } else { inv_mod_u64(c % d_v, d_v) };
                let mut chi = 0u32;
                for (pi, ctx) in spec.contexts.iter().enumerate() {
                    let lv = ells[pi][v];
                    if lv > 0 {
                        let e = pd.q_values[v].rem_euclid(n as i64) as u32 * lv % n;
                        if e != 0 {
                            chi = (chi + ctx.symbol_exponent(c, e as i64).unwrap()) % n;
                        }
                    }
                }
                entries.push((c, b, chi));
            }
            Vals { entries }
        })
        .collect();

    // working root-of-unity modulus
    let modulus: u64 = n as u64 * psi_mods.iter().product::<u64>();
    let mut counts = vec![0i128; modulus as usize];
    // zeta_n^u * prod_p zeta_{p^k}^{v_p} = zeta_M^{u (M/n) + sum v_p (M/p^k)}
    let u_coef = modulus / n as u64;
    let v_coefs: Vec<u64> = psi_mods.iter().map(|&pm| modulus / pm).collect();

    // odometer over all variables
    let mut idx = vec![0usize; nvars];
    'outer: loop {
        let tuple: Vec<&(u64, u64, u32)> = (0..nvars).map(|v| &vals[v].entries[idx[v]]).collect();
        let mut u = 0u64;
        for t in &tuple {
            u = (u + t.2 as u64) % n as u64;
        }
        let mut e = (u as u128 * u_coef as u128) % modulus as u128;
        for pi in 0..nprimes {
            if psi_mods[pi] == 1 {
                continue;
            }
            let pm = psi_mods[pi];
            let mut v_p = 0u64;
            for (ti, t) in terms.iter().enumerate() {
                let w = w_table[ti][pi];
                if w == 0 {
                    continue;
                }
                let b = match t.b_var {
                    Some(k) => tuple[k].1,
                    None => 1,
                };
                let c = tuple[t.c_var].0;
                let raw = (b as u128 * (c % pm) as u128 % pm as u128 * w as u128
                    % pm as u128) as u64;
                v_p = if t.sign >= 0 {
                    (v_p + raw) % pm
                } else {
                    (v_p + pm - raw) % pm
                };
            }
            e = (e + v_p as u128 * v_coefs[pi] as u128) % modulus as u128;
        }
        counts[e as usize] += 1;

        // advance
        let mut v = 0;
        loop {
            if v == nvars {
                break 'outer;
            }
            idx[v] += 1;
            if idx[v] < vals[v].entries.len() {
                break;
            }
            idx[v] = 0;
            v += 1;
        }
    }

    Ok(CycNum::from_exponent_counts(modulus, &counts).scale_by_integer(&multiplier))
}

/// Residue symbol `(a / b)^power` for composite `b` supported on the given
/// contexts, extended multiplicatively in the lower argument.
fn composite_symbol_exponent(
    contexts: &[&PrimeContext],
    a: u64,
    b: u64,
    power: i64,
) -> Result<u32, Error> {
    let n = contexts.first().map_or(1, |c| c.n());
    let mut u = 0i64;
    let mut rest = b;
    for ctx in contexts {
        let e = ord_of(rest, ctx.p());
        if e > 0 {
            if a % ctx.p() == 0 {
                return Err(Error::NotAUnit(a, ctx.p()));
            }
            u += ctx.index_of(a) as i64 * e as i64 * power;
            rest /= pow_u64(ctx.p(), e);
        }
    }
    if rest != 1 {
        return Err(Error::UnsupportedPrime(rest));
    }
    Ok(u.rem_euclid(n as i64) as u32)
}

/// Check `H(d;t) = prod_k (E_k/f_k)^{q_k} (F_k/e_k)^{q_k} H(e;t) H(f;t)` for
/// the coprime split `d_i = e_i f_i`.
pub fn verify_twisted_mult_d(spec: &CompositeSumSpec, e_split: &[u64]) -> Result<bool, Error> {
    let pd = spec.parabolic;
    let nvars = pd.n();
    if e_split.len() != nvars {
        return Err(Error::LengthMismatch {
            expected: nvars,
            got: e_split.len(),
        });
    }
    let mut f_split = Vec::with_capacity(nvars);
    for (i, (&d, &e)) in spec.d.iter().zip(e_split).enumerate() {
        if e == 0 || d % e != 0 {
            return Err(Error::Invalid(format!("split entry {i} does not divide d")));
        }
        f_split.push(d / e);
    }
    let prod_e: u64 = e_split.iter().product();
    let prod_f: u64 = f_split.iter().product();
    if num_integer::gcd(prod_e, prod_f) != 1 {
        return Err(Error::Invalid("split parts are not coprime".into()));
    }

    let lhs = composite_h(spec)?;

    let sub = |dvec: Vec<u64>| -> Result<CycNum, Error> {
        composite_h(&CompositeSumSpec::new(
            pd,
            spec.contexts.clone(),
            dvec,
            spec.t.clone(),
            spec.signs.clone(),
        )?)
    };
    let he = sub(e_split.to_vec())?;
    let hf = sub(f_split.clone())?;

    let n = spec.contexts.first().map_or(1, |c| c.n());
    let mut u = 0u32;
    for k in 1..=nvars {
        // E_k = e_k prod_{l>k} e_l^{<gamma_k, gamma_l^vee>}, same for F_k
        let mut ek = e_split[k - 1];
        let mut fk = f_split[k - 1];
        for l in k + 1..=nvars {
            let pw = pd.pairing[k - 1][l - 1];
            assert!(pw >= 0);
            ek = ek.checked_mul(pow_u64(e_split[l - 1], pw as u32)).unwrap();
            fk = fk.checked_mul(pow_u64(f_split[l - 1], pw as u32)).unwrap();
        }
        let q_k = pd.q_values[k - 1];
        if f_split[k - 1] > 1 {
            u = (u + composite_symbol_exponent(&spec.contexts, ek % f_split[k - 1], f_split[k - 1], q_k)?) % n;
        }
        if e_split[k - 1] > 1 {
            u = (u + composite_symbol_exponent(&spec.contexts, fk % e_split[k - 1], e_split[k - 1], q_k)?) % n;
        }
    }
    let symbol = CycNum::root_of_unity(u as i64, n as u64)?;
    let rhs = symbol.mul(&he).mul(&hf);
    Ok(lhs.equals(&rhs))
}

/// Check `H(d; t) = prod_k prod_i (t_i^{-<gamma_k, omega_i^vee>}/d_k)^{q_k}
/// H(d; t')` for `t_i = tco_i t'_i` with the `tco` part coprime to all `d`.
pub fn verify_twisted_mult_t(spec: &CompositeSumSpec, t_co: &[u64]) -> Result<bool, Error> {
    let pd = spec.parabolic;
    let r = pd.rank();
    if t_co.len() != r {
        return Err(Error::LengthMismatch {
            expected: r,
            got: t_co.len(),
        });
    }
    let mut t_rest = Vec::with_capacity(r);
    for (i, (&t, &tc)) in spec.t.iter().zip(t_co).enumerate() {
        if tc == 0 || t % tc != 0 {
            return Err(Error::Invalid(format!("t-split entry {i} does not divide t")));
        }
        t_rest.push(t / tc);
    }
    let prod_tc: u64 = t_co.iter().product();
    let prod_d: u64 = spec.d.iter().product();
    if num_integer::gcd(prod_tc, prod_d) != 1 {
        return Err(Error::Invalid("t-part is not coprime to d".into()));
    }

    let lhs = composite_h(spec)?;
    let hrest = composite_h(&CompositeSumSpec::new(
        pd,
        spec.contexts.clone(),
        spec.d.clone(),
        t_rest,
        spec.signs.clone(),
    )?)?;

    let n = spec.contexts.first().map_or(1, |c| c.n());
    let mut u = 0i64;
    for k in 1..=pd.n() {
        if spec.d[k - 1] == 1 {
            continue;
        }
        for i in 1..=r {
            if t_co[i - 1] == 1 {
                continue;
            }
            let pw = -pd.gamma_coweight(k, i) * pd.q_values[k - 1];
            u += composite_symbol_exponent(&spec.contexts, t_co[i - 1] % spec.d[k - 1], spec.d[k - 1], pw)?
                as i64;
        }
    }
    let symbol = CycNum::root_of_unity(u.rem_euclid(n as i64), n as u64)?;
    let rhs = symbol.mul(&hrest);
    Ok(lhs.equals(&rhs))
}

#[cfg(test)]
mod tests {
    use super::super::{brute_force_h, gl4_sign_table, SumSpec};
    use super::*;
    use crate::expsum::gl4::gl4_parabolic;

    #[test]
    fn all_ones_gives_one() {
        let pd = gl4_parabolic();
        let ctx7 = PrimeContext::new(7, 3).unwrap();
        let spec = CompositeSumSpec::new(
            &pd,
            vec![&ctx7],
            vec![1, 1, 1, 1],
            vec![1, 1, 1],
            SignTable::all_plus(),
        )
        .unwrap();
        assert!(composite_h(&spec).unwrap().equals(&CycNum::one()));
    }

    #[test]
    fn single_prime_matches_prime_power_sum() {
        let pd = gl4_parabolic();
        let ctx = PrimeContext::new(7, 3).unwrap();
        let signs = gl4_sign_table(&pd);
        for (ell, m) in [
            ([1u32, 1, 1, 1], [1u32, 0, 1]),
            ([0, 1, 1, 1], [0, 1, 0]),
            ([1, 2, 1, 0], [2, 0, 1]),
        ] {
            let d: Vec<u64> = ell.iter().map(|&e| 7u64.pow(e)).collect();
            let t: Vec<u64> = m.iter().map(|&e| 7u64.pow(e)).collect();
            let cspec =
                CompositeSumSpec::new(&pd, vec![&ctx], d, t, signs.clone()).unwrap();
            let composite = composite_h(&cspec);
            let pspec =
                SumSpec::new(&pd, &ctx, ell.to_vec(), m.to_vec(), signs.clone()).unwrap();
            let prime_power = brute_force_h(&pspec);
            match (composite, prime_power) {
                (Ok(a), Ok(b)) => assert!(a.equals(&b), "mismatch at {ell:?} {m:?}"),
                (Err(_), Err(_)) => {}
                (a, b) => panic!("inconsistent errors at {ell:?} {m:?}: {a:?} vs {b:?}"),
            }
        }
    }

    #[test]
    fn unsupported_prime_rejected() {
        let pd = gl4_parabolic();
        let ctx = PrimeContext::new(7, 3).unwrap();
        assert!(matches!(
            CompositeSumSpec::new(
                &pd,
                vec![&ctx],
                vec![5, 1, 1, 1],
                vec![1, 1, 1],
                SignTable::all_plus()
            ),
            Err(Error::UnsupportedPrime(5))
        ));
    }

    #[test]
    fn twisted_mult_d_two_primes() {
        let pd = gl4_parabolic();
        let ctx7 = PrimeContext::new(7, 3).unwrap();
        let ctx13 = PrimeContext::new(13, 3).unwrap();
        let signs = gl4_sign_table(&pd);
        // d = (7, 13, 7, 91), t = (7, 1, 7): in support at both primes
        let spec = CompositeSumSpec::new(
            &pd,
            vec![&ctx7, &ctx13],
            vec![7, 13, 7, 91],
            vec![7, 1, 7],
            signs.clone(),
        )
        .unwrap();
        let e_split = vec![7u64, 1, 7, 7];
        assert!(verify_twisted_mult_d(&spec, &e_split).unwrap());
        // trivial split e = all ones
        assert!(verify_twisted_mult_d(&spec, &[1, 1, 1, 1]).unwrap());
        // swapped split gives the same statement
        let f_split = vec![1u64, 13, 1, 13];
        assert!(verify_twisted_mult_d(&spec, &f_split).unwrap());
    }

    #[test]
    fn twisted_mult_t_prime_not_dividing_d() {
        let pd = gl4_parabolic();
        let ctx7 = PrimeContext::new(7, 3).unwrap();
        let ctx13 = PrimeContext::new(13, 3).unwrap();
        let signs = gl4_sign_table(&pd);
        // d supported on 7, t carries a factor of 13
        let spec = CompositeSumSpec::new(
            &pd,
            vec![&ctx7, &ctx13],
            vec![7, 7, 7, 7],
            vec![13, 7, 13],
            signs,
        )
        .unwrap();
        assert!(verify_twisted_mult_t(&spec, &[13, 1, 13]).unwrap());
        // trivial coprime part
        assert!(verify_twisted_mult_t(&spec, &[1, 1, 1]).unwrap());
    }
}
