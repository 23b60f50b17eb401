//! Exact summation engine shared by the prime-power sum evaluators.
//!
//! A sum is described by variables `c_i` ranging over residues mod
//! `p^{range_exp}` (units when flagged) and bilinear character terms
//! `sign * b_k * c_{k'} / p^e`, where `b_k` is the canonical inverse of
//! `c_k` mod `p^{ell_k}`. The engine iterates one representative per residue
//! class that the summand actually depends on and scales by the exact fiber
//! count, accumulating an integer histogram of root-of-unity exponents; the
//! histogram is converted to a `CycNum` once at the end, so the hot loop is
//! pure integer arithmetic.
//!
//! Two structural reductions keep the working modulus and loop count small:
//! variables coupled to no other variable are summed out analytically, and
//! for a heavy never-inverted variable the engine buckets the outer tuples
//! by the coefficient multiplying that variable inside `psi`, precomputes
//! the variable's character sums per coefficient, and contracts the tables.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::charsums::{inverse_mod, PrimeContext};
use crate::cyclotomic::CycNum;

/// One summation variable.
#[derive(Debug, Clone)]
pub struct Var {
    /// `c` ranges over residues mod `p^range_exp`.
    pub range_exp: u32,
    /// Restrict to units (the case `l > 0`).
    pub unit: bool,
    /// Modulus exponent of the canonical inverse `b`.
    pub ell: u32,
    /// Residue-symbol exponent: the summand carries `(c/p)^{chi}`.
    pub chi: u32,
}

/// One additive-character term `sign * b_{b_var} * c_{c_var} / p^{exp}`;
/// `b_var = None` means the factor `b` is absent.
#[derive(Debug, Clone, Copy)]
pub struct Term {
    pub b_var: Option<usize>,
    pub c_var: usize,
    pub exp: u32,
    pub sign: i64,
}

/// Precomputed `(c, b, chi_exponent)` triples for one variable at its
/// reduced modulus.
struct VarVals {
    vals: Vec<(u64, u64, u32)>,
    k_red: u32,
}

const TABLE_PATH_THRESHOLD: u128 = 20_000_000;

/// Exact value of
/// `sum over all c-tuples of prod_i (c_i/p)^{chi_i} * psi(sum_t sign_t b c / p^{e_t})`.
pub fn evaluate(ctx: &PrimeContext, vars: &[Var], terms: &[Term]) -> CycNum {
    let p = ctx.p();
    let n = ctx.n() as u64;

    // terms whose inverted variable has empty inverse modulus contribute b=0
    let terms: Vec<Term> = terms
        .iter()
        .filter(|t| t.b_var.map_or(true, |k| vars[k].ell > 0))
        .copied()
        .collect();
    for t in &terms {
        assert!(t.exp > 0);
        assert!(t.exp as i64 <= vars[t.c_var].range_exp as i64);
    }

    // A variable coupled to no other variable factors out analytically; this
    // keeps the working additive modulus at the size of the coupled part (an
    // omitted-root variable alone can otherwise force a p^{l_N}-th root of
    // unity basis onto the whole computation).
    let mut separable = vec![true; vars.len()];
    for t in &terms {
        if let Some(k) = t.b_var {
            separable[t.c_var] = false;
            separable[k] = false;
        }
    }
    if separable.iter().any(|&s| s) {
        let mut prefactor = CycNum::one();
        let mut kept_vars = Vec::new();
        let mut var_map = vec![usize::MAX; vars.len()];
        for (i, v) in vars.iter().enumerate() {
            if separable[i] {
                let my_terms: Vec<&Term> = terms.iter().filter(|t| t.c_var == i).collect();
                prefactor = prefactor.mul(&separable_factor(ctx, v, &my_terms));
                if prefactor.is_zero() {
                    return CycNum::zero();
                }
            } else {
                var_map[i] = kept_vars.len();
                kept_vars.push(v.clone());
            }
        }
        let kept_terms: Vec<Term> = terms
            .iter()
            .filter(|t| !separable[t.c_var])
            .map(|t| Term {
                b_var: t.b_var.map(|k| var_map[k]),
                c_var: var_map[t.c_var],
                exp: t.exp,
                sign: t.sign,
            })
            .collect();
        return evaluate_coupled(ctx, &kept_vars, &kept_terms).mul(&prefactor);
    }
    evaluate_coupled(ctx, vars, &terms)
}

/// The factor contributed by a variable whose psi-terms involve no other
/// variable: `sum_c (c/p)^{chi} zeta_{p^K}^{c s}` over the full range.
fn separable_factor(ctx: &PrimeContext, var: &Var, terms: &[&Term]) -> CycNum {
    let p = ctx.p();
    let n = ctx.n();
    let cap = terms.iter().map(|t| t.exp).max().unwrap_or(0);
    // net coefficient s = sum sign * p^{cap - e}, and its p-valuation
    let pk = p.pow(cap);
    let mut s: u64 = 0;
    for t in terms {
        let w = p.pow(cap - t.exp) % pk.max(1);
        s = if t.sign >= 0 {
            (s + w) % pk.max(1)
        } else {
            (s + pk - w) % pk.max(1)
        };
    }
    let d = if s == 0 {
        cap
    } else {
        let mut x = s;
        let mut d = 0;
        while x % p == 0 {
            x /= p;
            d += 1;
        }
        d
    };
    let k0 = cap - d; // conductor exponent of the additive part
    assert!(k0 <= var.range_exp);

    if !var.unit {
        // plain geometric sum over all residues: it collapses unless the
        // additive part is trivial
        assert_eq!(var.chi % n, 0);
        return if k0 == 0 {
            CycNum::from_integer(BigInt::from(p).pow(var.range_exp))
        } else {
            CycNum::zero()
        };
    }
    if k0 >= 2 {
        // group c = u (1 + v p^{k0-1}): the symbol has conductor dividing p,
        // so each fiber carries the full-period factor sum_v zeta_p^{uv} = 0
        return CycNum::zero();
    }
    // reduced sum over units mod p, scaled by the exact fiber count
    let fiber = BigInt::from(p).pow(var.range_exp - 1);
    let u_coef = s / p.pow(d).max(1);
    let modulus = n as u64 * p;
    let mut counts = vec![0i128; modulus as usize];
    for c in 1..p {
        let u = if var.chi % n == 0 {
            0
        } else {
            ctx.symbol_exponent(c, var.chi as i64).unwrap() as u64
        };
        let v = if k0 == 1 { c * u_coef % p } else { 0 };
        let e = (u * p + v * n as u64) % modulus;
        counts[e as usize] += 1;
    }
    CycNum::from_exponent_counts(modulus, &counts).scale_by_integer(&fiber)
}

fn evaluate_coupled(ctx: &PrimeContext, vars: &[Var], terms: &[Term]) -> CycNum {
    if vars.is_empty() {
        return CycNum::one();
    }
    let p = ctx.p();
    let n = ctx.n() as u64;
    let cap_k = terms.iter().map(|t| t.exp).max().unwrap_or(0);
    let pk = p.pow(cap_k);
    let modulus = n * pk;

    // reduced iteration exponent per variable
    let mut k_red = vec![0u32; vars.len()];
    for (i, v) in vars.iter().enumerate() {
        let mut k = if v.unit { 1 } else { 0 };
        for t in terms {
            if t.c_var == i {
                k = k.max(t.exp);
            }
            if t.b_var == Some(i) {
                k = k.max(t.exp.min(v.ell));
            }
        }
        k_red[i] = k.min(v.range_exp);
    }

    // exact fiber multiplier from all the range reductions
    let mut multiplier = BigInt::from(1);
    for (i, v) in vars.iter().enumerate() {
        multiplier *= BigInt::from(p).pow(v.range_exp - k_red[i]);
    }

    let var_vals: Vec<VarVals> = vars
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let k = k_red[i];
            let m = p.pow(k);
            let bmod = v.ell.min(k);
            let mut vals = Vec::new();
            for c in 0..m {
                if v.unit && c % p == 0 {
                    continue;
                }
                let b = if v.ell == 0 || c % p == 0 {
                    0
                } else {
                    inverse_mod(c, p, bmod).expect("unit has an inverse")
                };
                let chi = if v.chi % ctx.n() == 0 || c % p == 0 {
                    0
                } else {
                    ctx.symbol_exponent(c, v.chi as i64).expect("unit symbol")
                };
                vals.push((c, b, chi));
            }
            VarVals { vals, k_red: k }
        })
        .collect();

    // pivot: the heaviest variable that is never inverted (terms in which it
    // appears are linear in it); fall back to plain nesting if none exists
    let never_b: Vec<bool> = (0..vars.len())
        .map(|i| terms.iter().all(|t| t.b_var != Some(i)))
        .collect();
    let pivot = (0..vars.len())
        .filter(|&i| never_b[i])
        .max_by_key(|&i| var_vals[i].vals.len())
        .unwrap_or(0);
    let pivot_linear = never_b[pivot];

    let mut order: Vec<usize> = (0..vars.len()).filter(|&i| i != pivot).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(var_vals[i].k_red));

    let pivot_c_terms: Vec<Term> = terms.iter().filter(|t| t.c_var == pivot).copied().collect();
    let pivot_b_terms: Vec<Term> = terms
        .iter()
        .filter(|t| t.b_var == Some(pivot) && t.c_var != pivot)
        .copied()
        .collect();
    let other_terms: Vec<Term> = terms
        .iter()
        .filter(|t| t.c_var != pivot && t.b_var != Some(pivot))
        .copied()
        .collect();

    // at which depth is each non-pivot term ready (both variables fixed)?
    let depth_of = |v: usize| order.iter().position(|&x| x == v).unwrap();
    let mut ready: Vec<Vec<Term>> = vec![Vec::new(); order.len().max(1)];
    for t in &other_terms {
        let mut d = depth_of(t.c_var);
        if let Some(b) = t.b_var {
            d = d.max(depth_of(b));
        }
        ready[d].push(*t);
    }

    let outer_cost: u128 = order
        .iter()
        .map(|&i| var_vals[i].vals.len().max(1) as u128)
        .product();
    let pivot_len = var_vals[pivot].vals.len().max(1) as u128;
    let use_table = pivot_linear
        && cap_k > 0
        && outer_cost.saturating_mul(pivot_len) > TABLE_PATH_THRESHOLD
        && pivot_len > 1;

    let frame = Frame {
        var_vals: &var_vals,
        order: &order,
        ready: &ready,
        pivot,
        pivot_c_terms: &pivot_c_terms,
        pivot_b_terms: &pivot_b_terms,
        p,
        n,
        pk,
        modulus,
    };

    let hist = if use_table {
        evaluate_table_path(&frame)
    } else {
        evaluate_direct(&frame)
    };

    CycNum::from_exponent_counts(modulus, &hist).scale_by_integer(&multiplier)
}

struct Frame<'a> {
    var_vals: &'a [VarVals],
    order: &'a [usize],
    ready: &'a [Vec<Term>],
    pivot: usize,
    /// terms linear in the pivot (`c_var = pivot`)
    pivot_c_terms: &'a [Term],
    /// terms with the pivot inverted (only when no linear pivot exists)
    pivot_b_terms: &'a [Term],
    p: u64,
    n: u64,
    pk: u64,
    modulus: u64,
}

#[derive(Clone)]
struct Assignment {
    c: Vec<u64>,
    b: Vec<u64>,
}

#[inline]
fn term_value(t: &Term, asn: &Assignment, pk: u64, p: u64) -> u64 {
    let b = match t.b_var {
        Some(k) => asn.b[k],
        None => 1,
    };
    let scale = pk / p.pow(t.exp);
    let raw = (b as u128 * asn.c[t.c_var] as u128 % pk as u128 * scale as u128) % pk as u128;
    if t.sign >= 0 {
        raw as u64
    } else {
        (pk - raw as u64) % pk
    }
}

#[inline]
fn combined_exponent(u: u64, v: u64, n: u64, pk: u64, modulus: u64) -> usize {
    // zeta_n^u * zeta_{pk}^v = zeta_{n*pk}^{u*pk + v*n}
    ((u as u128 * pk as u128 + v as u128 * n as u128) % modulus as u128) as usize
}

fn evaluate_direct(frame: &Frame) -> Vec<i128> {
    let nvars = frame.var_vals.len();
    let zero_asn = Assignment {
        c: vec![0; nvars],
        b: vec![0; nvars],
    };
    if frame.order.is_empty() {
        let mut hist = vec![0i128; frame.modulus as usize];
        descend_leaf(frame, &zero_asn, 0, 0, &mut hist);
        return hist;
    }
    let outer = frame.order[0];
    frame.var_vals[outer]
        .vals
        .par_iter()
        .fold(
            || vec![0i128; frame.modulus as usize],
            |mut hist, &(c, b, chi)| {
                let mut asn = zero_asn.clone();
                asn.c[outer] = c;
                asn.b[outer] = b;
                let mut v = 0u64;
                for t in &frame.ready[0] {
                    v = (v + term_value(t, &asn, frame.pk, frame.p)) % frame.pk;
                }
                descend(frame, &mut asn, 1, chi as u64 % frame.n, v, &mut hist);
                hist
            },
        )
        .reduce(
            || vec![0i128; frame.modulus as usize],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

fn descend(frame: &Frame, asn: &mut Assignment, depth: usize, u: u64, v: u64, hist: &mut [i128]) {
    if depth == frame.order.len() {
        descend_leaf(frame, asn, u, v, hist);
        return;
    }
    let var = frame.order[depth];
    for i in 0..frame.var_vals[var].vals.len() {
        let (c, b, chi) = frame.var_vals[var].vals[i];
        asn.c[var] = c;
        asn.b[var] = b;
        let mut v2 = v;
        for t in &frame.ready[depth] {
            v2 = (v2 + term_value(t, asn, frame.pk, frame.p)) % frame.pk;
        }
        descend(frame, asn, depth + 1, (u + chi as u64) % frame.n, v2, hist);
    }
}

/// Net coefficient of the pivot inside psi for the current outer assignment.
#[inline]
fn pivot_coefficient(frame: &Frame, asn: &Assignment) -> u64 {
    let pk = frame.pk;
    let p = frame.p;
    let mut s = 0u64;
    for t in frame.pivot_c_terms {
        let b = match t.b_var {
            Some(k) => asn.b[k],
            None => 1,
        };
        let scale = pk / p.pow(t.exp);
        let raw = (b as u128 * scale as u128) % pk as u128;
        s = (s + if t.sign >= 0 { raw as u64 } else { (pk - raw as u64) % pk }) % pk;
    }
    s
}

fn descend_leaf(frame: &Frame, asn: &Assignment, u: u64, v: u64, hist: &mut [i128]) {
    let pk = frame.pk;
    let p = frame.p;
    let n = frame.n;
    let s = pivot_coefficient(frame, asn);
    if frame.pivot_b_terms.is_empty() {
        for &(c, _b, chi) in &frame.var_vals[frame.pivot].vals {
            let vp = (v as u128 + c as u128 * s as u128) % pk as u128;
            let e = combined_exponent((u + chi as u64) % n, vp as u64, n, pk, frame.modulus);
            hist[e] += 1;
        }
    } else {
        for &(c, b, chi) in &frame.var_vals[frame.pivot].vals {
            let mut vp = (v as u128 + c as u128 * s as u128) % pk as u128;
            for t in frame.pivot_b_terms {
                let scale = pk / p.pow(t.exp);
                let raw =
                    (b as u128 * asn.c[t.c_var] as u128 % pk as u128 * scale as u128) % pk as u128;
                vp = if t.sign >= 0 {
                    (vp + raw) % pk as u128
                } else {
                    (vp + (pk as u128 - raw)) % pk as u128
                };
            }
            let e = combined_exponent((u + chi as u64) % n, vp as u64, n, pk, frame.modulus);
            hist[e] += 1;
        }
    }
}

fn evaluate_table_path(frame: &Frame) -> Vec<i128> {
    // the pivot's character sum depends on the coefficient s only through
    // s / pivot_scale mod pivot_mod
    let p = frame.p;
    let n = frame.n;
    let pk = frame.pk;
    let pivot_mod = p.pow(frame.var_vals[frame.pivot].k_red);
    let pivot_scale = pk / pivot_mod;
    let nvars = frame.var_vals.len();
    let bucket_len = frame.modulus as usize;
    let zero_asn = Assignment {
        c: vec![0; nvars],
        b: vec![0; nvars],
    };

    // stage 1: bucket the outer tuples by (s_red, u, v)
    let buckets: Vec<i64> = if frame.order.is_empty() {
        let mut b = vec![0i64; pivot_mod as usize * bucket_len];
        bucket_leaf(frame, &zero_asn, 0, 0, pivot_mod, pivot_scale, &mut b);
        b
    } else {
        let outer = frame.order[0];
        frame.var_vals[outer]
            .vals
            .par_iter()
            .fold(
                || vec![0i64; pivot_mod as usize * bucket_len],
                |mut buckets, &(c, bb, chi)| {
                    let mut asn = zero_asn.clone();
                    asn.c[outer] = c;
                    asn.b[outer] = bb;
                    let mut v = 0u64;
                    for t in &frame.ready[0] {
                        v = (v + term_value(t, &asn, pk, p)) % pk;
                    }
                    bucket_descend(
                        frame,
                        &mut asn,
                        1,
                        chi as u64 % n,
                        v,
                        pivot_mod,
                        pivot_scale,
                        &mut buckets,
                    );
                    buckets
                },
            )
            .reduce(
                || vec![0i64; pivot_mod as usize * bucket_len],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            )
    };

    // stage 2: per s_red, contract the pivot's character histogram with the
    // bucketed counts
    let mut hist = vec![0i128; frame.modulus as usize];
    for s_red in 0..pivot_mod {
        let base = s_red as usize * bucket_len;
        if buckets[base..base + bucket_len].iter().all(|&x| x == 0) {
            continue;
        }
        let mut tbl: Vec<i64> = vec![0i64; bucket_len];
        for &(c, _b, chi) in &frame.var_vals[frame.pivot].vals {
            let v1 = (c as u128 * s_red as u128 % pivot_mod as u128) as u64 * pivot_scale % pk;
            tbl[combined_exponent(chi as u64 % n, v1, n, pk, frame.modulus)] += 1;
        }
        for (i2, &cnt) in buckets[base..base + bucket_len].iter().enumerate() {
            if cnt == 0 {
                continue;
            }
            // decompose the combined exponents and re-add them
            for (i1, &t) in tbl.iter().enumerate() {
                if t == 0 {
                    continue;
                }
                let e = (i1 as u64 + i2 as u64) % frame.modulus;
                hist[e as usize] += cnt as i128 * t as i128;
            }
        }
    }
    hist
}

#[allow(clippy::too_many_arguments)]
fn bucket_descend(
    frame: &Frame,
    asn: &mut Assignment,
    depth: usize,
    u: u64,
    v: u64,
    pivot_mod: u64,
    pivot_scale: u64,
    buckets: &mut [i64],
) {
    if depth == frame.order.len() {
        bucket_leaf(frame, asn, u, v, pivot_mod, pivot_scale, buckets);
        return;
    }
    let var = frame.order[depth];
    for i in 0..frame.var_vals[var].vals.len() {
        let (c, b, chi) = frame.var_vals[var].vals[i];
        asn.c[var] = c;
        asn.b[var] = b;
        let mut v2 = v;
        for t in &frame.ready[depth] {
            v2 = (v2 + term_value(t, asn, frame.pk, frame.p)) % frame.pk;
        }
        bucket_descend(
            frame,
            asn,
            depth + 1,
            (u + chi as u64) % frame.n,
            v2,
            pivot_mod,
            pivot_scale,
            buckets,
        );
    }
}

fn bucket_leaf(
    frame: &Frame,
    asn: &Assignment,
    u: u64,
    v: u64,
    pivot_mod: u64,
    pivot_scale: u64,
    buckets: &mut [i64],
) {
    let s = pivot_coefficient(frame, asn);
    debug_assert!(
        s % pivot_scale == 0,
        "pivot coefficient must live at the pivot's precision"
    );
    let s_red = s / pivot_scale % pivot_mod;
    let bucket_len = frame.modulus as usize;
    let idx = s_red as usize * bucket_len
        + combined_exponent(u, v, frame.n, frame.pk, frame.modulus);
    buckets[idx] += 1;
}
