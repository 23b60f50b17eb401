//! The GL4 exponential sum: exact brute force and its closed-form
//! evaluation by cases.
//!
//! The sum is taken over `c_1 mod p^{l1+l2+l3}` and `c_i mod p^{l_i}` for
//! `i = 2,3,4` (units where `l_i > 0`, with `c_i = b_i = 0` when `l_i = 0`),
//! carries the prefactor `q^{2 l_4}`, and vanishes by definition unless the
//! two divisibility conditions
//! `l1 + l3 <= m1 + l2 + l4` and `l1 + l2 <= m3 + l3 + l4` hold.
//!
//! The closed form classifies `(l, m)` into the exceptional region, the
//! highest-weight region (split into four positive cases plus the
//! degenerate zero-coordinate evaluations), and the vanishing complement.
//! In case 4B the second subsum is
//! `q^{2l4-2l1-1} g(l1) g(E) g(m2+E, E+l4) J` with `E = l1+l2+l3` and `J`
//! the mod-p Jacobi sum `J(chi^{l1+l2}, chi^{l1+l3})`, evaluated by its
//! four-way case split.

use std::fmt;

use crate::charsums::PrimeContext;
use crate::cyclotomic::CycNum;
use crate::root_system::ParabolicData;
use crate::Error;

use super::kernel::{self, Term, Var};
use super::SignTable;

/// The sign table of the GL4 realization: the two terms attached to
/// `alpha_1` enter `psi` with a minus sign, the `alpha_3` terms with plus.
pub fn gl4_sign_table(pd: &ParabolicData) -> SignTable {
    let mut signs = SignTable::all_plus();
    if let Some(pairs) = pd.commutation_pairs.get(&1) {
        for p in pairs {
            signs.set(1, p.k, p.kp, -1);
        }
    }
    signs
}

fn divisibility(ell: &[u32; 4], m: &[u32; 3]) -> bool {
    let (l1, l2, l3, l4) = (ell[0] as i64, ell[1] as i64, ell[2] as i64, ell[3] as i64);
    let (m1, _, m3) = (m[0] as i64, m[1] as i64, m[2] as i64);
    l1 + l3 <= m1 + l2 + l4 && l1 + l2 <= m3 + l3 + l4
}

fn hw_inequalities(ell: &[u32; 4], m: &[u32; 3]) -> bool {
    let (l1, l2, l3, l4) = (ell[0] as i64, ell[1] as i64, ell[2] as i64, ell[3] as i64);
    let (m1, m2, m3) = (m[0] as i64, m[1] as i64, m[2] as i64);
    let lo = l1.min(l4);
    l4 <= m2 + 1 && l1 + l2 <= m3 + 1 + lo && l1 + l3 <= m1 + 1 + lo
}

fn region_b(ell: &[u32; 4], m: &[u32; 3]) -> bool {
    let (l1, l2, l3, l4) = (ell[0] as i64, ell[1] as i64, ell[2] as i64, ell[3] as i64);
    let (m1, m2, m3) = (m[0] as i64, m[1] as i64, m[2] as i64);
    l1 == l4 && l1 <= m2 + 1 && l2 - m3 == l3 - m1 && l2 - m3 > 1
}

/// Exact brute-force value of the GL4 sum `S_{l,m}`.
///
/// Never errors: the `c_i = b_i = 0` convention at `l_i = 0` is built in, as
/// in the worked example this sum comes from.
pub fn gl4_brute_force(ctx: &PrimeContext, ell: &[u32; 4], m: &[u32; 3]) -> CycNum {
    if !divisibility(ell, m) {
        return CycNum::zero();
    }
    let (l1, l2, l3, l4) = (ell[0], ell[1], ell[2], ell[3]);
    let (m1, m2, m3) = (m[0] as i64, m[1] as i64, m[2] as i64);

    let vars = vec![
        Var {
            range_exp: l1 + l2 + l3,
            unit: l1 > 0,
            ell: l1,
            chi: l1 % ctx.n(),
        },
        Var {
            range_exp: l2,
            unit: l2 > 0,
            ell: l2,
            chi: l2 % ctx.n(),
        },
        Var {
            range_exp: l3,
            unit: l3 > 0,
            ell: l3,
            chi: l3 % ctx.n(),
        },
        Var {
            range_exp: l4,
            unit: l4 > 0,
            ell: l4,
            chi: l4 % ctx.n(),
        },
    ];
    // the five psi-terms of the specialized sum, with effective exponents
    let raw_terms = [
        (Some(1usize), 0usize, l1 as i64 + l3 as i64 - m1 - l4 as i64, -1i64),
        (Some(3), 2, l3 as i64 - m1, -1),
        (None, 3, l4 as i64 - m2, 1),
        (Some(2), 0, l1 as i64 + l2 as i64 - m3 - l4 as i64, 1),
        (Some(3), 1, l2 as i64 - m3, 1),
    ];
    let terms: Vec<Term> = raw_terms
        .iter()
        .filter(|&&(_, _, e, _)| e > 0)
        .map(|&(b_var, c_var, e, sign)| Term {
            b_var,
            c_var,
            exp: e as u32,
            sign,
        })
        .collect();

    kernel::evaluate(ctx, &vars, &terms).scale_by_p_power(ctx.p(), 2 * l4 as i64)
}

/// Which branch of the closed form evaluated a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseLabel {
    OutsideDivisibility,
    RegionB,
    OutsideSupport,
    Case1,
    Case2,
    Case3,
    Case4A,
    Case4B,
    DegenL1Zero,
    DegenAllZero,
    DegenL1L4Zero,
    DegenL2Zero,
    DegenL3Zero,
    DegenL4Zero,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseLabel::OutsideDivisibility => "outside-divisibility",
            CaseLabel::RegionB => "region-b",
            CaseLabel::OutsideSupport => "outside-support",
            CaseLabel::Case1 => "case-1",
            CaseLabel::Case2 => "case-2",
            CaseLabel::Case3 => "case-3",
            CaseLabel::Case4A => "case-4a",
            CaseLabel::Case4B => "case-4b",
            CaseLabel::DegenL1Zero => "degen-l1-0",
            CaseLabel::DegenAllZero => "degen-all-0",
            CaseLabel::DegenL1L4Zero => "degen-l1-l4-0",
            CaseLabel::DegenL2Zero => "degen-l2-0",
            CaseLabel::DegenL3Zero => "degen-l3-0",
            CaseLabel::DegenL4Zero => "degen-l4-0",
        };
        f.write_str(s)
    }
}

impl CaseLabel {
    pub fn parse(s: &str) -> Option<CaseLabel> {
        use CaseLabel::*;
        Some(match s {
            "outside-divisibility" => OutsideDivisibility,
            "region-b" => RegionB,
            "outside-support" => OutsideSupport,
            "case-1" => Case1,
            "case-2" => Case2,
            "case-3" => Case3,
            "case-4a" => Case4A,
            "case-4b" => Case4B,
            "degen-l1-0" => DegenL1Zero,
            "degen-all-0" => DegenAllZero,
            "degen-l1-l4-0" => DegenL1L4Zero,
            "degen-l2-0" => DegenL2Zero,
            "degen-l3-0" => DegenL3Zero,
            "degen-l4-0" => DegenL4Zero,
            _ => return None,
        })
    }
}

/// Closed-form evaluation of the GL4 sum, with the case label taken.
///
/// Total function: every `(l, m)` lands in exactly one branch.
pub fn gl4_closed_form(ctx: &PrimeContext, ell: &[u32; 4], m: &[u32; 3]) -> (CycNum, CaseLabel) {
    let p = ctx.p();
    let n = ctx.n();
    let (l1, l2, l3, l4) = (ell[0], ell[1], ell[2], ell[3]);
    let (m1, m2, m3) = (m[0], m[1], m[2]);
    let q = |e: i64| -> CycNum { CycNum::one().scale_by_p_power(p, e) };
    let g = |k: u32| ctx.gauss_g(k);
    let h = |k: u32| ctx.gauss_h(k);
    let gml = |mm: u32, l: u32| ctx.gauss_gml(mm, l);

    if !divisibility(ell, m) {
        return (CycNum::zero(), CaseLabel::OutsideDivisibility);
    }
    if region_b(ell, m) {
        // S = q^{l2+l3+2l4-k-l1} g_0(m2, l4) h(2l1+l2+l3), k = l2 - m3
        let k = l2 as i64 - m3 as i64;
        let v = q(l2 as i64 + l3 as i64 + 2 * l4 as i64 - k - l1 as i64)
            .mul(&ctx.gauss_sum(0, m2, l4))
            .mul(&h(2 * l1 + l2 + l3));
        return (v, CaseLabel::RegionB);
    }
    if !hw_inequalities(ell, m) {
        return (CycNum::zero(), CaseLabel::OutsideSupport);
    }

    if l1 > 0 && l2 > 0 && l3 > 0 && l4 > 0 {
        let c1 = l1 + l3 <= m1 + l4;
        let c2 = l1 + l2 <= m3 + l4;
        if c1 && c2 {
            let v = q(2 * l4 as i64)
                .mul(&h(l1))
                .mul(&gml(m3, l2))
                .mul(&gml(m1, l3))
                .mul(&gml(l2 + l3 + m2, l2 + l3 + l4));
            return (v, CaseLabel::Case1);
        }
        if c1 {
            let v = q(l3 as i64 + 2 * l4 as i64 - l1 as i64)
                .mul(&g(l1))
                .mul(&gml(m3, l2))
                .mul(&h(l1 + l3))
                .mul(&gml(m2 + l2, l2 + l4));
            return (v, CaseLabel::Case2);
        }
        if c2 {
            let v = q(l2 as i64 + 2 * l4 as i64 - l1 as i64)
                .mul(&g(l1))
                .mul(&h(l1 + l2))
                .mul(&gml(m1, l3))
                .mul(&gml(m2 + l3, l3 + l4));
            return (v, CaseLabel::Case3);
        }
        if l4 < l1 {
            let v = q(2 * l4 as i64)
                .mul(&gml(m2, l4))
                .mul(&h(l1 + l2 + l3))
                .mul(&g(l2).conjugate())
                .mul(&g(l3).conjugate());
            return (v, CaseLabel::Case4A);
        }
        // case 4B: l4 = l1, l1+l2 = m3+l4+1, l1+l3 = m1+l4+1
        let term1 = q(l2 as i64 + l3 as i64 + 2 * l4 as i64 - 1)
            .mul(&gml(m2, l4))
            .mul(&h(l2 + l3))
            .mul(&h(l1));
        let big_e = l1 + l2 + l3;
        let a = (l1 + l2) % n;
        let b = (l1 + l3) % n;
        let jac = if a == 0 && b == 0 {
            CycNum::from_i64(p as i64 - 2)
        } else if (a == 0) != (b == 0) {
            CycNum::from_i64(-1)
        } else if (a + b) % n == 0 {
            CycNum::from_i64(-1)
        } else {
            // J(chi^{l1+l2}, chi^{l1+l3}) = p g(l1+l2) g(l1+l3) / g(2l1+l2+l3),
            // the division done through the conjugate: g(c) conj(g(c)) = p^{2c-1}
            let c = 2 * l1 + l2 + l3;
            g(l1 + l2)
                .mul(&g(l1 + l3))
                .mul(&g(c).conjugate())
                .scale_by_p_power(p, 1 - (2 * c as i64 - 1))
        };
        let term2 = q(2 * l4 as i64 - 2 * l1 as i64 - 1)
            .mul(&g(l1))
            .mul(&g(big_e))
            .mul(&gml(m2 + big_e, big_e + l4))
            .mul(&jac);
        return (term1.add(&term2), CaseLabel::Case4B);
    }

    // degenerate evaluations: at least one l_i = 0, inside the hw region
    if l1 == 0 {
        if l4 > 0 {
            let v = q(2 * l4 as i64)
                .mul(&gml(m3, l2))
                .mul(&gml(m1, l3))
                .mul(&gml(m2 + l2 + l3, l2 + l3 + l4));
            return (v, CaseLabel::DegenL1Zero);
        }
        if l2 == 0 && l3 == 0 {
            return (CycNum::one(), CaseLabel::DegenAllZero);
        }
        // l1 = l4 = 0: split over c_1 divisible by p or not
        let piece1 = q(l2 as i64 + l3 as i64 - 1).mul(&h(l2)).mul(&h(l3));
        let rest = if l2 > 0 && l3 > 0 {
            gml(m1 + l2 - l3, l2)
                .conjugate()
                .mul(&gml(m3 + l3 - l2, l3).conjugate())
        } else if l2 == 0 {
            h(l3)
        } else {
            h(l2)
        };
        let v = piece1.add(&h(l2 + l3).mul(&rest));
        return (v, CaseLabel::DegenL1L4Zero);
    }
    if l2 == 0 {
        let v = if l3 > 0 && l4 > 0 {
            q(2 * l4 as i64 - 2 * l1 as i64)
                .mul(&gml(m3 + l4, l1))
                .mul(&gml(l1 + m1, l1 + l3))
                .mul(&gml(l1 + l3 + m2, l1 + l3 + l4))
        } else if l3 > 0 {
            q(l3 as i64 - l1 as i64).mul(&gml(m3, l1)).mul(&h(l1 + l3))
        } else if l4 > 0 {
            q(2 * l4 as i64).mul(&gml(m2, l4)).mul(&h(l1))
        } else {
            h(l1)
        };
        return (v, CaseLabel::DegenL2Zero);
    }
    if l3 == 0 {
        let v = if l4 > 0 {
            q(2 * l4 as i64 - 2 * l1 as i64)
                .mul(&gml(m1 + l4, l1))
                .mul(&gml(l1 + m3, l1 + l2))
                .mul(&gml(l1 + l2 + m2, l1 + l2 + l4))
        } else {
            q(l2 as i64 - l1 as i64).mul(&gml(m1, l1)).mul(&h(l1 + l2))
        };
        return (v, CaseLabel::DegenL3Zero);
    }
    // l1, l2, l3 > 0, l4 = 0
    let v = h(l1 + l2 + l3)
        .mul(&gml(m1 + l2 - l1 - l3, l2).conjugate())
        .mul(&gml(m3 + l3 - l1 - l2, l3).conjugate());
    (v, CaseLabel::DegenL4Zero)
}

/// Sum of `S_{l,m}` over all `l` with `l1+l2+l3+l4 = k` failing at least one
/// highest-weight inequality. The Whittaker coefficient groups terms by this
/// total weight, and the out-of-polytope contributions cancel exactly.
pub fn cancellation_sum(ctx: &PrimeContext, m: &[u32; 3], k: u32) -> CycNum {
    let mut total = CycNum::zero();
    for l1 in 0..=k {
        for l2 in 0..=k - l1 {
            for l3 in 0..=k - l1 - l2 {
                let l4 = k - l1 - l2 - l3;
                let ell = [l1, l2, l3, l4];
                if hw_inequalities(&ell, m) {
                    continue;
                }
                total = total.add(&gl4_brute_force(ctx, &ell, m));
            }
        }
    }
    total
}

/// Convenience: the GL4 parabolic (A3, node 2, Q = 1).
pub fn gl4_parabolic() -> ParabolicData {
    use crate::root_system::{CartanType, CorootForm, RootDatum};
    let d = RootDatum::new(CartanType::A, 3).expect("A3 is supported");
    ParabolicData::build(d, 2, &CorootForm::constant(3, 1)).expect("node 2 of A3 is cominuscule")
}

/// All errors a caller can hit assembling GL4 input vectors.
pub fn check_gl4_lengths(ell: &[u32], m: &[u32]) -> Result<([u32; 4], [u32; 3]), Error> {
    let ell: [u32; 4] = ell.try_into().map_err(|_| Error::LengthMismatch {
        expected: 4,
        got: ell.len(),
    })?;
    let m: [u32; 3] = m.try_into().map_err(|_| Error::LengthMismatch {
        expected: 3,
        got: m.len(),
    })?;
    Ok((ell, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_vector_gives_one() {
        let ctx = PrimeContext::new(7, 3).unwrap();
        let v = gl4_brute_force(&ctx, &[0, 0, 0, 0], &[0, 0, 0]);
        assert!(v.equals(&CycNum::one()));
        let (c, label) = gl4_closed_form(&ctx, &[0, 0, 0, 0], &[0, 0, 0]);
        assert!(c.equals(&CycNum::one()));
        assert_eq!(label, CaseLabel::DegenAllZero);
    }

    #[test]
    fn frozen_point_n1_p5() {
        // S_{(0,0,0,1),(0,0,0)} = -25 for n = 1, p = 5
        let ctx = PrimeContext::new(5, 1).unwrap();
        let v = gl4_brute_force(&ctx, &[0, 0, 0, 1], &[0, 0, 0]);
        assert!(v.equals(&CycNum::from_i64(-25)), "got {v:?}");
        let (c, label) = gl4_closed_form(&ctx, &[0, 0, 0, 1], &[0, 0, 0]);
        assert!(c.equals(&v));
        assert_eq!(label, CaseLabel::DegenL1Zero);
    }

    #[test]
    fn degenerate_l1_zero_formula() {
        // l = (0, l2, l3, l4) with l2 <= m3+1, l3 <= m1+1, l4 > 0
        let ctx = PrimeContext::new(5, 2).unwrap();
        let (ell, m) = ([0u32, 1, 1, 2], [0u32, 1, 0]);
        let brute = gl4_brute_force(&ctx, &ell, &m);
        let expect = CycNum::one()
            .scale_by_p_power(5, 4)
            .mul(&ctx.gauss_gml(0, 1))
            .mul(&ctx.gauss_gml(0, 1))
            .mul(&ctx.gauss_gml(1 + 1 + 1, 1 + 1 + 2));
        assert!(brute.equals(&expect));
        let (closed, label) = gl4_closed_form(&ctx, &ell, &m);
        assert_eq!(label, CaseLabel::DegenL1Zero);
        assert!(closed.equals(&brute));
    }

    #[test]
    fn vanishing_outside_both_regions() {
        let ctx = PrimeContext::new(5, 1).unwrap();
        // l4 = m2 + 2 violates hw1; l1 != l4 keeps it out of region b
        let v = gl4_brute_force(&ctx, &[1, 1, 1, 2], &[2, 0, 2]);
        assert!(v.is_zero(), "got {v:?}");
        let (c, label) = gl4_closed_form(&ctx, &[1, 1, 1, 2], &[2, 0, 2]);
        assert!(c.is_zero());
        assert_eq!(label, CaseLabel::OutsideSupport);
    }

    #[test]
    fn case_4b_matches_brute_force_for_n3() {
        // the branch whose published form needed correction
        let ctx = PrimeContext::new(7, 3).unwrap();
        for (ell, m) in [
            ([1u32, 1, 1, 1], [0u32, 0, 0]),
            ([1, 1, 2, 1], [1, 0, 0]),
            ([1, 1, 2, 1], [1, 1, 0]),
        ] {
            let brute = gl4_brute_force(&ctx, &ell, &m);
            let (closed, label) = gl4_closed_form(&ctx, &ell, &m);
            assert_eq!(label, CaseLabel::Case4B);
            assert!(closed.equals(&brute), "mismatch at {ell:?} {m:?}");
        }
    }

    #[test]
    fn region_b_point() {
        // l1 = l4 <= m2+1, l2-m3 = l3-m1 = 2
        let ctx = PrimeContext::new(5, 1).unwrap();
        let (ell, m) = ([1u32, 2, 2, 1], [0u32, 0, 0]);
        assert!(region_b(&ell, &m));
        let brute = gl4_brute_force(&ctx, &ell, &m);
        let (closed, label) = gl4_closed_form(&ctx, &ell, &m);
        assert_eq!(label, CaseLabel::RegionB);
        assert!(closed.equals(&brute), "brute {brute:?} closed {closed:?}");
    }

    #[test]
    fn smoke_matrix_agreement_n2() {
        let ctx = PrimeContext::new(5, 2).unwrap();
        for l1 in 0..=2u32 {
            for l2 in 0..=2u32 {
                for l3 in 0..=2u32 {
                    for l4 in 0..=2u32 {
                        for m2 in 0..=1u32 {
                            let ell = [l1, l2, l3, l4];
                            let m = [1, m2, 0];
                            let brute = gl4_brute_force(&ctx, &ell, &m);
                            let (closed, label) = gl4_closed_form(&ctx, &ell, &m);
                            assert!(
                                brute.equals(&closed),
                                "mismatch at {ell:?} {m:?} ({label})"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cancellation_small() {
        // k = 6 is the interesting total: the two region-b points
        // (0,3,3,0) and (1,2,2,1) carry opposite nonzero values
        let ctx = PrimeContext::new(7, 3).unwrap();
        for k in 1..=6u32 {
            let v = cancellation_sum(&ctx, &[0, 0, 0], k);
            assert!(v.is_zero(), "cancellation failed at k = {k}: {v:?}");
        }
    }

    #[test]
    fn brute_force_h_agrees_with_gl4() {
        // the pairing-derived general sum against the hardcoded one
        use super::super::{brute_force_h, SumSpec};
        let pd = gl4_parabolic();
        let ctx = PrimeContext::new(7, 3).unwrap();
        let signs = gl4_sign_table(&pd);
        for ell in [[1u32, 1, 1, 1], [0, 1, 1, 2], [2, 1, 1, 0], [1, 2, 2, 1]] {
            for m in [[0u32, 0, 0], [1, 0, 1], [2, 1, 0]] {
                let spec =
                    SumSpec::new(&pd, &ctx, ell.to_vec(), m.to_vec(), signs.clone()).unwrap();
                let Ok(general) = brute_force_h(&spec) else {
                    continue;
                };
                let special = gl4_brute_force(&ctx, &ell, &m);
                assert!(general.equals(&special), "disagree at {ell:?} {m:?}");
            }
        }
    }
}
