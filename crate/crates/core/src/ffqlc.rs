//! Finite fields: K-groups and their Mackey structure, Artin L-values of
//! cyclic characters, and the multi-path check of the equivariant identity.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::abelian::{FgAbelianGroup, Matrix, PresentedAbelianGroup};
use crate::cyclotomic::{format_rational, quotient_by_principal, CyclotomicNumber};
use crate::equivariant::{bredon_cohomology, moore_cochain_complex, CyclicMackeyData};
use crate::numtheory::{euler_phi, factorize, prime_power, squarefree_subsets};
use crate::report::VerificationReport;
use crate::{Error, Result};

/// `χ(generator) = ζ_m^a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CyclicCharacter {
    m: u64,
    a: u64,
}

impl CyclicCharacter {
    pub fn new(m: u64, a: u64) -> Self {
        assert!(m >= 1);
        CyclicCharacter { m, a: a % m }
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn effective_order(&self) -> u64 {
        self.m / self.m.gcd(&self.a)
    }

    /// Exponent of the primitive character at the effective order.
    pub fn reduced_exponent(&self) -> u64 {
        if self.a == 0 {
            0
        } else {
            self.a / self.m.gcd(&self.a)
        }
    }

    pub fn primitive(&self) -> CyclicCharacter {
        CyclicCharacter::new(self.effective_order(), self.reduced_exponent())
    }

    pub fn is_primitive(&self) -> bool {
        self.m.gcd(&self.a) == 1
    }

    pub fn is_trivial(&self) -> bool {
        self.a == 0
    }
}

/// `⊕ Ind_{C_h}^{C_m} χ_{h,a}^{⊕ mult}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedRepFF {
    m: u64,
    summands: Vec<(u64, u64, u32)>,
}

impl InducedRepFF {
    pub fn new(m: u64, summands: Vec<(u64, u64, u32)>) -> Result<Self> {
        for &(h, _, mult) in &summands {
            if h == 0 || m % h != 0 {
                return Err(Error::InvalidArgument(format!("{h} does not divide {m}")));
            }
            if mult == 0 {
                return Err(Error::InvalidArgument("multiplicities must be positive".into()));
            }
        }
        let summands = summands.into_iter().map(|(h, a, mult)| (h, a % h, mult)).collect();
        Ok(InducedRepFF { m, summands })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn summands(&self) -> &[(u64, u64, u32)] {
        &self.summands
    }

    /// `[Q(ζ_m) : Q(Im χ_i)]` for every summand.
    pub fn has_natural_multiplicities(&self) -> bool {
        self.summands.iter().all(|&(h, a, mult)| {
            let e = CyclicCharacter::new(h, a).effective_order();
            u64::from(mult) == euler_phi(self.m) / euler_phi(e)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FfRepresentation {
    Character(CyclicCharacter),
    Induced(InducedRepFF),
}

fn check_q(q: u64) -> Result<()> {
    prime_power(q)
        .map(|_| ())
        .ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))
}

fn big_pow(q: u64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(q), e as usize)
}

pub fn k_group_finite_field(q: u64, t: u64) -> Result<FgAbelianGroup> {
    check_q(q)?;
    Ok(match t {
        0 => FgAbelianGroup::free(1),
        t if t % 2 == 1 => FgAbelianGroup::cyclic(big_pow(q, (t + 1) / 2) - 1),
        _ => FgAbelianGroup::trivial(),
    })
}

/// `d -> K_t(F_{q^{m/d}})` with the Galois-descent injections.
pub fn k_mackey_finite_field(q: u64, m: u64, t: u64) -> Result<CyclicMackeyData> {
    check_q(q)?;
    if t % 2 == 0 {
        return Err(Error::InvalidArgument(format!("t = {t} is even")));
    }
    let n = (t + 1) / 2;
    let order = |d: u64| big_pow(q, n * m / d) - 1;
    CyclicMackeyData::from_fn(
        m,
        |d| PresentedAbelianGroup::cyclic(order(d)),
        |hi, lo| Matrix::scalar(order(lo) / order(hi)),
    )
}

/// `L(F_q, χ, -k) = 1/(1 - ζ^a q^k)` at the effective order of `χ`.
pub fn artin_l_value_ff(q: u64, chi: CyclicCharacter, k: u64) -> Result<CyclotomicNumber> {
    artin_l_value_ff_at_level(q, chi.primitive(), k)
}

/// The same value computed in `Q(ζ_m)` without reducing the character.
pub fn artin_l_value_ff_at_level(q: u64, chi: CyclicCharacter, k: u64) -> Result<CyclotomicNumber> {
    check_q(q)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let qk = BigRational::from_integer(big_pow(q, k));
    let zeta = CyclotomicNumber::zeta_power(chi.m, chi.a as i64);
    let denom = &CyclotomicNumber::one(chi.m) - &zeta.scale(&qk);
    denom.inverse()
}

/// `ζ(F_Q, -k) = 1/(1 - Q^k)`.
pub fn zeta_value_ff(big_q: &BigInt, k: u64) -> BigRational {
    let one = BigInt::one();
    BigRational::new(one.clone(), one - num_traits::pow(big_q.clone(), k as usize))
}

/// `∏_S ζ(F_{q^{m/∏S}}, -k)^{(-1)^{|S|}}`.
pub fn moebius_zeta_product_ff(q: u64, m: u64, k: u64) -> Result<BigRational> {
    check_q(q)?;
    let mut acc = BigRational::one();
    for (subset, sign) in squarefree_subsets(&factorize(m).primes()) {
        let deg = m / subset.iter().product::<u64>();
        let z = zeta_value_ff(&big_pow(q, deg), k);
        if sign > 0 {
            acc *= z;
        } else {
            acc /= z;
        }
    }
    Ok(acc)
}

/// `π_t` of the fixed points of `K(F_{q^m}) ⊗ M(ρ)`.
pub fn equivariant_k_finite_field(q: u64, rep: &FfRepresentation, t: u64) -> Result<FgAbelianGroup> {
    check_q(q)?;
    if t == 0 {
        return Err(Error::Unsupported("t = 0".into()));
    }
    match rep {
        FfRepresentation::Character(chi) => {
            if t % 2 == 0 {
                return Ok(FgAbelianGroup::trivial());
            }
            let data = k_mackey_finite_field(q, chi.effective_order(), t)?;
            bredon_cohomology(&data, 0)
        }
        FfRepresentation::Induced(ind) => {
            let mut acc = FgAbelianGroup::trivial();
            for &(h, a, mult) in &ind.summands {
                let base = q
                    .checked_pow((ind.m / h) as u32)
                    .ok_or_else(|| Error::Unsupported("q^(m/h) overflows".into()))?;
                let chi = FfRepresentation::Character(CyclicCharacter::new(h, a));
                let piece = equivariant_k_finite_field(base, &chi, t)?;
                for _ in 0..mult {
                    acc = acc.direct_sum(&piece);
                }
            }
            Ok(acc)
        }
    }
}

/// `gcd(q^{km}-1, {(q^{km}-1)/(q^{km/p}-1)}_p)`.
pub fn gcd_closed_form(q: u64, m: u64, k: u64) -> BigInt {
    let top: BigInt = big_pow(q, k * m) - 1;
    factorize(m)
        .primes()
        .into_iter()
        .fold(top.clone(), |g, p| g.gcd(&(&top / (big_pow(q, k * m / p) - 1))))
}

fn signed_ratio(sign: i32, even: &FgAbelianGroup, odd: &FgAbelianGroup) -> Option<BigRational> {
    let r = BigRational::new(even.order()?, odd.order()?);
    Some(if sign < 0 { -r } else { r })
}

fn fmt_opt(q: Option<BigRational>) -> String {
    q.map_or_else(|| "infinite".to_string(), |q| format_rational(&q))
}

pub fn verify_main_theorem_ff(q: u64, chi: CyclicCharacter, k: u64) -> VerificationReport {
    let mut report =
        VerificationReport::new(format!("ffqlc q={q} m={} a={} k={k}", chi.m(), chi.a()));
    if let Err(e) = verify_main_inner(&mut report, q, chi, k) {
        report.check("evaluation", "error", e.to_string(), false);
    }
    report
}

fn verify_main_inner(report: &mut VerificationReport, q: u64, chi: CyclicCharacter, k: u64) -> Result<()> {
    let prim = chi.primitive();
    let m1 = prim.m();
    let sign = if chi.is_trivial() { -1 } else { 1 };

    let l = artin_l_value_ff(q, chi, k)?;
    let l_full = artin_l_value_ff_at_level(q, chi, k)?;
    report.agree(
        "L(F_q,chi,-k) descent",
        &[
            ("value at level m", l_full.to_string()),
            ("primitive value embedded", l.embed(chi.m())?.to_string()),
        ],
    );

    let odd_rep = FfRepresentation::Character(chi);
    let pi_odd = equivariant_k_finite_field(q, &odd_rep, 2 * k - 1)?;
    let pi_even = equivariant_k_finite_field(q, &odd_rep, 2 * k)?;

    let data = k_mackey_finite_field(q, m1, 2 * k - 1)?;
    let complex = moore_cochain_complex(&data);
    let mut concentrated = true;
    for s in complex.lo()..0 {
        concentrated &= bredon_cohomology(&data, s)?.is_trivial();
    }
    report.check(
        "H^s(pi_{2k-1}), s != 0",
        "moore complex",
        if concentrated { "0" } else { "nonzero" },
        concentrated,
    );
    report.check("pi_{2k}", "even vanishing", pi_even.to_string(), pi_even.is_trivial());

    let euler = complex.euler_number()?;
    let euler_ratio = BigRational::one() / euler * BigRational::from_integer(sign.into());

    report.agree(
        "Norm L(F_q,chi,-k)",
        &[
            ("conjugate product", format_rational(&l.norm_to_q())),
            ("moebius zeta product", format_rational(&moebius_zeta_product_ff(q, m1, k)?)),
            ("signed K ratio", fmt_opt(signed_ratio(sign, &pi_even, &pi_odd))),
            ("euler number", format_rational(&euler_ratio)),
        ],
    );

    let generator = CyclotomicNumber::zeta_power(m1, prim.a() as i64)
        .scale(&BigRational::from_integer(big_pow(q, k)));
    let principal = &CyclotomicNumber::one(m1) - &generator;
    report.agree(
        "pi_{2k-1}",
        &[
            ("bredon H^0", pi_odd.to_string()),
            ("Z[zeta]/(1-zeta^a q^k)", quotient_by_principal(&principal)?.to_string()),
        ],
    );
    let closed = FgAbelianGroup::cyclic(gcd_closed_form(q, m1, k));
    if pi_odd.is_cyclic() {
        report.agree(
            "pi_{2k-1} cyclic",
            &[("bredon H^0", pi_odd.to_string()), ("gcd closed form", closed.to_string())],
        );
    } else {
        report.skip("pi_{2k-1} cyclic", "gcd closed form", format!("{pi_odd} has several invariant factors"));
    }
    Ok(())
}

/// Induced representations: the L-side induction identity per summand and
/// the signed K ratio against the product of norms.
pub fn verify_induced_ff(q: u64, rep: &InducedRepFF, k: u64) -> VerificationReport {
    let label: Vec<String> =
        rep.summands.iter().map(|(h, a, mult)| format!("{mult}x({h},{a})")).collect();
    let mut report =
        VerificationReport::new(format!("ffqlc-induced q={q} m={} [{}] k={k}", rep.m, label.join(",")));
    if let Err(e) = verify_induced_inner(&mut report, q, rep, k) {
        report.check("evaluation", "error", e.to_string(), false);
    }
    report
}

fn verify_induced_inner(report: &mut VerificationReport, q: u64, rep: &InducedRepFF, k: u64) -> Result<()> {
    let m = rep.m;
    let mut norm_product = BigRational::one();
    let mut sign = 1;
    let mut total_l = CyclotomicNumber::one(m);
    for &(h, a, mult) in &rep.summands {
        let qh = q
            .checked_pow((m / h) as u32)
            .ok_or_else(|| Error::Unsupported("q^(m/h) overflows".into()))?;
        let chi = CyclicCharacter::new(h, a);
        let sub = artin_l_value_ff(qh, chi, k)?;

        let mut induced = CyclotomicNumber::one(m);
        for j in 0..m / h {
            induced = &induced * &artin_l_value_ff_at_level(q, CyclicCharacter::new(m, a + h * j), k)?;
        }
        report.agree(
            &format!("L(F_q, Ind({h},{a}), -k)"),
            &[
                ("product over extensions", induced.to_string()),
                ("L over fixed field", sub.embed(m)?.to_string()),
            ],
        );
        total_l = &total_l * &induced;
        norm_product *= sub.norm_to_q().pow(mult as i32);
        if chi.is_trivial() && mult % 2 == 1 {
            sign = -sign;
        }
    }
    let ind = FfRepresentation::Induced(rep.clone());
    let pi_odd = equivariant_k_finite_field(q, &ind, 2 * k - 1)?;
    let pi_even = equivariant_k_finite_field(q, &ind, 2 * k)?;
    let mut paths = vec![
        ("product of summand norms", format_rational(&norm_product)),
        ("signed K ratio", fmt_opt(signed_ratio(sign, &pi_even, &pi_odd))),
    ];
    if rep.has_natural_multiplicities() {
        paths.push(("norm over Q(zeta_m)", format_rational(&total_l.norm_to_q())));
    }
    report.agree("Norm L(F_q,rho,-k)", &paths);
    Ok(())
}

/// `sign(L)` sanity helper used by tests: the norm is negative exactly for
/// the trivial character.
pub fn norm_sign(q: u64, chi: CyclicCharacter, k: u64) -> Result<i32> {
    let n = artin_l_value_ff(q, chi, k)?.norm_to_q();
    Ok(if n.is_negative() {
        -1
    } else if n.is_zero() {
        0
    } else {
        1
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn k_groups() {
        assert!(k_group_finite_field(2, 1).unwrap().is_trivial());
        assert_eq!(k_group_finite_field(4, 1).unwrap(), FgAbelianGroup::cyclic(3));
        assert!(k_group_finite_field(2, 4).unwrap().is_trivial());
        assert_eq!(k_group_finite_field(2, 0).unwrap(), FgAbelianGroup::free(1));
        assert!(k_group_finite_field(6, 1).is_err());
    }

    #[test]
    fn k_mackey_examples() {
        let d = k_mackey_finite_field(2, 2, 1).unwrap();
        assert_eq!(d.value(1).normal_form(), FgAbelianGroup::cyclic(3));
        assert!(d.value(2).normal_form().is_trivial());
        let d = k_mackey_finite_field(3, 2, 1).unwrap();
        assert_eq!(d.value(2).normal_form(), FgAbelianGroup::cyclic(2));
        assert_eq!(*d.ext(2, 1), Matrix::scalar(4));
        let d = k_mackey_finite_field(2, 6, 1).unwrap();
        assert_eq!(*d.ext(2, 1), Matrix::scalar(9));
        assert_eq!(*d.ext(3, 1), Matrix::scalar(21));
        assert!(d.value(6).normal_form().is_trivial());
        assert!(k_mackey_finite_field(2, 2, 2).is_err());
    }

    #[test]
    fn l_values() {
        let triv = artin_l_value_ff(2, CyclicCharacter::new(1, 0), 1).unwrap();
        assert_eq!(triv.as_rational(), Some(rat(-1, 1)));
        let l = artin_l_value_ff(2, CyclicCharacter::new(2, 1), 1).unwrap();
        assert_eq!(l.as_rational(), Some(rat(1, 3)));
        let l = artin_l_value_ff(2, CyclicCharacter::new(3, 1), 1).unwrap();
        let expect = CyclotomicNumber::new(3, vec![rat(1, 7), rat(0, 1), rat(-2, 7)]);
        assert_eq!(l, expect);
    }

    #[test]
    fn moebius_examples() {
        assert_eq!(moebius_zeta_product_ff(2, 2, 1).unwrap(), rat(1, 3));
        assert_eq!(moebius_zeta_product_ff(2, 1, 1).unwrap(), rat(-1, 1));
        assert_eq!(moebius_zeta_product_ff(2, 6, 1).unwrap(), rat(1, 3));
    }

    #[test]
    fn equivariant_examples() {
        let ch = |m, a| FfRepresentation::Character(CyclicCharacter::new(m, a));
        assert_eq!(equivariant_k_finite_field(2, &ch(2, 1), 1).unwrap(), FgAbelianGroup::cyclic(3));
        assert!(equivariant_k_finite_field(2, &ch(2, 0), 1).unwrap().is_trivial());
        assert_eq!(equivariant_k_finite_field(2, &ch(4, 1), 1).unwrap(), FgAbelianGroup::cyclic(5));
        assert!(equivariant_k_finite_field(2, &ch(4, 1), 2).unwrap().is_trivial());
        assert!(equivariant_k_finite_field(2, &ch(4, 1), 0).is_err());
    }

    #[test]
    fn main_theorem_examples() {
        for (q, m, expect_norm, expect_pi) in [(2, 2, "1/3", "Z/3"), (3, 2, "1/4", "Z/4"), (2, 6, "1/3", "Z/3")] {
            let r = verify_main_theorem_ff(q, CyclicCharacter::new(m, 1), 1);
            assert!(!r.has_failures(), "{r:#?}");
            let norm = r.entries.iter().find(|e| e.quantity == "Norm L(F_q,chi,-k)").unwrap();
            assert_eq!(norm.value, expect_norm);
            let pi = r.entries.iter().find(|e| e.quantity == "pi_{2k-1}").unwrap();
            assert_eq!(pi.value, expect_pi);
        }
        let r = verify_main_theorem_ff(4, CyclicCharacter::new(6, 3), 2);
        assert!(!r.has_failures(), "{r:#?}");
        assert!(r.entries.iter().all(|e| e.status == Status::Pass));
    }

    #[test]
    fn signs() {
        assert_eq!(norm_sign(5, CyclicCharacter::new(4, 0), 2).unwrap(), -1);
        assert_eq!(norm_sign(5, CyclicCharacter::new(4, 1), 2).unwrap(), 1);
        assert_eq!(norm_sign(5, CyclicCharacter::new(4, 2), 2).unwrap(), 1);
    }

    #[test]
    fn induced() {
        let rep = InducedRepFF::new(6, vec![(2, 1, 2), (3, 0, 1), (1, 0, 2)]).unwrap();
        let r = verify_induced_ff(2, &rep, 1);
        assert!(!r.has_failures(), "{r:#?}");
        let natural = InducedRepFF::new(6, vec![(3, 1, 1), (2, 1, 2), (6, 0, 2)]).unwrap();
        assert!(natural.has_natural_multiplicities());
        let r = verify_induced_ff(3, &natural, 2);
        assert!(!r.has_failures(), "{r:#?}");
        assert_eq!(r.entries.iter().filter(|e| e.quantity == "Norm L(F_q,rho,-k)").count(), 3);
        assert!(InducedRepFF::new(6, vec![(4, 1, 1)]).is_err());
    }

    proptest::proptest! {
        #[test]
        fn conjugate_characters_agree(q in proptest::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9]), m in 1u64..13, a in 0u64..13, j in 1u64..13, k in 1u64..5) {
            if j.gcd(&m) == 1 {
                let chi = CyclicCharacter::new(m, a);
                let conj = CyclicCharacter::new(m, a * j);
                let rep = |c| FfRepresentation::Character(c);
                proptest::prop_assert_eq!(
                    equivariant_k_finite_field(q, &rep(chi), 2 * k - 1).unwrap(),
                    equivariant_k_finite_field(q, &rep(conj), 2 * k - 1).unwrap()
                );
                proptest::prop_assert_eq!(
                    artin_l_value_ff(q, chi, k).unwrap().norm_to_q(),
                    artin_l_value_ff(q, conj, k).unwrap().norm_to_q()
                );
            }
        }

        #[test]
        fn fixed_point_generator_matches_k_mackey(q in proptest::sample::select(vec![2u64, 3, 4, 5]), m in 1u64..9, n in 1u64..4) {
            let a = k_mackey_finite_field(q, m, 2 * n - 1).unwrap();
            let modulus = big_pow(q, n * m) - 1;
            let b = crate::equivariant::cyclic_fixed_point_mackey(&modulus, &big_pow(q, n), m).unwrap();
            for d in crate::numtheory::divisors(m) {
                proptest::prop_assert_eq!(a.value(d).normal_form(), b.value(d).normal_form());
            }
            proptest::prop_assert_eq!(bredon_cohomology(&a, 0).unwrap(), bredon_cohomology(&b, 0).unwrap());
        }
    }
}
