//! Function-field side: arithmetic in `F_{p^r}`, point counting on open
//! subsets of the affine line and their Kummer covers `y^d = f(x)`,
//! L-series as exponential character sums, and rational reconstruction.
//!
//! Points over `F_{p^r}` are counted by exhaustive enumeration while
//! `p^r` stays below an enumeration limit. Past the limit the same class
//! distributions come from monic polynomials over `F_p`: for monic `g`
//! the resultant `Res(g, f)` only depends on `g mod f`, and the
//! distribution over closed points is the logarithm of the resulting
//! generating series in the group ring of `F_p^x`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::cyclotomic::{format_rational, CyclotomicNumber};
use crate::numtheory::{divisors, factorize, is_prime, mod_pow, primitive_root, squarefree_subsets};
use crate::report::VerificationReport;
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// polynomials over F_p, little-endian

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    mod_pow(a, p - 2, p)
}

fn poly_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let df = f.len() - 1;
    let lead_inv = inv_mod(f[df], p);
    while r.len() > df {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        if c != 0 {
            for (j, fj) in f.iter().enumerate() {
                let i = top - df + j;
                r[i] = (r[i] + (p - c) * fj) % p;
            }
        }
        r.pop();
    }
    trim(r)
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, f, p)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^(p^i) mod f` for `i = 1..=upto`.
fn frobenius_powers(f: &[u64], p: u64, upto: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::with_capacity(upto);
    let mut cur = poly_rem(&[0, 1], f, p);
    for _ in 0..upto {
        let mut acc = vec![1u64];
        let mut base = cur.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(&acc, &base, f, p);
            }
            base = poly_mulmod(&base, &base, f, p);
            e >>= 1;
        }
        cur = acc;
        out.push(cur.clone());
    }
    out
}

/// Irreducibility of a monic polynomial of degree `r >= 1` over `F_p`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = trim(f.to_vec());
    let r = f.len().saturating_sub(1);
    if r == 0 {
        return false;
    }
    for xq in frobenius_powers(&f, p, r / 2) {
        let mut h = xq;
        h.resize(h.len().max(2), 0);
        h[1] = (h[1] + p - 1) % p;
        if poly_gcd(&f, &h, p).len() != 1 {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// F_{p^r}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldExt {
    p: u64,
    degree: usize,
    modulus: Vec<u64>,
}

impl FieldExt {
    /// Uses the first monic irreducible polynomial of degree `r`, ordering
    /// candidates by the base-p integer formed by their lower coefficients.
    pub fn new(p: u64, r: usize) -> Result<Self> {
        check_prime(p)?;
        if r == 0 {
            return Err(Error::InvalidArgument("extension degree must be positive".into()));
        }
        let total = p
            .checked_pow(r as u32)
            .ok_or_else(|| Error::Unsupported(format!("{p}^{r} overflows")))?;
        for idx in 0..total {
            let mut f = digits(idx, p, r);
            f.push(1);
            if is_irreducible(&f, p) {
                return Ok(FieldExt { p, degree: r, modulus: f });
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        check_prime(p)?;
        let modulus = trim(modulus.into_iter().map(|c| c % p).collect());
        if modulus.last() != Some(&1) || !is_irreducible(&modulus, p) {
            return Err(Error::InvalidArgument("modulus must be monic irreducible".into()));
        }
        Ok(FieldExt { p, degree: modulus.len() - 1, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.degree as u32)
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.degree]
    }

    pub fn one(&self) -> Vec<u64> {
        self.constant(1)
    }

    pub fn constant(&self, c: u64) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = c % self.p;
        v
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    /// The `F_p` value of an element of the prime field.
    pub fn as_base(&self, a: &[u64]) -> Option<u64> {
        a[1..].iter().all(|&c| c == 0).then(|| a[0])
    }

    pub fn encode(&self, a: &[u64]) -> u64 {
        a.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn decode(&self, idx: u64) -> Vec<u64> {
        digits(idx, self.p, self.degree)
    }

    /// Next element in encoding order (wrapping to zero).
    pub fn increment(&self, a: &mut [u64]) {
        for c in a.iter_mut() {
            *c += 1;
            if *c < self.p {
                return;
            }
            *c = 0;
        }
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = self.zero();
        let mut scratch = vec![0u64; 2 * self.degree];
        self.mul_into(a, b, &mut out, &mut scratch);
        out
    }

    /// `out = a * b`; `scratch` needs `2r` slots.
    pub fn mul_into(&self, a: &[u64], b: &[u64], out: &mut [u64], scratch: &mut [u64]) {
        let (r, p) = (self.degree, self.p);
        let s = &mut scratch[..2 * r - 1];
        s.iter_mut().for_each(|x| *x = 0);
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                s[i + j] += x * y;
            }
        }
        for i in (r..2 * r - 1).rev() {
            let c = s[i] % p;
            if c != 0 {
                let neg = p - c;
                for j in 0..r {
                    s[i - r + j] += neg * self.modulus[j];
                }
            }
        }
        for i in 0..r {
            out[i] = s[i] % p;
        }
    }

    pub fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut acc = self.one();
        let mut base = a.to_vec();
        let mut tmp = self.zero();
        let mut scratch = vec![0u64; 2 * self.degree];
        while e > 0 {
            if e & 1 == 1 {
                self.mul_into(&acc, &base, &mut tmp, &mut scratch);
                acc.copy_from_slice(&tmp);
            }
            self.mul_into(&base, &base, &mut tmp, &mut scratch);
            base.copy_from_slice(&tmp);
            e >>= 1;
        }
        acc
    }

    /// `f(x)` for `f` with coefficients in `F_p`.
    pub fn eval_poly(&self, f: &[u64], x: &[u64]) -> Vec<u64> {
        let mut out = self.zero();
        let mut tmp = self.zero();
        let mut scratch = vec![0u64; 2 * self.degree];
        self.eval_into(f, x, &mut out, &mut tmp, &mut scratch);
        out
    }

    fn eval_into(&self, f: &[u64], x: &[u64], out: &mut [u64], tmp: &mut [u64], scratch: &mut [u64]) {
        out.iter_mut().for_each(|c| *c = 0);
        for &c in f.iter().rev() {
            self.mul_into(out, x, tmp, scratch);
            out.copy_from_slice(tmp);
            out[0] = (out[0] + c) % self.p;
        }
    }

    /// Smallest element (in encoding order) generating the unit group.
    pub fn generator(&self) -> Vec<u64> {
        let n = self.order() - 1;
        let primes = factorize(n).primes();
        let one = self.one();
        (1..=n)
            .map(|idx| self.decode(idx))
            .find(|g| primes.iter().all(|&l| self.pow(g, n / l) != one))
            .expect("the unit group is cyclic")
    }
}

fn digits(mut idx: u64, p: u64, r: usize) -> Vec<u64> {
    let mut out = vec![0; r];
    for c in out.iter_mut() {
        *c = idx % p;
        idx /= p;
    }
    out
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if p >= 1 << 16 {
        return Err(Error::Unsupported(format!("p = {p} is too large for enumeration")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// curves

/// `A^1` minus the zeros of `f`; constant `f` gives the whole line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseCurve {
    p: u64,
    f: Vec<u64>,
}

impl BaseCurve {
    pub fn new(p: u64, f: &[u64]) -> Result<Self> {
        check_prime(p)?;
        let f = trim(f.iter().map(|&c| c % p).collect());
        if f.is_empty() {
            return Err(Error::InvalidArgument("f must be nonzero".into()));
        }
        Ok(BaseCurve { p, f })
    }

    pub fn affine_line(p: u64) -> Result<Self> {
        Self::new(p, &[1])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> &[u64] {
        &self.f
    }
}

/// `Y: y^d = f(x)` over `X = A^1 - {f = 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KummerCover {
    p: u64,
    d: u64,
    f: Vec<u64>,
    g: u64,
}

impl KummerCover {
    pub fn new(p: u64, d: u64, f: &[u64]) -> Result<Self> {
        let base = BaseCurve::new(p, f)?;
        if d == 0 || (p - 1) % d != 0 {
            return Err(Error::InvalidArgument(format!("d = {d} does not divide p - 1 = {}", p - 1)));
        }
        Ok(KummerCover { p, d, f: base.f, g: primitive_root(p) })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn f(&self) -> &[u64] {
        &self.f
    }

    pub fn generator(&self) -> u64 {
        self.g
    }

    pub fn base(&self) -> BaseCurve {
        BaseCurve { p: self.p, f: self.f.clone() }
    }

    pub fn deg_f(&self) -> usize {
        self.f.len() - 1
    }

    /// Default truncation order `2(deg f + 3)`.
    pub fn default_order(&self) -> usize {
        2 * (self.deg_f() + 3)
    }

    pub fn label(&self) -> String {
        format!("p={} d={} f={:?}", self.p, self.d, self.f)
    }
}

/// `Spec F_q`: one point over every extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointSpec;

pub trait PointCount {
    fn count_points(&self, r: usize) -> Result<u64>;
}

impl PointCount for PointSpec {
    fn count_points(&self, r: usize) -> Result<u64> {
        if r == 0 {
            return Err(Error::InvalidArgument("r must be positive".into()));
        }
        Ok(1)
    }
}

impl PointCount for BaseCurve {
    fn count_points(&self, r: usize) -> Result<u64> {
        let field = FieldExt::new(self.p, r)?;
        let mut x = field.zero();
        let mut count = 0;
        for _ in 0..field.order() {
            if !field.is_zero(&field.eval_poly(&self.f, &x)) {
                count += 1;
            }
            field.increment(&mut x);
        }
        Ok(count)
    }
}

impl PointCount for KummerCover {
    /// Pairs `(x, y)` with `y^d = f(x) != 0`.
    fn count_points(&self, r: usize) -> Result<u64> {
        let field = FieldExt::new(self.p, r)?;
        let n = field.order();
        let mut roots = vec![0u32; n as usize];
        let mut y = field.one();
        for _ in 1..n {
            roots[field.encode(&field.pow(&y, self.d)) as usize] += 1;
            field.increment(&mut y);
        }
        let mut x = field.zero();
        let mut count = 0u64;
        for _ in 0..n {
            let fx = field.eval_poly(&self.f, &x);
            if !field.is_zero(&fx) {
                count += u64::from(roots[field.encode(&fx) as usize]);
            }
            field.increment(&mut x);
        }
        Ok(count)
    }
}

/// Discrete log base `g^((p-1)/d)` of `f(x)^((p^r-1)/d)`.
pub fn frobenius_class(cover: &KummerCover, field: &FieldExt, x: &[u64]) -> Result<u64> {
    if field.p() != cover.p {
        return Err(Error::InvalidArgument("field characteristic differs from the cover's".into()));
    }
    let fx = field.eval_poly(&cover.f, x);
    if field.is_zero(&fx) {
        return Err(Error::Ramified);
    }
    let w = field.pow(&fx, (field.order() - 1) / cover.d);
    let w = field.as_base(&w).expect("power residue lies in F_p");
    let h = mod_pow(cover.g, (cover.p - 1) / cover.d, cover.p);
    (0..cover.d)
        .find(|&j| mod_pow(h, j, cover.p) == w)
        .ok_or_else(|| unreachable!("power residue is a d-th root of unity"))
}

// ---------------------------------------------------------------------------
// truncated series

/// `Σ_{r=0}^{B} c_r t^r` with coefficients in `Q(ζ_level)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedLSeries {
    level: u64,
    coeffs: Vec<CyclotomicNumber>,
}

impl TruncatedLSeries {
    pub fn from_coeffs(level: u64, coeffs: Vec<CyclotomicNumber>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("series needs at least c_0".into()));
        }
        if let Some(c) = coeffs.iter().find(|c| c.level() != level) {
            return Err(Error::LevelMismatch(c.level(), level));
        }
        Ok(TruncatedLSeries { level, coeffs })
    }

    pub fn from_rationals(coeffs: &[BigRational]) -> Self {
        TruncatedLSeries {
            level: 1,
            coeffs: coeffs.iter().map(|c| CyclotomicNumber::from_rational(1, c.clone())).collect(),
        }
    }

    /// `exp(Σ_{r=1}^{B} S_r t^r / r)`.
    pub fn from_power_sums(level: u64, sums: &[CyclotomicNumber]) -> Self {
        let mut coeffs = vec![CyclotomicNumber::one(level)];
        for r in 1..=sums.len() {
            let mut acc = CyclotomicNumber::zero(level);
            for j in 1..=r {
                acc = &acc + &(&sums[j - 1] * &coeffs[r - j]);
            }
            coeffs.push(acc.scale(&BigRational::new(BigInt::one(), BigInt::from(r))));
        }
        TruncatedLSeries { level, coeffs }
    }

    /// Zeta series from point counts `N_1..N_B`.
    pub fn from_counts(counts: &[u64]) -> Self {
        let sums: Vec<CyclotomicNumber> = counts.iter().map(|&n| CyclotomicNumber::from_integer(1, n)).collect();
        Self::from_power_sums(1, &sums)
    }

    /// Inverse of `from_power_sums`; needs `c_0 = 1`.
    pub fn power_sums(&self) -> Result<Vec<CyclotomicNumber>> {
        if self.coeffs[0] != CyclotomicNumber::one(self.level) {
            return Err(Error::InvalidArgument("log needs c_0 = 1".into()));
        }
        let mut sums: Vec<CyclotomicNumber> = Vec::with_capacity(self.order());
        for r in 1..=self.order() {
            let mut acc = self.coeffs[r].scale(&BigRational::from_integer(r.into()));
            for j in 1..r {
                acc = &acc - &(&sums[j - 1] * &self.coeffs[r - j]);
            }
            sums.push(acc);
        }
        Ok(sums)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    /// Truncation order `B`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[CyclotomicNumber] {
        &self.coeffs
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(CyclotomicNumber::is_integral)
    }

    pub fn one(level: u64, order: usize) -> Self {
        let mut coeffs = vec![CyclotomicNumber::zero(level); order + 1];
        coeffs[0] = CyclotomicNumber::one(level);
        TruncatedLSeries { level, coeffs }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.level != other.level {
            return Err(Error::LevelMismatch(self.level, other.level));
        }
        let b = self.order().min(other.order());
        let mut coeffs = vec![CyclotomicNumber::zero(self.level); b + 1];
        for i in 0..=b {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=b - i {
                coeffs[i + j] = &coeffs[i + j] + &(&self.coeffs[i] * &other.coeffs[j]);
            }
        }
        Ok(TruncatedLSeries { level: self.level, coeffs })
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].inverse()?;
        let mut out = vec![inv0.clone()];
        for r in 1..=self.order() {
            let mut acc = CyclotomicNumber::zero(self.level);
            for j in 1..=r {
                acc = &acc + &(&self.coeffs[j] * &out[r - j]);
            }
            out.push(-&(&acc * &inv0));
        }
        Ok(TruncatedLSeries { level: self.level, coeffs: out })
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one(self.level, self.order());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    pub fn embed(&self, level: u64) -> Result<Self> {
        Ok(TruncatedLSeries {
            level,
            coeffs: self.coeffs.iter().map(|c| c.embed(level)).collect::<Result<_>>()?,
        })
    }

    pub fn conjugate(&self, j: u64) -> Result<Self> {
        Ok(TruncatedLSeries {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| c.galois_conjugate(j)).collect::<Result<_>>()?,
        })
    }
}

impl fmt::Display for TruncatedLSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

pub fn zeta_series(spec: &impl PointCount, order: usize) -> Result<TruncatedLSeries> {
    if order == 0 {
        return Err(Error::InvalidArgument("order must be positive".into()));
    }
    let counts = (1..=order).map(|r| spec.count_points(r)).collect::<Result<Vec<_>>>()?;
    Ok(TruncatedLSeries::from_counts(&counts))
}

// ---------------------------------------------------------------------------
// reconstruction

type Poly = Vec<CyclotomicNumber>;

/// Berlekamp–Massey over `Q(ζ_level)`: connection polynomial `C` with
/// `C(0) = 1` and linear complexity `L`.
fn berlekamp_massey(level: u64, s: &[CyclotomicNumber]) -> (Poly, usize) {
    let zero = CyclotomicNumber::zero(level);
    let mut c: Poly = vec![CyclotomicNumber::one(level)];
    let mut b: Poly = vec![CyclotomicNumber::one(level)];
    let mut big_l = 0usize;
    let mut shift = 1usize;
    let mut last = CyclotomicNumber::one(level);
    for n in 0..s.len() {
        let mut disc = s[n].clone();
        for i in 1..=big_l.min(c.len() - 1) {
            disc = &disc + &(&c[i] * &s[n - i]);
        }
        if disc.is_zero() {
            shift += 1;
            continue;
        }
        let coef = disc.div(&last).expect("nonzero discrepancy");
        let mut next = c.clone();
        if next.len() < b.len() + shift {
            next.resize(b.len() + shift, zero.clone());
        }
        for (i, bi) in b.iter().enumerate() {
            next[i + shift] = &next[i + shift] - &(&coef * bi);
        }
        if 2 * big_l <= n {
            big_l = n + 1 - big_l;
            b = std::mem::replace(&mut c, next);
            last = disc;
            shift = 1;
        } else {
            c = next;
            shift += 1;
        }
    }
    while c.len() > 1 && c.last().is_some_and(CyclotomicNumber::is_zero) {
        c.pop();
    }
    (c, big_l)
}

/// `(num, den)` with `den(0) = 1`, both of degree at most `max_deg`,
/// reproducing every coefficient of the series.
pub fn rational_reconstruction(series: &TruncatedLSeries, max_deg: usize) -> Result<(Poly, Poly)> {
    let b = series.order();
    if b < 2 * max_deg + 2 {
        return Err(Error::InvalidArgument(format!("order {b} is below 2*{max_deg}+2")));
    }
    let level = series.level;
    let (den, big_l) = berlekamp_massey(level, &series.coeffs);
    if big_l > max_deg + 1 || den.len() > max_deg + 1 {
        return Err(Error::InsufficientOrder);
    }
    let mut prod = vec![CyclotomicNumber::zero(level); b + 1];
    for (i, di) in den.iter().enumerate() {
        for j in 0..=b - i.min(b) {
            if i + j <= b {
                prod[i + j] = &prod[i + j] + &(di * &series.coeffs[j]);
            }
        }
    }
    let mut num: Poly = prod[..big_l.max(1)].to_vec();
    if prod[big_l.max(1)..].iter().any(|c| !c.is_zero()) {
        return Err(Error::InsufficientOrder);
    }
    while num.len() > 1 && num.last().is_some_and(CyclotomicNumber::is_zero) {
        num.pop();
    }
    if num.len() > max_deg + 1 {
        return Err(Error::InsufficientOrder);
    }
    Ok((num, den))
}

fn eval_poly_at(poly: &[CyclotomicNumber], level: u64, t: &BigRational) -> CyclotomicNumber {
    poly.iter()
        .rev()
        .fold(CyclotomicNumber::zero(level), |acc, c| &acc.scale(t) + c)
}

/// `(num/den)(t)`.
pub fn evaluate_rational(num: &[CyclotomicNumber], den: &[CyclotomicNumber], t: &BigRational) -> Result<CyclotomicNumber> {
    let level = den.first().or(num.first()).map_or(1, CyclotomicNumber::level);
    let d = eval_poly_at(den, level, t);
    if d.is_zero() {
        return Err(Error::Pole);
    }
    eval_poly_at(num, level, t).div(&d)
}

/// `L(X, χ, 1-n)`: the rational function at `t = p^(n-1)`.
pub fn l_special_value_curve(num: &[CyclotomicNumber], den: &[CyclotomicNumber], p: u64, n: u32) -> Result<CyclotomicNumber> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let t = BigRational::from_integer(num_traits::pow(BigInt::from(p), (n - 1) as usize));
    evaluate_rational(num, den, &t)
}

// ---------------------------------------------------------------------------
// class distributions

/// Where the point data for one extension degree came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountSource {
    BruteForce,
    ClosedPoints,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountOptions {
    /// Largest field size `p^r` counted by exhaustive enumeration.
    pub brute_force_limit: u64,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { brute_force_limit: 2_000_000 }
    }
}

/// Point data for `X = A^1 - {f = 0}` over `F_{p^r}`, `r = 1..=B`.
///
/// For `k | p-1` the pair distribution `pairs[k][r-1][c]` counts
/// `(x, z)` with `z^k = f(x) != 0` and `ℓ(z) = c mod (p-1)/k`, where
/// `ℓ(z)` is the discrete log, base the smallest primitive root of `F_p`,
/// of the norm of `z`. `k = 1` is the class distribution of `f(x)` itself.
#[derive(Clone, Debug)]
pub struct BaseCounts {
    p: u64,
    f: Vec<u64>,
    order: usize,
    pairs: BTreeMap<u64, Vec<Vec<u64>>>,
    sources: Vec<CountSource>,
    /// Brute-force versus closed-point agreement for each enumerated degree.
    cross_checks: Vec<(usize, bool)>,
    /// Classes of `Res(g, f)` over monic `g` of each degree.
    monic: Vec<Vec<u64>>,
}

impl BaseCounts {
    pub fn compute(base: &BaseCurve, order: usize, options: CountOptions) -> Result<Self> {
        let (p, f) = (base.p, base.f.clone());
        let ks = divisors(p - 1);
        let monic = monic_resultant_classes(p, &f, order);
        let dist = closed_point_distribution(p, &monic);
        let derived: Vec<BTreeMap<u64, Vec<u64>>> =
            dist.iter().map(|d| ks.iter().map(|&k| (k, pairs_from_distribution(p, k, d))).collect()).collect();

        let brute_degrees: Vec<usize> = (1..=order)
            .filter(|&r| p.checked_pow(r as u32).is_some_and(|n| n <= options.brute_force_limit))
            .collect();
        let brute: Vec<(usize, BTreeMap<u64, Vec<u64>>)> = brute_degrees
            .par_iter()
            .map(|&r| brute_force_pairs(p, &f, r, &ks).map(|m| (r, m)))
            .collect::<Result<_>>()?;

        let mut pairs: BTreeMap<u64, Vec<Vec<u64>>> = ks.iter().map(|&k| (k, Vec::new())).collect();
        let mut sources = Vec::with_capacity(order);
        let mut cross_checks = Vec::new();
        let brute: BTreeMap<usize, BTreeMap<u64, Vec<u64>>> = brute.into_iter().collect();
        for r in 1..=order {
            let chosen = match brute.get(&r) {
                Some(b) => {
                    cross_checks.push((r, *b == derived[r - 1]));
                    sources.push(CountSource::BruteForce);
                    b
                }
                None => {
                    sources.push(CountSource::ClosedPoints);
                    &derived[r - 1]
                }
            };
            for (&k, v) in chosen {
                pairs.get_mut(&k).unwrap().push(v.clone());
            }
        }
        Ok(BaseCounts { p, f, order, pairs, sources, cross_checks, monic })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> &[u64] {
        &self.f
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn sources(&self) -> &[CountSource] {
        &self.sources
    }

    pub fn cross_checks(&self) -> &[(usize, bool)] {
        &self.cross_checks
    }

    /// `#X(F_{p^r})`.
    pub fn base_count(&self, r: usize) -> u64 {
        self.pairs[&1][r - 1].iter().sum()
    }

    /// Points of `z^k = f(x)` over `F_{p^r}`.
    pub fn cover_count(&self, k: u64, r: usize) -> u64 {
        self.pairs[&k][r - 1].iter().sum()
    }

    pub fn pair_distribution(&self, k: u64, r: usize) -> &[u64] {
        &self.pairs[&k][r - 1]
    }

    /// `Σ_c pairs[k][r][c] ζ_e^{b c}` at level `e`, `e | (p-1)/k`.
    pub fn character_sum(&self, k: u64, e: u64, b: u64, r: usize) -> CyclotomicNumber {
        let mut poly = vec![BigRational::zero(); e as usize];
        for (c, &n) in self.pairs[&k][r - 1].iter().enumerate() {
            poly[(b * c as u64 % e) as usize] += BigRational::from_integer(n.into());
        }
        CyclotomicNumber::new(e, poly)
    }

    /// L-series of the character `b` of `C_e` on the cover `y^e = z` of
    /// `Z_k: z^k = f(x)`; `k = 1` gives the characters of `X`.
    pub fn l_series(&self, k: u64, e: u64, b: u64) -> TruncatedLSeries {
        let sums: Vec<CyclotomicNumber> = (1..=self.order).map(|r| self.character_sum(k, e, b, r)).collect();
        TruncatedLSeries::from_power_sums(e, &sums)
    }

    /// Zeta series of `Z_k`.
    pub fn cover_zeta(&self, k: u64) -> TruncatedLSeries {
        let counts: Vec<u64> = (1..=self.order).map(|r| self.cover_count(k, r)).collect();
        TruncatedLSeries::from_counts(&counts)
    }

    /// `Σ_g χ_a(Res(g, f)) t^{deg g}` over monic `g`, character of order `e`.
    pub fn euler_product_series(&self, e: u64, a: u64) -> TruncatedLSeries {
        let mut coeffs = vec![CyclotomicNumber::one(e)];
        for row in &self.monic {
            let mut poly = vec![BigRational::zero(); e as usize];
            for (c, &n) in row.iter().enumerate() {
                poly[(a * c as u64 % e) as usize] += BigRational::from_integer(n.into());
            }
            coeffs.push(CyclotomicNumber::new(e, poly));
        }
        TruncatedLSeries { level: e, coeffs }
    }
}

/// `monic[e-1][c]`: monic `g` of degree `e` coprime to `f` with
/// `dlog Res(g, f) = c`.
fn monic_resultant_classes(p: u64, f: &[u64], order: usize) -> Vec<Vec<u64>> {
    let g0 = primitive_root(p);
    let mut dlog = vec![u64::MAX; p as usize];
    let mut acc = 1u64;
    for i in 0..p - 1 {
        dlog[acc as usize] = i;
        acc = acc * g0 % p;
    }
    let n = f.len() - 1;
    let lc = f[n];
    let lc_inv = inv_mod(lc, p);
    let monic_f: Vec<u64> = f.iter().map(|c| c * lc_inv % p).collect();

    // norms of every residue h in F_p[x]/(f), indexed by base-p encoding
    let size = p.pow(n as u32);
    let mut norms = vec![0u64; size as usize];
    for idx in 0..size {
        let h = digits(idx, p, n);
        norms[idx as usize] = algebra_norm(&h, &monic_f, p);
    }
    let pm1 = (p - 1) as usize;
    let mut out = Vec::with_capacity(order);
    for e in 1..=order {
        // Res(g, f) = (-1)^{e n} lc^e N(g mod f)
        let sign = if (e * n) % 2 == 1 { p - 1 } else { 1 };
        let factor = sign * mod_pow(lc, e as u64, p) % p;
        let shift = dlog[factor as usize] as usize;
        let mut row = vec![0u64; pm1];
        if e >= n {
            let weight = p.pow((e - n) as u32);
            for &nm in &norms {
                if nm != 0 {
                    row[(dlog[nm as usize] as usize + shift) % pm1] += weight;
                }
            }
        } else {
            // g is its own residue: digits e and above are (1, 0, ...)
            let base = p.pow(e as u32);
            for low in 0..base {
                let idx = low + base;
                let nm = norms[idx as usize];
                if nm != 0 {
                    row[(dlog[nm as usize] as usize + shift) % pm1] += 1;
                }
            }
        }
        out.push(row);
    }
    out
}

/// Determinant of multiplication by `h` on `F_p[x]/(f)`, `f` monic.
fn algebra_norm(h: &[u64], f: &[u64], p: u64) -> u64 {
    let n = f.len() - 1;
    if n == 0 {
        return 1;
    }
    let mut cols: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut cur = trim(h.to_vec());
    for _ in 0..n {
        let mut col = cur.clone();
        col.resize(n, 0);
        cols.push(col);
        let mut shifted = vec![0u64];
        shifted.extend(&cur);
        cur = poly_rem(&shifted, f, p);
    }
    // Gaussian elimination on the transpose (same determinant)
    let mut m = cols;
    let mut det = 1u64;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| m[r][c] != 0) else {
            return 0;
        };
        if piv != c {
            m.swap(piv, c);
            det = (p - det) % p;
        }
        det = det * m[c][c] % p;
        let inv = inv_mod(m[c][c], p);
        for r in c + 1..n {
            let factor = m[r][c] * inv % p;
            if factor != 0 {
                for j in c..n {
                    m[r][j] = (m[r][j] + (p - factor) * m[c][j]) % p;
                }
            }
        }
    }
    det
}

/// `D_r = r M_r - Σ_{j<r} D_j * M_{r-j}` in the group ring of `Z/(p-1)`.
fn closed_point_distribution(p: u64, monic: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let pm1 = (p - 1) as usize;
    let mut dist: Vec<Vec<i128>> = Vec::with_capacity(monic.len());
    for r in 1..=monic.len() {
        let mut row: Vec<i128> = monic[r - 1].iter().map(|&x| r as i128 * x as i128).collect();
        for j in 1..r {
            let (dj, mrj) = (&dist[j - 1], &monic[r - j - 1]);
            for (a, &x) in dj.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (b, &y) in mrj.iter().enumerate() {
                    row[(a + b) % pm1] -= x * y as i128;
                }
            }
        }
        dist.push(row);
    }
    dist.into_iter()
        .map(|row| row.into_iter().map(|x| u64::try_from(x).expect("closed-point counts are nonnegative")).collect())
        .collect()
}

fn pairs_from_distribution(p: u64, k: u64, dist: &[u64]) -> Vec<u64> {
    let modk = (p - 1) / k;
    let mut out = vec![0u64; modk as usize];
    for (c, &n) in dist.iter().enumerate() {
        let c = c as u64;
        if c % k == 0 {
            out[((c / k) % modk) as usize] += k * n;
        }
    }
    out
}

/// Exhaustive enumeration over `F_{p^r}`.
fn brute_force_pairs(p: u64, f: &[u64], r: usize, ks: &[u64]) -> Result<BTreeMap<u64, Vec<u64>>> {
    let field = FieldExt::new(p, r)?;
    let n = field.order() as usize;
    let pm1 = p - 1;

    // log table from a generator walk; ℓ(y) = ν · log_G(y) with ν = ℓ(G)
    let gen = field.generator();
    let norm_gen = field.as_base(&field.pow(&gen, (n as u64 - 1) / pm1)).expect("norm lies in F_p");
    let g0 = primitive_root(p);
    let nu = (0..pm1).find(|&i| mod_pow(g0, i, p) == norm_gen).expect("norm is a unit");
    let mut ell = vec![u8::MAX; n];
    assert!(pm1 < u8::MAX as u64, "class table needs p - 1 < 255");
    let (mut y, mut tmp, mut scratch) = (field.one(), field.zero(), vec![0u64; 2 * r]);
    for i in 0..n as u64 - 1 {
        ell[field.encode(&y) as usize] = ((nu * (i % pm1)) % pm1) as u8;
        field.mul_into(&y, &gen, &mut tmp, &mut scratch);
        y.copy_from_slice(&tmp);
    }

    let mut fx = vec![0u32; n];
    let (mut x, mut out) = (field.zero(), field.zero());
    for slot in fx.iter_mut() {
        field.eval_into(f, &x, &mut out, &mut tmp, &mut scratch);
        *slot = field.encode(&out) as u32;
        field.increment(&mut x);
    }

    let mut result = BTreeMap::new();
    for &k in ks {
        let modk = (pm1 / k) as usize;
        let mut dist = vec![0u64; modk];
        if k == 1 {
            for &w in &fx {
                if w != 0 {
                    dist[ell[w as usize] as usize % modk] += 1;
                }
            }
        } else {
            // bucket[w][c] = #{z : z^k = w, ℓ(z) = c mod (p-1)/k}
            let mut bucket = vec![0u16; n * modk];
            let mut z = field.one();
            for _ in 1..n {
                let w = field.encode(&field.pow(&z, k)) as usize;
                let c = ell[field.encode(&z) as usize] as usize % modk;
                bucket[w * modk + c] += 1;
                field.increment(&mut z);
            }
            for &w in &fx {
                if w != 0 {
                    let row = &bucket[w as usize * modk..(w as usize + 1) * modk];
                    for (c, &cnt) in row.iter().enumerate() {
                        dist[c] += u64::from(cnt);
                    }
                }
            }
        }
        result.insert(k, dist);
    }
    Ok(result)
}

// ---------------------------------------------------------------------------
// L-series and verification

pub fn l_series_kummer(cover: &KummerCover, a: u64, order: usize) -> Result<TruncatedLSeries> {
    let counts = BaseCounts::compute(&cover.base(), order, CountOptions::default())?;
    Ok(counts.l_series(1, cover.d, a % cover.d))
}

pub fn verify_l_identities(cover: &KummerCover, order: usize) -> VerificationReport {
    match BaseCounts::compute(&cover.base(), order, CountOptions::default()) {
        Ok(counts) => verify_l_identities_with(cover, &counts),
        Err(e) => {
            let mut r = VerificationReport::new(format!("curves {} B={order}", cover.label()));
            r.check("evaluation", "error", e.to_string(), false);
            r
        }
    }
}

fn product(series: impl IntoIterator<Item = TruncatedLSeries>, level: u64, order: usize) -> Result<TruncatedLSeries> {
    series
        .into_iter()
        .try_fold(TruncatedLSeries::one(level, order), |acc, s| acc.mul(&s.embed(level)?))
}

/// Series identities of one cover, reusing point data shared across `d`.
pub fn verify_l_identities_with(cover: &KummerCover, counts: &BaseCounts) -> VerificationReport {
    let order = counts.order();
    let mut report = VerificationReport::new(format!("curves {} B={order}", cover.label()));
    if counts.p() != cover.p || counts.f() != cover.f {
        report.check("evaluation", "error", "point data belongs to another base", false);
        return report;
    }
    if let Err(e) = verify_curve_inner(&mut report, cover, counts) {
        report.check("evaluation", "error", e.to_string(), false);
    }
    report
}

fn verify_curve_inner(report: &mut VerificationReport, cover: &KummerCover, counts: &BaseCounts) -> Result<()> {
    let (p, d, order) = (cover.p, cover.d, counts.order());
    let checked: BTreeMap<usize, bool> = counts.cross_checks().iter().cloned().collect();
    for r in 1..=order {
        match checked.get(&r) {
            Some(&ok) => {
                report.check(&format!("point data r={r}"), "brute force = closed points", "", ok);
            }
            None => report.skip(
                &format!("point data r={r}"),
                "brute force",
                format!("{p}^{r} exceeds the enumeration limit; closed-point counts used"),
            ),
        }
    }

    let l: Vec<TruncatedLSeries> = (0..d).map(|a| counts.l_series(1, d, a)).collect();
    let zeta_x = counts.cover_zeta(1);
    report.agree(
        "L(X,1) = zeta(X)",
        &[("trivial character", l[0].to_string()), ("point counts", zeta_x.embed(d)?.to_string())],
    );

    for (a, la) in l.iter().enumerate() {
        let euler = counts.euler_product_series(d, a as u64);
        report.agree(
            &format!("L(X,chi^{a})"),
            &[("exp of character sums", la.to_string()), ("sum over monic polynomials", euler.to_string())],
        );
        report.check(
            &format!("L(X,chi^{a}) integral"),
            "coefficients in Z[zeta_d]",
            if la.is_integral() { "integral" } else { "not integral" },
            la.is_integral(),
        );
        let round = TruncatedLSeries::from_power_sums(d, &la.power_sums()?);
        report.check(&format!("L(X,chi^{a}) exp(log)"), "round trip", "", round == *la);
        for j in (1..d).filter(|j| j.gcd(&d) == 1) {
            let target = &l[(a as u64 * j % d) as usize];
            report.agree(
                &format!("conj_{j} L(X,chi^{a})"),
                &[("conjugated coefficients", la.conjugate(j)?.to_string()), ("L(X,chi^{a*j})", target.to_string())],
            );
        }
    }

    let all = product(l.iter().cloned(), d, order)?;
    report.agree(
        "zeta(Y) = prod_a L(X,chi^a)",
        &[("point counts on Y", counts.cover_zeta(d).embed(d)?.to_string()), ("product of L-series", all.to_string())],
    );

    for e in divisors(d) {
        let k = d / e;
        let trivial_on_e = product((0..d).filter(|a| a % e == 0).map(|a| l[a as usize].clone()), d, order)?;
        report.agree(
            &format!("zeta(Y/C_{e})"),
            &[
                ("point counts on z^{k}=f", counts.cover_zeta(k).embed(d)?.to_string()),
                ("characters trivial on C_e", trivial_on_e.to_string()),
            ],
        );
        for b in 0..e {
            let restricted = product((0..d).filter(|a| a % e == b).map(|a| l[a as usize].clone()), d, order)?;
            report.agree(
                &format!("induction C_{e} b={b}"),
                &[
                    ("L(Y/C_e, chi_b) from pairs", counts.l_series(k, e, b).embed(d)?.to_string()),
                    ("characters restricting to chi_b", restricted.to_string()),
                ],
            );
        }
    }

    for a in 1..d {
        for e in divisors(d).into_iter().filter(|&e| e > 1 && a % e == 0) {
            let quotient = KummerCover::new(p, d / e, &cover.f)?;
            let desc = counts.l_series(1, quotient.d, a / e);
            report.agree(
                &format!("descent chi^{a} through C_{e}"),
                &[("on Y", l[a as usize].to_string()), ("on z^{}=f", desc.embed(d)?.to_string())],
            );
        }
    }

    let primes = factorize(d).primes();
    let primitive = product((1..d).chain((d == 1).then_some(0)).filter(|a| a.gcd(&d) == 1).map(|a| l[a as usize].clone()), d, order)?;
    let mut moebius = TruncatedLSeries::one(1, order);
    for (subset, sign) in squarefree_subsets(&primes) {
        let k = d / subset.iter().product::<u64>();
        moebius = moebius.mul(&counts.cover_zeta(k).pow(sign)?)?;
    }
    report.agree(
        "moebius",
        &[("prod over primitive characters", primitive.to_string()), ("prod zeta(Y/C_S)^(+-1)", moebius.embed(d)?.to_string())],
    );

    special_values(report, cover, counts, &l)
}

fn special_values(
    report: &mut VerificationReport,
    cover: &KummerCover,
    counts: &BaseCounts,
    l: &[TruncatedLSeries],
) -> Result<()> {
    let (p, d) = (cover.p, cover.d);
    let max_deg = cover.deg_f() + 2;
    if counts.order() < 2 * max_deg + 2 {
        report.skip("reconstruction", "berlekamp-massey", "truncation order below 2*max_deg+2");
        return Ok(());
    }
    let mut rational = Vec::with_capacity(l.len());
    for (a, la) in l.iter().enumerate() {
        match rational_reconstruction(la, max_deg) {
            Ok((num, den)) => {
                report.check(
                    &format!("L(X,chi^{a}) rational"),
                    "berlekamp-massey",
                    format!("{} / {}", poly_string(&num), poly_string(&den)),
                    true,
                );
                rational.push(Some((num, den)));
            }
            Err(e) => {
                report.skip(&format!("L(X,chi^{a}) rational"), "berlekamp-massey", e.to_string());
                rational.push(None);
            }
        }
    }
    if d == 1 {
        return Ok(());
    }
    let primes = factorize(d).primes();
    let mut zetas = BTreeMap::new();
    for (subset, _) in squarefree_subsets(&primes) {
        let k = d / subset.iter().product::<u64>();
        zetas.insert(k, rational_reconstruction(&counts.cover_zeta(k), max_deg).ok());
    }
    for n in 2..=3u32 {
        let quantity = format!("Norm L(X,chi,{})", 1 - n as i64);
        let Some((num, den)) = &rational[1] else {
            report.skip(&quantity, "special value", "L(X,chi) not reconstructed");
            continue;
        };
        let value = l_special_value_curve(num, den, p, n)?;
        let mut paths = vec![("norm of L(X,chi,1-n)", format_rational(&value.norm_to_q()))];
        let mut product_value = Some(CyclotomicNumber::one(d));
        for a in (1..d).filter(|a| a.gcd(&d) == 1) {
            product_value = match (product_value, &rational[a as usize]) {
                (Some(acc), Some((num, den))) => Some(&acc * &l_special_value_curve(num, den, p, n)?),
                _ => None,
            };
        }
        match product_value {
            Some(v) => paths.push((
                "product over conjugate characters",
                v.as_rational().map_or_else(|| v.to_string(), |q| format_rational(&q)),
            )),
            None => report.skip(&quantity, "product over conjugate characters", "a conjugate L-series was not reconstructed"),
        }
        let mut moebius = Some(BigRational::one());
        for (subset, sign) in squarefree_subsets(&primes) {
            let k = d / subset.iter().product::<u64>();
            moebius = match (moebius, &zetas[&k]) {
                (Some(acc), Some((num, den))) => {
                    let v = l_special_value_curve(num, den, p, n)?.as_rational().expect("zeta values are rational");
                    Some(if sign > 0 { acc * v } else { acc / v })
                }
                _ => None,
            };
        }
        match moebius {
            Some(v) => paths.push(("moebius product of zeta values", format_rational(&v))),
            None => report.skip(&quantity, "moebius product of zeta values", "an intermediate zeta was not reconstructed"),
        }
        report.agree(&quantity, &paths);
    }
    Ok(())
}

fn poly_string(poly: &[CyclotomicNumber]) -> String {
    let parts: Vec<String> = poly.iter().map(|c| format!("({c})")).collect();
    parts.join(" + t*")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<CyclotomicNumber> {
        v.iter().map(|&c| CyclotomicNumber::from_integer(1, c)).collect()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn moebius(n: u64) -> i64 {
        let f = factorize(n);
        if f.factors.iter().any(|&(_, e)| e > 1) {
            0
        } else if f.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn first_irreducible_modulus() {
        assert_eq!(FieldExt::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FieldExt::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert!(FieldExt::with_modulus(3, vec![0, 0, 1]).is_err());
    }

    #[test]
    fn irreducible_counts_match_gauss() {
        for (p, r) in [(2u64, 1usize), (2, 4), (2, 6), (3, 2), (3, 3), (5, 2), (5, 3), (7, 2)] {
            let total = p.pow(r as u32);
            let found = (0..total)
                .filter(|&idx| {
                    let mut f = digits(idx, p, r);
                    f.push(1);
                    is_irreducible(&f, p)
                })
                .count() as i64;
            let gauss: i64 = divisors(r as u64).iter().map(|&e| moebius(e) * p.pow((r as u64 / e) as u32) as i64).sum();
            assert_eq!(found * r as i64, gauss, "p={p} r={r}");
        }
    }

    #[test]
    fn field_arithmetic() {
        let k = FieldExt::new(5, 3).unwrap();
        let n = k.order();
        let g = k.generator();
        assert_eq!(k.pow(&g, n - 1), k.one());
        let x = k.decode(37);
        let y = k.decode(101);
        assert_eq!(k.mul(&x, &y), k.mul(&y, &x));
        assert_eq!(k.mul(&x, &k.pow(&x, n - 2)), k.one());
        assert_eq!(k.encode(&k.decode(77)), 77);
    }

    #[test]
    fn point_counts() {
        assert_eq!(BaseCurve::affine_line(3).unwrap().count_points(2).unwrap(), 9);
        assert_eq!(BaseCurve::new(3, &[0, 1]).unwrap().count_points(1).unwrap(), 2);
        assert_eq!(KummerCover::new(3, 2, &[0, 1]).unwrap().count_points(1).unwrap(), 2);
        assert_eq!(PointSpec.count_points(4).unwrap(), 1);
    }

    #[test]
    fn zeta_series_examples() {
        let z = zeta_series(&BaseCurve::affine_line(5).unwrap(), 4).unwrap();
        assert_eq!(z.coeffs(), &ints(&[1, 5, 25, 125, 625])[..]);
        let z = zeta_series(&PointSpec, 4).unwrap();
        assert_eq!(z.coeffs(), &ints(&[1, 1, 1, 1, 1])[..]);
        let z = zeta_series(&BaseCurve::new(3, &[0, 1]).unwrap(), 4).unwrap();
        assert_eq!(z.coeffs(), &ints(&[1, 2, 6, 18, 54])[..]);
    }

    #[test]
    fn frobenius_classes() {
        let k = FieldExt::new(3, 1).unwrap();
        let c = KummerCover::new(3, 2, &[0, 1]).unwrap();
        assert_eq!(frobenius_class(&c, &k, &[1]).unwrap(), 0);
        assert_eq!(frobenius_class(&c, &k, &[2]).unwrap(), 1);
        assert!(matches!(frobenius_class(&c, &k, &[0]), Err(Error::Ramified)));
        let trivial = KummerCover::new(3, 1, &[0, 1]).unwrap();
        assert_eq!(frobenius_class(&trivial, &k, &[2]).unwrap(), 0);
    }

    #[test]
    fn kummer_l_series() {
        let c = KummerCover::new(3, 2, &[0, 1]).unwrap();
        let zeta = zeta_series(&c.base(), 6).unwrap();
        assert_eq!(l_series_kummer(&c, 0, 6).unwrap(), zeta.embed(2).unwrap());
        assert_eq!(l_series_kummer(&c, 1, 6).unwrap(), TruncatedLSeries::one(2, 6));
    }

    #[test]
    fn character_sums_match_frobenius_classes() {
        let c = KummerCover::new(7, 3, &[1, 1]).unwrap();
        let counts = BaseCounts::compute(&c.base(), 2, CountOptions::default()).unwrap();
        for r in 1..=2 {
            let k = FieldExt::new(7, r).unwrap();
            let mut sum = CyclotomicNumber::zero(3);
            for idx in 0..k.order() {
                if let Ok(cls) = frobenius_class(&c, &k, &k.decode(idx)) {
                    sum = &sum + &CyclotomicNumber::zeta_power(3, cls as i64);
                }
            }
            assert_eq!(counts.character_sum(1, 3, 1, r), sum);
        }
    }

    #[test]
    fn reconstruction_examples() {
        let geo = TruncatedLSeries::from_rationals(&(0..8).map(|r| rat(3i64.pow(r), 1)).collect::<Vec<_>>());
        let (num, den) = rational_reconstruction(&geo, 2).unwrap();
        assert_eq!((num, den), (ints(&[1]), ints(&[1, -3])));
        let punctured = zeta_series(&BaseCurve::new(3, &[0, 1]).unwrap(), 8).unwrap();
        let (num, den) = rational_reconstruction(&punctured, 2).unwrap();
        assert_eq!((num.clone(), den.clone()), (ints(&[1, -1]), ints(&[1, -3])));
        assert_eq!(l_special_value_curve(&num, &den, 3, 2).unwrap().as_rational(), Some(rat(1, 4)));
        let one = TruncatedLSeries::one(1, 6);
        let (num, den) = rational_reconstruction(&one, 2).unwrap();
        assert_eq!((num.clone(), den.clone()), (ints(&[1]), ints(&[1])));
        assert_eq!(l_special_value_curve(&num, &den, 5, 3).unwrap(), CyclotomicNumber::one(1));
        assert!(matches!(rational_reconstruction(&one, 3), Err(Error::InvalidArgument(_))));
        let z = TruncatedLSeries::from_rationals(&[rat(1, 1), rat(1, 1)]);
        assert!(matches!(evaluate_rational(&ints(&[1]), &ints(&[1, -1]), &rat(1, 1)), Err(Error::Pole)));
        assert_eq!(z.order(), 1);
    }

    #[test]
    fn insufficient_order_detected() {
        // 1/(1-t)^4 needs a denominator of degree 4
        let coeffs: Vec<BigRational> = (0..12i64).map(|r| rat((r + 1) * (r + 2) * (r + 3) / 6, 1)).collect();
        let s = TruncatedLSeries::from_rationals(&coeffs);
        assert!(matches!(rational_reconstruction(&s, 2), Err(Error::InsufficientOrder)));
    }

    #[test]
    fn spec_covers_verify() {
        for (p, d, f, b) in [(3, 2, vec![0, 1], 8), (5, 4, vec![0, 1], 8), (7, 3, vec![1, 1], 10)] {
            let c = KummerCover::new(p, d, &f).unwrap();
            let r = verify_l_identities(&c, b);
            assert!(!r.has_failures(), "{r:?}");
        }
    }

    #[test]
    fn closed_point_path_beyond_limit() {
        let c = KummerCover::new(5, 4, &[0, 1, 0, 1]).unwrap();
        let counts = BaseCounts::compute(&c.base(), 6, CountOptions { brute_force_limit: 125 }).unwrap();
        assert_eq!(counts.sources()[2], CountSource::BruteForce);
        assert_eq!(counts.sources()[3], CountSource::ClosedPoints);
        assert!(counts.cross_checks().iter().all(|c| c.1));
        let r = verify_l_identities_with(&c, &counts);
        assert!(!r.has_failures(), "{r:?}");
    }

    fn small_base() -> impl Strategy<Value = (u64, Vec<u64>)> {
        prop::sample::select(vec![3u64, 5, 7]).prop_flat_map(|p| {
            (Just(p), prop::collection::vec(0..p, 1..5)).prop_filter_map("nonzero f", |(p, mut f)| {
                while f.last() == Some(&0) {
                    f.pop();
                }
                (!f.is_empty()).then_some((p, f))
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn brute_force_matches_closed_points((p, f) in small_base()) {
            let counts = BaseCounts::compute(&BaseCurve::new(p, &f).unwrap(), 3, CountOptions::default()).unwrap();
            prop_assert!(counts.cross_checks().iter().all(|c| c.1));
            for d in divisors(p - 1) {
                let cover = KummerCover::new(p, d, &f).unwrap();
                prop_assert_eq!(counts.cover_count(d, 1), cover.count_points(1).unwrap());
            }
        }

        #[test]
        fn identities_hold((p, f) in small_base(), pick in 0usize..4) {
            let ds = divisors(p - 1);
            let cover = KummerCover::new(p, ds[pick % ds.len()], &f).unwrap();
            let r = verify_l_identities(&cover, 6);
            prop_assert!(!r.has_failures());
        }

        #[test]
        fn reconstruction_recovers_rational_functions(
            num in prop::collection::vec(-5i64..6, 1..3),
            den_tail in prop::collection::vec(-5i64..6, 0..3),
        ) {
            let mut den = vec![1i64];
            den.extend(den_tail);
            let b = 8;
            let pad = |v: &[i64]| {
                let mut out: Vec<BigRational> = v.iter().map(|&c| rat(c, 1)).collect();
                out.resize(b + 1, BigRational::zero());
                TruncatedLSeries::from_rationals(&out)
            };
            let s = pad(&num).mul(&pad(&den).inverse().unwrap()).unwrap();
            let (n2, d2) = rational_reconstruction(&s, 2).unwrap();
            let lift = |v: &[CyclotomicNumber]| {
                let mut out = v.to_vec();
                out.resize(b + 1, CyclotomicNumber::zero(1));
                TruncatedLSeries::from_coeffs(1, out).unwrap()
            };
            prop_assert_eq!(lift(&n2).mul(&pad(&den)).unwrap(), pad(&num).mul(&lift(&d2)).unwrap());
        }
    }
}
