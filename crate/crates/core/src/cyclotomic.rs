//! Exact arithmetic in `Q(ζ_m)` using the power basis modulo `Φ_m`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::abelian::{FgAbelianGroup, Matrix, PresentedAbelianGroup};
use crate::numtheory::{divisors, euler_phi};
use crate::{Error, Result};

/// Coefficients of `Φ_m`, little-endian.
pub fn cyclotomic_polynomial(m: u64) -> Arc<Vec<BigInt>> {
    assert!(m >= 1);
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by Φ_d for the proper divisors d
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    for d in divisors(m) {
        if d < m {
            num = exact_div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    let p = Arc::new(num);
    cache.lock().unwrap().insert(m, p.clone());
    p
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut q = vec![BigInt::zero(); num.len() - dn];
    for i in (0..q.len()).rev() {
        let c = rem[i + dn].clone();
        if !c.is_zero() {
            for (j, dj) in den.iter().enumerate() {
                rem[i + j] -= &c * dj;
            }
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    q
}

/// Element `Σ coeffs[i] ζ_m^i` with `coeffs.len() = φ(m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    level: u64,
    coeffs: Vec<BigRational>,
}

impl CyclotomicNumber {
    /// Reduces an arbitrary polynomial in `ζ_m`.
    pub fn new(level: u64, poly: Vec<BigRational>) -> Self {
        CyclotomicNumber { level, coeffs: reduce(level, poly) }
    }

    pub fn from_ints(level: u64, poly: &[i64]) -> Self {
        Self::new(level, poly.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn from_rational(level: u64, q: BigRational) -> Self {
        Self::new(level, vec![q])
    }

    pub fn from_integer(level: u64, n: impl Into<BigInt>) -> Self {
        Self::from_rational(level, BigRational::from_integer(n.into()))
    }

    pub fn zero(level: u64) -> Self {
        Self::new(level, vec![])
    }

    pub fn one(level: u64) -> Self {
        Self::from_integer(level, 1)
    }

    /// `ζ_m^e`, any integer `e`.
    pub fn zeta_power(level: u64, e: i64) -> Self {
        let e = e.rem_euclid(level as i64) as usize;
        let mut poly = vec![BigRational::zero(); e + 1];
        poly[e] = BigRational::one();
        Self::new(level, poly)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            Some(self.coeffs.first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    fn check_level(&self, other: &Self) {
        assert_eq!(
            self.level, other.level,
            "cyclotomic numbers of levels {} and {} mixed without embedding",
            self.level, other.level
        );
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.level != other.level {
            return Err(Error::LevelMismatch(self.level, other.level));
        }
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.level != other.level {
            return Err(Error::LevelMismatch(self.level, other.level));
        }
        Ok(self * other)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        CyclotomicNumber { level: self.level, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut others = Self::one(self.level);
        for j in units(self.level).into_iter().skip(1) {
            others = &others * &self.conjugate_unchecked(j);
        }
        let norm = (self * &others).as_rational().expect("norm is rational");
        Ok(others.scale(&norm.recip()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_level(other);
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one(self.level);
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// The automorphism `ζ_m -> ζ_m^j`.
    pub fn galois_conjugate(&self, j: u64) -> Result<Self> {
        if j.gcd(&self.level) != 1 {
            return Err(Error::NotCoprime(j, self.level));
        }
        Ok(self.conjugate_unchecked(j))
    }

    fn conjugate_unchecked(&self, j: u64) -> Self {
        let m = self.level as usize;
        let mut poly = vec![BigRational::zero(); m];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[(i * j as usize) % m] += c;
        }
        Self::new(self.level, poly)
    }

    /// Product of all Galois conjugates.
    pub fn norm_to_q(&self) -> BigRational {
        let mut acc = Self::one(self.level);
        for j in units(self.level) {
            acc = &acc * &self.conjugate_unchecked(j);
        }
        acc.as_rational().expect("norm of a cyclotomic number is rational")
    }

    /// Image under `ζ_m -> ζ_n^(n/m)` for `m | n`.
    pub fn embed(&self, n: u64) -> Result<Self> {
        if n % self.level != 0 {
            return Err(Error::LevelMismatch(self.level, n));
        }
        let step = (n / self.level) as usize;
        let mut poly = vec![BigRational::zero(); self.coeffs.len().saturating_sub(1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Ok(Self::new(n, poly))
    }

    /// Integer matrix of multiplication by `self` on the power basis of
    /// `Z[ζ_m]`; column `j` holds `self·ζ^j`.
    pub fn multiplication_matrix(&self) -> Result<Matrix> {
        if !self.is_integral() {
            return Err(Error::NotIntegral);
        }
        let phi = self.coeffs.len();
        let cols: Vec<Vec<BigInt>> = (0..phi)
            .map(|j| {
                let prod = self * &Self::zeta_power(self.level, j as i64);
                prod.coeffs.iter().map(|c| c.to_integer()).collect()
            })
            .collect();
        Ok(Matrix::from_columns(phi, &cols))
    }
}

/// Units of `Z/m` in increasing order; `[1]` for `m = 1`.
fn units(m: u64) -> Vec<u64> {
    if m == 1 {
        return vec![1];
    }
    (1..m).filter(|j| j.gcd(&m) == 1).collect()
}

fn reduce(level: u64, poly: Vec<BigRational>) -> Vec<BigRational> {
    let m = level as usize;
    let mut folded = vec![BigRational::zero(); m];
    for (i, c) in poly.into_iter().enumerate() {
        if !c.is_zero() {
            folded[i % m] += c;
        }
    }
    let phi_poly = cyclotomic_polynomial(level);
    let phi = phi_poly.len() - 1;
    for i in (phi..m).rev() {
        let c = std::mem::take(&mut folded[i]);
        if c.is_zero() {
            continue;
        }
        for (j, pj) in phi_poly.iter().enumerate().take(phi) {
            if !pj.is_zero() {
                folded[i - phi + j] -= &c * BigRational::from_integer(pj.clone());
            }
        }
    }
    folded.truncate(phi);
    debug_assert_eq!(phi as u64, euler_phi(level));
    folded
}

impl Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, other: &CyclotomicNumber) -> CyclotomicNumber {
        self.check_level(other);
        CyclotomicNumber {
            level: self.level,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, other: &CyclotomicNumber) -> CyclotomicNumber {
        self.check_level(other);
        CyclotomicNumber {
            level: self.level,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber { level: self.level, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, other: &CyclotomicNumber) -> CyclotomicNumber {
        self.check_level(other);
        let n = self.coeffs.len();
        let mut prod = vec![BigRational::zero(); (2 * n).saturating_sub(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        CyclotomicNumber::new(self.level, prod)
    }
}

/// `Z[ζ_m]/(z)` as a finite abelian group.
pub fn quotient_by_principal(z: &CyclotomicNumber) -> Result<FgAbelianGroup> {
    if z.is_zero() {
        return Err(Error::ZeroQuotient);
    }
    let m = z.multiplication_matrix()?;
    Ok(PresentedAbelianGroup::new(m.rows(), m).normal_form())
}

/// `"num/den"` with a positive denominator.
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().ok()?;
    let d: BigInt = d.trim().parse().ok()?;
    (!d.is_zero()).then(|| BigRational::new(n, d))
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", format_rational(&q));
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => format!("z{}", self.level),
                _ => format!("z{}^{}", self.level, i),
            };
            let body = if mono.is_empty() {
                format_rational(&c.abs())
            } else if c.abs().is_one() {
                mono
            } else {
                format!("{}*{}", format_rational(&c.abs()), mono)
            };
            terms.push((c.is_negative(), body));
        }
        for (k, (neg, body)) in terms.iter().enumerate() {
            match (k, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct WireCyclotomic {
    level: u64,
    coeffs: Vec<String>,
}

impl Serialize for CyclotomicNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WireCyclotomic { level: self.level, coeffs: self.coeffs.iter().map(format_rational).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CyclotomicNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = WireCyclotomic::deserialize(d)?;
        if w.level == 0 {
            return Err(D::Error::custom("level must be positive"));
        }
        let coeffs = w
            .coeffs
            .iter()
            .map(|s| parse_rational(s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(CyclotomicNumber::new(w.level, coeffs))
    }
}
