//! Restriction-only Mackey data over cyclic groups, the cellular cochain
//! complex of the cyclotomic Moore object, and Bredon cohomology.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::abelian::{BoundedComplex, FgAbelianGroup, Matrix, PresentedAbelianGroup};
use crate::numtheory::{combinations, divisors, factorize};
use crate::{Error, Result};

/// Values on the orbits `C_m/C_d` together with restrictions
/// `ext(d', d): value(d') -> value(d)` for `d | d'`.
#[derive(Clone, Debug)]
pub struct CyclicMackeyData {
    m: u64,
    values: BTreeMap<u64, PresentedAbelianGroup>,
    ext: BTreeMap<(u64, u64), Matrix>,
}

impl CyclicMackeyData {
    /// `ext(d', d)` is queried for every divisor pair `d | d'`.
    pub fn from_fn(
        m: u64,
        value: impl Fn(u64) -> PresentedAbelianGroup,
        ext: impl Fn(u64, u64) -> Matrix,
    ) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidMackey("group order must be positive".into()));
        }
        let divs = divisors(m);
        let values: BTreeMap<u64, PresentedAbelianGroup> = divs.iter().map(|&d| (d, value(d))).collect();
        let mut maps = BTreeMap::new();
        for &hi in &divs {
            for &lo in &divs {
                if hi % lo == 0 {
                    maps.insert((hi, lo), ext(hi, lo));
                }
            }
        }
        let data = CyclicMackeyData { m, values, ext: maps };
        data.validate()?;
        Ok(data)
    }

    fn validate(&self) -> Result<()> {
        let lattices: BTreeMap<u64, _> =
            self.values.iter().map(|(&d, v)| (d, v.relation_lattice())).collect();
        for (&(hi, lo), map) in &self.ext {
            let (src, dst) = (&self.values[&hi], &self.values[&lo]);
            if map.rows() != dst.n_generators() || map.cols() != src.n_generators() {
                return Err(Error::InvalidMackey(format!("ext({hi},{lo}) has the wrong shape")));
            }
            if !lattices[&lo].contains_columns(&map.mul(src.relations())) {
                return Err(Error::InvalidMackey(format!("ext({hi},{lo}) is not well defined")));
            }
            if hi == lo {
                let n = src.n_generators();
                let diff = diff(map, &Matrix::identity(n));
                if !lattices[&lo].contains_columns(&diff) {
                    return Err(Error::InvalidMackey(format!("ext({hi},{hi}) is not the identity")));
                }
            }
        }
        for (&(top, mid), upper) in &self.ext {
            for (&(mid2, low), lower) in &self.ext {
                if mid2 != mid {
                    continue;
                }
                let composite = lower.mul(upper);
                let direct = &self.ext[&(top, low)];
                if !lattices[&low].contains_columns(&diff(&composite, direct)) {
                    return Err(Error::InvalidMackey(format!(
                        "ext({top},{low}) differs from ext({mid},{low})∘ext({top},{mid})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn primes(&self) -> Vec<u64> {
        factorize(self.m).primes()
    }

    pub fn value(&self, d: u64) -> &PresentedAbelianGroup {
        &self.values[&d]
    }

    pub fn ext(&self, from: u64, to: u64) -> &Matrix {
        &self.ext[&(from, to)]
    }
}

fn diff(a: &Matrix, b: &Matrix) -> Matrix {
    let cols: Vec<Vec<BigInt>> = (0..a.cols())
        .map(|j| a.column(j).iter().zip(b.column(j)).map(|(x, y)| x - y).collect())
        .collect();
    Matrix::from_columns(a.rows(), &cols)
}

/// Čech-shaped complex over the subsets of `0..n`: degree `-s` holds the
/// sum of `value(S)` over `|S| = s` (lexicographic), and the component
/// `S -> S \ {S_j}` is `(-1)^j ext(S, S \ {S_j})` with `j` 1-based.
pub fn cech_complex(
    n: usize,
    value: impl Fn(&[usize]) -> PresentedAbelianGroup,
    ext: impl Fn(&[usize], &[usize]) -> Matrix,
) -> Result<BoundedComplex> {
    let layers: Vec<Vec<Vec<usize>>> = (0..=n).rev().map(|s| combinations(n, s)).collect();
    let mut terms = Vec::with_capacity(layers.len());
    let mut offsets: Vec<BTreeMap<Vec<usize>, (usize, usize)>> = Vec::new();
    for layer in &layers {
        let mut term = PresentedAbelianGroup::zero();
        let mut offs = BTreeMap::new();
        for s in layer {
            let v = value(s);
            offs.insert(s.clone(), (term.n_generators(), v.n_generators()));
            term = term.direct_sum(&v);
        }
        terms.push(term);
        offsets.push(offs);
    }
    let mut differentials = Vec::with_capacity(n);
    for k in 0..n {
        let (src_layer, dst_offs) = (&layers[k], &offsets[k + 1]);
        let mut d = Matrix::zeros(terms[k + 1].n_generators(), terms[k].n_generators());
        for s in src_layer {
            let (col0, _) = offsets[k][s];
            for j in 0..s.len() {
                let mut t = s.clone();
                t.remove(j);
                let (row0, rows) = dst_offs[&t];
                let block = ext(s, &t);
                assert_eq!(block.rows(), rows);
                let sign = if (j + 1) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                for r in 0..block.rows() {
                    for c in 0..block.cols() {
                        d.set(row0 + r, col0 + c, block.get(r, c) * &sign);
                    }
                }
            }
        }
        differentials.push(d);
    }
    BoundedComplex::new(-(n as i64), terms, differentials)
}

/// Cellular cochain complex in degrees `[-λ, 0]`.
pub fn moore_cochain_complex(data: &CyclicMackeyData) -> BoundedComplex {
    let primes = data.primes();
    let prod = |s: &[usize]| s.iter().map(|&i| primes[i]).product::<u64>();
    cech_complex(
        primes.len(),
        |s| data.value(prod(s)).clone(),
        |s, t| data.ext(prod(s), prod(t)).clone(),
    )
    .expect("validated Mackey data gives a valid complex")
}

pub fn bredon_cohomology(data: &CyclicMackeyData, s: i64) -> Result<FgAbelianGroup> {
    let lambda = data.primes().len() as i64;
    if s < -lambda || s > 0 {
        return Err(Error::DegreeOutOfRange(s, -lambda, 0));
    }
    moore_cochain_complex(data).cohomology(s)
}

/// `value(1)` modulo the images of `ext(p, 1)` over the primes `p | m`.
pub fn h0_fixed_point_oracle(data: &CyclicMackeyData) -> FgAbelianGroup {
    let base = data.value(1);
    let mut rel = base.relations().clone();
    for p in data.primes() {
        rel = rel.hcat(data.ext(p, 1));
    }
    PresentedAbelianGroup::new(base.n_generators(), rel).normal_form()
}

/// Weak fixed-point data of `u` acting on `Z/modulus`: `value(d)` is the
/// kernel of `u^(m/d) - 1`, presented on its generator, and the
/// restrictions are the subgroup inclusions.
pub fn cyclic_fixed_point_mackey(modulus: &BigInt, u: &BigInt, m: u64) -> Result<CyclicMackeyData> {
    if !modulus.is_positive() || m == 0 {
        return Err(Error::InvalidArgument("modulus and m must be positive".into()));
    }
    let u = u.mod_floor(modulus);
    if !u.gcd(modulus).is_one() {
        return Err(Error::InvalidArgument(format!("{u} is not a unit mod {modulus}")));
    }
    if !(u.modpow(&BigInt::from(m), modulus) - 1u32).mod_floor(modulus).is_zero() {
        return Err(Error::InvalidArgument(format!("{u}^{m} is not 1 mod {modulus}")));
    }
    let size = |d: u64| -> BigInt {
        let a = (u.modpow(&BigInt::from(m / d), modulus) - 1u32).mod_floor(modulus);
        if a.is_zero() {
            modulus.clone()
        } else {
            a.gcd(modulus)
        }
    };
    let sizes: BTreeMap<u64, BigInt> = divisors(m).into_iter().map(|d| (d, size(d))).collect();
    CyclicMackeyData::from_fn(
        m,
        |d| PresentedAbelianGroup::cyclic(sizes[&d].clone()),
        |hi, lo| Matrix::scalar(&sizes[&lo] / &sizes[&hi]),
    )
}
