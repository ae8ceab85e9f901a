//! Batch runners over parameter matrices; records come out in a fixed
//! order regardless of scheduling.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::{verify_l_identities_with, BaseCounts, BaseCurve, CountOptions, KummerCover};
use crate::dirichlet::{
    character_with_kernel, conductor_and_primitivize, cyclic_quotient, prediction_report, subgroups, unit_group,
    verify_norm_identity_numberfield, verify_order_identity, FieldSpec,
};
use crate::ffqlc::{verify_induced_ff, verify_main_theorem_ff, CyclicCharacter, InducedRepFF};
use crate::numtheory::{divisors, euler_phi, prime_power};
use crate::report::{SuiteReport, VerificationReport};
use crate::{Error, Result};

pub fn run_ffqlc(qs: &[u64], m_max: u64, k_max: u64) -> Result<SuiteReport> {
    if let Some(&q) = qs.iter().find(|&&q| prime_power(q).is_none()) {
        return Err(Error::InvalidArgument(format!("{q} is not a prime power")));
    }
    if m_max == 0 || k_max == 0 {
        return Err(Error::InvalidArgument("m-max and k-max must be positive".into()));
    }
    let mut cases = Vec::new();
    for &q in qs {
        for m in 1..=m_max {
            for a in 0..m {
                for k in 1..=k_max {
                    cases.push((q, CyclicCharacter::new(m, a), k));
                }
            }
        }
    }
    let mut reports: Vec<VerificationReport> =
        cases.par_iter().map(|&(q, chi, k)| verify_main_theorem_ff(q, chi, k)).collect();
    let induced = induced_sample(qs, m_max, k_max)?;
    reports.extend(induced.par_iter().map(|(q, rep, k)| verify_induced_ff(*q, rep, *k)).collect::<Vec<_>>());
    Ok(SuiteReport { reports })
}

/// For small `m`: the sum over all divisors `h` of the induced faithful
/// characters with their natural multiplicities, and a mixed sum.
fn induced_sample(qs: &[u64], m_max: u64, k_max: u64) -> Result<Vec<(u64, InducedRepFF, u64)>> {
    let mut out = Vec::new();
    for &q in qs {
        for m in 2..=m_max.min(6) {
            let natural: Vec<(u64, u64, u32)> = divisors(m)
                .into_iter()
                .map(|h| {
                    let a = u64::from(h > 1);
                    (h, a, (euler_phi(m) / euler_phi(CyclicCharacter::new(h, a).effective_order())) as u32)
                })
                .collect();
            let mixed = vec![(m, 1, 1), (1, 0, 2)];
            for k in 1..=k_max.min(3) {
                out.push((q, InducedRepFF::new(m, natural.clone())?, k));
                out.push((q, InducedRepFF::new(m, mixed.clone())?, k));
            }
        }
    }
    Ok(out)
}

/// `{"p": p, "d": d, "f": [c0, c1, ...]}`, coefficients reduced mod `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSpec {
    pub p: u64,
    pub d: u64,
    pub f: Vec<i64>,
}

impl CoverSpec {
    pub fn cover(&self) -> Result<KummerCover> {
        if self.p < 2 {
            return Err(Error::InvalidArgument(format!("{} is not prime", self.p)));
        }
        let p = self.p as i64;
        let f: Vec<u64> = self.f.iter().map(|c| c.rem_euclid(p) as u64).collect();
        KummerCover::new(self.p, self.d, &f)
    }
}

pub fn default_covers() -> Vec<(CoverSpec, Option<usize>)> {
    vec![
        (CoverSpec { p: 3, d: 2, f: vec![0, 1] }, None),
        (CoverSpec { p: 5, d: 4, f: vec![0, 1] }, None),
        (CoverSpec { p: 7, d: 3, f: vec![1, 1] }, Some(10)),
    ]
}

/// Point data is computed once per `(p, f, B)` and shared by every `d`.
pub fn run_curves(specs: &[(CoverSpec, Option<usize>)], options: CountOptions) -> Result<SuiteReport> {
    let covers: Vec<(KummerCover, usize)> = specs
        .iter()
        .map(|(s, b)| s.cover().map(|c| {
            let order = b.unwrap_or_else(|| c.default_order());
            (c, order)
        }))
        .collect::<Result<_>>()?;
    if covers.iter().any(|(_, b)| *b == 0) {
        return Err(Error::InvalidArgument("order must be positive".into()));
    }
    let mut keys: Vec<(u64, Vec<u64>, usize)> = covers.iter().map(|(c, b)| (c.p(), c.f().to_vec(), *b)).collect();
    keys.sort();
    keys.dedup();
    let counts: BTreeMap<(u64, Vec<u64>, usize), BaseCounts> = keys
        .par_iter()
        .map(|(p, f, b)| {
            let base = BaseCurve::new(*p, f)?;
            Ok(((*p, f.clone(), *b), BaseCounts::compute(&base, *b, options)?))
        })
        .collect::<Result<_>>()?;
    let reports = covers
        .par_iter()
        .map(|(c, b)| verify_l_identities_with(c, &counts[&(c.p(), c.f().to_vec(), *b)]))
        .collect();
    Ok(SuiteReport { reports })
}

/// Every `(p, d, f)` of the standard matrix: `p ∈ {3,5,7}`, `d | p-1`.
pub fn standard_curve_matrix() -> Vec<(CoverSpec, Option<usize>)> {
    let polys: [Vec<i64>; 4] = [vec![0, 1], vec![1, 1], vec![0, 1, 0, 1], vec![1, -1, 0, 1]];
    let mut out = Vec::new();
    for p in [3u64, 5, 7] {
        for f in &polys {
            for d in divisors(p - 1) {
                out.push((CoverSpec { p, d, f: f.clone() }, None));
            }
        }
    }
    out
}

enum DirichletCase {
    Norm(u64, Vec<u64>, u32),
    Order(u64, Vec<u64>, usize),
    Prediction(u64, Vec<u64>, u32),
}

fn run_dirichlet_cases(cases: Vec<DirichletCase>) -> SuiteReport {
    let reports = cases
        .par_iter()
        .map(|c| match c {
            DirichletCase::Norm(n, h, l) => verify_norm_identity_numberfield(*n, h, *l),
            DirichletCase::Order(n, h, k) => verify_order_identity(*n, h, *k),
            DirichletCase::Prediction(n, h, l) => prediction_report(*n, h, *l),
        })
        .collect();
    SuiteReport { reports }
}

fn field_cases(n: u64, h: &[u64], level_max: u32, cases: &mut Vec<DirichletCase>, predict: bool) {
    let totally_real = unit_group(n).contains_minus_one(h);
    if totally_real {
        for l in 1..=level_max {
            cases.push(DirichletCase::Norm(n, h.to_vec(), l));
        }
    }
    for k in 2..=(2 * level_max as usize + 1) {
        cases.push(DirichletCase::Order(n, h.to_vec(), k));
    }
    if totally_real && predict {
        for l in 1..=level_max {
            cases.push(DirichletCase::Prediction(n, h.to_vec(), l));
        }
    }
}

/// All `N <= n_max` and subgroups `H` with cyclic quotient: the norm
/// identity when `-1 ∈ H`, orders for `2 <= k <= 2n_max + 1`, and one
/// prediction per totally real field (at its conductor).
pub fn run_dirichlet(n_max: u64, level_max: u32) -> Result<SuiteReport> {
    if n_max == 0 || level_max == 0 {
        return Err(Error::InvalidArgument("modulus-max and n-max must be positive".into()));
    }
    let mut cases = Vec::new();
    for n in 1..=n_max {
        for h in subgroups(n) {
            if cyclic_quotient(n, &h).is_none() {
                continue;
            }
            let chi = character_with_kernel(n, &h)?;
            let at_conductor = conductor_and_primitivize(&chi).0 == n;
            field_cases(n, &h, level_max, &mut cases, at_conductor);
        }
    }
    Ok(run_dirichlet_cases(cases))
}

pub fn run_dirichlet_field(field: &FieldSpec, level_max: u32) -> Result<SuiteReport> {
    let h = field.resolve()?;
    if level_max == 0 {
        return Err(Error::InvalidArgument("n-max must be positive".into()));
    }
    if cyclic_quotient(field.modulus, &h).is_none() {
        return Err(Error::InvalidArgument(format!("(Z/{})^x / {h:?} is not cyclic", field.modulus)));
    }
    let mut cases = Vec::new();
    field_cases(field.modulus, &h, level_max, &mut cases, true);
    Ok(run_dirichlet_cases(cases))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    #[test]
    fn ffqlc_smallest_case() {
        let suite = run_ffqlc(&[2], 2, 1).unwrap();
        assert!(!suite.has_failures());
        assert!(run_ffqlc(&[6], 2, 1).is_err());
    }

    #[test]
    fn dirichlet_small_matrix() {
        let suite = run_dirichlet(8, 1).unwrap();
        assert!(!suite.has_failures(), "{}", suite.to_tsv());
        let predictions: Vec<_> = suite.entries().filter(|e| e.status == Status::Prediction).collect();
        assert!(predictions.iter().any(|e| e.case.starts_with("dirichlet N=1 ") && e.value == "1/24"));
        assert!(predictions.iter().any(|e| e.case.starts_with("dirichlet N=5 ") && e.value == "1/120"));
    }

    #[test]
    fn curves_defaults() {
        let suite = run_curves(&default_covers(), CountOptions::default()).unwrap();
        assert!(!suite.has_failures(), "{}", suite.to_tsv());
    }
}
