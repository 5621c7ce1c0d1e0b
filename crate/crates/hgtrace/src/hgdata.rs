//! Hypergeometric data `{alpha, beta}` and their gamma vectors.
//!
//! A datum is a pair of equal-length multisets of rationals with `1 in beta`.
//! Its level `M` is the least common denominator; it is *primitive* when
//! `a_i - b_j` is never integral, and *defined over Q* when the multiset of
//! pairs `(a_i, b_i) mod Z` is stable under multiplication by every unit of
//! `Z/MZ`. Data over Q admit a gamma vector: integer multisets `(p_j)`,
//! `(q_k)` with
//!
//! ```text
//!   prod_i (X - e^{2 pi i a_i}) / (X - e^{2 pi i b_i})
//!     = prod_j (X^{p_j} - 1) / prod_k (X^{q_k} - 1),
//! ```
//!
//! which, together with the scale constant `N`, drives the rational-field
//! evaluation of the H-function.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use thiserror::Error;

use crate::Q;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DatumError {
    #[error("alpha and beta must be equal-length and beta must contain 1")]
    MalformedDatum,
    #[error("operation requires a datum defined over Q")]
    RequiresRationality,
    #[error("cannot parse rational '{0}'")]
    BadRational(String),
}

/// A hypergeometric datum: sorted multisets `alpha`, `beta` (entries reduced
/// to `(0, 1]`), the level `M`, and the primitivity / rationality flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HGDatum {
    alpha: Vec<Q>,
    beta: Vec<Q>,
    level: i64,
    primitive: bool,
    rational: bool,
}

/// Gamma vector of a datum over Q, plus the constant
/// `N = (-1)^{sum q_k} * prod p_j^{p_j} / prod q_k^{q_k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaVector {
    pub p_list: Vec<i64>,
    pub q_list: Vec<i64>,
    pub scale: Q,
}

/// Reduce a rational to the representative in `(0, 1]`.
fn frac_repr(x: Q) -> Q {
    let one = Q::from_integer(1);
    let mut y = x - x.floor();
    if y == Q::from_integer(0) {
        y = one;
    }
    y
}

impl HGDatum {
    /// Build a datum, computing level, primitivity, and rationality.
    pub fn new(alpha: &[Q], beta: &[Q]) -> Result<HGDatum, DatumError> {
        if alpha.is_empty() || alpha.len() != beta.len() {
            return Err(DatumError::MalformedDatum);
        }
        if !beta.iter().any(|b| b.is_integer()) {
            return Err(DatumError::MalformedDatum);
        }
        let mut alpha: Vec<Q> = alpha.iter().map(|&a| frac_repr(a)).collect();
        let mut beta: Vec<Q> = beta.iter().map(|&b| frac_repr(b)).collect();
        alpha.sort();
        beta.sort();

        let level = alpha
            .iter()
            .chain(beta.iter())
            .fold(1i64, |m, x| m.lcm(x.denom()));

        let primitive = alpha
            .iter()
            .all(|a| beta.iter().all(|b| !(a - b).is_integer()));

        // Defined over Q: the datum {alpha, beta} mod Z is stable under
        // multiplication by every unit of Z/MZ. A datum is a pair of
        // multisets, so stability is checked side by side.
        let stable = |v: &[Q], r: i64| {
            let mut mapped: Vec<Q> = v.iter().map(|&x| frac_repr(x * Q::from_integer(r))).collect();
            mapped.sort();
            mapped == v
        };
        let rational = (1..level)
            .filter(|r| r.gcd(&level) == 1)
            .all(|r| stable(&alpha, r) && stable(&beta, r));

        Ok(HGDatum {
            alpha,
            beta,
            level,
            primitive,
            rational,
        })
    }

    /// Parse "a1,a2,...;b1,b2,..." with rationals written "num/den".
    pub fn parse(s: &str) -> Result<HGDatum, DatumError> {
        let parts: Vec<&str> = s.split(';').collect();
        let (astr, bstr) = if parts.len() == 2 {
            (parts[0], parts[1])
        } else {
            return Err(DatumError::BadRational(s.to_string()));
        };
        let alpha = parse_rational_list(astr)?;
        let beta = parse_rational_list(bstr)?;
        HGDatum::new(&alpha, &beta)
    }

    pub fn alpha(&self) -> &[Q] {
        &self.alpha
    }
    pub fn beta(&self) -> &[Q] {
        &self.beta
    }
    pub fn len(&self) -> usize {
        self.alpha.len()
    }
    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }
    /// Level `M`: least common denominator of `alpha union beta`.
    pub fn level(&self) -> i64 {
        self.level
    }
    pub fn primitive(&self) -> bool {
        self.primitive
    }
    /// Defined over Q.
    pub fn rational(&self) -> bool {
        self.rational
    }
    /// Number of integral entries of `beta` (the `m` of the weight
    /// normalization `q^{(n-m)/2} H_q in Z`).
    pub fn integral_beta_count(&self) -> usize {
        self.beta.iter().filter(|b| b.is_integer()).count()
    }

    /// `(n - m)/2` with `n = |alpha|`, `m` the integral-beta count; `None`
    /// when `n - m` is odd (no rational normalization exists).
    pub fn weight_exponent(&self) -> Option<u32> {
        let n = self.len();
        let m = self.integral_beta_count();
        ((n - m) % 2 == 0).then_some(((n - m) / 2) as u32)
    }

    /// Gamma vector by cyclotomic peeling, largest index first.
    pub fn gamma_vector(&self) -> Result<GammaVector, DatumError> {
        if !self.rational {
            return Err(DatumError::RequiresRationality);
        }
        // Multiplicities of Phi_d in numerator minus denominator. Rationality
        // makes each side a union of full orbits {k/d : gcd(k,d)=1}.
        let mut mult: BTreeMap<i64, i64> = BTreeMap::new();
        for a in &self.alpha {
            *mult.entry(*a.denom()).or_insert(0) += 1;
        }
        for b in &self.beta {
            *mult.entry(*b.denom()).or_insert(0) -= 1;
        }
        // Each orbit of denominator d contributes phi(d) entries; convert
        // counts to Phi_d exponents.
        let mut exps: BTreeMap<i64, i64> = BTreeMap::new();
        for (&d, &c) in &mult {
            if c == 0 {
                continue;
            }
            let phi = euler_phi(d);
            debug_assert_eq!(
                c.abs() % phi,
                0,
                "rational datum must consist of full cyclotomic orbits"
            );
            exps.insert(d, c / phi);
        }
        let mut p_list = Vec::new();
        let mut q_list = Vec::new();
        while let Some((&d, &c)) = exps.iter().rev().find(|&(_, &c)| c != 0) {
            // Peel X^d - 1 = prod_{e | d} Phi_e from the appropriate side.
            if c > 0 {
                p_list.push(d);
            } else {
                q_list.push(d);
            }
            let sign = if c > 0 { -1 } else { 1 };
            for e in 1..=d {
                if d % e == 0 {
                    *exps.entry(e).or_insert(0) += sign;
                }
            }
        }
        p_list.sort_unstable();
        q_list.sort_unstable();
        debug_assert_eq!(
            p_list.iter().sum::<i64>(),
            q_list.iter().sum::<i64>(),
            "degree balance"
        );

        let mut scale = Q::from_integer(if q_list.iter().sum::<i64>() % 2 == 0 {
            1
        } else {
            -1
        });
        for &pj in &p_list {
            scale *= Q::from_integer(pj).pow(pj as i32);
        }
        for &qk in &q_list {
            scale /= Q::from_integer(qk).pow(qk as i32);
        }
        Ok(GammaVector {
            p_list,
            q_list,
            scale,
        })
    }
}

impl fmt::Display for HGDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_list = |v: &[Q]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{};{}", fmt_list(&self.alpha), fmt_list(&self.beta))
    }
}

impl GammaVector {
    /// `s(m)`: multiplicity of `X - e^{2 pi i m/(q-1)}` in
    /// `gcd(prod (X^{p_j}-1), prod (X^{q_k}-1))`.
    pub fn s_multiplicity(&self, q: u64, m: u64) -> u32 {
        let qm1 = (q - 1) as i64;
        let cnt = |list: &[i64]| {
            list.iter()
                .filter(|&&x| (x as i128 * m as i128) % qm1 as i128 == 0)
                .count() as u32
        };
        cnt(&self.p_list).min(cnt(&self.q_list))
    }

    /// Reconstruct the cyclotomic exponent multiset (Phi_d exponents) from
    /// the vector; used by round-trip tests.
    pub fn cyclotomic_exponents(&self) -> BTreeMap<i64, i64> {
        let mut exps = BTreeMap::new();
        for &pj in &self.p_list {
            for e in 1..=pj {
                if pj % e == 0 {
                    *exps.entry(e).or_insert(0) += 1;
                }
            }
        }
        for &qk in &self.q_list {
            for e in 1..=qk {
                if qk % e == 0 {
                    *exps.entry(e).or_insert(0) -= 1;
                }
            }
        }
        exps.retain(|_, v| *v != 0);
        exps
    }
}

pub fn euler_phi(n: i64) -> i64 {
    let mut n = n;
    let mut result = n;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            while n % d == 0 {
                n /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

pub fn parse_rational(s: &str) -> Result<Q, DatumError> {
    let s = s.trim();
    let bad = || DatumError::BadRational(s.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num.trim().parse().map_err(|_| bad())?;
        let d: i64 = den.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        Ok(Q::new(n, d))
    } else {
        let n: i64 = s.parse().map_err(|_| bad())?;
        Ok(Q::from_integer(n))
    }
}

fn parse_rational_list(s: &str) -> Result<Vec<Q>, DatumError> {
    s.split(',').map(parse_rational).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    fn datum(a: &[(i64, i64)], b: &[(i64, i64)]) -> HGDatum {
        let alpha: Vec<Q> = a.iter().map(|&(n, d)| q(n, d)).collect();
        let beta: Vec<Q> = b.iter().map(|&(n, d)| q(n, d)).collect();
        HGDatum::new(&alpha, &beta).unwrap()
    }

    #[test]
    fn build_datum_236() {
        let d = datum(&[(1, 2), (1, 6), (5, 6)], &[(1, 1), (1, 1), (1, 1)]);
        assert_eq!(d.level(), 6);
        assert!(d.primitive());
        assert!(d.rational());
    }

    #[test]
    fn build_datum_not_rational() {
        let d = datum(&[(1, 12), (5, 12)], &[(1, 1), (1, 1)]);
        assert!(!d.rational());
        assert!(d.gamma_vector().is_err());
    }

    #[test]
    fn build_datum_single_entry() {
        let d = datum(&[(1, 2)], &[(1, 1)]);
        assert!(d.primitive());
        assert_eq!(d.level(), 2);
    }

    #[test]
    fn malformed_data_rejected() {
        assert_eq!(
            HGDatum::new(&[q(1, 2)], &[q(1, 2)]).unwrap_err(),
            DatumError::MalformedDatum
        );
        assert_eq!(
            HGDatum::new(&[q(1, 2)], &[q(1, 1), q(1, 1)]).unwrap_err(),
            DatumError::MalformedDatum
        );
    }

    #[test]
    fn gamma_vector_half() {
        let gv = datum(&[(1, 2)], &[(1, 1)]).gamma_vector().unwrap();
        assert_eq!(gv.p_list, vec![2]);
        assert_eq!(gv.q_list, vec![1, 1]);
        assert_eq!(gv.scale, Q::from_integer(4));
    }

    #[test]
    fn gamma_vector_legendre() {
        let gv = datum(&[(1, 2), (1, 2)], &[(1, 1), (1, 1)])
            .gamma_vector()
            .unwrap();
        assert_eq!(gv.p_list, vec![2, 2]);
        assert_eq!(gv.q_list, vec![1, 1, 1, 1]);
        assert_eq!(gv.scale, Q::from_integer(16));
    }

    #[test]
    fn gamma_vector_cubic() {
        let gv = datum(&[(1, 3), (2, 3)], &[(1, 1), (1, 1)])
            .gamma_vector()
            .unwrap();
        assert_eq!(gv.p_list, vec![3]);
        assert_eq!(gv.q_list, vec![1, 1, 1]);
        assert_eq!(gv.scale, Q::from_integer(-27));
    }

    #[test]
    fn gamma_vector_246() {
        // HD(2,4,6) = {1/2,1/4,3/4}, {1,5/6,7/6}.
        let d = datum(&[(1, 2), (1, 4), (3, 4)], &[(1, 1), (5, 6), (7, 6)]);
        assert!(d.rational());
        let gv = d.gamma_vector().unwrap();
        assert_eq!(gv.p_list, vec![2, 3, 4]);
        assert_eq!(gv.q_list, vec![1, 1, 1, 6]);
        // sum q_k = 9 is odd, so N = -(2^2 3^3 4^4)/6^6 = -16/27.
        assert_eq!(gv.scale, q(-16, 27));
    }

    #[test]
    fn gamma_vector_sl2z() {
        let gv = datum(&[(1, 2), (1, 6), (5, 6)], &[(1, 1), (1, 1), (1, 1)])
            .gamma_vector()
            .unwrap();
        assert_eq!(gv.p_list, vec![6]);
        assert_eq!(gv.q_list, vec![1, 1, 1, 3]);
        assert_eq!(gv.scale, Q::from_integer(1728));
    }

    #[test]
    fn s_multiplicity_cases() {
        let gv = datum(&[(1, 2), (1, 2)], &[(1, 1), (1, 1)])
            .gamma_vector()
            .unwrap();
        assert_eq!(gv.s_multiplicity(5, 0), 2);
        assert_eq!(gv.s_multiplicity(5, 1), 0);
        // For ({2}, {1,1}) at q = 5, m = 2: the root -1 divides X^2 - 1 once
        // and (X - 1)^2 not at all, so the gcd multiplicity is 0.
        let gv2 = datum(&[(1, 2)], &[(1, 1)]).gamma_vector().unwrap();
        assert_eq!(gv2.s_multiplicity(5, 2), 0);
        assert_eq!(gv2.s_multiplicity(5, 0), 1);
    }

    #[test]
    fn cyclotomic_round_trip() {
        for (a, b) in [
            (
                vec![(1i64, 2i64), (1, 4), (3, 4)],
                vec![(1i64, 1i64), (5, 6), (7, 6)],
            ),
            (vec![(1, 2), (1, 6), (5, 6)], vec![(1, 1), (1, 1), (1, 1)]),
            (vec![(1, 3), (2, 3)], vec![(1, 1), (1, 1)]),
        ] {
            let d = datum(&a, &b);
            let gv = d.gamma_vector().unwrap();
            // Recompute the expected Phi_d exponents straight from the datum.
            let mut expect = BTreeMap::new();
            for x in d.alpha() {
                *expect.entry(*x.denom()).or_insert(0i64) += 1;
            }
            for x in d.beta() {
                *expect.entry(*x.denom()).or_insert(0i64) -= 1;
            }
            let expect: BTreeMap<i64, i64> = expect
                .into_iter()
                .filter(|&(_, c)| c != 0)
                .map(|(d0, c)| (d0, c / euler_phi(d0)))
                .collect();
            assert_eq!(gv.cyclotomic_exponents(), expect);
        }
    }

    #[test]
    fn parse_datum_strings() {
        let d = HGDatum::parse("1/2,1/6,5/6;1,1,1").unwrap();
        assert_eq!(d.level(), 6);
        assert!(HGDatum::parse("1/0;1").is_err());
        assert!(HGDatum::parse("1/2").is_err());
    }

    #[test]
    fn weight_exponent() {
        let d = datum(&[(1, 2), (1, 4), (3, 4)], &[(1, 1), (5, 6), (7, 6)]);
        assert_eq!(d.weight_exponent(), Some(1));
        let d2 = datum(&[(1, 2), (1, 2)], &[(1, 1), (1, 1)]);
        assert_eq!(d2.weight_exponent(), Some(0));
    }
}
