//! Exact evaluation of Gauss sums, Jacobi sums, and the P- and H-functions.
//!
//! Exactness strategy: the target quantity `q^{(n-m)/2} H_q` (and likewise
//! the P-function for data over Q) is a rational integer. It is evaluated in
//! auxiliary prime fields `F_l` with `l = 1 mod lcm(p, q-1)` — each such
//! field holds exact images of the p-th and (q-1)-th roots of unity — and
//! recovered by symmetric CRT against an a-priori Weil-style bound. This
//! costs O(q) per evaluation after an O(q^2) table build, instead of
//! exponential-degree exact cyclotomic products; the slow exact path lives
//! in [`crate::oracles`] as an independent cross-check.

mod gauss;
mod hfun;
mod pfun;

pub use gauss::GaussTable;
pub use hfun::{h_extension_consistency, h_function, h_function_rational, HEvaluator};
pub use pfun::{jacobi_sum, p_to_h, pp_function, PEvaluator};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::ffield::{self, FieldCtx};
use crate::Q;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CharsumError {
    #[error("character exponent (q-1)*{0} is not integral")]
    CharacterNotDefined(Q),
    #[error("P-function route requires q = 1 mod M (q = {q}, M = {level})")]
    CongruenceRequired { q: u64, level: i64 },
    #[error("characteristic divides the datum level or scale constant")]
    BadCharacteristic,
    #[error("datum must be primitive")]
    NotPrimitive,
    #[error("datum is not defined over Q")]
    RequiresRationality,
    #[error("n - m is odd: no rational normalization q^{{(n-m)/2}} H exists")]
    NonIntegralWeight,
    #[error("lambda {0} does not reduce into the field")]
    BadLambda(Q),
    #[error("CRT residues disagree with the lifted value (internal)")]
    LiftInconsistent,
}

/// How an [`ExactValue`] was made exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftMethod {
    CrtLift,
    CyclotomicExact,
}

/// An exact rational produced from modular residues: the lifted value, the
/// residues used, and the magnitude bound the lift was checked against.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactValue {
    pub value: BigRational,
    pub residues: Vec<(u64, u64)>,
    pub bound: BigInt,
    pub method: LiftMethod,
}

impl ExactValue {
    pub fn as_i128(&self) -> Option<i128> {
        if !self.value.is_integer() {
            return None;
        }
        let n = self.value.to_integer();
        n.try_into().ok()
    }

    pub fn as_q(&self) -> Option<Q> {
        let n: i64 = self.value.numer().clone().try_into().ok()?;
        let d: i64 = self.value.denom().clone().try_into().ok()?;
        Some(Q::new(n, d))
    }
}

/// One auxiliary prime `l = 1 mod lcm(p, q-1)` with fixed roots of unity:
/// `zeta` of exact order `q - 1` and `xi` of exact order `p`.
#[derive(Debug, Clone)]
pub struct AuxPrime {
    pub ell: u64,
    pub zeta: u64,
    pub xi: u64,
}

/// Auxiliary primes whose product exceeds twice the lift bound.
#[derive(Debug, Clone)]
pub struct AuxPrimeCtx {
    pub primes: Vec<AuxPrime>,
    pub bound: BigInt,
}

impl AuxPrimeCtx {
    /// Collect auxiliary primes for the field until `prod l_i > 2 * bound`.
    pub fn for_field(ctx: &FieldCtx, bound: BigInt) -> AuxPrimeCtx {
        let p = ctx.p();
        let qm1 = ctx.q() - 1;
        let step = num_integer::lcm(p, qm1);
        let mut primes = Vec::new();
        let mut product = BigInt::one();
        let mut ell = step + 1;
        while product <= BigInt::from(2) * &bound {
            if ffield::is_prime(ell) {
                let g = smallest_primitive_root(ell);
                let zeta = ffield::mod_pow(g, (ell - 1) / qm1, ell);
                let xi = ffield::mod_pow(g, (ell - 1) / p, ell);
                debug_assert!(has_exact_order(zeta, qm1, ell));
                debug_assert!(has_exact_order(xi, p, ell));
                product *= BigInt::from(ell);
                primes.push(AuxPrime { ell, zeta, xi });
            }
            ell += step;
        }
        AuxPrimeCtx { primes, bound }
    }

    /// Symmetric CRT lift of the integer with the given residues (parallel
    /// to `self.primes`); `None` when the lift exceeds the bound, which
    /// signals an inconsistency upstream.
    pub fn lift(&self, residues: &[u64]) -> Option<BigInt> {
        debug_assert_eq!(residues.len(), self.primes.len());
        let mut m = BigInt::one();
        let mut x = BigInt::zero();
        for (aux, &r) in self.primes.iter().zip(residues) {
            let ell = BigInt::from(aux.ell);
            // x' = x mod m, x' = r mod ell.
            let inv = mod_inv_big(&m, &ell);
            let diff = (BigInt::from(r) - &x) % &ell;
            let t = (diff * inv) % &ell;
            x += &m * t;
            m *= &ell;
            x = ((x % &m) + &m) % &m;
        }
        // Symmetric representative.
        if &x * 2 > m {
            x -= &m;
        }
        (x.abs() <= self.bound).then_some(x)
    }
}

fn mod_inv_big(a: &BigInt, m: &BigInt) -> BigInt {
    let e = num_integer::Integer::extended_gcd(&a.mod_floor_ref(m), m);
    assert!(e.gcd.is_one());
    ((e.x % m) + m) % m
}

trait ModFloorRef {
    fn mod_floor_ref(&self, m: &BigInt) -> BigInt;
}

impl ModFloorRef for BigInt {
    fn mod_floor_ref(&self, m: &BigInt) -> BigInt {
        ((self % m) + m) % m
    }
}

pub fn smallest_primitive_root(ell: u64) -> u64 {
    let factors = ffield::factorize(ell - 1);
    (2..ell)
        .find(|&g| {
            factors
                .iter()
                .all(|&(f, _)| ffield::mod_pow(g, (ell - 1) / f, ell) != 1)
        })
        .expect("prime moduli have primitive roots")
}

fn has_exact_order(x: u64, n: u64, ell: u64) -> bool {
    if ffield::mod_pow(x, n, ell) != 1 {
        return false;
    }
    ffield::factorize(n)
        .iter()
        .all(|&(f, _)| ffield::mod_pow(x, n / f, ell) != 1)
}

/// Weil-style over-bound `n * q^n` for `q^{(n-m)/2} H_q` and the P-function.
pub fn lift_bound(n: usize, q: u64) -> BigInt {
    BigInt::from(n as u64) * BigInt::from(q).pow(n as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aux_primes_admit_roots() {
        let ctx = FieldCtx::extension_field(3, 2).unwrap();
        let aux = AuxPrimeCtx::for_field(&ctx, lift_bound(3, 9));
        assert!(!aux.primes.is_empty());
        for a in &aux.primes {
            assert_eq!((a.ell - 1) % 8, 0);
            assert_eq!((a.ell - 1) % 3, 0);
            assert!(has_exact_order(a.zeta, 8, a.ell));
            assert!(has_exact_order(a.xi, 3, a.ell));
        }
        let prod: BigInt = aux.primes.iter().map(|a| BigInt::from(a.ell)).product();
        assert!(prod > BigInt::from(2) * aux.bound.clone());
    }

    #[test]
    fn symmetric_lift_round_trip() {
        let ctx = FieldCtx::prime_field(13).unwrap();
        let aux = AuxPrimeCtx::for_field(&ctx, BigInt::from(100_000));
        for v in [-99_999i64, -1, 0, 1, 41_000, 99_999] {
            let residues: Vec<u64> = aux
                .primes
                .iter()
                .map(|a| v.rem_euclid(a.ell as i64) as u64)
                .collect();
            assert_eq!(aux.lift(&residues), Some(BigInt::from(v)));
        }
    }
}
