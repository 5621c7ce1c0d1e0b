//! The P-function (period) route and its conversion to H.
//!
//! `P(alpha, beta; lambda)` is a normalized character-group sum of products
//! of Jacobi-sum binomials `(A; B) = -B(-1) J(A, B-bar)`, defined whenever
//! `q = 1 mod M`. For data over Q it is a rational integer, computed here in
//! the auxiliary residue fields and CRT-lifted; dividing by the Jacobi-sum
//! product of the P–H relation recovers `H_q`, giving a route to H fully
//! independent of the gamma-vector formula.
//!
//! The binomial pairing follows the paper's presentation: `alpha` ordered by
//! denominator (so `a_1` has the smallest), `beta` with its integral entry
//! first.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cyclo::{CycloElt, GroupRingElt};
use crate::ffield::{mod_mul, mod_pow, FieldCtx};
use crate::hgdata::HGDatum;
use crate::Q;

use super::gauss::GaussTable;
use super::{lift_bound, AuxPrimeCtx, CharsumError, ExactValue, LiftMethod};

/// Reusable P-function evaluator for one `(field, datum)` pair with
/// `q = 1 mod M`.
pub struct PEvaluator<'a> {
    ctx: &'a FieldCtx,
    aux: AuxPrimeCtx,
    tables: Vec<GaussTable>,
    /// Character exponents `(q-1) a_i` and `(q-1) b_i` in presentation order.
    a_exp: Vec<i64>,
    b_exp: Vec<i64>,
    /// The rational sign `prod_{i>=2} (-A_i B_i(-1))`.
    prefactor: i64,
}

impl<'a> PEvaluator<'a> {
    pub fn new(ctx: &'a FieldCtx, datum: &HGDatum) -> Result<PEvaluator<'a>, CharsumError> {
        if !datum.primitive() {
            return Err(CharsumError::NotPrimitive);
        }
        let q = ctx.q();
        if (q - 1) % datum.level() as u64 != 0 {
            return Err(CharsumError::CongruenceRequired {
                q,
                level: datum.level(),
            });
        }
        let mut alpha: Vec<Q> = datum.alpha().to_vec();
        alpha.sort_by_key(|x| (*x.denom(), *x.numer()));
        let mut beta: Vec<Q> = datum.beta().to_vec();
        beta.sort_by_key(|x| (*x.denom(), *x.numer()));

        let exp_of = |x: &Q| -> i64 {
            let s = *x * Q::from_integer((q - 1) as i64);
            s.to_integer().rem_euclid((q - 1) as i64)
        };
        let a_exp: Vec<i64> = alpha.iter().map(exp_of).collect();
        let b_exp: Vec<i64> = beta.iter().map(exp_of).collect();

        // prod_{i>=2} (-A_i B_i(-1)): chi(-1) = (-1)^{exponent of chi}, since
        // zeta_{q-1}^{(q-1)/2} = -1.
        let mut prefactor = 1i64;
        for i in 1..a_exp.len() {
            let e = (a_exp[i] + b_exp[i]).rem_euclid((q - 1) as i64);
            let chi_minus_one = if e % 2 == 1 { -1 } else { 1 };
            prefactor *= -chi_minus_one;
        }

        let aux = AuxPrimeCtx::for_field(ctx, lift_bound(datum.len(), q));
        let tables = aux
            .primes
            .iter()
            .map(|a| GaussTable::build(ctx, a))
            .collect();
        Ok(PEvaluator {
            ctx,
            aux,
            tables,
            a_exp,
            b_exp,
            prefactor,
        })
    }

    /// Binomial `(omega^a; omega^b) = -omega^b(-1) J(omega^a, omega^{-b})`
    /// mod the auxiliary prime behind `table`.
    fn binom(&self, table: &GaussTable, a: i64, b: i64) -> u64 {
        let q = self.ctx.q();
        let sign = table.char_at_minus_one(b);
        let j = table.jacobi(a, -b, q);
        (table.ell - mod_mul(sign, j, table.ell)) % table.ell
    }

    /// The P-function value as a CRT-lifted rational integer. Requires the
    /// datum to be defined over Q (otherwise the value is a non-rational
    /// cyclotomic integer — use the exact oracle path instead).
    pub fn eval(&self, lambda: u64) -> Result<ExactValue, CharsumError> {
        let q = self.ctx.q();
        let qm1 = q - 1;
        let n = self.a_exp.len();
        let lam_dlog = if lambda == 0 {
            None
        } else {
            Some(self.ctx.dlog(lambda).unwrap())
        };
        let mut residues = Vec::with_capacity(self.tables.len());
        for table in &self.tables {
            let ell = table.ell;
            let mut total;
            if let Some(d) = lam_dlog {
                let mut sum = 0u64;
                for c in 0..qm1 as i64 {
                    let mut term = 1u64;
                    for i in 0..n {
                        term = mod_mul(
                            term,
                            self.binom(table, self.a_exp[i] + c, self.b_exp[i] + c),
                            ell,
                        );
                        if term == 0 {
                            break;
                        }
                    }
                    if term == 0 {
                        continue;
                    }
                    let zi = (c as u64 * d % qm1) as usize;
                    sum = (sum + mod_mul(term, table.zeta_pow[zi], ell)) % ell;
                }
                // Character-sum part normalized by 1/(1-q), as in the
                // H-function definition; the 1/(q-1) reading fails the
                // paper's own P({1/2,1/2},{1,1};1;F_5) = -1 anchor and the
                // P-H relation.
                let inv_1mq = mod_pow((1 + ell - q % ell) % ell, ell - 2, ell);
                total = mod_mul(sum, inv_1mq, ell);
            } else {
                // delta(0) term only: prod_{i>=2} (A_i; B_i).
                let mut dterm = 1u64;
                for i in 1..n {
                    dterm = mod_mul(dterm, self.binom(table, self.a_exp[i], self.b_exp[i]), ell);
                }
                total = dterm;
            }
            if self.prefactor < 0 {
                total = (ell - total) % ell;
            }
            residues.push(total);
        }
        let lifted = self
            .aux
            .lift(&residues)
            .ok_or(CharsumError::RequiresRationality)?;
        Ok(ExactValue {
            value: BigRational::from_integer(lifted),
            residues: self
                .aux
                .primes
                .iter()
                .map(|a| a.ell)
                .zip(residues)
                .collect(),
            bound: self.aux.bound.clone(),
            method: LiftMethod::CrtLift,
        })
    }

    /// The P–H divisor `prod_{i>=2} omega^{(q-1)a_i}(-1)
    /// J(omega^{(q-1)a_i}, omega^{-(q-1)b_i})`, lifted to an integer.
    pub fn ph_divisor(&self) -> Result<BigInt, CharsumError> {
        let mut residues = Vec::with_capacity(self.tables.len());
        let q = self.ctx.q();
        for table in &self.tables {
            let ell = table.ell;
            let mut d = 1u64;
            for i in 1..self.a_exp.len() {
                let s = table.char_at_minus_one(self.a_exp[i]);
                let j = table.jacobi(self.a_exp[i], -self.b_exp[i], q);
                d = mod_mul(d, mod_mul(s, j, ell), ell);
            }
            residues.push(d);
        }
        self.aux
            .lift(&residues)
            .ok_or(CharsumError::RequiresRationality)
    }
}

/// One-shot P-function value.
pub fn pp_function(
    ctx: &FieldCtx,
    datum: &HGDatum,
    lambda: u64,
) -> Result<ExactValue, CharsumError> {
    PEvaluator::new(ctx, datum)?.eval(lambda)
}

/// H via the P-route: `H = P / prod_{i>=2} omega^{a_i}(-1) J(...)`, per the
/// P–H relation. Valid for `q = 1 mod M`; independent of the gamma-vector
/// formula.
pub fn p_to_h(
    ctx: &FieldCtx,
    datum: &HGDatum,
    lambda: u64,
) -> Result<ExactValue, CharsumError> {
    let ev = PEvaluator::new(ctx, datum)?;
    let p_val = ev.eval(lambda)?;
    let div = ev.ph_divisor()?;
    Ok(ExactValue {
        value: p_val.value.clone() / BigRational::from_integer(div),
        residues: p_val.residues,
        bound: p_val.bound,
        method: LiftMethod::CrtLift,
    })
}

/// Exact Jacobi sum `J(omega^{(q-1)a}, omega^{(q-1)b})` as a cyclotomic
/// integer in power-basis form, by direct O(q) group-ring summation.
pub fn jacobi_sum(ctx: &FieldCtx, a: Q, b: Q) -> Result<CycloElt, CharsumError> {
    let q = ctx.q();
    let qm1 = (q - 1) as i64;
    let scaled_a = a * Q::from_integer(qm1);
    let scaled_b = b * Q::from_integer(qm1);
    if !scaled_a.is_integer() || !scaled_b.is_integer() {
        let bad = if scaled_a.is_integer() { b } else { a };
        return Err(CharsumError::CharacterNotDefined(bad));
    }
    let ka = scaled_a.to_integer().rem_euclid(qm1) as u64;
    let kb = scaled_b.to_integer().rem_euclid(qm1) as u64;
    // Order of the pair of characters: lcm of the individual orders.
    let ord = |k: u64| {
        if k == 0 {
            1
        } else {
            (q - 1) / num_integer::gcd(k, q - 1)
        }
    };
    let m = num_integer::lcm(ord(ka), ord(kb)) as usize;
    let to_m = |e: u64| (e % (q - 1)) as u128 * m as u128 / (q - 1) as u128;
    let mut acc = GroupRingElt::zero(m);
    for t in ctx.elements() {
        if t == 0 {
            continue;
        }
        let s = ctx.sub(1, t);
        if s == 0 {
            continue;
        }
        let e = (ka * ctx.dlog(t).unwrap() + kb * ctx.dlog(s).unwrap()) % (q - 1);
        acc.coeffs[to_m(e) as usize] += 1;
    }
    Ok(acc.to_power_basis())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charsum::hfun::HEvaluator;
    use num_traits::ToPrimitive;

    fn datum(a: &[(i64, i64)], b: &[(i64, i64)]) -> HGDatum {
        let alpha: Vec<Q> = a.iter().map(|&(n, d)| Q::new(n, d)).collect();
        let beta: Vec<Q> = b.iter().map(|&(n, d)| Q::new(n, d)).collect();
        HGDatum::new(&alpha, &beta).unwrap()
    }

    #[test]
    fn pp_value_legendre_at_one() {
        // P({1/2,1/2},{1,1}; 1; F_5) = -1.
        let d = datum(&[(1, 2), (1, 2)], &[(1, 1), (1, 1)]);
        let ctx = FieldCtx::prime_field(5).unwrap();
        let p = pp_function(&ctx, &d, 1).unwrap();
        assert_eq!(p.value.to_integer().to_i64(), Some(-1));
    }

    #[test]
    fn pp_delta_term_at_zero() {
        let d = datum(&[(1, 2), (1, 2)], &[(1, 1), (1, 1)]);
        let ctx = FieldCtx::prime_field(5).unwrap();
        let p0 = pp_function(&ctx, &d, 0).unwrap();
        // prefactor * (A_2; eps), with (A; eps) = -J(A, eps) = +1 and the
        // prefactor -A_2 B_2(-1) = -phi(-1) = -1 at p = 5.
        assert_eq!(p0.value.to_integer().to_i64(), Some(-1));
    }

    #[test]
    fn congruence_required() {
        let d = datum(&[(1, 3), (2, 3)], &[(1, 1), (1, 1)]);
        let ctx = FieldCtx::prime_field(5).unwrap();
        assert!(matches!(
            pp_function(&ctx, &d, 1),
            Err(CharsumError::CongruenceRequired { .. })
        ));
    }

    #[test]
    fn ph_route_matches_gamma_route() {
        // Dual-path equality on registry data at q = 1 mod M.
        let cases = [
            (
                vec![(1i64, 2i64), (1, 2), (1, 2)],
                vec![(1i64, 1i64), (1, 1), (1, 1)],
                5u64,
            ),
            (
                vec![(1, 2), (1, 6), (5, 6)],
                vec![(1, 1), (1, 1), (1, 1)],
                13,
            ),
            (
                vec![(1, 2), (1, 4), (3, 4)],
                vec![(1, 1), (5, 6), (7, 6)],
                13,
            ),
            (vec![(1, 3), (2, 3)], vec![(1, 1), (1, 1)], 7),
        ];
        for (a, b, p) in cases {
            let d = datum(&a, &b);
            let ctx = FieldCtx::prime_field(p).unwrap();
            let hev = HEvaluator::new(&ctx, &d).unwrap();
            for t in 1..p {
                let h_gamma = hev.eval(t).value.clone();
                let h_p = p_to_h(&ctx, &d, t).unwrap().value.clone();
                assert_eq!(h_gamma, h_p, "datum {d}, p = {p}, t = {t}");
            }
        }
    }

    #[test]
    fn jacobi_sum_trivial() {
        let ctx = FieldCtx::prime_field(11).unwrap();
        let j = jacobi_sum(&ctx, Q::new(0, 1), Q::new(0, 1)).unwrap();
        assert_eq!(j.as_integer(), Some(9)); // q - 2
    }

    #[test]
    fn jacobi_sum_quadratic() {
        let ctx = FieldCtx::prime_field(5).unwrap();
        let j = jacobi_sum(&ctx, Q::new(1, 2), Q::new(1, 2)).unwrap();
        assert_eq!(j.as_integer(), Some(-1)); // -phi(-1) at p = 5
    }

    #[test]
    fn jacobi_sum_cubic_norm_and_congruence() {
        let ctx = FieldCtx::prime_field(7).unwrap();
        let j = jacobi_sum(&ctx, Q::new(1, 3), Q::new(1, 3)).unwrap();
        assert_eq!(j.order, 3);
        // pi * pi-bar = 7 and pi = -1 mod 3 in Z[zeta_3].
        let as_ring = {
            let mut e = GroupRingElt::zero(3);
            e.coeffs[0] = j.coeffs[0];
            e.coeffs[1] = j.coeffs[1];
            e
        };
        let norm = as_ring.mul(&as_ring.galois(2)).to_power_basis();
        assert_eq!(norm.as_integer(), Some(7));
        assert!(j.congruent_to_int(-1, 3));
    }

    #[test]
    fn jacobi_sum_rejects_bad_exponent() {
        let ctx = FieldCtx::prime_field(7).unwrap();
        assert!(matches!(
            jacobi_sum(&ctx, Q::new(1, 4), Q::new(1, 4)),
            Err(CharsumError::CharacterNotDefined(_))
        ));
    }
}
