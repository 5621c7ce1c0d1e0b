//! The H-function via the rational-data Gauss-sum formula.
//!
//! For a datum over Q with gamma vector `(p_j), (q_k)` and constant `N`,
//!
//! ```text
//!   H_q(lambda) = (-1)^{r+s}/(1-q) * sum_{m=0}^{q-2} q^{s(m)-s(0)}
//!                 prod_j g(omega^{m p_j}) prod_k g(omega^{-m q_k})
//!                 omega^m(N^{-1} lambda),
//! ```
//!
//! valid for every `F_q` with `q` coprime to the level and to `N`. The value
//! `q^{(n-m)/2} H_q` is a rational integer; it is computed per auxiliary
//! prime and CRT-lifted. At `lambda = 0` only the `m = 0` term survives
//! (the trivial character is taken as 1 at 0 in this sum), giving the
//! closed form `1/(1-q)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::ffield::{mod_mul, mod_pow, FieldCtx};
use crate::hgdata::{GammaVector, HGDatum};
use crate::Q;

use super::gauss::GaussTable;
use super::{lift_bound, AuxPrimeCtx, CharsumError, ExactValue, LiftMethod};

/// Reusable H-function evaluator for one `(field, datum)` pair.
pub struct HEvaluator<'a> {
    ctx: &'a FieldCtx,
    aux: AuxPrimeCtx,
    /// dlog of the fixed argument scale `N^{-1}`.
    scale_inv_dlog: u64,
    /// `(n - m)/2`: the lifted integer is `q^weight_exp * H`.
    weight_exp: u32,
    /// Per auxiliary prime: `(zeta powers, weighted Gauss products W[m])`.
    per_ell: Vec<EllData>,
    /// Optional all-argument table: `hhat[i][d] = q^e H(arg with dlog d) mod l_i`.
    hhat: Option<Vec<Vec<u64>>>,
}

struct EllData {
    ell: u64,
    zeta_pow: Vec<u64>,
    /// `W[m] = pref * q^{s(m)-s(0)} prod_j g(omega^{m p_j}) prod_k g(omega^{-m q_k})`,
    /// with `pref = (-1)^{r+s} (1-q)^{-1} q^{(n-m)/2}` folded in.
    w: Vec<u64>,
}

impl<'a> HEvaluator<'a> {
    pub fn new(ctx: &'a FieldCtx, datum: &HGDatum) -> Result<HEvaluator<'a>, CharsumError> {
        if !datum.primitive() {
            return Err(CharsumError::NotPrimitive);
        }
        let gv = datum
            .gamma_vector()
            .map_err(|_| CharsumError::RequiresRationality)?;
        let weight_exp = datum
            .weight_exponent()
            .ok_or(CharsumError::NonIntegralWeight)?;
        if datum.level() % ctx.p() as i64 == 0 {
            return Err(CharsumError::BadCharacteristic);
        }
        let scale_inv = ctx
            .embed_rational(gv.scale.recip())
            .map_err(|_| CharsumError::BadCharacteristic)?;
        if scale_inv == 0 {
            return Err(CharsumError::BadCharacteristic);
        }
        let scale_inv_dlog = ctx.dlog(scale_inv).unwrap();

        let q = ctx.q();
        let aux = AuxPrimeCtx::for_field(ctx, lift_bound(datum.len(), q));
        let per_ell = aux
            .primes
            .iter()
            .map(|a| {
                let table = GaussTable::build(ctx, a);
                EllData::new(ctx, &gv, weight_exp, table)
            })
            .collect();
        Ok(HEvaluator {
            ctx,
            aux,
            scale_inv_dlog,
            weight_exp,
            per_ell,
            hhat: None,
        })
    }

    pub fn field(&self) -> &FieldCtx {
        self.ctx
    }

    /// Precompute `q^e H` for every nonzero argument (one O(q^2) pass per
    /// auxiliary prime); afterwards `eval` is a table lookup.
    pub fn precompute_all(&mut self) {
        if self.hhat.is_some() {
            return;
        }
        let qm1 = (self.ctx.q() - 1) as usize;
        let tables = self
            .per_ell
            .iter()
            .map(|e| {
                let mut row = vec![0u64; qm1];
                for (d, slot) in row.iter_mut().enumerate() {
                    *slot = e.sum_at(d);
                }
                row
            })
            .collect();
        self.hhat = Some(tables);
    }

    /// `H_q(datum; lambda)` as an exact rational.
    pub fn eval(&self, lambda: u64) -> ExactValue {
        let q = self.ctx.q();
        if lambda == 0 {
            // Only m = 0 survives: H(0) = 1/(1 - q).
            return ExactValue {
                value: -BigRational::new(BigInt::one(), BigInt::from(q - 1)),
                residues: Vec::new(),
                bound: self.aux.bound.clone(),
                method: LiftMethod::CyclotomicExact,
            };
        }
        let d = (self.scale_inv_dlog + self.ctx.dlog(lambda).expect("nonzero"))
            % (q - 1);
        let residues: Vec<u64> = match &self.hhat {
            Some(rows) => rows.iter().map(|row| row[d as usize]).collect(),
            None => self.per_ell.iter().map(|e| e.sum_at(d as usize)).collect(),
        };
        let lifted = self
            .aux
            .lift(&residues)
            .expect("q^e H must lift within the Weil bound");
        ExactValue {
            value: BigRational::new(lifted, BigInt::from(q).pow(self.weight_exp)),
            residues: self
                .aux
                .primes
                .iter()
                .map(|a| a.ell)
                .zip(residues.iter().copied())
                .map(|(l, r)| (l, r))
                .collect(),
            bound: self.aux.bound.clone(),
            method: LiftMethod::CrtLift,
        }
    }

    /// The lifted integer `q^{(n-m)/2} H_q(lambda)`, which is what the trace
    /// formulas consume directly.
    pub fn eval_scaled_int(&self, lambda: u64) -> i128 {
        let v = self.eval(lambda);
        if v.method == LiftMethod::CyclotomicExact {
            // lambda = 0 corner: q^e / (1-q) is not integral; callers never
            // feed lambda = 0 into trace formulas.
            panic!("scaled integer undefined at lambda = 0");
        }
        let num: BigInt = v.value.numer() * BigInt::from(self.ctx.q()).pow(self.weight_exp)
            / v.value.denom();
        num.try_into().expect("within i128 range at desk scale")
    }

    pub fn eval_rational(&self, lambda: Q) -> Result<ExactValue, CharsumError> {
        let x = self
            .ctx
            .embed_rational(lambda)
            .map_err(|_| CharsumError::BadLambda(lambda))?;
        Ok(self.eval(x))
    }
}

impl EllData {
    fn new(ctx: &FieldCtx, gv: &GammaVector, weight_exp: u32, table: GaussTable) -> EllData {
        let q = ctx.q();
        let qm1 = (q - 1) as usize;
        let ell = table.ell;
        let q_mod = q % ell;
        let q_inv = mod_pow(q_mod, ell - 2, ell);
        let s0 = gv.s_multiplicity(q, 0);

        // pref = (-1)^{r+s} (1-q)^{-1} q^{weight_exp}, all mod ell.
        let one_minus_q_inv = mod_pow((1 + ell - q_mod) % ell, ell - 2, ell);
        let mut pref = mod_mul(one_minus_q_inv, mod_pow(q_mod, weight_exp as u64, ell), ell);
        if (gv.p_list.len() + gv.q_list.len()) % 2 == 1 {
            pref = ell - pref;
        }

        let mut w = vec![0u64; qm1];
        for (m, slot) in w.iter_mut().enumerate() {
            let mut acc = pref;
            let s_m = gv.s_multiplicity(q, m as u64);
            let diff = s_m as i64 - s0 as i64;
            let qpow = if diff >= 0 {
                mod_pow(q_mod, diff as u64, ell)
            } else {
                mod_pow(q_inv, (-diff) as u64, ell)
            };
            acc = mod_mul(acc, qpow, ell);
            for &pj in &gv.p_list {
                acc = mod_mul(acc, table.gauss(m as i64 * pj), ell);
            }
            for &qk in &gv.q_list {
                acc = mod_mul(acc, table.gauss(-(m as i64) * qk), ell);
            }
            *slot = acc;
        }
        EllData {
            ell,
            zeta_pow: table.zeta_pow,
            w,
        }
    }

    /// `sum_m W[m] zeta^{m d} mod ell`.
    fn sum_at(&self, d: usize) -> u64 {
        let qm1 = self.w.len();
        let mut acc = 0u64;
        let mut idx = 0usize;
        for wm in &self.w {
            acc = (acc + mod_mul(*wm, self.zeta_pow[idx], self.ell)) % self.ell;
            idx += d;
            if idx >= qm1 {
                idx -= qm1;
            }
        }
        acc
    }
}

/// One-shot `H_q(datum; lambda)` for a field element `lambda`.
pub fn h_function(
    ctx: &FieldCtx,
    datum: &HGDatum,
    lambda: u64,
) -> Result<ExactValue, CharsumError> {
    Ok(HEvaluator::new(ctx, datum)?.eval(lambda))
}

/// One-shot `H_q(datum; lambda)` for a rational `lambda` reduced into the
/// field.
pub fn h_function_rational(
    ctx: &FieldCtx,
    datum: &HGDatum,
    lambda: Q,
) -> Result<ExactValue, CharsumError> {
    HEvaluator::new(ctx, datum)?.eval_rational(lambda)
}

/// Checks `H_{p^2}(d; t) = H_p(d; t)^2 - 2p` for a length-2 datum over Q:
/// both sides are computed independently (the left over `F_{p^2}`, the right
/// over `F_p`), exercising the power-sum structure of Frobenius eigenvalues.
pub fn h_extension_consistency(
    datum: &HGDatum,
    t: Q,
    p: u64,
) -> Result<bool, CharsumError> {
    assert_eq!(datum.len(), 2, "length-2 data only");
    let fp = FieldCtx::prime_field(p).map_err(|_| CharsumError::BadCharacteristic)?;
    let fp2 = FieldCtx::extension_field(p, 2).map_err(|_| CharsumError::BadCharacteristic)?;
    let t_p = fp
        .embed_rational(t)
        .map_err(|_| CharsumError::BadLambda(t))?;
    if t_p == 0 || t_p == 1 {
        return Err(CharsumError::BadLambda(t));
    }
    let h_p = h_function(&fp, datum, t_p)?
        .as_i128()
        .expect("integral for beta = {1,1}");
    let h_p2 = HEvaluator::new(&fp2, datum)?
        .eval_rational(t)?
        .as_i128()
        .expect("integral for beta = {1,1}");
    Ok(h_p2 == h_p * h_p - 2 * p as i128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::legendre;

    fn datum(a: &[(i64, i64)], b: &[(i64, i64)]) -> HGDatum {
        let alpha: Vec<Q> = a.iter().map(|&(n, d)| Q::new(n, d)).collect();
        let beta: Vec<Q> = b.iter().map(|&(n, d)| Q::new(n, d)).collect();
        HGDatum::new(&alpha, &beta).unwrap()
    }

    #[test]
    fn legendre_datum_at_one() {
        // H_p({1/2,1/2},{1,1}; 1) = (-1/p).
        let d = datum(&[(1, 2), (1, 2)], &[(1, 1), (1, 1)]);
        for p in [5u64, 7, 11, 13, 17, 19] {
            let ctx = FieldCtx::prime_field(p).unwrap();
            let h = h_function(&ctx, &d, 1).unwrap().as_i128().unwrap();
            assert_eq!(h, legendre(-1, p) as i128, "p = {p}");
        }
    }

    #[test]
    fn cubic_datum_at_one() {
        // H_p({1/3,2/3},{1,1}; 1) = (-3/p); in particular -1 at p = 5.
        let d = datum(&[(1, 3), (2, 3)], &[(1, 1), (1, 1)]);
        for p in [5u64, 7, 11, 13] {
            let ctx = FieldCtx::prime_field(p).unwrap();
            let h = h_function(&ctx, &d, 1).unwrap().as_i128().unwrap();
            assert_eq!(h, legendre(-3, p) as i128, "p = {p}");
        }
    }

    #[test]
    fn k1_sum_identity() {
        // 1 + sum_{t != 0} H_p(d; t) = 0 for both length-2 registry data.
        for (a, b) in [
            (vec![(1i64, 2i64), (1, 2)], vec![(1i64, 1i64), (1, 1)]),
            (vec![(1, 3), (2, 3)], vec![(1, 1), (1, 1)]),
        ] {
            let d = datum(&a, &b);
            for p in [5u64, 7, 11] {
                let ctx = FieldCtx::prime_field(p).unwrap();
                let mut ev = HEvaluator::new(&ctx, &d).unwrap();
                ev.precompute_all();
                let total: i128 = (1..p).map(|t| ev.eval_scaled_int(t)).sum();
                assert_eq!(total + 1, 0, "p = {p}");
            }
        }
    }

    #[test]
    fn quadratic_character_sheaf() {
        // H_p({1/2},{1}; t) = phi(1 - t): rank-1 datum sanity anchor.
        let d = datum(&[(1, 2)], &[(1, 1)]);
        for p in [5u64, 7, 13] {
            let ctx = FieldCtx::prime_field(p).unwrap();
            let mut ev = HEvaluator::new(&ctx, &d).unwrap();
            ev.precompute_all();
            for t in 1..p {
                let h = ev.eval_scaled_int(t);
                let expect = ctx.quad_char(ctx.sub(1, t)) as i128;
                assert_eq!(h, expect, "p = {p}, t = {t}");
            }
        }
    }

    #[test]
    fn lambda_zero_closed_form() {
        let d = datum(&[(1, 2), (1, 2)], &[(1, 1), (1, 1)]);
        let ctx = FieldCtx::prime_field(7).unwrap();
        let v = h_function(&ctx, &d, 0).unwrap();
        assert_eq!(
            v.value,
            -BigRational::new(BigInt::one(), BigInt::from(6u32))
        );
    }

    #[test]
    fn generator_independence() {
        // Rational data: H is independent of the generator omega.
        let d = datum(&[(1, 2), (1, 4), (3, 4)], &[(1, 1), (5, 6), (7, 6)]);
        let ctx = FieldCtx::prime_field(13).unwrap();
        let ctx2 = ctx.with_next_generator();
        assert_ne!(ctx.generator(), ctx2.generator());
        let e1 = HEvaluator::new(&ctx, &d).unwrap();
        let e2 = HEvaluator::new(&ctx2, &d).unwrap();
        for t in 1..13 {
            assert_eq!(e1.eval(t).value, e2.eval(t).value, "t = {t}");
        }
    }

    #[test]
    fn extension_field_consistency() {
        for (a, b) in [
            (vec![(1i64, 2i64), (1, 2)], vec![(1i64, 1i64), (1, 1)]),
            (vec![(1, 3), (2, 3)], vec![(1, 1), (1, 1)]),
        ] {
            let d = datum(&a, &b);
            for (p, t) in [(7u64, Q::new(3, 1)), (5, Q::new(2, 1)), (11, Q::new(7, 1))] {
                assert!(h_extension_consistency(&d, t, p).unwrap(), "p={p} t={t}");
            }
        }
    }

    #[test]
    fn weil_bound_holds() {
        let d = datum(&[(1, 2), (1, 6), (5, 6)], &[(1, 1), (1, 1), (1, 1)]);
        let ctx = FieldCtx::prime_field(29).unwrap();
        let mut ev = HEvaluator::new(&ctx, &d).unwrap();
        ev.precompute_all();
        for t in 2..29 {
            // n = 3, all beta integral: |H| <= 3 * q^{(n-1)/2} = 3q.
            let h = ev.eval_scaled_int(t);
            assert!(h.unsigned_abs() <= 3 * 29 * 29, "t = {t}");
        }
    }
}
