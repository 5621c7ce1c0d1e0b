//! Hecke traces: generic, elliptic, and cusp contributions assembled over
//! the points of the reduced curve.
//!
//! The local sum runs over `X_Gamma(F_q)`; the Hecke trace is its negative.
//! Generic fibers use `F_{k/2}(a(lambda,q), q)` for the even-weight groups
//! and the binomial power sum for `Gamma_1(3)` / `Gamma_1(4)`; elliptic
//! points branch on the splitting of `q` in the CM field, with the split
//! branch driven by an integer Lucas recurrence on `(trace, norm)` of the
//! relevant `alpha^2` — both quadratic roots give the same symmetric sum, so
//! no root choice is ever exposed. The same machinery serves extension
//! fields `F_{p^r}` for the eigenvalue solver.

use thiserror::Error;

use crate::charsum::{CharsumError, HEvaluator};
use crate::cyclo::{jacobi_quad, QuadInt, QuadRing};
use crate::ffield::FieldCtx;
use crate::groups::{
    CuspRule, Family, GroupId, P1Point, PointClass, PointKind, TriangleGroupSpec,
};

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("prime {0} is bad for this group")]
    BadPrime(u64),
    #[error("odd weight exponent k = {0} is not admissible for this group")]
    WrongParity(u64),
    #[error("point is not of the kind the operation expects")]
    WrongPointKind,
    #[error("prime {0} ramifies in the CM field of discriminant {1}")]
    RamifiedPrime(u64, i64),
    #[error("value exceeds the i128 range supported at desk scale")]
    Overflow,
    #[error(transparent)]
    Charsum(#[from] CharsumError),
    #[error(transparent)]
    Group(#[from] crate::groups::GroupError),
}

/// `F_m(S, T)`: `F_0 = 1`, `F_1 = S`,
/// `F_{m+1} = (S - T) F_m - T^2 F_{m-1}`.
pub fn f_poly(m: u64, s: i128, t: i128) -> Result<i128, TraceError> {
    let (mut prev, mut cur) = (1i128, s);
    if m == 0 {
        return Ok(1);
    }
    let t2 = t.checked_mul(t).ok_or(TraceError::Overflow)?;
    for _ in 1..m {
        let next = (s - t)
            .checked_mul(cur)
            .and_then(|x| x.checked_sub(t2.checked_mul(prev)?))
            .ok_or(TraceError::Overflow)?;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `sum_{j=0}^{floor(k/2)} (-1)^j C(k-j, j) t^j h^{k-2j}`: equals
/// `sum_{i=0}^k u^i v^{k-i}` whenever `u + v = h`, `uv = t`.
pub fn fop_sum(k: u64, h: i128, t: i128) -> Result<i128, TraceError> {
    let mut acc = 0i128;
    for j in 0..=(k / 2) {
        let c = binomial(k - j, j)?;
        let tp = pow_i128(t, j)?;
        let hp = pow_i128(h, k - 2 * j)?;
        let term = c
            .checked_mul(tp)
            .and_then(|x| x.checked_mul(hp))
            .ok_or(TraceError::Overflow)?;
        acc = if j % 2 == 0 {
            acc.checked_add(term)
        } else {
            acc.checked_sub(term)
        }
        .ok_or(TraceError::Overflow)?;
    }
    Ok(acc)
}

fn binomial(n: u64, k: u64) -> Result<i128, TraceError> {
    if k > n {
        return Ok(0);
    }
    let mut acc = 1i128;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as i128)
            .ok_or(TraceError::Overflow)?
            / (i as i128 + 1);
    }
    Ok(acc)
}

fn pow_i128(b: i128, e: u64) -> Result<i128, TraceError> {
    let mut acc = 1i128;
    for _ in 0..e {
        acc = acc.checked_mul(b).ok_or(TraceError::Overflow)?;
    }
    Ok(acc)
}

/// The `(trace, norm)` description of `alpha_{z,q}^2` at a split elliptic
/// point, plus the split flag.
#[derive(Debug, Clone, Copy)]
pub struct AlphaZ {
    pub order: u64,
    pub disc: i64,
    pub split: bool,
    /// trace of `alpha^2`; meaningful only when split.
    pub trace: i128,
    /// norm of `alpha^2` = q^2.
    pub norm: i128,
}

/// One classified contribution to the local sum.
#[derive(Debug, Clone)]
pub struct Contribution {
    pub coord: String,
    pub kind: String,
    pub value: i128,
}

/// Per-(group, weight, prime) trace breakdown.
#[derive(Debug, Clone)]
pub struct TraceReport {
    pub group: String,
    pub weight: u64,
    pub p: u64,
    pub contributions: Vec<Contribution>,
    /// Total local sum `L = sum of contributions`.
    pub local_sum: i128,
    /// `Tr(T_p | S_{k+2}) = -L`.
    pub trace: i128,
    pub notes: Vec<String>,
}

fn coord_label(ctx: &FieldCtx, pt: P1Point) -> String {
    match pt {
        P1Point::Finite(x) => {
            if ctx.r() == 1 {
                x.to_string()
            } else {
                format!("#{x}")
            }
        }
        P1Point::Infinity => "inf".to_string(),
        P1Point::Conic(x, y, z) => format!("[{x}:{y}:{z}]"),
    }
}

/// Engine bundling a field with the H-evaluator for a group's datum.
pub struct LocalEngine<'a> {
    pub spec: &'a TriangleGroupSpec,
    pub ctx: &'a FieldCtx,
    hev: HEvaluator<'a>,
}

impl<'a> LocalEngine<'a> {
    pub fn new(spec: &'a TriangleGroupSpec, ctx: &'a FieldCtx) -> Result<Self, TraceError> {
        if spec.is_bad_prime(ctx.p()) {
            return Err(TraceError::BadPrime(ctx.p()));
        }
        let mut hev = HEvaluator::new(ctx, &spec.datum)?;
        hev.precompute_all();
        Ok(LocalEngine { spec, ctx, hev })
    }

    pub fn hev_scaled_h_for_debug(&self, x: u64) -> i128 { self.scaled_h(x) }

    /// `q^u H_q(HD; x)` as an integer, `u = (n-m)/2` of the datum.
    fn scaled_h(&self, x: u64) -> i128 {
        self.hev.eval_scaled_int(x)
    }

    /// Generic-fiber weight-2 invariant `a(lambda, q)` per the group's rule.
    /// `pt` must be classified generic.
    pub fn a_generic(&self, pt: P1Point) -> Result<i128, TraceError> {
        let ctx = self.ctx;
        let q = ctx.q() as i128;
        let phi = |x: u64| ctx.quad_char(x) as i128;
        let m3 = ctx.embed_int(-3);
        match self.spec.family {
            Family::MainEven | Family::GammaOne { .. } => {
                let lam = match pt {
                    P1Point::Finite(x) if x != 0 && x != 1 => x,
                    _ => return Err(TraceError::WrongPointKind),
                };
                let inv = ctx.inv(lam);
                let one_minus = ctx.sub(1, inv);
                let h = self.scaled_h(inv);
                if self.spec.power_u == 1 {
                    Ok(phi(ctx.mul(m3, one_minus)) * h)
                } else {
                    Ok(phi(one_minus) * h)
                }
            }
            Family::Pullback => {
                match self.spec.id {
                    GroupId::TwoSixSix => match pt {
                        P1Point::Infinity => {
                            // t = infinity: q H(HD(2,4,6); 1) + (-6/q) q.
                            Ok(self.scaled_h(1) + phi(ctx.embed_int(-6)) * q)
                        }
                        P1Point::Finite(t) => {
                            let t2 = ctx.mul(t, t);
                            let three_t2 = ctx.mul(ctx.embed_int(3), t2);
                            let den = ctx.add(three_t2, 1);
                            if t == 0 || den == 0 {
                                return Err(TraceError::WrongPointKind);
                            }
                            let arg = ctx.div(three_t2, den);
                            let sign = phi(ctx.mul(m3, den));
                            Ok(sign * self.scaled_h(arg))
                        }
                        _ => Err(TraceError::WrongPointKind),
                    },
                    GroupId::ThreeFourFour => match pt {
                        P1Point::Finite(0) => {
                            // t = 0: (-3/q) q H(HD(2,4,6); 1) + (-6/q) q.
                            Ok(phi(m3) * self.scaled_h(1) + phi(ctx.embed_int(-6)) * q)
                        }
                        P1Point::Finite(t) => {
                            let arg = ctx.add(1, ctx.mul(t, t));
                            if arg == 0 || arg == 1 {
                                return Err(TraceError::WrongPointKind);
                            }
                            let sign = phi(ctx.mul(m3, arg));
                            Ok(sign * self.scaled_h(arg))
                        }
                        _ => Err(TraceError::WrongPointKind),
                    },
                    GroupId::TwoTwoTwoThree => match pt {
                        P1Point::Finite(t) if t != 0 => {
                            let t2 = ctx.mul(t, t);
                            let arg = ctx.div(m3, t2);
                            if arg == 1 {
                                return Err(TraceError::WrongPointKind);
                            }
                            let sign = phi(ctx.sub(m3, t2));
                            Ok(sign * self.scaled_h(arg))
                        }
                        _ => Err(TraceError::WrongPointKind),
                    },
                    _ => unreachable!("pullback family covers exactly three groups"),
                }
            }
            Family::InclusionExclusion => Err(TraceError::WrongPointKind),
        }
    }

    /// Generic-fiber contribution at weight exponent `k`.
    pub fn generic_term(&self, pt: P1Point, k: u64) -> Result<i128, TraceError> {
        let q = self.ctx.q() as i128;
        match self.spec.family {
            Family::GammaOne { .. } => {
                let lam = match pt {
                    P1Point::Finite(x) if x != 0 && x != 1 => x,
                    _ => return Err(TraceError::WrongPointKind),
                };
                let h = self.scaled_h(self.ctx.inv(lam));
                fop_sum(k, h, q)
            }
            _ => {
                if k % 2 != 0 {
                    return Err(TraceError::WrongParity(k));
                }
                f_poly(k / 2, self.a_generic(pt)?, q)
            }
        }
    }

    /// The `(trace, norm)` data of `alpha^2` at an elliptic point.
    pub fn alpha_z(&self, order: u64, disc: i64) -> Result<AlphaZ, TraceError> {
        let ctx = self.ctx;
        let q = ctx.q() as i128;
        let split = match ctx.quad_char(ctx.embed_int(disc as i64)) {
            0 => return Err(TraceError::RamifiedPrime(ctx.p(), disc)),
            1 => true,
            _ => false,
        };
        if !split {
            return Ok(AlphaZ {
                order,
                disc,
                split,
                trace: 0,
                norm: q * q,
            });
        }
        let trace = match (order, disc) {
            // alpha = J_omega(1/3,1/3) for orders 3 and 6.
            (3, _) | (6, _) => tr_alpha_squared(jacobi_quad(ctx, 3), q),
            // alpha = J_omega(1/4,1/4) for order 4, and for the order-2
            // points with CM by -4 on the pullback curves.
            (4, _) | (2, -4) => tr_alpha_squared(jacobi_quad(ctx, 4), q),
            // Order-2 points otherwise: alpha^2 is a root of
            // T^2 - (-3/q)^u q^u H_q(HD; 1) T + q^2.
            (2, _) => {
                let h1 = self.scaled_h(1);
                if self.spec.power_u == 1 {
                    ctx.quad_char(ctx.embed_int(-3)) as i128 * h1
                } else {
                    h1
                }
            }
            _ => return Err(TraceError::WrongPointKind),
        };
        Ok(AlphaZ {
            order,
            disc,
            split,
            trace,
            norm: q * q,
        })
    }

    /// Elliptic-point contribution at even weight exponent `k` (or any `k`
    /// for the order-3 point of `Gamma_1(3)`, which has its own routine).
    pub fn elliptic_term(&self, order: u64, disc: i64, k: u64) -> Result<i128, TraceError> {
        let q = self.ctx.q() as i128;
        if matches!(self.spec.family, Family::GammaOne { .. }) && order == 3 {
            return self.gamma1_3_infinity_term(k);
        }
        if k % 2 != 0 {
            return Err(TraceError::WrongParity(k));
        }
        let az = self.alpha_z(order, disc)?;
        if !az.split {
            // (-q)^{k/2}.
            let v = pow_i128(q, k / 2)?;
            return Ok(if (k / 2) % 2 == 0 { v } else { -v });
        }
        // q^{k/2} + sum_{i=1}^{floor(k/2N)} q^{k/2 - iN} V_{iN}(trace, q^2).
        let mut total = pow_i128(q, k / 2)?;
        let imax = k / (2 * order);
        if imax > 0 {
            let vs = lucas_v(az.trace, az.norm, imax * order)?;
            for i in 1..=imax {
                let term = pow_i128(q, k / 2 - i * order)?
                    .checked_mul(vs[(i * order) as usize])
                    .ok_or(TraceError::Overflow)?;
                total = total.checked_add(term).ok_or(TraceError::Overflow)?;
            }
        }
        Ok(total)
    }

    /// The `lambda = infinity` contribution for `Gamma_1(3)`, any `k >= 1`:
    /// `(-1)^k sum_{0 <= i <= k, k = 2i mod 3} q^i J^{k-2i}` with
    /// `J = J_omega(1/3,1/3)` when `q = 1 mod 3`; `0` or `(-q)^{k/2}` by the
    /// parity of `k` when `q = 2 mod 3`.
    pub fn gamma1_3_infinity_term(&self, k: u64) -> Result<i128, TraceError> {
        let ctx = self.ctx;
        let q = ctx.q() as i128;
        if (ctx.q() - 1) % 3 != 0 {
            return Ok(if k % 2 == 1 {
                0
            } else {
                let v = pow_i128(q, k / 2)?;
                if (k / 2) % 2 == 0 {
                    v
                } else {
                    -v
                }
            });
        }
        let j = jacobi_quad(ctx, 3);
        let jbar = j.conj();
        let mut acc = QuadInt::new(0, 0, QuadRing::Eisenstein);
        for i in 0..=k {
            if (2 * i) % 3 != k % 3 {
                continue;
            }
            // J^{k-2i} means the conjugate power for negative exponents.
            let e = k as i64 - 2 * i as i64;
            let jp = if e >= 0 {
                quad_pow(j, e as u64)
            } else {
                quad_pow(jbar, (-e) as u64)
            };
            let scale = pow_i128(q, i.min(k))?;
            let scaled = QuadInt::new(
                jp.a.checked_mul(scale).ok_or(TraceError::Overflow)?,
                jp.b.checked_mul(scale).ok_or(TraceError::Overflow)?,
                QuadRing::Eisenstein,
            );
            acc = QuadInt::new(acc.a + scaled.a, acc.b + scaled.b, QuadRing::Eisenstein);
        }
        debug_assert_eq!(acc.b, 0, "the i <-> k-i pairing makes the sum rational");
        let sign = if k % 2 == 0 { 1 } else { -1 };
        Ok(sign * acc.a)
    }

    /// Cusp contribution at weight exponent `k`.
    pub fn cusp_term(&self, rule: CuspRule, k: u64) -> i128 {
        let ctx = self.ctx;
        match rule {
            CuspRule::One => 1,
            CuspRule::Character { d } => {
                let s = ctx.quad_char(ctx.embed_int(d)) as i128;
                if k % 2 == 0 {
                    1
                } else {
                    s
                }
            }
            CuspRule::Irregular => {
                if k % 2 == 0 {
                    1
                } else {
                    0
                }
            }
        }
    }

    /// The full local sum over the classified points.
    pub fn local_sum(&self, k: u64) -> Result<(Vec<Contribution>, i128), TraceError> {
        let classes = self.spec.classify_points(self.ctx)?;
        self.local_sum_over(&classes, k)
    }

    fn local_sum_over(
        &self,
        classes: &[PointClass],
        k: u64,
    ) -> Result<(Vec<Contribution>, i128), TraceError> {
        let mut contributions = Vec::with_capacity(classes.len());
        let mut total = 0i128;
        for c in classes {
            let value = match c.kind {
                PointKind::Generic => self.generic_term(c.coord, k)?,
                PointKind::Elliptic { order, disc } => self.elliptic_term(order, disc, k)?,
                PointKind::Cusp { rule } => self.cusp_term(rule, k),
            };
            total = total.checked_add(value).ok_or(TraceError::Overflow)?;
            contributions.push(Contribution {
                coord: coord_label(self.ctx, c.coord),
                kind: match c.kind {
                    PointKind::Generic => "generic".to_string(),
                    PointKind::Elliptic { order, disc } => {
                        format!("elliptic(order={order},disc={disc})")
                    }
                    PointKind::Cusp { .. } => "cusp".to_string(),
                },
                value,
            });
        }
        Ok((contributions, total))
    }
}

/// Local sum over `X_Gamma(F_q)` for any registry group, handling the
/// inclusion-exclusion assembly of (2,2,3,3).
pub fn local_sum(
    spec: &TriangleGroupSpec,
    k: u64,
    ctx: &FieldCtx,
) -> Result<(Vec<Contribution>, i128), TraceError> {
    if spec.family == Family::InclusionExclusion {
        let mut contributions = Vec::new();
        let mut total = 0i128;
        for (part, mult) in TriangleGroupSpec::inclusion_exclusion_parts() {
            let pspec = crate::groups::lookup(part);
            let engine = LocalEngine::new(&pspec, ctx)?;
            let (_, sum) = engine.local_sum(k)?;
            let value = sum.checked_mul(mult as i128).ok_or(TraceError::Overflow)?;
            total = total.checked_add(value).ok_or(TraceError::Overflow)?;
            contributions.push(Contribution {
                coord: pspec.name.to_string(),
                kind: format!("subtotal(x{mult})"),
                value,
            });
        }
        return Ok((contributions, total));
    }
    let engine = LocalEngine::new(spec, ctx)?;
    engine.local_sum(k)
}

/// `Tr(T_p | S_{k+2}(Gamma))` with the full per-point breakdown.
pub fn hecke_trace(
    spec: &TriangleGroupSpec,
    k: u64,
    p: u64,
) -> Result<TraceReport, TraceError> {
    if k % 2 != 0 && spec.contains_minus_id {
        return Err(TraceError::WrongParity(k));
    }
    if spec.is_bad_prime(p) {
        return Err(TraceError::BadPrime(p));
    }
    let ctx = FieldCtx::prime_field(p).map_err(|_| TraceError::BadPrime(p))?;
    let (contributions, local) = local_sum(spec, k, &ctx)?;
    let mut notes = Vec::new();
    if spec.id == GroupId::TwoFourSix && k % 2 == 0 && k >= 2 {
        // The order-2 point admits an alternative bookkeeping that differs
        // from the symmetric-sum expansion by chi_{-24}(p) p^{k/2}; the
        // symmetric sum is what enters the trace.
        let engine = LocalEngine::new(spec, &ctx)?;
        let used = engine.elliptic_term(2, -24, k)?;
        let chi = crate::ffield::legendre(-24, p) as i128;
        let alt = used + chi * pow_i128(p as i128, k / 2)?;
        if alt != used {
            notes.push(format!(
                "order-2 point: symmetric-sum value {used}; grouped alternative {alt}"
            ));
        }
    }
    Ok(TraceReport {
        group: spec.name.to_string(),
        weight: k + 2,
        p,
        contributions,
        local_sum: local,
        trace: -local,
        notes,
    })
}

/// Lucas sequence `V_j(c, n)`: `V_0 = 2`, `V_1 = c`,
/// `V_{j+1} = c V_j - n V_{j-1}`; `V_j = beta^j + beta-bar^j` for the roots
/// of `T^2 - cT + n`.
fn lucas_v(c: i128, n: i128, upto: u64) -> Result<Vec<i128>, TraceError> {
    let mut v = Vec::with_capacity(upto as usize + 1);
    v.push(2i128);
    if upto >= 1 {
        v.push(c);
    }
    for j in 2..=upto as usize {
        let next = c
            .checked_mul(v[j - 1])
            .and_then(|x| x.checked_sub(n.checked_mul(v[j - 2])?))
            .ok_or(TraceError::Overflow)?;
        v.push(next);
    }
    Ok(v)
}

fn tr_alpha_squared(j: QuadInt, q: i128) -> i128 {
    // Tr(J^2) = Tr(J)^2 - 2 Norm(J), Norm(J) = q.
    debug_assert_eq!(j.norm(), q);
    j.trace() * j.trace() - 2 * q
}

fn quad_pow(b: QuadInt, e: u64) -> QuadInt {
    let mut acc = QuadInt::new(1, 0, b.ring);
    for _ in 0..e {
        acc = acc.mul(b);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{lookup, GroupId};

    #[test]
    fn f_poly_base_cases() {
        assert_eq!(f_poly(0, 99, 7).unwrap(), 1);
        assert_eq!(f_poly(1, 42, 7).unwrap(), 42);
        assert_eq!(f_poly(2, 3, 2).unwrap(), -1);
    }

    #[test]
    fn f_poly_symmetric_identity() {
        // F_m(u^2 + uv + v^2, uv) = sum_{i=0}^{2m} u^i v^{2m-i}.
        for (u, v) in [(2i128, 3i128), (-1, 4), (5, -2), (3, 3), (-2, -7)] {
            for m in 0..=8u64 {
                let s = u * u + u * v + v * v;
                let t = u * v;
                let expect: i128 = (0..=2 * m)
                    .map(|i| u.pow(i as u32) * v.pow((2 * m - i) as u32))
                    .sum();
                assert_eq!(f_poly(m, s, t).unwrap(), expect, "u={u} v={v} m={m}");
            }
        }
    }

    #[test]
    fn fop_base_cases() {
        assert_eq!(fop_sum(1, 9, 5).unwrap(), 9);
        assert_eq!(fop_sum(2, 9, 5).unwrap(), 9 * 9 - 5);
    }

    #[test]
    fn fop_power_sum_identity() {
        for (u, v) in [(2i128, 3i128), (-1, 4), (5, -2), (-3, -3)] {
            for k in 0..=9u64 {
                let expect: i128 = (0..=k).map(|i| u.pow(i as u32) * v.pow((k - i) as u32)).sum();
                assert_eq!(fop_sum(k, u + v, u * v).unwrap(), expect);
            }
        }
    }

    #[test]
    fn elliptic_k2_is_chi_p() {
        // k = 2: contribution (d_z/p) p at every elliptic point.
        for (id, p) in [
            (GroupId::TwoThreeInf, 11u64),
            (GroupId::TwoThreeInf, 13),
            (GroupId::TwoFourSix, 7),
            (GroupId::TwoFourSix, 13),
        ] {
            let spec = lookup(id);
            let ctx = FieldCtx::prime_field(p).unwrap();
            let engine = LocalEngine::new(&spec, &ctx).unwrap();
            for e in &spec.elliptic {
                let got = engine.elliptic_term(e.order, e.disc, 2).unwrap();
                let expect = crate::ffield::legendre(e.disc, p) as i128 * p as i128;
                assert_eq!(got, expect, "{id:?} p={p} disc={}", e.disc);
            }
        }
    }

    #[test]
    fn elliptic_inert_order4_k6() {
        // p = 7 inert in Q(i): contribution (-p)^3 at the order-4 point.
        let spec = lookup(GroupId::TwoFourInf);
        let ctx = FieldCtx::prime_field(7).unwrap();
        let engine = LocalEngine::new(&spec, &ctx).unwrap();
        assert_eq!(engine.elliptic_term(4, -4, 6).unwrap(), -343);
    }

    #[test]
    fn gamma13_infinity_examples() {
        let spec = lookup(GroupId::Gamma1Three);
        let ctx = FieldCtx::prime_field(7).unwrap();
        let engine = LocalEngine::new(&spec, &ctx).unwrap();
        // k = 1: empty index set.
        assert_eq!(engine.gamma1_3_infinity_term(1).unwrap(), 0);
        // k = 2: only i = 1 survives, J^0 = 1, value 7.
        assert_eq!(engine.gamma1_3_infinity_term(2).unwrap(), 7);
        // p = 5 = 2 mod 3: parity branch.
        let ctx5 = FieldCtx::prime_field(5).unwrap();
        let engine5 = LocalEngine::new(&spec, &ctx5).unwrap();
        assert_eq!(engine5.gamma1_3_infinity_term(3).unwrap(), 0);
        assert_eq!(engine5.gamma1_3_infinity_term(4).unwrap(), 25);
    }

    #[test]
    fn cusp_rules() {
        let spec = lookup(GroupId::Gamma1Four);
        let ctx = FieldCtx::prime_field(7).unwrap();
        let engine = LocalEngine::new(&spec, &ctx).unwrap();
        assert_eq!(engine.cusp_term(CuspRule::One, 2), 1);
        assert_eq!(engine.cusp_term(CuspRule::Irregular, 1), 0);
        assert_eq!(engine.cusp_term(CuspRule::Irregular, 2), 1);
        // (-1/7) = -1.
        assert_eq!(engine.cusp_term(CuspRule::Character { d: -1 }, 1), -1);
        // Gamma_1(3) cusp at lambda = 1, k = 3, p = 5: (-3/5)^3 = -1.
        let g3 = lookup(GroupId::Gamma1Three);
        let ctx5 = FieldCtx::prime_field(5).unwrap();
        let e5 = LocalEngine::new(&g3, &ctx5).unwrap();
        assert_eq!(e5.cusp_term(CuspRule::Character { d: -3 }, 3), -1);
    }

    #[test]
    fn weight4_vanishing_sample() {
        // S_4 is 0-dimensional for the Theorem-1.1 groups: trace must be 0.
        for id in [
            GroupId::TwoInfInf,
            GroupId::TwoThreeInf,
            GroupId::TwoFourInf,
            GroupId::TwoSixInf,
            GroupId::TwoFourSix,
            GroupId::TwoSixSix,
            GroupId::ThreeFourFour,
        ] {
            let spec = lookup(id);
            for p in [7u64, 11, 13] {
                let rep = hecke_trace(&spec, 2, p).unwrap();
                assert_eq!(rep.trace, 0, "{id:?} p={p}");
            }
        }
    }

    #[test]
    fn sl2z_weight12_tau() {
        // Tr(T_p | S_12(SL_2(Z))) = tau(p).
        let spec = lookup(GroupId::TwoThreeInf);
        for (p, tau) in [(5u64, 4830i128), (7, -16744), (11, 534612)] {
            let rep = hecke_trace(&spec, 10, p).unwrap();
            assert_eq!(rep.trace, tau, "p = {p}");
        }
    }

    #[test]
    fn gamma1_4_weight8_example_row() {
        // Local sum at p = 5 is 420, so the trace is -420 = a_1 + a_2.
        let spec = lookup(GroupId::Gamma1Four);
        let rep = hecke_trace(&spec, 6, 5).unwrap();
        assert_eq!(rep.local_sum, 420);
        assert_eq!(rep.trace, -420);
        let rep7 = hecke_trace(&spec, 6, 7).unwrap();
        assert_eq!(rep7.trace, 2032);
    }

    #[test]
    fn odd_weight_vanishing() {
        // p = -1 mod N_Gamma and k odd: trace 0.
        let g3 = lookup(GroupId::Gamma1Three);
        let g4 = lookup(GroupId::Gamma1Four);
        for k in [1u64, 3, 5, 7] {
            for p in [5u64, 11, 17, 23] {
                if p % 3 == 2 {
                    assert_eq!(hecke_trace(&g3, k, p).unwrap().trace, 0, "g3 k={k} p={p}");
                }
                if p % 4 == 3 {
                    assert_eq!(hecke_trace(&g4, k, p).unwrap().trace, 0, "g4 k={k} p={p}");
                }
            }
        }
    }

    #[test]
    fn pullback_weight4_coherence() {
        // Tr S_4(2,2,3,3) = Tr S_4(2,2,2,3): the other three parts vanish.
        let g2233 = lookup(GroupId::TwoTwoThreeThree);
        let g2223 = lookup(GroupId::TwoTwoTwoThree);
        for p in [7u64, 11, 13, 17] {
            let t1 = hecke_trace(&g2233, 2, p).unwrap().trace;
            let t2 = hecke_trace(&g2223, 2, p).unwrap().trace;
            assert_eq!(t1, t2, "p = {p}");
        }
    }

    #[test]
    fn deligne_bound() {
        for (id, k) in [(GroupId::TwoThreeInf, 10u64), (GroupId::TwoFourSix, 6)] {
            let spec = lookup(id);
            let dim = spec.dim_cusp_forms(k + 2) as i128;
            for p in [7u64, 11, 13, 17, 19, 23] {
                let t = hecke_trace(&spec, k, p).unwrap().trace;
                // t^2 <= dim^2 * 4 p^{k+1}.
                assert!(
                    t * t <= dim * dim * 4 * (p as i128).pow((k + 1) as u32),
                    "{id:?} p={p}"
                );
            }
        }
    }

    #[test]
    fn bad_prime_rejected() {
        let spec = lookup(GroupId::TwoFourSix);
        assert!(matches!(
            hecke_trace(&spec, 2, 3),
            Err(TraceError::BadPrime(3))
        ));
        assert!(matches!(
            hecke_trace(&spec, 3, 7),
            Err(TraceError::WrongParity(3))
        ));
    }
}
