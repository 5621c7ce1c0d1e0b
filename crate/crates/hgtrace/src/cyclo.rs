//! Exact cyclotomic integer arithmetic.
//!
//! Two layers: [`QuadInt`], fixed quadratic rings `Z[i]` and `Z[zeta_3]` for
//! the Jacobi sums entering elliptic-point contributions, and [`CycloElt`],
//! dense power-basis elements of `Z[zeta_n]` backing the slow exact oracle
//! for the P-function. Coefficients use `i128`: Jacobi-sum products at the
//! oracle's field sizes stay far below the overflow line.

use crate::ffield::FieldCtx;

/// Ring tag for [`QuadInt`]: `zeta^2 = -1` (Gaussian) or `zeta^2 = -zeta - 1`
/// (Eisenstein, `zeta = zeta_3`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadRing {
    Gauss,
    Eisenstein,
}

/// `a + b zeta` in the ring selected by `ring`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadInt {
    pub a: i128,
    pub b: i128,
    pub ring: QuadRing,
}

impl QuadInt {
    pub fn new(a: i128, b: i128, ring: QuadRing) -> Self {
        QuadInt { a, b, ring }
    }

    pub fn conj(self) -> Self {
        match self.ring {
            QuadRing::Gauss => QuadInt::new(self.a, -self.b, self.ring),
            // conj(zeta3) = zeta3^2 = -1 - zeta3.
            QuadRing::Eisenstein => QuadInt::new(self.a - self.b, -self.b, self.ring),
        }
    }

    pub fn mul(self, other: Self) -> Self {
        assert_eq!(self.ring, other.ring);
        let (a, b, c, d) = (self.a, self.b, other.a, other.b);
        match self.ring {
            QuadRing::Gauss => QuadInt::new(a * c - b * d, a * d + b * c, self.ring),
            QuadRing::Eisenstein => {
                QuadInt::new(a * c - b * d, a * d + b * c - b * d, self.ring)
            }
        }
    }

    pub fn trace(self) -> i128 {
        match self.ring {
            QuadRing::Gauss => 2 * self.a,
            QuadRing::Eisenstein => 2 * self.a - self.b,
        }
    }

    pub fn norm(self) -> i128 {
        match self.ring {
            QuadRing::Gauss => self.a * self.a + self.b * self.b,
            QuadRing::Eisenstein => self.a * self.a - self.a * self.b + self.b * self.b,
        }
    }
}

/// `J_omega(1/m, 1/m)` over `ctx` for `m in {3, 4}`, as an exact quadratic
/// integer (`Z[zeta_3]` resp. `Z[i]`). Requires `q = 1 mod m`.
pub fn jacobi_quad(ctx: &FieldCtx, m: u64) -> QuadInt {
    assert!(m == 3 || m == 4, "jacobi_quad supports orders 3 and 4");
    let q = ctx.q();
    assert_eq!((q - 1) % m, 0, "need q = 1 mod {m}");
    let mut counts = [0i128; 4];
    for t in ctx.elements() {
        if t == 0 || t == 1 {
            continue;
        }
        // chi = omega^{(q-1)/m}, so chi(t) chi(1-t) = zeta_m^{(dlog t + dlog(1-t)) mod m}.
        let (dt, ds) = (ctx.dlog(t).unwrap(), ctx.dlog(ctx.sub(1, t)).unwrap());
        counts[((dt + ds) % m) as usize] += 1;
    }
    match m {
        4 => QuadInt::new(counts[0] - counts[2], counts[1] - counts[3], QuadRing::Gauss),
        _ => QuadInt::new(
            counts[0] - counts[2],
            counts[1] - counts[2],
            QuadRing::Eisenstein,
        ),
    }
}

/// Cyclotomic polynomial `Phi_n` with integer coefficients.
pub fn cyclotomic_poly(n: usize) -> Vec<i128> {
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, by exact division.
    let mut num = vec![0i128; n + 1];
    num[0] = -1;
    num[n] = 1;
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    num
}

/// Exact division of integer polynomials (monic divisor), panics on nonzero
/// remainder.
fn poly_div_exact(num: &[i128], den: &[i128]) -> Vec<i128> {
    assert_eq!(*den.last().unwrap(), 1, "divisor must be monic");
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        assert!(rem.iter().all(|&c| c == 0));
        return vec![0];
    }
    let mut quo = vec![0i128; rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        quo[i - dd] = c;
        for (k, &dk) in den.iter().enumerate() {
            rem[i - dd + k] -= c * dk;
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "non-exact division");
    while quo.len() > 1 && *quo.last().unwrap() == 0 {
        quo.pop();
    }
    quo
}

/// A group-ring element `sum c_j x^j` of `Z[x]/(x^n - 1)`, i.e. an integer
/// combination of n-th roots of unity prior to power-basis reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingElt {
    pub order: usize,
    pub coeffs: Vec<i128>,
}

impl GroupRingElt {
    pub fn zero(order: usize) -> Self {
        GroupRingElt {
            order,
            coeffs: vec![0; order],
        }
    }

    pub fn constant(order: usize, c: i128) -> Self {
        let mut e = Self::zero(order);
        e.coeffs[0] = c;
        e
    }

    /// `x^j`.
    pub fn monomial(order: usize, j: u64) -> Self {
        let mut e = Self::zero(order);
        e.coeffs[(j % order as u64) as usize] = 1;
        e
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn scale(&mut self, c: i128) {
        for a in self.coeffs.iter_mut() {
            *a *= c;
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        let n = self.order;
        let mut out = Self::zero(n);
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let k = (i + j) % n;
                out.coeffs[k] += a * b;
            }
        }
        out
    }

    /// Galois conjugation `x -> x^s` (requires `gcd(s, n) = 1` to be a ring
    /// automorphism; `s = n - 1` is complex conjugation).
    pub fn galois(&self, s: usize) -> Self {
        let n = self.order;
        let mut out = Self::zero(n);
        for (i, &a) in self.coeffs.iter().enumerate() {
            out.coeffs[i * s % n] += a;
        }
        out
    }

    /// Reduce to the power basis of `Z[zeta_n]`: remainder mod `Phi_n`.
    pub fn to_power_basis(&self) -> CycloElt {
        let phi = cyclotomic_poly(self.order);
        let mut rem = self.coeffs.clone();
        let dd = phi.len() - 1;
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            rem[i] = 0;
            for (k, &pk) in phi.iter().enumerate().take(dd) {
                rem[i - dd + k] -= c * pk;
            }
        }
        rem.truncate(dd.max(1));
        CycloElt {
            order: self.order,
            coeffs: rem,
        }
    }
}

/// Power-basis element of `Z[zeta_n]`: coefficients of `1, zeta, ...,
/// zeta^{phi(n)-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloElt {
    pub order: usize,
    pub coeffs: Vec<i128>,
}

impl CycloElt {
    /// The rational integer this element equals, if it is one.
    pub fn as_integer(&self) -> Option<i128> {
        self.coeffs[1..]
            .iter()
            .all(|&c| c == 0)
            .then(|| self.coeffs[0])
    }

    /// True when every coefficient of `self - c` is divisible by `d`
    /// (congruence mod `d` in `Z[zeta_n]`).
    pub fn congruent_to_int(&self, c: i128, d: i128) -> bool {
        let mut v = self.coeffs.clone();
        v[0] -= c;
        v.iter().all(|&x| x % d == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quad_arithmetic() {
        let z = QuadInt::new(2, 3, QuadRing::Gauss);
        assert_eq!(z.mul(z.conj()).a, z.norm());
        assert_eq!(z.mul(z.conj()).b, 0);
        let w = QuadInt::new(1, -2, QuadRing::Eisenstein);
        assert_eq!(w.mul(w.conj()).a, w.norm());
        assert_eq!(w.mul(w.conj()).b, 0);
        assert_eq!(w.trace(), w.a * 2 - w.b);
    }

    #[test]
    fn jacobi_quad_f7_cubic() {
        let f7 = FieldCtx::prime_field(7).unwrap();
        let j = jacobi_quad(&f7, 3);
        assert_eq!(j.norm(), 7);
        // Standard normalization: J(chi, chi) = -1 mod 3 in Z[zeta_3].
        assert_eq!((j.a + 1).rem_euclid(3), 0);
        assert_eq!(j.b.rem_euclid(3), 0);
    }

    #[test]
    fn jacobi_quad_f13_quartic() {
        let f = FieldCtx::prime_field(13).unwrap();
        let j = jacobi_quad(&f, 4);
        assert_eq!(j.norm(), 13);
        // 13 = 9 + 4.
        let (a, b) = (j.a.abs(), j.b.abs());
        assert!((a, b) == (3, 2) || (a, b) == (2, 3));
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn group_ring_reduction() {
        // 1 + x + x^2 + x^3 = 0 in Z[zeta_4] reduces against Phi_4 = x^2+1:
        // 1 + x + (-1) + (-x) = 0.
        let mut e = GroupRingElt::zero(4);
        e.coeffs = vec![1, 1, 1, 1];
        assert_eq!(e.to_power_basis().as_integer(), Some(0));
        // zeta_6 satisfies zeta^2 = zeta - 1.
        let m = GroupRingElt::monomial(6, 2);
        let pb = m.to_power_basis();
        assert_eq!(pb.coeffs, vec![-1, 1]);
    }

    #[test]
    fn galois_conjugation() {
        let e = GroupRingElt::monomial(12, 1);
        let c = e.galois(11);
        assert_eq!(c.coeffs[11], 1);
        let prod = e.mul(&c).to_power_basis();
        assert_eq!(prod.as_integer(), Some(1));
    }
}
