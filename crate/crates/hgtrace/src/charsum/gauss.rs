//! Per-auxiliary-prime Gauss sum tables.
//!
//! For a fixed embedding `zeta_p -> xi`, `zeta_{q-1} -> zeta` into `F_l`, the
//! table holds `g(omega^k) = sum_x Psi(x) omega^k(x) mod l` for all
//! `k = 0..q-2`, where `Psi(x) = xi^{Tr(x)}`. Built once per `(field, l)`
//! and read-only afterwards.

use crate::ffield::{mod_mul, mod_pow, FieldCtx};

use super::AuxPrime;

#[derive(Debug, Clone)]
pub struct GaussTable {
    pub ell: u64,
    /// `zeta^j mod l` for `j = 0..q-2`.
    pub zeta_pow: Vec<u64>,
    /// `g(omega^k) mod l` for `k = 0..q-2`.
    pub g: Vec<u64>,
}

impl GaussTable {
    pub fn build(ctx: &FieldCtx, aux: &AuxPrime) -> GaussTable {
        let q = ctx.q();
        let qm1 = (q - 1) as usize;
        let ell = aux.ell;

        let mut zeta_pow = Vec::with_capacity(qm1);
        let mut z = 1u64;
        for _ in 0..qm1 {
            zeta_pow.push(z);
            z = mod_mul(z, aux.zeta, ell);
        }

        // Additive character along the exp table: a[j] = xi^{Tr(g^j)}.
        let mut xi_pow = Vec::with_capacity(ctx.p() as usize);
        let mut x = 1u64;
        for _ in 0..ctx.p() {
            xi_pow.push(x);
            x = mod_mul(x, aux.xi, ell);
        }
        let add_char: Vec<u64> = (0..qm1)
            .map(|j| xi_pow[ctx.trace(ctx.exp(j as u64)) as usize])
            .collect();

        // g[k] = sum_j a[j] * zeta^{kj}: O(q^2) with a stepping index.
        let mut g = vec![0u64; qm1];
        for (k, gk) in g.iter_mut().enumerate() {
            let mut acc = 0u64;
            let mut idx = 0usize;
            for aj in &add_char {
                acc = (acc + mod_mul(*aj, zeta_pow[idx], ell)) % ell;
                idx += k;
                if idx >= qm1 {
                    idx -= qm1;
                }
            }
            *gk = acc;
        }
        debug_assert_eq!(g[0], ell - 1, "g(eps) = -1");
        GaussTable { ell, zeta_pow, g }
    }

    /// `g(omega^k)` with `k` reduced mod `q - 1`.
    pub fn gauss(&self, k: i64) -> u64 {
        let n = self.g.len() as i64;
        self.g[k.rem_euclid(n) as usize]
    }

    /// `omega^k(-1) = zeta^{k (q-1)/2}` as `+-1 mod l`.
    pub fn char_at_minus_one(&self, k: i64) -> u64 {
        let n = self.g.len() as i64;
        let e = (k.rem_euclid(n) as u64) * (self.g.len() as u64 / 2) % self.g.len() as u64;
        self.zeta_pow[e as usize]
    }

    /// Jacobi sum `J(omega^a, omega^b) mod l` from Gauss sums, with the
    /// degenerate cases spelled out.
    pub fn jacobi(&self, a: i64, b: i64, q: u64) -> u64 {
        let n = self.g.len() as i64;
        let (ra, rb) = (a.rem_euclid(n), b.rem_euclid(n));
        let ell = self.ell;
        if ra == 0 && rb == 0 {
            return (q - 2) % ell;
        }
        if ra == 0 || rb == 0 {
            return ell - 1;
        }
        if (ra + rb) % n == 0 {
            // J(A, A^{-1}) = -A(-1).
            return ell - self.char_at_minus_one(ra);
        }
        let num = mod_mul(self.gauss(ra), self.gauss(rb), ell);
        mod_mul(num, mod_pow(self.gauss(ra + rb), ell - 2, ell), ell)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{lift_bound, AuxPrimeCtx};
    use super::*;

    fn tables(p: u64, r: u32) -> (FieldCtx, AuxPrimeCtx, Vec<GaussTable>) {
        let ctx = FieldCtx::extension_field(p, r).unwrap();
        let aux = AuxPrimeCtx::for_field(&ctx, lift_bound(3, ctx.q()));
        let tabs = aux
            .primes
            .iter()
            .map(|a| GaussTable::build(&ctx, a))
            .collect();
        (ctx, aux, tabs)
    }

    #[test]
    fn gauss_of_trivial_character_is_minus_one() {
        for (p, r) in [(7, 1), (3, 2), (11, 1)] {
            let (_, _, tabs) = tables(p, r);
            for t in &tabs {
                assert_eq!(t.gauss(0), t.ell - 1);
            }
        }
    }

    #[test]
    fn reflection_identity() {
        // g(chi) g(chi-bar) = chi(-1) q for chi != eps.
        for (p, r) in [(7u64, 1u32), (5, 2), (13, 1)] {
            let (ctx, _, tabs) = tables(p, r);
            let q = ctx.q();
            for t in &tabs {
                for k in 1..(q - 1) as i64 {
                    let lhs = mod_mul(t.gauss(k), t.gauss(-k), t.ell);
                    let rhs = mod_mul(t.char_at_minus_one(k), q % t.ell, t.ell);
                    assert_eq!(lhs, rhs, "p={p} r={r} k={k}");
                }
            }
        }
    }

    #[test]
    fn hasse_davenport_m2() {
        // prod_{eta^2 = eps} g(A eta)/g(eta) = -g(A^2) A(2^{-2}).
        for (p, r) in [(7u64, 1u32), (5, 2)] {
            let (ctx, _, tabs) = tables(p, r);
            let q = ctx.q();
            let half = ((q - 1) / 2) as i64;
            for t in &tabs {
                for k in 0..(q - 1) as i64 {
                    let lhs_num = mod_mul(t.gauss(k), t.gauss(k + half), t.ell);
                    let lhs_den = mod_mul(t.gauss(0), t.gauss(half), t.ell);
                    let lhs = mod_mul(lhs_num, mod_pow(lhs_den, t.ell - 2, t.ell), t.ell);
                    // A(2^{-2}) = zeta^{-k dlog(4)}.
                    let dlog4 = ctx.dlog(ctx.embed_int(4)).unwrap() as i64;
                    let e = (-k * dlog4).rem_euclid((q - 1) as i64) as usize;
                    let rhs = mod_mul(
                        t.ell - t.gauss(2 * k),
                        t.zeta_pow[e],
                        t.ell,
                    );
                    assert_eq!(lhs, rhs % t.ell, "p={p} r={r} k={k}");
                }
            }
        }
    }

    #[test]
    fn jacobi_degenerate_cases() {
        let (ctx, _, tabs) = tables(7, 1);
        let q = ctx.q();
        for t in &tabs {
            assert_eq!(t.jacobi(0, 0, q), (q - 2) % t.ell);
            assert_eq!(t.jacobi(0, 3, q), t.ell - 1);
            // J(phi, phi-bar) = -phi(-1); phi = omega^3 over F_7, phi(-1) = -1.
            assert_eq!(t.jacobi(3, 3, q), 1 % t.ell);
        }
    }
}
