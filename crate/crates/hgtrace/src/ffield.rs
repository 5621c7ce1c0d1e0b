//! Finite fields `F_q`, `q = p^r`, with full discrete-log tables.
//!
//! Every character sum in this crate reduces to table lookups here: elements
//! are packed integers `sum c_i p^i` with coefficients in `[0, p)`, a fixed
//! generator `g` of `F_q^x` is chosen deterministically, and `dlog` maps each
//! nonzero element to its exponent base `g`. Construction is O(q); the table
//! limit (default 2*10^6) keeps this at desk scale.

use thiserror::Error;

use crate::Q;

/// Default cap on the field size `q` for table construction.
pub const DEFAULT_TABLE_LIMIT: u64 = 2_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),
    #[error("field size {q} exceeds the table limit {limit}")]
    TooLarge { q: u64, limit: u64 },
    #[error("extension degree {0} outside supported range 1..=4")]
    BadDegree(u32),
    #[error("denominator of {0} is divisible by p")]
    BadDenominator(Q),
}

/// Value of a multiplicative character: the root-of-unity exponent, or the
/// distinguished zero at the argument 0 (characters extend by `A(0) = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharValue {
    Zero,
    /// `chi(x) = zeta_{q-1}^k` for the returned exponent `k`.
    Exp(u64),
}

/// A multiplicative character `chi = omega^k` of `F_q^x`, identified by its
/// exponent `k` modulo `q - 1` with respect to the field's fixed generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Character {
    pub exponent: u64,
}

/// A finite field `F_{p^r}` with precomputed exp/dlog/trace tables.
///
/// Elements are `u64` packed base-p coefficient vectors; `0` is the zero
/// element and for `r = 1` the packing coincides with the residue itself.
/// Immutable after construction and freely shareable across threads.
#[derive(Debug)]
pub struct FieldCtx {
    p: u64,
    r: u32,
    q: u64,
    /// Coefficients `c_0..c_{r-1}` of the monic modulus `x^r + sum c_i x^i`.
    /// Empty for `r = 1`.
    modulus: Vec<u64>,
    generator: u64,
    /// `exp_table[j] = g^j` (packed), `j = 0..q-2`.
    exp_table: Vec<u64>,
    /// `dlog_table[x] = j` with `g^j = x`; `u64::MAX` sentinel at `x = 0`.
    dlog_table: Vec<u64>,
    /// `trace_table[x] = Tr_{F_q/F_p}(x)`.
    trace_table: Vec<u64>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for d in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == d {
            return true;
        }
        if n % d == 0 {
            return false;
        }
    }
    // Deterministic Miller-Rabin for u64.
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mod_mul(acc, b, m);
        }
        b = mod_mul(b, b, m);
        e >>= 1;
    }
    acc
}

pub fn mod_inv(a: u64, m: u64) -> u64 {
    // Extended Euclid; panics on non-invertible input.
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let quo = r / new_r;
        (t, new_t) = (new_t, t - quo * new_t);
        (r, new_r) = (new_r, r - quo * new_r);
    }
    assert_eq!(r, 1, "mod_inv: {a} not invertible mod {m}");
    t.rem_euclid(m as i128) as u64
}

/// Prime factorization by trial division; adequate for `n <= 2*10^6`-scale
/// inputs and the `q - 1` factorizations needed here.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Legendre symbol `(a/p)` by Euler's criterion, for odd prime `p`.
pub fn legendre(a: i64, p: u64) -> i32 {
    debug_assert!(p % 2 == 1 && is_prime(p));
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if mod_pow(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Kronecker-style symbol `(d/p)^r` for the residue field `F_{p^r}`:
/// `d` is a square in `F_{p^r}^x` iff this is `+1`.
pub fn legendre_ext(d: i64, p: u64, r: u32) -> i32 {
    let s = legendre(d, p);
    if r % 2 == 0 {
        s * s
    } else {
        s
    }
}

// ---------- polynomial helpers over F_p (dense, low-degree) ----------

fn poly_mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let r = modulus.len();
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mod_mul(ai, bj, p)) % p;
        }
    }
    // Reduce modulo x^r + modulus(x).
    for i in (r..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for (k, &mk) in modulus.iter().enumerate() {
            let idx = i - r + k;
            prod[idx] = (prod[idx] + p * p - mod_mul(c, mk, p)) % p;
        }
    }
    prod.truncate(r);
    prod
}

fn poly_pow_mod(base: &[u64], mut e: u128, modulus: &[u64], p: u64) -> Vec<u64> {
    let r = modulus.len();
    let mut acc = vec![0u64; r];
    acc[0] = 1;
    let mut b = base.to_vec();
    b.resize(r, 0);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(&acc, &b, modulus, p);
        }
        b = poly_mul_mod(&b, &b, modulus, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    let norm = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    norm(&mut a);
    norm(&mut b);
    while !b.is_empty() {
        // a mod b
        let lead_inv = mod_inv(b[b.len() - 1], p);
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let c = mod_mul(a[a.len() - 1], lead_inv, p);
            if c != 0 {
                for (k, &bk) in b.iter().enumerate() {
                    a[shift + k] = (a[shift + k] + p * p - mod_mul(c, bk, p)) % p;
                }
            }
            norm(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
        norm(&mut b);
    }
    a
}

/// Irreducibility over `F_p` of the monic polynomial `x^r + sum c_i x^i`.
fn is_irreducible(coeffs: &[u64], p: u64) -> bool {
    let r = coeffs.len() as u32;
    // x^{p^r} == x mod f, and gcd(x^{p^{r/s}} - x, f) trivial for prime s | r.
    let x = vec![0u64, 1];
    let xq = poly_pow_mod(&x, (p as u128).pow(r), coeffs, p);
    let mut xq_minus_x = xq;
    xq_minus_x.resize(coeffs.len().max(2), 0);
    xq_minus_x[1] = (xq_minus_x[1] + p - 1) % p;
    if xq_minus_x.iter().any(|&c| c != 0) {
        return false;
    }
    for (s, _) in factorize(r as u64) {
        let e = (p as u128).pow(r / s as u32);
        let xe = poly_pow_mod(&x, e, coeffs, p);
        let mut diff = xe;
        diff.resize(coeffs.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let mut f_full = coeffs.to_vec();
        f_full.push(1);
        let g = poly_gcd(diff, f_full, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

impl FieldCtx {
    /// Prime field `F_p` with the smallest primitive root as generator.
    pub fn prime_field(p: u64) -> Result<FieldCtx, FieldError> {
        Self::extension_field(p, 1)
    }

    /// Extension field `F_{p^r}` (`1 <= r <= 4`): the modulus is the
    /// least monic irreducible of degree `r` (coefficients scanned
    /// low-to-high in base-p order) and the generator is the least element,
    /// in the same packed ordering, of multiplicative order `q - 1`.
    pub fn extension_field(p: u64, r: u32) -> Result<FieldCtx, FieldError> {
        Self::extension_field_with_limit(p, r, DEFAULT_TABLE_LIMIT)
    }

    pub fn extension_field_with_limit(p: u64, r: u32, limit: u64) -> Result<FieldCtx, FieldError> {
        if !(1..=4).contains(&r) {
            return Err(FieldError::BadDegree(r));
        }
        if !is_prime(p) {
            return Err(FieldError::CompositeModulus(p));
        }
        let q = (p as u128).pow(r);
        if q > limit as u128 {
            return Err(FieldError::TooLarge {
                q: q.min(u64::MAX as u128) as u64,
                limit,
            });
        }
        let q = q as u64;

        let modulus: Vec<u64> = if r == 1 {
            Vec::new()
        } else {
            (0..q)
                .map(|n| {
                    let mut c = Vec::with_capacity(r as usize);
                    let mut m = n;
                    for _ in 0..r {
                        c.push(m % p);
                        m /= p;
                    }
                    c
                })
                .find(|c| is_irreducible(c, p))
                .expect("an irreducible polynomial of each degree exists")
        };

        let qm1_factors = factorize(q - 1);
        let generator = (1..q)
            .find(|&n| {
                if r == 1 {
                    qm1_factors
                        .iter()
                        .all(|&(l, _)| mod_pow(n, (q - 1) / l, p) != 1)
                } else {
                    let elt = unpack(n, p, r);
                    qm1_factors.iter().all(|&(l, _)| {
                        let pw = poly_pow_mod(&elt, ((q - 1) / l) as u128, &modulus, p);
                        !is_poly_one(&pw)
                    })
                }
            })
            .expect("F_q^x is cyclic");

        // exp / dlog tables by repeated multiplication by g.
        let mut exp_table = Vec::with_capacity((q - 1) as usize);
        let mut dlog_table = vec![u64::MAX; q as usize];
        if r == 1 {
            let mut x = 1u64;
            for j in 0..q - 1 {
                exp_table.push(x);
                dlog_table[x as usize] = j;
                x = mod_mul(x, generator, p);
            }
        } else {
            let g = unpack(generator, p, r);
            let mut x = vec![0u64; r as usize];
            x[0] = 1;
            for j in 0..q - 1 {
                let packed = pack(&x, p);
                exp_table.push(packed);
                dlog_table[packed as usize] = j;
                x = poly_mul_mod(&x, &g, &modulus, p);
            }
        }

        // Trace table from the power sums of the modulus roots.
        let mut trace_table = vec![0u64; q as usize];
        if r == 1 {
            for (x, t) in trace_table.iter_mut().enumerate() {
                *t = x as u64;
            }
        } else {
            // Newton's identities: e_k = (-1)^k * c_{r-k}, p_0 = r.
            let e = |k: usize| -> u64 {
                let c = modulus[r as usize - k];
                if k % 2 == 0 {
                    c
                } else {
                    (p - c) % p
                }
            };
            let mut psums = vec![0u64; r as usize];
            psums[0] = (r as u64) % p;
            for k in 1..r as usize {
                // p_k = e_1 p_{k-1} - e_2 p_{k-2} + ... + (-1)^{k-1} k e_k
                let mut acc: u64 = 0;
                for i in 1..k {
                    let term = mod_mul(e(i), psums[k - i], p);
                    acc = if i % 2 == 1 {
                        (acc + term) % p
                    } else {
                        (acc + p - term) % p
                    };
                }
                let last = mod_mul(k as u64 % p, e(k), p);
                acc = if k % 2 == 1 {
                    (acc + last) % p
                } else {
                    (acc + p - last) % p
                };
                psums[k] = acc;
            }
            for n in 0..q {
                let c = unpack(n, p, r);
                let mut t = 0u64;
                for (j, &cj) in c.iter().enumerate() {
                    t = (t + mod_mul(cj, psums[j], p)) % p;
                }
                trace_table[n as usize] = t;
            }
        }

        Ok(FieldCtx {
            p,
            r,
            q,
            modulus,
            generator,
            exp_table,
            dlog_table,
            trace_table,
        })
    }

    /// Same field, next admissible generator: used by tests asserting
    /// generator independence of rational H-values.
    pub fn with_next_generator(&self) -> FieldCtx {
        let qm1_factors = factorize(self.q - 1);
        let has_order_qm1 = |n: u64| {
            if self.r == 1 {
                qm1_factors
                    .iter()
                    .all(|&(l, _)| mod_pow(n, (self.q - 1) / l, self.p) != 1)
            } else {
                let elt = unpack(n, self.p, self.r);
                qm1_factors.iter().all(|&(l, _)| {
                    let pw =
                        poly_pow_mod(&elt, ((self.q - 1) / l) as u128, &self.modulus, self.p);
                    !is_poly_one(&pw)
                })
            }
        };
        let generator = (self.generator + 1..self.q)
            .find(|&n| has_order_qm1(n))
            .expect("more than one generator for q > 3");
        let mut exp_table = Vec::with_capacity((self.q - 1) as usize);
        let mut dlog_table = vec![u64::MAX; self.q as usize];
        if self.r == 1 {
            let mut x = 1u64;
            for j in 0..self.q - 1 {
                exp_table.push(x);
                dlog_table[x as usize] = j;
                x = mod_mul(x, generator, self.p);
            }
        } else {
            let g = unpack(generator, self.p, self.r);
            let mut x = vec![0u64; self.r as usize];
            x[0] = 1;
            for j in 0..self.q - 1 {
                let packed = pack(&x, self.p);
                exp_table.push(packed);
                dlog_table[packed as usize] = j;
                x = poly_mul_mod(&x, &g, &self.modulus, self.p);
            }
        }
        FieldCtx {
            p: self.p,
            r: self.r,
            q: self.q,
            modulus: self.modulus.clone(),
            generator,
            exp_table,
            dlog_table,
            trace_table: self.trace_table.clone(),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn r(&self) -> u32 {
        self.r
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn generator(&self) -> u64 {
        self.generator
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn is_zero(&self, x: u64) -> bool {
        x == 0
    }

    /// `g^j` for `j` taken mod `q - 1`.
    pub fn exp(&self, j: u64) -> u64 {
        self.exp_table[(j % (self.q - 1)) as usize]
    }

    /// Discrete log base `g`; `None` at 0.
    pub fn dlog(&self, x: u64) -> Option<u64> {
        debug_assert!(x < self.q);
        let d = self.dlog_table[x as usize];
        (d != u64::MAX).then_some(d)
    }

    pub fn trace(&self, x: u64) -> u64 {
        self.trace_table[x as usize]
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.r == 1 {
            (a + b) % self.p
        } else {
            let (mut x, y) = (unpack(a, self.p, self.r), unpack(b, self.p, self.r));
            for (xi, yi) in x.iter_mut().zip(y) {
                *xi = (*xi + yi) % self.p;
            }
            pack(&x, self.p)
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.r == 1 {
            (self.p - a) % self.p
        } else {
            let mut x = unpack(a, self.p, self.r);
            for xi in x.iter_mut() {
                *xi = (self.p - *xi) % self.p;
            }
            pack(&x, self.p)
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match (self.dlog(a), self.dlog(b)) {
            (Some(da), Some(db)) => self.exp(da + db),
            _ => 0,
        }
    }

    pub fn inv(&self, a: u64) -> u64 {
        let d = self.dlog(a).expect("inverse of zero");
        self.exp(self.q - 1 - d % (self.q - 1))
    }

    pub fn div(&self, a: u64, b: u64) -> u64 {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let d = self.dlog(a).unwrap();
        self.exp((d as u128 * e as u128 % (self.q - 1) as u128) as u64)
    }

    /// Embed an integer through `F_p`.
    pub fn embed_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    /// Reduce a rational into the field; errors when `p` divides the
    /// denominator.
    pub fn embed_rational(&self, x: Q) -> Result<u64, FieldError> {
        let den = x.denom().rem_euclid(self.p as i64) as u64;
        if den == 0 {
            return Err(FieldError::BadDenominator(x));
        }
        let num = self.embed_int(*x.numer());
        Ok(self.mul(num, self.inv(den)))
    }

    /// Quadratic character `phi_q(x)` as `{-1, 0, +1}`.
    pub fn quad_char(&self, x: u64) -> i32 {
        match self.dlog(x) {
            None => 0,
            Some(d) => {
                if d % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    /// `chi(x)` for `chi = omega^k`.
    pub fn char_eval(&self, chi: Character, x: u64) -> CharValue {
        match self.dlog(x) {
            None => CharValue::Zero,
            Some(d) => CharValue::Exp(
                (chi.exponent as u128 * d as u128 % (self.q - 1) as u128) as u64,
            ),
        }
    }

    /// The character `omega^{(q-1) a}` attached to a rational exponent;
    /// `None` when `(q-1) a` is not integral.
    pub fn char_of_rational(&self, a: Q) -> Option<Character> {
        let scaled = a * Q::from_integer((self.q - 1) as i64);
        if !scaled.is_integer() {
            return None;
        }
        Some(Character {
            exponent: scaled.to_integer().rem_euclid((self.q - 1) as i64) as u64,
        })
    }

    /// All field elements, zero first.
    pub fn elements(&self) -> impl Iterator<Item = u64> + '_ {
        std::iter::once(0).chain(self.exp_table.iter().copied())
    }
}

fn unpack(n: u64, p: u64, r: u32) -> Vec<u64> {
    let mut c = Vec::with_capacity(r as usize);
    let mut m = n;
    for _ in 0..r {
        c.push(m % p);
        m /= p;
    }
    c
}

fn pack(c: &[u64], p: u64) -> u64 {
    let mut n = 0u64;
    for &ci in c.iter().rev() {
        n = n * p + ci;
    }
    n
}

fn is_poly_one(v: &[u64]) -> bool {
    v.first() == Some(&1) && v[1..].iter().all(|&c| c == 0)
}
