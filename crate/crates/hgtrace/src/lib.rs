//! Exact evaluation of finite-field hypergeometric character sums and the
//! Hecke trace / eigenvalue formulas they feed for arithmetic triangle groups.
//!
//! The crate is organized bottom-up:
//!
//! * [`ffield`] — deterministic finite fields `F_{p^r}` with discrete-log
//!   tables and multiplicative-character evaluation.
//! * [`hgdata`] — hypergeometric data `{alpha, beta}`: level, primitivity,
//!   rationality, and the gamma vector `(p_j, q_k, N)` driving the
//!   Beukers–Cohen–Mellit sum.
//! * [`cyclo`] — small exact cyclotomic integer arithmetic (group ring and
//!   power basis) used for Jacobi sums and the slow oracle path.
//! * [`charsum`] — Gauss/Jacobi sums and the P- and H-functions, evaluated in
//!   auxiliary prime fields and lifted to exact rationals by symmetric CRT.
//! * [`groups`] — the registry of triangle groups, point classification on
//!   `P^1(F_q)`, and cusp-form dimensions.
//! * [`trace`] — local Frobenius contributions (generic, elliptic, cusp) and
//!   Hecke traces.
//! * [`eigen`] — Frobenius power traces over `F_{p^r}` and exact Hecke
//!   eigenvalue extraction via Newton's identities.
//! * [`oracles`] — independent ground truth: naive elliptic-curve counts,
//!   eta-product q-expansions, the exact cyclotomic P-function, and the
//!   character-sum identity suites.
//! * [`fixtures`] — reference newform eigenvalue data (offline cache plus an
//!   opt-in HTTP client).
//! * [`cli`] — the `hgtrace` command-line surface.

pub mod charsum;
pub mod cli;
pub mod cyclo;
pub mod eigen;
pub mod ffield;
pub mod fixtures;
pub mod groups;
pub mod hgdata;
pub mod oracles;
pub mod trace;

/// Rational scalars used for hypergeometric parameters. Denominators in this
/// crate are tiny (divisors of 24), so a 64-bit rational is ample.
pub type Q = num_rational::Rational64;
