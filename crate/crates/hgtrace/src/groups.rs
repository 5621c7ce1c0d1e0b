//! Registry of arithmetic triangle groups: hypergeometric data, coordinates
//! of elliptic points and cusps, CM discriminants, sign rules, pullback maps
//! for the index-2 subgroups of (2,4,6), and cusp-form dimensions.
//!
//! Eleven groups are supported. Five carry their own datum and a lambda
//! coordinate with special points at {0, 1, infinity}; two are the
//! elliptic-modular Gamma_1(3) / Gamma_1(4) cases admitting odd weights;
//! three are index-2 subgroups of (2,4,6) described by a t-coordinate and a
//! pullback map; (2,2,3,3) is assembled by inclusion-exclusion.

use thiserror::Error;

use crate::ffield::FieldCtx;
use crate::hgdata::HGDatum;
use crate::Q;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("unknown group '{0}'")]
    UnknownGroup(String),
    #[error("prime {0} is bad for this group")]
    BadPrime(u64),
}

/// Identifier for a registry group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupId {
    TwoInfInf,
    TwoThreeInf,
    TwoFourInf,
    TwoSixInf,
    TwoFourSix,
    Gamma1Three,
    Gamma1Four,
    TwoSixSix,
    ThreeFourFour,
    TwoTwoTwoThree,
    TwoTwoThreeThree,
}

pub const ALL_GROUPS: [GroupId; 11] = [
    GroupId::TwoInfInf,
    GroupId::TwoThreeInf,
    GroupId::TwoFourInf,
    GroupId::TwoSixInf,
    GroupId::TwoFourSix,
    GroupId::Gamma1Three,
    GroupId::Gamma1Four,
    GroupId::TwoSixSix,
    GroupId::ThreeFourFour,
    GroupId::TwoTwoTwoThree,
    GroupId::TwoTwoThreeThree,
];

/// Which trace-formula family the group belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Even weights, generic term `F_{k/2}(a(lambda,p), p)`.
    MainEven,
    /// `Gamma_1(3)` / `Gamma_1(4)`: all weights, generic term by the
    /// binomial power sum; `n_gamma` is the level as a subgroup of SL2(Z).
    GammaOne { n_gamma: u64 },
    /// Index-2 subgroup of (2,4,6) with a t-coordinate pullback.
    Pullback,
    /// Sum of the three pullback groups minus twice (2,4,6).
    InclusionExclusion,
}

/// Coordinate of a special point on the group's rational curve model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coord {
    Finite(i64),
    Infinity,
    /// The conjugate pair of points with `t^2 = square` (a non-square
    /// rational); both enter separately when rational over `F_q`.
    QuadraticPair { square: Q },
}

/// Contribution rule of a cusp, per weight exponent k.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CuspRule {
    /// Always 1 (split multiplicative over Q).
    One,
    /// `chi_d(p)^k` (multiplicative, split iff d is a square mod p).
    Character { d: i64 },
    /// Irregular cusp: `(1 + (-1)^k)/2` (additive reduction).
    Irregular,
}

#[derive(Debug, Clone)]
pub struct EllipticPoint {
    pub coord: Coord,
    pub order: u64,
    pub disc: i64,
}

#[derive(Debug, Clone)]
pub struct CuspPoint {
    pub coord: Coord,
    pub rule: CuspRule,
}

/// One registry row. `datum` is the group's own datum for the first seven
/// groups and HD(2,4,6) for the pullback groups (which evaluate it through
/// their `t`-coordinate maps).
#[derive(Debug, Clone)]
pub struct TriangleGroupSpec {
    pub id: GroupId,
    pub name: &'static str,
    /// Elliptic/cusp orders of the signature, `None` = infinity (a cusp).
    pub orders: Vec<Option<u64>>,
    pub family: Family,
    pub datum: HGDatum,
    pub elliptic: Vec<EllipticPoint>,
    pub cusps: Vec<CuspPoint>,
    pub contains_minus_id: bool,
    /// `u` in the generic sign rule: 1 exactly when the datum is HD(2,4,6).
    pub power_u: u32,
}

/// Classification of one point of the reduced curve over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointClass {
    pub coord: P1Point,
    pub kind: PointKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum P1Point {
    Finite(u64),
    Infinity,
    /// Point `[x : y : z]` of the conic model `x^2 + 3y^2 + z^2 = 0` used
    /// for (2,2,3,3), normalized with the last nonzero coordinate 1.
    Conic(u64, u64, u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    Generic,
    Elliptic { order: u64, disc: i64 },
    Cusp { rule: CuspRule },
}

fn q2(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

fn datum(a: &[(i64, i64)], b: &[(i64, i64)]) -> HGDatum {
    let alpha: Vec<Q> = a.iter().map(|&(n, d)| q2(n, d)).collect();
    let beta: Vec<Q> = b.iter().map(|&(n, d)| q2(n, d)).collect();
    HGDatum::new(&alpha, &beta).expect("registry data are well-formed")
}

/// HD(2,4,6), shared by the pullback groups.
pub fn hd_246() -> HGDatum {
    datum(&[(1, 2), (1, 4), (3, 4)], &[(1, 1), (5, 6), (7, 6)])
}

impl GroupId {
    pub fn parse(s: &str) -> Result<GroupId, GroupError> {
        let norm: String = s
            .trim()
            .to_ascii_lowercase()
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '(' && *c != ')')
            .collect();
        let id = match norm.as_str() {
            "2,inf,inf" | "2,oo,oo" => GroupId::TwoInfInf,
            "2,3,inf" | "2,3,oo" => GroupId::TwoThreeInf,
            "2,4,inf" | "2,4,oo" => GroupId::TwoFourInf,
            "2,6,inf" | "2,6,oo" => GroupId::TwoSixInf,
            "2,4,6" => GroupId::TwoFourSix,
            "gamma1_3" | "gamma1(3)" | "3,inf,inf" | "3,oo,oo" => GroupId::Gamma1Three,
            "gamma1_4" | "gamma1(4)" | "inf,inf,inf" | "oo,oo,oo" => GroupId::Gamma1Four,
            "2,6,6" => GroupId::TwoSixSix,
            "3,4,4" => GroupId::ThreeFourFour,
            "2,2,2,3" => GroupId::TwoTwoTwoThree,
            "2,2,3,3" => GroupId::TwoTwoThreeThree,
            _ => return Err(GroupError::UnknownGroup(s.to_string())),
        };
        Ok(id)
    }
}

/// Full registry row for a group.
pub fn lookup(id: GroupId) -> TriangleGroupSpec {
    use GroupId::*;
    match id {
        TwoInfInf => TriangleGroupSpec {
            id,
            name: "2,inf,inf",
            orders: vec![Some(2), None, None],
            family: Family::MainEven,
            datum: datum(&[(1, 2), (1, 2), (1, 2)], &[(1, 1), (1, 1), (1, 1)]),
            elliptic: vec![EllipticPoint {
                coord: Coord::Finite(1),
                order: 2,
                disc: -4,
            }],
            cusps: vec![
                CuspPoint {
                    coord: Coord::Finite(0),
                    rule: CuspRule::One,
                },
                CuspPoint {
                    coord: Coord::Infinity,
                    rule: CuspRule::One,
                },
            ],
            contains_minus_id: true,
            power_u: 0,
        },
        TwoThreeInf => TriangleGroupSpec {
            id,
            name: "2,3,inf",
            orders: vec![Some(2), Some(3), None],
            family: Family::MainEven,
            datum: datum(&[(1, 2), (1, 6), (5, 6)], &[(1, 1), (1, 1), (1, 1)]),
            elliptic: vec![
                EllipticPoint {
                    coord: Coord::Finite(1),
                    order: 2,
                    disc: -4,
                },
                EllipticPoint {
                    coord: Coord::Infinity,
                    order: 3,
                    disc: -3,
                },
            ],
            cusps: vec![CuspPoint {
                coord: Coord::Finite(0),
                rule: CuspRule::One,
            }],
            contains_minus_id: true,
            power_u: 0,
        },
        TwoFourInf => TriangleGroupSpec {
            id,
            name: "2,4,inf",
            orders: vec![Some(2), Some(4), None],
            family: Family::MainEven,
            datum: datum(&[(1, 2), (1, 4), (3, 4)], &[(1, 1), (1, 1), (1, 1)]),
            elliptic: vec![
                EllipticPoint {
                    coord: Coord::Finite(1),
                    order: 2,
                    disc: -8,
                },
                EllipticPoint {
                    coord: Coord::Infinity,
                    order: 4,
                    disc: -4,
                },
            ],
            cusps: vec![CuspPoint {
                coord: Coord::Finite(0),
                rule: CuspRule::One,
            }],
            contains_minus_id: true,
            power_u: 0,
        },
        TwoSixInf => TriangleGroupSpec {
            id,
            name: "2,6,inf",
            orders: vec![Some(2), Some(6), None],
            family: Family::MainEven,
            datum: datum(&[(1, 2), (1, 3), (2, 3)], &[(1, 1), (1, 1), (1, 1)]),
            elliptic: vec![
                EllipticPoint {
                    coord: Coord::Finite(1),
                    order: 2,
                    disc: -3,
                },
                EllipticPoint {
                    coord: Coord::Infinity,
                    order: 6,
                    disc: -3,
                },
            ],
            cusps: vec![CuspPoint {
                coord: Coord::Finite(0),
                rule: CuspRule::One,
            }],
            contains_minus_id: true,
            power_u: 0,
        },
        TwoFourSix => TriangleGroupSpec {
            id,
            name: "2,4,6",
            orders: vec![Some(2), Some(4), Some(6)],
            family: Family::MainEven,
            datum: hd_246(),
            elliptic: vec![
                EllipticPoint {
                    coord: Coord::Finite(1),
                    order: 2,
                    disc: -24,
                },
                EllipticPoint {
                    coord: Coord::Infinity,
                    order: 4,
                    disc: -4,
                },
                EllipticPoint {
                    coord: Coord::Finite(0),
                    order: 6,
                    disc: -3,
                },
            ],
            cusps: vec![],
            contains_minus_id: true,
            power_u: 1,
        },
        Gamma1Three => TriangleGroupSpec {
            id,
            name: "gamma1_3",
            orders: vec![Some(3), None, None],
            family: Family::GammaOne { n_gamma: 3 },
            datum: datum(&[(1, 3), (2, 3)], &[(1, 1), (1, 1)]),
            elliptic: vec![EllipticPoint {
                coord: Coord::Infinity,
                order: 3,
                disc: -3,
            }],
            cusps: vec![
                CuspPoint {
                    coord: Coord::Finite(0),
                    rule: CuspRule::One,
                },
                CuspPoint {
                    coord: Coord::Finite(1),
                    rule: CuspRule::Character { d: -3 },
                },
            ],
            contains_minus_id: false,
            power_u: 0,
        },
        Gamma1Four => TriangleGroupSpec {
            id,
            name: "gamma1_4",
            orders: vec![None, None, None],
            family: Family::GammaOne { n_gamma: 4 },
            datum: datum(&[(1, 2), (1, 2)], &[(1, 1), (1, 1)]),
            elliptic: vec![],
            cusps: vec![
                CuspPoint {
                    coord: Coord::Finite(0),
                    rule: CuspRule::One,
                },
                CuspPoint {
                    coord: Coord::Finite(1),
                    rule: CuspRule::Character { d: -1 },
                },
                CuspPoint {
                    coord: Coord::Infinity,
                    rule: CuspRule::Irregular,
                },
            ],
            contains_minus_id: false,
            power_u: 0,
        },
        TwoSixSix => TriangleGroupSpec {
            id,
            name: "2,6,6",
            orders: vec![Some(2), Some(6), Some(6)],
            family: Family::Pullback,
            datum: hd_246(),
            elliptic: vec![
                EllipticPoint {
                    coord: Coord::Finite(0),
                    order: 2,
                    disc: -4,
                },
                EllipticPoint {
                    coord: Coord::QuadraticPair {
                        square: q2(-1, 3),
                    },
                    order: 6,
                    disc: -3,
                },
            ],
            cusps: vec![],
            contains_minus_id: true,
            power_u: 1,
        },
        ThreeFourFour => TriangleGroupSpec {
            id,
            name: "3,4,4",
            orders: vec![Some(3), Some(4), Some(4)],
            family: Family::Pullback,
            datum: hd_246(),
            elliptic: vec![
                EllipticPoint {
                    coord: Coord::Infinity,
                    order: 3,
                    disc: -3,
                },
                EllipticPoint {
                    coord: Coord::QuadraticPair {
                        square: q2(-1, 1),
                    },
                    order: 4,
                    disc: -4,
                },
            ],
            cusps: vec![],
            contains_minus_id: true,
            power_u: 1,
        },
        TwoTwoTwoThree => TriangleGroupSpec {
            id,
            name: "2,2,2,3",
            orders: vec![Some(2), Some(2), Some(2), Some(3)],
            family: Family::Pullback,
            datum: hd_246(),
            elliptic: vec![
                EllipticPoint {
                    coord: Coord::QuadraticPair {
                        square: q2(-3, 1),
                    },
                    order: 2,
                    disc: -24,
                },
                EllipticPoint {
                    coord: Coord::Infinity,
                    order: 2,
                    disc: -4,
                },
                EllipticPoint {
                    coord: Coord::Finite(0),
                    order: 3,
                    disc: -3,
                },
            ],
            cusps: vec![],
            contains_minus_id: true,
            power_u: 1,
        },
        TwoTwoThreeThree => TriangleGroupSpec {
            id,
            name: "2,2,3,3",
            orders: vec![Some(2), Some(2), Some(3), Some(3)],
            family: Family::InclusionExclusion,
            datum: hd_246(),
            // On the conic x^2 + 3y^2 + z^2 = 0: the order-2 points are
            // [1:0:±i] (CM by -4), the order-3 points [0:1:±sqrt(-3)] (CM
            // by -3); encoded by the squares of the missing coordinate.
            elliptic: vec![
                EllipticPoint {
                    coord: Coord::QuadraticPair { square: q2(-1, 1) },
                    order: 2,
                    disc: -4,
                },
                EllipticPoint {
                    coord: Coord::QuadraticPair { square: q2(-3, 1) },
                    order: 3,
                    disc: -3,
                },
            ],
            cusps: vec![],
            contains_minus_id: true,
            power_u: 1,
        },
    }
}

pub fn lookup_name(name: &str) -> Result<TriangleGroupSpec, GroupError> {
    Ok(lookup(GroupId::parse(name)?))
}

impl TriangleGroupSpec {
    /// Primes of bad reduction: divisors of `6 M(HD)`.
    pub fn is_bad_prime(&self, p: u64) -> bool {
        (6 * self.datum.level() as u64) % p == 0
    }

    /// The three pullback constituents and (2,4,6), for inclusion-exclusion.
    pub fn inclusion_exclusion_parts() -> [(GroupId, i64); 4] {
        [
            (GroupId::TwoSixSix, 1),
            (GroupId::ThreeFourFour, 1),
            (GroupId::TwoTwoTwoThree, 1),
            (GroupId::TwoFourSix, -2),
        ]
    }

    /// Classify every point of the group's curve over `F_q`.
    pub fn classify_points(&self, ctx: &FieldCtx) -> Result<Vec<PointClass>, GroupError> {
        if self.is_bad_prime(ctx.p()) {
            return Err(GroupError::BadPrime(ctx.p()));
        }
        if self.family == Family::InclusionExclusion {
            return Ok(self.classify_conic(ctx));
        }
        let mut classes: Vec<PointClass> = Vec::with_capacity(ctx.q() as usize + 1);
        let kind_of = |pt: P1Point| -> PointKind {
            for e in &self.elliptic {
                match e.coord {
                    Coord::Finite(v) => {
                        if pt == P1Point::Finite(ctx.embed_int(v)) {
                            return PointKind::Elliptic {
                                order: e.order,
                                disc: e.disc,
                            };
                        }
                    }
                    Coord::Infinity => {
                        if pt == P1Point::Infinity {
                            return PointKind::Elliptic {
                                order: e.order,
                                disc: e.disc,
                            };
                        }
                    }
                    Coord::QuadraticPair { square } => {
                        if let P1Point::Finite(x) = pt {
                            if let Ok(s) = ctx.embed_rational(square) {
                                if ctx.mul(x, x) == s && x != 0 {
                                    return PointKind::Elliptic {
                                        order: e.order,
                                        disc: e.disc,
                                    };
                                }
                            }
                        }
                    }
                }
            }
            for c in &self.cusps {
                let hit = match c.coord {
                    Coord::Finite(v) => pt == P1Point::Finite(ctx.embed_int(v)),
                    Coord::Infinity => pt == P1Point::Infinity,
                    Coord::QuadraticPair { .. } => false,
                };
                if hit {
                    return PointKind::Cusp { rule: c.rule };
                }
            }
            PointKind::Generic
        };
        for x in ctx.elements() {
            classes.push(PointClass {
                coord: P1Point::Finite(x),
                kind: kind_of(P1Point::Finite(x)),
            });
        }
        classes.push(PointClass {
            coord: P1Point::Infinity,
            kind: kind_of(P1Point::Infinity),
        });
        Ok(classes)
    }

    /// Points of the conic `x^2 + 3y^2 + z^2 = 0` for (2,2,3,3): exactly
    /// `q + 1` of them for good q.
    fn classify_conic(&self, ctx: &FieldCtx) -> Vec<PointClass> {
        let mut out = Vec::new();
        let m3 = ctx.embed_int(-3);
        let m1 = ctx.embed_int(-1);
        // Chart z = 1: x^2 = -1 - 3y^2.
        for y in ctx.elements() {
            let rhs = ctx.sub(m1, ctx.mul(ctx.embed_int(3), ctx.mul(y, y)));
            for x in sqrt_in_field(ctx, rhs) {
                let kind = if y == 0 {
                    // [±i : 0 : 1] — order-2 elliptic pair (x^2 = -1).
                    PointKind::Elliptic { order: 2, disc: -4 }
                } else {
                    PointKind::Generic
                };
                out.push(PointClass {
                    coord: P1Point::Conic(x, y, 1),
                    kind,
                });
            }
        }
        // Chart z = 0, y = 1: x^2 = -3.
        for x in sqrt_in_field(ctx, m3) {
            out.push(PointClass {
                coord: P1Point::Conic(x, 1, 0),
                kind: PointKind::Elliptic { order: 3, disc: -3 },
            });
        }
        out.sort_by_key(|c| c.coord);
        out
    }

    /// Dimension of the space of weight-`w` cusp forms, by the genus-zero
    /// valence formula; 0 for odd `w` when the group contains -id.
    pub fn dim_cusp_forms(&self, w: u64) -> u64 {
        assert!(w >= 3, "weights below 3 are out of scope");
        if w % 2 == 1 && self.contains_minus_id {
            return 0;
        }
        let k = w as i64;
        let mut dim = -(k - 1);
        for e in self.orders.iter().flatten() {
            let e = *e as i64;
            dim += k * (e - 1) / (2 * e);
        }
        if w % 2 == 0 {
            dim += (k / 2 - 1) * self.cusps.len() as i64;
        } else {
            // Odd weight: regular cusps weigh (k-2)/2, irregular (k-1)/2;
            // the halves always assemble to an integer.
            let reg = self
                .cusps
                .iter()
                .filter(|c| c.rule != CuspRule::Irregular)
                .count() as i64;
            let irr = self.cusps.len() as i64 - reg;
            let twice = (k - 2) * reg + (k - 1) * irr;
            debug_assert_eq!(twice % 2, 0);
            dim += twice / 2;
        }
        dim.max(0) as u64
    }
}

/// Square roots of `a` in `F_q` (0, 1, or 2 of them; excludes a = 0 -> [0]).
pub fn sqrt_in_field(ctx: &FieldCtx, a: u64) -> Vec<u64> {
    if a == 0 {
        return vec![0];
    }
    match ctx.dlog(a) {
        Some(d) if d % 2 == 0 => {
            let r = ctx.exp(d / 2);
            vec![r, ctx.neg(r)]
        }
        _ => vec![],
    }
}
