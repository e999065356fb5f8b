//! Affine-isomorphism classification of the eight relatives.
//!
//! Everything here is driven by four scalars: `varphi_1`, `varphi_d`,
//! `phi_1`, `phi_d`. Comparing them decides, for each non-identity symmetry
//! element, whether the corresponding relative is affine isomorphic to the
//! original array ([`relative_condition`]), and sorts every valid array into
//! exactly one of seven cases that determine how the eight relatives
//! partition into affine-isomorphism classes ([`main_case`]). At the level
//! of pairs (forgetting the idempotent orderings), [`pair_self_maps`] and
//! [`pair_swap_maps`] list every affine map carrying the pair onto itself or
//! onto the swapped pair.
//!
//! The classification reads only those four scalars; [`brute_force_partition`]
//! recomputes the same partition from pairwise [`affine::solve`] calls over
//! the full orbit and serves as the independent oracle in the test suites.

use std::fmt;

use crate::affine::{self, AffineMap};
use crate::d4::{self, D4Element};
use crate::field::Scalar;
use crate::parray::ParameterArray;

/// The seven mutually exclusive classification cases.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum CaseTag {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
}

impl CaseTag {
    pub const ALL: [CaseTag; 7] = [
        CaseTag::I,
        CaseTag::II,
        CaseTag::III,
        CaseTag::IV,
        CaseTag::V,
        CaseTag::VI,
        CaseTag::VII,
    ];

    /// The CLI spelling `case-i` .. `case-vii`.
    pub fn name(&self) -> &'static str {
        match self {
            CaseTag::I => "case-i",
            CaseTag::II => "case-ii",
            CaseTag::III => "case-iii",
            CaseTag::IV => "case-iv",
            CaseTag::V => "case-v",
            CaseTag::VI => "case-vi",
            CaseTag::VII => "case-vii",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A partition of the eight relatives into affine-isomorphism classes, in
/// canonical order: classes sorted by their least member, members sorted by
/// the canonical element order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Partition {
    classes: Vec<Vec<D4Element>>,
}

impl Partition {
    fn new(mut classes: Vec<Vec<D4Element>>) -> Self {
        for class in &mut classes {
            class.sort_by_key(D4Element::canonical_index);
        }
        classes.sort_by_key(|c| c[0].canonical_index());
        debug_assert_eq!(classes.iter().map(Vec::len).sum::<usize>(), 8);
        Partition { classes }
    }

    pub fn classes(&self) -> &[Vec<D4Element>] {
        &self.classes
    }

    /// The class containing `g`.
    pub fn class_of(&self, g: D4Element) -> &[D4Element] {
        self.classes
            .iter()
            .find(|c| c.contains(&g))
            .expect("partitions cover all eight elements")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, class) in self.classes.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{{")?;
            for (j, g) in class.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{g}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

/// The four comparison scalars driving the classification.
struct Corners {
    vp1: Scalar,
    vpd: Scalar,
    ph1: Scalar,
    phd: Scalar,
}

impl Corners {
    fn of(pa: &ParameterArray) -> Self {
        let d = pa.d();
        Corners {
            vp1: pa.varphi(1).clone(),
            vpd: pa.varphi(d).clone(),
            ph1: pa.phi(1).clone(),
            phd: pa.phi(d).clone(),
        }
    }
}

/// Decide the classification case from the four corner scalars and return it
/// together with the partition of the eight relatives it dictates.
///
/// The hypotheses, evaluated verbatim in the array's field:
///
/// * case i: `vp1 = vpd = -ph1 = -phd` — one class of all eight;
/// * case ii: `vp1 = vpd`, `ph1 = phd`, `vp1 != -ph1` — two classes of four;
/// * case iii: `vp1 = vpd`, `ph1 != phd` — four classes of two;
/// * case iv: `ph1 = phd`, `vp1 != vpd` — four classes of two;
/// * case v: `vp1 = -ph1`, `vpd = -phd`, `vp1 != vpd` — four classes of two;
/// * case vi: `vp1 = -phd`, `vpd = -ph1`, `vp1 != vpd` — four classes of two;
/// * case vii: none of the above — eight singletons.
pub fn main_case(pa: &ParameterArray) -> (CaseTag, Partition) {
    let c = Corners::of(pa);
    let tag = if c.vp1 == c.vpd && c.vp1 == c.ph1.neg_value() && c.vp1 == c.phd.neg_value() {
        CaseTag::I
    } else if c.vp1 == c.vpd && c.ph1 == c.phd && c.vp1 != c.ph1.neg_value() {
        CaseTag::II
    } else if c.vp1 == c.vpd && c.ph1 != c.phd {
        CaseTag::III
    } else if c.ph1 == c.phd && c.vp1 != c.vpd {
        CaseTag::IV
    } else if c.vp1 == c.ph1.neg_value() && c.vpd == c.phd.neg_value() && c.vp1 != c.vpd {
        CaseTag::V
    } else if c.vp1 == c.phd.neg_value() && c.vpd == c.ph1.neg_value() && c.vp1 != c.vpd {
        CaseTag::VI
    } else {
        CaseTag::VII
    };
    (tag, case_partition(tag))
}

/// The partition of the eight relatives prescribed by each case.
pub fn case_partition(tag: CaseTag) -> Partition {
    let g = |name: &str| D4Element::parse(name).expect("canonical name");
    let classes: Vec<Vec<D4Element>> = match tag {
        CaseTag::I => vec![vec![
            g("id"),
            g("d"),
            g("D"),
            g("dD"),
            g("s"),
            g("ds"),
            g("Ds"),
            g("dDs"),
        ]],
        CaseTag::II => vec![
            vec![g("id"), g("dD"), g("s"), g("dDs")],
            vec![g("d"), g("D"), g("ds"), g("Ds")],
        ],
        CaseTag::III => vec![
            vec![g("id"), g("dDs")],
            vec![g("d"), g("ds")],
            vec![g("D"), g("Ds")],
            vec![g("dD"), g("s")],
        ],
        CaseTag::IV => vec![
            vec![g("id"), g("s")],
            vec![g("d"), g("Ds")],
            vec![g("D"), g("ds")],
            vec![g("dD"), g("dDs")],
        ],
        CaseTag::V => vec![
            vec![g("id"), g("D")],
            vec![g("d"), g("dD")],
            vec![g("s"), g("Ds")],
            vec![g("ds"), g("dDs")],
        ],
        CaseTag::VI => vec![
            vec![g("id"), g("d")],
            vec![g("D"), g("dD")],
            vec![g("s"), g("ds")],
            vec![g("Ds"), g("dDs")],
        ],
        CaseTag::VII => d4::ALL.into_iter().map(|g| vec![g]).collect(),
    };
    Partition::new(classes)
}

/// Recompute the partition of the orbit by running the O(d) affine solver on
/// all pairs of relatives. Independent of [`main_case`]; used as its oracle.
pub fn brute_force_partition(pa: &ParameterArray) -> Partition {
    let orbit = d4::orbit(pa);
    let mut classes: Vec<Vec<usize>> = Vec::new();
    'next: for (idx, (_, rel)) in orbit.iter().enumerate() {
        for class in &mut classes {
            let (_, repr) = &orbit[class[0]];
            if affine::is_affine_isomorphic(repr, rel) {
                class.push(idx);
                continue 'next;
            }
        }
        classes.push(vec![idx]);
    }
    Partition::new(
        classes
            .into_iter()
            .map(|c| c.into_iter().map(|i| orbit[i].0).collect())
            .collect(),
    )
}

/// For `g != id`, decide whether the relative `pa^g` is affine isomorphic to
/// `pa`, and if so give the canonical map with `apply(pa, map) = act(pa, g)`.
///
/// The criteria and maps, writing `t = theta`, `ts = theta*`:
///
/// * `d`: `vp1 = -phd` and `vpd = -ph1`; map `(1, 0, -1, ts_0 + ts_d)`.
/// * `D`: `vp1 = -ph1` and `vpd = -phd`; map `(-1, t_0 + t_d, 1, 0)`.
/// * `dD`: `vp1 = vpd` and `ph1 = phd`; map `(-1, t_0 + t_d, -1, ts_0 + ts_d)`.
/// * `s`: `ph1 = phd`; map `(x, ts_0 - x t_0, 1/x, t_0 - ts_0/x)` with `x`
///   the common value of `(ts_i - ts_0)/(t_i - t_0)`.
/// * `ds`: all four corners coincide up to sign as in case i; map
///   `(x, ts_d - x t_0, -1/x, t_0 + ts_0/x)` with `x` the common value of
///   `(ts_{d-i} - ts_d)/(t_i - t_0)`.
/// * `Ds`: same condition as `ds`; map `(x, ts_0 - x t_0, -1/x, t_0 + ts_d/x)`
///   with `x` the common value of `(ts_i - ts_0)/(t_i - t_0)`.
/// * `dDs`: `vp1 = vpd`; map `(x, ts_d - x t_0, 1/x, t_0 - ts_d/x)` with `x`
///   the common value of `(ts_{d-i} - ts_d)/(t_i - t_0)`.
///
/// The common values exist whenever the stated split-sequence criterion
/// holds, and are read off at `i = d`. `id` returns the identity map.
pub fn relative_condition(pa: &ParameterArray, g: D4Element) -> (bool, Option<AffineMap>) {
    let c = Corners::of(pa);
    let d = pa.d();
    let field = pa.field();
    let t0 = pa.theta(0);
    let td = pa.theta(d);
    let ts0 = pa.theta_star(0);
    let tsd = pa.theta_star(d);
    let one = field.one();
    let zero = field.zero();

    // The two eigenvalue cross-quotients, read off at i = d.
    let alpha = || &(tsd - ts0) / &(td - t0);
    let alpha_rev = || &(ts0 - tsd) / &(td - t0);

    let all_four = c.vp1 == c.vpd && c.vp1 == c.ph1.neg_value() && c.vp1 == c.phd.neg_value();

    let result: Option<AffineMap> = match g.name() {
        "id" => Some(AffineMap::identity(&field)),
        "d" => (c.vp1 == c.phd.neg_value() && c.vpd == c.ph1.neg_value()).then(|| {
            AffineMap::new(one.clone(), zero.clone(), one.neg_value(), ts0 + tsd).unwrap()
        }),
        "D" => (c.vp1 == c.ph1.neg_value() && c.vpd == c.phd.neg_value()).then(|| {
            AffineMap::new(one.neg_value(), t0 + td, one.clone(), zero.clone()).unwrap()
        }),
        "dD" => (c.vp1 == c.vpd && c.ph1 == c.phd).then(|| {
            AffineMap::new(one.neg_value(), t0 + td, one.neg_value(), ts0 + tsd).unwrap()
        }),
        "s" => (c.ph1 == c.phd).then(|| {
            let xi = alpha();
            let xi_star = xi.inv().unwrap();
            AffineMap::new(
                xi.clone(),
                ts0 - &(&xi * t0),
                xi_star.clone(),
                t0 - &(&xi_star * ts0),
            )
            .unwrap()
        }),
        "ds" => all_four.then(|| {
            let xi = alpha_rev();
            let xi_star = xi.inv().unwrap().neg_value();
            AffineMap::new(
                xi.clone(),
                tsd - &(&xi * t0),
                xi_star.clone(),
                t0 - &(&xi_star * ts0),
            )
            .unwrap()
        }),
        "Ds" => all_four.then(|| {
            let xi = alpha();
            let xi_star = xi.inv().unwrap().neg_value();
            AffineMap::new(
                xi.clone(),
                ts0 - &(&xi * t0),
                xi_star.clone(),
                t0 - &(&xi_star * tsd),
            )
            .unwrap()
        }),
        "dDs" => (c.vp1 == c.vpd).then(|| {
            let xi = alpha_rev();
            let xi_star = xi.inv().unwrap();
            AffineMap::new(
                xi.clone(),
                tsd - &(&xi * t0),
                xi_star.clone(),
                t0 - &(&xi_star * tsd),
            )
            .unwrap()
        }),
        _ => unreachable!(),
    };
    (result.is_some(), result)
}

/// Every affine map `(xi, zeta, xi*, zeta*)` for which the transformed pair
/// `(xi A + zeta I, xi* A* + zeta* I)` is isomorphic to the pair `(A, A*)`,
/// in clause order. The identity always qualifies; the other three clauses
/// fire according to the corner comparisons, and at most one clause can
/// produce any given map.
///
/// List lengths by case: 4 in case i, 2 in cases ii/v/vi, 1 in the rest.
pub fn pair_self_maps(pa: &ParameterArray) -> Vec<AffineMap> {
    let c = Corners::of(pa);
    let d = pa.d();
    let field = pa.field();
    let one = field.one();
    let zero = field.zero();
    let theta_sum = pa.theta(0) + pa.theta(d);
    let theta_star_sum = pa.theta_star(0) + pa.theta_star(d);

    let mut maps = vec![AffineMap::identity(&field)];
    if c.vp1 == c.phd.neg_value() && c.vpd == c.ph1.neg_value() {
        maps.push(
            AffineMap::new(
                one.clone(),
                zero.clone(),
                one.neg_value(),
                theta_star_sum.clone(),
            )
            .unwrap(),
        );
    }
    if c.vp1 == c.ph1.neg_value() && c.vpd == c.phd.neg_value() {
        maps.push(
            AffineMap::new(one.neg_value(), theta_sum.clone(), one.clone(), zero.clone()).unwrap(),
        );
    }
    if c.vp1 == c.vpd && c.ph1 == c.phd {
        maps.push(
            AffineMap::new(one.neg_value(), theta_sum, one.neg_value(), theta_star_sum).unwrap(),
        );
    }
    maps
}

/// Every affine map for which the transformed pair is isomorphic to the
/// swapped pair `(A*, A)`, in clause order. Writing `alpha` for
/// `(theta*_d - theta*_0)/(theta_d - theta_0)`:
///
/// * `ph1 = phd`: `(alpha, ts_0 - alpha t_0, 1/alpha, t_0 - ts_0/alpha)`;
/// * all four corners coincide up to sign: two further maps mixing `-alpha`
///   with `1/alpha` and `alpha` with `-1/alpha`;
/// * `vp1 = vpd`: `(-alpha, ts_d + alpha t_0, -1/alpha, t_0 + ts_d/alpha)`.
///
/// Empty exactly in cases v, vi, and vii.
pub fn pair_swap_maps(pa: &ParameterArray) -> Vec<AffineMap> {
    let c = Corners::of(pa);
    let d = pa.d();
    let t0 = pa.theta(0);
    let ts0 = pa.theta_star(0);
    let tsd = pa.theta_star(d);
    let alpha = &(tsd - ts0) / &(pa.theta(d) - t0);
    let alpha_inv = alpha.inv().expect("distinct endpoints");

    let all_four = c.vp1 == c.vpd && c.vp1 == c.ph1.neg_value() && c.vp1 == c.phd.neg_value();
    let mut maps = Vec::new();
    if c.ph1 == c.phd {
        maps.push(
            AffineMap::new(
                alpha.clone(),
                ts0 - &(&alpha * t0),
                alpha_inv.clone(),
                t0 - &(&alpha_inv * ts0),
            )
            .unwrap(),
        );
    }
    if all_four {
        maps.push(
            AffineMap::new(
                alpha.neg_value(),
                tsd + &(&alpha * t0),
                alpha_inv.clone(),
                t0 - &(&alpha_inv * ts0),
            )
            .unwrap(),
        );
        maps.push(
            AffineMap::new(
                alpha.clone(),
                ts0 - &(&alpha * t0),
                alpha_inv.neg_value(),
                t0 + &(&alpha_inv * tsd),
            )
            .unwrap(),
        );
    }
    if c.vp1 == c.vpd {
        maps.push(
            AffineMap::new(
                alpha.neg_value(),
                tsd + &(&alpha * t0),
                alpha_inv.neg_value(),
                t0 + &(&alpha_inv * tsd),
            )
            .unwrap(),
        );
    }
    maps
}

/// The four relatives describing the same unordered pair `(A, A*)`.
pub const PAIR_ASSOCIATES: [&str; 4] = ["id", "d", "D", "dD"];
/// The four relatives describing the swapped pair `(A*, A)`.
pub const PAIR_SWAP_ASSOCIATES: [&str; 4] = ["s", "ds", "Ds", "dDs"];
