//! The eight-element dihedral symmetry acting on parameter arrays.
//!
//! The symmetry is generated by three involutions: the dual swap `*` (written
//! `s`), the first inversion `↓` (written `d`), and the second inversion `⇓`
//! (written `D`), subject to `s d = D s`, `s D = d s`, and `d D = D d`. Every
//! word in the generators reduces to one of the eight canonical forms
//! `id, d, D, dD, s, ds, Ds, dDs`, read left to right as the order in which
//! the generators are applied: `dDs` means "apply `d`, then `D`, then `s`".

use std::fmt;

use crate::parray::ParameterArray;

/// A canonical word in the three generators.
///
/// The flags record whether each generator occurs in the canonical form
/// `d^down D^ddown s^star`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct D4Element {
    down: bool,
    ddown: bool,
    star: bool,
}

/// The identity.
pub const ID: D4Element = D4Element::new(false, false, false);
/// The first inversion `↓`.
pub const DOWN: D4Element = D4Element::new(true, false, false);
/// The second inversion `⇓`.
pub const DDOWN: D4Element = D4Element::new(false, true, false);
/// The dual swap `*`.
pub const STAR: D4Element = D4Element::new(false, false, true);

/// All eight elements in canonical order: `id, d, D, dD, s, ds, Ds, dDs`.
pub const ALL: [D4Element; 8] = [
    D4Element::new(false, false, false),
    D4Element::new(true, false, false),
    D4Element::new(false, true, false),
    D4Element::new(true, true, false),
    D4Element::new(false, false, true),
    D4Element::new(true, false, true),
    D4Element::new(false, true, true),
    D4Element::new(true, true, true),
];

impl D4Element {
    pub const fn new(down: bool, ddown: bool, star: bool) -> Self {
        D4Element { down, ddown, star }
    }

    pub fn involves_dual(&self) -> bool {
        self.star
    }

    /// Position in the canonical order `id, d, D, dD, s, ds, Ds, dDs`.
    pub fn canonical_index(&self) -> usize {
        (self.star as usize) * 4 + (self.ddown as usize) * 2 + self.down as usize
    }

    /// The element acting as "first this one, then `g`".
    pub fn then(&self, g: D4Element) -> D4Element {
        // Push our trailing `s` (if any) through g's inversions, which swaps
        // them: s d = D s and s D = d s.
        let (gd, gdd) = if self.star {
            (g.ddown, g.down)
        } else {
            (g.down, g.ddown)
        };
        D4Element {
            down: self.down ^ gd,
            ddown: self.ddown ^ gdd,
            star: self.star ^ g.star,
        }
    }

    /// Group composition `g ∘ h`: the element acting as "first `h`, then `g`".
    pub fn compose(g: D4Element, h: D4Element) -> D4Element {
        h.then(g)
    }

    pub fn inverse(&self) -> D4Element {
        // Every element here is an involution except ds and Ds, which are
        // each other's inverses (they are the two rotations of order 4).
        for g in ALL {
            if self.then(g) == ID {
                return g;
            }
        }
        unreachable!("every group element has an inverse")
    }

    /// The canonical name: one of `id, d, D, dD, s, ds, Ds, dDs`.
    pub fn name(&self) -> &'static str {
        const NAMES: [&str; 8] = ["id", "d", "D", "dD", "s", "ds", "Ds", "dDs"];
        NAMES[self.canonical_index()]
    }

    pub fn parse(text: &str) -> Option<D4Element> {
        ALL.into_iter().find(|g| g.name() == text)
    }
}

impl fmt::Display for D4Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Act on a parameter array by one symmetry element.
///
/// The three generators act by
///
/// * `d`: reverse `theta*`, and replace the split pair `(varphi, phi)` by
///   `(phi, varphi)` with both sequences reversed;
/// * `D`: reverse `theta`, and swap the split sequences without reversal;
/// * `s`: swap `theta` with `theta*`, keep `varphi`, reverse `phi`.
///
/// Outputs of valid inputs are again valid.
pub fn act(pa: &ParameterArray, g: D4Element) -> ParameterArray {
    let mut theta = pa.theta_seq().to_vec();
    let mut theta_star = pa.theta_star_seq().to_vec();
    let mut varphi = pa.varphi_seq().to_vec();
    let mut phi = pa.phi_seq().to_vec();
    if g.down {
        theta_star.reverse();
        std::mem::swap(&mut varphi, &mut phi);
        varphi.reverse();
        phi.reverse();
    }
    if g.ddown {
        theta.reverse();
        std::mem::swap(&mut varphi, &mut phi);
    }
    if g.star {
        std::mem::swap(&mut theta, &mut theta_star);
        phi.reverse();
    }
    ParameterArray::new(theta, theta_star, varphi, phi)
        .expect("symmetry action preserves the array shape")
}

/// The full orbit, keyed by the eight elements in canonical order.
///
/// Coincidences among entries (as with self-dual arrays) are preserved, not
/// deduplicated.
pub fn orbit(pa: &ParameterArray) -> Vec<(D4Element, ParameterArray)> {
    ALL.into_iter().map(|g| (g, act(pa, g))).collect()
}
