//! Affine transformations of parameter arrays.
//!
//! An affine map is a quadruple `(xi, zeta, xi*, zeta*)` with `xi` and `xi*`
//! nonzero. It sends `theta` to `xi*theta + zeta`, `theta*` to
//! `xi**theta* + zeta*`, and scales both split sequences by `xi*xi*`. Two
//! arrays are *affine isomorphic* when some affine map carries one onto the
//! other; [`solve`] finds the unique candidate map in O(d) and verifies it
//! entrywise.

use std::fmt;

use thiserror::Error;

use crate::field::{FieldSpec, Scalar};
use crate::parray::ParameterArray;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AffineError {
    #[error("xi and xi* must be nonzero")]
    ZeroScale,
    #[error("map components belong to different fields")]
    FieldMismatch,
}

/// An invertible affine transformation `(xi, zeta, xi*, zeta*)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineMap {
    xi: Scalar,
    zeta: Scalar,
    xi_star: Scalar,
    zeta_star: Scalar,
}

impl AffineMap {
    pub fn new(
        xi: Scalar,
        zeta: Scalar,
        xi_star: Scalar,
        zeta_star: Scalar,
    ) -> Result<Self, AffineError> {
        if xi.is_zero() || xi_star.is_zero() {
            return Err(AffineError::ZeroScale);
        }
        let field = xi.field();
        if zeta.field() != field || xi_star.field() != field || zeta_star.field() != field {
            return Err(AffineError::FieldMismatch);
        }
        Ok(AffineMap {
            xi,
            zeta,
            xi_star,
            zeta_star,
        })
    }

    pub fn identity(field: &FieldSpec) -> Self {
        AffineMap {
            xi: field.one(),
            zeta: field.zero(),
            xi_star: field.one(),
            zeta_star: field.zero(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.xi.is_one() && self.zeta.is_zero() && self.xi_star.is_one() && self.zeta_star.is_zero()
    }

    pub fn xi(&self) -> &Scalar {
        &self.xi
    }

    pub fn zeta(&self) -> &Scalar {
        &self.zeta
    }

    pub fn xi_star(&self) -> &Scalar {
        &self.xi_star
    }

    pub fn zeta_star(&self) -> &Scalar {
        &self.zeta_star
    }

    /// The inverse map `(1/xi, -zeta/xi, 1/xi*, -zeta*/xi*)`.
    pub fn inverse(&self) -> AffineMap {
        let xi_inv = self.xi.inv().expect("xi is nonzero");
        let xi_star_inv = self.xi_star.inv().expect("xi* is nonzero");
        AffineMap {
            zeta: &self.zeta.neg_value() * &xi_inv,
            zeta_star: &self.zeta_star.neg_value() * &xi_star_inv,
            xi: xi_inv,
            xi_star: xi_star_inv,
        }
    }

    /// Exchange the starred and unstarred halves.
    pub fn swap_halves(&self) -> AffineMap {
        AffineMap {
            xi: self.xi_star.clone(),
            zeta: self.zeta_star.clone(),
            xi_star: self.xi.clone(),
            zeta_star: self.zeta.clone(),
        }
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}, {}, {}]",
            self.xi, self.zeta, self.xi_star, self.zeta_star
        )
    }
}

/// Apply an affine map to a parameter array. Valid inputs give valid outputs.
pub fn apply(pa: &ParameterArray, m: &AffineMap) -> ParameterArray {
    let scale = &m.xi * &m.xi_star;
    let theta = pa
        .theta_seq()
        .iter()
        .map(|t| &(&m.xi * t) + &m.zeta)
        .collect();
    let theta_star = pa
        .theta_star_seq()
        .iter()
        .map(|t| &(&m.xi_star * t) + &m.zeta_star)
        .collect();
    let varphi = pa.varphi_seq().iter().map(|v| &scale * v).collect();
    let phi = pa.phi_seq().iter().map(|v| &scale * v).collect();
    ParameterArray::new(theta, theta_star, varphi, phi)
        .expect("affine image preserves the array shape")
}

/// The unique affine map with `apply(src, m) = dst`, if one exists.
///
/// The candidate is read off from the first two entries of each eigenvalue
/// sequence (`d >= 1` guarantees two distinct values) and then verified on
/// every entry of all four sequences. `None` when the arrays live over
/// different fields or have different diameters.
pub fn solve(src: &ParameterArray, dst: &ParameterArray) -> Option<AffineMap> {
    if src.d() != dst.d() || src.field() != dst.field() {
        return None;
    }
    let xi = &(dst.theta(1) - dst.theta(0)) / &(src.theta(1) - src.theta(0));
    let zeta = dst.theta(0) - &(&xi * src.theta(0));
    let xi_star = &(dst.theta_star(1) - dst.theta_star(0))
        / &(src.theta_star(1) - src.theta_star(0));
    let zeta_star = dst.theta_star(0) - &(&xi_star * src.theta_star(0));
    let m = AffineMap::new(xi, zeta, xi_star, zeta_star).ok()?;
    if &apply(src, &m) == dst {
        Some(m)
    } else {
        None
    }
}

/// Whether two valid arrays are affine isomorphic. The relation is an
/// equivalence: reflexive, symmetric (the witnessing maps are mutually
/// inverse), and transitive.
pub fn is_affine_isomorphic(a: &ParameterArray, b: &ParameterArray) -> bool {
    solve(b, a).is_some()
}
