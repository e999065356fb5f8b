//! Exact field arithmetic over the rationals, prime fields GF(p), and one
//! quadratic extension layer.
//!
//! Every [`Scalar`] is a self-describing immutable value in canonical form:
//! rationals are reduced fractions with positive denominator, prime-field
//! elements are least nonnegative residues, and extension elements are pairs
//! `(a, b)` standing for `a + b*w` where `w` generates the extension. Over a
//! base of characteristic other than two, `w = sqrt(D)` for a non-square
//! discriminant `D`; over GF(2) the adjoined generator satisfies
//! `w^2 = w + D` instead, which is the only way a degree-two extension of
//! GF(2) can exist (every element of GF(2) is already a square).

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

/// Errors produced by field construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("discriminant {0} does not generate an extension (the defining quadratic has a root in the base field)")]
    ReducibleExtension(String),
    #[error("extensions of an extension field are not supported")]
    TowerUnsupported,
    #[error("cannot parse scalar: {0}")]
    Parse(String),
}

/// Description of a supported field: the rationals, GF(p), or a quadratic
/// extension of one of those.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
    QuadExt {
        base: Box<FieldSpec>,
        disc: Box<Scalar>,
    },
}

impl FieldSpec {
    /// The field of rational numbers.
    pub fn rationals() -> Self {
        FieldSpec::Rationals
    }

    /// GF(p). Fails unless `p` is prime.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if is_prime_u64(p) {
            Ok(FieldSpec::PrimeField(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    /// A quadratic extension of `base` indexed by the discriminant `disc`.
    ///
    /// In characteristic other than two the generator is `sqrt(disc)`, so
    /// `disc` must be a non-square. Over GF(2) the generator satisfies
    /// `w^2 = w + disc`, so `disc` must give an irreducible `x^2 - x - disc`;
    /// the only choice is `disc = 1`, which yields GF(4).
    pub fn quad_ext(base: FieldSpec, disc: Scalar) -> Result<Self, FieldError> {
        if matches!(base, FieldSpec::QuadExt { .. }) {
            return Err(FieldError::TowerUnsupported);
        }
        if disc.field() != base {
            return Err(FieldError::FieldMismatch);
        }
        let reducible = if base.characteristic() == 2 {
            // x^2 - x - disc splits over GF(2) unless disc = 1.
            !disc.is_one()
        } else {
            disc.is_zero() || disc.sqrt().is_some()
        };
        if reducible {
            return Err(FieldError::ReducibleExtension(disc.to_string()));
        }
        Ok(FieldSpec::QuadExt {
            base: Box::new(base),
            disc: Box::new(disc),
        })
    }

    /// The characteristic, with 0 for the rationals.
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => *p,
            FieldSpec::QuadExt { base, .. } => base.characteristic(),
        }
    }

    pub fn is_extension(&self) -> bool {
        matches!(self, FieldSpec::QuadExt { .. })
    }

    /// The base field of an extension, or the field itself.
    pub fn base(&self) -> &FieldSpec {
        match self {
            FieldSpec::QuadExt { base, .. } => base,
            other => other,
        }
    }

    /// The discriminant indexing an extension field.
    pub fn discriminant(&self) -> Option<&Scalar> {
        match self {
            FieldSpec::QuadExt { disc, .. } => Some(disc),
            _ => None,
        }
    }

    /// The additive identity.
    pub fn zero(&self) -> Scalar {
        self.from_int(0)
    }

    /// The multiplicative identity.
    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    /// The image of the integer `n` in this field.
    pub fn from_int(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::PrimeField(p) => Scalar::Prime {
                value: reduce_i64(n, *p),
                modulus: *p,
            },
            FieldSpec::QuadExt { base, disc } => Scalar::ext(
                base.from_int(n),
                base.from_int(0),
                (**disc).clone(),
            ),
        }
    }

    /// The exact rational `n/d` mapped into this field.
    ///
    /// Fails with [`FieldError::DivisionByZero`] when `d` vanishes in the
    /// field (for GF(p) that includes any `d` divisible by `p`).
    pub fn from_ratio(&self, n: i64, d: i64) -> Result<Scalar, FieldError> {
        self.from_int(n).checked_div(&self.from_int(d))
    }

    /// Embed a base-field scalar into this extension field.
    pub fn lift(&self, s: &Scalar) -> Result<Scalar, FieldError> {
        match self {
            FieldSpec::QuadExt { base, disc } => {
                if s.field() != **base {
                    return Err(FieldError::FieldMismatch);
                }
                Ok(Scalar::ext(s.clone(), base.from_int(0), (**disc).clone()))
            }
            _ => Err(FieldError::FieldMismatch),
        }
    }

    /// Parse a scalar in the canonical text encoding of this field.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar, FieldError> {
        parse_scalar(self, text)
    }

    /// Parse a field description in the canonical token encoding
    /// (`q`, `gf <p>`, `q ext <D>`, `gf <p> ext <D>`).
    pub fn parse(text: &str) -> Result<FieldSpec, FieldError> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let bad = || FieldError::Parse(format!("malformed field description `{text}`"));
        let (base, rest) = match tokens.as_slice() {
            ["q", rest @ ..] => (FieldSpec::Rationals, rest),
            ["gf", p, rest @ ..] => {
                let p: u64 = p.parse().map_err(|_| bad())?;
                (FieldSpec::prime(p)?, rest)
            }
            _ => return Err(bad()),
        };
        match rest {
            [] => Ok(base),
            ["ext", d] => {
                let disc = base.parse_scalar(d)?;
                FieldSpec::quad_ext(base, disc)
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "q"),
            FieldSpec::PrimeField(p) => write!(f, "gf {p}"),
            FieldSpec::QuadExt { base, disc } => write!(f, "{base} ext {disc}"),
        }
    }
}

/// An exact field element in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
    Ext(Box<ExtScalar>),
}

/// An element `a + b*w` of a quadratic extension.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExtScalar {
    pub a: Scalar,
    pub b: Scalar,
    pub disc: Scalar,
}

/// The four basic arithmetic operations accepted by [`Scalar::arith`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Result of [`solve_quadratic`]: either the roots inside the field, or the
/// discriminant of the quadratic extension that would contain them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum QuadraticRoots {
    /// One entry for a double root, two (in canonical order) otherwise.
    Roots(Vec<Scalar>),
    /// No root in the field; adjoining the given discriminant to the field
    /// (via [`FieldSpec::quad_ext`]) yields both roots.
    ExtensionRequired { disc: Scalar },
}

impl Scalar {
    fn ext(a: Scalar, b: Scalar, disc: Scalar) -> Scalar {
        Scalar::Ext(Box::new(ExtScalar { a, b, disc }))
    }

    /// The field this scalar belongs to.
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Prime { modulus, .. } => FieldSpec::PrimeField(*modulus),
            Scalar::Ext(e) => FieldSpec::QuadExt {
                base: Box::new(e.a.field()),
                disc: Box::new(e.disc.clone()),
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
            Scalar::Ext(e) => e.a.is_zero() && e.b.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
            Scalar::Ext(e) => e.a.is_one() && e.b.is_zero(),
        }
    }

    /// Whether the element lies in the base field of its extension
    /// (its `b` component vanishes). Base-field scalars answer true.
    pub fn is_in_base(&self) -> bool {
        match self {
            Scalar::Ext(e) => e.b.is_zero(),
            _ => true,
        }
    }

    /// Retract an extension element with vanishing `b` component back into
    /// the base field. The identity on base-field scalars.
    pub fn retract(&self) -> Option<Scalar> {
        match self {
            Scalar::Ext(e) if e.b.is_zero() => Some(e.a.clone()),
            Scalar::Ext(_) => None,
            other => Some(other.clone()),
        }
    }

    /// Checked arithmetic entry point covering all four basic operations.
    pub fn arith(a: &Scalar, b: &Scalar, op: ArithOp) -> Result<Scalar, FieldError> {
        match op {
            ArithOp::Add => a.checked_add(b),
            ArithOp::Sub => a.checked_sub(b),
            ArithOp::Mul => a.checked_mul(b),
            ArithOp::Div => a.checked_div(b),
        }
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar, FieldError> {
        match (self, rhs) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Ok(Scalar::Rational(x + y)),
            (
                Scalar::Prime { value: x, modulus: p },
                Scalar::Prime { value: y, modulus: q },
            ) if p == q => Ok(Scalar::Prime {
                value: add_mod(*x, *y, *p),
                modulus: *p,
            }),
            (Scalar::Ext(x), Scalar::Ext(y)) if x.disc == y.disc => Ok(Scalar::ext(
                x.a.checked_add(&y.a)?,
                x.b.checked_add(&y.b)?,
                x.disc.clone(),
            )),
            _ => Err(FieldError::FieldMismatch),
        }
    }

    pub fn checked_sub(&self, rhs: &Scalar) -> Result<Scalar, FieldError> {
        self.checked_add(&rhs.neg_value())
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar, FieldError> {
        match (self, rhs) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Ok(Scalar::Rational(x * y)),
            (
                Scalar::Prime { value: x, modulus: p },
                Scalar::Prime { value: y, modulus: q },
            ) if p == q => Ok(Scalar::Prime {
                value: mul_mod(*x, *y, *p),
                modulus: *p,
            }),
            (Scalar::Ext(x), Scalar::Ext(y)) if x.disc == y.disc => {
                // (a + b w)(c + d w) with w^2 = u w + v.
                let (u, v) = ext_minpoly(&x.disc);
                let bd = x.b.checked_mul(&y.b)?;
                let a = x.a.checked_mul(&y.a)?.checked_add(&bd.checked_mul(&v)?)?;
                let mut b = x
                    .a
                    .checked_mul(&y.b)?
                    .checked_add(&x.b.checked_mul(&y.a)?)?;
                if u {
                    b = b.checked_add(&bd)?;
                }
                Ok(Scalar::ext(a, b, x.disc.clone()))
            }
            _ => Err(FieldError::FieldMismatch),
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, FieldError> {
        if self.field() != rhs.field() {
            return Err(FieldError::FieldMismatch);
        }
        self.checked_mul(&rhs.inv()?)
    }

    /// Additive inverse.
    pub fn neg_value(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
            Scalar::Ext(e) => Scalar::ext(e.a.neg_value(), e.b.neg_value(), e.disc.clone()),
        }
    }

    /// Multiplicative inverse; fails on zero.
    pub fn inv(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        match self {
            Scalar::Rational(r) => Ok(Scalar::Rational(r.recip())),
            Scalar::Prime { value, modulus } => Ok(Scalar::Prime {
                // Fermat: value^(p-2) mod p.
                value: pow_mod(*value, *modulus - 2, *modulus),
                modulus: *modulus,
            }),
            Scalar::Ext(e) => {
                // conj / norm, with conj(a + b w) = (a + u b) - b w and
                // norm = a^2 + u a b - v b^2, nonzero by irreducibility.
                let (u, v) = ext_minpoly(&e.disc);
                let mut conj_a = e.a.clone();
                if u {
                    conj_a = conj_a.checked_add(&e.b)?;
                }
                let norm = conj_a
                    .checked_mul(&e.a)?
                    .checked_sub(&v.checked_mul(&e.b.checked_mul(&e.b)?)?)?;
                let ninv = norm.inv()?;
                Ok(Scalar::ext(
                    conj_a.checked_mul(&ninv)?,
                    e.b.neg_value().checked_mul(&ninv)?,
                    e.disc.clone(),
                ))
            }
        }
    }

    /// Integer power, with negative exponents via the inverse.
    pub fn pow(&self, exp: i64) -> Result<Scalar, FieldError> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = self.field().one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.checked_mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// A square root inside the field, canonically chosen, or `None`.
    pub fn sqrt(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(r) => {
                if r.is_negative() {
                    return None;
                }
                let sn = exact_int_sqrt(r.numer())?;
                let sd = exact_int_sqrt(r.denom())?;
                Some(Scalar::Rational(BigRational::new(sn, sd)))
            }
            Scalar::Prime { value, modulus } => {
                if *modulus == 2 {
                    return Some(self.clone());
                }
                let r = sqrt_mod(*value, *modulus)?;
                Some(Scalar::Prime {
                    value: r.min(if r == 0 { 0 } else { modulus - r }),
                    modulus: *modulus,
                })
            }
            Scalar::Ext(e) => {
                if e.a.field().characteristic() == 2 {
                    // In GF(4) squaring is the Frobenius, so sqrt(z) = z^2.
                    return self.checked_mul(self).ok();
                }
                let root = ext_sqrt(e)?;
                let neg = root.neg_value();
                Some(if root.canonical_cmp(&neg) == Ordering::Greater {
                    neg
                } else {
                    root
                })
            }
        }
    }

    /// A total order on scalars of one field, used only to make reported
    /// lists and chosen roots deterministic. For the rationals it is the
    /// numeric order; elsewhere it orders canonical representations.
    ///
    /// # Panics
    /// Panics when the scalars belong to different fields.
    pub fn canonical_cmp(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Rational(x), Scalar::Rational(y)) => x.cmp(y),
            (
                Scalar::Prime { value: x, modulus: p },
                Scalar::Prime { value: y, modulus: q },
            ) if p == q => x.cmp(y),
            (Scalar::Ext(x), Scalar::Ext(y)) if x.disc == y.disc => x
                .a
                .canonical_cmp(&y.a)
                .then_with(|| x.b.canonical_cmp(&y.b)),
            _ => panic!("canonical_cmp across distinct fields"),
        }
    }

    /// A uniformly seeded small scalar, used by the generators.
    pub fn random<R: Rng + ?Sized>(spec: &FieldSpec, rng: &mut R) -> Scalar {
        match spec {
            FieldSpec::Rationals => {
                let n = rng.random_range(-12i64..=12);
                let d = rng.random_range(1i64..=4);
                Scalar::Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
            }
            FieldSpec::PrimeField(p) => Scalar::Prime {
                value: rng.random_range(0..*p),
                modulus: *p,
            },
            FieldSpec::QuadExt { base, disc } => Scalar::ext(
                Scalar::random(base, rng),
                Scalar::random(base, rng),
                (**disc).clone(),
            ),
        }
    }
}

/// The minimal-polynomial shape of the extension generator: `w^2 = u w + v`
/// with `u = 0` in characteristic other than two (`w = sqrt(v)`) and `u = 1`
/// over GF(2).
fn ext_minpoly(disc: &Scalar) -> (bool, Scalar) {
    (disc.field().characteristic() == 2, disc.clone())
}

/// Square root of `a + b*sqrt(D)` in characteristic != 2, if one exists.
fn ext_sqrt(e: &ExtScalar) -> Option<Scalar> {
    let base = e.a.field();
    let two = base.from_int(2);
    if e.b.is_zero() {
        if let Some(s) = e.a.sqrt() {
            return Some(Scalar::ext(s, base.zero(), e.disc.clone()));
        }
        // a = y^2 D for some base y gives sqrt(a) = y w.
        let y2 = e.a.checked_div(&e.disc).ok()?;
        let y = y2.sqrt()?;
        return Some(Scalar::ext(base.zero(), y, e.disc.clone()));
    }
    // (x + y w)^2 = a + b w forces 2xy = b and x^2 solving a quadratic whose
    // discriminant is the norm a^2 - b^2 D.
    let norm = e
        .a
        .checked_mul(&e.a)
        .ok()?
        .checked_sub(&e.disc.checked_mul(&e.b.checked_mul(&e.b).ok()?).ok()?)
        .ok()?;
    let s = norm.sqrt()?;
    for cand in [e.a.checked_add(&s).ok()?, e.a.checked_sub(&s).ok()?] {
        let x2 = cand.checked_div(&two).ok()?;
        if x2.is_zero() {
            continue;
        }
        if let Some(x) = x2.sqrt() {
            let y = e.b.checked_div(&two.checked_mul(&x).ok()?).ok()?;
            let root = Scalar::ext(x, y, e.disc.clone());
            if root.checked_mul(&root).ok()? == Scalar::Ext(Box::new(e.clone())) {
                return Some(root);
            }
        }
    }
    None
}

/// Roots of `x^2 + b x + c` over the common field of `b` and `c`.
///
/// In characteristic two a direct path is used: with `b = 0` the Frobenius
/// supplies the (double) root, and otherwise the field is one of the tiny
/// char-2 fields supported here, so the roots are found by enumeration.
pub fn solve_quadratic(b: &Scalar, c: &Scalar) -> Result<QuadraticRoots, FieldError> {
    let field = b.field();
    if c.field() != field {
        return Err(FieldError::FieldMismatch);
    }
    if field.characteristic() == 2 {
        if b.is_zero() {
            // x^2 = c has the unique root sqrt(c).
            let r = c.sqrt().expect("char-2 sqrt is total");
            return Ok(QuadraticRoots::Roots(vec![r]));
        }
        let mut roots: Vec<Scalar> = enumerate_char2_field(&field)
            .into_iter()
            .filter(|x| {
                let val = x
                    .checked_mul(x)
                    .and_then(|x2| x2.checked_add(&b.checked_mul(x).unwrap()))
                    .and_then(|s| s.checked_add(c))
                    .unwrap();
                val.is_zero()
            })
            .collect();
        if roots.is_empty() {
            // Artin-Schreier reduction x = b y turns the equation into
            // y^2 + y + c/b^2 = 0, so c/b^2 indexes the splitting extension.
            let disc = c.checked_div(&b.checked_mul(b)?)?;
            return Ok(QuadraticRoots::ExtensionRequired { disc });
        }
        roots.sort_by(Scalar::canonical_cmp);
        return Ok(QuadraticRoots::Roots(roots));
    }
    let two = field.from_int(2);
    let four = field.from_int(4);
    let disc = b
        .checked_mul(b)?
        .checked_sub(&four.checked_mul(c)?)?;
    if disc.is_zero() {
        let root = b.neg_value().checked_div(&two)?;
        return Ok(QuadraticRoots::Roots(vec![root]));
    }
    match disc.sqrt() {
        Some(s) => {
            let mut roots = vec![
                b.neg_value().checked_add(&s)?.checked_div(&two)?,
                b.neg_value().checked_sub(&s)?.checked_div(&two)?,
            ];
            roots.sort_by(Scalar::canonical_cmp);
            Ok(QuadraticRoots::Roots(roots))
        }
        None => Ok(QuadraticRoots::ExtensionRequired { disc }),
    }
}

/// All elements of GF(2) or GF(4); only called on char-2 fields, which are
/// the one place the library needs to enumerate a field.
fn enumerate_char2_field(field: &FieldSpec) -> Vec<Scalar> {
    match field {
        FieldSpec::PrimeField(2) => vec![field.from_int(0), field.from_int(1)],
        FieldSpec::QuadExt { base, disc } if base.characteristic() == 2 => {
            let mut out = Vec::with_capacity(4);
            for a in 0..2 {
                for b in 0..2 {
                    out.push(Scalar::ext(
                        base.from_int(a),
                        base.from_int(b),
                        (**disc).clone(),
                    ));
                }
            }
            out
        }
        _ => panic!("enumeration is only supported for char-2 fields"),
    }
}

// ---------------------------------------------------------------------------
// Operator impls. These panic on field mismatch, which always indicates a
// caller bug; fallible paths go through the checked_* methods.
// ---------------------------------------------------------------------------

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $checked:ident, $msg:expr) => {
        impl std::ops::$trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).expect($msg)
            }
        }
        impl std::ops::$trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl std::ops::$trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, checked_add, "scalar addition across fields");
scalar_binop!(Sub, sub, checked_sub, "scalar subtraction across fields");
scalar_binop!(Mul, mul, checked_mul, "scalar multiplication across fields");
scalar_binop!(Div, div, checked_div, "scalar division by zero or across fields");

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_value()
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_value()
    }
}

// ---------------------------------------------------------------------------
// Text encoding.
// ---------------------------------------------------------------------------

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Prime { value, .. } => write!(f, "{value}"),
            Scalar::Ext(e) => {
                let gen = ext_generator_name(&e.disc);
                if e.b.is_zero() {
                    return write!(f, "{}", e.a);
                }
                let (sign, mag) = signed_magnitude(&e.b);
                if e.a.is_zero() {
                    if sign {
                        write!(f, "-{mag}*{gen}")
                    } else {
                        write!(f, "{mag}*{gen}")
                    }
                } else {
                    write!(f, "{}{}{mag}*{gen}", e.a, if sign { "-" } else { "+" })
                }
            }
        }
    }
}

fn ext_generator_name(disc: &Scalar) -> String {
    if disc.field().characteristic() == 2 {
        "w".to_string()
    } else {
        format!("sqrt({disc})")
    }
}

/// Split a base scalar into (is_negative, magnitude-printed-form); prime
/// residues are never negative.
fn signed_magnitude(s: &Scalar) -> (bool, String) {
    match s {
        Scalar::Rational(r) if r.is_negative() => {
            (true, Scalar::Rational(-r.clone()).to_string())
        }
        _ => (false, s.to_string()),
    }
}

fn parse_scalar(spec: &FieldSpec, text: &str) -> Result<Scalar, FieldError> {
    let text = text.trim();
    let err = |msg: &str| FieldError::Parse(format!("`{text}`: {msg}"));
    if text.is_empty() {
        return Err(err("empty scalar"));
    }
    match spec {
        FieldSpec::Rationals => parse_rational(text),
        FieldSpec::PrimeField(p) => parse_residue(text, *p),
        FieldSpec::QuadExt { base, disc } => {
            let gen = ext_generator_name(disc);
            let mut a = base.zero();
            let mut b = base.zero();
            let mut seen_gen = false;
            let mut seen_base = false;
            for (negated, term) in split_terms(text).ok_or_else(|| err("malformed sum"))? {
                let value = if let Some(coeff) = term.strip_suffix(&format!("*{gen}")) {
                    if seen_gen {
                        return Err(err("repeated extension term"));
                    }
                    seen_gen = true;
                    let c = base.parse_scalar(coeff)?;
                    b = if negated { &b - &c } else { &b + &c };
                    continue;
                } else {
                    base.parse_scalar(&term)?
                };
                if seen_base {
                    return Err(err("repeated base term"));
                }
                seen_base = true;
                a = if negated { &a - &value } else { &a + &value };
            }
            Ok(Scalar::ext(a, b, (**disc).clone()))
        }
    }
}

/// Split "1-3/2*sqrt(5)" into sign-tagged top-level terms, respecting
/// parentheses and treating a leading '-' as part of the first term.
fn split_terms(text: &str) -> Option<Vec<(bool, String)>> {
    let mut terms = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    let mut negated = false;
    for (i, ch) in text.chars().enumerate() {
        match ch {
            '(' => {
                depth += 1;
                current.push(ch);
            }
            ')' => {
                depth = depth.checked_sub(1)?;
                current.push(ch);
            }
            '+' | '-' if depth == 0 && i > 0 => {
                if current.is_empty() {
                    return None;
                }
                terms.push((negated, std::mem::take(&mut current)));
                negated = ch == '-';
            }
            '-' if depth == 0 && i == 0 => current.push(ch),
            _ => current.push(ch),
        }
    }
    if depth != 0 || current.is_empty() {
        return None;
    }
    terms.push((negated, current));
    Some(terms)
}

fn parse_rational(text: &str) -> Result<Scalar, FieldError> {
    let err = || FieldError::Parse(format!("`{text}` is not a rational literal"));
    let (n, d) = match text.split_once('/') {
        None => (text, "1"),
        Some((n, d)) => (n, d),
    };
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(FieldError::DivisionByZero);
    }
    Ok(Scalar::Rational(BigRational::new(n, d)))
}

fn parse_residue(text: &str, p: u64) -> Result<Scalar, FieldError> {
    let err = || FieldError::Parse(format!("`{text}` is not an integer residue"));
    let n: i128 = text.parse().map_err(|_| err())?;
    let p128 = p as i128;
    Ok(Scalar::Prime {
        value: (n.rem_euclid(p128)) as u64,
        modulus: p,
    })
}

// ---------------------------------------------------------------------------
// Integer helpers.
// ---------------------------------------------------------------------------

fn reduce_i64(n: i64, p: u64) -> u64 {
    (n as i128).rem_euclid(p as i128) as u64
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, valid for all u64.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == small {
            return true;
        }
        if n.is_multiple_of(small) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn exact_int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Tonelli-Shanks square root mod an odd prime; `None` for non-residues.
fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
            if i == m {
                return None;
            }
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}
