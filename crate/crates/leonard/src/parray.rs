//! Parameter arrays and their validation.
//!
//! A parameter array consists of a diameter `d >= 1`, eigenvalue sequences
//! `theta[0..=d]` and `theta*[0..=d]`, and split sequences `varphi[1..=d]`
//! and `phi[1..=d]`. A sequence of scalars is the parameter array of a
//! Leonard system exactly when the five conditions PA1-PA5 checked by
//! [`validate`] hold, and the array then determines the system up to
//! isomorphism. Indexing follows the sequences themselves: `theta` is
//! 0-based of length `d + 1`, the split sequences are 1-based of length `d`.

use std::fmt;

use thiserror::Error;

use crate::field::{FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParrayError {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("the two partial-sum ratios defining vartheta({index}) disagree")]
    VarthetaMismatch { index: usize },
    #[error("PA5 violation: the ratio at i={index} differs from the common value")]
    Pa5Violation { index: usize },
}

/// An immutable parameter array over one field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParameterArray {
    d: usize,
    theta: Vec<Scalar>,
    theta_star: Vec<Scalar>,
    varphi: Vec<Scalar>,
    phi: Vec<Scalar>,
}

impl ParameterArray {
    /// Assemble an array from its four sequences.
    ///
    /// Only shape is checked here (`d >= 1`, lengths `d+1, d+1, d, d`, one
    /// common field); run [`validate`] for the mathematical conditions.
    pub fn new(
        theta: Vec<Scalar>,
        theta_star: Vec<Scalar>,
        varphi: Vec<Scalar>,
        phi: Vec<Scalar>,
    ) -> Result<Self, ParrayError> {
        if theta.len() < 2 {
            return Err(ParrayError::Structural(
                "theta must have length d+1 with d >= 1".into(),
            ));
        }
        let d = theta.len() - 1;
        if theta_star.len() != d + 1 {
            return Err(ParrayError::Structural(format!(
                "theta* has length {}, expected {}",
                theta_star.len(),
                d + 1
            )));
        }
        if varphi.len() != d {
            return Err(ParrayError::Structural(format!(
                "varphi has length {}, expected {}",
                varphi.len(),
                d
            )));
        }
        if phi.len() != d {
            return Err(ParrayError::Structural(format!(
                "phi has length {}, expected {}",
                phi.len(),
                d
            )));
        }
        let field = theta[0].field();
        let same_field = theta
            .iter()
            .chain(&theta_star)
            .chain(&varphi)
            .chain(&phi)
            .all(|s| s.field() == field);
        if !same_field {
            return Err(ParrayError::Structural(
                "entries do not share a single field".into(),
            ));
        }
        Ok(ParameterArray {
            d,
            theta,
            theta_star,
            varphi,
            phi,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> FieldSpec {
        self.theta[0].field()
    }

    /// `theta_i` for `0 <= i <= d`.
    pub fn theta(&self, i: usize) -> &Scalar {
        &self.theta[i]
    }

    /// `theta*_i` for `0 <= i <= d`.
    pub fn theta_star(&self, i: usize) -> &Scalar {
        &self.theta_star[i]
    }

    /// `varphi_i` for `1 <= i <= d` (first split sequence).
    pub fn varphi(&self, i: usize) -> &Scalar {
        &self.varphi[i - 1]
    }

    /// `phi_i` for `1 <= i <= d` (second split sequence).
    pub fn phi(&self, i: usize) -> &Scalar {
        &self.phi[i - 1]
    }

    pub fn theta_seq(&self) -> &[Scalar] {
        &self.theta
    }

    pub fn theta_star_seq(&self) -> &[Scalar] {
        &self.theta_star
    }

    pub fn varphi_seq(&self) -> &[Scalar] {
        &self.varphi
    }

    pub fn phi_seq(&self) -> &[Scalar] {
        &self.phi
    }

    /// Shorthand for a fully validated array.
    pub fn is_valid(&self) -> bool {
        validate(self).all_pass()
    }
}

/// Verdict for a single validation condition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Pass,
    /// Failed, with the first witness.
    Fail(Witness),
    /// Not evaluable because an earlier condition it depends on failed.
    Skipped,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// The first witness of a failed condition: an index `i`, or a pair of
/// positions holding equal values where distinct ones are required.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Witness {
    Index(usize),
    Pair(usize, usize),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Index(i) => write!(f, "i={i}"),
            Witness::Pair(i, j) => write!(f, "({i},{j})"),
        }
    }
}

/// Per-condition outcome of [`validate`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ValidationReport {
    pub pa1: Verdict,
    pub pa2: Verdict,
    pub pa3: Verdict,
    pub pa4: Verdict,
    pub pa5: Verdict,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.iter().all(|(_, v)| v.passed())
    }

    /// The five verdicts with their condition names, in order.
    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &Verdict)> {
        [
            ("PA1", &self.pa1),
            ("PA2", &self.pa2),
            ("PA3", &self.pa3),
            ("PA4", &self.pa4),
            ("PA5", &self.pa5),
        ]
        .into_iter()
    }
}

/// Check the five parameter-array conditions.
///
/// PA1: every split-sequence entry is nonzero. PA2: the `theta` are mutually
/// distinct, and so are the `theta*`. PA3 and PA4 are the sum identities
/// tying the split sequences to the eigenvalue sequences. PA5 asks that the
/// three-term ratios of consecutive `theta` differences and of consecutive
/// `theta*` differences agree and are constant over `2 <= i <= d-1` (vacuous
/// for `d <= 2`). Conditions whose denominators a PA2 failure destroys are
/// reported as [`Verdict::Skipped`].
pub fn validate(pa: &ParameterArray) -> ValidationReport {
    let d = pa.d();

    let pa1 = (1..=d)
        .find(|&i| pa.varphi(i).is_zero() || pa.phi(i).is_zero())
        .map(|i| Verdict::Fail(Witness::Index(i)))
        .unwrap_or(Verdict::Pass);

    let mut pa2 = Verdict::Pass;
    'outer: for seq in [pa.theta_seq(), pa.theta_star_seq()] {
        for i in 0..=d {
            for j in (i + 1)..=d {
                if seq[i] == seq[j] {
                    pa2 = Verdict::Fail(Witness::Pair(i, j));
                    break 'outer;
                }
            }
        }
    }

    // PA3/PA4 need theta_0 != theta_d for their partial-sum denominators.
    let (pa3, pa4) = if pa.theta(0) == pa.theta(d) {
        (Verdict::Skipped, Verdict::Skipped)
    } else {
        let sums = fold_sums(pa.theta_seq(), d);
        let pa3 = (1..=d)
            .find(|&i| {
                let rhs = &(pa.phi(1) * &sums[i])
                    + &(&(pa.theta_star(i) - pa.theta_star(0))
                        * &(pa.theta(i - 1) - pa.theta(d)));
                pa.varphi(i) != &rhs
            })
            .map(|i| Verdict::Fail(Witness::Index(i)))
            .unwrap_or(Verdict::Pass);
        let pa4 = (1..=d)
            .find(|&i| {
                let rhs = &(pa.varphi(1) * &sums[i])
                    + &(&(pa.theta_star(i) - pa.theta_star(0))
                        * &(pa.theta(d - i + 1) - pa.theta(0)));
                pa.phi(i) != &rhs
            })
            .map(|i| Verdict::Fail(Witness::Index(i)))
            .unwrap_or(Verdict::Pass);
        (pa3, pa4)
    };

    let pa5 = validate_pa5(pa);

    ValidationReport {
        pa1,
        pa2,
        pa3,
        pa4,
        pa5,
    }
}

fn validate_pa5(pa: &ParameterArray) -> Verdict {
    let d = pa.d();
    if d <= 2 {
        return Verdict::Pass;
    }
    // Each ratio divides by a consecutive difference; a collision there is a
    // PA2 failure that makes PA5 unevaluable.
    for i in 1..=d {
        if pa.theta(i - 1) == pa.theta(i) || pa.theta_star(i - 1) == pa.theta_star(i) {
            return Verdict::Skipped;
        }
    }
    let ratio = |i: usize| -> (Scalar, Scalar) {
        let r = (pa.theta(i - 2) - pa.theta(i + 1)) / (pa.theta(i - 1) - pa.theta(i));
        let rs = (pa.theta_star(i - 2) - pa.theta_star(i + 1))
            / (pa.theta_star(i - 1) - pa.theta_star(i));
        (r, rs)
    };
    let (first, first_star) = ratio(2);
    if first != first_star {
        return Verdict::Fail(Witness::Index(2));
    }
    for i in 3..=(d - 1) {
        let (r, rs) = ratio(i);
        if r != first || rs != first {
            return Verdict::Fail(Witness::Index(i));
        }
    }
    Verdict::Pass
}

/// Partial sums `sums[i] = sum_{h<i} (seq_h - seq_{d-h}) / (seq_0 - seq_d)`
/// for `0 <= i <= d`; `sums[i]` is one side's candidate for `vartheta_i`.
fn fold_sums(seq: &[Scalar], d: usize) -> Vec<Scalar> {
    let denom = &seq[0] - &seq[d];
    let mut sums = Vec::with_capacity(d + 1);
    let mut acc = seq[0].field().zero();
    sums.push(acc.clone());
    for h in 0..d {
        acc = &acc + &(&(&seq[h] - &seq[d - h]) / &denom);
        sums.push(acc.clone());
    }
    sums
}

/// The common partial-sum ratio `vartheta_i` for `1 <= i <= d`.
///
/// Both the `theta`-side and the `theta*`-side sums are computed; they must
/// agree, which holds for every valid array. `vartheta_1 = 1` and
/// `vartheta_i = vartheta_{d-i+1}` always hold on success.
pub fn vartheta(pa: &ParameterArray, i: usize) -> Result<Scalar, ParrayError> {
    let d = pa.d();
    assert!((1..=d).contains(&i), "vartheta index out of range");
    if pa.theta(0) == pa.theta(d) || pa.theta_star(0) == pa.theta_star(d) {
        return Err(ParrayError::Structural(
            "vartheta requires theta_0 != theta_d and theta*_0 != theta*_d".into(),
        ));
    }
    let from_theta = &fold_sums(pa.theta_seq(), d)[i];
    let from_theta_star = &fold_sums(pa.theta_star_seq(), d)[i];
    if from_theta != from_theta_star {
        return Err(ParrayError::VarthetaMismatch { index: i });
    }
    Ok(from_theta.clone())
}

/// Location of a violated split-sequence identity: which of the eight
/// equations, and at which index.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SplitEquationViolation {
    pub equation: u8,
    pub index: usize,
}

/// Evaluate the eight split-sequence identities at every `1 <= i <= d`.
///
/// Valid arrays satisfy all eight; any reported violation signals invalid
/// input (or an implementation bug). Equation 1 restates PA3 via the
/// `vartheta` values, and the other seven are its images under the dihedral
/// symmetry.
pub fn check_split_equations(
    pa: &ParameterArray,
) -> Result<Vec<SplitEquationViolation>, ParrayError> {
    let d = pa.d();
    let mut violations = Vec::new();
    let mut vth = Vec::with_capacity(d + 1);
    vth.push(pa.field().zero()); // unused slot 0
    for i in 1..=d {
        vth.push(vartheta(pa, i)?);
    }
    let th = |i: usize| pa.theta(i);
    let ths = |i: usize| pa.theta_star(i);
    for i in 1..=d {
        let lhs_rhs: [(u8, &Scalar, Scalar); 8] = [
            (
                1,
                pa.varphi(i),
                &(pa.phi(1) * &vth[i]) + &(&(ths(i) - ths(0)) * &(th(i - 1) - th(d))),
            ),
            (
                2,
                pa.varphi(d - i + 1),
                &(pa.phi(1) * &vth[i]) + &(&(ths(d - i + 1) - ths(0)) * &(th(d - i) - th(d))),
            ),
            (
                3,
                pa.varphi(i),
                &(pa.phi(d) * &vth[i]) + &(&(th(i) - th(0)) * &(ths(i - 1) - ths(d))),
            ),
            (
                4,
                pa.varphi(d - i + 1),
                &(pa.phi(d) * &vth[i]) + &(&(th(d - i + 1) - th(0)) * &(ths(d - i) - ths(d))),
            ),
            (
                5,
                pa.phi(i),
                &(pa.varphi(1) * &vth[i]) + &(&(ths(i) - ths(0)) * &(th(d - i + 1) - th(0))),
            ),
            (
                6,
                pa.phi(d - i + 1),
                &(pa.varphi(1) * &vth[i]) + &(&(ths(d - i + 1) - ths(0)) * &(th(i) - th(0))),
            ),
            (
                7,
                pa.phi(i),
                &(pa.varphi(d) * &vth[i]) + &(&(th(d - i) - th(d)) * &(ths(i - 1) - ths(d))),
            ),
            (
                8,
                pa.phi(d - i + 1),
                &(pa.varphi(d) * &vth[i]) + &(&(th(i - 1) - th(d)) * &(ths(d - i) - ths(d))),
            ),
        ];
        for (eq, lhs, rhs) in lhs_rhs {
            if lhs != &rhs {
                violations.push(SplitEquationViolation {
                    equation: eq,
                    index: i,
                });
            }
        }
    }
    Ok(violations)
}

/// The common value of the PA5 ratios, defined for `d >= 3`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Beta {
    Value(Scalar),
    /// `d <= 2`: PA5 is vacuous and the value is unconstrained.
    Undetermined,
}

/// Extract the PA5 common ratio, verifying constancy across `i` and across
/// the starred/unstarred sides.
pub fn beta_common_value(pa: &ParameterArray) -> Result<Beta, ParrayError> {
    let d = pa.d();
    if d <= 2 {
        return Ok(Beta::Undetermined);
    }
    for i in 1..=d {
        if pa.theta(i - 1) == pa.theta(i) || pa.theta_star(i - 1) == pa.theta_star(i) {
            return Err(ParrayError::Structural(
                "PA5 ratios require consecutive entries to be distinct".into(),
            ));
        }
    }
    let mut common: Option<Scalar> = None;
    for i in 2..=(d - 1) {
        let r = (pa.theta(i - 2) - pa.theta(i + 1)) / (pa.theta(i - 1) - pa.theta(i));
        let rs = (pa.theta_star(i - 2) - pa.theta_star(i + 1))
            / (pa.theta_star(i - 1) - pa.theta_star(i));
        if r != rs {
            return Err(ParrayError::Pa5Violation { index: i });
        }
        match &common {
            None => common = Some(r),
            Some(c) if *c != r => return Err(ParrayError::Pa5Violation { index: i }),
            _ => {}
        }
    }
    Ok(Beta::Value(common.expect("d >= 3 yields at least one ratio")))
}
