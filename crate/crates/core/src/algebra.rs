//! Commutator algebra of linear forms in canonical operators.
//!
//! A [`LinearForm`] is `sum_k a_k X_k + b_k P_k` over `n` modes with
//! `[X_j, P_k] = i delta_jk`. The commutator of two such forms is always a
//! multiple of the identity, `[L1, L2] = i c`, with `c` given by the
//! symplectic form of the coefficient vectors. All checks here are exact
//! when the coefficients are rationals.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::AlgebraScalar;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearForm<S> {
    x_coeffs: Vec<S>,
    p_coeffs: Vec<S>,
    label: Option<String>,
}

impl<S: AlgebraScalar> LinearForm<S> {
    pub fn new(x_coeffs: Vec<S>, p_coeffs: Vec<S>) -> Result<Self> {
        if x_coeffs.len() != p_coeffs.len() {
            return Err(Error::Dimension {
                left: x_coeffs.len(),
                right: p_coeffs.len(),
            });
        }
        if x_coeffs.is_empty() {
            return Err(Error::invalid("a linear form needs at least one mode"));
        }
        Ok(Self {
            x_coeffs,
            p_coeffs,
            label: None,
        })
    }

    pub fn zero(n_modes: usize) -> Self {
        Self {
            x_coeffs: vec![S::zero(); n_modes],
            p_coeffs: vec![S::zero(); n_modes],
            label: None,
        }
    }

    /// `X_mode` (zero-based mode index).
    pub fn position(mode: usize, n_modes: usize) -> Self {
        assert!(
            mode < n_modes,
            "mode {mode} out of range for {n_modes} modes"
        );
        let mut form = Self::zero(n_modes);
        form.x_coeffs[mode] = S::one();
        form
    }

    /// `P_mode` (zero-based mode index).
    pub fn momentum(mode: usize, n_modes: usize) -> Self {
        assert!(
            mode < n_modes,
            "mode {mode} out of range for {n_modes} modes"
        );
        let mut form = Self::zero(n_modes);
        form.p_coeffs[mode] = S::one();
        form
    }

    /// Single-mode quadrature `alpha X + beta P`.
    pub fn quadrature(alpha: S, beta: S) -> Self {
        Self {
            x_coeffs: vec![alpha],
            p_coeffs: vec![beta],
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn n_modes(&self) -> usize {
        self.x_coeffs.len()
    }

    pub fn x_coeffs(&self) -> &[S] {
        &self.x_coeffs
    }

    pub fn p_coeffs(&self) -> &[S] {
        &self.p_coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.x_coeffs
            .iter()
            .chain(self.p_coeffs.iter())
            .all(|c| c.is_zero())
    }

    /// `(alpha, beta)` of a one-mode form, `None` for multi-mode forms.
    pub fn single_mode(&self) -> Option<(S, S)> {
        (self.n_modes() == 1).then(|| (self.x_coeffs[0].clone(), self.p_coeffs[0].clone()))
    }

    /// Coefficient-wise sum. The result carries no label.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: &S) -> Self {
        Self {
            x_coeffs: self
                .x_coeffs
                .iter()
                .map(|c| c.clone() * factor.clone())
                .collect(),
            p_coeffs: self
                .p_coeffs
                .iter()
                .map(|c| c.clone() * factor.clone())
                .collect(),
            label: None,
        }
    }

    /// Coefficient equality, ignoring labels.
    pub fn same_operator(&self, other: &Self) -> bool {
        self.x_coeffs == other.x_coeffs && self.p_coeffs == other.p_coeffs
    }

    /// Restriction to one mode, as a single-mode form.
    pub fn mode_part(&self, mode: usize) -> Self {
        Self::quadrature(self.x_coeffs[mode].clone(), self.p_coeffs[mode].clone())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(S, S) -> S) -> Result<Self> {
        check_modes(self, other)?;
        let x = self
            .x_coeffs
            .iter()
            .zip(&other.x_coeffs)
            .map(|(a, b)| f(a.clone(), b.clone()))
            .collect();
        let p = self
            .p_coeffs
            .iter()
            .zip(&other.p_coeffs)
            .map(|(a, b)| f(a.clone(), b.clone()))
            .collect();
        Ok(Self {
            x_coeffs: x,
            p_coeffs: p,
            label: None,
        })
    }

    /// Renders the coefficients, e.g. `X1 - X2 + P1 + P2`.
    pub fn expression(&self) -> String {
        let mut out = String::new();
        let terms = self
            .x_coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| (c, format!("X{}", k + 1)))
            .chain(
                self.p_coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| (c, format!("P{}", k + 1))),
            );
        for (coeff, name) in terms {
            if coeff.is_zero() {
                continue;
            }
            let negative = coeff.to_f64().map(|v| v < 0.0).unwrap_or(false);
            let magnitude = if negative {
                -coeff.clone()
            } else {
                coeff.clone()
            };
            let body = if magnitude.is_one() {
                name
            } else {
                format!("{magnitude} {name}")
            };
            match (out.is_empty(), negative) {
                (true, false) => out.push_str(&body),
                (true, true) => {
                    out.push('-');
                    out.push_str(&body);
                }
                (false, false) => {
                    out.push_str(" + ");
                    out.push_str(&body);
                }
                (false, true) => {
                    out.push_str(" - ");
                    out.push_str(&body);
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl<S: AlgebraScalar> fmt::Display for LinearForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(label) => f.write_str(label),
            None => f.write_str(&self.expression()),
        }
    }
}

fn check_modes<S: AlgebraScalar>(l1: &LinearForm<S>, l2: &LinearForm<S>) -> Result<()> {
    if l1.n_modes() != l2.n_modes() {
        return Err(Error::Dimension {
            left: l1.n_modes(),
            right: l2.n_modes(),
        });
    }
    Ok(())
}

/// The scalar `c` with `[l1, l2] = i c`: `sum_k a1_k b2_k - b1_k a2_k`.
pub fn commutator_coefficient<S: AlgebraScalar>(
    l1: &LinearForm<S>,
    l2: &LinearForm<S>,
) -> Result<S> {
    check_modes(l1, l2)?;
    let mut c = S::zero();
    for k in 0..l1.n_modes() {
        c = c + l1.x_coeffs[k].clone() * l2.p_coeffs[k].clone()
            - l1.p_coeffs[k].clone() * l2.x_coeffs[k].clone();
    }
    Ok(c)
}

/// A pair of context members that fails to commute.
#[derive(Debug, Clone, PartialEq)]
pub struct OffendingPair<S> {
    pub first: usize,
    pub second: usize,
    pub coefficient: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContextCheck<S> {
    pub commuting: bool,
    pub offending_pairs: Vec<OffendingPair<S>>,
}

/// Checks every pair of `members` for a vanishing commutator.
pub fn is_context<S: AlgebraScalar>(members: &[LinearForm<S>]) -> Result<ContextCheck<S>> {
    let first = members
        .first()
        .ok_or_else(|| Error::invalid("a context needs at least one member"))?;
    for m in members {
        check_modes(first, m)?;
        if m.is_zero() {
            return Err(Error::invalid(format!(
                "zero operator `{m}` cannot be a context member"
            )));
        }
    }
    let mut offending_pairs = Vec::new();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let c = commutator_coefficient(&members[i], &members[j])?;
            if !c.is_zero() {
                offending_pairs.push(OffendingPair {
                    first: i,
                    second: j,
                    coefficient: c,
                });
            }
        }
    }
    Ok(ContextCheck {
        commuting: offending_pairs.is_empty(),
        offending_pairs,
    })
}

/// A named set of mutually commuting forms. Construction verifies the
/// commutation; [`ContextSet::unchecked`] exists for reporting on sets that
/// are expected to fail.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextSet<S> {
    name: String,
    members: Vec<LinearForm<S>>,
}

impl<S: AlgebraScalar> ContextSet<S> {
    pub fn new(name: impl Into<String>, members: Vec<LinearForm<S>>) -> Result<Self> {
        let name = name.into();
        let check = is_context(&members)?;
        if let Some(pair) = check.offending_pairs.first() {
            return Err(Error::invalid(format!(
                "context `{name}`: `{}` and `{}` do not commute (c = {})",
                members[pair.first], members[pair.second], pair.coefficient
            )));
        }
        Ok(Self { name, members })
    }

    pub fn unchecked(name: impl Into<String>, members: Vec<LinearForm<S>>) -> Self {
        Self {
            name: name.into(),
            members,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn members(&self) -> &[LinearForm<S>] {
        &self.members
    }

    /// Sum of all members.
    pub fn sum(&self) -> Result<LinearForm<S>> {
        let mut acc = LinearForm::zero(self.members.first().map_or(0, |m| m.n_modes()));
        for m in &self.members {
            acc = acc.checked_add(m)?;
        }
        Ok(acc)
    }

    pub fn report(&self) -> Result<ContextReport> {
        let check = is_context(&self.members)?;
        Ok(ContextReport {
            context_name: self.name.clone(),
            members: self.members.iter().map(|m| m.to_string()).collect(),
            commuting: check.commuting,
            offending_pairs: check
                .offending_pairs
                .iter()
                .map(|p| OffendingPairReport {
                    first: self.members[p.first].to_string(),
                    second: self.members[p.second].to_string(),
                    coefficient: p.coefficient.to_f64().unwrap_or(f64::NAN),
                    coefficient_exact: p.coefficient.to_string(),
                })
                .collect(),
        })
    }
}

/// Serializable verification record for one context.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContextReport {
    pub context_name: String,
    pub members: Vec<String>,
    pub commuting: bool,
    pub offending_pairs: Vec<OffendingPairReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OffendingPairReport {
    pub first: String,
    pub second: String,
    pub coefficient: f64,
    pub coefficient_exact: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fig1Variant {
    #[default]
    Standard,
    /// Adds the alternative top line `{X1 + P2, X1, P2, X1 - P2}`.
    AltTop,
}

/// The operator nodes of the two-mode commuting diagram, labelled.
pub struct Fig1Operators<S> {
    pub x1_minus_x2: LinearForm<S>,
    pub x1: LinearForm<S>,
    pub x2: LinearForm<S>,
    pub x1_plus_x2: LinearForm<S>,
    pub p1_plus_p2: LinearForm<S>,
    pub p1: LinearForm<S>,
    pub p2: LinearForm<S>,
    pub p1_minus_p2: LinearForm<S>,
    pub a: LinearForm<S>,
    pub b: LinearForm<S>,
}

fn form2<S: AlgebraScalar>(x: [i8; 2], p: [i8; 2], label: &str) -> LinearForm<S> {
    let conv = |v: i8| -> S {
        let mut s = S::zero();
        for _ in 0..v.unsigned_abs() {
            s = s + S::one();
        }
        if v < 0 {
            -s
        } else {
            s
        }
    };
    LinearForm::new(
        x.iter().map(|&v| conv(v)).collect(),
        p.iter().map(|&v| conv(v)).collect(),
    )
    .expect("two-mode literal")
    .with_label(label)
}

impl<S: AlgebraScalar> Fig1Operators<S> {
    pub fn new() -> Self {
        Self {
            x1_minus_x2: form2([1, -1], [0, 0], "X1-X2"),
            x1: form2([1, 0], [0, 0], "X1"),
            x2: form2([0, 1], [0, 0], "X2"),
            x1_plus_x2: form2([1, 1], [0, 0], "X1+X2"),
            p1_plus_p2: form2([0, 0], [1, 1], "P1+P2"),
            p1: form2([0, 0], [1, 0], "P1"),
            p2: form2([0, 0], [0, 1], "P2"),
            p1_minus_p2: form2([0, 0], [1, -1], "P1-P2"),
            a: form2([1, -1], [1, 1], "A"),
            b: form2([1, 1], [1, -1], "B"),
        }
    }

    /// The five contexts as unverified sets, so that callers may corrupt a
    /// member before checking.
    pub fn raw_contexts(&self) -> Vec<ContextSet<S>> {
        vec![
            ContextSet::unchecked(
                "top",
                vec![
                    self.x1_minus_x2.clone(),
                    self.x1.clone(),
                    self.x2.clone(),
                    self.x1_plus_x2.clone(),
                ],
            ),
            ContextSet::unchecked(
                "bottom",
                vec![
                    self.p1_plus_p2.clone(),
                    self.p1.clone(),
                    self.p2.clone(),
                    self.p1_minus_p2.clone(),
                ],
            ),
            ContextSet::unchecked(
                "left",
                vec![
                    self.x1_minus_x2.clone(),
                    self.a.clone(),
                    self.p1_plus_p2.clone(),
                ],
            ),
            ContextSet::unchecked(
                "right",
                vec![
                    self.x1_plus_x2.clone(),
                    self.b.clone(),
                    self.p1_minus_p2.clone(),
                ],
            ),
            ContextSet::unchecked("middle", vec![self.a.clone(), self.b.clone()]),
        ]
    }
}

impl<S: AlgebraScalar> Default for Fig1Operators<S> {
    fn default() -> Self {
        Self::new()
    }
}

/// The alternative top line `{X1 + P2, X1, P2, X1 - P2}`.
pub fn alt_top_context<S: AlgebraScalar>() -> Result<ContextSet<S>> {
    ContextSet::new(
        "alt-top",
        vec![
            form2([1, 0], [0, 1], "X1+P2"),
            form2([1, 0], [0, 0], "X1"),
            form2([0, 0], [0, 1], "P2"),
            form2([1, 0], [0, -1], "X1-P2"),
        ],
    )
}

/// The verified contexts of the two-mode diagram: top, bottom, left, right,
/// middle, plus the alternative top line for [`Fig1Variant::AltTop`].
pub fn fig1_contexts<S: AlgebraScalar>(variant: Fig1Variant) -> Vec<ContextSet<S>> {
    let ops = Fig1Operators::<S>::new();
    let mut out: Vec<ContextSet<S>> = ops
        .raw_contexts()
        .into_iter()
        .map(|c| {
            ContextSet::new(c.name.clone(), c.members)
                .expect("diagram contexts commute by construction")
        })
        .collect();
    if variant == Fig1Variant::AltTop {
        out.push(alt_top_context().expect("alternative top line commutes"));
    }
    out
}

/// Distinct operator labels appearing across `contexts`.
pub fn distinct_labels<S: AlgebraScalar>(contexts: &[ContextSet<S>]) -> BTreeSet<String> {
    contexts
        .iter()
        .flat_map(|c| c.members.iter().map(|m| m.to_string()))
        .collect()
}

/// Splits a single-mode target `alpha X1 + beta P1` into two commuting
/// two-mode summands, using mode 2 as an ancilla.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionWitness<S> {
    pub target: LinearForm<S>,
    pub summand_a: LinearForm<S>,
    pub summand_b: LinearForm<S>,
    pub ancilla_gamma: S,
    pub ancilla_delta: S,
}

impl<S: AlgebraScalar> DecompositionWitness<S> {
    /// Re-derives both invariants: the summands add up to the target and
    /// commute.
    pub fn verify(&self) -> Result<bool> {
        let sum = self.summand_a.checked_add(&self.summand_b)?;
        let c = commutator_coefficient(&self.summand_a, &self.summand_b)?;
        Ok(sum.same_operator(&self.target) && c.is_zero())
    }
}

/// `A = (alpha/2) X1 - gamma X2 + (beta/2) P1 + delta P2` and
/// `B = (alpha/2) X1 + gamma X2 + (beta/2) P1 - delta P2`.
///
/// `[A, B] = i (alpha beta / 4 + gamma delta - alpha beta / 4 - gamma delta) = 0`
/// for every choice of the ancilla coefficients.
pub fn commuting_decomposition<S: AlgebraScalar>(
    alpha: S,
    beta: S,
    gamma: S,
    delta: S,
) -> Result<DecompositionWitness<S>> {
    if alpha.is_zero() && beta.is_zero() {
        return Err(Error::invalid("target alpha X + beta P must be nonzero"));
    }
    let two = S::one() + S::one();
    let half_alpha = alpha.clone() / two.clone();
    let half_beta = beta.clone() / two;
    let summand_a = LinearForm::new(
        vec![half_alpha.clone(), -gamma.clone()],
        vec![half_beta.clone(), delta.clone()],
    )?
    .with_label("A");
    let summand_b = LinearForm::new(
        vec![half_alpha, gamma.clone()],
        vec![half_beta, -delta.clone()],
    )?
    .with_label("B");
    let target = LinearForm::new(vec![alpha, S::zero()], vec![beta, S::zero()])?;
    Ok(DecompositionWitness {
        target,
        summand_a,
        summand_b,
        ancilla_gamma: gamma,
        ancilla_delta: delta,
    })
}
