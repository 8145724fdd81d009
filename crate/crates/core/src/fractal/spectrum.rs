//! Closed-form multifractal spectra of stable and stable-like occupation
//! measures, including the case analysis at exceptional values.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::index::{IndexSet, Mode};
use crate::error::{param, Error, Result};
use crate::process::{BetaFunction, JumpPath};

/// A dimension value: a finite number or `−∞`, which stands for the
/// dimension of the empty set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DimValue {
    NegInfinity,
    Finite(f64),
}

impl DimValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            DimValue::Finite(x) => Some(x),
            DimValue::NegInfinity => None,
        }
    }

    pub fn is_neg_infinity(self) -> bool {
        matches!(self, DimValue::NegInfinity)
    }

    /// Divides a finite value by `d > 0`; `−∞` stays `−∞`.
    pub fn scale_down(self, d: f64) -> Self {
        match self {
            DimValue::Finite(x) => DimValue::Finite(x / d),
            DimValue::NegInfinity => DimValue::NegInfinity,
        }
    }
}

/// `-inf` for `−∞`, otherwise the number with 17 significant digits.
impl fmt::Display for DimValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimValue::NegInfinity => f.write_str("-inf"),
            DimValue::Finite(x) => write!(f, "{x:.16e}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct DimValueRepr {
    value: Option<f64>,
    neg_inf: bool,
}

/// Serialised as `{"value": x, "neg_inf": false}` or
/// `{"value": null, "neg_inf": true}`.
impl Serialize for DimValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DimValueRepr {
            value: self.finite(),
            neg_inf: self.is_neg_infinity(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DimValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DimValueRepr::deserialize(d)?;
        match (r.neg_inf, r.value) {
            (true, None) => Ok(DimValue::NegInfinity),
            (false, Some(x)) => Ok(DimValue::Finite(x)),
            _ => Err(serde::de::Error::custom(
                "exactly one of `value` and `neg_inf` must be set",
            )),
        }
    }
}

/// The closed spectrum `g_α` or its half-open version `ĝ_α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `α(2α/h − 1)` on `[α, 2α]`.
    Closed,
    /// The same on `[α, 2α)`.
    HalfOpen,
}

/// `g_α(h)` or `ĝ_α(h)`.
pub fn g_spectrum(alpha: f64, h: f64, variant: Variant) -> DimValue {
    let inside = match variant {
        Variant::Closed => h >= alpha && h <= 2.0 * alpha,
        Variant::HalfOpen => h >= alpha && h < 2.0 * alpha,
    };
    if inside && h > 0.0 {
        DimValue::Finite(alpha * (2.0 * alpha / h - 1.0))
    } else {
        DimValue::NegInfinity
    }
}

/// How a spectrum value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumCase {
    /// Envelope over a non-empty admissible index set.
    Regular,
    /// No admissible index.
    Empty,
    /// `h = 2·sup I`: the half-open envelope is `−∞` while the closed
    /// formula at `α = sup I` would give 0. Reported separately so callers
    /// can route it through the exceptional-case evaluator.
    DoublingBoundary,
    /// One of the three branches of the exceptional-value analysis.
    Exceptional(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumValue {
    pub h: f64,
    pub value: DimValue,
    pub case: SpectrumCase,
    /// Index at which the supremum is reached.
    pub alpha_star: Option<f64>,
}

/// Upper spectrum as the supremum of `ĝ_α(h)` (space) or `ĝ_α(h)/α` (time)
/// over `α ∈ I`.
///
/// `ĝ_α(h)` is finite exactly for `α ∈ (h/2, h]`, where both objectives
/// increase with `α`, so the supremum sits at `α* = sup(I ∩ (h/2, h])`.
pub fn spectrum_envelope(h: f64, set: &IndexSet, mode: Mode) -> SpectrumValue {
    let alpha_star = if h > 0.0 { set.sup_in(h / 2.0, h) } else { None };
    match alpha_star {
        Some(a) => {
            let time = 2.0 * a / h - 1.0;
            let value = match mode {
                Mode::Space => a * time,
                Mode::Time => time,
            };
            SpectrumValue {
                h,
                value: DimValue::Finite(value),
                case: SpectrumCase::Regular,
                alpha_star: Some(a),
            }
        }
        None => {
            let case = match set.sup() {
                Some(s) if h == 2.0 * s && set.contains(s) => SpectrumCase::DoublingBoundary,
                _ => SpectrumCase::Empty,
            };
            SpectrumValue {
                h,
                value: DimValue::NegInfinity,
                case,
                alpha_star: None,
            }
        }
    }
}

/// Lower spectrum: `0` when `h` is one of the indices, `−∞` otherwise.
///
/// Space-mode sets from [`super::index_range`] are already closed; time-mode
/// sets only hold attained indices.
pub fn lower_spectrum(h: f64, set: &IndexSet) -> DimValue {
    if set.contains(h) {
        DimValue::Finite(0.0)
    } else {
        DimValue::NegInfinity
    }
}

/// A jump whose index at least doubles: `β(ℳ_τ) ≥ 2β(ℳ_{τ−})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalJump {
    pub tau: f64,
    pub level_before: f64,
    pub level_after: f64,
    pub beta_before: f64,
    pub beta_after: f64,
    /// `β(ℳ_τ) = 2β(ℳ_{τ−})` exactly.
    pub equality: bool,
}

impl ExceptionalJump {
    /// Element of `ℰ₁` (and of `ℰ′`).
    pub fn e1(&self) -> f64 {
        self.beta_after
    }

    /// Element of `ℰ₂`.
    pub fn e2(&self) -> f64 {
        2.0 * self.beta_before
    }
}

/// All jumps of `path` that at least double the index. `ℰ₁ = ℰ′` is the set
/// of their `β(ℳ_τ)` and `ℰ₂` the set of their `2β(ℳ_{τ−})`.
pub fn exceptional_sets(path: &JumpPath, beta: &BetaFunction) -> Vec<ExceptionalJump> {
    let mut out = Vec::new();
    let mut before = 0.0;
    let mut b_before = beta.eval(0.0);
    for (&tau, &after) in path.jump_times().iter().zip(path.values_after()) {
        let b_after = beta.eval(after);
        if b_after >= 2.0 * b_before {
            out.push(ExceptionalJump {
                tau,
                level_before: before,
                level_after: after,
                beta_before: b_before,
                beta_after: b_after,
                equality: b_after == 2.0 * b_before,
            });
        }
        before = after;
        b_before = b_after;
    }
    out
}

/// Inputs of the exceptional-value analysis at one doubling jump `τ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalCase {
    pub h: f64,
    pub beta_before: f64,
    pub beta_after: f64,
    /// `ℳ_{τ−} ∈ 𝒪`.
    pub before_in_window: bool,
    /// `ℳ_τ ∈ 𝒪`.
    pub after_in_window: bool,
    /// Upper local dimension of `μ` at `ℳ_{τ−}`, when measured.
    pub dim_before: Option<f64>,
    /// Upper local dimension of `μ` at `ℳ_τ`, when measured.
    pub dim_after: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExceptionalBranch {
    /// `h = β(ℳ_τ) > 2β(ℳ_{τ−})`.
    AfterStrict,
    /// `h = 2β(ℳ_{τ−}) < β(ℳ_τ)`.
    BeforeStrict,
    /// `h = β(ℳ_τ) = 2β(ℳ_{τ−})`.
    Equality,
}

impl ExceptionalBranch {
    fn number(self) -> u8 {
        match self {
            ExceptionalBranch::AfterStrict => 1,
            ExceptionalBranch::BeforeStrict => 2,
            ExceptionalBranch::Equality => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalOutcome {
    pub branch: ExceptionalBranch,
    pub space: SpectrumValue,
    /// Space value divided by `β(ℳ_{τ−})`.
    pub time: SpectrumValue,
}

fn need(dim: Option<f64>, which: &str) -> Result<f64> {
    dim.ok_or_else(|| Error::Inconsistent(format!("upper dimension at {which} is required")))
}

/// Space and time upper spectra at an exceptional value `h`.
///
/// Comparisons of `h` with the indices and with the measured dimensions use
/// the absolute tolerance `tol`. A measured dimension on the side the theory
/// excludes (for instance below `h` at `ℳ_τ` in the first branch) is
/// reported as an inconsistency.
pub fn exceptional_value(case: &ExceptionalCase, tol: f64) -> Result<ExceptionalOutcome> {
    let c = case;
    if !(c.beta_before > 0.0 && c.beta_after > 0.0) {
        return param("beta", "indices must be positive");
    }
    let eq = |a: f64, b: f64| (a - b).abs() <= tol;
    let doubled = 2.0 * c.beta_before;
    let branch = if eq(c.beta_after, doubled) && eq(c.h, c.beta_after) {
        ExceptionalBranch::Equality
    } else if c.beta_after > doubled && eq(c.h, c.beta_after) {
        ExceptionalBranch::AfterStrict
    } else if c.beta_after > doubled && eq(c.h, doubled) {
        ExceptionalBranch::BeforeStrict
    } else {
        return Err(Error::Inconsistent(format!(
            "h = {} is not an exceptional value of a jump from index {} to {}",
            c.h, c.beta_before, c.beta_after
        )));
    };
    let zero = DimValue::Finite(0.0);
    let none = DimValue::NegInfinity;
    // Side tests: `at` means equal to h, `above`/`below` strictly away.
    let after_side = |d: f64| -> Result<DimValue> {
        if eq(d, c.h) {
            Ok(zero)
        } else if d > c.h {
            Ok(none)
        } else {
            Err(Error::Inconsistent(format!(
                "upper dimension {d} at the post-jump level is below h = {}",
                c.h
            )))
        }
    };
    let before_side = |d: f64| -> Result<DimValue> {
        if eq(d, c.h) {
            Ok(zero)
        } else if d < c.h {
            Ok(none)
        } else {
            Err(Error::Inconsistent(format!(
                "upper dimension {d} at the pre-jump level is above h = {}",
                c.h
            )))
        }
    };
    let value = match branch {
        ExceptionalBranch::AfterStrict => {
            if c.after_in_window {
                after_side(need(c.dim_after, "the post-jump level")?)?
            } else {
                none
            }
        }
        ExceptionalBranch::BeforeStrict => {
            if c.before_in_window {
                before_side(need(c.dim_before, "the pre-jump level")?)?
            } else {
                none
            }
        }
        ExceptionalBranch::Equality => match (c.before_in_window, c.after_in_window) {
            (true, true) => {
                let b = before_side(need(c.dim_before, "the pre-jump level")?)?;
                let a = after_side(need(c.dim_after, "the post-jump level")?)?;
                if a == zero || b == zero {
                    zero
                } else {
                    none
                }
            }
            (true, false) => before_side(need(c.dim_before, "the pre-jump level")?)?,
            (false, true) => after_side(need(c.dim_after, "the post-jump level")?)?,
            (false, false) => none,
        },
    };
    let tag = SpectrumCase::Exceptional(branch.number());
    let make = |v: DimValue| SpectrumValue {
        h: c.h,
        value: v,
        case: tag,
        alpha_star: None,
    };
    Ok(ExceptionalOutcome {
        branch,
        space: make(value),
        time: make(value.scale_down(c.beta_before)),
    })
}

/// `2/Υ_min − 1` for `Υ_min ∈ [1, 2]`.
pub fn general_spectrum_value(upsilon_min: f64) -> Result<f64> {
    if !(1.0..=2.0).contains(&upsilon_min) {
        return param("upsilon_min", format!("must lie in [1, 2], got {upsilon_min}"));
    }
    Ok(2.0 / upsilon_min - 1.0)
}

/// The profile `t ↦ h/β(ℳ_t)` sampled at `times`.
pub fn upsilon_profile(
    path: &JumpPath,
    beta: &BetaFunction,
    h: f64,
    times: &[f64],
) -> Result<Vec<f64>> {
    times
        .iter()
        .map(|&t| path.eval(t).map(|v| h / beta.eval(v)))
        .collect()
}
