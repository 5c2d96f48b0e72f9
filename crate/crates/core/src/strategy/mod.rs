//! The horoball-avoidance strategy, its explicit constants, and the
//! badly-approximable verifiers.
//!
//! Alice probes the geodesic ray toward the center of Bob's ball at time
//! `t_i = −log_a ρ_i`. If the probe lies in a horoball based at `ξ_i` she
//! deletes `B(ξ_i, βρ_i)`; otherwise she deletes a ball disjoint from Bob's.

mod avoidance;
mod ba;
mod experiment;

pub use avoidance::{alice_move, HoroballAvoidance, StrategyError, TreeAvoidance};
pub use ba::{continued_fraction, verify_ba_ford, verify_family, BAWitness, ContinuedFraction, FamilyWitness, QuadraticSurd, RealNumber};
pub use experiment::{
    q_for_radius, run_ba_experiment, run_tree_experiment, tree_exact_exponent, verify_tree_outcome, ExperimentConfig, ExperimentError,
    ExperimentOutcome, TreeOutcome, TreeViolation,
};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConstantError {
    #[error("{name} = {value} outside {range}")]
    Domain { name: &'static str, value: f64, range: &'static str },
}

/// `c = β / (C · 4δ · a) · e^{−δ}`, or the tree substitute when `δ = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StrategyConstant {
    pub value: f64,
    /// Set when `δ = 0` made the closed form undefined and the tree-exact
    /// substitute `β` was used instead.
    pub tree_mode: bool,
}

fn check(name: &'static str, value: f64, ok: bool, range: &'static str) -> Result<(), ConstantError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(ConstantError::Domain { name, value, range })
    }
}

pub fn strategy_constant(beta: f64, delta: f64, visual_c: f64, a: f64) -> Result<StrategyConstant, ConstantError> {
    check("beta", beta, beta > 0.0 && beta < 1.0 / 3.0, "(0, 1/3)")?;
    check("delta", delta, delta >= 0.0, "[0, inf)")?;
    check("C", visual_c, visual_c >= 1.0, "[1, inf)")?;
    check("a", a, a > 1.0, "(1, inf)")?;
    if delta == 0.0 {
        return Ok(StrategyConstant {
            value: beta,
            tree_mode: true,
        });
    }
    Ok(StrategyConstant {
        value: beta / (visual_c * 4.0 * delta * a) * (-delta).exp(),
        tree_mode: false,
    })
}

/// Everything entering the guaranteed constant `s` of a play.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrategyConstants {
    pub beta: f64,
    pub delta: f64,
    pub visual_c: f64,
    pub visual_a: f64,
    pub c: StrategyConstant,
    /// Opening radius.
    pub rho1: f64,
    /// Largest shadow radius in the family.
    pub r1: f64,
    pub terms: BoundTerms,
    pub s_lower: f64,
}

/// The closed-form candidates for `s`. The far-from-shadow bound comes in
/// two forms, `c/(2C)·e^{−4δ}` and `c/(2C)·e^{−δ}`; both are kept and the
/// minimum of everything is used.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundTerms {
    pub far_from_shadow: f64,
    pub far_from_shadow_alt: f64,
    pub opening: f64,
    pub later_rounds: f64,
}

impl BoundTerms {
    pub fn min(&self) -> f64 {
        self.far_from_shadow
            .min(self.far_from_shadow_alt)
            .min(self.opening)
            .min(self.later_rounds)
    }
}

impl StrategyConstants {
    pub fn new(beta: f64, delta: f64, visual_c: f64, a: f64, rho1: f64, r1: f64) -> Result<Self, ConstantError> {
        let c = strategy_constant(beta, delta, visual_c, a)?;
        check("rho1", rho1, rho1 > 0.0, "(0, inf)")?;
        check("R1", r1, r1 > 0.0, "(0, inf)")?;
        let terms = if c.tree_mode {
            // exact tree chain: see `tree_exact_exponent`
            let t = a * beta * beta;
            BoundTerms {
                far_from_shadow: 1.0,
                far_from_shadow_alt: 1.0,
                opening: beta * rho1 / r1,
                later_rounds: t,
            }
        } else {
            let base = c.value / (2.0 * visual_c);
            BoundTerms {
                far_from_shadow: base * (-4.0 * delta).exp(),
                far_from_shadow_alt: base * (-delta).exp(),
                opening: beta * rho1 / r1,
                later_rounds: beta * beta / (visual_c * 4.0 * delta * a) * (-delta).exp(),
            }
        };
        Ok(StrategyConstants {
            beta,
            delta,
            visual_c,
            visual_a: a,
            c,
            rho1,
            r1,
            terms,
            s_lower: terms.min(),
        })
    }
}

/// The guaranteed constant `s` for a play opened at radius `ρ₁`.
pub fn ba_lower_bound(constants: &StrategyConstants) -> f64 {
    constants.terms.min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn constant_example() {
        let c = strategy_constant(0.1, 1.0, 1.0, E).unwrap();
        assert!(!c.tree_mode);
        assert!((c.value - 0.003_383_382_080_915_318).abs() < 1e-15);
        assert!(strategy_constant(0.1, 0.0, 1.0, E).unwrap().tree_mode);
        assert!(strategy_constant(0.4, 1.0, 1.0, E).is_err());
        assert!(strategy_constant(0.1, 1.0, 0.5, E).is_err());
    }

    #[test]
    fn bound_is_below_opening_term() {
        let k = StrategyConstants::new(0.1, 1.0, 1.0, E, 0.25, 1.0).unwrap();
        assert!(ba_lower_bound(&k) <= 0.1 * 0.25);
        assert!(ba_lower_bound(&k) > 0.0);
    }
}
