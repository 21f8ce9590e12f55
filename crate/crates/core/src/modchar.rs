//! Characters of Δ^p, ∇_p, Δ^red and ∇_red.

use std::sync::Arc;

use crate::characters::{frobenius_twist, tensor, FormalCharacter};
use crate::engine::{publish, Engine};
use crate::error::{Error, Result};
use crate::rootdata::Weight;

/// `λ = λ₀ + pλ₁` with `0 ≤ λ₀ᵢ < p`. For dominant `λ` both parts are dominant.
pub fn steinberg_decompose(lambda: &Weight, p: u32) -> (Weight, Weight) {
    let p = p as i64;
    let (l0, l1) = lambda.coords().iter().map(|&c| (c.rem_euclid(p), c.div_euclid(p))).unzip();
    (Weight::new(l0), Weight::new(l1))
}

impl Engine {
    /// ch L(λ₀) · χ(λ₁)^[1].
    pub fn ch_delta_p(&self, lambda: &Weight) -> Result<FormalCharacter> {
        self.rs.check_dominant(lambda)?;
        let (l0, l1) = steinberg_decompose(lambda, self.p);
        let l = self.ch_irreducible(&l0)?;
        if l1.is_zero() {
            return Ok((*l).clone());
        }
        tensor(&l, &frobenius_twist(&*self.weyl(&l1)?, self.p))
    }

    /// Same character as Δ^p.
    pub fn ch_nabla_p(&self, lambda: &Weight) -> Result<FormalCharacter> {
        self.ch_delta_p(lambda)
    }

    /// `χ_KL(λ₀) · χ(λ₁)^[1]`, checked against ch Δ^p(λ).
    pub fn ch_delta_red(&self, lambda: &Weight) -> Result<Arc<FormalCharacter>> {
        if let Some(c) = self.delta_red.get(lambda) {
            return Ok(c.clone());
        }
        self.rs.check_dominant(lambda)?;
        let (l0, l1) = steinberg_decompose(lambda, self.p);
        let restricted = self.expand(&*self.chi_kl(&l0)?)?;
        let ch = if l1.is_zero() {
            restricted
        } else {
            tensor(&restricted, &frobenius_twist(&*self.weyl(&l1)?, self.p))?
        };
        if ch != self.ch_delta_p(lambda)? {
            return Err(Error::Consistency(format!("ch Δ^red({lambda}) differs from ch Δ^p({lambda})")));
        }
        Ok(publish(&self.delta_red, lambda, ch))
    }

    /// Same character as Δ^red.
    pub fn ch_nabla_red(&self, lambda: &Weight) -> Result<Arc<FormalCharacter>> {
        self.ch_delta_red(lambda)
    }
}
