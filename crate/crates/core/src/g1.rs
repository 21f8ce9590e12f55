//! Characters of G₁T-modules: baby Verma modules, the injective hulls `Q̂₁(λ₀)`
//! via Brauer reciprocity, and the Q♯ characters built from them.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::characters::{frobenius_twist, peel, tensor, FormalCharacter, PeelScope, TieBreak};
use crate::engine::{publish, Engine};
use crate::error::{Error, Result};
use crate::modchar::steinberg_decompose;
use crate::rootdata::{RootSystem, Weight};

/// Largest reciprocity scan accepted by `q1_hat_char`.
pub const RECIPROCITY_SCAN_CAP: usize = 1 << 20;

/// `e(μ) · Π_{α>0} (1 + e(−α) + … + e(−(p−1)α))`.
pub fn baby_verma_char(rs: &RootSystem, mu: &Weight, p: u32) -> Result<FormalCharacter> {
    rs.check_weight(mu)?;
    let t = rs.cartan_type();
    let mut c = FormalCharacter::monomial(t, mu.clone(), 1);
    for alpha in rs.positive_root_weights() {
        let string = FormalCharacter::from_terms(t, (0..p as i64).map(|k| (alpha.scale(-k), 1)));
        c = tensor(&c, &string)?;
    }
    Ok(c)
}

/// `ν = ν₀ + pν₁` with `ν₀` restricted, for arbitrary (not necessarily dominant) `ν`.
fn split(nu: &Weight, p: u32) -> (Weight, Weight) {
    steinberg_decompose(nu, p)
}

impl Engine {
    /// ch L̂₁(ν) = ch L(ν₀) · e(pν₁).
    pub fn g1t_simple_char(&self, nu: &Weight) -> Result<FormalCharacter> {
        let (n0, n1) = split(nu, self.p);
        Ok(self.ch_irreducible(&n0)?.shift(&n1.scale(self.p as i64)))
    }

    /// Composition multiplicities `[c : L̂₁(ν)]` of a G₁T character, highest first.
    pub fn decompose_g1t(&self, c: &FormalCharacter) -> Result<Vec<(Weight, i64)>> {
        self.check_type(c.cartan_type())?;
        let pairs = peel(&self.rs, c, PeelScope::All, TieBreak::default(), |nu| {
            self.g1t_simple_char(nu).map(Arc::new)
        })?;
        if let Some((nu, m)) = pairs.iter().find(|(_, m)| *m < 0) {
            return Err(Error::NegativeMultiplicity {
                context: "G₁T composition factors",
                lambda: pairs[0].0.clone(),
                weight: nu.clone(),
                multiplicity: *m,
            });
        }
        Ok(pairs)
    }

    /// Composition factors of `Ẑ₁(μ)`, from those of `Ẑ₁(μ₀)` shifted by `pμ₁`.
    fn baby_verma_factors(&self, mu: &Weight) -> Result<Vec<(Weight, i64)>> {
        let (m0, m1) = split(mu, self.p);
        let base = match self.baby_verma_factors.get(&m0) {
            Some(f) => f.clone(),
            None => {
                let f = self.decompose_g1t(&baby_verma_char(&self.rs, &m0, self.p)?)?;
                publish(&self.baby_verma_factors, &m0, f)
            }
        };
        let shift = m1.scale(self.p as i64);
        Ok(base.iter().map(|(nu, m)| (nu + &shift, *m)).collect())
    }

    /// `2(p−1)ρ + w₀λ₀`, the highest weight of `Q̂₁(λ₀)`.
    pub fn q1_hat_top_weight(&self, lambda0: &Weight) -> Weight {
        &self.rs.rho().scale(2 * (self.p as i64 - 1)) + &self.rs.apply_w0(lambda0)
    }

    /// `(Q̂₁(λ₀) : Ẑ₁(μ)) = [Ẑ₁(μ) : L̂₁(λ₀)]` for every `μ`, highest first.
    ///
    /// A factor `L̂₁(λ₀)` of `Ẑ₁(μ)` needs `λ₀` in the support of `Ẑ₁(μ)`, so
    /// `μ` ranges over the support of `e(λ₀) Π_{α>0}(1 + e(α) + … + e((p−1)α))`,
    /// which is the support of `Ẑ₁(λ₀ + 2(p−1)ρ)`.
    pub fn q1_hat_verma_multiplicities(&self, lambda0: &Weight) -> Result<Vec<(Weight, i64)>> {
        self.rs.check_dominant(lambda0)?;
        if !lambda0.is_restricted(self.p) {
            return Err(Error::NotRestricted(lambda0.clone(), self.p));
        }
        let span = (self.p as usize).checked_pow(self.rs.num_positive_roots() as u32);
        if span.map_or(true, |s| s > RECIPROCITY_SCAN_CAP) {
            return Err(Error::CapExceeded { what: "reciprocity scan", cap: RECIPROCITY_SCAN_CAP });
        }
        let corner = lambda0 + &self.rs.rho().scale(2 * (self.p as i64 - 1));
        let region = baby_verma_char(&self.rs, &corner, self.p)?;
        let mut out = BTreeMap::new();
        for mu in region.weights() {
            let m: i64 = self
                .baby_verma_factors(mu)?
                .iter()
                .filter(|(nu, _)| nu == lambda0)
                .map(|(_, m)| *m)
                .sum();
            if m != 0 {
                out.insert(mu.clone(), m);
            }
        }
        let mut v: Vec<(Weight, i64)> = out.into_iter().collect();
        v.sort_by(|a, b| self.rs.scaled_height(&b.0).cmp(&self.rs.scaled_height(&a.0)).then_with(|| b.0.cmp(&a.0)));
        Ok(v)
    }

    /// ch Q̂₁(λ₀) by Brauer reciprocity; the highest weight is checked to be
    /// `2(p−1)ρ + w₀λ₀` with multiplicity 1.
    pub fn q1_hat_char(&self, lambda0: &Weight) -> Result<Arc<FormalCharacter>> {
        if let Some(c) = self.q1_hat.get(lambda0) {
            return Ok(c.clone());
        }
        let mults = self.q1_hat_verma_multiplicities(lambda0)?;
        if !mults.iter().any(|(mu, m)| mu == lambda0 && *m == 1) {
            return Err(Error::Consistency(format!("Q̂₁({lambda0}) does not contain Ẑ₁({lambda0}) exactly once")));
        }
        let mut ch = FormalCharacter::zero(self.cartan_type());
        for (mu, m) in &mults {
            ch.add_scaled(&baby_verma_char(&self.rs, mu, self.p)?, *m)?;
        }
        let top = self.q1_hat_top_weight(lambda0);
        let ht = self.rs.scaled_height(&top);
        if ch.get(&top) != 1 || ch.weights().any(|w| w != &top && self.rs.scaled_height(w) >= ht) {
            return Err(Error::Consistency(format!("Q̂₁({lambda0}) does not have highest weight {top}")));
        }
        Ok(publish(&self.q1_hat, lambda0, ch))
    }

    /// ch Q̂₁(λ₀) · χ(λ₁)^[1].
    pub fn q_sharp_char(&self, lambda: &Weight) -> Result<FormalCharacter> {
        self.rs.check_dominant(lambda)?;
        let (l0, l1) = steinberg_decompose(lambda, self.p);
        let q = self.q1_hat_char(&l0)?;
        if l1.is_zero() {
            return Ok((*q).clone());
        }
        tensor(&q, &frobenius_twist(&*self.weyl(&l1)?, self.p))
    }

    /// Same character as Q♯, since ch Δ(λ₁) = ch ∇(λ₁).
    pub fn p_sharp_char(&self, lambda: &Weight) -> Result<FormalCharacter> {
        self.q_sharp_char(lambda)
    }

    /// ch ∇_p(μ) ≤ ch ∇_red(μ) ≤ ch Q♯(μ) at every weight. The first two are
    /// required to coincide.
    pub fn check_socle_bound(&self, mu: &Weight) -> Result<bool> {
        let nabla_p = self.ch_nabla_p(mu)?;
        let nabla_red = self.ch_nabla_red(mu)?;
        if nabla_p != *nabla_red {
            return Err(Error::Consistency(format!("ch ∇_p({mu}) differs from ch ∇_red({mu})")));
        }
        Ok(socle_bound_holds(&nabla_p, &nabla_red, &self.q_sharp_char(mu)?))
    }
}

/// `a ≤ b ≤ c` coefficientwise.
pub fn socle_bound_holds(a: &FormalCharacter, b: &FormalCharacter, c: &FormalCharacter) -> bool {
    a.coefficientwise_leq(b) && b.coefficientwise_leq(c)
}
