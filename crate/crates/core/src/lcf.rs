//! The Lusztig character formula and the irreducible characters it defines.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::characters::{frobenius_twist, tensor, FormalCharacter};
use crate::engine::{publish, Engine};
use crate::error::{Error, Result};
use crate::modchar::steinberg_decompose;
use crate::rootdata::{RootSystem, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiTerm {
    pub weight: Weight,
    pub coeff: i64,
}

/// `Σ cᵢ χ(μᵢ)` over distinct dominant `μᵢ`, leading term first.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChiCombination(Vec<ChiTerm>);

impl ChiCombination {
    /// Sorted by decreasing height, ties by decreasing weight; zero terms dropped.
    pub fn new(rs: &RootSystem, terms: impl IntoIterator<Item = (Weight, i64)>) -> Self {
        let mut acc: BTreeMap<Weight, i64> = BTreeMap::new();
        for (w, c) in terms {
            *acc.entry(w).or_insert(0) += c;
        }
        let mut v: Vec<ChiTerm> =
            acc.into_iter().filter(|(_, c)| *c != 0).map(|(weight, coeff)| ChiTerm { weight, coeff }).collect();
        v.sort_by(|a, b| {
            rs.scaled_height(&b.weight).cmp(&rs.scaled_height(&a.weight)).then_with(|| b.weight.cmp(&a.weight))
        });
        Self(v)
    }

    pub fn terms(&self) -> &[ChiTerm] {
        &self.0
    }

    pub fn pairs(&self) -> Vec<(Weight, i64)> {
        self.0.iter().map(|t| (t.weight.clone(), t.coeff)).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Engine {
    /// `χ_KL(λ) = Σ_y (−1)^{ℓ(x)−ℓ(y)} P_{y,x}(1) χ(y·λ⁻)` over `y ≤ x` with
    /// `y·λ⁻` dominant, where `λ = x·λ⁻` comes from `locate`.
    pub fn chi_kl(&self, lambda: &Weight) -> Result<Arc<ChiCombination>> {
        if let Some(c) = self.chi.get(lambda) {
            return Ok(c.clone());
        }
        let g = self.group();
        let (x, base) = g.locate(lambda, self.p)?;
        let lx = g.length(&x);
        let column = self.kl.column(&x)?;
        let mut terms = Vec::new();
        for (y, poly) in column.iter() {
            let nu = g.dot_action(y, &base, self.p);
            if !nu.is_dominant() {
                continue;
            }
            let sign = if (lx - g.length(y)) % 2 == 0 { 1 } else { -1 };
            terms.push((nu, sign * poly.evaluate_at_one()));
        }
        let combo = ChiCombination::new(&self.rs, terms);
        match combo.terms().first() {
            Some(t) if t.weight == *lambda && t.coeff == 1 => {}
            _ => {
                return Err(Error::Consistency(format!("χ_KL({lambda}) does not have leading term χ({lambda})")));
            }
        }
        Ok(publish(&self.chi, lambda, combo))
    }

    /// `Σ cᵢ χ(μᵢ)` as a formal character.
    pub fn expand(&self, combo: &ChiCombination) -> Result<FormalCharacter> {
        let mut out = FormalCharacter::zero(self.cartan_type());
        for t in combo.terms() {
            out.add_scaled(&*self.weyl(&t.weight)?, t.coeff)?;
        }
        Ok(out)
    }

    /// ch L(λ) = ch L(λ₀) · ch L(λ₁)^[1], with the restricted factor from `χ_KL`.
    pub fn ch_irreducible(&self, lambda: &Weight) -> Result<Arc<FormalCharacter>> {
        if let Some(c) = self.irreducible.get(lambda) {
            return Ok(c.clone());
        }
        self.rs.check_dominant(lambda)?;
        let (l0, l1) = steinberg_decompose(lambda, self.p);
        let restricted = self.expand(&*self.chi_kl(&l0)?)?;
        let ch = if l1.is_zero() {
            restricted
        } else {
            tensor(&restricted, &frobenius_twist(&*self.ch_irreducible(&l1)?, self.p))?
        };
        if let Some((w, m)) = ch.first_negative() {
            return Err(Error::NegativeMultiplicity {
                context: "ch L",
                lambda: lambda.clone(),
                weight: w.clone(),
                multiplicity: m,
            });
        }
        Ok(publish(&self.irreducible, lambda, ch))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alcove::is_regular;
    use crate::characters::weyl_dimension;

    fn w(c: &[i64]) -> Weight {
        Weight::new(c.to_vec())
    }

    fn engine(t: &str, p: u32) -> Engine {
        Engine::new(t.parse().unwrap(), p).unwrap()
    }

    fn pairs(e: &Engine, l: &[i64]) -> Vec<(Weight, i64)> {
        e.chi_kl(&w(l)).unwrap().pairs()
    }

    #[test]
    fn a1_examples() {
        let e = engine("A1", 3);
        assert_eq!(pairs(&e, &[1]), vec![(w(&[1]), 1)]);
        assert_eq!(pairs(&e, &[4]), vec![(w(&[4]), 1), (w(&[0]), -1)]);
        assert_eq!(pairs(&e, &[2]), vec![(w(&[2]), 1)]);
        let l1 = e.ch_irreducible(&w(&[1])).unwrap();
        assert_eq!(l1.to_text(), "-1:1 1:1");
        assert_eq!(e.ch_irreducible(&w(&[4])).unwrap().mass(), 4);
        assert_eq!(*e.ch_irreducible(&w(&[0])).unwrap(), FormalCharacter::trivial(e.cartan_type()));
    }

    #[test]
    fn errors() {
        assert!(matches!(Engine::new("A2".parse().unwrap(), 2), Err(Error::PrimeTooSmall { .. })));
        let e = engine("A1", 3);
        assert!(matches!(e.chi_kl(&w(&[-1])), Err(Error::NonDominant(_))));
        assert!(matches!(e.ch_irreducible(&w(&[1, 0])), Err(Error::RankMismatch { .. })));
    }

    /// Steinberg tensor product theorem, checked against the sl₂ digit formula:
    /// dim L(Σ aᵢpⁱ) = Π (aᵢ + 1).
    #[test]
    fn a1_digit_dimensions() {
        for p in [3u32, 5, 7] {
            let e = engine("A1", p);
            for n in 0..60i64 {
                let mut d = 1i128;
                let mut m = n;
                while m > 0 {
                    d *= (m % p as i64 + 1) as i128;
                    m /= p as i64;
                }
                assert_eq!(e.ch_irreducible(&w(&[n])).unwrap().mass(), d, "p={p} n={n}");
            }
        }
    }

    #[test]
    fn leading_term_and_first_alcove() {
        for (t, p) in [("A1", 5), ("A2", 3), ("A2", 5), ("B2", 5), ("G2", 7)] {
            let e = engine(t, p);
            let rs = e.root_system().clone();
            for lambda in rs.dominant_weights_up_to_level(2 * p as i64) {
                let combo = e.chi_kl(&lambda).unwrap();
                let full = e.expand(&combo).unwrap();
                assert_eq!(full.get(&lambda), 1);
                assert!(full.is_weyl_invariant(&rs));
                // closure of the bottom dominant alcove: ch L = ch Δ
                if rs.pair_highest_short((&lambda + rs.rho()).coords()) <= p as i64 {
                    assert_eq!(combo.pairs(), vec![(lambda.clone(), 1)], "{t} {lambda}");
                }
                let l = e.ch_irreducible(&lambda).unwrap();
                assert!(l.is_nonnegative());
                assert!(l.mass() as u128 <= weyl_dimension(&rs, &lambda).unwrap());
            }
        }
    }

    #[test]
    fn a2_second_alcove() {
        // ⟨λ+ρ, α₀^∨⟩ = 8 > p puts λ in the upper restricted alcove
        let e = engine("A2", 5);
        let rs = e.root_system().clone();
        let lambda = w(&[3, 3]);
        assert!(is_regular(&rs, &lambda, 5));
        let combo = e.chi_kl(&lambda).unwrap();
        // reflect λ+ρ = (4,4) in ⟨v, α₀^∨⟩ = 5: v − 3α₀ = (1,1), so the linked weight is 0
        assert_eq!(combo.pairs(), vec![(w(&[3, 3]), 1), (w(&[0, 0]), -1)]);
        assert_eq!(e.ch_irreducible(&lambda).unwrap().mass(), 64 - 1);
    }

    #[test]
    fn singular_weights_steinberg() {
        // dim L(λ₀ + pλ₁) = dim L(λ₀) dim L(λ₁); λ = [8] at p = 3 is singular
        let e = engine("A1", 3);
        assert_eq!(pairs(&e, &[8]), vec![(w(&[8]), 1)]);
        assert_eq!(e.ch_irreducible(&w(&[8])).unwrap().mass(), 9);
        let e = engine("A2", 5);
        let st = e.ch_irreducible(&w(&[4, 4])).unwrap();
        assert_eq!(st.mass(), 125);
    }

    #[test]
    fn serialization() {
        let e = engine("A1", 3);
        let json = serde_json::to_string(&*e.chi_kl(&w(&[4])).unwrap()).unwrap();
        assert_eq!(json, r#"[{"weight":[4],"coeff":1},{"weight":[0],"coeff":-1}]"#);
        let back: ChiCombination = serde_json::from_str(&json).unwrap();
        assert_eq!(back, *e.chi_kl(&w(&[4])).unwrap());
    }
}
