//! The formal character ring `Z[X(T)]`.
//!
//! Characters are sparse maps from weights to non-zero integer multiplicities,
//! kept in a `BTreeMap` so that equality is structural and serialisation is
//! deterministic.

use std::collections::btree_map;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rootdata::{CartanType, RootSystem, Weight};

/// A virtual character: finitely many weights with non-zero integer multiplicity.
#[derive(Clone, PartialEq, Eq)]
pub struct FormalCharacter {
    cartan_type: CartanType,
    terms: BTreeMap<Weight, i64>,
}

impl FormalCharacter {
    pub fn zero(t: CartanType) -> Self {
        Self { cartan_type: t, terms: BTreeMap::new() }
    }

    /// `e(μ)` with multiplicity `m`.
    pub fn monomial(t: CartanType, mu: Weight, m: i64) -> Self {
        let mut c = Self::zero(t);
        if m != 0 {
            c.terms.insert(mu, m);
        }
        c
    }

    /// The unit `e(0)`, which is also `ch Δ(0)`.
    pub fn trivial(t: CartanType) -> Self {
        Self::monomial(t, Weight::zero(t.rank()), 1)
    }

    /// Accumulates repeated weights and drops zeros.
    pub fn from_terms(t: CartanType, terms: impl IntoIterator<Item = (Weight, i64)>) -> Self {
        let mut c = Self::zero(t);
        for (w, m) in terms {
            c.add_term(w, m);
        }
        c
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn terms(&self) -> btree_map::Iter<'_, Weight, i64> {
        self.terms.iter()
    }

    pub fn weights(&self) -> impl Iterator<Item = &Weight> {
        self.terms.keys()
    }

    pub fn get(&self, w: &Weight) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of multiplicities; the dimension for characters of modules.
    pub fn mass(&self) -> i128 {
        self.terms.values().map(|&m| m as i128).sum()
    }

    pub fn add_term(&mut self, w: Weight, m: i64) {
        if m == 0 {
            return;
        }
        match self.terms.entry(w) {
            btree_map::Entry::Vacant(e) => {
                e.insert(m);
            }
            btree_map::Entry::Occupied(mut e) => {
                let v = e.get() + m;
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    fn check_same(&self, other: &FormalCharacter) -> Result<()> {
        if self.cartan_type == other.cartan_type {
            Ok(())
        } else {
            Err(Error::RootSystemMismatch {
                left: self.cartan_type.to_string(),
                right: other.cartan_type.to_string(),
            })
        }
    }

    /// `self += k * other`.
    pub fn add_scaled(&mut self, other: &FormalCharacter, k: i64) -> Result<()> {
        self.check_same(other)?;
        if k == 0 {
            return Ok(());
        }
        for (w, &m) in &other.terms {
            let km = m.checked_mul(k).ok_or(Error::Overflow("character arithmetic"))?;
            self.add_term(w.clone(), km);
        }
        Ok(())
    }

    pub fn scaled(&self, k: i64) -> FormalCharacter {
        let mut out = FormalCharacter::zero(self.cartan_type);
        out.add_scaled(self, k).expect("same type");
        out
    }

    /// Multiplication by `e(ν)`.
    pub fn shift(&self, nu: &Weight) -> FormalCharacter {
        FormalCharacter {
            cartan_type: self.cartan_type,
            terms: self.terms.iter().map(|(w, &m)| (w + nu, m)).collect(),
        }
    }

    pub fn first_negative(&self) -> Option<(&Weight, i64)> {
        self.terms.iter().find(|(_, &m)| m < 0).map(|(w, &m)| (w, m))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.first_negative().is_none()
    }

    /// Coefficient-wise `self ≤ other` at every weight.
    pub fn coefficientwise_leq(&self, other: &FormalCharacter) -> bool {
        self.cartan_type == other.cartan_type
            && self.terms.iter().all(|(w, &m)| m <= other.get(w))
            && other.terms.iter().all(|(w, &m)| self.terms.contains_key(w) || m >= 0)
    }

    /// True if every simple reflection preserves all multiplicities.
    pub fn is_weyl_invariant(&self, rs: &RootSystem) -> bool {
        self.terms.iter().all(|(w, &m)| (0..rs.rank()).all(|i| self.get(&rs.reflect(w, i)) == m))
    }

    /// Stable text form: space-separated `coords:multiplicity` entries in weight order.
    pub fn to_text(&self) -> String {
        self.entries().join(" ")
    }

    pub fn entries(&self) -> Vec<String> {
        self.terms
            .iter()
            .map(|(w, m)| {
                let coords: Vec<String> = w.coords().iter().map(|c| c.to_string()).collect();
                format!("{}:{}", coords.join(","), m)
            })
            .collect()
    }

    /// Inverse of [`FormalCharacter::to_text`].
    pub fn from_text(t: CartanType, s: &str) -> Result<Self> {
        let bad = || Error::Consistency(format!("malformed character text {s:?}"));
        let mut c = FormalCharacter::zero(t);
        for tok in s.split_whitespace() {
            let (coords, m) = tok.rsplit_once(':').ok_or_else(bad)?;
            let w: Weight = coords.parse().map_err(|_| bad())?;
            if w.rank() != t.rank() {
                return Err(bad());
            }
            let m: i64 = m.parse().map_err(|_| bad())?;
            c.add_term(w, m);
        }
        Ok(c)
    }
}

impl fmt::Debug for FormalCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{{}}}", self.cartan_type, self.to_text())
    }
}

impl fmt::Display for FormalCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}", self.to_text())
        }
    }
}

impl Serialize for FormalCharacter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.entries())
    }
}

/// Dominant weights `μ ≤ λ`, highest first.
///
/// Every such `μ` is reachable from `λ` by subtracting positive roots while
/// staying dominant, so a breadth-first search from `λ` finds them all.
pub fn dominant_weights_below(rs: &RootSystem, lambda: &Weight) -> Vec<Weight> {
    let mut seen: HashSet<Weight> = HashSet::from([lambda.clone()]);
    let mut stack = vec![lambda.clone()];
    while let Some(mu) = stack.pop() {
        for a in rs.positive_root_weights() {
            let nu = &mu - a;
            if nu.is_dominant() && !seen.contains(&nu) {
                seen.insert(nu.clone());
                stack.push(nu);
            }
        }
    }
    let mut out: Vec<Weight> = seen.into_iter().collect();
    out.sort_by(|a, b| rs.scaled_height(b).cmp(&rs.scaled_height(a)).then_with(|| b.cmp(a)));
    out
}

/// Multiplicities of the dominant weights of `ch Δ(λ)` by Freudenthal's recursion.
pub fn dominant_multiplicities(rs: &RootSystem, lambda: &Weight) -> Result<Vec<(Weight, i64)>> {
    rs.check_dominant(lambda)?;
    let dominant = dominant_weights_below(rs, lambda);
    let mut mult: HashMap<Weight, i64> = HashMap::with_capacity(dominant.len());
    let shifted_top = lambda + &rs.rho().scale(2);
    let mut out = Vec::with_capacity(dominant.len());
    for mu in dominant {
        if mu == *lambda {
            mult.insert(mu.clone(), 1);
            out.push((mu, 1));
            continue;
        }
        let mut num: i128 = 0;
        for (k, alpha) in rs.positive_root_weights().iter().enumerate() {
            let beta = &rs.positive_roots()[k];
            let mut nu = &mu + alpha;
            loop {
                let Some(&m) = mult.get(&rs.dominant_representative(&nu)) else {
                    break;
                };
                num += m as i128 * rs.form_root_weight(beta, nu.coords()) as i128;
                nu = &nu + alpha;
            }
        }
        let diff = rs
            .to_root_coords(&(lambda - &mu))
            .ok_or_else(|| Error::Consistency(format!("{mu} not in λ - Q for λ = {lambda}")))?;
        let denom = rs.form_root_weight(&diff, (&shifted_top + &mu).coords()) as i128;
        if denom <= 0 || (2 * num) % denom != 0 {
            return Err(Error::Consistency(format!(
                "Freudenthal recursion not integral at {mu} for λ = {lambda}"
            )));
        }
        let m = i64::try_from(2 * num / denom).map_err(|_| Error::Overflow("weight multiplicity"))?;
        mult.insert(mu.clone(), m);
        out.push((mu, m));
    }
    Ok(out)
}

/// `ch Δ(λ) = χ(λ)`.
pub fn weyl_character(rs: &RootSystem, lambda: &Weight) -> Result<FormalCharacter> {
    let dominant = dominant_multiplicities(rs, lambda)?;
    let mut terms = BTreeMap::new();
    for (mu, m) in dominant {
        for w in rs.orbit(&mu) {
            terms.insert(w, m);
        }
    }
    Ok(FormalCharacter { cartan_type: rs.cartan_type(), terms })
}

/// `∏_{α>0} ⟨λ+ρ, α^∨⟩ / ⟨ρ, α^∨⟩`.
pub fn weyl_dimension(rs: &RootSystem, lambda: &Weight) -> Result<u128> {
    rs.check_dominant(lambda)?;
    let shifted = lambda + rs.rho();
    let (mut num, mut den) = (1u128, 1u128);
    for k in 0..rs.num_positive_roots() {
        let a = rs.pairing(shifted.coords(), k) as u128;
        let b = rs.pairing(rs.rho().coords(), k) as u128;
        num = num.checked_mul(a).ok_or(Error::Overflow("Weyl dimension"))?;
        den *= b;
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    if den != 1 {
        return Err(Error::Consistency(format!("Weyl dimension of {lambda} is not integral")));
    }
    Ok(num)
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Product in the character ring (convolution of weight multisets).
pub fn tensor(c1: &FormalCharacter, c2: &FormalCharacter) -> Result<FormalCharacter> {
    c1.check_same(c2)?;
    let mut acc: HashMap<Weight, i64> = HashMap::with_capacity(c1.len() * c2.len());
    for (w1, &m1) in &c1.terms {
        for (w2, &m2) in &c2.terms {
            let m = m1.checked_mul(m2).ok_or(Error::Overflow("tensor product"))?;
            let slot = acc.entry(w1 + w2).or_insert(0);
            *slot = slot.checked_add(m).ok_or(Error::Overflow("tensor product"))?;
        }
    }
    Ok(FormalCharacter {
        cartan_type: c1.cartan_type,
        terms: acc.into_iter().filter(|&(_, m)| m != 0).collect(),
    })
}

/// `V ↦ V^[1]`: every weight is multiplied by `p`.
pub fn frobenius_twist(c: &FormalCharacter, p: u32) -> FormalCharacter {
    FormalCharacter {
        cartan_type: c.cartan_type,
        terms: c.terms.iter().map(|(w, &m)| (w.scale(p as i64), m)).collect(),
    }
}

/// How to choose among several candidate top weights of equal height.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    LexLargest,
    LexSmallest,
}

/// Which weights of the residual may label a basis element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PeelScope {
    Dominant,
    All,
}

/// Unitriangular decomposition of `c` against `basis`.
///
/// `basis(ν)` must return a character with coefficient 1 at `ν` and all other
/// weights strictly below `ν`. At each step the residual weight of greatest
/// height is peeled off (a weight of maximal height is maximal for the
/// dominance order); `tie` orders weights of equal height.
pub fn greedy_decompose<F>(
    rs: &RootSystem,
    c: &FormalCharacter,
    tie: TieBreak,
    basis: F,
) -> Result<Vec<(Weight, i64)>>
where
    F: FnMut(&Weight) -> Result<Arc<FormalCharacter>>,
{
    peel(rs, c, PeelScope::Dominant, tie, basis)
}

pub(crate) fn peel<F>(
    rs: &RootSystem,
    c: &FormalCharacter,
    scope: PeelScope,
    tie: TieBreak,
    mut basis: F,
) -> Result<Vec<(Weight, i64)>>
where
    F: FnMut(&Weight) -> Result<Arc<FormalCharacter>>,
{
    let mut residual = c.clone();
    let mut out = Vec::new();
    while !residual.is_zero() {
        let top = residual
            .weights()
            .filter(|w| scope == PeelScope::All || w.is_dominant())
            .max_by(|a, b| {
                rs.scaled_height(a).cmp(&rs.scaled_height(b)).then_with(|| match tie {
                    TieBreak::LexLargest => a.cmp(b),
                    TieBreak::LexSmallest => b.cmp(a),
                })
            })
            .cloned();
        let Some(nu) = top else {
            return Err(Error::Decomposition { residual: residual.to_text() });
        };
        let m = residual.get(&nu);
        let b = basis(&nu)?;
        if b.get(&nu) != 1 {
            return Err(Error::Consistency(format!(
                "basis element for {nu} has leading coefficient {}",
                b.get(&nu)
            )));
        }
        let ht = rs.scaled_height(&nu);
        if b.weights().any(|w| w != &nu && rs.scaled_height(w) >= ht) {
            return Err(Error::Consistency(format!("basis element for {nu} is not unitriangular")));
        }
        residual.add_scaled(&b, -m)?;
        out.push((nu, m));
    }
    Ok(out)
}

/// `Σ m · basis(ν)` over a coefficient list.
pub fn reexpand<F>(t: CartanType, coeffs: &[(Weight, i64)], mut basis: F) -> Result<FormalCharacter>
where
    F: FnMut(&Weight) -> Result<Arc<FormalCharacter>>,
{
    let mut out = FormalCharacter::zero(t);
    for (nu, m) in coeffs {
        let b = basis(nu)?;
        out.add_scaled(&b, *m)?;
    }
    Ok(out)
}
