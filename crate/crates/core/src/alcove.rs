//! The affine Weyl group `W_p` acting by the dot action, and its alcove geometry.
//!
//! An element is stored as a pair `(w, γ)` with `w` a finite Weyl group element
//! (its matrix on the weight basis) and `γ` a root-lattice translation in the
//! simple-root basis, acting by `x·λ = w(λ+ρ) + pγ − ρ`. The group structure
//! does not depend on `p`; only the dot action does.
//!
//! Coxeter generators are the reflections in the walls of the antidominant
//! alcove `C⁻ = {−p < ⟨λ+ρ, α^∨⟩ < 0}`. Wall `i < rank` is `⟨λ+ρ, α_i^∨⟩ = 0`;
//! wall `rank` is the affine wall `⟨λ+ρ, α₀^∨⟩ = −p`. Reduced words use this
//! numbering.

use std::collections::HashSet;
use std::sync::Arc;

use dashmap::DashMap;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::rootdata::{RootSystem, Weight};

pub const DEFAULT_INTERVAL_CAP: usize = 20_000;

pub type Word = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineElement {
    w: IntMatrix,
    gamma: Vec<i64>,
}

impl AffineElement {
    pub fn finite_part(&self) -> &IntMatrix {
        &self.w
    }

    /// Translation part in the simple-root basis.
    pub fn translation(&self) -> &[i64] {
        &self.gamma
    }
}

/// For each positive root `α`, the integer `k_α` with
/// `k_α p < ⟨v+ρ, α^∨⟩ < (k_α+1) p` on the interior of the alcove.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlcoveCoords(pub Vec<i64>);

impl AlcoveCoords {
    /// Number of reflecting hyperplanes separating this alcove from `C⁻`.
    pub fn distance_from_base(&self) -> usize {
        self.0.iter().map(|k| (k + 1).unsigned_abs() as usize).sum()
    }
}

/// Alcove containing a `p`-regular weight, `None` if the weight lies on a wall.
pub fn alcove_of_weight(rs: &RootSystem, lambda: &Weight, p: u32) -> Option<AlcoveCoords> {
    let v = lambda + rs.rho();
    let p = p as i64;
    let mut ks = Vec::with_capacity(rs.num_positive_roots());
    for k in 0..rs.num_positive_roots() {
        let a = rs.pairing(v.coords(), k);
        if a.rem_euclid(p) == 0 {
            return None;
        }
        ks.push(a.div_euclid(p));
    }
    Some(AlcoveCoords(ks))
}

/// `⟨λ+ρ, α^∨⟩ ∉ pZ` for every positive root.
pub fn is_regular(rs: &RootSystem, lambda: &Weight, p: u32) -> bool {
    alcove_of_weight(rs, lambda, p).is_some()
}

pub fn is_restricted(lambda: &Weight, p: u32) -> bool {
    lambda.is_restricted(p)
}

/// Dominant and `⟨λ+ρ, α₀^∨⟩ ≤ p(p−h+2)`.
pub fn in_jantzen_region(rs: &RootSystem, lambda: &Weight, p: u32) -> bool {
    let p = p as i64;
    lambda.is_dominant()
        && rs.pair_highest_short((lambda + rs.rho()).coords()) <= p * (p - rs.coxeter_number() + 2)
}

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d: &u32| d * d <= p).all(|d| p % d != 0)
}

pub(crate) fn check_prime_at_least_h(rs: &RootSystem, p: u32, what: &'static str) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let h = rs.coxeter_number() as u32;
    if p < h {
        return Err(Error::PrimeTooSmall { p, required: h, what });
    }
    Ok(())
}

/// The affine Weyl group of a root system with memoised Bruhat data.
pub struct AffineWeylGroup {
    rs: Arc<RootSystem>,
    gens: Vec<AffineElement>,
    alpha0_weight: Weight,
    interval_cap: usize,
    bruhat: DashMap<(AffineElement, AffineElement), bool>,
    intervals: DashMap<AffineElement, Arc<Vec<AffineElement>>>,
}

impl AffineWeylGroup {
    pub fn new(rs: Arc<RootSystem>) -> Self {
        Self::with_interval_cap(rs, DEFAULT_INTERVAL_CAP)
    }

    pub fn with_interval_cap(rs: Arc<RootSystem>, interval_cap: usize) -> Self {
        let n = rs.rank();
        let mut gens: Vec<AffineElement> = (0..n)
            .map(|i| AffineElement { w: rs.simple_reflection_matrix(i), gamma: vec![0; n] })
            .collect();
        let a0 = rs.highest_short_root();
        let alpha0_weight = rs.positive_root_weights()[a0].clone();
        let coroot = &rs.coroots()[a0];
        let mut m = IntMatrix::identity(n);
        for j in 0..n {
            for k in 0..n {
                m.set(j, k, m.get(j, k) - alpha0_weight.coords()[j] * coroot[k]);
            }
        }
        let gamma = rs.positive_roots()[a0].iter().map(|c| -c).collect();
        gens.push(AffineElement { w: m, gamma });
        Self {
            rs,
            gens,
            alpha0_weight,
            interval_cap,
            bruhat: DashMap::new(),
            intervals: DashMap::new(),
        }
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn root_system_arc(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn interval_cap(&self) -> usize {
        self.interval_cap
    }

    /// `rank + 1` walls of `C⁻`.
    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    pub fn affine_wall(&self) -> usize {
        self.gens.len() - 1
    }

    pub fn identity(&self) -> AffineElement {
        let n = self.rs.rank();
        AffineElement { w: IntMatrix::identity(n), gamma: vec![0; n] }
    }

    pub fn generator(&self, s: usize) -> Result<&AffineElement> {
        self.gens.get(s).ok_or(Error::IndexOutOfRange { index: s, len: self.gens.len() })
    }

    fn translation_weight(&self, x: &AffineElement) -> Vec<i64> {
        self.rs.from_root_coords(&x.gamma).coords().to_vec()
    }

    /// `(w1, γ1)(w2, γ2) = (w1 w2, w1 γ2 + γ1)`.
    pub fn mul(&self, a: &AffineElement, b: &AffineElement) -> AffineElement {
        let w = a.w.mul(&b.w);
        let rotated = a.w.apply(&self.translation_weight(b));
        let rotated_root = self
            .rs
            .to_root_coords(&Weight::new(rotated))
            .expect("Weyl group preserves the root lattice");
        let gamma = rotated_root.iter().zip(&a.gamma).map(|(x, y)| x + y).collect();
        AffineElement { w, gamma }
    }

    pub fn inverse(&self, x: &AffineElement) -> AffineElement {
        // det w = ±1, so w⁻¹ = det · adj(w)
        let det = x.w.determinant();
        let mut w_inv = x.w.adjugate();
        for i in 0..w_inv.dim() {
            for j in 0..w_inv.dim() {
                w_inv.set(i, j, det * w_inv.get(i, j));
            }
        }
        let t = w_inv.apply(&self.translation_weight(x));
        let gamma = self
            .rs
            .to_root_coords(&Weight::new(t))
            .expect("Weyl group preserves the root lattice")
            .iter()
            .map(|c| -c)
            .collect();
        AffineElement { w: w_inv, gamma }
    }

    pub fn left_mul_gen(&self, s: usize, x: &AffineElement) -> AffineElement {
        self.mul(&self.gens[s], x)
    }

    pub fn right_mul_gen(&self, x: &AffineElement, s: usize) -> AffineElement {
        self.mul(x, &self.gens[s])
    }

    pub fn from_word(&self, word: &[usize]) -> Result<AffineElement> {
        let mut x = self.identity();
        for &s in word {
            self.generator(s)?;
            x = self.right_mul_gen(&x, s);
        }
        Ok(x)
    }

    /// `w(v) + pγ` on a ρ-shifted weight `v = λ + ρ`.
    pub fn apply_shifted(&self, x: &AffineElement, v: &[i64], p: u32) -> Vec<i64> {
        let t = self.translation_weight(x);
        x.w.apply(v).iter().zip(&t).map(|(a, b)| a + p as i64 * b).collect()
    }

    /// `x·λ = w(λ+ρ) + pγ − ρ`.
    pub fn dot_action(&self, x: &AffineElement, lambda: &Weight, p: u32) -> Weight {
        let v = lambda + self.rs.rho();
        let image = Weight::new(self.apply_shifted(x, v.coords(), p));
        &image - self.rs.rho()
    }

    /// Alcove coordinates of `x·C⁻`.
    ///
    /// The point `−(p/h)ρ` of `C⁻` is mapped by `x`; dividing by `p` makes the
    /// computation independent of `p`.
    pub fn alcove_coords(&self, x: &AffineElement) -> AlcoveCoords {
        let h = self.rs.coxeter_number();
        let minus_rho: Vec<i64> = self.rs.rho().coords().iter().map(|c| -c).collect();
        let rotated = x.w.apply(&minus_rho);
        let t = self.translation_weight(x);
        let point: Vec<i64> = rotated.iter().zip(&t).map(|(a, b)| a + h * b).collect();
        AlcoveCoords(
            (0..self.rs.num_positive_roots())
                .map(|k| self.rs.pairing(&point, k).div_euclid(h))
                .collect(),
        )
    }

    /// `ℓ(x)`, the number of hyperplanes separating `x·C⁻` from `C⁻`.
    pub fn length(&self, x: &AffineElement) -> usize {
        self.alcove_coords(x).distance_from_base()
    }

    /// Whether `ℓ(s x) < ℓ(x)`, read off from which side of the wall `x·C⁻` lies.
    pub fn is_left_descent(&self, x: &AffineElement, s: usize) -> bool {
        let k = self.alcove_coords(x);
        self.descent_from_coords(&k, s)
    }

    fn descent_from_coords(&self, k: &AlcoveCoords, s: usize) -> bool {
        if s < self.rs.rank() {
            // simple roots are the first `rank` positive roots
            k.0[s] >= 0
        } else {
            k.0[self.rs.highest_short_root()] <= -2
        }
    }

    pub fn left_descents(&self, x: &AffineElement) -> Vec<usize> {
        let k = self.alcove_coords(x);
        (0..self.num_generators()).filter(|&s| self.descent_from_coords(&k, s)).collect()
    }

    /// Lexicographically smallest reduced word.
    pub fn reduced_word(&self, x: &AffineElement) -> Word {
        let mut word = Vec::new();
        let mut cur = x.clone();
        loop {
            let k = self.alcove_coords(&cur);
            let Some(s) = (0..self.num_generators()).find(|&s| self.descent_from_coords(&k, s)) else {
                break;
            };
            word.push(s);
            cur = self.left_mul_gen(s, &cur);
        }
        word
    }

    /// Bruhat order by the lifting recursion on a left descent of `x`.
    pub fn bruhat_leq(&self, y: &AffineElement, x: &AffineElement) -> bool {
        let (ly, lx) = (self.length(y), self.length(x));
        if ly > lx {
            return false;
        }
        if ly == lx {
            return y == x;
        }
        if ly == 0 {
            return true;
        }
        let key = (y.clone(), x.clone());
        if let Some(v) = self.bruhat.get(&key) {
            return *v;
        }
        let s = self.left_descents(x)[0];
        let sx = self.left_mul_gen(s, x);
        let result = if self.is_left_descent(y, s) {
            self.bruhat_leq(&self.left_mul_gen(s, y), &sx)
        } else {
            self.bruhat_leq(y, &sx)
        };
        self.bruhat.insert(key, result);
        result
    }

    /// The Bruhat interval `[e, x]` as products of subwords of a reduced word,
    /// sorted by length and then by reduced word.
    pub fn lower_interval(&self, x: &AffineElement) -> Result<Arc<Vec<AffineElement>>> {
        if let Some(v) = self.intervals.get(x) {
            return Ok(v.clone());
        }
        let mut set: HashSet<AffineElement> = HashSet::from([self.identity()]);
        for s in self.reduced_word(x) {
            let extra: Vec<AffineElement> = set.iter().map(|y| self.right_mul_gen(y, s)).collect();
            set.extend(extra);
            if set.len() > self.interval_cap {
                return Err(Error::CapExceeded { what: "Bruhat interval", cap: self.interval_cap });
            }
        }
        let mut out: Vec<(usize, Word, AffineElement)> =
            set.into_iter().map(|y| (self.length(&y), self.reduced_word(&y), y)).collect();
        out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        let out = Arc::new(out.into_iter().map(|(_, _, y)| y).collect::<Vec<_>>());
        self.intervals.insert(x.clone(), out.clone());
        Ok(out)
    }

    /// All elements of length at most `n`, sorted by length and reduced word.
    pub fn elements_up_to_length(&self, n: usize) -> Result<Vec<AffineElement>> {
        let mut layers: Vec<Vec<AffineElement>> = vec![vec![self.identity()]];
        let mut seen: HashSet<AffineElement> = HashSet::from([self.identity()]);
        for len in 1..=n {
            let mut next = Vec::new();
            for x in &layers[len - 1] {
                for s in 0..self.num_generators() {
                    let y = self.left_mul_gen(s, x);
                    if self.length(&y) == len && seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            if seen.len() > self.interval_cap {
                return Err(Error::CapExceeded { what: "element enumeration", cap: self.interval_cap });
            }
            next.sort_by_key(|y| self.reduced_word(y));
            layers.push(next);
        }
        Ok(layers.into_iter().flatten().collect())
    }

    /// Reflection of a ρ-shifted point in wall `s` of `C⁻`.
    fn reflect_shifted(&self, v: &mut [i64], s: usize, p: i64) {
        let n = self.rs.rank();
        if s < n {
            let a = v[s];
            for (j, x) in v.iter_mut().enumerate() {
                *x -= a * self.rs.cartan_matrix().get(s, j);
            }
        } else {
            let a = self.rs.pair_highest_short(v) + p;
            for (x, d) in v.iter_mut().zip(self.alpha0_weight.coords()) {
                *x -= a * d;
            }
        }
    }

    /// Writes a dominant `λ` as `x·λ⁻` with `λ⁻` in the closure of `C⁻` and `x`
    /// of minimal length.
    ///
    /// Walks the point `λ+ρ` down to `C⁻`, only ever crossing walls that strictly
    /// separate it from `C⁻`; this never crosses a wall through the point, so for
    /// singular `λ` the result is the minimal coset representative.
    pub fn locate(&self, lambda: &Weight, p: u32) -> Result<(AffineElement, Weight)> {
        let rs = &*self.rs;
        rs.check_dominant(lambda)?;
        check_prime_at_least_h(rs, p, "locating a weight in the alcove geometry")?;
        let n = rs.rank();
        let pi = p as i64;
        let mut v = (lambda + rs.rho()).coords().to_vec();
        let mut word = Vec::new();
        loop {
            let s = match (0..n).find(|&i| v[i] > 0) {
                Some(i) => i,
                None if rs.pair_highest_short(&v) < -pi => n,
                None => break,
            };
            self.reflect_shifted(&mut v, s, pi);
            word.push(s);
        }
        let x = self.from_word(&word)?;
        let base = &Weight::new(v) - rs.rho();
        if self.dot_action(&x, &base, p) != *lambda || self.length(&x) != word.len() {
            return Err(Error::Consistency(format!("alcove walk for {lambda} did not close up")));
        }
        for s in 0..self.num_generators() {
            let g = &self.gens[s];
            if self.dot_action(g, &base, p) == base
                && self.length(&self.right_mul_gen(&x, s)) < word.len()
            {
                return Err(Error::Consistency(format!(
                    "located element for {lambda} is not minimal in its stabiliser coset"
                )));
            }
        }
        Ok((x, base))
    }

    /// Generators fixing `λ⁻` under the dot action.
    pub fn stabilizer_walls(&self, base: &Weight, p: u32) -> Vec<usize> {
        let mut v = (base + self.rs.rho()).coords().to_vec();
        let orig = v.clone();
        (0..self.num_generators())
            .filter(|&s| {
                v.copy_from_slice(&orig);
                self.reflect_shifted(&mut v, s, p as i64);
                v == orig
            })
            .collect()
    }
}
