//! Kazhdan–Lusztig polynomials of the affine Weyl group.
//!
//! Polynomials are computed a column at a time: for fixed `x`, every `P_{y,x}`
//! with `y ≤ x`. Columns are memoised and shared across primes, since the
//! Coxeter system does not depend on `p`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use serde::{Deserialize, Serialize};

use crate::alcove::{AffineElement, AffineWeylGroup, Word};
use crate::error::{Error, Result};

pub const CACHE_VERSION: u32 = 1;

/// Integer polynomial in `q`; index `i` holds the coefficient of `q^i`.
/// Trailing zeros are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KLPolynomial(Vec<i64>);

impl KLPolynomial {
    pub fn zero() -> Self {
        Self(Vec::new())
    }

    pub fn one() -> Self {
        Self(vec![1])
    }

    pub fn from_coeffs(mut c: Vec<i64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Self(c)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn evaluate_at_one(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `self += factor · q^shift · other`.
    fn add_shifted(&mut self, other: &KLPolynomial, shift: usize, factor: i64) -> Result<()> {
        if self.0.len() < other.0.len() + shift {
            self.0.resize(other.0.len() + shift, 0);
        }
        for (i, &c) in other.0.iter().enumerate() {
            let t = c.checked_mul(factor).ok_or(Error::Overflow("KL polynomial"))?;
            let slot = &mut self.0[i + shift];
            *slot = slot.checked_add(t).ok_or(Error::Overflow("KL polynomial"))?;
        }
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        Ok(())
    }
}

pub fn evaluate_at_one(p: &KLPolynomial) -> i64 {
    p.evaluate_at_one()
}

impl fmt::Debug for KLPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for KLPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate().filter(|(_, c)| **c != 0) {
            if !first {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            } else if c < 0 {
                f.write_str("-")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => f.write_str("q")?,
                (1, _) => write!(f, "{a}q")?,
                (_, 1) => write!(f, "q^{i}")?,
                _ => write!(f, "{a}q^{i}")?,
            }
        }
        Ok(())
    }
}

/// `P_{y,x}` for every `y ≤ x`.
pub type Column = HashMap<AffineElement, KLPolynomial>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KlCacheEntry {
    pub y: Word,
    pub x: Word,
    pub coeffs: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KlCacheDocument {
    pub version: u32,
    pub coxeter_type: String,
    pub entries: Vec<KlCacheEntry>,
}

impl KlCacheDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("cache document is plain data")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Cache(e.to_string()))
    }
}

/// Compute-once store of KL columns for one affine Weyl group.
pub struct KlTable {
    group: Arc<AffineWeylGroup>,
    columns: DashMap<AffineElement, Arc<Column>>,
}

impl KlTable {
    pub fn new(group: Arc<AffineWeylGroup>) -> Self {
        Self { group, columns: DashMap::new() }
    }

    pub fn group(&self) -> &AffineWeylGroup {
        &self.group
    }

    pub fn coxeter_type(&self) -> String {
        self.group.root_system().cartan_type().affine_name()
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, x: &AffineElement) -> Result<Arc<Column>> {
        if let Some(c) = self.columns.get(x) {
            return Ok(c.clone());
        }
        let col = if self.group.length(x) == 0 {
            Column::from([(x.clone(), KLPolynomial::one())])
        } else {
            let s = self.group.left_descents(x)[0];
            self.compute_column(x, s)?
        };
        Ok(self.columns.entry(x.clone()).or_insert_with(|| Arc::new(col)).clone())
    }

    pub fn kl_polynomial(&self, y: &AffineElement, x: &AffineElement) -> Result<KLPolynomial> {
        if self.group.length(y) > self.group.length(x) {
            return Ok(KLPolynomial::zero());
        }
        Ok(self.column(x)?.get(y).cloned().unwrap_or_default())
    }

    /// `P_{y,x}` with the top step of the recursion forced through the left
    /// descent `s`. Lower columns come from the memo table.
    pub fn kl_polynomial_with_descent(
        &self,
        y: &AffineElement,
        x: &AffineElement,
        s: usize,
    ) -> Result<KLPolynomial> {
        if !self.group.is_left_descent(x, s) {
            return Err(Error::Consistency(format!("wall {s} is not a left descent of {:?}", self.group.reduced_word(x))));
        }
        Ok(self.compute_column(x, s)?.get(y).cloned().unwrap_or_default())
    }

    /// Coefficient of `q^{(ℓ(x)−ℓ(y)−1)/2}` in `P_{y,x}`, zero for even length difference.
    pub fn mu_coefficient(&self, y: &AffineElement, x: &AffineElement) -> Result<i64> {
        let (ly, lx) = (self.group.length(y), self.group.length(x));
        if ly >= lx || (lx - ly) % 2 == 0 {
            return Ok(0);
        }
        Ok(self.kl_polynomial(y, x)?.coeff((lx - ly - 1) / 2))
    }

    fn compute_column(&self, x: &AffineElement, s: usize) -> Result<Column> {
        let g = &*self.group;
        let lx = g.length(x);
        let interval = g.lower_interval(x)?;
        let v = g.left_mul_gen(s, x);
        let pv = self.column(&v)?;
        let lv = lx - 1;

        let mut col: Column = HashMap::with_capacity(interval.len());
        for y in interval.iter() {
            let sy = g.left_mul_gen(s, y);
            let c = g.is_left_descent(y, s);
            let mut p = KLPolynomial::zero();
            if let Some(a) = pv.get(&sy) {
                p.add_shifted(a, usize::from(!c), 1)?;
            }
            if let Some(b) = pv.get(y) {
                p.add_shifted(b, usize::from(c), 1)?;
            }
            col.insert(y.clone(), p);
        }

        for (z, pzv) in pv.iter() {
            let lz = g.length(z);
            if lz == lv || (lv - lz) % 2 == 0 || !g.is_left_descent(z, s) {
                continue;
            }
            let mu = pzv.coeff((lv - lz - 1) / 2);
            if mu == 0 {
                continue;
            }
            let shift = (lx - lz) / 2;
            for (y, pyz) in self.column(z)?.iter() {
                let slot = col.get_mut(y).ok_or_else(|| {
                    Error::Consistency("Bruhat interval not closed under the KL recursion".into())
                })?;
                slot.add_shifted(pyz, shift, -mu)?;
            }
        }

        for (y, p) in &col {
            check_invariants(p, g.length(y), lx).map_err(|why| {
                Error::Consistency(format!(
                    "P_{{{:?},{:?}}} = {p}: {why}",
                    g.reduced_word(y),
                    g.reduced_word(x)
                ))
            })?;
        }
        col.retain(|_, p| !p.is_zero());
        Ok(col)
    }

    /// Every memoised column, sorted by `(x, y)` reduced words.
    pub fn export(&self) -> KlCacheDocument {
        let g = &*self.group;
        let mut entries = Vec::new();
        for item in self.columns.iter() {
            let x = g.reduced_word(item.key());
            for (y, p) in item.value().iter() {
                entries.push(KlCacheEntry { y: g.reduced_word(y), x: x.clone(), coeffs: p.coeffs().to_vec() });
            }
        }
        entries.sort_by(|a, b| (&a.x, &a.y).cmp(&(&b.x, &b.y)));
        KlCacheDocument { version: CACHE_VERSION, coxeter_type: self.coxeter_type(), entries }
    }

    /// Loads a cache document; the table is untouched unless every entry
    /// validates. Returns the number of columns loaded.
    pub fn import(&self, doc: &KlCacheDocument) -> Result<usize> {
        let g = &*self.group;
        if doc.version != CACHE_VERSION {
            return Err(Error::Cache(format!("unsupported version {} (expected {CACHE_VERSION})", doc.version)));
        }
        if doc.coxeter_type != self.coxeter_type() {
            return Err(Error::Cache(format!(
                "cache is for {} but the table is for {}",
                doc.coxeter_type,
                self.coxeter_type()
            )));
        }
        let element = |w: &Word| -> Result<AffineElement> {
            let e = g.from_word(w).map_err(|_| Error::Cache(format!("bad wall index in {w:?}")))?;
            if g.reduced_word(&e) != *w {
                return Err(Error::Cache(format!("{w:?} is not a lexicographically minimal reduced word")));
            }
            Ok(e)
        };
        let mut staged: BTreeMap<Word, (AffineElement, Column)> = BTreeMap::new();
        for entry in &doc.entries {
            let x = match staged.get(&entry.x) {
                Some((x, _)) => x.clone(),
                None => element(&entry.x)?,
            };
            let y = element(&entry.y)?;
            let p = KLPolynomial(entry.coeffs.clone());
            if entry.coeffs.last() == Some(&0) || !g.bruhat_leq(&y, &x) {
                return Err(Error::Cache(format!("invalid entry for y={:?}, x={:?}", entry.y, entry.x)));
            }
            check_invariants(&p, entry.y.len(), entry.x.len())
                .map_err(|why| Error::Cache(format!("y={:?}, x={:?}: {why}", entry.y, entry.x)))?;
            let col = &mut staged.entry(entry.x.clone()).or_insert_with(|| (x, Column::new())).1;
            if col.insert(y, p).is_some() {
                return Err(Error::Cache(format!("duplicate entry for y={:?}, x={:?}", entry.y, entry.x)));
            }
        }
        for (word, (x, col)) in &staged {
            if col.len() != g.lower_interval(x)?.len() {
                return Err(Error::Cache(format!("incomplete column for x={word:?}")));
            }
        }
        let n = staged.len();
        for (_, (x, col)) in staged {
            self.columns.entry(x).or_insert_with(|| Arc::new(col));
        }
        Ok(n)
    }
}

fn check_invariants(p: &KLPolynomial, ly: usize, lx: usize) -> std::result::Result<(), &'static str> {
    if p.coeff(0) != 1 {
        return Err("constant term is not 1");
    }
    if ly == lx {
        return if p.degree() == Some(0) { Ok(()) } else { Err("P_{x,x} is not 1") };
    }
    if 2 * p.degree().unwrap_or(0) + 1 > lx - ly {
        return Err("degree bound violated");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::RootSystem;

    fn table(name: &str) -> KlTable {
        let rs = Arc::new(RootSystem::new(name.parse().unwrap()));
        KlTable::new(Arc::new(AffineWeylGroup::new(rs)))
    }

    #[test]
    fn polynomial_basics() {
        assert_eq!(KLPolynomial::one().evaluate_at_one(), 1);
        assert_eq!(KLPolynomial::zero().evaluate_at_one(), 0);
        let p = KLPolynomial::from_coeffs(vec![1, 1, 0]);
        assert_eq!(p.evaluate_at_one(), 2);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.to_string(), "1 + q");
        assert_eq!(KLPolynomial::from_coeffs(vec![1, -2, 0, 1]).to_string(), "1 - 2q + q^3");
    }

    #[test]
    fn affine_a1_all_ones() {
        let t = table("A1");
        let g = t.group();
        let els = g.elements_up_to_length(8).unwrap();
        for x in &els {
            for y in &els {
                let p = t.kl_polynomial(y, x).unwrap();
                if g.bruhat_leq(y, x) {
                    assert_eq!(p, KLPolynomial::one());
                    let d = g.length(x) - g.length(y);
                    assert_eq!(t.mu_coefficient(y, x).unwrap(), i64::from(d == 1));
                } else {
                    assert!(p.is_zero());
                }
            }
        }
    }

    #[test]
    fn trivial_cases() {
        let t = table("A2");
        let g = t.group();
        let x = g.from_word(&[0, 1, 2, 0]).unwrap();
        assert_eq!(t.kl_polynomial(&x, &x).unwrap(), KLPolynomial::one());
        assert_eq!(t.mu_coefficient(&x, &x).unwrap(), 0);
        let y = g.from_word(&[1, 2, 0, 1, 2]).unwrap();
        assert!(t.kl_polynomial(&y, &x).unwrap().is_zero());
        assert!(matches!(t.kl_polynomial_with_descent(&y, &x, 2), Err(Error::Consistency(_))));
    }

    #[test]
    fn affine_a2_has_nontrivial_polynomials() {
        let t = table("A2");
        let g = t.group();
        let mut max = 0;
        for x in g.elements_up_to_length(8).unwrap() {
            for p in t.column(&x).unwrap().values() {
                max = max.max(p.evaluate_at_one());
            }
        }
        assert!(max >= 2, "{max}");
    }

    type Poly = Vec<i64>;

    fn padd(a: &mut Poly, b: &Poly, shift: usize, f: i64) {
        if a.len() < b.len() + shift {
            a.resize(b.len() + shift, 0);
        }
        for (i, c) in b.iter().enumerate() {
            a[i + shift] += f * c;
        }
    }

    fn trim(mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    /// `R_{y,w}` from its own recursion, independent of the KL code.
    fn r_poly(g: &AffineWeylGroup, y: &AffineElement, w: &AffineElement, memo: &mut HashMap<(AffineElement, AffineElement), Poly>) -> Poly {
        if !g.bruhat_leq(y, w) {
            return vec![];
        }
        if y == w {
            return vec![1];
        }
        if let Some(r) = memo.get(&(y.clone(), w.clone())) {
            return r.clone();
        }
        let s = g.left_descents(w)[0];
        let sw = g.left_mul_gen(s, w);
        let sy = g.left_mul_gen(s, y);
        let r = if g.is_left_descent(y, s) {
            r_poly(g, &sy, &sw, memo)
        } else {
            // (q − 1) R_{y,sw} + q R_{sy,sw}
            let a = r_poly(g, y, &sw, memo);
            let b = r_poly(g, &sy, &sw, memo);
            let mut out = vec![];
            padd(&mut out, &a, 1, 1);
            padd(&mut out, &a, 0, -1);
            padd(&mut out, &b, 1, 1);
            trim(out)
        };
        memo.insert((y.clone(), w.clone()), r.clone());
        r
    }

    /// `q^{ℓ(w)−ℓ(y)} P_{y,w}(q^{-1}) = Σ_{y ≤ z ≤ w} R_{y,z} P_{z,w}`.
    fn check_r_identity(name: &str, max_len: usize) {
        let t = table(name);
        let g = t.group();
        let mut memo = HashMap::new();
        for w in g.elements_up_to_length(max_len).unwrap() {
            let iv = g.lower_interval(&w).unwrap();
            let lw = g.length(&w);
            for y in iv.iter() {
                let d = lw - g.length(y);
                let p = t.kl_polynomial(y, &w).unwrap();
                let mut lhs = vec![0; d + 1];
                for (i, c) in p.coeffs().iter().enumerate() {
                    lhs[d - i] += c;
                }
                let mut rhs = vec![];
                for z in iv.iter().filter(|z| g.bruhat_leq(y, z)) {
                    let r = r_poly(g, y, z, &mut memo);
                    let pz = t.kl_polynomial(z, &w).unwrap();
                    let mut prod = vec![0; r.len() + pz.coeffs().len()];
                    for (i, a) in r.iter().enumerate() {
                        for (j, b) in pz.coeffs().iter().enumerate() {
                            prod[i + j] += a * b;
                        }
                    }
                    padd(&mut rhs, &prod, 0, 1);
                }
                assert_eq!(trim(lhs), trim(rhs), "{name} y={:?} w={:?}", g.reduced_word(y), g.reduced_word(&w));
            }
        }
    }

    #[test]
    fn r_polynomial_cross_check() {
        check_r_identity("A1", 6);
        check_r_identity("A2", 6);
        check_r_identity("B2", 5);
    }

    #[test]
    fn descent_independence() {
        for (name, n) in [("A1", 8), ("A2", 7), ("G2", 6)] {
            let t = table(name);
            let g = t.group();
            for x in g.elements_up_to_length(n).unwrap() {
                let reference = t.column(&x).unwrap();
                for s in g.left_descents(&x) {
                    for y in g.lower_interval(&x).unwrap().iter() {
                        let p = t.kl_polynomial_with_descent(y, &x, s).unwrap();
                        assert_eq!(p, reference[y]);
                    }
                }
            }
        }
    }

    #[test]
    fn cache_transparency_and_validation() {
        let t = table("A2");
        for x in t.group().elements_up_to_length(6).unwrap() {
            t.column(&x).unwrap();
        }
        let doc = t.export();
        let json = doc.to_json();
        assert!(json.starts_with(r#"{"version":1,"coxeter_type":"A2~","entries":[{"y":"#));
        let fresh = table("A2");
        assert_eq!(fresh.import(&KlCacheDocument::from_json(&json).unwrap()).unwrap(), t.num_columns());
        assert_eq!(fresh.export(), doc);
        let recomputed = table("A2");
        for x in t.group().elements_up_to_length(6).unwrap() {
            assert_eq!(*fresh.column(&x).unwrap(), *recomputed.column(&x).unwrap());
        }

        let reject = |d: &KlCacheDocument| {
            let target = table("A2");
            assert!(matches!(target.import(d), Err(Error::Cache(_))));
            assert_eq!(target.num_columns(), 0);
        };
        reject(&KlCacheDocument { version: 2, ..doc.clone() });
        reject(&KlCacheDocument { coxeter_type: "A1~".into(), ..doc.clone() });
        let mut bad = doc.clone();
        bad.entries.last_mut().unwrap().coeffs = vec![2];
        reject(&bad);
        let mut bad = doc.clone();
        bad.entries.pop();
        reject(&bad);
        let mut bad = doc.clone();
        bad.entries[0].x = vec![1, 0];
        reject(&bad);
        assert!(KlCacheDocument::from_json("{\"version\":1}").is_err());
    }
}
