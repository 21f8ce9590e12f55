//! Shared context for the prime-dependent computations: the root system, the
//! prime, the KL table, and compute-once character caches.
//!
//! All characters derived from ch L are computed in LCF-assumed mode: for
//! restricted `λ₀`, ch L(λ₀) is taken to be the expansion of `χ_KL(λ₀)`.

use std::sync::Arc;

use dashmap::DashMap;

use crate::alcove::{check_prime_at_least_h, AffineWeylGroup, DEFAULT_INTERVAL_CAP};
use crate::characters::{weyl_character, FormalCharacter};
use crate::error::{Error, Result};
use crate::klpoly::KlTable;
use crate::lcf::ChiCombination;
use crate::rootdata::{CartanType, RootSystem, Weight};

pub struct Engine {
    pub(crate) rs: Arc<RootSystem>,
    pub(crate) p: u32,
    pub(crate) kl: Arc<KlTable>,
    pub(crate) weyl: DashMap<Weight, Arc<FormalCharacter>>,
    pub(crate) chi: DashMap<Weight, Arc<ChiCombination>>,
    pub(crate) irreducible: DashMap<Weight, Arc<FormalCharacter>>,
    pub(crate) delta_red: DashMap<Weight, Arc<FormalCharacter>>,
    pub(crate) baby_verma_factors: DashMap<Weight, Arc<Vec<(Weight, i64)>>>,
    pub(crate) q1_hat: DashMap<Weight, Arc<FormalCharacter>>,
}

impl Engine {
    /// Requires `p` prime with `p ≥ h`.
    pub fn new(t: CartanType, p: u32) -> Result<Self> {
        Self::with_interval_cap(t, p, DEFAULT_INTERVAL_CAP)
    }

    pub fn with_interval_cap(t: CartanType, p: u32, cap: usize) -> Result<Self> {
        let rs = Arc::new(RootSystem::new(t));
        let group = Arc::new(AffineWeylGroup::with_interval_cap(rs.clone(), cap));
        Self::with_kl_table(p, Arc::new(KlTable::new(group)))
    }

    /// Reuses an existing KL table, which is valid for every prime.
    pub fn with_kl_table(p: u32, kl: Arc<KlTable>) -> Result<Self> {
        let rs = kl.group().root_system_arc().clone();
        check_prime_at_least_h(&rs, p, "the alcove model and the LCF")?;
        Ok(Self {
            rs,
            p,
            kl,
            weyl: DashMap::new(),
            chi: DashMap::new(),
            irreducible: DashMap::new(),
            delta_red: DashMap::new(),
            baby_verma_factors: DashMap::new(),
            q1_hat: DashMap::new(),
        })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn cartan_type(&self) -> CartanType {
        self.rs.cartan_type()
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn kl_table(&self) -> &Arc<KlTable> {
        &self.kl
    }

    pub fn group(&self) -> &AffineWeylGroup {
        self.kl.group()
    }

    /// `p ≥ 2h − 2`, the standing hypothesis of the filtration theorem.
    pub fn p_ge_2h_minus_2(&self) -> bool {
        self.p as i64 >= 2 * self.rs.coxeter_number() - 2
    }

    /// Cached `χ(λ)`.
    pub fn weyl(&self, lambda: &Weight) -> Result<Arc<FormalCharacter>> {
        if let Some(c) = self.weyl.get(lambda) {
            return Ok(c.clone());
        }
        let c = Arc::new(weyl_character(&self.rs, lambda)?);
        Ok(self.weyl.entry(lambda.clone()).or_insert(c).clone())
    }

    pub(crate) fn check_type(&self, t: CartanType) -> Result<()> {
        if t != self.cartan_type() {
            return Err(Error::RootSystemMismatch { left: t.to_string(), right: self.cartan_type().to_string() });
        }
        Ok(())
    }
}

/// Inserts `value` unless another thread got there first; either way returns
/// the stored value.
pub(crate) fn publish<T>(map: &DashMap<Weight, Arc<T>>, key: &Weight, value: T) -> Arc<T> {
    map.entry(key.clone()).or_insert_with(|| Arc::new(value)).clone()
}
