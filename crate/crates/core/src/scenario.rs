//! Problem-instance containers shared by the allocators, the grouping loop,
//! the simulator, and the CLI: the NOMA scenario itself, the assignment of
//! entities to resource groups, and solved allocations.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ModelError, NoiseRatio, PairProfile, SystemDims};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("scenario declares {want} pairs but provides {got} pair profiles")]
    PairCount { got: usize, want: usize },
    #[error("total normalized bit budget must be positive and finite, got {0}")]
    BadBitBudget(f64),
    #[error("group {0} is empty")]
    EmptyGroup(usize),
    #[error("pair {pair} assigned to group {group}, valid range is {lo}..={hi}")]
    PairGroupOutOfRange {
        pair: usize,
        group: usize,
        lo: usize,
        hi: usize,
    },
    #[error("grouping covers {got} pairs, scenario has {want}")]
    GroupingPairCount { got: usize, want: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A served entity: an unpaired user or a user pair sharing one beam.
///
/// The global entity order puts singletons first, then pairs, both by index;
/// tie-breaking rules in the crate resolve toward the smaller entity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EntityId {
    Singleton(usize),
    Pair(usize),
}

impl std::fmt::Display for EntityId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EntityId::Singleton(l) => write!(f, "singleton:{l}"),
            EntityId::Pair(k) => write!(f, "pair:{k}"),
        }
    }
}

/// One NOMA problem instance: dimensions, noise level, total normalized CDI
/// bit budget `B̂_tot = B_tot/N_t²`, and per-pair channel statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NomaScenario {
    dims: SystemDims,
    noise: NoiseRatio,
    b_hat_tot: f64,
    pairs: Vec<PairProfile>,
}

impl NomaScenario {
    pub fn new(
        dims: SystemDims,
        noise: NoiseRatio,
        b_hat_tot: f64,
        pairs: Vec<PairProfile>,
    ) -> Result<Self, ScenarioError> {
        if pairs.len() != dims.n_pairs() {
            return Err(ScenarioError::PairCount {
                got: pairs.len(),
                want: dims.n_pairs(),
            });
        }
        if !(b_hat_tot > 0.0 && b_hat_tot.is_finite()) {
            return Err(ScenarioError::BadBitBudget(b_hat_tot));
        }
        Ok(Self {
            dims,
            noise,
            b_hat_tot,
            pairs,
        })
    }

    pub fn dims(&self) -> SystemDims {
        self.dims
    }

    pub fn noise(&self) -> NoiseRatio {
        self.noise
    }

    pub fn b_hat_tot(&self) -> f64 {
        self.b_hat_tot
    }

    pub fn pairs(&self) -> &[PairProfile] {
        &self.pairs
    }

    /// Same instance with a different total bit budget (used by sweeps).
    pub fn with_bit_budget(&self, b_hat_tot: f64) -> Result<Self, ScenarioError> {
        Self::new(self.dims, self.noise, b_hat_tot, self.pairs.clone())
    }
}

/// Assignment of entities to resource groups.
///
/// Groups are indexed `1..=G`. When singletons exist they all live in group 1
/// and pairs occupy groups `2..=G`; in pair-only scenarios the pairs span
/// `1..=G`. Every group is nonempty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupingMap {
    n_groups: usize,
    has_singletons: bool,
    pair_group: Vec<usize>,
}

impl GroupingMap {
    /// Build and validate a grouping from a per-pair group assignment
    /// (1-based group indices).
    pub fn new(
        scenario: &NomaScenario,
        pair_group: Vec<usize>,
    ) -> Result<Self, ScenarioError> {
        let has_singletons = scenario.dims().n_singleton_beams() > 0;
        if pair_group.len() != scenario.pairs().len() {
            return Err(ScenarioError::GroupingPairCount {
                got: pair_group.len(),
                want: scenario.pairs().len(),
            });
        }
        let lo = if has_singletons { 2 } else { 1 };
        let n_groups = pair_group
            .iter()
            .copied()
            .max()
            .unwrap_or(0)
            .max(if has_singletons { 1 } else { 0 });
        for (pair, &g) in pair_group.iter().enumerate() {
            if g < lo || g > n_groups {
                return Err(ScenarioError::PairGroupOutOfRange {
                    pair,
                    group: g,
                    lo,
                    hi: n_groups,
                });
            }
        }
        let map = Self {
            n_groups,
            has_singletons,
            pair_group,
        };
        for g in 1..=n_groups {
            if map.beams_in_group(g, scenario.dims()) == 0 {
                return Err(ScenarioError::EmptyGroup(g));
            }
        }
        Ok(map)
    }

    /// Singletons in group 1 (when present), all pairs in one further group.
    pub fn singletons_plus_one_pair_group(
        scenario: &NomaScenario,
    ) -> Result<Self, ScenarioError> {
        let has_singletons = scenario.dims().n_singleton_beams() > 0;
        let g = if has_singletons { 2 } else { 1 };
        Self::new(scenario, vec![g; scenario.pairs().len()])
    }

    /// Pair-only scenario with a single group.
    pub fn all_pairs_one_group(scenario: &NomaScenario) -> Result<Self, ScenarioError> {
        Self::new(scenario, vec![1; scenario.pairs().len()])
    }

    /// Fixed grouping: pairs are cut into `n_pair_groups` contiguous,
    /// near-equal index ranges.
    pub fn contiguous(
        scenario: &NomaScenario,
        n_pair_groups: usize,
    ) -> Result<Self, ScenarioError> {
        let p = scenario.pairs().len();
        let npg = n_pair_groups.max(1).min(p.max(1));
        let offset = if scenario.dims().n_singleton_beams() > 0 {
            2
        } else {
            1
        };
        let assignment = (0..p).map(|k| offset + k * npg / p.max(1)).collect();
        Self::new(scenario, assignment)
    }

    pub fn n_groups(&self) -> usize {
        self.n_groups
    }

    /// Group holding all singletons, if the scenario has any.
    pub fn singleton_group(&self) -> Option<usize> {
        self.has_singletons.then_some(1)
    }

    /// First group index available to pairs.
    pub fn first_pair_group(&self) -> usize {
        if self.has_singletons {
            2
        } else {
            1
        }
    }

    pub fn pair_group(&self, pair: usize) -> usize {
        self.pair_group[pair]
    }

    pub fn pair_groups(&self) -> &[usize] {
        &self.pair_group
    }

    pub fn pairs_in_group(&self, g: usize) -> impl Iterator<Item = usize> + '_ {
        self.pair_group
            .iter()
            .enumerate()
            .filter(move |&(_, &pg)| pg == g)
            .map(|(k, _)| k)
    }

    /// Number of beams assigned to group `g`.
    pub fn beams_in_group(&self, g: usize, dims: SystemDims) -> usize {
        let pairs = self.pair_group.iter().filter(|&&pg| pg == g).count();
        if Some(g) == self.singleton_group() {
            pairs + dims.n_singleton_beams()
        } else {
            pairs
        }
    }

    /// Normalized beam count `M̄_g` per group, indexed `g − 1`.
    pub fn m_bars(&self, dims: SystemDims) -> Vec<f64> {
        (1..=self.n_groups)
            .map(|g| dims.group_m_bar(self.beams_in_group(g, dims)))
            .collect()
    }

    /// Rebuild after moving one pair, dropping any group the move emptied and
    /// relabeling the groups above it down by one.
    pub fn with_pair_moved(
        &self,
        scenario: &NomaScenario,
        pair: usize,
        to_group: usize,
    ) -> Result<Self, ScenarioError> {
        let mut assignment = self.pair_group.clone();
        let from = assignment[pair];
        assignment[pair] = to_group;
        if from != to_group && !assignment.iter().any(|&g| g == from) {
            for g in assignment.iter_mut() {
                if *g > from {
                    *g -= 1;
                }
            }
        }
        Self::new(scenario, assignment)
    }
}

/// A solved NOMA allocation: per-group power fractions and normalized CDI
/// bits (indexed `group − 1`), plus per-pair power decay factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NomaAllocation {
    pub zeta: Vec<f64>,
    pub b_bar: Vec<f64>,
    pub alpha: Vec<f64>,
}

impl NomaAllocation {
    /// Budget usage `(Σ ζ_g M̄_g, Σ B̄_g M̄_g)`; at an optimum both equal the
    /// budgets `K̄` and `B̂_tot`.
    pub fn budget_usage(&self, grouping: &GroupingMap, dims: SystemDims) -> (f64, f64) {
        let m_bars = grouping.m_bars(dims);
        let power: f64 = self.zeta.iter().zip(&m_bars).map(|(z, m)| z * m).sum();
        let bits: f64 = self.b_bar.iter().zip(&m_bars).map(|(b, m)| b * m).sum();
        (power, bits)
    }
}
