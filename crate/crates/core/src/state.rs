//! Joint order ⊗ coin ⊗ walker amplitudes on a bounded lattice.
//!
//! Amplitudes are laid out as `[order][chirality][site]`, with `site` running
//! from `lattice.min_site` to `lattice.max_site`. Lattices built by
//! [`make_initial_state`] leave one spare site on each side of the light cone
//! so the boundary is never populated.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Result, WalkError, AMPLITUDE_TOL};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chirality {
    /// ▷, moves the walker one site up. Index 0.
    #[serde(rename = "right")]
    Forward,
    /// ◀, moves the walker one site down. Index 1.
    #[serde(rename = "left")]
    Backward,
}

impl Chirality {
    pub const BOTH: [Chirality; 2] = [Chirality::Forward, Chirality::Backward];

    pub fn index(self) -> usize {
        match self {
            Chirality::Forward => 0,
            Chirality::Backward => 1,
        }
    }

    pub fn from_index(i: usize) -> Self {
        if i == 0 {
            Chirality::Forward
        } else {
            Chirality::Backward
        }
    }

    /// The orthogonal chirality.
    pub fn flip(self) -> Self {
        match self {
            Chirality::Forward => Chirality::Backward,
            Chirality::Backward => Chirality::Forward,
        }
    }

    /// Displacement applied by the shifter: +1 or −1.
    pub fn direction(self) -> i64 {
        match self {
            Chirality::Forward => 1,
            Chirality::Backward => -1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Chirality::Forward => "right",
            Chirality::Backward => "left",
        }
    }
}

impl std::str::FromStr for Chirality {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "right" | "forward" => Ok(Chirality::Forward),
            "left" | "backward" => Ok(Chirality::Backward),
            other => Err(format!("unknown chirality `{other}` (expected right|left)")),
        }
    }
}

/// Inclusive range of lattice sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionLattice {
    min_site: i64,
    max_site: i64,
}

impl PositionLattice {
    pub fn new(min_site: i64, max_site: i64) -> Result<Self> {
        if min_site > max_site {
            return Err(WalkError::InvalidLattice {
                min: min_site,
                max: max_site,
            });
        }
        Ok(Self { min_site, max_site })
    }

    /// Lattice that can hold `total_steps` steps from `n0` without any
    /// amplitude touching the boundary.
    pub fn for_walk(n0: i64, total_steps: usize) -> Self {
        let reach = total_steps as i64 + 1;
        Self {
            min_site: n0 - reach,
            max_site: n0 + reach,
        }
    }

    pub fn min_site(&self) -> i64 {
        self.min_site
    }

    pub fn max_site(&self) -> i64 {
        self.max_site
    }

    pub fn len(&self) -> usize {
        (self.max_site - self.min_site + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, site: i64) -> bool {
        site >= self.min_site && site <= self.max_site
    }

    pub fn offset(&self, site: i64) -> Option<usize> {
        self.contains(site).then(|| (site - self.min_site) as usize)
    }

    pub fn site(&self, offset: usize) -> i64 {
        self.min_site + offset as i64
    }

    pub fn sites(&self) -> impl Iterator<Item = i64> {
        self.min_site..=self.max_site
    }

    pub fn covers(&self, other: &PositionLattice) -> bool {
        self.min_site <= other.min_site && self.max_site >= other.max_site
    }
}

/// Pure state of the order register, the coin and the walker.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemState {
    order_dim: usize,
    lattice: PositionLattice,
    amplitudes: Vec<Complex64>,
}

impl SystemState {
    pub fn zeros(order_dim: usize, lattice: PositionLattice) -> Self {
        Self {
            order_dim,
            lattice,
            amplitudes: vec![ZERO; order_dim * 2 * lattice.len()],
        }
    }

    pub fn order_dim(&self) -> usize {
        self.order_dim
    }

    pub fn lattice(&self) -> PositionLattice {
        self.lattice
    }

    /// Amplitude at `(order, chirality, site)`; zero outside the lattice.
    pub fn amplitude(&self, order: usize, chirality: Chirality, site: i64) -> Complex64 {
        match self.lattice.offset(site) {
            Some(off) if order < self.order_dim => {
                self.amplitudes[self.slice_start(order, chirality) + off]
            }
            _ => ZERO,
        }
    }

    pub fn set_amplitude(
        &mut self,
        order: usize,
        chirality: Chirality,
        site: i64,
        value: Complex64,
    ) {
        let off = self.lattice.offset(site).expect("site outside the lattice");
        let start = self.slice_start(order, chirality);
        self.amplitudes[start + off] = value;
    }

    /// Amplitudes of one `(order, chirality)` slice, indexed by lattice offset.
    pub fn slice(&self, order: usize, chirality: Chirality) -> &[Complex64] {
        let start = self.slice_start(order, chirality);
        &self.amplitudes[start..start + self.lattice.len()]
    }

    pub fn slice_mut(&mut self, order: usize, chirality: Chirality) -> &mut [Complex64] {
        let start = self.slice_start(order, chirality);
        let len = self.lattice.len();
        &mut self.amplitudes[start..start + len]
    }

    /// Both chirality slices of one order branch, `[forward, backward]`.
    pub fn branch_mut(&mut self, order: usize) -> (&mut [Complex64], &mut [Complex64]) {
        let len = self.lattice.len();
        let start = order * 2 * len;
        let (fwd, bwd) = self.amplitudes[start..start + 2 * len].split_at_mut(len);
        (fwd, bwd)
    }

    pub fn branch(&self, order: usize) -> &[Complex64] {
        let len = self.lattice.len();
        &self.amplitudes[order * 2 * len..(order + 1) * 2 * len]
    }

    pub(crate) fn branch_block_mut(&mut self, order: usize) -> &mut [Complex64] {
        let len = self.lattice.len();
        &mut self.amplitudes[order * 2 * len..(order + 1) * 2 * len]
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn norm_squared(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    fn slice_start(&self, order: usize, chirality: Chirality) -> usize {
        (order * 2 + chirality.index()) * self.lattice.len()
    }
}

/// Coin ⊗ walker state left after measuring the order register, optionally
/// also restricted to one chirality. Never renormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalState {
    lattice: PositionLattice,
    chirality: Option<Chirality>,
    // [forward slice | backward slice]
    amplitudes: Vec<Complex64>,
    weight: f64,
}

impl ConditionalState {
    pub fn new(lattice: PositionLattice, amplitudes: Vec<Complex64>) -> Self {
        assert_eq!(amplitudes.len(), 2 * lattice.len());
        let weight = norm_sqr(&amplitudes);
        Self {
            lattice,
            chirality: None,
            amplitudes,
            weight,
        }
    }

    /// Single-slice state: `slice` holds the `chirality` amplitudes, the other
    /// slice is zero.
    pub fn single(lattice: PositionLattice, chirality: Chirality, slice: Vec<Complex64>) -> Self {
        assert_eq!(slice.len(), lattice.len());
        let mut amplitudes = vec![ZERO; 2 * lattice.len()];
        let start = chirality.index() * lattice.len();
        amplitudes[start..start + lattice.len()].copy_from_slice(&slice);
        let weight = norm_sqr(&slice);
        Self {
            lattice,
            chirality: Some(chirality),
            amplitudes,
            weight,
        }
    }

    /// Order-branch `order` of a full state as a conditional state.
    pub fn from_branch(state: &SystemState, order: usize) -> Self {
        Self::new(state.lattice(), state.branch(order).to_vec())
    }

    pub fn lattice(&self) -> PositionLattice {
        self.lattice
    }

    /// `Some` once the coin has been projected.
    pub fn chirality(&self) -> Option<Chirality> {
        self.chirality
    }

    pub fn slice(&self, chirality: Chirality) -> &[Complex64] {
        let start = chirality.index() * self.lattice.len();
        &self.amplitudes[start..start + self.lattice.len()]
    }

    pub fn amplitude(&self, chirality: Chirality, site: i64) -> Complex64 {
        self.lattice
            .offset(site)
            .map_or(ZERO, |off| self.slice(chirality)[off])
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Squared norm; the probability of the branch this state represents.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn norm_squared(&self) -> f64 {
        self.weight
    }

    /// Smallest window containing every nonzero amplitude, if any.
    pub fn support(&self) -> Option<PositionLattice> {
        let len = self.lattice.len();
        let nonzero =
            |off: usize| self.amplitudes[off] != ZERO || self.amplitudes[len + off] != ZERO;
        let first = (0..len).find(|&o| nonzero(o))?;
        let last = (0..len).rev().find(|&o| nonzero(o))?;
        Some(PositionLattice {
            min_site: self.lattice.site(first),
            max_site: self.lattice.site(last),
        })
    }
}

/// Position-basis density matrix `M[i][j] = ψ(i)·conj(ψ(j))` of a
/// single-chirality conditional state.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkerDensityMatrix {
    window: PositionLattice,
    entries: Vec<Complex64>,
}

impl WalkerDensityMatrix {
    pub fn window(&self) -> PositionLattice {
        self.window
    }

    pub fn dim(&self) -> usize {
        self.window.len()
    }

    /// Entry `⟨row|ρ|col⟩`; zero outside the window.
    pub fn get(&self, row: i64, col: i64) -> Complex64 {
        match (self.window.offset(row), self.window.offset(col)) {
            (Some(r), Some(c)) => self.entries[r * self.dim() + c],
            _ => ZERO,
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim())
            .map(|i| self.entries[i * self.dim() + i].re)
            .sum()
    }

    /// Diagonal (population) terms in window order.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|i| self.entries[i * self.dim() + i].re)
            .collect()
    }

    /// Largest `|M[i][j] − conj(M[j][i])|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in 0..d {
                let delta = self.entries[i * d + j] - self.entries[j * d + i].conj();
                worst = worst.max(delta.norm());
            }
        }
        worst
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }
}

/// `1/√d` in every order slot.
pub fn balanced_order(order_dim: usize) -> Vec<Complex64> {
    let a = 1.0 / (order_dim as f64).sqrt();
    vec![Complex64::new(a, 0.0); order_dim]
}

/// Product state `Σ_k c_k |k⟩ ⊗ |phi0⟩ ⊗ |n0⟩` on a lattice sized for
/// `total_steps` steps.
pub fn make_initial_state(
    order_dim: usize,
    order_amplitudes: &[Complex64],
    n0: i64,
    phi0: Chirality,
    total_steps: usize,
) -> Result<SystemState> {
    if order_dim == 0 || order_amplitudes.len() != order_dim {
        return Err(WalkError::OrderDimension {
            expected: order_dim,
            actual: order_amplitudes.len(),
        });
    }
    let norm = norm_sqr(order_amplitudes);
    if (norm - 1.0).abs() > AMPLITUDE_TOL {
        return Err(WalkError::Normalization(norm));
    }
    let mut state = SystemState::zeros(order_dim, PositionLattice::for_walk(n0, total_steps));
    for (k, &c) in order_amplitudes.iter().enumerate() {
        state.set_amplitude(k, phi0, n0, c);
    }
    Ok(state)
}

/// Density matrix of a single-chirality conditional state over `window`.
pub fn walker_density(
    state: &ConditionalState,
    window: PositionLattice,
) -> Result<WalkerDensityMatrix> {
    let chirality = state.chirality().ok_or(WalkError::MixedChirality)?;
    if let Some(support) = state.support() {
        if !window.covers(&support) {
            return Err(WalkError::Window {
                min: window.min_site(),
                max: window.max_site(),
            });
        }
    }
    let amps: Vec<Complex64> = window
        .sites()
        .map(|site| state.amplitude(chirality, site))
        .collect();
    let d = amps.len();
    let mut entries = Vec::with_capacity(d * d);
    for a in &amps {
        for b in &amps {
            entries.push(a * b.conj());
        }
    }
    Ok(WalkerDensityMatrix { window, entries })
}

pub(crate) fn norm_sqr(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}
