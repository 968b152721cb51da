//! Fourier-basis measurement of the order register, projective coin
//! measurement, and walker position distributions.
//!
//! Basis kets follow `|F_m⟩ = Σ_k e^{−2πimk/d} |k⟩ / √d`. Projecting contracts
//! with the bra `⟨F_m|`, whose components are the conjugates `e^{+2πimk/d}/√d`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::state::{Chirality, ConditionalState, PositionLattice, SystemState};
use crate::{Result, WalkError, ZERO_WEIGHT};

/// Roundoff allowance below zero before a probability is rejected.
const NEGATIVE_CLAMP: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct FourierVector {
    d: usize,
    m: usize,
    components: Vec<Complex64>,
}

impl FourierVector {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn index(&self) -> usize {
        self.m
    }

    /// Ket components `⟨k|F_m⟩`.
    pub fn components(&self) -> &[Complex64] {
        &self.components
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &FourierVector) -> Complex64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

pub fn fourier_vector(d: usize, m: usize) -> Result<FourierVector> {
    if m >= d {
        return Err(WalkError::IndexOutOfRange { index: m, dim: d });
    }
    let norm = 1.0 / (d as f64).sqrt();
    let components = (0..d)
        .map(|k| {
            // Reduce mk mod d first so the phase argument stays small.
            let phase = -2.0 * PI * ((m * k) % d) as f64 / d as f64;
            Complex64::from_polar(norm, phase)
        })
        .collect();
    Ok(FourierVector { d, m, components })
}

/// `⟨F_m| ⊗ I` applied to the state; the result keeps its squared norm as
/// the branch weight.
pub fn project_order(state: &SystemState, m: usize) -> Result<ConditionalState> {
    let f = fourier_vector(state.order_dim(), m)?;
    let block = 2 * state.lattice().len();
    let mut out = vec![Complex64::new(0.0, 0.0); block];
    for (k, c) in f.components().iter().enumerate() {
        let bra = c.conj();
        for (o, a) in out.iter_mut().zip(state.branch(k)) {
            *o += bra * a;
        }
    }
    Ok(ConditionalState::new(state.lattice(), out))
}

/// Keeps the `phi` slice only.
pub fn project_coin(state: &ConditionalState, phi: Chirality) -> ConditionalState {
    ConditionalState::single(state.lattice(), phi, state.slice(phi).to_vec())
}

pub fn branch_probability(state: &ConditionalState) -> f64 {
    state.weight()
}

/// Position distribution over a contiguous window of sites.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    origin: i64,
    min_site: i64,
    probabilities: Vec<f64>,
    normalized: bool,
    total_mass: f64,
}

impl Distribution {
    /// Builds a distribution from per-site values starting at `min_site`.
    /// Values down to −1e−15 are clamped to zero; anything more negative is
    /// an error. `total_mass` is the sum of the values before normalization.
    pub fn from_values(
        origin: i64,
        min_site: i64,
        values: Vec<f64>,
        normalize: bool,
    ) -> Result<Self> {
        let mut probabilities = Vec::with_capacity(values.len());
        for (i, v) in values.into_iter().enumerate() {
            if v < -NEGATIVE_CLAMP {
                return Err(WalkError::NegativeProbability {
                    site: min_site + i as i64,
                    value: v,
                });
            }
            probabilities.push(v.max(0.0));
        }
        let total_mass: f64 = probabilities.iter().sum();
        if normalize {
            if total_mass <= ZERO_WEIGHT {
                return Err(WalkError::ZeroBranch);
            }
            for p in &mut probabilities {
                *p /= total_mass;
            }
        }
        Ok(Self {
            origin,
            min_site,
            probabilities,
            normalized: normalize,
            total_mass,
        })
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn with_origin(mut self, origin: i64) -> Self {
        self.origin = origin;
        self
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Mass before any normalization (the branch weight for projected states).
    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn window(&self) -> PositionLattice {
        PositionLattice::new(
            self.min_site,
            self.min_site + self.probabilities.len() as i64 - 1,
        )
        .expect("non-empty distribution")
    }

    pub fn prob(&self, site: i64) -> f64 {
        let off = site - self.min_site;
        if off < 0 {
            return 0.0;
        }
        self.probabilities.get(off as usize).copied().unwrap_or(0.0)
    }

    /// Probability at `origin + offset`.
    pub fn prob_offset(&self, offset: i64) -> f64 {
        self.prob(self.origin + offset)
    }

    pub fn sum(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// `(site, probability)` over the whole window, zeros included.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.probabilities
            .iter()
            .enumerate()
            .map(|(i, &p)| (self.min_site + i as i64, p))
    }

    /// Sites carrying probability above [`ZERO_WEIGHT`], ascending.
    pub fn support(&self) -> Vec<(i64, f64)> {
        self.iter().filter(|&(_, p)| p > ZERO_WEIGHT).collect()
    }

    pub fn support_min(&self) -> Option<i64> {
        self.support().first().map(|&(s, _)| s)
    }

    pub fn support_max(&self) -> Option<i64> {
        self.support().last().map(|&(s, _)| s)
    }

    /// Largest `|P(origin − l) − P(origin + l)|`.
    pub fn asymmetry(&self) -> f64 {
        let w = self.window();
        let reach = (self.origin - w.min_site()).max(w.max_site() - self.origin);
        (1..=reach)
            .map(|l| (self.prob(self.origin - l) - self.prob(self.origin + l)).abs())
            .fold(0.0, f64::max)
    }

    /// Largest site-wise difference against another distribution.
    pub fn max_abs_diff(&self, other: &Distribution) -> f64 {
        let lo = self.window().min_site().min(other.window().min_site());
        let hi = self.window().max_site().max(other.window().max_site());
        (lo..=hi)
            .map(|x| (self.prob(x) - other.prob(x)).abs())
            .fold(0.0, f64::max)
    }
}

/// Per-site `|amplitude|²` summed over the chirality slices present.
/// The origin is taken as the lattice midpoint, which is where
/// [`crate::state::make_initial_state`] puts the walker.
pub fn distribution(state: &ConditionalState, normalize: bool) -> Result<Distribution> {
    let lattice = state.lattice();
    let fwd = state.slice(Chirality::Forward);
    let bwd = state.slice(Chirality::Backward);
    let values = fwd
        .iter()
        .zip(bwd)
        .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
        .collect();
    let origin = (lattice.min_site() + lattice.max_site()).div_euclid(2);
    Distribution::from_values(origin, lattice.min_site(), values, normalize)
}
