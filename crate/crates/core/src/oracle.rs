//! Operator-expansion oracle.
//!
//! A single step factors as `S(C ⊗ I) = (|▷⟩⟨▷|C) ⊗ X_{+1} + (|◀⟩⟨◀|C) ⊗ X_{−1}`
//! where `X_a = Σ_n |n+a⟩⟨n|`. Multiplying out σ steps gives `2^σ` words
//! `A_k ⊗ X_{D_k}`, with `D_k` the number of forward projectors minus the
//! number of backward ones. Terms sharing a displacement are summed, since
//! every distribution only depends on the merged coin-space matrix.
//!
//! Nothing here calls into the engine: the 2×2 algebra, the products and the
//! contractions are all local, so agreement with the engine is evidence.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coin::{su2_coin, CoinOperator, ProcessSpec};
use crate::measure::{distribution, project_coin, project_order, Distribution};
use crate::state::{balanced_order, make_initial_state, Chirality};
use crate::switch::apply_2switch;
use crate::{Result, WalkError};

/// Largest process length [`expand_propagator`] will enumerate.
pub const MAX_EXPANSION_STEPS: usize = 14;
/// Largest number of raw pairwise products in a composition.
const MAX_PAIR_PRODUCTS: usize = 1 << 20;
/// Largest total step count the engine cross-check accepts.
pub const MAX_VERIFY_STEPS: usize = 12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// 2×2 coin-space matrix, `m[out][in]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ZERO]]);
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);

    pub fn from_coin(coin: &CoinOperator) -> Self {
        Mat2(*coin.matrix())
    }

    /// `|phi⟩⟨phi|`.
    pub fn projector(phi: Chirality) -> Self {
        let mut m = Self::ZERO;
        m.0[phi.index()][phi.index()] = ONE;
        m
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }

    pub fn add(&self, rhs: &Mat2) -> Mat2 {
        self.axpy(ONE, rhs)
    }

    pub fn sub(&self, rhs: &Mat2) -> Mat2 {
        self.axpy(-ONE, rhs)
    }

    /// `self + c·rhs`.
    fn axpy(&self, c: Complex64, rhs: &Mat2) -> Mat2 {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] += c * rhs.0[i][j];
            }
        }
        out
    }

    /// `⟨out|M|in⟩`.
    pub fn element(&self, out: Chirality, input: Chirality) -> Complex64 {
        self.0[out.index()][input.index()]
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Displacement operator `X_a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShiftTerm(pub i64);

impl ShiftTerm {
    pub const IDENTITY: ShiftTerm = ShiftTerm(0);

    pub fn inverse(self) -> Self {
        ShiftTerm(-self.0)
    }
}

/// `X_a X_b = X_{a+b}`.
pub fn x_compose(a: ShiftTerm, b: ShiftTerm) -> ShiftTerm {
    ShiftTerm(a.0 + b.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionTerm {
    pub matrix: Mat2,
    pub displacement: i64,
}

/// `Σ_D A_D ⊗ X_D`, one term per displacement, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorExpansion {
    terms: Vec<ExpansionTerm>,
    steps: usize,
}

impl OperatorExpansion {
    /// `{(I, 0)}`, the zero-step propagator.
    pub fn identity() -> Self {
        Self {
            terms: vec![ExpansionTerm {
                matrix: Mat2::IDENTITY,
                displacement: 0,
            }],
            steps: 0,
        }
    }

    fn from_map(map: BTreeMap<i64, Mat2>, steps: usize) -> Self {
        Self {
            terms: map
                .into_iter()
                .map(|(displacement, matrix)| ExpansionTerm {
                    matrix,
                    displacement,
                })
                .collect(),
            steps,
        }
    }

    pub fn terms(&self) -> &[ExpansionTerm] {
        &self.terms
    }

    /// Total number of walk steps represented.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn matrix_at(&self, displacement: i64) -> Mat2 {
        self.terms
            .iter()
            .find(|t| t.displacement == displacement)
            .map_or(Mat2::ZERO, |t| t.matrix)
    }

    pub fn max_displacement(&self) -> Option<i64> {
        self.terms.last().map(|t| t.displacement)
    }

    pub fn min_displacement(&self) -> Option<i64> {
        self.terms.first().map(|t| t.displacement)
    }

    /// `(D, ⟨out|A_D|in⟩)` for every term.
    pub fn contract(&self, out: Chirality, input: Chirality) -> Vec<(i64, Complex64)> {
        self.terms
            .iter()
            .map(|t| (t.displacement, t.matrix.element(out, input)))
            .collect()
    }

    /// Largest entry over all matrices.
    pub fn max_abs(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.matrix.max_abs())
            .fold(0.0, f64::max)
    }

    /// Amplitudes `(site, [forward, backward])` of the expansion applied to
    /// `|phi_in, n0⟩`.
    pub fn apply_to_localized(&self, phi_in: Chirality, n0: i64) -> Vec<(i64, [Complex64; 2])> {
        self.terms
            .iter()
            .map(|t| {
                (
                    n0 + t.displacement,
                    [
                        t.matrix.element(Chirality::Forward, phi_in),
                        t.matrix.element(Chirality::Backward, phi_in),
                    ],
                )
            })
            .collect()
    }

    fn combine(&self, other: &OperatorExpansion, sign: Complex64) -> OperatorExpansion {
        let mut map: BTreeMap<i64, Mat2> = BTreeMap::new();
        for t in &self.terms {
            let e = map.entry(t.displacement).or_insert(Mat2::ZERO);
            *e = e.add(&t.matrix);
        }
        for t in &other.terms {
            let e = map.entry(t.displacement).or_insert(Mat2::ZERO);
            *e = e.axpy(sign, &t.matrix);
        }
        Self::from_map(map, self.steps.max(other.steps))
    }
}

/// Order in which per-step factors are multiplied.
///
/// `Faithful` puts coin 0 rightmost (it acts first). `Reversed` is the classic
/// reversed-product mistake and only exists so the cross-check can prove it
/// catches it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProductOrder {
    #[default]
    Faithful,
    Reversed,
}

/// Enumerates all `2^σ` chirality words of `process` and merges them by
/// displacement.
pub fn expand_propagator(process: &ProcessSpec) -> Result<OperatorExpansion> {
    expand_with_order(process, ProductOrder::Faithful)
}

pub fn expand_with_order(process: &ProcessSpec, order: ProductOrder) -> Result<OperatorExpansion> {
    let sigma = process.steps();
    if sigma > MAX_EXPANSION_STEPS {
        return Err(WalkError::ExpansionBlowup {
            steps: sigma,
            limit: MAX_EXPANSION_STEPS,
        });
    }
    let coins: Vec<Mat2> = process
        .coins()
        .iter()
        .map(|&p| su2_coin(p).map(|c| Mat2::from_coin(&c)))
        .collect::<Result<_>>()?;
    let factors: [Vec<Mat2>; 2] = [Chirality::Forward, Chirality::Backward]
        .map(|phi| coins.iter().map(|c| Mat2::projector(phi).mul(c)).collect());

    let mut merged: BTreeMap<i64, Mat2> = BTreeMap::new();
    for word in 0u32..(1u32 << sigma) {
        let mut a = Mat2::IDENTITY;
        let mut d = 0i64;
        for i in 0..sigma {
            // Bit i picks the projector following coin i; 1 means backward.
            let backward = (word >> i) & 1 == 1;
            let f = &factors[backward as usize][i];
            a = match order {
                ProductOrder::Faithful => f.mul(&a),
                ProductOrder::Reversed => a.mul(f),
            };
            d += if backward { -1 } else { 1 };
        }
        let slot = merged.entry(d).or_insert(Mat2::ZERO);
        *slot = slot.add(&a);
    }
    Ok(OperatorExpansion::from_map(merged, sigma))
}

/// `later · earlier`: pairwise products with displacements added.
pub fn compose_expansions(
    later: &OperatorExpansion,
    earlier: &OperatorExpansion,
) -> Result<OperatorExpansion> {
    let pairs = later.terms.len() * earlier.terms.len();
    if pairs > MAX_PAIR_PRODUCTS {
        return Err(WalkError::ExpansionBlowup {
            steps: later.steps + earlier.steps,
            limit: MAX_PAIR_PRODUCTS,
        });
    }
    let mut merged: BTreeMap<i64, Mat2> = BTreeMap::new();
    for l in &later.terms {
        for k in &earlier.terms {
            let d = x_compose(ShiftTerm(l.displacement), ShiftTerm(k.displacement)).0;
            let slot = merged.entry(d).or_insert(Mat2::ZERO);
            *slot = slot.add(&l.matrix.mul(&k.matrix));
        }
    }
    Ok(OperatorExpansion::from_map(
        merged,
        later.steps + earlier.steps,
    ))
}

/// `U1·U0 − U0·U1` where `e0`, `e1` expand `U0`, `U1`.
pub fn commutator_expansion(
    e0: &OperatorExpansion,
    e1: &OperatorExpansion,
) -> Result<OperatorExpansion> {
    let forward = compose_expansions(e1, e0)?;
    let backward = compose_expansions(e0, e1)?;
    Ok(forward.combine(&backward, -ONE))
}

/// `U1·U0 + U0·U1`.
pub fn anticommutator_expansion(
    e0: &OperatorExpansion,
    e1: &OperatorExpansion,
) -> Result<OperatorExpansion> {
    let forward = compose_expansions(e1, e0)?;
    let backward = compose_expansions(e0, e1)?;
    Ok(forward.combine(&backward, ONE))
}

/// `Prob(n0 + D) = |scale · ⟨phi_out|A_D|phi_in⟩|²`.
///
/// `scale` is an amplitude factor. For a balanced two-level switch the
/// Fourier branches are `½(U1U0 ± U0U1)|ψ⟩`, so `scale = ½` (the density-level
/// prefactor is ¼).
pub fn oracle_distribution(
    expansion: &OperatorExpansion,
    phi_in: Chirality,
    phi_out: Chirality,
    n0: i64,
    scale: Complex64,
) -> Result<Distribution> {
    let lo = expansion.min_displacement().unwrap_or(0);
    let hi = expansion.max_displacement().unwrap_or(0);
    let mut values = vec![0.0; (hi - lo + 1) as usize];
    for (d, amp) in expansion.contract(phi_out, phi_in) {
        values[(d - lo) as usize] = (scale * amp).norm_sqr();
    }
    Distribution::from_values(n0, n0 + lo, values, false)
}

/// Largest `| |amp(D)| − |amp(−D)| |` of `⟨phi|·|phi⟩` over a commutator.
pub fn commutator_symmetry_defect(commutator: &OperatorExpansion, phi: Chirality) -> f64 {
    let amps: BTreeMap<i64, Complex64> = commutator.contract(phi, phi).into_iter().collect();
    amps.iter()
        .map(|(d, a)| {
            let mirror = amps.get(&-d).copied().unwrap_or(ZERO);
            (a.norm() - mirror.norm()).abs()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleTrial {
    pub trial: usize,
    pub sigma0: usize,
    pub sigma1: usize,
    pub n0: i64,
    pub phi0: Chirality,
    /// Largest engine/oracle probability gap over all four branches.
    pub deviation: f64,
    /// Commutator `|amp(D)|` vs `|amp(−D)|` gap.
    pub symmetry_defect: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub seed: u64,
    pub trials: usize,
    pub max_deviation: f64,
    pub max_symmetry_defect: f64,
    pub tolerance: f64,
    pub symmetry_tolerance: f64,
    pub passed: bool,
    pub details: Vec<OracleTrial>,
}

/// Engine vs oracle on one process pair: `(max distribution gap, symmetry defect)`.
pub fn compare_pair(
    p0: &ProcessSpec,
    p1: &ProcessSpec,
    phi0: Chirality,
    n0: i64,
    order: ProductOrder,
) -> Result<(f64, f64)> {
    let total = p0.steps() + p1.steps();
    if total > MAX_VERIFY_STEPS {
        return Err(WalkError::ExpansionBlowup {
            steps: total,
            limit: MAX_VERIFY_STEPS,
        });
    }
    let init = make_initial_state(2, &balanced_order(2), n0, phi0, total)?;
    let state = apply_2switch(init, p0, p1)?;

    let e0 = expand_with_order(p0, order)?;
    let e1 = expand_with_order(p1, order)?;
    let branches = [
        anticommutator_expansion(&e0, &e1)?,
        commutator_expansion(&e0, &e1)?,
    ];
    let half = Complex64::new(0.5, 0.0);

    let mut worst = 0.0_f64;
    for (m, expansion) in branches.iter().enumerate() {
        let conditional = project_order(&state, m)?;
        for phi_out in Chirality::BOTH {
            let engine = distribution(&project_coin(&conditional, phi_out), false)?;
            let oracle = oracle_distribution(expansion, phi0, phi_out, n0, half)?;
            worst = worst.max(engine.max_abs_diff(&oracle));
        }
    }
    let symmetry = commutator_symmetry_defect(&branches[1], phi0);
    Ok((worst, symmetry))
}

/// Random SU(2) process pairs with `σ0 + σ1 ≤ max_total_steps`, compared
/// branch by branch against the engine.
pub fn verify_expansion_against_engine(
    trials: usize,
    seed: u64,
    max_total_steps: usize,
) -> Result<OracleReport> {
    verify_with_order(trials, seed, max_total_steps, ProductOrder::Faithful)
}

pub fn verify_with_order(
    trials: usize,
    seed: u64,
    max_total_steps: usize,
    order: ProductOrder,
) -> Result<OracleReport> {
    if !(2..=MAX_VERIFY_STEPS).contains(&max_total_steps) {
        return Err(WalkError::Unsupported(format!(
            "total steps {max_total_steps} outside [2, {MAX_VERIFY_STEPS}]"
        )));
    }
    const TOLERANCE: f64 = 1e-10;
    const SYMMETRY_TOLERANCE: f64 = 1e-12;

    let mut details = Vec::with_capacity(trials);
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let sigma0 = rng.random_range(1..max_total_steps);
        let sigma1 = rng.random_range(1..=max_total_steps - sigma0);
        let p0 = ProcessSpec::random("p0", sigma0, &mut rng)?;
        let p1 = ProcessSpec::random("p1", sigma1, &mut rng)?;
        let phi0 = if rng.random_bool(0.5) {
            Chirality::Forward
        } else {
            Chirality::Backward
        };
        let n0 = rng.random_range(-3..=3);
        let (deviation, symmetry_defect) = compare_pair(&p0, &p1, phi0, n0, order)?;
        details.push(OracleTrial {
            trial,
            sigma0,
            sigma1,
            n0,
            phi0,
            deviation,
            symmetry_defect,
        });
    }
    let max_deviation = details.iter().map(|t| t.deviation).fold(0.0, f64::max);
    let max_symmetry_defect = details
        .iter()
        .map(|t| t.symmetry_defect)
        .fold(0.0, f64::max);
    Ok(OracleReport {
        seed,
        trials,
        max_deviation,
        max_symmetry_defect,
        tolerance: TOLERANCE,
        symmetry_tolerance: SYMMETRY_TOLERANCE,
        passed: max_deviation <= TOLERANCE && max_symmetry_defect <= SYMMETRY_TOLERANCE,
        details,
    })
}
