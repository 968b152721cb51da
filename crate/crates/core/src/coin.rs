//! Coin operators and process specifications.
//!
//! Matrices are stored as `m[out][in]` in the `{Forward, Backward}` basis, so
//! `m[0][1]` is `⟨▷|C|◀⟩`. Every consumer (engine and oracle) reads them this
//! way.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::{Result, WalkError};

/// Angles `(α, β, θ)` of the three-parameter coin, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoinParams {
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
}

impl CoinParams {
    pub const fn new(alpha: f64, beta: f64, theta: f64) -> Self {
        Self { alpha, beta, theta }
    }

    /// `(0, 0, π/4)`, the Hadamard-type coin.
    pub const fn hadamard() -> Self {
        Self::new(0.0, 0.0, FRAC_PI_4)
    }

    pub fn is_diagonal(&self) -> bool {
        self.theta == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinOperator {
    m: [[Complex64; 2]; 2],
}

impl CoinOperator {
    /// Wraps an arbitrary 2×2 matrix. The engine accepts any unitary here, not
    /// only members of the three-angle family.
    pub fn from_matrix(m: [[Complex64; 2]; 2]) -> Self {
        Self { m }
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self::from_matrix([[one, zero], [zero, one]])
    }

    pub fn matrix(&self) -> &[[Complex64; 2]; 2] {
        &self.m
    }

    /// `⟨out|C|in⟩` by basis index.
    pub fn entry(&self, out: usize, input: usize) -> Complex64 {
        self.m[out][input]
    }

    pub fn determinant(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Largest entry of `|C·C† − I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..2 {
                    acc += self.m[i][k] * self.m[j][k].conj();
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((acc - target).norm());
            }
        }
        worst
    }
}

fn check_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(WalkError::NonFiniteAngle { name, value })
    }
}

/// `[[e^{iα}cosθ, e^{iβ}sinθ], [e^{−iβ}sinθ, −e^{−iα}cosθ]]`.
pub fn su2_coin(params: CoinParams) -> Result<CoinOperator> {
    check_finite("alpha", params.alpha)?;
    check_finite("beta", params.beta)?;
    check_finite("theta", params.theta)?;
    let (s, c) = params.theta.sin_cos();
    let ea = Complex64::from_polar(1.0, params.alpha);
    let eb = Complex64::from_polar(1.0, params.beta);
    Ok(CoinOperator::from_matrix([
        [ea * c, eb * s],
        [eb.conj() * s, -ea.conj() * c],
    ]))
}

/// Diagonal coin `C(α, β, 0)`; never flips chirality.
pub fn diagonal_coin(alpha: f64, beta: f64) -> Result<CoinOperator> {
    su2_coin(CoinParams::new(alpha, beta, 0.0))
}

/// α, β uniform on `[0, 2π)`, θ uniform on `[0, π]`.
pub fn random_coin<R: Rng + ?Sized>(rng: &mut R) -> CoinParams {
    CoinParams {
        alpha: rng.random_range(0.0..2.0 * PI),
        beta: rng.random_range(0.0..2.0 * PI),
        theta: rng.random_range(0.0..=PI),
    }
}

/// Random diagonal coin: random phases, θ = 0.
pub fn random_diagonal_coin<R: Rng + ?Sized>(rng: &mut R) -> CoinParams {
    CoinParams {
        alpha: rng.random_range(0.0..2.0 * PI),
        beta: rng.random_range(0.0..2.0 * PI),
        theta: 0.0,
    }
}

/// A labelled, non-empty coin sequence. Coins are applied in index order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessSpec {
    label: String,
    coins: Vec<CoinParams>,
}

impl ProcessSpec {
    pub fn new(label: impl Into<String>, coins: Vec<CoinParams>) -> Result<Self> {
        let label = label.into();
        if coins.is_empty() {
            return Err(WalkError::EmptyProcess(label));
        }
        for c in &coins {
            check_finite("alpha", c.alpha)?;
            check_finite("beta", c.beta)?;
            check_finite("theta", c.theta)?;
        }
        Ok(Self { label, coins })
    }

    /// `steps` copies of the same coin.
    pub fn uniform(label: impl Into<String>, coin: CoinParams, steps: usize) -> Result<Self> {
        Self::new(label, vec![coin; steps])
    }

    pub fn random<R: Rng + ?Sized>(
        label: impl Into<String>,
        steps: usize,
        rng: &mut R,
    ) -> Result<Self> {
        Self::new(label, (0..steps).map(|_| random_coin(rng)).collect())
    }

    pub fn random_diagonal<R: Rng + ?Sized>(
        label: impl Into<String>,
        steps: usize,
        rng: &mut R,
    ) -> Result<Self> {
        Self::new(
            label,
            (0..steps).map(|_| random_diagonal_coin(rng)).collect(),
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn coins(&self) -> &[CoinParams] {
        &self.coins
    }

    /// Number of steps σ.
    pub fn steps(&self) -> usize {
        self.coins.len()
    }

    pub fn operators(&self) -> Vec<CoinOperator> {
        self.coins
            .iter()
            .map(|&c| su2_coin(c).expect("angles validated on construction"))
            .collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.coins.iter().all(CoinParams::is_diagonal)
    }
}

/// Parses `{"processes": [{"label": .., "coins": [{"alpha","beta","theta"}, ..]}, ..]}`.
///
/// Errors name the JSON path of the offending field.
pub fn load_process_spec(document: &str) -> Result<Vec<ProcessSpec>> {
    let root: Value = serde_json::from_str(document).map_err(|e| WalkError::Config {
        path: "$".into(),
        message: e.to_string(),
    })?;
    let config_err = |path: String, message: &str| WalkError::Config {
        path,
        message: message.to_string(),
    };
    let processes = root
        .get("processes")
        .ok_or_else(|| config_err("processes".into(), "missing field"))?
        .as_array()
        .ok_or_else(|| config_err("processes".into(), "expected an array"))?;

    let mut specs = Vec::with_capacity(processes.len());
    for (j, proc) in processes.iter().enumerate() {
        let base = format!("processes[{j}]");
        let label = match proc.get("label") {
            None => format!("p{j}"),
            Some(v) => v
                .as_str()
                .ok_or_else(|| config_err(format!("{base}.label"), "expected a string"))?
                .to_string(),
        };
        let coins = proc
            .get("coins")
            .ok_or_else(|| config_err(format!("{base}.coins"), "missing field"))?
            .as_array()
            .ok_or_else(|| config_err(format!("{base}.coins"), "expected an array"))?;
        if coins.is_empty() {
            return Err(WalkError::EmptyProcess(label));
        }
        let mut parsed = Vec::with_capacity(coins.len());
        for (i, coin) in coins.iter().enumerate() {
            let angle = |name: &str| -> Result<f64> {
                let path = format!("{base}.coins[{i}].{name}");
                coin.get(name)
                    .ok_or_else(|| config_err(path.clone(), "missing field"))?
                    .as_f64()
                    .ok_or_else(|| config_err(path, "expected a number"))
            };
            parsed.push(CoinParams::new(
                angle("alpha")?,
                angle("beta")?,
                angle("theta")?,
            ));
        }
        specs.push(ProcessSpec::new(label, parsed)?);
    }
    Ok(specs)
}
