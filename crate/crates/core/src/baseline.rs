//! Definite-order comparison walks.

use num_complex::Complex64;

use crate::coin::{CoinParams, ProcessSpec};
use crate::engine::{evolve_process, OrderSlice};
use crate::measure::{distribution, Distribution};
use crate::state::{make_initial_state, Chirality, ConditionalState};
use crate::Result;

/// Symmetric binomial walk: `P(n0 + T − 2k) = C(T, k) / 2^T`.
pub fn classical_rw_distribution(steps: usize, n0: i64) -> Result<Distribution> {
    let t = steps as i64;
    // Log-space recurrence keeps large T away from underflow.
    let mut ln_p = -(steps as f64) * std::f64::consts::LN_2;
    let mut by_k = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        by_k.push(ln_p.exp());
        ln_p += ((steps - k) as f64).ln() - ((k + 1) as f64).ln();
    }
    // Window n0−T ..= n0+T; k counts left moves, so site n0+T−2k.
    let mut values = vec![0.0; 2 * steps + 1];
    for (k, p) in by_k.into_iter().enumerate() {
        let offset = (t - 2 * k as i64) + t;
        values[offset as usize] = p;
    }
    Distribution::from_values(n0, n0 - t, values, true)
}

/// `steps` Hadamard steps from `|phi0, n0⟩`, chiralities summed.
pub fn hadamard_walk_distribution(steps: usize, n0: i64, phi0: Chirality) -> Result<Distribution> {
    let init = make_initial_state(1, &[Complex64::new(1.0, 0.0)], n0, phi0, steps)?;
    let state = if steps == 0 {
        init
    } else {
        let walk = ProcessSpec::uniform("hadamard", CoinParams::hadamard(), steps)?;
        evolve_process(init, &walk, OrderSlice::All)?
    };
    Ok(distribution(&ConditionalState::from_branch(&state, 0), true)?.with_origin(n0))
}
