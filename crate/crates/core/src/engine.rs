//! Conditional shift, single steps and multi-step propagators.
//!
//! Sequence order is application order everywhere: `coins[0]` acts first,
//! and `left_cyclic(ps, n)` lists processes in the order they are applied.

use num_complex::Complex64;

use crate::coin::{CoinOperator, ProcessSpec};
use crate::state::{PositionLattice, SystemState};
use crate::{Result, WalkError};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Which order-register branches an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderSlice {
    All,
    Index(usize),
}

impl OrderSlice {
    fn branches(self, order_dim: usize) -> Result<std::ops::Range<usize>> {
        match self {
            OrderSlice::All => Ok(0..order_dim),
            OrderSlice::Index(k) if k < order_dim => Ok(k..k + 1),
            OrderSlice::Index(k) => Err(WalkError::IndexOutOfRange {
                index: k,
                dim: order_dim,
            }),
        }
    }
}

/// Shift on one branch block `[forward | backward]`.
pub(crate) fn shift_block(block: &mut [Complex64], lattice: PositionLattice) -> Result<()> {
    let len = lattice.len();
    let (fwd, bwd) = block.split_at_mut(len);
    // Moving must not populate either boundary site.
    let guard = 2.min(len);
    if let Some(o) = (len - guard..len).find(|&o| fwd[o] != ZERO) {
        return Err(WalkError::Sizing {
            site: lattice.site(o) + 1,
        });
    }
    if let Some(o) = (0..guard).find(|&o| bwd[o] != ZERO) {
        return Err(WalkError::Sizing {
            site: lattice.site(o) - 1,
        });
    }
    if len > 1 {
        fwd.copy_within(0..len - 1, 1);
        bwd.copy_within(1..len, 0);
    }
    fwd[0] = ZERO;
    bwd[len - 1] = ZERO;
    Ok(())
}

pub(crate) fn coin_block(block: &mut [Complex64], len: usize, coin: &CoinOperator) {
    let m = coin.matrix();
    let (fwd, bwd) = block.split_at_mut(len);
    for (f, b) in fwd.iter_mut().zip(bwd.iter_mut()) {
        let (x, y) = (*f, *b);
        if x == ZERO && y == ZERO {
            continue;
        }
        *f = m[0][0] * x + m[0][1] * y;
        *b = m[1][0] * x + m[1][1] * y;
    }
}

pub(crate) fn evolve_block(
    block: &mut [Complex64],
    lattice: PositionLattice,
    coins: &[CoinOperator],
) -> Result<()> {
    for coin in coins {
        coin_block(block, lattice.len(), coin);
        shift_block(block, lattice)?;
    }
    Ok(())
}

/// `S`: forward amplitudes move up one site, backward amplitudes down one.
pub fn apply_shift(mut state: SystemState, slice: OrderSlice) -> Result<SystemState> {
    let lattice = state.lattice();
    for k in slice.branches(state.order_dim())? {
        shift_block(state.branch_block_mut(k), lattice)?;
    }
    Ok(state)
}

/// `C ⊗ I_W` on the selected branches.
pub fn apply_coin(
    mut state: SystemState,
    coin: &CoinOperator,
    slice: OrderSlice,
) -> Result<SystemState> {
    let len = state.lattice().len();
    for k in slice.branches(state.order_dim())? {
        coin_block(state.branch_block_mut(k), len, coin);
    }
    Ok(state)
}

/// One step `S ∘ (C ⊗ I_W)`: coin first, then shift.
pub fn step(state: SystemState, coin: &CoinOperator, slice: OrderSlice) -> Result<SystemState> {
    apply_shift(apply_coin(state, coin, slice)?, slice)
}

/// Runs every coin of `process` in index order.
pub fn evolve_process(
    mut state: SystemState,
    process: &ProcessSpec,
    slice: OrderSlice,
) -> Result<SystemState> {
    let coins = process.operators();
    let lattice = state.lattice();
    for k in slice.branches(state.order_dim())? {
        evolve_block(state.branch_block_mut(k), lattice, &coins)?;
    }
    Ok(state)
}

/// The `n`-th cyclic ordering: `p_n, p_{n+1}, …, p_{n−1}` in application order.
pub fn left_cyclic(processes: &[ProcessSpec], n: usize) -> Result<Vec<&ProcessSpec>> {
    if n >= processes.len() {
        return Err(WalkError::IndexOutOfRange {
            index: n,
            dim: processes.len(),
        });
    }
    Ok(processes[n..].iter().chain(&processes[..n]).collect())
}

/// Coin operators of the `n`-th cyclic ordering, flattened in application order.
pub(crate) fn cyclic_coins(processes: &[ProcessSpec], n: usize) -> Result<Vec<CoinOperator>> {
    Ok(left_cyclic(processes, n)?
        .into_iter()
        .flat_map(|p| p.operators())
        .collect())
}

/// Definite-order evolution of every branch under ordering `n`.
pub fn evolve_composition(
    mut state: SystemState,
    processes: &[ProcessSpec],
    n: usize,
) -> Result<SystemState> {
    let coins = cyclic_coins(processes, n)?;
    let lattice = state.lattice();
    for k in 0..state.order_dim() {
        evolve_block(state.branch_block_mut(k), lattice, &coins)?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::{diagonal_coin, su2_coin, CoinParams};
    use crate::state::{make_initial_state, Chirality};
    use std::f64::consts::FRAC_1_SQRT_2;

    const ONE: [Complex64; 1] = [Complex64::new(1.0, 0.0)];

    fn localized(n0: i64, phi: Chirality, steps: usize) -> SystemState {
        make_initial_state(1, &ONE, n0, phi, steps).unwrap()
    }

    fn assert_amp(s: &SystemState, phi: Chirality, site: i64, re: f64, im: f64) {
        let a = s.amplitude(0, phi, site);
        assert!(
            (a - Complex64::new(re, im)).norm() < 1e-12,
            "{phi:?}@{site}: {a}"
        );
    }

    fn support_count(s: &SystemState) -> usize {
        s.amplitudes().iter().filter(|a| a.norm() > 1e-15).count()
    }

    fn hadamard() -> CoinOperator {
        su2_coin(CoinParams::hadamard()).unwrap()
    }

    #[test]
    fn shift_moves_each_chirality() {
        let s = apply_shift(localized(0, Chirality::Forward, 2), OrderSlice::All).unwrap();
        assert_amp(&s, Chirality::Forward, 1, 1.0, 0.0);
        let s = apply_shift(localized(5, Chirality::Backward, 2), OrderSlice::All).unwrap();
        assert_amp(&s, Chirality::Backward, 4, 1.0, 0.0);
        assert_eq!(support_count(&s), 1);
    }

    #[test]
    fn shift_is_linear() {
        let mut s = localized(0, Chirality::Forward, 2);
        s.set_amplitude(0, Chirality::Forward, 0, Complex64::new(FRAC_1_SQRT_2, 0.0));
        s.set_amplitude(
            0,
            Chirality::Backward,
            0,
            Complex64::new(FRAC_1_SQRT_2, 0.0),
        );
        let s = apply_shift(s, OrderSlice::All).unwrap();
        assert_amp(&s, Chirality::Forward, 1, FRAC_1_SQRT_2, 0.0);
        assert_amp(&s, Chirality::Backward, -1, FRAC_1_SQRT_2, 0.0);
        assert_eq!(support_count(&s), 2);
    }

    #[test]
    fn shift_refuses_to_touch_boundary() {
        let s = localized(0, Chirality::Forward, 0);
        assert!(matches!(
            apply_shift(s, OrderSlice::All),
            Err(WalkError::Sizing { site: 1 })
        ));
    }

    #[test]
    fn coin_actions() {
        let s = apply_coin(
            localized(0, Chirality::Forward, 1),
            &hadamard(),
            OrderSlice::All,
        )
        .unwrap();
        assert_amp(&s, Chirality::Forward, 0, FRAC_1_SQRT_2, 0.0);
        assert_amp(&s, Chirality::Backward, 0, FRAC_1_SQRT_2, 0.0);

        let d = diagonal_coin(0.0, 0.0).unwrap();
        let s = apply_coin(localized(3, Chirality::Backward, 1), &d, OrderSlice::All).unwrap();
        assert_amp(&s, Chirality::Backward, 3, -1.0, 0.0);

        let before = localized(3, Chirality::Backward, 1);
        let after = apply_coin(before.clone(), &CoinOperator::identity(), OrderSlice::All).unwrap();
        assert_eq!(before, after);
    }

    #[test]
    fn single_hadamard_step() {
        let s = step(
            localized(0, Chirality::Forward, 1),
            &hadamard(),
            OrderSlice::All,
        )
        .unwrap();
        assert_amp(&s, Chirality::Forward, 1, FRAC_1_SQRT_2, 0.0);
        assert_amp(&s, Chirality::Backward, -1, FRAC_1_SQRT_2, 0.0);
    }

    #[test]
    fn diagonal_step_applies_phase() {
        let alpha = 0.7;
        let d = diagonal_coin(alpha, 1.3).unwrap();
        let s = step(localized(4, Chirality::Forward, 1), &d, OrderSlice::All).unwrap();
        assert_amp(&s, Chirality::Forward, 5, alpha.cos(), alpha.sin());
    }

    #[test]
    fn two_hadamard_steps() {
        let p0 = ProcessSpec::uniform("p0", CoinParams::hadamard(), 2).unwrap();
        let s = evolve_process(localized(0, Chirality::Forward, 2), &p0, OrderSlice::All).unwrap();
        assert_amp(&s, Chirality::Forward, 2, 0.5, 0.0);
        assert_amp(&s, Chirality::Backward, 0, 0.5, 0.0);
        assert_amp(&s, Chirality::Forward, 0, 0.5, 0.0);
        assert_amp(&s, Chirality::Backward, -2, -0.5, 0.0);
        assert_eq!(support_count(&s), 4);
    }

    #[test]
    fn single_coin_process_is_a_step() {
        let p = ProcessSpec::uniform("p", CoinParams::new(0.3, 1.1, 0.4), 1).unwrap();
        let coin = su2_coin(p.coins()[0]).unwrap();
        let a = evolve_process(localized(0, Chirality::Backward, 1), &p, OrderSlice::All).unwrap();
        let b = step(localized(0, Chirality::Backward, 1), &coin, OrderSlice::All).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn two_diagonal_steps_translate() {
        let p1 = ProcessSpec::uniform("p1", CoinParams::new(0.0, 0.0, 0.0), 2).unwrap();
        let s = evolve_process(localized(0, Chirality::Forward, 2), &p1, OrderSlice::All).unwrap();
        assert_amp(&s, Chirality::Forward, 2, 1.0, 0.0);
        assert_eq!(support_count(&s), 1);
    }

    fn labelled(n: usize) -> Vec<ProcessSpec> {
        (0..n)
            .map(|i| ProcessSpec::uniform(format!("p{i}"), CoinParams::hadamard(), 1).unwrap())
            .collect()
    }

    fn labels(ps: Vec<&ProcessSpec>) -> Vec<&str> {
        ps.into_iter().map(|p| p.label()).collect()
    }

    #[test]
    fn cyclic_orderings() {
        let two = labelled(2);
        assert_eq!(labels(left_cyclic(&two, 0).unwrap()), ["p0", "p1"]);
        assert_eq!(labels(left_cyclic(&two, 1).unwrap()), ["p1", "p0"]);
        let three = labelled(3);
        assert_eq!(labels(left_cyclic(&three, 2).unwrap()), ["p2", "p0", "p1"]);
        assert!(left_cyclic(&three, 3).is_err());
    }

    fn hadamard_pair() -> Vec<ProcessSpec> {
        vec![
            ProcessSpec::uniform("p0", CoinParams::hadamard(), 2).unwrap(),
            ProcessSpec::uniform("p1", CoinParams::new(0.0, 0.0, 0.0), 2).unwrap(),
        ]
    }

    #[test]
    fn canonical_definite_orders() {
        let ps = hadamard_pair();
        let s0 = evolve_composition(localized(0, Chirality::Forward, 4), &ps, 0).unwrap();
        let pops0: Vec<(i64, f64)> = s0
            .lattice()
            .sites()
            .map(|x| (x, s0.amplitude(0, Chirality::Backward, x).norm_sqr()))
            .filter(|(_, p)| *p > 1e-20)
            .collect();
        assert_eq!(pops0.len(), 2);
        assert!(pops0.iter().all(|(_, p)| (p - 0.25).abs() < 1e-12));
        assert_eq!(pops0.iter().map(|(x, _)| *x).collect::<Vec<_>>(), [-4, -2]);

        let s1 = evolve_composition(localized(0, Chirality::Forward, 4), &ps, 1).unwrap();
        let pops1: Vec<(i64, f64)> = s1
            .lattice()
            .sites()
            .map(|x| (x, s1.amplitude(0, Chirality::Backward, x).norm_sqr()))
            .filter(|(_, p)| *p > 1e-20)
            .collect();
        let total: f64 = pops1.iter().map(|(_, p)| p).sum();
        assert_eq!(pops1.iter().map(|(x, _)| *x).collect::<Vec<_>>(), [0, 2]);
        assert!(pops1.iter().all(|(_, p)| (p / total - 0.5).abs() < 1e-12));
    }

    #[test]
    fn all_diagonal_composition_translates_forward() {
        let ps = vec![
            ProcessSpec::uniform("a", CoinParams::new(0.4, 0.0, 0.0), 3).unwrap(),
            ProcessSpec::uniform("b", CoinParams::new(1.2, 2.0, 0.0), 2).unwrap(),
        ];
        let s = evolve_composition(localized(1, Chirality::Forward, 5), &ps, 0).unwrap();
        assert!((s.amplitude(0, Chirality::Forward, 6).norm() - 1.0).abs() < 1e-12);
        assert_eq!(support_count(&s), 1);
    }

    #[test]
    fn slice_index_out_of_range() {
        let s = localized(0, Chirality::Forward, 1);
        assert!(apply_shift(s, OrderSlice::Index(1)).is_err());
    }
}
