//! Order-controlled evolution: branch `k` of the order register is evolved
//! under the `k`-th cyclic ordering of the processes.
//!
//! The switch operator is never materialized; each branch is evolved on its
//! own block of the state, which is exactly the block-diagonal action
//! `Σ_k |k⟩⟨k| ⊗ U_k`.

use std::num::NonZeroUsize;
use std::thread;

use crate::coin::{CoinOperator, ProcessSpec};
use crate::engine::{cyclic_coins, evolve_block};
use crate::state::SystemState;
use crate::{Result, WalkError};

/// Two-process switch: branch 0 runs `p0` then `p1`, branch 1 runs `p1` then `p0`.
pub fn apply_2switch(
    initial: SystemState,
    p0: &ProcessSpec,
    p1: &ProcessSpec,
) -> Result<SystemState> {
    if initial.order_dim() != 2 {
        return Err(WalkError::SwitchDimension {
            expected: 2,
            actual: initial.order_dim(),
        });
    }
    apply_nswitch(initial, &[p0.clone(), p1.clone()])
}

/// Cyclic switch over `processes.len()` orderings.
pub fn apply_nswitch(mut initial: SystemState, processes: &[ProcessSpec]) -> Result<SystemState> {
    let n = processes.len();
    if n < 2 || initial.order_dim() != n {
        return Err(WalkError::SwitchDimension {
            expected: n,
            actual: initial.order_dim(),
        });
    }
    let orderings: Vec<Vec<CoinOperator>> = (0..n)
        .map(|k| cyclic_coins(processes, k))
        .collect::<Result<_>>()?;

    let lattice = initial.lattice();
    let block_len = 2 * lattice.len();
    let workers = thread::available_parallelism()
        .map(NonZeroUsize::get)
        .unwrap_or(1)
        .min(n);
    let work = n * block_len * orderings[0].len();

    let amplitudes = initial.amplitudes_mut();
    if workers <= 1 || work < 1 << 16 {
        for (block, coins) in amplitudes.chunks_mut(block_len).zip(&orderings) {
            evolve_block(block, lattice, coins)?;
        }
        return Ok(initial);
    }

    let per_worker = n.div_ceil(workers);
    thread::scope(|scope| {
        let handles: Vec<_> = amplitudes
            .chunks_mut(block_len * per_worker)
            .zip(orderings.chunks(per_worker))
            .map(|(blocks, coins)| {
                scope.spawn(move || -> Result<()> {
                    for (block, c) in blocks.chunks_mut(block_len).zip(coins) {
                        evolve_block(block, lattice, c)?;
                    }
                    Ok(())
                })
            })
            .collect();
        handles
            .into_iter()
            .try_for_each(|h| h.join().expect("branch worker panicked"))
    })?;
    Ok(initial)
}
