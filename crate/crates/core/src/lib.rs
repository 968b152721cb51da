//! Discrete-time coined quantum walks whose coin processes are composed under
//! indefinite causal order.
//!
//! The walker lives on the integer lattice with a two-level coin
//! (chirality `Forward` / `Backward`). A *process* is an ordered list of coins;
//! running it applies coin-then-shift once per coin. Processes can be chained in
//! a definite order ([`engine::evolve_composition`]) or superposed over cyclic
//! orderings by an order-control register ([`switch::apply_2switch`],
//! [`switch::apply_nswitch`]). Measuring that register in the Fourier basis and
//! then the coin yields the conditional walker states studied in
//! [`suite`].
//!
//! All states in scope are pure, so amplitudes are stored directly and density
//! matrices are only materialized on demand ([`state::walker_density`]).
//! Conditional states are never renormalized: their squared norm is the
//! branch probability.
//!
//! The [`oracle`] module re-derives the same distributions from an explicit
//! operator expansion `U = Σ A_D ⊗ X_D` without touching the engine, and is
//! used to cross-check it.
//!
//! ```
//! use icowalk::prelude::*;
//!
//! let hadamard = ProcessSpec::uniform("p0", CoinParams::hadamard(), 2).unwrap();
//! let diagonal = ProcessSpec::uniform("p1", CoinParams::new(0.0, 0.0, 0.0), 2).unwrap();
//! let init = make_initial_state(2, &balanced_order(2), 0, Chirality::Forward, 4).unwrap();
//! let out = apply_2switch(init, &hadamard, &diagonal).unwrap();
//!
//! let f1 = project_order(&out, 1).unwrap();
//! assert!(project_coin(&f1, Chirality::Forward).weight() < 1e-24);
//! let left = project_coin(&f1, Chirality::Backward);
//! assert!((left.weight() - 0.25).abs() < 1e-12);
//! ```

pub mod baseline;
pub mod coin;
pub mod engine;
pub mod error;
pub mod measure;
pub mod oracle;
pub mod state;
pub mod suite;
pub mod switch;

pub use num_complex::Complex64;

pub use error::{Result, WalkError};

/// Amplitude-level comparison tolerance.
pub const AMPLITUDE_TOL: f64 = 1e-12;
/// Probability-level comparison tolerance.
pub const PROBABILITY_TOL: f64 = 1e-10;
/// Weights at or below this are treated as an empty branch.
pub const ZERO_WEIGHT: f64 = 1e-24;

pub mod prelude {
    pub use crate::coin::{
        diagonal_coin, load_process_spec, random_coin, su2_coin, CoinOperator, CoinParams,
        ProcessSpec,
    };
    pub use crate::engine::{
        apply_coin, apply_shift, evolve_composition, evolve_process, left_cyclic, step, OrderSlice,
    };
    pub use crate::measure::{
        branch_probability, distribution, fourier_vector, project_coin, project_order,
        Distribution, FourierVector,
    };
    pub use crate::state::{
        balanced_order, make_initial_state, walker_density, Chirality, ConditionalState,
        PositionLattice, SystemState, WalkerDensityMatrix,
    };
    pub use crate::switch::{apply_2switch, apply_nswitch};
    pub use crate::{Complex64, Result, WalkError};
}
