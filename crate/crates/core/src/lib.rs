//! Exact post-quench dynamics of one- and two-site reduced density matrices
//! in the transverse-field Ising ring `H = -sum_j (s^x_j s^x_{j+1} + g s^z_j)`,
//! starting from the fully x-polarized state.
//!
//! Parity-preserving observables come from closed-form mode sums
//! ([`even`]); parity-breaking ones (`<c_j>`, `<sigma^x>`, string operators)
//! from Pfaffians of Wick contraction matrices ([`odd`]). [`ed`] is a
//! brute-force spin-basis reference for small rings.

pub mod analysis;
pub mod conventions;
pub mod ed;
pub mod error;
pub mod even;
pub mod gaussian;
pub mod limits;
pub mod model;
pub mod odd;
pub mod pfaffian;
pub mod quadrature;
pub mod rdm;
pub mod series;
pub mod validation;

pub use analysis::{fit_exponential, first_maximum, plateau, ExpFit, Plateau};
pub use ed::{ed_evolve, ed_measure, ed_two_site_rdm, EdSystem, SiteOp, SpinOperator, SpinState};
pub use error::{Error, Result};
pub use even::EvenObservables;
pub use limits::{asymptotic_decay_law, thermodynamic_limit, DecayLaw, LimitObservable};
pub use model::{build_grids, dispersion, MomentumGrid, ModeAmplitudes, Quench, QuenchConfig, QuenchState, Sector};
pub use odd::{cross_parity_amplitude, CrossParityKernel, OddAmplitude, OddAmplitudeBackend, PfaffianBackend};
pub use pfaffian::{pfaffian, Pfaffian, SkewMatrix};
pub use rdm::{assemble_two_site, concurrence, correlators, purity, Correlators, SingleSiteRDM, TwoSiteRDM};
pub use series::{simulate, snapshot, string_operator_series, ObservableRecord, ObservableSeries, Snapshot, StringSeries};
pub use validation::{compare_with_oracle, OracleComparison};
