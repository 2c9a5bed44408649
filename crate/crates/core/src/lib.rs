//! Box-ball system with capacity-ℓ carriers, seat numbers, the k-skip map,
//! the 10-elimination, soliton decomposition and the excursion measures.

pub mod config;
pub mod dynamics;
pub mod elimination;
pub mod error;
pub mod measures;
pub mod seat;
pub mod skip;
pub mod stat;
pub mod suite;
pub mod ts;

pub use config::{parse_config, BallConfig, Boundary, SpaceClass};
pub use dynamics::{
    evolution_report, evolve, evolve_n, offset_o, offset_o_with, verify_linearization, OffsetForm,
};
pub use elimination::{eliminate_k, eliminate_once, Rigging};
pub use error::{BbsError, Result};
pub use seat::{
    reconstruct_from_zeta, run_carrier, zeta_of, Capacity, SeatEvent, SeatProfile, Slots,
    ZetaMatrix,
};
pub use skip::{skip, skip_excursion};
pub use stat::{estimate_functional, EstimateReport, Observable, SampleSpec};
pub use suite::{run_suite, SuiteOptions, SuiteReport, SUITES};
pub use ts::{ts_decompose, Soliton, SolitonSet};
