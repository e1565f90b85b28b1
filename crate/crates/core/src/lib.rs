//! Combination rules for belief functions over power sets, hyper-power sets
//! and super-power sets, together with the scenario router that picks a
//! conflict transfer per pair of hypotheses.
//!
//! Sets are finite unions of Venn regions of the frame; see [`frame`].

pub mod classic;
pub mod error;
pub mod expansion;
pub mod frame;
pub mod mass;
pub mod pcr;
pub mod report;
pub mod rule;
pub mod special;
pub mod uft;

pub use error::{FusionError, Result};
pub use expansion::TupleExpansion;
pub use frame::{AtomSet, Element, Expr, FocalKey, Frame, ModelConstraints, ModelKind};
pub use mass::{MassFunction, MassMatrix, Opinion, Status};
pub use report::{Basis, ConflictReport, Flag, FusionResult, Partial, RedistributionLedger, Share, Target};
pub use rule::{Params, Rule};
pub use uft::{Attitude, DynamicState, QuasiAssociativeState, Reliability, ScenarioConfig, World};
