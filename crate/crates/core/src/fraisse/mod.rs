//! Recursive presentations of Fraïssé limits and the effective
//! back-and-forth isomorphism between dense orders.

mod back_and_forth;
mod density;
mod graph;
mod poset_stage;
mod rational;

pub use back_and_forth::{back_and_forth, BackAndForth};
pub use density::{check_density, DensityReport};
pub use graph::{rado_adjacent, rado_extension_witness, GraphPrefix, GraphPresentation, RadoGraph};
pub use poset_stage::{
    one_point_extension_audit, universal_poset_stage, CanonicalOrder, Demand, PosetStage,
};
pub use rational::{
    dyadic_value, rational_order_less, rational_value, DyadicOrder, NaturalOrder, RationalOrder,
    Reindexed,
};

pub use crate::orders::OrderPresentation;
