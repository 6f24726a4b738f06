//! Game model: block layout, private sets, player oracles and instance checks.

mod game;
mod layout;
mod sets;
mod validate;

pub use game::{Curvature, GameInstance, IterateState, PlayerDualState, PlayerOracle, PlayerProblem};
pub use layout::BlockLayout;
pub use sets::SimpleSet;
pub use validate::{validate_instance, ValidationReport};
