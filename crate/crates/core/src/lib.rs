//! Symmetry analysis of finite normal-form games with exact rational payoffs.
//!
//! Games are classified through their automorphism groups (bijections of
//! players and strategies that preserve payoffs), which makes every notion
//! independent of how strategies happen to be named. The [`label_dep`]
//! module covers the older setting in which all players share one label set.

pub mod classify;
pub mod document;
pub mod error;
pub mod fixtures;
pub mod game;
pub mod label_dep;
pub mod matching;
pub mod morphism;
pub mod param;
pub mod perm;

pub use classify::{classify, ClassificationReport};
pub use error::{Error, Result};
pub use game::{Game, Payoff, Profile, Shape};
pub use matching::Matching;
pub use morphism::{automorphism_group, BijectionGroup, GameBijection};
pub use param::{CellPartition, ParamAssignment};
pub use perm::{Permutation, PermutationGroup};
