//! Exact finite computations for partial actions of inverse semigroups.
//!
//! The crate works with finite inverse semigroups given by multiplication
//! tables acting by partial bijections on finite discrete spaces, and with
//! the structures built from them: prefix expansions, quotients through
//! idempotent pure congruences, groupoids of germs, and the inverse semigroup
//! of bisections of a finite groupoid. Every relation between the different
//! kinds of recurrence sets is available as a check returning a
//! [`report::CheckReport`].

pub mod cli;
pub mod dynamics;
pub mod expand;
pub mod gact;
pub mod germ;
pub mod isg;
pub mod quot;
pub mod report;
pub mod sets;

pub use dynamics::{FiniteSpace, PartialAction, PointSet};
pub use isg::{Congruence, Element, ElementSet, InverseSemigroup, PartialBijection};
pub use report::CheckReport;
