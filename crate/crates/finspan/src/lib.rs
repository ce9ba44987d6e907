//! Executable finite category theory: span categories built by pullback,
//! suitable-decomposition checkers, brute-force adjoints and Beck-Chevalley
//! mates, and the exceptional-pushforward extension recipe, all verified by
//! exhaustive enumeration on desk-scale inputs.
//!
//! Everything here works with *strict* finite categories: morphism equality
//! is identifier equality and every law is checked exactly. Enumerative
//! operations carry explicit size guards; exceeding a guard is an error,
//! never silent truncation.

pub mod catalog;
pub mod catfun;
pub mod classes;
pub mod dot;
pub mod driver;
pub mod extend;
pub mod fincat;
pub mod limits;
pub mod monoidal;
pub mod report;
pub mod span2;
pub mod spancat;
pub mod textfmt;

pub use fincat::{FinCat, Functor, Mor, NatTransform, Ob, RawCategory};

/// Size guards for enumerative operations.
///
/// `max_objects` bounds fiber/hom category sizes, `max_enum` bounds raw
/// enumeration candidate counts (functor categories, diagram searches,
/// associativity sweeps).
#[derive(Clone, Copy, Debug)]
pub struct Guards {
    pub max_objects: usize,
    pub max_enum: u64,
}

impl Default for Guards {
    fn default() -> Self {
        Guards { max_objects: 64, max_enum: 1_000_000 }
    }
}

impl Guards {
    pub fn new(max_objects: usize, max_enum: u64) -> Self {
        Guards { max_objects, max_enum }
    }

    /// Wide-open guards for tests that want full sweeps.
    pub fn wide() -> Self {
        Guards { max_objects: 4096, max_enum: 500_000_000 }
    }
}

/// Error raised when a guarded enumeration would exceed its bound.
#[derive(Debug, Clone, thiserror::Error)]
#[error("size guard exceeded in {context}: needed {needed}, guard is {guard}")]
pub struct GuardExceeded {
    pub context: String,
    pub needed: u64,
    pub guard: u64,
}

pub(crate) fn guard_enum(guards: &Guards, context: &str, needed: u64) -> Result<(), GuardExceeded> {
    if needed > guards.max_enum {
        Err(GuardExceeded { context: context.to_string(), needed, guard: guards.max_enum })
    } else {
        Ok(())
    }
}

pub(crate) fn guard_objects(
    guards: &Guards,
    context: &str,
    needed: usize,
) -> Result<(), GuardExceeded> {
    if needed > guards.max_objects {
        Err(GuardExceeded {
            context: context.to_string(),
            needed: needed as u64,
            guard: guards.max_objects as u64,
        })
    } else {
        Ok(())
    }
}
