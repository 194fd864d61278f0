//! Exact computations in the mod-2 Steenrod algebra.
//!
//! The admissible (Serre–Cartan) basis is the working representation; the
//! Milnor basis is used for its product formula and as an independent check.
//! On top of these sit the quotients `A//A(n)` and `A//E(1)`, the admissible
//! bases of `H*(bo)` and `H*(bu)` with their verification drivers, and the
//! action of the Steenrod algebra on Stiefel–Whitney classes.

pub mod basis_theorem;
pub mod error;
pub mod f2linalg;
pub mod milnor;
pub mod parse;
pub mod quotients;
pub mod serre_cartan;
pub mod thom_sw;

pub use error::{Error, Result};

/// Maps `f` over `0..=max`, in parallel when the `parallel` feature is on.
/// Output is in degree order either way.
pub(crate) fn par_map_degrees<T, F>(max: u32, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u32) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..=max).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..=max).map(f).collect()
    }
}
