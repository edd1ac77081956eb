//! Exact-arithmetic engine for toric wall-crossing combinatorics.
//!
//! Everything in this crate works over arbitrary-precision integers and
//! rationals; there are no tolerance parameters anywhere. The crate is
//! `no_std`-compatible (with `alloc`); IO, file formats and the CLI live in
//! the companion `secfan-cli` crate.
//!
//! Module map:
//! * [`matrix`] / [`divisor`] — integer linear algebra, Smith normal form,
//!   divisor-class exact sequences of toric GIT problems.
//! * [`lp`] — exact rational linear programming (simplex with Bland's rule),
//!   used for every strict-feasibility certificate in the crate.
//! * [`config`] / [`circuit`] / [`triang`] — marked point configurations,
//!   circuits, regular triangulations and bistellar flips.
//! * [`tropical`] — dual complexes and stable complexes.
//! * [`secondary`] — the secondary (GKZ) fan: chambers, walls, fan-type
//!   classification, chamber location.
//! * [`mori`] — straight-line runs, wall data, rank-K0 accounting, trees.
//! * [`sod`] — semi-orthogonal decomposition bookkeeping.
//! * [`paths`] — monotone edge paths, multiplicities, radar screens and the
//!   A-side/B-side matching checks.
//! * [`quiver`] / [`ainfty`] — graded quivers with relations, dg structures,
//!   homotopy transfer and minimal-model higher products.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod ainfty;
pub mod circuit;
pub mod config;
pub mod divisor;
pub mod lp;
pub mod matrix;
pub mod mori;
pub mod paths;
pub mod quiver;
pub mod secondary;
pub mod sod;
pub mod triang;
pub mod tropical;

/// Arbitrary-precision integer used throughout.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision rational used throughout.
pub type Rat = num_rational::BigRational;

pub(crate) mod prelude {
    pub use crate::{Int, Rat};
    pub use alloc::borrow::ToOwned;
    pub use alloc::collections::{BTreeMap, BTreeSet};
    pub use alloc::format;
    pub use alloc::string::{String, ToString};
    pub use alloc::vec;
    pub use alloc::vec::Vec;
    pub use num_traits::{One, Signed, Zero};

    pub fn int(v: i64) -> Int {
        Int::from(v)
    }

    pub fn rat(n: i64, d: i64) -> Rat {
        Rat::new(Int::from(n), Int::from(d))
    }

    pub fn rat_int(v: &Int) -> Rat {
        Rat::from_integer(v.clone())
    }
}
