//! Rainbow-free 3-colorings of finite abelian groups.
//!
//! The crate is layered bottom-up:
//!
//! - [`group`]: cyclic-factor groups, element indexing, subgroups and quotients.
//! - [`subset`]: bitset subsets with sumsets, dilations, periods and progressions.
//! - [`sumset`]: checkers for the Kneser, Kemperman and Grynkiewicz structure
//!   statements and the `|A| + |B| ≥ |G|` fill lemma.
//! - [`coloring`] and [`enumerate`]: colorings, rainbow AP(3) detection and the
//!   pruned exhaustive search.
//! - [`structure`]: regularity certificates for odd groups and even cyclic groups.
//! - [`extremal`]: prime classes, `m(n)` and the explicit constructions.
//! - [`cli`]: the `rainbowlab` command line.

pub mod cli;
pub mod coloring;
pub mod enumerate;
pub mod error;
pub mod extremal;
pub mod group;
pub mod structure;
pub mod subset;
pub mod suite;
pub mod sumset;

pub use coloring::{Color, RainbowTriple, ThreeColoring};
pub use error::{Error, Result};
pub use group::{FiniteAbelianGroup, GroupElement, Quotient, Subgroup};
pub use subset::GroupSubset;
