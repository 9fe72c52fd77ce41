//! Maximal subgroups of the almost simple groups `PSL(2,q) ≤ G ≤ PΓL(2,q)`.
//!
//! [`classifier::classify`] predicts the conjugacy classes of maximal
//! subgroups of `G` not containing `PSL(2,q)`. The [`oracle`] module checks
//! those predictions by building the groups explicitly as semilinear maps
//! of the projective line.

pub mod arith;
pub mod classifier;
pub mod families;
pub mod gf;
pub mod oracle;
pub mod pline;

pub use classifier::{classify, MaxSubgroupDescriptor, OuterSpec, Preset};
pub use families::FamilyTag;
pub use gf::{Field, FieldElem};
pub use pline::{ProjectiveLine, SemilinearMap, SubgroupInstance};
