//! Exact tiling and spectral-set machinery for the groups `Z_{p^m} x Z_{p^m}`.
//!
//! Character sums are decided exactly through cyclotomic divisibility, and
//! every construction is revalidated before it is reported.

pub mod construct;
pub mod cyclotomic;
pub mod error;
pub mod group;
pub mod oracle;
pub mod spectral;
pub mod structure;
pub mod subgroup;
pub mod subset;
pub mod symplecto;

pub use cyclotomic::Form;
pub use error::{Error, Result};
pub use group::{Element, GroupContext};
pub use subgroup::Subgroup;
pub use subset::SubsetBits;
pub use symplecto::Symplectomorphism;
