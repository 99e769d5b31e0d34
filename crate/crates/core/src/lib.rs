//! Exact arithmetic for Looijenga pairs over ℚ(t): the tropical skeleton,
//! its monodromy and homology, and the non-archimedean period map.

pub mod cellular;
pub mod field;
pub mod lattice;
pub mod oracle;
pub mod pair;
pub mod periods;
pub mod skeleton;
pub mod toric;
pub mod tropical;
