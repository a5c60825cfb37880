//! Rational nilpotent orbits of p-adic orthogonal groups.
//!
//! For odd `p` and a nondegenerate quadratic form `q` over `Q_p`, this crate
//! counts and enumerates the rational nilpotent orbits of `O(q)` and `SO(q)`,
//! builds an explicit `sl2`-triple for each orbit, verifies it, and solves
//! for the associated facet of the Bruhat–Tits building.

pub mod padic;
pub mod quadform;
pub mod orbitlab;
pub mod gammapart;
pub mod matrix;
pub mod repbuild;
pub mod verify;
pub mod building;
