pub mod cm;
pub mod extension;
pub mod group;
pub mod half_transfer;
pub mod instance;
pub mod lattice;
mod linalg;
pub mod perm;
pub mod plectic;
pub mod suite;
pub mod weil;
