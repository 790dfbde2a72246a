//! Exact desk-scale computations over truncated local fields F_q((t)):
//! slope classification of semi-simple elements in the split classical Lie
//! algebras, finite Fourier analysis on lattice quotients, and volumes of
//! locally constant definable sets, with stable orbital integrals accessed
//! through normalized fiber volumes.
//!
//! All arithmetic is exact: residue fields and their extensions, truncated
//! Laurent series with three-valued zero detection, and character values in
//! the cyclotomic integers. Nothing here is floating point except Monte
//! Carlo confidence radii.

pub mod error;
pub mod fields;
pub mod laurent;
pub mod lie;
pub mod logic;
pub mod matrix;
pub mod params;
pub mod pasdsl;
pub mod poly;
pub mod quotfourier;
pub mod ring;
pub mod volumes;

pub use error::{Error, Result};
pub use laurent::{rat, Rat};
