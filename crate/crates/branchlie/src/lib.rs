//! Exact computations for simple Lie types A, B and D: structure constants of a
//! Chevalley basis, Weyl modules and their contravariant forms, modular weight
//! multiplicities, maximal vectors, and the restriction of irreducible
//! Spin(2n+1)-modules to Spin(2n).

pub mod error;
pub mod linalg;
pub mod rootsystem;
pub mod chevalley;
pub mod enveloping;
pub mod weylmod;
pub mod maxvec;
pub mod branching;

pub use error::{Error, Result};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
