//! Primality proving for M = A*p^n + w_n, where p is an odd prime <= 19 and
//! w_n is a solution of x^(p-1) = 1 in Z/p^n.
//!
//! The test works in the cyclotomic ring Z[zeta_p]/M: a witness prime l = 1 (mod p)
//! yields a primary generator pi of a degree-one prime ideal, a group-ring exponent
//! gamma turns pi into a Gauss-sum-like element tau, and M is prime iff the symmetric
//! functions of the conjugates of tau + tau^(-1) reach fixed target constants after
//! n-1 applications of a precomputed polynomial recursion.

pub mod baseline;
pub mod cache;
pub mod cyclo;
pub mod engine;
pub mod report;
pub mod residue;
pub mod sympoly;
pub mod witness;
