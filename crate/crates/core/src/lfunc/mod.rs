//! Twisted L-functions: Euler factors, conductors and numerical evaluation.

pub mod afe;
pub mod bessel;
pub mod euler;
pub mod lstar;
pub mod periods;
pub mod tail;
