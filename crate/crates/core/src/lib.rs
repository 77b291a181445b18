//! Exact-arithmetic engine for constant, linear and affine Poisson structures
//! on Lie algebras, with loop-algebra gauge and holonomy numerics.

pub mod algebra;
pub mod cli;
pub mod config;
pub mod cotangent;
pub mod error;
pub mod linalg;
pub mod loops;
pub mod momentum;
pub mod poisson;
pub mod poly;
pub mod rational;
pub mod rep;

pub use error::{Error, Result};
pub use rational::Rational;
