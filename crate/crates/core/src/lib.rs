//! Exact local A¹-degrees of polynomial maps at finite separable points.

pub mod arith;
pub mod field;
pub mod gw;
pub mod linalg;
pub mod multipoly;
pub mod point;
pub mod problem;
pub mod report;
pub mod scheja_storch;
pub mod transfer;
pub mod algebra;
pub mod degree;
