//! Supersingular isogeny graph neighborhoods of `j = 0` and `j = 1728`,
//! computed two ways: geometrically over finite fields and arithmetically
//! through ideals of maximal quaternion orders.

pub mod arith;
pub mod ff;
pub mod poly;
pub mod ec;
pub mod isogeny;
pub mod report;
pub mod quat;
