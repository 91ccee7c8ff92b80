//! Exact scalar, polynomial, rational-function, and matrix arithmetic over
//! ℚ and ℚ(x), including Smith normal form over the PID ℚ[x].

mod matrix;
mod poly;
mod rat;
mod ratfunc;
mod snf;

pub use matrix::{FuncMat, Mat, PolyMat, RatMat};
pub use poly::Poly;
pub use rat::{format_rat, parse_rat, rat, rat_i, Rat};
pub use ratfunc::RatFunc;
pub use snf::{smith_normal_form, SnfResult};
