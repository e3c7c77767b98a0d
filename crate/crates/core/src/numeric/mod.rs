//! Rigorous real and complex ball arithmetic over dyadic floats.

mod ball;
mod dyadic;
mod elementary;

pub use ball::{ComplexBall, RealBall};
pub use dyadic::{Dyadic, Round};
pub use elementary::{exp, exp_i, ln, ln2, nth_root_int, pi, root_of_unity};
