//! Scalar abstraction, dense complex linear algebra, seeded random streams
//! and the handful of special functions the simulator needs.

mod linalg;
mod rng;
mod special;

pub use linalg::{CMatrix, CVector};
pub use num_complex::Complex;
pub use rng::{RngStream, SeedTree};
pub use special::{bessel_j0, db_convert, db_to_linear, linear_to_db, DbDirection};

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar the numerical core is written against: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
