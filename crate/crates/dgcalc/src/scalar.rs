//! Scalar abstraction for the linear-algebra core.
//!
//! The elimination routines in [`crate::exactla`] only need field arithmetic
//! and exact comparison against zero, so they are written against this trait.
//! `BigRational` is the scalar every DG-level module uses; `f32`/`f64` are
//! provided for callers that want the same routines over floats (pivoting is
//! exact-comparison based, so floats are only appropriate for well-conditioned
//! inputs).

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

pub trait Scalar:
    Clone
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + Neg<Output = T>
{
}
