//! Scalar abstractions.
//!
//! Two families of scalar show up in this crate: real numbers (fitness
//! values, selection weights, confidence intervals) and bit-lane words used
//! by the simulator to run many independent copies of one network at once.

use std::fmt::Debug;

use num_traits::{Float, FromPrimitive, PrimInt, Unsigned};

/// Real scalar used for fitness and statistics: `f32` or `f64`.
pub trait Real: Float + FromPrimitive + Debug + Default + Send + Sync + 'static {
    fn from_count(v: usize) -> Self {
        <Self as FromPrimitive>::from_usize(v).expect("usize representable as float")
    }

    fn lit(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("f64 representable as float")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Unsigned machine word whose bits are independent simulation lanes.
///
/// Bit `k` of every node state belongs to lane `k`; a NAND over words is a
/// NAND in every lane at once.
pub trait LaneWord: PrimInt + Unsigned + Debug + Default + Send + Sync + 'static {
    const LANES: usize;

    #[inline]
    fn nand(self, other: Self) -> Self {
        !(self & other)
    }

    #[inline]
    fn lane(self, k: usize) -> bool {
        (self >> k) & Self::one() == Self::one()
    }

    #[inline]
    fn with_lane(self, k: usize, bit: bool) -> Self {
        let mask = Self::one() << k;
        if bit {
            self | mask
        } else {
            self & !mask
        }
    }

    /// Word with the lowest `count` lanes set.
    #[inline]
    fn low_mask(count: usize) -> Self {
        if count >= Self::LANES {
            !Self::zero()
        } else {
            (Self::one() << count) - Self::one()
        }
    }
}

macro_rules! lane_word {
    ($($t:ty),*) => {$(
        impl LaneWord for $t {
            const LANES: usize = <$t>::BITS as usize;
        }
    )*};
}

lane_word!(u8, u16, u32, u64, u128);
