//! High-precision scalars and points of the upper half-plane.

use rug::float::{Constant, Round};
use rug::ops::{AssignRound, PowAssign};
use rug::{Complex, Float};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};

/// Precision of error bounds and magnitudes. These never need many bits but do
/// need MPFR's exponent range, since j grows like exp(2*pi*Im z).
pub const BOUND_PREC: u32 = 64;

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// 2*pi*i.
pub fn two_pi_i(prec: u32) -> Complex {
    let p = pi(prec) * 2u32;
    Complex::with_val(prec, (Float::new(prec), p))
}

pub fn rho(prec: u32) -> Complex {
    let s3: Float = Float::with_val(prec, 3u32).sqrt() / 2u32;
    Complex::with_val(prec, (-0.5f64, s3))
}

pub fn i_point(prec: u32) -> Complex {
    Complex::with_val(prec, (0u32, 1u32))
}

pub fn bound(x: f64) -> Float {
    Float::with_val(BOUND_PREC, x)
}

pub fn zero_bound() -> Float {
    Float::new(BOUND_PREC)
}

/// |z| at bound precision, rounded up.
pub fn abs_up(z: &Complex) -> Float {
    let mut r = Float::new(BOUND_PREC);
    r.assign_round(z.abs_ref(), Round::Up);
    r
}

/// |x| at bound precision, rounded up.
pub fn fabs_up(x: &Float) -> Float {
    let mut r = Float::new(BOUND_PREC);
    r.assign_round(x.abs_ref(), Round::Up);
    r
}

/// 2^e at bound precision.
pub fn pow2(e: i64) -> Float {
    let mut r = Float::with_val(BOUND_PREC, 2u32);
    r.pow_assign(e as i32);
    r
}

pub fn to_f64(z: &Complex) -> (f64, f64) {
    (z.real().to_f64(), z.imag().to_f64())
}

pub fn complex(prec: u32, re: f64, im: f64) -> Complex {
    Complex::with_val(prec, (re, im))
}

pub fn is_finite(z: &Complex) -> bool {
    z.real().is_finite() && z.imag().is_finite()
}

/// Decimal digits enough to reproduce `prec` bits.
pub fn digits_for(prec: u32) -> usize {
    (prec as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
}

pub fn float_string(x: &Float) -> String {
    x.to_string_radix(10, Some(digits_for(x.prec())))
}

/// A point of the upper half-plane carried at a fixed working precision.
#[derive(Clone, Debug, PartialEq)]
pub struct UHPoint {
    z: Complex,
}

impl UHPoint {
    pub fn new(re: f64, im: f64, prec: u32) -> Result<Self> {
        Self::from_complex(Complex::with_val(prec, (re, im)))
    }

    pub fn from_complex(z: Complex) -> Result<Self> {
        if !(z.imag().is_finite() && z.real().is_finite()) || *z.imag() <= 0 {
            return Err(Error::InvalidArgument(format!(
                "point {} is not in the upper half-plane",
                z.to_string_radix(10, Some(12))
            )));
        }
        Ok(UHPoint { z })
    }

    /// Parses decimal strings, so points can be given beyond f64 precision.
    pub fn parse(re: &str, im: &str, prec: u32) -> Result<Self> {
        let p = |s: &str| {
            Float::parse(s)
                .map(|v| Float::with_val(prec, v))
                .map_err(|e| Error::InvalidArgument(format!("bad number `{s}`: {e}")))
        };
        Self::from_complex(Complex::with_val(prec, (p(re)?, p(im)?)))
    }

    pub fn rho(prec: u32) -> Self {
        UHPoint { z: rho(prec) }
    }

    pub fn i(prec: u32) -> Self {
        UHPoint { z: i_point(prec) }
    }

    pub fn as_complex(&self) -> &Complex {
        &self.z
    }

    pub fn into_complex(self) -> Complex {
        self.z
    }

    pub fn re(&self) -> &Float {
        self.z.real()
    }

    pub fn im(&self) -> &Float {
        self.z.imag()
    }

    pub fn re_f64(&self) -> f64 {
        self.z.real().to_f64()
    }

    pub fn im_f64(&self) -> f64 {
        self.z.imag().to_f64()
    }

    pub fn prec(&self) -> u32 {
        self.z.prec().0
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        UHPoint { z: Complex::with_val(prec, &self.z) }
    }

    pub fn translate(&self, m: i64) -> Self {
        let mut z = self.z.clone();
        *z.mut_real() += m;
        UHPoint { z }
    }
}

impl Serialize for UHPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("UHPoint", 3)?;
        st.serialize_field("re", &float_string(self.z.real()))?;
        st.serialize_field("im", &float_string(self.z.imag()))?;
        st.serialize_field("prec", &self.prec())?;
        st.end()
    }
}

/// Serializable decimal rendering of a complex value.
#[derive(Clone, Debug, serde::Serialize, PartialEq)]
pub struct ComplexText {
    pub re: String,
    pub im: String,
}

impl From<&Complex> for ComplexText {
    fn from(z: &Complex) -> Self {
        ComplexText { re: float_string(z.real()), im: float_string(z.imag()) }
    }
}
