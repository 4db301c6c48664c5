//! Deterministic fixed-point big floats and complex numbers.
//!
//! A `BigFloat` stores an integer mantissa at a fixed binary scale of
//! `precision + 64` bits: 64 guard bits below the requested precision absorb
//! truncation from multiplication and division, so desk-scale expression
//! trees stay far inside a 2^-64 tolerance at the default 128-bit precision.
//! Addition is exact, and every operation is a pure integer computation, so
//! results are reproducible bit for bit regardless of evaluation order or
//! thread count.

use super::Rational;
use num::bigint::BigInt;
use num::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::{LazyLock, Mutex};

const GUARD_BITS: u32 = 64;

/// Binary fixed-point real number: value = mant * 2^-(precision + 64).
#[derive(Clone, PartialEq, Eq)]
pub struct BigFloat {
    mant: BigInt,
    precision: u32,
}

impl BigFloat {
    fn scale(&self) -> u32 {
        self.precision + GUARD_BITS
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn zero(precision: u32) -> Self {
        BigFloat { mant: BigInt::zero(), precision }
    }

    pub fn from_int(n: i64, precision: u32) -> Self {
        BigFloat {
            mant: BigInt::from(n) << (precision + GUARD_BITS),
            precision,
        }
    }

    pub fn from_rational(q: &Rational, precision: u32) -> Self {
        let mant = (q.numer() << (precision + GUARD_BITS)) / q.denom();
        BigFloat { mant, precision }
    }

    /// 2^e at the given precision (e may be negative).
    pub fn pow2(e: i32, precision: u32) -> Self {
        let s = (precision + GUARD_BITS) as i32;
        assert!(s + e >= 0, "underflow: 2^{e} not representable");
        BigFloat {
            mant: BigInt::one() << (s + e) as usize,
            precision,
        }
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.precision, other.precision, "precision mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        BigFloat {
            mant: &self.mant + &other.mant,
            precision: self.precision,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        BigFloat {
            mant: &self.mant - &other.mant,
            precision: self.precision,
        }
    }

    pub fn neg(&self) -> Self {
        BigFloat { mant: -&self.mant, precision: self.precision }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        BigFloat {
            mant: (&self.mant * &other.mant) >> self.scale(),
            precision: self.precision,
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.check(other);
        assert!(!other.mant.is_zero(), "division by zero");
        BigFloat {
            mant: (&self.mant << self.scale()) / &other.mant,
            precision: self.precision,
        }
    }

    /// Exact multiplication by a rational (one truncation at the end).
    pub fn scale_rational(&self, q: &Rational) -> Self {
        BigFloat {
            mant: (&self.mant * q.numer()) / q.denom(),
            precision: self.precision,
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat { mant: self.mant.abs(), precision: self.precision }
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn max(&self, other: &Self) -> Self {
        if self.mant >= other.mant {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// |self| <= 2^e
    pub fn le_pow2(&self, e: i32) -> bool {
        let s = self.scale() as i32;
        if s + e < 0 {
            return self.mant.is_zero();
        }
        self.mant.abs() <= (BigInt::one() << (s + e) as usize)
    }

    pub fn lt(&self, other: &Self) -> bool {
        self.check(other);
        self.mant < other.mant
    }

    pub fn to_f64(&self) -> f64 {
        use num::ToPrimitive;
        let r = Rational::from_big(self.mant.clone(), BigInt::one() << self.scale());
        r.inner().to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering with the given number of fractional digits,
    /// truncated toward zero.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        let neg = self.mant.is_negative();
        let a = self.mant.abs();
        let scaled: BigInt = (&a * BigInt::from(10u32).pow(digits)) >> self.scale();
        let s = scaled.to_string();
        let s = if s.len() <= digits as usize {
            format!("{}{}", "0".repeat(digits as usize + 1 - s.len()), s)
        } else {
            s
        };
        let split = s.len() - digits as usize;
        format!("{}{}.{}", if neg { "-" } else { "" }, &s[..split], &s[split..])
    }

    /// pi at this precision, memoized per scale.
    pub fn pi(precision: u32) -> Self {
        static PI_CACHE: LazyLock<Mutex<HashMap<u32, BigInt>>> =
            LazyLock::new(|| Mutex::new(HashMap::new()));
        let mut cache = PI_CACHE.lock().unwrap();
        let mant = cache
            .entry(precision)
            .or_insert_with(|| pi_mantissa(precision + GUARD_BITS))
            .clone();
        BigFloat { mant, precision }
    }

    /// (cos, sin) of 2*pi*t for rational t, via quarter-period reduction and
    /// Taylor series on [0, pi/2).
    pub fn sincos_two_pi(t: &Rational, precision: u32) -> (Self, Self) {
        let s2 = precision + GUARD_BITS + 32;
        let t = t.fract_nonneg();
        let four_t = &t * &Rational::from_int(4);
        let quadrant: u8 = {
            use num::ToPrimitive;
            four_t.floor_int().to_u8().unwrap()
        };
        let f = &t - &Rational::new(quadrant as i64, 4);

        // x = 2 pi f in [0, pi/2)
        let pi2 = pi_mantissa(s2) << 1usize;
        let x = (&pi2 * f.numer()) / f.denom();
        let xx = (&x * &x) >> s2;

        let one = BigInt::one() << s2;
        let mut sin = x.clone();
        let mut cos = one.clone();
        let mut term_s = x;
        let mut term_c = one;
        let mut n: i64 = 0;
        loop {
            // next terms: multiply by -x^2 / ((n+1)(n+2)) and ((n+2)(n+3))
            term_c = -((&term_c * &xx) >> s2) / BigInt::from((n + 1) * (n + 2));
            term_s = -((&term_s * &xx) >> s2) / BigInt::from((n + 2) * (n + 3));
            cos += &term_c;
            sin += &term_s;
            n += 2;
            if term_c.abs() <= BigInt::one() && term_s.abs() <= BigInt::one() {
                break;
            }
        }
        let down = |m: BigInt| BigFloat { mant: m >> 32, precision };
        match quadrant {
            0 => (down(cos), down(sin)),
            1 => (down(-sin), down(cos)),
            2 => (down(-cos), down(-sin)),
            _ => (down(sin), down(-cos)),
        }
    }
}

/// Machin's formula, pi = 16 atan(1/5) - 4 atan(1/239), in fixed point.
fn pi_mantissa(scale: u32) -> BigInt {
    let s2 = scale + 32;
    let atan_inv = |x: i64| -> BigInt {
        let xx = BigInt::from(x * x);
        let mut power = (BigInt::one() << s2) / BigInt::from(x);
        let mut sum = power.clone();
        let mut k: i64 = 1;
        loop {
            power = &power / &xx;
            if power.is_zero() {
                break;
            }
            let term = &power / BigInt::from(2 * k + 1);
            if k % 2 == 1 {
                sum -= &term;
            } else {
                sum += &term;
            }
            if term.is_zero() {
                break;
            }
            k += 1;
        }
        sum
    };
    let pi = atan_inv(5) * BigInt::from(16) - atan_inv(239) * BigInt::from(4);
    pi >> 32
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigFloat({}, prec {})", self.to_f64(), self.precision)
    }
}

/// Complex number over `BigFloat`, componentwise fixed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn zero(precision: u32) -> Self {
        BigComplex {
            re: BigFloat::zero(precision),
            im: BigFloat::zero(precision),
        }
    }

    pub fn one(precision: u32) -> Self {
        BigComplex {
            re: BigFloat::from_int(1, precision),
            im: BigFloat::zero(precision),
        }
    }

    pub fn precision(&self) -> u32 {
        self.re.precision()
    }

    pub fn from_rational(q: &Rational, precision: u32) -> Self {
        BigComplex {
            re: BigFloat::from_rational(q, precision),
            im: BigFloat::zero(precision),
        }
    }

    /// exp(2 pi i k / n)
    pub fn root_of_unity(k: i64, n: i64, precision: u32) -> Self {
        let (cos, sin) = BigFloat::sincos_two_pi(&Rational::new(k, n), precision);
        BigComplex { re: cos, im: sin }
    }

    pub fn add(&self, other: &Self) -> Self {
        BigComplex {
            re: self.re.add(&other.re),
            im: self.im.add(&other.im),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        BigComplex {
            re: self.re.sub(&other.re),
            im: self.im.sub(&other.im),
        }
    }

    pub fn neg(&self) -> Self {
        BigComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        BigComplex {
            re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        let den = other.re.mul(&other.re).add(&other.im.mul(&other.im));
        BigComplex {
            re: self.re.mul(&other.re).add(&self.im.mul(&other.im)).div(&den),
            im: self.im.mul(&other.re).sub(&self.re.mul(&other.im)).div(&den),
        }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        BigComplex {
            re: self.re.scale_rational(q),
            im: self.im.scale_rational(q),
        }
    }

    pub fn powu(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = BigComplex::one(self.precision());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn modulus_squared(&self) -> BigFloat {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }
}
