//! Coefficient rings.
//!
//! Two implementations of [`Scalar`] exist: [`Q`] (exact rationals backed by
//! GMP) and [`C`] (complex numbers with a configurable MPFR mantissa). A
//! computation is generic over the ring, so the two modes cannot be mixed.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::{Assign, Float, Integer, Rational};

/// Default mantissa precision of the numeric ring.
pub const DEFAULT_PRECISION: u32 = 256;

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    /// Construction context (nothing for rationals, the precision for floats).
    type Ctx: Clone + fmt::Debug + PartialEq + Send + Sync;

    /// `true` for the exact ring.
    const EXACT: bool;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_i64(v: i64, ctx: &Self::Ctx) -> Self;
    fn from_rational(r: &Rational, ctx: &Self::Ctx) -> Self;

    fn is_zero(&self) -> bool;
    fn recip(&self) -> Option<Self>;
    /// Modulus, as a double. Only used for tolerances and ordering heuristics.
    fn norm(&self) -> f64;
    /// `self += a * b`.
    fn add_mul(&mut self, a: &Self, b: &Self);

    /// Principal square root, when it exists in the ring.
    fn sqrt(&self) -> Option<Self>;
    /// Principal natural logarithm, when it exists in the ring.
    fn ln(&self) -> Option<Self>;
    /// `2πi`, when representable.
    fn two_pi_i(ctx: &Self::Ctx) -> Option<Self>;
    /// `√π`, when representable.
    fn sqrt_pi(ctx: &Self::Ctx) -> Option<Self>;
    /// The imaginary unit, when representable.
    fn imag_unit(ctx: &Self::Ctx) -> Option<Self>;

    /// Exact value, if the ring is exact.
    fn to_rational(&self) -> Option<Rational>;
    /// `(re, im)` as doubles.
    fn to_f64_pair(&self) -> (f64, f64);

    /// Absolute tolerance unit: zero in exact mode, `2^(-P/2)` at `P` bits.
    fn tolerance(ctx: &Self::Ctx) -> f64;

    /// Decimal rendering for JSON: `"p/q"` or `"re+imi"`.
    fn render(&self) -> String;

    /// Mantissa bits used for floating-point work in this ring.
    fn bits(ctx: &Self::Ctx) -> u32;
    /// Embedding into the complex numbers at `prec` bits.
    fn to_complex(&self, prec: u32) -> C;
    /// Back from the complex numbers, when the ring admits it.
    fn from_complex(c: &C, ctx: &Self::Ctx) -> Option<Self>;

    fn from_ratio(num: i64, den: i64, ctx: &Self::Ctx) -> Self {
        Self::from_rational(&Rational::from((num, den)), ctx)
    }

    fn is_one(&self) -> bool {
        let one = Self::one(&self.ctx());
        *self == one
    }

    /// Zero in exact mode; `|self| <= tol * max(scale, 1)` in numeric mode.
    fn is_negligible(&self, scale: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.norm() <= Self::tolerance(&self.ctx()) * scale.max(1.0)
        }
    }

    fn approx_eq(&self, other: &Self, scale: f64) -> bool {
        (self.clone() - other).is_negligible(scale)
    }

    fn pow_i64(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = Self::one(&self.ctx());
        let mut b = base;
        let mut e = e.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc *= &b;
            }
            let sq = b.clone() * &b;
            b = sq;
            e >>= 1;
        }
        Some(acc)
    }
}

// ---------------------------------------------------------------------------
// Exact rationals

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Q(pub Rational);

impl Q {
    pub fn new(num: i64, den: i64) -> Self {
        Q(Rational::from((num, den)))
    }

    pub fn inner(&self) -> &Rational {
        &self.0
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

macro_rules! forward_ops {
    ($ty:ident, $($tr:ident $m:ident $atr:ident $am:ident),*) => {$(
        impl $tr for $ty {
            type Output = $ty;
            fn $m(mut self, rhs: $ty) -> $ty {
                $atr::$am(&mut self, &rhs);
                self
            }
        }
        impl<'a> $tr<&'a $ty> for $ty {
            type Output = $ty;
            fn $m(mut self, rhs: &'a $ty) -> $ty {
                $atr::$am(&mut self, rhs);
                self
            }
        }
    )*};
}

forward_ops!(Q, Add add AddAssign add_assign, Sub sub SubAssign sub_assign, Mul mul MulAssign mul_assign);

impl<'a> AddAssign<&'a Q> for Q {
    fn add_assign(&mut self, rhs: &'a Q) {
        self.0 += &rhs.0;
    }
}

impl<'a> SubAssign<&'a Q> for Q {
    fn sub_assign(&mut self, rhs: &'a Q) {
        self.0 -= &rhs.0;
    }
}

impl<'a> MulAssign<&'a Q> for Q {
    fn mul_assign(&mut self, rhs: &'a Q) {
        self.0 *= &rhs.0;
    }
}

impl Div for Q {
    type Output = Q;
    fn div(self, rhs: Q) -> Q {
        Q(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Q> for Q {
    type Output = Q;
    fn div(self, rhs: &'a Q) -> Q {
        Q(self.0 / &rhs.0)
    }
}

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        Q(-self.0)
    }
}

impl Scalar for Q {
    type Ctx = ();
    const EXACT: bool = true;

    fn ctx(&self) {}

    fn zero(_: &()) -> Self {
        Q(Rational::new())
    }

    fn one(_: &()) -> Self {
        Q(Rational::from(1))
    }

    fn from_i64(v: i64, _: &()) -> Self {
        Q(Rational::from(v))
    }

    fn from_rational(r: &Rational, _: &()) -> Self {
        Q(r.clone())
    }

    fn is_zero(&self) -> bool {
        self.0.cmp0() == Ordering::Equal
    }

    fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Q(self.0.clone().recip()))
        }
    }

    fn norm(&self) -> f64 {
        self.0.to_f64().abs()
    }

    fn add_mul(&mut self, a: &Self, b: &Self) {
        let mut t = a.0.clone();
        t *= &b.0;
        self.0 += t;
    }

    fn sqrt(&self) -> Option<Self> {
        if self.0.cmp0() == Ordering::Less {
            return None;
        }
        let (n, d) = (self.0.numer(), self.0.denom());
        if n.is_perfect_square() && d.is_perfect_square() {
            Some(Q(Rational::from((n.clone().sqrt(), d.clone().sqrt()))))
        } else {
            None
        }
    }

    fn ln(&self) -> Option<Self> {
        if self.0 == 1 {
            Some(Q(Rational::new()))
        } else {
            None
        }
    }

    fn two_pi_i(_: &()) -> Option<Self> {
        None
    }

    fn sqrt_pi(_: &()) -> Option<Self> {
        None
    }

    fn imag_unit(_: &()) -> Option<Self> {
        None
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.0.clone())
    }

    fn to_f64_pair(&self) -> (f64, f64) {
        (self.0.to_f64(), 0.0)
    }

    fn tolerance(_: &()) -> f64 {
        0.0
    }

    fn render(&self) -> String {
        self.0.to_string()
    }

    fn bits(_: &()) -> u32 {
        DEFAULT_PRECISION
    }

    fn to_complex(&self, prec: u32) -> C {
        C {
            re: float_from_rational(&self.0, prec),
            im: Float::new(prec),
        }
    }

    fn from_complex(_: &C, _: &()) -> Option<Self> {
        None
    }
}

// ---------------------------------------------------------------------------
// Multi-precision complex numbers

/// Working precision in bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Prec(pub u32);

impl Default for Prec {
    fn default() -> Self {
        Prec(DEFAULT_PRECISION)
    }
}

/// A complex number with MPFR real and imaginary parts of equal precision.
#[derive(Clone, Debug)]
pub struct C {
    pub re: Float,
    pub im: Float,
}

impl C {
    pub fn new(re: Float, im: Float) -> Self {
        C { re, im }
    }

    pub fn from_f64(re: f64, im: f64, prec: Prec) -> Self {
        C {
            re: Float::with_val(prec.0, re),
            im: Float::with_val(prec.0, im),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn conj(&self) -> Self {
        C {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn abs_float(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }

    pub fn arg_float(&self) -> Float {
        self.im.clone().atan2(&self.re)
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let m = self.re.clone().exp();
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        C {
            re: Float::with_val(p, &m * &c),
            im: Float::with_val(p, &m * &s),
        }
    }
}

impl PartialEq for C {
    fn eq(&self, other: &Self) -> bool {
        self.re == other.re && self.im == other.im
    }
}

impl fmt::Display for C {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

forward_ops!(C, Add add AddAssign add_assign, Sub sub SubAssign sub_assign, Mul mul MulAssign mul_assign);

impl<'a> AddAssign<&'a C> for C {
    fn add_assign(&mut self, rhs: &'a C) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl<'a> SubAssign<&'a C> for C {
    fn sub_assign(&mut self, rhs: &'a C) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl<'a> MulAssign<&'a C> for C {
    fn mul_assign(&mut self, rhs: &'a C) {
        let p = self.prec();
        let re = Float::with_val(p, &self.re * &rhs.re - &self.im * &rhs.im);
        let im = Float::with_val(p, &self.re * &rhs.im + &self.im * &rhs.re);
        self.re = re;
        self.im = im;
    }
}

impl<'a> Div<&'a C> for C {
    type Output = C;
    fn div(self, rhs: &'a C) -> C {
        let inv = rhs.recip().expect("division by zero");
        self * &inv
    }
}

impl Div for C {
    type Output = C;
    fn div(self, rhs: C) -> C {
        self / &rhs
    }
}

impl Neg for C {
    type Output = C;
    fn neg(self) -> C {
        C {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Scalar for C {
    type Ctx = Prec;
    const EXACT: bool = false;

    fn ctx(&self) -> Prec {
        Prec(self.prec())
    }

    fn zero(ctx: &Prec) -> Self {
        C {
            re: Float::new(ctx.0),
            im: Float::new(ctx.0),
        }
    }

    fn one(ctx: &Prec) -> Self {
        C {
            re: Float::with_val(ctx.0, 1),
            im: Float::new(ctx.0),
        }
    }

    fn from_i64(v: i64, ctx: &Prec) -> Self {
        C {
            re: Float::with_val(ctx.0, v),
            im: Float::new(ctx.0),
        }
    }

    fn from_rational(r: &Rational, ctx: &Prec) -> Self {
        C {
            re: Float::with_val(ctx.0, r),
            im: Float::new(ctx.0),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let p = self.prec();
        let den = Float::with_val(p, &self.re * &self.re + &self.im * &self.im);
        Some(C {
            re: Float::with_val(p, &self.re / &den),
            im: -Float::with_val(p, &self.im / &den),
        })
    }

    fn norm(&self) -> f64 {
        self.abs_float().to_f64()
    }

    fn add_mul(&mut self, a: &Self, b: &Self) {
        self.re += &a.re * &b.re;
        self.re -= &a.im * &b.im;
        self.im += &a.re * &b.im;
        self.im += &a.im * &b.re;
    }

    fn sqrt(&self) -> Option<Self> {
        let p = self.prec();
        if self.is_zero() {
            return Some(self.clone());
        }
        // sqrt(z) = sqrt((|z| + re)/2) + i sign(im) sqrt((|z| - re)/2)
        let r = self.abs_float();
        let a = Float::with_val(p, &r + &self.re) / 2u32;
        let b = Float::with_val(p, &r - &self.re) / 2u32;
        let re = a.sqrt();
        let mut im = b.sqrt();
        if self.im.is_sign_negative() {
            im = -im;
        }
        Some(C { re, im })
    }

    fn ln(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(C {
            re: self.abs_float().ln(),
            im: self.arg_float(),
        })
    }

    fn two_pi_i(ctx: &Prec) -> Option<Self> {
        let pi = Float::with_val(ctx.0, Constant::Pi);
        Some(C {
            re: Float::new(ctx.0),
            im: pi * 2u32,
        })
    }

    fn sqrt_pi(ctx: &Prec) -> Option<Self> {
        let pi = Float::with_val(ctx.0, Constant::Pi);
        Some(C {
            re: pi.sqrt(),
            im: Float::new(ctx.0),
        })
    }

    fn imag_unit(ctx: &Prec) -> Option<Self> {
        Some(C {
            re: Float::new(ctx.0),
            im: Float::with_val(ctx.0, 1),
        })
    }

    fn to_rational(&self) -> Option<Rational> {
        None
    }

    fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    fn tolerance(ctx: &Prec) -> f64 {
        2f64.powi(-(ctx.0 as i32) / 2)
    }

    fn render(&self) -> String {
        // Digits carried by the mantissa, roughly P·log10(2).
        let digits = ((self.prec() as f64) * std::f64::consts::LOG10_2).ceil() as usize;
        let re = render_float(&self.re, digits);
        if self.im.is_zero() {
            return re;
        }
        let im = render_float(&self.im, digits);
        if im.starts_with('-') {
            format!("{re}{im}i")
        } else {
            format!("{re}+{im}i")
        }
    }

    fn bits(ctx: &Prec) -> u32 {
        ctx.0
    }

    fn to_complex(&self, prec: u32) -> C {
        C {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }

    fn from_complex(c: &C, ctx: &Prec) -> Option<Self> {
        Some(c.to_complex(ctx.0))
    }
}

fn render_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits))
}

/// Parse a decimal or `p/q` literal into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: Integer = n.trim().parse().ok()?;
        let d: Integer = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(Rational::from((n, d)));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut r = Rational::from(digits.parse::<Integer>().ok()?);
    let shift = exp - frac_part.len() as i32;
    let ten = Rational::from(10);
    let mut scale = Rational::from(1);
    for _ in 0..shift.unsigned_abs() {
        scale *= &ten;
    }
    if shift >= 0 {
        r *= scale;
    } else {
        r /= scale;
    }
    if neg {
        r = -r;
    }
    Some(r)
}

/// Round a float to the nearest rational with the given denominator.
pub fn nearest_with_denominator(x: &Float, den: &Integer) -> Rational {
    let mut scaled = Float::with_val(x.prec(), x * den);
    scaled.round_mut();
    let n = scaled.to_integer().unwrap_or_default();
    Rational::from((n, den.clone()))
}

pub(crate) fn float_from_rational(r: &Rational, prec: u32) -> Float {
    let mut f = Float::new(prec);
    f.assign(r);
    f
}
